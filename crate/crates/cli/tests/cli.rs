use std::path::Path;
use std::process::{Command, Output};

fn ehba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehba")).args(args).output().unwrap()
}

fn small_run(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "run", "--games", "RG-03,RG-40", "--seeds", "0..2", "--rounds", "40", "--algos", "UCB1,Hedge", "--out",
    ];
    args.push(dir.to_str().unwrap());
    args.extend_from_slice(extra);
    ehba(&args)
}

#[test]
fn games_writes_the_benchmark() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("games.csv");
    let out = ehba(&["games", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "label,no_conflict,i_cc,i_cd,i_dc,i_dd,j_cc,j_cd,j_dc,j_dd");
    assert_eq!(lines.count(), 78);
    assert!(String::from_utf8_lossy(&out.stderr).contains("21 no-conflict"));
    let nc = ehba(&["games", "--games", "no-conflict"]);
    assert_eq!(String::from_utf8_lossy(&nc.stdout).lines().count(), 22);
}

#[test]
fn generate_emits_one_json_line_per_cell() {
    let out = ehba(&["generate", "--games", "RG-01,RG-02", "--seeds", "0..3", "--include-true", "yes"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0]["experts"].as_array().unwrap().len(), 5);
    assert_eq!(lines[0]["types"].as_array().unwrap().len(), 5);
}

#[test]
fn run_report_and_plot_data_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = small_run(dir.path(), &["--trace"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["config.txt", "plays.csv", "summary.csv", "baselines.csv", "curves.csv", "trace.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let plays = std::fs::read_to_string(dir.path().join("plays.csv")).unwrap();
    assert_eq!(plays.lines().count(), 1 + 2 * 2 * 2 * 2 * 2);

    let report = dir.path().join("again.csv");
    let r = ehba(&["report", "--from", dir.path().to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert!(r.status.success());
    assert_eq!(std::fs::read(report).unwrap(), std::fs::read(dir.path().join("summary.csv")).unwrap());

    let curves = dir.path().join("curves-from-trace.csv");
    let p = ehba(&["plot-data", "--from", dir.path().to_str().unwrap(), "--out", curves.to_str().unwrap()]);
    assert!(p.status.success());
    let a = std::fs::read_to_string(curves).unwrap();
    let b = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert_eq!(a.lines().count(), b.lines().count());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "# small\nrounds = 15\nhorizon = 2\nalgos = S\nbaselines = false\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = ehba(&[
        "run", "--config", cfg.to_str().unwrap(), "--games", "spread:2", "--seeds", "5", "--rounds", "25",
        "--wrapped", "on", "--out", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(out_dir.join("config.txt")).unwrap();
    assert!(written.contains("rounds = 25"));
    assert!(written.contains("horizon = 2"));
    let plays = std::fs::read_to_string(out_dir.join("plays.csv")).unwrap();
    assert_eq!(plays.lines().count(), 1 + 2 * 2);
    assert!(plays.lines().skip(1).all(|l| l.contains(",S,true,25,")));
}

#[test]
fn bad_input_is_an_error() {
    let out = ehba(&["run", "--rounds", "0", "--out", "/tmp/unused-ehba-run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rounds"));
    let out = ehba(&["run", "--wrapped", "sometimes"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ehba(&["games", "--games", "RG-99"]);
    assert_eq!(out.status.code(), Some(2));
}
