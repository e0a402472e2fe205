use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use ehba::gamekit::classify_no_conflict;
use ehba::harness::{
    emit_plot_data_from_trace, read_baselines_csv, read_config_file, read_plays_csv, read_trace_csv,
    run_experiment, summarize, write_csv, ExperimentConfig, GameSelection, PlaySetup, SummaryRow,
};

#[derive(Parser)]
#[command(name = "ehba", version, about = "Repeated 2x2 game experiments with E-HBA wrapped expert algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the 78-game ordinal benchmark as CSV.
    Games {
        #[arg(long, default_value = "all")]
        games: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate expert and type sets as JSON lines, one per (game, seed).
    Generate {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Run an experiment and write its CSV files.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Rebuild running-average curves from a traced run.
    PlotData {
        /// Directory of a run made with --trace.
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the comparison table of a finished run.
    Report {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct ExperimentArgs {
    /// Flat key = value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    profile: Option<String>,
    /// all, conflict, no-conflict, spread:N or a list of labels.
    #[arg(long)]
    games: Option<String>,
    /// lft, cdt or cnn.
    #[arg(long)]
    generator: Option<String>,
    /// Comma list of UCB1, EEE, S, Hedge, Exp3, or all.
    #[arg(long)]
    algos: Option<String>,
    /// on, off or both.
    #[arg(long)]
    wrapped: Option<String>,
    /// type, fp or both.
    #[arg(long)]
    opponent: Option<String>,
    /// yes, no or both.
    #[arg(long)]
    include_true: Option<String>,
    /// `a..b` or a comma list.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    rounds: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    /// average, total or auto.
    #[arg(long)]
    payoff_mode: Option<String>,
    #[arg(long)]
    booster: Option<String>,
    /// Also write the per-round trace.
    #[arg(long)]
    trace: bool,
    /// Extra key=value settings.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> anyhow::Result<ExperimentConfig> {
        let mut pairs: Vec<(String, String)> = match &self.config {
            Some(p) => read_config_file(p).with_context(|| format!("reading {}", p.display()))?,
            None => Vec::new(),
        };
        let flags = [
            ("profile", &self.profile),
            ("games", &self.games),
            ("generator", &self.generator),
            ("algos", &self.algos),
            ("wrapped", &self.wrapped),
            ("opponent", &self.opponent),
            ("include_true", &self.include_true),
            ("seeds", &self.seeds),
            ("rounds", &self.rounds),
            ("horizon", &self.horizon),
            ("payoff_mode", &self.payoff_mode),
            ("booster", &self.booster),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                pairs.push((k.to_string(), v.clone()));
            }
        }
        if self.trace {
            pairs.push(("trace".into(), "true".into()));
        }
        for s in &self.set {
            let Some((k, v)) = s.split_once('=') else { bail!("--set expects KEY=VALUE, got '{s}'") };
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(ExperimentConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?)
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn games(selection: &str, out: Option<&Path>) -> anyhow::Result<()> {
    let games = selection.parse::<GameSelection>()?.resolve()?;
    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record(["label", "no_conflict", "i_cc", "i_cd", "i_dc", "i_dd", "j_cc", "j_cd", "j_dc", "j_dd"])?;
    let mut no_conflict = 0;
    for g in &games {
        let nc = classify_no_conflict(g)?;
        no_conflict += usize::from(nc);
        let mut rec = vec![g.label.clone(), nc.to_string()];
        rec.extend(g.flatten().iter().map(|x| x.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    eprintln!("{} games: {} no-conflict, {} conflict", games.len(), no_conflict, games.len() - no_conflict);
    Ok(())
}

fn generate(exp: &ExperimentArgs) -> anyhow::Result<()> {
    let cfg = exp.config()?;
    let mut w = output(exp.out.as_deref())?;
    for game in cfg.games.resolve()? {
        for &opponent in &cfg.opponents {
            for &include_true in &cfg.include_true {
                for &seed in &cfg.seeds {
                    let s = PlaySetup::generate(&cfg, &game, seed, opponent, include_true)?;
                    let line = serde_json::json!({
                        "game": s.game.label,
                        "seed": seed,
                        "opponent": opponent.to_string(),
                        "include_true": include_true,
                        "experts": s.experts.policies(),
                        "types": s.types.policies(),
                        "opponent_policy": s.opponent,
                    });
                    writeln!(w, "{line}")?;
                }
            }
        }
    }
    Ok(())
}

fn print_summary(rows: &[SummaryRow]) {
    println!(
        "{:<5} {:<8} {:<6} {:<6} {:>4} {:>8} {:>8} {:>8} {:>8} {:>9} {:>8}",
        "opp", "true", "algo", "mode", "n", "mean", "plain", "best", "HBA", "p(t)", "p(sign)"
    );
    let f = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
    for r in rows {
        println!(
            "{:<5} {:<8} {:<6} {:<6} {:>4} {:>8.4} {:>8} {:>8} {:>8} {:>9} {:>8}",
            r.opponent,
            if r.include_true { "in" } else { "out" },
            r.algorithm,
            if r.wrapped { "ehba" } else { "plain" },
            r.n,
            r.mean_payoff,
            f(r.plain_mean),
            f(r.best_expert_mean),
            f(r.hba_mean),
            f(r.p_value),
            f(r.sign_p),
        );
    }
}

fn run(exp: &ExperimentArgs) -> anyhow::Result<bool> {
    let cfg = exp.config()?;
    let out = exp.out.clone().unwrap_or_else(|| PathBuf::from("results"));
    std::fs::create_dir_all(&out)?;
    let text: String = cfg.to_pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    std::fs::write(out.join("config.txt"), text)?;
    let outcome = run_experiment(&cfg, Some(&out))?;
    print_summary(&outcome.summary);
    if outcome.failures > 0 {
        for p in outcome.plays.iter().filter(|p| p.status != "ok") {
            eprintln!("{} seed {} {}: {}", p.game, p.seed, p.algorithm, p.status);
        }
        eprintln!("{} plays failed", outcome.failures);
    }
    eprintln!("results written to {}", out.display());
    Ok(outcome.failures == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Games { games: sel, out } => games(sel, out.as_deref()).map(|_| true),
        Command::Generate { exp } => generate(exp).map(|_| true),
        Command::Run { exp } => run(exp),
        Command::PlotData { from, out } => (|| {
            let rows = read_trace_csv(&from.join("trace.csv")).context("plot-data needs a run made with --trace")?;
            let curves = emit_plot_data_from_trace(&rows);
            write_csv(&out.clone().unwrap_or_else(|| from.join("curves.csv")), &curves)?;
            Ok(true)
        })(),
        Command::Report { from, out } => (|| {
            let plays = read_plays_csv(&from.join("plays.csv"))?;
            let baselines = read_baselines_csv(&from.join("baselines.csv")).unwrap_or_default();
            let rows = summarize(&plays, &baselines)?;
            print_summary(&rows);
            if let Some(o) = out {
                write_csv(o, &rows)?;
            }
            Ok(plays.iter().all(|p| p.status == "ok"))
        })(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
