use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use rayon::prelude::*;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::config::{ExperimentConfig, OpponentMode};
use super::play::{run_play, Controller, PlayRecord, PlaySetup};
use super::stats::{mean, paired_t_test, sign_test_greater, std_error};
use crate::error::Result;
use crate::gamekit::Game;

/// One line of `plays.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaySummary {
    pub game: String,
    pub seed: u64,
    pub opponent: String,
    pub include_true: bool,
    pub algorithm: String,
    pub wrapped: bool,
    pub rounds: usize,
    pub mean_payoff: Option<f64>,
    pub status: String,
}

/// One line of `baselines.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub game: String,
    pub seed: u64,
    pub opponent: String,
    pub include_true: bool,
    pub best_expert_mean: Option<f64>,
    pub best_expert: Option<usize>,
    pub hba_mean: Option<f64>,
}

/// One line of `summary.csv`: an (opponent, true-type, algorithm, wrapped)
/// condition aggregated over successful plays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub opponent: String,
    pub include_true: bool,
    pub algorithm: String,
    pub wrapped: bool,
    pub n: usize,
    pub mean_payoff: f64,
    pub std_error: f64,
    pub best_expert_mean: Option<f64>,
    pub hba_mean: Option<f64>,
    /// Mean of the plain counterpart over the same pairs.
    pub plain_mean: Option<f64>,
    pub t_stat: Option<f64>,
    pub p_value: Option<f64>,
    /// One-sided sign test that this condition beats its plain counterpart.
    pub sign_p: Option<f64>,
    /// Per-play means, `;`-separated, in (game, seed) order.
    pub payoffs: String,
}

/// One line of `curves.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub round: usize,
    pub condition: String,
    pub mean: f64,
    pub stderr: f64,
}

/// One line of `trace.csv`. Vectors are `;`-separated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub game: String,
    pub seed: u64,
    pub opponent: String,
    pub include_true: bool,
    pub algorithm: String,
    pub wrapped: bool,
    pub t: usize,
    pub expert: Option<usize>,
    pub action_i: usize,
    pub action_j: usize,
    pub payoff: f64,
    pub confidence: Option<f64>,
    pub posterior: String,
    pub observed: String,
    pub predicted: String,
    pub mixed: String,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentOutcome {
    pub plays: Vec<PlaySummary>,
    pub baselines: Vec<BaselineRow>,
    pub summary: Vec<SummaryRow>,
    pub curves: Vec<CurvePoint>,
    pub failures: usize,
}

/// Curve label, e.g. `type/true-in/UCB1/ehba` or `fp/true-out/HBA`.
pub fn condition_key(opponent: &str, include_true: bool, algorithm: &str, wrapped: Option<bool>) -> String {
    let inc = if include_true { "true-in" } else { "true-out" };
    match wrapped {
        Some(w) => format!("{opponent}/{inc}/{algorithm}/{}", if w { "ehba" } else { "plain" }),
        None => format!("{opponent}/{inc}/{algorithm}"),
    }
}

fn record_key(r: &PlayRecord) -> String {
    let op = r.opponent.to_string();
    match r.controller {
        Controller::Algorithm { kind, wrapped } => condition_key(&op, r.include_true, kind.name(), Some(wrapped)),
        Controller::Expert(_) => condition_key(&op, r.include_true, "best-expert", None),
        Controller::Hba => condition_key(&op, r.include_true, "HBA", None),
    }
}

/// Running mean and spread of the cumulative-average payoff at every round,
/// per condition, across plays.
#[derive(Clone, Debug, Default)]
pub struct CurveAccumulator {
    curves: BTreeMap<String, (usize, Vec<f64>, Vec<f64>)>,
    order: Vec<String>,
}

impl CurveAccumulator {
    pub fn add(&mut self, condition: &str, payoffs: &[f64]) {
        if !self.curves.contains_key(condition) {
            self.order.push(condition.to_string());
        }
        let (n, m, m2) = self.curves.entry(condition.to_string()).or_insert_with(|| (0, Vec::new(), Vec::new()));
        if m.len() < payoffs.len() {
            m.resize(payoffs.len(), 0.0);
            m2.resize(payoffs.len(), 0.0);
        }
        *n += 1;
        let k = *n as f64;
        let mut cum = 0.0;
        for (t, p) in payoffs.iter().enumerate() {
            cum += p;
            let x = cum / (t + 1) as f64;
            let delta = x - m[t];
            m[t] += delta / k;
            m2[t] += delta * (x - m[t]);
        }
    }

    pub fn finish(&self) -> Vec<CurvePoint> {
        let mut out = Vec::new();
        for c in &self.order {
            let (n, m, m2) = &self.curves[c];
            for t in 0..m.len() {
                let stderr = if *n < 2 { 0.0 } else { (m2[t] / (*n - 1) as f64).sqrt() / (*n as f64).sqrt() };
                out.push(CurvePoint { round: t + 1, condition: c.clone(), mean: m[t], stderr });
            }
        }
        out
    }
}

/// Per-round mean running-average payoff per condition, with standard errors.
pub fn emit_plot_data(records: &[PlayRecord]) -> Vec<CurvePoint> {
    let mut acc = CurveAccumulator::default();
    for r in records {
        acc.add(&record_key(r), &r.payoffs());
    }
    acc.finish()
}

/// Curves from a `trace.csv`: algorithm and HBA plays as they are, and per
/// cell only the expert play with the best mean.
pub fn emit_plot_data_from_trace(rows: &[TraceRow]) -> Vec<CurvePoint> {
    type PlayKey = (String, u64, String, bool, String, bool);
    let mut order: Vec<PlayKey> = Vec::new();
    let mut plays: BTreeMap<PlayKey, Vec<f64>> = BTreeMap::new();
    for r in rows {
        let key = (r.game.clone(), r.seed, r.opponent.clone(), r.include_true, r.algorithm.clone(), r.wrapped);
        if !plays.contains_key(&key) {
            order.push(key.clone());
        }
        plays.entry(key).or_default().push(r.payoff);
    }
    let mut acc = CurveAccumulator::default();
    let mut best: Vec<((String, u64, String, bool), f64, &Vec<f64>)> = Vec::new();
    for key in &order {
        let (game, seed, op, inc, alg, wrapped) = key;
        let p = &plays[key];
        if alg.starts_with("expert-") {
            let cell = (game.clone(), *seed, op.clone(), *inc);
            let m = mean(p);
            match best.iter_mut().find(|(c, _, _)| *c == cell) {
                Some(b) if m > b.1 => *b = (cell, m, p),
                Some(_) => {}
                None => best.push((cell, m, p)),
            }
        } else if alg == "HBA" {
            acc.add(&condition_key(op, *inc, alg, None), p);
        } else {
            acc.add(&condition_key(op, *inc, alg, Some(*wrapped)), p);
        }
    }
    for ((_, _, op, inc), _, p) in best {
        acc.add(&condition_key(&op, inc, "best-expert", None), p);
    }
    acc.finish()
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn trace_rows(r: &PlayRecord) -> Vec<TraceRow> {
    let (algorithm, wrapped) = (r.controller.name(), r.controller.wrapped());
    r.rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let d = r.trace.get(i);
            TraceRow {
                game: r.game.clone(),
                seed: r.seed,
                opponent: r.opponent.to_string(),
                include_true: r.include_true,
                algorithm: algorithm.clone(),
                wrapped,
                t: row.t,
                expert: row.expert,
                action_i: row.action_i,
                action_j: row.action_j,
                payoff: row.payoff,
                confidence: row.confidence,
                posterior: d.map_or(String::new(), |d| join(&d.posterior)),
                observed: d.map_or(String::new(), |d| join(&d.observed)),
                predicted: d.map_or(String::new(), |d| join(&d.predicted)),
                mixed: d.map_or(String::new(), |d| join(&d.mixed)),
            }
        })
        .collect()
}

struct Cell<'g> {
    game: &'g Game,
    seed: u64,
    opponent: OpponentMode,
    include_true: bool,
}

fn controllers(cfg: &ExperimentConfig, experts: usize) -> Vec<Controller> {
    let mut out = Vec::new();
    for &kind in &cfg.algorithms {
        for &wrapped in &cfg.wrapped {
            out.push(Controller::Algorithm { kind, wrapped });
        }
    }
    if cfg.baselines {
        out.push(Controller::Hba);
        out.extend((0..experts).map(Controller::Expert));
    }
    out
}

/// Runs the full factorial. Games are processed one at a time; within a game
/// all plays run in parallel and are merged in configuration order, so the
/// output does not depend on scheduling. When `out` is given the CSV files
/// (`plays.csv`, `baselines.csv`, `summary.csv`, `curves.csv` and, when
/// tracing, `trace.csv`) are written there.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let games = cfg.games.resolve()?;
    let mut trace_writer = match (out, cfg.trace) {
        (Some(dir), true) => {
            std::fs::create_dir_all(dir)?;
            Some(csv::Writer::from_path(dir.join("trace.csv"))?)
        }
        _ => None,
    };
    let mut outcome = ExperimentOutcome::default();
    let mut curves = CurveAccumulator::default();
    for &opponent in &cfg.opponents {
        for &include_true in &cfg.include_true {
            for name in algorithm_keys(cfg) {
                curves.order_hint(&opponent.to_string(), include_true, &name);
            }
        }
    }
    for game in &games {
        let mut cells = Vec::new();
        for &opponent in &cfg.opponents {
            for &include_true in &cfg.include_true {
                for &seed in &cfg.seeds {
                    cells.push(Cell { game, seed, opponent, include_true });
                }
            }
        }
        let setups: Vec<std::result::Result<PlaySetup, String>> = cells
            .par_iter()
            .map(|c| PlaySetup::generate(cfg, c.game, c.seed, c.opponent, c.include_true).map_err(|e| e.to_string()))
            .collect();
        let jobs: Vec<(usize, Controller)> = setups
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                let k = s.as_ref().map_or(crate::genpolicies::SET_SIZE, |s| s.experts.len());
                controllers(cfg, k).into_iter().map(move |c| (i, c))
            })
            .collect();
        let results: Vec<std::result::Result<PlayRecord, String>> = jobs
            .par_iter()
            .map(|(i, c)| match &setups[*i] {
                Ok(s) => run_play(cfg, s, *c).map_err(|e| e.to_string()),
                Err(e) => Err(format!("{} seed {}: {e}", cells[*i].game.label, cells[*i].seed)),
            })
            .collect();

        let mut best: BTreeMap<usize, (f64, usize, Vec<f64>)> = BTreeMap::new();
        let mut hba: BTreeMap<usize, f64> = BTreeMap::new();
        let mut failed_baseline = vec![false; cells.len()];
        for ((i, c), res) in jobs.iter().zip(&results) {
            let cell = &cells[*i];
            if let (Some(w), Ok(r)) = (trace_writer.as_mut(), res) {
                for row in trace_rows(r) {
                    w.serialize(row)?;
                }
            }
            match c {
                Controller::Algorithm { kind, wrapped } => {
                    let (mean_payoff, status) = match res {
                        Ok(r) => {
                            curves.add(&record_key(r), &r.payoffs());
                            (Some(r.mean_payoff), "ok".to_string())
                        }
                        Err(e) => {
                            outcome.failures += 1;
                            (None, format!("error: {e}"))
                        }
                    };
                    outcome.plays.push(PlaySummary {
                        game: cell.game.label.clone(),
                        seed: cell.seed,
                        opponent: cell.opponent.to_string(),
                        include_true: cell.include_true,
                        algorithm: kind.name().to_string(),
                        wrapped: *wrapped,
                        rounds: cfg.rounds,
                        mean_payoff,
                        status,
                    });
                }
                Controller::Hba => match res {
                    Ok(r) => {
                        curves.add(&record_key(r), &r.payoffs());
                        hba.insert(*i, r.mean_payoff);
                    }
                    Err(_) => failed_baseline[*i] = true,
                },
                Controller::Expert(k) => match res {
                    Ok(r) => {
                        if best.get(i).map_or(true, |(v, _, _)| r.mean_payoff > *v) {
                            best.insert(*i, (r.mean_payoff, *k, r.payoffs()));
                        }
                    }
                    Err(_) => failed_baseline[*i] = true,
                },
            }
        }
        if cfg.baselines {
            for (i, cell) in cells.iter().enumerate() {
                if failed_baseline[i] {
                    outcome.failures += 1;
                }
                let b = best.get(&i).filter(|_| !failed_baseline[i]);
                if let Some((_, _, p)) = b {
                    curves.add(&condition_key(&cell.opponent.to_string(), cell.include_true, "best-expert", None), p);
                }
                outcome.baselines.push(BaselineRow {
                    game: cell.game.label.clone(),
                    seed: cell.seed,
                    opponent: cell.opponent.to_string(),
                    include_true: cell.include_true,
                    best_expert_mean: b.map(|x| x.0),
                    best_expert: b.map(|x| x.1),
                    hba_mean: hba.get(&i).copied().filter(|_| !failed_baseline[i]),
                });
            }
        }
    }
    if let Some(mut w) = trace_writer {
        w.flush()?;
    }
    outcome.summary = summarize(&outcome.plays, &outcome.baselines)?;
    outcome.curves = curves.finish();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_csv(&dir.join("plays.csv"), &outcome.plays)?;
        write_csv(&dir.join("baselines.csv"), &outcome.baselines)?;
        write_csv(&dir.join("summary.csv"), &outcome.summary)?;
        write_csv(&dir.join("curves.csv"), &outcome.curves)?;
    }
    Ok(outcome)
}

fn algorithm_keys(cfg: &ExperimentConfig) -> Vec<(String, Option<bool>)> {
    let mut out: Vec<(String, Option<bool>)> = Vec::new();
    for k in &cfg.algorithms {
        for w in &cfg.wrapped {
            out.push((k.name().to_string(), Some(*w)));
        }
    }
    if cfg.baselines {
        out.push(("HBA".into(), None));
        out.push(("best-expert".into(), None));
    }
    out
}

impl CurveAccumulator {
    fn order_hint(&mut self, opponent: &str, include_true: bool, (name, wrapped): &(String, Option<bool>)) {
        let key = condition_key(opponent, include_true, name, *wrapped);
        if !self.curves.contains_key(&key) {
            self.curves.insert(key.clone(), (0, Vec::new(), Vec::new()));
            self.order.push(key);
        }
    }
}

/// Condition-level summary with paired comparisons against the plain runs.
pub fn summarize(plays: &[PlaySummary], baselines: &[BaselineRow]) -> Result<Vec<SummaryRow>> {
    type Cond = (String, bool, String, bool);
    let mut order: Vec<Cond> = Vec::new();
    let mut groups: BTreeMap<Cond, Vec<(String, u64, f64)>> = BTreeMap::new();
    for p in plays {
        let key = (p.opponent.clone(), p.include_true, p.algorithm.clone(), p.wrapped);
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        let g = groups.entry(key).or_default();
        if let (Some(m), "ok") = (p.mean_payoff, p.status.as_str()) {
            g.push((p.game.clone(), p.seed, m));
        }
    }
    let base_mean = |op: &str, inc: bool, f: &dyn Fn(&BaselineRow) -> Option<f64>| {
        let v: Vec<f64> = baselines.iter().filter(|b| b.opponent == op && b.include_true == inc).filter_map(f).collect();
        (!v.is_empty()).then(|| mean(&v))
    };
    let mut rows = Vec::new();
    for key in &order {
        let (op, inc, alg, wrapped) = key;
        let own = &groups[key];
        let vals: Vec<f64> = own.iter().map(|x| x.2).collect();
        let (mut plain_mean, mut t_stat, mut p_value, mut sign_p) = (None, None, None, None);
        if *wrapped {
            if let Some(plain) = groups.get(&(op.clone(), *inc, alg.clone(), false)) {
                let lookup: BTreeMap<(&str, u64), f64> = plain.iter().map(|(g, s, m)| ((g.as_str(), *s), *m)).collect();
                let (a, b): (Vec<f64>, Vec<f64>) = own
                    .iter()
                    .filter_map(|(g, s, m)| lookup.get(&(g.as_str(), *s)).map(|pm| (*m, *pm)))
                    .unzip();
                if !b.is_empty() {
                    plain_mean = Some(mean(&b));
                    sign_p = Some(sign_test_greater(&a, &b)?);
                }
                if a.len() >= 2 {
                    let t = paired_t_test(&a, &b)?;
                    t_stat = Some(t.t);
                    p_value = Some(t.p_value);
                }
            }
        }
        rows.push(SummaryRow {
            opponent: op.clone(),
            include_true: *inc,
            algorithm: alg.clone(),
            wrapped: *wrapped,
            n: vals.len(),
            mean_payoff: mean(&vals),
            std_error: std_error(&vals),
            best_expert_mean: base_mean(op, *inc, &|b| b.best_expert_mean),
            hba_mean: base_mean(op, *inc, &|b| b.hba_mean),
            plain_mean,
            t_stat,
            p_value,
            sign_p,
            payoffs: join(&vals),
        });
    }
    Ok(rows)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(File::open(path)?);
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

pub fn read_plays_csv(path: &Path) -> Result<Vec<PlaySummary>> {
    read_csv(path)
}

pub fn read_baselines_csv(path: &Path) -> Result<Vec<BaselineRow>> {
    read_csv(path)
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    read_csv(path)
}
