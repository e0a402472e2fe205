//! Experiment configuration: profiles, flat `key = value` files and overrides.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::beliefs::PayoffMode;
use crate::error::{Error, Result};
use crate::experts::{AlgorithmKind, AlgorithmParams};
use crate::gamekit::{classify_no_conflict, enumerate_rapoport_guyer, Game};
use crate::genpolicies::{EvolutionParams, Generator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GameSelection {
    All,
    Conflict,
    NoConflict,
    /// `n` games at evenly spaced positions of the sorted benchmark.
    Spread(usize),
    Labels(Vec<String>),
}

impl GameSelection {
    /// Selected benchmark games in ordinal form, in benchmark order.
    pub fn resolve(&self) -> Result<Vec<Game>> {
        let all = enumerate_rapoport_guyer();
        Ok(match self {
            GameSelection::All => all,
            GameSelection::Conflict | GameSelection::NoConflict => {
                let want = *self == GameSelection::NoConflict;
                let mut out = Vec::new();
                for g in all {
                    if classify_no_conflict(&g)? == want {
                        out.push(g);
                    }
                }
                out
            }
            GameSelection::Spread(n) => {
                if *n == 0 || *n > all.len() {
                    return Err(Error::config(format!("cannot spread {n} games over {}", all.len())));
                }
                (0..*n).map(|i| all[i * all.len() / n].clone()).collect()
            }
            GameSelection::Labels(labels) => {
                let mut out = Vec::new();
                for l in labels {
                    match all.iter().find(|g| g.label.eq_ignore_ascii_case(l)) {
                        Some(g) => out.push(g.clone()),
                        None => return Err(Error::config(format!("unknown game label '{l}'"))),
                    }
                }
                out
            }
        })
    }
}

impl fmt::Display for GameSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameSelection::All => f.write_str("all"),
            GameSelection::Conflict => f.write_str("conflict"),
            GameSelection::NoConflict => f.write_str("no-conflict"),
            GameSelection::Spread(n) => write!(f, "spread:{n}"),
            GameSelection::Labels(l) => f.write_str(&l.join(",")),
        }
    }
}

impl FromStr for GameSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s.to_ascii_lowercase().as_str() {
            "all" => GameSelection::All,
            "conflict" => GameSelection::Conflict,
            "no-conflict" | "noconflict" => GameSelection::NoConflict,
            l if l.starts_with("spread:") => GameSelection::Spread(parse_num(&l[7..], "games")?),
            _ => GameSelection::Labels(split_list(s).map(str::to_string).collect()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OpponentMode {
    /// The other player is the sampled true type.
    Type,
    /// The other player is a fictitious player.
    FictitiousPlay,
}

impl fmt::Display for OpponentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpponentMode::Type => "type",
            OpponentMode::FictitiousPlay => "fp",
        })
    }
}

impl FromStr for OpponentMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "type" => Ok(OpponentMode::Type),
            "fp" | "fictitious-play" => Ok(OpponentMode::FictitiousPlay),
            other => Err(Error::Parse(format!("unknown opponent mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Profile {
    Desk,
    Paper,
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "desk" => Ok(Profile::Desk),
            "paper" => Ok(Profile::Paper),
            other => Err(Error::Parse(format!("unknown profile '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub games: GameSelection,
    pub generator: Generator,
    pub algorithms: Vec<AlgorithmKind>,
    /// Which of plain (`false`) and wrapped (`true`) runs to make.
    pub wrapped: Vec<bool>,
    pub opponents: Vec<OpponentMode>,
    pub include_true: Vec<bool>,
    pub seeds: Vec<u64>,
    pub rounds: usize,
    pub horizon: usize,
    /// Payoff mode for prediction and mixing; each algorithm's own mode when unset.
    pub payoff_mode: Option<PayoffMode>,
    pub booster: f64,
    pub initial_confidence: f64,
    /// Debug switch pinning the mixing weight.
    pub confidence_override: Option<f64>,
    pub baselines: bool,
    pub trace: bool,
    pub algorithm_params: AlgorithmParams,
    pub evolution: EvolutionParams,
}

impl ExperimentConfig {
    pub fn profile(p: Profile) -> Self {
        match p {
            Profile::Desk => ExperimentConfig {
                games: GameSelection::Spread(10),
                generator: Generator::Lft,
                algorithms: AlgorithmKind::ALL.to_vec(),
                wrapped: vec![false, true],
                opponents: vec![OpponentMode::Type],
                include_true: vec![true, false],
                seeds: vec![0, 1, 2],
                rounds: 1000,
                horizon: 3,
                payoff_mode: None,
                booster: crate::ehba::DEFAULT_BOOSTER,
                initial_confidence: 1.0,
                confidence_override: None,
                baselines: true,
                trace: false,
                algorithm_params: AlgorithmParams::default(),
                evolution: EvolutionParams::default(),
            },
            Profile::Paper => ExperimentConfig {
                games: GameSelection::All,
                opponents: vec![OpponentMode::Type, OpponentMode::FictitiousPlay],
                seeds: (0..10).collect(),
                rounds: 5000,
                horizon: 5,
                ..ExperimentConfig::profile(Profile::Desk)
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::config("rounds must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(Error::config("horizon must be at least 1"));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("at least one seed is required"));
        }
        for (name, empty) in [
            ("algos", self.algorithms.is_empty()),
            ("wrapped", self.wrapped.is_empty()),
            ("opponent", self.opponents.is_empty()),
            ("include_true", self.include_true.is_empty()),
        ] {
            if empty {
                return Err(Error::config(format!("'{name}' selects nothing")));
            }
        }
        crate::ehba::MixConfig::new(PayoffMode::Total, self.booster)?;
        if !(0.0..=1.0).contains(&self.initial_confidence) {
            return Err(Error::config("initial confidence must lie in [0,1]"));
        }
        if let Some(c) = self.confidence_override {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::config("confidence override must lie in [0,1]"));
            }
        }
        self.evolution.validate(crate::genpolicies::SET_SIZE + 1)?;
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let p = &mut self.algorithm_params;
        let e = &mut self.evolution;
        match key.trim() {
            "games" => self.games = v.parse()?,
            "generator" => self.generator = v.parse()?,
            "algos" | "algorithms" => {
                self.algorithms = if v == "all" {
                    AlgorithmKind::ALL.to_vec()
                } else {
                    split_list(v).map(str::parse).collect::<Result<_>>()?
                }
            }
            "wrapped" => {
                let mut w = parse_both(v, "on", "off", "wrapped")?;
                w.sort();
                self.wrapped = w;
            }
            "opponent" => {
                self.opponents = if v == "both" {
                    vec![OpponentMode::Type, OpponentMode::FictitiousPlay]
                } else {
                    vec![v.parse()?]
                }
            }
            "include_true" | "include-true" => self.include_true = parse_both(v, "yes", "no", "include_true")?,
            "seeds" => self.seeds = parse_seeds(v)?,
            "rounds" => self.rounds = parse_num(v, key)?,
            "horizon" => self.horizon = parse_num(v, key)?,
            "payoff_mode" | "payoff-mode" => self.payoff_mode = if v == "auto" { None } else { Some(v.parse()?) },
            "booster" => self.booster = parse_num(v, key)?,
            "initial_confidence" => self.initial_confidence = parse_num(v, key)?,
            "confidence_override" => self.confidence_override = if v == "none" { None } else { Some(parse_num(v, key)?) },
            "baselines" => self.baselines = parse_bool(v, key)?,
            "trace" => self.trace = parse_bool(v, key)?,
            "ucb1.exploration" => p.ucb1.exploration = parse_num(v, key)?,
            "eee.phase_len" => p.eee.phase_len = parse_num(v, key)?,
            "eee.decay" => p.eee.decay = parse_num(v, key)?,
            "s.initial_aspiration" => p.s.initial_aspiration = parse_num(v, key)?,
            "s.persistence" => p.s.persistence = parse_num(v, key)?,
            "s.switch_rate" => p.s.switch_rate = parse_num(v, key)?,
            "hedge.eta" => p.hedge.eta = parse_num(v, key)?,
            "exp3.eta" => p.exp3.eta = parse_num(v, key)?,
            "exp3.gamma" => p.exp3.gamma = parse_num(v, key)?,
            "evolution.pool_size" => e.pool_size = parse_num(v, key)?,
            "evolution.generations" => e.generations = parse_num(v, key)?,
            "evolution.tournament" => e.tournament = parse_num(v, key)?,
            "evolution.mutation_rate" => e.mutation_rate = parse_num(v, key)?,
            "evolution.crossover_rate" => e.crossover_rate = parse_num(v, key)?,
            "evolution.diversity_weight" => e.diversity_weight = parse_num(v, key)?,
            "evolution.eval_rounds" => e.eval_rounds = parse_num(v, key)?,
            "evolution.opponents" => e.opponents = parse_num(v, key)?,
            "evolution.elites" => e.elites = parse_num(v, key)?,
            other => return Err(Error::config(format!("unknown setting '{other}'"))),
        }
        Ok(())
    }

    /// Builds a configuration from ordered settings. A `profile` entry picks
    /// the base (the last one wins, default desk); the rest apply in order.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = pairs.into_iter().collect();
        let profile = pairs
            .iter()
            .rev()
            .find(|(k, _)| k.trim() == "profile")
            .map(|(_, v)| v.parse())
            .transpose()?
            .unwrap_or(Profile::Desk);
        let mut cfg = ExperimentConfig::profile(profile);
        for (k, v) in pairs.iter().filter(|(k, _)| k.trim() != "profile") {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// The configuration as `key = value` lines that `from_pairs` reads back.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let p = &self.algorithm_params;
        let e = &self.evolution;
        let both = |v: &[bool], t: &str, f: &str| match v {
            [x] => (if *x { t } else { f }).to_string(),
            _ => "both".into(),
        };
        let mut out = vec![
            ("games", self.games.to_string()),
            ("generator", self.generator.to_string()),
            ("algos", self.algorithms.iter().map(|a| a.name()).collect::<Vec<_>>().join(",")),
            ("wrapped", both(&self.wrapped, "on", "off")),
            (
                "opponent",
                match self.opponents.as_slice() {
                    [o] => o.to_string(),
                    _ => "both".into(),
                },
            ),
            ("include_true", both(&self.include_true, "yes", "no")),
            ("seeds", self.seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
            ("rounds", self.rounds.to_string()),
            ("horizon", self.horizon.to_string()),
            ("payoff_mode", self.payoff_mode.map_or("auto".into(), |m| m.to_string())),
            ("booster", self.booster.to_string()),
            ("initial_confidence", self.initial_confidence.to_string()),
            ("confidence_override", self.confidence_override.map_or("none".into(), |c| c.to_string())),
            ("baselines", self.baselines.to_string()),
            ("trace", self.trace.to_string()),
            ("ucb1.exploration", p.ucb1.exploration.to_string()),
            ("eee.phase_len", p.eee.phase_len.to_string()),
            ("eee.decay", p.eee.decay.to_string()),
            ("s.initial_aspiration", p.s.initial_aspiration.to_string()),
            ("s.persistence", p.s.persistence.to_string()),
            ("s.switch_rate", p.s.switch_rate.to_string()),
            ("hedge.eta", p.hedge.eta.to_string()),
            ("exp3.eta", p.exp3.eta.to_string()),
            ("exp3.gamma", p.exp3.gamma.to_string()),
            ("evolution.pool_size", e.pool_size.to_string()),
            ("evolution.generations", e.generations.to_string()),
            ("evolution.tournament", e.tournament.to_string()),
            ("evolution.mutation_rate", e.mutation_rate.to_string()),
            ("evolution.crossover_rate", e.crossover_rate.to_string()),
            ("evolution.diversity_weight", e.diversity_weight.to_string()),
            ("evolution.eval_rounds", e.eval_rounds.to_string()),
            ("evolution.opponents", e.opponents.to_string()),
            ("evolution.elites", e.elites.to_string()),
        ];
        out.retain(|(_, v)| !v.is_empty());
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    parse_config_text(&std::fs::read_to_string(path)?)
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad value '{s}' for {what}")))
}

fn parse_bool(s: &str, what: &str) -> Result<bool> {
    match s {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Parse(format!("bad value '{s}' for {what}"))),
    }
}

fn parse_both(s: &str, yes: &str, no: &str, what: &str) -> Result<Vec<bool>> {
    match s {
        "both" => Ok(vec![true, false]),
        _ if s == yes => Ok(vec![true]),
        _ if s == no => Ok(vec![false]),
        _ => Err(Error::Parse(format!("bad value '{s}' for {what}, expected {yes}, {no} or both"))),
    }
}

/// `a..b` (half open) or a comma list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (parse_num(a, "seeds")?, parse_num(b, "seeds")?);
        return Ok((a..b).collect());
    }
    split_list(s).map(|x| parse_num(x, "seeds")).collect()
}
