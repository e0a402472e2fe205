//! Expert algorithms: rules mapping a per-expert payoff vector to a
//! distribution over experts.
//!
//! Every algorithm keeps its own [`ExpertStats`] (what it has observed) but
//! selects from whatever payoff vector the caller supplies, which is how a
//! wrapper can substitute mixed payoffs for the observed ones.

mod eee;
mod hedge;
mod satisficing;
mod ucb;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use eee::{Eee, EeeParams};
pub use hedge::{Exp3, Exp3Params, Hedge, HedgeParams};
pub use satisficing::{Satisficing, SatisficingParams};
pub use ucb::{Ucb1, Ucb1Params};

use crate::beliefs::{PayoffMode, TIE_TOL};
use crate::error::{Error, Result};
use crate::policy::Distribution;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmKind {
    #[serde(rename = "UCB1")]
    Ucb1,
    #[serde(rename = "EEE")]
    Eee,
    #[serde(rename = "S")]
    S,
    #[serde(rename = "Hedge")]
    Hedge,
    #[serde(rename = "Exp3")]
    Exp3,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] =
        [AlgorithmKind::Ucb1, AlgorithmKind::Eee, AlgorithmKind::S, AlgorithmKind::Hedge, AlgorithmKind::Exp3];

    /// Hedge and Exp3 work on payoff totals, the others on averages.
    pub fn natural_mode(self) -> PayoffMode {
        match self {
            AlgorithmKind::Hedge | AlgorithmKind::Exp3 => PayoffMode::Total,
            _ => PayoffMode::Average,
        }
    }

    pub fn needs_full_feedback(self) -> bool {
        self == AlgorithmKind::Hedge
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Ucb1 => "UCB1",
            AlgorithmKind::Eee => "EEE",
            AlgorithmKind::S => "S",
            AlgorithmKind::Hedge => "Hedge",
            AlgorithmKind::Exp3 => "Exp3",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown expert algorithm '{s}'")))
    }
}

/// What an algorithm has seen so far.
///
/// `observed` holds average payoffs for the averaging algorithms and totals
/// for Hedge/Exp3. `pulls` counts evaluations, which for Hedge means every
/// expert every round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpertStats {
    pub observed: Vec<f64>,
    pub pulls: Vec<u64>,
    pub rounds: u64,
}

impl ExpertStats {
    pub fn new(k: usize) -> Self {
        ExpertStats { observed: vec![0.0; k], pulls: vec![0; k], rounds: 0 }
    }

    pub fn len(&self) -> usize {
        self.observed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }

    fn record_mean(&mut self, k: usize, payoff: f64) {
        self.pulls[k] += 1;
        self.observed[k] += (payoff - self.observed[k]) / self.pulls[k] as f64;
    }

    fn first_unpulled(&self, start: usize) -> Option<usize> {
        let n = self.len();
        (0..n).map(|o| (start + o) % n).find(|&k| self.pulls[k] == 0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    pub ucb1: Ucb1Params,
    pub eee: EeeParams,
    pub s: SatisficingParams,
    pub hedge: HedgeParams,
    pub exp3: Exp3Params,
}

pub trait ExpertAlgorithm: Send + fmt::Debug {
    fn kind(&self) -> AlgorithmKind;

    fn stats(&self) -> &ExpertStats;

    /// Distribution over experts for this round given `payoffs`, one entry
    /// per expert in the algorithm's natural mode.
    fn select(&mut self, payoffs: &[f64], rng: &mut RngStream) -> Result<Distribution>;

    /// Feedback for the round: the expert followed, the payoff received and,
    /// for full-information algorithms, each expert's recommendation payoff.
    fn update(&mut self, chosen: usize, realized: f64, full_feedback: Option<&[f64]>) -> Result<()>;

    fn num_experts(&self) -> usize {
        self.stats().len()
    }

    fn natural_mode(&self) -> PayoffMode {
        self.kind().natural_mode()
    }

    fn needs_full_feedback(&self) -> bool {
        self.kind().needs_full_feedback()
    }
}

pub fn build_algorithm(kind: AlgorithmKind, k: usize, params: &AlgorithmParams) -> Result<Box<dyn ExpertAlgorithm>> {
    if k == 0 {
        return Err(Error::config("expert algorithm needs at least one expert"));
    }
    Ok(match kind {
        AlgorithmKind::Ucb1 => Box::new(Ucb1::new(k, params.ucb1)?),
        AlgorithmKind::Eee => Box::new(Eee::new(k, params.eee)?),
        AlgorithmKind::S => Box::new(Satisficing::new(k, params.s)?),
        AlgorithmKind::Hedge => Box::new(Hedge::new(k, params.hedge)?),
        AlgorithmKind::Exp3 => Box::new(Exp3::new(k, params.exp3)?),
    })
}

fn check_payoffs(payoffs: &[f64], k: usize) -> Result<()> {
    if payoffs.len() != k {
        return Err(Error::config(format!("{} payoffs for {k} experts", payoffs.len())));
    }
    if payoffs.iter().any(|p| !p.is_finite()) {
        return Err(Error::config("expert payoffs must be finite"));
    }
    Ok(())
}

fn check_chosen(chosen: usize, realized: f64, k: usize) -> Result<()> {
    if chosen >= k {
        return Err(Error::config(format!("expert {chosen} out of range for {k} experts")));
    }
    if !realized.is_finite() {
        return Err(Error::config("realized payoff must be finite"));
    }
    Ok(())
}

/// Index of the largest score, ties within [`TIE_TOL`] broken at random.
pub(crate) fn argmax_random(scores: &[f64], rng: &mut impl Rng) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..scores.len()).filter(|&k| scores[k] >= best - TIE_TOL).collect();
    if ties.len() == 1 {
        ties[0]
    } else {
        ties[rng.gen_range(0..ties.len())]
    }
}

/// `exp(eta * x_k)` normalised, shifted by the maximum so nothing overflows.
pub fn softmax(values: &[f64], eta: f64) -> Vec<f64> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = values.iter().map(|v| (eta * (v - max)).exp()).collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|x| x / sum).collect()
}
