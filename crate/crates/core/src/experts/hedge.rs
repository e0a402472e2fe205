use serde::{Deserialize, Serialize};

use super::{check_chosen, check_payoffs, softmax, AlgorithmKind, ExpertAlgorithm, ExpertStats};
use crate::error::{Error, Result};
use crate::policy::Distribution;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HedgeParams {
    pub eta: f64,
}

impl Default for HedgeParams {
    fn default() -> Self {
        HedgeParams { eta: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Exp3Params {
    pub eta: f64,
    pub gamma: f64,
}

impl Default for Exp3Params {
    fn default() -> Self {
        Exp3Params { eta: 0.1, gamma: 0.1 }
    }
}

/// Exponential weights over payoff totals with full feedback: every round
/// each expert's total grows by what its recommendation would have earned.
#[derive(Clone, Debug)]
pub struct Hedge {
    params: HedgeParams,
    stats: ExpertStats,
}

impl Hedge {
    pub fn new(k: usize, params: HedgeParams) -> Result<Self> {
        if !(params.eta > 0.0 && params.eta.is_finite()) {
            return Err(Error::config("Hedge learning rate must be positive"));
        }
        Ok(Hedge { params, stats: ExpertStats::new(k) })
    }

    /// Unnormalised weights `exp(eta * G_k)`.
    pub fn weights(&self) -> Vec<f64> {
        self.stats.observed.iter().map(|g| (self.params.eta * g).exp()).collect()
    }
}

impl ExpertAlgorithm for Hedge {
    fn kind(&self) -> AlgorithmKind {
        AlgorithmKind::Hedge
    }

    fn stats(&self) -> &ExpertStats {
        &self.stats
    }

    fn select(&mut self, payoffs: &[f64], _rng: &mut RngStream) -> Result<Distribution> {
        check_payoffs(payoffs, self.stats.len())?;
        Distribution::new(softmax(payoffs, self.params.eta))
    }

    fn update(&mut self, chosen: usize, realized: f64, full_feedback: Option<&[f64]>) -> Result<()> {
        let k = self.stats.len();
        check_chosen(chosen, realized, k)?;
        let fb = full_feedback.ok_or_else(|| Error::config("Hedge needs every expert's payoff each round"))?;
        check_payoffs(fb, k)?;
        for (e, x) in fb.iter().enumerate() {
            self.stats.observed[e] += x;
            self.stats.pulls[e] += 1;
        }
        self.stats.rounds += 1;
        Ok(())
    }
}

/// Exp3: exponential weights mixed with uniform exploration, updated with
/// importance-weighted payoffs of the followed expert only.
#[derive(Clone, Debug)]
pub struct Exp3 {
    params: Exp3Params,
    stats: ExpertStats,
    last: Option<Vec<f64>>,
}

impl Exp3 {
    pub fn new(k: usize, params: Exp3Params) -> Result<Self> {
        if !(params.eta > 0.0 && params.eta.is_finite()) || !(0.0..=1.0).contains(&params.gamma) {
            return Err(Error::config("Exp3 needs a positive learning rate and gamma in [0,1]"));
        }
        Ok(Exp3 { params, stats: ExpertStats::new(k), last: None })
    }

    pub fn probabilities(&self, payoffs: &[f64]) -> Vec<f64> {
        let k = payoffs.len() as f64;
        let g = self.params.gamma;
        softmax(payoffs, self.params.eta).into_iter().map(|p| (1.0 - g) * p + g / k).collect()
    }
}

impl ExpertAlgorithm for Exp3 {
    fn kind(&self) -> AlgorithmKind {
        AlgorithmKind::Exp3
    }

    fn stats(&self) -> &ExpertStats {
        &self.stats
    }

    fn select(&mut self, payoffs: &[f64], _rng: &mut RngStream) -> Result<Distribution> {
        check_payoffs(payoffs, self.stats.len())?;
        let p = self.probabilities(payoffs);
        self.last = Some(p.clone());
        Distribution::new(p)
    }

    fn update(&mut self, chosen: usize, realized: f64, _full: Option<&[f64]>) -> Result<()> {
        check_chosen(chosen, realized, self.stats.len())?;
        let p = match &self.last {
            Some(p) => p[chosen],
            None => self.probabilities(&self.stats.observed)[chosen],
        };
        self.stats.observed[chosen] += realized / p;
        self.stats.pulls[chosen] += 1;
        self.stats.rounds += 1;
        self.last = None;
        Ok(())
    }
}
