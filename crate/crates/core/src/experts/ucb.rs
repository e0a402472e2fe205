use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_random, check_chosen, check_payoffs, AlgorithmKind, ExpertAlgorithm, ExpertStats};
use crate::error::{Error, Result};
use crate::policy::Distribution;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Ucb1Params {
    /// Multiplier inside the square-root bonus.
    pub exploration: f64,
}

impl Default for Ucb1Params {
    fn default() -> Self {
        Ucb1Params { exploration: 2.0 }
    }
}

/// Upper confidence bound over expert means; one pull of every expert first.
#[derive(Clone, Debug)]
pub struct Ucb1 {
    params: Ucb1Params,
    stats: ExpertStats,
    start: Option<usize>,
}

impl Ucb1 {
    pub fn new(k: usize, params: Ucb1Params) -> Result<Self> {
        if !(params.exploration >= 0.0 && params.exploration.is_finite()) {
            return Err(Error::config("UCB1 exploration must be a non-negative number"));
        }
        Ok(Ucb1 { params, stats: ExpertStats::new(k), start: None })
    }

    /// `payoffs[k] + sqrt(c ln n / n_k)` for pulled experts.
    pub fn indices(&self, payoffs: &[f64]) -> Vec<f64> {
        let n: u64 = self.stats.pulls.iter().sum();
        let ln_n = (n.max(1) as f64).ln();
        payoffs
            .iter()
            .zip(&self.stats.pulls)
            .map(|(p, &nk)| p + (self.params.exploration * ln_n / nk as f64).sqrt())
            .collect()
    }
}

impl ExpertAlgorithm for Ucb1 {
    fn kind(&self) -> AlgorithmKind {
        AlgorithmKind::Ucb1
    }

    fn stats(&self) -> &ExpertStats {
        &self.stats
    }

    fn select(&mut self, payoffs: &[f64], rng: &mut RngStream) -> Result<Distribution> {
        let k = self.stats.len();
        check_payoffs(payoffs, k)?;
        let start = *self.start.get_or_insert_with(|| rng.gen_range(0..k));
        let pick = match self.stats.first_unpulled(start) {
            Some(e) => e,
            None => argmax_random(&self.indices(payoffs), rng),
        };
        Ok(Distribution::point(k, pick))
    }

    fn update(&mut self, chosen: usize, realized: f64, _full: Option<&[f64]>) -> Result<()> {
        check_chosen(chosen, realized, self.stats.len())?;
        self.stats.record_mean(chosen, realized);
        self.stats.rounds += 1;
        Ok(())
    }
}
