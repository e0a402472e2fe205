use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_random, check_chosen, check_payoffs, AlgorithmKind, ExpertAlgorithm, ExpertStats};
use crate::error::{Error, Result};
use crate::policy::Distribution;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SatisficingParams {
    pub initial_aspiration: f64,
    /// Weight kept on the old aspiration at each update.
    pub persistence: f64,
    /// Switch probability per unit of shortfall below the aspiration.
    pub switch_rate: f64,
}

impl Default for SatisficingParams {
    fn default() -> Self {
        SatisficingParams { initial_aspiration: 1.0, persistence: 0.99, switch_rate: 1.0 }
    }
}

/// Aspiration learning: keep following an expert while it meets the
/// aspiration level, otherwise switch with probability growing in the
/// shortfall.
///
/// A switch goes to a random other expert whose supplied payoff reaches the
/// aspiration, or to any other expert if none does.
#[derive(Clone, Debug)]
pub struct Satisficing {
    params: SatisficingParams,
    stats: ExpertStats,
    start: Option<usize>,
    current: Option<usize>,
    aspiration: f64,
    shortfall: f64,
}

impl Satisficing {
    pub fn new(k: usize, params: SatisficingParams) -> Result<Self> {
        if !(0.0..=1.0).contains(&params.persistence) || !(params.switch_rate >= 0.0) || !params.initial_aspiration.is_finite() {
            return Err(Error::config("invalid S parameters"));
        }
        Ok(Satisficing {
            params,
            stats: ExpertStats::new(k),
            start: None,
            current: None,
            aspiration: params.initial_aspiration,
            shortfall: 0.0,
        })
    }

    pub fn aspiration(&self) -> f64 {
        self.aspiration
    }

    /// Probability of leaving the current expert at the next selection.
    pub fn switch_probability(&self) -> f64 {
        (self.params.switch_rate * self.shortfall).min(1.0)
    }

    pub fn with_aspiration(mut self, a: f64) -> Self {
        self.aspiration = a;
        self
    }
}

impl ExpertAlgorithm for Satisficing {
    fn kind(&self) -> AlgorithmKind {
        AlgorithmKind::S
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
            None => {
                let p = match self.current {
                    None => argmax_random(payoffs, rng),
                    Some(cur) if k > 1 && self.shortfall > 0.0 && rng.gen::<f64>() < self.switch_probability() => {
                        let others: Vec<usize> = (0..k).filter(|&e| e != cur).collect();
                        let hopeful: Vec<usize> = others.iter().copied().filter(|&e| payoffs[e] >= self.aspiration).collect();
                        let pool = if hopeful.is_empty() { &others } else { &hopeful };
                        pool[rng.gen_range(0..pool.len())]
                    }
                    Some(cur) => cur,
                };
                self.current = Some(p);
                p
            }
        };
        Ok(Distribution::point(k, pick))
    }

    fn update(&mut self, chosen: usize, realized: f64, _full: Option<&[f64]>) -> Result<()> {
        check_chosen(chosen, realized, self.stats.len())?;
        let initialising = self.stats.pulls.iter().any(|&p| p == 0);
        self.stats.record_mean(chosen, realized);
        self.stats.rounds += 1;
        self.shortfall = if initialising { 0.0 } else { (self.aspiration - realized).max(0.0) };
        let a = self.params.persistence;
        self.aspiration = a * self.aspiration + (1.0 - a) * realized;
        Ok(())
    }
}
