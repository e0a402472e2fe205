use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_random, check_chosen, check_payoffs, AlgorithmKind, ExpertAlgorithm, ExpertStats};
use crate::error::{Error, Result};
use crate::policy::Distribution;
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EeeParams {
    /// Length of an exploration phase, and the unit of exploitation phases.
    pub phase_len: usize,
    /// The exploration probability is `1 / ceil(t / decay)`.
    pub decay: f64,
}

impl Default for EeeParams {
    fn default() -> Self {
        EeeParams { phase_len: 10, decay: 100.0 }
    }
}

/// Exploration/exploitation with phases: each phase either follows a random
/// expert for `phase_len` rounds or the current best for `phase_len` times
/// the number of exploitation phases that expert has had.
#[derive(Clone, Debug)]
pub struct Eee {
    params: EeeParams,
    stats: ExpertStats,
    start: Option<usize>,
    current: usize,
    remaining: usize,
    visits: Vec<u64>,
}

impl Eee {
    pub fn new(k: usize, params: EeeParams) -> Result<Self> {
        if params.phase_len == 0 || !(params.decay > 0.0 && params.decay.is_finite()) {
            return Err(Error::config("EEE needs a positive phase length and decay"));
        }
        Ok(Eee { params, stats: ExpertStats::new(k), start: None, current: 0, remaining: 0, visits: vec![0; k] })
    }

    pub fn explore_probability(&self) -> f64 {
        let t = (self.stats.rounds + 1) as f64;
        1.0 / (t / self.params.decay).ceil().max(1.0)
    }

    /// Rounds left in the current phase.
    pub fn remaining(&self) -> usize {
        self.remaining
    }
}

impl ExpertAlgorithm for Eee {
    fn kind(&self) -> AlgorithmKind {
        AlgorithmKind::Eee
    }

    fn stats(&self) -> &ExpertStats {
        &self.stats
    }

    fn select(&mut self, payoffs: &[f64], rng: &mut RngStream) -> Result<Distribution> {
        let k = self.stats.len();
        check_payoffs(payoffs, k)?;
        let start = *self.start.get_or_insert_with(|| rng.gen_range(0..k));
        if let Some(e) = self.stats.first_unpulled(start) {
            self.current = e;
            self.remaining = 1;
        } else if self.remaining == 0 {
            if rng.gen::<f64>() < self.explore_probability() {
                self.current = rng.gen_range(0..k);
                self.remaining = self.params.phase_len;
            } else {
                let e = argmax_random(payoffs, rng);
                self.visits[e] += 1;
                self.current = e;
                self.remaining = self.params.phase_len * self.visits[e] as usize;
            }
        }
        Ok(Distribution::point(k, self.current))
    }

    fn update(&mut self, chosen: usize, realized: f64, _full: Option<&[f64]>) -> Result<()> {
        check_chosen(chosen, realized, self.stats.len())?;
        self.stats.record_mean(chosen, realized);
        self.stats.rounds += 1;
        self.remaining = self.remaining.saturating_sub(1);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn exploration_schedule() {
        let mut e = Eee::new(2, EeeParams::default()).unwrap();
        assert_eq!(e.explore_probability(), 1.0);
        e.stats.rounds = 100;
        assert_eq!(e.explore_probability(), 0.5);
        e.stats.rounds = 999;
        assert_eq!(e.explore_probability(), 0.1);
    }

    #[test]
    fn phases_commit_to_one_expert() {
        let mut rng = seeded(8);
        let mut e = Eee::new(3, EeeParams::default()).unwrap();
        for _ in 0..3 {
            let d = e.select(&[0.0; 3], &mut rng).unwrap();
            e.update(d.sample(&mut rng), 0.5, None).unwrap();
        }
        assert!(e.stats.pulls.iter().all(|&p| p == 1));
        let first = e.select(&[0.2, 0.9, 0.1], &mut rng).unwrap().sample(&mut rng);
        let len = e.remaining();
        assert!(len >= 10);
        e.update(first, 0.5, None).unwrap();
        for _ in 1..len {
            let d = e.select(&[0.9, 0.0, 0.9], &mut rng).unwrap();
            assert_eq!(d.sample(&mut rng), first);
            e.update(first, 0.5, None).unwrap();
        }
        assert_eq!(e.remaining(), 0);
    }
}
