use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamekit::History;
use crate::policy::{ActionDist, BehaviorPolicy, PolicySet};

/// Running mean of the posterior-weighted ratio between the probability each
/// type gave the observed action and the probability of its likeliest action.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceState {
    pub running_sum: f64,
    pub t: u64,
    pub c0: f64,
}

impl Default for ConfidenceState {
    fn default() -> Self {
        ConfidenceState { running_sum: 0.0, t: 0, c0: 1.0 }
    }
}

impl ConfidenceState {
    pub fn new(c0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c0) {
            return Err(Error::config(format!("initial confidence {c0} outside [0,1]")));
        }
        Ok(ConfidenceState { running_sum: 0.0, t: 0, c0 })
    }

    pub fn confidence(&self) -> f64 {
        if self.t == 0 {
            self.c0
        } else {
            (self.running_sum / self.t as f64).clamp(0.0, 1.0)
        }
    }

    /// One step's summand for posterior `posterior` over types predicting `probs`.
    pub fn term(posterior: &[f64], probs: &[ActionDist], observed: usize) -> Result<f64> {
        if posterior.len() != probs.len() {
            return Err(Error::config(format!("{} posterior weights for {} types", posterior.len(), probs.len())));
        }
        let mut sum = 0.0;
        for (w, d) in posterior.iter().zip(probs) {
            let max = d.max_prob();
            if max <= 0.0 {
                return Err(Error::policy("type assigns probability zero to every action"));
            }
            if *w > 0.0 {
                sum += w * d.prob(observed) / max;
            }
        }
        Ok(sum)
    }

    pub fn observe(&mut self, posterior: &[f64], probs: &[ActionDist], observed: usize) -> Result<()> {
        self.running_sum += Self::term(posterior, probs, observed)?;
        self.t += 1;
        Ok(())
    }
}

/// Adds the term for the round following `prefix`, using `posterior`, the
/// belief conditioned on `prefix`.
pub fn confidence_update<P: BehaviorPolicy>(
    c: &ConfidenceState,
    posterior: &[f64],
    types: &PolicySet<P>,
    prefix: &History,
    observed: usize,
) -> Result<ConfidenceState> {
    let probs = types.probs_all(&types.states_after(prefix));
    let mut next = *c;
    next.observe(posterior, &probs, observed)?;
    Ok(next)
}
