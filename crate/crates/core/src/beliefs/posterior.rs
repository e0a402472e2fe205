use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamekit::{History, JointAction};
use crate::policy::{BehaviorPolicy, Distribution, PolicySet};

/// Prior, current posterior and the posterior after every prefix of the history.
///
/// When every type has assigned probability zero to some observed action the
/// belief is *degenerate*: the flag is set for good and the posterior is
/// reported as the prior.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeliefState {
    prior: Vec<f64>,
    posterior: Vec<f64>,
    per_step: Vec<Vec<f64>>,
    degenerate: bool,
}

impl BeliefState {
    pub fn new(prior: &Distribution) -> Self {
        let p = prior.probs().to_vec();
        BeliefState {
            prior: p.clone(),
            posterior: p.clone(),
            per_step: vec![p],
            degenerate: false,
        }
    }

    pub fn uniform(n: usize) -> Self {
        BeliefState::new(&Distribution::uniform(n))
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    /// `Pr(type | H^t)`, or the prior when degenerate.
    pub fn posterior(&self) -> &[f64] {
        &self.posterior
    }

    /// `per_step_posteriors()[tau]` is the posterior given the first `tau` rounds.
    pub fn per_step_posteriors(&self) -> &[Vec<f64>] {
        &self.per_step
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Number of observed rounds.
    pub fn rounds(&self) -> usize {
        self.per_step.len() - 1
    }

    pub fn num_types(&self) -> usize {
        self.prior.len()
    }

    /// Bayes update with the probability each type gave to the observed action.
    pub fn observe(&mut self, likelihoods: &[f64]) -> Result<()> {
        if likelihoods.len() != self.prior.len() {
            return Err(Error::config(format!(
                "{} likelihoods for {} types",
                likelihoods.len(),
                self.prior.len()
            )));
        }
        if !self.degenerate {
            let weights: Vec<f64> = self.posterior.iter().zip(likelihoods).map(|(p, l)| p * l).collect();
            match Distribution::from_weights(&weights) {
                Some(d) => self.posterior = d.probs().to_vec(),
                None => {
                    self.degenerate = true;
                    self.posterior = self.prior.clone();
                }
            }
        }
        self.per_step.push(self.posterior.clone());
        Ok(())
    }
}

/// Probability each type assigns to the other player's action `action_j`.
pub fn likelihoods<P: BehaviorPolicy>(types: &PolicySet<P>, states: &[P::State], action_j: usize) -> Vec<f64> {
    types.probs_all(states).iter().map(|d| d.prob(action_j)).collect()
}

/// Posterior from scratch: `prior * prod_tau pi(H^tau, a_j^tau)`, normalised,
/// accumulated in log space for every prefix.
pub fn posterior_batch<P: BehaviorPolicy>(prior: &Distribution, types: &PolicySet<P>, history: &History) -> Result<BeliefState> {
    if prior.len() != types.len() {
        return Err(Error::config(format!("prior over {} types, {} types given", prior.len(), types.len())));
    }
    let role = types.player();
    let mut log_w: Vec<f64> = prior.probs().iter().map(|p| p.ln()).collect();
    let mut states = types.initial_states();
    let mut belief = BeliefState::new(prior);
    for joint in history {
        for ((p, s), lw) in types.iter().zip(&states).zip(log_w.iter_mut()) {
            *lw += p.probs(s, role).prob(joint.of(role)).ln();
        }
        types.observe_all(&mut states, *joint);
        let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY || belief.degenerate {
            belief.degenerate = true;
            belief.posterior = belief.prior.clone();
        } else {
            let w: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
            let sum: f64 = w.iter().sum();
            belief.posterior = w.iter().map(|x| x / sum).collect();
        }
        belief.per_step.push(belief.posterior.clone());
    }
    Ok(belief)
}

/// One-step update of `belief`, which must correspond to `history`.
pub fn posterior_increment<P: BehaviorPolicy>(
    belief: &BeliefState,
    types: &PolicySet<P>,
    history: &History,
    new: JointAction,
) -> Result<BeliefState> {
    if belief.rounds() != history.len() {
        return Err(Error::config(format!(
            "belief covers {} rounds, history has {}",
            belief.rounds(),
            history.len()
        )));
    }
    let states = types.states_after(history);
    let mut next = belief.clone();
    next.observe(&likelihoods(types, &states, new.j))?;
    Ok(next)
}
