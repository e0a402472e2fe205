//! History-functional behaviour policies.
//!
//! A policy maps a joint-action history to a distribution over the acting
//! player's actions. The same abstraction serves as an *expert* (a policy for
//! our player) and as a *type* (a hypothesis about the other player).
//!
//! Policies are evaluated through an explicit state that is folded over the
//! history. Planning needs policies on hypothetical extensions of the real
//! history, so a state is a plain value that can be cloned and advanced along
//! any branch.

mod any;
mod basic;

pub use any::{Policy, PolicyState};
pub use basic::{ConstantPolicy, GrimTrigger, ReactivePolicy};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamekit::{History, JointAction, MixedStrategy, Player};

/// Distribution over one player's actions.
pub type ActionDist = MixedStrategy;

/// Tolerance for distribution validity checks.
pub const DIST_TOL: f64 = 1e-9;

pub trait BehaviorPolicy {
    type State: Clone + fmt::Debug;

    /// Identifier, unique within a policy set.
    fn descriptor(&self) -> String;

    fn initial_state(&self) -> Self::State;

    /// Advances the state by one completed round.
    fn observe(&self, state: &mut Self::State, joint: JointAction, role: Player);

    /// Action probabilities for `role` in the given state.
    fn probs(&self, state: &Self::State, role: Player) -> ActionDist;

    fn state_after(&self, history: &History, role: Player) -> Self::State {
        let mut s = self.initial_state();
        for joint in history {
            self.observe(&mut s, *joint, role);
        }
        s
    }

    /// The distribution after `history`, checked for validity.
    fn action_distribution(&self, history: &History, role: Player) -> Result<ActionDist> {
        let d = self.probs(&self.state_after(history, role), role);
        if d.is_valid(DIST_TOL) {
            Ok(d)
        } else {
            Err(Error::policy(format!(
                "{} returned an invalid distribution {:?}",
                self.descriptor(),
                d.0
            )))
        }
    }
}

impl<P: BehaviorPolicy + ?Sized> BehaviorPolicy for &P {
    type State = P::State;

    fn descriptor(&self) -> String {
        (**self).descriptor()
    }

    fn initial_state(&self) -> Self::State {
        (**self).initial_state()
    }

    fn observe(&self, state: &mut Self::State, joint: JointAction, role: Player) {
        (**self).observe(state, joint, role)
    }

    fn probs(&self, state: &Self::State, role: Player) -> ActionDist {
        (**self).probs(state, role)
    }
}

/// Probability vector over an arbitrary finite set (experts, types).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.is_empty() || probs.iter().any(|p| !p.is_finite() || *p < -DIST_TOL) || (sum - 1.0).abs() > DIST_TOL {
            return Err(Error::config(format!("not a probability distribution: {probs:?}")));
        }
        Ok(Distribution { probs })
    }

    /// Normalises non-negative weights. Returns `None` if they sum to zero.
    pub fn from_weights(weights: &[f64]) -> Option<Self> {
        let sum: f64 = weights.iter().sum();
        (sum > 0.0 && sum.is_finite()).then(|| Distribution {
            probs: weights.iter().map(|w| w / sum).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        Distribution {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(n: usize, k: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[k] = 1.0;
        Distribution { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        let sum: f64 = self.probs.iter().sum();
        self.probs.iter().all(|p| *p >= -DIST_TOL) && (sum - 1.0).abs() <= DIST_TOL
    }

    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        sample_index(&self.probs, rng)
    }
}

/// Draws an index with the given probabilities using a single uniform draw.
pub fn sample_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    // rounding left `u` above the cumulative sum: take the last supported index
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(probs.len() - 1)
}

pub fn sample_action(d: &ActionDist, rng: &mut impl Rng) -> usize {
    sample_index(d.probs(), rng)
}

/// Which side of the game a policy set acts for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetRole {
    ExpertsForI,
    TypesForJ,
}

impl SetRole {
    pub fn player(self) -> Player {
        match self {
            SetRole::ExpertsForI => Player::I,
            SetRole::TypesForJ => Player::J,
        }
    }
}

/// A non-empty, ordered set of policies with unique descriptors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolicySet<P = Policy> {
    role: SetRole,
    policies: Vec<P>,
}

impl<P: BehaviorPolicy> PolicySet<P> {
    pub fn new(role: SetRole, policies: Vec<P>) -> Result<Self> {
        if policies.is_empty() {
            return Err(Error::config("policy set must not be empty"));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &policies {
            if !seen.insert(p.descriptor()) {
                return Err(Error::config(format!("duplicate policy descriptor {}", p.descriptor())));
            }
        }
        Ok(PolicySet { role, policies })
    }

    pub fn role(&self) -> SetRole {
        self.role
    }

    pub fn player(&self) -> Player {
        self.role.player()
    }

    pub fn len(&self) -> usize {
        self.policies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.policies.is_empty()
    }

    pub fn get(&self, k: usize) -> &P {
        &self.policies[k]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, P> {
        self.policies.iter()
    }

    pub fn policies(&self) -> &[P] {
        &self.policies
    }

    pub fn descriptors(&self) -> Vec<String> {
        self.policies.iter().map(|p| p.descriptor()).collect()
    }

    pub fn contains(&self, descriptor: &str) -> bool {
        self.policies.iter().any(|p| p.descriptor() == descriptor)
    }

    pub fn initial_states(&self) -> Vec<P::State> {
        self.policies.iter().map(|p| p.initial_state()).collect()
    }

    pub fn states_after(&self, history: &History) -> Vec<P::State> {
        let role = self.player();
        self.policies.iter().map(|p| p.state_after(history, role)).collect()
    }

    /// Advances every member's state by one joint action.
    pub fn observe_all(&self, states: &mut [P::State], joint: JointAction) {
        let role = self.player();
        for (p, s) in self.policies.iter().zip(states.iter_mut()) {
            p.observe(s, joint, role);
        }
    }

    pub fn probs_all(&self, states: &[P::State]) -> Vec<ActionDist> {
        let role = self.player();
        self.policies.iter().zip(states).map(|(p, s)| p.probs(s, role)).collect()
    }
}
