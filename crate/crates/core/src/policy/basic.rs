use serde::{Deserialize, Serialize};

use super::{ActionDist, BehaviorPolicy};
use crate::gamekit::{JointAction, Player};

/// History-independent policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantPolicy {
    pub name: String,
    pub probs: ActionDist,
}

impl ConstantPolicy {
    pub fn new(name: impl Into<String>, probs: ActionDist) -> Self {
        ConstantPolicy {
            name: name.into(),
            probs,
        }
    }

    pub fn pure(name: impl Into<String>, action: usize) -> Self {
        ConstantPolicy::new(name, ActionDist::pure(action))
    }

    pub fn uniform() -> Self {
        ConstantPolicy::new("uniform", ActionDist::uniform())
    }
}

impl BehaviorPolicy for ConstantPolicy {
    type State = ();

    fn descriptor(&self) -> String {
        self.name.clone()
    }

    fn initial_state(&self) {}

    fn observe(&self, _: &mut (), _: JointAction, _: Player) {}

    fn probs(&self, _: &(), _: Player) -> ActionDist {
        self.probs
    }
}

/// Memory-one stochastic policy: the probability of action 0 depends on the
/// previous joint action, seen as `(own, opponent)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReactivePolicy {
    pub first: f64,
    /// `after[own][opp]` is the probability of action 0 after that round.
    pub after: [[f64; 2]; 2],
}

impl ReactivePolicy {
    pub fn new(first: f64, after: [[f64; 2]; 2]) -> Self {
        ReactivePolicy { first, after }
    }
}

impl BehaviorPolicy for ReactivePolicy {
    type State = Option<(usize, usize)>;

    fn descriptor(&self) -> String {
        format!(
            "reactive:{}:{}/{}/{}/{}",
            self.first, self.after[0][0], self.after[0][1], self.after[1][0], self.after[1][1]
        )
    }

    fn initial_state(&self) -> Self::State {
        None
    }

    fn observe(&self, state: &mut Self::State, joint: JointAction, role: Player) {
        *state = Some((joint.of(role), joint.of(role.other())));
    }

    fn probs(&self, state: &Self::State, _: Player) -> ActionDist {
        match state {
            None => ActionDist::binary(self.first),
            Some((own, opp)) => ActionDist::binary(self.after[*own][*opp]),
        }
    }
}

/// Plays `cooperate` only if the opponent played it in each of the last
/// `window` rounds; otherwise plays the other action. With fewer than
/// `window` rounds observed it does not cooperate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrimTrigger {
    pub window: usize,
    pub cooperate: usize,
}

impl GrimTrigger {
    pub fn new(window: usize, cooperate: usize) -> Self {
        GrimTrigger { window, cooperate }
    }
}

impl BehaviorPolicy for GrimTrigger {
    /// Length of the opponent's current cooperation streak, capped at `window`.
    type State = usize;

    fn descriptor(&self) -> String {
        format!("grim-{}", self.window)
    }

    fn initial_state(&self) -> usize {
        0
    }

    fn observe(&self, streak: &mut usize, joint: JointAction, role: Player) {
        if joint.of(role.other()) == self.cooperate {
            *streak = (*streak + 1).min(self.window);
        } else {
            *streak = 0;
        }
    }

    fn probs(&self, streak: &usize, _: Player) -> ActionDist {
        if *streak >= self.window {
            ActionDist::pure(self.cooperate)
        } else {
            ActionDist::pure(1 - self.cooperate)
        }
    }
}
