use serde::{Deserialize, Serialize};

use super::{ActionDist, BehaviorPolicy, ConstantPolicy, GrimTrigger, ReactivePolicy};
use crate::error::{Error, Result};
use crate::gamekit::{JointAction, Player};
use crate::genpolicies::{
    DecisionTree, FictitiousPlayer, LftAgent, LftState, NetMemory, NeuralNet, TreeMemory,
};

/// Every policy kind the crate knows how to generate, serialise and evaluate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Policy {
    Constant(ConstantPolicy),
    Reactive(ReactivePolicy),
    Grim(GrimTrigger),
    Lft(LftAgent),
    Tree(DecisionTree),
    Net(NeuralNet),
    Fictitious(FictitiousPlayer),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolicyState {
    Stateless,
    Reactive(Option<(usize, usize)>),
    Grim(usize),
    Lft(LftState),
    Tree(TreeMemory),
    Net(NetMemory),
    Fictitious([u64; 2]),
}

impl Policy {
    /// Structural checks for policies loaded from files.
    pub fn validate(&self) -> Result<()> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        match self {
            Policy::Constant(c) if !c.probs.is_valid(super::DIST_TOL) => {
                Err(Error::policy(format!("{}: invalid probabilities", c.name)))
            }
            Policy::Reactive(r) if !(unit(r.first) && r.after.iter().flatten().all(|p| unit(*p))) => {
                Err(Error::policy("reactive policy probabilities must lie in [0, 1]"))
            }
            Policy::Lft(l) if l.target.is_empty() || l.target.iter().any(|ja| !ja.is_valid()) => {
                Err(Error::policy("lft agent needs a non-empty valid target"))
            }
            Policy::Tree(t) => t.validate(),
            Policy::Net(n) => NeuralNet::from_genome(&n.genome()).map(|_| ()),
            _ => Ok(()),
        }
    }
}

macro_rules! mismatch {
    () => {
        unreachable!("policy state does not belong to this policy")
    };
}

impl BehaviorPolicy for Policy {
    type State = PolicyState;

    fn descriptor(&self) -> String {
        match self {
            Policy::Constant(p) => p.descriptor(),
            Policy::Reactive(p) => p.descriptor(),
            Policy::Grim(p) => p.descriptor(),
            Policy::Lft(p) => p.descriptor(),
            Policy::Tree(p) => p.descriptor(),
            Policy::Net(p) => p.descriptor(),
            Policy::Fictitious(p) => p.descriptor(),
        }
    }

    fn initial_state(&self) -> PolicyState {
        match self {
            Policy::Constant(_) => PolicyState::Stateless,
            Policy::Reactive(p) => PolicyState::Reactive(p.initial_state()),
            Policy::Grim(p) => PolicyState::Grim(p.initial_state()),
            Policy::Lft(p) => PolicyState::Lft(p.initial_state()),
            Policy::Tree(p) => PolicyState::Tree(p.initial_state()),
            Policy::Net(p) => PolicyState::Net(p.initial_state()),
            Policy::Fictitious(p) => PolicyState::Fictitious(p.initial_state()),
        }
    }

    fn observe(&self, state: &mut PolicyState, joint: JointAction, role: Player) {
        match (self, state) {
            (Policy::Constant(_), PolicyState::Stateless) => {}
            (Policy::Reactive(p), PolicyState::Reactive(s)) => p.observe(s, joint, role),
            (Policy::Grim(p), PolicyState::Grim(s)) => p.observe(s, joint, role),
            (Policy::Lft(p), PolicyState::Lft(s)) => p.observe(s, joint, role),
            (Policy::Tree(p), PolicyState::Tree(s)) => p.observe(s, joint, role),
            (Policy::Net(p), PolicyState::Net(s)) => p.observe(s, joint, role),
            (Policy::Fictitious(p), PolicyState::Fictitious(s)) => p.observe(s, joint, role),
            _ => mismatch!(),
        }
    }

    fn probs(&self, state: &PolicyState, role: Player) -> ActionDist {
        match (self, state) {
            (Policy::Constant(p), PolicyState::Stateless) => p.probs(&(), role),
            (Policy::Reactive(p), PolicyState::Reactive(s)) => p.probs(s, role),
            (Policy::Grim(p), PolicyState::Grim(s)) => p.probs(s, role),
            (Policy::Lft(p), PolicyState::Lft(s)) => p.probs(s, role),
            (Policy::Tree(p), PolicyState::Tree(s)) => p.probs(s, role),
            (Policy::Net(p), PolicyState::Net(s)) => p.probs(s, role),
            (Policy::Fictitious(p), PolicyState::Fictitious(s)) => p.probs(s, role),
            _ => mismatch!(),
        }
    }
}

impl From<ConstantPolicy> for Policy {
    fn from(p: ConstantPolicy) -> Self {
        Policy::Constant(p)
    }
}

impl From<ReactivePolicy> for Policy {
    fn from(p: ReactivePolicy) -> Self {
        Policy::Reactive(p)
    }
}

impl From<GrimTrigger> for Policy {
    fn from(p: GrimTrigger) -> Self {
        Policy::Grim(p)
    }
}

impl From<LftAgent> for Policy {
    fn from(p: LftAgent) -> Self {
        Policy::Lft(p)
    }
}

impl From<DecisionTree> for Policy {
    fn from(p: DecisionTree) -> Self {
        Policy::Tree(p)
    }
}

impl From<NeuralNet> for Policy {
    fn from(p: NeuralNet) -> Self {
        Policy::Net(p)
    }
}

impl From<FictitiousPlayer> for Policy {
    fn from(p: FictitiousPlayer) -> Self {
        Policy::Fictitious(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_tagged_by_kind() {
        let p = Policy::Grim(GrimTrigger::new(4, 0));
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["kind"], "grim");
        assert_eq!(v["window"], 4);
        let back: Policy = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}
