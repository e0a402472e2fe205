//! Deterministic decision trees over the opponent's last three actions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamekit::{JointAction, Player};
use crate::policy::{ActionDist, BehaviorPolicy};

/// Number of past opponent actions a tree can read.
pub const TREE_MEMORY: usize = 3;
const PATTERNS: usize = 1 << TREE_MEMORY;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        action: usize,
    },
    /// Branches on the opponent's action `slot` rounds ago (1-based).
    Test {
        slot: usize,
        on0: Box<TreeNode>,
        on1: Box<TreeNode>,
    },
}

impl TreeNode {
    fn eval(&self, recent: &[usize; TREE_MEMORY]) -> usize {
        match self {
            TreeNode::Leaf { action } => *action,
            TreeNode::Test { slot, on0, on1 } => {
                if recent[slot - 1] == 0 {
                    on0.eval(recent)
                } else {
                    on1.eval(recent)
                }
            }
        }
    }

    fn size(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Test { on0, on1, .. } => 1 + on0.size() + on1.size(),
        }
    }

    /// Random tree using only slots not in `used` (bitmask over slots).
    fn random(rng: &mut impl Rng, used: u8, grow: f64) -> TreeNode {
        let free: Vec<usize> = (1..=TREE_MEMORY).filter(|s| used & (1 << (s - 1)) == 0).collect();
        if free.is_empty() || !rng.gen_bool(grow) {
            return TreeNode::Leaf {
                action: rng.gen_range(0..2),
            };
        }
        let slot = free[rng.gen_range(0..free.len())];
        let mask = used | (1 << (slot - 1));
        TreeNode::Test {
            slot,
            on0: Box::new(TreeNode::random(rng, mask, grow * 0.75)),
            on1: Box::new(TreeNode::random(rng, mask, grow * 0.75)),
        }
    }

    /// Removes tests of slots already tested higher up by keeping their `on0` branch.
    fn repair(self, used: u8) -> TreeNode {
        match self {
            TreeNode::Leaf { .. } => self,
            TreeNode::Test { slot, on0, on1 } => {
                let bit = 1u8 << (slot - 1);
                if used & bit != 0 {
                    on0.repair(used)
                } else {
                    TreeNode::Test {
                        slot,
                        on0: Box::new(on0.repair(used | bit)),
                        on1: Box::new(on1.repair(used | bit)),
                    }
                }
            }
        }
    }

    /// Pre-order lookup.
    fn subtree(&self, idx: usize) -> &TreeNode {
        fn go<'a>(n: &'a TreeNode, idx: &mut usize) -> Option<&'a TreeNode> {
            if *idx == 0 {
                return Some(n);
            }
            *idx -= 1;
            match n {
                TreeNode::Leaf { .. } => None,
                TreeNode::Test { on0, on1, .. } => go(on0, idx).or_else(|| go(on1, idx)),
            }
        }
        let mut i = idx;
        go(self, &mut i).expect("index within tree size")
    }

    fn subtree_mut(&mut self, idx: usize) -> &mut TreeNode {
        fn go<'a>(n: &'a mut TreeNode, idx: &mut usize) -> Option<&'a mut TreeNode> {
            if *idx == 0 {
                return Some(n);
            }
            *idx -= 1;
            match n {
                TreeNode::Leaf { .. } => None,
                TreeNode::Test { on0, on1, .. } => {
                    let before = *idx;
                    let size0 = on0.size();
                    if before < size0 {
                        go(on0, idx)
                    } else {
                        *idx -= size0;
                        go(on1, idx)
                    }
                }
            }
        }
        let mut i = idx;
        go(self, &mut i).expect("index within tree size")
    }

    fn mutate(&mut self, rate: f64, rng: &mut impl Rng, used: u8) {
        if rng.gen_bool(rate) {
            match self {
                TreeNode::Leaf { action } => *action = 1 - *action,
                TreeNode::Test { .. } => *self = TreeNode::random(rng, used, 0.5),
            }
            return;
        }
        if let TreeNode::Test { slot, on0, on1 } = self {
            let mask = used | (1 << (*slot - 1));
            on0.mutate(rate, rng, mask);
            on1.mutate(rate, rng, mask);
        }
    }

    fn validate(&self, used: u8, depth: usize) -> Result<()> {
        match self {
            TreeNode::Leaf { action } if *action < 2 => Ok(()),
            TreeNode::Leaf { action } => Err(Error::policy(format!("tree leaf action {action} out of range"))),
            TreeNode::Test { slot, on0, on1 } => {
                if !(1..=TREE_MEMORY).contains(slot) {
                    return Err(Error::policy(format!("tree tests slot {slot}, memory is {TREE_MEMORY}")));
                }
                let bit = 1u8 << (slot - 1);
                if used & bit != 0 || depth >= TREE_MEMORY {
                    return Err(Error::policy("tree path tests a history slot twice"));
                }
                on0.validate(used | bit, depth + 1)?;
                on1.validate(used | bit, depth + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
}

/// Opponent actions, most recent first. Slots not yet observed read as 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeMemory {
    pub recent: [usize; TREE_MEMORY],
}

impl DecisionTree {
    pub fn new(root: TreeNode) -> Result<Self> {
        root.validate(0, 0)?;
        Ok(DecisionTree { root })
    }

    pub fn constant(action: usize) -> Self {
        DecisionTree {
            root: TreeNode::Leaf { action },
        }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        DecisionTree {
            root: TreeNode::random(rng, 0, 0.9),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.root.validate(0, 0)
    }

    pub fn action(&self, recent: &[usize; TREE_MEMORY]) -> usize {
        self.root.eval(recent)
    }

    /// Output for every opponent pattern; bit `k` of the index is the action `k + 1` rounds ago.
    pub fn truth_table(&self) -> [usize; PATTERNS] {
        let mut out = [0; PATTERNS];
        for (p, o) in out.iter_mut().enumerate() {
            let recent = [p & 1, (p >> 1) & 1, (p >> 2) & 1];
            *o = self.action(&recent);
        }
        out
    }

    /// Fraction of opponent patterns on which the two trees disagree.
    pub fn dissimilarity(&self, other: &DecisionTree) -> f64 {
        let (a, b) = (self.truth_table(), other.truth_table());
        a.iter().zip(b.iter()).filter(|(x, y)| x != y).count() as f64 / PATTERNS as f64
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }

    /// Point mutation: each node flips (leaf) or regrows (test) with probability `rate`.
    pub fn mutate(&mut self, rate: f64, rng: &mut impl Rng) {
        if rate > 0.0 {
            self.root.mutate(rate.min(1.0), rng, 0);
        }
    }

    /// Subtree crossover: a random subtree of `self` is replaced by a random subtree of `other`.
    pub fn crossover(&self, other: &DecisionTree, rng: &mut impl Rng) -> DecisionTree {
        let at = rng.gen_range(0..self.size());
        let donor = other.root.subtree(rng.gen_range(0..other.size())).clone();
        let mut root = self.root.clone();
        *root.subtree_mut(at) = donor;
        DecisionTree { root: root.repair(0) }
    }
}

impl BehaviorPolicy for DecisionTree {
    type State = TreeMemory;

    fn descriptor(&self) -> String {
        let table: String = self.truth_table().iter().map(|a| char::from(b'0' + *a as u8)).collect();
        format!("cdt:{table}")
    }

    fn initial_state(&self) -> TreeMemory {
        TreeMemory::default()
    }

    fn observe(&self, m: &mut TreeMemory, joint: JointAction, role: Player) {
        m.recent.rotate_right(1);
        m.recent[0] = joint.of(role.other());
    }

    fn probs(&self, m: &TreeMemory, _: Player) -> ActionDist {
        ActionDist::pure(self.action(&m.recent))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamekit::History;
    use crate::rng::seeded;

    fn tit_for_tat() -> DecisionTree {
        DecisionTree::new(TreeNode::Test {
            slot: 1,
            on0: Box::new(TreeNode::Leaf { action: 0 }),
            on1: Box::new(TreeNode::Leaf { action: 1 }),
        })
        .unwrap()
    }

    #[test]
    fn reads_only_the_last_three_opponent_actions() {
        let t = tit_for_tat();
        let h = History::from_actions(vec![JointAction::new(1, 1), JointAction::new(0, 0), JointAction::new(0, 1)]);
        assert_eq!(t.action_distribution(&h, Player::I).unwrap(), ActionDist::pure(1));
        let mut rng = seeded(3);
        for _ in 0..200 {
            let tree = DecisionTree::random(&mut rng);
            tree.validate().unwrap();
            let tail: Vec<JointAction> = (0..3).map(|_| JointAction::new(rng.gen_range(0..2), rng.gen_range(0..2))).collect();
            let mut a: Vec<JointAction> = (0..5).map(|_| JointAction::new(rng.gen_range(0..2), rng.gen_range(0..2))).collect();
            let mut b: Vec<JointAction> = (0..2).map(|_| JointAction::new(rng.gen_range(0..2), rng.gen_range(0..2))).collect();
            a.extend(&tail);
            b.extend(&tail);
            // our own actions in the tail are irrelevant as well
            b.iter_mut().rev().take(3).for_each(|ja| ja.i = 1 - ja.i);
            let da = tree.action_distribution(&History::from_actions(a), Player::I).unwrap();
            let db = tree.action_distribution(&History::from_actions(b), Player::I).unwrap();
            assert_eq!(da, db);
            assert!(da.prob(0) == 0.0 || da.prob(0) == 1.0);
        }
    }

    #[test]
    fn gp_operators_keep_trees_valid() {
        let mut rng = seeded(17);
        let mut pool: Vec<DecisionTree> = (0..20).map(|_| DecisionTree::random(&mut rng)).collect();
        for _ in 0..500 {
            let a = rng.gen_range(0..pool.len());
            let b = rng.gen_range(0..pool.len());
            let mut child = pool[a].crossover(&pool[b], &mut rng);
            child.mutate(0.2, &mut rng);
            child.validate().unwrap();
            pool[a] = child;
        }
    }

    #[test]
    fn malformed_trees_are_rejected() {
        let repeated = TreeNode::Test {
            slot: 2,
            on0: Box::new(TreeNode::Test {
                slot: 2,
                on0: Box::new(TreeNode::Leaf { action: 0 }),
                on1: Box::new(TreeNode::Leaf { action: 1 }),
            }),
            on1: Box::new(TreeNode::Leaf { action: 1 }),
        };
        assert!(matches!(DecisionTree::new(repeated), Err(Error::Policy(_))));
        assert!(DecisionTree::new(TreeNode::Leaf { action: 2 }).is_err());
        let bad_slot = TreeNode::Test {
            slot: 4,
            on0: Box::new(TreeNode::Leaf { action: 0 }),
            on1: Box::new(TreeNode::Leaf { action: 1 }),
        };
        assert!(DecisionTree::new(bad_slot).is_err());
    }

    #[test]
    fn dissimilarity_counts_disagreeing_patterns() {
        let t = tit_for_tat();
        assert_eq!(t.dissimilarity(&t), 0.0);
        assert_eq!(t.dissimilarity(&DecisionTree::constant(0)), 0.5);
        assert_eq!(DecisionTree::constant(0).dissimilarity(&DecisionTree::constant(1)), 1.0);
    }

    #[test]
    fn nested_json() {
        let v = serde_json::to_value(tit_for_tat()).unwrap();
        assert_eq!(v["root"]["test"]["slot"], 1);
        assert_eq!(v["root"]["test"]["on1"]["leaf"]["action"], 1);
    }
}
