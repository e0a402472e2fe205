//! Automatic generation of expert and type sets, and the fictitious player.
//!
//! Three generators cover deterministic (co-evolved decision trees),
//! stochastic (co-evolved neural networks) and hybrid (leader, follower and
//! trigger agents) behaviour.

mod evolve;
mod fictitious;
mod lft;
mod net;
mod sets;
mod tree;

pub use evolve::{coevolve_decision_trees, coevolve_neural_nets, coevolve_pools, play_pair, EvolutionParams, Genome, Pools};
pub use fictitious::FictitiousPlayer;
pub use lft::{LftAgent, LftState, LftVariant, DEFAULT_PUNISH_LEN};
pub use net::{NetMemory, NeuralNet, GENOME_LEN};
pub use sets::{generate_lft_set, sample_type_sets, Generator, TypeSets, SET_SIZE};
pub use tree::{DecisionTree, TreeMemory, TreeNode, TREE_MEMORY};

use crate::gamekit::{Game, Player};
use crate::policy::Policy;

/// The adaptive opponent that best-responds to our empirical action frequencies.
pub fn fictitious_play_policy(game: &Game, role: Player) -> Policy {
    Policy::Fictitious(FictitiousPlayer::new(game, role))
}
