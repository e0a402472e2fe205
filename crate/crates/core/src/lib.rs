//! Expert algorithms that mix observed expert payoffs with payoffs predicted
//! from a Bayesian posterior over hypothesised opponent types.
//!
//! The crate is organised bottom-up:
//!
//! - [`gamekit`]: 2x2 bimatrix games, histories, the 78-game ordinal benchmark
//!   and security-strategy solvers.
//! - [`policy`]: the history-functional behaviour policy abstraction shared by
//!   experts (our player) and types (the other player).
//! - [`beliefs`]: type posteriors and the finite-horizon HBA planner.
//! - [`ehba`]: expert-follow payoff prediction, confidence and payoff mixing.
//! - [`experts`]: UCB1, EEE, S, Hedge and Exp3 behind one interface.
//! - [`genpolicies`]: generators for expert/type sets and the fictitious player.
//! - [`harness`]: the repeated-game experiment protocol and its CSV reports.

pub mod beliefs;
pub mod ehba;
pub mod error;
pub mod experts;
pub mod gamekit;
pub mod genpolicies;
pub mod harness;
pub mod policy;
pub mod rng;

pub use error::{Error, Result};
pub use gamekit::{Game, History, JointAction, MixedStrategy, Player};
pub use policy::{ActionDist, BehaviorPolicy, Distribution, Policy, PolicySet};
