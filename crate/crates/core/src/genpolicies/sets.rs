//! Sampling expert and type sets for one play.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::evolve::shuffled;
use super::{coevolve_decision_trees, coevolve_neural_nets, EvolutionParams, LftAgent};
use crate::error::{Error, Result};
use crate::gamekit::Game;
use crate::policy::{BehaviorPolicy, Policy, PolicySet, SetRole};

/// Experts and types handed to player i in the benchmark protocol.
pub const SET_SIZE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Lft,
    Cdt,
    Cnn,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::Lft => "lft",
            Generator::Cdt => "cdt",
            Generator::Cnn => "cnn",
        })
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lft" => Ok(Generator::Lft),
            "cdt" => Ok(Generator::Cdt),
            "cnn" => Ok(Generator::Cnn),
            other => Err(Error::Parse(format!("unknown generator `{other}`"))),
        }
    }
}

/// `count` LFT agents with distinct descriptors.
pub fn generate_lft_set(game: &Game, count: usize, role: SetRole, rng: &mut impl Rng) -> Result<PolicySet> {
    if count == 0 {
        return Err(Error::config("count must be at least 1"));
    }
    let mut seen = HashSet::new();
    let mut out: Vec<Policy> = Vec::with_capacity(count);
    let mut budget = 1000 * count;
    while out.len() < count {
        if budget == 0 {
            return Err(Error::Generation(format!("only {} unique LFT agents after retry budget", out.len())));
        }
        budget -= 1;
        let agent = LftAgent::random(game, rng);
        if seen.insert(agent.descriptor()) {
            out.push(agent.into());
        }
    }
    PolicySet::new(role, out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeSets {
    pub experts: PolicySet,
    pub types: PolicySet,
    pub true_type: Policy,
}

/// Draws 5 experts for i, 5 hypothesised types for j, and the true type of j.
///
/// Six candidate types are drawn; the true type is one of them. With
/// `include_true` the hypothesis set keeps the true type and drops a random
/// other candidate, otherwise it is the five remaining candidates.
pub fn sample_type_sets(
    generator: Generator,
    game: &Game,
    params: &EvolutionParams,
    rng: &mut impl Rng,
    include_true: bool,
) -> Result<TypeSets> {
    let (experts, candidates) = match generator {
        Generator::Lft => {
            let experts = generate_lft_set(game, SET_SIZE, SetRole::ExpertsForI, rng)?;
            let types = generate_lft_set(game, SET_SIZE + 1, SetRole::TypesForJ, rng)?;
            (experts, types)
        }
        Generator::Cdt => coevolve_decision_trees(game, SET_SIZE + 1, params, rng)?,
        Generator::Cnn => coevolve_neural_nets(game, SET_SIZE + 1, params, rng)?,
    };
    let experts = PolicySet::new(SetRole::ExpertsForI, experts.policies()[..SET_SIZE].to_vec())?;
    let candidates = shuffled(candidates.policies(), rng);
    let true_idx = rng.gen_range(0..candidates.len());
    let dropped = if include_true {
        let others: Vec<usize> = (0..candidates.len()).filter(|k| *k != true_idx).collect();
        others[rng.gen_range(0..others.len())]
    } else {
        true_idx
    };
    let types: Vec<Policy> = candidates
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != dropped)
        .map(|(_, p)| p.clone())
        .collect();
    Ok(TypeSets {
        experts,
        types: PolicySet::new(SetRole::TypesForJ, types)?,
        true_type: candidates[true_idx].clone(),
    })
}
