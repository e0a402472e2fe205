//! Games, joint actions, histories and payoff utilities for 2x2 repeated games.

mod benchmark;
mod security;

pub use benchmark::{
    canonical_form, classify_no_conflict, enumerate_rapoport_guyer, normalize_payoffs,
    ordinal_games, transform, Transform,
};
pub use security::{maximin_strategy, minimax_punishment, punishment_value};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of actions per player. The benchmark is strictly 2x2.
pub const NUM_ACTIONS: usize = 2;

/// Comparison tolerance for payoffs and probabilities.
pub const PAYOFF_TOL: f64 = 1e-12;

pub type PayoffMatrix = [[f64; NUM_ACTIONS]; NUM_ACTIONS];

/// The two seats of the game: `I` is the player we control, `J` the other one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    I,
    J,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::I => Player::J,
            Player::J => Player::I,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::I => 0,
            Player::J => 1,
        }
    }

    pub fn parse(s: &str) -> Result<Player> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "0" | "row" => Ok(Player::I),
            "j" | "1" | "col" | "column" => Ok(Player::J),
            other => Err(Error::Parse(format!("unknown player `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JointAction {
    pub i: usize,
    pub j: usize,
}

impl JointAction {
    pub fn new(i: usize, j: usize) -> Self {
        debug_assert!(i < NUM_ACTIONS && j < NUM_ACTIONS);
        JointAction { i, j }
    }

    /// All joint actions in row-major order.
    pub fn all() -> impl Iterator<Item = JointAction> {
        (0..NUM_ACTIONS).flat_map(|i| (0..NUM_ACTIONS).map(move |j| JointAction { i, j }))
    }

    pub fn of(self, player: Player) -> usize {
        match player {
            Player::I => self.i,
            Player::J => self.j,
        }
    }

    /// Builds the joint action from one player's perspective.
    pub fn from_roles(role: Player, own: usize, opp: usize) -> Self {
        match role {
            Player::I => JointAction::new(own, opp),
            Player::J => JointAction::new(opp, own),
        }
    }

    pub fn is_valid(self) -> bool {
        self.i < NUM_ACTIONS && self.j < NUM_ACTIONS
    }
}

/// Ordered joint actions of completed rounds. Append-only during a play.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct History {
    rounds: Vec<JointAction>,
}

impl History {
    pub fn new() -> Self {
        History::default()
    }

    pub fn from_actions(rounds: Vec<JointAction>) -> Self {
        History { rounds }
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn push(&mut self, joint: JointAction) {
        self.rounds.push(joint);
    }

    /// A copy extended by one joint action.
    pub fn extended(&self, joint: JointAction) -> History {
        let mut h = self.clone();
        h.push(joint);
        h
    }

    pub fn as_slice(&self) -> &[JointAction] {
        &self.rounds
    }

    pub fn prefix(&self, t: usize) -> History {
        History::from_actions(self.rounds[..t].to_vec())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, JointAction> {
        self.rounds.iter()
    }

    pub fn last(&self) -> Option<JointAction> {
        self.rounds.last().copied()
    }
}

impl<'a> IntoIterator for &'a History {
    type Item = &'a JointAction;
    type IntoIter = std::slice::Iter<'a, JointAction>;

    fn into_iter(self) -> Self::IntoIter {
        self.rounds.iter()
    }
}

/// A probability vector over one player's two actions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixedStrategy(pub [f64; NUM_ACTIONS]);

impl MixedStrategy {
    pub fn pure(action: usize) -> Self {
        let mut p = [0.0; NUM_ACTIONS];
        p[action] = 1.0;
        MixedStrategy(p)
    }

    pub fn uniform() -> Self {
        MixedStrategy([1.0 / NUM_ACTIONS as f64; NUM_ACTIONS])
    }

    /// Probability `p` on action 0, `1 - p` on action 1.
    pub fn binary(p0: f64) -> Self {
        MixedStrategy([p0, 1.0 - p0])
    }

    pub fn prob(&self, action: usize) -> f64 {
        self.0[action]
    }

    pub fn probs(&self) -> &[f64; NUM_ACTIONS] {
        &self.0
    }

    pub fn max_prob(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let sum: f64 = self.0.iter().sum();
        self.0.iter().all(|p| p.is_finite() && *p >= -tol) && (sum - 1.0).abs() <= tol
    }

    /// Expected value of `values[a]` under this strategy.
    pub fn expectation(&self, values: [f64; NUM_ACTIONS]) -> f64 {
        self.0.iter().zip(values).map(|(p, v)| p * v).sum()
    }
}

/// A 2x2 bimatrix game. Both matrices are indexed `[action_i][action_j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Game {
    pub label: String,
    pub payoffs_i: PayoffMatrix,
    pub payoffs_j: PayoffMatrix,
}

impl Game {
    pub fn new(label: impl Into<String>, payoffs_i: PayoffMatrix, payoffs_j: PayoffMatrix) -> Result<Self> {
        let g = Game {
            label: label.into(),
            payoffs_i,
            payoffs_j,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self
            .payoffs_i
            .iter()
            .chain(self.payoffs_j.iter())
            .flatten()
            .all(|v| v.is_finite());
        if finite {
            Ok(())
        } else {
            Err(Error::Game(format!("{}: payoffs must be finite", self.label)))
        }
    }

    /// The ordinal Prisoner's Dilemma with action 0 = cooperate, 1 = defect.
    pub fn prisoners_dilemma() -> Game {
        Game {
            label: "PD".into(),
            payoffs_i: [[3.0, 1.0], [4.0, 2.0]],
            payoffs_j: [[3.0, 4.0], [1.0, 2.0]],
        }
    }

    pub fn num_actions(&self, _player: Player) -> usize {
        NUM_ACTIONS
    }

    pub fn payoff(&self, player: Player, joint: JointAction) -> f64 {
        match player {
            Player::I => self.payoffs_i[joint.i][joint.j],
            Player::J => self.payoffs_j[joint.i][joint.j],
        }
    }

    /// The player's payoffs indexed `[own action][opponent action]`.
    pub fn own_matrix(&self, player: Player) -> PayoffMatrix {
        match player {
            Player::I => self.payoffs_i,
            Player::J => transpose(&self.payoffs_j),
        }
    }

    /// Row-major flattening `(payoffs_i, payoffs_j)` used for canonical ordering.
    pub fn flatten(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (k, v) in self.payoffs_i.iter().chain(self.payoffs_j.iter()).flatten().enumerate() {
            out[k] = *v;
        }
        out
    }

    pub fn min_payoff(&self, player: Player) -> f64 {
        self.own_matrix(player).iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_payoff(&self, player: Player) -> f64 {
        self.own_matrix(player).iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn transpose(m: &PayoffMatrix) -> PayoffMatrix {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}
