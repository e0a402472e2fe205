//! Leader, follower and trigger agents built around a cyclic target solution.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamekit::{maximin_strategy, minimax_punishment, Game, JointAction, Player};
use crate::policy::{ActionDist, BehaviorPolicy};
use crate::rng::{combine, mix64};

/// Rounds of punishment a leader applies before resuming the target.
pub const DEFAULT_PUNISH_LEN: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LftVariant {
    /// Punishes a deviation with the minimax strategy for `punish_len` rounds.
    Leader,
    /// Jumps to a pseudo-random position of the target after any deviation.
    Follower,
    /// Switches to its maximin strategy forever after a deviation.
    Trigger,
}

impl LftVariant {
    pub const ALL: [LftVariant; 3] = [LftVariant::Leader, LftVariant::Follower, LftVariant::Trigger];

    fn name(self) -> &'static str {
        match self {
            LftVariant::Leader => "leader",
            LftVariant::Follower => "follower",
            LftVariant::Trigger => "trigger",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LftAgent {
    pub variant: LftVariant,
    pub target: Vec<JointAction>,
    pub punish_len: usize,
    /// Seeds the follower's reset positions, which are a pure function of the
    /// round in which the deviation happened.
    #[serde(default)]
    pub reset_seed: u64,
    /// Minimax punishment per seat, indexed by `Player::index`.
    pub punish: [ActionDist; 2],
    /// Maximin strategy per seat, indexed by `Player::index`.
    pub maximin: [ActionDist; 2],
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LftState {
    pub pos: usize,
    pub punish_left: usize,
    pub triggered: bool,
    pub round: usize,
}

impl LftAgent {
    pub fn new(game: &Game, variant: LftVariant, target: Vec<JointAction>, punish_len: usize, reset_seed: u64) -> Result<Self> {
        if target.is_empty() || target.iter().any(|ja| !ja.is_valid()) {
            return Err(Error::config("target solution must be a non-empty sequence of valid joint actions"));
        }
        let security = |f: &dyn Fn(Player) -> ActionDist| [f(Player::I), f(Player::J)];
        Ok(LftAgent {
            variant,
            target,
            punish_len,
            reset_seed,
            punish: security(&|p| minimax_punishment(game, p)),
            maximin: security(&|p| maximin_strategy(game, p).0),
        })
    }

    /// Random variant around a random target of length 1..=3.
    pub fn random(game: &Game, rng: &mut impl Rng) -> Self {
        let variant = LftVariant::ALL[rng.gen_range(0..3)];
        let len = rng.gen_range(1..=3);
        let target = (0..len)
            .map(|_| JointAction::new(rng.gen_range(0..2), rng.gen_range(0..2)))
            .collect();
        let reset_seed = rng.gen();
        LftAgent::new(game, variant, target, DEFAULT_PUNISH_LEN, reset_seed).expect("valid target")
    }

    /// Position the follower resumes at after a deviation observed in `round`.
    pub fn reset_position(&self, round: usize) -> usize {
        (mix64(combine(self.reset_seed, round as u64)) % self.target.len() as u64) as usize
    }

    fn advance(&self, pos: usize) -> usize {
        (pos + 1) % self.target.len()
    }
}

impl BehaviorPolicy for LftAgent {
    type State = LftState;

    fn descriptor(&self) -> String {
        let target: Vec<String> = self.target.iter().map(|ja| format!("{}{}", ja.i, ja.j)).collect();
        match self.variant {
            LftVariant::Leader => format!("lft:leader:{}:p{}", target.join("-"), self.punish_len),
            v => format!("lft:{}:{}", v.name(), target.join("-")),
        }
    }

    fn initial_state(&self) -> LftState {
        LftState::default()
    }

    fn observe(&self, s: &mut LftState, joint: JointAction, role: Player) {
        let round = s.round;
        s.round += 1;
        let expected = self.target[s.pos];
        let opp = role.other();
        match self.variant {
            LftVariant::Leader => {
                if s.punish_left > 0 {
                    s.punish_left -= 1;
                    if s.punish_left == 0 {
                        s.pos = 0;
                    }
                } else if joint.of(opp) != expected.of(opp) && self.punish_len > 0 {
                    s.punish_left = self.punish_len;
                } else {
                    s.pos = self.advance(s.pos);
                }
            }
            LftVariant::Trigger => {
                if !s.triggered {
                    if joint.of(opp) != expected.of(opp) {
                        s.triggered = true;
                    } else {
                        s.pos = self.advance(s.pos);
                    }
                }
            }
            LftVariant::Follower => {
                s.pos = if joint != expected {
                    self.reset_position(round)
                } else {
                    self.advance(s.pos)
                };
            }
        }
    }

    fn probs(&self, s: &LftState, role: Player) -> ActionDist {
        match self.variant {
            LftVariant::Leader if s.punish_left > 0 => self.punish[role.index()],
            LftVariant::Trigger if s.triggered => self.maximin[role.index()],
            _ => ActionDist::pure(self.target[s.pos].of(role)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamekit::{normalize_payoffs, History};

    fn npd() -> Game {
        normalize_payoffs(&Game::prisoners_dilemma()).unwrap()
    }

    fn alternating() -> Vec<JointAction> {
        vec![JointAction::new(0, 0), JointAction::new(1, 1)]
    }

    #[test]
    fn leader_traces_target_when_unchallenged() {
        let agent = LftAgent::new(&npd(), LftVariant::Leader, alternating(), 3, 0).unwrap();
        let mut h = History::new();
        for t in 0..9 {
            let d = agent.action_distribution(&h, Player::J).unwrap();
            let expected = alternating()[t % 2];
            assert_eq!(d, ActionDist::pure(expected.j));
            h.push(expected);
        }
    }

    #[test]
    fn leader_punishes_for_finite_rounds() {
        let target = vec![JointAction::new(0, 0)];
        let agent = LftAgent::new(&npd(), LftVariant::Leader, target, 3, 0).unwrap();
        let mut h = History::from_actions(vec![JointAction::new(0, 0), JointAction::new(1, 0)]);
        for _ in 0..3 {
            // minimax punishment in the PD is defection
            assert_eq!(agent.action_distribution(&h, Player::J).unwrap(), ActionDist::pure(1));
            h.push(JointAction::new(0, 1));
        }
        assert_eq!(agent.action_distribution(&h, Player::J).unwrap(), ActionDist::pure(0));
    }

    #[test]
    fn trigger_switches_to_maximin_forever() {
        let target = vec![JointAction::new(0, 0)];
        let agent = LftAgent::new(&npd(), LftVariant::Trigger, target, 3, 0).unwrap();
        let maximin = maximin_strategy(&npd(), Player::J).0;
        let mut h = History::from_actions(vec![JointAction::new(0, 0); 2]);
        h.push(JointAction::new(1, 0)); // deviation in round 2
        for _ in 0..20 {
            assert_eq!(agent.action_distribution(&h, Player::J).unwrap(), maximin);
            h.push(JointAction::new(0, 0));
        }
    }

    #[test]
    fn follower_resets_are_uniform() {
        // chi-square goodness of fit over 10,000 resets, 2 degrees of freedom
        let target = vec![JointAction::new(0, 0), JointAction::new(0, 1), JointAction::new(1, 1)];
        let mut counts = [0usize; 3];
        for seed in 0..10_000u64 {
            let agent = LftAgent::new(&npd(), LftVariant::Follower, target.clone(), 3, seed).unwrap();
            let mut s = agent.initial_state();
            agent.observe(&mut s, JointAction::new(1, 0), Player::J);
            counts[s.pos] += 1;
        }
        let expected = 10_000.0 / 3.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 99.9% quantile of chi-square(2)
        assert!(chi2 < 13.82, "{counts:?} chi2={chi2}");
    }

    #[test]
    fn follower_is_a_function_of_history() {
        let agent = LftAgent::new(&npd(), LftVariant::Follower, alternating(), 3, 99).unwrap();
        let h = History::from_actions(vec![JointAction::new(1, 0), JointAction::new(0, 1), JointAction::new(1, 1)]);
        let a = agent.action_distribution(&h, Player::I).unwrap();
        let b = agent.action_distribution(&h, Player::I).unwrap();
        assert_eq!(a.0.map(f64::to_bits), b.0.map(f64::to_bits));
    }

    #[test]
    fn json_carries_variant_target_and_punish_len() {
        let agent = LftAgent::new(&npd(), LftVariant::Leader, alternating(), 3, 5).unwrap();
        let v = serde_json::to_value(&agent).unwrap();
        assert_eq!(v["variant"], "leader");
        assert_eq!(v["punish_len"], 3);
        assert_eq!(v["target"][1]["i"], 1);
        let back: LftAgent = serde_json::from_value(v).unwrap();
        assert_eq!(back, agent);
    }
}
