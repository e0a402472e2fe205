use std::cell::Cell;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::BeliefState;
use crate::error::{Error, Result};
use crate::gamekit::{Game, History, JointAction, Player, NUM_ACTIONS};
use crate::policy::{BehaviorPolicy, PolicySet};

/// Two values closer than this count as tied when picking an argmax.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayoffMode {
    /// Sum over the horizon divided by its length.
    #[default]
    Average,
    Total,
}

impl std::fmt::Display for PayoffMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PayoffMode::Average => "average",
            PayoffMode::Total => "total",
        })
    }
}

impl std::str::FromStr for PayoffMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" | "avg" => Ok(PayoffMode::Average),
            "total" => Ok(PayoffMode::Total),
            _ => Err(Error::Parse(format!("unknown payoff mode '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanningConfig {
    pub horizon: usize,
    pub payoff_mode: PayoffMode,
}

impl PlanningConfig {
    pub fn new(horizon: usize, payoff_mode: PayoffMode) -> Result<Self> {
        let c = PlanningConfig { horizon, payoff_mode };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("planning horizon must be at least 1"));
        }
        Ok(())
    }

    /// Converts a horizon total into the configured payoff mode.
    pub fn scale(&self, total: f64) -> f64 {
        match self.payoff_mode {
            PayoffMode::Average => total / self.horizon as f64,
            PayoffMode::Total => total,
        }
    }
}

/// Lookahead over imagined continuations with the posterior held fixed at
/// its current value.
///
/// Only types with positive posterior are simulated; their weighted action
/// probabilities are folded into one mixture per node and branches the
/// mixture gives zero probability are skipped.
pub struct Planner<'a, P: BehaviorPolicy> {
    game: &'a Game,
    types: &'a PolicySet<P>,
    active: Vec<usize>,
    weights: Vec<f64>,
    me: Player,
    expansions: Cell<u64>,
}

impl<'a, P: BehaviorPolicy> Planner<'a, P> {
    pub fn new(game: &'a Game, types: &'a PolicySet<P>, posterior: &[f64]) -> Result<Self> {
        if posterior.len() != types.len() {
            return Err(Error::config(format!(
                "posterior over {} types, {} types given",
                posterior.len(),
                types.len()
            )));
        }
        let (active, weights) = posterior.iter().enumerate().filter(|(_, p)| **p > 0.0).map(|(k, p)| (k, *p)).unzip();
        Ok(Planner {
            game,
            types,
            active,
            weights,
            me: types.player().other(),
            expansions: Cell::new(0),
        })
    }

    /// Number of (own action, other action) pairs expanded so far.
    pub fn expansions(&self) -> u64 {
        self.expansions.get()
    }

    /// Horizon totals `E^a_h` for each own action, given type states for the
    /// current history.
    pub fn max_totals(&self, states: &[P::State], horizon: usize) -> [f64; NUM_ACTIONS] {
        let s = self.pick(states);
        self.max_rec(&s, horizon)
    }

    /// Horizon total when the planning player follows `expert` at the root
    /// and at every imagined continuation.
    pub fn follow_total<E: BehaviorPolicy>(&self, expert: &E, expert_state: &E::State, states: &[P::State], horizon: usize) -> f64 {
        let s = self.pick(states);
        self.follow_rec(expert, expert_state, &s, horizon)
    }

    fn pick(&self, states: &[P::State]) -> Vec<P::State> {
        self.active.iter().map(|&k| states[k].clone()).collect()
    }

    fn mixture(&self, states: &[P::State]) -> [f64; NUM_ACTIONS] {
        let role = self.types.player();
        let mut m = [0.0; NUM_ACTIONS];
        for ((&k, w), s) in self.active.iter().zip(&self.weights).zip(states) {
            let d = self.types.get(k).probs(s, role);
            for (mj, p) in m.iter_mut().zip(d.probs()) {
                *mj += w * p;
            }
        }
        m
    }

    fn advance(&self, states: &[P::State], joint: JointAction) -> Vec<P::State> {
        let role = self.types.player();
        let mut next = states.to_vec();
        for (&k, s) in self.active.iter().zip(next.iter_mut()) {
            self.types.get(k).observe(s, joint, role);
        }
        next
    }

    fn max_rec(&self, states: &[P::State], depth: usize) -> [f64; NUM_ACTIONS] {
        let m = self.mixture(states);
        let mut e = [0.0; NUM_ACTIONS];
        for (own, e_own) in e.iter_mut().enumerate() {
            for (opp, &mj) in m.iter().enumerate() {
                if mj == 0.0 {
                    continue;
                }
                self.expansions.set(self.expansions.get() + 1);
                let joint = JointAction::from_roles(self.me, own, opp);
                let mut q = self.game.payoff(self.me, joint);
                if depth > 1 {
                    let next = self.max_rec(&self.advance(states, joint), depth - 1);
                    q += next[0].max(next[1]);
                }
                *e_own += mj * q;
            }
        }
        e
    }

    fn follow_rec<E: BehaviorPolicy>(&self, expert: &E, es: &E::State, states: &[P::State], depth: usize) -> f64 {
        let pe = expert.probs(es, self.me);
        let m = self.mixture(states);
        let mut total = 0.0;
        for (own, &pi) in pe.probs().iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (opp, &mj) in m.iter().enumerate() {
                if mj == 0.0 {
                    continue;
                }
                self.expansions.set(self.expansions.get() + 1);
                let joint = JointAction::from_roles(self.me, own, opp);
                let mut q = self.game.payoff(self.me, joint);
                if depth > 1 {
                    let mut next_es = es.clone();
                    expert.observe(&mut next_es, joint, self.me);
                    q += self.follow_rec(expert, &next_es, &self.advance(states, joint), depth - 1);
                }
                total += pi * mj * q;
            }
        }
        total
    }
}

/// Expected payoff of each own action under the belief, in the configured
/// payoff mode.
pub fn expected_payoffs_max<P: BehaviorPolicy>(
    game: &Game,
    types: &PolicySet<P>,
    belief: &BeliefState,
    history: &History,
    cfg: &PlanningConfig,
) -> Result<[f64; NUM_ACTIONS]> {
    cfg.validate()?;
    let planner = Planner::new(game, types, belief.posterior())?;
    let totals = planner.max_totals(&types.states_after(history), cfg.horizon);
    Ok(totals.map(|t| cfg.scale(t)))
}

/// Argmax with ties (within [`TIE_TOL`]) broken uniformly at random.
pub fn hba_select_from_values(values: &[f64], rng: &mut impl Rng) -> usize {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..values.len()).filter(|&a| values[a] >= best - TIE_TOL).collect();
    if ties.len() == 1 {
        ties[0]
    } else {
        ties[rng.gen_range(0..ties.len())]
    }
}

/// HBA action choice. A degenerate belief gives a uniformly random action.
pub fn hba_select<P: BehaviorPolicy>(
    game: &Game,
    types: &PolicySet<P>,
    belief: &BeliefState,
    history: &History,
    cfg: &PlanningConfig,
    rng: &mut impl Rng,
) -> Result<usize> {
    if belief.is_degenerate() {
        return Ok(rng.gen_range(0..NUM_ACTIONS));
    }
    let v = expected_payoffs_max(game, types, belief, history, cfg)?;
    Ok(hba_select_from_values(&v, rng))
}

/// Mean over the history prefixes of `sum_a min(pi_a(a), pi_b(a))`.
pub fn probability_overlap<A: BehaviorPolicy, B: BehaviorPolicy>(a: &A, b: &B, history: &History, role: Player) -> Result<f64> {
    if history.is_empty() {
        return Err(Error::Domain("probability overlap needs at least one round".into()));
    }
    let mut sa = a.initial_state();
    let mut sb = b.initial_state();
    let mut sum = 0.0;
    for joint in history {
        let (pa, pb) = (a.probs(&sa, role), b.probs(&sb, role));
        sum += pa.probs().iter().zip(pb.probs()).map(|(x, y)| x.min(*y)).sum::<f64>();
        a.observe(&mut sa, *joint, role);
        b.observe(&mut sb, *joint, role);
    }
    Ok(sum / history.len() as f64)
}
