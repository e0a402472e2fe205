mod common;

use common::*;
use ehba::beliefs::{BeliefState, PayoffMode, Planner, PlanningConfig};
use ehba::ehba::{expert_future_payoff, mix_payoffs, predicted_payoffs, ConfidenceState, MixConfig, PredictedPayoffs};
use ehba::gamekit::{normalize_payoffs, Game, History, JointAction, Player};
use ehba::policy::{ConstantPolicy, GrimTrigger, SetRole};
use ehba::rng::seeded;
use ehba::{ActionDist, BehaviorPolicy, Distribution, Policy, PolicySet};
use proptest::prelude::*;
use rand::Rng;

/// Plays the planner's argmax at every node, replanning with the horizon
/// left below the root.
struct ArgmaxExpert<'a> {
    game: &'a Game,
    types: &'a PolicySet,
    posterior: Vec<f64>,
    root_len: usize,
    horizon: usize,
}

impl BehaviorPolicy for ArgmaxExpert<'_> {
    type State = History;

    fn descriptor(&self) -> String {
        "argmax".into()
    }

    fn initial_state(&self) -> History {
        History::new()
    }

    fn observe(&self, state: &mut History, joint: JointAction, _role: Player) {
        state.push(joint);
    }

    fn probs(&self, state: &History, _role: Player) -> ActionDist {
        let left = self.horizon - (state.len() - self.root_len);
        let p = Planner::new(self.game, self.types, &self.posterior).unwrap();
        let v = p.max_totals(&self.types.states_after(state), left);
        ActionDist::pure(if v[1] > v[0] { 1 } else { 0 })
    }
}

#[test]
fn following_the_argmax_policy_recovers_the_max_values() {
    let mut rng = seeded(31);
    for case in 0..40 {
        let game = random_game(&mut rng);
        let n = rng.gen_range(1..=3);
        let types = random_set(&mut rng, n, SetRole::TypesForJ);
        let posterior = random_prior(&mut rng, n);
        let pi = random_policy(&mut rng);
        let len = rng.gen_range(0..4);
        let h = random_history(&mut rng, len, &pi, types.get(0));
        let horizon = 1 + case % 4;
        let belief = BeliefState::new(&Distribution::new(posterior.clone()).unwrap());
        let cfg = PlanningConfig::new(horizon, PayoffMode::Average).unwrap();
        let expert = ArgmaxExpert { game: &game, types: &types, posterior: posterior.clone(), root_len: h.len(), horizon };
        let follow = expert_future_payoff(&game, &expert, &types, &belief, &h, &cfg).unwrap();
        let max = ehba::beliefs::expected_payoffs_max(&game, &types, &belief, &h, &cfg).unwrap();
        assert!((follow - max[0].max(max[1])).abs() < 1e-9, "case {case}");
    }
}

#[test]
fn mixing_with_the_truth_never_moves_away_from_it() {
    let mut rng = seeded(32);
    for _ in 0..200 {
        let game = random_game(&mut rng);
        let truth_type = random_policy(&mut rng);
        let types = PolicySet::new(SetRole::TypesForJ, vec![truth_type]).unwrap();
        let experts = random_set(&mut rng, 3, SetRole::ExpertsForI);
        let horizon = rng.gen_range(1..=3);
        let cfg = PlanningConfig::new(horizon, PayoffMode::Average).unwrap();
        let pred = predicted_payoffs(&game, &experts, &types, &BeliefState::uniform(1), &History::new(), &cfg).unwrap();
        let truth: Vec<f64> = experts
            .iter()
            .map(|e| follow_oracle(&game, e, &types, &[1.0], &History::new(), horizon) / horizon as f64)
            .collect();
        let observed: Vec<f64> = (0..3).map(|_| rng.gen()).collect();
        for step in 0..=10 {
            let c = step as f64 / 10.0;
            let m = mix_payoffs(&observed, &pred, c, &MixConfig::default()).unwrap();
            for k in 0..3 {
                assert!((m[k] - truth[k]).abs() <= (observed[k] - truth[k]).abs() + 1e-12);
            }
        }
    }
}

fn pd() -> Game {
    normalize_payoffs(&Game::prisoners_dilemma()).unwrap()
}

fn always(role: SetRole, actions: &[usize]) -> PolicySet {
    let v = actions.iter().map(|&a| Policy::Constant(ConstantPolicy::pure(format!("always-{a}"), a))).collect();
    PolicySet::new(role, v).unwrap()
}

#[test]
fn predictions_follow_the_expert_order() {
    let g = pd();
    let types = PolicySet::new(SetRole::TypesForJ, vec![Policy::Grim(GrimTrigger::new(4, 0))]).unwrap();
    let cfg = PlanningConfig::new(3, PayoffMode::Average).unwrap();
    let cd = always(SetRole::ExpertsForI, &[0, 1]);
    let dc = always(SetRole::ExpertsForI, &[1, 0]);
    let b = BeliefState::uniform(1);
    let p1 = predicted_payoffs(&g, &cd, &types, &b, &History::new(), &cfg).unwrap();
    let p2 = predicted_payoffs(&g, &dc, &types, &b, &History::new(), &cfg).unwrap();
    assert_eq!(p1.values, vec![p2.values[1], p2.values[0]]);
    assert!(p1.values[1] > p1.values[0]);
    assert_eq!(p1.horizon_used, 3);
}

#[test]
fn confidence_of_a_matching_deterministic_type_stays_one() {
    let types = always(SetRole::TypesForJ, &[1]);
    let mut c = ConfidenceState::default();
    let mut h = History::new();
    for _ in 0..50 {
        c = ehba::ehba::confidence_update(&c, &[1.0], &types, &h, 1).unwrap();
        h.push(JointAction::new(0, 1));
        assert_eq!(c.confidence(), 1.0);
    }
}

proptest! {
    #[test]
    fn confidence_stays_in_the_unit_interval(
        steps in proptest::collection::vec((proptest::collection::vec(0.0f64..1.0, 3), proptest::collection::vec(0.01f64..1.0, 3), 0usize..2), 1..40),
    ) {
        let mut c = ConfidenceState::default();
        for (p0s, w, a) in steps {
            let probs: Vec<ActionDist> = p0s.iter().map(|p| ActionDist::binary(*p)).collect();
            let s: f64 = w.iter().sum();
            let post: Vec<f64> = w.iter().map(|x| x / s).collect();
            c.observe(&post, &probs, a).unwrap();
            let v = c.confidence();
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn mixing_is_monotone_when_predictions_dominate(
        obs in proptest::collection::vec(0.0f64..1.0, 4),
        lift in proptest::collection::vec(0.0f64..1.0, 4),
        c1 in 0.0f64..1.0,
        c2 in 0.0f64..1.0,
    ) {
        let pred = PredictedPayoffs { values: obs.iter().zip(&lift).map(|(o, l)| o + l).collect(), horizon_used: 1 };
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let a = mix_payoffs(&obs, &pred, lo, &MixConfig::default()).unwrap();
        let b = mix_payoffs(&obs, &pred, hi, &MixConfig::default()).unwrap();
        for k in 0..4 {
            prop_assert!(a[k] <= b[k] + 1e-12);
        }
    }
}
