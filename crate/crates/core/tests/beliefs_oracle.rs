mod common;

use common::*;
use ehba::beliefs::{
    expected_payoffs_max, hba_select, posterior_batch, posterior_increment, BeliefState, PayoffMode, Planner, PlanningConfig,
};
use ehba::gamekit::{normalize_payoffs, Game, History, JointAction, Player};
use ehba::policy::{ConstantPolicy, SetRole};
use ehba::rng::seeded;
use ehba::{BehaviorPolicy, Distribution, Policy, PolicySet};
use rand::Rng;

#[test]
fn batch_posterior_matches_direct_bayes_and_increments() {
    let mut rng = seeded(11);
    let mut degenerate_seen = 0;
    for case in 0..150 {
        let n = rng.gen_range(1..=3);
        let types = random_set(&mut rng, n, SetRole::TypesForJ);
        let prior = random_prior(&mut rng, n);
        let pi = random_policy(&mut rng);
        let pj = if case % 4 == 0 { random_policy(&mut rng) } else { types.get(rng.gen_range(0..n)).clone() };
        let h = random_history(&mut rng, 20, &pi, &pj);
        let prior_d = Distribution::new(prior.clone()).unwrap();
        let batch = posterior_batch(&prior_d, &types, &h).unwrap();
        let mut inc = BeliefState::new(&prior_d);
        for t in 0..h.len() {
            inc = posterior_increment(&inc, &types, &h.prefix(t), h.as_slice()[t]).unwrap();
        }
        assert_eq!(batch.is_degenerate(), inc.is_degenerate());
        for (a, b) in batch.posterior().iter().zip(inc.posterior()) {
            assert!((a - b).abs() < 1e-12, "case {case}: {a} vs {b}");
        }
        for t in 0..=h.len() {
            let step = &batch.per_step_posteriors()[t];
            match bayes_oracle(&prior, &types, &h.prefix(t)) {
                Some(o) => {
                    assert!((step.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                    for (a, b) in step.iter().zip(&o) {
                        assert!((a - b).abs() < 1e-12, "case {case} t {t}: {a} vs {b}");
                    }
                }
                None => {
                    degenerate_seen += 1;
                    assert_eq!(step, &prior);
                }
            }
        }
        assert_eq!(batch.per_step_posteriors()[0], prior);
        assert_eq!(batch.per_step_posteriors().last().unwrap(), batch.posterior());
    }
    assert!(degenerate_seen > 0);
}

#[test]
fn planner_matches_backward_induction_over_explicit_histories() {
    let mut rng = seeded(12);
    for case in 0..80 {
        let game = random_game(&mut rng);
        let n = rng.gen_range(1..=3);
        let types = random_set(&mut rng, n, SetRole::TypesForJ);
        let posterior = random_prior(&mut rng, n);
        let pi = random_policy(&mut rng);
        let len = rng.gen_range(0..5);
        let h = random_history(&mut rng, len, &pi, types.get(0));
        let horizon = 1 + case % 3;
        let planner = Planner::new(&game, &types, &posterior).unwrap();
        let got = planner.max_totals(&types.states_after(&h), horizon);
        let want = max_oracle(&game, &types, &posterior, &h, horizon);
        for a in 0..2 {
            assert!((got[a] - want[a]).abs() < 1e-9, "case {case}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn expert_follow_values_match_trajectory_enumeration() {
    let mut rng = seeded(13);
    for case in 0..80 {
        let game = random_game(&mut rng);
        let n = rng.gen_range(1..=3);
        let types = random_set(&mut rng, n, SetRole::TypesForJ);
        let posterior = random_prior(&mut rng, n);
        let expert = random_policy(&mut rng);
        let len = rng.gen_range(0..5);
        let h = random_history(&mut rng, len, &expert, types.get(0));
        let horizon = 1 + case % 3;
        let belief = BeliefState::new(&Distribution::new(posterior.clone()).unwrap());
        let cfg = PlanningConfig::new(horizon, PayoffMode::Total).unwrap();
        let got = ehba::ehba::expert_future_payoff(&game, &expert, &types, &belief, &h, &cfg).unwrap();
        let want = follow_oracle(&game, &expert, &types, &posterior, &h, horizon);
        assert!((got - want).abs() < 1e-9, "case {case}: {got} vs {want}");
    }
}

fn pd() -> Game {
    normalize_payoffs(&Game::prisoners_dilemma()).unwrap()
}

fn constants(actions: &[f64]) -> PolicySet {
    let v = actions
        .iter()
        .enumerate()
        .map(|(k, p)| Policy::Constant(ConstantPolicy::new(format!("t{k}"), ehba::ActionDist::binary(*p))))
        .collect();
    PolicySet::new(SetRole::TypesForJ, v).unwrap()
}

#[test]
fn one_step_values_on_the_normalised_dilemma() {
    let g = pd();
    let cfg = PlanningConfig::new(1, PayoffMode::Average).unwrap();
    let defect = constants(&[0.0]);
    let v = expected_payoffs_max(&g, &defect, &BeliefState::uniform(1), &History::new(), &cfg).unwrap();
    assert!(v[0].abs() < 1e-12 && (v[1] - 1.0 / 3.0).abs() < 1e-12);
    let both = constants(&[1.0, 0.0]);
    let v = expected_payoffs_max(&g, &both, &BeliefState::uniform(2), &History::new(), &cfg).unwrap();
    assert!((v[0] - 1.0 / 3.0).abs() < 1e-12 && (v[1] - 2.0 / 3.0).abs() < 1e-12);
    let mut rng = seeded(0);
    assert_eq!(hba_select(&g, &defect, &BeliefState::uniform(1), &History::new(), &cfg, &mut rng).unwrap(), 1);
}

#[test]
fn degenerate_beliefs_select_uniformly() {
    let g = pd();
    let types = constants(&[1.0]);
    let h = History::from_actions(vec![JointAction::new(0, 1)]);
    let b = posterior_batch(&Distribution::uniform(1), &types, &h).unwrap();
    assert!(b.is_degenerate());
    let cfg = PlanningConfig::new(2, PayoffMode::Average).unwrap();
    let mut rng = seeded(4);
    let zeros = (0..10_000).filter(|_| hba_select(&g, &types, &b, &h, &cfg, &mut rng).unwrap() == 0).count();
    let f = zeros as f64 / 10_000.0;
    assert!((0.47..=0.53).contains(&f), "frequency {f}");
}

#[test]
fn node_expansions_are_geometric_in_the_horizon() {
    let g = pd();
    let types = constants(&[0.3, 0.6]);
    for h in 1..=5 {
        let p = Planner::new(&g, &types, &[0.5, 0.5]).unwrap();
        p.max_totals(&types.initial_states(), h);
        let expect: u64 = (1..=h as u32).map(|d| 4u64.pow(d)).sum();
        assert_eq!(p.expansions(), expect);
    }
}

#[test]
fn posterior_concentrates_on_a_deterministic_true_type() {
    let mut rng = seeded(21);
    let mut concentrated = 0;
    for _ in 0..40 {
        let trees: Vec<Policy> = (0..4).map(|_| Policy::Tree(ehba::genpolicies::DecisionTree::random(&mut rng))).collect();
        let Ok(types) = PolicySet::new(SetRole::TypesForJ, trees) else { continue };
        let truth = types.get(0).clone();
        let me = common::random_policy(&mut rng);
        let h = random_history(&mut rng, 60, &me, &truth);
        let b = posterior_batch(&Distribution::uniform(4), &types, &h).unwrap();
        let distinguishable = (1..4).all(|k| {
            (0..h.len()).any(|t| {
                let p = h.prefix(t);
                types.get(k).action_distribution(&p, Player::J).unwrap().prob(h.as_slice()[t].j) == 0.0
            })
        });
        if distinguishable {
            assert_eq!(b.posterior()[0], 1.0);
            concentrated += 1;
        } else {
            assert!(b.posterior()[0] > 0.0);
        }
    }
    assert!(concentrated > 10);
}
