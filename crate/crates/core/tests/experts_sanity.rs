use ehba::experts::{build_algorithm, AlgorithmKind, AlgorithmParams, Exp3, Exp3Params, ExpertAlgorithm, Hedge, HedgeParams, Ucb1, Ucb1Params};
use ehba::rng::seeded;
use rand::Rng;

/// Fraction of UCB1 pulls on the better of two Bernoulli experts.
pub fn ucb1_bernoulli_share(seed: u64, rounds: usize) -> f64 {
    let mut rng = seeded(seed);
    let mut u = Ucb1::new(2, Ucb1Params::default()).unwrap();
    let means = [0.8, 0.2];
    let mut good = 0;
    for _ in 0..rounds {
        let view = u.stats().observed.clone();
        let k = u.select(&view, &mut rng).unwrap().sample(&mut rng);
        let r = if rng.gen::<f64>() < means[k] { 1.0 } else { 0.0 };
        u.update(k, r, None).unwrap();
        good += usize::from(k == 0);
    }
    good as f64 / rounds as f64
}

#[test]
fn ucb1_finds_the_better_bernoulli_expert() {
    for seed in 0..10 {
        let share = ucb1_bernoulli_share(seed, 5000);
        assert!(share > 0.9, "seed {seed}: {share}");
    }
}

#[test]
fn hedge_weight_ratio_is_exponential_in_total_difference() {
    let mut rng = seeded(2);
    let mut h = Hedge::new(3, HedgeParams::default()).unwrap();
    for _ in 0..500 {
        let fb: Vec<f64> = (0..3).map(|_| rng.gen()).collect();
        let view = h.stats().observed.clone();
        let d = h.select(&view, &mut rng).unwrap();
        let k = d.sample(&mut rng);
        h.update(k, fb[k], Some(&fb)).unwrap();
        let g = h.stats().observed.clone();
        let d = h.select(&g, &mut rng).unwrap();
        let ratio = d.probs()[0] / d.probs()[1];
        assert!((ratio - (0.1 * (g[0] - g[1])).exp()).abs() < 1e-9 * ratio.max(1.0));
    }
}

#[test]
fn exp3_never_drops_below_the_exploration_floor() {
    let mut rng = seeded(3);
    let mut x = Exp3::new(5, Exp3Params::default()).unwrap();
    for t in 0..5000 {
        let view = x.stats().observed.clone();
        let d = x.select(&view, &mut rng).unwrap();
        assert!(d.probs().iter().all(|p| *p >= 0.1 / 5.0 - 1e-15), "round {t}");
        let k = d.sample(&mut rng);
        x.update(k, if k == 0 { 1.0 } else { 0.1 }, None).unwrap();
    }
}

#[test]
fn every_algorithm_handles_long_runs() {
    for kind in AlgorithmKind::ALL {
        let mut rng = seeded(9);
        let mut a = build_algorithm(kind, 5, &AlgorithmParams::default()).unwrap();
        for _ in 0..2000 {
            let view = a.stats().observed.clone();
            let d = a.select(&view, &mut rng).unwrap();
            assert!(d.is_valid());
            let k = d.sample(&mut rng);
            let fb: Vec<f64> = (0..5).map(|e| 0.1 * e as f64).collect();
            a.update(k, fb[k], Some(&fb)).unwrap();
        }
        if kind.natural_mode() == ehba::beliefs::PayoffMode::Average {
            assert!(a.stats().observed.iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }
}
