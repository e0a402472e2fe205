//! Independent reference computations shared by the integration tests.
//!
//! Everything here recomputes policy outputs from scratch on explicit
//! histories and sums over types explicitly, without the state folding,
//! mixture collapsing or pruning used by the library.
#![allow(dead_code)]

use ehba::gamekit::{Game, History, JointAction, Player};
use ehba::genpolicies::NeuralNet;
use ehba::policy::{ConstantPolicy, ReactivePolicy, SetRole};
use ehba::{ActionDist, BehaviorPolicy, Policy, PolicySet};
use rand::Rng;

pub fn random_game(rng: &mut impl Rng) -> Game {
    let mut m = || [[rng.gen::<f64>(), rng.gen::<f64>()], [rng.gen::<f64>(), rng.gen::<f64>()]];
    let (a, b) = (m(), m());
    Game::new("random", a, b).unwrap()
}

fn prob(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..6) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen(),
    }
}

/// A constant, reactive or neural-network policy with random parameters.
pub fn random_policy(rng: &mut impl Rng) -> Policy {
    match rng.gen_range(0..3) {
        0 => Policy::Constant(ConstantPolicy::new(format!("c{}", rng.gen::<u32>()), ActionDist::binary(prob(rng)))),
        1 => Policy::Reactive(ReactivePolicy::new(
            prob(rng),
            [[prob(rng), prob(rng)], [prob(rng), prob(rng)]],
        )),
        _ => Policy::Net(NeuralNet::random(rng)),
    }
}

pub fn random_set(rng: &mut impl Rng, n: usize, role: SetRole) -> PolicySet {
    loop {
        let v: Vec<Policy> = (0..n).map(|_| random_policy(rng)).collect();
        if let Ok(s) = PolicySet::new(role, v) {
            return s;
        }
    }
}

/// A history generated by two policies, one per player.
pub fn random_history(rng: &mut impl Rng, len: usize, pi: &Policy, pj: &Policy) -> History {
    let mut h = History::new();
    for _ in 0..len {
        let di = pi.action_distribution(&h, Player::I).unwrap();
        let dj = pj.action_distribution(&h, Player::J).unwrap();
        let ai = usize::from(rng.gen::<f64>() >= di.prob(0));
        let aj = usize::from(rng.gen::<f64>() >= dj.prob(0));
        h.push(JointAction::new(ai, aj));
    }
    h
}

/// Bayes rule by direct products over prefixes; `None` if every weight vanishes.
pub fn bayes_oracle(prior: &[f64], types: &PolicySet, h: &History) -> Option<Vec<f64>> {
    let mut w: Vec<f64> = prior.to_vec();
    for t in 0..h.len() {
        let prefix = h.prefix(t);
        let aj = h.as_slice()[t].j;
        for (k, ty) in types.iter().enumerate() {
            w[k] *= ty.action_distribution(&prefix, Player::J).unwrap().prob(aj);
        }
    }
    let s: f64 = w.iter().sum();
    (s > 0.0).then(|| w.iter().map(|x| x / s).collect())
}

/// Horizon totals with the max continuation, by backward induction over the
/// explicit tree of extended histories.
pub fn max_oracle(game: &Game, types: &PolicySet, posterior: &[f64], h: &History, depth: usize) -> [f64; 2] {
    let mut e = [0.0; 2];
    for (ai, slot) in e.iter_mut().enumerate() {
        for aj in 0..2 {
            for (k, ty) in types.iter().enumerate() {
                let p = posterior[k] * ty.action_distribution(h, Player::J).unwrap().prob(aj);
                let joint = JointAction::new(ai, aj);
                let mut q = game.payoff(Player::I, joint);
                if depth > 1 {
                    let next = max_oracle(game, types, posterior, &h.extended(joint), depth - 1);
                    q += next[0].max(next[1]);
                }
                *slot += p * q;
            }
        }
    }
    e
}

/// Horizon total of following `expert`, by enumerating every depth-`depth`
/// joint-action trajectory with its probability and payoff sum.
pub fn follow_oracle(game: &Game, expert: &Policy, types: &PolicySet, posterior: &[f64], h: &History, depth: usize) -> f64 {
    let mut total = 0.0;
    let n = 4usize.pow(depth as u32);
    for code in 0..n {
        let mut hist = h.clone();
        let mut prob = 1.0;
        let mut sum = 0.0;
        let mut c = code;
        for _ in 0..depth {
            let joint = JointAction::new((c >> 1) & 1, c & 1);
            c >>= 2;
            let pe = expert.action_distribution(&hist, Player::I).unwrap().prob(joint.i);
            let mix: f64 = types
                .iter()
                .zip(posterior)
                .map(|(ty, w)| w * ty.action_distribution(&hist, Player::J).unwrap().prob(joint.j))
                .sum();
            prob *= pe * mix;
            sum += game.payoff(Player::I, joint);
            hist.push(joint);
        }
        total += prob * sum;
    }
    total
}

pub fn random_prior(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.05).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}
