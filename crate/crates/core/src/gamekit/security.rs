//! Closed-form security strategies for 2x2 games.
//!
//! Both solvers evaluate the piecewise-linear objective at the two pure
//! strategies and at the indifference point, preferring a pure strategy when
//! it attains the optimum (saddle point).

use super::{Game, MixedStrategy, PayoffMatrix, Player, PAYOFF_TOL};

/// Mixing probability on action 0 at which two linear functions
/// `p*x0 + (1-p)*x1` and `p*y0 + (1-p)*y1` intersect, if inside (0, 1).
fn indifference(x0: f64, x1: f64, y0: f64, y1: f64) -> Option<f64> {
    let denom = (x0 - x1) - (y0 - y1);
    if denom.abs() <= PAYOFF_TOL {
        return None;
    }
    let p = (y1 - x1) / denom;
    (p > 0.0 && p < 1.0).then_some(p)
}

fn guaranteed(m: &PayoffMatrix, p: f64) -> f64 {
    (0..2)
        .map(|c| p * m[0][c] + (1.0 - p) * m[1][c])
        .fold(f64::INFINITY, f64::min)
}

fn best_reply_value(opp: &PayoffMatrix, q: f64) -> f64 {
    (0..2)
        .map(|r| q * opp[r][0] + (1.0 - q) * opp[r][1])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The player's maximin mixed strategy and security value.
pub fn maximin_strategy(g: &Game, player: Player) -> (MixedStrategy, f64) {
    let m = g.own_matrix(player);
    let mut candidates = vec![1.0, 0.0];
    if let Some(p) = indifference(m[0][0], m[1][0], m[0][1], m[1][1]) {
        candidates.push(p);
    }
    let mut best = (candidates[0], guaranteed(&m, candidates[0]));
    for &p in &candidates[1..] {
        let v = guaranteed(&m, p);
        if v > best.1 + PAYOFF_TOL {
            best = (p, v);
        }
    }
    (MixedStrategy::binary(best.0), best.1)
}

/// The punisher's strategy that holds the opponent to the lowest best-reply payoff.
pub fn minimax_punishment(g: &Game, punisher: Player) -> MixedStrategy {
    let opp = g.own_matrix(punisher.other());
    let mut candidates = vec![1.0, 0.0];
    if let Some(q) = indifference(opp[0][0], opp[0][1], opp[1][0], opp[1][1]) {
        candidates.push(q);
    }
    let mut best = (candidates[0], best_reply_value(&opp, candidates[0]));
    for &q in &candidates[1..] {
        let v = best_reply_value(&opp, q);
        if v < best.1 - PAYOFF_TOL {
            best = (q, v);
        }
    }
    MixedStrategy::binary(best.0)
}

/// The opponent's best-reply payoff against the punisher's `strategy`.
pub fn punishment_value(g: &Game, punisher: Player, strategy: &MixedStrategy) -> f64 {
    best_reply_value(&g.own_matrix(punisher.other()), strategy.prob(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamekit::{enumerate_rapoport_guyer, normalize_payoffs};

    fn npd() -> Game {
        normalize_payoffs(&Game::prisoners_dilemma()).unwrap()
    }

    #[test]
    fn pd_maximin_is_pure_defect() {
        let (s, v) = maximin_strategy(&npd(), Player::I);
        assert_eq!(s, MixedStrategy::pure(1));
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        // exhaustive check against both opponent replies
        for c in 0..2 {
            let exp = s.expectation([npd().payoffs_i[0][c], npd().payoffs_i[1][c]]);
            assert!(exp >= v - 1e-12);
        }
    }

    #[test]
    fn matching_pennies_maximin_mixes_evenly() {
        let g = Game::new("mp", [[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let (s, v) = maximin_strategy(&g, Player::I);
        assert!((s.prob(0) - 0.5).abs() < 1e-12);
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dominant_row_is_chosen() {
        let g = Game::new("dom", [[4.0, 3.0], [2.0, 1.0]], [[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(maximin_strategy(&g, Player::I).0, MixedStrategy::pure(0));
        // column player: column 1 dominates
        assert_eq!(maximin_strategy(&g, Player::J).0, MixedStrategy::pure(1));
    }

    #[test]
    fn pd_punishment_is_defect() {
        let s = minimax_punishment(&npd(), Player::I);
        assert_eq!(s, MixedStrategy::pure(1));
        assert!((punishment_value(&npd(), Player::I, &s) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_sum_punishment_equals_maximin() {
        let a = [[0.3, 0.9], [0.8, 0.1]];
        let b = [[-0.3, -0.9], [-0.8, 0.1 * -1.0]];
        let g = Game::new("zs", a, b).unwrap();
        let punish = minimax_punishment(&g, Player::I);
        let (maximin, _) = maximin_strategy(&g, Player::I);
        assert!((punish.prob(0) - maximin.prob(0)).abs() < 1e-12);
    }

    #[test]
    fn security_values_against_grids() {
        for g in enumerate_rapoport_guyer() {
            let g = normalize_payoffs(&g).unwrap();
            for player in [Player::I, Player::J] {
                let (s, v) = maximin_strategy(&g, player);
                let m = g.own_matrix(player);
                for k in 0..=10_000 {
                    let q = k as f64 / 10_000.0;
                    let exp: f64 = (0..2)
                        .map(|r| s.prob(r) * (q * m[r][0] + (1.0 - q) * m[r][1]))
                        .sum();
                    assert!(exp >= v - 1e-9, "{} {:?}", g.label, player);
                }
                let punish = minimax_punishment(&g, player);
                let held = punishment_value(&g, player, &punish);
                for k in 0..=1000 {
                    let q = k as f64 / 1000.0;
                    let alt = punishment_value(&g, player, &MixedStrategy::binary(q));
                    assert!(held <= alt + 1e-9, "{} {:?}", g.label, player);
                }
            }
        }
    }
}
