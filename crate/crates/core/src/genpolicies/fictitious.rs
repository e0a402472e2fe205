//! Best response to the empirical frequency of the opponent's past actions.

use serde::{Deserialize, Serialize};

use crate::gamekit::{Game, JointAction, PayoffMatrix, Player, PAYOFF_TOL};
use crate::policy::{ActionDist, BehaviorPolicy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FictitiousPlayer {
    /// Own payoffs indexed `[own][opponent]`.
    pub own_payoffs: PayoffMatrix,
}

impl FictitiousPlayer {
    pub fn new(game: &Game, role: Player) -> Self {
        FictitiousPlayer {
            own_payoffs: game.own_matrix(role),
        }
    }

    /// Best response to opponent action counts; ties split evenly.
    pub fn best_response(&self, counts: [u64; 2]) -> ActionDist {
        let n = counts[0] + counts[1];
        if n == 0 {
            return ActionDist::uniform();
        }
        let q = counts[0] as f64 / n as f64;
        let value = |a: usize| q * self.own_payoffs[a][0] + (1.0 - q) * self.own_payoffs[a][1];
        let (v0, v1) = (value(0), value(1));
        if (v0 - v1).abs() <= PAYOFF_TOL {
            ActionDist::uniform()
        } else if v0 > v1 {
            ActionDist::pure(0)
        } else {
            ActionDist::pure(1)
        }
    }
}

impl BehaviorPolicy for FictitiousPlayer {
    /// Counts of the opponent's actions so far.
    type State = [u64; 2];

    fn descriptor(&self) -> String {
        "fictitious-play".into()
    }

    fn initial_state(&self) -> [u64; 2] {
        [0, 0]
    }

    fn observe(&self, counts: &mut [u64; 2], joint: JointAction, role: Player) {
        counts[joint.of(role.other())] += 1;
    }

    fn probs(&self, counts: &[u64; 2], _: Player) -> ActionDist {
        self.best_response(*counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamekit::{normalize_payoffs, History};

    #[test]
    fn fallbacks_and_best_responses() {
        let g = normalize_payoffs(&Game::prisoners_dilemma()).unwrap();
        let fp = FictitiousPlayer::new(&g, Player::J);
        assert_eq!(fp.action_distribution(&History::new(), Player::J).unwrap(), ActionDist::uniform());
        let h = History::from_actions(vec![JointAction::new(0, 1); 3]);
        assert_eq!(fp.action_distribution(&h, Player::J).unwrap(), ActionDist::pure(1));
        // D is the best response to the 0.7/0.3 mixture: 0.7*1 + 0.3/3 > 0.7*2/3
        assert_eq!(fp.best_response([7, 3]), ActionDist::pure(1));

        let coord = Game::new("c", [[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let fp = FictitiousPlayer::new(&coord, Player::J);
        assert_eq!(fp.best_response([3, 0]), ActionDist::pure(0));
        assert_eq!(fp.best_response([2, 2]), ActionDist::uniform());
    }
}
