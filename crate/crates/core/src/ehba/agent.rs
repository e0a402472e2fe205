use serde::Serialize;

use super::{mix_payoffs, predict_from_states, ConfidenceState, MixConfig};
use crate::beliefs::{likelihoods, BeliefState, Planner, PlanningConfig};
use crate::error::{Error, Result};
use crate::experts::ExpertAlgorithm;
use crate::gamekit::{Game, History, JointAction, Player};
use crate::policy::{BehaviorPolicy, Distribution, Policy, PolicySet, PolicyState};
use crate::rng::RngStream;

/// Expected payoff each expert's current recommendation earns against
/// `opp_action`.
pub fn recommendation_payoffs<E: BehaviorPolicy>(
    game: &Game,
    experts: &PolicySet<E>,
    states: &[E::State],
    opp_action: usize,
) -> Vec<f64> {
    let me = experts.player();
    experts
        .iter()
        .zip(states)
        .map(|(e, s)| {
            let d = e.probs(s, me);
            (0..2).map(|a| d.prob(a) * game.payoff(me, JointAction::from_roles(me, a, opp_action))).sum()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EhbaOptions {
    pub planning: PlanningConfig,
    pub mix: MixConfig,
    /// Replaces the computed confidence when set.
    pub confidence_override: Option<f64>,
    pub initial_confidence: f64,
}

/// What the agent decided in one round, with the quantities behind it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decision {
    pub t: usize,
    pub confidence: f64,
    pub posterior: Vec<f64>,
    pub observed: Vec<f64>,
    pub predicted: Vec<f64>,
    pub mixed: Vec<f64>,
    pub distribution: Distribution,
}

/// An expert algorithm wrapped with type-based predictions, playing as the
/// player the experts are defined for.
#[derive(Debug)]
pub struct Ehba<'a> {
    game: &'a Game,
    experts: &'a PolicySet,
    types: &'a PolicySet,
    algorithm: Box<dyn ExpertAlgorithm>,
    options: EhbaOptions,
    belief: BeliefState,
    confidence: ConfidenceState,
    expert_states: Vec<PolicyState>,
    type_states: Vec<PolicyState>,
    history: History,
}

impl<'a> Ehba<'a> {
    pub fn new(
        game: &'a Game,
        experts: &'a PolicySet,
        types: &'a PolicySet,
        algorithm: Box<dyn ExpertAlgorithm>,
        options: EhbaOptions,
    ) -> Result<Self> {
        options.planning.validate()?;
        options.mix.validate()?;
        if experts.player() == types.player() {
            return Err(Error::config("experts and types must belong to different players"));
        }
        if algorithm.num_experts() != experts.len() {
            return Err(Error::config("algorithm and expert set sizes differ"));
        }
        if let Some(c) = options.confidence_override {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::config(format!("confidence override {c} outside [0,1]")));
            }
        }
        Ok(Ehba {
            game,
            experts,
            types,
            algorithm,
            options,
            belief: BeliefState::uniform(types.len()),
            confidence: ConfidenceState::new(options.initial_confidence)?,
            expert_states: experts.initial_states(),
            type_states: types.initial_states(),
            history: History::new(),
        })
    }

    pub fn belief(&self) -> &BeliefState {
        &self.belief
    }

    pub fn confidence(&self) -> f64 {
        self.options.confidence_override.unwrap_or_else(|| self.confidence.confidence())
    }

    pub fn algorithm(&self) -> &dyn ExpertAlgorithm {
        self.algorithm.as_ref()
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn expert_states(&self) -> &[PolicyState] {
        &self.expert_states
    }

    /// Current action distribution of expert `k`.
    pub fn recommendation(&self, k: usize) -> crate::ActionDist {
        let e: &Policy = self.experts.get(k);
        e.probs(&self.expert_states[k], self.experts.player())
    }

    /// Predicts, mixes and asks the wrapped algorithm for a distribution
    /// over experts.
    pub fn decide(&mut self, rng: &mut RngStream) -> Result<Decision> {
        let planner = Planner::new(self.game, self.types, self.belief.posterior())?;
        let predicted = predict_from_states(
            &planner,
            self.experts,
            &self.expert_states,
            &self.type_states,
            &self.options.planning,
        );
        let c = self.confidence();
        let observed = self.algorithm.stats().observed.clone();
        let mixed = mix_payoffs(&observed, &predicted, c, &self.options.mix)?;
        let distribution = self.algorithm.select(&mixed, rng)?;
        Ok(Decision {
            t: self.history.len(),
            confidence: c,
            posterior: self.belief.posterior().to_vec(),
            observed,
            predicted: predicted.values,
            mixed,
            distribution,
        })
    }

    /// Feedback after the round: confidence, posterior, policy states and
    /// the wrapped algorithm are all advanced.
    pub fn observe(&mut self, chosen: usize, joint: JointAction, realized: f64) -> Result<()> {
        let opp = joint.of(self.types.player());
        let probs = self.types.probs_all(&self.type_states);
        self.confidence.observe(self.belief.posterior(), &probs, opp)?;
        self.belief.observe(&likelihoods(self.types, &self.type_states, opp))?;
        let feedback = self
            .algorithm
            .needs_full_feedback()
            .then(|| recommendation_payoffs(self.game, self.experts, &self.expert_states, opp));
        self.algorithm.update(chosen, realized, feedback.as_deref())?;
        self.types.observe_all(&mut self.type_states, joint);
        self.experts.observe_all(&mut self.expert_states, joint);
        self.history.push(joint);
        Ok(())
    }

    /// The player the agent controls.
    pub fn player(&self) -> Player {
        self.experts.player()
    }
}
