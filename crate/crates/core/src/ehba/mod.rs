//! E-HBA: an expert algorithm fed a confidence-weighted mix of the payoffs
//! it has observed and the payoffs the type-based planner predicts for
//! each expert.

mod agent;
mod confidence;

pub use agent::{recommendation_payoffs, Decision, Ehba, EhbaOptions};
pub use confidence::{confidence_update, ConfidenceState};

use serde::{Deserialize, Serialize};

use crate::beliefs::{BeliefState, PayoffMode, Planner, PlanningConfig};
use crate::error::{Error, Result};
use crate::gamekit::{Game, History};
use crate::policy::{BehaviorPolicy, PolicySet};

pub const DEFAULT_BOOSTER: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixConfig {
    pub payoff_mode: PayoffMode,
    /// Exponent applied to predicted totals; ignored in average mode.
    pub booster: f64,
}

impl MixConfig {
    pub fn new(payoff_mode: PayoffMode, booster: f64) -> Result<Self> {
        let m = MixConfig { payoff_mode, booster };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.booster >= 1.0 && self.booster.is_finite()) {
            return Err(Error::config(format!("booster must be at least 1, got {}", self.booster)));
        }
        Ok(())
    }

    /// The prediction as it enters the mix.
    pub fn effective(&self, predicted: f64) -> f64 {
        match self.payoff_mode {
            PayoffMode::Average => predicted,
            PayoffMode::Total => predicted.powf(self.booster),
        }
    }
}

impl Default for MixConfig {
    fn default() -> Self {
        MixConfig { payoff_mode: PayoffMode::Average, booster: DEFAULT_BOOSTER }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictedPayoffs {
    pub values: Vec<f64>,
    pub horizon_used: usize,
}

/// Expected payoff over the horizon when following `expert` now and in
/// every imagined continuation, in the configured payoff mode.
pub fn expert_future_payoff<P: BehaviorPolicy, E: BehaviorPolicy>(
    game: &Game,
    expert: &E,
    types: &PolicySet<P>,
    belief: &BeliefState,
    history: &History,
    cfg: &PlanningConfig,
) -> Result<f64> {
    cfg.validate()?;
    let planner = Planner::new(game, types, belief.posterior())?;
    let me = types.player().other();
    let total = planner.follow_total(expert, &expert.state_after(history, me), &types.states_after(history), cfg.horizon);
    Ok(cfg.scale(total))
}

pub fn predicted_payoffs<P: BehaviorPolicy, E: BehaviorPolicy>(
    game: &Game,
    experts: &PolicySet<E>,
    types: &PolicySet<P>,
    belief: &BeliefState,
    history: &History,
    cfg: &PlanningConfig,
) -> Result<PredictedPayoffs> {
    cfg.validate()?;
    let planner = Planner::new(game, types, belief.posterior())?;
    Ok(predict_from_states(&planner, experts, &experts.states_after(history), &types.states_after(history), cfg))
}

pub(crate) fn predict_from_states<P: BehaviorPolicy, E: BehaviorPolicy>(
    planner: &Planner<'_, P>,
    experts: &PolicySet<E>,
    expert_states: &[E::State],
    type_states: &[P::State],
    cfg: &PlanningConfig,
) -> PredictedPayoffs {
    let values = experts
        .iter()
        .zip(expert_states)
        .map(|(e, s)| cfg.scale(planner.follow_total(e, s, type_states, cfg.horizon)))
        .collect();
    PredictedPayoffs { values, horizon_used: cfg.horizon }
}

/// `(1 - c) * observed + c * effective(predicted)`, elementwise.
pub fn mix_payoffs(observed: &[f64], predicted: &PredictedPayoffs, c: f64, mix: &MixConfig) -> Result<Vec<f64>> {
    if observed.len() != predicted.values.len() {
        return Err(Error::config(format!(
            "{} observed payoffs, {} predictions",
            observed.len(),
            predicted.values.len()
        )));
    }
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::config(format!("confidence {c} outside [0,1]")));
    }
    Ok(observed.iter().zip(&predicted.values).map(|(o, p)| (1.0 - c) * o + c * mix.effective(*p)).collect())
}
