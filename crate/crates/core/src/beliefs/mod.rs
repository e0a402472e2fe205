//! Bayesian beliefs over hypothesised types and the finite-horizon HBA planner.

mod planner;
mod posterior;

pub use planner::{
    expected_payoffs_max, hba_select, hba_select_from_values, probability_overlap, PayoffMode, Planner,
    PlanningConfig, TIE_TOL,
};
pub use posterior::{likelihoods, posterior_batch, posterior_increment, BeliefState};
