//! One repeated-game play and the two baselines.

use rand::Rng;
use serde::Serialize;

use super::config::{ExperimentConfig, OpponentMode};
use crate::beliefs::{likelihoods, hba_select_from_values, BeliefState, PayoffMode, Planner, PlanningConfig};
use crate::ehba::{recommendation_payoffs, Ehba, EhbaOptions, MixConfig};
use crate::error::{Error, Result};
use crate::experts::{build_algorithm, AlgorithmKind, ExpertAlgorithm};
use crate::gamekit::{normalize_payoffs, Game, JointAction, Player};
use crate::genpolicies::{fictitious_play_policy, sample_type_sets};
use crate::policy::{sample_action, BehaviorPolicy, Policy, PolicySet, PolicyState, SetRole};
use crate::rng::{master_seed, stream, RngStream};

/// Everything fixed for one (game, seed, opponent, true-type) cell.
#[derive(Clone, Debug)]
pub struct PlaySetup {
    pub game: Game,
    pub seed: u64,
    pub opponent_mode: OpponentMode,
    pub include_true: bool,
    pub experts: PolicySet,
    pub types: PolicySet,
    pub opponent: Policy,
    pub master: u64,
}

impl PlaySetup {
    /// Normalises `ordinal` and draws the policy sets from the cell's
    /// generation stream, which does not depend on the opponent mode or the
    /// true-type flag.
    pub fn generate(cfg: &ExperimentConfig, ordinal: &Game, seed: u64, opponent_mode: OpponentMode, include_true: bool) -> Result<Self> {
        let game = normalize_payoffs(ordinal)?;
        let master = master_seed(&game.label, seed);
        let mut rng = stream(master, "policy-generation");
        let sets = sample_type_sets(cfg.generator, &game, &cfg.evolution, &mut rng, include_true)?;
        let (types, opponent) = match opponent_mode {
            OpponentMode::Type => (sets.types, sets.true_type),
            OpponentMode::FictitiousPlay => {
                let fp = fictitious_play_policy(&game, Player::J);
                let true_desc = sets.true_type.descriptor();
                let types: Vec<Policy> = sets
                    .types
                    .iter()
                    .map(|t| if include_true && t.descriptor() == true_desc { fp.clone() } else { t.clone() })
                    .collect();
                (PolicySet::new(SetRole::TypesForJ, types)?, fp)
            }
        };
        Ok(PlaySetup { game, seed, opponent_mode, include_true, experts: sets.experts, types, opponent, master })
    }

    /// A hand-assembled cell, for scripted scenarios.
    pub fn from_parts(game: Game, seed: u64, experts: PolicySet, types: PolicySet, opponent: Policy) -> Result<Self> {
        if experts.player() != Player::I || types.player() != Player::J {
            return Err(Error::config("experts must be for player i and types for player j"));
        }
        let master = master_seed(&game.label, seed);
        Ok(PlaySetup {
            game,
            seed,
            opponent_mode: OpponentMode::Type,
            include_true: false,
            experts,
            types,
            opponent,
            master,
        })
    }

    fn context(&self, what: &str) -> String {
        format!("{} seed {} ({what})", self.game.label, self.seed)
    }
}

/// Who drives player i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Controller {
    Algorithm { kind: AlgorithmKind, wrapped: bool },
    /// Always follow one expert.
    Expert(usize),
    Hba,
}

impl Controller {
    pub fn name(&self) -> String {
        match self {
            Controller::Algorithm { kind, .. } => kind.name().to_string(),
            Controller::Expert(k) => format!("expert-{k}"),
            Controller::Hba => "HBA".into(),
        }
    }

    pub fn wrapped(&self) -> bool {
        matches!(self, Controller::Algorithm { wrapped: true, .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundRow {
    pub t: usize,
    pub expert: Option<usize>,
    pub action_i: usize,
    pub action_j: usize,
    pub payoff: f64,
    pub confidence: Option<f64>,
}

/// The vectors behind a wrapped decision, kept only when tracing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceDetail {
    pub posterior: Vec<f64>,
    pub observed: Vec<f64>,
    pub predicted: Vec<f64>,
    pub mixed: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlayRecord {
    pub game: String,
    pub seed: u64,
    pub opponent: OpponentMode,
    pub include_true: bool,
    pub controller: Controller,
    pub rows: Vec<RoundRow>,
    pub trace: Vec<TraceDetail>,
    pub mean_payoff: f64,
}

impl PlayRecord {
    pub fn payoffs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.payoff).collect()
    }

    pub fn expert_choices(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.expert).collect()
    }
}

struct Streams {
    algorithm: RngStream,
    actions: RngStream,
    opponent: RngStream,
    ties: RngStream,
}

impl Streams {
    fn new(master: u64) -> Self {
        Streams {
            algorithm: stream(master, "algorithm"),
            actions: stream(master, "actions"),
            opponent: stream(master, "opponent"),
            ties: stream(master, "tie-breaks"),
        }
    }
}

struct Choice {
    expert: Option<usize>,
    action: usize,
    confidence: Option<f64>,
    detail: Option<TraceDetail>,
}

trait Driver {
    fn choose(&mut self, s: &mut Streams, want_detail: bool) -> Result<Choice>;
    fn observe(&mut self, expert: Option<usize>, joint: JointAction, payoff: f64) -> Result<()>;
}

struct Plain<'a> {
    game: &'a Game,
    experts: &'a PolicySet,
    states: Vec<PolicyState>,
    algorithm: Box<dyn ExpertAlgorithm>,
}

impl Driver for Plain<'_> {
    fn choose(&mut self, s: &mut Streams, _want_detail: bool) -> Result<Choice> {
        let view = self.algorithm.stats().observed.clone();
        let k = self.algorithm.select(&view, &mut s.algorithm)?.sample(&mut s.algorithm);
        let rec = self.experts.get(k).probs(&self.states[k], Player::I);
        Ok(Choice { expert: Some(k), action: sample_action(&rec, &mut s.actions), confidence: None, detail: None })
    }

    fn observe(&mut self, expert: Option<usize>, joint: JointAction, payoff: f64) -> Result<()> {
        let feedback = self
            .algorithm
            .needs_full_feedback()
            .then(|| recommendation_payoffs(self.game, self.experts, &self.states, joint.j));
        self.algorithm.update(expert.expect("plain player follows an expert"), payoff, feedback.as_deref())?;
        self.experts.observe_all(&mut self.states, joint);
        Ok(())
    }
}

struct Wrapped<'a>(Ehba<'a>);

impl Driver for Wrapped<'_> {
    fn choose(&mut self, s: &mut Streams, want_detail: bool) -> Result<Choice> {
        let d = self.0.decide(&mut s.algorithm)?;
        let k = d.distribution.sample(&mut s.algorithm);
        let action = sample_action(&self.0.recommendation(k), &mut s.actions);
        let detail = want_detail.then(|| TraceDetail {
            posterior: d.posterior,
            observed: d.observed,
            predicted: d.predicted,
            mixed: d.mixed,
        });
        Ok(Choice { expert: Some(k), action, confidence: Some(d.confidence), detail })
    }

    fn observe(&mut self, expert: Option<usize>, joint: JointAction, payoff: f64) -> Result<()> {
        self.0.observe(expert.expect("wrapped player follows an expert"), joint, payoff)
    }
}

struct Follow<'a> {
    policy: &'a Policy,
    state: PolicyState,
    k: usize,
}

impl Driver for Follow<'_> {
    fn choose(&mut self, s: &mut Streams, _want_detail: bool) -> Result<Choice> {
        let rec = self.policy.probs(&self.state, Player::I);
        Ok(Choice { expert: Some(self.k), action: sample_action(&rec, &mut s.actions), confidence: None, detail: None })
    }

    fn observe(&mut self, _expert: Option<usize>, joint: JointAction, _payoff: f64) -> Result<()> {
        self.policy.observe(&mut self.state, joint, Player::I);
        Ok(())
    }
}

struct HbaDriver<'a> {
    game: &'a Game,
    types: &'a PolicySet,
    belief: BeliefState,
    states: Vec<PolicyState>,
    horizon: usize,
}

impl Driver for HbaDriver<'_> {
    fn choose(&mut self, s: &mut Streams, want_detail: bool) -> Result<Choice> {
        let action = if self.belief.is_degenerate() {
            s.ties.gen_range(0..2)
        } else {
            let planner = Planner::new(self.game, self.types, self.belief.posterior())?;
            let v = planner.max_totals(&self.states, self.horizon);
            hba_select_from_values(&v, &mut s.ties)
        };
        let detail = want_detail.then(|| TraceDetail {
            posterior: self.belief.posterior().to_vec(),
            observed: Vec::new(),
            predicted: Vec::new(),
            mixed: Vec::new(),
        });
        Ok(Choice { expert: None, action, confidence: None, detail })
    }

    fn observe(&mut self, _expert: Option<usize>, joint: JointAction, _payoff: f64) -> Result<()> {
        self.belief.observe(&likelihoods(self.types, &self.states, joint.j))?;
        self.types.observe_all(&mut self.states, joint);
        Ok(())
    }
}

/// Options for the wrapped player under `kind`.
pub fn ehba_options(cfg: &ExperimentConfig, kind: AlgorithmKind) -> Result<EhbaOptions> {
    let mode = cfg.payoff_mode.unwrap_or_else(|| kind.natural_mode());
    Ok(EhbaOptions {
        planning: PlanningConfig::new(cfg.horizon, mode)?,
        mix: MixConfig::new(mode, cfg.booster)?,
        confidence_override: cfg.confidence_override,
        initial_confidence: cfg.initial_confidence,
    })
}

/// Plays `cfg.rounds` rounds with `controller` as player i and the setup's
/// opponent as player j. Nothing in the loop is told the round count.
pub fn run_play(cfg: &ExperimentConfig, setup: &PlaySetup, controller: Controller) -> Result<PlayRecord> {
    play_inner(cfg, setup, controller).map_err(|e| Error::Play {
        context: setup.context(&controller.name()),
        source: Box::new(e),
    })
}

fn play_inner(cfg: &ExperimentConfig, setup: &PlaySetup, controller: Controller) -> Result<PlayRecord> {
    let game = &setup.game;
    let mut driver: Box<dyn Driver + '_> = match controller {
        Controller::Algorithm { kind, wrapped } => {
            let algorithm = build_algorithm(kind, setup.experts.len(), &cfg.algorithm_params)?;
            if wrapped {
                Box::new(Wrapped(Ehba::new(game, &setup.experts, &setup.types, algorithm, ehba_options(cfg, kind)?)?))
            } else {
                Box::new(Plain { game, experts: &setup.experts, states: setup.experts.initial_states(), algorithm })
            }
        }
        Controller::Expert(k) => {
            if k >= setup.experts.len() {
                return Err(Error::config(format!("no expert {k}")));
            }
            let policy = setup.experts.get(k);
            Box::new(Follow { policy, state: policy.initial_state(), k })
        }
        Controller::Hba => {
            PlanningConfig::new(cfg.horizon, PayoffMode::Average)?;
            Box::new(HbaDriver {
                game,
                types: &setup.types,
                belief: BeliefState::uniform(setup.types.len()),
                states: setup.types.initial_states(),
                horizon: cfg.horizon,
            })
        }
    };
    let mut streams = Streams::new(setup.master);
    let mut opp_state = setup.opponent.initial_state();
    let mut rows = Vec::with_capacity(cfg.rounds);
    let mut trace = Vec::new();
    for t in 0..cfg.rounds {
        let choice = driver.choose(&mut streams, cfg.trace)?;
        let opp = setup.opponent.action_distribution_from(&opp_state)?;
        let action_j = sample_action(&opp, &mut streams.opponent);
        let joint = JointAction::new(choice.action, action_j);
        let payoff = game.payoff(Player::I, joint);
        driver.observe(choice.expert, joint, payoff)?;
        setup.opponent.observe(&mut opp_state, joint, Player::J);
        rows.push(RoundRow { t, expert: choice.expert, action_i: choice.action, action_j, payoff, confidence: choice.confidence });
        if let Some(d) = choice.detail {
            trace.push(d);
        }
    }
    let mean_payoff = rows.iter().map(|r| r.payoff).sum::<f64>() / rows.len() as f64;
    Ok(PlayRecord {
        game: game.label.clone(),
        seed: setup.seed,
        opponent: setup.opponent_mode,
        include_true: setup.include_true,
        controller,
        rows,
        trace,
        mean_payoff,
    })
}

/// Best average over plays that follow a single expert throughout, with the
/// same seed streams. Returns the value, the expert and its play.
pub fn best_expert_baseline(cfg: &ExperimentConfig, setup: &PlaySetup) -> Result<(f64, usize, PlayRecord)> {
    let mut best: Option<(f64, usize, PlayRecord)> = None;
    for k in 0..setup.experts.len() {
        let r = run_play(cfg, setup, Controller::Expert(k))?;
        if best.as_ref().map_or(true, |(v, _, _)| r.mean_payoff > *v) {
            best = Some((r.mean_payoff, k, r));
        }
    }
    best.ok_or_else(|| Error::config("no experts"))
}

pub fn hba_baseline(cfg: &ExperimentConfig, setup: &PlaySetup) -> Result<PlayRecord> {
    run_play(cfg, setup, Controller::Hba)
}

trait ValidatedProbs {
    fn action_distribution_from(&self, state: &PolicyState) -> Result<crate::ActionDist>;
}

impl ValidatedProbs for Policy {
    fn action_distribution_from(&self, state: &PolicyState) -> Result<crate::ActionDist> {
        let d = self.probs(state, Player::J);
        if !d.is_valid(crate::policy::DIST_TOL) {
            return Err(Error::policy(format!("{} produced an invalid distribution", self.descriptor())));
        }
        Ok(d)
    }
}
