//! Two-pool co-evolution shared by the decision-tree and neural-net generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{DecisionTree, NeuralNet};
use crate::error::{Error, Result};
use crate::gamekit::{Game, JointAction, Player};
use crate::policy::{sample_action, BehaviorPolicy, Policy, PolicySet, SetRole};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    pub pool_size: usize,
    pub generations: usize,
    pub tournament: usize,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
    pub diversity_weight: f64,
    /// Rounds per evaluation play.
    pub eval_rounds: usize,
    /// Opponents each individual of the first pool is paired with per generation.
    pub opponents: usize,
    /// Individuals copied unchanged into the next generation.
    pub elites: usize,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        EvolutionParams {
            pool_size: 32,
            generations: 30,
            tournament: 4,
            mutation_rate: 0.1,
            crossover_rate: 0.7,
            diversity_weight: 0.3,
            eval_rounds: 50,
            opponents: 4,
            elites: 2,
        }
    }
}

impl EvolutionParams {
    pub fn validate(&self, set_size: usize) -> Result<()> {
        if self.pool_size < 2 * set_size {
            return Err(Error::config(format!(
                "pool size {} must be at least twice the set size {set_size}",
                self.pool_size
            )));
        }
        if self.generations == 0 || self.tournament == 0 || self.eval_rounds == 0 || self.opponents == 0 {
            return Err(Error::config("generations, tournament, eval_rounds and opponents must be positive"));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) || !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::config("mutation and crossover rates must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// A policy representation that can be bred.
pub trait Genome: Clone + BehaviorPolicy + Into<Policy> {
    fn random(rng: &mut impl Rng) -> Self;
    fn crossover(&self, other: &Self, rng: &mut impl Rng) -> Self;
    fn mutate(&mut self, rate: f64, rng: &mut impl Rng);
    fn dissimilarity(&self, other: &Self) -> f64;
}

impl Genome for DecisionTree {
    fn random(rng: &mut impl Rng) -> Self {
        DecisionTree::random(rng)
    }
    fn crossover(&self, other: &Self, rng: &mut impl Rng) -> Self {
        DecisionTree::crossover(self, other, rng)
    }
    fn mutate(&mut self, rate: f64, rng: &mut impl Rng) {
        DecisionTree::mutate(self, rate, rng)
    }
    fn dissimilarity(&self, other: &Self) -> f64 {
        DecisionTree::dissimilarity(self, other)
    }
}

impl Genome for NeuralNet {
    fn random(rng: &mut impl Rng) -> Self {
        NeuralNet::random(rng)
    }
    fn crossover(&self, other: &Self, rng: &mut impl Rng) -> Self {
        NeuralNet::crossover(self, other, rng)
    }
    fn mutate(&mut self, rate: f64, rng: &mut impl Rng) {
        NeuralNet::mutate(self, rate, rng)
    }
    fn dissimilarity(&self, other: &Self) -> f64 {
        NeuralNet::dissimilarity(self, other)
    }
}

/// Mean per-round payoffs `(row, column)` of one sampled play.
pub fn play_pair<A: BehaviorPolicy, B: BehaviorPolicy>(
    game: &Game,
    a: &A,
    b: &B,
    rounds: usize,
    rng: &mut impl Rng,
) -> (f64, f64) {
    let (mut sa, mut sb) = (a.initial_state(), b.initial_state());
    let (mut pa, mut pb) = (0.0, 0.0);
    for _ in 0..rounds {
        let ai = sample_action(&a.probs(&sa, Player::I), rng);
        let aj = sample_action(&b.probs(&sb, Player::J), rng);
        let joint = JointAction::new(ai, aj);
        pa += game.payoff(Player::I, joint);
        pb += game.payoff(Player::J, joint);
        a.observe(&mut sa, joint, Player::I);
        b.observe(&mut sb, joint, Player::J);
    }
    (pa / rounds as f64, pb / rounds as f64)
}

fn fitness<G: Genome>(pool: &[G], payoff_sum: &[f64], games: &[usize], weight: f64) -> Vec<f64> {
    (0..pool.len())
        .map(|k| {
            let payoff = if games[k] > 0 { payoff_sum[k] / games[k] as f64 } else { 0.0 };
            let diversity = if pool.len() > 1 {
                pool.iter()
                    .enumerate()
                    .filter(|(m, _)| *m != k)
                    .map(|(_, o)| pool[k].dissimilarity(o))
                    .sum::<f64>()
                    / (pool.len() - 1) as f64
            } else {
                0.0
            };
            payoff + weight * diversity
        })
        .collect()
}

fn evaluate<A: Genome, B: Genome>(
    game: &Game,
    pool_a: &[A],
    pool_b: &[B],
    params: &EvolutionParams,
    rng: &mut impl Rng,
) -> (Vec<f64>, Vec<f64>) {
    let (mut sum_a, mut sum_b) = (vec![0.0; pool_a.len()], vec![0.0; pool_b.len()]);
    let (mut n_a, mut n_b) = (vec![0usize; pool_a.len()], vec![0usize; pool_b.len()]);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(pool_a.len() * params.opponents);
    for x in 0..pool_a.len() {
        for _ in 0..params.opponents {
            pairs.push((x, rng.gen_range(0..pool_b.len())));
        }
    }
    let mut covered = vec![false; pool_b.len()];
    for &(_, y) in &pairs {
        covered[y] = true;
    }
    for (y, seen) in covered.iter().enumerate() {
        if !seen {
            pairs.push((rng.gen_range(0..pool_a.len()), y));
        }
    }
    for (x, y) in pairs {
        let (pa, pb) = play_pair(game, &pool_a[x], &pool_b[y], params.eval_rounds, rng);
        sum_a[x] += pa;
        n_a[x] += 1;
        sum_b[y] += pb;
        n_b[y] += 1;
    }
    (
        fitness(pool_a, &sum_a, &n_a, params.diversity_weight),
        fitness(pool_b, &sum_b, &n_b, params.diversity_weight),
    )
}

fn ranked(fit: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fit.len()).collect();
    order.sort_by(|a, b| fit[*b].total_cmp(&fit[*a]).then(a.cmp(b)));
    order
}

fn tournament(fit: &[f64], size: usize, rng: &mut impl Rng) -> usize {
    (0..size)
        .map(|_| rng.gen_range(0..fit.len()))
        .max_by(|a, b| fit[*a].total_cmp(&fit[*b]).then(b.cmp(a)))
        .expect("tournament size > 0")
}

fn breed<G: Genome>(pool: &[G], fit: &[f64], params: &EvolutionParams, rng: &mut impl Rng) -> Vec<G> {
    let mut next: Vec<G> = ranked(fit)
        .into_iter()
        .take(params.elites.min(pool.len()))
        .map(|k| pool[k].clone())
        .collect();
    while next.len() < pool.len() {
        let p1 = tournament(fit, params.tournament, rng);
        let mut child = if rng.gen_bool(params.crossover_rate) {
            let p2 = tournament(fit, params.tournament, rng);
            pool[p1].crossover(&pool[p2], rng)
        } else {
            pool[p1].clone()
        };
        child.mutate(params.mutation_rate, rng);
        next.push(child);
    }
    next
}

/// Top `count` behaviourally distinct members, topped up with fresh random
/// genomes if the pool has collapsed.
fn select_distinct<G: Genome>(pool: &[G], fit: &[f64], count: usize, role: SetRole, rng: &mut impl Rng) -> Result<PolicySet> {
    let mut seen = HashSet::new();
    let mut chosen: Vec<Policy> = Vec::with_capacity(count);
    for k in ranked(fit) {
        if chosen.len() == count {
            break;
        }
        if seen.insert(pool[k].descriptor()) {
            chosen.push(pool[k].clone().into());
        }
    }
    let mut budget = 10_000;
    while chosen.len() < count {
        if budget == 0 {
            return Err(Error::Generation(format!("could not find {count} distinct policies")));
        }
        budget -= 1;
        let fresh = G::random(rng);
        if seen.insert(fresh.descriptor()) {
            chosen.push(fresh.into());
        }
    }
    PolicySet::new(role, chosen)
}

/// Final pools after co-evolution, with their fitness values.
pub struct Pools<A, B> {
    pub first: Vec<A>,
    pub second: Vec<B>,
    pub fitness_first: Vec<f64>,
    pub fitness_second: Vec<f64>,
}

pub fn coevolve_pools<A: Genome, B: Genome>(
    game: &Game,
    params: &EvolutionParams,
    rng: &mut impl Rng,
) -> Pools<A, B> {
    let mut first: Vec<A> = (0..params.pool_size).map(|_| A::random(rng)).collect();
    let mut second: Vec<B> = (0..params.pool_size).map(|_| B::random(rng)).collect();
    for _ in 0..params.generations {
        let (fa, fb) = evaluate(game, &first, &second, params, rng);
        first = breed(&first, &fa, params, rng);
        second = breed(&second, &fb, params, rng);
    }
    let (fitness_first, fitness_second) = evaluate(game, &first, &second, params, rng);
    Pools {
        first,
        second,
        fitness_first,
        fitness_second,
    }
}

fn coevolve<G: Genome>(game: &Game, count: usize, params: &EvolutionParams, rng: &mut impl Rng) -> Result<(PolicySet, PolicySet)> {
    params.validate(count)?;
    let pools: Pools<G, G> = coevolve_pools(game, params, rng);
    let experts = select_distinct(&pools.first, &pools.fitness_first, count, SetRole::ExpertsForI, rng)?;
    let types = select_distinct(&pools.second, &pools.fitness_second, count, SetRole::TypesForJ, rng)?;
    Ok((experts, types))
}

/// Co-evolved decision trees: `(policies for i, policies for j)`.
pub fn coevolve_decision_trees(game: &Game, count: usize, params: &EvolutionParams, rng: &mut impl Rng) -> Result<(PolicySet, PolicySet)> {
    coevolve::<DecisionTree>(game, count, params, rng)
}

/// Co-evolved neural networks: `(policies for i, policies for j)`.
pub fn coevolve_neural_nets(game: &Game, count: usize, params: &EvolutionParams, rng: &mut impl Rng) -> Result<(PolicySet, PolicySet)> {
    coevolve::<NeuralNet>(game, count, params, rng)
}

/// Shuffled copy, used when sampling subsets of a pool.
pub(crate) fn shuffled<T: Clone>(items: &[T], rng: &mut impl Rng) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}
