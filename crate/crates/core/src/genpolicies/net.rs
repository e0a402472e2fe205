//! 4-5-1 sigmoid networks reading the last two joint actions.

use rand::Rng;
use rand_distr::{Distribution as _, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamekit::{JointAction, Player};
use crate::policy::{ActionDist, BehaviorPolicy};
use crate::rng::hash_str;

pub const INPUTS: usize = 4;
pub const HIDDEN: usize = 5;
pub const GENOME_LEN: usize = HIDDEN * INPUTS + HIDDEN + HIDDEN + 1;

/// Weights are kept in this range so the output stays strictly inside (0, 1).
pub const WEIGHT_BOUND: f64 = 5.0;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuralNet {
    pub w_hidden: [[f64; INPUTS]; HIDDEN],
    pub b_hidden: [f64; HIDDEN],
    pub w_out: [f64; HIDDEN],
    pub b_out: f64,
}

/// Inputs `(own t-1, opp t-1, own t-2, opp t-2)`, zeros before they exist.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NetMemory {
    pub inputs: [f64; INPUTS],
}

impl NeuralNet {
    pub fn zeros() -> Self {
        NeuralNet::from_genome(&[0.0; GENOME_LEN]).expect("fixed length")
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        let g: Vec<f64> = (0..GENOME_LEN).map(|_| rng.gen_range(-WEIGHT_BOUND..WEIGHT_BOUND)).collect();
        NeuralNet::from_genome(&g).expect("fixed length")
    }

    pub fn genome(&self) -> Vec<f64> {
        let mut g = Vec::with_capacity(GENOME_LEN);
        for row in &self.w_hidden {
            g.extend_from_slice(row);
        }
        g.extend_from_slice(&self.b_hidden);
        g.extend_from_slice(&self.w_out);
        g.push(self.b_out);
        g
    }

    pub fn from_genome(g: &[f64]) -> Result<Self> {
        if g.len() != GENOME_LEN {
            return Err(Error::policy(format!("net genome has {} weights, expected {GENOME_LEN}", g.len())));
        }
        if g.iter().any(|w| !w.is_finite()) {
            return Err(Error::policy("net weights must be finite"));
        }
        let mut w_hidden = [[0.0; INPUTS]; HIDDEN];
        for (h, row) in w_hidden.iter_mut().enumerate() {
            row.copy_from_slice(&g[h * INPUTS..(h + 1) * INPUTS]);
        }
        let off = HIDDEN * INPUTS;
        let mut b_hidden = [0.0; HIDDEN];
        b_hidden.copy_from_slice(&g[off..off + HIDDEN]);
        let mut w_out = [0.0; HIDDEN];
        w_out.copy_from_slice(&g[off + HIDDEN..off + 2 * HIDDEN]);
        Ok(NeuralNet {
            w_hidden,
            b_hidden,
            w_out,
            b_out: g[GENOME_LEN - 1],
        })
    }

    /// Probability of action 0.
    pub fn output(&self, inputs: &[f64; INPUTS]) -> f64 {
        let mut z = self.b_out;
        for h in 0..HIDDEN {
            let a: f64 = self.b_hidden[h] + self.w_hidden[h].iter().zip(inputs).map(|(w, x)| w * x).sum::<f64>();
            z += self.w_out[h] * sigmoid(a);
        }
        sigmoid(z)
    }

    /// Mean absolute output difference over all 16 binary input patterns.
    pub fn dissimilarity(&self, other: &NeuralNet) -> f64 {
        let total: f64 = (0..16u8)
            .map(|p| {
                let x = [0, 1, 2, 3].map(|b| f64::from((p >> b) & 1));
                (self.output(&x) - other.output(&x)).abs()
            })
            .sum();
        total / 16.0
    }

    /// Uniform crossover of two genomes.
    pub fn crossover(&self, other: &NeuralNet, rng: &mut impl Rng) -> NeuralNet {
        let (a, b) = (self.genome(), other.genome());
        let g: Vec<f64> = a.iter().zip(&b).map(|(x, y)| if rng.gen_bool(0.5) { *x } else { *y }).collect();
        NeuralNet::from_genome(&g).expect("same length")
    }

    /// Gaussian mutation of each weight with probability `rate`.
    pub fn mutate(&mut self, rate: f64, rng: &mut impl Rng) {
        if rate <= 0.0 {
            return;
        }
        let noise = Normal::new(0.0, 1.0).expect("unit normal");
        let mut g = self.genome();
        for w in g.iter_mut() {
            if rng.gen_bool(rate.min(1.0)) {
                *w = (*w + noise.sample(rng)).clamp(-WEIGHT_BOUND, WEIGHT_BOUND);
            }
        }
        *self = NeuralNet::from_genome(&g).expect("same length");
    }
}

impl BehaviorPolicy for NeuralNet {
    type State = NetMemory;

    fn descriptor(&self) -> String {
        let bits: String = self.genome().iter().map(|w| format!("{:016x}", w.to_bits())).collect();
        format!("cnn:{:016x}", hash_str(&bits))
    }

    fn initial_state(&self) -> NetMemory {
        NetMemory::default()
    }

    fn observe(&self, m: &mut NetMemory, joint: JointAction, role: Player) {
        m.inputs[2] = m.inputs[0];
        m.inputs[3] = m.inputs[1];
        m.inputs[0] = joint.of(role) as f64;
        m.inputs[1] = joint.of(role.other()) as f64;
    }

    fn probs(&self, m: &NetMemory, _: Player) -> ActionDist {
        ActionDist::binary(self.output(&m.inputs))
    }
}
