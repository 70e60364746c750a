use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::state::StateVector;
use crate::error::{GeqieError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// One depolarizing channel on the whole register.
    Global,
    /// Tensor product of single-qubit depolarizing channels, evaluated exactly.
    PerQubit,
    /// Per-qubit channel sampled by Monte Carlo Pauli insertion.
    Trajectories,
}

impl std::str::FromStr for NoiseMode {
    type Err = GeqieError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(NoiseMode::Global),
            "per-qubit" | "perqubit" | "local" => Ok(NoiseMode::PerQubit),
            "trajectories" | "trajectory" => Ok(NoiseMode::Trajectories),
            other => Err(GeqieError::Parse(format!("unknown noise mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NoiseMode::Global => "global",
            NoiseMode::PerQubit => "per-qubit",
            NoiseMode::Trajectories => "trajectories",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    lambda: f64,
    mode: NoiseMode,
}

impl NoiseSpec {
    pub fn new(lambda: f64, mode: NoiseMode) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(GeqieError::Domain(format!(
                "depolarizing parameter {lambda} outside [0, 1]"
            )));
        }
        Ok(Self { lambda, mode })
    }

    pub fn noiseless() -> Self {
        Self {
            lambda: 0.0,
            mode: NoiseMode::Global,
        }
    }

    /// Default mode: trajectories when shots are drawn, the global channel when
    /// exact probabilities are requested (`shots == 0`).
    pub fn with_default_mode(lambda: f64, shots: u64) -> Result<Self> {
        let mode = if shots == 0 {
            NoiseMode::Global
        } else {
            NoiseMode::Trajectories
        };
        Self::new(lambda, mode)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }
}

/// Computational-basis outcome distribution of a state.
pub trait Measurable {
    fn raw_probabilities(&self) -> Vec<f64>;
}

impl Measurable for StateVector {
    fn raw_probabilities(&self) -> Vec<f64> {
        self.amplitudes().iter().map(|a| a.norm_sqr()).collect()
    }
}

impl Measurable for DensityMatrix {
    fn raw_probabilities(&self) -> Vec<f64> {
        self.diagonal()
    }
}

/// Probability of each basis outcome; negatives from rounding drift are
/// clamped to zero and the vector is renormalized.
pub fn measure_probabilities<M: Measurable + ?Sized>(source: &M) -> Vec<f64> {
    let mut probs = source.raw_probabilities();
    clamp_and_renormalize(&mut probs);
    probs
}

pub(crate) fn clamp_and_renormalize(probs: &mut [f64]) {
    probs.iter_mut().for_each(|p| {
        if *p < 0.0 {
            debug_assert!(*p > -1e-9, "probability {p} far below zero");
            *p = 0.0;
        }
    });
    let total: f64 = probs.iter().sum();
    if total > 0.0 {
        probs.iter_mut().for_each(|p| *p /= total);
    }
}

/// Outcome distribution after the global channel: `(1 − λ)p + λ/2^n`.
pub fn global_depolarized_probabilities(probs: &[f64], lambda: f64) -> Result<Vec<f64>> {
    NoiseSpec::new(lambda, NoiseMode::Global)?;
    let uniform = lambda / probs.len() as f64;
    Ok(probs.iter().map(|p| (1.0 - lambda) * p + uniform).collect())
}

/// Outcome distribution after single-qubit depolarizing on every qubit.
///
/// The diagonal of the per-qubit channel only mixes each outcome with its
/// partner across that qubit: `p'_i = (1 − λ/2)p_i + (λ/2)p_{i⊕2^q}`.
pub fn per_qubit_depolarized_probabilities(probs: &[f64], lambda: f64) -> Result<Vec<f64>> {
    NoiseSpec::new(lambda, NoiseMode::PerQubit)?;
    if !probs.len().is_power_of_two() {
        return Err(GeqieError::Shape(format!(
            "probability vector length {} is not a power of two",
            probs.len()
        )));
    }
    let n = probs.len().trailing_zeros() as usize;
    let keep = 1.0 - 0.5 * lambda;
    let swap = 0.5 * lambda;
    let mut cur = probs.to_vec();
    let mut next = vec![0.0; probs.len()];
    for q in 0..n {
        let mask = 1usize << q;
        for (i, out) in next.iter_mut().enumerate() {
            *out = keep * cur[i] + swap * cur[i ^ mask];
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(cur)
}

/// Exact outcome distribution of `state` under `noise` without sampling.
/// Trajectories resolve to their expectation, the per-qubit channel.
pub fn noisy_probabilities(state: &StateVector, noise: &NoiseSpec) -> Result<Vec<f64>> {
    let ideal = measure_probabilities(state);
    if noise.lambda() == 0.0 {
        return Ok(ideal);
    }
    let mut probs = match noise.mode() {
        NoiseMode::Global => global_depolarized_probabilities(&ideal, noise.lambda())?,
        NoiseMode::PerQubit | NoiseMode::Trajectories => {
            per_qubit_depolarized_probabilities(&ideal, noise.lambda())?
        }
    };
    clamp_and_renormalize(&mut probs);
    Ok(probs)
}
