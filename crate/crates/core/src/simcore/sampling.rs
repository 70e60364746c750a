//! Shot sampling.

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Binomial, Distribution};

use super::noise::measure_probabilities;
use super::state::StateVector;
use crate::error::{GeqieError, Result};
use crate::exec::{self, Exec};
use crate::rng;

/// Shots per independently seeded trajectory batch. Batch `b` draws from
/// `derive_seed(seed, b)`, so the histogram does not depend on how batches
/// are spread over workers.
pub const TRAJECTORY_BATCH: u64 = 1 << 14;

const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Measurement outcome counts over a `2^n` computational basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsHistogram {
    n_qubits: usize,
    counts: Vec<u64>,
    shots: u64,
}

impl CountsHistogram {
    pub fn from_dense(n_qubits: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != 1usize << n_qubits {
            return Err(GeqieError::Shape(format!(
                "{} count bins for {n_qubits} qubits",
                counts.len()
            )));
        }
        let shots = counts.iter().sum();
        if shots == 0 {
            return Err(GeqieError::Domain("histogram holds no shots".into()));
        }
        Ok(Self {
            n_qubits,
            counts,
            shots,
        })
    }

    /// Builds a histogram from `(basis index, count)` pairs.
    pub fn from_pairs<I>(n_qubits: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, u64)>,
    {
        let mut counts = vec![0; 1usize << n_qubits];
        for (idx, c) in pairs {
            let slot = counts.get_mut(idx).ok_or_else(|| {
                GeqieError::Shape(format!("outcome {idx} outside a {n_qubits}-qubit register"))
            })?;
            *slot += c;
        }
        Self::from_dense(n_qubits, counts)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, index: usize) -> u64 {
        self.counts.get(index).copied().unwrap_or(0)
    }

    pub fn dense(&self) -> &[u64] {
        &self.counts
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i, c))
    }

    /// Counts as real weights, the input the retrieval decoders consume.
    pub fn weights(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.shots as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

fn validate_probs(probs: &[f64]) -> Result<usize> {
    if probs.len() < 2 || !probs.len().is_power_of_two() {
        return Err(GeqieError::Shape(format!(
            "probability vector length {} is not 2^n with n >= 1",
            probs.len()
        )));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(GeqieError::Domain(
            "probabilities must be finite and non-negative".into(),
        ));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(GeqieError::Domain(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    Ok(probs.len().trailing_zeros() as usize)
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(GeqieError::Domain("shots must be at least 1".into()));
    }
    Ok(())
}

/// Multinomial draw of `shots` outcomes from `probs`.
///
/// Counts are drawn outcome by outcome as conditional binomials,
/// `c_i ~ Bin(remaining, p_i / Σ_{j≥i} p_j)`, from a single stream keyed by `seed`.
pub fn sample_counts(probs: &[f64], shots: u64, seed: u64) -> Result<CountsHistogram> {
    let n_qubits = validate_probs(probs)?;
    check_shots(shots)?;

    let mut tail = vec![0.0; probs.len() + 1];
    for i in (0..probs.len()).rev() {
        tail[i] = tail[i + 1] + probs[i];
    }
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);

    let mut rng = rng::stream(seed);
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == last_nonzero {
            counts[i] = remaining;
            break;
        }
        if p == 0.0 {
            continue;
        }
        let q = (p / tail[i]).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, q)
            .map_err(|e| GeqieError::Domain(e.to_string()))?
            .sample(&mut rng);
        counts[i] = k;
        remaining -= k;
    }
    Ok(CountsHistogram {
        n_qubits,
        counts,
        shots,
    })
}

/// Draws the X-part of a random single-qubit depolarizing Pauli string.
///
/// Each qubit independently gets X or Y (bit flipped) with probability λ/4
/// each, Z with λ/4, identity with 1 − 3λ/4.
fn pauli_flip_mask<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize, lambda: f64) -> usize {
    let quarter = 0.25 * lambda;
    let mut mask = 0usize;
    for q in 0..n_qubits {
        let u: f64 = rng.random();
        // [0, λ/4) → X, [λ/4, λ/2) → Y; Z and I leave the outcome alone
        if u < 2.0 * quarter {
            mask |= 1 << q;
        }
    }
    mask
}

/// Monte Carlo Pauli-error trajectories.
///
/// Each shot inserts an independent single-qubit depolarizing Pauli on every
/// qubit of the ideal state and measures once. For a Pauli string
/// `P ∝ X^a Z^b`, `|⟨i|P|ψ⟩|² = |ψ_{i⊕a}|²`, so a shot is an ideal outcome
/// XOR-ed with the string's bit-flip mask. The outcome distribution equals the
/// diagonal of the per-qubit depolarizing channel applied to `|ψ⟩⟨ψ|`.
pub fn sample_counts_trajectories(
    state: &StateVector,
    lambda: f64,
    shots: u64,
    seed: u64,
) -> Result<CountsHistogram> {
    sample_counts_trajectories_with(state, lambda, shots, seed, Exec::default())
}

pub fn sample_counts_trajectories_with(
    state: &StateVector,
    lambda: f64,
    shots: u64,
    seed: u64,
    exec: Exec,
) -> Result<CountsHistogram> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(GeqieError::Domain(format!(
            "depolarizing parameter {lambda} outside [0, 1]"
        )));
    }
    check_shots(shots)?;
    let n_qubits = state.n_qubits();
    let probs = measure_probabilities(state);
    let alias = WeightedAliasIndex::new(probs).map_err(|e| GeqieError::Domain(e.to_string()))?;

    let batches = shots.div_ceil(TRAJECTORY_BATCH) as usize;
    let partials = exec::map_indexed(exec, batches, |b| {
        let start = b as u64 * TRAJECTORY_BATCH;
        let len = TRAJECTORY_BATCH.min(shots - start);
        let mut rng = rng::stream(rng::derive_seed(seed, b as u64));
        let mut local = vec![0u64; 1usize << n_qubits];
        for _ in 0..len {
            let ideal = alias.sample(&mut rng);
            let flips = pauli_flip_mask(&mut rng, n_qubits, lambda);
            local[ideal ^ flips] += 1;
        }
        local
    });

    let mut counts = vec![0u64; 1usize << n_qubits];
    for part in partials {
        counts.iter_mut().zip(part).for_each(|(c, p)| *c += p);
    }
    Ok(CountsHistogram {
        n_qubits,
        counts,
        shots,
    })
}

/// Total-variation distance between two distributions on the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_outcome() {
        let h = sample_counts(&[1.0, 0.0], 100, 9).unwrap();
        assert_eq!(h.dense(), &[100, 0]);
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(matches!(
            sample_counts(&[0.5, 0.5], 0, 1),
            Err(GeqieError::Domain(_))
        ));
    }

    #[test]
    fn unnormalized_rejected() {
        assert!(sample_counts(&[0.5, 0.6], 10, 1).is_err());
    }

    #[test]
    fn fair_coin_within_binomial_bound() {
        let shots = 1_000_000;
        let h = sample_counts(&[0.5, 0.5], shots, 2024).unwrap();
        let f = h.get(0) as f64 / shots as f64;
        assert!((f - 0.5).abs() <= 0.002, "frequency {f}");
        assert_eq!(h.shots(), shots);
    }

    #[test]
    fn same_seed_same_histogram() {
        let p = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(
            sample_counts(&p, 5000, 3).unwrap(),
            sample_counts(&p, 5000, 3).unwrap()
        );
    }

    #[test]
    fn zero_probability_outcomes_never_drawn() {
        let p = [0.0, 0.25, 0.0, 0.75, 0.0, 0.0, 0.0, 0.0];
        let h = sample_counts(&p, 100_000, 5).unwrap();
        for (i, &c) in h.dense().iter().enumerate() {
            if p[i] == 0.0 {
                assert_eq!(c, 0);
            }
        }
    }

    #[test]
    fn from_pairs_rejects_out_of_range() {
        assert!(CountsHistogram::from_pairs(1, [(2, 1)]).is_err());
        let h = CountsHistogram::from_pairs(2, [(3, 4), (0, 1)]).unwrap();
        assert_eq!(h.shots(), 5);
        assert_eq!(h.iter_nonzero().collect::<Vec<_>>(), vec![(0, 1), (3, 4)]);
    }
}
