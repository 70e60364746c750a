use num_complex::Complex64;

use crate::error::{GeqieError, Result};

/// Tolerance on `Σ|a_i|² = 1` accepted by [`StateVector::new`].
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Pure state of `n_qubits` qubits as `2^n` dense amplitudes.
///
/// Qubit 0 is the least significant bit of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(GeqieError::Domain(
                "a state needs at least one qubit".into(),
            ));
        }
        if amplitudes.len() != 1usize << n_qubits {
            return Err(GeqieError::Shape(format!(
                "{} amplitudes supplied for {} qubits (expected {})",
                amplitudes.len(),
                n_qubits,
                1usize << n_qubits
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(GeqieError::Domain(format!(
                "state is not normalized: squared norm {norm_sqr}"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before validating.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(GeqieError::Domain("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(n_qubits, amplitudes)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(GeqieError::Domain(format!(
                "basis index {index} outside a {n_qubits}-qubit register"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(n_qubits, amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}
