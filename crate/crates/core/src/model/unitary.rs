use num_complex::Complex64;

use crate::error::{GeqieError, Result};
use crate::simcore::{StateVector, NORM_TOLERANCE};

pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Dense `2^n × 2^n` unitary, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    n_qubits: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(n_qubits: usize, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return Err(GeqieError::Shape(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let u = Self { n_qubits, entries };
        let err = u.unitarity_error();
        if err > UNITARY_TOLERANCE {
            return Err(GeqieError::Domain(format!(
                "matrix is not unitary (max |U†U − I| = {err:e})"
            )));
        }
        Ok(u)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.get(r, col)).collect()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        (0..dim)
            .map(|r| {
                self.entries[r * dim..(r + 1) * dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `max_ij |(U†U − I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entries[k * dim + i].conj() * self.entries[k * dim + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Completes `state` to a unitary whose first column is the state.
///
/// With `ψ₀ = |ψ₀|e^{iφ}` and `ψ' = e^{-iφ}ψ` (pivot real and non-negative),
/// the Householder reflection `H = I − 2ww†/(w†w)` with `w = e₀ − ψ'` maps
/// `e₀` to `ψ'`, and `U = e^{iφ}H`.
pub fn completion_unitary(state: &StateVector) -> Result<UnitaryMatrix> {
    let amps = state.amplitudes();
    let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(GeqieError::Domain(format!(
            "state has squared norm {norm_sqr}"
        )));
    }
    let dim = amps.len();
    let phase = if amps[0].norm() > 0.0 {
        amps[0] / amps[0].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut w: Vec<Complex64> = amps.iter().map(|a| -(a * phase.conj())).collect();
    w[0] += 1.0;
    let w_norm_sqr: f64 = w.iter().map(|a| a.norm_sqr()).sum();

    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = phase;
    }
    if w_norm_sqr > 1e-30 {
        let coef = 2.0 / w_norm_sqr;
        for i in 0..dim {
            let wi = w[i] * phase * coef;
            if wi == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                entries[i * dim + j] -= wi * w[j].conj();
            }
        }
    }
    Ok(UnitaryMatrix {
        n_qubits: state.n_qubits(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_completes_to_identity() {
        let u = completion_unitary(&StateVector::basis(2, 0).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((u.get(i, j) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn excited_state_completes_to_swap() {
        let u = completion_unitary(&StateVector::basis(1, 1).unwrap()).unwrap();
        assert!((u.get(0, 0)).norm() < 1e-15);
        assert!((u.get(1, 0) - 1.0).norm() < 1e-15);
        assert!((u.get(0, 1) - 1.0).norm() < 1e-15);
        assert!(u.unitarity_error() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_matrix() {
        let bad = vec![Complex64::new(2.0, 0.0); 4];
        assert!(UnitaryMatrix::new(1, bad).is_err());
    }
}
