//! Dense density matrices and depolarizing channels.

use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{GeqieError, Result};
use crate::exec::{self, Exec};

/// Largest register for which density-matrix simulation is offered
/// (`2^24` complex entries, about 268 MB).
pub const DENSITY_QUBIT_CAP: usize = 12;

pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const PSD_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `2^n × 2^n` density operator stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Phase `φ` in `P|b⟩ = φ(b)|b'⟩` for the single-qubit basis state `b`.
    fn phase(self, bit: bool) -> Complex64 {
        match (self, bit) {
            (Pauli::I | Pauli::X, _) => ONE,
            (Pauli::Z, false) => ONE,
            (Pauli::Z, true) => -ONE,
            (Pauli::Y, false) => I,
            (Pauli::Y, true) => -I,
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(GeqieError::Domain(format!(
            "depolarizing parameter {lambda} outside [0, 1]"
        )));
    }
    Ok(())
}

impl DensityMatrix {
    /// Validates shape, Hermiticity and unit trace. Positivity is checked
    /// separately by [`DensityMatrix::is_psd`] since it costs a factorization.
    pub fn new(n_qubits: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > DENSITY_QUBIT_CAP {
            return Err(GeqieError::Capacity {
                required: n_qubits,
                allowed: DENSITY_QUBIT_CAP,
            });
        }
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return Err(GeqieError::Shape(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let rho = Self { n_qubits, entries };
        if !rho.is_hermitian(HERMITIAN_TOLERANCE) {
            return Err(GeqieError::Domain("matrix is not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(GeqieError::Domain(format!("trace {tr} is not 1")));
        }
        Ok(rho)
    }

    /// `ρ = |ψ⟩⟨ψ|`.
    pub fn from_state(state: &StateVector) -> Result<Self> {
        Self::from_state_with(state, Exec::default())
    }

    pub fn from_state_with(state: &StateVector, exec: Exec) -> Result<Self> {
        let n_qubits = state.n_qubits();
        if n_qubits > DENSITY_QUBIT_CAP {
            return Err(GeqieError::Capacity {
                required: n_qubits,
                allowed: DENSITY_QUBIT_CAP,
            });
        }
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = vec![ZERO; dim * dim];
        exec::for_each_chunk_mut(exec, &mut entries, dim, |i, row| {
            let ai = amps[i];
            for (j, e) in row.iter_mut().enumerate() {
                *e = ai * amps[j].conj();
            }
        });
        Ok(Self { n_qubits, entries })
    }

    /// Maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self::new(n_qubits, entries)
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

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i]).sum()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let dim = self.dim();
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                // ρ is Hermitian, so (ρ²)_ii = Σ_j |ρ_ij|²
                acc += self.entries[i * dim + j].norm_sqr();
            }
        }
        acc
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i].re).collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| {
            (i..dim).all(|j| {
                (self.entries[i * dim + j] - self.entries[j * dim + i].conj()).norm() <= tol
            })
        })
    }

    /// Positive semidefinite up to `tol`: Cholesky of `ρ + tol·I` must succeed.
    pub fn is_psd(&self, tol: f64) -> bool {
        let dim = self.dim();
        let mut l = vec![ZERO; dim * dim];
        for j in 0..dim {
            let mut d = self.entries[j * dim + j].re + tol;
            for k in 0..j {
                d -= l[j * dim + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j * dim + j] = Complex64::new(d, 0.0);
            for i in (j + 1)..dim {
                let mut s = self.entries[i * dim + j];
                for k in 0..j {
                    s -= l[i * dim + k] * l[j * dim + k].conj();
                }
                l[i * dim + j] = s / d;
            }
        }
        true
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Global depolarizing channel `E(ρ) = (1 − λ)ρ + λ·Tr[ρ]·I/2^n`.
    pub fn apply_global_depolarizing(&self, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let dim = self.dim();
        let mixed = self.trace() * (lambda / dim as f64);
        let mut entries: Vec<Complex64> = self.entries.iter().map(|e| e * (1.0 - lambda)).collect();
        for i in 0..dim {
            entries[i * dim + i] += mixed;
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            entries,
        })
    }

    /// Single-qubit depolarizing channel on `qubit`, applied in Kraus form:
    /// `(1 − 3λ/4)·ρ + (λ/4)·(XρX + YρY + ZρZ)`, which equals
    /// `(1 − λ)ρ + λ·Tr_q[ρ] ⊗ I/2` on that qubit.
    pub fn apply_local_depolarizing(&self, lambda: f64, qubit: usize) -> Result<Self> {
        self.apply_local_depolarizing_with(lambda, qubit, Exec::default())
    }

    pub fn apply_local_depolarizing_with(
        &self,
        lambda: f64,
        qubit: usize,
        exec: Exec,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        if qubit >= self.n_qubits {
            return Err(GeqieError::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let kraus = [
            (Pauli::I, 1.0 - 0.75 * lambda),
            (Pauli::X, 0.25 * lambda),
            (Pauli::Y, 0.25 * lambda),
            (Pauli::Z, 0.25 * lambda),
        ];
        let dim = self.dim();
        let mask = 1usize << qubit;
        let src = &self.entries;
        let mut entries = vec![ZERO; dim * dim];
        exec::for_each_chunk_mut(exec, &mut entries, dim, |i, row| {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc = ZERO;
                for &(p, w) in &kraus {
                    if w == 0.0 {
                        continue;
                    }
                    // (PρP†)_ij = φ(k) ρ_kl φ(l)*, with k = i⊕f, l = j⊕f
                    let (k, l) = if p.flips() {
                        (i ^ mask, j ^ mask)
                    } else {
                        (i, j)
                    };
                    let phase = p.phase(k & mask != 0) * p.phase(l & mask != 0).conj();
                    acc += phase * src[k * dim + l] * w;
                }
                *out = acc;
            }
        });
        Ok(Self {
            n_qubits: self.n_qubits,
            entries,
        })
    }

    /// Local depolarizing on every qubit in ascending index order.
    pub fn apply_all_qubit_depolarizing(&self, lambda: f64) -> Result<Self> {
        self.apply_all_qubit_depolarizing_with(lambda, Exec::default())
    }

    pub fn apply_all_qubit_depolarizing_with(&self, lambda: f64, exec: Exec) -> Result<Self> {
        check_lambda(lambda)?;
        let mut rho = self.clone();
        for q in 0..self.n_qubits {
            rho = rho.apply_local_depolarizing_with(lambda, q, exec)?;
        }
        Ok(rho)
    }
}
