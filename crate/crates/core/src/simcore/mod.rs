//! Dense statevector and density-matrix simulation, depolarizing noise, and
//! seeded shot sampling.
//!
//! Bit convention: qubit 0 is the least significant bit of a basis index.

mod density;
mod noise;
mod sampling;
mod state;

pub use density::{
    DensityMatrix, Pauli, DENSITY_QUBIT_CAP, HERMITIAN_TOLERANCE, PSD_TOLERANCE, TRACE_TOLERANCE,
};
pub use noise::{
    global_depolarized_probabilities, measure_probabilities, noisy_probabilities,
    per_qubit_depolarized_probabilities, Measurable, NoiseMode, NoiseSpec,
};
pub use sampling::{
    sample_counts, sample_counts_trajectories, sample_counts_trajectories_with, total_variation,
    CountsHistogram, TRAJECTORY_BATCH,
};
pub use state::{StateVector, NORM_TOLERANCE};

/// `to_density`: the pure-state density matrix `|ψ⟩⟨ψ|`.
pub fn to_density(state: &StateVector) -> crate::error::Result<DensityMatrix> {
    DensityMatrix::from_state(state)
}
