use super::grid::VoxelGrid;
use super::normalize::{denormalize, normalize, NormScheme};
use crate::encodings::{simulate_weights, Frqi};
use crate::error::Result;
use crate::exec::Exec;
use crate::metrics::pcc;
use crate::model::{assemble_state, EncodingModel, ImageArray};
use crate::simcore::NoiseSpec;

/// Qubit ceiling for grid encodings: a 16³ grid plus the angle qubit.
pub const COSMIC_MAX_QUBITS: usize = 13;

#[derive(Clone, Debug, PartialEq)]
pub struct CosmicRoundTrip {
    pub normalized: VoxelGrid,
    pub retrieved_normalized: VoxelGrid,
    pub retrieved: VoxelGrid,
    pub pcc_normalized: f64,
    pub pcc_denormalized: f64,
    pub qubits: usize,
}

/// Normalize → angle-encode in 3-D → sample noiselessly → decode → denormalize.
pub fn cosmic_roundtrip(
    grid: &VoxelGrid,
    scheme: NormScheme,
    shots: u64,
    seed: u64,
) -> Result<CosmicRoundTrip> {
    cosmic_roundtrip_with(
        grid,
        scheme,
        shots,
        seed,
        COSMIC_MAX_QUBITS,
        Exec::default(),
    )
}

pub fn cosmic_roundtrip_with(
    grid: &VoxelGrid,
    scheme: NormScheme,
    shots: u64,
    seed: u64,
    max_qubits: usize,
    exec: Exec,
) -> Result<CosmicRoundTrip> {
    let normalized = normalize(grid, scheme)?;
    let dims = normalized.resolution().to_vec();
    let image = ImageArray::new(dims.clone(), 1, normalized.values().to_vec())?;
    let model = Frqi::multidim();
    let state = assemble_state(&model, &image, max_qubits)?;
    let weights = simulate_weights(&state, shots, &NoiseSpec::noiseless(), seed, exec)?;
    let decoded = model.retrieve(&weights, &dims)?;
    let retrieved_normalized = VoxelGrid::with_normalization(
        normalized.resolution(),
        decoded.values().to_vec(),
        normalized.normalization(),
    )?;
    let retrieved = denormalize(&retrieved_normalized)?;
    Ok(CosmicRoundTrip {
        pcc_normalized: pcc(normalized.values(), retrieved_normalized.values())?,
        pcc_denormalized: pcc(grid.values(), retrieved.values())?,
        normalized,
        retrieved_normalized,
        retrieved,
        qubits: state.n_qubits(),
    })
}
