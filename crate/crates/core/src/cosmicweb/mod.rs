//! Particle catalogues to density grids: voxelization, saturating
//! normalization, distribution statistics and encode/retrieve round trips.

mod grid;
mod normalize;
mod roundtrip;
mod stats;
mod synth;

pub use grid::{voxelize, voxelize_with, Normalization, PointCloud, VoxelGrid};
pub use normalize::{denormalize, normalize, Base, NormScheme, Statistic, SATURATION_CLAMP};
pub use roundtrip::{cosmic_roundtrip, cosmic_roundtrip_with, CosmicRoundTrip, COSMIC_MAX_QUBITS};
pub use stats::{histogram, spread_sigma, Histogram};
pub use synth::SyntheticCloud;
