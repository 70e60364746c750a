//! The general encoding model: a value map δ and a position map ξ summed over
//! every pixel (and every layer) into one register,
//!
//! ```text
//! |I⟩_k = 1/√(Π dims) · Σ_coords Σ_l  δ_{k,l}(coords, p) ⊗ ξ_{k,l}(coords)
//! ```
//!
//! Register layout: the value register occupies the most significant qubits
//! and the position register the least significant ones, so basis index
//! `value << position_qubits | position`. The default position map is the
//! row-major flattening of the coordinates over the padded extents.

mod assemble;
mod image;
mod unitary;
mod verify;

use num_complex::Complex64;

pub use assemble::{assemble_blocks, assemble_state, qubit_budget, QubitBudget};
pub use image::{
    in_range, padded_extents, position_register_qubits, row_major_index, unflatten, ImageArray,
};
pub use unitary::{completion_unitary, UnitaryMatrix, UNITARY_TOLERANCE};
pub use verify::{verify_model, CheckResult, VerificationReport};

use crate::error::Result;

/// Default cap on simulated register width.
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// A quantum image encoding model `Q = (K, L, D, δ, ξ)` with its retrieval.
///
/// Implementations must return the zero vector from [`value_map`](Self::value_map)
/// for coordinates outside `dims`, and [`position_map`](Self::position_map)
/// must be injective over the padded coordinates of each `(k, l)`.
pub trait EncodingModel: Send + Sync {
    fn name(&self) -> &str;

    /// `K`, the number of non-interfering state blocks.
    fn components(&self) -> usize {
        1
    }

    /// `L`, the number of extra summation layers.
    fn layers(&self) -> usize {
        1
    }

    /// `D`, qubits in the value register. `D = 0` selects amplitude encoding,
    /// where δ yields one complex scalar and the state is renormalized by its
    /// actual L2 norm.
    fn value_qubits(&self) -> usize;

    fn channels(&self) -> usize;

    /// Number of image axes accepted; `None` for any.
    fn axes(&self) -> Option<usize> {
        Some(2)
    }

    /// Auxiliary index qubits appended to the position register.
    fn extra_qubits(&self) -> usize {
        0
    }

    fn position_qubits(&self, dims: &[usize]) -> usize {
        position_register_qubits(dims) + self.extra_qubits()
    }

    /// δ: value-register state (length `2^D`) for one pixel.
    fn value_map(
        &self,
        component: usize,
        layer: usize,
        coords: &[usize],
        dims: &[usize],
        pixel: &[f64],
    ) -> Vec<Complex64>;

    /// ξ: basis index in the position register.
    fn position_map(
        &self,
        component: usize,
        layer: usize,
        coords: &[usize],
        dims: &[usize],
    ) -> usize {
        let _ = (component, layer);
        row_major_index(coords, &padded_extents(dims))
    }

    /// Decodes an image from outcome weights (counts or exact probabilities)
    /// over the full register.
    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray>;

    /// Snaps an image onto the values the model can hold exactly.
    fn representable(&self, image: &ImageArray) -> Result<ImageArray> {
        Ok(image.clone())
    }

    /// Largest per-sample error allowed when retrieving a representable image
    /// from exact probabilities.
    fn roundtrip_tolerance(&self) -> f64 {
        0.0
    }
}
