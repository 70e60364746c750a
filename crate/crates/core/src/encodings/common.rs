use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{GeqieError, Result};
use crate::model::{padded_extents, row_major_index, unflatten, ImageArray};

pub(crate) fn zeros(len: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); len]
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `cos θ|0⟩ + sin θ|1⟩` with `θ = (π/2)·g`.
pub(crate) fn angle_pair(g: f64) -> (f64, f64) {
    let theta = FRAC_PI_2 * g;
    (theta.cos(), theta.sin())
}

/// Inverse of [`angle_pair`] from outcome weights: `g = (2/π)·atan2(√w₁, √w₀)`,
/// i.e. `(2/π)·asin(√P̂₁)`. Empty positions decode to 0.
pub(crate) fn decode_angle(w0: f64, w1: f64) -> f64 {
    if w0 + w1 <= 0.0 {
        return 0.0;
    }
    (w1.max(0.0).sqrt().atan2(w0.max(0.0).sqrt()) / FRAC_PI_2).clamp(0.0, 1.0)
}

pub(crate) fn to_level(v: f64, max_level: u32) -> u32 {
    (v * max_level as f64).round() as u32
}

pub(crate) fn quantize(image: &ImageArray, bits: u32) -> Result<ImageArray> {
    let max = ((1u64 << bits) - 1) as f64;
    image.map_values(|v| (v * max).round() / max)
}

/// Register geometry shared by all decoders.
pub(crate) struct Layout {
    pub position_qubits: usize,
    pub padded: Vec<usize>,
}

impl Layout {
    pub fn check(
        name: &str,
        weights: &[f64],
        value_qubits: usize,
        position_qubits: usize,
        dims: &[usize],
    ) -> Result<Self> {
        let n = value_qubits + position_qubits;
        if weights.len() != 1usize << n {
            return Err(GeqieError::Shape(format!(
                "`{name}` on {dims:?} uses {n} qubits, got {} outcome weights",
                weights.len()
            )));
        }
        Ok(Self {
            position_qubits,
            padded: padded_extents(dims),
        })
    }

    /// Position-register index of the pixel at row-major `flat` over `dims`.
    pub fn position(&self, flat: usize, dims: &[usize]) -> usize {
        row_major_index(&unflatten(flat, dims), &self.padded)
    }

    pub fn index(&self, value: usize, position: usize) -> usize {
        (value << self.position_qubits) | position
    }
}

/// Most frequent value-register state at `position` (lowest index on ties),
/// or `None` when nothing was observed there.
pub(crate) fn majority_value(
    weights: &[f64],
    layout: &Layout,
    value_qubits: usize,
    position: usize,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for v in 0..(1usize << value_qubits) {
        let w = weights[layout.index(v, position)];
        if w > 0.0 && best.is_none_or(|(_, bw)| w > bw) {
            best = Some((v, w));
        }
    }
    best.map(|(v, _)| v)
}
