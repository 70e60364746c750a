//! Basis-encoded value maps: NEQR, QUALPI, NCQI and QRCI.

use num_complex::Complex64;

use super::common::{majority_value, quantize, real, to_level, zeros, Layout};
use crate::error::{GeqieError, Result};
use crate::model::{
    in_range, padded_extents, position_register_qubits, row_major_index, EncodingModel, ImageArray,
};

fn basis_state(dim: usize, index: usize) -> Vec<Complex64> {
    let mut out = zeros(dim);
    out[index] = real(1.0);
    out
}

fn decode_gray8(
    name: &str,
    weights: &[f64],
    position_qubits: usize,
    dims: &[usize],
) -> Result<ImageArray> {
    let layout = Layout::check(name, weights, 8, position_qubits, dims)?;
    let n: usize = dims.iter().product();
    let values = (0..n)
        .map(|flat| {
            let pos = layout.position(flat, dims);
            majority_value(weights, &layout, 8, pos).map_or(0.0, |v| v as f64 / 255.0)
        })
        .collect();
    ImageArray::new(dims.to_vec(), 1, values)
}

/// 8-bit intensity as a basis state of an 8-qubit value register.
#[derive(Clone, Debug, Default)]
pub struct Neqr;

impl EncodingModel for Neqr {
    fn name(&self) -> &str {
        "neqr"
    }

    fn value_qubits(&self) -> usize {
        8
    }

    fn channels(&self) -> usize {
        1
    }

    fn value_map(
        &self,
        _: usize,
        _: usize,
        coords: &[usize],
        dims: &[usize],
        pixel: &[f64],
    ) -> Vec<Complex64> {
        if !in_range(coords, dims) {
            return zeros(256);
        }
        basis_state(256, to_level(pixel[0], 255) as usize)
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        decode_gray8(self.name(), weights, self.position_qubits(dims), dims)
    }

    fn representable(&self, image: &ImageArray) -> Result<ImageArray> {
        quantize(image, 8)
    }
}

/// Log-polar raster with NEQR-style 8-bit values. Axis 0 is the radial
/// coordinate ρ and axis 1 the angular coordinate θ; the position register is
/// `⌈log2 R⌉ + ⌈log2 Θ⌉` qubits, ρ in the high part.
#[derive(Clone, Debug, Default)]
pub struct Qualpi;

impl EncodingModel for Qualpi {
    fn name(&self) -> &str {
        "qualpi"
    }

    fn value_qubits(&self) -> usize {
        8
    }

    fn channels(&self) -> usize {
        1
    }

    fn value_map(
        &self,
        _: usize,
        _: usize,
        coords: &[usize],
        dims: &[usize],
        pixel: &[f64],
    ) -> Vec<Complex64> {
        if !in_range(coords, dims) {
            return zeros(256);
        }
        basis_state(256, to_level(pixel[0], 255) as usize)
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        decode_gray8(self.name(), weights, self.position_qubits(dims), dims)
    }

    fn representable(&self, image: &ImageArray) -> Result<ImageArray> {
        quantize(image, 8)
    }
}

/// Default NCQI channel depth.
pub const NCQI_DEFAULT_BITS: u32 = 3;

/// Concatenated `q`-bit basis encodings of R, G, B (R most significant),
/// `D = 3q`.
#[derive(Clone, Debug)]
pub struct Ncqi {
    bits: u32,
}

impl Ncqi {
    pub fn new(bits: u32) -> Result<Self> {
        if !(1..=8).contains(&bits) {
            return Err(GeqieError::Domain(format!(
                "NCQI channel depth {bits} outside 1..=8"
            )));
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn max_level(&self) -> u32 {
        (1 << self.bits) - 1
    }
}

impl Default for Ncqi {
    fn default() -> Self {
        Self {
            bits: NCQI_DEFAULT_BITS,
        }
    }
}

impl EncodingModel for Ncqi {
    fn name(&self) -> &str {
        "ncqi"
    }

    fn value_qubits(&self) -> usize {
        3 * self.bits as usize
    }

    fn channels(&self) -> usize {
        3
    }

    fn value_map(
        &self,
        _: usize,
        _: usize,
        coords: &[usize],
        dims: &[usize],
        pixel: &[f64],
    ) -> Vec<Complex64> {
        let dim = 1usize << self.value_qubits();
        if !in_range(coords, dims) {
            return zeros(dim);
        }
        let q = self.bits;
        let [r, g, b] = [0, 1, 2].map(|c| to_level(pixel[c], self.max_level()) as usize);
        basis_state(dim, (r << (2 * q)) | (g << q) | b)
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        let d = self.value_qubits();
        let layout = Layout::check(self.name(), weights, d, self.position_qubits(dims), dims)?;
        let n: usize = dims.iter().product();
        let mask = self.max_level() as usize;
        let max = self.max_level() as f64;
        let q = self.bits;
        let mut values = Vec::with_capacity(3 * n);
        for flat in 0..n {
            let pos = layout.position(flat, dims);
            match majority_value(weights, &layout, d, pos) {
                Some(v) => {
                    values.extend([2 * q, q, 0].map(|shift| ((v >> shift) & mask) as f64 / max))
                }
                None => values.extend([0.0; 3]),
            }
        }
        ImageArray::new(dims.to_vec(), 3, values)
    }

    fn representable(&self, image: &ImageArray) -> Result<ImageArray> {
        quantize(image, self.bits)
    }
}

const QRCI_PLANES: usize = 8;
const QRCI_PLANE_QUBITS: usize = 3;

/// Bit-plane RGB encoding. Layer `l` stores the three channel bits of plane
/// `l` as a basis state on 3 color qubits (R most significant), tagged by a
/// 3-qubit plane register placed above the spatial position bits. Each layer
/// carries weight `1/√8` so the eight planes sum to a unit-norm pixel.
#[derive(Clone, Debug, Default)]
pub struct Qrci;

impl EncodingModel for Qrci {
    fn name(&self) -> &str {
        "qrci"
    }

    fn layers(&self) -> usize {
        QRCI_PLANES
    }

    fn value_qubits(&self) -> usize {
        3
    }

    fn channels(&self) -> usize {
        3
    }

    fn extra_qubits(&self) -> usize {
        QRCI_PLANE_QUBITS
    }

    fn value_map(
        &self,
        _: usize,
        layer: usize,
        coords: &[usize],
        dims: &[usize],
        pixel: &[f64],
    ) -> Vec<Complex64> {
        if !in_range(coords, dims) {
            return zeros(8);
        }
        let bits = [0, 1, 2].map(|c| (to_level(pixel[c], 255) as usize >> layer) & 1);
        let mut out = zeros(8);
        out[(bits[0] << 2) | (bits[1] << 1) | bits[2]] = real(1.0 / (QRCI_PLANES as f64).sqrt());
        out
    }

    fn position_map(&self, _: usize, layer: usize, coords: &[usize], dims: &[usize]) -> usize {
        (layer << position_register_qubits(dims)) | row_major_index(coords, &padded_extents(dims))
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        let layout = Layout::check(self.name(), weights, 3, self.position_qubits(dims), dims)?;
        let spatial = position_register_qubits(dims);
        let n: usize = dims.iter().product();
        let mut values = Vec::with_capacity(3 * n);
        for flat in 0..n {
            let pos = layout.position(flat, dims);
            let mut bytes = [0usize; 3];
            for plane in 0..QRCI_PLANES {
                if let Some(v) = majority_value(weights, &layout, 3, (plane << spatial) | pos) {
                    bytes[0] |= (v >> 2 & 1) << plane;
                    bytes[1] |= (v >> 1 & 1) << plane;
                    bytes[2] |= (v & 1) << plane;
                }
            }
            values.extend(bytes.map(|b| b as f64 / 255.0));
        }
        ImageArray::new(dims.to_vec(), 3, values)
    }

    fn representable(&self, image: &ImageArray) -> Result<ImageArray> {
        quantize(image, 8)
    }
}
