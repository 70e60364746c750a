//! Angle-encoded value maps: FRQI, MFRQI, IFRQI, FRQCI and MCQI.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

use num_complex::Complex64;

use super::common::{angle_pair, decode_angle, quantize, real, to_level, zeros, Layout};
use crate::error::Result;
use crate::model::{in_range, EncodingModel, ImageArray};

/// One angle qubit per pixel, `θ = (π/2)·g`. With `multidim` set the model
/// accepts any number of axes (MFRQI).
#[derive(Clone, Debug)]
pub struct Frqi {
    multidim: bool,
}

impl Frqi {
    pub fn new() -> Self {
        Self { multidim: false }
    }

    pub fn multidim() -> Self {
        Self { multidim: true }
    }
}

impl Default for Frqi {
    fn default() -> Self {
        Self::new()
    }
}

impl EncodingModel for Frqi {
    fn name(&self) -> &str {
        if self.multidim {
            "mfrqi"
        } else {
            "frqi"
        }
    }

    fn value_qubits(&self) -> usize {
        1
    }

    fn channels(&self) -> usize {
        1
    }

    fn axes(&self) -> Option<usize> {
        if self.multidim {
            None
        } else {
            Some(2)
        }
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
            return zeros(2);
        }
        let (c, s) = angle_pair(pixel[0]);
        vec![real(c), real(s)]
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        let layout = Layout::check(self.name(), weights, 1, self.position_qubits(dims), dims)?;
        let n: usize = dims.iter().product();
        let values = (0..n)
            .map(|flat| {
                let pos = layout.position(flat, dims);
                decode_angle(weights[layout.index(0, pos)], weights[layout.index(1, pos)])
            })
            .collect();
        ImageArray::new(dims.to_vec(), 1, values)
    }

    fn roundtrip_tolerance(&self) -> f64 {
        1e-12
    }
}

const IFRQI_ANGLES: [f64; 4] = [0.0, FRAC_PI_6, FRAC_PI_3, FRAC_PI_2];
/// Decision thresholds between the `P₁` levels {0, 1/4, 3/4, 1}.
const IFRQI_THRESHOLDS: [f64; 3] = [0.125, 0.5, 0.875];

/// Four angle qubits per pixel, each carrying one 2-bit pair of the 8-bit
/// intensity. Qubit `j` of the value register holds bits `2j..2j+2`.
#[derive(Clone, Debug, Default)]
pub struct Ifrqi;

impl EncodingModel for Ifrqi {
    fn name(&self) -> &str {
        "ifrqi"
    }

    fn value_qubits(&self) -> usize {
        4
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
            return zeros(16);
        }
        let byte = to_level(pixel[0], 255);
        let qubits: Vec<(f64, f64)> = (0..4)
            .map(|j| {
                let theta = IFRQI_ANGLES[((byte >> (2 * j)) & 3) as usize];
                (theta.cos(), theta.sin())
            })
            .collect();
        (0..16usize)
            .map(|v| {
                let amp: f64 = qubits
                    .iter()
                    .enumerate()
                    .map(|(j, &(c, s))| if v >> j & 1 == 1 { s } else { c })
                    .product();
                real(amp)
            })
            .collect()
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        let layout = Layout::check(self.name(), weights, 4, self.position_qubits(dims), dims)?;
        let n: usize = dims.iter().product();
        let values = (0..n)
            .map(|flat| {
                let pos = layout.position(flat, dims);
                let per_value: Vec<f64> = (0..16).map(|v| weights[layout.index(v, pos)]).collect();
                let total: f64 = per_value.iter().sum();
                if total <= 0.0 {
                    return 0.0;
                }
                let byte = (0..4).fold(0u32, |acc, j| {
                    let p1 = per_value
                        .iter()
                        .enumerate()
                        .filter(|(v, _)| v >> j & 1 == 1)
                        .map(|(_, w)| w)
                        .sum::<f64>()
                        / total;
                    let pair = IFRQI_THRESHOLDS.iter().filter(|&&t| p1 >= t).count() as u32;
                    acc | pair << (2 * j)
                });
                byte as f64 / 255.0
            })
            .collect();
        ImageArray::new(dims.to_vec(), 1, values)
    }

    fn representable(&self, image: &ImageArray) -> Result<ImageArray> {
        quantize(image, 8)
    }
}

const FRQCI_CODE_MAX: f64 = ((1u32 << 24) - 1) as f64;

/// All three 8-bit channels packed into one angle qubit,
/// `θ = (π/2)·(R·2¹⁶ + G·2⁸ + B)/(2²⁴ − 1)`: red most significant, blue least.
/// Decoding rounds to the nearest representable triple, so sampling error
/// lands on blue first.
#[derive(Clone, Debug, Default)]
pub struct Frqci;

impl Frqci {
    fn pack(pixel: &[f64]) -> f64 {
        let [r, g, b] = [0, 1, 2].map(|c| to_level(pixel[c], 255) as u64);
        ((r << 16) | (g << 8) | b) as f64 / FRQCI_CODE_MAX
    }

    fn unpack(s: f64) -> [f64; 3] {
        let code = (s * FRQCI_CODE_MAX).round().clamp(0.0, FRQCI_CODE_MAX) as u32;
        [(code >> 16) & 0xff, (code >> 8) & 0xff, code & 0xff].map(|b| b as f64 / 255.0)
    }
}

impl EncodingModel for Frqci {
    fn name(&self) -> &str {
        "frqci"
    }

    fn value_qubits(&self) -> usize {
        1
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
        if !in_range(coords, dims) {
            return zeros(2);
        }
        let (c, s) = angle_pair(Self::pack(pixel));
        vec![real(c), real(s)]
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        let layout = Layout::check(self.name(), weights, 1, self.position_qubits(dims), dims)?;
        let n: usize = dims.iter().product();
        let mut values = Vec::with_capacity(3 * n);
        for flat in 0..n {
            let pos = layout.position(flat, dims);
            let w0 = weights[layout.index(0, pos)];
            let w1 = weights[layout.index(1, pos)];
            if w0 + w1 <= 0.0 {
                values.extend([0.0; 3]);
            } else {
                values.extend(Self::unpack(decode_angle(w0, w1)));
            }
        }
        ImageArray::new(dims.to_vec(), 3, values)
    }

    fn representable(&self, image: &ImageArray) -> Result<ImageArray> {
        quantize(image, 8)
    }
}

/// Two channel-selector qubits (00 → R, 01 → G, 10 → B, 11 unused) above one
/// angle qubit: `(1/√3)·Σ_c |c⟩(cos θ_c|0⟩ + sin θ_c|1⟩)`.
#[derive(Clone, Debug, Default)]
pub struct Mcqi;

impl EncodingModel for Mcqi {
    fn name(&self) -> &str {
        "mcqi"
    }

    fn value_qubits(&self) -> usize {
        3
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
        let mut out = zeros(8);
        if !in_range(coords, dims) {
            return out;
        }
        let w = 1.0 / 3f64.sqrt();
        for c in 0..3 {
            let (cos, sin) = angle_pair(pixel[c]);
            out[c << 1] = real(w * cos);
            out[(c << 1) | 1] = real(w * sin);
        }
        out
    }

    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        let layout = Layout::check(self.name(), weights, 3, self.position_qubits(dims), dims)?;
        let n: usize = dims.iter().product();
        let mut values = Vec::with_capacity(3 * n);
        for flat in 0..n {
            let pos = layout.position(flat, dims);
            for c in 0..3 {
                values.push(decode_angle(
                    weights[layout.index(c << 1, pos)],
                    weights[layout.index((c << 1) | 1, pos)],
                ));
            }
        }
        ImageArray::new(dims.to_vec(), 3, values)
    }

    fn roundtrip_tolerance(&self) -> f64 {
        1e-12
    }
}
