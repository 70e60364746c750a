use rand::Rng;

use crate::error::{GeqieError, Result};
use crate::rng;

/// A `d`-axis raster with `C` channels, values normalized to `[0, 1]`.
///
/// Values are stored row-major over the axes with channels innermost:
/// `values[flat * C + c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageArray {
    dims: Vec<usize>,
    channels: usize,
    values: Vec<f64>,
    bit_depth: u32,
}

impl ImageArray {
    pub fn new(dims: Vec<usize>, channels: usize, values: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(GeqieError::Shape(format!("invalid extents {dims:?}")));
        }
        if channels == 0 {
            return Err(GeqieError::Shape("image needs at least one channel".into()));
        }
        let expected = dims.iter().product::<usize>() * channels;
        if values.len() != expected {
            return Err(GeqieError::Shape(format!(
                "{} values for extents {dims:?} with {channels} channel(s), expected {expected}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(GeqieError::Domain(format!(
                "pixel value {bad} outside [0, 1]"
            )));
        }
        Ok(Self {
            dims,
            channels,
            values,
            bit_depth: 8,
        })
    }

    pub fn zeros(dims: Vec<usize>, channels: usize) -> Result<Self> {
        let len = dims.iter().product::<usize>() * channels;
        Self::new(dims, channels, vec![0.0; len])
    }

    /// From 8-bit samples, `v / 255`.
    pub fn from_u8(dims: Vec<usize>, channels: usize, samples: &[u8]) -> Result<Self> {
        Self::new(
            dims,
            channels,
            samples.iter().map(|&s| s as f64 / 255.0).collect(),
        )
    }

    /// Independent uniform 8-bit samples per channel.
    pub fn random_u8(dims: Vec<usize>, channels: usize, seed: u64) -> Result<Self> {
        let len = dims.iter().product::<usize>() * channels;
        let mut rng = rng::stream(seed);
        let samples: Vec<u8> = (0..len).map(|_| rng.random()).collect();
        Self::from_u8(dims, channels, &samples)
    }

    pub fn with_bit_depth(mut self, bit_depth: u32) -> Self {
        self.bit_depth = bit_depth;
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_pixels(&self) -> usize {
        self.dims.iter().product()
    }

    /// Channel vector of the pixel at row-major index `flat`.
    pub fn pixel(&self, flat: usize) -> &[f64] {
        &self.values[flat * self.channels..(flat + 1) * self.channels]
    }

    /// Channel vector at `coords`, or `None` outside the extents.
    pub fn pixel_at(&self, coords: &[usize]) -> Option<&[f64]> {
        if coords.len() != self.dims.len() || coords.iter().zip(&self.dims).any(|(c, d)| c >= d) {
            return None;
        }
        Some(self.pixel(row_major_index(coords, &self.dims)))
    }

    /// Samples rounded to the `bit_depth` integer scale.
    pub fn quantized(&self) -> Vec<u32> {
        let max = ((1u64 << self.bit_depth) - 1) as f64;
        self.values
            .iter()
            .map(|v| (v * max).round() as u32)
            .collect()
    }

    /// 8-bit samples, `round(255 · v)`.
    pub fn to_u8(&self) -> Vec<u8> {
        self.values
            .iter()
            .map(|v| (v * 255.0).round() as u8)
            .collect()
    }

    pub fn map_values<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Ok(Self::new(self.dims.clone(), self.channels, values)?.with_bit_depth(self.bit_depth))
    }
}

/// Row-major flattening of `coords` over `extents`.
pub fn row_major_index(coords: &[usize], extents: &[usize]) -> usize {
    coords
        .iter()
        .zip(extents)
        .fold(0, |acc, (&c, &e)| acc * e + c)
}

/// Inverse of [`row_major_index`].
pub fn unflatten(mut flat: usize, extents: &[usize]) -> Vec<usize> {
    let mut coords = vec![0; extents.len()];
    for (c, &e) in coords.iter_mut().zip(extents).rev() {
        *c = flat % e;
        flat /= e;
    }
    coords
}

pub fn in_range(coords: &[usize], extents: &[usize]) -> bool {
    coords.len() == extents.len() && coords.iter().zip(extents).all(|(c, e)| c < e)
}

/// Each extent rounded up to the next power of two.
pub fn padded_extents(dims: &[usize]) -> Vec<usize> {
    dims.iter().map(|&d| d.max(1).next_power_of_two()).collect()
}

/// Qubits needed to index the padded grid: `Σ ⌈log2 extent⌉`.
pub fn position_register_qubits(dims: &[usize]) -> usize {
    padded_extents(dims)
        .iter()
        .map(|e| e.trailing_zeros() as usize)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_examples() {
        assert_eq!(padded_extents(&[2, 2]), vec![2, 2]);
        assert_eq!(padded_extents(&[3, 5]), vec![4, 8]);
        assert_eq!(padded_extents(&[16, 16, 16]), vec![16, 16, 16]);
        assert_eq!(position_register_qubits(&[3, 5]), 5);
        assert_eq!(position_register_qubits(&[1, 1]), 0);
    }

    #[test]
    fn flatten_roundtrip() {
        let ext = [3, 4, 5];
        for flat in 0..60 {
            assert_eq!(row_major_index(&unflatten(flat, &ext), &ext), flat);
        }
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(ImageArray::new(vec![1, 2], 1, vec![0.0, 1.2]).is_err());
        assert!(ImageArray::new(vec![1, 2], 1, vec![0.0]).is_err());
    }

    #[test]
    fn pixel_lookup() {
        let img =
            ImageArray::from_u8(vec![2, 2], 3, &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]).unwrap();
        assert_eq!(img.pixel_at(&[1, 0]).unwrap()[0], 6.0 / 255.0);
        assert!(img.pixel_at(&[2, 0]).is_none());
        assert_eq!(img.to_u8()[11], 11);
    }
}
