use super::grid::VoxelGrid;
use crate::error::{GeqieError, Result};

/// Population standard deviation of the grid values.
pub fn spread_sigma(grid: &VoxelGrid) -> f64 {
    let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
    for &v in grid.values() {
        n += 1.0;
        let d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    if n == 0.0 {
        0.0
    } else {
        (m2 / n).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    /// `bins + 1` ascending edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Equal-width histogram over `[0, 1]` for normalized grids, `[0, max]` otherwise.
pub fn histogram(grid: &VoxelGrid, bins: usize) -> Result<Histogram> {
    if bins < 2 {
        return Err(GeqieError::Domain(format!(
            "need at least 2 bins, got {bins}"
        )));
    }
    let upper = if grid.normalization().is_some() {
        1.0
    } else {
        grid.values().iter().copied().fold(0.0, f64::max)
    };
    let upper = if upper > 0.0 { upper } else { 1.0 };
    let edges = (0..=bins).map(|i| upper * i as f64 / bins as f64).collect();
    let mut counts = vec![0u64; bins];
    for &v in grid.values() {
        let b = ((v / upper) * bins as f64).floor() as usize;
        counts[b.min(bins - 1)] += 1;
    }
    Ok(Histogram { edges, counts })
}
