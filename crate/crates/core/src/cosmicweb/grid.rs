use serde::{Deserialize, Serialize};

use super::normalize::NormScheme;
use crate::error::{GeqieError, Result};
use crate::exec::{self, Exec};

/// Points handled per voxelization work unit.
const VOXELIZE_CHUNK: usize = 1 << 16;

/// Particle positions inside a cubic box `[0, box_size]³`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<[f64; 3]>,
    box_size: f64,
}

impl PointCloud {
    pub fn new(points: Vec<[f64; 3]>, box_size: f64) -> Result<Self> {
        if !(box_size > 0.0 && box_size.is_finite()) {
            return Err(GeqieError::Domain(format!(
                "box size {box_size} must be positive"
            )));
        }
        if let Some(p) = points
            .iter()
            .find(|p| p.iter().any(|&c| !(0.0..=box_size).contains(&c)))
        {
            return Err(GeqieError::Domain(format!(
                "point {p:?} lies outside the box [0, {box_size}]"
            )));
        }
        Ok(Self { points, box_size })
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn box_size(&self) -> f64 {
        self.box_size
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Scale applied by a normalization, kept for inversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub scheme: NormScheme,
    pub scale: f64,
}

/// Cubic density grid, row-major over `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VoxelGrid {
    resolution: [usize; 3],
    values: Vec<f64>,
    normalization: Option<Normalization>,
}

impl VoxelGrid {
    pub fn new(resolution: [usize; 3], values: Vec<f64>) -> Result<Self> {
        Self::with_normalization(resolution, values, None)
    }

    pub fn with_normalization(
        resolution: [usize; 3],
        values: Vec<f64>,
        normalization: Option<Normalization>,
    ) -> Result<Self> {
        if resolution.contains(&0) {
            return Err(GeqieError::Shape(format!(
                "invalid grid resolution {resolution:?}"
            )));
        }
        if values.len() != resolution.iter().product::<usize>() {
            return Err(GeqieError::Shape(format!(
                "{} values for a {resolution:?} grid",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(GeqieError::Domain(
                "grid values must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            resolution,
            values,
            normalization,
        })
    }

    pub fn resolution(&self) -> [usize; 3] {
        self.resolution
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> Option<Normalization> {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let [_, ny, nz] = self.resolution;
        self.values[(i * ny + j) * nz + k]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn zero_fraction(&self) -> f64 {
        self.values.iter().filter(|&&v| v == 0.0).count() as f64 / self.len() as f64
    }
}

/// Counts particles per voxel. A coordinate equal to the box size falls in
/// the last voxel.
pub fn voxelize(cloud: &PointCloud, resolution: usize) -> Result<VoxelGrid> {
    voxelize_with(cloud, resolution, Exec::default())
}

pub fn voxelize_with(cloud: &PointCloud, resolution: usize, exec: Exec) -> Result<VoxelGrid> {
    if resolution < 2 || !resolution.is_power_of_two() {
        return Err(GeqieError::Domain(format!(
            "resolution {resolution} must be a power of two >= 2"
        )));
    }
    if cloud.is_empty() {
        return Err(GeqieError::Domain(
            "cannot voxelize an empty point cloud".into(),
        ));
    }
    let scale = resolution as f64 / cloud.box_size();
    let last = resolution - 1;
    let cell = |c: f64| ((c * scale).floor() as usize).min(last);
    let cells = resolution * resolution * resolution;

    let chunks: Vec<&[[f64; 3]]> = cloud.points().chunks(VOXELIZE_CHUNK).collect();
    let partial = exec::map_slice(exec, &chunks, |chunk| {
        let mut counts = vec![0u64; cells];
        for p in chunk.iter() {
            let idx = (cell(p[0]) * resolution + cell(p[1])) * resolution + cell(p[2]);
            counts[idx] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; cells];
    for part in partial {
        counts.iter_mut().zip(part).for_each(|(c, p)| *c += p);
    }
    VoxelGrid::new(
        [resolution; 3],
        counts.into_iter().map(|c| c as f64).collect(),
    )
}
