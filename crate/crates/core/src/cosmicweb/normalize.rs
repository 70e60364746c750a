//! Saturating normalizations `v = 1 − base^(−x/s)` mapping non-negative
//! densities into `[0, 1)`, and their inverses.

use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use super::grid::{Normalization, VoxelGrid};
use crate::error::{GeqieError, Result};

/// Largest value passed to the inverse; sampling can saturate at 1.
pub const SATURATION_CLAMP: f64 = 1.0 - 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    E,
    Ten,
}

impl Base {
    fn ln(self) -> f64 {
        match self {
            Base::E => 1.0,
            Base::Ten => LN_10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    Mean,
    /// Lower middle element for even counts.
    Median,
    /// Square of the mean over nonzero voxels.
    MeanNonzeroSquared,
    /// Square of the median over nonzero voxels.
    MedianNonzeroSquared,
}

impl Statistic {
    fn label(self) -> &'static str {
        match self {
            Statistic::Mean => "mean",
            Statistic::Median => "median",
            Statistic::MeanNonzeroSquared => "squared nonzero mean",
            Statistic::MedianNonzeroSquared => "squared nonzero median",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NormScheme {
    base: Base,
    statistic: Statistic,
}

impl NormScheme {
    pub const E_MEAN: Self = Self::of(Base::E, Statistic::Mean);
    pub const E_MEDIAN: Self = Self::of(Base::E, Statistic::Median);
    pub const TEN_MEAN: Self = Self::of(Base::Ten, Statistic::Mean);
    pub const TEN_MEDIAN: Self = Self::of(Base::Ten, Statistic::Median);
    pub const E_MEAN_NONZERO_SQUARED: Self = Self::of(Base::E, Statistic::MeanNonzeroSquared);
    pub const E_MEDIAN_NONZERO_SQUARED: Self = Self::of(Base::E, Statistic::MedianNonzeroSquared);

    pub const ALL: [Self; 6] = [
        Self::E_MEAN,
        Self::E_MEDIAN,
        Self::TEN_MEAN,
        Self::TEN_MEDIAN,
        Self::E_MEAN_NONZERO_SQUARED,
        Self::E_MEDIAN_NONZERO_SQUARED,
    ];

    const fn of(base: Base, statistic: Statistic) -> Self {
        Self { base, statistic }
    }

    pub fn new(base: Base, statistic: Statistic) -> Result<Self> {
        let scheme = Self::of(base, statistic);
        if !Self::ALL.contains(&scheme) {
            return Err(GeqieError::Domain(format!(
                "normalization {base:?} with {} is not offered",
                statistic.label()
            )));
        }
        Ok(scheme)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn statistic(&self) -> Statistic {
        self.statistic
    }

    pub fn name(&self) -> &'static str {
        match (self.base, self.statistic) {
            (Base::E, Statistic::Mean) => "e-mean",
            (Base::E, Statistic::Median) => "e-median",
            (Base::Ten, Statistic::Mean) => "10-mean",
            (Base::Ten, Statistic::Median) => "10-median",
            (Base::E, Statistic::MeanNonzeroSquared) => "e-mean-nz2",
            (Base::E, Statistic::MedianNonzeroSquared) => "e-median-nz2",
            _ => unreachable!("constructor admits only the six offered schemes"),
        }
    }

    /// `1 − base^(−x/s)`.
    pub fn forward(&self, x: f64, scale: f64) -> f64 {
        -(-(x / scale) * self.base.ln()).exp_m1()
    }

    /// Inverse of [`forward`](Self::forward), clamping `v` into `[0, 1 − 1e-12]`.
    pub fn inverse(&self, v: f64, scale: f64) -> f64 {
        let v = v.clamp(0.0, SATURATION_CLAMP);
        -scale * (-v).ln_1p() / self.base.ln()
    }

    /// The scale statistic `s` of `values`.
    pub fn scale(&self, values: &[f64]) -> Result<f64> {
        let degenerate = || GeqieError::DegenerateScale {
            statistic: self.statistic.label().into(),
        };
        let s = match self.statistic {
            Statistic::Mean => mean(values).ok_or_else(degenerate)?,
            Statistic::Median => lower_median(values.to_vec()).ok_or_else(degenerate)?,
            Statistic::MeanNonzeroSquared => {
                let nz: Vec<f64> = values.iter().copied().filter(|&v| v != 0.0).collect();
                mean(&nz).ok_or_else(degenerate)?.powi(2)
            }
            Statistic::MedianNonzeroSquared => {
                let nz: Vec<f64> = values.iter().copied().filter(|&v| v != 0.0).collect();
                lower_median(nz).ok_or_else(degenerate)?.powi(2)
            }
        };
        if s > 0.0 && s.is_finite() {
            Ok(s)
        } else {
            Err(degenerate())
        }
    }
}

impl std::str::FromStr for NormScheme {
    type Err = GeqieError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == key)
            .ok_or_else(|| {
                GeqieError::Parse(format!(
                    "unknown normalization `{s}` (expected one of e-mean, e-median, 10-mean, 10-median, e-mean-nz2, e-median-nz2)"
                ))
            })
    }
}

impl TryFrom<String> for NormScheme {
    type Error = GeqieError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NormScheme> for String {
    fn from(s: NormScheme) -> Self {
        s.name().to_string()
    }
}

impl std::fmt::Display for NormScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn lower_median(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mid = (values.len() - 1) / 2;
    let (_, m, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    Some(*m)
}

pub fn normalize(grid: &VoxelGrid, scheme: NormScheme) -> Result<VoxelGrid> {
    if grid.normalization().is_some() {
        return Err(GeqieError::Domain("grid is already normalized".into()));
    }
    let scale = scheme.scale(grid.values())?;
    let values = grid
        .values()
        .iter()
        .map(|&x| scheme.forward(x, scale))
        .collect();
    VoxelGrid::with_normalization(
        grid.resolution(),
        values,
        Some(Normalization { scheme, scale }),
    )
}

pub fn denormalize(grid: &VoxelGrid) -> Result<VoxelGrid> {
    let Some(Normalization { scheme, scale }) = grid.normalization() else {
        return Err(GeqieError::Domain(
            "grid carries no normalization metadata".into(),
        ));
    };
    let values = grid
        .values()
        .iter()
        .map(|&v| scheme.inverse(v, scale))
        .collect();
    VoxelGrid::new(grid.resolution(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(values: Vec<f64>) -> VoxelGrid {
        VoxelGrid::new([values.len(), 1, 1], values).unwrap()
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = grid(vec![0.0, 1.0, 2.0, 5.0]);
        for scheme in NormScheme::ALL {
            assert_eq!(normalize(&g, scheme).unwrap().values()[0], 0.0, "{scheme}");
        }
    }

    #[test]
    fn value_at_scale() {
        assert_abs_diff_eq!(
            NormScheme::E_MEAN.forward(3.0, 3.0),
            1.0 - (-1f64).exp(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(NormScheme::TEN_MEAN.forward(3.0, 3.0), 0.9, epsilon = 1e-15);
    }

    #[test]
    fn lower_median_of_even_count() {
        assert_eq!(lower_median(vec![4.0, 1.0, 3.0, 2.0]), Some(2.0));
        assert_eq!(lower_median(vec![5.0]), Some(5.0));
    }

    #[test]
    fn nonzero_statistics() {
        let values = [0.0, 0.0, 0.0, 2.0, 4.0];
        assert_eq!(
            NormScheme::E_MEAN_NONZERO_SQUARED.scale(&values).unwrap(),
            9.0
        );
        assert_eq!(
            NormScheme::E_MEDIAN_NONZERO_SQUARED.scale(&values).unwrap(),
            4.0
        );
    }

    #[test]
    fn degenerate_scale_names_statistic() {
        let g = grid(vec![0.0, 0.0, 0.0, 7.0]);
        match normalize(&g, NormScheme::E_MEDIAN) {
            Err(GeqieError::DegenerateScale { statistic }) => assert_eq!(statistic, "median"),
            other => panic!("unexpected {other:?}"),
        }
        let zeros = grid(vec![0.0; 4]);
        assert!(matches!(
            normalize(&zeros, NormScheme::E_MEAN_NONZERO_SQUARED),
            Err(GeqieError::DegenerateScale { .. })
        ));
    }

    #[test]
    fn saturated_values_are_clamped() {
        let x = NormScheme::E_MEAN.inverse(1.0, 2.0);
        assert!(x.is_finite());
        assert_abs_diff_eq!(x, -2.0 * (1e-12f64).ln(), epsilon = 1e-3);
        assert_eq!(NormScheme::E_MEAN.inverse(0.0, 2.0), 0.0);
    }

    #[test]
    fn denormalize_requires_metadata() {
        assert!(denormalize(&grid(vec![0.1, 0.2])).is_err());
    }

    #[test]
    fn scheme_names_roundtrip() {
        for s in NormScheme::ALL {
            assert_eq!(s.name().parse::<NormScheme>().unwrap(), s);
        }
        assert!(NormScheme::new(Base::Ten, Statistic::MeanNonzeroSquared).is_err());
    }
}
