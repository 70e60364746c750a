use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::grid::PointCloud;
use crate::error::{GeqieError, Result};
use crate::rng::{derive_seed, stream};

/// Seeded clustered point set: Gaussian halos with exponentially distributed
/// weights over a uniform background, wrapped periodically into the box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticCloud {
    pub points: usize,
    pub box_size: f64,
    /// Share of points drawn uniformly over the box.
    pub background_fraction: f64,
    pub halos: usize,
    /// Halo radii are uniform in `[sigma_min, sigma_max]`.
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl Default for SyntheticCloud {
    fn default() -> Self {
        Self {
            points: 100_000,
            box_size: 200.0,
            background_fraction: 0.2,
            halos: 250,
            sigma_min: 8.0,
            sigma_max: 15.0,
        }
    }
}

impl SyntheticCloud {
    pub fn generate(&self, seed: u64) -> Result<PointCloud> {
        if !(0.0..=1.0).contains(&self.background_fraction)
            || self.sigma_min <= 0.0
            || self.sigma_max < self.sigma_min
            || (self.halos == 0 && self.background_fraction < 1.0)
        {
            return Err(GeqieError::Domain(format!(
                "invalid synthetic cloud {self:?}"
            )));
        }
        let l = self.box_size;
        let mut rng = stream(derive_seed(seed, 0));
        let uniform = |rng: &mut crate::rng::StreamRng| -> [f64; 3] {
            [0, 1, 2].map(|_| rng.random::<f64>() * l)
        };

        let centres: Vec<[f64; 3]> = (0..self.halos).map(|_| uniform(&mut rng)).collect();
        let radii: Vec<f64> = (0..self.halos)
            .map(|_| rng.random_range(self.sigma_min..=self.sigma_max))
            .collect();
        let weights: Vec<f64> = (0..self.halos).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = weights.iter().sum();
        let mut cumulative = Vec::with_capacity(self.halos);
        let mut acc = 0.0;
        for w in &weights {
            acc += w / total;
            cumulative.push(acc);
        }

        let mut rng = stream(derive_seed(seed, 1));
        let mut points = Vec::with_capacity(self.points);
        for _ in 0..self.points {
            if self.halos == 0 || rng.random::<f64>() < self.background_fraction {
                points.push(uniform(&mut rng));
                continue;
            }
            let u: f64 = rng.random();
            let h = cumulative.partition_point(|&c| c < u).min(self.halos - 1);
            let p = [0, 1, 2].map(|a| {
                let z: f64 = StandardNormal.sample(&mut rng);
                let c = (centres[h][a] + radii[h] * z).rem_euclid(l);
                // rem_euclid can round up to exactly l
                if c >= l {
                    0.0
                } else {
                    c
                }
            });
            points.push(p);
        }
        PointCloud::new(points, l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_inside_box() {
        let cfg = SyntheticCloud {
            points: 2000,
            ..Default::default()
        };
        let a = cfg.generate(5).unwrap();
        assert_eq!(a, cfg.generate(5).unwrap());
        assert_ne!(a, cfg.generate(6).unwrap());
        assert_eq!(a.len(), 2000);
        assert!(a
            .points()
            .iter()
            .flatten()
            .all(|&c| (0.0..200.0).contains(&c)));
    }
}
