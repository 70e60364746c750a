//! Image similarity metrics: Pearson correlation, MSE and PSNR.
//!
//! Image comparisons quantize both images to 8-bit (`round(255·v)`) first so
//! MSE lives on the same 0..255 scale as the PSNR peak value.

use serde::{Deserialize, Serialize};

use crate::error::{GeqieError, Result};
use crate::model::ImageArray;

/// Peak sample value of an 8-bit channel.
pub const PEAK: f64 = 255.0;

/// Display ceiling for PSNR in plots and plot-ready exports.
pub const PSNR_DISPLAY_CAP_DB: f64 = 60.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricPair {
    pub pcc: f64,
    /// `+∞` exactly when the MSE is zero.
    pub psnr_db: f64,
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(GeqieError::Shape(format!(
            "vectors have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// Pearson correlation coefficient. Returns 0 when either vector has zero
/// variance.
///
/// Accumulates the means and co-moments in one streaming pass.
pub fn pcc(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    if x.len() < 2 {
        return Err(GeqieError::Shape(
            "correlation needs at least two samples".into(),
        ));
    }
    let (mut mx, mut my) = (0.0, 0.0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        let n = (i + 1) as f64;
        let dx = a - mx;
        let dy = b - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (a - mx);
        syy += dy * (b - my);
        sxy += dx * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Ok(0.0);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Mean squared error; inputs are expected on the 0..255 scale.
pub fn mse(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    if x.is_empty() {
        return Err(GeqieError::Shape("MSE of empty vectors".into()));
    }
    Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / x.len() as f64)
}

/// `20·log10(255/√MSE)`, `+∞` for a perfect match.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (PEAK / mse.sqrt()).log10()
    }
}

pub fn psnr(x: &[f64], y: &[f64]) -> Result<f64> {
    mse(x, y).map(psnr_from_mse)
}

/// `min(psnr, 60)`, with `+∞ → 60`.
pub fn psnr_display_cap(psnr_db: f64) -> f64 {
    psnr_db.min(PSNR_DISPLAY_CAP_DB)
}

/// PCC and PSNR of `retrieved` against `reference`, both quantized to 8-bit.
pub fn image_metrics(reference: &ImageArray, retrieved: &ImageArray) -> Result<MetricPair> {
    if reference.dims() != retrieved.dims() || reference.channels() != retrieved.channels() {
        return Err(GeqieError::Shape(format!(
            "comparing {:?}x{} with {:?}x{}",
            reference.dims(),
            reference.channels(),
            retrieved.dims(),
            retrieved.channels()
        )));
    }
    let a: Vec<f64> = reference.to_u8().into_iter().map(f64::from).collect();
    let b: Vec<f64> = retrieved.to_u8().into_iter().map(f64::from).collect();
    Ok(MetricPair {
        pcc: if a.len() < 2 { 0.0 } else { pcc(&a, &b)? },
        psnr_db: psnr(&a, &b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn self_and_anti_correlation() {
        let v = [0.3, 1.0, -2.0, 4.5];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert_abs_diff_eq!(pcc(&v, &v).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pcc(&v, &neg).unwrap(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn hand_evaluated_correlation() {
        let r = pcc(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 2.0, 5.0]).unwrap();
        assert_abs_diff_eq!(r, 8.0 / 70f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn zero_variance_is_zero() {
        assert_eq!(pcc(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn pcc_errors() {
        assert!(pcc(&[1.0], &[1.0]).is_err());
        assert!(pcc(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse(&[0.0], &[255.0]).unwrap(), 65025.0);
        assert_eq!(mse(&[100.0, 100.0], &[110.0, 90.0]).unwrap(), 100.0);
        assert!(mse(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn psnr_examples() {
        assert_eq!(psnr(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), f64::INFINITY);
        assert_abs_diff_eq!(psnr_from_mse(65025.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            psnr(&[100.0, 100.0], &[110.0, 90.0]).unwrap(),
            28.1308,
            epsilon = 1e-3
        );
    }

    #[test]
    fn display_cap() {
        assert_eq!(psnr_display_cap(f64::INFINITY), 60.0);
        assert_eq!(psnr_display_cap(28.131), 28.131);
        assert_eq!(psnr_display_cap(75.0), 60.0);
    }
}
