use std::f64::consts::{FRAC_1_SQRT_2, PI};

use approx::assert_abs_diff_eq;
use geqie::encodings::{encode, retrieve, roundtrip, Frqi, Method, Neqr, EXACT};
use geqie::model::{
    assemble_state, completion_unitary, verify_model, EncodingModel, ImageArray, DEFAULT_MAX_QUBITS,
};
use geqie::rng::stream;
use geqie::simcore::{
    measure_probabilities, sample_counts, CountsHistogram, NoiseMode, NoiseSpec, StateVector,
};
use geqie::{GeqieError, Result};
use num_complex::Complex64;
use rand::Rng;

fn gray(dims: [usize; 2], samples: &[u8]) -> ImageArray {
    ImageArray::from_u8(dims.to_vec(), 1, samples).unwrap()
}

fn example_image(m: Method, dims: &[usize], seed: u64) -> ImageArray {
    ImageArray::random_u8(dims.to_vec(), m.family().channels(), seed).unwrap()
}

#[test]
fn frqi_two_by_two_amplitudes() {
    let img = ImageArray::new(vec![2, 2], 1, vec![0.0, 1.0, 0.0, 1.0]).unwrap();
    let s = encode(Method::Frqi, &img, 12).unwrap();
    assert_eq!(s.n_qubits(), 3);
    // value qubit is the MSB: |v⟩|pos⟩ -> v*4 + pos
    let expected = [0.5, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.5];
    for (a, e) in s.amplitudes().iter().zip(expected) {
        assert_abs_diff_eq!(a.re, e, epsilon = 1e-12);
        assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
    }
}

#[test]
fn neqr_basis_indices() {
    let img = gray([2, 2], &[0, 85, 170, 255]);
    let s = encode(Method::Neqr, &img, 12).unwrap();
    assert_eq!(s.n_qubits(), 10);
    let nonzero: Vec<usize> = (0..s.dim())
        .filter(|&i| s.amplitudes()[i].norm() > 0.0)
        .collect();
    assert_eq!(
        nonzero,
        vec![0, (85 << 2) | 1, (170 << 2) | 2, (255 << 2) | 3]
    );
    for i in nonzero {
        assert_abs_diff_eq!(s.amplitudes()[i].re, 0.5, epsilon = 1e-12);
    }
}

#[test]
fn frqi_mid_gray_excitation_probability() {
    let img = ImageArray::new(vec![2, 2], 1, vec![0.5; 4]).unwrap();
    let p = measure_probabilities(&encode(Method::Frqi, &img, 12).unwrap());
    let excited: f64 = p[4..].iter().sum();
    // θ = (π/2)·0.5
    assert_abs_diff_eq!(excited, (PI / 4.0).sin().powi(2), epsilon = 1e-12);
    assert_abs_diff_eq!(excited, 0.5, epsilon = 1e-12);
}

#[test]
fn neqr_all_zero_is_uniform_over_positions() {
    let s = encode(Method::Neqr, &gray([2, 2], &[0; 4]), 12).unwrap();
    for i in 0..s.dim() {
        let expect = if i < 4 { 0.5 } else { 0.0 };
        assert_abs_diff_eq!(s.amplitudes()[i].re, expect, epsilon = 1e-12);
    }
}

#[test]
fn mfrqi_saturated_angle() {
    let cube = ImageArray::new(vec![2, 2, 2], 1, vec![1.0; 8]).unwrap();
    let s = encode(Method::Mfrqi, &cube, 12).unwrap();
    assert_eq!(s.n_qubits(), 4);
    let p = measure_probabilities(&s);
    assert_abs_diff_eq!(p[8..].iter().sum::<f64>(), 1.0, epsilon = 1e-12);
}

#[test]
fn all_zero_images_give_unit_norm_states() {
    for m in Method::ALL {
        let dims: &[usize] = if m == Method::Mfrqi {
            &[2, 2, 2]
        } else {
            &[2, 2]
        };
        let img = ImageArray::zeros(dims.to_vec(), m.family().channels()).unwrap();
        let s = encode(m, &img, 12).unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn frqi_retrieve_all_zero() {
    let img = gray([2, 2], &[0; 4]);
    let s = encode(Method::Frqi, &img, 12).unwrap();
    let counts = sample_counts(&measure_probabilities(&s), 4096, 1).unwrap();
    let out = retrieve(Method::Frqi, &counts, &[2, 2]).unwrap();
    assert!(out.values().iter().all(|&v| v == 0.0));
}

#[test]
fn neqr_sampled_retrieval_is_exact() {
    let img = gray([2, 2], &[0, 85, 170, 255]);
    let s = encode(Method::Neqr, &img, 12).unwrap();
    let counts = sample_counts(&measure_probabilities(&s), 1 << 16, 9).unwrap();
    assert_eq!(
        retrieve(Method::Neqr, &counts, &[2, 2]).unwrap().to_u8(),
        img.to_u8()
    );
}

#[test]
fn frqi_half_excited_position_decodes_to_half() {
    // position 00: n0 = n1 = 50; other positions all ground
    let pairs = [(0usize, 50u64), (4, 50), (1, 100), (2, 100), (3, 100)];
    let counts = CountsHistogram::from_pairs(3, pairs).unwrap();
    let out = retrieve(Method::Frqi, &counts, &[2, 2]).unwrap();
    let expected = (2.0 / PI) * FRAC_1_SQRT_2.asin();
    assert_abs_diff_eq!(out.values()[0], expected, epsilon = 1e-12);
    assert_abs_diff_eq!(out.values()[0], 0.5, epsilon = 1e-12);
}

#[test]
fn full_global_noise_erases_every_method() {
    let noise = NoiseSpec::new(1.0, NoiseMode::Global).unwrap();
    for m in Method::IMAGE_METHODS {
        let img = example_image(m, &[2, 2], 4);
        let rt = roundtrip(m.model().as_ref(), &img, EXACT, &noise, 0, 12).unwrap();
        let first = rt.retrieved.pixel(0).to_vec();
        assert!((0..4).all(|i| rt.retrieved.pixel(i) == first), "{m}");
        // a constant colour with unequal channels still varies once flattened
        if first.iter().all(|&v| v == first[0]) {
            assert_eq!(rt.metrics.pcc, 0.0, "{m}");
        }
    }
}

#[test]
fn every_method_passes_verification() {
    for m in Method::ALL {
        for dims in [vec![2, 2], vec![4, 4], vec![2, 4], vec![3, 5]] {
            let dims = if m == Method::Mfrqi {
                let mut d = dims.clone();
                d.push(2);
                d
            } else {
                dims
            };
            let report = verify_model(m.model().as_ref(), &dims, DEFAULT_MAX_QUBITS + 2, 17);
            if m.descriptor().qubits(&dims) > DEFAULT_MAX_QUBITS + 2 {
                continue;
            }
            assert!(report.passed(), "{report}");
        }
    }
}

#[test]
fn exact_methods_roundtrip_on_padded_shapes() {
    for m in Method::IMAGE_METHODS {
        if !m.descriptor().exact_under_ideal {
            continue;
        }
        for dims in [[3usize, 5], [1, 2], [4, 4]] {
            if m.descriptor().qubits(&dims) > 14 {
                continue;
            }
            let img = example_image(m, &dims, 21);
            let rt = roundtrip(
                m.model().as_ref(),
                &img,
                EXACT,
                &NoiseSpec::noiseless(),
                0,
                14,
            )
            .unwrap();
            assert_eq!(rt.retrieved.to_u8(), rt.reference.to_u8(), "{m} {dims:?}");
        }
    }
}

#[test]
fn capacity_error_names_required_qubits() {
    let img = gray([8, 8], &[7; 64]);
    match encode(Method::Neqr, &img, 12) {
        Err(GeqieError::Capacity { required, allowed }) => {
            assert_eq!((required, allowed), (14, 12))
        }
        other => panic!("expected capacity error, got {other:?}"),
    }
    assert_eq!(encode(Method::Neqr, &img, 14).unwrap().n_qubits(), 14);
}

/// FRQI with ξ collapsing the first two pixels onto one index.
struct Collapsing;

impl EncodingModel for Collapsing {
    fn name(&self) -> &str {
        "collapsing"
    }
    fn value_qubits(&self) -> usize {
        Frqi::new().value_qubits()
    }
    fn channels(&self) -> usize {
        1
    }
    fn value_map(
        &self,
        k: usize,
        l: usize,
        c: &[usize],
        d: &[usize],
        px: &[f64],
    ) -> Vec<Complex64> {
        Frqi::new().value_map(k, l, c, d, px)
    }
    fn position_map(&self, _: usize, _: usize, coords: &[usize], dims: &[usize]) -> usize {
        (coords[0] * dims[1] + coords[1]).max(1)
    }
    fn retrieve(&self, weights: &[f64], dims: &[usize]) -> Result<ImageArray> {
        Frqi::new().retrieve(weights, dims)
    }
}

#[test]
fn broken_position_map_is_reported() {
    let report = verify_model(&Collapsing, &[2, 2], 12, 0);
    assert!(!report.passed());
    assert!(!report.check("position-injective").unwrap().passed);
    let img = gray([2, 2], &[1, 2, 3, 4]);
    assert!(matches!(
        assemble_state(&Collapsing, &img, 12),
        Err(GeqieError::Model(_))
    ));
}

#[test]
fn completion_of_random_three_qubit_state() {
    let mut rng = stream(33);
    let amps: Vec<Complex64> = (0..8)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let s = StateVector::normalized(3, amps).unwrap();
    let u = completion_unitary(&s).unwrap();
    assert!(u.unitarity_error() <= 1e-10);
    let mut e0 = vec![Complex64::new(0.0, 0.0); 8];
    e0[0] = Complex64::new(1.0, 0.0);
    for (a, b) in u.apply(&e0).iter().zip(s.amplitudes()) {
        assert!((a - b).norm() <= 1e-10);
    }
}

#[test]
fn basis_methods_exact_at_zero_noise() {
    for m in [Method::Neqr, Method::Qualpi, Method::Ncqi, Method::Qrci] {
        for id in 0..4 {
            let img = example_image(m, &[2, 2], id);
            let rt = roundtrip(
                m.model().as_ref(),
                &img,
                EXACT,
                &NoiseSpec::noiseless(),
                0,
                12,
            )
            .unwrap();
            assert_eq!(rt.metrics.pcc, 1.0, "{m}");
            assert_eq!(rt.metrics.psnr_db, f64::INFINITY, "{m}");
        }
    }
    let img = gray([2, 2], &[10, 20, 30, 40]);
    let rt = roundtrip(&Neqr, &img, EXACT, &NoiseSpec::noiseless(), 0, 12).unwrap();
    assert_eq!(rt.retrieved.to_u8(), img.to_u8());
}
