use rand::Rng;

use super::assemble::{assemble_state, qubit_budget};
use super::image::{in_range, padded_extents, unflatten, ImageArray};
use super::EncodingModel;
use crate::rng;
use crate::simcore::measure_probabilities;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub method: String,
    pub dims: Vec<usize>,
    pub qubits: usize,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{} {:?} ({} qubits)",
            self.method, self.dims, self.qubits
        )?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  [{mark}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check_injectivity(model: &dyn EncodingModel, dims: &[usize]) -> CheckResult {
    let padded = padded_extents(dims);
    let count: usize = padded.iter().product();
    let position_dim = 1usize << model.position_qubits(dims);
    for k in 0..model.components() {
        for layer in 0..model.layers() {
            let mut owner: Vec<Option<usize>> = vec![None; position_dim];
            for flat in 0..count {
                let coords = unflatten(flat, &padded);
                let pos = model.position_map(k, layer, &coords, dims);
                if pos >= position_dim {
                    return CheckResult {
                        name: "position-injective",
                        passed: false,
                        detail: format!("{coords:?} maps to {pos}, outside the register"),
                    };
                }
                if let Some(prev) = owner[pos] {
                    return CheckResult {
                        name: "position-injective",
                        passed: false,
                        detail: format!(
                            "{:?} and {coords:?} share index {pos} (component {k}, layer {layer})",
                            unflatten(prev, &padded)
                        ),
                    };
                }
                owner[pos] = Some(flat);
            }
        }
    }
    CheckResult {
        name: "position-injective",
        passed: true,
        detail: format!("{count} padded coordinates map to distinct indices"),
    }
}

fn check_out_of_range(model: &dyn EncodingModel, dims: &[usize], seed: u64) -> CheckResult {
    let padded = padded_extents(dims);
    let count: usize = padded.iter().product();
    let mut rng = rng::stream(seed);
    let mut outside = 0;
    for flat in 0..count {
        let coords = unflatten(flat, &padded);
        if in_range(&coords, dims) {
            continue;
        }
        outside += 1;
        let pixel: Vec<f64> = (0..model.channels()).map(|_| rng.random()).collect();
        for k in 0..model.components() {
            for layer in 0..model.layers() {
                let delta = model.value_map(k, layer, &coords, dims, &pixel);
                if delta.iter().any(|a| a.norm_sqr() != 0.0) {
                    return CheckResult {
                        name: "value-zero-outside",
                        passed: false,
                        detail: format!("nonzero value state at padded coordinate {coords:?}"),
                    };
                }
            }
        }
    }
    CheckResult {
        name: "value-zero-outside",
        passed: true,
        detail: format!("{outside} padded coordinates contribute nothing"),
    }
}

/// Runs the model self-checks on `dims`: position-map injectivity over the
/// padded grid, zero value states outside the extents, the assembled norm of a
/// random image, and retrieval from exact probabilities.
pub fn verify_model(
    model: &dyn EncodingModel,
    dims: &[usize],
    max_qubits: usize,
    seed: u64,
) -> VerificationReport {
    let qubits = qubit_budget(model, dims).total();
    let mut checks = vec![
        check_injectivity(model, dims),
        check_out_of_range(model, dims, rng::derive_seed(seed, 1)),
    ];

    let image = ImageArray::random_u8(dims.to_vec(), model.channels(), rng::derive_seed(seed, 2))
        .and_then(|img| model.representable(&img));
    let image = match image {
        Ok(img) => img,
        Err(e) => {
            checks.push(CheckResult {
                name: "state-norm",
                passed: false,
                detail: e.to_string(),
            });
            return VerificationReport {
                method: model.name().to_string(),
                dims: dims.to_vec(),
                qubits,
                checks,
            };
        }
    };

    match assemble_state(model, &image, max_qubits) {
        Ok(state) => {
            let norm_sqr = state.norm_sqr();
            checks.push(CheckResult {
                name: "state-norm",
                passed: (norm_sqr - 1.0).abs() <= 1e-10,
                detail: format!("squared norm {norm_sqr:.15}"),
            });
            let probs = measure_probabilities(&state);
            let rt = model.retrieve(&probs, dims).map(|out| {
                out.values()
                    .iter()
                    .zip(image.values())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            });
            let tol = model.roundtrip_tolerance();
            checks.push(match rt {
                Ok(err) => CheckResult {
                    name: "exact-roundtrip",
                    passed: err <= tol,
                    detail: format!("max abs error {err:e} (tolerance {tol:e})"),
                },
                Err(e) => CheckResult {
                    name: "exact-roundtrip",
                    passed: false,
                    detail: e.to_string(),
                },
            });
        }
        Err(e) => checks.push(CheckResult {
            name: "state-norm",
            passed: false,
            detail: e.to_string(),
        }),
    }

    VerificationReport {
        method: model.name().to_string(),
        dims: dims.to_vec(),
        qubits,
        checks,
    }
}
