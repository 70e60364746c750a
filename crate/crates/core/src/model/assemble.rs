use num_complex::Complex64;

use super::image::{in_range, padded_extents, unflatten, ImageArray};
use super::EncodingModel;
use crate::error::{GeqieError, Result};
use crate::simcore::{StateVector, NORM_TOLERANCE};

/// Qubit accounting for one model on one set of extents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QubitBudget {
    pub value: usize,
    pub position: usize,
}

impl QubitBudget {
    pub fn total(&self) -> usize {
        self.value + self.position
    }
}

pub fn qubit_budget(model: &dyn EncodingModel, dims: &[usize]) -> QubitBudget {
    QubitBudget {
        value: model.value_qubits(),
        position: model.position_qubits(dims),
    }
}

fn check_image(model: &dyn EncodingModel, image: &ImageArray) -> Result<()> {
    if image.channels() != model.channels() {
        return Err(GeqieError::Shape(format!(
            "`{}` encodes {} channel(s), image has {}",
            model.name(),
            model.channels(),
            image.channels()
        )));
    }
    if let Some(axes) = model.axes() {
        if image.dims().len() != axes {
            return Err(GeqieError::Shape(format!(
                "`{}` encodes {axes}-axis images, got extents {:?}",
                model.name(),
                image.dims()
            )));
        }
    }
    Ok(())
}

/// Assembles the single-block state of a `K = 1` model.
pub fn assemble_state(
    model: &dyn EncodingModel,
    image: &ImageArray,
    max_qubits: usize,
) -> Result<StateVector> {
    if model.components() != 1 {
        return Err(GeqieError::Model(format!(
            "`{}` has {} components; use assemble_blocks",
            model.name(),
            model.components()
        )));
    }
    let mut blocks = assemble_blocks(model, image, max_qubits)?;
    Ok(blocks.remove(0))
}

/// One state per component `k`, each normalized on its own.
pub fn assemble_blocks(
    model: &dyn EncodingModel,
    image: &ImageArray,
    max_qubits: usize,
) -> Result<Vec<StateVector>> {
    check_image(model, image)?;
    let dims = image.dims();
    let budget = qubit_budget(model, dims);
    let n_qubits = budget.total();
    if n_qubits > max_qubits {
        return Err(GeqieError::Capacity {
            required: n_qubits,
            allowed: max_qubits,
        });
    }
    if n_qubits == 0 {
        return Err(GeqieError::Model("model needs at least one qubit".into()));
    }

    let padded = padded_extents(dims);
    let padded_count: usize = padded.iter().product();
    let value_dim = 1usize << budget.value;
    let position_dim = 1usize << budget.position;
    let zero_pixel = vec![0.0; image.channels()];

    (0..model.components())
        .map(|k| {
            let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
            for layer in 0..model.layers() {
                let mut seen = vec![false; position_dim];
                for flat in 0..padded_count {
                    let coords = unflatten(flat, &padded);
                    let inside = in_range(&coords, dims);
                    let pixel = if inside {
                        image.pixel_at(&coords).unwrap_or(&zero_pixel)
                    } else {
                        &zero_pixel
                    };
                    let delta = model.value_map(k, layer, &coords, dims, pixel);
                    if delta.len() != value_dim {
                        return Err(GeqieError::Model(format!(
                            "value map returned {} entries, expected {value_dim}",
                            delta.len()
                        )));
                    }
                    if !inside {
                        if delta.iter().any(|a| a.norm_sqr() != 0.0) {
                            return Err(GeqieError::Model(format!(
                                "value map is nonzero outside the extents at {coords:?}"
                            )));
                        }
                        continue;
                    }
                    let pos = model.position_map(k, layer, &coords, dims);
                    if pos >= position_dim {
                        return Err(GeqieError::Model(format!(
                            "position {pos} outside a {}-qubit register",
                            budget.position
                        )));
                    }
                    if std::mem::replace(&mut seen[pos], true) {
                        return Err(GeqieError::Model(format!(
                            "position map is not injective: {coords:?} reuses index {pos} (component {k}, layer {layer})"
                        )));
                    }
                    for (v, a) in delta.into_iter().enumerate() {
                        amps[(v << budget.position) | pos] += a;
                    }
                }
            }

            if budget.value == 0 {
                return StateVector::normalized(n_qubits, amps).map_err(|_| {
                    GeqieError::Model("amplitude-encoded image has zero norm".into())
                });
            }
            let scale = 1.0 / (image.num_pixels() as f64).sqrt();
            amps.iter_mut().for_each(|a| *a *= scale);
            let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
                return Err(GeqieError::Model(format!(
                    "`{}` assembled a state with squared norm {norm_sqr}",
                    model.name()
                )));
            }
            StateVector::new(n_qubits, amps)
        })
        .collect()
}
