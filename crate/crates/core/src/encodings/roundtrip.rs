use crate::error::Result;
use crate::exec::Exec;
use crate::metrics::{image_metrics, MetricPair};
use crate::model::{assemble_state, EncodingModel, ImageArray};
use crate::simcore::{
    noisy_probabilities, sample_counts, sample_counts_trajectories_with, NoiseMode, NoiseSpec,
    StateVector,
};

/// Shot count sentinel: use exact outcome probabilities instead of sampling.
pub const EXACT: u64 = 0;

#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrip {
    /// The image as the method can represent it; metrics compare against this.
    pub reference: ImageArray,
    pub retrieved: ImageArray,
    pub metrics: MetricPair,
    pub qubits: usize,
}

/// Outcome weights for `state` under `noise`: exact probabilities when
/// `shots == EXACT`, otherwise a sampled histogram.
pub fn simulate_weights(
    state: &StateVector,
    shots: u64,
    noise: &NoiseSpec,
    seed: u64,
    exec: Exec,
) -> Result<Vec<f64>> {
    if shots == EXACT {
        return noisy_probabilities(state, noise);
    }
    let counts = match noise.mode() {
        NoiseMode::Trajectories => {
            sample_counts_trajectories_with(state, noise.lambda(), shots, seed, exec)?
        }
        NoiseMode::Global | NoiseMode::PerQubit => {
            sample_counts(&noisy_probabilities(state, noise)?, shots, seed)?
        }
    };
    Ok(counts.weights())
}

/// Encode → (noise) → sample → retrieve → score.
pub fn roundtrip(
    model: &dyn EncodingModel,
    image: &ImageArray,
    shots: u64,
    noise: &NoiseSpec,
    seed: u64,
    max_qubits: usize,
) -> Result<RoundTrip> {
    roundtrip_with(
        model,
        image,
        shots,
        noise,
        seed,
        max_qubits,
        Exec::default(),
    )
}

pub fn roundtrip_with(
    model: &dyn EncodingModel,
    image: &ImageArray,
    shots: u64,
    noise: &NoiseSpec,
    seed: u64,
    max_qubits: usize,
    exec: Exec,
) -> Result<RoundTrip> {
    let reference = model.representable(image)?;
    let state = assemble_state(model, &reference, max_qubits)?;
    let weights = simulate_weights(&state, shots, noise, seed, exec)?;
    let retrieved = model.retrieve(&weights, reference.dims())?;
    let metrics = image_metrics(&reference, &retrieved)?;
    Ok(RoundTrip {
        reference,
        retrieved,
        metrics,
        qubits: state.n_qubits(),
    })
}
