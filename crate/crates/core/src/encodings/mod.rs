//! Registry of the shipped encoding methods and the encode → simulate →
//! retrieve → score pipeline.

mod angle;
mod basis;
mod common;
mod roundtrip;

use serde::{Deserialize, Serialize};

pub use angle::{Frqci, Frqi, Ifrqi, Mcqi};
pub use basis::{Ncqi, Neqr, Qrci, Qualpi, NCQI_DEFAULT_BITS};
pub use roundtrip::{roundtrip, roundtrip_with, simulate_weights, RoundTrip, EXACT};

use crate::error::{GeqieError, Result};
use crate::model::{assemble_state, qubit_budget, EncodingModel, ImageArray};
use crate::rng::derive_seed_path;
use crate::simcore::{CountsHistogram, StateVector};

/// Tag carried by every descriptor. The parameterizations of the methods
/// other than FRQI/NEQR/MFRQI are fixed by this crate and may differ from
/// the originally published circuits.
pub const VARIANT: &str = "geqie-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Grayscale,
    Rgb,
    Multidim,
}

impl Family {
    pub fn channels(self) -> usize {
        match self {
            Family::Rgb => 3,
            Family::Grayscale | Family::Multidim => 1,
        }
    }

    fn accepts(self, image: &ImageArray) -> bool {
        match self {
            Family::Grayscale => image.channels() == 1 && image.dims().len() == 2,
            Family::Rgb => image.channels() == 3 && image.dims().len() == 2,
            Family::Multidim => image.channels() == 1,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Family::Grayscale => "a 2-axis single-channel image",
            Family::Rgb => "a 2-axis three-channel image",
            Family::Multidim => "a single-channel grid",
        }
    }
}

fn describe_image(image: &ImageArray) -> String {
    format!(
        "{}-axis image with {} channel(s)",
        image.dims().len(),
        image.channels()
    )
}

/// Encoding methods in registry order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Frqi,
    Neqr,
    Ifrqi,
    Qualpi,
    Frqci,
    Mcqi,
    Ncqi,
    Qrci,
    Mfrqi,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Frqi,
        Method::Neqr,
        Method::Ifrqi,
        Method::Qualpi,
        Method::Frqci,
        Method::Mcqi,
        Method::Ncqi,
        Method::Qrci,
        Method::Mfrqi,
    ];

    /// The eight 2-D image methods.
    pub const IMAGE_METHODS: [Method; 8] = [
        Method::Frqi,
        Method::Neqr,
        Method::Ifrqi,
        Method::Qualpi,
        Method::Frqci,
        Method::Mcqi,
        Method::Ncqi,
        Method::Qrci,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Frqi => "frqi",
            Method::Neqr => "neqr",
            Method::Ifrqi => "ifrqi",
            Method::Qualpi => "qualpi",
            Method::Frqci => "frqci",
            Method::Mcqi => "mcqi",
            Method::Ncqi => "ncqi",
            Method::Qrci => "qrci",
            Method::Mfrqi => "mfrqi",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Method::Frqi | Method::Neqr | Method::Ifrqi | Method::Qualpi => Family::Grayscale,
            Method::Frqci | Method::Mcqi | Method::Ncqi | Method::Qrci => Family::Rgb,
            Method::Mfrqi => Family::Multidim,
        }
    }

    pub fn model(self) -> Box<dyn EncodingModel> {
        match self {
            Method::Frqi => Box::new(Frqi::new()),
            Method::Neqr => Box::new(Neqr),
            Method::Ifrqi => Box::new(Ifrqi),
            Method::Qualpi => Box::new(Qualpi),
            Method::Frqci => Box::new(Frqci),
            Method::Mcqi => Box::new(Mcqi),
            Method::Ncqi => Box::new(Ncqi::default()),
            Method::Qrci => Box::new(Qrci),
            Method::Mfrqi => Box::new(Frqi::multidim()),
        }
    }

    pub fn descriptor(self) -> MethodDescriptor {
        let model = self.model();
        MethodDescriptor {
            name: self.name(),
            family: self.family(),
            value_qubits: model.value_qubits(),
            layers: model.layers(),
            extra_registers: match self {
                Method::Qrci => vec![("bit-plane", model.extra_qubits())],
                _ => Vec::new(),
            },
            exact_under_ideal: matches!(
                self,
                Method::Neqr
                    | Method::Qualpi
                    | Method::Ncqi
                    | Method::Qrci
                    | Method::Ifrqi
                    | Method::Frqci
            ),
            variant: VARIANT,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = GeqieError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or(GeqieError::NotFound(s.to_string()))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MethodDescriptor {
    pub name: &'static str,
    pub family: Family,
    /// `D`, at the method's default bit depth.
    pub value_qubits: usize,
    pub layers: usize,
    pub extra_registers: Vec<(&'static str, usize)>,
    /// Retrieval from exact probabilities reproduces every representable image.
    pub exact_under_ideal: bool,
    pub variant: &'static str,
}

impl MethodDescriptor {
    pub fn extra_qubits(&self) -> usize {
        self.extra_registers.iter().map(|(_, q)| q).sum()
    }

    /// `D + position qubits + extra registers` for `dims`.
    pub fn qubits(&self, dims: &[usize]) -> usize {
        self.value_qubits + crate::model::position_register_qubits(dims) + self.extra_qubits()
    }
}

pub fn registry_list() -> Vec<MethodDescriptor> {
    Method::ALL.into_iter().map(Method::descriptor).collect()
}

pub fn lookup(name: &str) -> Result<MethodDescriptor> {
    name.parse::<Method>().map(Method::descriptor)
}

fn check_family(method: Method, image: &ImageArray) -> Result<()> {
    if !method.family().accepts(image) {
        return Err(GeqieError::FamilyMismatch {
            method: method.name().into(),
            expected: method.family().describe().into(),
            found: describe_image(image),
        });
    }
    Ok(())
}

/// Encodes `image` with the method's default parameters.
pub fn encode(method: Method, image: &ImageArray, max_qubits: usize) -> Result<StateVector> {
    check_family(method, image)?;
    assemble_state(method.model().as_ref(), image, max_qubits)
}

/// Decodes an image of extents `dims` from a measured histogram.
pub fn retrieve(method: Method, counts: &CountsHistogram, dims: &[usize]) -> Result<ImageArray> {
    retrieve_model(method.model().as_ref(), counts, dims)
}

pub fn retrieve_model(
    model: &dyn EncodingModel,
    counts: &CountsHistogram,
    dims: &[usize],
) -> Result<ImageArray> {
    let expected = qubit_budget(model, dims).total();
    if counts.n_qubits() != expected {
        return Err(GeqieError::Shape(format!(
            "`{}` on {dims:?} uses {expected} qubits, histogram has {}",
            model.name(),
            counts.n_qubits()
        )));
    }
    model.retrieve(&counts.weights(), dims)
}

/// Benchmark image `image_id` of side `size`: uniform 8-bit samples per
/// channel, seeded by `(size, image_id)` so every method sees the same image.
pub fn benchmark_image(
    family: Family,
    size: usize,
    image_id: u64,
    master_seed: u64,
) -> Result<ImageArray> {
    let seed = derive_seed_path(master_seed, &[size as u64, image_id]);
    ImageArray::random_u8(vec![size, size], family.channels(), seed)
}
