//! Quantum image encoding engine.
//!
//! Images are mapped to quantum states through a position map ξ and a value
//! map δ ([`model`]), nine concrete methods are registered in [`encodings`],
//! states are simulated ideally or under depolarizing noise ([`simcore`]),
//! retrieved from measurement statistics, and scored ([`metrics`]). The
//! [`cosmicweb`] module applies the multidimensional FRQI method to voxelized
//! particle snapshots.

pub mod cosmicweb;
pub mod encodings;
pub mod error;
pub mod exec;
pub mod formats;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod simcore;

pub use error::{GeqieError, Result};
pub use exec::Exec;
