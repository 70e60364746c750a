//! Command-line front end: argument definitions, command handlers, netpbm
//! image files and the benchmark harness.

pub mod benchmark;
pub mod cli;
pub mod image_io;
