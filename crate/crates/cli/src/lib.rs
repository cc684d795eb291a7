//! IO, file formats, artifact emission, and experiment orchestration for the
//! `ecalab` command line tool. The algorithms live in `ecalab-core`; this
//! crate wraps them in files, CSV/SVG artifacts, and a parallel driver.

pub mod csv;
pub mod error;
pub mod experiment;
pub mod formats;
pub mod svg;

pub use error::CliError;
