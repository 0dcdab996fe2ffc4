//! Exact logarithmic Voronoi cells of linear and partial linear statistical
//! models, with a floating-point maximum likelihood oracle to check them.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod gale;
pub mod io;
pub mod linalg;
pub mod logvor;
pub mod manifest;
pub mod model;
pub mod oracle;
pub mod partial;
pub mod plot;
pub mod polytope;
mod util;

pub use error::{Error, Result};
