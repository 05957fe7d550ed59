pub mod algorithms;
pub mod classical;
pub mod cli;
pub mod error;
pub mod io;
pub mod matrix;
pub mod plan;
pub mod procrustes;
pub mod rng;
pub mod sim;

pub use error::{MdsError, Result};
