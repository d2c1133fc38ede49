//! Small-dispersion KdV laboratory.

pub mod asymptotics;
pub mod chebyshev;
pub mod cli;
pub mod compare;
pub mod error;
pub mod initial_data;
pub mod interp;
pub mod kdv;
pub mod output;
pub mod painleve2;
pub mod quad;
pub mod specfun;
pub mod whitham;

pub use error::{Error, Result};
