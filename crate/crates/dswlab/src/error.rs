//! Error type shared by every solver in the crate.

use std::path::PathBuf;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("{what}: argument {value} outside domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// An iterative method ran out of iterations.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// An iteration blew up and was aborted early.
    #[error("{what} diverged after {iterations} iterations (norm {norm:e})")]
    Divergence {
        what: &'static str,
        iterations: usize,
        norm: f64,
    },

    /// A root finder could not bracket a sign change.
    #[error("{what}: no root bracketed in [{lo}, {hi}]")]
    Bracket { what: &'static str, lo: f64, hi: f64 },

    /// A quadrature rule hit its node cap without settling.
    #[error("{what}: quadrature unsettled at {nodes} nodes (last change {change:e})")]
    Quadrature {
        what: &'static str,
        nodes: usize,
        change: f64,
    },

    /// Continuation left the admissible region (ordering of the invariants).
    #[error("{what}: {detail}")]
    Inadmissible { what: &'static str, detail: String },

    /// Time stepping produced an unbounded or under-resolved field.
    #[error("KdV solve failed at t = {time}: {detail}")]
    Kdv { time: f64, detail: String },

    /// Invalid configuration (CLI flag, config file, preset).
    #[error("configuration: {0}")]
    Config(String),

    /// A data file could not be parsed.
    #[error("{path}:{line}: {detail}")]
    Parse {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    /// Initial data violate an admissibility assumption.
    #[error("inadmissible initial data: {0}")]
    InitialData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }
}
