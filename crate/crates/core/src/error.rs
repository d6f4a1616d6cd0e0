use thiserror::Error;

/// Errors produced by the model, the numerical kernels and the physics
/// pipelines built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("atom span 0..={n_span} anchored at site {anchor} does not fit a lattice of {n_sites} sites")]
    SpanExceedsLattice {
        n_span: usize,
        anchor: usize,
        n_sites: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("boundary not supported here: {0}")]
    UnsupportedBoundary(&'static str),

    #[error("wave vector k = {k} lies on a band edge")]
    BandEdge { k: f64 },

    #[error("photon energy {energy} coincides with dressed mode v = {mode}")]
    DegenerateMode { energy: f64, mode: f64 },

    #[error("no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root search stopped after {iterations} iterations at x = {best}")]
    RootNotConverged { best: f64, iterations: usize },

    #[error("quadrature hit depth {max_depth}: estimate {estimate} with error bound {error_bound}")]
    QuadratureDepth {
        estimate: f64,
        error_bound: f64,
        max_depth: usize,
    },

    #[error("matrix is not symmetric (largest asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("linear system is numerically singular: {0}")]
    IllConditioned(String),

    #[error("no Extended -> Bound transition of the topmost state for J in ({j_lo}, {j_hi}]")]
    NoTransition { j_lo: f64, j_hi: f64 },

    #[error("band-edge integral diverges for N = {n_span}")]
    Divergent { n_span: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
