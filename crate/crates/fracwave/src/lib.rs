//! Spectral analysis of a one-parameter family of self-similar Laplacians on
//! the unit interval.
//!
//! The interval is assembled from three affine contractions whose resistance
//! and measure weights are driven by a single probability `p`. On the level-n
//! vertex grid (3^n + 1 points) the Laplacian is the generator of a nearest
//! neighbour random walk with jump probabilities `p` and `q = 1 - p`. Its
//! spectrum is produced level by level through the inverse branches of a fixed
//! cubic, and eigenfunctions extend along the same branches. On top of that
//! sit the spectral decomposition of a discrete unit impulse at the left
//! endpoint and a truncated-series solver for the wave equation it seeds.
//!
//! Module map:
//!
//! * [`params`] — the parameter `p` and every constant derived from it
//! * [`grid`] — vertex grids with uniform / resistance / measure coordinates
//! * [`laplacian`] — transition profiles, the tridiagonal Laplacian action,
//!   and the discrete energy form
//! * [`decimation`] — the cubic, its inverse branches, eigenvalue trees,
//!   renormalized limits and two-sided bounds
//! * [`eigenfunctions`] — eigenfunction extension, harmonic extension, and
//!   sup-norm estimates
//! * [`delta`] — impulse weights and truncated delta approximations
//! * [`wave`] — cosine-series wave fields and convergence diagnostics
//! * [`oracle`] — dense symmetrized eigendecomposition used for verification
//! * [`verify`] — the named invariant checks behind the `verify` command

pub mod decimation;
pub mod delta;
pub mod eigenfunctions;
pub mod grid;
pub mod laplacian;
pub mod oracle;
pub mod params;
pub mod verify;
pub mod wave;

pub use decimation::{Branch, EigenvalueTree, LimitEigenvalue};
pub use delta::DeltaWeights;
pub use eigenfunctions::Eigenfunction;
pub use grid::{VertexGrid, Word};
pub use laplacian::TransitionProfile;
pub use params::FractalParams;
pub use wave::{TimeNormalization, WaveConfig, WaveField};

/// Largest supported refinement level. At level 14 the smallest cell weights
/// are still far from underflow and a grid fits comfortably in memory; beyond
/// that the direct per-cell products lose their accuracy guarantees.
pub const MAX_LEVEL: usize = 14;

/// Number of vertices of the level-`n` grid, `3^n + 1`.
pub fn vertex_count(level: usize) -> usize {
    3usize.pow(level as u32) + 1
}

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter p must be a finite number strictly between 0 and 1, got {0}")]
    InvalidParameter(f64),

    #[error("level {level} exceeds the supported maximum {max}")]
    LevelTooLarge { level: usize, max: usize },

    #[error("function has {got} values but the level-{level} grid has {want} vertices")]
    DimensionMismatch {
        level: usize,
        want: usize,
        got: usize,
    },

    #[error("eigenvalue {0} lies outside [0, 2]")]
    EigenvalueOutOfRange(f64),

    #[error("extension eigenvalue {z} is within the guard distance of the pole at {pole}")]
    ForbiddenEigenvalue { z: f64, pole: f64 },

    #[error("R({z}) = {mapped} does not match the parent eigenvalue {parent}")]
    EigenvalueMismatch { z: f64, parent: f64, mapped: f64 },

    #[error("eigenfunction extension is undefined at p = 1/2")]
    ExtensionAtHalf,

    #[error("index {k} out of range at level {level}: the spectrum has {count} entries")]
    IndexOutOfRange {
        k: usize,
        level: usize,
        count: usize,
    },

    #[error("this estimate requires p in (0, 1/2), got {0}")]
    BoundRequiresSmallP(f64),

    #[error("estimate undefined: next-level eigenvalue {next} is not below q = {q}")]
    BoundDenominator { next: f64, q: f64 },

    #[error("renormalized eigenvalues did not converge within {0} extra levels")]
    NoConvergence(usize),

    #[error("need at least {want} nonzero eigenvalues for a fit, have {got}")]
    InsufficientData { want: usize, got: usize },

    #[error("basis does not match the weights: {0}")]
    BasisMismatch(String),

    #[error("time value {0} is not finite and nonnegative")]
    InvalidTime(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
