//! Computational backbone for vector-valued orthogonal modular forms on
//! type IV domains: exact lattice/cusp combinatorics, orthogonal Schur
//! functors, tube-domain automorphy factors, formal Fourier expansions and
//! the coefficient-level operators acting on them, the J-filtration, and
//! Petersson-metric / weight-bound predicates.
//!
//! Exact paths run over arbitrary-precision rationals; the automorphy and
//! metric engines run over complex floats with documented tolerances.

pub mod cyclo;
pub mod domain;
pub mod fourier;
pub mod jfilt;
pub mod lattice;
pub mod linalg;
pub mod operators;
pub mod petersson;
pub mod schur;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

/// Exact rational scalar used on all exact code paths.
pub type Q = BigRational;
/// Exact integer scalar.
pub type Z = BigInt;
/// Complex float scalar used by the numeric engines.
pub type C = Complex64;

/// Dense exact rational matrix.
pub type QMat = linalg::Mat<Q>;
/// Dense complex matrix.
pub type CMat = linalg::Mat<C>;

/// Global knobs shared by the library and the CLI.
#[derive(Clone, Debug)]
pub struct Config {
    /// Cap on n^d for tensor-space computations.
    pub size_cap: usize,
    /// Relative tolerance for numeric identities.
    pub tol: f64,
    /// Maximum total Taylor degree searched by the quasi-pullback.
    pub max_taylor_degree: u32,
    /// Coordinate height bound for isotropic vector enumeration.
    pub enum_bound: i64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            size_cap: 4096,
            tol: 1e-9,
            max_taylor_degree: 8,
            enum_bound: 10,
        }
    }
}

impl Config {
    /// Default configuration with `ORTHMF_SIZE_CAP` / `ORTHMF_TOL` overrides applied.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Ok(s) = std::env::var("ORTHMF_SIZE_CAP") {
            if let Ok(v) = s.parse() {
                cfg.size_cap = v;
            }
        }
        if let Ok(s) = std::env::var("ORTHMF_TOL") {
            if let Ok(v) = s.parse() {
                cfg.tol = v;
            }
        }
        cfg
    }
}

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("no isotropic vector found within height bound {0}")]
    NoIsotropicVectorFound(i64),
    #[error("rank-1 isotropic sublattice exists but no rank-2 one within bound {0}")]
    WittRankOne(i64),
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("vectors are not orthogonal")]
    NotOrthogonal,
    #[error("tensor space size {0} exceeds cap {1}")]
    SizeCapExceeded(usize, usize),
    #[error("matrix does not preserve the quadratic form")]
    NotOrthogonalMatrix,
    #[error("subspace is not invariant under the given action")]
    NotInvariant,
    #[error("point left the tube-domain chart (pairing with e1 vanished)")]
    ChartBoundary,
    #[error("index map does not preserve the lattice")]
    NotLatticePreserving,
    #[error("generator list is not closed under composition")]
    NotAGroup,
    #[error("coefficient not U-invariant (max defect {0:.3e})")]
    NotUInvariant(f64),
    #[error("orthogonal complement is not negative definite")]
    ComplementNotDefinite,
    #[error("expansion is identically zero up to Taylor degree {0}")]
    IdenticallyZero(u32),
    #[error("operands must be scalar-valued (weight mismatch)")]
    WeightMismatch,
    #[error("argument out of table range: {0}")]
    OutOfTableRange(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Parse a rational from "p/q" or plain integer text.
pub fn parse_q(s: &str) -> Result<Q> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Invalid(format!("bad rational {s:?}: {e}")))
}

/// Render a rational as "p/q" (or "p" when integral).
pub fn show_q(x: &Q) -> String {
    x.to_string()
}
