//! Exact symbolic and homological computations for finitely presented
//! DG- and strictly unital A-infinity categories.
//!
//! The crate is organized bottom-up:
//!
//! * [`ring`] / [`matrix`] — exact scalar arithmetic over Z, Q, F_p and
//!   sparse exact matrices with Smith normal form.
//! * [`complex`] — finite cochain complexes, spheres and disks, cones,
//!   tensor products, homology, quasi-isomorphism and contractibility.
//! * [`monomial`] — graded quivers, composition words and planar trees,
//!   homogeneous linear combinations, truncation bookkeeping.
//! * [`presentation`] — category presentations, differentials by
//!   Leibniz/Stasheff expansion, truncated hom complexes, H^0 categories,
//!   and the builtin catalog.
//! * [`functor`] — strict functors and the surjectivity / isofibration /
//!   quasi-equivalence predicates.
//! * [`lifting`] — generating maps, right-lifting-property deciders and the
//!   brute-force lifting oracle.
//! * [`pushout`] — cell attachments along generating maps and the layered
//!   hom decomposition of the result.
//! * [`report`] / [`catalog`] / [`recognition`] — machine-readable check
//!   reports, the fixed functor catalog, and the recognition-condition and
//!   computation replays driven by the CLI.

pub mod catalog;
pub mod complex;
pub mod functor;
pub mod lifting;
pub mod matrix;
pub mod monomial;
pub mod hom;
pub mod presentation;
pub mod pushout;
pub mod recognition;
pub mod report;
pub mod ring;
pub mod textio;

pub use complex::{ChainMap, FiniteComplex, ModuleDescription};
// pub use functor::{ClassifyRecord, StrictFunctor};
// pub use lifting::{GeneratingMap, LiftOutcome, LiftingSquare};
pub use matrix::Matrix;
pub use monomial::{Element, GenId, GradedQuiver, Monomial, ObjId, TruncationConfig};
pub use presentation::{builtin, BuiltinName, CategoryKind, CategoryPresentation};
pub use hom::{H0Category, HomTruncation};
// pub use pushout::{GluedCategory, LayeredHom};
pub use report::{CheckReport, ReportStatus};
pub use ring::{RingSpec, Scalar};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: expected {expected}, got {got}")]
    RingMismatch { expected: String, got: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires a field, got {0}")]
    NotAField(String),
    #[error("operation requires integer coefficients, got {0}")]
    NotIntegers(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("non-composable factors: {0}")]
    NonComposable(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("differential fails d^2 = 0: {0}")]
    DifferentialSquare(String),
    #[error("unknown builtin category `{0}`")]
    UnknownBuiltin(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("window not differential-closed: {0}")]
    WindowNotClosed(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid attachment: {0}")]
    InvalidAttachment(String),
    #[error("arity {arity} exceeds configured maximum {max}")]
    ArityExceeded { arity: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
