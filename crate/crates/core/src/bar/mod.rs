//! Bar complexes of presented graded commutative algebras over `F_p`, their
//! homology, the shuffle product, comparison maps to small models, and
//! iterated Tor.

mod complex;
mod iterated;
mod presentation;
mod quasi_iso;
mod shuffle;

use thiserror::Error;

use crate::fp::FpError;

pub use complex::{
    bar_complex, bar_homology, truncated, BarBlock, BarBounds, BarComplex, BarTensor, BlockKey, Monomial,
};
pub use iterated::{iterated_tor, iterated_tor_bar_check, BarCheck, IteratedTor, StageGenerator, TorBounds};
pub use presentation::{AlgebraPresentation, BigradedDims, GenKind, Generator, Tridegree};
pub use quasi_iso::{verify_quasi_iso, CheckOutcome, ModelElement, QuasiIsoCase, QuasiIsoReport, SmallModel};
pub use shuffle::{check_shuffle_laws, BarChain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("a generator has degree 0 and weight 0, so bar pieces are infinite")]
    NotLocallyFinite,
    #[error("chains belong to different presentations")]
    PresentationMismatch,
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error("{0}")]
    Unsupported(String),
}
