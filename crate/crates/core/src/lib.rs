//! Exact-integer engine for Nash blowups and normalized Nash blowups of
//! affine toric varieties, with a persistent explorer for the digraph of
//! iterated blowups.

pub mod analysis;
pub mod canonical;
pub mod cone;
mod dd;
pub mod explorer;
pub mod hilbert;
pub mod int;
pub mod linalg;
pub mod matrix;
pub mod nash;
mod par;
pub mod sampling;
pub mod semigroup;

pub use canonical::{are_equivalent, canonical_cone, canonical_semigroup, CanonicalKey};
pub use cone::{Cone, LatticePolyhedron};
pub use int::Int;
pub use matrix::IntMatrix;
pub use nash::{Characteristic, Fan};
pub use semigroup::AffineSemigroup;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("zero vector has no primitive multiple")]
    ZeroVector,
    #[error("expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("characteristic {0} is neither 0 nor prime")]
    InvalidCharacteristic(u64),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("{count} bases exceed the cap of {cap}")]
    TooManyBases { count: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("store mismatch: {0}")]
    StoreMismatch(String),
    #[error("malformed store record on line {line}: {message}")]
    StoreFormat { line: usize, message: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyMatrix => "empty_matrix",
            Error::Dimension(_) => "dimension",
            Error::Parse { .. } => "parse",
            Error::ZeroVector => "zero_vector",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::InvalidCharacteristic(_) => "invalid_characteristic",
            Error::NotUnimodular => "not_unimodular",
            Error::NotPointed => "not_pointed",
            Error::NotFullDimensional => "not_full_dimensional",
            Error::TooManyBases { .. } => "too_many_bases",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::StoreMismatch(_) => "store_mismatch",
            Error::StoreFormat { .. } => "store_format",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::Io(_) => "io",
        }
    }
}
