//! Error type shared by all operations.

use thiserror::Error;

/// Errors reported by lattice operations.
#[derive(Debug, Clone, Error)]
pub enum LatticeError {
    /// An operation requiring a square matrix got a rectangular one.
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    /// Gram matrix construction: symmetry violated.
    #[error("matrix is not symmetric: entry ({i},{j}) = {a} but ({j},{i}) = {b}")]
    NotSymmetric { i: usize, j: usize, a: String, b: String },

    /// Gram matrix construction: a leading principal minor is not positive.
    #[error("matrix is not positive definite: leading principal minor {k} is {value}")]
    NotPositiveDefinite { k: usize, value: String },

    /// Index-system operations require the minimal vectors to span.
    #[error("minimal vectors do not span: rank {rank} < dimension {n}")]
    NotWellRounded { rank: usize, n: usize },

    /// A chosen subset of minimal vectors is linearly dependent.
    #[error("subset is not a basis: determinant is zero")]
    NotABasis,

    /// The subset scan would visit more candidates than the work budget allows.
    #[error("budget exceeded: C({s},{n}) = {subsets} subsets, budget is {budget}")]
    BudgetExceeded { s: usize, n: usize, subsets: u128, budget: u64 },

    /// Hermite-constant table only covers dimensions 1..=8.
    #[error("dimension {n} unsupported: Hermite constant table covers n <= 8")]
    UnsupportedDimension { n: usize },

    /// Bad argument (indices out of range, invalid family parameters, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Unknown catalog name; the message lists what is available.
    #[error("unknown catalog name {name:?}; available: {available}")]
    UnknownName { name: String, available: String },

    /// Text-format parse failure, with a line/entry diagnostic.
    #[error("parse error at line {line}, entry {entry}: {msg}")]
    Parse { line: usize, entry: usize, msg: String },

    /// An identity that must hold algebraically failed; indicates a bug.
    #[error("internal arithmetic fault: {0}")]
    ArithmeticFault(String),
}
