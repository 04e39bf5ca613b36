//! Exact-arithmetic toolkit for well-rounded Euclidean lattices.
//!
//! A lattice is given by a Gram matrix (exact rational, symmetric, positive
//! definite). On top of that this crate computes, with no floating point
//! anywhere on a result path:
//!
//! * the minimum and the full set of minimal vectors (Fincke–Pohst over an
//!   exact LDL^T decomposition, optionally preconditioned by exact LLL),
//! * the index system: the set of isomorphism classes of quotients L/L'
//!   over all sublattices L' spanned by n minimal vectors, together with
//!   occurrence counts and the maximal index,
//! * secondary invariants: perfection rank, quotient codes over Z/dZ,
//!   Watson's norm identity, coefficient bounds, Hermite-bound checks,
//! * a catalog of named lattices (root lattices, glue constructions,
//!   parametrized families, and fixed reference Gram matrices) used as
//!   regression fixtures.
//!
//! Integer kernels (determinant, Hermite and Smith normal forms, rank) live
//! in [`linalg`]; everything is built on `num-bigint`/`num-rational`.

pub mod abelian;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod gram;
pub mod invariants;
pub mod linalg;
pub mod minvec;
mod reduce;

pub use abelian::AbelianType;
pub use engine::{
    hermite_index_bound, index_system, max_index_only, quotient_of, IndexSystemOptions,
    IndexSystemReport, DEFAULT_BUDGET,
};
pub use error::LatticeError;
pub use gram::GramMatrix;
pub use invariants::{
    coefficient_bound_report, perfection_rank, quotient_code, watson_check, QuotientCode,
    WatsonCertificate,
};
pub use linalg::{IntMatrix, RatMatrix};
pub use minvec::{is_well_rounded, minimal_vectors, MinimalVectorSet};

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Exact rational used throughout (always reduced, denominator > 0).
pub type Rat = num_rational::BigRational;

/// Binomial coefficient C(n, k), saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1), exact at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}
