//! Secondary invariants: perfection rank, quotient codes over Z/dZ, the
//! Watson norm identity, and the coefficient-bound check.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::catalog::{glue, GlueSpec};
use crate::engine::{subset_matrix, visit_bases, IndexSystemReport};
use crate::error::LatticeError;
use crate::gram::GramMatrix;
use crate::linalg::IntMatrix;
use crate::minvec::{minimal_vectors, MinimalVectorSet};
use crate::{Int, Rat};

/// Perfection rank: the rank of the projections `x x^T` over the minimal
/// vectors, as vectors in the n(n+1)/2-dimensional space of symmetric
/// matrices. Equals n(n+1)/2 exactly for perfect lattices.
pub fn perfection_rank(g: &GramMatrix) -> usize {
    perfection_rank_of(g.dim(), &minimal_vectors(g))
}

/// [`perfection_rank`] against a precomputed minimal-vector set.
pub fn perfection_rank_of(n: usize, mv: &MinimalVectorSet) -> usize {
    let rows: Vec<Vec<Int>> = mv
        .vectors
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(n * (n + 1) / 2);
            for i in 0..n {
                for j in i..n {
                    row.push(Int::from(x[i]) * Int::from(x[j]));
                }
            }
            row
        })
        .collect();
    IntMatrix::from_rows(rows).rank()
}

/// The code over Z/dZ cut out by a finite-index sublattice: codewords are
/// the coordinates (scaled by the exponent d) of lifts of the quotient
/// generators, reduced mod d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCode {
    /// Exponent of the quotient (largest invariant factor); 1 when trivial.
    pub d: u64,
    /// Code length = lattice dimension.
    pub length: usize,
    /// One codeword per nontrivial invariant factor, entries in [0, d).
    pub generators: Vec<Vec<u64>>,
}

impl QuotientCode {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of coordinates where some generator is nonzero.
    pub fn support_size(&self) -> usize {
        (0..self.length)
            .filter(|&j| self.generators.iter().any(|g| g[j] != 0))
            .count()
    }
}

/// Extracts the quotient code of L over the sublattice spanned by the
/// chosen minimal vectors. Cyclic quotients yield exactly one generator,
/// normalized so that a unit multiple puts the first nonzero entry into
/// `1..=d/2` (lexicographically smallest such multiple).
pub fn quotient_code(g: &GramMatrix, subset: &[usize]) -> Result<QuotientCode, LatticeError> {
    quotient_code_of(g.dim(), &minimal_vectors(g), subset)
}

/// [`quotient_code`] against a precomputed minimal-vector set.
pub fn quotient_code_of(
    n: usize,
    mv: &MinimalVectorSet,
    subset: &[usize],
) -> Result<QuotientCode, LatticeError> {
    let m = subset_matrix(n, mv, subset)?;
    if m.det_exact()?.is_zero() {
        return Err(LatticeError::NotABasis);
    }
    let (_u, dmat, v) = m.snf_with_transforms();
    let exponent = dmat.at(n - 1, n - 1).abs();
    let d = exponent
        .to_u64()
        .ok_or_else(|| LatticeError::InvalidInput("quotient exponent exceeds u64".into()))?;
    if d <= 1 {
        return Ok(QuotientCode { d: 1, length: n, generators: Vec::new() });
    }

    // quotient generators are the rows of v^{-1} at the nontrivial
    // diagonal positions; v is unimodular so the inverse is integral
    let (dv, vinv_scaled) = v.inverse_scaled().expect("unimodular matrix is invertible");
    debug_assert!(dv.abs().is_one());
    let (dm, minv_scaled) = m.inverse_scaled().expect("subset has nonzero determinant");

    let mut generators = Vec::new();
    for i in 0..n {
        if dmat.at(i, i).abs() <= Int::one() {
            continue;
        }
        // codeword = d * (g * m^{-1}) mod d, an integer vector because
        // d * g lies in the row span of m
        let word: Vec<u64> = (0..n)
            .map(|j| {
                let mut w = Int::zero();
                for k in 0..n {
                    w += vinv_scaled.at(i, k) * minv_scaled.at(k, j);
                }
                let scaled = &exponent * &w;
                debug_assert!((&scaled % (&dv * &dm)).is_zero());
                let a = scaled / (&dv * &dm);
                a.mod_floor(&exponent).to_u64().expect("residue fits u64")
            })
            .collect();
        debug_assert!(word.iter().any(|&a| a != 0));
        generators.push(word);
    }
    if generators.len() == 1 {
        let w = normalize_cyclic(&generators[0], d);
        generators[0] = w;
    }
    Ok(QuotientCode { d, length: n, generators })
}

/// Smallest unit multiple (lexicographically) whose first nonzero entry
/// lies in `1..=d/2`.
fn normalize_cyclic(word: &[u64], d: u64) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for u in 1..d {
        if u.gcd(&d) != 1 {
            continue;
        }
        let cand: Vec<u64> = word.iter().map(|&a| a * u % d).collect();
        match cand.iter().find(|&&a| a != 0) {
            Some(&f) if f <= d / 2 => {
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
            _ => {}
        }
    }
    best.unwrap_or_else(|| word.to_vec())
}

/// Both sides of the Watson norm identity for `e = (sum a_i e_i) / d`,
/// plus the minimality data it forces in the balanced case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatsonCertificate {
    pub d: u64,
    pub coeffs: Vec<i64>,
    /// `((sum |a_i|) - 2d) * N(e)`.
    pub lhs: Rat,
    /// `sum |a_i| (N(e - sgn(a_i) e_i) - N(e_i))`.
    pub rhs: Rat,
    /// All coefficients strictly positive and summing to 2d.
    pub balanced: bool,
    /// In the balanced case: the i for which `e - e_i` attains the minimum
    /// of the glued lattice `<L', e>`.
    pub minimal_shifts: Vec<usize>,
}

/// Evaluates the Watson identity exactly over the base Gram matrix.
///
/// Requires `gcd(a_1, ..., a_n, d) = 1`. The two sides of the identity are
/// equal unconditionally; inequality would indicate an arithmetic fault and
/// is reported as an error rather than a certificate.
pub fn watson_check(
    base: &GramMatrix,
    coeffs: &[i64],
    d: u64,
) -> Result<WatsonCertificate, LatticeError> {
    let n = base.dim();
    if coeffs.len() != n {
        return Err(LatticeError::InvalidInput(format!(
            "{} coefficients for dimension {n}",
            coeffs.len()
        )));
    }
    if d < 2 {
        return Err(LatticeError::InvalidInput("glue denominator must be >= 2".into()));
    }
    let mut gcd = d;
    for &a in coeffs {
        gcd = gcd.gcd(&(a.unsigned_abs()));
    }
    if gcd != 1 {
        return Err(LatticeError::InvalidInput(format!(
            "gcd(a_1, ..., a_n, d) = {gcd}, expected 1"
        )));
    }

    let dr = Int::from(d);
    let e: Vec<Rat> = coeffs.iter().map(|&a| Rat::new(Int::from(a), dr.clone())).collect();
    let norm_e = base.norm_rat(&e);
    let sum_abs: i64 = coeffs.iter().map(|a| a.abs()).sum();
    let lhs = Rat::from_integer(Int::from(sum_abs - 2 * d as i64)) * &norm_e;

    let mut rhs = Rat::zero();
    for (i, &a) in coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let mut shifted = e.clone();
        shifted[i] -= Rat::from_integer(Int::from(a.signum()));
        let term = base.norm_rat(&shifted) - base.at(i, i);
        rhs += Rat::from_integer(Int::from(a.abs())) * term;
    }
    if lhs != rhs {
        return Err(LatticeError::ArithmeticFault(format!(
            "Watson identity sides differ: {lhs} vs {rhs}"
        )));
    }

    let balanced = coeffs.iter().all(|&a| a > 0) && sum_abs == 2 * d as i64;
    let minimal_shifts = if balanced {
        let (lam, _) = glue(&GlueSpec { base: base.clone(), glue_vectors: vec![e.clone()] })?;
        let mu = minimal_vectors(&lam).minimum;
        (0..n)
            .filter(|&i| {
                let mut shifted = e.clone();
                shifted[i] -= Rat::one();
                base.norm_rat(&shifted) == mu
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(WatsonCertificate { d, coeffs: coeffs.to_vec(), lhs, rhs, balanced, minimal_shifts })
}

/// Checks the coefficient bound: for every sampled minimal-vector basis B
/// with sublattice index D and every minimal vector x, the coordinates of x
/// over B satisfy `|alpha_i| * D <= max_index`. On a basis of maximal index
/// this is exactly the bound `|a_i| <= d` for `x = (sum a_i e_i) / d` with
/// `d` the maximal index; replacing e_i by x in such a basis shows the
/// general form.
///
/// All bases are visited when their number fits within `sample_budget`;
/// otherwise a deterministic sample is taken, spread over the
/// first-position prefixes of the lexicographic enumeration.
pub fn coefficient_bound_report(
    g: &GramMatrix,
    report: &IndexSystemReport,
    sample_budget: u64,
) -> bool {
    let n = g.dim();
    let mv = minimal_vectors(g);
    let cap = if report.bases_full_rank <= sample_budget {
        None
    } else {
        Some(sample_budget)
    };
    // |alpha_i| * D <= max_index, with alpha_i = (x adj B)_i / det B and
    // D = |det B|, becomes |(x adj B)_i| <= max_index
    let bound = Int::from(report.max_index);
    let mut ok = true;
    visit_bases(n, &mv.vectors, cap, &mut |subset| {
        let rows: Vec<Vec<Int>> = subset
            .iter()
            .map(|&i| mv.vectors[i].iter().map(|&v| Int::from(v)).collect())
            .collect();
        let m = IntMatrix::from_rows(rows);
        let (_det, inv_scaled) = m.inverse_scaled().expect("visited subsets are bases");
        for x in &mv.vectors {
            for j in 0..n {
                let mut w = Int::zero();
                for (k, &xk) in x.iter().enumerate() {
                    if xk != 0 {
                        w += inv_scaled.at(k, j) * Int::from(xk);
                    }
                }
                if w.abs() > bound {
                    ok = false;
                    return false;
                }
            }
        }
        true
    });
    ok
}
