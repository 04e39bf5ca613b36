//! Exact minimum and minimal-vector enumeration.
//!
//! Enumeration is Fincke-Pohst over the exact LDL^T decomposition of the
//! (internally LLL-reduced) Gram matrix. Every bound test and every accepted
//! vector is exact rational arithmetic; no floating point is involved, so
//! ties at the minimum are decided correctly.

use num_traits::{One, ToPrimitive, Zero};

use crate::gram::GramMatrix;
use crate::linalg::IntMatrix;
use crate::reduce::lll_reduce_gram;
use crate::{Int, Rat};

/// The minimum of a lattice and all coordinate vectors attaining it, one
/// representative per antipodal pair `{x, -x}`.
///
/// Coordinates are with respect to the Gram basis. The canonical sign makes
/// the first nonzero coordinate positive; vectors are sorted
/// lexicographically, so the output is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalVectorSet {
    /// The minimum: the smallest norm `x^T G x` over nonzero integer `x`.
    pub minimum: Rat,
    /// One coordinate vector per antipodal pair, sorted lexicographically.
    pub vectors: Vec<Vec<i64>>,
}

impl MinimalVectorSet {
    /// Half the kissing number: the number of stored antipodal pairs.
    pub fn s(&self) -> usize {
        self.vectors.len()
    }

    /// The s x n coordinate matrix of the representatives.
    pub fn coordinate_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_rows(&self.vectors)
    }
}

struct Enumerator<'a> {
    n: usize,
    diag: &'a [Rat],
    lower: &'a [Vec<Rat>],
    ys: Vec<i64>,
    best: Rat,
    found: Vec<Vec<i64>>,
}

impl Enumerator<'_> {
    /// Center offset at `level`: sum over j > level of `lower[j][level] * y_j`.
    fn center(&self, level: usize) -> Rat {
        let mut c = Rat::zero();
        for j in level + 1..self.n {
            if self.ys[j] != 0 {
                c += &self.lower[j][level] * Rat::from_integer(Int::from(self.ys[j]));
            }
        }
        c
    }

    fn leaf(&mut self, norm: Rat) {
        if norm.is_zero() {
            return;
        }
        if norm < self.best {
            self.best = norm;
            self.found.clear();
            self.found.push(self.ys.clone());
        } else if norm == self.best {
            self.found.push(self.ys.clone());
        }
    }

    fn descend(&mut self, level: usize, partial: &Rat) {
        let c = self.center(level);
        let start = round_nearest(&-&c);
        let side = |enumr: &mut Self, first: i64, step: i64| {
            let mut y = first;
            loop {
                let t = Rat::from_integer(Int::from(y)) + &c;
                let contribution = &enumr.diag[level] * &t * &t;
                let total = partial + &contribution;
                if total > enumr.best {
                    break;
                }
                enumr.ys[level] = y;
                if level == 0 {
                    enumr.leaf(total);
                } else {
                    enumr.descend(level - 1, &total);
                }
                enumr.ys[level] = 0;
                y += step;
            }
        };
        side(self, start, -1);
        side(self, start + 1, 1);
    }
}

fn round_nearest(x: &Rat) -> i64 {
    let half = Rat::new(Int::one(), Int::from(2));
    (x + half).floor().to_integer().to_i64().expect("enumeration center out of i64 range")
}

/// Computes the exact minimum and all minimal vectors of the lattice.
pub fn minimal_vectors(g: &GramMatrix) -> MinimalVectorSet {
    let n = g.dim();
    let (gr, u) = lll_reduce_gram(g.matrix());
    let reduced = GramMatrix::new(gr).expect("LLL preserves positive definiteness");
    let (diag, lower) = reduced.ldl();

    let bound = (0..n).map(|i| reduced.at(i, i).clone()).min().expect("positive dimension");
    let mut en = Enumerator {
        n,
        diag: &diag,
        lower: &lower,
        ys: vec![0; n],
        best: bound,
        found: Vec::new(),
    };
    en.descend(n - 1, &Rat::zero());
    let minimum = en.best;

    // map back to the original basis (x = U^T y) and canonicalize signs
    let mut vectors: Vec<Vec<i64>> = en
        .found
        .iter()
        .map(|y| {
            let mut x = vec![Int::zero(); n];
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi += u.at(j, i) * Int::from(yj);
                }
            }
            let mut x: Vec<i64> = x
                .into_iter()
                .map(|v| v.to_i64().expect("minimal vector coordinate out of i64 range"))
                .collect();
            if x.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
                for v in &mut x {
                    *v = -*v;
                }
            }
            x
        })
        .collect();
    vectors.sort();
    vectors.dedup();

    for x in &vectors {
        assert_eq!(g.norm_int(x), minimum, "re-verification of a minimal vector failed");
    }
    MinimalVectorSet { minimum, vectors }
}

/// True iff the minimal vectors span the whole space.
pub fn is_well_rounded(g: &GramMatrix) -> bool {
    minimal_vectors(g).coordinate_matrix().rank() == g.dim()
}
