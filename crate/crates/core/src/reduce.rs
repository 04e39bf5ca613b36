//! Exact LLL reduction working directly on a Gram matrix.
//!
//! Used only as an internal preconditioner for the minimal-vector
//! enumeration; all arithmetic is rational, so the reduction is exact and
//! the transform is returned for mapping coordinates back.

use num_traits::{One, Signed, Zero};

use crate::linalg::{IntMatrix, RatMatrix};
use crate::{Int, Rat};

/// Gram-Schmidt data computed exactly from a Gram matrix: `mu[i][j]` for
/// `j < i` and the squared lengths `b[i]` of the orthogonalized vectors.
fn gso(g: &RatMatrix) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let n = g.rows();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut num = g.at(i, j).clone();
            for k in 0..j {
                num -= &mu[i][k] * &mu[j][k] * &b[k];
            }
            mu[i][j] = num / &b[j];
        }
        let mut bi = g.at(i, i).clone();
        for k in 0..i {
            bi -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        b[i] = bi;
    }
    (mu, b)
}

fn round_nearest(x: &Rat) -> Int {
    // round half toward even is unnecessary here; half up is fine
    (x + Rat::new(Int::one(), Int::from(2))).floor().to_integer()
}

/// `row_k -= q * row_j` as a congruent transform on `g`, mirrored on `u`.
fn row_op(g: &mut RatMatrix, u: &mut IntMatrix, k: usize, j: usize, q: &Int) {
    let n = g.rows();
    let qr = Rat::from_integer(q.clone());
    for c in 0..n {
        let v = g.at(k, c) - &qr * g.at(j, c);
        *g.at_mut(k, c) = v;
    }
    for r in 0..n {
        let v = g.at(r, k) - &qr * g.at(r, j);
        *g.at_mut(r, k) = v;
    }
    for c in 0..u.cols() {
        let v = u.at(k, c) - q * u.at(j, c);
        *u.at_mut(k, c) = v;
    }
}

fn swap_rows(g: &mut RatMatrix, u: &mut IntMatrix, k: usize) {
    let n = g.rows();
    for c in 0..n {
        let a = g.at(k - 1, c).clone();
        let b = g.at(k, c).clone();
        *g.at_mut(k - 1, c) = b;
        *g.at_mut(k, c) = a;
    }
    for r in 0..n {
        let a = g.at(r, k - 1).clone();
        let b = g.at(r, k).clone();
        *g.at_mut(r, k - 1) = b;
        *g.at_mut(r, k) = a;
    }
    for c in 0..u.cols() {
        let a = u.at(k - 1, c).clone();
        let b = u.at(k, c).clone();
        *u.at_mut(k - 1, c) = b;
        *u.at_mut(k, c) = a;
    }
}

/// LLL-reduces a positive-definite Gram matrix with delta = 3/4.
///
/// Returns `(g', u)` with `g' = u g u^T` and `u` unimodular.
pub(crate) fn lll_reduce_gram(g0: &RatMatrix) -> (RatMatrix, IntMatrix) {
    let n = g0.rows();
    let mut g = g0.clone();
    let mut u = IntMatrix::identity(n);
    if n <= 1 {
        return (g, u);
    }
    let delta = Rat::new(Int::from(3), Int::from(4));
    let half = Rat::new(Int::one(), Int::from(2));

    let (mut mu, mut b) = gso(&g);
    let mut k = 1;
    while k < n {
        // size-reduce row k against rows k-1 .. 0, updating mu locally
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = round_nearest(&mu[k][j]);
                row_op(&mut g, &mut u, k, j, &q);
                let qr = Rat::from_integer(q);
                for l in 0..j {
                    let v = &mu[k][l] - &qr * &mu[j][l];
                    mu[k][l] = v;
                }
                let v = &mu[k][j] - qr;
                mu[k][j] = v;
            }
        }
        let lhs = &b[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            swap_rows(&mut g, &mut u, k);
            let refreshed = gso(&g);
            mu = refreshed.0;
            b = refreshed.1;
            k = k.max(2) - 1;
        }
    }
    (g, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::GramMatrix;
    use num_traits::One;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn check_reduction(g: &GramMatrix) {
        let (gr, u) = lll_reduce_gram(g.matrix());
        // u must be unimodular and g' = u g u^T must hold exactly
        let ui = crate::linalg::IntMatrix::from_rows(
            (0..u.rows()).map(|i| u.row(i).to_vec()).collect(),
        );
        assert!(ui.det_exact().unwrap().abs().is_one());
        let ur = RatMatrix::from_int(&u);
        assert_eq!(ur.mul(g.matrix()).mul(&ur.transpose()), gr);
        // still positive definite
        GramMatrix::new(gr).unwrap();
    }

    #[test]
    fn reduces_random_gram_matrices() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.random_range(1..=6);
            // A^T A + I for a random integer A is positive definite
            let a: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.random_range(-4..=4)).collect()).collect();
            let mut rows = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = if i == j { 1 } else { 0 };
                    for (k, ak) in a.iter().enumerate() {
                        s += ak[i] * a[k][j];
                        let _ = k;
                    }
                    rows[i][j] = s;
                }
            }
            let g = GramMatrix::from_int_rows(&rows).unwrap();
            check_reduction(&g);
        }
    }

    #[test]
    fn reduces_skewed_basis() {
        // heavily skewed 2d basis reduces to the standard one
        let g = GramMatrix::from_int_rows(&[vec![1, 10], vec![10, 101]]).unwrap();
        let (gr, _) = lll_reduce_gram(g.matrix());
        assert_eq!(gr, GramMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]).unwrap().matrix().clone());
    }
}
