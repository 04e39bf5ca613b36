//! Exact integer and rational matrix kernel.
//!
//! Everything here is exact: determinants by fraction-free (Bareiss)
//! elimination, row-style Hermite normal form, Smith normal form with or
//! without transforms, and rank over the rationals. No floating point.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::AbelianType;
use crate::error::LatticeError;
use crate::{Int, Rat};

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        IntMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + a * rhs.at(k, j);
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// Exact determinant by fraction-free elimination.
    ///
    /// Errors on non-square input.
    pub fn det_exact(&self) -> Result<Int, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.to_rows();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Int::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev; // exact by the Sylvester identity
                }
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(if sign < 0 { -prev } else { prev })
    }

    /// Row-style Hermite normal form of the row span.
    ///
    /// Zero rows are removed, pivots are positive, and every entry above a
    /// pivot is reduced into `[0, pivot)`.
    pub fn hnf(&self) -> IntMatrix {
        let mut a = self.to_rows();
        let rows = a.len();
        let cols = self.cols;
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            // gcd-reduce column c below row r until a single nonzero remains
            loop {
                let mut piv: Option<usize> = None;
                for i in r..rows {
                    if !a[i][c].is_zero()
                        && piv.is_none_or(|p| a[i][c].abs() < a[p][c].abs())
                    {
                        piv = Some(i);
                    }
                }
                let Some(p) = piv else { break };
                a.swap(r, p);
                let mut others = false;
                for i in r + 1..rows {
                    if !a[i][c].is_zero() {
                        let q = a[i][c].div_floor(&a[r][c]);
                        for j in c..cols {
                            let v = &a[i][j] - &q * &a[r][j];
                            a[i][j] = v;
                        }
                        others |= !a[i][c].is_zero();
                    }
                }
                if !others {
                    break;
                }
            }
            if a[r][c].is_zero() {
                continue;
            }
            if a[r][c].is_negative() {
                for j in c..cols {
                    a[r][j] = -a[r][j].clone();
                }
            }
            // reduce entries above the pivot into [0, pivot)
            for i in 0..r {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    if !q.is_zero() {
                        for j in c..cols {
                            let v = &a[i][j] - &q * &a[r][j];
                            a[i][j] = v;
                        }
                    }
                }
            }
            r += 1;
        }
        a.truncate(r);
        IntMatrix::from_rows(a)
    }

    /// Invariant factors of the cokernel `Z^cols / rowspan(self)`,
    /// torsion part only (factors equal to 1 dropped, free part ignored).
    pub fn snf_invariant_factors(&self) -> AbelianType {
        let diag = snf_diagonal(self.to_rows());
        AbelianType::from_invariant_factors(diag.into_iter().filter(|d| !d.is_zero()))
    }

    /// Smith normal form with transforms: returns `(u, d, v)` with
    /// `u * self * v = d`, `u` and `v` unimodular, `d` diagonal with the
    /// divisibility chain.
    pub fn snf_with_transforms(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut a = self.to_rows();
        let rows = self.rows;
        let cols = self.cols;
        let mut u = IntMatrix::identity(rows).to_rows();
        let mut v = IntMatrix::identity(cols).to_rows();

        let n = rows.min(cols);
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = min_abs_pivot(&a, t, rows, cols) else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            loop {
                // clear column t below the pivot
                let mut dirty = false;
                for i in t + 1..rows {
                    if !a[i][t].is_zero() {
                        let (q, r) = a[i][t].div_rem(&a[t][t]);
                        for j in 0..cols {
                            let x = &a[i][j] - &q * &a[t][j];
                            a[i][j] = x;
                        }
                        for j in 0..rows {
                            let x = &u[i][j] - &q * &u[t][j];
                            u[i][j] = x;
                        }
                        if !r.is_zero() {
                            a.swap(t, i);
                            u.swap(t, i);
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    continue;
                }
                // clear row t right of the pivot
                for j in t + 1..cols {
                    if !a[t][j].is_zero() {
                        let (q, r) = a[t][j].div_rem(&a[t][t]);
                        for i in 0..rows {
                            let x = &a[i][j] - &q * &a[i][t];
                            a[i][j] = x;
                        }
                        for i in 0..cols {
                            let x = &v[i][j] - &q * &v[i][t];
                            v[i][j] = x;
                        }
                        if !r.is_zero() {
                            swap_cols(&mut a, t, j);
                            swap_cols(&mut v, t, j);
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    continue;
                }
                // column may have been re-dirtied by the row pass
                if (t + 1..rows).any(|i| !a[i][t].is_zero()) {
                    continue;
                }
                // pivot must divide the remaining submatrix
                let mut fixed = true;
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            for jj in 0..cols {
                                let x = &a[t][jj] + &a[i][jj];
                                a[t][jj] = x;
                            }
                            for jj in 0..rows {
                                let x = &u[t][jj] + &u[i][jj];
                                u[t][jj] = x;
                            }
                            fixed = false;
                            break 'outer;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
            if a[t][t].is_negative() {
                for j in 0..cols {
                    a[t][j] = -a[t][j].clone();
                }
                for j in 0..rows {
                    u[t][j] = -u[t][j].clone();
                }
            }
            t += 1;
        }
        (IntMatrix::from_rows(u), IntMatrix::from_rows(a), IntMatrix::from_rows(v))
    }

    /// Rank over the rationals (equivalently, over the reals).
    pub fn rank(&self) -> usize {
        rank_int_rows(&mut self.to_rows())
    }

    /// Returns `(d, r)` with `r = d * self^{-1}` (so `r / d` is the exact
    /// inverse), or `None` when the matrix is singular. `d` is the
    /// determinant up to sign.
    pub fn inverse_scaled(&self) -> Option<(Int, IntMatrix)> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut w: Vec<Vec<Int>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Int::one() } else { Int::zero() }));
                row
            })
            .collect();
        let d = fraction_free_jordan(&mut w, n)?;
        let inv = IntMatrix::from_rows(
            w.into_iter().map(|row| row[n..].to_vec()).collect(),
        );
        Some((d, inv))
    }
}

/// Dense rational matrix, row-major. `num_rational` keeps every entry
/// reduced with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        RatMatrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|x| Rat::from_integer(x.clone())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = RatMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + a * rhs.at(k, j);
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut out = RatMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        // clearing denominators row by row preserves the row space
        let mut rows: Vec<Vec<Int>> = (0..self.rows)
            .map(|i| {
                let lcm = self.row(i).iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
                self.row(i).iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect();
        rank_int_rows(&mut rows)
    }

    /// Exact inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut w: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !w[i][k].is_zero())?;
            w.swap(k, p);
            let inv = w[k][k].recip();
            for j in k..2 * n {
                let v = &w[k][j] * &inv;
                w[k][j] = v;
            }
            for i in 0..n {
                if i != k && !w[i][k].is_zero() {
                    let f = w[i][k].clone();
                    for j in k..2 * n {
                        let v = &w[i][j] - &f * &w[k][j];
                        w[i][j] = v;
                    }
                }
            }
        }
        Some(RatMatrix::from_rows(w.into_iter().map(|row| row[n..].to_vec()).collect()))
    }
}

fn swap_cols<T>(a: &mut [Vec<T>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn min_abs_pivot<T: Integer + Signed>(
    a: &[Vec<T>],
    t: usize,
    rows: usize,
    cols: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            if !a[i][j].is_zero()
                && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
            {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Diagonal of the Smith normal form (no transforms), generic over the
/// integer type so the subset engine can run it on machine words.
///
/// Returns the min(rows, cols) diagonal entries, nonnegative, satisfying the
/// divisibility chain; trailing entries are zero when the rank is deficient.
pub(crate) fn snf_diagonal<T>(mut a: Vec<Vec<T>>) -> Vec<T>
where
    T: Integer + Signed + Clone,
{
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = min_abs_pivot(&a, t, rows, cols) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let (q, r) = a[i][t].div_rem(&a[t][t]);
                    for j in t..cols {
                        let x = a[i][j].clone() - q.clone() * a[t][j].clone();
                        a[i][j] = x;
                    }
                    if !r.is_zero() {
                        a.swap(t, i);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let (q, r) = a[t][j].div_rem(&a[t][t]);
                    for i in t..rows {
                        let x = a[i][j].clone() - q.clone() * a[i][t].clone();
                        a[i][j] = x;
                    }
                    if !r.is_zero() {
                        swap_cols(&mut a, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty || (t + 1..rows).any(|i| !a[i][t].is_zero()) {
                continue;
            }
            let mut fixed = true;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(a[i][j].clone() % a[t][t].clone()).is_zero() {
                        for jj in t..cols {
                            let x = a[t][jj].clone() + a[i][jj].clone();
                            a[t][jj] = x;
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        a[t][t] = a[t][t].abs();
        t += 1;
    }
    (0..n)
        .map(|i| if i < t { a[i][i].clone() } else { T::zero() })
        .collect()
}

/// Rank of integer rows by fraction-free elimination; consumes the rows.
pub(crate) fn rank_int_rows(a: &mut [Vec<Int>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = Int::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = num / &prev;
            }
            a[i][c] = Int::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// One-step fraction-free Gauss-Jordan on an augmented matrix with `n`
/// pivot columns; returns the final common diagonal value `d` (the
/// determinant of the pivot block up to sign), or `None` when singular.
/// Afterwards the pivot block is `d * I` and the remaining columns hold
/// `d * A^{-1} * rhs`.
pub(crate) fn fraction_free_jordan<T>(w: &mut Vec<Vec<T>>, n: usize) -> Option<T>
where
    T: Integer + Signed + Clone,
{
    let width = w.first().map_or(0, Vec::len);
    let mut prev = T::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !w[i][k].is_zero())?;
        if p != k {
            w.swap(p, k);
            // keep the final diagonal positive-consistent: a swap flips the
            // sign of every subsequent pivot, which is absorbed into d
            for x in w[k].iter_mut() {
                *x = T::zero() - x.clone();
            }
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let lead = w[i][k].clone();
            for j in 0..width {
                if j == k {
                    continue;
                }
                let num = w[k][k].clone() * w[i][j].clone() - lead.clone() * w[k][j].clone();
                w[i][j] = num / prev.clone(); // exact (fraction-free Jordan)
            }
            w[i][k] = T::zero();
        }
        prev = w[k][k].clone();
    }
    Some(prev)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// O(n!) permutation-expansion determinant, the independent oracle.
    fn det_naive(m: &IntMatrix) -> Int {
        fn go(m: &IntMatrix, used: &mut Vec<bool>, row: usize) -> Int {
            let n = m.rows();
            if row == n {
                return Int::one();
            }
            let mut acc = Int::zero();
            let mut sign_flips = 0;
            for c in 0..n {
                if used[c] {
                    continue;
                }
                if !m.at(row, c).is_zero() {
                    used[c] = true;
                    let sub = go(m, used, row + 1);
                    used[c] = false;
                    let term = m.at(row, c) * sub;
                    acc += if sign_flips % 2 == 0 { term } else { -term };
                }
                sign_flips += 1;
            }
            acc
        }
        go(m, &mut vec![false; m.cols()], 0)
    }

    #[test]
    fn det_identity_and_2x2() {
        assert_eq!(IntMatrix::identity(3).det_exact().unwrap(), Int::from(1));
        assert_eq!(im(&[&[1, 2], &[3, 4]]).det_exact().unwrap(), Int::from(-2));
    }

    #[test]
    fn det_non_square_errors() {
        let m = im(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(m.det_exact(), Err(LatticeError::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn det_matches_permutation_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.random_range(1..=5);
            let rows: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.random_range(-9..=9)).collect()).collect();
            let m = IntMatrix::from_i64_rows(&rows);
            assert_eq!(m.det_exact().unwrap(), det_naive(&m), "matrix {rows:?}");
        }
    }

    #[test]
    fn hnf_examples() {
        // the row span of {(2,0),(0,2),(1,1)} is the even-coordinate-sum lattice
        let h = im(&[&[2, 0], &[0, 2], &[1, 1]]).hnf();
        assert_eq!(h, im(&[&[1, 1], &[0, 2]]));
        assert_eq!(IntMatrix::identity(4).hnf(), IntMatrix::identity(4));

        let h = im(&[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4], &[1, 1, 2]]).hnf();
        assert_eq!(h, im(&[&[1, 1, 2], &[0, 4, 0], &[0, 0, 4]]));
        assert_eq!(h.det_exact().unwrap(), Int::from(16));
    }

    #[test]
    fn hnf_coset_counting_oracle() {
        // |Z^3 : L| for L = 4Z^3 + Z(1,1,2). Membership is checked directly
        // against the generators, independent of hnf.
        let in_lattice = |x: i64, y: i64, z: i64| -> bool {
            (0..4).any(|d| {
                (x - d).rem_euclid(4) == 0 && (y - d).rem_euclid(4) == 0 && (z - 2 * d).rem_euclid(4) == 0
            })
        };
        let mut points = 0u64;
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..4 {
                    if in_lattice(x, y, z) {
                        points += 1;
                    }
                }
            }
        }
        // 4Z^3 has 64 cosets in the box; L/4Z^3 has `points` elements
        assert_eq!(64 / points, 16);
    }

    #[test]
    fn hnf_idempotent_and_span_preserving() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.random_range(1..=5);
            let c = rng.random_range(1..=4);
            let rows: Vec<Vec<i64>> =
                (0..r).map(|_| (0..c).map(|_| rng.random_range(-9..=9)).collect()).collect();
            let m = IntMatrix::from_i64_rows(&rows);
            let h = m.hnf();
            assert_eq!(h.hnf(), h);
            // every original row must reduce to zero against the HNF rows
            for i in 0..m.rows() {
                let mut v = m.row(i).to_vec();
                for hr in 0..h.rows() {
                    let pc = (0..c).find(|&j| !h.at(hr, j).is_zero()).unwrap();
                    if !v[pc].is_zero() {
                        let q = v[pc].div_floor(h.at(hr, pc));
                        for j in 0..c {
                            let x = &v[j] - &q * h.at(hr, j);
                            v[j] = x;
                        }
                    }
                }
                assert!(v.iter().all(Int::is_zero), "row not in HNF span");
            }
        }
    }

    #[test]
    fn snf_examples() {
        assert!(IntMatrix::identity(4).snf_invariant_factors().is_trivial());
        assert_eq!(im(&[&[2, 0], &[0, 2]]).snf_invariant_factors().to_string(), "2.2");
        // coset oracle for [[1,2],[3,4]]: 2Z^2 is inside, and the box [0,2)^2
        // contains exactly (0,0) and (1,0), so the quotient has order 2
        assert_eq!(im(&[&[1, 2], &[3, 4]]).snf_invariant_factors().to_string(), "2");
    }

    #[test]
    fn snf_product_equals_abs_det_and_unimodular_invariance() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..300 {
            let n = rng.random_range(1..=4);
            let rows: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.random_range(-9..=9)).collect()).collect();
            let m = IntMatrix::from_i64_rows(&rows);
            let det = m.det_exact().unwrap();
            let t = m.snf_invariant_factors();
            if !det.is_zero() {
                assert_eq!(t.order(), det.abs());
            }
            let u = random_unimodular(n, &mut rng);
            let v = random_unimodular(n, &mut rng);
            assert_eq!(u.mul(&m).mul(&v).snf_invariant_factors(), t);
        }
    }

    pub(crate) fn random_unimodular(n: usize, rng: &mut StdRng) -> IntMatrix {
        // product of random elementary row operations and swaps
        let mut u = IntMatrix::identity(n);
        for _ in 0..3 * n {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i == j {
                continue;
            }
            let q = Int::from(rng.random_range(-3..=3i64));
            for k in 0..n {
                let x = u.at(i, k) + &q * u.at(j, k);
                *u.at_mut(i, k) = x;
            }
            if rng.random_bool(0.3) {
                for k in 0..n {
                    let a = u.at(i, k).clone();
                    let b = u.at(j, k).clone();
                    *u.at_mut(i, k) = b;
                    *u.at_mut(j, k) = a;
                }
            }
        }
        u
    }

    #[test]
    fn snf_transforms_consistent() {
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..200 {
            let r = rng.random_range(1..=4);
            let c = rng.random_range(1..=4);
            let rows: Vec<Vec<i64>> =
                (0..r).map(|_| (0..c).map(|_| rng.random_range(-9..=9)).collect()).collect();
            let m = IntMatrix::from_i64_rows(&rows);
            let (u, d, v) = m.snf_with_transforms();
            assert_eq!(u.mul(&m).mul(&v), d, "UMV != D for {rows:?}");
            assert_eq!(u.det_exact().unwrap().abs(), Int::one());
            assert_eq!(v.det_exact().unwrap().abs(), Int::one());
            // d is diagonal with the divisibility chain
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if i != j {
                        assert!(d.at(i, j).is_zero());
                    }
                }
            }
            let diag: Vec<Int> = (0..r.min(c)).map(|i| d.at(i, i).clone()).collect();
            for w in diag.windows(2) {
                if !w[1].is_zero() {
                    assert!(!w[0].is_zero() && (&w[1] % &w[0]).is_zero());
                }
            }
            assert_eq!(
                AbelianType::from_invariant_factors(
                    diag.into_iter().filter(|x| !x.is_zero())
                ),
                m.snf_invariant_factors()
            );
        }
    }

    #[test]
    fn rank_rational_cases() {
        assert_eq!(RatMatrix::zero(3, 3).rank(), 0);
        assert_eq!(RatMatrix::identity(5).rank(), 5);
        // rank-1 projections x x^T of the minimal vectors of a hexagonal
        // plane lattice, flattened to (x1^2, x1 x2, x2^2)
        let m = im(&[&[1, 0, 0], &[0, 0, 1], &[1, -1, 1]]);
        assert_eq!(RatMatrix::from_int(&m).rank(), 3);
    }

    #[test]
    fn inverse_scaled_matches_rational_inverse() {
        let mut rng = StdRng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.random_range(1..=5);
            let rows: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.random_range(-9..=9)).collect()).collect();
            let m = IntMatrix::from_i64_rows(&rows);
            let rm = RatMatrix::from_int(&m);
            match (m.inverse_scaled(), rm.inverse()) {
                (None, None) => {}
                (Some((d, r)), Some(inv)) => {
                    assert!(!d.is_zero());
                    for i in 0..n {
                        for j in 0..n {
                            let got = Rat::new(r.at(i, j).clone(), d.clone());
                            assert_eq!(&got, inv.at(i, j), "entry ({i},{j}) of {rows:?}");
                        }
                    }
                    checked += 1;
                }
                (a, b) => panic!(
                    "singular disagreement on {rows:?}: scaled={:?} rational={:?}",
                    a.is_some(),
                    b.is_some()
                ),
            }
        }
    }
}
