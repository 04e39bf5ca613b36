//! Gram matrices: validated symmetric positive-definite rational matrices,
//! plus the text format shared with the command line.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::LatticeError;
use crate::linalg::RatMatrix;
use crate::{Int, Rat};

/// Gram matrix of a lattice basis: exact rational, symmetric, positive
/// definite. Defines the lattice up to isometry; the scale carries no
/// meaning for index-system invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    mat: RatMatrix,
}

impl GramMatrix {
    /// Validates symmetry and positive definiteness (every leading
    /// principal minor must be positive; the first failing minor is named).
    pub fn new(mat: RatMatrix) -> Result<Self, LatticeError> {
        if mat.rows() != mat.cols() {
            return Err(LatticeError::NotSquare { rows: mat.rows(), cols: mat.cols() });
        }
        let n = mat.rows();
        for i in 0..n {
            for j in i + 1..n {
                if mat.at(i, j) != mat.at(j, i) {
                    return Err(LatticeError::NotSymmetric {
                        i,
                        j,
                        a: format_rat(mat.at(i, j)),
                        b: format_rat(mat.at(j, i)),
                    });
                }
            }
        }
        // LDL^T pivots: the k-th leading principal minor is d_1 * ... * d_k
        let mut minor = Rat::one();
        let mut diag: Vec<Rat> = Vec::with_capacity(n);
        let mut lower: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = mat.at(i, j).clone();
                for k in 0..j {
                    sum -= &lower[i][k] * &lower[j][k] * &diag[k];
                }
                if j < i {
                    lower[i][j] = if diag[j].is_zero() { Rat::zero() } else { sum / &diag[j] };
                } else {
                    minor *= &sum;
                    if !sum.is_positive() {
                        return Err(LatticeError::NotPositiveDefinite {
                            k: i + 1,
                            value: format_rat(&minor),
                        });
                    }
                    diag.push(sum);
                }
            }
        }
        Ok(GramMatrix { n, mat })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Rat::from_integer(Int::from(x))))
            .collect();
        Self::new(RatMatrix::new(rows.len(), rows.first().map_or(0, Vec::len), data))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.mat
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        self.mat.at(i, j)
    }

    /// Norm `x^T G x` of an integer coordinate vector.
    pub fn norm_int(&self, x: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                if x[j] == 0 {
                    continue;
                }
                acc += self.mat.at(i, j) * Rat::from_integer(Int::from(x[i] * x[j]));
            }
        }
        acc
    }

    /// Norm `x^T G x` of a rational coordinate vector.
    pub fn norm_rat(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if x[j].is_zero() {
                    continue;
                }
                acc += self.mat.at(i, j) * &x[i] * &x[j];
            }
        }
        acc
    }

    /// Inner product `x^T G y` of two rational coordinate vectors.
    pub fn inner_rat(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if y[j].is_zero() {
                    continue;
                }
                acc += self.mat.at(i, j) * &x[i] * &y[j];
            }
        }
        acc
    }

    /// Rescales by the smallest positive rational that makes every entry an
    /// integer with overall gcd 1; returns the scaled matrix and the factor.
    pub fn scale_to_integral(&self) -> (GramMatrix, Rat) {
        let mut lcm = Int::one();
        for i in 0..self.n {
            for j in 0..self.n {
                lcm = lcm.lcm(self.mat.at(i, j).denom());
            }
        }
        let mut content = Int::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.mat.at(i, j);
                content = content.gcd(&(e.numer() * (&lcm / e.denom())));
            }
        }
        if content.is_zero() {
            content = Int::one();
        }
        let lambda = Rat::new(lcm, content);
        let data = (0..self.n * self.n)
            .map(|k| self.mat.at(k / self.n, k % self.n) * &lambda)
            .collect();
        let mat = RatMatrix::new(self.n, self.n, data);
        (GramMatrix { n: self.n, mat }, lambda)
    }

    /// Congruent transform `u G u^T` for an integer matrix `u` (rows act on
    /// basis vectors). Unimodular `u` gives the same lattice in a new basis.
    pub fn transform(&self, u: &crate::linalg::IntMatrix) -> Result<GramMatrix, LatticeError> {
        assert_eq!(u.cols(), self.n);
        let ur = RatMatrix::from_int(u);
        GramMatrix::new(ur.mul(&self.mat).mul(&ur.transpose()))
    }

    /// Scalar multiple `lambda * G`; `lambda` must be positive.
    pub fn scale(&self, lambda: &Rat) -> GramMatrix {
        assert!(lambda.is_positive(), "scale factor must be positive");
        let data = (0..self.n * self.n)
            .map(|k| self.mat.at(k / self.n, k % self.n) * lambda)
            .collect();
        GramMatrix { n: self.n, mat: RatMatrix::new(self.n, self.n, data) }
    }

    /// Exact LDL^T decomposition: returns `(diag, lower)` with `lower` unit
    /// lower triangular and all pivots positive. Cannot fail on a validated
    /// Gram matrix.
    pub(crate) fn ldl(&self) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let n = self.n;
        let mut diag: Vec<Rat> = Vec::with_capacity(n);
        let mut lower: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.mat.at(i, j).clone();
                for k in 0..j {
                    sum -= &lower[i][k] * &lower[j][k] * &diag[k];
                }
                if j < i {
                    lower[i][j] = sum / &diag[j];
                } else {
                    lower[i][i] = Rat::one();
                    diag.push(sum);
                }
            }
        }
        (diag, lower)
    }

    /// Renders the shared text format: first line `n`, then `n` rows of `n`
    /// whitespace-separated entries (integers or `p/q`).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.n.to_string());
        out.push('\n');
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format_rat(self.mat.at(i, j))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the shared text format. `#` starts a comment; blank lines are
    /// skipped. Errors carry a line/entry diagnostic.
    pub fn parse_text(input: &str) -> Result<GramMatrix, LatticeError> {
        let mut n: Option<usize> = None;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for (lineno, raw) in input.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match n {
                None => {
                    let dim: usize = line.parse().map_err(|_| LatticeError::Parse {
                        line: lineno + 1,
                        entry: 1,
                        msg: format!("expected the dimension, found {line:?}"),
                    })?;
                    if dim == 0 {
                        return Err(LatticeError::Parse {
                            line: lineno + 1,
                            entry: 1,
                            msg: "dimension must be positive".into(),
                        });
                    }
                    n = Some(dim);
                }
                Some(dim) => {
                    if rows.len() == dim {
                        return Err(LatticeError::Parse {
                            line: lineno + 1,
                            entry: 1,
                            msg: format!("expected {dim} rows, found extra data"),
                        });
                    }
                    let mut row = Vec::with_capacity(dim);
                    for (k, tok) in line.split_whitespace().enumerate() {
                        let v = parse_rat(tok).map_err(|msg| LatticeError::Parse {
                            line: lineno + 1,
                            entry: k + 1,
                            msg,
                        })?;
                        row.push(v);
                    }
                    if row.len() != dim {
                        return Err(LatticeError::Parse {
                            line: lineno + 1,
                            entry: row.len(),
                            msg: format!("expected {dim} entries, found {}", row.len()),
                        });
                    }
                    rows.push(row);
                }
            }
        }
        let Some(dim) = n else {
            return Err(LatticeError::Parse { line: 1, entry: 1, msg: "empty input".into() });
        };
        if rows.len() != dim {
            return Err(LatticeError::Parse {
                line: input.lines().count(),
                entry: 1,
                msg: format!("expected {dim} rows, found {}", rows.len()),
            });
        }
        GramMatrix::new(RatMatrix::from_rows(rows))
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses an integer or `p/q` fraction.
pub fn parse_rat(tok: &str) -> Result<Rat, String> {
    let parse_int =
        |s: &str| s.parse::<Int>().map_err(|_| format!("malformed entry {s:?}"));
    match tok.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(tok)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(format!("zero denominator in {tok:?}"));
            }
            Ok(Rat::new(num, den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_grams() {
        assert!(GramMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]).is_ok());
        let a2 = GramMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(a2.dim(), 2);
        assert!(GramMatrix::from_int_rows(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1]
        ])
        .is_ok());
    }

    #[test]
    fn rejects_indefinite_with_failing_minor() {
        let err = GramMatrix::from_int_rows(&[vec![1, 2], vec![2, 1]]).unwrap_err();
        match err {
            LatticeError::NotPositiveDefinite { k, value } => {
                assert_eq!(k, 2);
                assert_eq!(value, "-3");
            }
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = RatMatrix::from_rows(vec![
            vec![Rat::from_integer(2.into()), Rat::from_integer(1.into())],
            vec![Rat::from_integer(0.into()), Rat::from_integer(2.into())],
        ]);
        assert!(matches!(GramMatrix::new(m), Err(LatticeError::NotSymmetric { .. })));
    }

    #[test]
    fn scale_to_integral_cases() {
        let g = GramMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let (s, lambda) = g.scale_to_integral();
        assert_eq!(s, g);
        assert!(lambda.is_one());

        let two_i = GramMatrix::from_int_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        let (s, lambda) = two_i.scale_to_integral();
        assert_eq!(s, GramMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]).unwrap());
        assert_eq!(lambda, Rat::new(1.into(), 2.into()));

        // unit diagonal with off-diagonal 7/72 scales by 72 into {72, 7}
        let x = Rat::new(7.into(), 72.into());
        let mut rows = vec![vec![Rat::one(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    rows[i][j] = x.clone();
                }
            }
        }
        let g = GramMatrix::new(RatMatrix::from_rows(rows)).unwrap();
        let (s, lambda) = g.scale_to_integral();
        assert_eq!(lambda, Rat::from_integer(72.into()));
        assert_eq!(s.at(0, 0), &Rat::from_integer(72.into()));
        assert_eq!(s.at(0, 1), &Rat::from_integer(7.into()));
    }

    #[test]
    fn ldl_reconstructs() {
        let g = GramMatrix::from_int_rows(&[vec![4, 2, 1], vec![2, 4, 2], vec![1, 2, 4]]).unwrap();
        let (d, l) = g.ldl();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Rat::zero();
                for k in 0..3 {
                    acc += &l[i][k] * &l[j][k] * &d[k];
                }
                assert_eq!(&acc, g.at(i, j));
            }
        }
    }

    #[test]
    fn text_roundtrip_and_diagnostics() {
        let g = GramMatrix::parse_text("# hexagonal\n2\n1 1/2\n1/2 1\n").unwrap();
        assert_eq!(g.at(0, 1), &Rat::new(1.into(), 2.into()));
        let again = GramMatrix::parse_text(&g.to_text()).unwrap();
        assert_eq!(g, again);

        let err = GramMatrix::parse_text("2\n1 x\n0 1\n").unwrap_err();
        match err {
            LatticeError::Parse { line, entry, .. } => {
                assert_eq!((line, entry), (2, 2));
            }
            e => panic!("unexpected error {e}"),
        }
        assert!(GramMatrix::parse_text("").is_err());
        assert!(GramMatrix::parse_text("2\n1 0\n").is_err());
        assert!(GramMatrix::parse_text("2\n1 0 0\n0 1\n").is_err());
    }

    #[test]
    fn format_rat_renders_integers_bare() {
        assert_eq!(format_rat(&Rat::from_integer(5.into())), "5");
        assert_eq!(format_rat(&Rat::new((-3).into(), 4.into())), "-3/4");
    }
}
