//! Constructors for the named lattices used as fixtures: root lattices,
//! glue-vector constructions, parametrized block families, and verbatim
//! reference Gram matrices.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LatticeError;
use crate::gram::GramMatrix;
use crate::linalg::{IntMatrix, RatMatrix};
use crate::{Int, Rat};

/// Irreducible root-lattice families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFamily {
    A,
    D,
    E,
}

/// Standard Gram matrix of an irreducible root lattice (minimum 2).
///
/// Valid combinations: `A_n` for n >= 1, `D_n` for n >= 4, `E_n` for
/// n in {6, 7, 8}.
pub fn root_lattice(family: RootFamily, n: usize) -> Result<GramMatrix, LatticeError> {
    match family {
        RootFamily::A => {
            if n < 1 {
                return Err(LatticeError::InvalidInput("A_n needs n >= 1".into()));
            }
            let mut rows = vec![vec![0i64; n]; n];
            for i in 0..n {
                rows[i][i] = 2;
                if i + 1 < n {
                    rows[i][i + 1] = 1;
                    rows[i + 1][i] = 1;
                }
            }
            GramMatrix::from_int_rows(&rows)
        }
        RootFamily::D => {
            if n < 4 {
                return Err(LatticeError::InvalidInput("D_n needs n >= 4".into()));
            }
            // basis e_i - e_{i+1} (i < n) and e_{n-1} + e_n in Z^n
            let mut basis = vec![vec![0i64; n]; n];
            for (i, b) in basis.iter_mut().enumerate().take(n - 1) {
                b[i] = 1;
                b[i + 1] = -1;
            }
            basis[n - 1][n - 2] = 1;
            basis[n - 1][n - 1] = 1;
            let mut rows = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    rows[i][j] = (0..n).map(|k| basis[i][k] * basis[j][k]).sum();
                }
            }
            GramMatrix::from_int_rows(&rows)
        }
        RootFamily::E => {
            // Dynkin diagram: a chain with one extra node on its third vertex
            let edges: &[(usize, usize)] = match n {
                6 => &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)],
                7 => &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)],
                8 => &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)],
                _ => return Err(LatticeError::InvalidInput("E_n needs n in {6,7,8}".into())),
            };
            let mut rows = vec![vec![0i64; n]; n];
            for i in 0..n {
                rows[i][i] = 2;
            }
            for &(i, j) in edges {
                rows[i][j] = -1;
                rows[j][i] = -1;
            }
            GramMatrix::from_int_rows(&rows)
        }
    }
}

/// A lattice generated by a base lattice together with rational glue
/// vectors given in coordinates over the base basis.
#[derive(Debug, Clone)]
pub struct GlueSpec {
    pub base: GramMatrix,
    pub glue_vectors: Vec<Vec<Rat>>,
}

/// Builds the glued lattice `L = L' + sum Z v_j`.
///
/// Returns its Gram matrix in the basis obtained from the Hermite normal
/// form of the scaled generating set (deterministic), together with the
/// index `[L : L']`.
pub fn glue(spec: &GlueSpec) -> Result<(GramMatrix, u64), LatticeError> {
    let n = spec.base.dim();
    for v in &spec.glue_vectors {
        if v.len() != n {
            return Err(LatticeError::InvalidInput(format!(
                "glue vector has {} coordinates, expected {n}",
                v.len()
            )));
        }
    }
    let mut den = Int::one();
    for v in &spec.glue_vectors {
        for e in v {
            den = den.lcm(e.denom());
        }
    }
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(n + spec.glue_vectors.len());
    for v in &spec.glue_vectors {
        rows.push(v.iter().map(|e| e.numer() * (&den / e.denom())).collect());
    }
    for i in 0..n {
        let mut r = vec![Int::zero(); n];
        r[i] = den.clone();
        rows.push(r);
    }
    let h = IntMatrix::from_rows(rows).hnf();
    debug_assert_eq!(h.rows(), n);
    let det_h = h.det_exact()?.abs();
    let den_pow = num_traits::pow::pow(den.clone(), n);
    let index = &den_pow / &det_h;
    debug_assert!((&den_pow % &det_h).is_zero());

    let t = RatMatrix::from_rows(
        (0..n)
            .map(|i| {
                (0..n).map(|j| Rat::new(h.at(i, j).clone(), den.clone())).collect()
            })
            .collect(),
    );
    let gram = GramMatrix::new(t.mul(spec.base.matrix()).mul(&t.transpose()))?;
    let index = index
        .to_u64()
        .ok_or_else(|| LatticeError::InvalidInput("glue index exceeds u64".into()))?;
    Ok((gram, index))
}

/// Parametrized block construction: a unit-diagonal base Gram with constant
/// scalar products `x_b` inside block b and `y_(b,b')` across blocks, glued
/// by `e = (sum c_i e_i) / d` where `c_i` is the 1-based block number of
/// coordinate i (<= m) and 0 outside the support.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    /// Block sizes m_1, ..., m_k; their sum m must satisfy m <= n.
    pub block_sizes: Vec<usize>,
    /// Glue denominator d >= 2.
    pub d: u64,
    /// Ambient dimension.
    pub n: usize,
    /// Intra-block products x_b, one per block (ignored when m_b <= 1).
    pub intra: Vec<Rat>,
    /// Inter-block products y_(b,b'), lexicographic over pairs b < b'.
    pub inter: Vec<Rat>,
    /// Per-pair overrides (i, j, value) on 0-based coordinates i < j.
    pub overrides: Vec<(usize, usize, Rat)>,
}

impl FamilySpec {
    pub fn support(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    fn block_of(&self, i: usize) -> Option<usize> {
        let mut acc = 0;
        for (b, &m) in self.block_sizes.iter().enumerate() {
            acc += m;
            if i < acc {
                return Some(b);
            }
        }
        None
    }

    /// The unit-diagonal base Gram with the prescribed products.
    pub fn base_gram(&self) -> Result<GramMatrix, LatticeError> {
        let k = self.block_sizes.len();
        let m = self.support();
        if m > self.n {
            return Err(LatticeError::InvalidInput(format!(
                "block sizes sum to {m} > dimension {}",
                self.n
            )));
        }
        if self.d < 2 {
            return Err(LatticeError::InvalidInput("family denominator must be >= 2".into()));
        }
        if self.intra.len() != k {
            return Err(LatticeError::InvalidInput(format!(
                "expected {k} intra-block products, got {}",
                self.intra.len()
            )));
        }
        if self.inter.len() != k * (k - 1) / 2 {
            return Err(LatticeError::InvalidInput(format!(
                "expected {} inter-block products, got {}",
                k * (k - 1) / 2,
                self.inter.len()
            )));
        }
        let pair_index = |b: usize, c: usize| {
            // lexicographic rank of (b, c), b < c, among pairs from k blocks
            b * k - b * (b + 1) / 2 + (c - b - 1)
        };
        let mut rows = vec![vec![Rat::zero(); self.n]; self.n];
        for i in 0..self.n {
            rows[i][i] = Rat::one();
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                let v = match (self.block_of(i), self.block_of(j)) {
                    (Some(b), Some(c)) if b == c => self.intra[b].clone(),
                    (Some(b), Some(c)) => self.inter[pair_index(b, c)].clone(),
                    _ => Rat::zero(),
                };
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        for (i, j, v) in &self.overrides {
            let (i, j) = (*i, *j);
            if i >= j || j >= self.n {
                return Err(LatticeError::InvalidInput(format!(
                    "override ({i},{j}) out of range"
                )));
            }
            rows[i][j] = v.clone();
            rows[j][i] = v.clone();
        }
        GramMatrix::new(RatMatrix::from_rows(rows))
    }

    /// The glue vector `(sum c_i e_i) / d`.
    pub fn glue_vector(&self) -> Vec<Rat> {
        let d = Int::from(self.d);
        (0..self.n)
            .map(|i| match self.block_of(i) {
                Some(b) => Rat::new(Int::from(b as u64 + 1), d.clone()),
                None => Rat::zero(),
            })
            .collect()
    }
}

/// Builds the family lattice: the base Gram glued by the family vector.
pub fn build_family(spec: &FamilySpec) -> Result<GramMatrix, LatticeError> {
    let base = spec.base_gram()?;
    let (gram, _) = glue(&GlueSpec { base, glue_vectors: vec![spec.glue_vector()] })?;
    Ok(gram)
}

/// Names accepted by [`named_matrix`].
pub const NAMED_MATRICES: [&str; 6] =
    ["eutactic-path-7", "An11i234", "An15i34", "index5-s9", "M32", "W75"];

/// A reference Gram matrix embedded as data.
///
/// These are transcriptions of fixed matrices and double as regression
/// fixtures; they are integral, primitive, and positive definite.
pub fn named_matrix(name: &str) -> Result<GramMatrix, LatticeError> {
    let rows: Vec<Vec<i64>> = match name {
        "eutactic-path-7" => vec![
            vec![4, 2, 2, -2, -2, -1, -1],
            vec![2, 4, 2, -2, -2, 1, -2],
            vec![2, 2, 4, 0, 0, -1, -2],
            vec![-2, -2, 0, 4, 2, -1, 0],
            vec![-2, -2, 0, 2, 4, 0, 0],
            vec![-1, 1, -1, -1, 0, 4, -1],
            vec![-1, -2, -2, 0, 0, -1, 4],
        ],
        "An11i234" => vec![
            vec![8600, 1756, 1756, 1756, 1756, 2135, 2135, 2135, 2135, 2135, 2135],
            vec![1756, 1440, 160, 160, 160, 412, 412, 412, 412, 412, 412],
            vec![1756, 160, 1440, 160, 160, 412, 412, 412, 412, 412, 412],
            vec![1756, 160, 160, 1440, 160, 412, 412, 412, 412, 412, 412],
            vec![1756, 160, 160, 160, 1440, 412, 412, 412, 412, 412, 412],
            vec![2135, 412, 412, 412, 412, 1440, 360, 360, 360, 360, 360],
            vec![2135, 412, 412, 412, 412, 360, 1440, 360, 360, 360, 360],
            vec![2135, 412, 412, 412, 412, 360, 360, 1440, 360, 360, 360],
            vec![2135, 412, 412, 412, 412, 360, 360, 360, 1440, 360, 360],
            vec![2135, 412, 412, 412, 412, 360, 360, 360, 360, 1440, 360],
            vec![2135, 412, 412, 412, 412, 360, 360, 360, 360, 360, 1440],
        ],
        "An15i34" => {
            let mut rows = Vec::with_capacity(15);
            let mut first = vec![1836i64];
            first.extend(std::iter::repeat_n(816, 8));
            first.extend(std::iter::repeat_n(819, 6));
            rows.push(first);
            for i in 0..8 {
                let mut r = vec![816i64];
                for j in 0..8 {
                    r.push(if i == j { 1728 } else { 192 });
                }
                r.extend(std::iter::repeat_n(364, 6));
                rows.push(r);
            }
            for i in 0..6 {
                let mut r = vec![819i64];
                r.extend(std::iter::repeat_n(364, 8));
                for j in 0..6 {
                    r.push(if i == j { 1728 } else { 144 });
                }
                rows.push(r);
            }
            rows
        }
        "index5-s9" => vec![
            vec![1404, 534, 534, 534, 702, 697, 697, 697],
            vec![534, 1200, 240, 240, 300, 75, 75, 75],
            vec![534, 240, 1200, 240, 300, 75, 75, 75],
            vec![534, 240, 240, 1200, 300, 75, 75, 75],
            vec![702, 300, 300, 300, 1200, 185, 185, 185],
            vec![697, 75, 75, 75, 185, 1200, 150, 150],
            vec![697, 75, 75, 75, 185, 150, 1200, 150],
            vec![697, 75, 75, 75, 185, 150, 150, 1200],
        ],
        "M32" => vec![
            vec![4, 0, 0, 2, 0, 0, 0, 0],
            vec![0, 4, 0, 2, 0, 0, 0, 2],
            vec![0, 0, 4, 2, 0, 2, 0, 0],
            vec![2, 2, 2, 4, 0, 2, 0, 2],
            vec![0, 0, 0, 0, 4, 2, 0, 0],
            vec![0, 0, 2, 2, 2, 4, 0, 2],
            vec![0, 0, 0, 0, 0, 0, 4, 2],
            vec![0, 2, 0, 2, 0, 2, 2, 5],
        ],
        "W75" => vec![
            vec![4, 2, 2, 2, 2, 2, 2, 1],
            vec![2, 4, 0, 0, 0, 2, 0, 2],
            vec![2, 0, 4, 2, 2, 0, 0, 0],
            vec![2, 0, 2, 4, 2, 0, 0, 0],
            vec![2, 0, 2, 2, 4, 0, 0, 0],
            vec![2, 2, 0, 0, 0, 4, 0, 0],
            vec![2, 0, 0, 0, 0, 0, 4, 0],
            vec![1, 2, 0, 0, 0, 0, 0, 4],
        ],
        _ => {
            return Err(LatticeError::UnknownName {
                name: name.to_string(),
                available: NAMED_MATRICES.join(", "),
            })
        }
    };
    GramMatrix::from_int_rows(&rows)
}

/// Resolves `A4` / `D6` / `E7` root names or a fixed matrix name.
pub fn by_name(name: &str) -> Result<GramMatrix, LatticeError> {
    if let Some(rest) = name.strip_prefix('A').or_else(|| name.strip_prefix('a')) {
        if let Ok(n) = rest.parse::<usize>() {
            return root_lattice(RootFamily::A, n);
        }
    }
    if let Some(rest) = name.strip_prefix('D').or_else(|| name.strip_prefix('d')) {
        if let Ok(n) = rest.parse::<usize>() {
            return root_lattice(RootFamily::D, n);
        }
    }
    if let Some(rest) = name.strip_prefix('E').or_else(|| name.strip_prefix('e')) {
        if let Ok(n) = rest.parse::<usize>() {
            return root_lattice(RootFamily::E, n);
        }
    }
    named_matrix(name).map_err(|_| LatticeError::UnknownName {
        name: name.to_string(),
        available: format!("A<n>, D<n>, E6, E7, E8, {}", NAMED_MATRICES.join(", ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minvec::minimal_vectors;

    #[test]
    fn root_lattice_grams() {
        let a2 = root_lattice(RootFamily::A, 2).unwrap();
        assert_eq!(a2, GramMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap());
        // determinants pin down the root systems: n+1, 4, 3, 2, 1
        let det = |g: &GramMatrix| {
            let n = g.dim();
            let rows: Vec<Vec<Int>> =
                (0..n).map(|i| (0..n).map(|j| g.at(i, j).numer().clone()).collect()).collect();
            IntMatrix::from_rows(rows).det_exact().unwrap()
        };
        for n in 1..=8 {
            assert_eq!(det(&root_lattice(RootFamily::A, n).unwrap()), Int::from(n as i64 + 1));
        }
        for n in 4..=8 {
            assert_eq!(det(&root_lattice(RootFamily::D, n).unwrap()), Int::from(4));
        }
        assert_eq!(det(&root_lattice(RootFamily::E, 6).unwrap()), Int::from(3));
        assert_eq!(det(&root_lattice(RootFamily::E, 7).unwrap()), Int::from(2));
        assert_eq!(det(&root_lattice(RootFamily::E, 8).unwrap()), Int::from(1));
        assert!(root_lattice(RootFamily::E, 5).is_err());
        assert!(root_lattice(RootFamily::D, 3).is_err());
    }

    #[test]
    fn root_lattice_kissing_numbers() {
        let s = |fam, n| minimal_vectors(&root_lattice(fam, n).unwrap()).s();
        assert_eq!(s(RootFamily::A, 2), 3);
        assert_eq!(s(RootFamily::A, 4), 10);
        assert_eq!(s(RootFamily::D, 4), 12);
        assert_eq!(s(RootFamily::D, 5), 20);
        assert_eq!(s(RootFamily::E, 6), 36);
        assert_eq!(s(RootFamily::E, 7), 63);
        assert_eq!(s(RootFamily::E, 8), 120);
    }

    #[test]
    fn glue_d4_from_checkerboard() {
        // Z^4 plus the all-halves vector is a scaled D4: index 2, minimum 1,
        // twelve minimal pairs
        let base = GramMatrix::from_int_rows(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        let half = Rat::new(Int::one(), Int::from(2));
        let (gram, index) =
            glue(&GlueSpec { base, glue_vectors: vec![vec![half; 4]] }).unwrap();
        assert_eq!(index, 2);
        let mv = minimal_vectors(&gram);
        assert_eq!(mv.minimum, Rat::one());
        assert_eq!(mv.s(), 12);
    }

    #[test]
    fn glue_integral_vector_is_index_one() {
        let base = GramMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let v = vec![Rat::from_integer(1.into()), Rat::from_integer(1.into())];
        let (gram, index) = glue(&GlueSpec { base: base.clone(), glue_vectors: vec![v] }).unwrap();
        assert_eq!(index, 1);
        // same lattice, possibly in another basis: same minimum and s
        let (a, b) = (minimal_vectors(&base), minimal_vectors(&gram));
        assert_eq!(a.minimum, b.minimum);
        assert_eq!(a.s(), b.s());
    }

    #[test]
    fn family_base_and_vector() {
        let fifth = Rat::new(Int::one(), Int::from(5));
        let spec = FamilySpec {
            block_sizes: vec![5, 2],
            d: 4,
            n: 7,
            intra: vec![fifth.clone(), Rat::zero()],
            inter: vec![Rat::zero()],
            overrides: vec![],
        };
        let base = spec.base_gram().unwrap();
        for i in 0..7 {
            assert!(base.at(i, i).is_one());
        }
        assert_eq!(base.at(0, 4), &fifth);
        assert_eq!(base.at(0, 5), &Rat::zero());
        assert_eq!(base.at(5, 6), &Rat::zero());
        let v = spec.glue_vector();
        let q = Rat::new(Int::one(), Int::from(4));
        assert_eq!(v[0], q);
        assert_eq!(v[5], &q * Rat::from_integer(2.into()));
        let gram = build_family(&spec).unwrap();
        assert_eq!(gram.dim(), 7);
    }

    #[test]
    fn family_rejects_bad_shapes() {
        let spec = FamilySpec {
            block_sizes: vec![5, 4],
            d: 4,
            n: 7,
            intra: vec![Rat::zero(), Rat::zero()],
            inter: vec![Rat::zero()],
            overrides: vec![],
        };
        assert!(matches!(spec.base_gram(), Err(LatticeError::InvalidInput(_))));
        // indefinite base: x too negative
        let spec = FamilySpec {
            block_sizes: vec![3],
            d: 2,
            n: 3,
            intra: vec![Rat::new((-3).into(), 4.into())],
            inter: vec![],
            overrides: vec![],
        };
        assert!(matches!(spec.base_gram(), Err(LatticeError::NotPositiveDefinite { .. })));
    }

    #[test]
    fn named_matrices_are_integral_primitive_positive() {
        for name in NAMED_MATRICES {
            let g = named_matrix(name).unwrap();
            let (scaled, lambda) = g.scale_to_integral();
            assert!(lambda.is_one(), "{name} should already be integral and primitive");
            assert_eq!(scaled, g);
        }
        assert!(matches!(named_matrix("nope"), Err(LatticeError::UnknownName { .. })));
    }

    #[test]
    fn by_name_resolves_roots_and_fixtures() {
        assert_eq!(by_name("A2").unwrap(), root_lattice(RootFamily::A, 2).unwrap());
        assert_eq!(by_name("d5").unwrap(), root_lattice(RootFamily::D, 5).unwrap());
        assert_eq!(by_name("W75").unwrap(), named_matrix("W75").unwrap());
        assert!(by_name("Q9").is_err());
    }
}
