//! The index-system engine.
//!
//! Enumerates every n-element subset of the minimal vectors whose span has
//! full rank, classifies each quotient L/L' through its invariant factors,
//! and assembles the index system with occurrence counts and the maximal
//! index.
//!
//! The scan is a DFS over sorted vector indices with incremental
//! fraction-free elimination: a prefix whose new row reduces to zero can
//! never complete to a basis and is abandoned, as is a prefix with fewer
//! remaining candidates than missing rows. Work is partitioned over the
//! first one or two subset positions and merged additively, so the report
//! is identical for every thread count.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::abelian::AbelianType;
use crate::error::LatticeError;
use crate::gram::GramMatrix;
use crate::linalg::{snf_diagonal, IntMatrix};
use crate::minvec::{minimal_vectors, MinimalVectorSet};
use crate::{binomial, Int, Rat};

/// Default cap on the number of n-subsets a single request may visit.
/// The scan refuses to start when C(s, n) exceeds the budget.
pub const DEFAULT_BUDGET: u64 = 20_000_000_000;

/// Knobs for [`index_system`] and [`max_index_only`].
#[derive(Debug, Clone)]
pub struct IndexSystemOptions {
    /// Populate per-type occurrence counts in the report.
    pub want_counts: bool,
    /// Worker threads; 0 means "use all cores".
    pub threads: usize,
    /// Subset-visit cap; requests with C(s, n) above this fail loudly.
    pub budget: u64,
}

impl Default for IndexSystemOptions {
    fn default() -> Self {
        IndexSystemOptions { want_counts: false, threads: 0, budget: DEFAULT_BUDGET }
    }
}

/// Result of an index-system scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSystemReport {
    /// Lattice dimension.
    pub n: usize,
    /// Number of antipodal pairs of minimal vectors.
    pub s: usize,
    /// The lattice minimum.
    pub minimum: Rat,
    /// The index system: every quotient type that occurs, sorted by order
    /// then canonical string.
    pub system: Vec<AbelianType>,
    /// Bases realizing each type; populated only when counts were requested.
    pub counts: Option<BTreeMap<AbelianType, u64>>,
    /// The maximal index over all minimal-vector bases.
    pub max_index: u64,
    /// Number of n-subsets with nonzero determinant.
    pub bases_full_rank: u64,
    /// Total number of n-subsets of the minimal vectors, C(s, n).
    pub subsets_examined: u64,
}

impl IndexSystemReport {
    /// Checks the maximal index against floor(gamma_n^(n/2)).
    ///
    /// Uses gamma_n^n in {1, 4/3, 2, 4, 8, 64/3, 64, 256} for n = 1..=8;
    /// larger dimensions are not covered by the table.
    pub fn hermite_bound_check(&self) -> Result<bool, LatticeError> {
        Ok(self.max_index <= hermite_index_bound(self.n)?)
    }
}

/// floor(gamma_n^(n/2)) for n = 1..=8.
pub fn hermite_index_bound(n: usize) -> Result<u64, LatticeError> {
    const GAMMA_POW_N: [(u64, u64); 8] =
        [(1, 1), (4, 3), (2, 1), (4, 1), (8, 1), (64, 3), (64, 1), (256, 1)];
    if n == 0 || n > 8 {
        return Err(LatticeError::UnsupportedDimension { n });
    }
    let (num, den) = GAMMA_POW_N[n - 1];
    let mut m = 0u64;
    while (m + 1) * (m + 1) * den <= num {
        m += 1;
    }
    Ok(m)
}

/// Computes the index system of a well-rounded lattice.
pub fn index_system(
    g: &GramMatrix,
    opts: &IndexSystemOptions,
) -> Result<IndexSystemReport, LatticeError> {
    let mv = minimal_vectors(g);
    index_system_of_vectors(g.dim(), &mv, opts)
}

/// Like [`index_system`], reusing an already computed minimal-vector set.
pub fn index_system_of_vectors(
    n: usize,
    mv: &MinimalVectorSet,
    opts: &IndexSystemOptions,
) -> Result<IndexSystemReport, LatticeError> {
    let acc = scan(n, mv, opts, Mode::Classify)?;
    let mut counts: BTreeMap<AbelianType, u64> = BTreeMap::new();
    if acc.trivial > 0 {
        counts.insert(AbelianType::trivial(), acc.trivial);
    }
    for (factors, c) in acc.types {
        counts.insert(AbelianType::from_invariant_factors(factors), c);
    }
    let system: Vec<AbelianType> = counts.keys().cloned().collect();
    let max_index = system
        .iter()
        .map(|t| t.order_u64().expect("index exceeds u64"))
        .max()
        .unwrap_or(1);
    let bases_full_rank = counts.values().sum();
    Ok(IndexSystemReport {
        n,
        s: mv.s(),
        minimum: mv.minimum.clone(),
        system,
        counts: if opts.want_counts { Some(counts) } else { None },
        max_index,
        bases_full_rank,
        subsets_examined: binomial(mv.s() as u64, n as u64) as u64,
    })
}

/// Maximal index alone: the same full scan, skipping quotient typing.
pub fn max_index_only(g: &GramMatrix, opts: &IndexSystemOptions) -> Result<u64, LatticeError> {
    let mv = minimal_vectors(g);
    let acc = scan(g.dim(), &mv, opts, Mode::MaxOnly)?;
    Ok(acc.max_det.max(if acc.trivial > 0 { 1 } else { 0 }))
}

/// Index and quotient type of the sublattice spanned by the chosen minimal
/// vectors (indices into the sorted vector list).
pub fn quotient_of(
    g: &GramMatrix,
    subset: &[usize],
) -> Result<(u64, AbelianType), LatticeError> {
    let mv = minimal_vectors(g);
    quotient_of_vectors(g.dim(), &mv, subset)
}

/// [`quotient_of`] against a precomputed minimal-vector set.
pub fn quotient_of_vectors(
    n: usize,
    mv: &MinimalVectorSet,
    subset: &[usize],
) -> Result<(u64, AbelianType), LatticeError> {
    let m = subset_matrix(n, mv, subset)?;
    let det = m.det_exact()?;
    if det.is_zero() {
        return Err(LatticeError::NotABasis);
    }
    let t = m.snf_invariant_factors();
    let index = t
        .order_u64()
        .ok_or_else(|| LatticeError::InvalidInput("index exceeds u64".into()))?;
    Ok((index, t))
}

/// Validates subset indices and extracts their coordinate matrix.
pub(crate) fn subset_matrix(
    n: usize,
    mv: &MinimalVectorSet,
    subset: &[usize],
) -> Result<IntMatrix, LatticeError> {
    if subset.len() != n {
        return Err(LatticeError::InvalidInput(format!(
            "subset has {} indices, expected {n}",
            subset.len()
        )));
    }
    let mut seen = vec![false; mv.s()];
    for &i in subset {
        if i >= mv.s() {
            return Err(LatticeError::InvalidInput(format!(
                "vector index {i} out of range (s = {})",
                mv.s()
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(LatticeError::InvalidInput(format!("duplicate vector index {i}")));
        }
    }
    let rows: Vec<Vec<i64>> = subset.iter().map(|&i| mv.vectors[i].clone()).collect();
    Ok(IntMatrix::from_i64_rows(&rows))
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Classify,
    MaxOnly,
}

/// Additive accumulator; merging is commutative, so parallel partitioning
/// cannot change the final report.
#[derive(Default, Clone)]
struct Accum {
    trivial: u64,
    types: BTreeMap<Vec<Int>, u64>,
    max_det: u64,
}

impl Accum {
    fn merge(mut self, other: Accum) -> Accum {
        self.trivial += other.trivial;
        for (k, v) in other.types {
            *self.types.entry(k).or_insert(0) += v;
        }
        self.max_det = self.max_det.max(other.max_det);
        self
    }
}

fn scan(
    n: usize,
    mv: &MinimalVectorSet,
    opts: &IndexSystemOptions,
    mode: Mode,
) -> Result<Accum, LatticeError> {
    let s = mv.s();
    let rank = mv.coordinate_matrix().rank();
    if rank < n {
        return Err(LatticeError::NotWellRounded { rank, n });
    }
    let total = binomial(s as u64, n as u64);
    if total > opts.budget as u128 {
        return Err(LatticeError::BudgetExceeded { s, n, subsets: total, budget: opts.budget });
    }

    let run = || {
        if fits_i128(n, &mv.vectors) {
            scan_typed::<i128>(n, &mv.vectors, mode)
        } else {
            scan_typed::<Int>(n, &mv.vectors, mode)
        }
    };
    if opts.threads == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| LatticeError::InvalidInput(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

/// All intermediate values of the fraction-free elimination are minors of
/// the coordinate matrix, so Hadamard's bound certifies that i128 cannot
/// overflow; otherwise the scan falls back to big integers.
pub(crate) fn fits_i128(n: usize, coords: &[Vec<i64>]) -> bool {
    let maxabs = coords.iter().flatten().map(|&v| v.unsigned_abs()).max().unwrap_or(0).max(1);
    let log2_entry = (64 - maxabs.leading_zeros() as i32) as f64;
    let log2_bound = (n as f64) * (0.5 * (n as f64).log2() + log2_entry);
    log2_bound < 120.0
}

pub(crate) trait EngineInt:
    Integer + Signed + Clone + Send + Sync + From<i64> + ToPrimitive + Into<Int>
{
}
impl<T> EngineInt for T where
    T: Integer + Signed + Clone + Send + Sync + From<i64> + ToPrimitive + Into<Int>
{
}

/// Incremental fraction-free elimination state for a growing row prefix.
/// `pivots[k]` is the k-th nested pivot minor; `pivots[n]` at a leaf is the
/// determinant of the chosen subset up to sign.
struct Elim<'a, T> {
    n: usize,
    coords: &'a [Vec<i64>],
    rows: Vec<Vec<T>>,
    pivcols: Vec<usize>,
    pivots: Vec<T>,
}

impl<'a, T: EngineInt> Elim<'a, T> {
    fn new(n: usize, coords: &'a [Vec<i64>]) -> Self {
        Elim {
            n,
            coords,
            rows: vec![vec![T::zero(); n]; n],
            pivcols: vec![0; n],
            pivots: (0..=n).map(|_| T::one()).collect(),
        }
    }

    /// Eliminates vector `idx` against the first `k` accepted rows; returns
    /// false (leaving no state behind) when it is linearly dependent.
    fn push_row(&mut self, idx: usize, k: usize) -> bool {
        let mut row: Vec<T> = self.coords[idx].iter().map(|&v| T::from(v)).collect();
        for j in 0..k {
            let factor = std::mem::replace(&mut row[self.pivcols[j]], T::zero());
            for (c, rc) in row.iter_mut().enumerate() {
                if c == self.pivcols[j] {
                    continue;
                }
                let num = if factor.is_zero() {
                    self.pivots[j + 1].clone() * rc.clone()
                } else {
                    self.pivots[j + 1].clone() * rc.clone()
                        - self.rows[j][c].clone() * factor.clone()
                };
                *rc = num / self.pivots[j].clone(); // exact (Sylvester identity)
            }
        }
        let Some(pc) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        self.pivcols[k] = pc;
        self.pivots[k + 1] = row[pc].clone();
        self.rows[k] = row;
        true
    }

    fn det_abs(&self) -> T {
        self.pivots[self.n].abs()
    }
}

struct Dfs<'a, T> {
    elim: Elim<'a, T>,
    s: usize,
    mode: Mode,
    chosen: Vec<usize>,
    trivial: u64,
    // linear map keyed by ascending invariant factors; tiny in practice
    types: Vec<(Vec<u64>, u64)>,
    big_types: BTreeMap<Vec<Int>, u64>,
    max_det: u64,
    max_det_big: Option<Int>,
}

impl<'a, T: EngineInt> Dfs<'a, T> {
    fn new(n: usize, coords: &'a [Vec<i64>], mode: Mode) -> Self {
        Dfs {
            elim: Elim::new(n, coords),
            s: coords.len(),
            mode,
            chosen: Vec::with_capacity(n),
            trivial: 0,
            types: Vec::new(),
            big_types: BTreeMap::new(),
            max_det: 0,
            max_det_big: None,
        }
    }

    fn dfs(&mut self, start: usize) {
        let k = self.chosen.len();
        if k == self.elim.n {
            self.leaf();
            return;
        }
        let last = self.s - (self.elim.n - k);
        for idx in start..=last {
            if self.elim.push_row(idx, k) {
                self.chosen.push(idx);
                self.dfs(idx + 1);
                self.chosen.pop();
            }
        }
    }

    fn leaf(&mut self) {
        let det = self.elim.det_abs();
        if det.is_one() {
            self.trivial += 1;
            return;
        }
        match det.to_u64() {
            Some(d) => {
                self.max_det = self.max_det.max(d);
                if self.mode == Mode::MaxOnly {
                    return;
                }
                let factors = self.classify(d);
                match self.types.iter_mut().find(|(k, _)| *k == factors) {
                    Some((_, c)) => *c += 1,
                    None => self.types.push((factors, 1)),
                }
            }
            None => {
                let d: Int = det.into();
                if self.max_det_big.as_ref().is_none_or(|m| d > *m) {
                    self.max_det_big = Some(d.clone());
                }
                if self.mode == Mode::MaxOnly {
                    return;
                }
                let factors = self.snf_factors_big();
                *self.big_types.entry(factors).or_insert(0) += 1;
            }
        }
    }

    /// Invariant factors (ascending, > 1) of Z^n / <chosen rows>, given the
    /// determinant. Prime-power parts are read off ranks modulo p wherever
    /// that determines the partition uniquely; otherwise a full Smith form
    /// on the subset decides.
    fn classify(&self, det: u64) -> Vec<u64> {
        let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
        let mut rest = det;
        let mut p = 2u64;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0u32;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                match self.prime_part(p, e) {
                    Some(exps) => parts.push((p, exps)),
                    None => return self.snf_factors_small(),
                }
            }
            p += 1;
        }
        if rest > 1 {
            parts.push((rest, vec![1]));
        }
        let width = parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (p, exps) in parts {
            // align the largest exponents with the largest invariant factors
            let pad = width - exps.len();
            for (i, e) in exps.iter().enumerate() {
                factors[pad + i] *= p.pow(*e);
            }
        }
        factors
    }

    /// Exponent partition of the p-part, ascending, when the p-rank pins it
    /// down; `None` when several partitions of e into the observed number
    /// of parts exist.
    fn prime_part(&self, p: u64, e: u32) -> Option<Vec<u32>> {
        if e == 1 {
            return Some(vec![1]);
        }
        let k = self.elim.n - self.rank_mod_p(p);
        debug_assert!(k >= 1 && (k as u32) <= e);
        unique_partition(e, k as u32)
    }

    /// Rank of the chosen subset matrix modulo a prime.
    fn rank_mod_p(&self, p: u64) -> usize {
        let n = self.elim.n;
        let mut a: Vec<Vec<u64>> = self
            .chosen
            .iter()
            .map(|&idx| {
                self.elim.coords[idx].iter().map(|&v| v.rem_euclid(p as i64) as u64).collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..n {
            let Some(piv) = (rank..n).find(|&i| a[i][c] != 0) else { continue };
            a.swap(rank, piv);
            let inv = mod_inverse(a[rank][c], p);
            for i in rank + 1..n {
                if a[i][c] != 0 {
                    let f = a[i][c] * inv % p;
                    for j in c..n {
                        a[i][j] = (a[i][j] + (p - f) * a[rank][j]) % p;
                    }
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    fn subset_int_rows(&self) -> Vec<Vec<Int>> {
        self.chosen
            .iter()
            .map(|&idx| self.elim.coords[idx].iter().map(|&v| Int::from(v)).collect())
            .collect()
    }

    fn snf_factors_small(&self) -> Vec<u64> {
        snf_diagonal(self.subset_int_rows())
            .into_iter()
            .filter_map(|d| d.to_u64())
            .filter(|&d| d > 1)
            .collect()
    }

    fn snf_factors_big(&self) -> Vec<Int> {
        snf_diagonal(self.subset_int_rows())
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }

    fn into_accum(self) -> Accum {
        let mut types = self.big_types;
        for (k, v) in self.types {
            let key: Vec<Int> = k.into_iter().map(Int::from).collect();
            *types.entry(key).or_insert(0) += v;
        }
        let mut max_det = self.max_det;
        if let Some(b) = self.max_det_big {
            max_det = max_det.max(b.to_u64().expect("index exceeds u64"));
        }
        Accum { trivial: self.trivial, types, max_det }
    }
}

/// The single partition of `e` into exactly `k` positive parts, ascending,
/// if it is unique.
fn unique_partition(e: u32, k: u32) -> Option<Vec<u32>> {
    fn count(e: u32, k: u32, min: u32) -> u32 {
        if k == 1 {
            return (e >= min) as u32;
        }
        let mut total = 0;
        let mut first = min;
        while first * k <= e {
            total += count(e - first, k - 1, first);
            if total > 1 {
                return total;
            }
            first += 1;
        }
        total
    }
    fn build(e: u32, k: u32, min: u32, out: &mut Vec<u32>) -> bool {
        if k == 1 {
            out.push(e);
            return true;
        }
        let mut first = min;
        while first * k <= e {
            if count(e - first, k - 1, first) >= 1 {
                out.push(first);
                return build(e - first, k - 1, first, out);
            }
            first += 1;
        }
        false
    }
    if k == 0 || k > e {
        return None;
    }
    if count(e, k, 1) != 1 {
        return None;
    }
    let mut out = Vec::with_capacity(k as usize);
    build(e, k, 1, &mut out);
    Some(out)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a nonzero mod p
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Length-1 or length-2 lexicographic prefixes used to partition the scan.
fn scan_prefixes(n: usize, s: usize) -> Vec<(usize, usize)> {
    let mut prefixes = Vec::new();
    if n == 1 {
        for i in 0..s {
            prefixes.push((i, usize::MAX));
        }
    } else {
        for i in 0..=s - n {
            for j in i + 1..=s - n + 1 {
                prefixes.push((i, j));
            }
        }
    }
    prefixes
}

fn scan_typed<T: EngineInt>(n: usize, coords: &[Vec<i64>], mode: Mode) -> Accum {
    scan_prefixes(n, coords.len())
        .par_iter()
        .fold(
            || Dfs::<T>::new(n, coords, mode),
            |mut ctx, &(i, j)| {
                debug_assert!(ctx.chosen.is_empty());
                if ctx.elim.push_row(i, 0) {
                    ctx.chosen.push(i);
                    if j == usize::MAX {
                        ctx.dfs(i + 1);
                    } else if ctx.elim.push_row(j, 1) {
                        ctx.chosen.push(j);
                        ctx.dfs(j + 1);
                        ctx.chosen.pop();
                    }
                    ctx.chosen.pop();
                }
                ctx
            },
        )
        .map(Dfs::into_accum)
        .reduce(Accum::default, Accum::merge)
}

/// Visits full-rank n-subsets in lexicographic order, single-threaded.
///
/// With `sample_cap = Some(c)`, the walk is limited to a deterministic
/// sample: the cap is split evenly over the first-position prefixes and
/// each prefix contributes its lexicographically first bases. The callback
/// returns false to abort the whole walk.
pub(crate) fn visit_bases(
    n: usize,
    coords: &[Vec<i64>],
    sample_cap: Option<u64>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) {
    if fits_i128(n, coords) {
        visit_bases_typed::<i128>(n, coords, sample_cap, f);
    } else {
        visit_bases_typed::<Int>(n, coords, sample_cap, f);
    }
}

fn visit_bases_typed<T: EngineInt>(
    n: usize,
    coords: &[Vec<i64>],
    sample_cap: Option<u64>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) {
    struct Walk<'a, 'f, T> {
        elim: Elim<'a, T>,
        s: usize,
        chosen: Vec<usize>,
        quota: u64,
        seen_in_prefix: u64,
        stop: bool,
        f: &'f mut dyn FnMut(&[usize]) -> bool,
    }
    impl<T: EngineInt> Walk<'_, '_, T> {
        fn dfs(&mut self, start: usize) {
            if self.stop || self.seen_in_prefix >= self.quota {
                return;
            }
            let k = self.chosen.len();
            if k == self.elim.n {
                self.seen_in_prefix += 1;
                if !(self.f)(&self.chosen) {
                    self.stop = true;
                }
                return;
            }
            let last = self.s - (self.elim.n - k);
            for idx in start..=last {
                if self.stop || self.seen_in_prefix >= self.quota {
                    return;
                }
                if self.elim.push_row(idx, k) {
                    self.chosen.push(idx);
                    self.dfs(idx + 1);
                    self.chosen.pop();
                }
            }
        }
    }

    let s = coords.len();
    let prefix_count = (s + 1 - n).max(1) as u64;
    let quota = match sample_cap {
        Some(c) => (c / prefix_count).max(1),
        None => u64::MAX,
    };
    let mut walk = Walk {
        elim: Elim::<T>::new(n, coords),
        s,
        chosen: Vec::with_capacity(n),
        quota,
        seen_in_prefix: 0,
        stop: false,
        f,
    };
    for i in 0..=s - n {
        walk.seen_in_prefix = 0;
        if walk.elim.push_row(i, 0) {
            walk.chosen.push(i);
            walk.dfs(i + 1);
            walk.chosen.pop();
        }
        if walk.stop {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(g: &GramMatrix, counts: bool) -> IndexSystemReport {
        index_system(g, &IndexSystemOptions { want_counts: counts, ..Default::default() })
            .unwrap()
    }

    fn system_strings(r: &IndexSystemReport) -> Vec<String> {
        r.system.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn identity_lattice() {
        let g = GramMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let r = report(&g, true);
        assert_eq!(system_strings(&r), ["1"]);
        assert_eq!(r.max_index, 1);
        assert_eq!(r.bases_full_rank, 1);
        assert_eq!(r.subsets_examined, 1);
        assert_eq!(r.counts.unwrap()[&AbelianType::trivial()], 1);
    }

    fn a_n(n: usize) -> GramMatrix {
        crate::catalog::root_lattice(crate::catalog::RootFamily::A, n).unwrap()
    }

    fn d_n(n: usize) -> GramMatrix {
        crate::catalog::root_lattice(crate::catalog::RootFamily::D, n).unwrap()
    }

    #[test]
    fn root_a4_is_trivial_system() {
        let r = report(&a_n(4), false);
        assert_eq!(system_strings(&r), ["1"]);
        assert!(r.counts.is_none());
        assert_eq!(r.s, 10);
    }

    #[test]
    fn root_d4_and_d5() {
        let r = report(&d_n(4), false);
        assert_eq!(system_strings(&r), ["1", "2"]);
        assert_eq!(r.max_index, 2);
        assert_eq!(r.s, 12);

        let r = report(&d_n(5), false);
        assert_eq!(system_strings(&r), ["1", "2", "2.2"]);
        assert_eq!(r.max_index, 4);
        assert_eq!(r.s, 20);
    }

    #[test]
    fn not_well_rounded_is_an_error() {
        let g = GramMatrix::from_int_rows(&[vec![1, 0], vec![0, 3]]).unwrap();
        match index_system(&g, &IndexSystemOptions::default()) {
            Err(LatticeError::NotWellRounded { rank: 1, n: 2 }) => {}
            other => panic!("expected NotWellRounded, got {other:?}"),
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = d_n(4);
        let opts = IndexSystemOptions { budget: 10, ..Default::default() };
        match index_system(&g, &opts) {
            Err(LatticeError::BudgetExceeded { s: 12, n: 4, subsets, budget: 10 }) => {
                assert_eq!(subsets, binomial(12, 4));
            }
            other => panic!("expected BudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn quotient_of_identity_basis() {
        let g = GramMatrix::from_int_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let (index, t) = quotient_of(&g, &[0, 1]).unwrap();
        assert_eq!(index, 1);
        assert!(t.is_trivial());
        assert!(matches!(quotient_of(&g, &[0, 0]), Err(LatticeError::InvalidInput(_))));
        assert!(matches!(quotient_of(&g, &[0, 5]), Err(LatticeError::InvalidInput(_))));
    }

    #[test]
    fn quotient_of_d4_frame() {
        let g = d_n(4);
        let mv = minimal_vectors(&g);
        // the frame e1+e2, e1-e2, e3+e4, e3-e4 in the D4 basis used here
        let frame =
            [vec![1i64, 2, 1, 1], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
        let subset: Vec<usize> = frame
            .iter()
            .map(|f| mv.vectors.iter().position(|v| v == f).expect("frame vector not minimal"))
            .collect();
        let (index, t) = quotient_of_vectors(4, &mv, &subset).unwrap();
        assert_eq!(index, 2);
        assert_eq!(t.to_string(), "2");
    }

    #[test]
    fn degenerate_subset_is_not_a_basis() {
        let g3 = a_n(3);
        let mv3 = minimal_vectors(&g3);
        // find a dependent triple x + y = z among the representatives
        let mut dependent = None;
        'outer: for (i, x) in mv3.vectors.iter().enumerate() {
            for (j, y) in mv3.vectors.iter().enumerate().skip(i + 1) {
                let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                for (k, z) in mv3.vectors.iter().enumerate() {
                    if *z == sum {
                        dependent = Some(vec![i, j, k]);
                        break 'outer;
                    }
                }
            }
        }
        let dependent = dependent.expect("A3 has a dependent minimal triple");
        assert!(matches!(
            quotient_of_vectors(3, &mv3, &dependent),
            Err(LatticeError::NotABasis)
        ));
        let _ = g3;
    }

    /// Unpruned oracle: scan all C(s, n) subsets with the generic kernel.
    fn oracle_counts(g: &GramMatrix) -> (BTreeMap<String, u64>, u64) {
        let mv = minimal_vectors(g);
        let n = g.dim();
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut full_rank = 0;
        let mut subset: Vec<usize> = Vec::new();
        fn go(
            mv: &MinimalVectorSet,
            n: usize,
            start: usize,
            subset: &mut Vec<usize>,
            counts: &mut BTreeMap<String, u64>,
            full_rank: &mut u64,
        ) {
            if subset.len() == n {
                let rows: Vec<Vec<i64>> =
                    subset.iter().map(|&i| mv.vectors[i].clone()).collect();
                let m = IntMatrix::from_i64_rows(&rows);
                if !m.det_exact().unwrap().is_zero() {
                    *full_rank += 1;
                    let t = m.snf_invariant_factors();
                    *counts.entry(t.to_string()).or_insert(0) += 1;
                }
                return;
            }
            for idx in start..mv.s() {
                subset.push(idx);
                go(mv, n, idx + 1, subset, counts, full_rank);
                subset.pop();
            }
        }
        go(&mv, n, 0, &mut subset, &mut counts, &mut full_rank);
        (counts, full_rank)
    }

    #[test]
    fn pruned_scan_matches_unpruned_oracle() {
        for g in [a_n(2), a_n(3), a_n(4), d_n(4)] {
            let r = report(&g, true);
            let (oracle, full_rank) = oracle_counts(&g);
            let got: BTreeMap<String, u64> =
                r.counts.unwrap().iter().map(|(k, v)| (k.to_string(), *v)).collect();
            assert_eq!(got, oracle);
            assert_eq!(r.bases_full_rank, full_rank);
        }
    }

    #[test]
    fn max_index_matches_full_report() {
        for g in [a_n(3), d_n(4), d_n(5)] {
            let r = report(&g, false);
            let m = max_index_only(&g, &IndexSystemOptions::default()).unwrap();
            assert_eq!(m, r.max_index);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let g = d_n(5);
        let r1 = index_system(
            &g,
            &IndexSystemOptions { want_counts: true, threads: 1, ..Default::default() },
        )
        .unwrap();
        let r2 = index_system(
            &g,
            &IndexSystemOptions { want_counts: true, threads: 2, ..Default::default() },
        )
        .unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn hermite_bounds_table() {
        let bounds: Vec<u64> = (1..=8).map(|n| hermite_index_bound(n).unwrap()).collect();
        assert_eq!(bounds, [1, 1, 1, 2, 2, 4, 8, 16]);
        assert!(hermite_index_bound(9).is_err());
        assert!(hermite_index_bound(0).is_err());
    }

    #[test]
    fn unique_partition_logic() {
        assert_eq!(unique_partition(1, 1), Some(vec![1]));
        assert_eq!(unique_partition(3, 2), Some(vec![1, 2]));
        assert_eq!(unique_partition(3, 3), Some(vec![1, 1, 1]));
        assert_eq!(unique_partition(4, 2), None); // 1+3 and 2+2
        assert_eq!(unique_partition(4, 3), Some(vec![1, 1, 2]));
        assert_eq!(unique_partition(5, 2), None); // 1+4 and 2+3
        assert_eq!(unique_partition(2, 2), Some(vec![1, 1]));
        assert_eq!(unique_partition(3, 4), None);
    }

    #[test]
    fn classify_detects_non_cyclic_two_groups() {
        // 2Z^2 inside Z^2 has quotient 2.2, not 4
        let mv = MinimalVectorSet {
            minimum: Rat::one(),
            vectors: vec![vec![0, 2], vec![2, 0]],
        };
        let acc =
            scan(2, &mv, &IndexSystemOptions::default(), Mode::Classify).unwrap();
        let keys: Vec<Vec<Int>> = acc.types.keys().cloned().collect();
        assert_eq!(keys, vec![vec![Int::from(2), Int::from(2)]]);
    }

    #[test]
    fn visit_bases_full_and_sampled() {
        let g = d_n(4);
        let mv = minimal_vectors(&g);
        let mut all = Vec::new();
        visit_bases(4, &mv.vectors, None, &mut |subset| {
            all.push(subset.to_vec());
            true
        });
        let r = report(&g, false);
        assert_eq!(all.len() as u64, r.bases_full_rank);
        // lexicographic and duplicate-free
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);

        let mut sampled = Vec::new();
        visit_bases(4, &mv.vectors, Some(20), &mut |subset| {
            sampled.push(subset.to_vec());
            true
        });
        assert!(!sampled.is_empty());
        assert!((sampled.len() as u64) <= 20 + mv.s() as u64);
        for b in &sampled {
            assert!(all.contains(b));
        }
        // aborting early stops the walk
        let mut count = 0;
        visit_bases(4, &mv.vectors, None, &mut |_| {
            count += 1;
            count < 5
        });
        assert_eq!(count, 5);
    }
}
