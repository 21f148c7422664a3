//! Exact sparse linear algebra over the rationals.
//!
//! The convention throughout the crate: vectors are coordinate columns,
//! matrices act on the left, and all arithmetic is exact. Ranks are
//! computed modulo two random word-size primes and certified by rational
//! elimination whenever the modular answers disagree; kernels, solves and
//! quotients always run in exact rational arithmetic.

mod elim;
mod matrix;
mod modular;
mod scalar;

pub use matrix::Matrix;
pub use scalar::{ParseScalarError, Scalar};

use alloc::vec;
use alloc::vec::Vec;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use elim::{gather_rows, sparsest_first, Echelon, Field, Row};

/// Fixed seed for the prime-selection shuffle, so every run of every binary
/// sees the same prime order. Randomization exists to defeat adversarial
/// rank-dropping inputs, not to vary between runs.
const PRIME_SEED: u64 = 0x5eed_1e55_0b5e_55ed;

/// The rational field, as seen by the elimination engine.
struct Rationals;

impl Field for Rationals {
    type E = Scalar;

    fn is_zero(&self, e: &Scalar) -> bool {
        e.is_zero()
    }

    fn neg(&self, e: &Scalar) -> Scalar {
        -e
    }

    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }

    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }

    fn inv(&self, a: &Scalar) -> Scalar {
        a.recip().expect("inverse of nonzero pivot")
    }
}

static RATIONAL_FIELD: Rationals = Rationals;

/// An incrementally grown span of rational vectors.
///
/// Useful when vectors must be tested against a span in a fixed order and
/// absorbed one at a time — picking coset representatives, checking that a
/// family stays independent modulo a subspace, and similar.
pub struct SpanTracker {
    ambient_dim: usize,
    ech: Echelon<'static, Rationals>,
}

impl SpanTracker {
    /// The empty span inside `Q^ambient_dim`.
    pub fn new(ambient_dim: usize) -> Self {
        SpanTracker {
            ambient_dim,
            ech: Echelon::new(&RATIONAL_FIELD, false),
        }
    }

    /// Span of the columns of a matrix.
    pub fn of_columns(m: &Matrix) -> Self {
        let mut tracker = SpanTracker::new(m.rows());
        let tm = m.transpose();
        for r in 0..tm.rows() {
            let row: Row<Scalar> = tm.row_iter(r).map(|(c, v)| (c, v.clone())).collect();
            if !row.is_empty() {
                let _ = tracker.ech.insert(row);
            }
        }
        tracker
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Absorb `v` into the span; true exactly when `v` was independent of
    /// the vectors absorbed so far.
    pub fn grow(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "span tracker dimension mismatch");
        self.ech.insert(dense_to_row(v)).is_some()
    }

    /// Whether `v` already lies in the span, without absorbing it.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "span tracker dimension mismatch");
        self.ech.reduce(dense_to_row(v)).is_empty()
    }
}

/// A linear subspace of `Q^n`, held as a list of independent basis vectors.
///
/// Constructors enforce independence, so `dim` is always `basis.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    /// The zero subspace of `Q^ambient_dim`.
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// Build from spanning vectors, which must be independent.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        let f = Rationals;
        let mut ech = Echelon::new(&f, false);
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(Error::Dimension {
                    context: "subspace vector length",
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
            if ech.insert(dense_to_row(v)).is_none() {
                return Err(Error::Incompatible {
                    context: "subspace basis vectors are linearly dependent",
                });
            }
        }
        Ok(Subspace {
            ambient_dim,
            basis: vectors,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Does `v` lie in this subspace?
    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::Dimension {
                context: "membership test vector length",
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        let f = Rationals;
        let mut ech = Echelon::new(&f, false);
        for b in &self.basis {
            ech.insert(dense_to_row(b));
        }
        Ok(ech.reduce(dense_to_row(v)).is_empty())
    }
}

fn dense_to_row(v: &[Scalar]) -> Row<Scalar> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn matrix_rows(m: &Matrix) -> Vec<(usize, Row<Scalar>)> {
    gather_rows(m.iter().map(|(r, c, v)| (r, c, v.clone())))
}

/// Rank over the rationals, by exact elimination. Used directly by the
/// fallback path and by callers that already know they need exact data.
fn rational_rank(m: &Matrix) -> usize {
    let f = Rationals;
    let mut rows = matrix_rows(m);
    sparsest_first(&mut rows);
    let mut ech = Echelon::new(&f, false);
    for (_, row) in rows {
        ech.insert(row);
    }
    ech.rank()
}

/// Rank of `m`.
///
/// Fast path: eliminate modulo two pseudo-randomly chosen word-size primes
/// (skipping primes that divide a denominator). Modular rank never exceeds
/// the rational rank, so agreement is accepted; disagreement falls back to
/// exact rational elimination.
pub fn rank(m: &Matrix) -> usize {
    if m.nnz() == 0 {
        return 0;
    }
    let mut rng = SmallRng::seed_from_u64(PRIME_SEED);
    let mut order: Vec<usize> = (0..modular::PRIMES.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut seen: Option<usize> = None;
    for idx in order {
        if let Some(r) = modular::rank_mod(m, modular::PRIMES[idx]) {
            match seen {
                None => seen = Some(r),
                Some(prev) if prev == r => return r,
                Some(_) => return rational_rank(m),
            }
        }
    }
    // Every prime divided some denominator (possible only for contrived
    // inputs): certify rationally.
    rational_rank(m)
}

/// Basis of the null space `{ x : m·x = 0 }`, in reduced echelon
/// normal form, ordered by ascending free column. Deterministic.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let f = Rationals;
    let mut rows = matrix_rows(m);
    sparsest_first(&mut rows);
    let mut ech = Echelon::new(&f, true);
    for (_, row) in rows {
        ech.insert(row);
    }
    let pivot_cols: Vec<usize> = ech.pivot_cols().collect();
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if ech.has_pivot(free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); m.cols()];
        v[free] = Scalar::one();
        for &p in &pivot_cols {
            if let Some(e) = ech.pivot_row_entry(p, free) {
                v[p] = -e;
            }
        }
        basis.push(v);
    }
    Subspace {
        ambient_dim: m.cols(),
        basis,
    }
}

/// One solution of `m·x = b`, or `None` if the system is inconsistent.
/// Free variables are set to zero, so the answer is deterministic.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension {
            context: "right-hand side length",
            expected: m.rows(),
            got: b.len(),
        });
    }
    let aug_col = m.cols();
    let f = Rationals;
    let mut rows = matrix_rows(m);
    // Splice the right-hand side into the augmented column.
    let mut touched = vec![false; m.rows()];
    for (idx, row) in rows.iter_mut() {
        touched[*idx] = true;
        if !b[*idx].is_zero() {
            row.push((aug_col, b[*idx].clone()));
        }
    }
    for (i, t) in touched.iter().enumerate() {
        if !t && !b[i].is_zero() {
            rows.push((i, vec![(aug_col, b[i].clone())]));
        }
    }
    sparsest_first(&mut rows);
    let mut ech = Echelon::new(&f, true);
    for (_, row) in rows {
        ech.insert(row);
    }
    if ech.has_pivot(aug_col) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); m.cols()];
    for p in ech.pivot_cols() {
        if let Some(e) = ech.pivot_row_entry(p, aug_col) {
            x[p] = e.clone();
        }
    }
    Ok(Some(x))
}

/// Basis of the column space of `m`: the columns at which the rank grows,
/// scanned left to right. Deterministic.
pub fn image_basis(m: &Matrix) -> Subspace {
    let f = Rationals;
    let t = m.transpose();
    let mut ech = Echelon::new(&f, false);
    let mut basis = Vec::new();
    for c in 0..m.cols() {
        let col: Row<Scalar> = t.row_iter(c).map(|(r, v)| (r, v.clone())).collect();
        if col.is_empty() {
            continue;
        }
        if ech.insert(col).is_some() {
            basis.push(m.column(c));
        }
    }
    Subspace {
        ambient_dim: m.rows(),
        basis,
    }
}

/// `dim(num / den)` for nested subspaces `den ⊆ num` of the same ambient
/// space. Errors if the ambient dimensions differ or if `den` is not
/// contained in `num`.
pub fn quotient_dim(num: &Subspace, den: &Subspace) -> Result<usize> {
    if num.ambient_dim() != den.ambient_dim() {
        return Err(Error::Dimension {
            context: "quotient ambient dimension",
            expected: num.ambient_dim(),
            got: den.ambient_dim(),
        });
    }
    let f = Rationals;
    let mut ech = Echelon::new(&f, false);
    for b in num.basis() {
        ech.insert(dense_to_row(b));
    }
    for d in den.basis() {
        if !ech.reduce(dense_to_row(d)).is_empty() {
            return Err(Error::NotContained);
        }
    }
    Ok(num.dim() - den.dim())
}

/// `v + w` for dense vectors (used by cochain arithmetic downstream).
pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `v - w` for dense vectors.
pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `k·v` for dense vectors.
pub fn vec_scale(k: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| k * x).collect()
}

/// Keep `axpy` reachable for the oracle's independence: it is not re-used
/// there, but unit tests compare against it.
#[cfg(test)]
pub(crate) fn test_axpy(a: &[Scalar], c: &Scalar, b: &[Scalar]) -> Vec<Scalar> {
    let f = Rationals;
    let row = elim::axpy(&f, &dense_to_row(a), c, &dense_to_row(b));
    let mut out = vec![Scalar::zero(); a.len().max(b.len())];
    for (i, v) in row {
        out[i] = v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d)
    }

    #[test]
    fn axpy_merges_and_cancels() {
        let a = [s(1), s(0), s(2)];
        let b = [s(-1), s(3), s(0)];
        assert_eq!(test_axpy(&a, &s(1), &b), vec![s(0), s(3), s(2)]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::zero(4, 7)), 0);
        assert_eq!(rank(&Matrix::identity(5)), 5);
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![s(1), s(0), s(1)],
        ])
        .unwrap();
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&m.transpose()), 2);
    }

    #[test]
    fn kernel_annihilates() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(3), s(0)],
            vec![s(0), s(1), s(1), s(-1)],
        ])
        .unwrap();
        let ker = kernel_basis(&m);
        assert_eq!(ker.dim(), 2);
        for v in ker.basis() {
            assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        // rank-nullity
        assert_eq!(rank(&m) + ker.dim(), m.cols());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(vec![vec![s(2), s(0)], vec![s(0), s(3)], vec![s(2), s(3)]]).unwrap();
        let x = solve(&m, &[s(4), s(9), s(13)]).unwrap().unwrap();
        assert_eq!(x, vec![s(2), s(3)]);
        assert_eq!(solve(&m, &[s(4), s(9), s(14)]).unwrap(), None);
        assert!(solve(&m, &[s(1)]).is_err());
        // rationals stay exact
        let m2 = Matrix::from_rows(vec![vec![q(1, 3)]]).unwrap();
        assert_eq!(solve(&m2, &[s(1)]).unwrap().unwrap(), vec![s(3)]);
    }

    #[test]
    fn quotient_and_containment() {
        let whole = Subspace::from_vectors(3, vec![vec![s(1), s(0), s(0)], vec![s(0), s(1), s(0)]]).unwrap();
        let line = Subspace::from_vectors(3, vec![vec![s(1), s(1), s(0)]]).unwrap();
        assert_eq!(quotient_dim(&whole, &line).unwrap(), 1);
        let outside = Subspace::from_vectors(3, vec![vec![s(0), s(0), s(1)]]).unwrap();
        assert_eq!(quotient_dim(&whole, &outside), Err(Error::NotContained));
        assert!(Subspace::from_vectors(2, vec![vec![s(1), s(1)], vec![s(2), s(2)]]).is_err());
    }

    #[test]
    fn image_basis_spans_columns() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(0)],
            vec![s(0), s(0), s(1)],
        ])
        .unwrap();
        let im = image_basis(&m);
        assert_eq!(im.dim(), 2);
        // first independent columns: 0 and 2
        assert_eq!(im.basis()[0], vec![s(1), s(0)]);
        assert_eq!(im.basis()[1], vec![s(0), s(1)]);
        for c in 0..m.cols() {
            assert!(im.contains(&m.column(c)).unwrap());
        }
    }
}
