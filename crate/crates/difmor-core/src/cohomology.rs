//! Cohomology of assembled complexes: exact Betti numbers, deterministic
//! representative cocycles, and class-membership decisions.
//!
//! Input is a pair of consecutive [`ComplexSlice`]s. The product of the
//! two matrices is checked to be exactly zero before anything else; a
//! nonzero product is reported as a broken complex rather than silently
//! producing a meaningless quotient.

use alloc::vec::Vec;

use crate::complexes::{Cochain, ComplexSlice};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, rank, solve, vec_sub, Matrix, SpanTracker};

/// Cohomology of one degree: dimensions and a representative basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degree: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub betti: usize,
    /// Kernel-basis vectors independent modulo the coboundaries, chosen
    /// greedily in canonical coordinate order.
    pub representatives: Vec<Cochain>,
}

fn check_consecutive(below: Option<&ComplexSlice>, at: &ComplexSlice) -> Result<()> {
    match below {
        Some(b) => {
            if b.degree + 1 != at.degree {
                return Err(Error::Incompatible {
                    context: "slices are not consecutive degrees",
                });
            }
            if b.matrix.rows() != at.matrix.cols() {
                return Err(Error::Dimension {
                    context: "consecutive slice shapes",
                    expected: at.matrix.cols(),
                    got: b.matrix.rows(),
                });
            }
            let product = at.matrix.matmul(&b.matrix)?;
            if !product.is_zero() {
                return Err(Error::BrokenComplex {
                    lower: b.degree,
                    upper: at.degree,
                });
            }
        }
        None => {
            if at.degree != 0 {
                return Err(Error::Incompatible {
                    context: "missing incoming slice below positive degree",
                });
            }
        }
    }
    Ok(())
}

/// Cohomology at the degree of `at`, with `below` the incoming slice
/// (absent exactly at degree 0). Fails if the two slices do not compose
/// to zero.
pub fn cohomology(below: Option<&ComplexSlice>, at: &ComplexSlice) -> Result<CohomologyReport> {
    check_consecutive(below, at)?;
    let kernel = kernel_basis(&at.matrix);
    let mut span = match below {
        Some(b) => SpanTracker::of_columns(&b.matrix),
        None => SpanTracker::new(at.matrix.cols()),
    };
    let dim_coboundaries = span.dim();
    let mut representatives = Vec::new();
    for v in kernel.basis() {
        if span.grow(v) {
            representatives.push(Cochain::new(at.domain.clone(), v.clone())?);
        }
    }
    let dim_cocycles = kernel.dim();
    let betti = representatives.len();
    debug_assert_eq!(betti, dim_cocycles - dim_coboundaries);
    Ok(CohomologyReport {
        degree: at.degree,
        dim_cocycles,
        dim_coboundaries,
        betti,
        representatives,
    })
}

/// The Betti number alone, via ranks: `dim ker(at) − rank(below)`.
/// Cheaper than [`cohomology`] on large slices (ranks are certified
/// modularly first), but performs no zero-product check and yields no
/// representatives.
pub fn betti_by_rank(below: Option<&Matrix>, at: &Matrix) -> usize {
    let cocycles = at.cols() - rank(at);
    cocycles - below.map_or(0, rank)
}

/// Whether `c` lies in the kernel of the slice at its degree.
pub fn is_cocycle(c: &Cochain, at: &ComplexSlice) -> Result<bool> {
    if c.space != at.domain {
        return Err(Error::Incompatible {
            context: "cochain does not live in the slice domain",
        });
    }
    Ok(at.matrix.mul_vec(&c.coords)?.iter().all(|x| x.is_zero()))
}

/// Whether two cocycles of the same degree differ by a coboundary,
/// decided by an exact solve against `below`. Both inputs are verified to
/// be cocycles of `at` first.
pub fn same_class(
    c1: &Cochain,
    c2: &Cochain,
    below: &ComplexSlice,
    at: &ComplexSlice,
) -> Result<bool> {
    check_consecutive(Some(below), at)?;
    for c in [c1, c2] {
        if !is_cocycle(c, at)? {
            return Err(Error::NotACocycle { degree: at.degree });
        }
    }
    let diff = vec_sub(&c1.coords, &c2.coords);
    Ok(solve(&below.matrix, &diff)?.is_some())
}
