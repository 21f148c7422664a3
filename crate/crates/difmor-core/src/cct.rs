//! Instance-level certification that morphism cohomology agrees with the
//! cohomology of the mapping ring.
//!
//! For a morphism `φ: A → B` with compatible coefficients, the cohomology
//! of the cone complex `CM•(φ,ψ)` is compared degree-by-degree with the
//! operator-and-product cohomology of the mapping ring `φ!` with
//! coefficients in `ψ!`. The certificate records, for each degree up to a
//! bound:
//!
//! * both Betti sequences (exact ranks over the rationals);
//! * that `τ_full` is a chain map between the two complexes, as an exact
//!   matrix identity;
//! * that `Φ∘τ = τ▷∘π` holds exactly (the square tying the comparison
//!   maps together);
//! * that τ sends representative cocycles of the cone complex to cocycles
//!   that stay linearly independent modulo coboundaries on the mapping
//!   ring side.
//!
//! Equal finite dimensions plus an injective induced map certify an
//! isomorphism in every checked degree, without constructing an inverse.
//!
//! The two towers are independent and can be built on separate threads by
//! callers; everything here is pure.

use alloc::vec::Vec;

use crate::cohomology::{betti_by_rank, cohomology};
use crate::complexes::{da_delta, phi_cap, pi_map, rho_delta, tau_full, tau_phi, ComplexSlice};
use crate::error::{Error, Result};
use crate::exactlin::SpanTracker;
use crate::structures::{mapping_module, triangle_phi_bimodule, PhiBimodule};

/// The outcome of one comparison run. `passes` requires equal Betti
/// sequences and all three exactness flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CctCertificate {
    pub max_degree: usize,
    pub betti_mor: Vec<usize>,
    pub betti_da: Vec<usize>,
    pub tau_chain_map_ok: bool,
    pub twisting_square_ok: bool,
    pub tau_induces_injection_ok: bool,
}

impl CctCertificate {
    pub fn passes(&self) -> bool {
        self.betti_mor == self.betti_da
            && self.tau_chain_map_ok
            && self.twisting_square_ok
            && self.tau_induces_injection_ok
    }
}

/// Cone-complex slices `ϱ⁰ … ϱ^max_degree`.
pub fn build_mor_tower(p: &PhiBimodule, max_degree: usize) -> Vec<ComplexSlice> {
    (0..=max_degree).map(|n| rho_delta(p, n)).collect()
}

/// Mapping-ring slices `∂⁰_DA … ∂^max_degree_DA` over `(φ!, ψ!)`.
pub fn build_da_tower(p: &PhiBimodule, max_degree: usize) -> Vec<ComplexSlice> {
    let module = mapping_module(p);
    (0..=max_degree).map(|n| da_delta(&module, n)).collect()
}

/// Certify the comparison from pre-built towers (as produced by
/// [`build_mor_tower`] and [`build_da_tower`] for the same coefficients).
pub fn certify(
    p: &PhiBimodule,
    mor: &[ComplexSlice],
    da: &[ComplexSlice],
) -> Result<CctCertificate> {
    if mor.is_empty() || mor.len() != da.len() {
        return Err(Error::Incompatible {
            context: "towers must be nonempty and of equal length",
        });
    }
    let max_degree = mor.len() - 1;

    // Both towers must actually be complexes; a nonzero product would
    // silently corrupt every number downstream.
    for tower in [mor, da] {
        for n in 0..max_degree {
            if !tower[n + 1].matrix.matmul(&tower[n].matrix)?.is_zero() {
                return Err(Error::BrokenComplex {
                    lower: n,
                    upper: n + 1,
                });
            }
        }
    }

    // Cone-side cohomology, exact, with representatives kept for the
    // injectivity check.
    let mut betti_mor = Vec::with_capacity(max_degree + 1);
    let mut reps = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let below = if n == 0 { None } else { Some(&mor[n - 1]) };
        let report = cohomology(below, &mor[n])?;
        betti_mor.push(report.betti);
        reps.push(report.representatives);
    }

    // Mapping-ring side by ranks only; its slices are larger and no
    // representatives are needed from this side.
    let betti_da: Vec<usize> = (0..=max_degree)
        .map(|n| {
            let below = if n == 0 { None } else { Some(&da[n - 1].matrix) };
            betti_by_rank(below, &da[n].matrix)
        })
        .collect();

    // τ_full intertwines the differentials in every checked degree.
    let taus: Vec<_> = (0..=max_degree + 1).map(|n| tau_full(p, n)).collect();
    let mut tau_chain_map_ok = true;
    for n in 0..=max_degree {
        let lhs = da[n].matrix.matmul(&taus[n])?;
        let rhs = taus[n + 1].matmul(&mor[n].matrix)?;
        if lhs != rhs {
            tau_chain_map_ok = false;
            break;
        }
    }

    // Φ ∘ τ = τ▷ ∘ π on the unshifted summand.
    let module = mapping_module(p);
    let tri = triangle_phi_bimodule(p);
    let mut twisting_square_ok = true;
    for n in 0..=max_degree {
        let lhs = phi_cap(&module, n).matmul(&tau_phi(p, n))?;
        let rhs = tau_phi(&tri, n).matmul(&pi_map(p, n))?;
        if lhs != rhs {
            twisting_square_ok = false;
            break;
        }
    }

    // Images of cone-side representatives stay independent modulo
    // mapping-ring coboundaries.
    let mut tau_induces_injection_ok = true;
    'degrees: for n in 0..=max_degree {
        let mut span = if n == 0 {
            SpanTracker::new(da[0].matrix.cols())
        } else {
            SpanTracker::of_columns(&da[n - 1].matrix)
        };
        for rep in &reps[n] {
            let image = taus[n].mul_vec(&rep.coords)?;
            if !span.grow(&image) {
                tau_induces_injection_ok = false;
                break 'degrees;
            }
        }
    }

    Ok(CctCertificate {
        max_degree,
        betti_mor,
        betti_da,
        tau_chain_map_ok,
        twisting_square_ok,
        tau_induces_injection_ok,
    })
}

/// Build both towers and certify in one call.
pub fn cct_check(p: &PhiBimodule, max_degree: usize) -> Result<CctCertificate> {
    if max_degree == 0 {
        return Err(Error::Incompatible {
            context: "comparison requires max_degree of at least 1",
        });
    }
    let mor = build_mor_tower(p, max_degree);
    let da = build_da_tower(p, max_degree);
    certify(p, &mor, &da)
}
