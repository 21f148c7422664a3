//! Slow, independent re-implementations used only for cross-checking:
//! dense fraction-free rank, formula-level evaluation of every
//! differential, and truncated-series validation of deformations.
//!
//! Everything here favors directness over speed. Cochains are evaluated
//! multilinearly on explicit tensors, exactly as the defining formulas
//! read, with none of the index bookkeeping the production assembly
//! uses; disagreement between the two paths in a test means one of them
//! misreads a formula.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::complexes::{pow, CochainSpace};
use crate::deformation::TruncatedDeformation;
use crate::exactlin::{vec_add, vec_scale, vec_sub, Matrix, Scalar};
use crate::structures::{
    triangle_bimodule, triangle_phi_bimodule, DifferentialBimodule, PhiBimodule,
};

/// Rank by dense fraction-free (Bareiss) elimination over the integers,
/// after clearing denominators row by row.
pub fn dense_rank(m: &Matrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a = vec![vec![BigInt::zero(); cols]; rows];
    for r in 0..rows {
        let mut lcm = BigInt::one();
        for c in 0..cols {
            let d = m.get(r, c);
            if !d.is_zero() {
                lcm = lcm.lcm(d.denom());
            }
        }
        for c in 0..cols {
            let v = m.get(r, c);
            if !v.is_zero() {
                a[r][c] = v.numer() * (&lcm / v.denom());
            }
        }
    }
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                debug_assert!((&num % &prev).is_zero(), "fraction-free step must divide exactly");
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        rank += 1;
        r += 1;
        if r == rows {
            break;
        }
    }
    rank
}

fn decode_word(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut w = vec![0; len];
    for slot in (0..len).rev() {
        w[slot] = idx % base;
        idx /= base;
    }
    w
}

/// Apply the cochain with coefficient matrix `f` (values in a module of
/// dimension `m_dim`, inputs words over `a_dim` letters) to a pure tensor
/// of coordinate vectors, by full multilinear expansion.
fn eval_on_tensors(f: &Matrix, m_dim: usize, a_dim: usize, slots: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = slots.len();
    let mut acc = vec![Scalar::zero(); m_dim];
    for idx in 0..pow(a_dim, n) {
        let w = decode_word(idx, a_dim, n);
        let mut coeff = Scalar::one();
        for (slot, &i) in slots.iter().zip(&w) {
            coeff = &coeff * &slot[i];
            if coeff.is_zero() {
                break;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        for (y, out) in acc.iter_mut().enumerate() {
            let v = f.get(y, idx);
            if !v.is_zero() {
                *out += &coeff * &v;
            }
        }
    }
    acc
}

/// The indicator cochain sending basis word `widx` to `e_{y0}`.
fn basis_cochain(m_dim: usize, words: usize, col: usize) -> Matrix {
    let mut f = Matrix::zero(m_dim, words);
    f.set(col / words, col % words, Scalar::one());
    f
}

/// Scatter an evaluated module vector into the flattened output column.
fn scatter(out: &mut Matrix, words_out: usize, widx: usize, col: usize, val: &[Scalar], row0: usize) {
    for (y, v) in val.iter().enumerate() {
        if !v.is_zero() {
            out.add_to(row0 + y * words_out + widx, col, v.clone());
        }
    }
}

fn hochschild_value(m: &DifferentialBimodule, n: usize, f: &Matrix, w: &[usize]) -> Vec<Scalar> {
    let alg = m.algebra();
    if n == 0 {
        let x = f.column(0);
        let e = alg.basis_vec(w[0]);
        return vec_sub(&m.act_left(&e, &x), &m.act_right(&x, &e));
    }
    let a = alg.dim();
    let slots: Vec<Vec<Scalar>> = w.iter().map(|&i| alg.basis_vec(i)).collect();
    let mut acc = m.act_left(&slots[0], &eval_on_tensors(f, m.dim(), a, &slots[1..]));
    for k in 1..=n {
        let mut mid: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        mid.extend(slots[..k - 1].iter().cloned());
        mid.push(alg.multiply(&slots[k - 1], &slots[k]));
        mid.extend(slots[k + 1..].iter().cloned());
        let term = eval_on_tensors(f, m.dim(), a, &mid);
        acc = if k % 2 == 1 { vec_sub(&acc, &term) } else { vec_add(&acc, &term) };
    }
    let last = m.act_right(&eval_on_tensors(f, m.dim(), a, &slots[..n]), &slots[n]);
    if n % 2 == 0 {
        vec_sub(&acc, &last)
    } else {
        vec_add(&acc, &last)
    }
}

/// The degree-`n` Hochschild differential, one defining-formula
/// evaluation per (basis cochain, basis word) pair.
pub fn hochschild_direct(m: &DifferentialBimodule, n: usize) -> Matrix {
    let a = m.algebra().dim();
    let md = m.dim();
    let (w_in, w_out) = (pow(a, n), pow(a, n + 1));
    let mut out = Matrix::zero(md * w_out, md * w_in);
    for col in 0..md * w_in {
        let f = basis_cochain(md, w_in, col);
        for widx in 0..w_out {
            let w = decode_word(widx, a, n + 1);
            let val = hochschild_value(m, n, &f, &w);
            scatter(&mut out, w_out, widx, col, &val, 0);
        }
    }
    out
}

fn phi_value(m: &DifferentialBimodule, n: usize, f: &Matrix, w: &[usize]) -> Vec<Scalar> {
    let alg = m.algebra();
    let a = alg.dim();
    let lambda = alg.weight();
    let slots: Vec<Vec<Scalar>> = w.iter().map(|&i| alg.basis_vec(i)).collect();
    let mut acc = vec![Scalar::zero(); m.dim()];
    for mask in 1usize..(1 << n) {
        let sub: Vec<Vec<Scalar>> = slots
            .iter()
            .enumerate()
            .map(|(i, s)| if mask >> i & 1 == 1 { alg.d(s) } else { s.clone() })
            .collect();
        let weight = lambda.pow(mask.count_ones() as usize - 1);
        acc = vec_add(&acc, &vec_scale(&weight, &eval_on_tensors(f, m.dim(), a, &sub)));
    }
    vec_sub(&acc, &m.d(&eval_on_tensors(f, m.dim(), a, &slots)))
}

/// The degree-`n` comparison map `Φ` into the twisted complex, by direct
/// evaluation of its defining sum over subsets.
pub fn phi_cap_direct(m: &DifferentialBimodule, n: usize) -> Matrix {
    let a = m.algebra().dim();
    let md = m.dim();
    let words = pow(a, n);
    let mut out = Matrix::zero(md * words, md * words);
    for col in 0..md * words {
        let f = basis_cochain(md, words, col);
        for widx in 0..words {
            let w = decode_word(widx, a, n);
            let val = phi_value(m, n, &f, &w);
            scatter(&mut out, words, widx, col, &val, 0);
        }
    }
    out
}

/// The twisted-complex differential: Hochschild over the twisted actions.
pub fn do_delta_direct(m: &DifferentialBimodule, n: usize) -> Matrix {
    hochschild_direct(&triangle_bimodule(m), n)
}

/// The cone-of-`Φ` differential, assembled from the direct blocks.
pub fn da_delta_direct(m: &DifferentialBimodule, n: usize) -> Matrix {
    let a = m.algebra().dim();
    let md = m.dim();
    let domain = CochainSpace::da(a, md, n);
    let codomain = CochainSpace::da(a, md, n + 1);
    let mut out = Matrix::zero(codomain.total_dim(), domain.total_dim());
    out.embed(&hochschild_direct(m, n), 0, 0);
    let row1 = codomain.block_offset(1);
    out.embed(&phi_cap_direct(m, n).neg(), row1, 0);
    if n > 0 {
        out.embed(&do_delta_direct(m, n - 1).neg(), row1, domain.block_offset(1));
    }
    out
}

/// The morphism-complex differential, each block evaluated from its
/// defining formula.
pub fn morphism_delta_direct(p: &PhiBimodule, n: usize) -> Matrix {
    let (a, b) = (p.morphism().source().dim(), p.morphism().target().dim());
    let (md, nd) = (p.module_m().dim(), p.module_n().dim());
    let domain = CochainSpace::morphism(a, b, md, nd, n);
    let codomain = CochainSpace::morphism(a, b, md, nd, n + 1);
    let mut out = Matrix::zero(codomain.total_dim(), domain.total_dim());
    out.embed(&hochschild_direct(p.module_m(), n), 0, 0);
    let (r1, r2) = (codomain.block_offset(1), codomain.block_offset(2));
    out.embed(&hochschild_direct(p.module_n(), n), r1, domain.block_offset(1));
    // ψ∘f: postcompose each indicator cochain with ψ
    let (aw, bw) = (pow(a, n), pow(b, n));
    for y0 in 0..md {
        for widx in 0..aw {
            let col = y0 * aw + widx;
            let psi_y = p.psi().column(y0);
            scatter(&mut out, aw, widx, col, &psi_y, r2);
        }
    }
    // −g∘φ^{⊗n}: evaluate each indicator cochain on morphism images
    let off1 = domain.block_offset(1);
    for col in 0..nd * bw {
        let g = basis_cochain(nd, bw, col);
        for widx in 0..aw {
            let w = decode_word(widx, a, n);
            let slots: Vec<Vec<Scalar>> =
                w.iter().map(|&i| p.morphism().matrix().column(i)).collect();
            let val = eval_on_tensors(&g, nd, b, &slots);
            for (z, v) in val.iter().enumerate() {
                if !v.is_zero() {
                    out.add_to(r2 + z * aw + widx, off1 + col, -v.clone());
                }
            }
        }
    }
    if n > 0 {
        let pulled = DifferentialBimodule::pullback(p.morphism(), p.module_n())
            .expect("module n is over the morphism target");
        out.embed(&hochschild_direct(&pulled, n - 1).neg(), r2, domain.block_offset(2));
    }
    out
}

/// The comparison map into the twisted morphism complex: blockwise `Φ`.
pub fn pi_direct(p: &PhiBimodule, n: usize) -> Matrix {
    let (a, b) = (p.morphism().source().dim(), p.morphism().target().dim());
    let (md, nd) = (p.module_m().dim(), p.module_n().dim());
    let space = CochainSpace::morphism(a, b, md, nd, n);
    let mut out = Matrix::zero(space.total_dim(), space.total_dim());
    out.embed(&phi_cap_direct(p.module_m(), n), 0, 0);
    let r1 = space.block_offset(1);
    out.embed(&phi_cap_direct(p.module_n(), n), r1, r1);
    if n > 0 {
        let pulled = DifferentialBimodule::pullback(p.morphism(), p.module_n())
            .expect("module n is over the morphism target");
        let r2 = space.block_offset(2);
        out.embed(&phi_cap_direct(&pulled, n - 1), r2, r2);
    }
    out
}

/// The cone differential on the morphism complex, from the direct blocks.
pub fn rho_direct(p: &PhiBimodule, n: usize) -> Matrix {
    let (a, b) = (p.morphism().source().dim(), p.morphism().target().dim());
    let (md, nd) = (p.module_m().dim(), p.module_n().dim());
    let domain = CochainSpace::cone(a, b, md, nd, n);
    let codomain = CochainSpace::cone(a, b, md, nd, n + 1);
    let mut out = Matrix::zero(codomain.total_dim(), domain.total_dim());
    out.embed(&morphism_delta_direct(p, n), 0, 0);
    let pi = pi_direct(p, n);
    let signed = if n % 2 == 0 { pi } else { pi.neg() };
    let row1 = CochainSpace::morphism(a, b, md, nd, n + 1).total_dim();
    out.embed(&signed, row1, 0);
    if n > 0 {
        let tri = triangle_phi_bimodule(p);
        let col1 = CochainSpace::morphism(a, b, md, nd, n).total_dim();
        out.embed(&morphism_delta_direct(&tri, n - 1), row1, col1);
    }
    out
}

fn series_mul(x: &[Matrix], y: &[Matrix], order: usize) -> Vec<Matrix> {
    (0..=order)
        .map(|k| {
            let mut acc: Option<Matrix> = None;
            for i in 0..=k {
                let (Some(xi), Some(yj)) = (x.get(i), y.get(k - i)) else {
                    continue;
                };
                let term = xi.matmul(yj).expect("series factors have compatible shapes");
                acc = Some(match acc {
                    Some(s) => s.add(&term).expect("series coefficients share a shape"),
                    None => term,
                });
            }
            acc.expect("every series has a constant term")
        })
        .collect()
}

fn series_kron(x: &[Matrix], y: &[Matrix], order: usize) -> Vec<Matrix> {
    (0..=order)
        .map(|k| {
            let mut acc: Option<Matrix> = None;
            for i in 0..=k {
                let (Some(xi), Some(yj)) = (x.get(i), y.get(k - i)) else {
                    continue;
                };
                let term = xi.kronecker(yj);
                acc = Some(match acc {
                    Some(s) => s.add(&term).expect("series coefficients share a shape"),
                    None => term,
                });
            }
            acc.expect("every series has a constant term")
        })
        .collect()
}

fn series_eq(x: &[Matrix], y: &[Matrix]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| a == b)
}

fn series_add(x: &[Matrix], y: &[Matrix]) -> Vec<Matrix> {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.add(b).expect("series coefficients share a shape"))
        .collect()
}

/// Check the defining identities of a truncated deformation by direct
/// series arithmetic modulo `t^{order+1}`, with no per-order coefficient
/// extraction.
pub fn deformation_series_valid(t: &TruncatedDeformation) -> bool {
    let order = t.order();
    let a = t.base().source().dim();
    let b = t.base().target().dim();
    let lambda = t.base().source().weight().clone();
    let id_a = [Matrix::identity(a)];
    let id_b = [Matrix::identity(b)];
    let side_ok = |mu: &[Matrix], d: &[Matrix], id: &[Matrix]| {
        let assoc_l = series_mul(mu, &series_kron(mu, id, order), order);
        let assoc_r = series_mul(mu, &series_kron(id, mu, order), order);
        if !series_eq(&assoc_l, &assoc_r) {
            return false;
        }
        let lhs = series_mul(d, mu, order);
        let mut rhs = series_add(
            &series_mul(mu, &series_kron(d, id, order), order),
            &series_mul(mu, &series_kron(id, d, order), order),
        );
        if !lambda.is_zero() {
            let tri = series_mul(mu, &series_kron(d, d, order), order);
            let scaled: Vec<Matrix> = tri.iter().map(|m| m.scale(&lambda)).collect();
            rhs = series_add(&rhs, &scaled);
        }
        series_eq(&lhs, &rhs)
    };
    side_ok(t.mu_a(), t.d_a(), &id_a)
        && side_ok(t.mu_b(), t.d_b(), &id_b)
        && series_eq(
            &series_mul(t.phi(), t.mu_a(), order),
            &series_mul(t.mu_b(), &series_kron(t.phi(), t.phi(), order), order),
        )
        && series_eq(
            &series_mul(t.d_b(), t.phi(), order),
            &series_mul(t.phi(), t.d_a(), order),
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{
        da_delta, hochschild_delta, morphism_delta, phi_cap, pi_map, rho_delta,
    };
    use crate::deformation::{apply_gauge, validate_deformation, GaugePair};
    use crate::exactlin::rank;
    use crate::structures::{DiffAlgebraMorphism, DifferentialAlgebra};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn dual_numbers(weight: Scalar) -> DifferentialAlgebra {
        let z = Scalar::zero;
        let o = Scalar::one;
        let mul = vec![
            vec![vec![o(), z()], vec![z(), o()]],
            vec![vec![z(), o()], vec![z(), z()]],
        ];
        let der = Matrix::from_rows(vec![vec![z(), z()], vec![z(), o()]]).unwrap();
        DifferentialAlgebra::new(2, mul, vec![o(), z()], weight, der).unwrap()
    }

    fn ground_field() -> DifferentialAlgebra {
        DifferentialAlgebra::new(
            1,
            vec![vec![vec![Scalar::one()]]],
            vec![Scalar::one()],
            Scalar::zero(),
            Matrix::zero(1, 1),
        )
        .unwrap()
    }

    fn collapse() -> PhiBimodule {
        let phi = Matrix::from_rows(vec![vec![s(1), s(0)]]).unwrap();
        let m = DiffAlgebraMorphism::new(dual_numbers(Scalar::zero()), ground_field(), phi).unwrap();
        PhiBimodule::self_coefficients(m)
    }

    #[test]
    fn dense_rank_agrees_with_rank() {
        let m = Matrix::from_rows(vec![
            vec![s(1), s(2), s(3)],
            vec![s(2), s(4), s(6)],
            vec![Scalar::new(1, 2), s(0), s(1)],
        ])
        .unwrap();
        assert_eq!(dense_rank(&m), 2);
        assert_eq!(dense_rank(&m), rank(&m));
        assert_eq!(dense_rank(&Matrix::identity(4)), 4);
        assert_eq!(dense_rank(&Matrix::zero(3, 5)), 0);
    }

    #[test]
    fn direct_hochschild_and_phi_match_production() {
        for w in [Scalar::zero(), Scalar::one()] {
            let m = crate::structures::DifferentialBimodule::regular(dual_numbers(w));
            for n in 0..=2 {
                assert_eq!(hochschild_direct(&m, n), hochschild_delta(&m, n).matrix, "degree {n}");
                assert_eq!(phi_cap_direct(&m, n), phi_cap(&m, n), "phi at degree {n}");
                assert_eq!(da_delta_direct(&m, n), da_delta(&m, n).matrix, "cone at degree {n}");
            }
        }
    }

    #[test]
    fn direct_morphism_blocks_match_production() {
        let p = collapse();
        for n in 0..=2 {
            assert_eq!(morphism_delta_direct(&p, n), morphism_delta(&p, n).matrix, "degree {n}");
            assert_eq!(pi_direct(&p, n), pi_map(&p, n), "pi at degree {n}");
            assert_eq!(rho_direct(&p, n), rho_delta(&p, n).matrix, "rho at degree {n}");
        }
    }

    #[test]
    fn series_check_agrees_with_the_validator() {
        let phi = Matrix::from_rows(vec![vec![s(1), s(0)]]).unwrap();
        let base =
            DiffAlgebraMorphism::new(dual_numbers(Scalar::zero()), ground_field(), phi).unwrap();
        let trivial = TruncatedDeformation::trivial(base.clone(), 2);
        let mut fa = Matrix::zero(2, 2);
        fa.set(1, 0, s(3));
        let g = GaugePair::from_layers(
            2,
            1,
            vec![(fa, Matrix::zero(1, 1)), (Matrix::identity(2), Matrix::zero(1, 1))],
        )
        .unwrap();
        let gauged = apply_gauge(&trivial, &g);
        assert!(validate_deformation(&gauged).is_valid());
        assert!(deformation_series_valid(&gauged));

        let mut broken_layer = gauged.layer(1);
        broken_layer.d_a.add_to(0, 0, s(1));
        let broken =
            TruncatedDeformation::from_layers(base, vec![broken_layer, gauged.layer(2)]).unwrap();
        assert!(!validate_deformation(&broken).is_valid());
        assert!(!deformation_series_valid(&broken));
    }
}
