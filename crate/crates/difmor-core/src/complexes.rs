//! Cochain complexes of differential algebras and their morphisms, as
//! explicit sparse matrices.
//!
//! Five complexes are assembled here, all in a fixed flattened basis:
//!
//! * the Hochschild complex `C•(A, M)` of an algebra with bimodule
//!   coefficients ([`hochschild_delta`]);
//! * the twisted-coefficient complex `C•(A, ▷M◁)` ([`do_delta`]), which
//!   controls deformations of the differential operator alone;
//! * the cone of the comparison map `Φ` between them ([`da_delta`]),
//!   controlling simultaneous deformations of product and operator;
//! * the morphism complex `C•(φ, ψ)` of a morphism with coefficients in a
//!   compatible module triple ([`morphism_delta`]);
//! * the cone `CM•(φ, ψ)` of the chain map `π` ([`rho_delta`]), whose
//!   cohomology is the cohomology of the morphism itself.
//!
//! [`tau_phi`] and [`tau_full`] compare the morphism-side complexes with
//! the corresponding complexes over the mapping ring `φ!`.
//!
//! # Degree-0 and sign conventions
//!
//! A cochain of degree `n` is a multilinear map on `n` algebra arguments;
//! at `n = 0` it is an element of the coefficient module. Some published
//! accounts of the cone differentials carry sign slips at low degree that
//! break `d² = 0`; this implementation uses the uniform conventions
//!
//! * `∂_DA(f, g) = (∂f, −∂_DO(g) − Φ(f))` in every degree (no `g` at
//!   degree 0),
//! * `π⁰ = (−d_M, −d_N)` and `πⁿ = (Φⁿ, Φⁿ, Φⁿ⁻¹)` blockwise,
//! * `ϱⁿ(x, y) = (δⁿx, δ▷ⁿ⁻¹y + (−1)ⁿ πⁿx)`, read at `n = 0` as
//!   `ϱ⁰x = (δ⁰x, π⁰x)`,
//! * `τ_full = diag(τ, (−1)ⁿ τ▷)`,
//!
//! under which every complex squares to zero and every comparison map is
//! a chain map, exactly — properties the test suite checks as literal
//! matrix identities.
//!
//! # Basis flattening
//!
//! Coordinates are block-major, then row-major within a block over
//! `(output basis index, input multi-index)`: a cochain value coefficient
//! `f(e_{w_1}, …, e_{w_n})|_{m_y}` sits at index `y·aⁿ + Σ w_i·a^{n−i}`
//! (first argument most significant).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar};
use crate::structures::{
    triangle_bimodule, triangle_phi_bimodule, DifferentialBimodule, PhiBimodule,
};

/// One direct summand of a cochain space: maps from a tensor product of
/// `domain_dims` into a module of dimension `codomain_dim`. Degree-0
/// blocks have an empty domain list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub domain_dims: Vec<usize>,
    pub codomain_dim: usize,
}

impl Block {
    fn new(base: usize, arity: usize, codomain_dim: usize) -> Self {
        Block {
            domain_dims: vec![base; arity],
            codomain_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.codomain_dim * self.domain_dims.iter().product::<usize>()
    }
}

/// A cochain space in some degree of one of the complexes, as an ordered
/// list of blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainSpace {
    degree: usize,
    blocks: Vec<Block>,
}

impl CochainSpace {
    /// `Cⁿ(A, M)`: one block, `n` algebra arguments.
    pub fn algebra(a_dim: usize, m_dim: usize, degree: usize) -> Self {
        CochainSpace {
            degree,
            blocks: vec![Block::new(a_dim, degree, m_dim)],
        }
    }

    /// `Cⁿ_DA(A, M) = Cⁿ(A, M) ⊕ Cⁿ⁻¹(A, M)` (single block at degree 0).
    pub fn da(a_dim: usize, m_dim: usize, degree: usize) -> Self {
        let mut blocks = vec![Block::new(a_dim, degree, m_dim)];
        if degree > 0 {
            blocks.push(Block::new(a_dim, degree - 1, m_dim));
        }
        CochainSpace { degree, blocks }
    }

    /// `Cⁿ(φ, ψ) = Cⁿ(A, M) ⊕ Cⁿ(B, N) ⊕ Cⁿ⁻¹(A, N)` (third block absent
    /// at degree 0).
    pub fn morphism(a_dim: usize, b_dim: usize, m_dim: usize, n_dim: usize, degree: usize) -> Self {
        let mut blocks = vec![
            Block::new(a_dim, degree, m_dim),
            Block::new(b_dim, degree, n_dim),
        ];
        if degree > 0 {
            blocks.push(Block::new(a_dim, degree - 1, n_dim));
        }
        CochainSpace { degree, blocks }
    }

    /// `CMⁿ(φ, ψ) = Cⁿ(φ, ψ) ⊕ Cⁿ⁻¹(φ, ▷ψ◁)` (second summand absent at
    /// degree 0), flattened to up to six blocks.
    pub fn cone(a_dim: usize, b_dim: usize, m_dim: usize, n_dim: usize, degree: usize) -> Self {
        let mut blocks = CochainSpace::morphism(a_dim, b_dim, m_dim, n_dim, degree).blocks;
        if degree > 0 {
            blocks.extend(CochainSpace::morphism(a_dim, b_dim, m_dim, n_dim, degree - 1).blocks);
        }
        CochainSpace { degree, blocks }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    /// Coordinate offset of block `b`.
    pub fn block_offset(&self, b: usize) -> usize {
        self.blocks[..b].iter().map(Block::dim).sum()
    }
}

/// An element of a [`CochainSpace`], as a flat coordinate vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub space: CochainSpace,
    pub coords: Vec<Scalar>,
}

impl Cochain {
    pub fn new(space: CochainSpace, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != space.total_dim() {
            return Err(Error::Dimension {
                context: "cochain coordinate length",
                expected: space.total_dim(),
                got: coords.len(),
            });
        }
        Ok(Cochain { space, coords })
    }

    pub fn zero(space: CochainSpace) -> Self {
        let coords = vec![Scalar::zero(); space.total_dim()];
        Cochain { space, coords }
    }
}

/// One differential of a complex: the matrix from the degree-`n` space to
/// the degree-`n+1` space. Consecutive slices multiply to zero; tests
/// assert this, construction does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexSlice {
    pub degree: usize,
    pub domain: CochainSpace,
    pub codomain: CochainSpace,
    pub matrix: Matrix,
}

pub(crate) fn pow(base: usize, exp: usize) -> usize {
    let mut out = 1;
    for _ in 0..exp {
        out *= base;
    }
    out
}

/// Flat index of a word, first letter most significant.
pub(crate) fn word_index(word: &[usize], base: usize) -> usize {
    word.iter().fold(0, |acc, &w| acc * base + w)
}

/// Advance `word` to the next word in lexicographic order; false at the
/// last word.
fn next_word(word: &mut [usize], base: usize) -> bool {
    for w in word.iter_mut().rev() {
        *w += 1;
        if *w < base {
            return true;
        }
        *w = 0;
    }
    false
}

fn sign(i: usize) -> Scalar {
    if i % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// The Hochschild differential `∂ⁿ: Cⁿ(A, M) → Cⁿ⁺¹(A, M)`:
///
/// `∂f(a_1,…,a_{n+1}) = a_1 f(a_2,…,a_{n+1})
///   + Σᵢ (−1)ⁱ f(…, a_i a_{i+1}, …) + (−1)ⁿ⁺¹ f(a_1,…,a_n) a_{n+1}`.
pub fn hochschild_delta(m: &DifferentialBimodule, n: usize) -> ComplexSlice {
    let a = m.algebra().dim();
    let md = m.dim();
    let domain = CochainSpace::algebra(a, md, n);
    let codomain = CochainSpace::algebra(a, md, n + 1);
    let mut matrix = Matrix::zero(codomain.total_dim(), domain.total_dim());
    let out_words = pow(a, n + 1);
    let mut w0 = vec![0usize; n];
    loop {
        let widx = word_index(&w0, a);
        for y0 in 0..md {
            let col = y0 * pow(a, n) + widx;
            // a_1 · f(a_2, …)
            for j in 0..a {
                let v = j * pow(a, n) + widx;
                for (y, c) in m.basis_left(j, y0).iter().enumerate() {
                    if !c.is_zero() {
                        matrix.add_to(y * out_words + v, col, c.clone());
                    }
                }
            }
            // merged arguments, position i = 1..n
            for i in 1..=n {
                let s = sign(i);
                for p in 0..a {
                    for q in 0..a {
                        let c = &m.algebra().basis_mul(p, q)[w0[i - 1]];
                        if c.is_zero() {
                            continue;
                        }
                        let mut v = 0;
                        for (pos, &w) in w0[..i - 1].iter().enumerate() {
                            let _ = pos;
                            v = v * a + w;
                        }
                        v = (v * a + p) * a + q;
                        for &w in &w0[i..] {
                            v = v * a + w;
                        }
                        matrix.add_to(y0 * out_words + v, col, &s * c);
                    }
                }
            }
            // (−1)ⁿ⁺¹ f(a_1, …, a_n) · a_{n+1}
            let s = sign(n + 1);
            for j in 0..a {
                let v = widx * a + j;
                for (y, c) in m.basis_right(y0, j).iter().enumerate() {
                    if !c.is_zero() {
                        matrix.add_to(y * out_words + v, col, &s * c);
                    }
                }
            }
        }
        if !next_word(&mut w0, a) {
            break;
        }
    }
    ComplexSlice {
        degree: n,
        domain,
        codomain,
        matrix,
    }
}

/// The comparison map `Φⁿ: Cⁿ(A, M) → Cⁿ(A, ▷M◁)` (a square matrix, the
/// twist not changing the underlying space):
///
/// `Φf(a_1,…,a_n) = Σ_{∅≠S⊆{1..n}} λ^{|S|−1} f(… d(a_i) for i∈S …)
///   − d_M(f(a_1,…,a_n))`,
///
/// so `Φ⁰(x) = −d_M(x)`.
pub fn phi_cap(m: &DifferentialBimodule, n: usize) -> Matrix {
    let a = m.algebra().dim();
    let md = m.dim();
    let der_a = m.algebra().der();
    let words = pow(a, n);
    let mut matrix = Matrix::zero(md * words, md * words);
    let mut lambda_pow = vec![Scalar::one()];
    for _ in 1..n.max(1) {
        let last = lambda_pow.last().unwrap().clone();
        lambda_pow.push(&last * m.algebra().weight());
    }
    let mut w0 = vec![0usize; n];
    loop {
        let widx = word_index(&w0, a);
        for y0 in 0..md {
            let col = y0 * words + widx;
            for mask in 1u32..(1u32 << n) {
                let positions: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let weight = lambda_pow[positions.len() - 1].clone();
                // substitute each selected argument by a preimage under d
                let mut v = w0.clone();
                scatter_der_choices(
                    der_a,
                    &positions,
                    0,
                    &mut v,
                    &w0,
                    weight,
                    &mut |word, coef| {
                        matrix.add_to(y0 * words + word_index(word, a), col, coef);
                    },
                );
            }
            // − d_M ∘ f
            for (y, c) in m.der().column(y0).iter().enumerate() {
                if !c.is_zero() {
                    matrix.add_to(y * words + widx, col, -c.clone());
                }
            }
        }
        if !next_word(&mut w0, a) {
            break;
        }
    }
    matrix
}

/// Enumerate words `v` agreeing with `w0` off `positions`, weighting each
/// by `Π der[w0_i][v_i]` over the selected positions.
fn scatter_der_choices(
    der: &Matrix,
    positions: &[usize],
    depth: usize,
    v: &mut Vec<usize>,
    w0: &[usize],
    coef: Scalar,
    emit: &mut impl FnMut(&[usize], Scalar),
) {
    if depth == positions.len() {
        emit(v, coef);
        return;
    }
    let pos = positions[depth];
    // coefficient of e_{w0[pos]} in d(e_j) = der[w0[pos]][j]
    let row = w0[pos];
    let choices: Vec<(usize, Scalar)> = der.row_iter(row).map(|(j, c)| (j, c.clone())).collect();
    for (j, c) in choices {
        v[pos] = j;
        scatter_der_choices(der, positions, depth + 1, v, w0, &coef * &c, emit);
    }
    v[pos] = w0[pos];
}

/// The twisted-coefficient differential: the Hochschild differential of
/// `▷M◁`.
pub fn do_delta(m: &DifferentialBimodule, n: usize) -> ComplexSlice {
    hochschild_delta(&triangle_bimodule(m), n)
}

/// The differential of the cone of `Φ`:
/// `∂_DA(f, g) = (∂f, −∂_DO(g) − Φ(f))` on `Cⁿ(A,M) ⊕ Cⁿ⁻¹(A,▷M◁)`, the
/// `g` summand absent at degree 0.
pub fn da_delta(m: &DifferentialBimodule, n: usize) -> ComplexSlice {
    let a = m.algebra().dim();
    let md = m.dim();
    let domain = CochainSpace::da(a, md, n);
    let codomain = CochainSpace::da(a, md, n + 1);
    let mut matrix = Matrix::zero(codomain.total_dim(), domain.total_dim());
    let alg = hochschild_delta(m, n);
    let phi = phi_cap(m, n);
    let row1 = codomain.block_offset(1);
    matrix.embed(&alg.matrix, 0, 0);
    matrix.embed(&phi.neg(), row1, 0);
    if n > 0 {
        let dor = do_delta(m, n - 1);
        matrix.embed(&dor.matrix.neg(), row1, domain.block_offset(1));
    }
    ComplexSlice {
        degree: n,
        domain,
        codomain,
        matrix,
    }
}

fn kron_power(m: &Matrix, n: usize) -> Matrix {
    let mut out = Matrix::identity(1);
    for _ in 0..n {
        out = out.kronecker(m);
    }
    out
}

/// The morphism-complex differential on `Cⁿ(φ,ψ)`:
///
/// `δ(f, g, h) = (∂f, ∂g, ψ∘f − g∘φ^{⊗n} − ∂h)`,
/// at degree 0 `δ(m, n) = (∂m, ∂n, ψ(m) − n)`.
pub fn morphism_delta(p: &PhiBimodule, n: usize) -> ComplexSlice {
    let (a, b) = (p.morphism().source().dim(), p.morphism().target().dim());
    let (md, nd) = (p.module_m().dim(), p.module_n().dim());
    let domain = CochainSpace::morphism(a, b, md, nd, n);
    let codomain = CochainSpace::morphism(a, b, md, nd, n + 1);
    let mut matrix = Matrix::zero(codomain.total_dim(), domain.total_dim());
    let pulled = DifferentialBimodule::pullback(p.morphism(), p.module_n())
        .expect("module n is over the morphism target");
    let d_m = hochschild_delta(p.module_m(), n);
    let d_n = hochschild_delta(p.module_n(), n);
    let (r1, r2) = (codomain.block_offset(1), codomain.block_offset(2));
    matrix.embed(&d_m.matrix, 0, 0);
    matrix.embed(&d_n.matrix, r1, domain.block_offset(1));
    // third row: ψ∘f − g∘φ^{⊗n} − ∂h
    let post_psi = p.psi().kronecker(&Matrix::identity(pow(a, n)));
    matrix.embed(&post_psi, r2, 0);
    let pre_phi = Matrix::identity(nd).kronecker(&kron_power(p.morphism().matrix(), n).transpose());
    matrix.embed(&pre_phi.neg(), r2, domain.block_offset(1));
    if n > 0 {
        let d_h = hochschild_delta(&pulled, n - 1);
        matrix.embed(&d_h.matrix.neg(), r2, domain.block_offset(2));
    }
    ComplexSlice {
        degree: n,
        domain,
        codomain,
        matrix,
    }
}

/// The chain map `π: C•(φ,ψ) → C•(φ,▷ψ◁)`: blockwise `(Φⁿ, Φⁿ, Φⁿ⁻¹)`,
/// at degree 0 `(−d_M, −d_N)`.
pub fn pi_map(p: &PhiBimodule, n: usize) -> Matrix {
    let (a, b) = (p.morphism().source().dim(), p.morphism().target().dim());
    let (md, nd) = (p.module_m().dim(), p.module_n().dim());
    let space = CochainSpace::morphism(a, b, md, nd, n);
    let mut matrix = Matrix::zero(space.total_dim(), space.total_dim());
    matrix.embed(&phi_cap(p.module_m(), n), 0, 0);
    let r1 = space.block_offset(1);
    matrix.embed(&phi_cap(p.module_n(), n), r1, r1);
    if n > 0 {
        let pulled = DifferentialBimodule::pullback(p.morphism(), p.module_n())
            .expect("module n is over the morphism target");
        let r2 = space.block_offset(2);
        matrix.embed(&phi_cap(&pulled, n - 1), r2, r2);
    }
    matrix
}

/// The cone differential on `CMⁿ(φ,ψ) = Cⁿ(φ,ψ) ⊕ Cⁿ⁻¹(φ,▷ψ◁)`:
///
/// `ϱ(x, y) = (δx, δ▷y + (−1)ⁿ πx)`, read at degree 0 as
/// `ϱ⁰x = (δ⁰x, π⁰x)`.
pub fn rho_delta(p: &PhiBimodule, n: usize) -> ComplexSlice {
    let (a, b) = (p.morphism().source().dim(), p.morphism().target().dim());
    let (md, nd) = (p.module_m().dim(), p.module_n().dim());
    let domain = CochainSpace::cone(a, b, md, nd, n);
    let codomain = CochainSpace::cone(a, b, md, nd, n + 1);
    let mut matrix = Matrix::zero(codomain.total_dim(), domain.total_dim());
    let delta = morphism_delta(p, n);
    matrix.embed(&delta.matrix, 0, 0);
    let pi = pi_map(p, n);
    let row1 = CochainSpace::morphism(a, b, md, nd, n + 1).total_dim();
    let signed_pi = if n % 2 == 0 { pi } else { pi.neg() };
    matrix.embed(&signed_pi, row1, 0);
    if n > 0 {
        let tri = triangle_phi_bimodule(p);
        let delta_tri = morphism_delta(&tri, n - 1);
        let col1 = CochainSpace::morphism(a, b, md, nd, n).total_dim();
        matrix.embed(&delta_tri.matrix, row1, col1);
    }
    ComplexSlice {
        degree: n,
        domain,
        codomain,
        matrix,
    }
}

/// The comparison map `τⁿ: Cⁿ(φ,ψ) → Cⁿ(φ!, ψ!)` into the Hochschild
/// complex of the mapping ring.
///
/// A basis tensor of `(φ!)^⊗n` is classified by its type word over
/// `{A, B, Bφ}`:
///
/// * all `A`: apply the `f^A` component verbatim;
/// * all `B`: apply `f^B`;
/// * `(Bφ, A, …, A)`: `f ↦ f^B(b, φa_2, …, φa_n)φ + b·f^{AB}(a_2, …, a_n)φ`;
/// * `(B, …, B, Bφ, A, …, A)` with the `Bφ` in slot `r ≥ 2`:
///   `f ↦ f^B(b_1, …, b_r, φa_{r+1}, …, φa_n)φ`;
/// * anything else maps to 0.
///
/// At degree 0, `τ⁰(m, n) = m + n ∈ ψ!`.
pub fn tau_phi(p: &PhiBimodule, n: usize) -> Matrix {
    let (a, b) = (p.morphism().source().dim(), p.morphism().target().dim());
    let (md, nd) = (p.module_m().dim(), p.module_n().dim());
    let ring_dim = a + 2 * b;
    let mod_dim = md + 2 * nd;
    let domain = CochainSpace::morphism(a, b, md, nd, n);
    let out_words = pow(ring_dim, n);
    let mut matrix = Matrix::zero(mod_dim * out_words, domain.total_dim());
    if n == 0 {
        for y in 0..md {
            matrix.set(y, y, Scalar::one());
        }
        for z in 0..nd {
            matrix.set(md + z, md + z, Scalar::one());
        }
        return matrix;
    }
    let off_b = domain.block_offset(1);
    let off_ab = domain.block_offset(2);
    let phi = p.morphism().matrix();
    let mut u = vec![0usize; n];
    loop {
        let uidx = word_index(&u, ring_dim);
        // classify the type word
        if u.iter().all(|&x| x < a) {
            // all A → f^A
            let widx = word_index(&u, a);
            for y in 0..md {
                matrix.set(y * out_words + uidx, y * pow(a, n) + widx, Scalar::one());
            }
        } else if u.iter().all(|&x| x >= a && x < a + b) {
            // all B → f^B
            let w: Vec<usize> = u.iter().map(|&x| x - a).collect();
            let widx = word_index(&w, b);
            for z in 0..nd {
                matrix.set(
                    (md + z) * out_words + uidx,
                    off_b + z * pow(b, n) + widx,
                    Scalar::one(),
                );
            }
        } else if let Some(r) = classify_slot(&u, a, b) {
            let beta = u[r - 1] - (a + b);
            if r == 1 {
                // f^B(b, φa_2, …)φ + b·f^{AB}(a_2, …)φ
                let tail = &u[1..];
                let mut word = vec![beta; n];
                scatter_phi_tail(phi, tail, 1, &mut word, Scalar::one(), &mut |w, coef| {
                    let widx = word_index(w, b);
                    for z in 0..nd {
                        matrix.add_to(
                            (md + nd + z) * out_words + uidx,
                            off_b + z * pow(b, n) + widx,
                            coef.clone(),
                        );
                    }
                });
                let widx = word_index(tail, a);
                for z0 in 0..nd {
                    for (z, c) in p.module_n().basis_left(beta, z0).iter().enumerate() {
                        if !c.is_zero() {
                            matrix.add_to(
                                (md + nd + z) * out_words + uidx,
                                off_ab + z0 * pow(a, n - 1) + widx,
                                c.clone(),
                            );
                        }
                    }
                }
            } else {
                // f^B(b_1, …, b_r, φa_{r+1}, …)φ
                let mut word: Vec<usize> = (0..n)
                    .map(|i| if i < r - 1 { u[i] - a } else { beta })
                    .collect();
                let tail = &u[r..];
                scatter_phi_tail(phi, tail, r, &mut word, Scalar::one(), &mut |w, coef| {
                    let widx = word_index(w, b);
                    for z in 0..nd {
                        matrix.add_to(
                            (md + nd + z) * out_words + uidx,
                            off_b + z * pow(b, n) + widx,
                            coef.clone(),
                        );
                    }
                });
            }
        }
        if !next_word(&mut u, ring_dim) {
            break;
        }
    }
    matrix
}

/// If `u` is of type `(B^{r−1}, Bφ, A^{n−r})`, return `r` (1-based slot
/// of the `Bφ` letter); otherwise `None`.
fn classify_slot(u: &[usize], a: usize, b: usize) -> Option<usize> {
    let slot = u.iter().position(|&x| x >= a + b)?;
    let head_ok = u[..slot].iter().all(|&x| x >= a && x < a + b);
    let tail_ok = u[slot + 1..].iter().all(|&x| x < a);
    (head_ok && tail_ok).then_some(slot + 1)
}

/// Enumerate `B`-words for the tail slots, weighting by
/// `Π φ[v_i][u_i]` over the expanded arguments.
fn scatter_phi_tail(
    phi: &Matrix,
    tail: &[usize],
    offset: usize,
    word: &mut Vec<usize>,
    coef: Scalar,
    emit: &mut impl FnMut(&[usize], Scalar),
) {
    if tail.is_empty() {
        emit(word, coef);
        return;
    }
    let col = phi.column(tail[0]);
    for (v, c) in col.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        word[offset] = v;
        scatter_phi_tail(phi, &tail[1..], offset + 1, word, &coef * c, emit);
    }
}

/// The full comparison map `CMⁿ(φ,ψ) → Cⁿ_DA(φ!, ψ!)`:
/// `diag(τⁿ, (−1)ⁿ τ▷ⁿ⁻¹)`, using the identification of the twist of the
/// mapping module with the mapping module of the twisted triple.
pub fn tau_full(p: &PhiBimodule, n: usize) -> Matrix {
    let top = tau_phi(p, n);
    if n == 0 {
        return top;
    }
    let tri = triangle_phi_bimodule(p);
    let bottom = tau_phi(&tri, n - 1);
    let bottom = if n % 2 == 0 { bottom } else { bottom.neg() };
    let mut matrix = Matrix::zero(top.rows() + bottom.rows(), top.cols() + bottom.cols());
    matrix.embed(&top, 0, 0);
    matrix.embed(&bottom, top.rows(), top.cols());
    matrix
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{kernel_basis, Matrix, Scalar};
    use crate::structures::{
        mapping_module, mapping_ring, DiffAlgebraMorphism, DifferentialAlgebra,
    };

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

    fn self_dual(weight: Scalar) -> PhiBimodule {
        PhiBimodule::self_coefficients(DiffAlgebraMorphism::identity(dual_numbers(weight)))
    }

    /// 2×2 upper-triangular matrices, basis (E11, E12, E22), d = [E11, −].
    fn upper_triangular() -> DifferentialAlgebra {
        let z = Scalar::zero;
        let o = Scalar::one;
        let e = |k: usize| {
            let mut v = vec![z(), z(), z()];
            v[k] = o();
            v
        };
        let zero = vec![z(), z(), z()];
        let mul = vec![
            vec![e(0), e(1), zero.clone()],
            vec![zero.clone(), zero.clone(), e(1)],
            vec![zero.clone(), zero.clone(), e(2)],
        ];
        let der = Matrix::from_rows(vec![
            vec![z(), z(), z()],
            vec![z(), o(), z()],
            vec![z(), z(), z()],
        ])
        .unwrap();
        DifferentialAlgebra::new(3, mul, vec![o(), z(), o()], Scalar::zero(), der).unwrap()
    }

    fn is_zero_product(above: &ComplexSlice, below: &ComplexSlice) -> bool {
        above.matrix.matmul(&below.matrix).unwrap().is_zero()
    }

    #[test]
    fn word_index_is_lexicographic_first_significant() {
        assert_eq!(word_index(&[1, 0, 2], 3), 11);
        assert_eq!(word_index(&[], 5), 0);
        let mut w = vec![0, 0];
        let mut seen = vec![word_index(&w, 2)];
        while next_word(&mut w, 2) {
            seen.push(word_index(&w, 2));
        }
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn degree_zero_hochschild_is_commutator() {
        // commutative algebra → zero matrix
        let m = DifferentialBimodule::regular(dual_numbers(Scalar::one()));
        assert!(hochschild_delta(&m, 0).matrix.is_zero());
        // upper-triangular: kernel of ∂⁰ is the center, dim 1
        let ut = DifferentialBimodule::regular(upper_triangular());
        assert!(ut.validate().is_valid(), "{}", ut.validate().render());
        let d0 = hochschild_delta(&ut, 0);
        assert_eq!(kernel_basis(&d0.matrix).dim(), 1);
    }

    #[test]
    fn hochschild_squares_to_zero() {
        for alg in [dual_numbers(Scalar::one()), upper_triangular()] {
            let m = DifferentialBimodule::regular(alg);
            for n in 0..3 {
                assert!(is_zero_product(
                    &hochschild_delta(&m, n + 1),
                    &hochschild_delta(&m, n)
                ));
            }
        }
    }

    #[test]
    fn phi_cap_degree_one_matches_formula() {
        // Φ¹(f)(a) = f(da) − d(f(a)) on the dual numbers
        let m = DifferentialBimodule::regular(dual_numbers(Scalar::one()));
        let phi = phi_cap(&m, 1);
        // f = e_{y0=1, w0=1} (f(x) = x, f(1) = 0): Φf(1) = 0 − 0 = 0,
        // Φf(x) = f(x) − d(f(x)) = x − x = 0
        assert!(phi.column(1 * 2 + 1).iter().all(Scalar::is_zero));
        // f = e_{y0=1, w0=0} (f(1) = x): Φf(1) = −d(f(1)) = −x,
        // Φf(x) = f(dx) − d(f(x)) = f(x) = 0; −x at input 1 is (y=1, w=0)
        let col = phi.column(1 * 2 + 0);
        assert_eq!(col, vec![s(0), s(0), s(-1), s(0)]);
        // zero derivations → zero map
        let z = DifferentialBimodule::regular(ground_field());
        assert!(phi_cap(&z, 2).is_zero());
    }

    #[test]
    fn phi_cap_is_a_chain_map_into_the_twisted_complex() {
        for w in [Scalar::zero(), Scalar::one(), Scalar::new(1, 2)] {
            let m = DifferentialBimodule::regular(dual_numbers(w.clone()));
            for n in 0..3 {
                let lhs = do_delta(&m, n).matrix.matmul(&phi_cap(&m, n)).unwrap();
                let rhs = phi_cap(&m, n + 1)
                    .matmul(&hochschild_delta(&m, n).matrix)
                    .unwrap();
                assert_eq!(lhs, rhs, "degree {n} weight {w}");
            }
        }
    }

    #[test]
    fn do_delta_at_weight_zero_is_plain_hochschild() {
        let m = DifferentialBimodule::regular(dual_numbers(Scalar::zero()));
        for n in 0..3 {
            assert_eq!(do_delta(&m, n).matrix, hochschild_delta(&m, n).matrix);
        }
    }

    #[test]
    fn da_delta_squares_to_zero() {
        for w in [Scalar::zero(), Scalar::one()] {
            let m = DifferentialBimodule::regular(dual_numbers(w));
            for n in 0..3 {
                assert!(is_zero_product(&da_delta(&m, n + 1), &da_delta(&m, n)));
            }
        }
        let ut = DifferentialBimodule::regular(upper_triangular());
        for n in 0..3 {
            assert!(is_zero_product(&da_delta(&ut, n + 1), &da_delta(&ut, n)));
        }
    }

    #[test]
    fn morphism_delta_squares_to_zero() {
        for p in [collapse(), self_dual(Scalar::one())] {
            for n in 0..3 {
                assert!(is_zero_product(&morphism_delta(&p, n + 1), &morphism_delta(&p, n)));
            }
        }
    }

    #[test]
    fn degree_zero_morphism_kernel() {
        // collapse fixture: both algebras commutative, so the kernel of δ⁰
        // is {(m, n) : ψ(m) = n}, dim 2.
        let p = collapse();
        let d0 = morphism_delta(&p, 0);
        assert_eq!(kernel_basis(&d0.matrix).dim(), 2);
    }

    #[test]
    fn pi_is_a_chain_map() {
        for p in [collapse(), self_dual(Scalar::one()), self_dual(Scalar::new(1, 2))] {
            let tri = triangle_phi_bimodule(&p);
            for n in 0..3 {
                let lhs = morphism_delta(&tri, n).matrix.matmul(&pi_map(&p, n)).unwrap();
                let rhs = pi_map(&p, n + 1)
                    .matmul(&morphism_delta(&p, n).matrix)
                    .unwrap();
                assert_eq!(lhs, rhs, "degree {n}");
            }
        }
    }

    #[test]
    fn pi_degree_zero_is_minus_the_module_derivations() {
        let p = self_dual(Scalar::one());
        let pi0 = pi_map(&p, 0);
        let mut expect = Matrix::zero(4, 4);
        expect.embed(&p.module_m().der().neg(), 0, 0);
        expect.embed(&p.module_n().der().neg(), 2, 2);
        assert_eq!(pi0, expect);
    }

    #[test]
    fn rho_squares_to_zero() {
        for p in [collapse(), self_dual(Scalar::one()), self_dual(Scalar::new(1, 2))] {
            for n in 0..3 {
                assert!(
                    is_zero_product(&rho_delta(&p, n + 1), &rho_delta(&p, n)),
                    "degree {n}"
                );
            }
        }
    }

    #[test]
    fn twist_of_mapping_module_is_mapping_module_of_twist() {
        for p in [collapse(), self_dual(Scalar::one())] {
            let lhs = triangle_bimodule(&mapping_module(&p));
            let rhs = mapping_module(&triangle_phi_bimodule(&p));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tau_degree_one_bphi_column() {
        // on the collapse fixture: bφ ↦ f^B(b)φ + b·f^{AB}φ
        let p = collapse();
        let tau = tau_phi(&p, 1);
        // φ! basis: 1_A = 0, x = 1, 1_B = 2, 1_Bφ = 3; ψ! the same.
        // column of f^B = id_N (coords offset: block f^B at offset 2·2 = 4)
        // input u = 3 (1_Bφ): output should be (1_N)φ = basis 3 of ψ!.
        let col = tau.column(4);
        assert_eq!(col[3 * 4 + 3], s(1));
        // f^{AB} = 1_N ∈ N: u = 3 ↦ 1_B·1_N φ = basis 3.
        let col = tau.column(5);
        assert_eq!(col[3 * 4 + 3], s(1));
    }

    #[test]
    fn tau_is_a_chain_map() {
        for p in [collapse(), self_dual(Scalar::one())] {
            let ring = mapping_ring(p.morphism());
            assert!(ring.validate().is_valid());
            let module = mapping_module(&p);
            for n in 0..3 {
                let lhs = hochschild_delta(&module, n).matrix.matmul(&tau_phi(&p, n)).unwrap();
                let rhs = tau_phi(&p, n + 1)
                    .matmul(&morphism_delta(&p, n).matrix)
                    .unwrap();
                assert_eq!(lhs, rhs, "degree {n}");
            }
        }
    }

    #[test]
    fn tau_full_is_a_chain_map_to_the_cone() {
        for p in [collapse(), self_dual(Scalar::one()), self_dual(Scalar::new(1, 2))] {
            let module = mapping_module(&p);
            for n in 0..3 {
                let lhs = da_delta(&module, n).matrix.matmul(&tau_full(&p, n)).unwrap();
                let rhs = tau_full(&p, n + 1)
                    .matmul(&rho_delta(&p, n).matrix)
                    .unwrap();
                assert_eq!(lhs, rhs, "degree {n}");
            }
        }
    }

    #[test]
    fn phi_commutes_with_tau() {
        // Φ ∘ τ = τ▷ ∘ π, exactly, in every degree
        for p in [collapse(), self_dual(Scalar::one())] {
            let module = mapping_module(&p);
            let tri = triangle_phi_bimodule(&p);
            for n in 0..3 {
                let lhs = phi_cap(&module, n).matmul(&tau_phi(&p, n)).unwrap();
                let rhs = tau_phi(&tri, n).matmul(&pi_map(&p, n)).unwrap();
                assert_eq!(lhs, rhs, "degree {n}");
            }
        }
    }
}
