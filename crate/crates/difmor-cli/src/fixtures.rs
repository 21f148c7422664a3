//! The shipped problem instances and the random fixture generator used
//! by `selftest` and the test suite.
//!
//! * `fix1`: the ground field mapped to itself.
//! * `fix2`: dual numbers with `d(x) = x` collapsing onto the ground
//!   field; carries an order-1 deformation seeded with a representative
//!   degree-2 cocycle, which is genuinely obstructed.
//! * `fix3`: the identity on dual numbers at weight 1; carries an
//!   order-2 deformation produced by gauging the trivial one.
//! * `fix4`: upper-triangular 2×2 matrices with the inner operator
//!   `[E₁₁, −]`, projected onto the diagonal algebra.

use rand::Rng;

use difmor_core::complexes::{rho_delta, Cochain};
use difmor_core::deformation::{
    apply_gauge, layer_from_cochain, DeformationLayer, GaugePair, TruncatedDeformation,
};
use difmor_core::exactlin::{kernel_basis, solve, Matrix, Scalar};
use difmor_core::structures::{DiffAlgebraMorphism, DifferentialAlgebra, PhiBimodule};

use crate::problem::{
    matrix_to_rows, AlgebraDesc, DeformationDesc, LayerDesc, MorphismDesc, ProblemFile, Rational,
};

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn ground_field(weight: Scalar) -> DifferentialAlgebra {
    DifferentialAlgebra::new(
        1,
        vec![vec![vec![Scalar::one()]]],
        vec![Scalar::one()],
        weight,
        Matrix::zero(1, 1),
    )
    .unwrap()
}

/// `𝔽[x]/(x²)` with `d(x) = x`, at the given weight.
pub fn dual_numbers(weight: Scalar) -> DifferentialAlgebra {
    let z = Scalar::zero;
    let o = Scalar::one;
    let mul = vec![
        vec![vec![o(), z()], vec![z(), o()]],
        vec![vec![z(), o()], vec![z(), z()]],
    ];
    let der = Matrix::from_rows(vec![vec![z(), z()], vec![z(), o()]]).unwrap();
    DifferentialAlgebra::new(2, mul, vec![o(), z()], weight, der).unwrap()
}

/// Upper-triangular 2×2 matrices, basis `(E₁₁, E₁₂, E₂₂)`, with the
/// weight-0 operator `[E₁₁, −]`.
pub fn upper_triangular() -> DifferentialAlgebra {
    let dim = 3;
    let mut mul = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    // E11·E11 = E11, E11·E12 = E12, E12·E22 = E12, E22·E22 = E22
    mul[0][0][0] = s(1);
    mul[0][1][1] = s(1);
    mul[1][2][1] = s(1);
    mul[2][2][2] = s(1);
    let der = Matrix::from_rows(vec![
        vec![s(0), s(0), s(0)],
        vec![s(0), s(1), s(0)],
        vec![s(0), s(0), s(0)],
    ])
    .unwrap();
    DifferentialAlgebra::new(dim, mul, vec![s(1), s(0), s(1)], Scalar::zero(), der).unwrap()
}

/// Diagonal 2×2 matrices with zero operator.
pub fn diagonal_pair() -> DifferentialAlgebra {
    let mut mul = vec![vec![vec![Scalar::zero(); 2]; 2]; 2];
    mul[0][0][0] = s(1);
    mul[1][1][1] = s(1);
    DifferentialAlgebra::new(2, mul, vec![s(1), s(1)], Scalar::zero(), Matrix::zero(2, 2)).unwrap()
}

pub fn fix1_morphism() -> DiffAlgebraMorphism {
    DiffAlgebraMorphism::identity(ground_field(Scalar::zero()))
}

pub fn fix2_morphism() -> DiffAlgebraMorphism {
    let phi = Matrix::from_rows(vec![vec![s(1), s(0)]]).unwrap();
    DiffAlgebraMorphism::new(dual_numbers(Scalar::zero()), ground_field(Scalar::zero()), phi)
        .unwrap()
}

pub fn fix3_morphism() -> DiffAlgebraMorphism {
    DiffAlgebraMorphism::identity(dual_numbers(Scalar::one()))
}

pub fn fix4_morphism() -> DiffAlgebraMorphism {
    let phi = Matrix::from_rows(vec![vec![s(1), s(0), s(0)], vec![s(0), s(0), s(1)]]).unwrap();
    DiffAlgebraMorphism::new(upper_triangular(), diagonal_pair(), phi).unwrap()
}

fn algebra_desc(a: &DifferentialAlgebra) -> AlgebraDesc {
    let mut mul = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            for (k, c) in a.basis_mul(i, j).iter().enumerate() {
                if !c.is_zero() {
                    mul.push((i, j, k, Rational::from_scalar(c)));
                }
            }
        }
    }
    AlgebraDesc {
        dim: a.dim(),
        mul,
        unit: a.unit().iter().map(Rational::from_scalar).collect(),
        der: matrix_to_rows(a.der()),
    }
}

fn layer_desc(layer: &DeformationLayer) -> LayerDesc {
    LayerDesc {
        mu_a: matrix_to_rows(&layer.mu_a),
        d_a: matrix_to_rows(&layer.d_a),
        mu_b: matrix_to_rows(&layer.mu_b),
        d_b: matrix_to_rows(&layer.d_b),
        phi: matrix_to_rows(&layer.phi),
    }
}

fn deformation_desc(name: &str, t: &TruncatedDeformation) -> DeformationDesc {
    let _ = name;
    DeformationDesc {
        morphism: "phi".to_string(),
        order: t.order(),
        layers: (1..=t.order()).map(|k| layer_desc(&t.layer(k))).collect(),
    }
}

fn problem_for(
    weight: Scalar,
    source_name: &str,
    target_name: &str,
    m: &DiffAlgebraMorphism,
    deformations: Vec<(&str, TruncatedDeformation)>,
) -> ProblemFile {
    let mut algebras = std::collections::BTreeMap::new();
    algebras.insert(source_name.to_string(), algebra_desc(m.source()));
    algebras.insert(target_name.to_string(), algebra_desc(m.target()));
    let mut morphisms = std::collections::BTreeMap::new();
    morphisms.insert(
        "phi".to_string(),
        MorphismDesc {
            source: source_name.to_string(),
            target: target_name.to_string(),
            matrix: matrix_to_rows(m.matrix()),
        },
    );
    let mut defs = std::collections::BTreeMap::new();
    for (name, t) in deformations {
        defs.insert(name.to_string(), deformation_desc(name, &t));
    }
    ProblemFile {
        weight: Rational::from_scalar(&weight),
        algebras,
        morphisms,
        bimodules: std::collections::BTreeMap::new(),
        deformations: defs,
    }
}

/// An order-1 deformation seeded with a representative degree-2 cone
/// cocycle that is not a coboundary: the canonical obstructed instance.
pub fn seeded_deformation(base: &DiffAlgebraMorphism) -> Option<TruncatedDeformation> {
    let p = PhiBimodule::self_coefficients(base.clone());
    let rho1 = rho_delta(&p, 1);
    let rho2 = rho_delta(&p, 2);
    let kernel = kernel_basis(&rho2.matrix);
    let aux = base.target().dim();
    let total = rho2.domain.total_dim();
    let v = kernel.basis().iter().find(|v| {
        v[total - aux..].iter().all(Scalar::is_zero)
            && solve(&rho1.matrix, v).expect("consistent shapes").is_none()
    })?;
    let cochain = Cochain::new(rho2.domain.clone(), v.clone()).expect("kernel vector fits");
    let layer = layer_from_cochain(base, &cochain)?;
    TruncatedDeformation::from_layers(base.clone(), vec![layer]).ok()
}

/// A deterministic non-identity gauge with small integer layers.
pub fn sample_gauge(a_dim: usize, b_dim: usize, order: usize) -> GaugePair {
    let mut layers = Vec::new();
    for k in 1..=order {
        let mut fa = Matrix::zero(a_dim, a_dim);
        fa.set(a_dim - 1, 0, s(k as i64));
        let mut fb = Matrix::zero(b_dim, b_dim);
        fb.set(0, b_dim - 1, s(-(k as i64)));
        layers.push((fa, fb));
    }
    GaugePair::from_layers(a_dim, b_dim, layers).unwrap()
}

pub fn fix1() -> ProblemFile {
    let m = fix1_morphism();
    let trivial = TruncatedDeformation::trivial(m.clone(), 2);
    problem_for(Scalar::zero(), "F", "F", &m, vec![("trivial", trivial)])
}

pub fn fix2() -> ProblemFile {
    let m = fix2_morphism();
    let mut defs = Vec::new();
    if let Some(seeded) = seeded_deformation(&m) {
        defs.push(("seeded", seeded));
    }
    problem_for(Scalar::zero(), "A", "F", &m, defs)
}

pub fn fix3() -> ProblemFile {
    let m = fix3_morphism();
    let trivial = TruncatedDeformation::trivial(m.clone(), 2);
    let gauged = apply_gauge(&trivial, &sample_gauge(2, 2, 2));
    problem_for(Scalar::one(), "A", "B", &m, vec![("gauged", gauged)])
}

pub fn fix4() -> ProblemFile {
    let m = fix4_morphism();
    problem_for(Scalar::zero(), "T", "D", &m, vec![])
}

pub fn shipped() -> Vec<(&'static str, ProblemFile)> {
    vec![
        ("fix1", fix1()),
        ("fix2", fix2()),
        ("fix3", fix3()),
        ("fix4", fix4()),
    ]
}

/// Invert a small matrix by exact column solves; `None` if singular.
fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    let mut out = Matrix::zero(n, n);
    for c in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[c] = Scalar::one();
        let col = solve(m, &e).expect("square system")?;
        for (r, v) in col.iter().enumerate() {
            if !v.is_zero() {
                out.set(r, c, v.clone());
            }
        }
    }
    Some(out)
}

/// Rewrite an algebra in the basis whose `j`-th vector is column `j` of
/// `p` (in the old coordinates).
pub fn conjugate_algebra(
    a: &DifferentialAlgebra,
    p: &Matrix,
    p_inv: &Matrix,
) -> DifferentialAlgebra {
    let dim = a.dim();
    let mut mul = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let prod = a.multiply(&p.column(i), &p.column(j));
            let back = p_inv.mul_vec(&prod).unwrap();
            mul[i][j] = back;
        }
    }
    let unit = p_inv.mul_vec(a.unit()).unwrap();
    let der = p_inv.matmul(a.der()).unwrap().matmul(p).unwrap();
    DifferentialAlgebra::new(dim, mul, unit, a.weight().clone(), der).unwrap()
}

/// A random invertible matrix: unit lower times unit upper with small
/// integer entries.
pub fn random_invertible(rng: &mut impl Rng, dim: usize) -> Matrix {
    let mut l = Matrix::identity(dim);
    let mut u = Matrix::identity(dim);
    for r in 0..dim {
        for c in 0..dim {
            if r > c && rng.gen_bool(0.5) {
                l.set(r, c, s(rng.gen_range(-1..=1)));
            }
            if r < c && rng.gen_bool(0.5) {
                u.set(r, c, s(rng.gen_range(-1..=1)));
            }
        }
    }
    l.matmul(&u).unwrap()
}

/// `𝔽[x]/(x^m)` with `d(x^i) = γ_i x^i`, where the coefficient sequence
/// is generated by `γ` so the weighted Leibniz rule holds: with
/// `u = 1 + λγ`, `γ_i = (uⁱ − 1)/λ` (or `iγ` at weight 0).
pub fn truncated_polynomial(m: usize, gamma: Scalar, weight: Scalar) -> DifferentialAlgebra {
    let mut mul = vec![vec![vec![Scalar::zero(); m]; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i + j < m {
                mul[i][j][i + j] = Scalar::one();
            }
        }
    }
    let mut unit = vec![Scalar::zero(); m];
    unit[0] = Scalar::one();
    let mut der = Matrix::zero(m, m);
    let mut gamma_i = Scalar::zero();
    for i in 1..m {
        // γ_{i} = γ_{i−1} + γ + λ γ_{i−1} γ
        gamma_i = &(&gamma_i + &gamma) + &(&weight * &(&gamma_i * &gamma));
        if !gamma_i.is_zero() {
            der.set(i, i, gamma_i.clone());
        }
    }
    DifferentialAlgebra::new(m, mul, unit, weight, der).unwrap()
}

/// A product of fields with the zero operator. On idempotents the
/// Leibniz rule only admits `d(e_i) = δ_i e_i` with `δ_i ∈ {0, −1/λ}`,
/// and any nonzero choice moves the unit; the corpus keeps `d(1) = 0`
/// everywhere, so only the zero operator remains.
pub fn split_semisimple(dim: usize, weight: Scalar) -> DifferentialAlgebra {
    let mut mul = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    for i in 0..dim {
        mul[i][i][i] = Scalar::one();
    }
    let der = Matrix::zero(dim, dim);
    DifferentialAlgebra::new(dim, mul, vec![Scalar::one(); dim], weight, der).unwrap()
}

/// A random valid morphism fixture: dims ≤ 3, weight in {0, 1, 1/2},
/// drawn from quotient-of-truncated-polynomials, split semisimple
/// projections, and identity maps, each in a random basis.
pub fn random_morphism(rng: &mut impl Rng) -> DiffAlgebraMorphism {
    let weight = match rng.gen_range(0..3) {
        0 => Scalar::zero(),
        1 => Scalar::one(),
        _ => Scalar::new(1, 2),
    };
    let raw = match rng.gen_range(0..3) {
        0 => {
            // quotient of truncated polynomial rings, x ↦ x
            let m = rng.gen_range(1..=3);
            let k = rng.gen_range(1..=m);
            let gamma = match rng.gen_range(0..4) {
                0 => Scalar::zero(),
                1 => Scalar::one(),
                2 => Scalar::from_int(-1),
                _ => Scalar::new(1, 2),
            };
            let source = truncated_polynomial(m, gamma.clone(), weight.clone());
            let target = truncated_polynomial(k, gamma, weight.clone());
            let mut phi = Matrix::zero(k, m);
            for i in 0..k.min(m) {
                phi.set(i, i, Scalar::one());
            }
            DiffAlgebraMorphism::new(source, target, phi).unwrap()
        }
        1 => {
            // coordinate projection of a product of fields
            let m = rng.gen_range(1..=3);
            let k = rng.gen_range(1..=m);
            let source = split_semisimple(m, weight.clone());
            let target = split_semisimple(k, weight.clone());
            let mut phi = Matrix::zero(k, m);
            for i in 0..k {
                phi.set(i, i, Scalar::one());
            }
            DiffAlgebraMorphism::new(source, target, phi).unwrap()
        }
        _ => {
            let alg = match rng.gen_range(0..2) {
                0 => dual_numbers(weight.clone()),
                _ => truncated_polynomial(3, Scalar::one(), weight.clone()),
            };
            DiffAlgebraMorphism::identity(alg)
        }
    };
    // random change of basis on both sides
    let p = random_invertible(rng, raw.source().dim());
    let p_inv = invert(&p).expect("unit-triangular product is invertible");
    let q = random_invertible(rng, raw.target().dim());
    let q_inv = invert(&q).expect("unit-triangular product is invertible");
    let source = conjugate_algebra(raw.source(), &p, &p_inv);
    let target = conjugate_algebra(raw.target(), &q, &q_inv);
    let matrix = q_inv.matmul(raw.matrix()).unwrap().matmul(&p).unwrap();
    DiffAlgebraMorphism::new(source, target, matrix).unwrap()
}

/// A random gauge with entries in `{−1, 0, 1}`.
pub fn random_gauge(rng: &mut impl Rng, a_dim: usize, b_dim: usize, order: usize) -> GaugePair {
    let mut layers = Vec::new();
    for _ in 0..order {
        let mut fa = Matrix::zero(a_dim, a_dim);
        let mut fb = Matrix::zero(b_dim, b_dim);
        for r in 0..a_dim {
            for c in 0..a_dim {
                let v = rng.gen_range(-1..=1);
                if v != 0 {
                    fa.set(r, c, s(v));
                }
            }
        }
        for r in 0..b_dim {
            for c in 0..b_dim {
                let v = rng.gen_range(-1..=1);
                if v != 0 {
                    fb.set(r, c, s(v));
                }
            }
        }
        layers.push((fa, fb));
    }
    GaugePair::from_layers(a_dim, b_dim, layers).unwrap()
}
