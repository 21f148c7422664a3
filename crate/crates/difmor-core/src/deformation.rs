//! Truncated one-parameter deformations of a differential algebra
//! morphism: validation, infinitesimals, gauge equivalence, and
//! order-by-order trivialization.
//!
//! A deformation replaces both products, both operators, and the morphism
//! by polynomials in a formal parameter `t`,
//!
//! `μ_{X,t} = Σ μ_{X,i} tⁱ, d_{X,t} = Σ d_{X,i} tⁱ, φ_t = Σ φ_i tⁱ`,
//!
//! truncated at a fixed order, with the degree-0 coefficients the base
//! structures. Validity means the defining identities of a differential
//! algebra morphism hold modulo `t^{N+1}`; the validator checks the
//! expanded coefficient equations at each order and reports every failure
//! with the order and basis tuple that witnesses it.
//!
//! Note the operator rule expands with the weight term intact:
//!
//! `Σ d_i∘μ_j = Σ μ_i∘(d_j⊗Id) + Σ μ_i∘(Id⊗d_j) + λ Σ μ_i∘(d_j⊗d_k)`
//!
//! (sums over all index splittings of the order) — published expansions
//! sometimes drop the trilinear `λ`-term, which the truncated-polynomial
//! oracle in the test suite confirms is required.
//!
//! Gauges are pairs of invertible series `(F_{A,t}, F_{B,t})` with
//! identity constant term, acting by conjugation. The order-`k` part of a
//! gauge enters the order-`k` coefficients of the transformed deformation
//! linearly, through (minus) the cone differential `ϱ¹` applied to
//! `((F_{A,k}, F_{B,k}, 0), (0, 0))`; equivalence and trivialization are
//! therefore decided by exact linear solves against the columns of `ϱ¹`
//! corresponding to those two blocks.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::complexes::{rho_delta, Cochain, CochainSpace, ComplexSlice};
use crate::error::{Error, Result};
use crate::exactlin::{solve, vec_sub, Matrix, Scalar};
use crate::structures::{DiffAlgebraMorphism, PhiBimodule};

/// Which algebra of the morphism an equation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Source => write!(f, "source"),
            Side::Target => write!(f, "target"),
        }
    }
}

/// The five coefficient-equation families a truncated deformation must
/// satisfy at every order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeformationLaw {
    /// `Σ μ_i(μ_j ⊗ Id) = Σ μ_i(Id ⊗ μ_j)`
    Associativity(Side),
    /// `Σ d_i μ_j = Σ μ_i(d_j⊗Id) + Σ μ_i(Id⊗d_j) + λ Σ μ_i(d_j⊗d_k)`
    OperatorRule(Side),
    /// `Σ φ_i μ_{A,j} = Σ μ_{B,i}(φ_j ⊗ φ_k)`
    MorphismProducts,
    /// `Σ d_{B,i} φ_j = Σ φ_i d_{A,j}`
    MorphismOperator,
}

impl fmt::Display for DeformationLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeformationLaw::Associativity(s) => write!(f, "associativity on the {s} algebra"),
            DeformationLaw::OperatorRule(s) => write!(f, "operator rule on the {s} algebra"),
            DeformationLaw::MorphismProducts => write!(f, "multiplicativity of the deformed morphism"),
            DeformationLaw::MorphismOperator => write!(f, "operator intertwining of the deformed morphism"),
        }
    }
}

/// One violated coefficient equation: which law, at which order in `t`,
/// on which basis tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationFinding {
    pub law: DeformationLaw,
    pub order: usize,
    pub inputs: Vec<usize>,
}

impl fmt::Display for DeformationFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at order {} on basis tuple {:?}", self.law, self.order, self.inputs)
    }
}

/// All violated equations of a truncated deformation; empty means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeformationReport {
    pub findings: Vec<DeformationFinding>,
}

impl DeformationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// A deformation of `base` truncated at `order`: coefficient lists with
/// index 0 holding the base structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedDeformation {
    base: DiffAlgebraMorphism,
    order: usize,
    mu_a: Vec<Matrix>,
    d_a: Vec<Matrix>,
    mu_b: Vec<Matrix>,
    d_b: Vec<Matrix>,
    phi: Vec<Matrix>,
}

/// Shape of one coefficient layer: bilinear maps as `dim × dim²`
/// matrices, linear maps as square matrices, and the morphism layer as a
/// `target × source` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationLayer {
    pub mu_a: Matrix,
    pub d_a: Matrix,
    pub mu_b: Matrix,
    pub d_b: Matrix,
    pub phi: Matrix,
}

impl TruncatedDeformation {
    /// The trivial deformation: base structures and zero above.
    pub fn trivial(base: DiffAlgebraMorphism, order: usize) -> Self {
        let (a, b) = (base.source().dim(), base.target().dim());
        let mut t = TruncatedDeformation {
            mu_a: vec![base.source().mul_matrix()],
            d_a: vec![base.source().der().clone()],
            mu_b: vec![base.target().mul_matrix()],
            d_b: vec![base.target().der().clone()],
            phi: vec![base.matrix().clone()],
            base,
            order,
        };
        for _ in 0..order {
            t.mu_a.push(Matrix::zero(a, a * a));
            t.d_a.push(Matrix::zero(a, a));
            t.mu_b.push(Matrix::zero(b, b * b));
            t.d_b.push(Matrix::zero(b, b));
            t.phi.push(Matrix::zero(b, a));
        }
        t
    }

    /// Build from the higher coefficients (index 1 upward); the base
    /// layer is filled in from `base`.
    pub fn from_layers(base: DiffAlgebraMorphism, layers: Vec<DeformationLayer>) -> Result<Self> {
        let order = layers.len();
        let mut t = TruncatedDeformation::trivial(base, order);
        for (k, layer) in layers.into_iter().enumerate() {
            t.set_layer(k + 1, layer)?;
        }
        Ok(t)
    }

    fn set_layer(&mut self, k: usize, layer: DeformationLayer) -> Result<()> {
        let (a, b) = (self.base.source().dim(), self.base.target().dim());
        let shapes = [
            (layer.mu_a.rows(), layer.mu_a.cols(), a, a * a),
            (layer.d_a.rows(), layer.d_a.cols(), a, a),
            (layer.mu_b.rows(), layer.mu_b.cols(), b, b * b),
            (layer.d_b.rows(), layer.d_b.cols(), b, b),
            (layer.phi.rows(), layer.phi.cols(), b, a),
        ];
        for (rows, cols, er, ec) in shapes {
            if rows != er || cols != ec {
                return Err(Error::Dimension {
                    context: "deformation coefficient shape",
                    expected: er * 1000 + ec,
                    got: rows * 1000 + cols,
                });
            }
        }
        self.mu_a[k] = layer.mu_a;
        self.d_a[k] = layer.d_a;
        self.mu_b[k] = layer.mu_b;
        self.d_b[k] = layer.d_b;
        self.phi[k] = layer.phi;
        Ok(())
    }

    pub fn base(&self) -> &DiffAlgebraMorphism {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn layer(&self, k: usize) -> DeformationLayer {
        DeformationLayer {
            mu_a: self.mu_a[k].clone(),
            d_a: self.d_a[k].clone(),
            mu_b: self.mu_b[k].clone(),
            d_b: self.d_b[k].clone(),
            phi: self.phi[k].clone(),
        }
    }

    pub fn mu_a(&self) -> &[Matrix] {
        &self.mu_a
    }

    pub fn d_a(&self) -> &[Matrix] {
        &self.d_a
    }

    pub fn mu_b(&self) -> &[Matrix] {
        &self.mu_b
    }

    pub fn d_b(&self) -> &[Matrix] {
        &self.d_b
    }

    pub fn phi(&self) -> &[Matrix] {
        &self.phi
    }

    pub fn is_trivial(&self) -> bool {
        (1..=self.order).all(|k| {
            self.mu_a[k].is_zero()
                && self.d_a[k].is_zero()
                && self.mu_b[k].is_zero()
                && self.d_b[k].is_zero()
                && self.phi[k].is_zero()
        })
    }
}

/// A pair of invertible series with identity constant term, acting on
/// deformations by conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugePair {
    order: usize,
    f_a: Vec<Matrix>,
    f_b: Vec<Matrix>,
}

impl GaugePair {
    pub fn identity(a_dim: usize, b_dim: usize, order: usize) -> Self {
        let mut f_a = vec![Matrix::identity(a_dim)];
        let mut f_b = vec![Matrix::identity(b_dim)];
        for _ in 0..order {
            f_a.push(Matrix::zero(a_dim, a_dim));
            f_b.push(Matrix::zero(b_dim, b_dim));
        }
        GaugePair { order, f_a, f_b }
    }

    /// Build from the higher coefficients (index 1 upward).
    pub fn from_layers(a_dim: usize, b_dim: usize, layers: Vec<(Matrix, Matrix)>) -> Result<Self> {
        let mut g = GaugePair::identity(a_dim, b_dim, layers.len());
        for (k, (fa, fb)) in layers.into_iter().enumerate() {
            g.set_layer(k + 1, fa, fb)?;
        }
        Ok(g)
    }

    fn set_layer(&mut self, k: usize, fa: Matrix, fb: Matrix) -> Result<()> {
        let (a, b) = (self.f_a[0].rows(), self.f_b[0].rows());
        if fa.rows() != a || fa.cols() != a {
            return Err(Error::Dimension {
                context: "gauge coefficient shape (source)",
                expected: a,
                got: fa.rows(),
            });
        }
        if fb.rows() != b || fb.cols() != b {
            return Err(Error::Dimension {
                context: "gauge coefficient shape (target)",
                expected: b,
                got: fb.rows(),
            });
        }
        self.f_a[k] = fa;
        self.f_b[k] = fb;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn f_a(&self) -> &[Matrix] {
        &self.f_a
    }

    pub fn f_b(&self) -> &[Matrix] {
        &self.f_b
    }

    pub fn is_identity(&self) -> bool {
        (1..=self.order).all(|k| self.f_a[k].is_zero() && self.f_b[k].is_zero())
    }

    /// Coefficients of the series inverse, to the requested order.
    fn inverse_coeffs(series: &[Matrix], order: usize) -> Vec<Matrix> {
        let dim = series[0].rows();
        let mut inv = vec![Matrix::identity(dim)];
        for k in 1..=order {
            let mut acc = Matrix::zero(dim, dim);
            for i in 1..=k {
                let f_i = series.get(i).cloned().unwrap_or_else(|| Matrix::zero(dim, dim));
                acc = acc.add(&f_i.matmul(&inv[k - i]).expect("square series product")).expect("same shape");
            }
            inv.push(acc.neg());
        }
        inv
    }
}

fn coeff_or_zero(series: &[Matrix], k: usize, rows: usize, cols: usize) -> Matrix {
    series.get(k).cloned().unwrap_or_else(|| Matrix::zero(rows, cols))
}

/// Check every coefficient equation of `t` at every order `0..=t.order`,
/// reporting each violated (law, order, basis tuple).
pub fn validate_deformation(t: &TruncatedDeformation) -> DeformationReport {
    let mut findings = Vec::new();
    let a = t.base.source().dim();
    let b = t.base.target().dim();
    let lambda = t.base.source().weight().clone();
    for n in 0..=t.order {
        side_equations(&t.mu_a, &t.d_a, a, &lambda, n, Side::Source, &mut findings);
        side_equations(&t.mu_b, &t.d_b, b, &lambda, n, Side::Target, &mut findings);

        // Σ φ_i μ_{A,j} = Σ μ_{B,i}(φ_j ⊗ φ_k)
        let mut diff = Matrix::zero(b, a * a);
        for i in 0..=n {
            diff = diff
                .add(&t.phi[i].matmul(&t.mu_a[n - i]).unwrap())
                .unwrap();
        }
        for i in 0..=n {
            for j in 0..=n - i {
                let k = n - i - j;
                let rhs = t.mu_b[i].matmul(&t.phi[j].kronecker(&t.phi[k])).unwrap();
                diff = diff.sub(&rhs).unwrap();
            }
        }
        report_columns(&diff, DeformationLaw::MorphismProducts, n, &[a, a], &mut findings);

        // Σ d_{B,i} φ_j = Σ φ_i d_{A,j}
        let mut diff = Matrix::zero(b, a);
        for i in 0..=n {
            diff = diff.add(&t.d_b[i].matmul(&t.phi[n - i]).unwrap()).unwrap();
            diff = diff.sub(&t.phi[i].matmul(&t.d_a[n - i]).unwrap()).unwrap();
        }
        report_columns(&diff, DeformationLaw::MorphismOperator, n, &[a], &mut findings);
    }
    DeformationReport { findings }
}

fn side_equations(
    mu: &[Matrix],
    d: &[Matrix],
    dim: usize,
    lambda: &Scalar,
    n: usize,
    side: Side,
    findings: &mut Vec<DeformationFinding>,
) {
    let id = Matrix::identity(dim);
    // Σ μ_i(μ_j ⊗ Id) = Σ μ_i(Id ⊗ μ_j)
    let mut diff = Matrix::zero(dim, dim * dim * dim);
    for i in 0..=n {
        let j = n - i;
        diff = diff.add(&mu[i].matmul(&mu[j].kronecker(&id)).unwrap()).unwrap();
        diff = diff.sub(&mu[i].matmul(&id.kronecker(&mu[j])).unwrap()).unwrap();
    }
    report_columns(&diff, DeformationLaw::Associativity(side), n, &[dim, dim, dim], findings);

    // Σ d_i μ_j = Σ μ_i(d_j⊗Id) + Σ μ_i(Id⊗d_j) + λ Σ μ_i(d_j⊗d_k)
    let mut diff = Matrix::zero(dim, dim * dim);
    for i in 0..=n {
        let j = n - i;
        diff = diff.add(&d[i].matmul(&mu[j]).unwrap()).unwrap();
        diff = diff.sub(&mu[i].matmul(&d[j].kronecker(&id)).unwrap()).unwrap();
        diff = diff.sub(&mu[i].matmul(&id.kronecker(&d[j])).unwrap()).unwrap();
    }
    if !lambda.is_zero() {
        for i in 0..=n {
            for j in 0..=n - i {
                let k = n - i - j;
                let term = mu[i].matmul(&d[j].kronecker(&d[k])).unwrap().scale(lambda);
                diff = diff.sub(&term).unwrap();
            }
        }
    }
    report_columns(&diff, DeformationLaw::OperatorRule(side), n, &[dim, dim], findings);
}

/// Decode each nonzero column of a residual matrix into a basis tuple.
fn report_columns(
    diff: &Matrix,
    law: DeformationLaw,
    order: usize,
    bases: &[usize],
    findings: &mut Vec<DeformationFinding>,
) {
    let mut cols: Vec<usize> = diff.iter().map(|(_, c, _)| c).collect();
    cols.dedup();
    cols.sort_unstable();
    cols.dedup();
    for col in cols {
        let mut rest = col;
        let mut inputs = vec![0; bases.len()];
        for (slot, &base) in bases.iter().enumerate().rev() {
            inputs[slot] = rest % base;
            rest /= base;
        }
        findings.push(DeformationFinding { law, order, inputs });
    }
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); m.rows() * m.cols()];
    for (r, c, v) in m.iter() {
        out[r * m.cols() + c] = v.clone();
    }
    out
}

fn unflatten(v: &[Scalar], rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let x = &v[r * cols + c];
            if !x.is_zero() {
                m.set(r, c, x.clone());
            }
        }
    }
    m
}

/// The degree-2 cone space over `(φ, φ)` with self-coefficients that
/// order-`k` deformation data lives in.
fn order_space(base: &DiffAlgebraMorphism) -> CochainSpace {
    CochainSpace::cone(
        base.source().dim(),
        base.target().dim(),
        base.source().dim(),
        base.target().dim(),
        2,
    )
}

/// The order-`k` coefficients as a degree-2 cone cochain
/// `((μ_{A,k}, μ_{B,k}, φ_k), (d_{A,k}, d_{B,k}, 0))`.
pub fn order_cochain(t: &TruncatedDeformation, k: usize) -> Cochain {
    let space = order_space(&t.base);
    let mut coords = flatten(&t.mu_a[k]);
    coords.extend(flatten(&t.mu_b[k]));
    coords.extend(flatten(&t.phi[k]));
    coords.extend(flatten(&t.d_a[k]));
    coords.extend(flatten(&t.d_b[k]));
    coords.extend(vec![Scalar::zero(); t.base.target().dim()]);
    Cochain::new(space, coords).expect("layout matches the cone space")
}

/// Split a degree-2 cone cochain back into a deformation layer
/// `(μ_A, μ_B, φ, d_A, d_B)`; `None` if the auxiliary block is nonzero,
/// since that block has no deformation meaning.
pub fn layer_from_cochain(base: &DiffAlgebraMorphism, c: &Cochain) -> Option<DeformationLayer> {
    let a = base.source().dim();
    let b = base.target().dim();
    if c.space != order_space(base) {
        return None;
    }
    let total = c.space.total_dim();
    if c.coords[total - b..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut off = 0;
    let mut take = |rows: usize, cols: usize| {
        let m = unflatten(&c.coords[off..off + rows * cols], rows, cols);
        off += rows * cols;
        m
    };
    Some(DeformationLayer {
        mu_a: take(a, a * a),
        mu_b: take(b, b * b),
        phi: take(b, a),
        d_a: take(a, a),
        d_b: take(b, b),
    })
}

/// The infinitesimal (order-1 part) of a valid deformation, as a cocycle
/// of the degree-2 cone differential.
pub fn infinitesimal(t: &TruncatedDeformation) -> Result<Cochain> {
    if t.order < 1 {
        return Err(Error::InvalidDeformation {
            detail: "order must be at least 1".to_string(),
        });
    }
    let report = validate_deformation(t);
    if let Some(first) = report.findings.first() {
        return Err(Error::InvalidDeformation {
            detail: first.to_string(),
        });
    }
    Ok(order_cochain(t, 1))
}

/// Transform `t` by the gauge `(F_A, F_B)`:
/// `μ' = F μ (F⁻¹⊗F⁻¹), d' = F d F⁻¹, φ' = F_B φ F_A⁻¹`, coefficientwise
/// to the order of `t`. The result of gauging a valid deformation is
/// valid; no validation is performed here.
pub fn apply_gauge(t: &TruncatedDeformation, g: &GaugePair) -> TruncatedDeformation {
    let n = t.order;
    let a = t.base.source().dim();
    let b = t.base.target().dim();
    let inv_a = GaugePair::inverse_coeffs(&g.f_a, n);
    let inv_b = GaugePair::inverse_coeffs(&g.f_b, n);
    let mut out = TruncatedDeformation::trivial(t.base.clone(), n);
    for k in 0..=n {
        let mut mu_a = Matrix::zero(a, a * a);
        let mut mu_b = Matrix::zero(b, b * b);
        let mut d_a = Matrix::zero(a, a);
        let mut d_b = Matrix::zero(b, b);
        let mut phi = Matrix::zero(b, a);
        for i in 0..=k {
            let fa_i = coeff_or_zero(&g.f_a, i, a, a);
            let fb_i = coeff_or_zero(&g.f_b, i, b, b);
            for j in 0..=k - i {
                let rem = k - i - j;
                // products: F_i μ_j (inv_p ⊗ inv_q), i+j+p+q = k
                for p in 0..=rem {
                    let q = rem - p;
                    let term = fa_i
                        .matmul(&t.mu_a[j])
                        .unwrap()
                        .matmul(&inv_a[p].kronecker(&inv_a[q]))
                        .unwrap();
                    mu_a = mu_a.add(&term).unwrap();
                    let term = fb_i
                        .matmul(&t.mu_b[j])
                        .unwrap()
                        .matmul(&inv_b[p].kronecker(&inv_b[q]))
                        .unwrap();
                    mu_b = mu_b.add(&term).unwrap();
                }
                // operators and morphism: F_i x_j inv_rem
                let term = fa_i.matmul(&t.d_a[j]).unwrap().matmul(&inv_a[rem]).unwrap();
                d_a = d_a.add(&term).unwrap();
                let term = fb_i.matmul(&t.d_b[j]).unwrap().matmul(&inv_b[rem]).unwrap();
                d_b = d_b.add(&term).unwrap();
                let term = fb_i.matmul(&t.phi[j]).unwrap().matmul(&inv_a[rem]).unwrap();
                phi = phi.add(&term).unwrap();
            }
        }
        out.mu_a[k] = mu_a;
        out.mu_b[k] = mu_b;
        out.d_a[k] = d_a;
        out.d_b[k] = d_b;
        out.phi[k] = phi;
    }
    out
}

/// The cone differential `ϱ¹` restricted to the gauge directions: its
/// columns for the `C¹(A,A)` and `C¹(B,B)` blocks.
fn gauge_columns(rho1: &ComplexSlice, a: usize, b: usize) -> Matrix {
    let cols = a * a + b * b;
    let mut out = Matrix::zero(rho1.matrix.rows(), cols);
    for (r, c, v) in rho1.matrix.iter() {
        if c < cols {
            out.set(r, c, v.clone());
        }
    }
    out
}

/// Search for a gauge with `apply_gauge(t1, g) = t2`, coefficient by
/// coefficient, up to `min(search_order, common order)`. Both inputs must
/// be valid to their stated order.
pub fn are_equivalent(
    t1: &TruncatedDeformation,
    t2: &TruncatedDeformation,
    search_order: usize,
) -> Result<Option<GaugePair>> {
    if t1.base != t2.base {
        return Err(Error::Incompatible {
            context: "deformations of different base morphisms",
        });
    }
    for t in [t1, t2] {
        if let Some(first) = validate_deformation(t).findings.first() {
            return Err(Error::InvalidDeformation {
                detail: first.to_string(),
            });
        }
    }
    let order = search_order.min(t1.order).min(t2.order);
    let a = t1.base.source().dim();
    let b = t1.base.target().dim();
    let p = PhiBimodule::self_coefficients(t1.base.clone());
    let rho1 = rho_delta(&p, 1);
    let restricted = gauge_columns(&rho1, a, b);
    let mut g = GaugePair::identity(a, b, order);
    for k in 1..=order {
        let current = apply_gauge(t1, &g);
        let residual = vec_sub(
            &order_cochain(&current, k).coords,
            &order_cochain(t2, k).coords,
        );
        if residual.iter().all(Scalar::is_zero) {
            continue;
        }
        // order-k coefficients move by −ϱ¹(F_k) under the gauge, so the
        // correction must hit the residual exactly
        match solve(&restricted, &residual)? {
            Some(x) => {
                g.f_a[k] = unflatten(&x[..a * a], a, a);
                g.f_b[k] = unflatten(&x[a * a..], b, b);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(g))
}

/// Outcome of a trivialization attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrivializeOutcome {
    /// A gauge turning the deformation into the trivial one up to the
    /// requested order.
    Trivialized(GaugePair),
    /// No gauge kills the coefficients at `order`; `class` is the
    /// offending degree-2 cocycle.
    Obstructed { order: usize, class: Cochain },
}

/// Try to gauge `t` to the trivial deformation, order by order, up to
/// `min(up_to, t.order)`.
///
/// At each order the residual coefficients form a cocycle of `ϱ²`. The
/// solver first looks for a gauge correction alone; if none exists it
/// solves the full degree-1 cone equation (allowing the auxiliary blocks
/// a general solution may need), absorbs the gauge components, and
/// retries — the leftover, if any, is reported as the obstruction.
pub fn trivialize(t: &TruncatedDeformation, up_to: usize) -> Result<TrivializeOutcome> {
    if let Some(first) = validate_deformation(t).findings.first() {
        return Err(Error::InvalidDeformation {
            detail: first.to_string(),
        });
    }
    let order = up_to.min(t.order);
    let a = t.base.source().dim();
    let b = t.base.target().dim();
    let p = PhiBimodule::self_coefficients(t.base.clone());
    let rho1 = rho_delta(&p, 1);
    let restricted = gauge_columns(&rho1, a, b);
    let mut g = GaugePair::identity(a, b, order);
    for k in 1..=order {
        let mut residual = order_cochain(&apply_gauge(t, &g), k).coords;
        if residual.iter().all(Scalar::is_zero) {
            continue;
        }
        if let Some(x) = solve(&restricted, &residual)? {
            g.f_a[k] = unflatten(&x[..a * a], a, a);
            g.f_b[k] = unflatten(&x[a * a..], b, b);
            continue;
        }
        // allow the auxiliary cone blocks, keep the gauge part
        if let Some(eta) = solve(&rho1.matrix, &residual)? {
            g.f_a[k] = unflatten(&eta[..a * a], a, a);
            g.f_b[k] = unflatten(&eta[a * a..a * a + b * b], b, b);
            residual = order_cochain(&apply_gauge(t, &g), k).coords;
            if residual.iter().all(Scalar::is_zero) {
                continue;
            }
            if let Some(x) = solve(&restricted, &residual)? {
                let extra_a = unflatten(&x[..a * a], a, a);
                let extra_b = unflatten(&x[a * a..], b, b);
                g.f_a[k] = g.f_a[k].add(&extra_a).unwrap();
                g.f_b[k] = g.f_b[k].add(&extra_b).unwrap();
                continue;
            }
        }
        let class = Cochain::new(order_space(&t.base), residual)
            .expect("residual layout matches the cone space");
        return Ok(TrivializeOutcome::Obstructed { order: k, class });
    }
    Ok(TrivializeOutcome::Trivialized(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology, is_cocycle, same_class};
    use crate::complexes::rho_delta;
    use crate::exactlin::kernel_basis;
    use crate::structures::DifferentialAlgebra;

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

    fn collapse_morphism() -> DiffAlgebraMorphism {
        let phi = Matrix::from_rows(vec![vec![s(1), s(0)]]).unwrap();
        DiffAlgebraMorphism::new(dual_numbers(Scalar::zero()), ground_field(), phi).unwrap()
    }

    fn sample_gauge(base: &DiffAlgebraMorphism, order: usize) -> GaugePair {
        // an arbitrary but fixed pair of nilpotent-looking layers
        let a = base.source().dim();
        let b = base.target().dim();
        let mut layers = Vec::new();
        for k in 1..=order {
            let mut fa = Matrix::zero(a, a);
            fa.set(a - 1, 0, s(k as i64));
            let mut fb = Matrix::zero(b, b);
            fb.set(0, 0, s(-(k as i64)));
            layers.push((fa, fb));
        }
        GaugePair::from_layers(a, b, layers).unwrap()
    }

    #[test]
    fn trivial_deformation_is_valid_and_has_zero_infinitesimal() {
        let t = TruncatedDeformation::trivial(collapse_morphism(), 2);
        assert!(validate_deformation(&t).is_valid());
        assert!(t.is_trivial());
        let inf = infinitesimal(&t).unwrap();
        assert!(inf.coords.iter().all(Scalar::is_zero));
    }

    #[test]
    fn broken_order_one_data_is_reported_with_the_equation() {
        // μ_{A,1}(x⊗x) = 1 alone violates the operator rule at order 1
        let base = collapse_morphism();
        let mut layer = DeformationLayer {
            mu_a: Matrix::zero(2, 4),
            d_a: Matrix::zero(2, 2),
            mu_b: Matrix::zero(1, 1),
            d_b: Matrix::zero(1, 1),
            phi: Matrix::zero(1, 2),
        };
        layer.mu_a.set(0, 3, s(1));
        let t = TruncatedDeformation::from_layers(base, vec![layer]).unwrap();
        let report = validate_deformation(&t);
        assert!(!report.is_valid());
        assert!(report
            .findings
            .iter()
            .any(|f| f.law == DeformationLaw::OperatorRule(Side::Source) && f.order == 1));
        assert!(infinitesimal(&t).is_err());
    }

    #[test]
    fn gauge_of_trivial_is_valid_and_its_infinitesimal_is_a_coboundary() {
        let base = collapse_morphism();
        let t = TruncatedDeformation::trivial(base.clone(), 2);
        let g = sample_gauge(&base, 2);
        let gauged = apply_gauge(&t, &g);
        assert!(validate_deformation(&gauged).is_valid());
        let inf = infinitesimal(&gauged).unwrap();
        let p = PhiBimodule::self_coefficients(base);
        let rho1 = rho_delta(&p, 1);
        let rho2 = rho_delta(&p, 2);
        assert!(is_cocycle(&inf, &rho2).unwrap());
        let zero = Cochain::zero(inf.space.clone());
        assert!(same_class(&inf, &zero, &rho1, &rho2).unwrap());
    }

    #[test]
    fn identity_gauge_fixes_everything() {
        let base = collapse_morphism();
        let t = TruncatedDeformation::trivial(base.clone(), 2);
        let g = sample_gauge(&base, 2);
        let gauged = apply_gauge(&t, &g);
        let id = GaugePair::identity(2, 1, 2);
        assert_eq!(apply_gauge(&gauged, &id), gauged);
    }

    #[test]
    fn infinitesimals_of_valid_deformations_are_cocycles() {
        for base in [collapse_morphism(), DiffAlgebraMorphism::identity(dual_numbers(Scalar::one()))] {
            let t = TruncatedDeformation::trivial(base.clone(), 2);
            let g = sample_gauge(&base, 2);
            let gauged = apply_gauge(&t, &g);
            let inf = infinitesimal(&gauged).unwrap();
            let p = PhiBimodule::self_coefficients(base);
            let rho2 = rho_delta(&p, 2);
            assert!(is_cocycle(&inf, &rho2).unwrap());
        }
    }

    #[test]
    fn equivalence_round_trip() {
        let base = collapse_morphism();
        let t = TruncatedDeformation::trivial(base.clone(), 2);
        let g = sample_gauge(&base, 2);
        let gauged = apply_gauge(&t, &g);
        // the gauged deformation is equivalent to the trivial one
        let found = are_equivalent(&t, &gauged, 2).unwrap().expect("gauge exists");
        assert_eq!(apply_gauge(&t, &found), gauged);
        // and trivially equivalent to itself via the identity
        let same = are_equivalent(&gauged, &gauged, 2).unwrap().expect("identity works");
        assert_eq!(apply_gauge(&gauged, &same), gauged);
    }

    #[test]
    fn trivialize_round_trip() {
        for base in [collapse_morphism(), DiffAlgebraMorphism::identity(dual_numbers(Scalar::one()))] {
            let t = TruncatedDeformation::trivial(base.clone(), 3);
            let g = sample_gauge(&base, 3);
            let gauged = apply_gauge(&t, &g);
            match trivialize(&gauged, 3).unwrap() {
                TrivializeOutcome::Trivialized(back) => {
                    assert!(apply_gauge(&gauged, &back).is_trivial());
                }
                TrivializeOutcome::Obstructed { order, .. } => {
                    panic!("unexpected obstruction at order {order}");
                }
            }
        }
    }

    #[test]
    fn obstructed_order_one_reports_the_class() {
        // pick a base with nonzero degree-2 cone cohomology and seed the
        // order-1 data with a representative having zero auxiliary block
        let base = collapse_morphism();
        let p = PhiBimodule::self_coefficients(base.clone());
        let rho1 = rho_delta(&p, 1);
        let rho2 = rho_delta(&p, 2);
        let report = cohomology(Some(&rho1), &rho2).unwrap();
        if report.betti == 0 {
            return; // nothing to seed with on this fixture
        }
        // search the kernel for a non-coboundary vector with zero last block
        let kernel = kernel_basis(&rho2.matrix);
        let aux = base.target().dim();
        let total = rho2.domain.total_dim();
        let candidate = kernel.basis().iter().find(|v| {
            v[total - aux..].iter().all(Scalar::is_zero)
                && solve(&rho1.matrix, v).unwrap().is_none()
        });
        let Some(v) = candidate else { return };
        let seed = Cochain::new(rho2.domain.clone(), v.clone()).unwrap();
        let layer = layer_from_cochain(&base, &seed).expect("candidate has zero auxiliary block");
        let t = TruncatedDeformation::from_layers(base, vec![layer]).unwrap();
        assert!(validate_deformation(&t).is_valid(), "seeded data must be a valid order-1 deformation");
        match trivialize(&t, 1).unwrap() {
            TrivializeOutcome::Obstructed { order: 1, class } => {
                assert!(is_cocycle(&class, &rho2).unwrap());
                // the obstruction is cohomologous to the seeded cocycle
                assert!(same_class(&class, &seed, &rho1, &rho2).unwrap());
            }
            other => panic!("expected an obstruction, got {other:?}"),
        }
    }
}
