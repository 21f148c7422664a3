//! Finite-dimensional differential algebras, bimodules, and morphisms.
//!
//! All objects are presented by structure constants over the rationals:
//! an algebra is a multiplication tensor plus a unit vector, a derivation
//! matrix `d`, and a weight `λ` tying them together through
//! `d(uv) = d(u)v + u d(v) + λ d(u)d(v)`. Constructors check shapes only;
//! the semantic axioms are checked by the `validate` methods, which report
//! *every* violated axiom together with the offending basis indices rather
//! than stopping at the first.
//!
//! In several complexes the left and right actions of `A` on a bimodule
//! `M` get replaced by the twisted actions `a ▷ m = (a + λ d(a))·m` and
//! `m ◁ a = m·(a + λ d(a))`; [`triangle_bimodule`] builds that twist. For
//! a morphism `φ: A → B`, [`mapping_ring`] builds the auxiliary algebra
//! `φ! = A ⊕ B ⊕ Bφ` whose differential-algebra cohomology the comparison
//! module certifies against the morphism cohomology of `φ`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exactlin::{vec_add, vec_scale, Matrix, Scalar};

/// `t[i][j][k]` = coefficient of basis vector `k` in the product (or
/// action) of basis vectors `i` and `j`.
pub type StructureTensor = Vec<Vec<Vec<Scalar>>>;

fn tensor_shape_ok(t: &StructureTensor, d0: usize, d1: usize, d2: usize) -> bool {
    t.len() == d0 && t.iter().all(|p| p.len() == d1 && p.iter().all(|q| q.len() == d2))
}

/// Contract one slot of a tensor with coordinates: `Σ_i x_i t[i][j][·]`
/// summed over `i` and `j` with weights `x_i y_j`.
fn bilinear(t: &StructureTensor, x: &[Scalar], y: &[Scalar], out_dim: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); out_dim];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let w = xi * yj;
            for (k, c) in t[i][j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += &w * c;
                }
            }
        }
    }
    out
}

/// A finite-dimensional associative unital algebra with a weighted
/// differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialAlgebra {
    dim: usize,
    /// `mul[i][j][k]`: coefficient of `e_k` in `e_i · e_j`.
    mul: StructureTensor,
    unit: Vec<Scalar>,
    weight: Scalar,
    /// Matrix of `d` acting on coordinate columns.
    der: Matrix,
}

impl DifferentialAlgebra {
    pub fn new(
        dim: usize,
        mul: StructureTensor,
        unit: Vec<Scalar>,
        weight: Scalar,
        der: Matrix,
    ) -> Result<Self> {
        if !tensor_shape_ok(&mul, dim, dim, dim) {
            return Err(Error::Dimension {
                context: "multiplication tensor shape",
                expected: dim,
                got: mul.len(),
            });
        }
        if unit.len() != dim {
            return Err(Error::Dimension {
                context: "unit vector length",
                expected: dim,
                got: unit.len(),
            });
        }
        if der.rows() != dim || der.cols() != dim {
            return Err(Error::Dimension {
                context: "derivation matrix shape",
                expected: dim,
                got: der.rows(),
            });
        }
        Ok(DifferentialAlgebra {
            dim,
            mul,
            unit,
            weight,
            der,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn der(&self) -> &Matrix {
        &self.der
    }

    /// Coefficients of `e_i · e_j`.
    pub fn basis_mul(&self, i: usize, j: usize) -> &[Scalar] {
        &self.mul[i][j]
    }

    /// Product of two coordinate vectors.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        bilinear(&self.mul, x, y, self.dim)
    }

    /// `d(x)` for a coordinate vector.
    pub fn d(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.der.mul_vec(x).expect("derivation matrix is square of dim")
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    /// `e_i + λ d(e_i)`, the element acting in the twisted actions.
    pub fn triangle_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.basis_vec(i);
        let d = self.d(&v);
        v = vec_add(&v, &vec_scale(&self.weight, &d));
        v
    }

    /// The multiplication as a `dim × dim²` matrix, columns indexed by the
    /// flattened input pair `(i, j) ↦ i·dim + j`.
    pub fn mul_matrix(&self) -> Matrix {
        let mut m = Matrix::zero(self.dim, self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.mul[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        m.set(k, i * self.dim + j, c.clone());
                    }
                }
            }
        }
        m
    }

    /// Check every algebra axiom on basis vectors; empty report means valid.
    pub fn validate(&self) -> ValidationReport {
        let mut findings = Vec::new();
        self.validate_into("", &mut findings);
        ValidationReport { findings }
    }

    fn validate_into(&self, scope: &'static str, findings: &mut Vec<Finding>) {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.multiply(&self.multiply(&self.basis_vec(i), &self.basis_vec(j)), &self.basis_vec(k));
                    let rhs = self.multiply(&self.basis_vec(i), &self.multiply(&self.basis_vec(j), &self.basis_vec(k)));
                    if lhs != rhs {
                        findings.push(Finding {
                            scope,
                            violation: Violation::Associativity { i, j, k },
                        });
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis_vec(i);
            if self.multiply(&self.unit, &e) != e {
                findings.push(Finding {
                    scope,
                    violation: Violation::LeftUnit { i },
                });
            }
            if self.multiply(&e, &self.unit) != e {
                findings.push(Finding {
                    scope,
                    violation: Violation::RightUnit { i },
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (self.basis_vec(i), self.basis_vec(j));
                let lhs = self.d(&self.multiply(&ei, &ej));
                let (di, dj) = (self.d(&ei), self.d(&ej));
                let mut rhs = vec_add(&self.multiply(&di, &ej), &self.multiply(&ei, &dj));
                rhs = vec_add(&rhs, &vec_scale(&self.weight, &self.multiply(&di, &dj)));
                if lhs != rhs {
                    findings.push(Finding {
                        scope,
                        violation: Violation::Leibniz { i, j },
                    });
                }
            }
        }
    }
}

/// A differential bimodule over a differential algebra: two compatible
/// actions plus an operator `d_M` satisfying the weighted Leibniz rules
/// `d_M(a·m) = d(a)·m + a·d_M(m) + λ d(a)·d_M(m)` and its right-hand
/// mirror.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialBimodule {
    algebra: DifferentialAlgebra,
    dim: usize,
    /// `left[i][x][y]`: coefficient of `m_y` in `e_i · m_x`.
    left: StructureTensor,
    /// `right[x][i][y]`: coefficient of `m_y` in `m_x · e_i`.
    right: StructureTensor,
    der: Matrix,
}

impl DifferentialBimodule {
    pub fn new(
        algebra: DifferentialAlgebra,
        dim: usize,
        left: StructureTensor,
        right: StructureTensor,
        der: Matrix,
    ) -> Result<Self> {
        let a = algebra.dim();
        if !tensor_shape_ok(&left, a, dim, dim) {
            return Err(Error::Dimension {
                context: "left action tensor shape",
                expected: a,
                got: left.len(),
            });
        }
        if !tensor_shape_ok(&right, dim, a, dim) {
            return Err(Error::Dimension {
                context: "right action tensor shape",
                expected: dim,
                got: right.len(),
            });
        }
        if der.rows() != dim || der.cols() != dim {
            return Err(Error::Dimension {
                context: "module derivation matrix shape",
                expected: dim,
                got: der.rows(),
            });
        }
        Ok(DifferentialBimodule {
            algebra,
            dim,
            left,
            right,
            der,
        })
    }

    /// The algebra as a bimodule over itself.
    pub fn regular(algebra: DifferentialAlgebra) -> Self {
        let dim = algebra.dim();
        let left = algebra.mul.clone();
        // right[x][i][y] = mul[x][i][y]
        let right = algebra.mul.clone();
        let der = algebra.der.clone();
        DifferentialBimodule {
            algebra,
            dim,
            left,
            right,
            der,
        }
    }

    /// A bimodule over `phi.target`, pulled back to one over `phi.source`:
    /// `a` acts as `φ(a)` on both sides. The operator is unchanged.
    pub fn pullback(phi: &DiffAlgebraMorphism, module: &DifferentialBimodule) -> Result<Self> {
        if module.algebra != phi.target {
            return Err(Error::Incompatible {
                context: "pullback: module is not over the morphism target",
            });
        }
        let a = phi.source.dim();
        let dim = module.dim;
        let mut left = vec![vec![vec![Scalar::zero(); dim]; dim]; a];
        let mut right = vec![vec![vec![Scalar::zero(); dim]; a]; dim];
        for i in 0..a {
            let phi_i = phi.matrix.column(i);
            for x in 0..dim {
                for (j, c) in phi_i.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for y in 0..dim {
                        let l = &module.left[j][x][y];
                        if !l.is_zero() {
                            left[i][x][y] += c * l;
                        }
                        let r = &module.right[x][j][y];
                        if !r.is_zero() {
                            right[x][i][y] += c * r;
                        }
                    }
                }
            }
        }
        DifferentialBimodule::new(phi.source.clone(), dim, left, right, module.der.clone())
    }

    pub fn algebra(&self) -> &DifferentialAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn der(&self) -> &Matrix {
        &self.der
    }

    /// Coefficients of `e_i · m_x`.
    pub fn basis_left(&self, i: usize, x: usize) -> &[Scalar] {
        &self.left[i][x]
    }

    /// Coefficients of `m_x · e_i`.
    pub fn basis_right(&self, x: usize, i: usize) -> &[Scalar] {
        &self.right[x][i]
    }

    pub fn act_left(&self, a: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        bilinear(&self.left, a, m, self.dim)
    }

    pub fn act_right(&self, m: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        bilinear(&self.right, m, a, self.dim)
    }

    pub fn d(&self, m: &[Scalar]) -> Vec<Scalar> {
        self.der.mul_vec(m).expect("module derivation is square of dim")
    }

    pub fn basis_vec(&self, x: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[x] = Scalar::one();
        v
    }

    /// Full validation: action axioms plus the weighted Leibniz rules.
    /// Does not re-validate the underlying algebra; compose with
    /// [`DifferentialAlgebra::validate`] if that is also in question.
    pub fn validate(&self) -> ValidationReport {
        let mut findings = Vec::new();
        self.validate_assoc_into("", &mut findings);
        self.validate_leibniz_into("", &mut findings);
        ValidationReport { findings }
    }

    /// Only the associative bimodule axioms (actions and unit), skipping
    /// the differential compatibility. The twisted actions built by
    /// [`triangle_bimodule`] are only claimed to satisfy these.
    pub fn validate_associative(&self) -> ValidationReport {
        let mut findings = Vec::new();
        self.validate_assoc_into("", &mut findings);
        ValidationReport { findings }
    }

    fn validate_assoc_into(&self, scope: &'static str, findings: &mut Vec<Finding>) {
        let a = self.algebra.dim();
        for i in 0..a {
            let ei = self.algebra.basis_vec(i);
            for j in 0..a {
                let ej = self.algebra.basis_vec(j);
                let prod = self.algebra.multiply(&ei, &ej);
                for x in 0..self.dim {
                    let mx = self.basis_vec(x);
                    if self.act_left(&prod, &mx) != self.act_left(&ei, &self.act_left(&ej, &mx)) {
                        findings.push(Finding {
                            scope,
                            violation: Violation::LeftActionAssoc { i, j, x },
                        });
                    }
                    if self.act_right(&mx, &prod) != self.act_right(&self.act_right(&mx, &ei), &ej) {
                        findings.push(Finding {
                            scope,
                            violation: Violation::RightActionAssoc { x, i, j },
                        });
                    }
                    if self.act_right(&self.act_left(&ei, &mx), &ej)
                        != self.act_left(&ei, &self.act_right(&mx, &ej))
                    {
                        findings.push(Finding {
                            scope,
                            violation: Violation::MiddleActionAssoc { i, x, j },
                        });
                    }
                }
            }
        }
        for x in 0..self.dim {
            let mx = self.basis_vec(x);
            if self.act_left(self.algebra.unit(), &mx) != mx {
                findings.push(Finding {
                    scope,
                    violation: Violation::LeftActionUnit { x },
                });
            }
            if self.act_right(&mx, self.algebra.unit()) != mx {
                findings.push(Finding {
                    scope,
                    violation: Violation::RightActionUnit { x },
                });
            }
        }
    }

    fn validate_leibniz_into(&self, scope: &'static str, findings: &mut Vec<Finding>) {
        let a = self.algebra.dim();
        let lam = self.algebra.weight().clone();
        for i in 0..a {
            let ei = self.algebra.basis_vec(i);
            let di = self.algebra.d(&ei);
            for x in 0..self.dim {
                let mx = self.basis_vec(x);
                let dx = self.d(&mx);
                let lhs = self.d(&self.act_left(&ei, &mx));
                let mut rhs = vec_add(&self.act_left(&di, &mx), &self.act_left(&ei, &dx));
                rhs = vec_add(&rhs, &vec_scale(&lam, &self.act_left(&di, &dx)));
                if lhs != rhs {
                    findings.push(Finding {
                        scope,
                        violation: Violation::LeftActionLeibniz { i, x },
                    });
                }
                let lhs = self.d(&self.act_right(&mx, &ei));
                let mut rhs = vec_add(&self.act_right(&dx, &ei), &self.act_right(&mx, &di));
                rhs = vec_add(&rhs, &vec_scale(&lam, &self.act_right(&dx, &di)));
                if lhs != rhs {
                    findings.push(Finding {
                        scope,
                        violation: Violation::RightActionLeibniz { x, i },
                    });
                }
            }
        }
    }
}

/// A morphism of differential algebras: an algebra map commuting with the
/// differentials. `matrix` is `target.dim × source.dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffAlgebraMorphism {
    source: DifferentialAlgebra,
    target: DifferentialAlgebra,
    matrix: Matrix,
}

impl DiffAlgebraMorphism {
    pub fn new(source: DifferentialAlgebra, target: DifferentialAlgebra, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() {
            return Err(Error::Dimension {
                context: "morphism matrix rows",
                expected: target.dim(),
                got: matrix.rows(),
            });
        }
        if matrix.cols() != source.dim() {
            return Err(Error::Dimension {
                context: "morphism matrix cols",
                expected: source.dim(),
                got: matrix.cols(),
            });
        }
        Ok(DiffAlgebraMorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(algebra: DifferentialAlgebra) -> Self {
        let matrix = Matrix::identity(algebra.dim());
        DiffAlgebraMorphism {
            source: algebra.clone(),
            target: algebra,
            matrix,
        }
    }

    pub fn source(&self) -> &DifferentialAlgebra {
        &self.source
    }

    pub fn target(&self) -> &DifferentialAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(x).expect("morphism matrix shape")
    }

    /// Validates both algebras and the morphism axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut findings = Vec::new();
        self.source.validate_into("source algebra", &mut findings);
        self.target.validate_into("target algebra", &mut findings);
        self.validate_own_into(&mut findings);
        ValidationReport { findings }
    }

    fn validate_own_into(&self, findings: &mut Vec<Finding>) {
        if self.source.weight() != self.target.weight() {
            findings.push(Finding {
                scope: "morphism",
                violation: Violation::WeightMismatch,
            });
        }
        let a = self.source.dim();
        for i in 0..a {
            for j in 0..a {
                let (ei, ej) = (self.source.basis_vec(i), self.source.basis_vec(j));
                let lhs = self.apply(&self.source.multiply(&ei, &ej));
                let rhs = self.target.multiply(&self.apply(&ei), &self.apply(&ej));
                if lhs != rhs {
                    findings.push(Finding {
                        scope: "morphism",
                        violation: Violation::MorphismProduct { i, j },
                    });
                }
            }
        }
        if self.apply(self.source.unit()) != self.target.unit() {
            findings.push(Finding {
                scope: "morphism",
                violation: Violation::MorphismUnit,
            });
        }
        for j in 0..a {
            let ej = self.source.basis_vec(j);
            if self.apply(&self.source.d(&ej)) != self.target.d(&self.apply(&ej)) {
                findings.push(Finding {
                    scope: "morphism",
                    violation: Violation::MorphismDifferential { j },
                });
            }
        }
    }
}

/// Coefficients for a morphism `φ: A → B`: a differential bimodule `M`
/// over `A`, one `N` over `B`, and a map `ψ: M → N` that intertwines the
/// actions through `φ` and the operators through the module derivations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiBimodule {
    morphism: DiffAlgebraMorphism,
    m: DifferentialBimodule,
    n: DifferentialBimodule,
    /// `n.dim × m.dim`
    psi: Matrix,
}

impl PhiBimodule {
    pub fn new(
        morphism: DiffAlgebraMorphism,
        m: DifferentialBimodule,
        n: DifferentialBimodule,
        psi: Matrix,
    ) -> Result<Self> {
        if psi.rows() != n.dim() {
            return Err(Error::Dimension {
                context: "psi matrix rows",
                expected: n.dim(),
                got: psi.rows(),
            });
        }
        if psi.cols() != m.dim() {
            return Err(Error::Dimension {
                context: "psi matrix cols",
                expected: m.dim(),
                got: psi.cols(),
            });
        }
        Ok(PhiBimodule { morphism, m, n, psi })
    }

    /// The default coefficients: `A` and `B` acting on themselves, with
    /// `ψ = φ`.
    pub fn self_coefficients(morphism: DiffAlgebraMorphism) -> Self {
        let m = DifferentialBimodule::regular(morphism.source().clone());
        let n = DifferentialBimodule::regular(morphism.target().clone());
        let psi = morphism.matrix().clone();
        PhiBimodule { morphism, m, n, psi }
    }

    pub fn morphism(&self) -> &DiffAlgebraMorphism {
        &self.morphism
    }

    pub fn module_m(&self) -> &DifferentialBimodule {
        &self.m
    }

    pub fn module_n(&self) -> &DifferentialBimodule {
        &self.n
    }

    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    pub fn apply_psi(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.psi.mul_vec(x).expect("psi matrix shape")
    }

    /// Validates the morphism, both modules, and the `ψ` compatibility.
    pub fn validate(&self) -> ValidationReport {
        let mut findings = Vec::new();
        self.morphism.source.validate_into("source algebra", &mut findings);
        self.morphism.target.validate_into("target algebra", &mut findings);
        self.morphism.validate_own_into(&mut findings);
        if self.m.algebra != self.morphism.source {
            findings.push(Finding {
                scope: "module m",
                violation: Violation::WrongBaseAlgebra,
            });
        }
        if self.n.algebra != self.morphism.target {
            findings.push(Finding {
                scope: "module n",
                violation: Violation::WrongBaseAlgebra,
            });
        }
        self.m.validate_assoc_into("module m", &mut findings);
        self.m.validate_leibniz_into("module m", &mut findings);
        self.n.validate_assoc_into("module n", &mut findings);
        self.n.validate_leibniz_into("module n", &mut findings);
        self.validate_psi_into(&mut findings);
        ValidationReport { findings }
    }

    fn validate_psi_into(&self, findings: &mut Vec<Finding>) {
        let a = self.morphism.source.dim();
        for i in 0..a {
            let ei = self.morphism.source.basis_vec(i);
            let phi_i = self.morphism.apply(&ei);
            for x in 0..self.m.dim() {
                let mx = self.m.basis_vec(x);
                let psi_x = self.apply_psi(&mx);
                if self.apply_psi(&self.m.act_left(&ei, &mx)) != self.n.act_left(&phi_i, &psi_x) {
                    findings.push(Finding {
                        scope: "psi",
                        violation: Violation::MapLeftAction { i, x },
                    });
                }
                if self.apply_psi(&self.m.act_right(&mx, &ei)) != self.n.act_right(&psi_x, &phi_i) {
                    findings.push(Finding {
                        scope: "psi",
                        violation: Violation::MapRightAction { x, i },
                    });
                }
            }
        }
        for x in 0..self.m.dim() {
            let mx = self.m.basis_vec(x);
            if self.apply_psi(&self.m.d(&mx)) != self.n.d(&self.apply_psi(&mx)) {
                findings.push(Finding {
                    scope: "psi",
                    violation: Violation::MapDifferential { x },
                });
            }
        }
    }
}

/// Replace both actions of `M` by their twisted versions
/// `a ▷ m = (a + λ d(a))·m` and `m ◁ a = m·(a + λ d(a))`; the operator and
/// underlying space are unchanged.
pub fn triangle_bimodule(module: &DifferentialBimodule) -> DifferentialBimodule {
    let alg = &module.algebra;
    let a = alg.dim();
    let dim = module.dim;
    let mut left = vec![vec![vec![Scalar::zero(); dim]; dim]; a];
    let mut right = vec![vec![vec![Scalar::zero(); dim]; a]; dim];
    for i in 0..a {
        let tv = alg.triangle_vec(i);
        for (j, c) in tv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for x in 0..dim {
                for y in 0..dim {
                    let l = &module.left[j][x][y];
                    if !l.is_zero() {
                        left[i][x][y] += c * l;
                    }
                    let r = &module.right[x][j][y];
                    if !r.is_zero() {
                        right[x][i][y] += c * r;
                    }
                }
            }
        }
    }
    DifferentialBimodule {
        algebra: module.algebra.clone(),
        dim,
        left,
        right,
        der: module.der.clone(),
    }
}

/// Twist both modules of a `φ`-bimodule; `ψ` itself is unchanged.
pub fn triangle_phi_bimodule(p: &PhiBimodule) -> PhiBimodule {
    PhiBimodule {
        morphism: p.morphism.clone(),
        m: triangle_bimodule(&p.m),
        n: triangle_bimodule(&p.n),
        psi: p.psi.clone(),
    }
}

/// The mapping ring `φ! = A ⊕ B ⊕ Bφ` of a morphism `φ: A → B`.
///
/// Basis order is the `A` part, then the `B` part, then the `Bφ` part, so
/// `dim φ! = dim A + 2 dim B`. The product of `(a + b₁ + b₂φ)` and
/// `(a' + b₁' + b₂'φ)` is `aa' + b₁b₁' + (b₂ φ(a') + b₁ b₂')φ`; the unit
/// is `1_A + 1_B`, and the differential acts blockwise as `d_A, d_B, d_B`.
pub fn mapping_ring(phi: &DiffAlgebraMorphism) -> DifferentialAlgebra {
    let a = phi.source.dim();
    let b = phi.target.dim();
    let dim = a + 2 * b;
    let mut mul = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    // A · A stays in A.
    for i in 0..a {
        for j in 0..a {
            for k in 0..a {
                mul[i][j][k] = phi.source.mul[i][j][k].clone();
            }
        }
    }
    // B · B stays in B; B · Bφ lands in Bφ.
    for i in 0..b {
        for j in 0..b {
            for k in 0..b {
                mul[a + i][a + j][a + k] = phi.target.mul[i][j][k].clone();
                mul[a + i][a + b + j][a + b + k] = phi.target.mul[i][j][k].clone();
            }
        }
    }
    // (bφ) · a = (b · φ(a))φ.
    for i in 0..b {
        for j in 0..a {
            let phi_j = phi.matrix.column(j);
            for (l, c) in phi_j.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for k in 0..b {
                    let w = &phi.target.mul[i][l][k];
                    if !w.is_zero() {
                        mul[a + b + i][j][a + b + k] += c * w;
                    }
                }
            }
        }
    }
    let mut unit = vec![Scalar::zero(); dim];
    unit[..a].clone_from_slice(phi.source.unit());
    unit[a..a + b].clone_from_slice(phi.target.unit());
    let mut der = Matrix::zero(dim, dim);
    der.embed(phi.source.der(), 0, 0);
    der.embed(phi.target.der(), a, a);
    der.embed(phi.target.der(), a + b, a + b);
    DifferentialAlgebra {
        dim,
        mul,
        unit,
        weight: phi.source.weight.clone(),
        der,
    }
}

/// The mapping module `ψ! = M ⊕ N ⊕ Nφ` over [`mapping_ring`]`(φ)`.
///
/// Left action: `(a + b₁ + b₂φ)(m + n₁ + n₂φ) = a·m + b₁·n₁ +
/// (b₂·ψ(m) + b₁·n₂)φ`; right action:
/// `(m + n₁ + n₂φ)(a + b₁ + b₂φ) = m·a + n₁·b₁ + (n₂·φ(a) + n₁·b₂)φ`.
/// The operator acts blockwise as `d_M, d_N, d_N`.
pub fn mapping_module(p: &PhiBimodule) -> DifferentialBimodule {
    let phi = &p.morphism;
    let ring = mapping_ring(phi);
    let a = phi.source.dim();
    let b = phi.target.dim();
    let m = p.m.dim();
    let n = p.n.dim();
    let dim = m + 2 * n;
    let adim = a + 2 * b;
    let mut left = vec![vec![vec![Scalar::zero(); dim]; dim]; adim];
    let mut right = vec![vec![vec![Scalar::zero(); dim]; adim]; dim];

    // a · m  (A on M)
    for i in 0..a {
        for x in 0..m {
            for y in 0..m {
                left[i][x][y] = p.m.left[i][x][y].clone();
            }
        }
    }
    // b · n₁ and b · (n₂φ)  (B on N and on Nφ)
    for i in 0..b {
        for x in 0..n {
            for y in 0..n {
                left[a + i][m + x][m + y] = p.n.left[i][x][y].clone();
                left[a + i][m + n + x][m + n + y] = p.n.left[i][x][y].clone();
            }
        }
    }
    // (bφ) · m = (b · ψ(m))φ
    for i in 0..b {
        for x in 0..m {
            let psi_x = p.psi.column(x);
            for (l, c) in psi_x.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for y in 0..n {
                    let w = &p.n.left[i][l][y];
                    if !w.is_zero() {
                        left[a + b + i][x][m + n + y] += c * w;
                    }
                }
            }
        }
    }
    // m · a  (M by A)
    for x in 0..m {
        for j in 0..a {
            for y in 0..m {
                right[x][j][y] = p.m.right[x][j][y].clone();
            }
        }
    }
    // n₁ · b and n₁ · (b φ) = (n₁ b)φ
    for x in 0..n {
        for j in 0..b {
            for y in 0..n {
                right[m + x][a + j][m + y] = p.n.right[x][j][y].clone();
                right[m + x][a + b + j][m + n + y] = p.n.right[x][j][y].clone();
            }
        }
    }
    // (n₂φ) · a = (n₂ · φ(a))φ
    for x in 0..n {
        for j in 0..a {
            let phi_j = phi.matrix.column(j);
            for (l, c) in phi_j.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for y in 0..n {
                    let w = &p.n.right[x][l][y];
                    if !w.is_zero() {
                        right[m + n + x][j][m + n + y] += c * w;
                    }
                }
            }
        }
    }
    let mut der = Matrix::zero(dim, dim);
    der.embed(p.m.der(), 0, 0);
    der.embed(p.n.der(), m, m);
    der.embed(p.n.der(), m + n, m + n);
    DifferentialBimodule {
        algebra: ring,
        dim,
        left,
        right,
        der,
    }
}

/// One violated axiom, with the basis indices witnessing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    /// Which constituent the violation sits in ("" means the object itself).
    pub scope: &'static str,
    pub violation: Violation,
}

/// The axioms a validator can flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
    Leibniz { i: usize, j: usize },
    LeftActionAssoc { i: usize, j: usize, x: usize },
    RightActionAssoc { x: usize, i: usize, j: usize },
    MiddleActionAssoc { i: usize, x: usize, j: usize },
    LeftActionUnit { x: usize },
    RightActionUnit { x: usize },
    LeftActionLeibniz { i: usize, x: usize },
    RightActionLeibniz { x: usize, i: usize },
    MorphismProduct { i: usize, j: usize },
    MorphismUnit,
    MorphismDifferential { j: usize },
    WeightMismatch,
    WrongBaseAlgebra,
    MapLeftAction { i: usize, x: usize },
    MapRightAction { x: usize, i: usize },
    MapDifferential { x: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            Associativity { i, j, k } => write!(f, "associativity fails at basis ({i}, {j}, {k})"),
            LeftUnit { i } => write!(f, "1·e_{i} differs from e_{i}"),
            RightUnit { i } => write!(f, "e_{i}·1 differs from e_{i}"),
            Leibniz { i, j } => write!(f, "weighted Leibniz rule fails at basis ({i}, {j})"),
            LeftActionAssoc { i, j, x } => write!(f, "(e_{i}e_{j})·m_{x} differs from e_{i}·(e_{j}·m_{x})"),
            RightActionAssoc { x, i, j } => write!(f, "m_{x}·(e_{i}e_{j}) differs from (m_{x}·e_{i})·e_{j}"),
            MiddleActionAssoc { i, x, j } => write!(f, "(e_{i}·m_{x})·e_{j} differs from e_{i}·(m_{x}·e_{j})"),
            LeftActionUnit { x } => write!(f, "1·m_{x} differs from m_{x}"),
            RightActionUnit { x } => write!(f, "m_{x}·1 differs from m_{x}"),
            LeftActionLeibniz { i, x } => write!(f, "weighted Leibniz rule fails for e_{i}·m_{x}"),
            RightActionLeibniz { x, i } => write!(f, "weighted Leibniz rule fails for m_{x}·e_{i}"),
            MorphismProduct { i, j } => write!(f, "φ(e_{i}e_{j}) differs from φ(e_{i})φ(e_{j})"),
            MorphismUnit => write!(f, "φ does not preserve the unit"),
            MorphismDifferential { j } => write!(f, "φ∘d and d∘φ differ at basis {j}"),
            WeightMismatch => write!(f, "source and target weights differ"),
            WrongBaseAlgebra => write!(f, "module is not over the expected algebra"),
            MapLeftAction { i, x } => write!(f, "ψ(e_{i}·m_{x}) differs from φ(e_{i})·ψ(m_{x})"),
            MapRightAction { x, i } => write!(f, "ψ(m_{x}·e_{i}) differs from ψ(m_{x})·φ(e_{i})"),
            MapDifferential { x } => write!(f, "ψ∘d and d∘ψ differ at basis {x}"),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scope.is_empty() {
            write!(f, "{}", self.violation)
        } else {
            write!(f, "{}: {}", self.scope, self.violation)
        }
    }
}

/// All axioms violated by an object; empty means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }

    /// Human-readable one-line-per-finding rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for finding in &self.findings {
            out.push_str(&format!("{finding}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    /// `F[x]/(x²)` with `d(x) = x`, any weight.
    pub(crate) fn dual_numbers(weight: Scalar) -> DifferentialAlgebra {
        let z = Scalar::zero;
        let o = Scalar::one;
        let mul = vec![
            vec![vec![o(), z()], vec![z(), o()]],
            vec![vec![z(), o()], vec![z(), z()]],
        ];
        let der = Matrix::from_rows(vec![vec![z(), z()], vec![z(), o()]]).unwrap();
        DifferentialAlgebra::new(2, mul, vec![o(), z()], weight, der).unwrap()
    }

    /// The ground field as a differential algebra with `d = 0`.
    pub(crate) fn ground_field(weight: Scalar) -> DifferentialAlgebra {
        DifferentialAlgebra::new(
            1,
            vec![vec![vec![Scalar::one()]]],
            vec![Scalar::one()],
            weight,
            Matrix::zero(1, 1),
        )
        .unwrap()
    }

    /// FIX-2 shape: dual numbers → ground field, `x ↦ 0`, weight 0.
    pub(crate) fn collapse_morphism() -> DiffAlgebraMorphism {
        let a = dual_numbers(Scalar::zero());
        let b = ground_field(Scalar::zero());
        let phi = Matrix::from_rows(vec![vec![s(1), s(0)]]).unwrap();
        DiffAlgebraMorphism::new(a, b, phi).unwrap()
    }

    #[test]
    fn dual_numbers_are_valid_for_any_weight() {
        for w in [Scalar::zero(), Scalar::one(), Scalar::new(1, 2)] {
            let a = dual_numbers(w);
            assert!(a.validate().is_valid(), "{}", a.validate().render());
            let m = DifferentialBimodule::regular(a);
            assert!(m.validate().is_valid());
        }
    }

    #[test]
    fn broken_derivation_is_reported_with_indices() {
        // d(1) = 1 violates the Leibniz rule at (0, 0) among others.
        let mut a = dual_numbers(Scalar::zero());
        a.der = Matrix::identity(2);
        let report = a.validate();
        assert!(!report.is_valid());
        assert!(report
            .findings
            .iter()
            .any(|f| f.violation == Violation::Leibniz { i: 0, j: 0 }));
    }

    #[test]
    fn collapse_morphism_is_valid() {
        let phi = collapse_morphism();
        assert!(phi.validate().is_valid(), "{}", phi.validate().render());
        let p = PhiBimodule::self_coefficients(phi);
        assert!(p.validate().is_valid(), "{}", p.validate().render());
    }

    #[test]
    fn weight_mismatch_is_flagged() {
        let a = dual_numbers(Scalar::one());
        let b = ground_field(Scalar::zero());
        let phi = Matrix::from_rows(vec![vec![s(1), s(0)]]).unwrap();
        let m = DiffAlgebraMorphism::new(a, b, phi).unwrap();
        assert!(m
            .validate()
            .findings
            .iter()
            .any(|f| f.violation == Violation::WeightMismatch));
    }

    #[test]
    fn triangle_action_twists_by_the_derivation() {
        // Weight 1 on the dual numbers: x ▷ m = (x + d(x))·m = 2x·m.
        let a = dual_numbers(Scalar::one());
        let tri = triangle_bimodule(&DifferentialBimodule::regular(a.clone()));
        let one = tri.basis_vec(0);
        let got = tri.act_left(&a.basis_vec(1), &one);
        assert_eq!(got, vec![s(0), s(2)]);
        // x ▷ x = 2x² = 0.
        assert!(tri.act_left(&a.basis_vec(1), &tri.basis_vec(1)).iter().all(Scalar::is_zero));
        assert!(tri.validate_associative().is_valid());
        // weight 0 leaves the actions untouched
        let b = dual_numbers(Scalar::zero());
        let reg = DifferentialBimodule::regular(b);
        assert_eq!(triangle_bimodule(&reg), reg);
    }

    #[test]
    fn triangled_phi_bimodule_still_validates() {
        let p = PhiBimodule::self_coefficients(collapse_morphism());
        let t = triangle_phi_bimodule(&p);
        assert!(t.validate().is_valid(), "{}", t.validate().render());
    }

    #[test]
    fn mapping_ring_products() {
        // Collapse morphism: A = dual numbers (indices 0, 1), B = ground
        // field (index 2), Bφ (index 3).
        let phi = collapse_morphism();
        let ring = mapping_ring(&phi);
        assert_eq!(ring.dim(), 4);
        assert!(ring.validate().is_valid(), "{}", ring.validate().render());
        // (1_B φ)·1_A = 1_B φ
        assert_eq!(ring.multiply(&ring.basis_vec(3), &ring.basis_vec(0)), ring.basis_vec(3));
        // (1_B φ)·x = φ(x)φ = 0
        assert!(ring.multiply(&ring.basis_vec(3), &ring.basis_vec(1)).iter().all(Scalar::is_zero));
        // 1_B·(1_B φ) = 1_B φ ; (1_B φ)·(1_B φ) = 0 ; x·1_B = 0
        assert_eq!(ring.multiply(&ring.basis_vec(2), &ring.basis_vec(3)), ring.basis_vec(3));
        assert!(ring.multiply(&ring.basis_vec(3), &ring.basis_vec(3)).iter().all(Scalar::is_zero));
        assert!(ring.multiply(&ring.basis_vec(1), &ring.basis_vec(2)).iter().all(Scalar::is_zero));
        // unit is 1_A + 1_B
        assert_eq!(ring.unit(), &[s(1), s(0), s(1), s(0)]);
    }

    #[test]
    fn mapping_module_validates_over_mapping_ring() {
        let p = PhiBimodule::self_coefficients(collapse_morphism());
        let module = mapping_module(&p);
        assert_eq!(module.dim(), 4);
        assert!(module.validate().is_valid(), "{}", module.validate().render());
        assert!(module.algebra().validate().is_valid());
    }

    #[test]
    fn identity_morphism_mapping_ring_validates() {
        for w in [Scalar::zero(), Scalar::one()] {
            let a = dual_numbers(w);
            let phi = DiffAlgebraMorphism::identity(a);
            assert!(phi.validate().is_valid());
            let ring = mapping_ring(&phi);
            assert!(ring.validate().is_valid(), "{}", ring.validate().render());
            let module = mapping_module(&PhiBimodule::self_coefficients(phi));
            assert!(module.validate().is_valid(), "{}", module.validate().render());
        }
    }
}
