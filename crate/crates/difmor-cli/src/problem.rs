//! JSON problem files: schema types, parsing, and resolution into the
//! core library's structures.
//!
//! Rationals are encoded as bare integers or strings `"p/q"`; structure
//! constants as sparse `[i, j, k, "c"]` lists with 0-based indices;
//! matrices as dense row lists. Everything resolves by name.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use difmor_core::deformation::{DeformationLayer, TruncatedDeformation};
use difmor_core::exactlin::{Matrix, Scalar};
use difmor_core::structures::{
    DiffAlgebraMorphism, DifferentialAlgebra, DifferentialBimodule, PhiBimodule, StructureTensor,
};

/// A rational number as it appears in problem files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Text(String),
}

impl Rational {
    pub fn to_scalar(&self) -> Result<Scalar, String> {
        match self {
            Rational::Int(n) => Ok(Scalar::from_int(*n)),
            Rational::Text(s) => Scalar::from_str(s).map_err(|e| e.to_string()),
        }
    }

    pub fn from_scalar(s: &Scalar) -> Rational {
        let printed = s.to_string();
        match i64::from_str(&printed) {
            Ok(n) => Rational::Int(n),
            Err(_) => Rational::Text(printed),
        }
    }
}

pub type SparseTriples = Vec<(usize, usize, usize, Rational)>;
pub type DenseRows = Vec<Vec<Rational>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDesc {
    pub dim: usize,
    /// `[i, j, k, c]`: coefficient of `e_k` in `e_i · e_j`.
    pub mul: SparseTriples,
    pub unit: Vec<Rational>,
    pub der: DenseRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismDesc {
    pub source: String,
    pub target: String,
    pub matrix: DenseRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDesc {
    pub dim: usize,
    /// `[i, x, y, c]`: coefficient of `m_y` in `e_i · m_x`.
    pub left: SparseTriples,
    /// `[x, i, y, c]`: coefficient of `m_y` in `m_x · e_i`.
    pub right: SparseTriples,
    pub der: DenseRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BimoduleDesc {
    pub morphism: String,
    pub m: ModuleDesc,
    pub n: ModuleDesc,
    pub psi: DenseRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerDesc {
    pub mu_a: DenseRows,
    pub d_a: DenseRows,
    pub mu_b: DenseRows,
    pub d_b: DenseRows,
    pub phi: DenseRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeformationDesc {
    pub morphism: String,
    pub order: usize,
    /// Coefficient layers for orders `1..=order`.
    pub layers: Vec<LayerDesc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub weight: Rational,
    pub algebras: BTreeMap<String, AlgebraDesc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismDesc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bimodules: BTreeMap<String, BimoduleDesc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub deformations: BTreeMap<String, DeformationDesc>,
}

/// Everything in a problem file, resolved into core structures. Shapes
/// and references are checked; mathematical axioms are not (run the
/// validators for that).
pub struct ResolvedProblem {
    pub weight: Scalar,
    pub algebras: BTreeMap<String, DifferentialAlgebra>,
    pub morphisms: BTreeMap<String, DiffAlgebraMorphism>,
    pub bimodules: BTreeMap<String, PhiBimodule>,
    pub deformations: BTreeMap<String, TruncatedDeformation>,
}

fn to_matrix(rows: &DenseRows, what: &str) -> Result<Matrix, String> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for v in row {
            r.push(v.to_scalar().map_err(|e| format!("{what}: {e}"))?);
        }
        out.push(r);
    }
    Matrix::from_rows(out).map_err(|e| format!("{what}: {e}"))
}

pub fn matrix_to_rows(m: &Matrix) -> DenseRows {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| Rational::from_scalar(&m.get(r, c))).collect())
        .collect()
}

fn to_tensor(
    triples: &SparseTriples,
    shape: (usize, usize, usize),
    what: &str,
) -> Result<StructureTensor, String> {
    let (d0, d1, d2) = shape;
    let mut t = vec![vec![vec![Scalar::zero(); d2]; d1]; d0];
    for (i, j, k, c) in triples {
        if *i >= d0 || *j >= d1 || *k >= d2 {
            return Err(format!("{what}: index [{i}, {j}, {k}] out of range for shape {d0}x{d1}x{d2}"));
        }
        let v = c.to_scalar().map_err(|e| format!("{what}: {e}"))?;
        t[*i][*j][*k] = &t[*i][*j][*k] + &v;
    }
    Ok(t)
}

pub fn tensor_to_triples(t: &StructureTensor) -> SparseTriples {
    let mut out = Vec::new();
    for (i, plane) in t.iter().enumerate() {
        for (j, row) in plane.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, k, Rational::from_scalar(c)));
                }
            }
        }
    }
    out
}

fn to_scalars(row: &[Rational], what: &str) -> Result<Vec<Scalar>, String> {
    row.iter()
        .map(|v| v.to_scalar().map_err(|e| format!("{what}: {e}")))
        .collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid problem file: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    pub fn resolve(&self) -> Result<ResolvedProblem, String> {
        let weight = self
            .weight
            .to_scalar()
            .map_err(|e| format!("weight: {e}"))?;
        let mut algebras = BTreeMap::new();
        for (name, desc) in &self.algebras {
            let what = format!("algebra `{name}`");
            let mul = to_tensor(&desc.mul, (desc.dim, desc.dim, desc.dim), &what)?;
            let unit = to_scalars(&desc.unit, &what)?;
            let der = to_matrix(&desc.der, &what)?;
            let alg = DifferentialAlgebra::new(desc.dim, mul, unit, weight.clone(), der)
                .map_err(|e| format!("{what}: {e}"))?;
            algebras.insert(name.clone(), alg);
        }
        let mut morphisms = BTreeMap::new();
        for (name, desc) in &self.morphisms {
            let what = format!("morphism `{name}`");
            let source = algebras
                .get(&desc.source)
                .ok_or_else(|| format!("{what}: unknown source algebra `{}`", desc.source))?;
            let target = algebras
                .get(&desc.target)
                .ok_or_else(|| format!("{what}: unknown target algebra `{}`", desc.target))?;
            let matrix = to_matrix(&desc.matrix, &what)?;
            let m = DiffAlgebraMorphism::new(source.clone(), target.clone(), matrix)
                .map_err(|e| format!("{what}: {e}"))?;
            morphisms.insert(name.clone(), m);
        }
        let mut bimodules = BTreeMap::new();
        for (name, desc) in &self.bimodules {
            let what = format!("bimodule `{name}`");
            let morphism = morphisms
                .get(&desc.morphism)
                .ok_or_else(|| format!("{what}: unknown morphism `{}`", desc.morphism))?;
            let m = resolve_module(morphism.source(), &desc.m, &what)?;
            let n = resolve_module(morphism.target(), &desc.n, &what)?;
            let psi = to_matrix(&desc.psi, &what)?;
            let p = PhiBimodule::new(morphism.clone(), m, n, psi)
                .map_err(|e| format!("{what}: {e}"))?;
            bimodules.insert(name.clone(), p);
        }
        let mut deformations = BTreeMap::new();
        for (name, desc) in &self.deformations {
            let what = format!("deformation `{name}`");
            if desc.layers.len() != desc.order {
                return Err(format!(
                    "{what}: order {} but {} layers",
                    desc.order,
                    desc.layers.len()
                ));
            }
            let morphism = morphisms
                .get(&desc.morphism)
                .ok_or_else(|| format!("{what}: unknown morphism `{}`", desc.morphism))?;
            let mut layers = Vec::with_capacity(desc.layers.len());
            for layer in &desc.layers {
                layers.push(DeformationLayer {
                    mu_a: to_matrix(&layer.mu_a, &what)?,
                    d_a: to_matrix(&layer.d_a, &what)?,
                    mu_b: to_matrix(&layer.mu_b, &what)?,
                    d_b: to_matrix(&layer.d_b, &what)?,
                    phi: to_matrix(&layer.phi, &what)?,
                });
            }
            let t = TruncatedDeformation::from_layers(morphism.clone(), layers)
                .map_err(|e| format!("{what}: {e}"))?;
            deformations.insert(name.clone(), t);
        }
        Ok(ResolvedProblem {
            weight,
            algebras,
            morphisms,
            bimodules,
            deformations,
        })
    }
}

fn resolve_module(
    algebra: &DifferentialAlgebra,
    desc: &ModuleDesc,
    what: &str,
) -> Result<DifferentialBimodule, String> {
    let a = algebra.dim();
    let left = to_tensor(&desc.left, (a, desc.dim, desc.dim), what)?;
    let right = to_tensor(&desc.right, (desc.dim, a, desc.dim), what)?;
    let der = to_matrix(&desc.der, what)?;
    DifferentialBimodule::new(algebra.clone(), desc.dim, left, right, der)
        .map_err(|e| format!("{what}: {e}"))
}

impl ResolvedProblem {
    /// The named morphism, or the only one if the name is omitted.
    pub fn pick_morphism(&self, name: Option<&str>) -> Result<&DiffAlgebraMorphism, String> {
        match name {
            Some(n) => self
                .morphisms
                .get(n)
                .ok_or_else(|| format!("unknown morphism `{n}`")),
            None => {
                if self.morphisms.len() == 1 {
                    Ok(self.morphisms.values().next().unwrap())
                } else {
                    Err(format!(
                        "file has {} morphisms; pick one with --morphism",
                        self.morphisms.len()
                    ))
                }
            }
        }
    }

    /// The named algebra, or the only one, or the sole morphism's source.
    pub fn pick_algebra(&self, name: Option<&str>) -> Result<&DifferentialAlgebra, String> {
        match name {
            Some(n) => self
                .algebras
                .get(n)
                .ok_or_else(|| format!("unknown algebra `{n}`")),
            None => {
                if self.algebras.len() == 1 {
                    Ok(self.algebras.values().next().unwrap())
                } else if self.morphisms.len() == 1 {
                    Ok(self.morphisms.values().next().unwrap().source())
                } else {
                    Err(format!(
                        "file has {} algebras; pick one with --algebra",
                        self.algebras.len()
                    ))
                }
            }
        }
    }

    /// Coefficients for morphism-level complexes: a named bimodule, or
    /// self-coefficients of the picked morphism.
    pub fn pick_coefficients(
        &self,
        bimodule: Option<&str>,
        morphism: Option<&str>,
    ) -> Result<PhiBimodule, String> {
        match bimodule {
            Some(n) => self
                .bimodules
                .get(n)
                .cloned()
                .ok_or_else(|| format!("unknown bimodule `{n}`")),
            None => Ok(PhiBimodule::self_coefficients(
                self.pick_morphism(morphism)?.clone(),
            )),
        }
    }

    /// The named deformation.
    pub fn pick_deformation(&self, name: &str) -> Result<&TruncatedDeformation, String> {
        self.deformations
            .get(name)
            .ok_or_else(|| format!("unknown deformation `{name}`"))
    }
}
