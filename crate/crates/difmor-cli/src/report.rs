//! Machine-readable reports, printed as JSON on standard output with
//! deterministic key order (struct field order; maps are sorted).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use difmor_core::cct::CctCertificate;

use crate::problem::{DenseRows, Rational};

/// Convention note attached to reports whenever the cone differential is
/// involved: the degree-0 layer pairs the comparison map with a plus
/// sign, and the alternating sign `(-1)^n` applies from degree 1 upward.
pub const NOTE_CONE_DEGREE_ZERO: &str = "convention: the degree-0 cone differential adds the comparison map with a plus sign; the alternating (-1)^n block sign starts at degree 1";

/// Convention note attached whenever deformation identities are expanded
/// at nonzero weight: the per-order operator identity keeps the
/// weight-scaled bilinear term.
pub const NOTE_OPERATOR_WEIGHT_TERM: &str = "convention: the per-order operator identity includes the weighted term lambda * sum mu_i(d_j (x) d_k); dropping it rejects valid deformations at nonzero weight";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CctSummary {
    pub max_degree: usize,
    pub betti_mor: Vec<usize>,
    pub betti_da: Vec<usize>,
    pub tau_chain_map_ok: bool,
    pub twisting_square_ok: bool,
    pub tau_induces_injection_ok: bool,
    pub passes: bool,
}

impl CctSummary {
    pub fn from_certificate(c: &CctCertificate) -> Self {
        CctSummary {
            max_degree: c.max_degree,
            betti_mor: c.betti_mor.clone(),
            betti_da: c.betti_da.clone(),
            tau_chain_map_ok: c.tau_chain_map_ok,
            twisting_square_ok: c.twisting_square_ok,
            tau_induces_injection_ok: c.tau_induces_injection_ok,
            passes: c.passes(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaugeOut {
    pub order: usize,
    /// Coefficient pairs for orders `1..=order`.
    pub layers: Vec<GaugeLayerOut>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaugeLayerOut {
    pub f_a: DenseRows,
    pub f_b: DenseRows,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeformOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_cocycle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infinitesimal: Option<Vec<Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivialized: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction_class: Option<Vec<Rational>>,
}

impl DeformOut {
    pub fn empty() -> Self {
        DeformOut {
            is_cocycle: None,
            infinitesimal: None,
            equivalent: None,
            trivialized: None,
            h2: None,
            gauge: None,
            obstruction_order: None,
            obstruction_class: None,
        }
    }
}

/// The report printed by every subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    /// Echo of the command being answered.
    pub command: String,
    /// Whether the checked property holds / the input is valid.
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
    /// Betti numbers per complex, indexed from degree 0.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub betti: BTreeMap<String, Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CctSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformOut>,
    /// Conventions in force on the code paths this command executed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ok: true,
            findings: Vec::new(),
            betti: BTreeMap::new(),
            certificate: None,
            deformation: None,
            notes: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn note(&mut self, note: &str) {
        if !self.notes.iter().any(|n| n == note) {
            self.notes.push(note.to_string());
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
