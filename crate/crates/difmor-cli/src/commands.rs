//! Command implementations. The binary is a thin argument parser over
//! these functions so the test suite can drive them directly.
//!
//! Outcome mapping: `Ok(report)` exits 0 when `report.ok` and 1 when a
//! mathematical check failed (the report still carries the findings);
//! `Err(Failure::Input)` exits 2 and `Err(Failure::Internal)` exits 3.

use std::time::Instant;

use difmor_core::cct::{build_da_tower, build_mor_tower, certify};
use difmor_core::cohomology::{cohomology, is_cocycle};
use difmor_core::complexes::{
    da_delta, do_delta, hochschild_delta, morphism_delta, rho_delta, ComplexSlice,
};
use difmor_core::deformation::{
    are_equivalent, infinitesimal, trivialize, validate_deformation, GaugePair,
    TrivializeOutcome, TruncatedDeformation,
};
use difmor_core::structures::{DifferentialBimodule, PhiBimodule};
use difmor_core::{Error, Scalar};

use crate::fixtures;
use crate::problem::{matrix_to_rows, ProblemFile, Rational, ResolvedProblem};
use crate::report::{
    CctSummary, DeformOut, GaugeLayerOut, GaugeOut, Report, NOTE_CONE_DEGREE_ZERO,
    NOTE_OPERATOR_WEIGHT_TERM,
};

/// Non-report failures: bad input exits 2, anything unexpected exits 3.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

pub type CmdResult = Result<Report, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    Alg,
    Do,
    Da,
    Mor,
    Cm,
}

impl ComplexKind {
    pub fn name(self) -> &'static str {
        match self {
            ComplexKind::Alg => "alg",
            ComplexKind::Do => "do",
            ComplexKind::Da => "da",
            ComplexKind::Mor => "mor",
            ComplexKind::Cm => "cm",
        }
    }
}

fn resolve(text: &str) -> Result<ResolvedProblem, Failure> {
    let file = ProblemFile::parse(text).map_err(Failure::Input)?;
    file.resolve().map_err(Failure::Input)
}

/// Run `f` over `0..count` on up to `threads` workers, preserving order.
pub fn parallel_map<U, F>(count: usize, threads: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync,
{
    let threads = threads.max(1).min(count.max(1));
    if threads <= 1 {
        return (0..count).map(f).collect();
    }
    let mut out: Vec<Option<U>> = Vec::with_capacity(count);
    out.resize_with(count, || None);
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                scope.spawn(move || {
                    let mut part = Vec::new();
                    let mut i = w;
                    while i < count {
                        part.push((i, f(i)));
                        i += threads;
                    }
                    part
                })
            })
            .collect();
        for h in handles {
            match h.join() {
                Ok(part) => {
                    for (i, v) in part {
                        out[i] = Some(v);
                    }
                }
                Err(payload) => std::panic::resume_unwind(payload),
            }
        }
    });
    out.into_iter().map(|v| v.expect("worker covered index")).collect()
}

/// Betti numbers of a differential tower `δ⁰ … δ^max`. A nonzero
/// composite is a mathematical finding (`Ok(Err(text))`); anything
/// else is internal.
fn betti_of_tower(slices: &[ComplexSlice]) -> Result<Result<Vec<usize>, String>, Failure> {
    let mut betti = Vec::with_capacity(slices.len());
    for n in 0..slices.len() {
        let below = if n == 0 { None } else { Some(&slices[n - 1]) };
        match cohomology(below, &slices[n]) {
            Ok(report) => betti.push(report.betti),
            Err(e @ Error::BrokenComplex { .. }) => return Ok(Err(e.to_string())),
            Err(e) => return Err(Failure::Internal(e.to_string())),
        }
    }
    Ok(Ok(betti))
}

fn validation_findings(problem: &ResolvedProblem) -> Vec<String> {
    let mut findings = Vec::new();
    for (name, a) in &problem.algebras {
        for f in &a.validate().findings {
            findings.push(format!("algebra {name}: {f}"));
        }
    }
    for (name, m) in &problem.morphisms {
        for f in &m.validate().findings {
            findings.push(format!("morphism {name}: {f}"));
        }
    }
    for (name, b) in &problem.bimodules {
        for f in &b.validate().findings {
            findings.push(format!("bimodule {name}: {f}"));
        }
    }
    for (name, d) in &problem.deformations {
        for f in &validate_deformation(d).findings {
            findings.push(format!("deformation {name}: {f}"));
        }
    }
    findings
}

fn note_weight(report: &mut Report, weight: &Scalar) {
    if !weight.is_zero() {
        report.note(NOTE_OPERATOR_WEIGHT_TERM);
    }
}

pub fn cmd_validate(text: &str, label: &str) -> CmdResult {
    let start = Instant::now();
    let problem = resolve(text)?;
    let mut report = Report::new(format!("validate {label}"));
    report.findings = validation_findings(&problem);
    report.ok = report.findings.is_empty();
    if !problem.deformations.is_empty() {
        note_weight(&mut report, &problem.weight);
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn cmd_cohomology(
    text: &str,
    label: &str,
    kind: ComplexKind,
    max_degree: usize,
    algebra: Option<&str>,
    morphism: Option<&str>,
    bimodule: Option<&str>,
    threads: usize,
) -> CmdResult {
    let start = Instant::now();
    let problem = resolve(text)?;
    let mut report = Report::new(format!(
        "cohomology {label} --complex {} --max-degree {max_degree}",
        kind.name()
    ));

    let slices: Vec<ComplexSlice> = match kind {
        ComplexKind::Alg | ComplexKind::Do | ComplexKind::Da => {
            let a = problem.pick_algebra(algebra).map_err(Failure::Input)?;
            for f in &a.validate().findings {
                report.findings.push(f.to_string());
            }
            if !report.findings.is_empty() {
                report.ok = false;
                report.elapsed_ms = start.elapsed().as_millis();
                return Ok(report);
            }
            let module = DifferentialBimodule::regular(a.clone());
            parallel_map(max_degree + 1, threads, |n| match kind {
                ComplexKind::Alg => hochschild_delta(&module, n),
                ComplexKind::Do => do_delta(&module, n),
                _ => da_delta(&module, n),
            })
        }
        ComplexKind::Mor | ComplexKind::Cm => {
            let p = problem
                .pick_coefficients(bimodule, morphism)
                .map_err(Failure::Input)?;
            for f in &p.validate().findings {
                report.findings.push(f.to_string());
            }
            if !report.findings.is_empty() {
                report.ok = false;
                report.elapsed_ms = start.elapsed().as_millis();
                return Ok(report);
            }
            if kind == ComplexKind::Cm {
                report.note(NOTE_CONE_DEGREE_ZERO);
            }
            parallel_map(max_degree + 1, threads, |n| match kind {
                ComplexKind::Mor => morphism_delta(&p, n),
                _ => rho_delta(&p, n),
            })
        }
    };

    match betti_of_tower(&slices)? {
        Ok(betti) => {
            report.betti.insert(kind.name().to_string(), betti);
            report.ok = true;
        }
        Err(finding) => {
            report.findings.push(finding);
            report.ok = false;
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn cmd_cct(
    text: &str,
    label: &str,
    max_degree: usize,
    morphism: Option<&str>,
    bimodule: Option<&str>,
    threads: usize,
) -> CmdResult {
    let start = Instant::now();
    let problem = resolve(text)?;
    let mut report = Report::new(format!("cct {label} --max-degree {max_degree}"));
    let p = problem
        .pick_coefficients(bimodule, morphism)
        .map_err(Failure::Input)?;
    for f in &p.validate().findings {
        report.findings.push(f.to_string());
    }
    if !report.findings.is_empty() {
        report.ok = false;
        report.elapsed_ms = start.elapsed().as_millis();
        return Ok(report);
    }
    report.note(NOTE_CONE_DEGREE_ZERO);

    let towers = parallel_map(2, threads, |side| {
        if side == 0 {
            build_mor_tower(&p, max_degree)
        } else {
            build_da_tower(&p, max_degree)
        }
    });
    let mut towers = towers.into_iter();
    let mor = towers.next().expect("two towers");
    let da = towers.next().expect("two towers");

    match certify(&p, &mor, &da) {
        Ok(cert) => {
            let summary = CctSummary::from_certificate(&cert);
            report.ok = summary.passes;
            if !summary.passes {
                report
                    .findings
                    .push("comparison certificate does not pass".to_string());
            }
            report.betti.insert("mor".to_string(), summary.betti_mor.clone());
            report.betti.insert("da".to_string(), summary.betti_da.clone());
            report.certificate = Some(summary);
        }
        Err(Error::BrokenComplex { lower, upper }) => {
            report.findings.push(format!(
                "differentials at degrees {lower} and {upper} do not compose to zero"
            ));
            report.ok = false;
        }
        Err(e) => return Err(Failure::Internal(e.to_string())),
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn deform_report(
    problem: &ResolvedProblem,
    report: &mut Report,
    name: &str,
) -> Result<TruncatedDeformation, Failure> {
    let t = problem.pick_deformation(name).map_err(Failure::Input)?;
    note_weight(report, &problem.weight);
    Ok(t.clone())
}

fn push_deform_findings(report: &mut Report, name: &str, t: &TruncatedDeformation) -> bool {
    let validation = validate_deformation(t);
    for f in &validation.findings {
        report.findings.push(format!("deformation {name}: {f}"));
    }
    validation.is_valid()
}

fn gauge_out(g: &GaugePair) -> GaugeOut {
    GaugeOut {
        order: g.order(),
        layers: (1..=g.order())
            .map(|k| GaugeLayerOut {
                f_a: matrix_to_rows(&g.f_a()[k]),
                f_b: matrix_to_rows(&g.f_b()[k]),
            })
            .collect(),
    }
}

fn coords_out(coords: &[Scalar]) -> Vec<Rational> {
    coords.iter().map(Rational::from_scalar).collect()
}

pub fn cmd_deform_validate(text: &str, label: &str, name: &str) -> CmdResult {
    let start = Instant::now();
    let problem = resolve(text)?;
    let mut report = Report::new(format!("deform validate {label} --name {name}"));
    let t = deform_report(&problem, &mut report, name)?;
    report.ok = push_deform_findings(&mut report, name, &t);
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn cmd_deform_infinitesimal(text: &str, label: &str, name: &str) -> CmdResult {
    let start = Instant::now();
    let problem = resolve(text)?;
    let mut report = Report::new(format!("deform infinitesimal {label} --name {name}"));
    let t = deform_report(&problem, &mut report, name)?;
    report.note(NOTE_CONE_DEGREE_ZERO);
    let mut out = DeformOut::empty();
    match infinitesimal(&t) {
        Ok(cochain) => {
            let p = PhiBimodule::self_coefficients(t.base().clone());
            let rho2 = rho_delta(&p, 2);
            let cocycle = is_cocycle(&cochain, &rho2).map_err(|e| Failure::Internal(e.to_string()))?;
            out.is_cocycle = Some(cocycle);
            out.infinitesimal = Some(coords_out(&cochain.coords));
            report.ok = cocycle;
            if !cocycle {
                report
                    .findings
                    .push("infinitesimal is not a degree-2 cocycle".to_string());
            }
        }
        Err(Error::InvalidDeformation { detail }) => {
            report.findings.push(format!("deformation {name}: {detail}"));
            report.ok = false;
        }
        Err(e) => return Err(Failure::Internal(e.to_string())),
    }
    report.deformation = Some(out);
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn cmd_deform_equivalent(
    text: &str,
    label: &str,
    a: &str,
    b: &str,
    order: usize,
) -> CmdResult {
    let start = Instant::now();
    let problem = resolve(text)?;
    let mut report = Report::new(format!(
        "deform equivalent {label} --a {a} --b {b} --order {order}"
    ));
    let ta = deform_report(&problem, &mut report, a)?;
    let tb = problem.pick_deformation(b).map_err(Failure::Input)?.clone();
    report.note(NOTE_CONE_DEGREE_ZERO);
    let mut out = DeformOut::empty();
    match are_equivalent(&ta, &tb, order) {
        Ok(Some(gauge)) => {
            out.equivalent = Some(true);
            out.gauge = Some(gauge_out(&gauge));
            report.ok = true;
        }
        Ok(None) => {
            out.equivalent = Some(false);
            report.ok = true;
        }
        Err(Error::InvalidDeformation { detail }) => {
            report.findings.push(format!("invalid deformation: {detail}"));
            report.ok = false;
        }
        Err(Error::Incompatible { context }) => {
            return Err(Failure::Input(format!("incompatible inputs: {context}")))
        }
        Err(e) => return Err(Failure::Internal(e.to_string())),
    }
    report.deformation = Some(out);
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

pub fn cmd_deform_trivialize(text: &str, label: &str, name: &str, order: usize) -> CmdResult {
    let start = Instant::now();
    let problem = resolve(text)?;
    let mut report = Report::new(format!(
        "deform trivialize {label} --name {name} --order {order}"
    ));
    let t = deform_report(&problem, &mut report, name)?;
    report.note(NOTE_CONE_DEGREE_ZERO);
    let mut out = DeformOut::empty();

    let p = PhiBimodule::self_coefficients(t.base().clone());
    let rho1 = rho_delta(&p, 1);
    let rho2 = rho_delta(&p, 2);
    match cohomology(Some(&rho1), &rho2) {
        Ok(h2) => out.h2 = Some(h2.betti),
        Err(e) => return Err(Failure::Internal(e.to_string())),
    }

    match trivialize(&t, order) {
        Ok(TrivializeOutcome::Trivialized(gauge)) => {
            out.trivialized = Some(true);
            out.gauge = Some(gauge_out(&gauge));
            report.ok = true;
        }
        Ok(TrivializeOutcome::Obstructed { order, class }) => {
            out.trivialized = Some(false);
            out.obstruction_order = Some(order);
            out.obstruction_class = Some(coords_out(&class.coords));
            report.ok = true;
        }
        Err(Error::InvalidDeformation { detail }) => {
            report.findings.push(format!("deformation {name}: {detail}"));
            report.ok = false;
        }
        Err(e) => return Err(Failure::Internal(e.to_string())),
    }
    report.deformation = Some(out);
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Random property sweep: validity of generated fixtures, vanishing
/// composites, the comparison certificate, and a gauge round-trip.
pub fn cmd_selftest(seed: u64, threads: usize) -> CmdResult {
    use rand::SeedableRng;

    const COUNT: usize = 10;
    let start = Instant::now();
    let mut report = Report::new(format!("selftest --seed {seed}"));
    report.note(NOTE_CONE_DEGREE_ZERO);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..COUNT).map(|_| fixtures::random_morphism(&mut rng)).collect();
    let gauges: Vec<_> = cases
        .iter()
        .map(|m| fixtures::random_gauge(&mut rng, m.source().dim(), m.target().dim(), 2))
        .collect();

    let findings = parallel_map(cases.len(), threads, |i| {
        let m = &cases[i];
        let mut local = Vec::new();
        for f in &m.validate().findings {
            local.push(format!("case {i}: {f}"));
        }
        let p = PhiBimodule::self_coefficients(m.clone());
        let slices: Vec<_> = (0..=2).map(|n| rho_delta(&p, n)).collect();
        for n in 0..slices.len() {
            let below = if n == 0 { None } else { Some(&slices[n - 1]) };
            if let Err(e) = cohomology(below, &slices[n]) {
                local.push(format!("case {i}: cone degree {n}: {e}"));
            }
        }
        match certify(&p, &build_mor_tower(&p, 2), &build_da_tower(&p, 2)) {
            Ok(cert) if !cert.passes() => {
                local.push(format!("case {i}: comparison certificate does not pass"));
            }
            Ok(_) => {}
            Err(e) => local.push(format!("case {i}: comparison: {e}")),
        }
        let trivial = TruncatedDeformation::trivial(m.clone(), 2);
        let gauged = difmor_core::deformation::apply_gauge(&trivial, &gauges[i]);
        if !validate_deformation(&gauged).is_valid() {
            local.push(format!("case {i}: gauged trivial deformation is invalid"));
        }
        match are_equivalent(&gauged, &trivial, 2) {
            Ok(Some(_)) => {}
            Ok(None) => local.push(format!("case {i}: gauge round-trip found no gauge")),
            Err(e) => local.push(format!("case {i}: gauge round-trip: {e}")),
        }
        local
    });
    for group in findings {
        report.findings.extend(group);
    }
    report.ok = report.findings.is_empty();
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}
