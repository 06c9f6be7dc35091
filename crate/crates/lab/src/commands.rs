//! Subcommand bodies. Each returns an [`Outcome`] holding the rendered
//! document and the process status.

use serde::Serialize;
use wavesym_core::check::{worst, Check};
use wavesym_core::clifford::{gamma_set, verify_clifford, CLIFFORD_TOL};
use wavesym_core::equations::{
    block_decomposition_residual, catalog_equation, catalog_equation_with, catalog_unitary,
    dispersion_residual, lambda_residual, verify_projectors, verify_transform_with, TransformReport,
    EQUATIONS, IDENTITY_TOL, UNITARIES,
};
use wavesym_core::linalg::CMatrix;
use wavesym_core::poincare::{
    algebra_residual, calibrate, chi_phi_covariance, content_by_sample, generator_set, AlgebraReport,
    IrrepLabel, X0_VALUES, ALGEBRA_TOL, SECOND_ORDER_TOL,
};
use wavesym_core::position::{verify_position, PositionReport, CANONICAL_TOL, POSITIONS};
use wavesym_core::symmetry::{classify_equation, verify_projection_relations, Verdict};
use wavesym_core::Error;

use crate::config::{Format, RunConfig, MIN_CLASSIFY_SAMPLES};
use crate::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Indeterminate = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn document<D: Serialize + Markdown>(cfg: &RunConfig, doc: &D, status: Status) -> Self {
        let stdout = match cfg.format {
            Format::Json => json::to_string(doc),
            Format::Md => doc.markdown(),
        };
        Self {
            status,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: Error) -> Self {
        let status = match err {
            Error::UnknownEquation(_)
            | Error::UnknownUnitary(_)
            | Error::UnknownGeneratorSet(_)
            | Error::UnknownPosition(_)
            | Error::UnknownGammaSet(_)
            | Error::InvalidParams(_)
            | Error::InvalidLabel(_) => Status::Usage,
            Error::Indeterminate { .. } => Status::Indeterminate,
            _ => Status::Fail,
        };
        Self::usage_or(status, format!("error: {err}"))
    }

    fn usage_or(status: Status, message: String) -> Self {
        Self {
            status,
            stdout: String::new(),
            stderr: message,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::usage_or(Status::Usage, message.into())
    }
}

/// Human-readable rendering; mirrors the JSON fields.
pub trait Markdown {
    fn markdown(&self) -> String;
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn flat_matrix(m: &CMatrix) -> Vec<[f64; 2]> {
    m.to_vec().iter().map(|c| [c.re, c.im]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementRow {
    pub label: String,
    pub invariant: bool,
    pub residual: f64,
    /// Solved intertwiner, row-major `[re, im]` pairs.
    pub matrix: Option<Vec<[f64; 2]>>,
    pub claim: Option<bool>,
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc {
    pub equation: String,
    pub elements: Vec<ElementRow>,
    pub agreement: bool,
    pub coherent: bool,
    pub coherence_residual: f64,
}

impl Markdown for ReportDoc {
    fn markdown(&self) -> String {
        let mut s = format!("# Discrete symmetries of `{}`\n\n", self.equation);
        s += "| element | verdict | residual | stated | agrees |\n|---|---|---|---|---|\n";
        for e in &self.elements {
            let verdict = if e.invariant { "invariant" } else { "non-invariant" };
            let claim = match e.claim {
                Some(true) => "invariant",
                Some(false) => "non-invariant",
                None => "",
            };
            let agrees = match e.agrees {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "",
            };
            s += &format!("| {} | {verdict} | {} | {claim} | {agrees} |\n", e.label, sci(e.residual));
        }
        s += &format!(
            "\nagreement: {}\ncoherent: {} (composition residual {})\n",
            self.agreement,
            self.coherent,
            sci(self.coherence_residual)
        );
        s
    }
}

pub fn report(cfg: &RunConfig, equation: &str) -> Outcome {
    if cfg.samples < MIN_CLASSIFY_SAMPLES {
        return Outcome::usage(format!(
            "classification needs --samples >= {MIN_CLASSIFY_SAMPLES}, got {}",
            cfg.samples
        ));
    }
    let run = || -> Result<ReportDoc, Error> {
        let eq = catalog_equation_with(equation, cfg.params(), cfg.options())?;
        let r = classify_equation(&eq, &cfg.solve())?;
        let elements = r
            .elements
            .iter()
            .map(|e| ElementRow {
                label: e.label.clone(),
                invariant: e.verdict.is_invariant(),
                residual: e.verdict.residual(),
                matrix: match &e.verdict {
                    Verdict::Invariant(m) => Some(flat_matrix(&m.matrix)),
                    Verdict::NonInvariant { .. } => None,
                },
                claim: e.claim,
                agrees: e.agrees(),
            })
            .collect();
        Ok(ReportDoc {
            equation: r.equation,
            elements,
            agreement: r.agreement,
            coherent: r.coherent,
            coherence_residual: r.coherence_residual,
        })
    };
    match run() {
        Ok(doc) => {
            let status = Status::from_pass(doc.agreement);
            Outcome::document(cfg, &doc, status)
        }
        Err(e) => Outcome::error(e),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyDoc {
    pub checks: Vec<Check>,
    pub worst: f64,
    pub failing: Vec<String>,
    pub pass: bool,
}

impl Markdown for VerifyDoc {
    fn markdown(&self) -> String {
        let mut s = String::from("# Verification summary\n\n| check | residual | tol | result |\n|---|---|---|---|\n");
        for c in &self.checks {
            s += &format!("| {} | {} | {} | {} |\n", c.name, sci(c.residual), sci(c.tol), mark(c.pass));
        }
        s += &format!("\n{} checks, {} failing\n", self.checks.len(), self.failing.len());
        for f in &self.failing {
            s += &format!("- failed: {f}\n");
        }
        s
    }
}

fn label_check(name: &str, got: &[IrrepLabel], want: &[(i8, i32)]) -> Check {
    let mut want: Vec<IrrepLabel> = want
        .iter()
        .map(|&(e, h)| IrrepLabel {
            energy_sign: e,
            twice_helicity: h,
        })
        .collect();
    want.sort();
    Check::new(name, if got == want.as_slice() { 0.0 } else { 1.0 }, 0.0)
}

/// Every verification in a fixed order.
pub fn collect_checks(cfg: &RunConfig) -> Result<Vec<Check>, Error> {
    let params = cfg.params();
    let mut out = Vec::new();
    for set in ["rep26", "weyl"] {
        let r = verify_clifford(&gamma_set(set)?);
        out.push(Check::new(format!("clifford.{set}"), r.residual, CLIFFORD_TOL));
    }
    for name in UNITARIES {
        let u = catalog_unitary(name, params)?;
        let r = verify_transform_with(&u, &cfg.momenta(u.d), params, cfg.options())?;
        out.push(Check::new(format!("transform.{name}"), r.residual, cfg.tol));
        out.push(Check::new(format!("transform.{name}.unitarity"), r.unitarity, IDENTITY_TOL));
        if let Some(e) = r.exponential {
            out.push(Check::new(format!("transform.{name}.exponential"), e, cfg.tol));
        }
    }
    let p3 = cfg.momenta(3);
    for mut c in verify_projectors(&p3, params)? {
        c = Check::new(c.name, c.residual, c.tol.max(cfg.tol));
        out.push(c);
    }
    for name in EQUATIONS {
        let eq = catalog_equation(name, params)?;
        if eq.dispersion.is_some() {
            let r = dispersion_residual(&eq, &cfg.momenta(eq.d))?;
            out.push(Check::new(format!("dispersion.{name}"), r, IDENTITY_TOL));
        }
    }
    out.push(Check::new(
        "blocks.massive",
        block_decomposition_residual(&p3, params)?,
        IDENTITY_TOL,
    ));
    out.push(Check::new("lambda.dirac", lambda_residual(&p3)?, IDENTITY_TOL));
    let constants3 = calibrate(3)?;
    let constants2 = calibrate(2)?;
    for name in ["psi", "chi", "phi", "phi_pos", "phi_neg", "chi2", "flat", "flat_minus", "weyl"] {
        let gs = generator_set(name, params)?;
        let c = if gs.d == 3 { &constants3 } else { &constants2 };
        let r = algebra_residual(&gs, c, &cfg.momenta(gs.d), &X0_VALUES)?;
        out.push(Check::new(format!("algebra.{name}"), r.residual, ALGEBRA_TOL));
        out.push(Check::new(format!("algebra.{name}.second_order"), r.second_order, SECOND_ORDER_TOL));
    }
    out.push(Check::new("covariance.chi_to_phi", chi_phi_covariance(&p3, params)?, ALGEBRA_TOL));
    for name in POSITIONS {
        let r = verify_position(name, &p3, params)?;
        out.push(Check::new(format!("position.{name}"), r.residual, cfg.tol));
        out.push(Check::new(format!("position.{name}.canonical"), r.canonical, CANONICAL_TOL));
    }
    out.extend(verify_projection_relations(&cfg.solve(), params)?);
    for (eq_name, set, want) in [
        ("dirac_massless", "psi", &[(1, 1), (1, -1), (-1, 1), (-1, -1)][..]),
        ("weyl_plus", "weyl", &[(1, 1), (-1, -1)][..]),
    ] {
        let eq = catalog_equation(eq_name, params)?;
        let gs = generator_set(set, params)?;
        let per = content_by_sample(&eq, &gs, &p3)?;
        let invariant = per.iter().all(|c| c == &per[0]);
        let mut c = label_check(&format!("content.{eq_name}"), &per[0], want);
        if !invariant {
            c = Check::new(c.name, 1.0, 0.0);
        }
        out.push(c);
    }
    Ok(out)
}

pub fn verify_all(cfg: &RunConfig) -> Outcome {
    match collect_checks(cfg) {
        Ok(checks) => {
            let failing: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            let doc = VerifyDoc {
                worst: worst(&checks),
                pass: failing.is_empty(),
                failing,
                checks,
            };
            let status = Status::from_pass(doc.pass);
            let mut out = Outcome::document(cfg, &doc, status);
            if !doc.pass {
                out.stderr = format!("failing checks: {}", doc.failing.join(", "));
            }
            out
        }
        Err(e) => Outcome::error(e),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraDoc {
    #[serde(flatten)]
    pub report: AlgebraReport,
    /// Calibrated nonzero commutators, e.g. `[J12, J23] = -i J13`.
    pub relations: Vec<String>,
}

impl Markdown for AlgebraDoc {
    fn markdown(&self) -> String {
        let r = &self.report;
        let mut s = format!("# Algebra closure of `{}`\n\n", r.set);
        s += &format!(
            "| residual | second order | worst pair | samples | result |\n|---|---|---|---|---|\n| {} | {} | {} | {} | {} |\n\n",
            sci(r.residual),
            sci(r.second_order),
            r.worst_pair,
            r.samples_used,
            mark(r.pass)
        );
        s += "Calibrated relations:\n\n";
        for rel in &self.relations {
            s += &format!("- `{rel}`\n");
        }
        s
    }
}

fn coefficient(c: wavesym_core::linalg::C64) -> String {
    match (c.re, c.im) {
        (1.0, 0.0) => String::new(),
        (-1.0, 0.0) => "-".into(),
        (0.0, 1.0) => "i ".into(),
        (0.0, -1.0) => "-i ".into(),
        (re, 0.0) => format!("{re} "),
        (0.0, im) => format!("{im}i "),
        (re, im) => format!("({re}{im:+}i) "),
    }
}

pub fn algebra(cfg: &RunConfig, generators: &str) -> Outcome {
    let run = || -> Result<AlgebraDoc, Error> {
        let gs = generator_set(generators, cfg.params())?;
        let constants = calibrate(gs.d)?;
        let report = algebra_residual(&gs, &constants, &cfg.momenta(gs.d), &X0_VALUES)?;
        let relations = constants
            .table
            .iter()
            .filter(|(_, _, c)| !c.is_empty())
            .map(|(i, j, c)| {
                let rhs: Vec<String> = c
                    .iter()
                    .map(|(k, v)| format!("{}{}", coefficient(*v), constants.names[*k]))
                    .collect();
                format!("[{}, {}] = {}", constants.names[*i], constants.names[*j], rhs.join(" + "))
            })
            .collect();
        Ok(AlgebraDoc { report, relations })
    };
    match run() {
        Ok(doc) => {
            let status = Status::from_pass(doc.report.pass);
            Outcome::document(cfg, &doc, status)
        }
        Err(e) => Outcome::error(e),
    }
}

impl Markdown for TransformReport {
    fn markdown(&self) -> String {
        format!(
            "# Transform `{}`: `{}` to `{}`\n\n| residual | unitarity | exponential form | samples | result |\n|---|---|---|---|---|\n| {} | {} | {} | {} | {} |\n",
            self.name,
            self.source,
            self.target,
            sci(self.residual),
            sci(self.unitarity),
            self.exponential.map_or_else(|| "n/a".into(), sci),
            self.samples_used,
            mark(self.pass)
        )
    }
}

pub fn transform(cfg: &RunConfig, name: &str) -> Outcome {
    let run = || -> Result<TransformReport, Error> {
        let u = catalog_unitary(name, cfg.params())?;
        let mut r = verify_transform_with(&u, &cfg.momenta(u.d), cfg.params(), cfg.options())?;
        r.pass = r.residual <= cfg.tol
            && r.unitarity <= IDENTITY_TOL
            && r.exponential.is_none_or(|e| e <= cfg.tol);
        Ok(r)
    };
    match run() {
        Ok(r) => Outcome::document(cfg, &r, Status::from_pass(r.pass)),
        Err(e) => Outcome::error(e),
    }
}

impl Markdown for PositionReport {
    fn markdown(&self) -> String {
        format!(
            "# Position operator `{}` (from `{}`)\n\n| closed-form residual | canonical | max commutator | hermiticity | samples | result |\n|---|---|---|---|---|---|\n| {} | {} | {} | {} | {} | {} |\n",
            self.name,
            self.unitary,
            sci(self.residual),
            sci(self.canonical),
            sci(self.noncommutativity),
            sci(self.hermiticity),
            self.samples_used,
            mark(self.pass)
        )
    }
}

pub fn position(cfg: &RunConfig, name: &str) -> Outcome {
    match verify_position(name, &cfg.momenta(3), cfg.params()) {
        Ok(mut r) => {
            r.pass = r.residual <= cfg.tol && r.canonical <= CANONICAL_TOL;
            Outcome::document(cfg, &r, Status::from_pass(r.pass))
        }
        Err(e) => Outcome::error(e),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleContent {
    pub p: Vec<f64>,
    pub labels: Vec<IrrepLabel>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContentDoc {
    pub equation: String,
    pub generators: String,
    pub invariant: bool,
    /// The common content when it is the same at every sample.
    pub content: Option<Vec<IrrepLabel>>,
    pub by_sample: Vec<SampleContent>,
}

fn labels(ls: &[IrrepLabel]) -> String {
    ls.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

impl Markdown for ContentDoc {
    fn markdown(&self) -> String {
        let mut s = format!(
            "# Energy-sign/helicity content of `{}` with `{}`\n\n",
            self.equation, self.generators
        );
        match &self.content {
            Some(c) => s += &format!("content: {}\n\n", labels(c)),
            None => s += "content varies across samples\n\n",
        }
        s += "| p | labels |\n|---|---|\n";
        for row in &self.by_sample {
            let p: Vec<String> = row.p.iter().map(|x| format!("{x:.4}")).collect();
            s += &format!("| ({}) | {} |\n", p.join(", "), labels(&row.labels));
        }
        s
    }
}

/// Generator set realized on a catalog equation by default.
pub fn default_generators(equation: &str) -> Option<&'static str> {
    match equation {
        "dirac_massless" => Some("psi"),
        "chi_4c" => Some("chi"),
        "phi_diag" => Some("phi"),
        "chi_plus" => Some("chi2"),
        "weyl_plus" => Some("weyl"),
        _ => None,
    }
}

pub fn content(cfg: &RunConfig, equation: &str, generators: Option<&str>) -> Outcome {
    let run = || -> Result<ContentDoc, Error> {
        let eq = catalog_equation(equation, cfg.params())?;
        let set = generators.or_else(|| default_generators(equation)).ok_or_else(|| {
            Error::InvalidParams(format!("no default generator set for {equation}; pass --generators"))
        })?;
        let gs = generator_set(set, cfg.params())?;
        let samples = cfg.momenta(eq.d);
        let per = content_by_sample(&eq, &gs, &samples)?;
        let invariant = per.iter().all(|c| c == &per[0]);
        Ok(ContentDoc {
            equation: equation.to_string(),
            generators: set.to_string(),
            invariant,
            content: invariant.then(|| per[0].clone()),
            by_sample: samples
                .iter()
                .zip(per)
                .map(|(p, labels)| SampleContent { p: p.0.clone(), labels })
                .collect(),
        })
    };
    match run() {
        Ok(doc) => {
            let status = Status::from_pass(doc.invariant);
            Outcome::document(cfg, &doc, status)
        }
        Err(e) => Outcome::error(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn json_cfg() -> RunConfig {
        RunConfig {
            format: Format::Json,
            ..RunConfig::default()
        }
    }

    #[test]
    fn coefficients_render() {
        use wavesym_core::linalg::C64;
        assert_eq!(coefficient(C64::new(0.0, -1.0)), "-i ");
        assert_eq!(coefficient(C64::new(1.0, 0.0)), "");
        assert_eq!(coefficient(C64::new(2.0, 0.0)), "2 ");
    }

    #[test]
    fn unknown_names_are_usage_errors() {
        let cfg = json_cfg();
        assert_eq!(report(&cfg, "nope").status, Status::Usage);
        assert_eq!(transform(&cfg, "nope").status, Status::Usage);
        assert_eq!(position(&cfg, "nope").status, Status::Usage);
        assert_eq!(algebra(&cfg, "nope").status, Status::Usage);
        assert_eq!(content(&cfg, "desitter", None).status, Status::Usage);
    }

    #[test]
    fn too_few_classification_samples() {
        let cfg = RunConfig {
            samples: 4,
            ..json_cfg()
        };
        assert_eq!(report(&cfg, "weyl_plus").status, Status::Usage);
    }

    #[test]
    fn transform_tolerance_applies() {
        let cfg = json_cfg();
        assert_eq!(transform(&cfg, "V1").status, Status::Pass);
        let corrupt = RunConfig {
            corrupt_chi: true,
            ..json_cfg()
        };
        assert_eq!(transform(&corrupt, "V1").status, Status::Fail);
    }
}
