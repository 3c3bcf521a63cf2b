//! Suite runner behind the `eq2` binary: configures the deformation
//! parameter and numerical knobs, runs named verification suites, and
//! assembles deterministic text or JSON reports.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use eq2_core::boson::{
    BosonGenerator, WtildeHandle, boson_comult_check, boson_comult_untwisted_residual,
    boson_relation_records, ordinary_pentagon_residual,
};
use eq2_core::catalog::{
    CheckMode, GeneratorCatalog, IdentityRecord, numeric_identity_descriptors, relation_registry,
};
use eq2_core::dual::{
    ComultGenerator, DualUnitaryHandle, braided_pentagon_residual, comult_check,
    slice_identity_residual,
};
use eq2_core::qexp::{QexpParams, SymbolTable};
use eq2_core::report::ResidualReport;
use eq2_core::sampling;
use eq2_core::vector::FiniteVector;

pub use num_complex::Complex64 as Complex;

/// Schema version of the JSON report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Relations,
    Pentagon,
    Comult,
    Slice,
    Boson,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "relations" => Some(Suite::Relations),
            "pentagon" => Some(Suite::Pentagon),
            "comult" => Some(Suite::Comult),
            "slice" => Some(Suite::Slice),
            "boson" => Some(Suite::Boson),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Json,
}

/// Fully parsed run configuration; `seed` determines every random test
/// vector.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub q_re: f64,
    pub q_im: f64,
    pub suite: Suite,
    pub window: i64,
    pub tol: f64,
    pub fourier_samples: usize,
    pub coeff_cutoff: f64,
    pub seed: u64,
    pub format: ReportFormat,
    /// Scale one named generator's coefficient by 1.001 before running, as a
    /// harness-sensitivity control; a perturbed run must fail.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb: Option<String>,
}

impl RunConfig {
    pub fn q(&self) -> Complex64 {
        Complex64::new(self.q_re, self.q_im)
    }

    /// Standing assumption on the deformation parameter.
    pub fn validate(&self) -> Result<(), String> {
        let m = self.q().norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(format!(
                "the construction requires 0 < |q| < 1; got |q| = {m} from q = {}+{}i",
                self.q_re, self.q_im
            ));
        }
        if self.window < 1 {
            return Err("window must be at least 1".into());
        }
        if self.fourier_samples < 64 || !self.fourier_samples.is_power_of_two() {
            return Err("fourier-samples must be a power of two >= 64".into());
        }
        if !self.coeff_cutoff.is_finite() || self.coeff_cutoff <= 0.0 {
            return Err("coeff-cutoff must be positive".into());
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err("tol must be positive".into());
        }
        Ok(())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q_re: 0.3,
            q_im: 0.4,
            suite: Suite::All,
            window: 3,
            tol: 1e-7,
            fourier_samples: 4096,
            coeff_cutoff: 1e-12,
            seed: 42,
            format: ReportFormat::Text,
            perturb: None,
        }
    }
}

/// Residual of one record: exact identities carry the string `"exact"`.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ResidualValue {
    Exact(&'static str),
    Numeric(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordReport {
    pub vector: String,
    pub residual: ResidualValue,
    pub error_estimate: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub statement: String,
    pub mode: CheckMode,
    pub pass: bool,
    pub runtime_ms: u64,
    pub records: Vec<RecordReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSection {
    pub name: String,
    pub pass: bool,
    pub identities: Vec<IdentityReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub timestamp: u64,
    pub config: RunConfig,
    pub suites: Vec<SuiteSection>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "q = {}+{}i  suite = {:?}  seed = {}  tol = {:.1e}\n",
            self.config.q_re, self.config.q_im, self.config.suite, self.config.seed, self.config.tol
        ));
        for suite in &self.suites {
            out.push_str(&format!(
                "[{}] {}\n",
                if suite.pass { "PASS" } else { "FAIL" },
                suite.name
            ));
            for id in &suite.identities {
                let worst = id
                    .records
                    .iter()
                    .filter_map(|r| match r.residual {
                        ResidualValue::Numeric(x) => Some(x),
                        ResidualValue::Exact(_) => None,
                    })
                    .fold(None::<f64>, |acc, x| Some(acc.map_or(x, |a| a.max(x))));
                let residual_desc = match worst {
                    Some(w) => format!("max residual {w:.2e}"),
                    None => "exact".to_string(),
                };
                out.push_str(&format!(
                    "  [{}] {:<24} {}  ({} vector(s), {} ms)\n",
                    if id.pass { "PASS" } else { "FAIL" },
                    id.name,
                    residual_desc,
                    id.records.len(),
                    id.runtime_ms,
                ));
            }
        }
        out.push_str(&format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

fn exact_identity_report(rec: &IdentityRecord) -> IdentityReport {
    let start = Instant::now();
    let window = rec.lhs.auto_window(&rec.rhs);
    let pass = rec.check().unwrap_or(false);
    let note = if pass {
        None
    } else {
        rec.counterexample()
            .ok()
            .flatten()
            .map(|idx| format!("counterexample at {:?}", idx.coords()))
    };
    IdentityReport {
        name: rec.name.to_string(),
        statement: rec.statement.to_string(),
        mode: rec.mode,
        pass,
        runtime_ms: start.elapsed().as_millis() as u64,
        records: vec![RecordReport {
            vector: format!("basis window [-{window},{window}]^d"),
            residual: ResidualValue::Exact("exact"),
            error_estimate: 0.0,
            pass,
            note,
        }],
    }
}

fn numeric_identity_report(
    name: &str,
    statement: &str,
    reports: Vec<(ResidualReport, Option<String>)>,
    tol: f64,
    started: Instant,
) -> IdentityReport {
    let records: Vec<RecordReport> = reports
        .into_iter()
        .map(|(r, note)| RecordReport {
            vector: r.vector.clone(),
            pass: r.passes(tol),
            residual: ResidualValue::Numeric(r.residual),
            error_estimate: r.truncation_estimate,
            note,
        })
        .collect();
    IdentityReport {
        name: name.to_string(),
        statement: statement.to_string(),
        mode: CheckMode::Numeric,
        pass: records.iter().all(|r| r.pass),
        runtime_ms: started.elapsed().as_millis() as u64,
        records,
    }
}

fn statement_for(name: &str) -> String {
    numeric_identity_descriptors()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.to_string())
        .unwrap_or_default()
}

fn relations_section(cat: &GeneratorCatalog) -> SuiteSection {
    let mut identities: Vec<IdentityReport> = relation_registry(cat)
        .iter()
        .chain(boson_relation_records(cat).iter())
        .map(exact_identity_report)
        .collect();
    identities.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteSection {
        name: "relations".into(),
        pass: identities.iter().all(|i| i.pass),
        identities,
    }
}

fn pentagon_section(cat: &GeneratorCatalog, cfg: &RunConfig, table: &SymbolTable) -> SuiteSection {
    let handle = DualUnitaryHandle::new(table);
    let filter = sampling::pentagon_filter(&[0]);
    let coords = sampling::seeded_coords(cfg.seed, 20, 6, cfg.window, filter);
    let start = Instant::now();
    let mut pentagon = Vec::new();
    let mut unitarity = Vec::new();
    for c in &coords {
        let v = FiniteVector::<Complex64>::basis(c);
        let rep = braided_pentagon_residual(cat, &v, &handle).expect("pentagon evaluation");
        pentagon.push((rep, None));
        let (fv, stats) = handle.apply(cat, &FiniteVector::basis(&c[..4]), false).expect("Fhat");
        unitarity.push((
            ResidualReport {
                identity: "Fhat-unitarity".into(),
                vector: format!("{:?}", &c[..4]),
                residual: (fv.norm() - 1.0).abs(),
                params: String::new(),
                truncation_estimate: stats.truncation_estimate,
                slow_fibers: stats.slow_fibers,
            },
            None,
        ));
    }
    let mut identities = vec![
        numeric_identity_report("braided-pentagon", &statement_for("braided-pentagon"), pentagon, cfg.tol, start),
        numeric_identity_report("Fhat-unitarity", &statement_for("Fhat-unitarity"), unitarity, cfg.tol, start),
    ];
    identities.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteSection {
        name: "pentagon".into(),
        pass: identities.iter().all(|i| i.pass),
        identities,
    }
}

fn comult_section(cat: &GeneratorCatalog, cfg: &RunConfig, table: &SymbolTable) -> SuiteSection {
    let handle = DualUnitaryHandle::new(table);
    let coords = sampling::seeded_coords(cfg.seed, 10, 4, cfg.window, sampling::comult_filter(4));
    let mut identities = Vec::new();
    for gen in [ComultGenerator::N, ComultGenerator::BTilde, ComultGenerator::BTildeStar] {
        let start = Instant::now();
        let reports: Vec<_> = coords
            .iter()
            .map(|c| {
                let v = FiniteVector::<Complex64>::basis(c);
                (comult_check(cat, gen, &v, &handle).expect("comult evaluation"), None)
            })
            .collect();
        // Delta(N) is exact modulo functional calculus; hold it to a tighter
        // tolerance.
        let tol = if gen == ComultGenerator::N { cfg.tol.min(1e-8) } else { cfg.tol };
        identities.push(numeric_identity_report(gen.name(), &statement_for(gen.name()), reports, tol, start));
    }
    identities.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteSection { name: "comult".into(), pass: identities.iter().all(|i| i.pass), identities }
}

fn slice_section(cat: &GeneratorCatalog, cfg: &RunConfig, table: &SymbolTable) -> SuiteSection {
    let q = cfg.q();
    let lambdas = [
        ("lambda=0", Complex64::new(0.0, 0.0), None),
        ("lambda=1", Complex64::new(1.0, 0.0), Some(0i64)),
        ("lambda=q", q, Some(1i64)),
    ];
    let start = Instant::now();
    let mut reports = Vec::new();
    for (label, lambda, exponent) in lambdas {
        let filter = sampling::slice_filter(exponent);
        let coords = sampling::seeded_coords(cfg.seed, 5, 6, cfg.window, filter);
        for c in &coords {
            let v = FiniteVector::<Complex64>::basis(c);
            let (mut rep, p_star) =
                slice_identity_residual(cat, lambda, &v, table).expect("slice evaluation");
            rep.vector = format!("{label} {}", rep.vector);
            reports.push((rep, Some(format!("p_star_variant_residual={p_star:.3e}"))));
        }
    }
    let identities = vec![numeric_identity_report(
        "slice-identity",
        &statement_for("slice-identity"),
        reports,
        cfg.tol,
        start,
    )];
    SuiteSection { name: "slice".into(), pass: identities.iter().all(|i| i.pass), identities }
}

fn boson_section(cat: &GeneratorCatalog, cfg: &RunConfig, table: &SymbolTable) -> SuiteSection {
    let handle = WtildeHandle::new(table);
    let mut identities: Vec<IdentityReport> =
        boson_relation_records(cat).iter().map(exact_identity_report).collect();

    let start = Instant::now();
    let coords9 = sampling::seeded_coords(cfg.seed, 10, 9, cfg.window, sampling::wtilde_pentagon_filter());
    let pentagon: Vec<_> = coords9
        .iter()
        .map(|c| {
            let v = FiniteVector::<Complex64>::basis(c);
            (ordinary_pentagon_residual(cat, &v, &handle).expect("Wtilde pentagon"), None)
        })
        .collect();
    identities.push(numeric_identity_report(
        "Wtilde-pentagon",
        &statement_for("Wtilde-pentagon"),
        pentagon,
        cfg.tol,
        start,
    ));

    let coords6 = sampling::seeded_coords(cfg.seed, 10, 6, cfg.window, sampling::comult_filter(6));
    for gen in [
        BosonGenerator::U,
        BosonGenerator::NPrime,
        BosonGenerator::BPrime,
        BosonGenerator::BPrimeStar,
    ] {
        let start = Instant::now();
        let reports: Vec<_> = coords6
            .iter()
            .map(|c| {
                let v = FiniteVector::<Complex64>::basis(c);
                let rep = boson_comult_check(cat, gen, &v, &handle).expect("boson comult");
                let note = match gen {
                    BosonGenerator::BPrime | BosonGenerator::BPrimeStar => {
                        let d = boson_comult_untwisted_residual(cat, gen, &v, &handle)
                            .expect("diagnostic");
                        Some(format!("untwisted_variant_residual={d:.3e}"))
                    }
                    _ => None,
                };
                (rep, note)
            })
            .collect();
        identities.push(numeric_identity_report(gen.name(), &statement_for(gen.name()), reports, cfg.tol, start));
    }
    identities.sort_by(|a, b| a.name.cmp(&b.name));
    SuiteSection { name: "boson".into(), pass: identities.iter().all(|i| i.pass), identities }
}

/// Runs the configured suites. Deterministic given `(config, seed)`.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport, String> {
    cfg.validate()?;
    let cat = match &cfg.perturb {
        None => GeneratorCatalog::new(),
        Some(name) => {
            let factor = num_rational::BigRational::new(1001.into(), 1000.into());
            GeneratorCatalog::perturbed(name, factor).map_err(|e| e.to_string())?
        }
    };
    let needs_numerics = !matches!(cfg.suite, Suite::Relations);
    let table = if needs_numerics {
        let params = QexpParams::with(cfg.q(), cfg.fourier_samples, cfg.coeff_cutoff)
            .map_err(|e| e.to_string())?;
        Some(SymbolTable::new(params))
    } else {
        None
    };
    let mut suites = Vec::new();
    let want = |s: Suite| cfg.suite == s || cfg.suite == Suite::All;
    if want(Suite::Relations) {
        suites.push(relations_section(&cat));
    }
    if want(Suite::Pentagon) {
        suites.push(pentagon_section(&cat, cfg, table.as_ref().expect("table built")));
    }
    if want(Suite::Comult) {
        suites.push(comult_section(&cat, cfg, table.as_ref().expect("table built")));
    }
    if want(Suite::Slice) {
        suites.push(slice_section(&cat, cfg, table.as_ref().expect("table built")));
    }
    if want(Suite::Boson) {
        suites.push(boson_section(&cat, cfg, table.as_ref().expect("table built")));
    }
    let pass = suites.iter().all(|s| s.pass);
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SuiteReport { schema_version: SCHEMA_VERSION, timestamp, config: cfg.clone(), suites, pass })
}

/// Lines for `--list-identities`: every registered identity with its
/// statement.
pub fn list_identities() -> Vec<String> {
    let cat = GeneratorCatalog::new();
    let mut lines: Vec<String> = relation_registry(&cat)
        .iter()
        .chain(boson_relation_records(&cat).iter())
        .map(|r| format!("{:<28} [exact]    {}", r.name, r.statement))
        .collect();
    lines.extend(
        numeric_identity_descriptors()
            .into_iter()
            .map(|(n, s)| format!("{n:<28} [numeric]  {s}")),
    );
    lines.sort();
    lines
}
