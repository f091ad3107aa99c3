use std::path::PathBuf;
use std::time::Instant;

use pencil_resolvent::chains::{ascent_descent, chain_family, generating_subspace, ChainKind, ChainSide, GeneratingSubspace};
use pencil_resolvent::linalg::{max_abs, rel_dev, ComplexMatrix, C64};
use pencil_resolvent::pencil::Annulus;
use pencil_resolvent::projections::{decompose, separated_operators, verify_splitting, SpectralDecomposition};
use pencil_resolvent::resolvent::{
    contour_oracle, laurent_coeffs, solve_basic, validate_resolvent, LaurentExpansion, OracleConfig,
};
use pencil_resolvent::zoo::analytic_reference;
use pencil_resolvent::{BasicSolution, Error};
use serde_json::{json, Value};

use crate::document::{resolve, Input, PencilDocument};
use crate::error::CliError;
use crate::growth::emit_growth_csv;
use crate::report::{complex, matrix, Report};

pub const PROBE_DEPTH: usize = 24;
pub const ASCENT_LIMIT: usize = 10;
pub const WINDOW_MARGIN: usize = 2;
pub const LAURENT_TERMS: usize = 20;
pub const SAMPLE_COUNT: usize = 5;
pub const PROPERTY_TOL: f64 = 1e-8;
pub const GOLDEN_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-6;
const ORACLE_RANGE: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Analyze,
    Chains,
    Project,
    Solve,
    Laurent,
    Validate,
    Reproduce,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Chains => "chains",
            Command::Project => "project",
            Command::Solve => "solve",
            Command::Laurent => "laurent",
            Command::Validate => "validate",
            Command::Reproduce => "reproduce",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    /// coefficients on each side for `laurent` (default 20)
    pub terms: Option<usize>,
    /// growth CSV destination for `laurent`
    pub csv: Option<PathBuf>,
}

fn annulus_value(a: &Annulus) -> Value {
    if a.r().is_finite() {
        json!([a.s(), a.r()])
    } else {
        json!([a.s(), "inf"])
    }
}

fn describe(input: &Input) -> String {
    let p = &input.pencil;
    let prov = &p.provenance;
    let mut s = format!("{} ({}x{})", prov.source, p.codomain_dim(), p.domain_dim());
    if !prov.params.is_empty() {
        s += &format!(", params {}", prov.params);
    }
    if let Some(n) = prov.truncation {
        s += &format!(", truncation N = {n}");
    }
    s
}

fn new_report(cmd: Command, input: &Input) -> Report {
    let mut r = Report::new(cmd.name(), describe(input));
    let t = &input.tolerances;
    r.default_value("rank_rel", t.rank_rel);
    r.default_value("residual_abs", t.residual_abs);
    r.default_value("angle_tol", t.angle_tol);
    r.default_value("probe_depth", PROBE_DEPTH as u64);
    r.default_value("annulus", annulus_value(&input.annulus));
    r.default_value("interior", input.pencil.interior(WINDOW_MARGIN) as u64);
    r.warnings = input.warnings.clone();
    r
}

fn leading(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    m.view((0, 0), (k.min(m.nrows()), k.min(m.ncols()))).into_owned()
}

fn pipeline(input: &Input) -> Result<(SpectralDecomposition, BasicSolution), CliError> {
    let d = decompose(&input.pencil, &input.annulus, PROBE_DEPTH, &input.tolerances)?;
    let b = solve_basic(&input.pencil, &d, &input.tolerances)?;
    Ok((d, b))
}

pub fn execute(cmd: Command, doc: &PencilDocument, opts: &Options) -> Result<Report, CliError> {
    let input = resolve(doc)?;
    let mut report = new_report(cmd, &input);
    match cmd {
        Command::Analyze => analyze(&input, &mut report)?,
        Command::Chains => chains(&input, &mut report)?,
        Command::Project => project(&input, &mut report)?,
        Command::Solve => solve(&input, &mut report)?,
        Command::Laurent => laurent(&input, opts, &mut report)?,
        Command::Validate => validate(&input, &mut report)?,
        Command::Reproduce => reproduce(&input, &mut report)?,
    }
    Ok(report)
}

fn analyze(input: &Input, report: &mut Report) -> Result<(), CliError> {
    let p = &input.pencil;
    let tol = &input.tolerances;
    report.default_value("ascent_limit", ASCENT_LIMIT as u64);
    report.default_value("window_margin", WINDOW_MARGIN as u64);
    let ad = ascent_descent(p, ASCENT_LIMIT, WINDOW_MARGIN, tol)?;
    let sec = report.section("ascent and descent");
    sec.put("ascent", ad.ascent.to_string())
        .put("descent", ad.descent.to_string())
        .put("descent (direct sum)", ad.descent_direct.to_string())
        .put(
            "window",
            match ad.window_margin {
                Some(m) => format!("first N - m - {m} coordinates"),
                None => "all coordinates".into(),
            },
        );
    let sec = report.section("evidence per m");
    for ev in &ad.evidence {
        sec.put(
            format!("m = {}", ev.m),
            format!(
                "window {}, dim S {}, dim(null A0 & S) {}, dim V {}, dim(range A0 + V) {}, dim(range A0 & V) {}",
                ev.window, ev.dim_s, ev.null_cap_s, ev.dim_v, ev.range_plus_v, ev.range_cap_v
            ),
        );
    }
    let mut dims = Vec::new();
    for kind in ChainKind::ALL {
        dims.push((kind.name(), chain_family(p, kind, ASCENT_LIMIT, tol)?.dims()));
    }
    let sec = report.section("chain family dimensions, m = 0..limit");
    for (name, d) in dims {
        sec.put(name, json!(d));
    }
    match (ad.ascent.finite(), ad.descent.finite()) {
        (Some(a), Some(d)) => report.check("ascent = descent when both are finite", a == d, format!("{a} vs {d}")),
        _ => report.check(
            "ascent = descent when both are finite",
            true,
            format!("not both finite: ascent {}, descent {}", ad.ascent, ad.descent),
        ),
    }
    Ok(())
}

fn put_generators(report: &mut Report, title: &str, g: &GeneratingSubspace) {
    let sec = report.section(title);
    sec.put("dim", g.subspace.dim() as u64)
        .put("rate threshold", g.rate_threshold)
        .put("chain map eigenvalues", Value::Array(g.eigenvalues.iter().map(|&z| complex(z)).collect()))
        .put("chain rates", json!(g.rates))
        .put("basis", matrix(g.subspace.basis()));
}

fn chains(input: &Input, report: &mut Report) -> Result<(), CliError> {
    let p = &input.pencil;
    let tol = &input.tolerances;
    let gs = generating_subspace(p, ChainSide::Singular, &input.annulus, PROBE_DEPTH, None, tol)?;
    let gr = generating_subspace(p, ChainSide::Regular, &input.annulus, PROBE_DEPTH, None, tol)?;
    put_generators(report, "singular chain generators Xs", &gs);
    put_generators(report, "regular chain generators Xr", &gr);
    let n = p.domain_dim();
    report.check(
        "dim Xs + dim Xr = n",
        gs.subspace.dim() + gr.subspace.dim() == n,
        format!("{} + {} vs {n}", gs.subspace.dim(), gr.subspace.dim()),
    );
    Ok(())
}

fn project(input: &Input, report: &mut Report) -> Result<(), CliError> {
    let (d, _) = pipeline(input)?;
    report
        .section("decomposition")
        .put("dim Xs", d.xs.dim() as u64)
        .put("dim Xr", d.xr.dim() as u64)
        .put("dim Ys", d.ys.dim() as u64)
        .put("dim Yr", d.yr.dim() as u64);
    report
        .section("projections")
        .put("P", matrix(&d.p))
        .put("Pc", matrix(&d.pc))
        .put("Q", matrix(&d.q))
        .put("Qc", matrix(&d.qc));
    for c in verify_splitting(&input.pencil, &d) {
        report.bound(c.name, c.deviation, PROPERTY_TOL);
    }
    Ok(())
}

fn fundamental_checks(input: &Input, b: &BasicSolution, exp: &LaurentExpansion, report: &mut Report) -> Result<(), CliError> {
    let interior = input.pencil.interior(WINDOW_MARGIN);
    let v = validate_resolvent(&input.pencil, b, exp, &[], interior, &input.tolerances)?;
    let sec = report.section("fundamental residuals (interior block, relative)");
    for &(j, l, r) in &v.fundamental {
        sec.put(format!("j = {j}"), json!({"left": l, "right": r}));
    }
    report.bound("fundamental equations", v.max_fundamental(), input.tolerances.residual_abs);
    Ok(())
}

fn solve(input: &Input, report: &mut Report) -> Result<(), CliError> {
    let (d, b) = pipeline(input)?;
    report
        .section("basic solution")
        .put("R_-1", matrix(&b.r_minus1))
        .put("R_0", matrix(&b.r0));
    let exp = laurent_coeffs(&b, &input.pencil, 2, 1)?;
    fundamental_checks(input, &b, &exp, report)?;
    for c in separated_operators(&input.pencil, &d, &b).checks {
        report.bound(c.name, c.deviation, PROPERTY_TOL);
    }
    Ok(())
}

fn laurent(input: &Input, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    let terms = opts.terms.unwrap_or(LAURENT_TERMS);
    if terms == 0 {
        return Err(CliError::Usage("--terms must be at least 1".into()));
    }
    report.default_value("terms", terms as u64);
    let (_, b) = pipeline(input)?;
    let exp = laurent_coeffs(&b, &input.pencil, terms, terms)?;
    let sec = report.section("coefficients");
    for (j, rj) in exp.iter() {
        let norm = rj.norm();
        let root = if j == 0 { Value::Null } else { json!(norm.powf(1.0 / j.unsigned_abs() as f64)) };
        sec.put(format!("j = {j}"), json!({"norm_fro": norm, "root_rate": root}));
    }
    report
        .section("annulus estimate")
        .put("inner rate", json!(exp.inner_rate))
        .put("outer rate", json!(exp.outer_rate))
        .put("annulus", annulus_value(&exp.annulus));
    fundamental_checks(input, &b, &exp, report)?;
    if let Some(path) = &opts.csv {
        emit_growth_csv(&exp, path)?;
        report.section("output").put("growth csv", path.display().to_string());
    }
    Ok(())
}

/// Laurent terms on each side so the geometric tail at every sample is
/// below 1e-14.
fn terms_for(a: &Annulus, samples: &[C64]) -> usize {
    let q = samples
        .iter()
        .map(|z| {
            let m = z.norm();
            (a.s() / m).max(if a.r().is_finite() { m / a.r() } else { 0.0 })
        })
        .fold(0.0, f64::max);
    if q <= 0.0 {
        return 40;
    }
    ((1e-14f64.ln() / q.ln()).ceil() as usize + 10).clamp(40, 4000)
}

fn validate(input: &Input, report: &mut Report) -> Result<(), CliError> {
    let a = input.annulus;
    let samples: Vec<C64> = match &input.samples {
        Some(s) => s.clone(),
        None => (0..SAMPLE_COUNT)
            .map(|k| C64::from_polar(a.center_radius(), 0.3 + std::f64::consts::TAU * k as f64 / SAMPLE_COUNT as f64))
            .collect(),
    };
    if samples.is_empty() {
        return Err(CliError::Usage("no samples to validate".into()));
    }
    for z in &samples {
        if !a.contains(*z) {
            return Err(Error::OutsideAnnulus {
                modulus: z.norm(),
                s: a.s(),
                r: a.r(),
            }
            .into());
        }
    }
    let terms = terms_for(&a, &samples);
    report.default_value("terms", terms as u64);
    report.default_value("oracle_nodes", OracleConfig::default().nodes as u64);
    let (_, b) = pipeline(input)?;
    let mut exp = laurent_coeffs(&b, &input.pencil, terms, terms)?;
    exp.annulus = a;
    let interior = input.pencil.interior(WINDOW_MARGIN);
    let v = validate_resolvent(&input.pencil, &b, &exp, &samples, interior, &input.tolerances)?;
    let sec = report.section("samples");
    for s in &v.samples {
        sec.put(
            format!("z = {:.6}{:+.6}i", s.z.re, s.z.im),
            json!({"closed_form_residual": s.closed_form_residual, "laurent_deviation": s.laurent_deviation, "tail_bound": s.tail_bound}),
        );
    }
    for s in &v.samples {
        let label = format!("{:.4}{:+.4}i", s.z.re, s.z.im);
        report.bound(format!("A(z) R(z) = I at z = {label}"), s.closed_form_residual, PROPERTY_TOL);
        report.bound(format!("closed form = Laurent sum at z = {label}"), s.laurent_deviation, PROPERTY_TOL);
    }
    report.bound("fundamental equations", v.max_fundamental(), input.tolerances.residual_abs);
    let orc = contour_oracle(&input.pencil, &a, &OracleConfig::default(), -ORACLE_RANGE, ORACLE_RANGE, &input.tolerances)?;
    let mut gap: f64 = 0.0;
    for j in -ORACLE_RANGE..=ORACLE_RANGE {
        let (o, e) = (orc.expansion.coeff(j), exp.coeff(j));
        if let (Some(o), Some(e)) = (o, e) {
            gap = gap.max(rel_dev(&leading(o, interior), &leading(e, interior)));
        }
    }
    report
        .section("contour oracle")
        .put("radius", orc.radius)
        .put("nodes", orc.nodes as u64)
        .put("aliasing estimate", orc.aliasing_estimate);
    report.bound(format!("contour oracle agrees for |j| <= {ORACLE_RANGE}"), gap, ORACLE_TOL);
    Ok(())
}

fn reproduce(input: &Input, report: &mut Report) -> Result<(), CliError> {
    let spec = input
        .spec
        .as_ref()
        .ok_or_else(|| CliError::Usage("reproduce needs a family (--family or a family document)".into()))?;
    let reference = analytic_reference(spec)?;
    let start = Instant::now();
    let (d, b) = pipeline(input)?;
    let secs = start.elapsed().as_secs_f64();
    let k = input.pencil.interior(WINDOW_MARGIN);
    let got = [&d.p, &d.pc, &d.q, &d.qc, &b.r_minus1, &b.r0];
    let sec = report.section("golden comparison (interior block, max |entry deviation|)");
    let mut worst: f64 = 0.0;
    for ((name, want), have) in reference.named().iter().zip(got) {
        let dev = max_abs(&(leading(have, k) - leading(want, k)));
        sec.put(*name, dev);
        worst = worst.max(dev);
    }
    sec.put("pipeline seconds", secs);
    report.bound("max golden deviation", worst, GOLDEN_TOL);
    Ok(())
}
