//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on failure.

use std::process::ExitCode;
use std::time::Instant;

use pencil_resolvent::chains::{ascent_descent, Extended};
use pencil_resolvent::linalg::{growth_rate, identity, max_abs, r, rel_dev, ComplexMatrix, Tolerances, C64};
use pencil_resolvent::pencil::{closed_form_resolvent, Annulus, OperatorPencil};
use pencil_resolvent::projections::{decompose, verify_splitting};
use pencil_resolvent::resolvent::{
    contour_oracle, eval_laurent, laurent_coeffs, resolvent_family, solve_basic, LaurentExpansion, OracleConfig,
};
use pencil_resolvent::zoo::{analytic_reference, build, Family, FamilySpec, Region, SequenceRule};
use pencil_resolvent::BasicSolution;

const PROBE: usize = 24;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn example3(region: Region) -> FamilySpec {
    FamilySpec::new(Family::Example3 {
        alpha: SequenceRule::InverseFactorial,
        beta: r(2.0),
    })
    .truncated(12)
    .in_region(region)
}

fn leading(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    m.view((0, 0), (k, k)).into_owned()
}

fn hint(p: &OperatorPencil) -> Annulus {
    p.provenance.annulus_hint.unwrap_or_else(Annulus::whole_plane)
}

fn pipeline(p: &OperatorPencil) -> Result<(pencil_resolvent::projections::SpectralDecomposition, BasicSolution), String> {
    let d = decompose(p, &hint(p), PROBE, &tol()).map_err(|e| e.to_string())?;
    let b = solve_basic(p, &d, &tol()).map_err(|e| e.to_string())?;
    Ok((d, b))
}

type Criterion = fn() -> Result<Outcome, String>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn golden(region: Region) -> Result<Outcome, String> {
    let start = Instant::now();
    let spec = example3(region);
    let p = build(&spec).map_err(|e| e.to_string())?.pencil;
    let (d, b) = pipeline(&p)?;
    let refr = analytic_reference(&spec).map_err(|e| e.to_string())?;
    let k = p.interior(2);
    let got = [&d.p, &d.pc, &d.q, &d.qc, &b.r_minus1, &b.r0];
    let mut worst = (0.0f64, "");
    for ((name, want), have) in refr.named().iter().zip(got) {
        let dev = max_abs(&(leading(have, k) - leading(want, k)));
        if dev > worst.0 {
            worst = (dev, name);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        pass: worst.0 <= 1e-8 && secs < 5.0,
        detail: format!("max |dev| = {:.2e} (worst {}), interior {k}x{k}, {secs:.3} s", worst.0, worst.1),
    })
}

fn residuals() -> Result<Outcome, String> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for region in [Region::NearZero, Region::NearInfinity] {
        let p = build(&example3(region)).map_err(|e| e.to_string())?.pencil;
        let (_, b) = pipeline(&p)?;
        let exp = laurent_coeffs(&b, &p, 21, 20).map_err(|e| e.to_string())?;
        let k = p.interior(2);
        let n = p.domain_dim();
        let mut w: f64 = 0.0;
        for j in -20..=20 {
            let prev = exp.coeff(j - 1).unwrap();
            let cur = exp.coeff(j).unwrap();
            let mut left = prev * &p.a1 + cur * &p.a0;
            let mut right = &p.a1 * prev + &p.a0 * cur;
            if j == 0 {
                left -= identity(n);
                right -= identity(n);
            }
            w = w.max(leading(&left, k).norm()).max(leading(&right, k).norm());
        }
        parts.push(format!("{}: {w:.2e}", region.name()));
        worst = worst.max(w);
    }
    Ok(Outcome {
        pass: worst <= 1e-9,
        detail: format!("max |residual|_F on interior block, j in [-20, 20]: {}", parts.join(", ")),
    })
}

fn coefficient_gap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

fn oracle_agreement() -> Result<Outcome, String> {
    let mut worst: f64 = 0.0;
    for seed in 1..=20u64 {
        let p = build(&FamilySpec::new(Family::RandomRegular { n: 4, seed })).map_err(|e| e.to_string())?.pencil;
        let (_, b) = pipeline(&p)?;
        let exp = laurent_coeffs(&b, &p, 5, 5).map_err(|e| e.to_string())?;
        let orc = contour_oracle(&p, &hint(&p), &OracleConfig::default(), -5, 5, &tol()).map_err(|e| e.to_string())?;
        for j in -5..=5 {
            worst = worst.max(coefficient_gap(orc.expansion.coeff(j).unwrap(), exp.coeff(j).unwrap()));
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-6,
        detail: format!("20 seeded 4x4 pencils, |j| <= 5, 512 nodes: max relative gap {worst:.2e}"),
    })
}

fn jordan_blocks() -> Result<Outcome, String> {
    let mut ok = true;
    let mut parts = Vec::new();
    for m in 1..=5 {
        let p = build(&FamilySpec::new(Family::JordanBlock { m })).map_err(|e| e.to_string())?.pencil;
        let rep = ascent_descent(&p, 10, 2, &tol()).map_err(|e| e.to_string())?;
        let orc = contour_oracle(&p, &Annulus::whole_plane(), &OracleConfig::default(), -(m as i64) - 1, 0, &tol())
            .map_err(|e| e.to_string())?;
        let top = orc.expansion.coeff(-(m as i64)).unwrap().norm();
        let beyond = orc.expansion.coeff(-(m as i64) - 1).unwrap().norm();
        let good = rep.ascent == Extended::Finite(m) && rep.descent == Extended::Finite(m) && top > 0.5 && beyond <= 1e-10;
        ok &= good;
        parts.push(format!("m={m}: a={} d={} |R_-m|={top:.1} |R_-m-1|={beyond:.0e}", rep.ascent, rep.descent));
    }
    Ok(Outcome {
        pass: ok,
        detail: parts.join("; "),
    })
}

fn shifts() -> Result<Outcome, String> {
    let ex1 = FamilySpec::new(Family::Example1 {
        beta: SequenceRule::InverseFactorial,
    })
    .truncated(16);
    let ex2 = FamilySpec::new(Family::Example2 {
        gamma: SequenceRule::InverseFactorial,
    })
    .truncated(16);
    let r1 = ascent_descent(&build(&ex1).map_err(|e| e.to_string())?.pencil, 10, 2, &tol()).map_err(|e| e.to_string())?;
    let r2 = ascent_descent(&build(&ex2).map_err(|e| e.to_string())?.pencil, 10, 2, &tol()).map_err(|e| e.to_string())?;
    let pass = r1.descent == Extended::Finite(0)
        && r1.ascent == Extended::Exceeds(10)
        && r2.ascent == Extended::Finite(0)
        && r2.descent == Extended::Exceeds(10);
    Ok(Outcome {
        pass,
        detail: format!(
            "example1: ascent {}, descent {}; example2: ascent {}, descent {}",
            r1.ascent, r1.descent, r2.ascent, r2.descent
        ),
    })
}

fn rates() -> Result<Outcome, String> {
    let pz = build(&example3(Region::NearZero)).map_err(|e| e.to_string())?.pencil;
    let (_, bz) = pipeline(&pz)?;
    let ez = laurent_coeffs(&bz, &pz, 1, 40).map_err(|e| e.to_string())?;
    let outer: Vec<f64> = (0..=40).map(|l| ez.coeff(l).unwrap().norm()).collect();
    let rz = growth_rate(&outer, Some((1, 40))).map_err(|e| e.to_string())?;
    let pi = build(&example3(Region::NearInfinity)).map_err(|e| e.to_string())?.pencil;
    let (_, bi) = pipeline(&pi)?;
    let ei = laurent_coeffs(&bi, &pi, 40, 0).map_err(|e| e.to_string())?;
    let inner: Vec<f64> = (0..=40).map(|k| if k == 0 { 1.0 } else { ei.coeff(-k).unwrap().norm() }).collect();
    let ri = growth_rate(&inner, Some((1, 40))).map_err(|e| e.to_string())?;
    Ok(Outcome {
        pass: (rz - 0.5).abs() <= 0.05 && (ri - 2.0).abs() <= 0.2,
        detail: format!("near-zero |R_l|^(1/l) -> {rz:.4} (0.5), near-infinity |R_-k|^(1/k) -> {ri:.4} (2)"),
    })
}

fn sample_points(a: &Annulus, count: usize, offset: f64) -> Vec<C64> {
    let rad = a.center_radius();
    (0..count)
        .map(|k| C64::from_polar(rad, offset + std::f64::consts::TAU * k as f64 / count as f64))
        .collect()
}

fn properties(p: &OperatorPencil, terms: usize) -> Result<f64, String> {
    let (d, b) = pipeline(p)?;
    let mut worst = verify_splitting(p, &d)
        .iter()
        .map(|c| c.deviation)
        .fold(0.0, f64::max);
    let exp: LaurentExpansion = laurent_coeffs(&b, p, terms, terms).map_err(|e| e.to_string())?;
    for (j, rj) in exp.iter() {
        let proj = if j <= -1 { &d.p * rj * &d.q } else { &d.pc * rj * &d.qc };
        worst = worst.max(rel_dev(&proj, rj));
    }
    let mut sum_exp = exp.clone();
    sum_exp.annulus = hint(p);
    for z in sample_points(&hint(p), 5, 0.3) {
        let cf = closed_form_resolvent(&b, p, z, &tol()).map_err(|e| e.to_string())?;
        let ls = eval_laurent(&sum_exp, z).map_err(|e| e.to_string())?;
        worst = worst.max(rel_dev(&cf, &ls.value));
    }
    let zs = sample_points(&hint(p), 6, 0.7);
    for pair in zs.chunks(2) {
        let (lam, mu) = (-C64::new(1.0, 0.0) / pair[0], -C64::new(1.0, 0.0) / pair[1]);
        let rl = resolvent_family(p, &b, lam, &tol()).map_err(|e| e.to_string())?;
        let rm = resolvent_family(p, &b, mu, &tol()).map_err(|e| e.to_string())?;
        worst = worst.max(rel_dev(&(&rl - &rm), &(&rl * &rm * (mu - lam))));
    }
    Ok(worst)
}

fn property_suite() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut specs = vec![
        FamilySpec::new(Family::Example1 {
            beta: SequenceRule::InverseFactorial,
        }),
        FamilySpec::new(Family::Example2 {
            gamma: SequenceRule::InverseFactorial,
        }),
        FamilySpec::new(Family::Example1 {
            beta: SequenceRule::Gaussian { c: r(0.7) },
        }),
        example3(Region::NearZero),
        example3(Region::NearInfinity),
        FamilySpec::new(Family::DiagSplit { n: 2, k: 1 }),
        FamilySpec::new(Family::DiagSplit { n: 5, k: 2 }),
    ];
    specs.extend((1..=5).map(|m| FamilySpec::new(Family::JordanBlock { m })));
    let mut worst = (0.0f64, String::new());
    for spec in &specs {
        let p = build(spec).map_err(|e| e.to_string())?.pencil;
        let w = properties(&p, 80).map_err(|e| format!("{}: {e}", spec.family.name()))?;
        if w >= worst.0 {
            worst = (w, spec.family.name().to_string());
        }
    }
    for k in 0..50u64 {
        let spec = FamilySpec::new(Family::RandomRegular {
            n: 2 + (k % 5) as usize,
            seed: 1000 + k,
        });
        let p = build(&spec).map_err(|e| e.to_string())?.pencil;
        let w = properties(&p, 900).map_err(|e| format!("seed {}: {e}", 1000 + k))?;
        if w >= worst.0 {
            worst = (w, format!("random seed {}", 1000 + k));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        pass: worst.0 <= 1e-8 && secs < 60.0,
        detail: format!(
            "{} zoo + 50 random pencils: max relative deviation {:.2e} ({}), {secs:.2} s",
            specs.len(),
            worst.0,
            worst.1
        ),
    })
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("example3 near-zero golden", || golden(Region::NearZero)),
        ("example3 near-infinity golden", || golden(Region::NearInfinity)),
        ("fundamental residuals j in [-20, 20]", residuals),
        ("contour oracle vs recursion", oracle_agreement),
        ("jordan blocks: pole order, ascent, descent", jordan_blocks),
        ("shift ascent/descent on interior window", shifts),
        ("Laurent growth rates", rates),
        ("projection and resolvent property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("[{}] {} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
