//! Laurent coefficients of R(z) = A(z)^-1 on an annulus: the basic pair,
//! the recursions, a contour quadrature cross-check and validation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{growth_rate, identity, rel_dev, solve_regular, ComplexMatrix, Tolerances, C64};
use crate::pencil::{
    closed_form_resolvent, eval_pencil, Annulus, BasicSolution, OperatorPencil,
};
use crate::projections::SpectralDecomposition;

/// Coefficients R_j for a contiguous range of j, with the fitted rates of
/// the principal and regular parts.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentExpansion {
    start: i64,
    coeffs: Vec<ComplexMatrix>,
    pub annulus: Annulus,
    /// fitted limit of |R_-k|^(1/k)
    pub inner_rate: Option<f64>,
    /// fitted limit of |R_l|^(1/l)
    pub outer_rate: Option<f64>,
}

impl LaurentExpansion {
    pub fn new(start: i64, coeffs: Vec<ComplexMatrix>, annulus: Annulus) -> Self {
        LaurentExpansion {
            start,
            coeffs,
            annulus,
            inner_rate: None,
            outer_rate: None,
        }
    }

    pub fn coeff(&self, j: i64) -> Option<&ComplexMatrix> {
        if j < self.start {
            return None;
        }
        self.coeffs.get((j - self.start) as usize)
    }

    /// Inclusive index range, None when empty.
    pub fn index_range(&self) -> Option<(i64, i64)> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some((self.start, self.start + self.coeffs.len() as i64 - 1))
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ComplexMatrix)> {
        self.coeffs.iter().enumerate().map(move |(k, m)| (self.start + k as i64, m))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// R_-1 = L (A1 L)^+ Q and R_0 = M (A0 M)^+ Q^c.
pub fn solve_basic(p: &OperatorPencil, d: &SpectralDecomposition, tol: &Tolerances) -> Result<BasicSolution> {
    crate::projections::basic_from_decomposition(p, d, tol)
}

/// R_-k = (-1)^(k-1) (R_-1 A0)^(k-1) R_-1 for k = 1..=k_max and
/// R_l = (-1)^l (R_0 A1)^l R_0 for l = 0..=l_max. The annulus estimate is
/// taken from the growth of both halves when it can be fitted.
pub fn laurent_coeffs(b: &BasicSolution, p: &OperatorPencil, k_max: usize, l_max: usize) -> Result<LaurentExpansion> {
    if k_max == 0 {
        return Err(Error::InvalidParams("k_max must be at least 1".into()));
    }
    let step_neg = -(&b.r_minus1 * &p.a0);
    let step_pos = -(&b.r0 * &p.a1);
    let mut neg = vec![b.r_minus1.clone()];
    for _ in 1..k_max {
        let next = &step_neg * neg.last().expect("nonempty");
        neg.push(next);
    }
    let mut pos = vec![b.r0.clone()];
    for _ in 0..l_max {
        let next = &step_pos * pos.last().expect("nonempty");
        pos.push(next);
    }
    let neg_norms: Vec<f64> = std::iter::once(1.0).chain(neg.iter().map(|m| m.norm())).collect();
    let pos_norms: Vec<f64> = pos.iter().map(|m| m.norm()).collect();
    let inner = growth_rate(&neg_norms[1..], None).ok();
    let outer = growth_rate(&pos_norms, None).ok();
    let mut coeffs: Vec<ComplexMatrix> = neg.into_iter().rev().collect();
    coeffs.extend(pos);
    let mut annulus = b.annulus;
    if let (Some(si), Some(so)) = (inner, outer) {
        let r = if so == 0.0 { f64::INFINITY } else { 1.0 / so };
        if let Ok(a) = Annulus::new(si, r) {
            annulus = a;
        }
    }
    Ok(LaurentExpansion {
        start: -(k_max as i64),
        coeffs,
        annulus,
        inner_rate: inner,
        outer_rate: outer,
    })
}

#[derive(Debug, Clone)]
pub struct LaurentValue {
    pub value: ComplexMatrix,
    /// geometric estimate of the neglected terms
    pub tail_bound: f64,
}

/// Partial sum of the stored terms at z.
pub fn eval_laurent(exp: &LaurentExpansion, z: C64) -> Result<LaurentValue> {
    let a = exp.annulus;
    if !a.contains(z) {
        return Err(Error::OutsideAnnulus {
            modulus: z.norm(),
            s: a.s(),
            r: a.r(),
        });
    }
    let (lo, hi) = exp.index_range().ok_or(Error::EmptyExpansion)?;
    let n = exp.coeffs[0].nrows();
    let m = exp.coeffs[0].ncols();
    let mut value = ComplexMatrix::zeros(n, m);
    for (j, r) in exp.iter() {
        value += r * z.powi(j as i32);
    }
    let modulus = z.norm();
    let mut tail = 0.0;
    if let Some(si) = exp.inner_rate {
        let q = si / modulus;
        if q < 1.0 {
            tail += exp.coeff(lo).map_or(0.0, |r| r.norm()) * modulus.powi(lo as i32) * q / (1.0 - q);
        } else {
            tail = f64::INFINITY;
        }
    }
    if let Some(so) = exp.outer_rate {
        let q = so * modulus;
        if q < 1.0 {
            tail += exp.coeff(hi).map_or(0.0, |r| r.norm()) * modulus.powi(hi as i32) * q / (1.0 - q);
        } else {
            tail = f64::INFINITY;
        }
    }
    Ok(LaurentValue { value, tail_bound: tail })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// contour radius; None picks the annulus default
    pub radius: Option<f64>,
    pub nodes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { radius: None, nodes: 512 }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub expansion: LaurentExpansion,
    pub radius: f64,
    pub nodes: usize,
    /// largest change of any coefficient when every second node is dropped
    pub aliasing_estimate: f64,
}

/// R_j ~ (1/n) sum_k A(z_k)^-1 z_k^-j on |z| = radius, for j in j_lo..=j_hi.
pub fn contour_oracle(
    p: &OperatorPencil,
    annulus: &Annulus,
    cfg: &OracleConfig,
    j_lo: i64,
    j_hi: i64,
    tol: &Tolerances,
) -> Result<OracleResult> {
    if cfg.nodes < 16 || j_lo > j_hi {
        return Err(Error::InvalidParams("the oracle needs at least 16 nodes and j_lo <= j_hi".into()));
    }
    if !p.is_square() {
        return Err(Error::InvalidShape("the oracle needs a square pencil".into()));
    }
    let radius = cfg.radius.unwrap_or_else(|| annulus.center_radius());
    if !(radius > annulus.s() && radius < annulus.r()) {
        return Err(Error::OutsideAnnulus {
            modulus: radius,
            s: annulus.s(),
            r: annulus.r(),
        });
    }
    let n = p.domain_dim();
    let nodes = cfg.nodes;
    let inverses: Vec<Result<ComplexMatrix>> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let z = C64::from_polar(radius, std::f64::consts::TAU * k as f64 / nodes as f64);
            solve_regular(&eval_pencil(p, z), &identity(n), tol).ok_or(Error::SingularNode { k })
        })
        .collect();
    let inverses: Vec<ComplexMatrix> = inverses.into_iter().collect::<Result<_>>()?;
    let mut coeffs = Vec::new();
    let mut aliasing: f64 = 0.0;
    for j in j_lo..=j_hi {
        let mut full = ComplexMatrix::zeros(n, n);
        let mut half = ComplexMatrix::zeros(n, n);
        for (k, inv) in inverses.iter().enumerate() {
            let w = C64::from_polar(radius.powi(-(j as i32)), -std::f64::consts::TAU * (j as f64) * k as f64 / nodes as f64);
            let term = inv * w;
            if k % 2 == 0 {
                half += &term;
            }
            full += term;
        }
        full /= C64::new(nodes as f64, 0.0);
        half /= C64::new((nodes / 2 + nodes % 2) as f64, 0.0);
        aliasing = aliasing.max((&full - &half).norm());
        coeffs.push(full);
    }
    Ok(OracleResult {
        expansion: LaurentExpansion::new(j_lo, coeffs, *annulus),
        radius,
        nodes,
        aliasing_estimate: aliasing,
    })
}

/// 𝓡_λ = λ^-1 R(-1/λ) A0, whose family satisfies the resolvent equation.
pub fn resolvent_family(p: &OperatorPencil, b: &BasicSolution, lambda: C64, tol: &Tolerances) -> Result<ComplexMatrix> {
    let z = -C64::new(1.0, 0.0) / lambda;
    Ok(closed_form_resolvent(b, p, z, tol)? * &p.a0 / lambda)
}

#[derive(Debug, Clone)]
pub struct SampleCheck {
    pub z: C64,
    /// |A(z) R(z) - I| and |R(z) A(z) - I| for the closed form
    pub closed_form_residual: f64,
    /// closed form against the Laurent partial sum
    pub laurent_deviation: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub samples: Vec<SampleCheck>,
    /// (j, left, right) relative fundamental residuals on the interior block
    pub fundamental: Vec<(i64, f64, f64)>,
    pub interior: usize,
}

impl ValidationReport {
    pub fn max_fundamental(&self) -> f64 {
        self.fundamental.iter().map(|&(_, l, r)| l.max(r)).fold(0.0, f64::max)
    }

    pub fn max_sample(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.closed_form_residual.max(s.laurent_deviation))
            .fold(0.0, f64::max)
    }
}

fn leading(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    m.view((0, 0), (k.min(m.nrows()), k.min(m.ncols()))).into_owned()
}

/// Closed form and Laurent sum at each sample, and the fundamental
/// equations over the stored range, restricted to the leading `interior`
/// block.
pub fn validate_resolvent(
    p: &OperatorPencil,
    b: &BasicSolution,
    exp: &LaurentExpansion,
    samples: &[C64],
    interior: usize,
    tol: &Tolerances,
) -> Result<ValidationReport> {
    let n = p.domain_dim();
    let mut checks = Vec::new();
    for &z in samples {
        let cf = closed_form_resolvent(b, p, z, tol)?;
        let lv = eval_laurent(exp, z)?;
        let az = eval_pencil(p, z);
        let id = identity(n);
        let res = rel_dev(&leading(&(&az * &cf), interior), &leading(&id, interior))
            .max(rel_dev(&leading(&(&cf * &az), interior), &leading(&id, interior)));
        checks.push(SampleCheck {
            z,
            closed_form_residual: res,
            laurent_deviation: rel_dev(&leading(&cf, interior), &leading(&lv.value, interior)),
            tail_bound: lv.tail_bound,
        });
    }
    let (lo, hi) = exp.index_range().ok_or(Error::EmptyExpansion)?;
    let mut fundamental = Vec::new();
    for j in (lo + 1)..=hi {
        let prev = exp.coeff(j - 1).expect("in range");
        let cur = exp.coeff(j).expect("in range");
        let mut left = prev * &p.a1 + cur * &p.a0;
        let mut right = &p.a1 * prev + &p.a0 * cur;
        if j == 0 {
            left -= identity(n);
            right -= identity(n);
        }
        let scale = 1f64.max(leading(prev, interior).norm()).max(leading(cur, interior).norm());
        fundamental.push((j, leading(&left, interior).norm() / scale, leading(&right, interior).norm() / scale));
    }
    Ok(ValidationReport {
        samples: checks,
        fundamental,
        interior,
    })
}
