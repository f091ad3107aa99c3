//! Chain spaces, ascent and descent, and the generating subspaces of
//! singular and regular chains.

use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{
    balancing_exponents, growth_rate, identity, intersect, ordered_schur, preimage, range, scale_rows_cols,
    sigma_min, solve, spectral_norm, subspace_sum, ComplexMatrix, Subspace, Tolerances, C64,
};
use crate::pencil::{eval_pencil, flip_pencil, Annulus, OperatorPencil};

/// The chain space families. `URegular`/`VRegular` are the U/V spaces of
/// the flipped pencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    S,
    T,
    U,
    V,
    USingular,
    VSingular,
    URegular,
    VRegular,
}

impl ChainKind {
    pub const ALL: [ChainKind; 8] = [
        ChainKind::S,
        ChainKind::T,
        ChainKind::U,
        ChainKind::V,
        ChainKind::USingular,
        ChainKind::VSingular,
        ChainKind::URegular,
        ChainKind::VRegular,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ChainKind::S => "S",
            ChainKind::T => "T",
            ChainKind::U => "U",
            ChainKind::V => "V",
            ChainKind::USingular => "U_sg",
            ChainKind::VSingular => "V_sg",
            ChainKind::URegular => "U_rg",
            ChainKind::VRegular => "V_rg",
        }
    }

    /// True for families living in the domain X, false for the codomain Y.
    fn in_domain(&self) -> bool {
        matches!(self, ChainKind::S | ChainKind::U | ChainKind::USingular | ChainKind::URegular)
    }
}

/// Which side of the annulus a chain decays toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainSide {
    Singular,
    Regular,
}

#[derive(Debug, Clone)]
pub struct ChainFamily {
    pub kind: ChainKind,
    /// spaces[m] is the m-th member
    pub spaces: Vec<Subspace>,
}

impl ChainFamily {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }
}

/// Pencil rescaled by powers of two, A' = D_row A D_col. Rank decisions on
/// the rescaled pair are far less sensitive to graded entries, and the map
/// back is exact.
struct Balanced {
    a0: ComplexMatrix,
    a1: ComplexMatrix,
    row: Vec<f64>,
    col: Vec<f64>,
}

impl Balanced {
    fn new(p: &OperatorPencil) -> Self {
        let (re, ce) = balancing_exponents(&[&p.a0, &p.a1]);
        let row: Vec<f64> = re.iter().map(|&e| 2f64.powi(e)).collect();
        let col: Vec<f64> = ce.iter().map(|&e| 2f64.powi(e)).collect();
        Balanced {
            a0: scale_rows_cols(&p.a0, &row, &col),
            a1: scale_rows_cols(&p.a1, &row, &col),
            row,
            col,
        }
    }

    fn to_domain(&self, s: &Subspace) -> Subspace {
        s.scaled(&self.col)
    }

    fn to_codomain(&self, s: &Subspace) -> Subspace {
        let inv: Vec<f64> = self.row.iter().map(|d| 1.0 / d).collect();
        s.scaled(&inv)
    }
}

fn image(a: &ComplexMatrix, s: &Subspace, tol: &Tolerances) -> Subspace {
    if s.is_zero() {
        return Subspace::zero(a.nrows());
    }
    range(&(a * s.basis()), tol)
}

fn raw_family(a0: &ComplexMatrix, a1: &ComplexMatrix, kind: ChainKind, m_max: usize, tol: &Tolerances) -> Result<Vec<Subspace>> {
    let (ny, nx) = a0.shape();
    let mut out = Vec::with_capacity(m_max + 1);
    match kind {
        ChainKind::S | ChainKind::T => {
            let mut s = Subspace::full(nx);
            out.push(if kind == ChainKind::S { s.clone() } else { Subspace::full(ny) });
            for _ in 1..=m_max {
                let t = image(a0, &s, tol);
                s = preimage(a1, &t, tol)?;
                out.push(if kind == ChainKind::S { s.clone() } else { t });
            }
        }
        ChainKind::U | ChainKind::USingular | ChainKind::V | ChainKind::VSingular => {
            let mut v = Subspace::zero(ny);
            out.push(if kind.in_domain() { Subspace::zero(nx) } else { v.clone() });
            for _ in 1..=m_max {
                let u = preimage(a0, &v, tol)?;
                v = image(a1, &u, tol);
                out.push(if kind.in_domain() { u } else { v.clone() });
            }
        }
        ChainKind::URegular | ChainKind::VRegular => {
            return raw_family(a1, a0, if kind == ChainKind::URegular { ChainKind::U } else { ChainKind::V }, m_max, tol);
        }
    }
    Ok(out)
}

/// Members 0..=m_max of a chain space family.
pub fn chain_family(p: &OperatorPencil, kind: ChainKind, m_max: usize, tol: &Tolerances) -> Result<ChainFamily> {
    let b = Balanced::new(p);
    let spaces = raw_family(&b.a0, &b.a1, kind, m_max, tol)?
        .iter()
        .map(|s| if kind.in_domain() { b.to_domain(s) } else { b.to_codomain(s) })
        .collect();
    Ok(ChainFamily { kind, spaces })
}

/// An index that is either found or exceeds the probe limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extended {
    Finite(usize),
    Exceeds(usize),
}

impl Extended {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Extended::Finite(m) => Some(*m),
            Extended::Exceeds(_) => None,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(m) => write!(f, "{m}"),
            Extended::Exceeds(m) => write!(f, "exceeds {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentDescentEvidence {
    pub m: usize,
    /// coordinates inspected at this m
    pub window: usize,
    pub dim_s: usize,
    /// rank of null(A0) ∩ S_m on the window
    pub null_cap_s: usize,
    pub dim_v: usize,
    /// rank of A0(X) + V_m on the window
    pub range_plus_v: usize,
    /// rank of A0(X) ∩ V_m on the window
    pub range_cap_v: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentDescentReport {
    pub ascent: Extended,
    /// least m with A0(X) + V_m = Y
    pub descent: Extended,
    /// least m with A0(X) ⊕ V_m = Y
    pub descent_direct: Extended,
    pub probe_limit: usize,
    pub window_margin: Option<usize>,
    pub evidence: Vec<AscentDescentEvidence>,
}

/// Ascent and descent, probing m = 0..=m_max. For truncated families the
/// tests look only at the first N - m - margin coordinates.
pub fn ascent_descent(p: &OperatorPencil, m_max: usize, margin: usize, tol: &Tolerances) -> Result<AscentDescentReport> {
    let b = Balanced::new(p);
    let (ny, nx) = p.a0.shape();
    let s_fam = raw_family(&b.a0, &b.a1, ChainKind::S, m_max, tol)?;
    let v_fam = raw_family(&b.a0, &b.a1, ChainKind::V, m_max, tol)?;
    let null0 = preimage(&b.a0, &Subspace::zero(ny), tol)?;
    let range0 = image(&b.a0, &Subspace::full(nx), tol);
    let truncated = p.provenance.truncation.is_some();
    let window = |m: usize, n: usize| {
        if truncated {
            n.saturating_sub(m + margin).max(1)
        } else {
            n
        }
    };
    let mut ascent = None;
    let mut descent = None;
    let mut direct = None;
    let mut evidence = Vec::new();
    for m in 0..=m_max {
        let wx = window(m, nx);
        let wy = window(m, ny);
        let cap = intersect(&null0, &s_fam[m], tol)?;
        let sum = subspace_sum(&range0, &v_fam[m], tol)?;
        let rcap = intersect(&range0, &v_fam[m], tol)?;
        let ev = AscentDescentEvidence {
            m,
            window: wx.min(wy),
            dim_s: s_fam[m].dim(),
            null_cap_s: cap.window_rank(wx, tol),
            dim_v: v_fam[m].dim(),
            range_plus_v: sum.window_rank(wy, tol),
            range_cap_v: rcap.window_rank(wy, tol),
        };
        if ascent.is_none() && ev.null_cap_s == 0 {
            ascent = Some(m);
        }
        if descent.is_none() && ev.range_plus_v == wy {
            descent = Some(m);
        }
        if direct.is_none() && ev.range_plus_v == wy && ev.range_cap_v == 0 {
            direct = Some(m);
        }
        evidence.push(ev);
    }
    let ext = |o: Option<usize>| o.map_or(Extended::Exceeds(m_max), Extended::Finite);
    Ok(AscentDescentReport {
        ascent: ext(ascent),
        descent: ext(descent),
        descent_direct: ext(direct),
        probe_limit: m_max,
        window_margin: truncated.then_some(margin),
        evidence,
    })
}

/// A right deflating pair: orthonormal W and chain map C with
/// A0 W + A1 W C = 0, so x -> W C W^H x continues any chain inside W.
#[derive(Debug, Clone)]
pub struct DeflatingPair {
    pub basis: Subspace,
    pub chain_map: ComplexMatrix,
    /// eigenvalues of the chain map, i.e. the pencil eigenvalues it carries
    pub eigenvalues: Vec<C64>,
}

enum Selection {
    Inside(f64),
    Finite,
}

/// Shift where A(z0) is best conditioned among a few points on |z| = radius.
fn pick_shift(p: &OperatorPencil, radius: f64) -> C64 {
    let mut best = (f64::NEG_INFINITY, C64::new(radius, 0.0));
    for k in 0..16 {
        let theta = 0.37 + k as f64 * std::f64::consts::TAU / 16.0;
        let z = C64::from_polar(radius, theta);
        let s = sigma_min(&eval_pencil(p, z));
        if s > best.0 {
            best = (s, z);
        }
    }
    best.1
}

/// With K = A(z0)^-1 A1, each eigenvalue mu of K is 1/(z0 - lambda) for a
/// pencil eigenvalue lambda (mu = 0 for lambda = infinity). Invariant
/// subspaces of K are right deflating subspaces of the pencil.
fn deflating_split(p: &OperatorPencil, radius: f64, sel: Selection, tol: &Tolerances) -> Result<DeflatingPair> {
    if !p.is_square() {
        return Err(Error::InvalidShape("chain generators need a square pencil".into()));
    }
    let z0 = pick_shift(p, radius);
    let az = eval_pencil(p, z0);
    let k = crate::linalg::solve_regular(&az, &p.a1, tol)
        .ok_or(Error::SingularShift { re: z0.re, im: z0.im })?;
    let knorm = spectral_norm(&k);
    let (q, t, lead) = match sel {
        Selection::Inside(rho) => ordered_schur(&k, |mu| (C64::new(1.0, 0.0) - z0 * mu).norm() < rho * mu.norm())?,
        Selection::Finite => ordered_schur(&k, |mu| mu.norm() > tol.rank_rel.sqrt() * knorm)?,
    };
    let w = q.columns(0, lead).into_owned();
    let t11 = t.view((0, 0), (lead, lead)).into_owned();
    let t11_inv = t11.try_inverse().unwrap_or_else(|| ComplexMatrix::zeros(lead, lead));
    let chain_map = identity(lead) * z0 - t11_inv;
    let eigenvalues = (0..lead).map(|i| z0 - C64::new(1.0, 0.0) / t[(i, i)]).collect();
    Ok(DeflatingPair {
        basis: Subspace::from_orthonormal(w),
        chain_map,
        eigenvalues,
    })
}

fn side_pencil(p: &OperatorPencil, side: ChainSide) -> OperatorPencil {
    match side {
        ChainSide::Singular => p.clone(),
        ChainSide::Regular => flip_pencil(p),
    }
}

fn side_annulus(a: &Annulus, side: ChainSide) -> Annulus {
    match side {
        ChainSide::Singular => *a,
        ChainSide::Regular => a.flip(),
    }
}

#[derive(Debug, Clone)]
pub struct GeneratingSubspace {
    pub side: ChainSide,
    pub subspace: Subspace,
    pub rate_threshold: f64,
    pub probe_depth: usize,
    pub chain_map: ComplexMatrix,
    pub eigenvalues: Vec<C64>,
    /// measured growth rate of the chain started at each basis vector
    pub rates: Vec<f64>,
}

/// Generators of chains that extend indefinitely with growth rate below
/// `rho` (default: the annulus rate threshold on that side). Regular chains
/// are the singular chains of the flipped pencil on the flipped annulus.
pub fn generating_subspace(
    p: &OperatorPencil,
    side: ChainSide,
    annulus: &Annulus,
    probe_depth: usize,
    rho: Option<f64>,
    tol: &Tolerances,
) -> Result<GeneratingSubspace> {
    if probe_depth < 4 {
        return Err(Error::InvalidParams("probe depth must be at least 4".into()));
    }
    let q = side_pencil(p, side);
    let ann = side_annulus(annulus, side);
    let rho = rho.unwrap_or_else(|| ann.rate_threshold());
    let pair = deflating_split(&q, ann.center_radius(), Selection::Inside(rho), tol)?;
    let rates = (0..pair.basis.dim())
        .map(|i| {
            let mut x = DVector::from_fn(pair.basis.dim(), |k, _| if k == i { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
            let mut norms = vec![1.0];
            for _ in 1..probe_depth {
                x = &pair.chain_map * x;
                norms.push(x.norm());
            }
            chain_rate(&mut norms, tol)
        })
        .collect();
    Ok(GeneratingSubspace {
        side,
        subspace: pair.basis,
        rate_threshold: rho,
        probe_depth,
        chain_map: pair.chain_map,
        eigenvalues: pair.eigenvalues,
        rates,
    })
}

/// Flushes norms at rounding level to zero, then fits the rate.
fn chain_rate(norms: &mut [f64], tol: &Tolerances) -> f64 {
    let mut peak: f64 = 0.0;
    for x in norms.iter_mut() {
        peak = peak.max(*x);
        if *x <= tol.rank_rel * peak {
            *x = 0.0;
        }
    }
    growth_rate(norms, None).unwrap_or(0.0)
}

#[derive(Debug, Clone)]
pub struct JordanChainRecord {
    pub side: ChainSide,
    /// vectors[n] is x_{-(n+1)} (singular) or x_n (regular)
    pub vectors: Vec<DVector<C64>>,
    pub norms: Vec<f64>,
    pub rate: f64,
    /// number of nonzero vectors before the chain becomes identically zero
    pub nonzero_len: usize,
}

/// Extends a chain from `generator` to length `len`: A0 x_{-n} + A1 x_{-n-1}
/// = 0 on the singular side, A1 x_{n} + A0 x_{n+1} = 0 on the regular one.
/// Generators of unbounded chains continue along the unique deflating
/// continuation; others take the minimum-norm step until none exists.
pub fn extend_chain(
    p: &OperatorPencil,
    side: ChainSide,
    generator: &DVector<C64>,
    len: usize,
    tol: &Tolerances,
) -> Result<JordanChainRecord> {
    let q = side_pencil(p, side);
    if generator.len() != q.domain_dim() || len == 0 {
        return Err(Error::InvalidShape("generator length or chain length".into()));
    }
    let gnorm = generator.norm();
    let radius = (q.a0.norm() / q.a1.norm().max(f64::MIN_POSITIVE)).clamp(1e-3, 1e3);
    let fin = deflating_split(&q, radius, Selection::Finite, tol)?;
    let mut vectors = vec![generator.clone()];
    if fin.basis.vector_gap(generator) <= tol.angle_tol.sin() {
        let w = fin.basis.basis();
        let mut coord = w.adjoint() * generator;
        for _ in 1..len {
            coord = &fin.chain_map * coord;
            vectors.push(w * &coord);
        }
    } else {
        for step in 1..len {
            let prev = vectors.last().expect("nonempty");
            let rhs = -(&q.a0 * prev);
            let rhs_m = ComplexMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
            let (x, res) = solve(&q.a1, &rhs_m, tol)?;
            if res > tol.residual_abs * rhs.norm().max(gnorm) {
                return Err(Error::Blocked { step });
            }
            vectors.push(x.column(0).into_owned());
        }
    }
    let mut norms: Vec<f64> = vectors.iter().map(|v| v.norm()).collect();
    let rate = chain_rate(&mut norms, tol);
    for (v, n) in vectors.iter_mut().zip(&norms) {
        if *n == 0.0 {
            v.fill(C64::new(0.0, 0.0));
        }
    }
    let nonzero_len = norms.iter().position(|&n| n == 0.0).unwrap_or(norms.len());
    Ok(JordanChainRecord {
        side,
        vectors,
        norms,
        rate,
        nonzero_len,
    })
}

/// Compares a generating subspace with the range of a projection; returns
/// whether they agree and the largest principal angle.
pub fn verify_generating_inclusion(xs: &Subspace, proj: &ComplexMatrix, tol: &Tolerances) -> (bool, f64) {
    let rg = range(proj, tol);
    let angle = xs.max_angle(&rg);
    (angle <= tol.angle_tol, angle)
}
