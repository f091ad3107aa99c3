//! Spectral projections P, P^c on the domain and Q, Q^c on the codomain
//! built from the generating subspaces.

use crate::chains::{generating_subspace, ChainSide, GeneratingSubspace};
use crate::error::{Error, Result};
use crate::linalg::{identity, pinv, range, rel_dev, sigma_min, ComplexMatrix, Subspace, Tolerances};
use crate::pencil::{Annulus, BasicSolution, OperatorPencil};

/// Oblique projections of a direct sum decomposition.
#[derive(Debug, Clone)]
pub struct ProjectionPair {
    /// onto the first summand along the second
    pub first: ComplexMatrix,
    /// onto the second summand along the first
    pub second: ComplexMatrix,
}

fn oblique(a: &Subspace, b: &Subspace, tol: &Tolerances) -> Result<ProjectionPair> {
    let n = a.ambient();
    let not_comp = || Error::NotComplementary {
        xs_dim: a.dim(),
        xr_dim: b.dim(),
        ambient: n,
    };
    if a.dim() + b.dim() != n || b.ambient() != n {
        return Err(not_comp());
    }
    let (k, m) = (a.dim(), b.dim());
    let mut e = ComplexMatrix::zeros(n, n);
    e.columns_mut(0, k).copy_from(a.basis());
    e.columns_mut(k, m).copy_from(b.basis());
    // orthonormal columns: sigma_min(E) = sqrt(1 - cos(smallest angle))
    if sigma_min(&e) <= tol.angle_tol {
        return Err(not_comp());
    }
    let inv = e.clone().lu().solve(&identity(n)).ok_or_else(not_comp)?;
    let first = a.basis() * inv.rows(0, k);
    let second = b.basis() * inv.rows(k, m);
    Ok(ProjectionPair { first, second })
}

/// P onto xs along xr and P^c = I - P, from the frame E = [L | M].
pub fn assemble_domain(xs: &Subspace, xr: &Subspace, tol: &Tolerances) -> Result<ProjectionPair> {
    oblique(xs, xr, tol)
}

#[derive(Debug, Clone)]
pub struct RangeSplit {
    pub ys: Subspace,
    pub yr: Subspace,
    pub q: ComplexMatrix,
    pub qc: ComplexMatrix,
}

/// Q onto A1(xs) along A0(xr), and Q^c.
pub fn assemble_range(p: &OperatorPencil, xs: &Subspace, xr: &Subspace, tol: &Tolerances) -> Result<RangeSplit> {
    let ys = range(&(&p.a1 * xs.basis()), tol);
    let yr = range(&(&p.a0 * xr.basis()), tol);
    if ys.dim() != xs.dim() {
        return Err(Error::NotInvertibleOnSubspace("singular"));
    }
    if yr.dim() != xr.dim() {
        return Err(Error::NotInvertibleOnSubspace("regular"));
    }
    let pair = oblique(&ys, &yr, tol)?;
    Ok(RangeSplit {
        ys,
        yr,
        q: pair.first,
        qc: pair.second,
    })
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub annulus: Annulus,
    pub singular: GeneratingSubspace,
    pub regular: GeneratingSubspace,
    pub xs: Subspace,
    pub xr: Subspace,
    pub ys: Subspace,
    pub yr: Subspace,
    pub p: ComplexMatrix,
    pub pc: ComplexMatrix,
    pub q: ComplexMatrix,
    pub qc: ComplexMatrix,
}

/// Generating subspaces on both sides of the annulus and the projections
/// they induce.
pub fn decompose(p: &OperatorPencil, annulus: &Annulus, probe_depth: usize, tol: &Tolerances) -> Result<SpectralDecomposition> {
    if !p.is_square() {
        return Err(Error::InvalidShape("spectral splitting needs a square pencil".into()));
    }
    let singular = generating_subspace(p, ChainSide::Singular, annulus, probe_depth, None, tol)?;
    let regular = generating_subspace(p, ChainSide::Regular, annulus, probe_depth, None, tol)?;
    let xs = singular.subspace.clone();
    let xr = regular.subspace.clone();
    let dom = assemble_domain(&xs, &xr, tol)?;
    let rng = assemble_range(p, &xs, &xr, tol)?;
    Ok(SpectralDecomposition {
        annulus: *annulus,
        singular,
        regular,
        xs,
        xr,
        ys: rng.ys,
        yr: rng.yr,
        p: dom.first,
        pc: dom.second,
        q: rng.q,
        qc: rng.qc,
    })
}

/// One named identity and its relative deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub deviation: f64,
}

pub fn max_deviation(checks: &[IdentityCheck]) -> f64 {
    checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
}

/// Idempotence, complementarity and the separation identities of the
/// projection pair.
pub fn verify_splitting(p: &OperatorPencil, d: &SpectralDecomposition) -> Vec<IdentityCheck> {
    let nx = p.domain_dim();
    let ny = p.codomain_dim();
    let (a0, a1) = (&p.a0, &p.a1);
    let mut out = Vec::new();
    let mut push = |name: &str, lhs: ComplexMatrix, rhs: ComplexMatrix| {
        out.push(IdentityCheck {
            name: name.into(),
            deviation: rel_dev(&lhs, &rhs),
        })
    };
    push("P^2 = P", &d.p * &d.p, d.p.clone());
    push("Pc^2 = Pc", &d.pc * &d.pc, d.pc.clone());
    push("Q^2 = Q", &d.q * &d.q, d.q.clone());
    push("Qc^2 = Qc", &d.qc * &d.qc, d.qc.clone());
    push("P + Pc = I", &d.p + &d.pc, identity(nx));
    push("Q + Qc = I", &d.q + &d.qc, identity(ny));
    push("A0 = Q A0 P + Qc A0 Pc", &d.q * a0 * &d.p + &d.qc * a0 * &d.pc, a0.clone());
    push("A1 = Q A1 P + Qc A1 Pc", &d.q * a1 * &d.p + &d.qc * a1 * &d.pc, a1.clone());
    push("Q A1 = A1 P", &d.q * a1, a1 * &d.p);
    push("Qc A0 = A0 Pc", &d.qc * a0, a0 * &d.pc);
    push("Q A0 = A0 P", &d.q * a0, a0 * &d.p);
    push("Qc A1 = A1 Pc", &d.qc * a1, a1 * &d.pc);
    out
}

/// The pencil restricted to each summand, in orthonormal frame coordinates.
#[derive(Debug, Clone)]
pub struct SeparatedOperators {
    /// A1 : Xs -> Ys
    pub a1_s: ComplexMatrix,
    /// R_-1 : Ys -> Xs
    pub r_minus1_s: ComplexMatrix,
    /// A0 : Xr -> Yr
    pub a0_r: ComplexMatrix,
    /// R_0 : Yr -> Xr
    pub r0_r: ComplexMatrix,
    pub checks: Vec<IdentityCheck>,
}

/// Checks that R_-1 inverts A1 on the singular summand and R_0 inverts A0
/// on the regular one.
pub fn separated_operators(p: &OperatorPencil, d: &SpectralDecomposition, b: &BasicSolution) -> SeparatedOperators {
    let (ls, lr) = (d.xs.basis(), d.xr.basis());
    let (ms, mr) = (d.ys.basis(), d.yr.basis());
    let a1_s = ms.adjoint() * &p.a1 * ls;
    let r_minus1_s = ls.adjoint() * &b.r_minus1 * ms;
    let a0_r = mr.adjoint() * &p.a0 * lr;
    let r0_r = lr.adjoint() * &b.r0 * mr;
    let (ks, kr) = (d.xs.dim(), d.xr.dim());
    let checks = vec![
        IdentityCheck {
            name: "R_-1 A1 = I on Xs".into(),
            deviation: rel_dev(&(&r_minus1_s * &a1_s), &identity(ks)),
        },
        IdentityCheck {
            name: "A1 R_-1 = I on Ys".into(),
            deviation: rel_dev(&(&a1_s * &r_minus1_s), &identity(ks)),
        },
        IdentityCheck {
            name: "R_0 A0 = I on Xr".into(),
            deviation: rel_dev(&(&r0_r * &a0_r), &identity(kr)),
        },
        IdentityCheck {
            name: "A0 R_0 = I on Yr".into(),
            deviation: rel_dev(&(&a0_r * &r0_r), &identity(kr)),
        },
    ];
    SeparatedOperators {
        a1_s,
        r_minus1_s,
        a0_r,
        r0_r,
        checks,
    }
}

/// R_-1 = L (A1 L)^+ Q and R_0 = M (A0 M)^+ Q^c.
pub fn basic_from_decomposition(p: &OperatorPencil, d: &SpectralDecomposition, tol: &Tolerances) -> Result<BasicSolution> {
    let ls = d.xs.basis();
    let lr = d.xr.basis();
    let a1l = &p.a1 * ls;
    let a0m = &p.a0 * lr;
    if sigma_min(&a1l) <= tol.rank_rel * p.a1.norm().max(f64::MIN_POSITIVE) && d.xs.dim() > 0 {
        return Err(Error::NotInvertibleOnSubspace("singular"));
    }
    if sigma_min(&a0m) <= tol.rank_rel * p.a0.norm().max(f64::MIN_POSITIVE) && d.xr.dim() > 0 {
        return Err(Error::NotInvertibleOnSubspace("regular"));
    }
    let r_minus1 = ls * pinv(&a1l, tol) * &d.q;
    let r0 = lr * pinv(&a0m, tol) * &d.qc;
    Ok(BasicSolution {
        r_minus1,
        r0,
        annulus: d.annulus,
    })
}
