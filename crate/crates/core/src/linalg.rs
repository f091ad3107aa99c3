//! Dense complex linear algebra: subspaces, rank-revealing solves and the
//! numeric helpers shared by the chain and projection code.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Numerical thresholds used by every rank decision and residual check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// singular values below `rank_rel * sigma_max` count as zero
    pub rank_rel: f64,
    /// bound on residuals, measured relative to max(1, operand norm)
    pub residual_abs: f64,
    /// largest principal angle (radians) at which subspaces are equal
    pub angle_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-10,
            residual_abs: 1e-9,
            angle_tol: 1e-8,
        }
    }
}

/// Builds a matrix from row-major rows, rejecting ragged or non-finite input.
pub fn matrix_from_rows(rows: &[Vec<C64>]) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidShape("ragged rows".into()));
    }
    let m = ComplexMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    check_finite(&m, "matrix")?;
    Ok(m)
}

pub fn real_matrix(rows: &[&[f64]]) -> ComplexMatrix {
    let ncols = rows.first().map_or(0, |r| r.len());
    ComplexMatrix::from_fn(rows.len(), ncols, |i, j| r(rows[i][j]))
}

pub fn check_finite(m: &ComplexMatrix, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn fro(m: &ComplexMatrix) -> f64 {
    m.norm()
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Deviation of `a` from `b`, relative to max(1, |a|, |b|).
pub fn rel_dev(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = (a - b).norm();
    d / 1f64.max(a.norm()).max(b.norm())
}

/// Singular values (descending), thin U and the full right factor V.
struct FullSvd {
    sigma: Vec<f64>,
    u: ComplexMatrix,
    v: ComplexMatrix,
}

/// One-sided Jacobi SVD of a matrix with at least as many rows as columns.
/// Returns (sigma descending, U with unit or zero columns, V square).
fn jacobi_tall(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix, ComplexMatrix) {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = identity(n);
    let eps = f64::EPSILON;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..mat.nrows() {
                        let x = mat[(i, p)];
                        let y = mat[(i, q)] * phase.conj();
                        mat[(i, p)] = x * cs - y * sn;
                        mat[(i, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, w.column(j).norm())).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));
    let sigma = order.iter().map(|&(_, s)| s).collect();
    let u = ComplexMatrix::from_fn(m, n, |i, k| {
        let (j, s) = order[k];
        if s > 0.0 {
            w[(i, j)] / s
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k].0)]);
    (sigma, u, v)
}

fn full_svd(a: &ComplexMatrix) -> FullSvd {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return FullSvd {
            sigma: vec![],
            u: ComplexMatrix::zeros(m, 0),
            v: identity(n),
        };
    }
    // pad with zero rows so that V comes out square
    let padded = if m < n {
        let mut p = ComplexMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let (sig, u_full, v) = jacobi_tall(&padded);
    let k = m.min(n);
    FullSvd {
        sigma: sig[..k].to_vec(),
        u: u_full.view((0, 0), (m, k)).into_owned(),
        v,
    }
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return vec![];
    }
    if m >= n {
        jacobi_tall(a).0
    } else {
        jacobi_tall(&a.adjoint()).0
    }
}

pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Smallest singular value (zero for a wide matrix).
pub fn sigma_min(a: &ComplexMatrix) -> f64 {
    let s = singular_values(a);
    if a.nrows() < a.ncols() {
        return 0.0;
    }
    s.last().copied().unwrap_or(f64::INFINITY)
}

/// A linear subspace of C^n carried by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: ComplexMatrix,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: ComplexMatrix) -> Self {
        Subspace { basis }
    }

    /// Span of the columns of `m`, rank decided by `tol`.
    pub fn span(m: &ComplexMatrix, tol: &Tolerances) -> Self {
        range(m, tol)
    }

    /// Span of columns known to be independent (no rank decision).
    pub fn span_independent(m: &ComplexMatrix) -> Self {
        if m.ncols() == 0 {
            return Subspace::zero(m.nrows());
        }
        let q = m.clone().qr().q();
        Subspace {
            basis: q.columns(0, m.ncols()).into_owned(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: ComplexMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace { basis: identity(n) }
    }

    pub fn coordinates(n: usize, idx: &[usize]) -> Self {
        let mut b = ComplexMatrix::zeros(n, idx.len());
        for (k, &i) in idx.iter().enumerate() {
            b[(i, k)] = r(1.0);
        }
        Subspace { basis: b }
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Largest principal angle when the dimensions agree, pi/2 otherwise.
    pub fn max_angle(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() || self.ambient() != other.ambient() {
            return FRAC_PI_2;
        }
        if self.dim() == 0 {
            return 0.0;
        }
        let resid = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
        spectral_norm(&resid).min(1.0).asin()
    }

    pub fn approx_eq(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.dim() == other.dim() && self.max_angle(other) <= tol.angle_tol
    }

    /// Sine of the largest angle between `other` and this subspace.
    pub fn containment_gap(&self, other: &Subspace) -> f64 {
        if other.dim() == 0 {
            return 0.0;
        }
        let resid = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
        spectral_norm(&resid)
    }

    pub fn contains(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.containment_gap(other) <= tol.angle_tol.sin()
    }

    /// Distance of a vector from the subspace relative to its norm.
    pub fn vector_gap(&self, x: &DVector<C64>) -> f64 {
        let nx = x.norm();
        if nx == 0.0 {
            return 0.0;
        }
        let resid = x - &self.basis * (self.basis.adjoint() * x);
        resid.norm() / nx
    }

    /// Rank of the projection onto the first `w` coordinates.
    pub fn window_rank(&self, w: usize, tol: &Tolerances) -> usize {
        let w = w.min(self.ambient());
        if self.dim() == 0 || w == 0 {
            return 0;
        }
        let head = self.basis.rows(0, w).into_owned();
        let s = singular_values(&head);
        // columns are orthonormal, so sigma <= 1: cut against 1
        s.iter().filter(|&&x| x > tol.rank_rel.max(tol.angle_tol)).count()
    }

    /// Image under a diagonal scaling, re-orthonormalized.
    pub fn scaled(&self, d: &[f64]) -> Subspace {
        let mut b = self.basis.clone();
        for (i, mut row) in b.row_iter_mut().enumerate() {
            row *= r(d[i]);
        }
        Subspace::span_independent(&b)
    }
}

/// Null space of `a`.
pub fn nullspace(a: &ComplexMatrix, tol: &Tolerances) -> Result<Subspace> {
    if a.ncols() == 0 {
        return Err(Error::InvalidShape("nullspace of a matrix with no columns".into()));
    }
    let smax = spectral_norm(a);
    Ok(nullspace_cut(a, tol.rank_rel * smax))
}

fn nullspace_cut(a: &ComplexMatrix, cutoff: f64) -> Subspace {
    let n = a.ncols();
    let svd = full_svd(a);
    let rank = svd.sigma.iter().filter(|&&s| s > cutoff).count();
    let basis = svd.v.columns(rank, n - rank).into_owned();
    Subspace { basis }
}

/// Column space of `a`.
pub fn range(a: &ComplexMatrix, tol: &Tolerances) -> Subspace {
    let svd = full_svd(a);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let rank = svd.sigma.iter().filter(|&&s| s > tol.rank_rel * smax).count();
    Subspace {
        basis: svd.u.columns(0, rank).into_owned(),
    }
}

/// Preimage {x : a x in t}.
pub fn preimage(a: &ComplexMatrix, t: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    if t.ambient() != a.nrows() || a.ncols() == 0 {
        return Err(Error::InvalidShape(format!(
            "preimage of a {}x{} map under a subspace of C^{}",
            a.nrows(),
            a.ncols(),
            t.ambient()
        )));
    }
    let proj = a - t.basis() * (t.basis().adjoint() * a);
    let scale = spectral_norm(a);
    Ok(nullspace_cut(&proj, tol.rank_rel * scale))
}

fn stacked_cutoff(sigma: &[f64], tol: &Tolerances) -> f64 {
    let smax = sigma.first().copied().unwrap_or(0.0);
    (tol.rank_rel * smax).max(tol.angle_tol * FRAC_1_SQRT_2)
}

fn same_ambient(u: &Subspace, v: &Subspace) -> Result<()> {
    if u.ambient() != v.ambient() {
        return Err(Error::InvalidShape(format!(
            "subspaces of C^{} and C^{}",
            u.ambient(),
            v.ambient()
        )));
    }
    Ok(())
}

pub fn intersect(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    same_ambient(u, v)?;
    if u.is_zero() || v.is_zero() {
        return Ok(Subspace::zero(u.ambient()));
    }
    let (p, q) = (u.dim(), v.dim());
    let mut stacked = ComplexMatrix::zeros(u.ambient(), p + q);
    stacked.columns_mut(0, p).copy_from(u.basis());
    stacked.columns_mut(p, q).copy_from(&(-v.basis()));
    let svd = full_svd(&stacked);
    let cutoff = stacked_cutoff(&svd.sigma, tol);
    let rank = svd.sigma.iter().filter(|&&s| s > cutoff).count();
    let null = svd.v.columns(rank, p + q - rank);
    let vecs = u.basis() * null.rows(0, p);
    Ok(Subspace::span_independent(&vecs))
}

pub fn subspace_sum(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    same_ambient(u, v)?;
    if u.is_zero() {
        return Ok(v.clone());
    }
    if v.is_zero() {
        return Ok(u.clone());
    }
    let (p, q) = (u.dim(), v.dim());
    let mut stacked = ComplexMatrix::zeros(u.ambient(), p + q);
    stacked.columns_mut(0, p).copy_from(u.basis());
    stacked.columns_mut(p, q).copy_from(v.basis());
    let svd = full_svd(&stacked);
    let cutoff = stacked_cutoff(&svd.sigma, tol);
    let rank = svd.sigma.iter().filter(|&&s| s > cutoff).count();
    Ok(Subspace {
        basis: svd.u.columns(0, rank).into_owned(),
    })
}

/// Principal angles between two subspaces, ascending.
pub fn principal_angles(u: &Subspace, v: &Subspace) -> Result<Vec<f64>> {
    same_ambient(u, v)?;
    let (a, b) = if u.dim() >= v.dim() { (u, v) } else { (v, u) };
    if b.dim() == 0 {
        return Ok(vec![]);
    }
    let cosines = singular_values(&(a.basis().adjoint() * b.basis()));
    let resid = b.basis() - a.basis() * (a.basis().adjoint() * b.basis());
    let mut sines = singular_values(&resid);
    sines.resize(b.dim(), 0.0);
    sines.reverse();
    Ok(cosines
        .iter()
        .zip(sines.iter())
        .map(|(&c, &s)| s.atan2(c))
        .collect())
}

/// Least-squares solution of `a x = b` with a rank-truncated pseudo-inverse.
/// Returns the solution and the Frobenius norm of the residual.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<(ComplexMatrix, f64)> {
    if a.nrows() != b.nrows() {
        return Err(Error::InvalidShape(format!(
            "solve with {} equations and a right side of {} rows",
            a.nrows(),
            b.nrows()
        )));
    }
    let x = pinv_apply(a, b, tol);
    let res = (a * &x - b).norm();
    Ok((x, res))
}

fn pinv_apply(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> ComplexMatrix {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return ComplexMatrix::zeros(n, b.ncols());
    }
    // thin factors of the tall orientation
    let (sigma, u, v, flipped) = if m >= n {
        let (s, u, v) = jacobi_tall(a);
        (s, u, v, false)
    } else {
        let (s, u, v) = jacobi_tall(&a.adjoint());
        (s, u, v, true)
    };
    let (left, right) = if flipped { (v, u) } else { (u, v) };
    let k = sigma.len();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let mut ub = left.columns(0, k).adjoint() * b;
    for (i, s) in sigma.iter().enumerate() {
        let inv = if *s > tol.rank_rel * smax { 1.0 / s } else { 0.0 };
        let mut row = ub.row_mut(i);
        row *= r(inv);
    }
    right.columns(0, k) * ub
}

/// Pseudo-inverse with the same rank rule as [`solve`].
pub fn pinv(a: &ComplexMatrix, tol: &Tolerances) -> ComplexMatrix {
    pinv_apply(a, &identity(a.nrows()), tol)
}

/// Square solve that refuses numerically singular systems.
pub fn solve_regular(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Option<ComplexMatrix> {
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let smin = s.last().copied().unwrap_or(0.0);
    if a.nrows() != a.ncols() || smax == 0.0 || smin <= tol.rank_rel * smax {
        return None;
    }
    a.clone().lu().solve(b)
}

/// Exponential of the least-squares slope of log|x_n| against n on an
/// inclusive index window (default: the last two thirds).
pub fn growth_rate(norms: &[f64], window: Option<(usize, usize)>) -> Result<f64> {
    let (lo, hi) = match window {
        Some(w) => w,
        None => {
            if norms.is_empty() {
                return Err(Error::EmptyWindow);
            }
            (norms.len() / 3, norms.len() - 1)
        }
    };
    if hi >= norms.len() || lo >= hi {
        return Err(Error::EmptyWindow);
    }
    let pts = &norms[lo..=hi];
    if pts.contains(&0.0) {
        return Ok(0.0);
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = (lo..=hi).map(|i| i as f64).collect();
    let ys: Vec<f64> = pts.iter().map(|x| x.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok((sxy / sxx).exp())
}

/// Complex Schur form `m = q t q^H` with the eigenvalues accepted by
/// `select` moved to the leading block. Returns (q, t, size of that block).
pub fn ordered_schur(
    m: &ComplexMatrix,
    select: impl Fn(C64) -> bool,
) -> Result<(ComplexMatrix, ComplexMatrix, usize)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidShape("schur of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok((identity(0), identity(0), 0));
    }
    let (mut q, mut t) = hessenberg_qr(m)?;
    for j in 0..n {
        for i in (j + 1)..n {
            t[(i, j)] = r(0.0);
        }
    }
    let mut lead = 0;
    for j in 0..n {
        if select(t[(j, j)]) {
            for k in (lead..j).rev() {
                swap_adjacent(&mut q, &mut t, k);
            }
            lead += 1;
        }
    }
    Ok((q, t, lead))
}

// Hessenberg QR with single Wilkinson shifts. Deflation also accepts
// subdiagonals small against the whole matrix, so defective clusters near
// zero converge.
fn hessenberg_qr(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = m.nrows();
    let (mut q, mut h) = nalgebra::Hessenberg::new(m.clone()).unpack();
    let eps = f64::EPSILON;
    let scale = fro(&h);
    let limit = 60 * n.max(10);
    let mut hi = n.saturating_sub(1);
    let mut iter = 0;
    let mut total = 0;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            if sub <= eps * (h[(l, l)].norm() + h[(l - 1, l - 1)].norm()) || sub <= eps * scale {
                h[(l, l - 1)] = r(0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > limit {
            return Err(Error::NoConvergence);
        }
        let mu = if iter % 11 == 0 {
            h[(hi, hi)] + r(0.75 * h[(hi, hi - 1)].norm())
        } else {
            let (a, b, cc, d) = (h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
            let half = (a - d) * 0.5;
            let disc = (half * half + b * cc).sqrt();
            let (e1, e2) = (d + half + disc, d + half - disc);
            if (e1 - d).norm() < (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };
        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - mu, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let nu = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if nu == 0.0 {
                continue;
            }
            let (cs, sn) = if x.norm() == 0.0 {
                (0.0, r(1.0))
            } else {
                (x.norm() / nu, (x / x.norm()) * y.conj() / nu)
            };
            for j in 0..n {
                let (u, v) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = u * cs + sn * v;
                h[(k + 1, j)] = -sn.conj() * u + v * cs;
            }
            for i in 0..n {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * cs + v * sn.conj();
                h[(i, k + 1)] = -sn * u + v * cs;
                let (u, v) = (q[(i, k)], q[(i, k + 1)]);
                q[(i, k)] = u * cs + v * sn.conj();
                q[(i, k + 1)] = -sn * u + v * cs;
            }
            if k > l {
                h[(k + 1, k - 1)] = r(0.0);
            }
        }
    }
    Ok((q, h))
}

/// Exchanges diagonal entries k and k+1 of an upper triangular `t` by a
/// unitary rotation, updating `q` so that q t q^H is unchanged.
fn swap_adjacent(q: &mut ComplexMatrix, t: &mut ComplexMatrix, k: usize) {
    let n = t.nrows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let t12 = t[(k, k + 1)];
    let v1 = t12;
    let v2 = t22 - t11;
    let nv = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    if nv == 0.0 {
        return;
    }
    let (v1, v2) = (v1 / nv, v2 / nv);
    // g = [[v1, -conj(v2)], [v2, conj(v1)]]
    let g = [[v1, -v2.conj()], [v2, v1.conj()]];
    for j in k..n {
        let a = t[(k, j)];
        let b = t[(k + 1, j)];
        t[(k, j)] = g[0][0].conj() * a + g[1][0].conj() * b;
        t[(k + 1, j)] = g[0][1].conj() * a + g[1][1].conj() * b;
    }
    for i in 0..=(k + 1) {
        let a = t[(i, k)];
        let b = t[(i, k + 1)];
        t[(i, k)] = a * g[0][0] + b * g[1][0];
        t[(i, k + 1)] = a * g[0][1] + b * g[1][1];
    }
    for i in 0..n {
        let a = q[(i, k)];
        let b = q[(i, k + 1)];
        q[(i, k)] = a * g[0][0] + b * g[1][0];
        q[(i, k + 1)] = a * g[0][1] + b * g[1][1];
    }
    t[(k + 1, k)] = r(0.0);
}

/// Power-of-two row and column exponents that bring the nonzero entries of
/// both matrices as close to unit modulus as a least-squares fit allows.
pub fn balancing_exponents(mats: &[&ComplexMatrix]) -> (Vec<i32>, Vec<i32>) {
    let (m, n) = mats[0].shape();
    let mut rows: Vec<(usize, usize, f64)> = Vec::new();
    for a in mats {
        for j in 0..n {
            for i in 0..m {
                let v = a[(i, j)].norm();
                if v > 0.0 {
                    rows.push((i, j, -v.log2()));
                }
            }
        }
    }
    if rows.is_empty() {
        return (vec![0; m], vec![0; n]);
    }
    let mut lhs = DMatrix::<f64>::zeros(rows.len(), m + n);
    let mut rhs = DVector::<f64>::zeros(rows.len());
    for (k, &(i, j, t)) in rows.iter().enumerate() {
        lhs[(k, i)] = 1.0;
        lhs[(k, m + j)] = 1.0;
        rhs[k] = t;
    }
    let lhs_c = lhs.map(r);
    let rhs_c = ComplexMatrix::from_fn(rhs.len(), 1, |i, _| r(rhs[i]));
    let loose = Tolerances {
        rank_rel: 1e-9,
        ..Tolerances::default()
    };
    let sol_c = pinv_apply(&lhs_c, &rhs_c, &loose);
    let sol = DVector::from_fn(m + n, |i, _| sol_c[(i, 0)].re);
    let clamp = |x: f64| x.round().clamp(-300.0, 300.0) as i32;
    let re = (0..m).map(|i| clamp(sol[i])).collect();
    let ce = (0..n).map(|j| clamp(sol[m + j])).collect();
    (re, ce)
}

pub fn scale_rows_cols(a: &ComplexMatrix, row: &[f64], col: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (row[i] * col[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn schur_reorder_preserves_similarity() {
        let m = ComplexMatrix::from_fn(5, 5, |i, j| c((i * 3 + j) as f64 * 0.17, (i as f64 - j as f64) * 0.3));
        let (q, t, k) = ordered_schur(&m, |z| z.norm() < 1.0).unwrap();
        assert!((&q * &t * q.adjoint() - &m).norm() < 1e-12 * m.norm());
        assert!((q.adjoint() * &q - identity(5)).norm() < 1e-13);
        for j in 0..5 {
            assert_eq!(j < k, t[(j, j)].norm() < 1.0);
        }
    }

    #[test]
    fn schur_of_defective_inverse_converges() {
        let n = 16;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(0.3, 1.1)
            } else if i == j + 1 {
                r(1.0 / (1..=i).map(|k| k as f64).product::<f64>())
            } else {
                r(0.0)
            }
        });
        let m = a.clone().try_inverse().unwrap();
        let (q, t, _) = ordered_schur(&m, |_| true).unwrap();
        assert!((&q * &t * q.adjoint() - &m).norm() < 1e-12 * m.norm());
    }

    #[test]
    fn jacobi_svd_reconstructs_clustered_spectrum() {
        let a = ComplexMatrix::from_fn(8, 3, |i, j| {
            if i == 2 * j + 1 {
                r(1.0)
            } else if i == 1 {
                c(1e-3 * (j + 1) as f64, 1e-5)
            } else {
                r(0.0)
            }
        });
        let (s, u, v) = jacobi_tall(&a);
        let sig = ComplexMatrix::from_fn(3, 3, |i, j| r(if i == j { s[i] } else { 0.0 }));
        assert!((&u * sig * v.adjoint() - &a).norm() < 1e-15);
        assert!((u.adjoint() * &u - identity(3)).norm() < 1e-15);
        let pa = pinv(&a, &Tolerances::default());
        assert!((pa * &a - identity(3)).norm() < 1e-14);
    }

    #[test]
    fn growth_rate_rejects_bad_windows() {
        assert_eq!(growth_rate(&[1.0, 2.0], Some((1, 1))), Err(Error::EmptyWindow));
        assert_eq!(growth_rate(&[1.0, 2.0], Some((0, 5))), Err(Error::EmptyWindow));
        assert_eq!(growth_rate(&[], None), Err(Error::EmptyWindow));
    }

    #[test]
    fn balancing_equalizes_a_weighted_shift() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| if j == i + 1 { r(1e-6f64.powi(i as i32 + 1)) } else { r(0.0) });
        let id = identity(4);
        let (re, ce) = balancing_exponents(&[&a, &id]);
        let d1: Vec<f64> = re.iter().map(|&e| 2f64.powi(e)).collect();
        let d2: Vec<f64> = ce.iter().map(|&e| 2f64.powi(e)).collect();
        let b = scale_rows_cols(&a, &d1, &d2);
        for i in 0..3 {
            let v = b[(i, i + 1)].norm();
            assert!(v > 0.25 && v < 4.0, "{v}");
        }
    }

    #[test]
    fn window_rank_counts_leading_coordinates() {
        let s = Subspace::coordinates(5, &[0, 4]);
        assert_eq!(s.window_rank(3, &tol()), 1);
        assert_eq!(s.window_rank(5, &tol()), 2);
    }
}
