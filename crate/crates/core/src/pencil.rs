//! Linear operator pencils A(z) = A0 + A1 z and the identities their
//! Laurent coefficients have to satisfy.

use crate::error::{Error, Result};
use crate::linalg::{check_finite, identity, solve_regular, ComplexMatrix, Tolerances, C64};
use crate::resolvent::LaurentExpansion;

/// Where a pencil came from; carried through reports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub source: String,
    pub params: String,
    /// order of the leading principal truncation, for finite sections of
    /// infinite families
    pub truncation: Option<usize>,
    pub annulus_hint: Option<Annulus>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPencil {
    pub a0: ComplexMatrix,
    pub a1: ComplexMatrix,
    pub provenance: Provenance,
}

impl OperatorPencil {
    pub fn new(a0: ComplexMatrix, a1: ComplexMatrix) -> Result<Self> {
        Self::with_provenance(
            a0,
            a1,
            Provenance {
                source: "explicit".into(),
                ..Provenance::default()
            },
        )
    }

    pub fn with_provenance(a0: ComplexMatrix, a1: ComplexMatrix, provenance: Provenance) -> Result<Self> {
        if a0.shape() != a1.shape() {
            return Err(Error::InvalidShape(format!(
                "A0 is {}x{} but A1 is {}x{}",
                a0.nrows(),
                a0.ncols(),
                a1.nrows(),
                a1.ncols()
            )));
        }
        if a0.nrows() == 0 || a0.ncols() == 0 {
            return Err(Error::InvalidShape("empty pencil".into()));
        }
        check_finite(&a0, "A0")?;
        check_finite(&a1, "A1")?;
        Ok(OperatorPencil { a0, a1, provenance })
    }

    /// dim X (columns).
    pub fn domain_dim(&self) -> usize {
        self.a0.ncols()
    }

    /// dim Y (rows).
    pub fn codomain_dim(&self) -> usize {
        self.a0.nrows()
    }

    pub fn is_square(&self) -> bool {
        self.a0.nrows() == self.a0.ncols()
    }

    /// Size of the block on which truncation artifacts are absent.
    pub fn interior(&self, margin: usize) -> usize {
        let n = self.domain_dim().min(self.codomain_dim());
        match self.provenance.truncation {
            Some(_) => n.saturating_sub(margin).max(1),
            None => n,
        }
    }

    pub fn scale(&self) -> f64 {
        self.a0.norm().max(self.a1.norm())
    }
}

/// Open annulus s < |z| < r with 0 <= s < r <= infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    s: f64,
    r: f64,
}

impl Annulus {
    pub fn new(s: f64, r: f64) -> Result<Self> {
        if !(s.is_finite() && s >= 0.0 && r > s) || r.is_nan() {
            return Err(Error::InvalidParams(format!("annulus needs 0 <= s < r, got ({s}, {r})")));
        }
        Ok(Annulus { s, r })
    }

    pub fn whole_plane() -> Self {
        Annulus { s: 0.0, r: f64::INFINITY }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn contains(&self, z: C64) -> bool {
        let m = z.norm();
        m > self.s && m < self.r
    }

    /// The annulus of the flipped pencil, (1/r, 1/s).
    pub fn flip(&self) -> Annulus {
        let s = if self.r.is_infinite() { 0.0 } else { 1.0 / self.r };
        let r = if self.s == 0.0 { f64::INFINITY } else { 1.0 / self.s };
        Annulus { s, r }
    }

    /// Default contour radius: sqrt(s r), r/2 when s = 0, 2s when r is
    /// infinite, and 1 on the punctured plane.
    pub fn center_radius(&self) -> f64 {
        match (self.s == 0.0, self.r.is_infinite()) {
            (false, false) => (self.s * self.r).sqrt(),
            (true, false) => self.r / 2.0,
            (false, true) => 2.0 * self.s,
            (true, true) => 1.0,
        }
    }

    /// Default rate threshold separating inner chains from the rest:
    /// s + (r - s)/10, or 2s + 1 when r is infinite.
    pub fn rate_threshold(&self) -> f64 {
        if self.r.is_finite() {
            self.s + 0.1 * (self.r - self.s)
        } else {
            2.0 * self.s + 1.0
        }
    }
}

/// The coefficient pair {R_-1, R_0} that generates the whole expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicSolution {
    pub r_minus1: ComplexMatrix,
    pub r0: ComplexMatrix,
    pub annulus: Annulus,
}

pub fn eval_pencil(p: &OperatorPencil, z: C64) -> ComplexMatrix {
    &p.a0 + &p.a1 * z
}

/// B(w) = A1 + w A0.
pub fn flip_pencil(p: &OperatorPencil) -> OperatorPencil {
    let mut provenance = p.provenance.clone();
    provenance.annulus_hint = p.provenance.annulus_hint.map(|a| a.flip());
    OperatorPencil {
        a0: p.a1.clone(),
        a1: p.a0.clone(),
        provenance,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalResidual {
    pub j: i64,
    /// ||R_{j-1} A1 + R_j A0 - delta_j0 I||_F
    pub left: f64,
    /// ||A1 R_{j-1} + A0 R_j - delta_j0 I||_F
    pub right: f64,
}

/// Residuals of the left and right fundamental equations for every j whose
/// predecessor is stored. A coefficient above the stored range counts as
/// zero; a missing R_{j-1} is an error.
pub fn fundamental_residuals_at(
    p: &OperatorPencil,
    exp: &LaurentExpansion,
    js: impl IntoIterator<Item = i64>,
) -> Result<Vec<FundamentalResidual>> {
    let nx = p.domain_dim();
    let ny = p.codomain_dim();
    let zero = ComplexMatrix::zeros(nx, ny);
    let mut out = Vec::new();
    for j in js {
        let prev = exp.coeff(j - 1).ok_or(Error::MissingCoefficient(j - 1))?;
        let cur = exp.coeff(j).unwrap_or(&zero);
        let mut left = prev * &p.a1 + cur * &p.a0;
        let mut right = &p.a1 * prev + &p.a0 * cur;
        if j == 0 {
            left -= identity(nx);
            right -= identity(ny);
        }
        out.push(FundamentalResidual {
            j,
            left: left.norm(),
            right: right.norm(),
        });
    }
    Ok(out)
}

/// Residuals for every j in (first stored index, last stored index].
pub fn fundamental_residuals(p: &OperatorPencil, exp: &LaurentExpansion) -> Result<Vec<FundamentalResidual>> {
    let (lo, hi) = exp.index_range().ok_or(Error::EmptyExpansion)?;
    fundamental_residuals_at(p, exp, (lo + 1)..=hi)
}

/// R(z) = (Iz + R_-1 A0)^-1 R_-1 + (I + R_0 A1 z)^-1 R_0.
pub fn closed_form_resolvent(b: &BasicSolution, p: &OperatorPencil, z: C64, tol: &Tolerances) -> Result<ComplexMatrix> {
    let n = p.domain_dim();
    let singular = || Error::SingularShift { re: z.re, im: z.im };
    let lhs1 = identity(n) * z + &b.r_minus1 * &p.a0;
    let lhs2 = identity(n) + &b.r0 * &p.a1 * z;
    let x1 = solve_regular(&lhs1, &b.r_minus1, tol).ok_or_else(singular)?;
    let x2 = solve_regular(&lhs2, &b.r0, tol).ok_or_else(singular)?;
    Ok(x1 + x2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_validation_and_flip() {
        assert!(Annulus::new(2.0, 1.0).is_err());
        assert!(Annulus::new(-1.0, 1.0).is_err());
        let a = Annulus::new(0.0, 2.0).unwrap();
        let f = a.flip();
        assert_eq!((f.s(), f.r()), (0.5, f64::INFINITY));
        assert_eq!(f.flip(), a);
        assert_eq!(Annulus::new(2.0, f64::INFINITY).unwrap().center_radius(), 4.0);
        assert_eq!(Annulus::new(1.0, 4.0).unwrap().center_radius(), 2.0);
        assert_eq!(Annulus::whole_plane().center_radius(), 1.0);
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let e = OperatorPencil::new(identity(2), identity(3));
        assert!(matches!(e, Err(Error::InvalidShape(_))));
    }
}
