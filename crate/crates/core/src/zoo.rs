//! Parametric pencil families with known resolvent structure.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{identity, ordered_schur, sigma_min, ComplexMatrix, C64};
use crate::pencil::{eval_pencil, Annulus, OperatorPencil, Provenance};

/// Weight sequences n -> w_n, n >= 1.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceRule {
    /// 1/n!
    InverseFactorial,
    /// c^(n^2), |c| < 1
    Gaussian { c: C64 },
    /// c q^n; |w_n|^(1/n) does not tend to zero
    Geometric { c: C64, q: C64 },
    /// explicit values w_1, w_2, ...; accepted only when `unchecked`
    Explicit { values: Vec<C64>, unchecked: bool },
}

impl SequenceRule {
    pub fn value(&self, n: usize) -> Result<C64> {
        match self {
            SequenceRule::InverseFactorial => Ok(C64::new(1.0 / (1..=n).map(|k| k as f64).product::<f64>(), 0.0)),
            SequenceRule::Gaussian { c } => Ok(c.powi((n * n) as i32)),
            SequenceRule::Geometric { c, q } => Ok(c * q.powi(n as i32)),
            SequenceRule::Explicit { values, .. } => values
                .get(n - 1)
                .copied()
                .ok_or_else(|| Error::InvalidParams(format!("sequence has no term {n}"))),
        }
    }

    /// Rejects rules outside the whitelist; returns warnings for rules that
    /// are accepted but violate |w_n|^(1/n) -> 0.
    pub fn admissibility(&self) -> Result<Vec<String>> {
        match self {
            SequenceRule::InverseFactorial => Ok(vec![]),
            SequenceRule::Gaussian { c } => {
                if c.norm() < 1.0 && c.norm() > 0.0 {
                    Ok(vec![])
                } else {
                    Err(Error::InvalidParams("c^(n^2) needs 0 < |c| < 1".into()))
                }
            }
            SequenceRule::Geometric { c, q } => {
                if c.norm() == 0.0 || q.norm() == 0.0 {
                    return Err(Error::InvalidParams("c q^n needs nonzero c and q".into()));
                }
                Ok(vec![format!(
                    "c q^n has |w_n|^(1/n) -> {} != 0; the family is not quasinilpotent",
                    q.norm()
                )])
            }
            SequenceRule::Explicit { values, unchecked } => {
                if !unchecked {
                    return Err(Error::InvalidParams("explicit sequences need the unchecked flag".into()));
                }
                if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                    return Err(Error::NonFinite("sequence".into()));
                }
                Ok(vec!["explicit sequence accepted without checks".into()])
            }
        }
    }

    fn values(&self, count: usize) -> Result<Vec<C64>> {
        (1..=count).map(|n| self.value(n)).collect()
    }
}

/// Which side of the nonzero eigenvalue an Example 3 expansion lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    NearZero,
    NearInfinity,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::NearZero => "near-zero",
            Region::NearInfinity => "near-infinity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// A0 = weighted forward shift (superdiagonal beta_n), A1 = I
    Example1 { beta: SequenceRule },
    /// A0 = weighted backward shift (subdiagonal gamma_n), A1 = I
    Example2 { gamma: SequenceRule },
    /// bidiagonal pair with a pole at 0 and an eigenvalue at -beta
    Example3 { alpha: SequenceRule, beta: C64 },
    /// A0 = nilpotent Jordan block of order m, A1 = I
    JordanBlock { m: usize },
    /// A0 = diag(I, 0), A1 = diag(0, I_k)
    DiagSplit { n: usize, k: usize },
    /// A1 = I, A0 Gaussian, no eigenvalue near the unit circle
    RandomRegular { n: usize, seed: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Example1 { .. } => "example1",
            Family::Example2 { .. } => "example2",
            Family::Example3 { .. } => "example3",
            Family::JordanBlock { .. } => "jordan_block",
            Family::DiagSplit { .. } => "diag_split",
            Family::RandomRegular { .. } => "random_regular",
        }
    }

    fn default_truncation(&self) -> Option<usize> {
        match self {
            Family::Example1 { .. } | Family::Example2 { .. } => Some(16),
            Family::Example3 { .. } => Some(12),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    /// leading principal truncation order (infinite families only)
    pub truncation: Option<usize>,
    pub region: Region,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        let truncation = family.default_truncation();
        FamilySpec {
            family,
            truncation,
            region: Region::NearZero,
        }
    }

    pub fn truncated(mut self, n: usize) -> Self {
        self.truncation = Some(n);
        self
    }

    pub fn in_region(mut self, region: Region) -> Self {
        self.region = region;
        self
    }
}

/// Radius of the random-family contour and the eigenvalue-free margin kept
/// around it.
pub const RANDOM_CONTOUR_RADIUS: f64 = 1.0;
pub const RANDOM_MARGIN: f64 = 0.05;
const RESAMPLE_LIMIT: usize = 1000;

#[derive(Debug, Clone)]
pub struct Built {
    pub pencil: OperatorPencil,
    pub warnings: Vec<String>,
}

fn need_truncation(spec: &FamilySpec) -> Result<usize> {
    spec.truncation
        .ok_or_else(|| Error::InvalidParams(format!("{} needs a truncation order", spec.family.name())))
}

pub fn build(spec: &FamilySpec) -> Result<Built> {
    let mut warnings = Vec::new();
    let whole = Annulus::whole_plane();
    let (a0, a1, hint, params) = match &spec.family {
        Family::Example1 { beta } | Family::Example2 { gamma: beta } => {
            warnings.extend(beta.admissibility()?);
            let n = need_truncation(spec)?;
            if n < 2 {
                return Err(Error::InvalidParams("truncation must be at least 2".into()));
            }
            let w = beta.values(n - 1)?;
            let forward = matches!(spec.family, Family::Example1 { .. });
            let a0 = ComplexMatrix::from_fn(n, n, |i, j| {
                if forward && j == i + 1 {
                    w[i]
                } else if !forward && i == j + 1 {
                    w[j]
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            (a0, identity(n), whole, format!("{beta:?}"))
        }
        Family::Example3 { alpha, beta } => {
            warnings.extend(alpha.admissibility()?);
            let n = need_truncation(spec)?;
            if beta.norm() == 0.0 {
                return Err(Error::InvalidParams("example3 needs beta != 0".into()));
            }
            if n < 6 || n % 2 != 0 {
                return Err(Error::InvalidParams("example3 needs an even truncation N >= 6".into()));
            }
            let a = alpha.values(n)?;
            if a.iter().any(|x| x.norm() == 0.0) {
                return Err(Error::InvalidParams("example3 needs nonzero alpha".into()));
            }
            // 1-based: odd rows (1, alpha), row 2 (beta, alpha), even rows (0, alpha)
            let a0 = ComplexMatrix::from_fn(n, n, |i, j| {
                let row = i + 1;
                if j == i {
                    if row % 2 == 1 {
                        C64::new(1.0, 0.0)
                    } else if row == 2 {
                        *beta
                    } else {
                        C64::new(0.0, 0.0)
                    }
                } else if j == i + 1 {
                    a[i]
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let a1 = ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j && (i + 1) % 2 == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let hint = match spec.region {
                Region::NearZero => Annulus::new(0.0, beta.norm())?,
                Region::NearInfinity => Annulus::new(beta.norm(), f64::INFINITY)?,
            };
            (a0, a1, hint, format!("alpha={alpha:?}, beta={beta}, region={}", spec.region.name()))
        }
        Family::JordanBlock { m } => {
            if *m == 0 {
                return Err(Error::InvalidParams("jordan_block needs m >= 1".into()));
            }
            let a0 = ComplexMatrix::from_fn(*m, *m, |i, j| C64::new(if j == i + 1 { 1.0 } else { 0.0 }, 0.0));
            (a0, identity(*m), whole, format!("m={m}"))
        }
        Family::DiagSplit { n, k } => {
            if *n == 0 || k > n {
                return Err(Error::InvalidParams("diag_split needs 0 <= k <= n, n >= 1".into()));
            }
            let split = n - k;
            let a0 = ComplexMatrix::from_fn(*n, *n, |i, j| C64::new(if i == j && i < split { 1.0 } else { 0.0 }, 0.0));
            let a1 = ComplexMatrix::from_fn(*n, *n, |i, j| C64::new(if i == j && i >= split { 1.0 } else { 0.0 }, 0.0));
            (a0, a1, whole, format!("n={n}, k={k}"))
        }
        Family::RandomRegular { n, seed } => {
            let a0 = random_regular(*n, *seed)?;
            let hint = Annulus::new(RANDOM_CONTOUR_RADIUS - RANDOM_MARGIN, RANDOM_CONTOUR_RADIUS + RANDOM_MARGIN)?;
            (a0, identity(*n), hint, format!("n={n}, seed={seed}"))
        }
    };
    let truncation = match spec.family {
        Family::Example1 { .. } | Family::Example2 { .. } | Family::Example3 { .. } => spec.truncation,
        _ => None,
    };
    let provenance = Provenance {
        source: spec.family.name().into(),
        params,
        truncation,
        annulus_hint: Some(hint),
    };
    Ok(Built {
        pencil: OperatorPencil::with_provenance(a0, a1, provenance)?,
        warnings,
    })
}

/// A0 for the random family (A1 = I): Gaussian entries, redrawn until every
/// eigenvalue of -A0 keeps RANDOM_MARGIN away from the unit circle and
/// sigma_min(A0 + zI) >= RANDOM_MARGIN along it.
pub fn random_regular(n: usize, seed: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidParams("random_regular needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.2 / (2.0 * n as f64).sqrt();
    for _ in 0..RESAMPLE_LIMIT {
        let a0 = ComplexMatrix::from_fn(n, n, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re * scale, im * scale)
        });
        if admissible(&a0) {
            return Ok(a0);
        }
    }
    Err(Error::ResampleLimitExceeded {
        attempts: RESAMPLE_LIMIT,
    })
}

fn admissible(a0: &ComplexMatrix) -> bool {
    let n = a0.nrows();
    let Ok((_, t, _)) = ordered_schur(a0, |_| false) else {
        return false;
    };
    if (0..n).any(|i| (t[(i, i)].norm() - RANDOM_CONTOUR_RADIUS).abs() < RANDOM_MARGIN) {
        return false;
    }
    let p = OperatorPencil::new(a0.clone(), identity(n)).expect("square");
    (0..256).all(|k| {
        let z = C64::from_polar(RANDOM_CONTOUR_RADIUS, std::f64::consts::TAU * k as f64 / 256.0);
        sigma_min(&eval_pencil(&p, z)) >= RANDOM_MARGIN
    })
}

/// Closed-form spectral data of a family.
#[derive(Debug, Clone)]
pub struct Reference {
    pub annulus: Annulus,
    pub p: ComplexMatrix,
    pub pc: ComplexMatrix,
    pub q: ComplexMatrix,
    pub qc: ComplexMatrix,
    pub r_minus1: ComplexMatrix,
    pub r0: ComplexMatrix,
}

impl Reference {
    pub fn named(&self) -> [(&'static str, &ComplexMatrix); 6] {
        [
            ("P", &self.p),
            ("Pc", &self.pc),
            ("Q", &self.q),
            ("Qc", &self.qc),
            ("R_-1", &self.r_minus1),
            ("R_0", &self.r0),
        ]
    }
}

fn complete(annulus: Annulus, p: ComplexMatrix, q: ComplexMatrix, r_minus1: ComplexMatrix, r0: ComplexMatrix) -> Reference {
    let n = p.nrows();
    Reference {
        annulus,
        pc: identity(n) - &p,
        qc: identity(n) - &q,
        p,
        q,
        r_minus1,
        r0,
    }
}

pub fn analytic_reference(spec: &FamilySpec) -> Result<Reference> {
    let built = build(spec)?;
    let n = built.pencil.domain_dim();
    let hint = built.pencil.provenance.annulus_hint.unwrap_or_else(Annulus::whole_plane);
    let zero = ComplexMatrix::zeros(n, n);
    match &spec.family {
        Family::Example1 { .. } | Family::Example2 { .. } | Family::JordanBlock { .. } => {
            Ok(complete(hint, identity(n), identity(n), identity(n), zero))
        }
        Family::DiagSplit { k, .. } => {
            let split = n - k;
            let lower = ComplexMatrix::from_fn(n, n, |i, j| C64::new(if i == j && i >= split { 1.0 } else { 0.0 }, 0.0));
            let upper = identity(n) - &lower;
            Ok(complete(hint, lower.clone(), lower.clone(), lower, upper))
        }
        Family::Example3 { alpha, beta } => {
            let a = alpha.values(n)?;
            Ok(match spec.region {
                Region::NearZero => example3_near_zero(&a, *beta, n, hint),
                Region::NearInfinity => example3_near_infinity(&a, n, hint),
            })
        }
        Family::RandomRegular { .. } => Err(Error::NoReference("random_regular".into())),
    }
}

/// Product alpha_i ... alpha_j over 1-based indices, 1 when empty.
fn prod(a: &[C64], i: usize, j: usize) -> C64 {
    (i..=j).fold(C64::new(1.0, 0.0), |acc, t| acc * a[t - 1])
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn example3_near_zero(a: &[C64], beta: C64, n: usize, hint: Annulus) -> Reference {
    let mut p = ComplexMatrix::zeros(n, n);
    let mut q = ComplexMatrix::zeros(n, n);
    let mut rm1 = ComplexMatrix::zeros(n, n);
    let mut r0 = ComplexMatrix::zeros(n, n);
    let set = |m: &mut ComplexMatrix, i: usize, j: usize, v: C64| {
        if i <= n && j <= n {
            m[(i - 1, j - 1)] = v;
        }
    };
    for m in 1..=(n / 2 - 1) {
        let bm = beta.powi(m as i32);
        let col = 2 * m + 2;
        let pm = [
            (1, prod(a, 1, 2 * m + 1) / bm * sign(m)),
            (2, prod(a, 2, 2 * m + 1) / bm * sign(m - 1)),
            (2 * m + 1, -a[2 * m]),
            (2 * m + 2, C64::new(1.0, 0.0)),
        ];
        let qm = [(2, prod(a, 2, 2 * m + 1) / bm * sign(m - 1)), (2 * m + 2, C64::new(1.0, 0.0))];
        for &(i, v) in &pm {
            set(&mut p, i, col, v);
            set(&mut rm1, i, col, v);
            if col < n {
                set(&mut rm1, i, col + 1, -a[col - 1] * v);
            }
        }
        for &(i, v) in &qm {
            set(&mut q, i, col, v);
            if col < n {
                set(&mut q, i, col + 1, -a[col - 1] * v);
            }
        }
    }
    set(&mut r0, 1, 1, C64::new(1.0, 0.0));
    for k in 1..=(n / 2) {
        let bk = beta.powi(k as i32);
        set(&mut r0, 1, 2 * k, prod(a, 1, 2 * k - 1) / bk * sign(k));
        set(&mut r0, 1, 2 * k + 1, prod(a, 1, 2 * k) / bk * sign(k + 1));
        set(&mut r0, 2, 2 * k, prod(a, 2, 2 * k - 1) / bk * sign(k + 1));
        set(&mut r0, 2, 2 * k + 1, prod(a, 2, 2 * k) / bk * sign(k));
        set(&mut r0, 2 * k + 1, 2 * k + 1, C64::new(1.0, 0.0));
    }
    complete(hint, p, q, rm1, r0)
}

fn example3_near_infinity(a: &[C64], n: usize, hint: Annulus) -> Reference {
    let mut p = ComplexMatrix::zeros(n, n);
    let mut q = ComplexMatrix::zeros(n, n);
    let mut rm1 = ComplexMatrix::zeros(n, n);
    let mut r0 = ComplexMatrix::zeros(n, n);
    let one = C64::new(1.0, 0.0);
    for k in 1..=(n / 2) {
        let (odd, even) = (2 * k - 2, 2 * k - 1); // 0-based rows 2k-1, 2k
        p[(odd, even)] = -a[2 * k - 2];
        p[(even, even)] = one;
        q[(even, even)] = one;
        rm1[(odd, even)] = -a[2 * k - 2];
        rm1[(even, even)] = one;
        if even + 1 < n {
            q[(even, even + 1)] = -a[2 * k - 1];
            rm1[(odd, even + 1)] = a[2 * k - 2] * a[2 * k - 1];
            rm1[(even, even + 1)] = -a[2 * k - 1];
        }
        r0[(odd, odd)] = one;
    }
    complete(hint, p, q, rm1, r0)
}
