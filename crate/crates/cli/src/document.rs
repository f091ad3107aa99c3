//! The pencil document: a JSON object with keys `pencil`, `tolerances`,
//! `annulus_hint` and `samples`. Complex scalars are `[re, im]` everywhere;
//! a bare number where a complex scalar is expected is rejected.

use std::collections::BTreeMap;

use pencil_resolvent::linalg::{matrix_from_rows, ComplexMatrix, Tolerances, C64};
use pencil_resolvent::pencil::{Annulus, OperatorPencil, Provenance};
use pencil_resolvent::zoo::{build, Family, FamilySpec, Region, SequenceRule};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub type Cx = [f64; 2];

pub const SEED_ENV: &str = "PENCIL_RESOLVENT_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilDocument {
    pub pencil: PencilSource,
    #[serde(default, skip_serializing_if = "ToleranceOverrides::is_empty")]
    pub tolerances: ToleranceOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus_hint: Option<AnnulusHint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PencilSource {
    Inline(InlinePencil),
    Family(FamilyRef),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlinePencil {
    pub a0: Vec<Vec<Cx>>,
    pub a1: Vec<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRef {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// `near-zero` or `near-infinity`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_rel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_tol: Option<f64>,
}

impl ToleranceOverrides {
    fn is_empty(&self) -> bool {
        *self == ToleranceOverrides::default()
    }

    pub fn apply(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        for (name, value, slot) in [
            ("rank_rel", self.rank_rel, &mut t.rank_rel),
            ("residual_abs", self.residual_abs, &mut t.residual_abs),
            ("angle_tol", self.angle_tol, &mut t.angle_tol),
        ] {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(CliError::Parse(format!("tolerance {name} must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

/// `r: null` is the punctured plane's outer radius, infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnulusHint {
    pub s: f64,
    pub r: Option<f64>,
}

impl AnnulusHint {
    pub fn to_annulus(self) -> Result<Annulus, CliError> {
        Ok(Annulus::new(self.s, self.r.unwrap_or(f64::INFINITY))?)
    }

    pub fn from_annulus(a: &Annulus) -> Self {
        AnnulusHint {
            s: a.s(),
            r: a.r().is_finite().then_some(a.r()),
        }
    }
}

pub fn parse_document(text: &str) -> Result<PencilDocument, CliError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let obj = raw
        .as_object()
        .ok_or_else(|| CliError::Parse("document must be a JSON object".into()))?;
    let pencil = obj
        .get("pencil")
        .ok_or_else(|| CliError::Parse("missing key `pencil`".into()))?;
    // Decode the pencil by shape first so errors name the offending field
    // instead of "no variant matched".
    let source = match pencil {
        Value::Object(m) if m.contains_key("a0") || m.contains_key("a1") => PencilSource::Inline(
            serde_json::from_value(pencil.clone()).map_err(|e| CliError::Parse(format!("pencil: {e}")))?,
        ),
        Value::Object(m) if m.contains_key("family") => PencilSource::Family(
            serde_json::from_value(pencil.clone()).map_err(|e| CliError::Parse(format!("pencil: {e}")))?,
        ),
        _ => return Err(CliError::Parse("pencil must be {a0, a1} or {family, params, truncation}".into())),
    };
    let mut rest = obj.clone();
    rest.insert("pencil".into(), serde_json::to_value(&source).expect("serializable"));
    serde_json::from_value(Value::Object(rest)).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn to_json(doc: &PencilDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document is serializable")
}

fn rows_of(m: &ComplexMatrix) -> Vec<Vec<Cx>> {
    m.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn matrix_of(rows: &[Vec<Cx>], name: &str) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect()).collect();
    matrix_from_rows(&rows).map_err(|e| CliError::Parse(format!("{name}: {e}")))
}

/// Inline document holding the pencil's matrices exactly.
pub fn document_from_pencil(p: &OperatorPencil) -> PencilDocument {
    PencilDocument {
        pencil: PencilSource::Inline(InlinePencil {
            a0: rows_of(&p.a0),
            a1: rows_of(&p.a1),
        }),
        tolerances: ToleranceOverrides::default(),
        annulus_hint: p.provenance.annulus_hint.as_ref().map(AnnulusHint::from_annulus),
        samples: None,
    }
}

pub fn parse_region(s: &str) -> Result<Region, CliError> {
    match s {
        "near-zero" => Ok(Region::NearZero),
        "near-infinity" => Ok(Region::NearInfinity),
        other => Err(CliError::Parse(format!("region must be near-zero or near-infinity, got `{other}`"))),
    }
}

fn complex_param(name: &str, v: &Value) -> Result<C64, CliError> {
    match v {
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            Ok(C64::new(a[0].as_f64().unwrap_or(f64::NAN), a[1].as_f64().unwrap_or(f64::NAN)))
        }
        // command-line values: `re` or `re:im`
        Value::String(s) => {
            let mut parts = s.split(':');
            let re = parts.next().unwrap_or("");
            let im = parts.next().unwrap_or("0");
            match (re.trim().parse(), im.trim().parse(), parts.next()) {
                (Ok(re), Ok(im), None) => Ok(C64::new(re, im)),
                _ => Err(CliError::Parse(format!("{name}: expected RE or RE:IM, got `{s}`"))),
            }
        }
        Value::Number(_) => Err(CliError::Parse(format!("{name}: complex scalars are written [re, im]"))),
        _ => Err(CliError::Parse(format!("{name}: expected [re, im]"))),
    }
}

fn count_param(name: &str, v: &Value) -> Result<u64, CliError> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| CliError::Parse(format!("{name}: expected a non-negative integer")))
}

/// `inverse_factorial`, `gaussian:C`, `geometric:C:Q` on the command line;
/// in documents also `{"gaussian": [re, im]}`, `{"geometric": {"c": .., "q": ..}}`
/// and `{"explicit": [[re, im], ..], "unchecked": true}`.
fn rule_param(name: &str, v: &Value) -> Result<SequenceRule, CliError> {
    let bad = || CliError::Parse(format!("{name}: unknown sequence rule `{v}`"));
    match v {
        Value::String(s) => {
            let parts: Vec<&str> = s.split(':').collect();
            let real = |t: &str| complex_param(name, &Value::String(t.into()));
            match parts.as_slice() {
                ["inverse_factorial"] => Ok(SequenceRule::InverseFactorial),
                ["gaussian", c] => Ok(SequenceRule::Gaussian { c: real(c)? }),
                ["geometric", c, q] => Ok(SequenceRule::Geometric { c: real(c)?, q: real(q)? }),
                _ => Err(bad()),
            }
        }
        Value::Object(m) => {
            if let Some(c) = m.get("gaussian") {
                return Ok(SequenceRule::Gaussian { c: complex_param(name, c)? });
            }
            if let Some(Value::Object(g)) = m.get("geometric") {
                let get = |k: &str| g.get(k).ok_or_else(bad).and_then(|x| complex_param(name, x));
                return Ok(SequenceRule::Geometric { c: get("c")?, q: get("q")? });
            }
            if let Some(Value::Array(vals)) = m.get("explicit") {
                let values = vals.iter().map(|x| complex_param(name, x)).collect::<Result<_, _>>()?;
                let unchecked = m.get("unchecked").and_then(Value::as_bool).unwrap_or(false);
                return Ok(SequenceRule::Explicit { values, unchecked });
            }
            Err(bad())
        }
        _ => Err(bad()),
    }
}

struct Params<'a> {
    map: &'a BTreeMap<String, Value>,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn get(&mut self, key: &'static str) -> Option<&'a Value> {
        self.used.push(key);
        self.map.get(key)
    }

    fn count(&mut self, key: &'static str, default: Option<u64>) -> Result<u64, CliError> {
        match self.get(key) {
            Some(v) => count_param(key, v),
            None => default.ok_or_else(|| CliError::Parse(format!("missing parameter `{key}`"))),
        }
    }

    fn rule(&mut self, key: &'static str) -> Result<SequenceRule, CliError> {
        self.get(key).map_or(Ok(SequenceRule::InverseFactorial), |v| rule_param(key, v))
    }

    fn finish(&self) -> Result<(), CliError> {
        match self.map.keys().find(|k| !self.used.contains(&k.as_str())) {
            Some(k) => Err(CliError::Parse(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Parse(format!("{SEED_ENV} must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(None),
    }
}

pub fn family_spec(f: &FamilyRef) -> Result<FamilySpec, CliError> {
    let mut ps = Params { map: &f.params, used: vec![] };
    let family = match f.family.as_str() {
        "example1" => Family::Example1 { beta: ps.rule("beta")? },
        "example2" => Family::Example2 { gamma: ps.rule("gamma")? },
        "example3" => Family::Example3 {
            alpha: ps.rule("alpha")?,
            beta: match ps.get("beta") {
                Some(v) => complex_param("beta", v)?,
                None => C64::new(2.0, 0.0),
            },
        },
        "jordan_block" => Family::JordanBlock {
            m: ps.count("m", None)? as usize,
        },
        "diag_split" => Family::DiagSplit {
            n: ps.count("n", None)? as usize,
            k: ps.count("k", None)? as usize,
        },
        "random_regular" => {
            let n = ps.count("n", Some(4))? as usize;
            let seed = ps.count("seed", Some(7))?;
            Family::RandomRegular {
                n,
                seed: env_seed()?.unwrap_or(seed),
            }
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown family `{other}` (example1, example2, example3, jordan_block, diag_split, random_regular)"
            )))
        }
    };
    ps.finish()?;
    let mut spec = FamilySpec::new(family);
    if let Some(n) = f.truncation {
        spec = spec.truncated(n);
    }
    if let Some(r) = &f.region {
        spec = spec.in_region(parse_region(r)?);
    }
    Ok(spec)
}

/// A resolved input: the pencil, the family it came from (if any), and the
/// document's settings.
#[derive(Debug, Clone)]
pub struct Input {
    pub pencil: OperatorPencil,
    pub spec: Option<FamilySpec>,
    pub warnings: Vec<String>,
    pub tolerances: Tolerances,
    pub annulus: Annulus,
    pub samples: Option<Vec<C64>>,
}

pub fn resolve(doc: &PencilDocument) -> Result<Input, CliError> {
    let tolerances = doc.tolerances.apply()?;
    let (mut pencil, spec, warnings) = match &doc.pencil {
        PencilSource::Inline(m) => {
            let a0 = matrix_of(&m.a0, "a0")?;
            let a1 = matrix_of(&m.a1, "a1")?;
            let prov = Provenance {
                source: "document".into(),
                ..Provenance::default()
            };
            (OperatorPencil::with_provenance(a0, a1, prov)?, None, vec![])
        }
        PencilSource::Family(f) => {
            let spec = family_spec(f)?;
            let built = build(&spec)?;
            (built.pencil, Some(spec), built.warnings)
        }
    };
    if let Some(h) = doc.annulus_hint {
        pencil.provenance.annulus_hint = Some(h.to_annulus()?);
    }
    let annulus = pencil.provenance.annulus_hint.unwrap_or_else(Annulus::whole_plane);
    let samples = doc.samples.as_ref().map(|s| s.iter().map(|&[re, im]| C64::new(re, im)).collect());
    Ok(Input {
        pencil,
        spec,
        warnings,
        tolerances,
        annulus,
        samples,
    })
}
