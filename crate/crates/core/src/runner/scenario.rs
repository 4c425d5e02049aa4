//! Scenario documents: JSON schema, validation and canonical re-serialization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::rational::{self, Rational};
use crate::exterior::{
    ConstantMetric, Coordinates, KForm, MultiIndex, Orientation, Polynomial, VectorField, DIM,
};
use crate::g2::standard_phi;

pub const SCHEMA_VERSION: u32 = 1;

/// Reserved value of `phi` selecting the standard 3-form.
pub const STANDARD_PHI: &str = "standard";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    schema: u32,
    name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coordinates: Option<Vec<String>>,
    #[serde(default = "default_orientation")]
    orientation: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<Vec<Vec<String>>>,
    phi: String,
    #[serde(default)]
    forms: BTreeMap<String, FormDoc>,
    #[serde(default)]
    fields: BTreeMap<String, FieldDoc>,
    #[serde(default)]
    scalars: BTreeMap<String, String>,
    #[serde(default)]
    checks: Vec<Check>,
}

fn default_orientation() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub degree: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    /// Axis numbers (1-based) or coordinate names.
    pub index: Vec<AxisRef>,
    #[serde(default = "unit_coeff")]
    pub coeff: String,
}

fn unit_coeff() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisRef {
    Number(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum FieldDoc {
    /// All seven components in coordinate order.
    Dense(Vec<String>),
    /// Nonzero components keyed by coordinate name.
    Sparse(BTreeMap<String, String>),
}

/// One check invocation; string fields name forms, fields or scalars of the scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Check {
    /// `dα = ι_Rφ`, `α(R)` nowhere zero, `α` contact.
    ACompatible {
        alpha: String,
        #[serde(rename = "R")]
        r: String,
    },
    /// `α = ι_Yι_Xφ` and `α` contact.
    BCompatible {
        alpha: String,
        #[serde(rename = "X")]
        x: String,
        #[serde(rename = "Y")]
        y: String,
    },
    /// `(φ, R, α, f, g)` with `α(R) = f`, `d(gα) = ι_Rφ`.
    ContactG2 {
        alpha: String,
        #[serde(rename = "R")]
        r: String,
        f: String,
        g: String,
    },
    /// `dφ = 0` and `d∗φ = 0`.
    Torsion {},
    /// `α∧(dα)³` nowhere zero.
    Contact { alpha: String },
    /// `ι_R dα = 0`, `α(R) = 1`.
    Reeb {
        alpha: String,
        #[serde(rename = "R")]
        r: String,
    },
    /// Exact metric/volume identity for the declared metric.
    MetricCompat {},
    /// Floating metric recovered from `φ` at a point, compared with the declared metric.
    MetricNumeric {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at: Option<Vec<String>>,
    },
    /// Almost contact metric structure built from `R` and the cross product.
    Acms {
        #[serde(rename = "R")]
        r: String,
    },
    /// Associated-structure conditions for the structure built from `R`,
    /// optionally with `alpha` in place of `R♭`.
    Associated {
        #[serde(rename = "R")]
        r: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<String>,
    },
    /// Hypotheses `ι_Zφ = Y♭∧X♭`, `d(ι_Xι_Yφ) = ι_Xι_Y∗φ` and their consequences.
    ContractionContact {
        #[serde(rename = "X")]
        x: String,
        #[serde(rename = "Y")]
        y: String,
        #[serde(rename = "Z")]
        z: String,
    },
    /// Randomized contraction/Hodge-star identities.
    IdentitySuite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trials: Option<usize>,
    },
    /// Splitting of a 2-form into its 7- and 14-dimensional parts.
    Lambda2 { beta: String },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::ACompatible { .. } => "a_compatible",
            Check::BCompatible { .. } => "b_compatible",
            Check::ContactG2 { .. } => "contact_g2",
            Check::Torsion {} => "torsion",
            Check::Contact { .. } => "contact",
            Check::Reeb { .. } => "reeb",
            Check::MetricCompat {} => "metric_compat",
            Check::MetricNumeric { .. } => "metric_numeric",
            Check::Acms { .. } => "acms",
            Check::Associated { .. } => "associated",
            Check::ContractionContact { .. } => "contraction_contact",
            Check::IdentitySuite { .. } => "identity_suite",
            Check::Lambda2 { .. } => "lambda2",
        }
    }

    /// Argument list such as `alpha=alpha0, R=R`.
    pub fn arguments(&self) -> String {
        let pairs: Vec<(&str, String)> = match self {
            Check::ACompatible { alpha, r } | Check::Reeb { alpha, r } => {
                vec![("alpha", alpha.clone()), ("R", r.clone())]
            }
            Check::BCompatible { alpha, x, y } => {
                vec![("alpha", alpha.clone()), ("X", x.clone()), ("Y", y.clone())]
            }
            Check::ContactG2 { alpha, r, f, g } => vec![
                ("alpha", alpha.clone()),
                ("R", r.clone()),
                ("f", f.clone()),
                ("g", g.clone()),
            ],
            Check::Torsion {} | Check::MetricCompat {} => vec![],
            Check::Contact { alpha } => vec![("alpha", alpha.clone())],
            Check::MetricNumeric { at } => at
                .iter()
                .map(|p| ("at", format!("({})", p.join(", "))))
                .collect(),
            Check::Acms { r } => vec![("R", r.clone())],
            Check::Associated { r, alpha } => {
                let mut v = vec![("R", r.clone())];
                if let Some(a) = alpha {
                    v.push(("alpha", a.clone()));
                }
                v
            }
            Check::ContractionContact { x, y, z } => {
                vec![("X", x.clone()), ("Y", y.clone()), ("Z", z.clone())]
            }
            Check::IdentitySuite { trials } => {
                trials.iter().map(|t| ("trials", t.to_string())).collect()
            }
            Check::Lambda2 { beta } => vec![("beta", beta.clone())],
        };
        pairs
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// A validated scenario: every name resolves and every literal parses.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub coordinates: Coordinates,
    pub orientation: Orientation,
    /// `None` means the identity metric.
    pub metric: Option<ConstantMetric>,
    /// Name of `φ` among `forms`, or [`STANDARD_PHI`].
    pub phi_name: String,
    pub forms: BTreeMap<String, KForm>,
    pub fields: BTreeMap<String, VectorField>,
    pub scalars: BTreeMap<String, Polynomial>,
    pub checks: Vec<Check>,
}

impl Scenario {
    pub fn phi(&self) -> KForm {
        if self.phi_name == STANDARD_PHI {
            standard_phi()
        } else {
            self.forms[&self.phi_name].clone()
        }
    }

    pub fn metric(&self) -> ConstantMetric {
        self.metric.clone().unwrap_or_else(ConstantMetric::identity)
    }

    pub fn form(&self, name: &str) -> &KForm {
        &self.forms[name]
    }

    pub fn field(&self, name: &str) -> &VectorField {
        &self.fields[name]
    }

    pub fn scalar(&self, name: &str) -> &Polynomial {
        &self.scalars[name]
    }

    /// Canonical JSON document; parsing it gives back an equal scenario.
    pub fn to_json(&self) -> String {
        let names = &self.coordinates;
        let doc = ScenarioDoc {
            schema: SCHEMA_VERSION,
            name: self.name.clone(),
            description: self.description.clone(),
            coordinates: (*names != Coordinates::default()).then(|| names.names().to_vec()),
            orientation: self.orientation.sign(),
            metric: self.metric.as_ref().map(|m| {
                m.entries()
                    .iter()
                    .map(|row| row.iter().map(|q| q.to_string()).collect())
                    .collect()
            }),
            phi: self.phi_name.clone(),
            forms: self
                .forms
                .iter()
                .map(|(k, f)| (k.clone(), form_doc(f, names)))
                .collect(),
            fields: self
                .fields
                .iter()
                .map(|(k, v)| {
                    let comps = (1..=DIM).map(|i| v.component(i).display_with(names)).collect();
                    (k.clone(), FieldDoc::Dense(comps))
                })
                .collect(),
            scalars: self
                .scalars
                .iter()
                .map(|(k, p)| (k.clone(), p.display_with(names)))
                .collect(),
            checks: self.checks.clone(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
        out.push('\n');
        out
    }
}

pub(crate) fn form_doc(f: &KForm, names: &Coordinates) -> FormDoc {
    FormDoc {
        degree: f.degree(),
        terms: f
            .terms()
            .map(|(idx, c)| TermDoc {
                index: idx.axes().map(AxisRef::Number).collect(),
                coeff: c.display_with(names),
            })
            .collect(),
    }
}

fn located(path: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let path = path.into();
    move |e| match e {
        Error::Scenario { .. } => e,
        other => Error::Scenario {
            path,
            message: other.to_string(),
        },
    }
}

fn err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Scenario {
        path: path.into(),
        message: message.into(),
    }
}

fn parse_rational(path: &str, s: &str) -> Result<Rational> {
    rational::parse(s.trim()).ok_or_else(|| err(path, format!("not a rational number: {s:?}")))
}

fn resolve_axis(path: &str, a: &AxisRef, names: &Coordinates) -> Result<usize> {
    match a {
        AxisRef::Number(n) if (1..=DIM).contains(n) => Ok(*n),
        AxisRef::Number(n) => Err(err(path, format!("axis {n} outside 1..={DIM}"))),
        AxisRef::Name(s) => names
            .index_of(s)
            .ok_or_else(|| err(path, format!("unknown coordinate {s:?}"))),
    }
}

fn build_form(path: &str, doc: &FormDoc, names: &Coordinates) -> Result<KForm> {
    if doc.degree > DIM {
        return Err(err(format!("{path}.degree"), format!("degree {} exceeds {DIM}", doc.degree)));
    }
    let mut out = KForm::zero(doc.degree);
    for (t, term) in doc.terms.iter().enumerate() {
        let tpath = format!("{path}.terms[{t}]");
        if term.index.len() != doc.degree {
            return Err(err(
                format!("{tpath}.index"),
                format!("index has {} entries, degree is {}", term.index.len(), doc.degree),
            ));
        }
        let axes = term
            .index
            .iter()
            .enumerate()
            .map(|(i, a)| resolve_axis(&format!("{tpath}.index[{i}]"), a, names))
            .collect::<Result<Vec<_>>>()?;
        let idx = MultiIndex::from_axes(&axes).map_err(located(format!("{tpath}.index")))?;
        let coeff = Polynomial::parse_with(&term.coeff, names).map_err(located(format!("{tpath}.coeff")))?;
        let piece = KForm::from_terms(doc.degree, [(idx, coeff)]).map_err(located(tpath.clone()))?;
        out = &out + &piece;
    }
    Ok(out)
}

fn build_field(path: &str, doc: &FieldDoc, names: &Coordinates) -> Result<VectorField> {
    let mut comps: [Polynomial; DIM] = Default::default();
    match doc {
        FieldDoc::Dense(v) => {
            if v.len() != DIM {
                return Err(err(path, format!("expected {DIM} components, found {}", v.len())));
            }
            for (i, s) in v.iter().enumerate() {
                comps[i] = Polynomial::parse_with(s, names).map_err(located(format!("{path}[{i}]")))?;
            }
        }
        FieldDoc::Sparse(m) => {
            for (k, s) in m {
                let p = format!("{path}.{k}");
                let axis = names
                    .index_of(k)
                    .ok_or_else(|| err(&p, format!("unknown coordinate {k:?}")))?;
                comps[axis - 1] = Polynomial::parse_with(s, names).map_err(located(p))?;
            }
        }
    }
    Ok(VectorField::from_components(comps))
}

/// Parses and validates a scenario; errors carry a path into the document.
pub fn parse_scenario(bytes: &[u8]) -> Result<Scenario> {
    let text = std::str::from_utf8(bytes).map_err(|e| err("", format!("invalid UTF-8: {e}")))?;
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        err(if path == "." { String::new() } else { path }, e.into_inner().to_string())
    })?;
    if doc.schema != SCHEMA_VERSION {
        return Err(err("schema", format!("unsupported schema {}, expected {SCHEMA_VERSION}", doc.schema)));
    }
    let coordinates = match &doc.coordinates {
        None => Coordinates::default(),
        Some(v) => {
            let arr: [String; DIM] = v
                .clone()
                .try_into()
                .map_err(|_| err("coordinates", format!("expected {DIM} names, found {}", v.len())))?;
            Coordinates::new(arr).map_err(located("coordinates"))?
        }
    };
    let orientation = Orientation::from_sign(doc.orientation)
        .ok_or_else(|| err("orientation", format!("expected 1 or -1, found {}", doc.orientation)))?;
    let metric = match &doc.metric {
        None => None,
        Some(rows) => {
            if rows.len() != DIM || rows.iter().any(|r| r.len() != DIM) {
                return Err(err("metric", format!("expected a {DIM}x{DIM} matrix")));
            }
            let mut m: [[Rational; DIM]; DIM] = Default::default();
            for (i, row) in rows.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    m[i][j] = parse_rational(&format!("metric[{i}][{j}]"), s)?;
                }
            }
            Some(ConstantMetric::new(m).map_err(located("metric"))?)
        }
    };
    let mut forms = BTreeMap::new();
    for (name, f) in &doc.forms {
        if name == STANDARD_PHI {
            return Err(err(format!("forms.{name}"), format!("{STANDARD_PHI:?} is reserved")));
        }
        forms.insert(name.clone(), build_form(&format!("forms.{name}"), f, &coordinates)?);
    }
    let mut fields = BTreeMap::new();
    for (name, v) in &doc.fields {
        fields.insert(name.clone(), build_field(&format!("fields.{name}"), v, &coordinates)?);
    }
    let mut scalars = BTreeMap::new();
    for (name, s) in &doc.scalars {
        let p = Polynomial::parse_with(s, &coordinates).map_err(located(format!("scalars.{name}")))?;
        scalars.insert(name.clone(), p);
    }
    if doc.phi != STANDARD_PHI {
        match forms.get(&doc.phi) {
            None => return Err(err("phi", format!("undefined form {:?}", doc.phi))),
            Some(f) if f.degree() != 3 => {
                return Err(err("phi", format!("{:?} has degree {}, expected 3", doc.phi, f.degree())))
            }
            _ => {}
        }
    }
    let sc = Scenario {
        name: doc.name,
        description: doc.description,
        coordinates,
        orientation,
        metric,
        phi_name: doc.phi,
        forms,
        fields,
        scalars,
        checks: doc.checks,
    };
    for (i, c) in sc.checks.iter().enumerate() {
        validate_check(&sc, i, c)?;
    }
    Ok(sc)
}

fn validate_check(sc: &Scenario, i: usize, c: &Check) -> Result<()> {
    let at = |key: &str| format!("checks[{i}].{key}");
    let form = |key: &str, name: &str, degree: usize| -> Result<()> {
        match sc.forms.get(name) {
            None => Err(err(at(key), format!("undefined form {name:?}"))),
            Some(f) if f.degree() != degree => Err(err(
                at(key),
                format!("{name:?} has degree {}, expected {degree}", f.degree()),
            )),
            Some(_) => Ok(()),
        }
    };
    let field = |key: &str, name: &str| -> Result<()> {
        sc.fields
            .contains_key(name)
            .then_some(())
            .ok_or_else(|| err(at(key), format!("undefined field {name:?}")))
    };
    let scalar = |key: &str, name: &str| -> Result<()> {
        sc.scalars
            .contains_key(name)
            .then_some(())
            .ok_or_else(|| err(at(key), format!("undefined scalar {name:?}")))
    };
    match c {
        Check::ACompatible { alpha, r } | Check::Reeb { alpha, r } => {
            form("alpha", alpha, 1)?;
            field("R", r)
        }
        Check::BCompatible { alpha, x, y } => {
            form("alpha", alpha, 1)?;
            field("X", x)?;
            field("Y", y)
        }
        Check::ContactG2 { alpha, r, f, g } => {
            form("alpha", alpha, 1)?;
            field("R", r)?;
            scalar("f", f)?;
            scalar("g", g)
        }
        Check::Torsion {} | Check::MetricCompat {} => Ok(()),
        Check::Contact { alpha } => form("alpha", alpha, 1),
        Check::MetricNumeric { at: Some(p) } => {
            if p.len() != DIM {
                return Err(err(at("at"), format!("expected {DIM} coordinates, found {}", p.len())));
            }
            for (k, s) in p.iter().enumerate() {
                parse_rational(&at(&format!("at[{k}]")), s)?;
            }
            Ok(())
        }
        Check::MetricNumeric { at: None } => Ok(()),
        Check::Acms { r } => field("R", r),
        Check::Associated { r, alpha } => {
            field("R", r)?;
            alpha.as_ref().map_or(Ok(()), |a| form("alpha", a, 1))
        }
        Check::ContractionContact { x, y, z } => {
            field("X", x)?;
            field("Y", y)?;
            field("Z", z)
        }
        Check::IdentitySuite { .. } => Ok(()),
        Check::Lambda2 { beta } => form("beta", beta, 2),
    }
}

/// Point argument of a `metric_numeric` check, validated at parse time.
pub(crate) fn check_point(p: &Option<Vec<String>>) -> crate::exterior::Point {
    match p {
        None => crate::exterior::Point::origin(),
        Some(v) => crate::exterior::Point::new(std::array::from_fn(|i| {
            rational::parse(v[i].trim()).expect("validated")
        })),
    }
}
