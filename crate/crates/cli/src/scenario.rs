//! Scenario files: a JSON object with a `kind`, a field, the truncation
//! order, a seed, and kind-specific parameters. Numbers may be given as
//! JSON integers or as decimal strings (`"-3"`, `"1/2"`).

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use arithdisc::numfield::{builtin, FieldElement, IntegerElement, Localization, LocalizedElement, NumberField};
use arithdisc::series::{RingDescriptor, TruncatedSeries};

pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "schema error: {}", self.0)
    }
}

impl std::error::Error for SchemaError {}

pub type SchemaResult<T> = Result<T, SchemaError>;

pub fn schema(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Hensel,
    Kummer,
    Wdiv,
    Split,
    Factor,
    Root,
    PatchDrill,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Hensel => "hensel",
            Kind::Kummer => "kummer",
            Kind::Wdiv => "wdiv",
            Kind::Split => "split",
            Kind::Factor => "factor",
            Kind::Root => "root",
            Kind::PatchDrill => "patch-drill",
        }
    }
}

/// A number given either as a JSON integer or as a decimal string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn rational(&self) -> SchemaResult<BigRational> {
        match self {
            Num::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Num::Text(s) => BigRational::from_str(s.trim()).map_err(|_| schema(format!("`{s}` is not a rational number"))),
        }
    }

    pub fn integer(&self) -> SchemaResult<BigInt> {
        let q = self.rational()?;
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(schema(format!("`{q}` is not an integer")))
        }
    }
}

/// A field element: a scalar (a rational multiple of 1) or its
/// integral-basis coordinates.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Elem {
    Scalar(Num),
    Coords(Vec<Num>),
}

impl Elem {
    pub fn field_element(&self, field: &NumberField) -> SchemaResult<FieldElement> {
        match self {
            Elem::Scalar(q) => Ok(field.rational(q.rational()?)),
            Elem::Coords(c) => {
                if c.len() != field.degree() {
                    return Err(schema(format!("element has {} coordinates, field degree is {}", c.len(), field.degree())));
                }
                Ok(FieldElement(c.iter().map(Num::rational).collect::<SchemaResult<_>>()?))
            }
        }
    }

    pub fn integer_element(&self, field: &NumberField) -> SchemaResult<IntegerElement> {
        self.field_element(field)?.to_integer().ok_or_else(|| schema("element is not an algebraic integer"))
    }

    pub fn localized(&self, loc: &Localization) -> SchemaResult<LocalizedElement> {
        let x = self.field_element(loc.field())?;
        loc.from_field(&x).ok_or_else(|| schema(format!("{x} does not lie in the coefficient ring")))
    }

    pub fn int(n: i64) -> Elem {
        Elem::Scalar(Num::Int(n))
    }
}

/// Coefficients `c_0, c_1, ...`, padded with zeros to the order.
pub fn series(ring: &RingDescriptor, coeffs: &[Elem], order: usize) -> SchemaResult<TruncatedSeries> {
    if coeffs.len() > order {
        return Err(schema(format!("{} coefficients exceed the order {order}", coeffs.len())));
    }
    let mut s = TruncatedSeries::zero(ring, order);
    for (i, c) in coeffs.iter().enumerate() {
        s.set_coeff(i, c.localized(&ring.loc)?);
    }
    Ok(s)
}

/// A custom field: minimal polynomial (constant term first), integral basis
/// and automorphisms, both in power coordinates.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomField {
    #[serde(default)]
    pub name: Option<String>,
    pub min_poly: Vec<Num>,
    pub integral_basis: Vec<Vec<Num>>,
    #[serde(default)]
    pub automorphisms: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Builtin(String),
    Custom(CustomField),
}

impl FieldSpec {
    /// A builtin name, or else a path to a JSON file holding a custom field.
    pub fn from_flag(s: &str) -> SchemaResult<FieldSpec> {
        if builtin::NAMES.contains(&s) {
            return Ok(FieldSpec::Builtin(s.to_string()));
        }
        let text = std::fs::read_to_string(s).map_err(|e| schema(format!("field `{s}` is neither builtin nor a readable file: {e}")))?;
        let custom: CustomField = serde_json::from_str(&text).map_err(|e| schema(format!("field file `{s}`: {e}")))?;
        Ok(FieldSpec::Custom(custom))
    }

    pub fn build(&self) -> SchemaResult<Arc<NumberField>> {
        let field = match self {
            FieldSpec::Builtin(name) => builtin::by_name(name).map_err(|e| schema(e.to_string()))?,
            FieldSpec::Custom(c) => {
                let rows = |v: &[Vec<Num>]| -> SchemaResult<Vec<Vec<BigRational>>> {
                    v.iter().map(|r| r.iter().map(Num::rational).collect()).collect()
                };
                let min_poly = c.min_poly.iter().map(Num::integer).collect::<SchemaResult<_>>()?;
                let name = c.name.clone().unwrap_or_else(|| "custom".into());
                NumberField::new(name, min_poly, rows(&c.integral_basis)?, rows(&c.automorphisms)?)
                    .map_err(|e| schema(format!("field: {e}")))?
            }
        };
        Ok(Arc::new(field))
    }

    pub fn to_value(&self, built: &NumberField) -> Value {
        match self {
            FieldSpec::Builtin(name) => Value::String(name.clone()),
            FieldSpec::Custom(_) => {
                let strings = |v: &[BigInt]| Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect());
                let mut m = Map::new();
                m.insert("name".into(), Value::String(built.name().to_string()));
                m.insert("min_poly".into(), strings(built.min_poly()));
                m.insert("integral_basis".into(), rational_rows(built.integral_basis()));
                let auts: Vec<Vec<BigRational>> = (0..built.automorphisms().len())
                    .map(|a| built.to_power_coords(&built.fapply(a, &built.generator_power(1))))
                    .collect();
                m.insert("automorphisms".into(), rational_rows(&auts));
                Value::Object(m)
            }
        }
    }
}

fn rational_rows(rows: &[Vec<BigRational>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(|c| Value::String(c.to_string())).collect())).collect())
}

/// Values given on the command line; they take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub field: Option<String>,
    pub precision_cap: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub kind: Kind,
    pub field_spec: FieldSpec,
    pub field: Arc<NumberField>,
    pub order: usize,
    pub seed: u64,
    pub precision_cap: Option<u32>,
    pub params: Map<String, Value>,
}

const HEADER_KEYS: &[&str] = &["kind", "field", "order", "seed", "precision_cap"];

impl Scenario {
    pub fn load(path: &Path, kind: Option<Kind>, ov: &Overrides) -> SchemaResult<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| schema(format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))?;
        Self::from_value(value, kind, ov)
    }

    /// `kind` is required in the document unless the caller fixes it; when
    /// both are present they must agree.
    pub fn from_value(value: Value, kind: Option<Kind>, ov: &Overrides) -> SchemaResult<Scenario> {
        let Value::Object(mut map) = value else {
            return Err(schema("scenario must be a JSON object"));
        };
        let declared: Option<Kind> = take(&mut map, "kind")?;
        let kind = match (declared, kind) {
            (Some(a), Some(b)) if a != b => {
                return Err(schema(format!("scenario kind `{}` does not match subcommand `{}`", a.name(), b.name())))
            }
            (Some(k), _) | (None, Some(k)) => k,
            (None, None) => return Err(schema("missing `kind`")),
        };
        let field_spec = match &ov.field {
            Some(f) => {
                map.remove("field");
                FieldSpec::from_flag(f)?
            }
            None => take(&mut map, "field")?.unwrap_or(FieldSpec::Builtin("rational".into())),
        };
        let order = take::<usize>(&mut map, "order")?;
        let seed = take::<Num>(&mut map, "seed")?.map(|n| n.integer()).transpose()?;
        let seed = match seed {
            Some(s) => Some(u64::try_from(s).map_err(|_| schema("seed must fit in an unsigned 64-bit integer"))?),
            None => None,
        };
        let precision_cap = take::<u32>(&mut map, "precision_cap")?;
        let field = field_spec.build()?;
        let order = ov.order.or(order).unwrap_or(DEFAULT_ORDER);
        if order == 0 {
            return Err(schema("order must be positive"));
        }
        Ok(Scenario {
            kind,
            field_spec,
            field,
            order,
            seed: ov.seed.or(seed).unwrap_or(0),
            precision_cap: ov.precision_cap.or(precision_cap),
            params: map,
        })
    }

    pub fn params<T: DeserializeOwned>(&self) -> SchemaResult<T> {
        serde_json::from_value(Value::Object(self.params.clone())).map_err(|e| schema(format!("{} parameters: {e}", self.kind.name())))
    }

    /// The effective scenario, with overrides applied.
    pub fn echo(&self) -> Value {
        let mut m = self.params.clone();
        m.insert("kind".into(), Value::String(self.kind.name().into()));
        m.insert("field".into(), self.field_spec.to_value(&self.field));
        m.insert("order".into(), Value::from(self.order));
        m.insert("seed".into(), Value::String(self.seed.to_string()));
        if let Some(cap) = self.precision_cap {
            m.insert("precision_cap".into(), Value::from(cap));
        }
        debug_assert!(HEADER_KEYS.iter().all(|k| *k == "precision_cap" || m.contains_key(*k)));
        Value::Object(m)
    }
}

fn take<T: DeserializeOwned>(map: &mut Map<String, Value>, key: &str) -> SchemaResult<Option<T>> {
    match map.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v).map(Some).map_err(|e| schema(format!("`{key}`: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn numbers_accept_strings_and_integers() {
        assert_eq!(Num::Text("-3/6".into()).rational().unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(Num::Int(7).integer().unwrap(), BigInt::from(7));
        assert!(Num::Text("1/2".into()).integer().is_err());
        assert!(Num::Text("x".into()).rational().is_err());
    }

    #[test]
    fn overrides_win() {
        let v = json!({"kind": "hensel", "order": 8, "seed": "5", "k": 3});
        let ov = Overrides { order: Some(4), ..Default::default() };
        let s = Scenario::from_value(v, None, &ov).unwrap();
        assert_eq!((s.order, s.seed), (4, 5));
        assert_eq!(s.params.len(), 1);
    }

    #[test]
    fn kind_mismatch_is_a_schema_error() {
        let v = json!({"kind": "root"});
        assert!(Scenario::from_value(v, Some(Kind::Hensel), &Overrides::default()).is_err());
        assert!(Scenario::from_value(json!({}), None, &Overrides::default()).is_err());
    }

    #[test]
    fn eisenstein_coordinates() {
        let k = builtin::eisenstein();
        let x = Elem::Coords(vec![Num::Int(2), Num::Text("-1".into())]).integer_element(&k).unwrap();
        assert_eq!(k.norm(&x), BigInt::from(7));
        assert!(Elem::Coords(vec![Num::Int(1)]).field_element(&k).is_err());
    }
}
