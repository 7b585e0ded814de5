//! Canonical JSON for instances, spin tuples and ruling curves.
//!
//! Field elements are strings: residues for `fp:P`, `num/den` for `qq`.
//! Objects are written with sorted keys and no floats, so loading and saving
//! a file reproduces it byte for byte.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::correspondence::{build_correspondence, random_ruling_curve, RulingCurve};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Scalar, TowerField};
use crate::jacobian::{Curve, Point, ThetaChar};
use crate::poly::Poly;
use crate::model::extract_model;
use crate::quadric::{sample_context, ContextSampling, QuadricContext};
use crate::reconstruction::SpinTuple;

/// The two field backends a file can name.
#[derive(Clone, Debug)]
pub enum AnyField {
    Fp(PrimeField),
    Qq(TowerField),
}

/// Parses `fp:P` or `qq`.
pub fn parse_field(desc: &str) -> Result<AnyField> {
    if desc == "qq" {
        return Ok(AnyField::Qq(TowerField::rationals()));
    }
    let p = desc
        .strip_prefix("fp:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| Error::Input(format!("unknown field descriptor {desc:?}; expected fp:P or qq")))?;
    Ok(AnyField::Fp(PrimeField::new(p)?))
}

/// Text-pretty JSON with a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

/// An element as a string; errors for elements outside the base field.
pub fn elem_to_json<K: Field>(field: &K, x: &K::Elem) -> Result<Value> {
    let s = field.format_elem(x);
    match field.parse_elem(&s) {
        Ok(back) if back == *x => Ok(Value::String(s)),
        _ => Err(Error::Input(format!("element {s} does not lie in the base field {}", field.descriptor()))),
    }
}

pub fn elem_from_json<K: Field>(field: &K, v: &Value) -> Result<K::Elem> {
    let s = v.as_str().ok_or_else(|| Error::Input(format!("field elements are strings, got {v}")))?;
    Ok(field.parse_elem(s)?)
}

pub fn elems_to_json<K: Field>(field: &K, xs: &[K::Elem]) -> Result<Value> {
    Ok(Value::Array(xs.iter().map(|x| elem_to_json(field, x)).collect::<Result<_>>()?))
}

pub fn elems_from_json<K: Field>(field: &K, v: &Value) -> Result<Vec<K::Elem>> {
    v.as_array()
        .ok_or_else(|| Error::Input(format!("expected an array of field elements, got {v}")))?
        .iter()
        .map(|x| elem_from_json(field, x))
        .collect()
}

/// A polynomial as its coefficient list, constant term first.
pub fn poly_to_json<K: Field>(field: &K, p: &Poly<K::Elem>) -> Result<Value> {
    elems_to_json(field, p.coeffs())
}

pub fn poly_from_json<K: Field>(field: &K, v: &Value) -> Result<Poly<K::Elem>> {
    Ok(Poly::new(elems_from_json(field, v)?))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Input(format!("missing key {key:?}")))
}

/// `{"coeffs": [a_0, …, a_{d−1}, b_0, …, b_{d−1}], "d": d}`.
pub fn ruling_curve_to_json<K: Field>(field: &K, r: &RulingCurve<K::Elem>) -> Result<Value> {
    Ok(json!({ "coeffs": elems_to_json(field, &r.coeffs())?, "d": r.d }))
}

pub fn ruling_curve_from_json<K: Field>(field: &K, v: &Value) -> Result<RulingCurve<K::Elem>> {
    let c = elems_from_json(field, get(v, "coeffs")?)?;
    let d = get(v, "d")?.as_u64().ok_or_else(|| Error::Input("d must be an integer".into()))? as usize;
    if c.len() != 2 * d {
        return Err(Error::Input(format!("expected {} coefficients for d = {d}, got {}", 2 * d, c.len())));
    }
    RulingCurve::from_coeffs(d, &c)
}

/// A stored instance: the context parameters, `R`, and the seed it came from.
#[derive(Clone, Debug)]
pub struct Instance<K: Field> {
    pub field: K,
    pub ctx: QuadricContext<K::Elem>,
    pub r: RulingCurve<K::Elem>,
    pub seed: Option<u64>,
}

impl<K: Field> Instance<K> {
    pub fn to_json(&self) -> Result<Value> {
        let (desc, b0, b1, alpha) = self.ctx.params();
        let f = &self.field;
        Ok(json!({
            "context": {
                "alpha": elem_to_json(f, &alpha)?,
                "b0": elem_to_json(f, &b0)?,
                "b1": elem_to_json(f, &b1)?,
            },
            "d": self.r.d,
            "field": desc,
            "r": ruling_curve_to_json(f, &self.r)?,
            "seed": self.seed,
        }))
    }

    pub fn from_json(field: K, v: &Value) -> Result<Self> {
        let desc = get(v, "field")?.as_str().unwrap_or_default();
        if desc != field.descriptor() {
            return Err(Error::Input(format!("file is over {desc}, expected {}", field.descriptor())));
        }
        let c = get(v, "context")?;
        let b0 = elem_from_json(&field, get(c, "b0")?)?;
        let b1 = elem_from_json(&field, get(c, "b1")?)?;
        let alpha = elem_from_json(&field, get(c, "alpha")?)?;
        let ctx = QuadricContext::build(&field, b0, b1, alpha)?;
        let r = ruling_curve_from_json(&field, get(v, "r")?)?;
        let d = get(v, "d")?.as_u64().ok_or_else(|| Error::Input("d must be an integer".into()))?;
        if d as usize != r.d {
            return Err(Error::Input(format!("instance d = {d} disagrees with the curve's d = {}", r.d)));
        }
        let seed = match get(v, "seed")? {
            Value::Null => None,
            s => Some(s.as_u64().ok_or_else(|| Error::Input("seed must be a nonnegative integer".into()))?),
        };
        Ok(Instance { field, ctx, r, seed })
    }
}

const CONTEXT_BUDGET: usize = 200;
const CURVE_BUDGET: usize = 100;

impl<K: ContextSampling> Instance<K> {
    /// The instance determined by `seed`: a context, then ruling curves drawn
    /// from the same stream until one passes every generality condition and
    /// yields a hyperelliptic model.
    pub fn sample(field: K, d: usize, seed: u64) -> Result<Self> {
        if d < 3 {
            return Err(Error::Input(format!("d must be at least 3, got {d}")));
        }
        let (hc, hr) = field.default_heights();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = sample_context(&field, &mut rng, hc, CONTEXT_BUDGET)?;
        let mut last = String::from("no draws");
        for _ in 0..CURVE_BUDGET {
            let r = match random_ruling_curve(&ctx, d, hr, &mut rng, 1) {
                Ok(r) => r,
                Err(Error::Input(e)) => return Err(Error::Input(e)),
                Err(e) => {
                    last = e.to_string();
                    continue;
                }
            };
            match build_correspondence(&ctx, &r).and_then(|c| extract_model(&ctx, &c)) {
                Ok(_) => return Ok(Instance { field, ctx, r, seed: Some(seed) }),
                Err(e) => last = e.to_string(),
            }
        }
        Err(Error::SamplingExhausted { attempts: CURVE_BUDGET, last })
    }
}

/// The field descriptor named in a JSON file.
pub fn field_of(v: &Value) -> Result<AnyField> {
    parse_field(get(v, "field")?.as_str().ok_or_else(|| Error::Input("field must be a string".into()))?)
}

pub fn point_to_json<K: Field>(field: &K, p: &Point<K::Elem>) -> Result<Value> {
    Ok(match p {
        Point::Infinity => Value::String("infinity".into()),
        Point::Affine(x, y) => json!({ "x": elem_to_json(field, x)?, "y": elem_to_json(field, y)? }),
    })
}

pub fn point_from_json<K: Field>(field: &K, v: &Value) -> Result<Point<K::Elem>> {
    if v.as_str() == Some("infinity") {
        return Ok(Point::Infinity);
    }
    Ok(Point::Affine(elem_from_json(field, get(v, "x")?)?, elem_from_json(field, get(v, "y")?)?))
}

/// `{"f", "field", "m", "n", "theta": {"side", "with_infinity"}}`. The side
/// of `θ` is stored as a monic factor of `f` because its roots generally lie
/// outside the base field.
pub fn spin_tuple_to_json<K: Field>(field: &K, t: &SpinTuple<K::Elem>) -> Result<Value> {
    let mut theta = Map::new();
    theta.insert("side".into(), poly_to_json(field, &t.theta.side)?);
    theta.insert("with_infinity".into(), Value::Bool(t.theta.with_inf));
    Ok(json!({
        "f": poly_to_json(field, &t.curve.f)?,
        "field": field.descriptor(),
        "genus": t.curve.g,
        "m": point_to_json(field, &t.m)?,
        "n": point_to_json(field, &t.n)?,
        "theta": Value::Object(theta),
    }))
}

pub fn spin_tuple_from_json<K: Field>(field: &K, v: &Value) -> Result<SpinTuple<K::Elem>> {
    let curve = Curve::new(poly_from_json(field, get(v, "f")?)?)?;
    let th = get(v, "theta")?;
    let side = poly_from_json(field, get(th, "side")?)?;
    let with_inf = get(th, "with_infinity")?
        .as_bool()
        .ok_or_else(|| Error::Input("with_infinity must be a boolean".into()))?;
    if side.is_zero() || !side.is_monic() {
        return Err(Error::Input("the side of θ must be a monic polynomial".into()));
    }
    let theta = ThetaChar { side, with_inf };
    curve.theta(theta.side.clone(), theta.with_inf)?;
    let m = point_from_json(field, get(v, "m")?)?;
    let n = point_from_json(field, get(v, "n")?)?;
    SpinTuple::new(curve, theta, m, n)
}

/// Serializes a scalar known to lie in the base field of a context.
pub fn scalar_to_json<F: Scalar>(ctx: &QuadricContext<F>, x: &F) -> Result<Value> {
    elem_to_json(&ctx.field, x)
}
