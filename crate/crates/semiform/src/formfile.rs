//! Form files: the JSON surface syntax for semirings, scalars, and forms.
//!
//! A form document looks like
//!
//! ```json
//! {
//!   "semiring": {"kind": "maxplus"},
//!   "kind": "quadratic",
//!   "rank": 2,
//!   "diag": ["0", "0"],
//!   "off": {"1,2": "-5"},
//!   "companion": [["0", "-5"], ["-5", "0"]]
//! }
//! ```
//!
//! Bilinear documents carry `"gram"` (a row-major symmetric matrix) instead
//! of `"diag"`/`"off"`; scheme keys are 1-based with i < j. Scalars are
//! strings whenever the semiring needs annotations (`"-inf"`, `"3/2"`,
//! ghosts `"3g"`), plain numbers otherwise, and two-element arrays for
//! product semirings. `serialize(parse(text))` is idempotent after the
//! first normalization.

use std::collections::BTreeMap;

use serde_json::{json, Map as JsonMap, Value};

use crate::error::{Error, Result};
use crate::forms::{Form, GramMatrix, QuadraticScheme};
use crate::module::{FreeModule, Vector};
use crate::semiring::{Scalar, Semiring};

// ---------------------------------------------------------------------------
// Semirings
// ---------------------------------------------------------------------------

pub fn parse_semiring_json(v: &Value) -> Result<Semiring> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("semiring descriptor must be an object".into()))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("semiring descriptor needs a \"kind\" string".into()))?;
    match kind {
        "bool" => Ok(Semiring::Bool),
        "nat" => Ok(Semiring::Nat),
        "maxplus" => Ok(Semiring::MaxPlus),
        "supertropical" => Ok(Semiring::Supertropical),
        "product" => {
            let factors = obj
                .get("factors")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("product semiring needs a \"factors\" array".into()))?;
            if factors.len() != 2 {
                return Err(Error::Parse(format!(
                    "product semiring takes exactly 2 factors, got {}",
                    factors.len()
                )));
            }
            Ok(Semiring::product(
                parse_semiring_json(&factors[0])?,
                parse_semiring_json(&factors[1])?,
            ))
        }
        other => {
            if let Some(table) = other.strip_prefix("finite:") {
                if let Some(cap) = table.strip_prefix("trunc") {
                    let cap: u32 = cap.parse().map_err(|_| {
                        Error::Parse(format!("unknown finite semiring table {table:?}"))
                    })?;
                    if cap == 0 {
                        return Err(Error::Parse("trunc cap must be at least 1".into()));
                    }
                    return Ok(Semiring::Trunc(cap));
                }
                return Err(Error::Parse(format!(
                    "unknown finite semiring table {table:?}"
                )));
            }
            Err(Error::Parse(format!("unknown semiring kind {other:?}")))
        }
    }
}

pub fn semiring_to_json(ring: &Semiring) -> Value {
    match ring {
        Semiring::Product(p) => json!({
            "kind": "product",
            "factors": [semiring_to_json(&p.0), semiring_to_json(&p.1)],
        }),
        other => json!({ "kind": other.kind_id() }),
    }
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

pub fn scalar_from_json(ring: &Semiring, v: &Value) -> Result<Scalar> {
    match (ring, v) {
        (Semiring::Product(p), Value::Array(items)) => {
            if items.len() != 2 {
                return Err(Error::Parse(format!(
                    "product scalar takes a two-element array, got {} elements",
                    items.len()
                )));
            }
            Ok(Scalar::pair(
                scalar_from_json(&p.0, &items[0])?,
                scalar_from_json(&p.1, &items[1])?,
            ))
        }
        (_, Value::String(s)) => ring.parse_scalar(s),
        (_, Value::Bool(b)) => ring.parse_scalar(if *b { "1" } else { "0" }),
        (_, Value::Number(n)) => {
            if let Some(i) = n.as_i64() {
                ring.parse_scalar(&i.to_string())
            } else {
                Err(Error::Parse(format!(
                    "non-integer number {n} (spell rationals as \"p/q\")"
                )))
            }
        }
        (_, other) => Err(Error::Parse(format!(
            "malformed scalar literal {other} for {}",
            ring.kind_id()
        ))),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Bool(b) => json!(u8::from(*b)),
        Scalar::Nat(n) => json!(n),
        Scalar::Trunc(v) => json!(v),
        Scalar::Pair(p) => json!([scalar_to_json(&p.0), scalar_to_json(&p.1)]),
        other => json!(other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Form documents
// ---------------------------------------------------------------------------

/// A parsed and validated form file: the form plus an optional companion
/// payload.
#[derive(Debug, Clone, PartialEq)]
pub struct FormDocument {
    pub form: Form,
    pub companion: Option<GramMatrix>,
}

fn parse_gram(module: &FreeModule, v: &Value) -> Result<GramMatrix> {
    let ring = module.ring();
    let rows_json = v
        .as_array()
        .ok_or_else(|| Error::Parse("\"gram\" must be an array of rows".into()))?;
    let mut rows = Vec::with_capacity(rows_json.len());
    for row in rows_json {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse("gram rows must be arrays".into()))?;
        let mut out = Vec::with_capacity(cells.len());
        for cell in cells {
            out.push(scalar_from_json(ring, cell)?);
        }
        rows.push(out);
    }
    GramMatrix::new(module, rows)
}

fn parse_scheme(module: &FreeModule, diag: &Value, off: Option<&Value>) -> Result<QuadraticScheme> {
    let ring = module.ring();
    let diag_json = diag
        .as_array()
        .ok_or_else(|| Error::Parse("\"diag\" must be an array".into()))?;
    let mut diag_scalars = Vec::with_capacity(diag_json.len());
    for cell in diag_json {
        diag_scalars.push(scalar_from_json(ring, cell)?);
    }
    let mut off_map = BTreeMap::new();
    if let Some(off) = off {
        let entries = off
            .as_object()
            .ok_or_else(|| Error::Parse("\"off\" must be an object".into()))?;
        for (key, cell) in entries {
            let (i, j) = key
                .split_once(',')
                .and_then(|(a, b)| {
                    Some((
                        a.trim().parse::<usize>().ok()?,
                        b.trim().parse::<usize>().ok()?,
                    ))
                })
                .ok_or_else(|| Error::Parse(format!("bad scheme key {key:?}")))?;
            if i == 0 || j == 0 || i >= j {
                return Err(Error::Parse(format!(
                    "bad scheme key {key:?}: need 1 <= i < j"
                )));
            }
            off_map.insert((i - 1, j - 1), scalar_from_json(ring, cell)?);
        }
    }
    QuadraticScheme::new(module, diag_scalars, off_map)
}

impl FormDocument {
    pub fn new(form: Form) -> FormDocument {
        FormDocument {
            form,
            companion: None,
        }
    }

    pub fn with_companion(form: Form, companion: GramMatrix) -> FormDocument {
        FormDocument {
            form,
            companion: Some(companion),
        }
    }

    /// Parse and validate a form document; errors carry positions where the
    /// payload admits them.
    pub fn parse(text: &str) -> Result<FormDocument> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<FormDocument> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("form document must be a JSON object".into()))?;
        let ring = parse_semiring_json(
            obj.get("semiring")
                .ok_or_else(|| Error::Parse("missing \"semiring\"".into()))?,
        )?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing \"kind\"".into()))?;
        let rank = obj
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing or non-integer \"rank\"".into()))?
            as usize;
        let module = FreeModule::new(ring, rank);

        let form = match kind {
            "bilinear" => {
                let gram = obj
                    .get("gram")
                    .ok_or_else(|| Error::Parse("bilinear document needs \"gram\"".into()))?;
                Form::Bilinear(parse_gram(&module, gram)?)
            }
            "quadratic" => {
                // top-level diag/off, or nested under "quadratic"
                if let Some(nested) = obj.get("quadratic").and_then(Value::as_object) {
                    let diag = nested
                        .get("diag")
                        .ok_or_else(|| Error::Parse("quadratic payload needs \"diag\"".into()))?;
                    Form::Quadratic(parse_scheme(&module, diag, nested.get("off"))?)
                } else {
                    let diag = obj
                        .get("diag")
                        .ok_or_else(|| Error::Parse("quadratic document needs \"diag\"".into()))?;
                    Form::Quadratic(parse_scheme(&module, diag, obj.get("off"))?)
                }
            }
            other => {
                return Err(Error::Parse(format!(
                    "unknown form kind {other:?} (expected \"bilinear\" or \"quadratic\")"
                )))
            }
        };
        if form.rank() != rank {
            return Err(Error::Parse(format!(
                "payload dimensions do not match rank {rank}"
            )));
        }

        let companion = match obj.get("companion") {
            Some(c) => Some(parse_gram(&module, c)?),
            None => None,
        };

        Ok(FormDocument { form, companion })
    }

    pub fn to_json(&self) -> Value {
        let mut obj = JsonMap::new();
        let module = self.form.module();
        obj.insert("semiring".into(), semiring_to_json(module.ring()));
        obj.insert("kind".into(), json!(self.form.kind().to_string()));
        obj.insert("rank".into(), json!(module.rank()));
        match &self.form {
            Form::Bilinear(b) => {
                obj.insert("gram".into(), gram_to_json(b));
            }
            Form::Quadratic(q) => {
                obj.insert(
                    "diag".into(),
                    Value::Array(q.diag_coeffs().iter().map(scalar_to_json).collect()),
                );
                let mut off = JsonMap::new();
                for ((i, j), a) in q.off_entries() {
                    off.insert(format!("{},{}", i + 1, j + 1), scalar_to_json(a));
                }
                obj.insert("off".into(), Value::Object(off));
            }
        }
        if let Some(c) = &self.companion {
            obj.insert("companion".into(), gram_to_json(c));
        }
        Value::Object(obj)
    }

    /// Canonical serialized text (stable key order, normalized scalars).
    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("valid JSON tree")
    }
}

pub fn gram_to_json(g: &GramMatrix) -> Value {
    Value::Array(
        g.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

pub fn scheme_to_json(q: &QuadraticScheme) -> Value {
    let mut obj = JsonMap::new();
    obj.insert(
        "diag".into(),
        Value::Array(q.diag_coeffs().iter().map(scalar_to_json).collect()),
    );
    let mut off = JsonMap::new();
    for ((i, j), a) in q.off_entries() {
        off.insert(format!("{},{}", i + 1, j + 1), scalar_to_json(a));
    }
    obj.insert("off".into(), Value::Object(off));
    Value::Object(obj)
}

// ---------------------------------------------------------------------------
// Base-check documents
// ---------------------------------------------------------------------------

/// Input for `check-base`: a module, candidate vectors, and the scalar
/// sample to probe with.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseDocument {
    pub module: FreeModule,
    pub candidates: Vec<Vector>,
    pub sample: Vec<Scalar>,
}

impl BaseDocument {
    pub fn parse(text: &str) -> Result<BaseDocument> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("base document must be a JSON object".into()))?;
        let ring = parse_semiring_json(
            obj.get("semiring")
                .ok_or_else(|| Error::Parse("missing \"semiring\"".into()))?,
        )?;
        let rank = obj
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing or non-integer \"rank\"".into()))?
            as usize;
        let module = FreeModule::new(ring.clone(), rank);
        let cand_json = obj
            .get("candidates")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"candidates\" array".into()))?;
        let mut candidates = Vec::with_capacity(cand_json.len());
        for cand in cand_json {
            let cells = cand
                .as_array()
                .ok_or_else(|| Error::Parse("candidates must be arrays of scalars".into()))?;
            let mut coeffs = Vec::with_capacity(cells.len());
            for cell in cells {
                coeffs.push(scalar_from_json(&ring, cell)?);
            }
            candidates.push(Vector::new(&module, coeffs)?);
        }
        let mut sample = Vec::new();
        if let Some(items) = obj.get("sample").and_then(Value::as_array) {
            for cell in items {
                sample.push(scalar_from_json(&ring, cell)?);
            }
        }
        Ok(BaseDocument {
            module,
            candidates,
            sample,
        })
    }
}
