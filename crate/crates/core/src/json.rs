//! Canonical JSON for the kernel's data and reports. Objects are
//! `serde_json` maps, so keys come out sorted; numbers are integers and
//! field elements are strings.
//!
//! - `Rat`: `{"num": "t^2+1", "den": "t"}`
//! - `LocalSeries`: `{"point": "t", "val": -1, "coeffs": ["1", "2"], "prec": 4}`
//! - `Adele`: `{"level": n, "components": {"(x,eta)": {"exceptions": {...}, "default": Rat}, "(eta,eta)": Rat}}`
//! - `Cocycle`: `{"rank": n, "entries": [[Adele, ...], ...]}`

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::adele::{Adele, Component, LocalComponent};
use crate::cohomology::{CohomologyReport, ResolutionReport};
use crate::descent::{Cocycle, DoubleCoset, Gauge, Validation};
use crate::error::{AdeleError, Result};
use crate::local::LocalElt;
use crate::point::ClosedPoint;
use crate::poly::{BaseField, Poly};
use crate::rat::Rat;
use crate::scheme::{CurvePattern, PatternRing};
use crate::series::LocalSeries;

fn parse_err(what: &str, v: &Value) -> AdeleError {
    AdeleError::Parse(format!("expected {what}, got {v}"))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| AdeleError::Parse(format!("missing key `{key}` in {v}")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(what, v))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(what, v))
}

pub fn rat_to_json<K: BaseField>(r: &Rat<K>) -> Value {
    json!({"num": r.num().to_string(), "den": r.den().to_string()})
}

pub fn rat_from_json<K: BaseField>(field: &K, v: &Value) -> Result<Rat<K>> {
    let num = as_str(get(v, "num")?, "a polynomial string")?;
    let den = match v.get("den") {
        Some(d) => as_str(d, "a polynomial string")?,
        None => "1",
    };
    Rat::parse(field, num, den)
}

pub fn point_to_json<K: BaseField>(x: &ClosedPoint<K>) -> Value {
    Value::String(x.to_string())
}

pub fn point_from_json<K: BaseField>(field: &K, v: &Value) -> Result<ClosedPoint<K>> {
    ClosedPoint::parse(field, as_str(v, "a point label")?)
}

pub fn series_to_json<K: BaseField>(s: &LocalSeries<K>) -> Value {
    let coeffs: Vec<Value> = s.coeffs().iter().map(|c| Value::String(c.to_string())).collect();
    json!({
        "point": point_to_json(s.point()),
        "val": s.val_offset(),
        "coeffs": coeffs,
        "prec": s.abs_prec(),
    })
}

pub fn series_from_json<K: BaseField>(field: &K, v: &Value) -> Result<LocalSeries<K>> {
    let point = point_from_json(field, get(v, "point")?)?;
    let val = as_i64(get(v, "val")?, "an integer valuation")?;
    let prec = as_i64(get(v, "prec")?, "an integer precision")?;
    let coeffs = get(v, "coeffs")?
        .as_array()
        .ok_or_else(|| parse_err("a coefficient list", v))?
        .iter()
        .map(|c| Poly::parse(field, as_str(c, "a residue-field element")?))
        .collect::<Result<Vec<_>>>()?;
    if !coeffs.is_empty() && prec <= val {
        return Err(AdeleError::InvalidInput(format!("precision {prec} does not exceed the offset {val}")));
    }
    let kappa = point.residue_field(field);
    Ok(LocalSeries::new(point, kappa, val, coeffs, prec))
}

pub fn local_elt_to_json<K: BaseField>(e: &LocalElt<K>) -> Value {
    match e {
        LocalElt::Exact(r) => rat_to_json(r),
        LocalElt::Series(s) => series_to_json(s),
    }
}

pub fn local_elt_from_json<K: BaseField>(field: &K, v: &Value) -> Result<LocalElt<K>> {
    if v.get("coeffs").is_some() {
        Ok(LocalElt::Series(series_from_json(field, v)?))
    } else {
        Ok(LocalElt::Exact(rat_from_json(field, v)?))
    }
}

pub fn component_to_json<K: BaseField>(c: &LocalComponent<K>) -> Value {
    let exceptions: Map<String, Value> = c
        .exceptions()
        .iter()
        .map(|(x, e)| (x.to_string(), local_elt_to_json(e)))
        .collect();
    json!({"exceptions": exceptions, "default": rat_to_json(c.tail())})
}

pub fn component_from_json<K: BaseField>(field: &K, v: &Value) -> Result<LocalComponent<K>> {
    let mut exceptions = BTreeMap::new();
    if let Some(e) = v.get("exceptions") {
        let obj = e.as_object().ok_or_else(|| parse_err("an exception map", e))?;
        for (label, val) in obj {
            exceptions.insert(ClosedPoint::parse(field, label)?, local_elt_from_json(field, val)?);
        }
    }
    let tail = match v.get("default") {
        None => Rat::one(field),
        Some(Value::String(s)) if s == "zero" => Rat::zero(field),
        Some(Value::String(s)) if s == "one" => Rat::one(field),
        Some(d) => rat_from_json(field, d)?,
    };
    Ok(LocalComponent::new(exceptions, tail))
}

pub fn adele_to_json<K: BaseField>(a: &Adele<K>) -> Value {
    let mut comps = Map::new();
    for (p, c) in CurvePattern::all(a.level()).iter().zip(a.components()) {
        let v = match c {
            Component::Global(r) => rat_to_json(r),
            Component::Local(l) => component_to_json(l),
        };
        comps.insert(p.to_string(), v);
    }
    let mut out = json!({"level": a.level(), "components": comps});
    if !a.removed().is_empty() {
        let removed: Vec<Value> = a.removed().iter().map(point_to_json).collect();
        out["removed"] = Value::Array(removed);
    }
    out
}

pub fn adele_from_json<K: BaseField>(field: &K, v: &Value) -> Result<Adele<K>> {
    let level = as_i64(get(v, "level")?, "a level")?;
    if level < 0 {
        return Err(AdeleError::UnsupportedLevel(level));
    }
    let level = level as usize;
    let obj = get(v, "components")?
        .as_object()
        .ok_or_else(|| parse_err("a component map", v))?;
    let mut by_pattern = BTreeMap::new();
    for (key, val) in obj {
        let p = CurvePattern::parse(key)?;
        if p.level != level {
            return Err(AdeleError::InvalidInput(format!("pattern {key} does not belong to level {level}")));
        }
        by_pattern.insert(p, val);
    }
    let comps = CurvePattern::all(level)
        .iter()
        .map(|p| {
            let val = by_pattern
                .get(p)
                .ok_or_else(|| AdeleError::Parse(format!("missing component {p}")))?;
            Ok(match p.ring() {
                PatternRing::Rational => Component::Global(rat_from_json(field, val)?),
                _ => Component::Local(component_from_json(field, val)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let a = Adele::new(field, level, comps)?;
    match v.get("removed").and_then(Value::as_array) {
        Some(list) if !list.is_empty() => {
            let s = list
                .iter()
                .map(|x| point_from_json(field, x))
                .collect::<Result<BTreeSet<_>>>()?;
            a.restrict(&s)
        }
        _ => Ok(a),
    }
}

pub fn cocycle_to_json<K: BaseField>(c: &Cocycle<K>) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .iter()
        .map(|row| Value::Array(row.iter().map(adele_to_json).collect()))
        .collect();
    json!({"rank": c.rank(), "entries": entries})
}

/// Reads a cocycle; `"weil"` (a matrix of adelic components) is accepted
/// in place of `"entries"`.
pub fn cocycle_from_json<K: BaseField>(field: &K, v: &Value) -> Result<Cocycle<K>> {
    let rows = |key: &str| -> Result<Option<Vec<Vec<Value>>>> {
        match v.get(key) {
            None => Ok(None),
            Some(m) => m
                .as_array()
                .ok_or_else(|| parse_err("a matrix", m))?
                .iter()
                .map(|r| r.as_array().cloned().ok_or_else(|| parse_err("a matrix row", r)))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    };
    let c = if let Some(m) = rows("entries")? {
        let entries = m
            .iter()
            .map(|r| r.iter().map(|a| adele_from_json(field, a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Cocycle::new(field, entries)?
    } else if let Some(m) = rows("weil")? {
        let g = m
            .iter()
            .map(|r| r.iter().map(|a| component_from_json(field, a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Cocycle::from_weil(field, &g)?
    } else {
        return Err(AdeleError::Parse("cocycle needs `entries` or `weil`".into()));
    };
    if let Some(r) = v.get("rank") {
        let r = as_i64(r, "a rank")?;
        if r != c.rank() as i64 {
            return Err(AdeleError::RankMismatch(r.max(0) as usize, c.rank()));
        }
    }
    Ok(c)
}

pub fn validation_to_json(v: &Validation) -> Value {
    match v {
        Validation::Unchecked => json!({"status": "unchecked"}),
        Validation::Valid { precision } => match precision {
            None => json!({"status": "valid"}),
            Some(p) => json!({"status": "valid", "precision": p}),
        },
        Validation::Invalid { pattern, entry, detail } => json!({
            "status": "invalid",
            "witness": {"pattern": pattern, "entry": [entry.0, entry.1], "detail": detail},
        }),
        Validation::Indeterminate { pattern, detail } => json!({
            "status": "indeterminate",
            "witness": {"pattern": pattern, "detail": detail},
        }),
    }
}

fn rat_matrix<K: BaseField>(m: &[Vec<Rat<K>>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(rat_to_json).collect())).collect())
}

pub fn gauge_to_json<K: BaseField>(g: &Gauge<K>) -> Value {
    let o: Vec<Value> = g
        .g_o
        .iter()
        .map(|r| Value::Array(r.iter().map(component_to_json).collect()))
        .collect();
    json!({"g_F": rat_matrix(&g.g_f), "g_O": o})
}

pub fn double_coset_to_json<K: BaseField>(d: &DoubleCoset<K>) -> Value {
    json!({
        "degree": d.degree,
        "normal_form": component_to_json(&d.normal_form.to_weil()[0][0]),
        "gauge": gauge_to_json(&d.gauge),
        "log": d.log,
    })
}

pub fn report_to_json<K: BaseField>(r: &CohomologyReport<K>) -> Value {
    let dims: Map<String, Value> = r.dims.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let windows: Vec<Value> = r
        .windows_used
        .iter()
        .map(|w| {
            json!({
                "round": w.round,
                "support": w.support,
                "pole_bound": w.pole_bound,
                "precision": w.precision,
                "dims": w.dims,
                "valid": w.valid,
            })
        })
        .collect();
    let mut out = json!({"dims": dims, "stabilized": r.stabilized, "windows_used": windows});
    if let Some(reps) = &r.representatives {
        let h1: Vec<Value> = reps
            .h1
            .iter()
            .map(|h| json!({"point": point_to_json(&h.point), "row": h.row, "value": rat_to_json(&h.value)}))
            .collect();
        out["representatives"] = json!({"h0": rat_matrix(&reps.h0), "h1": h1});
    }
    out
}

pub fn resolution_to_json(r: &ResolutionReport) -> Value {
    json!({
        "kernel_dim": r.kernel_dim,
        "h1_dim": r.h1_dim,
        "samples": r.samples,
        "coboundaries": r.coboundaries,
        "matched_h1": r.matched_h1,
        "unexplained": r.unexplained,
        "witnesses": r.witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adeles_roundtrip() {
        let k = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for level in 0..=3 {
            for _ in 0..10 {
                let a = Adele::random(&k, level, &mut rng).unwrap();
                let v = adele_to_json(&a);
                let text = v.to_string();
                let back = adele_from_json(&k, &serde_json::from_str(&text).unwrap()).unwrap();
                assert_eq!(back, a);
                assert_eq!(adele_to_json(&back).to_string(), text);
            }
        }
    }

    #[test]
    fn series_example_over_q() {
        let q = Rationals;
        let v: Value = serde_json::from_str(r#"{"point":"t","val":-1,"coeffs":["1","1/2"],"prec":3}"#).unwrap();
        let s = series_from_json(&q, &v).unwrap();
        assert_eq!(s.val_offset(), -1);
        assert_eq!(series_to_json(&s), v);
    }

    #[test]
    fn weil_shorthand_and_rank_check() {
        let k = PrimeField::new(5).unwrap();
        let v: Value = serde_json::from_str(
            r#"{"rank":1,"weil":[[{"exceptions":{"t":{"num":"t","den":"1"}},"default":"one"}]]}"#,
        )
        .unwrap();
        let c = cocycle_from_json(&k, &v).unwrap();
        let again = cocycle_from_json(&k, &cocycle_to_json(&c)).unwrap();
        assert_eq!(again, c);
        let mut bad = v.clone();
        bad["rank"] = json!(2);
        assert!(matches!(cocycle_from_json(&k, &bad), Err(AdeleError::RankMismatch(2, 1))));
    }
}
