//! JSON documents for complexes and filtered complexes.
//!
//! A complex:
//! ```json
//! {"degrees": [0, 1], "ranks": {"0": 1, "1": 1}, "differentials": {"0": [[2]]}}
//! ```
//! Differential `"l"` is `d^l` with `rank(l+1)` rows. With `"grading": "chain"`
//! degrees are homological and `"l"` is `∂_l: C_l → C_{l-1}`; the complex is
//! converted to cochain indexing by negating degrees.
//!
//! A filtered document adds named filtrations. Each step `p` lists, per
//! degree, generator columns or `"all"`; unlisted degrees are zero. Steps
//! below the smallest listed `p` are everything, steps above the largest are
//! zero, and listed keys must be consecutive.
//! ```json
//! {"complex": {...}, "filtrations": {"F": {"steps": {"0": {"0": "all", "1": [[2]]}}}}}
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::{int_from_json, int_to_json};
use crate::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::filtration::FilteredComplex;
use crate::linalg::{IntMatrix, Subgroup};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn as_int(v: &Value, what: &str) -> Result<BigInt> {
    int_from_json(v).ok_or_else(|| parse_err(format!("{what}: expected an integer, got {v}")))
}

fn as_i32(v: &Value, what: &str) -> Result<i32> {
    v.as_i64()
        .and_then(|x| i32::try_from(x).ok())
        .ok_or_else(|| parse_err(format!("{what}: expected a small integer, got {v}")))
}

fn key_i32(k: &str, what: &str) -> Result<i32> {
    k.trim().parse().map_err(|_| parse_err(format!("{what}: key {k:?} is not an integer")))
}

/// Matrix given as a list of rows.
pub fn matrix_from_value(v: &Value, rows: usize, cols: usize, what: &str) -> Result<IntMatrix> {
    let list = v.as_array().ok_or_else(|| parse_err(format!("{what}: expected a list of rows")))?;
    if list.is_empty() && (rows == 0 || cols == 0) {
        return Ok(IntMatrix::zeros(rows, cols));
    }
    let mut data = Vec::new();
    let mut width = None;
    for (i, row) in list.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(format!("{what}: row {i} is not a list")))?;
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(parse_err(format!("{what}: ragged rows")));
        }
        for x in row {
            data.push(as_int(x, what)?);
        }
    }
    let width = width.unwrap_or(0);
    Ok(IntMatrix::from_vec(list.len(), width, data))
}

pub fn matrix_to_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(int_to_json).collect()))
            .collect(),
    )
}

/// Parses a complex, recording (not rejecting) shape and `d ∘ d` problems;
/// see [`CochainComplex::validate`].
pub fn complex_from_value_unchecked(v: &Value) -> Result<CochainComplex> {
    let obj = v.as_object().ok_or_else(|| parse_err("complex: expected an object"))?;
    let chain = match obj.get("grading").and_then(Value::as_str) {
        None | Some("cochain") => false,
        Some("chain") => true,
        Some(other) => return Err(parse_err(format!("complex: unknown grading {other:?}"))),
    };
    let degrees = match obj.get("degrees") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) if a.is_empty() => None,
        Some(Value::Array(a)) if a.len() == 2 => {
            let (m, mm) = (as_i32(&a[0], "degrees")?, as_i32(&a[1], "degrees")?);
            if mm < m {
                return Err(parse_err("degrees: upper end below lower end"));
            }
            Some((m, mm))
        }
        Some(other) => return Err(parse_err(format!("degrees: expected [m, M], got {other}"))),
    };
    let Some((m, mm)) = degrees else {
        return Ok(CochainComplex::zero());
    };
    let count = (mm - m + 1) as usize;
    let mut ranks = vec![0usize; count];
    match obj.get("ranks") {
        Some(Value::Object(r)) => {
            for (k, x) in r {
                let l = key_i32(k, "ranks")?;
                if l < m || l > mm {
                    return Err(parse_err(format!("ranks: degree {l} outside [{m}, {mm}]")));
                }
                ranks[(l - m) as usize] = x.as_u64().ok_or_else(|| parse_err(format!("ranks: bad rank {x}")))? as usize;
            }
        }
        Some(Value::Array(r)) if r.len() == count => {
            for (i, x) in r.iter().enumerate() {
                ranks[i] = x.as_u64().ok_or_else(|| parse_err(format!("ranks: bad rank {x}")))? as usize;
            }
        }
        _ => return Err(parse_err("ranks: expected an object keyed by degree or a list")),
    }
    let rank = |l: i32| if l < m || l > mm { 0 } else { ranks[(l - m) as usize] };
    let given: BTreeMap<i32, &Value> = match obj.get("differentials") {
        None | Some(Value::Null) => BTreeMap::new(),
        Some(Value::Object(d)) => d.iter().map(|(k, x)| Ok((key_i32(k, "differentials")?, x))).collect::<Result<_>>()?,
        Some(_) => return Err(parse_err("differentials: expected an object keyed by degree")),
    };
    if chain {
        // ∂_l: C_l → C_{l-1} becomes d^{-l}: C^{-l} → C^{-l+1}
        let lo = -mm;
        let co_ranks: Vec<usize> = (lo..=-m).map(|l| rank(-l)).collect();
        let mut diffs = Vec::new();
        for l in lo..-m {
            let src = -l;
            let mat = match given.get(&src) {
                Some(x) => matrix_from_value(x, rank(src - 1), rank(src), &format!("∂_{src}"))?,
                None => IntMatrix::zeros(rank(src - 1), rank(src)),
            };
            diffs.push(mat);
        }
        if let Some(&k) = given.keys().find(|&&k| k <= m || k > mm) {
            return Err(parse_err(format!("differentials: ∂_{k} leaves the degree range")));
        }
        return CochainComplex::from_parts(lo, co_ranks, diffs);
    }
    if let Some(&k) = given.keys().find(|&&k| k < m || k >= mm) {
        return Err(parse_err(format!("differentials: d^{k} leaves the degree range")));
    }
    let mut diffs = Vec::new();
    for l in m..mm {
        let mat = match given.get(&l) {
            Some(x) => matrix_from_value(x, rank(l + 1), rank(l), &format!("d^{l}"))?,
            None => IntMatrix::zeros(rank(l + 1), rank(l)),
        };
        diffs.push(mat);
    }
    CochainComplex::from_parts(m, ranks, diffs)
}

pub fn complex_from_value(v: &Value) -> Result<CochainComplex> {
    let c = complex_from_value_unchecked(v)?;
    c.ensure_valid()?;
    Ok(c)
}

pub fn complex_to_value(c: &CochainComplex) -> Value {
    let Some((m, mm)) = c.degrees() else {
        return json!({"degrees": [], "ranks": {}, "differentials": {}});
    };
    let ranks: Map<String, Value> = (m..=mm).map(|l| (l.to_string(), Value::from(c.rank(l)))).collect();
    let diffs: Map<String, Value> = (m..mm).map(|l| (l.to_string(), matrix_to_value(&c.d(l)))).collect();
    json!({"degrees": [m, mm], "ranks": ranks, "differentials": diffs})
}

fn subgroup_from_value(v: &Value, ambient: usize, what: &str) -> Result<Subgroup> {
    match v {
        Value::String(s) if s == "all" => Ok(Subgroup::full(ambient)),
        Value::Array(cols) => {
            let mut gens = Vec::with_capacity(cols.len());
            for (i, c) in cols.iter().enumerate() {
                let c = c.as_array().ok_or_else(|| parse_err(format!("{what}: generator {i} is not a list")))?;
                if c.len() != ambient {
                    return Err(parse_err(format!("{what}: generator {i} has length {}, expected {ambient}", c.len())));
                }
                gens.push(c.iter().map(|x| as_int(x, what)).collect::<Result<Vec<_>>>()?);
            }
            Ok(Subgroup::from_generators(ambient, gens))
        }
        _ => Err(parse_err(format!("{what}: expected \"all\" or a list of generator columns"))),
    }
}

fn subgroup_to_value(s: &Subgroup) -> Value {
    if s.is_full() && s.ambient() > 0 {
        return Value::String("all".into());
    }
    Value::Array(s.basis().iter().map(|b| Value::Array(b.iter().map(int_to_json).collect())).collect())
}

/// Parses `{"steps": {...}}` (or the steps object itself) over `base`.
pub fn filtration_from_value(base: Arc<CochainComplex>, v: &Value) -> Result<FilteredComplex> {
    let obj = v.as_object().ok_or_else(|| parse_err("filtration: expected an object"))?;
    let steps_obj = match obj.get("steps") {
        Some(Value::Object(s)) => s,
        Some(_) => return Err(parse_err("filtration: steps must be an object keyed by p")),
        None => obj,
    };
    let mut by_p: BTreeMap<i32, &Map<String, Value>> = BTreeMap::new();
    for (k, s) in steps_obj {
        let p = key_i32(k, "filtration steps")?;
        let s = s.as_object().ok_or_else(|| parse_err(format!("step {p}: expected an object keyed by degree")))?;
        by_p.insert(p, s);
    }
    let Some((&start, _)) = by_p.first_key_value() else {
        return FilteredComplex::trivial(base, 0);
    };
    let last = *by_p.keys().last().unwrap();
    if (last - start + 1) as usize != by_p.len() {
        return Err(parse_err("filtration: step keys must be consecutive"));
    }
    let degrees: Vec<i32> = base.degree_range().collect();
    let mut steps = Vec::with_capacity(by_p.len());
    for (p, s) in &by_p {
        for k in s.keys() {
            let l = key_i32(k, &format!("step {p}"))?;
            if !degrees.contains(&l) {
                return Err(parse_err(format!("step {p}: degree {l} is outside the complex")));
            }
        }
        let step = degrees
            .iter()
            .map(|&l| match s.get(&l.to_string()) {
                Some(x) => subgroup_from_value(x, base.rank(l), &format!("F^{p} in degree {l}")),
                None => Ok(Subgroup::zero(base.rank(l))),
            })
            .collect::<Result<Vec<_>>>()?;
        steps.push(step);
    }
    FilteredComplex::new(base, start, steps)
}

/// Steps over the filtration type; empty for the zero complex.
pub fn filtration_to_value(f: &FilteredComplex) -> Value {
    let mut steps = Map::new();
    if f.filtration_type().is_some() {
        for p in f.window() {
            let mut s = Map::new();
            for l in f.base().degree_range() {
                let g = f.at(p, l);
                if !g.is_zero() {
                    s.insert(l.to_string(), subgroup_to_value(&g));
                }
            }
            steps.insert(p.to_string(), Value::Object(s));
        }
    }
    let ty = match f.filtration_type() {
        Some((a, b)) => json!([a, b]),
        None => Value::Null,
    };
    json!({"type": ty, "steps": steps})
}

/// A complex with named filtrations, in file order.
#[derive(Clone, Debug)]
pub struct FilteredDocument {
    pub complex: Arc<CochainComplex>,
    pub filtrations: Vec<(String, FilteredComplex)>,
}

impl FilteredDocument {
    /// Accepts either a filtered document or a bare complex.
    pub fn from_value(v: &Value) -> Result<Self> {
        let (complex_v, filtrations_v) = match v.get("complex") {
            Some(c) => (c, v.get("filtrations")),
            None => (v, None),
        };
        let complex = Arc::new(complex_from_value(complex_v)?);
        let mut filtrations = Vec::new();
        match filtrations_v {
            None | Some(Value::Null) => {}
            Some(Value::Object(map)) => {
                for (name, f) in map {
                    let f = filtration_from_value(complex.clone(), f)
                        .map_err(|e| parse_err(format!("filtration {name}: {e}")))?;
                    filtrations.push((name.clone(), f));
                }
            }
            Some(_) => return Err(parse_err("filtrations: expected an object keyed by name")),
        }
        Ok(FilteredDocument { complex, filtrations })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_value(&serde_json::from_str(text)?)
    }

    /// The named filtration, or the first one when `name` is `None`.
    pub fn filtration(&self, name: Option<&str>) -> Result<&FilteredComplex> {
        match name {
            Some(n) => self
                .filtrations
                .iter()
                .find(|(k, _)| k == n)
                .map(|(_, f)| f)
                .ok_or_else(|| parse_err(format!("no filtration named {n:?}"))),
            None => self
                .filtrations
                .first()
                .map(|(_, f)| f)
                .ok_or_else(|| parse_err("the document has no filtration")),
        }
    }

    pub fn to_value(&self) -> Value {
        let fs: Map<String, Value> = self
            .filtrations
            .iter()
            .map(|(n, f)| (n.clone(), filtration_to_value(f)))
            .collect();
        json!({"complex": complex_to_value(&self.complex), "filtrations": fs})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbelianGroup;

    #[test]
    fn complex_round_trip() {
        let v = json!({"degrees": [0, 1], "ranks": {"0": 1, "1": 1}, "differentials": {"0": [[2]]}});
        let c = complex_from_value(&v).unwrap();
        assert_eq!(c.cohomology(1).unwrap(), AbelianGroup::cyclic(2));
        assert_eq!(complex_from_value(&complex_to_value(&c)).unwrap(), c);
    }

    #[test]
    fn chain_grading_negates() {
        let v = json!({"grading": "chain", "degrees": [0, 1], "ranks": [2, 1], "differentials": {"1": [[-1], [1]]}});
        let c = complex_from_value(&v).unwrap();
        assert_eq!(c.degrees(), Some((-1, 0)));
        assert_eq!(c.cohomology(0).unwrap(), AbelianGroup::free(1));
    }

    #[test]
    fn broken_square_is_localized() {
        let v = json!({"degrees": [0, 2], "ranks": [1, 1, 1], "differentials": {"0": [[1]], "1": [[1]]}});
        let c = complex_from_value_unchecked(&v).unwrap();
        let report = c.validate();
        assert!(!report.valid);
        assert_eq!(report.violations[0].degree, 0);
        assert!(complex_from_value(&v).is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(complex_from_value(&json!({"degrees": [1, 0], "ranks": {}})).is_err());
        assert!(complex_from_value(&json!({"degrees": [0, 0], "ranks": {"3": 1}})).is_err());
        let ragged = json!({"degrees": [0, 1], "ranks": [2, 2], "differentials": {"0": [[1, 0], [1]]}});
        assert!(complex_from_value(&ragged).is_err());
    }

    #[test]
    fn filtered_document_round_trip() {
        let text = r#"{"complex": {"degrees": [0, 1], "ranks": {"0": 1, "1": 1}, "differentials": {"0": [[2]]}},
                       "filtrations": {"F": {"steps": {"0": {"0": "all", "1": "all"}, "1": {"1": "all"}}}}}"#;
        let doc = FilteredDocument::parse(text).unwrap();
        let f = doc.filtration(Some("F")).unwrap();
        assert_eq!(*f, FilteredComplex::bete(doc.complex.clone()).unwrap());
        let again = FilteredDocument::from_value(&doc.to_value()).unwrap();
        assert_eq!(again.filtration(None).unwrap(), f);
        assert!(doc.filtration(Some("P")).is_err());
    }

    #[test]
    fn gaps_and_bad_steps_rejected() {
        let c = json!({"degrees": [0, 0], "ranks": [1]});
        let gap = json!({"complex": c, "filtrations": {"F": {"steps": {"0": {"0": "all"}, "2": {}}}}});
        assert!(FilteredDocument::from_value(&gap).is_err());
        let unstable = json!({"complex": {"degrees": [0, 1], "ranks": [1, 1], "differentials": {"0": [[1]]}},
                              "filtrations": {"F": {"steps": {"1": {"0": "all"}}}}});
        assert!(FilteredDocument::from_value(&unstable).is_err());
    }
}
