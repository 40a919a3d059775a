//! Simplicial inputs.
//!
//! Complexes are text: one simplex per line as whitespace-separated vertex
//! labels, `#` starts a comment, faces are added automatically.
//!
//! Flags are JSON, listing `Y_{-1}, Y_{-2}, ...` (`Y_0` is the whole complex);
//! each step is a list of simplices, as strings of labels, whose face closure
//! is taken: `{"steps": [["a", "b c"], ["a"]]}`.
//!
//! Sheaves are JSON stalk/restriction tables over a default:
//! ```json
//! {"default": "constant", "stalks": {"a b": 2},
//!  "restrictions": [{"face": "a", "coface": "a b", "matrix": [[1], [0]]}]}
//! ```
//! A missing restriction is the identity between equal stalks when the
//! default is constant, and zero when either stalk vanishes.
//!
//! Maps are JSON vertex assignments: `{"vertex_map": {"x0": "a", ...}}`.

use std::collections::HashMap;

use serde_json::Value;

use super::json::matrix_from_value;
use crate::error::{Error, Result};
use crate::flags::{CellularSheaf, ClosedSubcomplexFlag, SimplexId, SimplicialComplex, SimplicialMap};
use crate::linalg::IntMatrix;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let labels: Vec<&str> = line.split_whitespace().collect();
        if !labels.is_empty() {
            facets.push(labels);
        }
    }
    SimplicialComplex::from_labeled(&facets)
}

/// Facets, one per line, in a stable order.
pub fn write_complex(x: &SimplicialComplex) -> String {
    let mut out = String::new();
    let dims = x.dim().map_or(0, |d| d + 1);
    for k in 0..dims {
        for i in 0..x.count(k) {
            let id = (k, i);
            let is_facet = (0..x.count(k + 1)).all(|j| {
                let s = x.simplex((k + 1, j));
                !x.simplex(id).iter().all(|v| s.contains(v))
            });
            if is_facet {
                out.push_str(&x.describe(id));
                out.push('\n');
            }
        }
    }
    out
}

fn simplex_id(x: &SimplicialComplex, s: &str) -> Result<SimplexId> {
    let labels: Vec<&str> = s.split_whitespace().collect();
    x.id_of_labels(&labels)
        .ok_or_else(|| parse_err(format!("{s:?} is not a simplex of the complex")))
}

pub fn flag_from_value(x: &SimplicialComplex, v: &Value) -> Result<ClosedSubcomplexFlag> {
    let steps = v
        .get("steps")
        .unwrap_or(v)
        .as_array()
        .ok_or_else(|| parse_err("flag: expected a list of steps"))?;
    let mut lower = Vec::with_capacity(steps.len());
    for (k, step) in steps.iter().enumerate() {
        let list = step
            .as_array()
            .ok_or_else(|| parse_err(format!("flag step {}: expected a list of simplices", k + 1)))?;
        let ids = list
            .iter()
            .map(|s| s.as_str().ok_or_else(|| parse_err("flag: simplices are strings of labels")).and_then(|s| simplex_id(x, s)))
            .collect::<Result<Vec<_>>>()?;
        lower.push(ids);
    }
    ClosedSubcomplexFlag::from_closures(x, &lower)
}

pub fn flag_to_value(x: &SimplicialComplex, flag: &ClosedSubcomplexFlag) -> Value {
    let steps: Vec<Value> = flag.steps()[1..]
        .iter()
        .map(|s| Value::Array(s.ids().map(|id| Value::String(x.describe(id))).collect()))
        .collect();
    serde_json::json!({ "steps": steps })
}

pub fn sheaf_from_value(x: &SimplicialComplex, v: &Value) -> Result<CellularSheaf> {
    let default = match v.get("default").and_then(Value::as_str).unwrap_or("constant") {
        "constant" => 1,
        "zero" => 0,
        other => return Err(parse_err(format!("sheaf: unknown default {other:?}"))),
    };
    let mut stalks: HashMap<SimplexId, usize> = x.ids().map(|id| (id, default)).collect();
    if let Some(obj) = v.get("stalks") {
        let obj = obj.as_object().ok_or_else(|| parse_err("sheaf: stalks must be an object"))?;
        for (s, r) in obj {
            let id = simplex_id(x, s)?;
            let r = r.as_u64().ok_or_else(|| parse_err(format!("sheaf: bad stalk rank for {s:?}")))?;
            stalks.insert(id, r as usize);
        }
    }
    let mut given: HashMap<(SimplexId, SimplexId), IntMatrix> = HashMap::new();
    if let Some(list) = v.get("restrictions") {
        let list = list.as_array().ok_or_else(|| parse_err("sheaf: restrictions must be a list"))?;
        for entry in list {
            let get = |k: &str| {
                entry
                    .get(k)
                    .and_then(Value::as_str)
                    .ok_or_else(|| parse_err(format!("sheaf restriction: missing {k}")))
            };
            let face = simplex_id(x, get("face")?)?;
            let coface = simplex_id(x, get("coface")?)?;
            let m = entry.get("matrix").ok_or_else(|| parse_err("sheaf restriction: missing matrix"))?;
            let m = matrix_from_value(m, stalks[&coface], stalks[&face], "sheaf restriction")?;
            given.insert((face, coface), m);
        }
    }
    let mut restrictions = HashMap::new();
    for id in x.ids() {
        for (face, _) in x.boundary_faces(id) {
            let key = (face, id);
            let (rows, cols) = (stalks[&id], stalks[&face]);
            let m = match given.remove(&key) {
                Some(m) => m,
                None if rows == 0 || cols == 0 => IntMatrix::zeros(rows, cols),
                None if default == 1 && rows == cols => IntMatrix::identity(rows),
                None => {
                    return Err(Error::Sheaf(format!(
                        "no restriction given for {} -> {}",
                        x.describe(face),
                        x.describe(id)
                    )))
                }
            };
            restrictions.insert(key, m);
        }
    }
    if let Some(((f, c), _)) = given.into_iter().next() {
        return Err(Error::Sheaf(format!(
            "{} -> {} is not a codimension-one face relation",
            x.describe(f),
            x.describe(c)
        )));
    }
    CellularSheaf::new(x, stalks, restrictions)
}

pub fn map_from_value(source: SimplicialComplex, target: SimplicialComplex, v: &Value) -> Result<SimplicialMap> {
    let obj = v
        .get("vertex_map")
        .unwrap_or(v)
        .as_object()
        .ok_or_else(|| parse_err("map: expected an object of vertex assignments"))?;
    let pairs = obj
        .iter()
        .map(|(a, b)| {
            b.as_str()
                .map(|b| (a.clone(), b.to_string()))
                .ok_or_else(|| parse_err(format!("map: target of {a:?} must be a label")))
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::from_labels(source, target, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::sheaf_cochains;
    use crate::linalg::AbelianGroup;
    use serde_json::json;

    #[test]
    fn parse_and_write() {
        let x = parse_complex("# circle\na b\nb c  # edge\n\nc a\n").unwrap();
        assert_eq!((x.count(0), x.count(1)), (3, 3));
        let again = parse_complex(&write_complex(&x)).unwrap();
        assert_eq!(again.count(1), 3);
        assert!(parse_complex("a a").is_err());
    }

    #[test]
    fn flags_from_json() {
        let x = parse_complex("a b\nb c\nc a").unwrap();
        let f = flag_from_value(&x, &json!({"steps": [["a"]]})).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.y(-1).unwrap().len(), 1);
        assert!(flag_from_value(&x, &json!({"steps": [["a"], ["b"]]})).is_err());
        assert!(flag_from_value(&x, &json!({"steps": [["z"]]})).is_err());
        let back = flag_from_value(&x, &flag_to_value(&x, &f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn sheaves_from_json() {
        let x = parse_complex("a b\nb c\nc a").unwrap();
        let s = sheaf_from_value(&x, &json!({})).unwrap();
        assert_eq!(s, CellularSheaf::constant(&x));
        // twisted: one restriction is -1, giving the orientation sheaf
        let t = sheaf_from_value(&x, &json!({"restrictions": [{"face": "a", "coface": "c a", "matrix": [[-1]]}]})).unwrap();
        let c = sheaf_cochains(&x, &t).unwrap();
        assert!(c.cohomology(0).unwrap().is_trivial());
        assert_eq!(c.cohomology(1).unwrap(), AbelianGroup::cyclic(2));
        let zero = sheaf_from_value(&x, &json!({"default": "zero"})).unwrap();
        assert!(sheaf_cochains(&x, &zero).unwrap().is_empty());
        assert!(sheaf_from_value(&x, &json!({"stalks": {"a": 2}})).is_err());
    }

    #[test]
    fn maps_from_json() {
        let x = parse_complex("a b\nb c\nc a").unwrap();
        let p = parse_complex("p").unwrap();
        let f = map_from_value(x.clone(), p, &json!({"vertex_map": {"a": "p", "b": "p", "c": "p"}})).unwrap();
        assert_eq!(f.image((1, 0)), Some((0, 0)));
        let q = parse_complex("p\nq").unwrap();
        assert!(map_from_value(x, q, &json!({"a": "p", "b": "q", "c": "p"})).is_err());
    }
}
