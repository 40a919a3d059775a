//! Scenario bundles: a directory holding `scenario.json` and the files it
//! names. Every document field takes either a path relative to the bundle or
//! an inline value.
//!
//! ```json
//! {
//!   "name": "affine-curve",
//!   "asserted_general": true,
//!   "simplicial": "space.txt",
//!   "sheaf": "sheaf.json",
//!   "flag": {"steps": [["0"]]},
//!   "filtrations": {"P": {"steps": {"-1": {"0": "all", "1": "all"}}}},
//!   "checks": ["sta", "pdec"],
//!   "expected": "expected.json"
//! }
//! ```
//! Instead of `simplicial`, `complex` names a filtered document. A `map`
//! entry `{"target": ..., "vertex_map": ..., "flag": ...}` pulls a flag on the
//! target back to the simplicial space. The flag filtration, when present,
//! is available as `F`.
//!
//! Expected results:
//! ```json
//! {"checks": {"pdec": true},
//!  "cohomology": {"1": "Z"},
//!  "steps": [{"filtration": "P", "degree": 0, "p": 0, "is": "zero"},
//!            {"filtration": "F", "decale": true, "degree": 1, "p": -1, "group": "Z"}]}
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::json::{filtration_from_value, FilteredDocument};
use super::report::sha256_of_all;
use super::simplicial_text::{flag_from_value, map_from_value, parse_complex, sheaf_from_value};
use crate::checks::{
    check_cellular_vanishing, check_e1_differential_is_triple_map, check_lmlu, check_p_equals_decf, check_sta,
    CellularMode,
};
use crate::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::filtration::{BifilteredComplex, FilteredComplex};
use crate::flags::{
    flag_filtration_f, kernel_filtration, preimage_flag, pushforward_flag_comparison, CellularSheaf,
    ClosedSubcomplexFlag, FlagFiltration, SimplicialMap,
};
use crate::linalg::Coefficients;
use crate::spectral::check_dec_reindex;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Everything a check may need.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub complex: Arc<CochainComplex>,
    pub filtrations: Vec<(String, FilteredComplex)>,
    pub flag: Option<FlagFiltration>,
    pub leray: Option<(SimplicialMap, CellularSheaf, ClosedSubcomplexFlag)>,
    pub input_sha256: String,
}

impl Workspace {
    pub fn from_document(doc: FilteredDocument, input_sha256: String) -> Self {
        Workspace {
            complex: doc.complex,
            filtrations: doc.filtrations,
            flag: None,
            leray: None,
            input_sha256,
        }
    }

    pub fn from_flag(ff: FlagFiltration, input_sha256: String) -> Self {
        Workspace {
            complex: ff.filtration.base_arc().clone(),
            filtrations: vec![("F".into(), ff.filtration.clone())],
            flag: Some(ff),
            leray: None,
            input_sha256,
        }
    }

    /// `name`, falling back to the first filtration when `name` is `F` and
    /// nothing carries that name.
    pub fn filtration(&self, name: &str) -> Result<&FilteredComplex> {
        if let Some((_, f)) = self.filtrations.iter().find(|(n, _)| n == name) {
            return Ok(f);
        }
        if name == "F" {
            if let Some((_, f)) = self.filtrations.first() {
                return Ok(f);
            }
        }
        Err(parse_err(format!("no filtration named {name:?}")))
    }

    fn is_flag_filtration(&self, name: &str) -> bool {
        self.flag.is_some() && self.filtrations.first().is_some_and(|(n, _)| n == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Validate,
    Cohomology,
    Sta,
    Pdec,
    Lmlu,
    Cellular,
    DecReindex,
    E1Triples,
    KerFormula,
    Leray,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Validate => "validate",
            CheckKind::Cohomology => "cohomology",
            CheckKind::Sta => "sta",
            CheckKind::Pdec => "pdec",
            CheckKind::Lmlu => "lmlu",
            CheckKind::Cellular => "cellular",
            CheckKind::DecReindex => "dec-reindex",
            CheckKind::E1Triples => "e1-triples",
            CheckKind::KerFormula => "ker-formula",
            CheckKind::Leray => "leray",
        }
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "validate" => CheckKind::Validate,
            "cohomology" => CheckKind::Cohomology,
            "sta" => CheckKind::Sta,
            "pdec" => CheckKind::Pdec,
            "lmlu" => CheckKind::Lmlu,
            "cellular" => CheckKind::Cellular,
            "dec-reindex" => CheckKind::DecReindex,
            "e1-triples" => CheckKind::E1Triples,
            "ker-formula" => CheckKind::KerFormula,
            "leray" => CheckKind::Leray,
            other => return Err(parse_err(format!("unknown check {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckRequest {
    pub kind: CheckKind,
    /// Filtration playing the role of P.
    pub p: String,
    /// Filtration playing the role of F.
    pub f: String,
    pub mode: CellularMode,
    pub shift: Option<i32>,
}

impl CheckRequest {
    pub fn new(kind: CheckKind) -> Self {
        CheckRequest { kind, p: "P".into(), f: "F".into(), mode: CellularMode::Left, shift: None }
    }

    fn from_value(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Ok(Self::new(s.parse()?)),
            Value::Object(o) => {
                let kind = o
                    .get("check")
                    .and_then(Value::as_str)
                    .ok_or_else(|| parse_err("check entries need a \"check\" name"))?
                    .parse()?;
                let mut r = Self::new(kind);
                if let Some(p) = o.get("p").and_then(Value::as_str) {
                    r.p = p.into();
                }
                if let Some(f) = o.get("f").or_else(|| o.get("filtration")).and_then(Value::as_str) {
                    r.f = f.into();
                }
                if let Some(m) = o.get("mode").and_then(Value::as_str) {
                    r.mode = m.parse()?;
                }
                if let Some(s) = o.get("shift") {
                    r.shift = Some(s.as_i64().ok_or_else(|| parse_err("shift must be an integer"))? as i32);
                }
                Ok(r)
            }
            _ => Err(parse_err("checks are names or objects")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub coeffs: Coefficients,
    pub max_page: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub report: Value,
}

fn outcome<T: Serialize>(kind: CheckKind, pass: bool, report: &T) -> Result<CheckOutcome> {
    Ok(CheckOutcome {
        check: kind.name().into(),
        pass,
        error: None,
        report: serde_json::to_value(report)?,
    })
}

fn cohomology_value(c: &CochainComplex, coeffs: Coefficients) -> Result<Value> {
    let mut m = Map::new();
    for l in c.degree_range() {
        m.insert(l.to_string(), Value::String(coeffs.describe(c.cohomology(l)?)));
    }
    Ok(Value::Object(m))
}

/// Runs one check. Inputs that do not fit the check are errors; a failed
/// precondition of `pdec` is a failed check carrying the (sta) report.
pub fn run_check(ws: &Workspace, req: &CheckRequest, opts: RunOptions) -> Result<CheckOutcome> {
    let coeffs = opts.coeffs;
    match req.kind {
        CheckKind::Validate => {
            let r = ws.complex.validate();
            outcome(req.kind, r.valid, &r)
        }
        CheckKind::Cohomology => {
            let v = cohomology_value(&ws.complex, coeffs)?;
            outcome(req.kind, true, &json!({ "degrees": v }))
        }
        CheckKind::Sta => {
            let bf = BifilteredComplex::new(ws.filtration(&req.p)?.clone(), ws.filtration(&req.f)?.clone())?;
            let r = check_sta(&bf, coeffs)?;
            outcome(req.kind, r.pass, &r)
        }
        CheckKind::Pdec => {
            let bf = BifilteredComplex::new(ws.filtration(&req.p)?.clone(), ws.filtration(&req.f)?.clone())?;
            match check_p_equals_decf(&bf, coeffs) {
                Ok(r) => outcome(req.kind, r.pass, &r),
                Err(Error::Precondition(msg)) => {
                    let sta = check_sta(&bf, coeffs)?;
                    Ok(CheckOutcome {
                        check: req.kind.name().into(),
                        pass: false,
                        error: Some(msg),
                        report: json!({ "sta": sta }),
                    })
                }
                Err(e) => Err(e),
            }
        }
        CheckKind::Lmlu => {
            let r = check_lmlu(ws.filtration(&req.f)?, coeffs)?;
            outcome(req.kind, r.pass, &r)
        }
        CheckKind::Cellular => {
            let default_shift = match (req.mode, &ws.flag) {
                (CellularMode::Left, Some(ff)) if ws.is_flag_filtration(&req.f) => ff.n() as i32,
                _ => 0,
            };
            let shift = req.shift.unwrap_or(default_shift);
            let r = check_cellular_vanishing(ws.filtration(&req.f)?, req.mode, shift, coeffs)?;
            outcome(req.kind, r.pass, &json!({ "shift": shift, "vanishing": r }))
        }
        CheckKind::DecReindex => {
            let r = check_dec_reindex(ws.filtration(&req.f)?, opts.max_page.map(|m| 1..=m.max(1)), coeffs)?;
            outcome(req.kind, r.pass, &r)
        }
        CheckKind::E1Triples => {
            let ff = ws
                .flag
                .as_ref()
                .ok_or_else(|| Error::Precondition("e1-triples needs a flag filtration input".into()))?;
            let r = check_e1_differential_is_triple_map(ff)?;
            outcome(req.kind, r.pass, &r)
        }
        CheckKind::KerFormula => {
            let ff = ws
                .flag
                .as_ref()
                .ok_or_else(|| Error::Precondition("ker-formula needs a flag filtration input".into()))?;
            let r = ker_formula_report(ff, coeffs)?;
            let pass = r["mismatches"].as_array().is_some_and(|m| m.is_empty());
            outcome(req.kind, pass, &r)
        }
        CheckKind::Leray => {
            let (map, sheaf, flag) = ws
                .leray
                .as_ref()
                .ok_or_else(|| Error::Precondition("leray needs a map and a flag on its target".into()))?;
            let r = pushforward_flag_comparison(map, sheaf, flag, coeffs)?;
            outcome(req.kind, r.pass, &r)
        }
    }
}

/// Abutment of a flag filtration against `Ker(H^l(X) → H^l(Y_{p-1}))`.
pub fn ker_formula_report(ff: &FlagFiltration, coeffs: Coefficients) -> Result<Value> {
    let n = ff.n() as i32;
    let mut mismatches = Vec::new();
    let mut steps = Vec::new();
    for l in ff.filtration.base().degree_range() {
        let abut = ff.filtration.induced_on_cohomology(l)?;
        let kernel = kernel_filtration(&ff.complex, &ff.sheaf, &ff.flag, l)?;
        for p in -n - 1..=1 {
            steps.push(json!({"degree": l, "p": p, "group": coeffs.describe(abut.step_group(p)?)}));
            if !abut.step_equals(p, &kernel, 0, coeffs) {
                mismatches.push(json!([l, p]));
            }
        }
    }
    Ok(json!({"steps": steps, "mismatches": mismatches}))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationOutcome {
    pub what: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioOutcome {
    pub name: String,
    pub asserted_general: Option<bool>,
    pub input_sha256: String,
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
    pub expectations: Vec<ExpectationOutcome>,
}

/// A parsed bundle, ready to run.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub asserted_general: Option<bool>,
    pub workspace: Option<Workspace>,
    pub checks: Vec<CheckRequest>,
    pub expected: Option<Value>,
}

struct Loader {
    dir: PathBuf,
    inputs: Vec<Vec<u8>>,
}

impl Loader {
    fn text(&mut self, v: &Value, what: &str) -> Result<Option<String>> {
        match v {
            Value::String(path) => {
                let full = self.dir.join(path);
                let bytes = std::fs::read(&full)
                    .map_err(|e| parse_err(format!("{what}: cannot read {}: {e}", full.display())))?;
                self.inputs.push(bytes.clone());
                Ok(Some(String::from_utf8(bytes).map_err(|_| parse_err(format!("{what}: not UTF-8")))?))
            }
            _ => Ok(None),
        }
    }

    /// Inline JSON, or the JSON file a string names.
    fn json(&mut self, v: &Value, what: &str) -> Result<Value> {
        match self.text(v, what)? {
            Some(t) => serde_json::from_str(&t).map_err(|e| parse_err(format!("{what}: {e}"))),
            None => Ok(v.clone()),
        }
    }
}

impl Scenario {
    /// Loads `path/scenario.json`, or `path` itself when it is a file.
    pub fn load(path: &Path) -> Result<Self> {
        let file = if path.is_dir() { path.join("scenario.json") } else { path.to_path_buf() };
        let bytes = std::fs::read(&file).map_err(|e| parse_err(format!("cannot read {}: {e}", file.display())))?;
        let v: Value = serde_json::from_slice(&bytes).map_err(|e| parse_err(format!("{}: {e}", file.display())))?;
        let dir = file.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut loader = Loader { dir, inputs: vec![bytes] };
        Self::from_value(&v, &mut loader)
    }

    /// Inline scenario; relative paths resolve against `dir`.
    pub fn from_json(v: &Value, dir: &Path) -> Result<Self> {
        let mut loader = Loader { dir: dir.to_path_buf(), inputs: vec![serde_json::to_vec(v)?] };
        Self::from_value(v, &mut loader)
    }

    fn from_value(v: &Value, loader: &mut Loader) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| parse_err("scenario: expected an object"))?;
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("scenario").to_string();
        let asserted_general = obj.get("asserted_general").and_then(Value::as_bool);
        let checks = match obj.get("checks") {
            None => Vec::new(),
            Some(Value::Array(a)) => a.iter().map(CheckRequest::from_value).collect::<Result<_>>()?,
            Some(_) => return Err(parse_err("scenario: checks must be a list")),
        };
        let mut ws = match (obj.get("complex"), obj.get("simplicial")) {
            (Some(_), Some(_)) => return Err(parse_err("scenario: give either complex or simplicial, not both")),
            (Some(c), None) => {
                let doc = FilteredDocument::from_value(&loader.json(c, "complex")?)?;
                Some(Workspace::from_document(doc, String::new()))
            }
            (None, Some(s)) => Some(Self::simplicial(obj, s, loader)?),
            (None, None) => None,
        };
        if let (Some(ws), Some(extra)) = (ws.as_mut(), obj.get("filtrations")) {
            let extra = loader.json(extra, "filtrations")?;
            let map = extra.as_object().ok_or_else(|| parse_err("filtrations: expected an object keyed by name"))?;
            for (n, f) in map {
                let f = filtration_from_value(ws.complex.clone(), f).map_err(|e| parse_err(format!("filtration {n}: {e}")))?;
                ws.filtrations.push((n.clone(), f));
            }
        }
        let expected = obj.get("expected").map(|e| loader.json(e, "expected")).transpose()?;
        if ws.is_none() && checks.iter().any(|c| c.kind != CheckKind::Validate) {
            return Err(parse_err("scenario: checks need a complex or a simplicial space"));
        }
        let hash = sha256_of_all(loader.inputs.iter().map(Vec::as_slice));
        if let Some(ws) = ws.as_mut() {
            ws.input_sha256 = hash;
        }
        Ok(Scenario { name, asserted_general, workspace: ws, checks, expected })
    }

    fn simplicial(obj: &Map<String, Value>, s: &Value, loader: &mut Loader) -> Result<Workspace> {
        let x = match loader.text(s, "simplicial")? {
            Some(t) => parse_complex(&t)?,
            None => {
                let lines = s
                    .as_array()
                    .ok_or_else(|| parse_err("simplicial: expected a path or a list of simplices"))?
                    .iter()
                    .map(|l| l.as_str().map(str::to_string).ok_or_else(|| parse_err("simplicial: simplices are strings")))
                    .collect::<Result<Vec<_>>>()?;
                parse_complex(&lines.join("\n"))?
            }
        };
        let sheaf = match obj.get("sheaf") {
            Some(v) => sheaf_from_value(&x, &loader.json(v, "sheaf")?)?,
            None => CellularSheaf::constant(&x),
        };
        let (flag, leray) = match (obj.get("flag"), obj.get("map")) {
            (Some(_), Some(_)) => return Err(parse_err("scenario: a map brings its own flag; drop \"flag\"")),
            (Some(f), None) => (flag_from_value(&x, &loader.json(f, "flag")?)?, None),
            (None, Some(m)) => {
                let m = loader.json(m, "map")?;
                let t = m.get("target").ok_or_else(|| parse_err("map: missing target"))?;
                let target = match loader.text(t, "map target")? {
                    Some(t) => parse_complex(&t)?,
                    None => return Err(parse_err("map: target must name a simplicial file")),
                };
                let vm = loader.json(m.get("vertex_map").ok_or_else(|| parse_err("map: missing vertex_map"))?, "vertex_map")?;
                let f = map_from_value(x.clone(), target.clone(), &vm)?;
                let tflag = match m.get("flag") {
                    Some(fv) => flag_from_value(&target, &loader.json(fv, "map flag")?)?,
                    None => ClosedSubcomplexFlag::new(&target, vec![target.full()])?,
                };
                let xflag = preimage_flag(&f, &tflag)?;
                (xflag, Some((f, sheaf.clone(), tflag)))
            }
            (None, None) => (ClosedSubcomplexFlag::new(&x, vec![x.full()])?, None),
        };
        let ff = flag_filtration_f(&x, &sheaf, &flag)?;
        let mut ws = Workspace::from_flag(ff, String::new());
        ws.leray = leray;
        Ok(ws)
    }

    pub fn run(&self, opts: RunOptions) -> Result<ScenarioOutcome> {
        let mut checks = Vec::with_capacity(self.checks.len());
        if let Some(ws) = &self.workspace {
            for req in &self.checks {
                checks.push(run_check(ws, req, opts)?);
            }
        }
        let expectations = match &self.expected {
            Some(e) => self.expectations(e, &checks, opts.coeffs)?,
            None => Vec::new(),
        };
        Ok(ScenarioOutcome {
            name: self.name.clone(),
            asserted_general: self.asserted_general,
            input_sha256: self.workspace.as_ref().map(|w| w.input_sha256.clone()).unwrap_or_default(),
            pass: checks.iter().all(|c| c.pass) && expectations.iter().all(|e| e.pass),
            checks,
            expectations,
        })
    }

    fn expectations(&self, e: &Value, checks: &[CheckOutcome], coeffs: Coefficients) -> Result<Vec<ExpectationOutcome>> {
        let mut out = Vec::new();
        if let Some(map) = e.get("checks").and_then(Value::as_object) {
            for (name, want) in map {
                let actual = checks.iter().find(|c| &c.check == name).map(|c| Value::Bool(c.pass)).unwrap_or(Value::Null);
                out.push(ExpectationOutcome {
                    what: format!("check {name}"),
                    pass: &actual == want,
                    expected: want.clone(),
                    actual,
                });
            }
        }
        let ws = self.workspace.as_ref();
        if let Some(map) = e.get("cohomology").and_then(Value::as_object) {
            let ws = ws.ok_or_else(|| parse_err("expected cohomology without a complex"))?;
            for (l, want) in map {
                let l: i32 = l.parse().map_err(|_| parse_err(format!("expected cohomology: bad degree {l:?}")))?;
                let actual = Value::String(coeffs.describe(ws.complex.cohomology(l)?));
                out.push(ExpectationOutcome { what: format!("H^{l}"), pass: &actual == want, expected: want.clone(), actual });
            }
        }
        if let Some(list) = e.get("steps").and_then(Value::as_array) {
            let ws = ws.ok_or_else(|| parse_err("expected steps without a complex"))?;
            for item in list {
                out.push(step_expectation(ws, item, coeffs)?);
            }
        }
        Ok(out)
    }
}

fn step_expectation(ws: &Workspace, item: &Value, coeffs: Coefficients) -> Result<ExpectationOutcome> {
    let name = item.get("filtration").and_then(Value::as_str).unwrap_or("F");
    let decale = item.get("decale").and_then(Value::as_bool).unwrap_or(false);
    let l = item.get("degree").and_then(Value::as_i64).ok_or_else(|| parse_err("expected step: missing degree"))? as i32;
    let p = item.get("p").and_then(Value::as_i64).ok_or_else(|| parse_err("expected step: missing p"))? as i32;
    let base = ws.filtration(name)?;
    let f = if decale { base.decale() } else { base.clone() };
    let h = f.induced_on_cohomology(l)?;
    let label = format!("{}{}^{p} H^{l}", if decale { "Dec " } else { "" }, name);
    let (expected, actual) = if let Some(is) = item.get("is").and_then(Value::as_str) {
        let lift = coeffs.subgroup(h.lift(p));
        let actual = if lift == coeffs.subgroup(h.cohomology().numerator()) {
            "all"
        } else if lift == coeffs.subgroup(h.cohomology().denominator()) {
            "zero"
        } else {
            "proper"
        };
        (Value::String(is.to_string()), Value::String(actual.into()))
    } else if let Some(g) = item.get("group") {
        (g.clone(), Value::String(coeffs.describe(h.step_group(p)?)))
    } else {
        return Err(parse_err("expected step: give \"is\" or \"group\""));
    };
    Ok(ExpectationOutcome { what: label, pass: expected == actual, expected, actual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scenario_passes() {
        let s = Scenario::from_json(&json!({}), Path::new(".")).unwrap();
        let r = s.run(RunOptions::default()).unwrap();
        assert!(r.pass && r.checks.is_empty());
    }

    #[test]
    fn affine_curve_inline() {
        let v = json!({
            "name": "affine-curve",
            "asserted_general": true,
            "simplicial": ["0 1", "1 2", "0 2"],
            "flag": {"steps": [["0"]]},
            "filtrations": {"P": {"steps": {"-1": {"0": "all", "1": "all"}}}},
            "checks": ["sta", "pdec", "ker-formula", "e1-triples", {"check": "cellular"}],
            "expected": {
                "checks": {"pdec": true},
                "steps": [
                    {"filtration": "P", "degree": 0, "p": -1, "is": "all"},
                    {"filtration": "P", "degree": 0, "p": 0, "is": "zero"},
                    {"filtration": "P", "degree": 1, "p": -1, "is": "all"},
                    {"filtration": "P", "degree": 1, "p": 0, "is": "zero"},
                    {"filtration": "F", "decale": true, "degree": 1, "p": -1, "group": "Z"}
                ]
            }
        });
        let s = Scenario::from_json(&v, Path::new(".")).unwrap();
        let r = s.run(RunOptions::default()).unwrap();
        assert!(r.pass, "{}", serde_json::to_string_pretty(&r).unwrap());
        assert_eq!(r.input_sha256.len(), 64);
    }

    #[test]
    fn broken_complex_is_a_parse_error() {
        let v = json!({"complex": {"degrees": [0, 2], "ranks": [1, 1, 1], "differentials": {"0": [[1]], "1": [[1]]}},
                       "checks": ["validate"]});
        let e = Scenario::from_json(&v, Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("degree 0"), "{e}");
    }

    #[test]
    fn unknown_check_rejected() {
        assert!(Scenario::from_json(&json!({"checks": ["nope"]}), Path::new(".")).is_err());
    }

    #[test]
    fn pdec_refusal_carries_sta_report() {
        let v = json!({"complex": {"complex": {"degrees": [0, 1], "ranks": [1, 1], "differentials": {"0": [[2]]}},
                        "filtrations": {"P": {"steps": {"0": {"0": "all", "1": "all"}, "1": {"1": "all"}}},
                                        "F": {"steps": {"0": {"0": "all", "1": "all"}}}}},
                       "checks": ["pdec"]});
        let s = Scenario::from_json(&v, Path::new(".")).unwrap();
        let r = s.run(RunOptions::default()).unwrap();
        assert!(!r.pass);
        assert!(r.checks[0].error.is_some());
        assert_eq!(r.checks[0].report["sta"]["pass"], false);
    }
}
