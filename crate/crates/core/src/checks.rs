//! Mechanical checks of vanishing conditions and of the comparison between
//! a second filtration and the décalage.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::SubquotientComplex;
use crate::error::{Error, Result};
use crate::filtration::{BifilteredComplex, FilteredComplex};
use crate::flags::{sheaf_cochains, CochainLayout, FlagFiltration, FlagKind, SimplicialComplex, Subcomplex};
use crate::flags::stalk_basis;
use crate::linalg::{is_zero_map, AbelianGroup, Coefficients, IntMatrix, Subgroup, Subquotient};
use crate::spectral::{page, Cell, SpectralSequence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingViolation {
    pub r: i32,
    pub a: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<i32>,
    pub group: AbelianGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub condition: String,
    pub pass: bool,
    pub cells_checked: usize,
    pub violations: Vec<VanishingViolation>,
}

impl VanishingReport {
    fn new(condition: &str, cells_checked: usize, mut violations: Vec<VanishingViolation>) -> Self {
        violations.sort_by_key(|v| (v.a, v.b, v.r));
        VanishingReport {
            condition: condition.to_string(),
            pass: violations.is_empty(),
            cells_checked,
            violations,
        }
    }
}

fn nonzero_cohomology(piece: &SubquotientComplex<'_>, coeffs: Coefficients) -> Result<Vec<(i32, AbelianGroup)>> {
    let mut out = Vec::new();
    for r in piece.base().degree_range() {
        let h = coeffs.group(piece.cohomology(r)?);
        if !h.is_trivial() {
            out.push((r, h));
        }
    }
    Ok(out)
}

/// `H^r(Gr^a_F Gr^b_P) = 0` for all `r ≠ a - b`, with `P` the first and `F`
/// the second filtration of `b`.
pub fn check_sta(bf: &BifilteredComplex, coeffs: Coefficients) -> Result<VanishingReport> {
    bf.base().ensure_valid()?;
    let cells: Vec<(i32, i32)> = bf
        .second()
        .window()
        .flat_map(|a| bf.first().window().map(move |b| (a, b)))
        .collect();
    let violations = cells
        .par_iter()
        .map(|&(a, b)| {
            let piece = bf.bigraded_piece(a, b)?;
            Ok(nonzero_cohomology(&piece, coeffs)?
                .into_iter()
                .filter(|(r, _)| *r != a - b)
                .map(|(r, group)| VanishingViolation { r, a, b: Some(b), group })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(VanishingReport::new("sta", cells.len(), violations))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellularMode {
    /// Closed-subcomplex (F-type) filtrations.
    #[default]
    Left,
    /// Support (G-type) filtrations.
    Right,
}

impl FromStr for CellularMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(CellularMode::Left),
            "right" => Ok(CellularMode::Right),
            _ => Err(Error::Parse(format!("unknown mode {s:?}, expected left or right"))),
        }
    }
}

/// `H^r(Gr^p_F) = 0` for `r ≠ p + shift`. Skeletal filtrations of cochains
/// use shift 0; a flag filtration of length `n` uses `n` in left mode.
pub fn check_cellular_vanishing(
    f: &FilteredComplex,
    mode: CellularMode,
    shift: i32,
    coeffs: Coefficients,
) -> Result<VanishingReport> {
    let ps: Vec<i32> = f.window().collect();
    let violations = ps
        .par_iter()
        .map(|&p| {
            let piece = f.graded_piece(p)?;
            Ok(nonzero_cohomology(&piece, coeffs)?
                .into_iter()
                .filter(|(r, _)| *r != p + shift)
                .map(|(r, group)| VanishingViolation { r, a: p, b: None, group })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let name = match mode {
        CellularMode::Left => "cellular-left",
        CellularMode::Right => "cellular-right",
    };
    Ok(VanishingReport::new(name, ps.len(), violations))
}

#[derive(Clone, Debug, Serialize)]
pub struct CellMismatch {
    pub r: usize,
    pub p: i32,
    pub q: i32,
    pub first: AbelianGroup,
    pub second: AbelianGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct PDecReport {
    pub pass: bool,
    pub steps_compared: usize,
    /// `(l, p)` where `P^p H^l ≠ Dec(F)^p H^l`.
    pub abutment_mismatches: Vec<(i32, i32)>,
    pub pages: usize,
    pub cells_compared: usize,
    /// `first` is the P side, `second` the Dec(F) side.
    pub page_mismatches: Vec<CellMismatch>,
    /// Cells where kernel or image of `d_1` differ.
    pub d1_mismatches: Vec<Cell>,
}

/// Compares `P` with `Dec(F)`: induced filtrations on cohomology as
/// subgroups, and spectral sequence pages cell by cell from `E_1` until both
/// have stabilized. Refuses unless (sta) holds.
pub fn check_p_equals_decf(bf: &BifilteredComplex, coeffs: Coefficients) -> Result<PDecReport> {
    let sta = check_sta(bf, coeffs)?;
    if !sta.pass {
        return Err(Error::Precondition(format!(
            "(sta) fails with {} violation(s); run the sta check for details",
            sta.violations.len()
        )));
    }
    let p = bf.first();
    let dec = bf.second().decale();
    let base = p.base();

    let lo = p.window().start().min(dec.window().start()) - 1;
    let hi = p.window().end().max(dec.window().end()) + 1;
    let mut abutment_mismatches = Vec::new();
    let mut steps_compared = 0;
    for l in base.degree_range() {
        let hp = p.induced_on_cohomology(l)?;
        let hd = dec.induced_on_cohomology(l)?;
        for s in lo..=hi {
            steps_compared += 1;
            if !hp.step_equals(s, &hd, 0, coeffs) {
                abutment_mismatches.push((l, s));
            }
        }
    }

    let ssp = SpectralSequence::compute(p, 1)?;
    let ssd = SpectralSequence::compute(&dec, 1)?;
    let last = ssp.stabilization_page().max(ssd.stabilization_page());
    let mut page_mismatches = Vec::new();
    let mut d1_mismatches = Vec::new();
    let mut cells_compared = 0;
    for r in 1..=last {
        let (a, b) = (ssp.page(r), ssd.page(r));
        let cells: BTreeSet<Cell> = a.cells.keys().chain(b.cells.keys()).copied().collect();
        for &(cp, cq) in &cells {
            cells_compared += 1;
            let (ga, gb) = (coeffs.group(a.group(cp, cq)), coeffs.group(b.group(cp, cq)));
            if ga != gb {
                page_mismatches.push(CellMismatch { r, p: cp, q: cq, first: ga, second: gb });
            }
            if r == 1 {
                let same_kernel = coeffs.group(a.kernel_at(cp, cq)?) == coeffs.group(b.kernel_at(cp, cq)?);
                let same_image = coeffs.group(a.image_at(cp, cq)?) == coeffs.group(b.image_at(cp, cq)?);
                if !(same_kernel && same_image) {
                    d1_mismatches.push((cp, cq));
                }
            }
        }
    }
    Ok(PDecReport {
        pass: abutment_mismatches.is_empty() && page_mismatches.is_empty() && d1_mismatches.is_empty(),
        steps_compared,
        abutment_mismatches,
        pages: last,
        cells_compared,
        page_mismatches,
        d1_mismatches,
    })
}

/// (sta) for `(L, Dec(F), F)`.
pub fn check_lmlu(f: &FilteredComplex, coeffs: Coefficients) -> Result<VanishingReport> {
    let bf = BifilteredComplex::new(f.decale(), f.clone())?;
    check_sta(&bf, coeffs)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelativeMismatch {
    pub p: i32,
    pub q: i32,
    pub spectral: AbelianGroup,
    pub relative: AbelianGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub pass: bool,
    pub flag_length: usize,
    pub cells_checked: usize,
    pub maps_checked: usize,
    /// `E_1^{p,q}` differs from `H^{p+q}(Y_p, Y_{p-1})`.
    pub e1_mismatches: Vec<RelativeMismatch>,
    /// Restriction from `E_1^{p,q}` to the relative group is not onto.
    pub identification_failures: Vec<Cell>,
    /// `d_1` out of `(p, q)` disagrees with the connecting map.
    pub d1_mismatches: Vec<Cell>,
}

/// `Y_p` as a standalone complex with its sheaf, cochains, and the matrices
/// restricting ambient cochains to it.
struct Stratum {
    complex: SimplicialComplex,
    cochains: crate::complex::CochainComplex,
    relative_top: Vec<Subgroup>,
    restriction: Vec<IntMatrix>,
}

impl Stratum {
    fn new(ff: &FlagFiltration, p: i32) -> Result<Self> {
        let x = &ff.complex;
        let empty = x.empty();
        let y = ff.flag.y(p).unwrap_or(&empty);
        let below = ff.flag.y(p - 1).unwrap_or(&empty);
        let (complex, back) = x.restrict(y);
        let sheaf = ff.sheaf.restrict(&complex, &back);
        let cochains = sheaf_cochains(&complex, &sheaf)?;
        let layout = CochainLayout::new(&complex, &sheaf);
        let in_below = |id: (usize, usize)| below.contains((id.0, back[id.0][id.1]));
        let relative_top = cochains
            .degree_range()
            .map(|l| {
                let k = l as usize;
                Subgroup::coordinate(layout.rank(k), stalk_basis(&complex, &layout, k, |id| !in_below(id)))
            })
            .collect();
        let restriction = ff
            .filtration
            .base()
            .degree_range()
            .map(|l| {
                let k = l as usize;
                let mut m = IntMatrix::zeros(layout.rank(k), ff.layout.rank(k));
                for (i, &j) in back.get(k).into_iter().flatten().enumerate() {
                    for (r, c) in layout.range((k, i)).zip(ff.layout.range((k, j))) {
                        m.set(r, c, BigInt::from(1));
                    }
                }
                m
            })
            .collect();
        Ok(Stratum { complex, cochains, relative_top, restriction })
    }

    fn restriction(&self, l: i32) -> IntMatrix {
        self.restriction
            .get(l as usize)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(0, 0))
    }

    fn relative(&self, l: i32) -> Result<Subquotient> {
        if self.complex.dim().is_none() {
            return Subquotient::new(Subgroup::zero(0), Subgroup::zero(0));
        }
        let q = SubquotientComplex::new(&self.cochains, self.relative_top.clone(), self.cochains.zero_terms())?;
        q.cohomology_presentation(l)
    }
}

fn onto(m: &IntMatrix, target: &Subquotient) -> Result<bool> {
    Ok(Subgroup::column_span(m).sum(&target.relation_lattice())?.is_full())
}

fn difference(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut d = IntMatrix::zeros(a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            d.set(i, j, a.get(i, j) - b.get(i, j));
        }
    }
    d
}

/// Identifies `E_1^{p,q}` of a flag filtration with `H^{p+q}(Y_p, Y_{p-1})`
/// by restriction, and checks that `d_1` becomes the connecting map of the
/// triple `(Y_{p+1}, Y_p, Y_{p-1})`.
pub fn check_e1_differential_is_triple_map(ff: &FlagFiltration) -> Result<TripleReport> {
    if ff.kind != FlagKind::Closed {
        return Err(Error::Precondition("the triple check needs a closed-subcomplex flag filtration".into()));
    }
    let n = ff.n() as i32;
    let e1 = page(&ff.filtration, 1)?;
    let base = ff.filtration.base();
    let strata: Vec<Stratum> = (-n..=0).map(|p| Stratum::new(ff, p)).collect::<Result<_>>()?;
    let stratum = |p: i32| &strata[(p + n) as usize];
    let empty_cell = |rows: usize| Subquotient::new(Subgroup::zero(rows), Subgroup::zero(rows));

    let mut e1_mismatches = Vec::new();
    let mut identification_failures = Vec::new();
    let mut d1_mismatches = Vec::new();
    let mut cells_checked = 0;
    let mut maps_checked = 0;
    // identification matrices per cell, reused for the d_1 comparison
    let mut ident = std::collections::HashMap::new();
    for p in -n..=0 {
        let st = stratum(p);
        for l in base.degree_range() {
            let q = l - p;
            cells_checked += 1;
            let rel = st.relative(l)?;
            let cell = match e1.cells.get(&(p, q)) {
                Some(c) => c.clone(),
                None => empty_cell(base.rank(l))?,
            };
            if cell.group() != rel.group() {
                e1_mismatches.push(RelativeMismatch { p, q, spectral: cell.group(), relative: rel.group() });
                continue;
            }
            let res = st.restriction(l);
            let m = cell.map_matrix(&rel, |x| res.mul_vec(x))?;
            if !onto(&m, &rel)? {
                identification_failures.push((p, q));
                continue;
            }
            ident.insert((p, q), (cell, rel, m));
        }
    }

    for p in -n..0 {
        for l in base.degree_range() {
            let q = l - p;
            let (Some((src, src_rel, r_src)), Some((tgt, tgt_rel, r_tgt))) =
                (ident.get(&(p, q)), ident.get(&(p + 1, q)))
            else {
                continue;
            };
            maps_checked += 1;
            let engine = e1
                .differentials
                .get(&(p, q))
                .cloned()
                .unwrap_or_else(|| IntMatrix::zeros(tgt.dim(), src.dim()));
            let lower = stratum(p);
            let upper = stratum(p + 1);
            // extension by zero from Y_p to Y_{p+1}, then the coboundary there
            let extend = &upper.restriction(l) * &lower.restriction(l).transpose();
            let d_upper = upper.cochains.d(l);
            let connecting = src_rel.map_matrix(tgt_rel, |g| d_upper.mul_vec(&extend.mul_vec(g)))?;
            let left = r_tgt * &engine;
            let right = &connecting * r_src;
            if !is_zero_map(&difference(&left, &right), tgt_rel.orders()) {
                d1_mismatches.push((p, q));
            }
        }
    }
    Ok(TripleReport {
        pass: e1_mismatches.is_empty() && identification_failures.is_empty() && d1_mismatches.is_empty(),
        flag_length: ff.n(),
        cells_checked,
        maps_checked,
        e1_mismatches,
        identification_failures,
        d1_mismatches,
    })
}

/// Whether `Subcomplex` steps of a flag filtration line up with its graded
/// pieces: `Gr^p` is supported on `Y_p ∖ Y_{p-1}`.
pub fn graded_support(ff: &FlagFiltration, p: i32) -> Subcomplex {
    let x = &ff.complex;
    let empty = x.empty();
    let y = ff.flag.y(p).unwrap_or(&empty);
    let below = ff.flag.y(p - 1).unwrap_or(&empty);
    Subcomplex::from_predicate(x, |id| y.contains(id) && !below.contains(id))
}
