use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::sheaf::{sheaf_cochains, stalk_basis, CellularSheaf, CochainLayout};
use super::simplicial::{SimplexId, SimplicialComplex, Subcomplex};
use crate::complex::{CochainComplex, SubquotientComplex};
use crate::error::{Error, Result};
use crate::filtration::{CohomologyFiltration, FilteredComplex};
use crate::linalg::{AbelianGroup, Coefficients, IntMatrix, Subgroup};

/// `Y_0 ⊇ Y_{-1} ⊇ ... ⊇ Y_{-n}` with `Y_0` the whole complex; `Y_{-n-1}`
/// is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSubcomplexFlag {
    steps: Vec<Subcomplex>,
}

impl ClosedSubcomplexFlag {
    /// `steps[k]` is `Y_{-k}`.
    pub fn new(x: &SimplicialComplex, steps: Vec<Subcomplex>) -> Result<Self> {
        let Some(first) = steps.first() else {
            return Err(Error::Flag("a flag needs at least Y_0".into()));
        };
        if *first != x.full() {
            return Err(Error::Flag("Y_0 must be the whole complex".into()));
        }
        for (k, s) in steps.iter().enumerate() {
            if !s.fits(x) {
                return Err(Error::Flag(format!("Y_{} is not a subcomplex of this complex", -(k as i64))));
            }
            if !s.is_closed(x) {
                return Err(Error::Flag(format!("Y_{} is not closed under faces", -(k as i64))));
            }
            if k > 0 && !s.is_subset(&steps[k - 1]) {
                return Err(Error::Flag(format!("Y_{} ⊄ Y_{}", -(k as i64), 1 - k as i64)));
            }
        }
        Ok(ClosedSubcomplexFlag { steps })
    }

    /// `Y_0 = X` followed by the face closures of the given simplex lists.
    pub fn from_closures(x: &SimplicialComplex, lower: &[Vec<SimplexId>]) -> Result<Self> {
        let mut steps = vec![x.full()];
        steps.extend(lower.iter().map(|s| Subcomplex::closure_of(x, s)));
        Self::new(x, steps)
    }

    /// Length `n`.
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Y_p`, full for `p ≥ 0` and empty below `-n`.
    pub fn y(&self, p: i32) -> Option<&Subcomplex> {
        if p >= 0 {
            return self.steps.first();
        }
        self.steps.get((-p) as usize)
    }

    pub fn contains(&self, p: i32, id: SimplexId) -> bool {
        self.y(p).is_some_and(|s| s.contains(id))
    }

    pub fn steps(&self) -> &[Subcomplex] {
        &self.steps
    }
}

/// `Y_{-p}` = `(n - p)`-skeleton for `p = 0..=n`, `n = dim X`.
pub fn skeletal_flag(x: &SimplicialComplex) -> ClosedSubcomplexFlag {
    let n = x.dim().unwrap_or(0);
    let steps = (0..=n).map(|p| x.skeleton(n - p)).collect();
    ClosedSubcomplexFlag { steps }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagKind {
    /// Cochains vanishing on `Y_{p-1}`.
    Closed,
    /// Cochains supported on the open star of `Z_{-p}` in the subdivision.
    Support,
}

/// A filtration produced from a flag, with the geometric data it came from.
#[derive(Clone, Debug)]
pub struct FlagFiltration {
    pub kind: FlagKind,
    /// Complex carrying the cochains (the subdivision for support filtrations).
    pub complex: SimplicialComplex,
    pub sheaf: CellularSheaf,
    /// The flag on `complex`.
    pub flag: ClosedSubcomplexFlag,
    pub layout: CochainLayout,
    pub filtration: FilteredComplex,
}

impl FlagFiltration {
    pub fn n(&self) -> usize {
        self.flag.len()
    }
}

fn coordinate_steps(
    x: &SimplicialComplex,
    layout: &CochainLayout,
    base: &CochainComplex,
    ps: impl Iterator<Item = i32>,
    keep: impl Fn(i32, SimplexId) -> bool,
) -> Vec<Vec<Subgroup>> {
    ps.map(|p| {
        base.degree_range()
            .map(|l| {
                let k = l as usize;
                Subgroup::coordinate(layout.rank(k), stalk_basis(x, layout, k, |id| keep(p, id)))
            })
            .collect()
    })
    .collect()
}

/// `F^p` = cochains vanishing on `Y_{p-1}`; type within `[-n, 0]`.
pub fn flag_filtration_f(x: &SimplicialComplex, s: &CellularSheaf, flag: &ClosedSubcomplexFlag) -> Result<FlagFiltration> {
    ClosedSubcomplexFlag::new(x, flag.steps.clone())?;
    let base = Arc::new(sheaf_cochains(x, s)?);
    let layout = CochainLayout::new(x, s);
    let n = flag.len() as i32;
    let steps = coordinate_steps(x, &layout, &base, -n..=0, |p, id| !flag.contains(p - 1, id));
    let filtration = FilteredComplex::new(base, -n, steps)?;
    Ok(FlagFiltration {
        kind: FlagKind::Closed,
        complex: x.clone(),
        sheaf: s.clone(),
        flag: flag.clone(),
        layout,
        filtration,
    })
}

/// The flag and sheaf carried over to the barycentric subdivision.
pub fn subdivide(x: &SimplicialComplex, s: &CellularSheaf, flag: &ClosedSubcomplexFlag) -> (SimplicialComplex, CellularSheaf, ClosedSubcomplexFlag) {
    let (sd, carrier) = x.barycentric_subdivision();
    let s2 = s.subdivide(x, &sd, &carrier);
    let steps = flag
        .steps
        .iter()
        .map(|z| Subcomplex::from_predicate(&sd, |id| sd.simplex(id).iter().all(|&v| z.contains(carrier[v]))))
        .collect();
    (sd, s2, ClosedSubcomplexFlag { steps })
}

/// `G^p` = cochains on the subdivision supported on the open star of
/// `Z_{-p}'`; type within `[0, n]`.
pub fn support_filtration_g(x: &SimplicialComplex, s: &CellularSheaf, flag: &ClosedSubcomplexFlag) -> Result<FlagFiltration> {
    ClosedSubcomplexFlag::new(x, flag.steps.clone())?;
    let (sd, s2, zflag) = subdivide(x, s, flag);
    let base = Arc::new(sheaf_cochains(&sd, &s2)?);
    let layout = CochainLayout::new(&sd, &s2);
    let n = flag.len() as i32;
    // a chain meets Z' iff its smallest member does
    let steps = coordinate_steps(&sd, &layout, &base, 0..=n, |p, id| {
        let v = sd.simplex(id)[0];
        zflag.contains(-p, (0, v))
    });
    let filtration = FilteredComplex::new(base, 0, steps)?;
    Ok(FlagFiltration {
        kind: FlagKind::Support,
        complex: sd,
        sheaf: s2,
        flag: zflag,
        layout,
        filtration,
    })
}

/// Cohomology of the cochains vanishing on `A`, degree by degree.
pub fn relative_cohomology(x: &SimplicialComplex, a: &Subcomplex, s: &CellularSheaf) -> Result<BTreeMap<i32, AbelianGroup>> {
    if !a.fits(x) || !a.is_closed(x) {
        return Err(Error::Simplicial("relative cohomology needs a closed subcomplex".into()));
    }
    let base = sheaf_cochains(x, s)?;
    let layout = CochainLayout::new(x, s);
    let top: Vec<Subgroup> = base
        .degree_range()
        .map(|l| {
            let k = l as usize;
            Subgroup::coordinate(layout.rank(k), stalk_basis(x, &layout, k, |id| !a.contains(id)))
        })
        .collect();
    let bottom = base.zero_terms();
    let q = SubquotientComplex::new(&base, top, bottom)?;
    base.degree_range().map(|l| Ok((l, q.cohomology(l)?))).collect()
}

/// Vertex map between simplicial complexes carrying simplices to simplices.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: SimplicialComplex,
    pub target: SimplicialComplex,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::Map(format!(
                "vertex map has {} entries for {} vertices",
                vertex_map.len(),
                source.vertex_count()
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::Map(format!("vertex {v} is not in the target")));
        }
        let f = SimplicialMap { source, target, vertex_map };
        for id in f.source.ids() {
            if f.image(id).is_none() {
                return Err(Error::Map(format!("image of {} is not a simplex", f.source.describe(id))));
            }
        }
        Ok(f)
    }

    /// From label pairs `source vertex -> target vertex`.
    pub fn from_labels<S: AsRef<str>>(source: SimplicialComplex, target: SimplicialComplex, pairs: &[(S, S)]) -> Result<Self> {
        let mut map = vec![usize::MAX; source.vertex_count()];
        for (a, b) in pairs {
            let i = source
                .vertex_id(a.as_ref())
                .ok_or_else(|| Error::Map(format!("unknown source vertex {}", a.as_ref())))?;
            let j = target
                .vertex_id(b.as_ref())
                .ok_or_else(|| Error::Map(format!("unknown target vertex {}", b.as_ref())))?;
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Map(format!("vertex {} is not mapped", source.label(i))));
        }
        Self::new(source, target, map)
    }

    pub fn identity(x: SimplicialComplex) -> Self {
        let map = (0..x.vertex_count()).collect();
        SimplicialMap { source: x.clone(), target: x, vertex_map: map }
    }

    pub fn image(&self, id: SimplexId) -> Option<SimplexId> {
        let mut vs: Vec<usize> = self.source.simplex(id).iter().map(|&v| self.vertex_map[v]).collect();
        vs.sort_unstable();
        vs.dedup();
        self.target.id_of(&vs)
    }
}

/// `X_p = f^{-1}(Y_p)`.
pub fn preimage_flag(f: &SimplicialMap, flag: &ClosedSubcomplexFlag) -> Result<ClosedSubcomplexFlag> {
    let steps = flag
        .steps
        .iter()
        .map(|y| Subcomplex::from_predicate(&f.source, |id| f.image(id).is_some_and(|t| y.contains(t))))
        .collect();
    ClosedSubcomplexFlag::new(&f.source, steps)
}

/// Lift of `Ker(H^l(X) → H^l(A))`: cocycles whose restriction to `A` is a
/// coboundary there.
fn restriction_kernel(
    x: &SimplicialComplex,
    s: &CellularSheaf,
    layout: &CochainLayout,
    base: &CochainComplex,
    a: &Subcomplex,
    l: i32,
) -> Result<Subgroup> {
    let cocycles = base.cocycles(l);
    if a.is_empty() {
        return Ok(cocycles);
    }
    let (sub, back) = x.restrict(a);
    let sub_sheaf = s.restrict(&sub, &back);
    let sub_base = sheaf_cochains(&sub, &sub_sheaf)?;
    let sub_layout = CochainLayout::new(&sub, &sub_sheaf);
    let k = l as usize;
    let mut res = IntMatrix::zeros(sub_layout.rank(k), layout.rank(k));
    for (i, &j) in back.get(k).into_iter().flatten().enumerate() {
        let rows = sub_layout.range((k, i));
        let cols = layout.range((k, j));
        for (r, c) in rows.zip(cols) {
            res.set(r, c, BigInt::from(1));
        }
    }
    let target = if sub_base.degree_range().contains(&l) { sub_base.coboundaries(l) } else { Subgroup::zero(res.rows()) };
    cocycles.intersection(&Subgroup::preimage(&res, &target)?)
}

/// The filtration `p ↦ Ker(H^l(X) → H^l(Y_{p-1}))` on `H^l`, computed
/// without the filtered complex.
pub fn kernel_filtration(x: &SimplicialComplex, s: &CellularSheaf, flag: &ClosedSubcomplexFlag, l: i32) -> Result<CohomologyFiltration> {
    let base = sheaf_cochains(x, s)?;
    let layout = CochainLayout::new(x, s);
    let h = base.cohomology_presentation(l)?;
    let n = flag.len() as i32;
    let empty = x.empty();
    let lifts = (-n..=0)
        .map(|p| {
            let a = flag.y(p - 1).unwrap_or(&empty);
            restriction_kernel(x, s, &layout, &base, a, l)?.sum(h.denominator())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologyFiltration::from_lifts(l, h, -n, lifts))
}

#[derive(Clone, Debug, Serialize)]
pub struct LerayDegree {
    pub degree: i32,
    pub cohomology: AbelianGroup,
    /// `(p, F^p H / F^{p+1} H)` for the flag filtration.
    pub flag_graded: Vec<(i32, AbelianGroup)>,
    /// The same for `Dec(F)`, i.e. the shifted flag abutment.
    pub decale_graded: Vec<(i32, AbelianGroup)>,
    /// Steps where the flag abutment and the kernel filtration differ.
    pub mismatched_steps: Vec<i32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LerayReport {
    pub pass: bool,
    pub flag_length: usize,
    pub degrees: Vec<LerayDegree>,
}

/// Compares the abutment of the flag filtration for `f^{-1} Y_*` with the
/// kernel filtration by restriction to `f^{-1} Y_{p-1}`.
pub fn pushforward_flag_comparison(
    f: &SimplicialMap,
    s: &CellularSheaf,
    flag: &ClosedSubcomplexFlag,
    coeffs: Coefficients,
) -> Result<LerayReport> {
    let xflag = preimage_flag(f, flag)?;
    let ff = flag_filtration_f(&f.source, s, &xflag)?;
    let dec = ff.filtration.decale();
    let n = xflag.len() as i32;
    let mut degrees = Vec::new();
    for l in ff.filtration.base().degree_range() {
        let abut = ff.filtration.induced_on_cohomology(l)?;
        let kernel = kernel_filtration(&f.source, s, &xflag, l)?;
        let mismatched_steps = (-n - 1..=1)
            .filter(|&p| !abut.step_equals(p, &kernel, 0, coeffs))
            .collect();
        let dabut = dec.induced_on_cohomology(l)?;
        let graded = |h: &CohomologyFiltration, range: std::ops::RangeInclusive<i32>| -> Result<Vec<(i32, AbelianGroup)>> {
            range.map(|p| Ok((p, coeffs.group(h.graded(p)?)))).collect()
        };
        degrees.push(LerayDegree {
            degree: l,
            cohomology: coeffs.group(abut.cohomology().group()),
            flag_graded: graded(&abut, -n..=0)?,
            decale_graded: graded(&dabut, -n - l..=-l)?,
            mismatched_steps,
        });
    }
    Ok(LerayReport {
        pass: degrees.iter().all(|d| d.mismatched_steps.is_empty()),
        flag_length: xflag.len(),
        degrees,
    })
}
