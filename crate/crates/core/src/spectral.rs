//! The spectral sequence of a filtered complex.
//!
//! Pages are built directly from approximate cycles
//! `Z_r^p = {x ∈ F^p K^n : dx ∈ F^{p+r} K^{n+1}}` as
//! `E_r^{p,q} = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})`, with `n = p + q`.
//! That `E_{r+1}` is the cohomology of `(E_r, d_r)` is then a checkable
//! property rather than the construction.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::filtration::{CohomologyFiltration, FilteredComplex};
use crate::linalg::presentation::relation_lattice;
use crate::linalg::{homology_of_maps, subquotient, is_zero_map, AbelianGroup, Coefficients, IntMatrix, Subgroup, Subquotient};

pub type Cell = (i32, i32);

#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    /// Nonzero and zero cells alike, keyed by `(p, q)`.
    pub cells: BTreeMap<Cell, Subquotient>,
    /// `d_r` out of each cell, as a matrix in Smith coordinates.
    pub differentials: BTreeMap<Cell, IntMatrix>,
}

impl Page {
    pub fn group(&self, p: i32, q: i32) -> AbelianGroup {
        self.cells.get(&(p, q)).map(Subquotient::group).unwrap_or_default()
    }

    /// Target of `d_r` out of `(p, q)`.
    pub fn target(&self, p: i32, q: i32) -> Cell {
        (p + self.r as i32, q - self.r as i32 + 1)
    }

    fn orders(&self, cell: Cell) -> Vec<BigInt> {
        self.cells.get(&cell).map(|c| c.orders().to_vec()).unwrap_or_default()
    }

    fn incoming(&self, p: i32, q: i32) -> IntMatrix {
        let r = self.r as i32;
        let src = (p - r, q + r - 1);
        match self.differentials.get(&src) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.orders((p, q)).len(), self.orders(src).len()),
        }
    }

    fn outgoing(&self, p: i32, q: i32) -> IntMatrix {
        match self.differentials.get(&(p, q)) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.orders(self.target(p, q)).len(), self.orders((p, q)).len()),
        }
    }

    pub fn has_nonzero_differential(&self) -> bool {
        self.differentials.iter().any(|(&(p, q), m)| {
            let t = self.target(p, q);
            !is_zero_map(m, &self.orders(t))
        })
    }

    /// `ker d_r / im d_r` at `(p, q)`, computed from this page's matrices only.
    pub fn homology_at(&self, p: i32, q: i32) -> Result<AbelianGroup> {
        let t = self.target(p, q);
        homology_of_maps(&self.incoming(p, q), &self.orders((p, q)), &self.outgoing(p, q), &self.orders(t))
    }

    /// `ker d_r` at `(p, q)`.
    pub fn kernel_at(&self, p: i32, q: i32) -> Result<AbelianGroup> {
        let t = self.target(p, q);
        let mid = relation_lattice(&self.orders((p, q)));
        let kernel = Subgroup::preimage(&self.outgoing(p, q), &relation_lattice(&self.orders(t)))?;
        subquotient(&kernel, &mid)
    }

    /// `im d_r` landing in `(p, q)`.
    pub fn image_at(&self, p: i32, q: i32) -> Result<AbelianGroup> {
        let mid = relation_lattice(&self.orders((p, q)));
        let image = Subgroup::column_span(&self.incoming(p, q)).sum(&mid)?;
        subquotient(&image, &mid)
    }

    /// Cells where `d_r ∘ d_r` fails to vanish.
    pub fn square_failures(&self) -> Vec<Cell> {
        let mut bad = Vec::new();
        for (&(p, q), m1) in &self.differentials {
            let mid = self.target(p, q);
            let Some(m2) = self.differentials.get(&mid) else { continue };
            let end = self.target(mid.0, mid.1);
            if !is_zero_map(&(m2 * m1), &self.orders(end)) {
                bad.push((p, q));
            }
        }
        bad
    }
}

/// All pages `E_0 .. E_last` of a filtered complex. `E_r = E_last` for
/// every `r ≥ last`.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pages: Vec<Page>,
    stabilization: usize,
}

/// Approximate cycles `Z_r^p` in degree `n`; `r ≤ 0` gives `F^p`.
fn approximate_cycles(f: &FilteredComplex, r: i64, p: i32, n: i32) -> Result<Subgroup> {
    let here = f.at(p, n);
    if r <= 0 || here.is_zero() {
        return Ok(here);
    }
    let deeper = f.at(p + r as i32, n + 1);
    let pre = Subgroup::preimage(&f.base().d(n), &deeper)?;
    here.intersection(&pre)
}

/// Cells `(p, q)` that can be nonzero: `p` in the filtration window and
/// `p + q` in the degree range.
fn support(f: &FilteredComplex) -> Vec<Cell> {
    let mut cells = Vec::new();
    for p in f.window() {
        for n in f.base().degree_range() {
            cells.push((p, n - p));
        }
    }
    cells
}

/// Page `E_r` with its differential.
pub fn page(f: &FilteredComplex, r: usize) -> Result<Page> {
    let cells_list = support(f);
    let ri = r as i64;
    let mut keys: Vec<(i64, i32, i32)> = Vec::new();
    for &(p, q) in &cells_list {
        let n = p + q;
        keys.push((ri, p, n));
        keys.push((ri - 1, p + 1, n));
        keys.push((ri - 1, p - r as i32 + 1, n - 1));
    }
    keys.sort_unstable();
    keys.dedup();
    let z: HashMap<(i64, i32, i32), Subgroup> = keys
        .par_iter()
        .map(|&(s, p, n)| approximate_cycles(f, s, p, n).map(|g| ((s, p, n), g)))
        .collect::<Result<_>>()?;

    let base = f.base();
    let cells: BTreeMap<Cell, Subquotient> = cells_list
        .par_iter()
        .map(|&(p, q)| {
            let n = p + q;
            let numerator = z[&(ri, p, n)].clone();
            let from_below = z[&(ri - 1, p - r as i32 + 1, n - 1)].image(&base.d(n - 1))?;
            let denominator = z[&(ri - 1, p + 1, n)].sum(&from_below)?;
            Ok(((p, q), Subquotient::new(numerator, denominator)?))
        })
        .collect::<Result<_>>()?;

    let differentials: BTreeMap<Cell, IntMatrix> = cells
        .par_iter()
        .filter(|(_, c)| c.dim() > 0)
        .filter_map(|(&(p, q), src)| {
            let target = (p + r as i32, q - r as i32 + 1);
            let dst = cells.get(&target)?;
            let n = p + q;
            Some(src.map_matrix(dst, |x| base.apply_d(n, x)).map(|m| ((p, q), m)))
        })
        .collect::<Result<_>>()?;

    Ok(Page { r, cells, differentials })
}

impl SpectralSequence {
    /// Computes pages until every later differential must vanish, and at
    /// least up to `min_pages`.
    pub fn compute(f: &FilteredComplex, min_pages: usize) -> Result<Self> {
        let length = f.filtration_type().map_or(0, |(a, b)| (b - a) as usize);
        // d_r leaves the window once r > b - a, so E_{b-a+1} = E_∞
        let last = (length + 1).max(min_pages).max(1);
        let pages = (0..=last).map(|r| page(f, r)).collect::<Result<Vec<_>>>()?;
        let stabilization = pages
            .iter()
            .skip(1)
            .filter(|pg| pg.has_nonzero_differential())
            .map(|pg| pg.r + 1)
            .max()
            .unwrap_or(1);
        Ok(SpectralSequence { pages, stabilization })
    }

    /// Smallest `r ≥ 1` with `E_r = E_∞`.
    pub fn stabilization_page(&self) -> usize {
        self.stabilization
    }

    pub fn last_page_index(&self) -> usize {
        self.pages.len() - 1
    }

    pub fn page(&self, r: usize) -> &Page {
        &self.pages[r.min(self.pages.len() - 1)]
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn e_infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// Class of `E_r^{p,q}`, using the stable page past the computed range.
    pub fn group(&self, r: usize, p: i32, q: i32) -> AbelianGroup {
        self.page(r).group(p, q)
    }

    /// Internal consistency: `d_r ∘ d_r = 0` and `E_{r+1} ≅ H(E_r, d_r)` on
    /// every cell. Returns human-readable failures.
    pub fn verify(&self) -> Result<Vec<String>> {
        let mut failures = Vec::new();
        for pg in &self.pages {
            for (p, q) in pg.square_failures() {
                failures.push(format!("d_{} ∘ d_{} ≠ 0 at ({p},{q})", pg.r, pg.r));
            }
        }
        for w in self.pages.windows(2) {
            for &(p, q) in w[0].cells.keys() {
                let h = w[0].homology_at(p, q)?;
                let next = w[1].group(p, q);
                if h != next {
                    failures.push(format!(
                        "E_{}^({p},{q}) = {next} but H(E_{}, d_{}) = {h}",
                        w[1].r, w[0].r, w[0].r
                    ));
                }
            }
        }
        Ok(failures)
    }
}

/// The filtration induced on cohomology, degree by degree, with its graded
/// pieces compared against `E_∞`.
#[derive(Clone, Debug)]
pub struct Abutment {
    pub filtrations: BTreeMap<i32, CohomologyFiltration>,
    pub comparisons: Vec<AbutmentComparison>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbutmentComparison {
    pub degree: i32,
    pub p: i32,
    pub graded: AbelianGroup,
    pub e_infinity: AbelianGroup,
    pub matches: bool,
}

impl Abutment {
    pub fn passes(&self) -> bool {
        self.comparisons.iter().all(|c| c.matches)
    }

    pub fn degree(&self, l: i32) -> Option<&CohomologyFiltration> {
        self.filtrations.get(&l)
    }
}

pub fn abutment(f: &FilteredComplex) -> Result<Abutment> {
    let ss = SpectralSequence::compute(f, 1)?;
    abutment_with(f, &ss)
}

pub fn abutment_with(f: &FilteredComplex, ss: &SpectralSequence) -> Result<Abutment> {
    let mut filtrations = BTreeMap::new();
    let mut comparisons = Vec::new();
    let e_inf = ss.e_infinity();
    for l in f.base().degree_range() {
        let h = f.induced_on_cohomology(l)?;
        for p in f.window() {
            let graded = h.graded(p)?;
            let e = e_inf.group(p, l - p);
            comparisons.push(AbutmentComparison {
                degree: l,
                p,
                matches: graded == e,
                graded,
                e_infinity: e,
            });
        }
        filtrations.insert(l, h);
    }
    Ok(Abutment { filtrations, comparisons })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DecReindexReport {
    pub pass: bool,
    pub pages: Vec<usize>,
    pub cells_compared: usize,
    pub page_mismatches: Vec<PageMismatch>,
    pub abutment_mismatches: Vec<(i32, i32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageMismatch {
    pub r: usize,
    pub p: i32,
    pub q: i32,
    pub decale: AbelianGroup,
    pub original: AbelianGroup,
}

/// Checks `E_r^{p,q}(Dec F) ≅ E_{r+1}^{2p+q,-p}(F)` for `r` in `pages`
/// (default `1 ..= r_∞ + 1`) and `Dec(F)^p H^l = F^{p+l} H^l`.
pub fn check_dec_reindex(
    f: &FilteredComplex,
    pages: Option<std::ops::RangeInclusive<usize>>,
    coeffs: Coefficients,
) -> Result<DecReindexReport> {
    let dec = f.decale();
    let ss_f = SpectralSequence::compute(f, 2)?;
    let range = pages.unwrap_or(1..=ss_f.stabilization_page() + 1);
    let max_r = *range.end();
    let ss_f = if ss_f.last_page_index() < max_r + 1 {
        SpectralSequence::compute(f, max_r + 1)?
    } else {
        ss_f
    };
    let ss_d = SpectralSequence::compute(&dec, max_r)?;

    let mut cells: Vec<Cell> = support(&dec);
    cells.extend(support(f).into_iter().map(|(pp, qq)| (-qq, pp + 2 * qq)));
    cells.sort_unstable();
    cells.dedup();

    let mut report = DecReindexReport {
        pages: range.clone().collect(),
        ..Default::default()
    };
    for r in range {
        for &(p, q) in &cells {
            let lhs = coeffs.group(ss_d.group(r, p, q));
            let rhs = coeffs.group(ss_f.group(r + 1, 2 * p + q, -p));
            report.cells_compared += 1;
            if lhs != rhs {
                report.page_mismatches.push(PageMismatch { r, p, q, decale: lhs, original: rhs });
            }
        }
    }
    for l in f.base().degree_range() {
        let hf = f.induced_on_cohomology(l)?;
        let hd = dec.induced_on_cohomology(l)?;
        let lo = (*hd.window().start()).min(*hf.window().start() - l) - 1;
        let hi = (*hd.window().end()).max(*hf.window().end() - l) + 1;
        for p in lo..=hi {
            if !hd.step_equals(p, &hf, l, coeffs) {
                report.abutment_mismatches.push((l, p));
            }
        }
    }
    report.pass = report.page_mismatches.is_empty() && report.abutment_mismatches.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CochainComplex;
    use std::sync::Arc;

    fn times_two() -> Arc<CochainComplex> {
        Arc::new(CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap())
    }

    fn hollow_triangle() -> Arc<CochainComplex> {
        let d0 = IntMatrix::from_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        Arc::new(CochainComplex::new(0, vec![3, 3], vec![d0]).unwrap())
    }

    #[test]
    fn trivial_filtration_is_one_column() {
        let c = hollow_triangle();
        let f = FilteredComplex::trivial(c.clone(), 0).unwrap();
        let ss = SpectralSequence::compute(&f, 3).unwrap();
        for q in 0..=1 {
            assert_eq!(ss.group(1, 0, q), c.cohomology(q).unwrap());
        }
        assert_eq!(ss.stabilization_page(), 1);
        assert!(ss.pages().iter().skip(1).all(|pg| !pg.has_nonzero_differential()));
        assert!(ss.verify().unwrap().is_empty());
    }

    #[test]
    fn skeletal_filtration_of_triangle() {
        // F^p = cochains of degree ≥ p: E_1^{p,0} = C^p, d_1 = coboundary
        let c = hollow_triangle();
        let f = FilteredComplex::bete(c.clone()).unwrap();
        let ss = SpectralSequence::compute(&f, 2).unwrap();
        assert_eq!(ss.group(1, 0, 0), AbelianGroup::free(3));
        assert_eq!(ss.group(1, 1, 0), AbelianGroup::free(3));
        assert!(ss.group(1, 0, 1).is_trivial());
        assert!(ss.group(1, 1, -1).is_trivial());
        let d1 = &ss.page(1).differentials[&(0, 0)];
        assert_eq!(crate::linalg::smith(d1).diagonal(), crate::linalg::smith(&c.d(0)).diagonal());
        assert_eq!(ss.group(2, 0, 0), AbelianGroup::free(1));
        assert_eq!(ss.group(2, 1, 0), AbelianGroup::free(1));
        assert!(ss.verify().unwrap().is_empty());
    }

    #[test]
    fn e0_is_graded_piece() {
        let c = times_two();
        let f = FilteredComplex::bete(c).unwrap();
        let e0 = page(&f, 0).unwrap();
        assert_eq!(e0.group(0, 0), AbelianGroup::free(1));
        assert_eq!(e0.group(1, 0), AbelianGroup::free(1));
    }

    #[test]
    fn bete_on_times_two_reindex() {
        // F = bête filtration, so E_1 = C with d_1 = x2 and E_2^{1,0} = Z/2.
        let f = FilteredComplex::bete(times_two()).unwrap();
        let ss = SpectralSequence::compute(&f, 3).unwrap();
        assert_eq!(ss.group(2, 1, 0), AbelianGroup::cyclic(2));
        assert!(ss.group(2, 0, 0).is_trivial());
        let dec = f.decale();
        let sd = SpectralSequence::compute(&dec, 2).unwrap();
        // Dec(F) is the trivial filtration jumping at 0, so E_1(Dec) is
        // H^*(K) in column 0, and E_1^{0,1}(Dec) = E_2^{1,0}(F) = Z/2.
        assert_eq!(dec, FilteredComplex::trivial(f.base_arc().clone(), 0).unwrap());
        for (p, q) in [(0, 0), (0, 1), (-1, 1), (1, 0)] {
            assert_eq!(sd.group(1, p, q), ss.group(2, 2 * p + q, -p), "cell ({p},{q})");
        }
        assert_eq!(sd.group(1, 0, 1), AbelianGroup::cyclic(2));
        let report = check_dec_reindex(&f, None, Coefficients::Int).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn trivial_reindex_is_identity() {
        let f = FilteredComplex::trivial(hollow_triangle(), 0).unwrap();
        let report = check_dec_reindex(&f, None, Coefficients::Int).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.cells_compared > 0);
    }

    #[test]
    fn abutment_of_trivial_filtration() {
        let c = hollow_triangle();
        let f = FilteredComplex::trivial(c, 0).unwrap();
        let ab = abutment(&f).unwrap();
        assert!(ab.passes());
        let h1 = ab.degree(1).unwrap();
        assert_eq!(h1.graded(0).unwrap(), AbelianGroup::free(1));
        assert!(h1.graded(-1).unwrap().is_trivial());
    }
}
