//! Finite decreasing filtrations by subcomplexes.

use std::sync::Arc;

use crate::complex::{CochainComplex, SubquotientComplex};
use crate::error::{Error, Result};
use crate::linalg::{AbelianGroup, Coefficients, Subgroup, Subquotient};

/// A bounded complex with a finite decreasing filtration `F^p ⊇ F^{p+1}`
/// by subcomplexes.
///
/// Steps are stored for `p` in `start .. start + steps.len()`; below the
/// window every step is the whole complex, above it every step is zero.
/// The window is trimmed on construction, so for a nonzero complex it is
/// exactly the filtration type `[a, b]`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    base: Arc<CochainComplex>,
    start: i32,
    steps: Vec<Vec<Subgroup>>,
    full: Vec<Subgroup>,
    zero: Vec<Subgroup>,
}

impl PartialEq for FilteredComplex {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.start == other.start && self.steps == other.steps
    }
}

pub(crate) fn same_base(a: &Arc<CochainComplex>, b: &Arc<CochainComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FilteredComplex {
    /// Validates nesting and d-stability. `steps[i][k]` is
    /// `F^{start+i}` in the `k`-th degree of the base range.
    pub fn new(base: Arc<CochainComplex>, start: i32, steps: Vec<Vec<Subgroup>>) -> Result<Self> {
        base.ensure_valid()?;
        let degrees: Vec<i32> = base.degree_range().collect();
        for (i, step) in steps.iter().enumerate() {
            let p = start + i as i32;
            if step.len() != degrees.len() {
                return Err(Error::InvalidFiltration(format!(
                    "step {p} has {} degrees, complex has {}",
                    step.len(),
                    degrees.len()
                )));
            }
            for (k, &l) in degrees.iter().enumerate() {
                if step[k].ambient() != base.rank(l) {
                    return Err(Error::InvalidFiltration(format!(
                        "F^{p} in degree {l} lives in rank {}, expected {}",
                        step[k].ambient(),
                        base.rank(l)
                    )));
                }
                if i > 0 && !steps[i - 1][k].contains(&step[k])? {
                    return Err(Error::InvalidFiltration(format!("F^{p} ⊄ F^{} in degree {l}", p - 1)));
                }
                if k + 1 < degrees.len() {
                    let image = step[k].image(&base.d(l))?;
                    if !step[k + 1].contains(&image)? {
                        return Err(Error::InvalidFiltration(format!("F^{p} is not d-stable in degree {l}")));
                    }
                }
            }
        }
        Ok(Self::assemble(base, start, steps))
    }

    /// Skips validation; callers guarantee nesting and d-stability.
    pub(crate) fn assemble(base: Arc<CochainComplex>, start: i32, steps: Vec<Vec<Subgroup>>) -> Self {
        let full = base.full_terms();
        let zero = base.zero_terms();
        let mut f = FilteredComplex {
            base,
            start,
            steps,
            full,
            zero,
        };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.steps.last().is_some_and(|s| *s == self.zero) {
            self.steps.pop();
        }
        let leading_full = self.steps.iter().take_while(|s| **s == self.full).count();
        if leading_full == 0 {
            if !self.steps.is_empty() {
                self.steps.insert(0, self.full.clone());
                self.start -= 1;
            }
        } else if leading_full > 1 {
            self.steps.drain(..leading_full - 1);
            self.start += leading_full as i32 - 1;
        }
        if self.steps.is_empty() {
            self.start = 0;
        }
    }

    /// The one-jump filtration: everything in `F^p` for `p <= jump`, zero after.
    pub fn trivial(base: Arc<CochainComplex>, jump: i32) -> Result<Self> {
        base.ensure_valid()?;
        let full = base.full_terms();
        Ok(Self::assemble(base, jump, vec![full]))
    }

    /// The bête filtration `σ^{≥p}`: `F^p K^l = K^l` for `l ≥ p`, else zero.
    pub fn bete(base: Arc<CochainComplex>) -> Result<Self> {
        base.ensure_valid()?;
        let Some((lo, hi)) = base.degrees() else {
            return Ok(Self::assemble(base, 0, Vec::new()));
        };
        let steps = (lo..=hi)
            .map(|p| {
                base.degree_range()
                    .map(|l| if l >= p { Subgroup::full(base.rank(l)) } else { Subgroup::zero(base.rank(l)) })
                    .collect()
            })
            .collect();
        Ok(Self::assemble(base, lo, steps))
    }

    pub fn base(&self) -> &CochainComplex {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<CochainComplex> {
        &self.base
    }

    /// Per-degree subgroups of `F^p`.
    pub fn step(&self, p: i32) -> &[Subgroup] {
        if self.steps.is_empty() || p < self.start {
            return &self.full;
        }
        match self.steps.get((p - self.start) as usize) {
            Some(s) => s,
            None => &self.zero,
        }
    }

    /// `F^p K^l`
    pub fn at(&self, p: i32, l: i32) -> Subgroup {
        match self.base.slot(l) {
            Some(k) => self.step(p)[k].clone(),
            None => Subgroup::zero(0),
        }
    }

    /// Filtration type `[a, b]`: `F^a` is everything and `F^{b+1}` is zero.
    /// `None` for the zero complex.
    pub fn filtration_type(&self) -> Option<(i32, i32)> {
        (!self.steps.is_empty()).then(|| (self.start, self.start + self.steps.len() as i32 - 1))
    }

    /// Window over which graded pieces can be nonzero; empty for the zero
    /// complex.
    pub fn window(&self) -> std::ops::RangeInclusive<i32> {
        match self.filtration_type() {
            Some((a, b)) => a..=b,
            #[allow(clippy::reversed_empty_ranges)]
            None => 0..=-1,
        }
    }

    /// `Gr^p = F^p / F^{p+1}` with the induced differential.
    pub fn graded_piece(&self, p: i32) -> Result<SubquotientComplex<'_>> {
        SubquotientComplex::new(&self.base, self.step(p).to_vec(), self.step(p + 1).to_vec())
    }

    /// Deligne's shifted filtration:
    /// `Dec(F)^p L^l = {x ∈ F^{p+l} L^l : dx ∈ F^{p+l+1} L^{l+1}}`.
    pub fn decale(&self) -> FilteredComplex {
        let Some((a, b)) = self.filtration_type() else {
            return Self::assemble(self.base.clone(), 0, Vec::new());
        };
        let (lo, hi) = self.base.degrees().expect("nonzero filtration has degrees");
        // Dec^p L^l is everything once p + l + 1 <= a and zero once p + l > b
        let p_lo = a - hi - 1;
        let p_hi = b - lo;
        let steps = (p_lo..=p_hi)
            .map(|p| {
                self.base
                    .degree_range()
                    .map(|l| {
                        let here = self.at(p + l, l);
                        let next = self.at(p + l + 1, l + 1);
                        let d = self.base.d(l);
                        let pre = Subgroup::preimage(&d, &next).expect("shapes agree by construction");
                        here.intersection(&pre).expect("shapes agree by construction")
                    })
                    .collect()
            })
            .collect();
        Self::assemble(self.base.clone(), p_lo, steps)
    }

    /// `δ^p = Σ_{i+j=p} F^i ∩ G^j`.
    pub fn diagonal(&self, other: &FilteredComplex) -> Result<FilteredComplex> {
        if !same_base(&self.base, &other.base) {
            return Err(Error::BaseMismatch);
        }
        let (Some((af, bf)), Some((ag, bg))) = (self.filtration_type(), other.filtration_type()) else {
            return Ok(Self::assemble(self.base.clone(), 0, Vec::new()));
        };
        let mut steps = Vec::new();
        for p in af + ag..=bf + bg {
            let mut step = Vec::new();
            for (k, l) in self.base.degree_range().enumerate() {
                let mut acc = Subgroup::zero(self.base.rank(l));
                for i in af..=bf {
                    let term = self.step(i)[k].intersection(&other.step(p - i)[k])?;
                    acc = acc.sum(&term)?;
                }
                step.push(acc);
            }
            steps.push(step);
        }
        Ok(Self::assemble(self.base.clone(), af + ag, steps))
    }

    /// Filtration induced on `H^l`: step `p` is the image of the cocycles
    /// lying in `F^p`.
    pub fn induced_on_cohomology(&self, l: i32) -> Result<CohomologyFiltration> {
        let h = self.base.cohomology_presentation(l)?;
        let cocycles = h.numerator().clone();
        let boundaries = h.denominator().clone();
        let window: Vec<i32> = self.window().collect();
        let lifts = window
            .iter()
            .map(|&p| cocycles.intersection(&self.at(p, l))?.sum(&boundaries))
            .collect::<Result<Vec<_>>>()?;
        Ok(CohomologyFiltration {
            degree: l,
            start: window.first().copied().unwrap_or(0),
            lifts,
            cohomology: h,
        })
    }
}

/// A complex with two filtrations, `first` (named P) and `second` (named F).
#[derive(Clone, Debug)]
pub struct BifilteredComplex {
    first: FilteredComplex,
    second: FilteredComplex,
}

impl BifilteredComplex {
    pub fn new(first: FilteredComplex, second: FilteredComplex) -> Result<Self> {
        if !same_base(&first.base, &second.base) {
            return Err(Error::BaseMismatch);
        }
        Ok(BifilteredComplex { first, second })
    }

    pub fn base(&self) -> &CochainComplex {
        self.first.base()
    }

    /// The P filtration.
    pub fn first(&self) -> &FilteredComplex {
        &self.first
    }

    /// The F filtration.
    pub fn second(&self) -> &FilteredComplex {
        &self.second
    }

    /// `Gr^a_F Gr^b_P`.
    pub fn bigraded_piece(&self, a: i32, b: i32) -> Result<SubquotientComplex<'_>> {
        bigraded_piece(&self.second, &self.first, a, b)
    }
}

/// `Gr^i_F Gr^j_G = (F^i ∩ G^j) / ((F^{i+1} ∩ G^j) + (F^i ∩ G^{j+1}))`.
pub fn bigraded_piece<'a>(
    f: &'a FilteredComplex,
    g: &FilteredComplex,
    i: i32,
    j: i32,
) -> Result<SubquotientComplex<'a>> {
    if !same_base(&f.base, &g.base) {
        return Err(Error::BaseMismatch);
    }
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for k in 0..f.full.len() {
        let t = f.step(i)[k].intersection(&g.step(j)[k])?;
        let b1 = f.step(i + 1)[k].intersection(&g.step(j)[k])?;
        let b2 = f.step(i)[k].intersection(&g.step(j + 1)[k])?;
        top.push(t);
        bottom.push(b1.sum(&b2)?);
    }
    SubquotientComplex::new(&f.base, top, bottom)
}

/// A decreasing filtration on `H^l`, stored through lifts: step `p` is the
/// subgroup `L_p` with `B^l ⊆ L_p ⊆ Z^l` whose image in `H^l` is `F^p H^l`.
/// Equal lifts mean equal subgroups of `H^l`.
#[derive(Clone, Debug)]
pub struct CohomologyFiltration {
    degree: i32,
    start: i32,
    lifts: Vec<Subgroup>,
    cohomology: Subquotient,
}

impl CohomologyFiltration {
    /// From lifts `B ⊆ L_p ⊆ Z` for `p = start, start + 1, ...`.
    pub(crate) fn from_lifts(degree: i32, cohomology: Subquotient, start: i32, lifts: Vec<Subgroup>) -> Self {
        CohomologyFiltration {
            degree,
            start,
            lifts,
            cohomology,
        }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn cohomology(&self) -> &Subquotient {
        &self.cohomology
    }

    /// Lift of `F^p H^l`.
    pub fn lift(&self, p: i32) -> &Subgroup {
        if self.lifts.is_empty() || p < self.start {
            return self.cohomology.numerator();
        }
        self.lifts
            .get((p - self.start) as usize)
            .unwrap_or_else(|| self.cohomology.denominator())
    }

    /// Range of `p` over which the steps are stored.
    pub fn window(&self) -> std::ops::RangeInclusive<i32> {
        self.start..=self.start + self.lifts.len() as i32 - 1
    }

    /// Class of `F^p H^l`.
    pub fn step_group(&self, p: i32) -> Result<AbelianGroup> {
        Subquotient::new(self.lift(p).clone(), self.cohomology.denominator().clone()).map(|q| q.group())
    }

    /// Class of `F^p H^l / F^{p+1} H^l`.
    pub fn graded(&self, p: i32) -> Result<AbelianGroup> {
        Subquotient::new(self.lift(p).clone(), self.lift(p + 1).clone()).map(|q| q.group())
    }

    /// Generators of `F^p H^l` in the Smith coordinates of `H^l`.
    pub fn step_generators(&self, p: i32) -> Result<Vec<Vec<num_bigint::BigInt>>> {
        let mut out = Vec::new();
        for x in self.lift(p).basis() {
            let c = self.cohomology.class_of(x)?;
            if !self.cohomology.is_zero_class(&c) {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Whether `F^p H^l` here equals `G^{p + shift} H^l` in `other`.
    pub fn step_equals(&self, p: i32, other: &CohomologyFiltration, shift: i32, coeffs: Coefficients) -> bool {
        coeffs.subgroup(self.lift(p)) == coeffs.subgroup(other.lift(p + shift))
    }
}
