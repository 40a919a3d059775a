//! Bounded cochain complexes of free abelian groups.

use std::borrow::Cow;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, AbelianGroup, IntMatrix, Subgroup, Subquotient};

/// `C^lo -> C^{lo+1} -> ... -> C^hi` with `C^l = Z^{rank(l)}`.
///
/// Construction only checks that the data can be stored; `d∘d = 0` and
/// shape problems are collected as violations and reported by
/// [`CochainComplex::validate`]. Every computation refuses invalid input.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CochainComplex {
    lo: i32,
    ranks: Vec<usize>,
    differentials: Vec<IntMatrix>,
    violations: Vec<Violation>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub degree: i32,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl CochainComplex {
    /// Validated constructor. `differentials[i]` is `d^{lo+i}`.
    pub fn new(lo: i32, ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        let c = Self::from_parts(lo, ranks, differentials)?;
        c.ensure_valid()?;
        Ok(c)
    }

    /// Stores the data and records any violations instead of failing.
    /// Only a differential count that cannot match the ranks is rejected.
    pub fn from_parts(lo: i32, ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if differentials.len() != ranks.len().saturating_sub(1) {
            return Err(Error::InvalidComplex(format!(
                "{} degrees need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                differentials.len()
            )));
        }
        let mut c = CochainComplex {
            lo,
            ranks,
            differentials,
            violations: Vec::new(),
        };
        c.violations = c.find_violations();
        Ok(c)
    }

    pub fn zero() -> Self {
        CochainComplex {
            lo: 0,
            ranks: Vec::new(),
            differentials: Vec::new(),
            violations: Vec::new(),
        }
    }

    /// Converts a chain complex `C_k --∂_k--> C_{k-1}` (given from degree
    /// `lo_chain` upward, `boundaries[i] = ∂_{lo_chain+i+1}`) into cochain
    /// indexing by negating degrees.
    pub fn from_chain(lo_chain: i32, ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        let top = lo_chain + ranks.len() as i32 - 1;
        let ranks_rev: Vec<usize> = ranks.into_iter().rev().collect();
        let diffs: Vec<IntMatrix> = boundaries.into_iter().rev().collect();
        Self::new(-top, ranks_rev, diffs)
    }

    fn find_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, d) in self.differentials.iter().enumerate() {
            let l = self.lo + i as i32;
            if d.rows() != self.ranks[i + 1] || d.cols() != self.ranks[i] {
                out.push(Violation {
                    degree: l,
                    message: format!(
                        "d^{l} has shape {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        self.ranks[i + 1],
                        self.ranks[i]
                    ),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (i, w) in self.differentials.windows(2).enumerate() {
            let l = self.lo + i as i32;
            let dd = &w[1] * &w[0];
            if !dd.is_zero() {
                out.push(Violation {
                    degree: l,
                    message: format!("d^{} * d^{l} is nonzero: {dd:?}", l + 1),
                });
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            valid: self.violations.is_empty(),
            violations: self.violations.clone(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(format!("degree {}: {}", v.degree, v.message))),
        }
    }

    /// `(lo, hi)`, or `None` for the empty complex.
    pub fn degrees(&self) -> Option<(i32, i32)> {
        (!self.ranks.is_empty()).then(|| (self.lo, self.lo + self.ranks.len() as i32 - 1))
    }

    pub fn degree_range(&self) -> std::ops::RangeInclusive<i32> {
        match self.degrees() {
            Some((lo, hi)) => lo..=hi,
            #[allow(clippy::reversed_empty_ranges)]
            None => 0..=-1,
        }
    }

    pub fn rank(&self, l: i32) -> usize {
        let i = l - self.lo;
        if i < 0 {
            return 0;
        }
        self.ranks.get(i as usize).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn lowest_degree(&self) -> i32 {
        self.lo
    }

    /// `d^l : C^l -> C^{l+1}`, a zero matrix outside the stored range.
    pub fn d(&self, l: i32) -> Cow<'_, IntMatrix> {
        let i = l - self.lo;
        if i >= 0 && (i as usize) < self.differentials.len() {
            Cow::Borrowed(&self.differentials[i as usize])
        } else {
            Cow::Owned(IntMatrix::zeros(self.rank(l + 1), self.rank(l)))
        }
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    pub fn apply_d(&self, l: i32, x: &[BigInt]) -> Vec<BigInt> {
        self.d(l).mul_vec(x)
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn cocycles(&self, l: i32) -> Subgroup {
        kernel_basis(&self.d(l))
    }

    pub fn coboundaries(&self, l: i32) -> Subgroup {
        Subgroup::column_span(&self.d(l - 1))
    }

    /// `H^l = ker d^l / im d^{l-1}` with Smith coordinates.
    pub fn cohomology_presentation(&self, l: i32) -> Result<Subquotient> {
        self.ensure_valid()?;
        Subquotient::new(self.cocycles(l), self.coboundaries(l))
    }

    pub fn cohomology(&self, l: i32) -> Result<AbelianGroup> {
        Ok(self.cohomology_presentation(l)?.group())
    }

    /// Coordinates of the class of a cocycle in the Smith-normalized
    /// presentation of `H^l`.
    pub fn class_of(&self, l: i32, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        if cocycle.len() != self.rank(l) {
            return Err(Error::AmbientMismatch(self.rank(l), cocycle.len()));
        }
        if self.apply_d(l, cocycle).iter().any(|x| x != &BigInt::from(0)) {
            return Err(Error::NotCocycle(l));
        }
        self.cohomology_presentation(l)?.class_of(cocycle)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degree_range()
            .map(|l| sign(l) * self.rank(l) as i64)
            .sum()
    }

    /// Full `C^l` in each degree of the range.
    pub fn full_terms(&self) -> Vec<Subgroup> {
        self.degree_range().map(|l| Subgroup::full(self.rank(l))).collect()
    }

    pub fn zero_terms(&self) -> Vec<Subgroup> {
        self.degree_range().map(|l| Subgroup::zero(self.rank(l))).collect()
    }

    /// Index of degree `l` into per-degree vectors.
    pub(crate) fn slot(&self, l: i32) -> Option<usize> {
        let i = l - self.lo;
        (i >= 0 && (i as usize) < self.ranks.len()).then_some(i as usize)
    }
}

pub(crate) fn sign(l: i32) -> i64 {
    if l.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A complex of finitely generated groups `top^l / bottom^l`, carved out of
/// a free cochain complex by two d-stable families `bottom ⊆ top`.
#[derive(Clone, Debug)]
pub struct SubquotientComplex<'a> {
    base: &'a CochainComplex,
    top: Vec<Subgroup>,
    bottom: Vec<Subgroup>,
}

impl<'a> SubquotientComplex<'a> {
    pub fn new(base: &'a CochainComplex, top: Vec<Subgroup>, bottom: Vec<Subgroup>) -> Result<Self> {
        base.ensure_valid()?;
        let n = base.degree_range().count();
        if top.len() != n || bottom.len() != n {
            return Err(Error::InvalidFiltration("subquotient terms do not cover the degree range".into()));
        }
        for (i, l) in base.degree_range().enumerate() {
            if !top[i].contains(&bottom[i])? {
                return Err(Error::NotContained);
            }
            if let Some(j) = base.slot(l + 1) {
                let d = base.d(l);
                if !top[j].contains(&top[i].image(&d)?)? || !bottom[j].contains(&bottom[i].image(&d)?)? {
                    return Err(Error::InvalidFiltration(format!("terms are not d-stable in degree {l}")));
                }
            }
        }
        Ok(SubquotientComplex { base, top, bottom })
    }

    pub fn base(&self) -> &CochainComplex {
        self.base
    }

    pub fn top(&self, l: i32) -> Cow<'_, Subgroup> {
        match self.base.slot(l) {
            Some(i) => Cow::Borrowed(&self.top[i]),
            None => Cow::Owned(Subgroup::zero(0)),
        }
    }

    pub fn bottom(&self, l: i32) -> Cow<'_, Subgroup> {
        match self.base.slot(l) {
            Some(i) => Cow::Borrowed(&self.bottom[i]),
            None => Cow::Owned(Subgroup::zero(0)),
        }
    }

    /// The group sitting in degree `l`.
    pub fn term(&self, l: i32) -> Result<AbelianGroup> {
        Ok(Subquotient::new(self.top(l).into_owned(), self.bottom(l).into_owned())?.group())
    }

    pub fn cohomology_presentation(&self, l: i32) -> Result<Subquotient> {
        let d = self.base.d(l);
        let cycles = self.top(l).intersection(&Subgroup::preimage(&d, &self.bottom(l + 1))?)?;
        let boundaries = self.bottom(l).sum(&self.top(l - 1).image(&self.base.d(l - 1))?)?;
        Subquotient::new(cycles, boundaries)
    }

    pub fn cohomology(&self, l: i32) -> Result<AbelianGroup> {
        Ok(self.cohomology_presentation(l)?.group())
    }

    pub fn is_zero(&self) -> bool {
        self.top.iter().zip(&self.bottom).all(|(t, b)| t == b)
    }

    /// Alternating sum of the free ranks of the terms.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let mut chi = 0;
        for l in self.base.degree_range() {
            chi += sign(l) * self.term(l)?.free_rank as i64;
        }
        Ok(chi)
    }
}
