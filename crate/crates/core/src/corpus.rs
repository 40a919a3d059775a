//! Seeded random filtered complexes for the property suites.
//!
//! A complex is grown degree by degree: each differential's rows are small
//! combinations of a basis of the left kernel of the previous one, so
//! `d ∘ d = 0` holds by construction. A filtration is built from random
//! nested spans `V_b ⊆ ... ⊆ V_a`, closed up as `V_i + dV_i`, and optionally
//! intersected with one more random subcomplex of the same shape.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::CochainComplex;
use crate::error::Result;
use crate::filtration::FilteredComplex;
use crate::flags::{ClosedSubcomplexFlag, SimplexId, SimplicialComplex, Subcomplex};
use crate::linalg::{kernel_basis, IntMatrix, Subgroup};

#[derive(Clone, Debug)]
pub struct CorpusParams {
    pub max_degrees: usize,
    pub max_rank: usize,
    pub max_entry: i64,
    /// Steps strictly between everything and zero.
    pub max_steps: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_degrees: 4, max_rank: 5, max_entry: 4, max_steps: 3 }
    }
}

fn small(rng: &mut ChaCha8Rng, bound: i64) -> BigInt {
    BigInt::from(rng.gen_range(-bound..=bound))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<BigInt> {
    (0..n).map(|_| small(rng, bound)).collect()
}

/// Random complex; the lowest degree lies in `[-3, 0]`.
pub fn random_complex(rng: &mut ChaCha8Rng, params: &CorpusParams) -> CochainComplex {
    let lo = rng.gen_range(-3..=0);
    let count = rng.gen_range(1..=params.max_degrees);
    let mut ranks = vec![rng.gen_range(0..=params.max_rank)];
    let mut differentials: Vec<IntMatrix> = Vec::new();
    for _ in 1..count {
        let cols = *ranks.last().unwrap();
        let rows = rng.gen_range(0..=params.max_rank);
        let d = match differentials.last() {
            None => IntMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| small(rng, 2)).collect()),
            Some(prev) => {
                // rows must annihilate the image of the previous differential
                let left = kernel_basis(&prev.transpose());
                let mut data = Vec::with_capacity(rows * cols);
                for _ in 0..rows {
                    let row = random_row(rng, left.basis(), cols, params.max_entry);
                    data.extend(row);
                }
                IntMatrix::from_vec(rows, cols, data)
            }
        };
        ranks.push(rows);
        differentials.push(d);
    }
    CochainComplex::new(lo, ranks, differentials).expect("d ∘ d = 0 by construction")
}

fn random_row(rng: &mut ChaCha8Rng, basis: &[Vec<BigInt>], cols: usize, bound: i64) -> Vec<BigInt> {
    for _ in 0..8 {
        let mut row = vec![BigInt::from(0); cols];
        for b in basis {
            let c = small(rng, 1);
            for (x, y) in row.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        if row.iter().all(|x| x.abs() <= BigInt::from(bound)) {
            return row;
        }
    }
    vec![BigInt::from(0); cols]
}

/// `V + dV` for random generators `V` added on top of `seed`.
fn grow(rng: &mut ChaCha8Rng, c: &CochainComplex, seed: &[Subgroup]) -> Result<Vec<Subgroup>> {
    let degrees: Vec<i32> = c.degree_range().collect();
    let mut v = Vec::with_capacity(degrees.len());
    for (k, &l) in degrees.iter().enumerate() {
        let n = c.rank(l);
        let extra = if n == 0 { 0 } else { rng.gen_range(0..=2) };
        let gens = (0..extra).map(|_| random_vector(rng, n, 2)).collect();
        v.push(seed[k].sum(&Subgroup::from_generators(n, gens))?);
    }
    close_up(c, &v)
}

fn close_up(c: &CochainComplex, v: &[Subgroup]) -> Result<Vec<Subgroup>> {
    let degrees: Vec<i32> = c.degree_range().collect();
    let mut out = Vec::with_capacity(v.len());
    for (k, &l) in degrees.iter().enumerate() {
        let mut s = v[k].clone();
        if k > 0 {
            s = s.sum(&v[k - 1].image(&c.d(l - 1))?)?;
        }
        out.push(s);
    }
    Ok(out)
}

/// Random filtration on `c`, starting in `[-2, 1]`.
pub fn random_filtration(rng: &mut ChaCha8Rng, c: Arc<CochainComplex>, params: &CorpusParams) -> Result<FilteredComplex> {
    let start = rng.gen_range(-2..=1);
    let steps_wanted = rng.gen_range(1..=params.max_steps);
    let mut current = c.zero_terms();
    let mut steps = Vec::with_capacity(steps_wanted);
    for _ in 0..steps_wanted {
        current = grow(rng, &c, &current)?;
        steps.push(current.clone());
    }
    steps.reverse();
    if rng.gen_bool(0.3) {
        let cut = grow(rng, &c, &c.zero_terms())?;
        let cut = close_up(&c, &cut)?;
        for step in &mut steps {
            for (s, t) in step.iter_mut().zip(&cut) {
                *s = s.intersection(t)?;
            }
        }
    }
    // F^{start} is everything; the random steps follow
    let mut all = vec![c.full_terms()];
    all.extend(steps);
    FilteredComplex::new(c, start, all)
}

/// `count` filtered complexes, deterministic in `seed`.
pub fn corpus(seed: u64, count: usize) -> Result<Vec<FilteredComplex>> {
    corpus_with(seed, count, &CorpusParams::default())
}

pub fn corpus_with(seed: u64, count: usize, params: &CorpusParams) -> Result<Vec<FilteredComplex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c = Arc::new(random_complex(&mut rng, params));
            random_filtration(&mut rng, c, params)
        })
        .collect()
}

/// Random complex of dimension at most 2 on 4 to 7 vertices.
pub fn random_space(rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let n = rng.gen_range(4..=7usize);
    let mut facets: Vec<Vec<String>> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rng.gen_bool(0.3) {
                    facets.push(vec![a.to_string(), b.to_string(), c.to_string()]);
                }
            }
            if rng.gen_bool(0.15) {
                facets.push(vec![a.to_string(), b.to_string()]);
            }
        }
    }
    if facets.is_empty() {
        facets.push(vec!["0".into(), "1".into(), "2".into()]);
    }
    SimplicialComplex::from_labeled(&facets).expect("distinct labels")
}

/// Flag of length 1 or 2; each step is the closure of a random sample of
/// the one above.
pub fn random_flag(rng: &mut ChaCha8Rng, x: &SimplicialComplex) -> ClosedSubcomplexFlag {
    let len = rng.gen_range(1..=2);
    let mut lower: Vec<Vec<SimplexId>> = Vec::with_capacity(len);
    let mut pool: Vec<SimplexId> = x.ids().collect();
    for _ in 0..len {
        let pick: Vec<SimplexId> = pool.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
        pool = Subcomplex::closure_of(x, &pick).ids().collect();
        lower.push(pick);
    }
    ClosedSubcomplexFlag::from_closures(x, &lower).expect("nested by construction")
}

/// `count` spaces with flags, deterministic in `seed`.
pub fn flag_corpus(seed: u64, count: usize) -> Vec<(SimplicialComplex, ClosedSubcomplexFlag)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = random_space(&mut rng);
            let flag = random_flag(&mut rng, &x);
            (x, flag)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let a = corpus(7, 30).unwrap();
        let b = corpus(7, 30).unwrap();
        assert_eq!(a, b);
        for f in &a {
            let c = f.base();
            assert!(c.is_valid());
            assert!(c.degree_range().count() <= 7);
            assert!(c.ranks().iter().all(|&r| r <= 6));
            for d in c.differentials() {
                assert!(d.max_abs_entry() <= BigInt::from(4));
            }
            if let Some((lo, hi)) = f.filtration_type() {
                assert!(hi - lo < 4);
            }
        }
        assert_ne!(corpus(8, 30).unwrap(), a);
    }

    #[test]
    fn flag_corpus_is_deterministic() {
        let a = flag_corpus(3, 10);
        assert_eq!(a, flag_corpus(3, 10));
        for (x, f) in &a {
            assert!(x.dim().unwrap() <= 2);
            assert!((1..=2).contains(&f.len()));
        }
    }
}
