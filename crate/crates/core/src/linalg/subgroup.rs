use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// A subgroup of `Z^ambient`, stored as the column Hermite normal form of
/// its generators. The form is unique per subgroup, so `==` is subgroup
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

/// Column echelon reduction restricted to the first `active_rows` rows.
/// Columns past the returned pivot count vanish on the active rows. With
/// `reduce` set, entries to the left of each pivot are brought into
/// `[0, pivot)`, which makes the result the Hermite normal form.
fn column_echelon(cols: &mut [Vec<BigInt>], active_rows: usize, reduce: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    for row in 0..active_rows {
        let c = pivots.len();
        if c == cols.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in c..cols.len() {
                let x = &cols[j][row];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if cols[b][row].abs() <= x.abs() => {}
                    _ => best = Some(j),
                }
            }
            let Some(b) = best else { break };
            cols.swap(c, b);
            let (head, tail) = cols.split_at_mut(c + 1);
            let pivot_col = &head[c];
            let mut done = true;
            for col in tail.iter_mut() {
                if col[row].is_zero() {
                    continue;
                }
                let q = col[row].div_floor(&pivot_col[row]);
                sub_multiple(col, pivot_col, &q);
                if !col[row].is_zero() {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            if cols[c][row].is_negative() {
                for x in cols[c].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            if reduce {
                let (head, tail) = cols.split_at_mut(c);
                let pivot_col = &tail[0];
                for col in head.iter_mut() {
                    let q = col[row].div_floor(&pivot_col[row]);
                    sub_multiple(col, pivot_col, &q);
                }
            }
            pivots.push(row);
            break;
        }
    }
    pivots
}

/// `col -= q * other`
fn sub_multiple(col: &mut [BigInt], other: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (x, y) in col.iter_mut().zip(other) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Saturated basis of `{x : M x = 0}`, as a subgroup of `Z^cols`.
pub fn kernel_basis(m: &IntMatrix) -> Subgroup {
    let (rows, cols) = (m.rows(), m.cols());
    let mut work: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            let mut c = m.column(j);
            c.extend((0..cols).map(|i| BigInt::from((i == j) as u8)));
            c
        })
        .collect();
    let rank = column_echelon(&mut work, rows, false).len();
    let kernel = work[rank..].iter().map(|c| c[rows..].to_vec()).collect();
    Subgroup::from_generators(cols, kernel)
}

impl Subgroup {
    pub fn from_generators(ambient: usize, gens: Vec<Vec<BigInt>>) -> Self {
        let mut cols: Vec<Vec<BigInt>> = gens
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), ambient, "generator length must equal ambient rank"))
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .collect();
        let pivots = column_echelon(&mut cols, ambient, true);
        cols.truncate(pivots.len());
        Subgroup {
            ambient,
            basis: cols,
            pivots,
        }
    }

    /// Column span of `m`.
    pub fn column_span(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), m.columns())
    }

    pub fn zero(ambient: usize) -> Self {
        Subgroup {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|j| (0..ambient).map(|i| BigInt::from((i == j) as u8)).collect())
            .collect();
        Subgroup {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the standard basis vectors `e_i` for the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let gens = indices
            .into_iter()
            .map(|j| (0..ambient).map(|i| BigInt::from((i == j) as u8)).collect())
            .collect();
        Self::from_generators(ambient, gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient, &self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient
            && self
                .pivots
                .iter()
                .zip(&self.basis)
                .all(|(&p, c)| c[p] == BigInt::from(1))
    }

    fn check_ambient(&self, other_ambient: usize) -> Result<()> {
        if self.ambient != other_ambient {
            return Err(Error::AmbientMismatch(self.ambient, other_ambient));
        }
        Ok(())
    }

    /// Coefficients of `x` in the Hermite basis, or `None` if `x` is not in
    /// the subgroup.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_ambient(x.len())?;
        let mut rest = x.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for (col, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, r) = rest[p].div_mod_floor(&col[p]);
            if !r.is_zero() {
                return Ok(None);
            }
            sub_multiple(&mut rest, col, &q);
            coeffs.push(q);
        }
        Ok(rest.iter().all(Zero::is_zero).then_some(coeffs))
    }

    pub fn contains_vector(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(x)?.is_some())
    }

    /// `other ⊆ self`
    pub fn contains(&self, other: &Subgroup) -> Result<bool> {
        self.check_ambient(other.ambient)?;
        for b in &other.basis {
            if !self.contains_vector(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_ambient(other.ambient)?;
        if other.is_zero() || self == other {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let gens = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subgroup::from_generators(self.ambient, gens))
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_ambient(other.ambient)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subgroup::zero(self.ambient));
        }
        if self == other || other.is_full() {
            return Ok(self.clone());
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        // pairs (y, z) with A y + B z = 0 give A y ∈ A ∩ B
        let joint = self.basis_matrix().hcat(&other.basis_matrix());
        let k = self.rank();
        let a = self.basis_matrix();
        let gens = kernel_basis(&joint)
            .basis
            .iter()
            .map(|v| a.mul_vec(&v[..k]))
            .collect();
        Ok(Subgroup::from_generators(self.ambient, gens))
    }

    /// `M(self)` as a subgroup of `Z^{M.rows}`.
    pub fn image(&self, m: &IntMatrix) -> Result<Subgroup> {
        self.check_ambient(m.cols())?;
        let gens = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Ok(Subgroup::from_generators(m.rows(), gens))
    }

    /// `{x ∈ Z^{M.cols} : M x ∈ target}`
    pub fn preimage(m: &IntMatrix, target: &Subgroup) -> Result<Subgroup> {
        target.check_ambient(m.rows())?;
        if target.is_full() {
            return Ok(Subgroup::full(m.cols()));
        }
        let n = m.cols();
        let joint = m.hcat(&target.basis_matrix());
        let gens = kernel_basis(&joint)
            .basis
            .iter()
            .map(|v| v[..n].to_vec())
            .collect();
        Ok(Subgroup::from_generators(n, gens))
    }

    /// Smallest saturated subgroup containing `self`, i.e. `(self ⊗ Q) ∩ Z^n`.
    pub fn saturation(&self) -> Subgroup {
        if self.is_zero() {
            return self.clone();
        }
        let left_kernel = kernel_basis(&self.basis_matrix().transpose());
        if left_kernel.is_zero() {
            return Subgroup::full(self.ambient);
        }
        kernel_basis(&left_kernel.basis_matrix().transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn span(ambient: usize, gens: &[&[i64]]) -> Subgroup {
        Subgroup::from_generators(ambient, gens.iter().map(|g| v(g)).collect())
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntMatrix::zeros(2, 3)), Subgroup::full(3));
        assert_eq!(kernel_basis(&IntMatrix::from_rows(&[vec![1, 1]])), span(2, &[&[1, -1]]));
        assert!(kernel_basis(&IntMatrix::identity(4)).is_zero());
        // saturated even when the relation has content
        assert_eq!(kernel_basis(&IntMatrix::from_rows(&[vec![2, 4]])), span(2, &[&[2, -1]]));
    }

    #[test]
    fn sums() {
        let a = span(2, &[&[1, 2], &[0, 3]]);
        assert_eq!(a.sum(&Subgroup::zero(2)).unwrap(), a);
        assert_eq!(span(1, &[&[2]]).sum(&span(1, &[&[3]])).unwrap(), Subgroup::full(1));
        assert_eq!(a.sum(&a).unwrap(), a);
    }

    #[test]
    fn intersections() {
        let a = span(2, &[&[1, 2], &[0, 3]]);
        assert_eq!(a.intersection(&Subgroup::full(2)).unwrap(), a);
        assert_eq!(span(1, &[&[2]]).intersection(&span(1, &[&[3]])).unwrap(), span(1, &[&[6]]));
        assert!(a.intersection(&Subgroup::zero(2)).unwrap().is_zero());
        let b = span(2, &[&[2, 0], &[0, 2]]);
        let ab = a.intersection(&b).unwrap();
        assert!(a.contains(&ab).unwrap() && b.contains(&ab).unwrap());
    }

    #[test]
    fn membership() {
        let e1 = v(&[1]);
        assert!(span(1, &[&[2]]).contains(&Subgroup::zero(1)).unwrap());
        assert!(!span(1, &[&[2]]).contains_vector(&e1).unwrap());
        assert!(span(1, &[&[2], &[3]]).contains_vector(&e1).unwrap());
        assert!(matches!(
            span(1, &[&[2]]).contains(&Subgroup::zero(2)),
            Err(Error::AmbientMismatch(1, 2))
        ));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = span(3, &[&[2, 4, 6], &[1, 1, 1]]);
        let b = span(3, &[&[1, 1, 1], &[0, 2, 4], &[3, 5, 7]]);
        assert_eq!(a, b);
    }

    #[test]
    fn preimage_and_saturation() {
        let d = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(Subgroup::preimage(&d, &Subgroup::zero(1)).unwrap(), Subgroup::zero(1));
        assert_eq!(Subgroup::preimage(&d, &span(1, &[&[4]])).unwrap(), span(1, &[&[2]]));
        assert_eq!(span(2, &[&[2, 4]]).saturation(), span(2, &[&[1, 2]]));
        assert_eq!(span(2, &[&[2, 0], &[0, 3]]).saturation(), Subgroup::full(2));
    }
}
