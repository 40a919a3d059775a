use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith, AbelianGroup, IntMatrix, Subgroup};
use crate::error::{Error, Result};

/// A subquotient `A / B` of a free module with `B ⊆ A`, together with the
/// Smith coordinates that turn it into `⊕ Z/d_i`.
///
/// Coordinates are listed in Smith order: torsion factors ascending, then
/// the free summands. Coordinates of order one are dropped.
#[derive(Clone, Debug)]
pub struct Subquotient {
    numerator: Subgroup,
    denominator: Subgroup,
    transform: IntMatrix,
    kept: Vec<usize>,
    orders: Vec<BigInt>,
    generators: Vec<Vec<BigInt>>,
}

impl Subquotient {
    pub fn new(numerator: Subgroup, denominator: Subgroup) -> Result<Self> {
        if numerator.ambient() != denominator.ambient() {
            return Err(Error::AmbientMismatch(numerator.ambient(), denominator.ambient()));
        }
        let k = numerator.rank();
        let mut relation_cols = Vec::with_capacity(denominator.rank());
        for b in denominator.basis() {
            match numerator.coordinates(b)? {
                Some(c) => relation_cols.push(c),
                None => return Err(Error::NotContained),
            }
        }
        let relations = IntMatrix::from_columns(k, &relation_cols);
        let s = smith(&relations);
        let diag = s.diagonal();
        let basis = numerator.basis_matrix();
        let mut kept = Vec::new();
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        for i in 0..k {
            let order = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if order.is_one() {
                continue;
            }
            kept.push(i);
            orders.push(order);
            generators.push(basis.mul_vec(&s.u_inv.column(i)));
        }
        Ok(Subquotient {
            numerator,
            denominator,
            transform: s.u,
            kept,
            orders,
            generators,
        })
    }

    pub fn numerator(&self) -> &Subgroup {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subgroup {
        &self.denominator
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::from_orders(self.orders.iter().cloned())
    }

    /// Number of Smith coordinates (free and torsion).
    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    /// Order of each coordinate; zero marks a free summand.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Representatives in the ambient module, one per coordinate.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Smith coordinates of the class of `x`, reduced modulo each order.
    pub fn class_of(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let Some(y) = self.numerator.coordinates(x)? else {
            return Err(Error::NotContained);
        };
        let z = self.transform.mul_vec(&y);
        Ok(self
            .kept
            .iter()
            .zip(&self.orders)
            .map(|(&i, d)| reduce(&z[i], d))
            .collect())
    }

    /// Brings arbitrary coordinates into the reduced range.
    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords.iter().zip(&self.orders).map(|(x, d)| reduce(x, d)).collect()
    }

    pub fn is_zero_class(&self, coords: &[BigInt]) -> bool {
        self.reduce(coords).iter().all(Zero::is_zero)
    }

    /// Lattice of relations on the coordinates: `⊕ d_i Z` (`d_i = 0` free).
    pub fn relation_lattice(&self) -> Subgroup {
        relation_lattice(&self.orders)
    }

    /// Matrix of a homomorphism into `target`, where `f` maps ambient
    /// representatives of `self` into the ambient module of `target`.
    pub fn map_matrix<F>(&self, target: &Subquotient, f: F) -> Result<IntMatrix>
    where
        F: Fn(&[BigInt]) -> Vec<BigInt>,
    {
        let mut cols = Vec::with_capacity(self.dim());
        for g in &self.generators {
            cols.push(target.class_of(&f(g))?);
        }
        Ok(IntMatrix::from_columns(target.dim(), &cols))
    }
}

fn reduce(x: &BigInt, order: &BigInt) -> BigInt {
    if order.is_zero() {
        x.clone()
    } else {
        x.mod_floor(order)
    }
}

pub(crate) fn relation_lattice(orders: &[BigInt]) -> Subgroup {
    let n = orders.len();
    let gens = orders
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, d)| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = d.clone();
            e
        })
        .collect();
    Subgroup::from_generators(n, gens)
}

/// Isomorphism class of `A / B` for `B ⊆ A`.
pub fn subquotient(a: &Subgroup, b: &Subgroup) -> Result<AbelianGroup> {
    Ok(Subquotient::new(a.clone(), b.clone())?.group())
}

/// Class of `Z^rows / im(M)`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let diag = smith(m).diagonal();
    let orders = (0..m.rows()).map(|i| diag.get(i).cloned().unwrap_or_else(BigInt::zero));
    AbelianGroup::from_orders(orders)
}

/// Homology at the middle of `A --f--> B --g--> C`, where each group is
/// given by its cyclic orders (zero meaning `Z`) and maps by coordinate
/// matrices. Independent of how the matrices were produced.
pub fn homology_of_maps(
    incoming: &IntMatrix,
    middle_orders: &[BigInt],
    outgoing: &IntMatrix,
    target_orders: &[BigInt],
) -> Result<AbelianGroup> {
    let mid_relations = relation_lattice(middle_orders);
    let kernel = Subgroup::preimage(outgoing, &relation_lattice(target_orders))?;
    let image = Subgroup::column_span(incoming).sum(&mid_relations)?;
    subquotient(&kernel, &image)
}

/// True when the coordinate matrix `m` represents the zero map into a group
/// with the given cyclic orders.
pub fn is_zero_map(m: &IntMatrix, target_orders: &[BigInt]) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| reduce(m.get(i, j), &target_orders[i]).is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(ambient: usize, gens: &[&[i64]]) -> Subgroup {
        Subgroup::from_generators(
            ambient,
            gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![2]])), AbelianGroup::cyclic(2));
        assert_eq!(cokernel(&IntMatrix::zeros(2, 1)), AbelianGroup::free(2));
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])), AbelianGroup::cyclic(6));
    }

    #[test]
    fn subquotient_examples() {
        let a = span(2, &[&[1, 2], &[0, 3]]);
        assert!(subquotient(&a, &a).unwrap().is_trivial());
        assert_eq!(subquotient(&Subgroup::full(1), &span(1, &[&[2]])).unwrap(), AbelianGroup::cyclic(2));
        let a = span(2, &[&[2, 0], &[0, 3]]);
        let b = span(2, &[&[6, 0], &[0, 6]]);
        assert_eq!(subquotient(&a, &b).unwrap(), AbelianGroup::cyclic(6));
        assert!(matches!(subquotient(&b, &a), Err(Error::NotContained)));
    }

    #[test]
    fn class_coordinates() {
        // Z^2 / <(2, 0)> = Z/2 ⊕ Z
        let q = Subquotient::new(Subgroup::full(2), span(2, &[&[2, 0]])).unwrap();
        assert_eq!(q.group(), AbelianGroup { free_rank: 1, torsion: vec![BigInt::from(2)] });
        let c = q.class_of(&[BigInt::from(2), BigInt::from(0)]).unwrap();
        assert!(q.is_zero_class(&c));
        for (g, d) in q.generators().iter().zip(q.orders()) {
            let c = q.class_of(g).unwrap();
            assert!(!q.is_zero_class(&c), "generator of order {d} is zero");
        }
    }
}
