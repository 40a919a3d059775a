use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{smith, IntMatrix};

/// Isomorphism class of a finitely generated abelian group:
/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    #[serde(rename = "freeRank")]
    pub free_rank: usize,
    #[serde(with = "crate::io::bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_orders([BigInt::from(order)])
    }

    /// Normalizes a direct sum of cyclic groups `Z/n` (with `n = 0` meaning
    /// `Z`) into invariant-factor form.
    pub fn from_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        let mut free_rank = 0;
        let mut finite = Vec::new();
        for n in orders {
            let n = n.abs();
            if n.is_zero() {
                free_rank += 1;
            } else if !n.is_one() {
                finite.push(n);
            }
        }
        let torsion = if finite.len() <= 1 {
            finite
        } else {
            let k = finite.len();
            let mut m = IntMatrix::zeros(k, k);
            for (i, n) in finite.into_iter().enumerate() {
                m.set(i, i, n);
            }
            smith(&m)
                .diagonal()
                .into_iter()
                .filter(|d| !d.is_one())
                .collect()
        };
        AbelianGroup { free_rank, torsion }
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let orders = self
            .torsion
            .iter()
            .chain(&other.torsion)
            .cloned()
            .chain(std::iter::repeat_n(BigInt::zero(), self.free_rank + other.free_rank));
        Self::from_orders(orders)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Class of `G ⊗ Q`, kept as a free group of the same rank.
    pub fn tensor_rationals(&self) -> AbelianGroup {
        AbelianGroup::free(self.free_rank)
    }
}

impl std::iter::Sum for AbelianGroup {
    fn sum<I: Iterator<Item = AbelianGroup>>(iter: I) -> Self {
        iter.fold(AbelianGroup::trivial(), |acc, g| acc.direct_sum(&g))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factor_normalization() {
        let g = AbelianGroup::from_orders([2, 3].map(BigInt::from));
        assert_eq!(g.torsion, vec![BigInt::from(6)]);
        let g = AbelianGroup::from_orders([2, 4, 0, 1].map(BigInt::from));
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/4");
    }

    #[test]
    fn sums_are_normalized() {
        let g = AbelianGroup::cyclic(3).direct_sum(&AbelianGroup::cyclic(2));
        assert_eq!(g, AbelianGroup::cyclic(6));
        assert_eq!(g.order(), Some(BigInt::from(6)));
        assert_eq!(AbelianGroup::free(1).order(), None);
        assert!(AbelianGroup::cyclic(1).is_trivial());
    }
}
