use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `D = U * M * V`, with the inverse of `U` alongside for
/// reading quotient generators back in the original basis.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries `d_1 | d_2 | ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Returns `(U, D, V)` with `U`, `V` unimodular and `D = U·M·V` diagonal,
/// each diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith(m);
    (s.u, s.d, s.v)
}

/// Smith normal form with smallest-magnitude pivoting. Ties are broken by
/// row-major position, so the output is a pure function of the input.
pub fn smith(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    // Row and column operations applied in lockstep to the transforms.
    let swap_rows = |a: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, i: usize, j: usize| {
        a.swap_rows(i, j);
        u.swap_rows(i, j);
        ui.swap_cols(i, j);
    };
    // row[t] += c * row[s]
    let add_row = |a: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, t: usize, s: usize, c: &BigInt| {
        a.add_row_multiple(t, s, c);
        u.add_row_multiple(t, s, c);
        ui.add_col_multiple(s, t, &-c);
    };

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a.get(bi, bj).abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, u_inv, v);
            };
            swap_rows(&mut a, &mut u, &mut u_inv, t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(&pivot);
                add_row(&mut a, &mut u, &mut u_inv, i, t, &-q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(&pivot);
                a.add_col_multiple(j, t, &-&q);
                v.add_col_multiple(j, t, &-q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a.get(i, j).mod_floor(&pivot).is_zero())
            });
            match offending {
                Some(i) => add_row(&mut a, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    finish(a, u, u_inv, v)
}

fn finish(d: IntMatrix, u: IntMatrix, u_inv: IntMatrix, v: IntMatrix) -> Smith {
    Smith { u, u_inv, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::determinant;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(determinant(&s.u).abs(), BigInt::one());
        assert_eq!(determinant(&s.v).abs(), BigInt::one());
        let diag = s.diagonal();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility chain broken: {diag:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn empty_matrix() {
        let s = check(&IntMatrix::zeros(0, 0));
        assert_eq!(s.d.rows(), 0);
        assert_eq!(s.u.rows(), 0);
        assert_eq!(s.v.rows(), 0);
    }

    #[test]
    fn two_by_two_example() {
        // [[2,4],[6,8]]: gcd of entries 2, determinant -8 => diag(2, 4)
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let s = check(&IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]));
        assert_eq!(s.rank(), 1);
        let s = check(&IntMatrix::from_rows(&[vec![4], vec![6], vec![0]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2)]);
    }

    #[test]
    fn deterministic() {
        let m = IntMatrix::from_rows(&[vec![3, -4, 7], vec![0, 6, -2], vec![5, 5, 5]]);
        assert_eq!(smith(&m).u, smith(&m).u);
        assert_eq!(smith(&m).v, smith(&m).v);
    }
}
