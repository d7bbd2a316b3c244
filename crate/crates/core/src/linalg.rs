//! Exact solution of small square linear systems with several right-hand
//! sides.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Solves `A X = B` for square rational `A` and an `n × k` block `B`.
///
/// Each row of `[A | B]` is first scaled to integers. Forward elimination is
/// fraction-free (Bareiss: every update is divided exactly by the previous
/// pivot), so intermediate entries stay integer minors of the input and do
/// not blow up. Back substitution is done over the rationals.
pub fn solve(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    let k = b.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != n) || b.len() != n || b.iter().any(|r| r.len() != k) {
        return Err(Error::usage("system must be square with a matching right-hand side"));
    }
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            let lcm = ra
                .iter()
                .chain(rb)
                .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            ra.iter()
                .chain(rb)
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();

    let width = n + k;
    let mut prev = BigInt::one();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::Singular { rows: n, cols: n })?;
        m.swap(col, pivot);
        let (top, rest) = m.split_at_mut(col + 1);
        let p = &top[col];
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..width {
                let v = &p[col] * &row[j] - &f * &p[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }

    let mut x = vec![vec![Rational::zero(); k]; n];
    for row in (0..n).rev() {
        let diag = Rational::from_integer(m[row][row].clone());
        for c in 0..k {
            let mut acc = Rational::from_integer(m[row][n + c].clone());
            for j in row + 1..n {
                acc -= Rational::from_integer(m[row][j].clone()) * &x[j][c];
            }
            x[row][c] = acc / &diag;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn small_system_with_pivoting() {
        let a = mat(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 1]]);
        let b = vec![vec![int(5), int(1)], vec![int(3), int(0)], vec![int(6), int(2)]];
        let x = solve(&a, &b).unwrap();
        for c in 0..2 {
            for r in 0..3 {
                let lhs: Rational = (0..3).map(|j| &a[r][j] * &x[j][c]).sum();
                assert_eq!(lhs, b[r][c]);
            }
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        let b = vec![vec![int(1)], vec![int(2)]];
        assert_eq!(solve(&a, &b), Err(Error::Singular { rows: 2, cols: 2 }));
    }

    fn det(a: &[Vec<Rational>]) -> Rational {
        if a.len() == 1 {
            return a[0][0].clone();
        }
        (0..a.len())
            .map(|c| {
                let minor: Vec<Vec<Rational>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let sign = if c % 2 == 0 { int(1) } else { int(-1) };
                sign * &a[0][c] * det(&minor)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn solves_random_nonsingular_systems(
            entries in proptest::collection::vec(-9i64..=9, 16),
            rhs in proptest::collection::vec((-9i64..=9, 1i64..=5), 8),
        ) {
            let a: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let b: Vec<Vec<Rational>> = rhs.chunks(2).map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect()).collect();
            match solve(&a, &b) {
                Ok(x) => {
                    for c in 0..2 {
                        for r in 0..4 {
                            let lhs: Rational = (0..4).map(|j| &a[r][j] * &x[j][c]).sum();
                            prop_assert_eq!(&lhs, &b[r][c]);
                        }
                    }
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular { rows: 4, cols: 4 });
                    prop_assert!(det(&a).is_zero());
                }
            }
        }
    }
}
