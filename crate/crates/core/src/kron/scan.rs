// SPDX-License-Identifier: Apache-2.0

use super::matrix::{DenseMatrix, MatrixKind};
use crate::error::{Error, Result};

/// Reshapes `x` into an `s × ⌈n/s⌉` matrix whose column `j` is
/// `x[js .. js+s]`, zero padded. Requires `1 < s < n`.
pub fn mat_s(x: &[i64], s: usize) -> Result<DenseMatrix> {
    if s <= 1 || s >= x.len() {
        return Err(Error::param(
            "s",
            format!("need 1 < s < n, got s = {s}, n = {}", x.len()),
        ));
    }
    Ok(reshape(x, s))
}

fn reshape(x: &[i64], s: usize) -> DenseMatrix {
    let cols = x.len().div_ceil(s);
    DenseMatrix::from_fn(s, cols, |i, j| x.get(j * s + i).copied().unwrap_or(0))
}

/// Stacks the columns of `m`.
pub fn vec(m: &DenseMatrix) -> Vec<i64> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push(m.get(i, j));
        }
    }
    out
}

/// Prefix sums of `x` (length `n1 * n2`) as
/// `vec(L_{n2} X) + vec(1 (1ᵀ X) U⁻_{n1})` with `X = mat_{n2}(x)`.
///
/// The second term is never formed as an `n × n` product: `1ᵀ X` is the
/// vector of block totals and multiplying by `U⁻` is their exclusive scan.
pub fn prefix_via_kron(x: &[i64], n1: usize, n2: usize) -> Result<Vec<i64>> {
    if n1 == 0 || n2 == 0 || n1 * n2 != x.len() {
        return Err(Error::param(
            "n1*n2",
            format!("{n1} * {n2} does not equal the length {}", x.len()),
        ));
    }
    let big_x = reshape(x, n2);
    let local = &DenseMatrix::build(MatrixKind::L, n2) * &big_x;
    let totals = &DenseMatrix::from_fn(1, n2, |_, _| 1) * &big_x;
    let offsets = &totals * &DenseMatrix::build(MatrixKind::Uminus, n1);
    let broadcast = &DenseMatrix::from_fn(n2, 1, |_, _| 1) * &offsets;
    Ok(vec(&(&local + &broadcast)))
}

/// Prefix sums by the pairwise halving recursion:
///
/// 1. `w = 1ᵀ mat_2(x)`, the pair totals;
/// 2. `z` = prefix sums of `w`, recursively;
/// 3. row 1 of `Y` is `z`; row 0 is `X(0, j) + z(j-1)` for `j >= 1`.
///
/// Odd lengths peel the last element and add it to the final prefix.
pub fn brent_kung_kron_step(x: &[i64]) -> Vec<i64> {
    let n = x.len();
    if n <= 1 {
        return x.to_vec();
    }
    if n % 2 == 1 {
        let mut y = brent_kung_kron_step(&x[..n - 1]);
        y.push(y[n - 2] + x[n - 1]);
        return y;
    }
    let big_x = reshape(x, 2);
    let w = &DenseMatrix::from_fn(1, 2, |_, _| 1) * &big_x;
    let z = brent_kung_kron_step(w.entries());
    let mut y = big_x.clone();
    for j in 0..n / 2 {
        y.set(1, j, z[j]);
        if j >= 1 {
            y.set(0, j, big_x.get(0, j) + z[j - 1]);
        }
    }
    vec(&y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fold(x: &[i64]) -> Vec<i64> {
        x.iter()
            .scan(0i64, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    #[test]
    fn mat_s_columns() {
        let m = mat_s(&[1, 2, 3, 4, 5, 6], 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(vec(&m), vec![1, 2, 3, 4, 5, 6]);
        let padded = mat_s(&[1, 2, 3, 4, 5], 2).unwrap();
        assert_eq!((padded.get(0, 2), padded.get(1, 2)), (5, 0));
    }

    #[test]
    fn mat_s_range() {
        assert!(mat_s(&[1, 2, 3], 1).is_err());
        assert!(mat_s(&[1, 2, 3], 3).is_err());
    }

    #[test]
    fn kron_prefix_examples() {
        assert_eq!(prefix_via_kron(&[1; 6], 3, 2).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(prefix_via_kron(&[1, 2, 3, 4], 2, 2).unwrap(), vec![1, 3, 6, 10]);
        assert!(prefix_via_kron(&[1, 2, 3], 2, 2).is_err());
    }

    #[test]
    fn halving_examples() {
        assert_eq!(brent_kung_kron_step(&[1, 1, 1, 1]), vec![1, 2, 3, 4]);
        assert_eq!(
            brent_kung_kron_step(&[1, 2, 3, 4, 5, 6, 7, 8]),
            vec![1, 3, 6, 10, 15, 21, 28, 36]
        );
    }

    proptest! {
        #[test]
        fn round_trip(x in proptest::collection::vec(-50i64..50, 3..40), s in 2usize..10) {
            prop_assume!(s < x.len());
            let back = vec(&mat_s(&x, s).unwrap());
            prop_assert_eq!(&back[..x.len()], &x[..]);
            prop_assert!(back[x.len()..].iter().all(|&v| v == 0));
        }

        #[test]
        fn halving_matches_fold(x in proptest::collection::vec(-1000i64..1000, 0..130)) {
            prop_assert_eq!(brent_kung_kron_step(&x), fold(&x));
        }

        #[test]
        fn kron_prefix_matches_fold(x in proptest::collection::vec(-1000i64..1000, 1..60)) {
            let n = x.len();
            for n1 in (1..=n).filter(|d| n % d == 0) {
                prop_assert_eq!(prefix_via_kron(&x, n1, n / n1).unwrap(), fold(&x));
            }
        }
    }
}
