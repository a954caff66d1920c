// SPDX-License-Identifier: Apache-2.0

//! Exact Kronecker-product algebra over triangular all-ones matrices.

mod hstats;
mod matrix;
mod scan;

pub use hstats::{h_stats, HStats};
pub use matrix::{DenseMatrix, MatrixKind};
pub use scan::{brent_kung_kron_step, mat_s, prefix_via_kron, vec};

use MatrixKind::*;

/// Checks the four block identities for `n = n1 * n2`:
///
/// ```text
/// L_n = L_{n1} ⊗ L_{n2} + L⁻_{n1} ⊗ U⁻_{n2}
/// L_n = I_{n1} ⊗ L_{n2} + L⁻_{n1} ⊗ 1 1ᵀ
/// U_n = U_{n1} ⊗ U_{n2} + U⁻_{n1} ⊗ L⁻_{n2}
/// U_n = U_{n1} ⊗ 1 1ᵀ − I_{n1} ⊗ L⁻_{n2}
/// ```
///
/// Factors below 2 are outside the statement and return `false`.
pub fn theorem1_check(n1: usize, n2: usize) -> bool {
    if n1 < 2 || n2 < 2 {
        return false;
    }
    let n = n1 * n2;
    let b = |k, m| DenseMatrix::build(k, m);
    let ln = b(L, n);
    let un = b(U, n);

    let first = &b(L, n1).kron(&b(L, n2)) + &b(Lminus, n1).kron(&b(Uminus, n2));
    let second = &b(I, n1).kron(&b(L, n2)) + &b(Lminus, n1).kron(&b(Ones, n2));
    let third = &b(U, n1).kron(&b(U, n2)) + &b(Uminus, n1).kron(&b(Lminus, n2));
    let fourth = &b(U, n1).kron(&b(Ones, n2)) - &b(I, n1).kron(&b(Lminus, n2));

    first == ln && second == ln && third == un && fourth == un
}
