//! Division-free characteristic polynomials (Berkowitz).
//!
//! The iteration grows the principal submatrix from the bottom-right corner.
//! Writing the current matrix as `[[a, R], [C, M]]`, the characteristic
//! polynomial is the product of a lower-triangular Toeplitz matrix with
//! first column `(1, -a, -RC, -RMC, -RM²C, …)` and the coefficient vector of
//! the characteristic polynomial of `M`. Only ring operations are used, so
//! the result is valid when the entries are polynomials.

use super::matrix::Matrix;
use crate::ring::Poly;

/// Coefficients `[1, c_1, …, c_n]` of `det(z·I − A) = z^n + c_1 z^(n−1) + … + c_n`.
pub fn berkowitz(a: &Matrix) -> Vec<Poly> {
    assert_eq!(a.rows(), a.cols(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let field = a.field();
    let zero = || Poly::zero(field, Vec::new());
    let mut coeffs = vec![Poly::one(field)];
    for i in (0..n).rev() {
        let s = n - 1 - i;
        let mut t = Vec::with_capacity(s + 2);
        t.push(Poly::one(field));
        t.push(-a.get(i, i));
        // v runs through M^k C
        let mut v: Vec<Poly> = (i + 1..n).map(|r| a.get(r, i).clone()).collect();
        for k in 0..s {
            let rv = (0..s).fold(zero(), |acc, j| &acc + &(a.get(i, i + 1 + j) * &v[j]));
            t.push(-&rv);
            if k + 1 < s {
                v = (0..s)
                    .map(|r| (0..s).fold(zero(), |acc, j| &acc + &(a.get(i + 1 + r, i + 1 + j) * &v[j])))
                    .collect();
            }
        }
        let next: Vec<Poly> = (0..s + 2)
            .map(|j| (0..=j).filter(|&k| j - k <= s).fold(zero(), |acc, k| &acc + &(&t[k] * &coeffs[j - k])))
            .collect();
        coeffs = next;
    }
    coeffs
}
