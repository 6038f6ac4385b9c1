//! Subresultants of univariate polynomials via the determinant polynomial
//! formulation.
//!
//! Principal subresultant coefficients obey the classical contract:
//! sres_k ≡ 0 for k < d iff the gcd degree is at least d. The determinant
//! route (rather than a pseudo-remainder sequence) keeps the computation
//! well-behaved for the formal-degree case where leading coefficients may be
//! numerically zero, which the perfect-square certificate relies on.
//!
//! Polynomials are ascending coefficient slices; the formal degree is
//! `len() - 1` (no trimming here — callers decide).

use crate::C64;

/// In-place determinant of a flat row-major n×n matrix, partial pivoting.
pub fn det_small(m: &mut [C64], n: usize) -> C64 {
    debug_assert_eq!(m.len(), n * n);
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        // pivot
        let mut piv = col;
        let mut piv_mag = m[col * n + col].norm();
        for r in (col + 1)..n {
            let mag = m[r * n + col].norm();
            if mag > piv_mag {
                piv = r;
                piv_mag = mag;
            }
        }
        if piv_mag == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != col {
            for c in 0..n {
                m.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        let d = m[col * n + col];
        det *= d;
        for r in (col + 1)..n {
            let f = m[r * n + col] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[col * n + c];
                m[r * n + c] -= f * v;
            }
        }
    }
    det
}

/// Sylvester matrix of p (degree m) and q (degree n), (m+n)×(m+n), rows of
/// shifted p then shifted q, columns by descending degree.
pub fn sylvester(p: &[C64], q: &[C64]) -> Vec<C64> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut mat = vec![C64::new(0.0, 0.0); size * size];
    // row i (0..n): x^{n-1-i} p -> coefficient of degree (m+n-1-c) at column c
    for i in 0..n {
        for (j, c) in p.iter().rev().enumerate() {
            mat[i * size + i + j] = *c;
        }
    }
    for i in 0..m {
        for (j, c) in q.iter().rev().enumerate() {
            mat[(n + i) * size + i + j] = *c;
        }
    }
    mat
}

pub fn resultant(p: &[C64], q: &[C64]) -> C64 {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let mut mat = sylvester(p, q);
    det_small(&mut mat, m + n)
}

/// Rows of the order-k subresultant construction: x^{n-k-1}p … p,
/// x^{m-k-1}q … q, as coefficient rows in the descending degree basis
/// x^{m+n-k-1} … x^0 (width m+n-k). Returns (rows, width, nrows).
fn subres_rows(p: &[C64], q: &[C64], k: usize) -> (Vec<C64>, usize, usize) {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let width = m + n - k;
    let nrows = m + n - 2 * k;
    let mut rows = vec![C64::new(0.0, 0.0); nrows * width];
    // x^{n-k-1-i} p occupies columns i .. i+m in descending basis
    for i in 0..(n - k) {
        for (j, c) in p.iter().rev().enumerate() {
            rows[i * width + i + j] = *c;
        }
    }
    for i in 0..(m - k) {
        for (j, c) in q.iter().rev().enumerate() {
            rows[(n - k + i) * width + i + j] = *c;
        }
    }
    (rows, width, nrows)
}

/// k-th subresultant polynomial S_k(x) of p, q (formal degrees m ≥ n > k),
/// ascending coefficients of length k+1. S_0 is the resultant (constant),
/// S_d is proportional to the gcd when sres_0 = … = sres_{d-1} = 0 ≠ sres_d.
pub fn subresultant_poly(p: &[C64], q: &[C64], k: usize) -> Vec<C64> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    assert!(m >= n && n > k);
    let (rows, width, nrows) = subres_rows(p, q, k);
    let mut out = vec![C64::new(0.0, 0.0); k + 1];
    // columns 0..nrows-1 are fixed; the last column is the degree-j column
    let mut mat = vec![C64::new(0.0, 0.0); nrows * nrows];
    for (j_out, coeff) in out.iter_mut().enumerate() {
        // degree j column lives at index width - 1 - j
        let col_j = width - 1 - j_out;
        for r in 0..nrows {
            for c in 0..(nrows - 1) {
                mat[r * nrows + c] = rows[r * width + c];
            }
            mat[r * nrows + nrows - 1] = rows[r * width + col_j];
        }
        *coeff = det_small(&mut mat, nrows);
    }
    out
}

/// Principal subresultant coefficient sres_k = coefficient of x^k in S_k.
pub fn psc(p: &[C64], q: &[C64], k: usize) -> C64 {
    let m = p.len() - 1;
    let n = q.len() - 1;
    if k == n {
        // convention: sres_n = lc(q)^{m-n}
        let lc = q[n];
        return (0..(m - n)).fold(C64::new(1.0, 0.0), |acc, _| acc * lc);
    }
    let (rows, width, nrows) = subres_rows(p, q, k);
    let mut mat = vec![C64::new(0.0, 0.0); nrows * nrows];
    for r in 0..nrows {
        mat[r * nrows..r * nrows + nrows].copy_from_slice(&rows[r * width..r * width + nrows]);
    }
    det_small(&mut mat, nrows)
}

/// The full principal subresultant sequence sres_0 … sres_{deg q}.
pub fn principal_subresultants(p: &[C64], q: &[C64]) -> Vec<C64> {
    let n = q.len() - 1;
    (0..=n).map(|k| psc(p, q, k)).collect()
}
