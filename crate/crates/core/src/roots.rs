//! Simultaneous root finding for univariate complex polynomials.
//!
//! Aberth–Ehrlich iteration from circle starting points, followed by Newton
//! polishing of every root. Multiplicities are estimated afterwards by
//! clustering at the deduplication radius.

use crate::{Error, Precision, Result, C64};

/// Evaluate p (ascending coefficients) and its derivative at z by Horner.
pub fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval_poly(coeffs: &[C64], z: C64) -> C64 {
    eval_with_derivative(coeffs, z).0
}

/// Trim negligible leading (highest-degree) coefficients relative to the
/// largest coefficient.
pub fn trim(coeffs: &[C64], rel_tol: f64) -> Vec<C64> {
    let maxc = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut end = coeffs.len();
    while end > 1 && coeffs[end - 1].norm() <= rel_tol * maxc {
        end -= 1;
    }
    coeffs[..end].to_vec()
}

const MAX_SWEEPS: usize = 200;

/// Aberth sweep plus Newton polish without the residual acceptance gate.
///
/// Elimination pipelines use this for candidate generation: extraneous
/// factors give ill-conditioned multiple roots whose residuals cannot meet
/// the certified contract, and downstream Newton polishing plus
/// certification filters them anyway.
pub fn roots_best_effort(coeffs: &[C64], _prec: &Precision) -> Vec<C64> {
    match roots_impl(coeffs) {
        Some((z, _)) => z,
        None => Vec::new(),
    }
}

/// All complex roots of `p` (ascending coefficients), with multiplicity, as a
/// flat list of length = degree after trimming.
///
/// Residual contract: |p(r)| ≤ tol_sq · ‖p‖ · max(1, |r|)^deg for every root.
pub fn roots(coeffs: &[C64], prec: &Precision) -> Result<Vec<C64>> {
    let Some((z, p)) = roots_impl(coeffs) else {
        return Err(Error::InvalidInput(
            "root finding needs degree >= 1 after trimming".into(),
        ));
    };
    let n = p.len() - 1;
    let norm_p = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let ok = z.iter().all(|&r| {
        let bound = prec.tol_sq * norm_p * r.norm().max(1.0).powi(n as i32);
        eval_poly(&p, r).norm() <= bound
    });
    if !ok {
        return Err(Error::NoConvergence);
    }
    Ok(z)
}

/// Returns (roots including exact origin zeros, trimmed polynomial without
/// the origin factor), or None when the trimmed degree is zero.
fn roots_impl(coeffs: &[C64]) -> Option<(Vec<C64>, Vec<C64>)> {
    let p_full = trim(coeffs, 1e-14);
    let n = p_full.len() - 1;
    if n == 0 {
        return None;
    }
    // pull out exact roots at the origin first
    let mut zeros_at_origin = 0usize;
    let maxc = p_full.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut lo = 0usize;
    while lo < n && p_full[lo].norm() <= 1e-300 * maxc {
        lo += 1;
        zeros_at_origin += 1;
    }
    let p = p_full[lo..].to_vec();
    let n = p.len() - 1;
    let mut out = vec![C64::new(0.0, 0.0); zeros_at_origin];
    if n == 0 {
        return Some((out, p_full));
    }

    let lead = p[n];
    // Cauchy bound for the root radius
    let cauchy = 1.0
        + p[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let r0 = (p[0] / lead).norm().powf(1.0 / n as f64).clamp(1e-3, cauchy);

    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.354) / n as f64 + 0.5;
            C64::from_polar(r0, ang)
        })
        .collect();

    let eps = 1e-14;
    for _ in 0..MAX_SWEEPS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (pv, dpv) = eval_with_derivative(&p, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let newton = if dpv.norm() > 0.0 {
                pv / dpv
            } else {
                // nudge off the critical point
                let nudge = C64::new(1e-8 * (1.0 + z[i].norm()), 1e-8);
                z[i] += nudge;
                continue;
            };
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        s += d.inv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - newton * s;
            let w = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= w;
            let rel = w.norm() / (1.0 + z[i].norm());
            max_step = max_step.max(rel);
        }
        if max_step < eps {
            break;
        }
    }

    // Newton polish, keeping the best iterate by residual
    for zi in z.iter_mut() {
        let mut best = *zi;
        let mut best_res = eval_poly(&p, best).norm();
        let mut cur = *zi;
        for _ in 0..12 {
            let (pv, dpv) = eval_with_derivative(&p, cur);
            if dpv.norm() == 0.0 {
                break;
            }
            cur -= pv / dpv;
            let res = eval_poly(&p, cur).norm();
            if res < best_res {
                best_res = res;
                best = cur;
            }
        }
        *zi = best;
    }

    out.extend(z);
    Some((out, p_full))
}

/// Cluster a root list at `radius`; returns (centroid, multiplicity) pairs.
pub fn cluster(roots: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        used[i] = true;
        for j in (i + 1)..roots.len() {
            if used[j] {
                continue;
            }
            let close = members
                .iter()
                .any(|m| (m - roots[j]).norm() <= radius * (1.0 + m.norm()));
            if close {
                members.push(roots[j]);
                used[j] = true;
            }
        }
        let k = members.len();
        let centroid = members.iter().sum::<C64>() / C64::new(k as f64, 0.0);
        out.push((centroid, k));
    }
    out
}

/// Roots of a binary form (projective roots in P¹), as (s, t) pairs with
/// multiplicity given by repetition. Roots at (1 : 0) come from degree drop.
pub fn binary_roots(form: &crate::poly::BinaryForm, prec: &Precision) -> Result<Vec<(C64, C64)>> {
    let uni = form.univariate_in_s();
    let trimmed = trim(&uni, 1e-12);
    let at_infinity = uni.len() - trimmed.len();
    let mut out: Vec<(C64, C64)> = Vec::with_capacity(form.degree);
    for _ in 0..at_infinity {
        out.push((C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
    }
    if trimmed.len() > 1 {
        for r in roots(&trimmed, prec)? {
            out.push((r, C64::new(1.0, 0.0)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn expand_from_roots(rs: &[C64]) -> Vec<C64> {
        let mut p = vec![c(1.0, 0.0)];
        for r in rs {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (i, a) in p.iter().enumerate() {
                q[i] -= a * r;
                q[i + 1] += a;
            }
            p = q;
        }
        p
    }

    fn match_multiset(found: &[C64], expected: &[C64], tol: f64) -> bool {
        if found.len() != expected.len() {
            return false;
        }
        let mut used = vec![false; expected.len()];
        'outer: for f in found {
            for (j, e) in expected.iter().enumerate() {
                if !used[j] && (f - e).norm() < tol * (1.0 + e.norm()) {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    #[test]
    fn quadratic() {
        let prec = Precision::default();
        // s² - 1
        let rs = roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], &prec).unwrap();
        assert!(match_multiset(&rs, &[c(1.0, 0.0), c(-1.0, 0.0)], 1e-12));
    }

    #[test]
    fn double_root_clusters() {
        let prec = Precision::default();
        // (s-2)²
        let rs = roots(&[c(4.0, 0.0), c(-4.0, 0.0), c(1.0, 0.0)], &prec).unwrap();
        let cl = cluster(&rs, prec.tol_dup);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].1, 2);
        assert!((cl[0].0 - c(2.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn wilkinson_style_product() {
        let prec = Precision::default();
        let expected: Vec<C64> = (1..=10).map(|k| c(k as f64, 0.0)).collect();
        let p = expand_from_roots(&expected);
        let rs = roots(&p, &prec).unwrap();
        assert!(match_multiset(&rs, &expected, 1e-6));
    }

    #[test]
    fn random_constructed_polynomials_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let prec = Precision::default();
        for deg in [3usize, 8, 15, 30] {
            for _ in 0..4 {
                let expected: Vec<C64> = (0..deg)
                    .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect();
                let p = expand_from_roots(&expected);
                let rs = roots(&p, &prec).unwrap();
                assert!(
                    match_multiset(&rs, &expected, 1e-6),
                    "degree {} mismatch",
                    deg
                );
            }
        }
    }

    #[test]
    fn binary_roots_at_infinity() {
        // b = s t (s - t): projective roots (0:1), (1:0), (1:1)
        let b = crate::poly::BinaryForm::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
        let prec = Precision::default();
        let rs = binary_roots(&b, &prec).unwrap();
        assert_eq!(rs.len(), 3);
        let at_inf = rs.iter().filter(|(_, t)| t.norm() == 0.0).count();
        assert_eq!(at_inf, 1);
    }
}
