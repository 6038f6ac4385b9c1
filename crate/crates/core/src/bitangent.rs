//! All 28 bitangent lines of a smooth plane quartic, with contact points and
//! perfect-square certificates.
//!
//! A line ℓ is bitangent iff the restriction of the quartic to ℓ is a scalar
//! times the square of a binary quadratic. Candidates are produced per dual
//! chart by eliminating the two subresultant bitangency conditions
//! A(u,v) = sres₀(b, ∂b), B(u,v) = sres₁(b, ∂b); every candidate is polished
//! by Newton on the exact conditions and then certified independently by
//! re-expansion. Certification, not elimination degree, is the source of
//! truth.

use crate::dd::CDd;
use crate::elim::{self, BivarPoly};
use crate::poly::{line_basis, restrict_along, BinaryForm, BinaryQuartic, HomPoly};
use crate::precision::Mode;
use crate::projective::{self, ProjVec};
use crate::roots;
use crate::subres;
use crate::{Error, Precision, Result, C64};
use rayon::prelude::*;

/// Restriction of a quartic to a line, with the parameterization that maps
/// contact parameters back to plane points.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub form: BinaryQuartic,
    pub p0: ProjVec,
    pub p1: ProjVec,
}

/// Restrict a quartic (or any homogeneous polynomial) to a line, using the
/// deterministic orthogonal-complement basis of the covector.
pub fn restrict(q: &HomPoly, line: &ProjVec) -> Result<Restriction> {
    let (p0, p1) = line_basis(line)?;
    Ok(Restriction {
        form: restrict_along(q, &p0, &p1),
        p0,
        p1,
    })
}

/// A certified factorization b = scale · root² of a binary quartic.
#[derive(Debug, Clone)]
pub struct SquareCertificate {
    pub scale: C64,
    /// binary quadratic r with b ≈ scale·r²
    pub root: BinaryForm,
    /// relative re-expansion residual ‖b − scale·r²‖/‖b‖
    pub residual: f64,
}

fn p1_dist(a: (C64, C64), b: (C64, C64)) -> f64 {
    let na = (a.0.norm_sqr() + a.1.norm_sqr()).sqrt();
    let nb = (b.0.norm_sqr() + b.1.norm_sqr()).sqrt();
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    (a.0 * b.1 - a.1 * b.0).norm() / (na * nb)
}

fn p1_normalize(r: (C64, C64)) -> (C64, C64) {
    if r.0.norm() >= r.1.norm() {
        (C64::new(1.0, 0.0), r.1 / r.0)
    } else {
        (r.0 / r.1, C64::new(1.0, 0.0))
    }
}

fn p1_midpoint(a: (C64, C64), b: (C64, C64)) -> (C64, C64) {
    let a = p1_normalize(a);
    let b = p1_normalize(b);
    // align phases via the Hermitian inner product before averaging
    let inner = a.0 * b.0.conj() + a.1 * b.1.conj();
    let phase = if inner.norm() > 0.0 {
        inner / C64::new(inner.norm(), 0.0)
    } else {
        C64::new(1.0, 0.0)
    };
    ((a.0 + b.0 * phase) * C64::new(0.5, 0.0), (a.1 + b.1 * phase) * C64::new(0.5, 0.0))
}

/// Least-squares scalar and re-expansion residual of b ≈ c·r² for a given r
/// (b pre-normalized by the caller).
fn expand_residual(bhat: &BinaryQuartic, r: &BinaryForm) -> (C64, f64) {
    let r2 = r.mul(r);
    let num: C64 = r2
        .coeffs
        .iter()
        .zip(&bhat.coeffs)
        .map(|(x, y)| x.conj() * y)
        .sum();
    let den: f64 = r2.coeffs.iter().map(|x| x.norm_sqr()).sum();
    if den == 0.0 {
        return (C64::new(0.0, 0.0), f64::INFINITY);
    }
    let c = num / C64::new(den, 0.0);
    let mut err = 0.0f64;
    for (x, y) in r2.coeffs.iter().zip(&bhat.coeffs) {
        err += (x * c - y).norm_sqr();
    }
    (c, err.sqrt() / bhat.norm2())
}

/// Best-effort recovery of (r, c) with b ≈ c·r², without any acceptance
/// gate: the degree-2 subresultant gcd when usable, else projective root
/// clustering; near-quadruple roots average all four roots (their leading
/// perturbations cancel).
pub fn recover_square_root(b: &BinaryQuartic, prec: &Precision) -> Option<(BinaryForm, C64, f64)> {
    if b.is_zero() {
        return None;
    }
    let m = b.max_abs();
    let bhat = b.scale(C64::new(1.0 / m, 0.0));
    let p = bhat.univariate_in_s();
    let dp: Vec<C64> = (1..p.len())
        .map(|i| p[i] * C64::new(i as f64, 0.0))
        .collect();
    let mut best: Option<(BinaryForm, C64, f64)> = None;
    let consider = |r: BinaryForm, best: &mut Option<(BinaryForm, C64, f64)>| {
        let (c, res) = expand_residual(&bhat, &r);
        if best.as_ref().map_or(true, |(_, _, b0)| res < *b0) {
            *best = Some((r, c, res));
        }
    };
    // gcd route: S₂ of (b, ∂b)
    let g = subres::subresultant_poly(&p, &dp, 2);
    let gmax = g.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if gmax > 1e-10 {
        let r = BinaryForm::new(vec![g[2], g[1], g[0]]).scale(C64::new(1.0 / gmax, 0.0));
        consider(r, &mut best);
    }
    // projective root-clustering route
    if let Ok(rs) = roots::binary_roots(&bhat, prec) {
        if rs.len() == 4 {
            let max_spread = (0..4)
                .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                .map(|(i, j)| p1_dist(rs[i], rs[j]))
                .fold(0.0, f64::max);
            if max_spread < 3e-3 {
                // quadruple root: phase-aligned mean of all four
                let mut acc = p1_normalize(rs[0]);
                for r in &rs[1..] {
                    let rn = p1_normalize(*r);
                    let inner = acc.0 * rn.0.conj() + acc.1 * rn.1.conj();
                    let phase = if inner.norm() > 0.0 {
                        inner / C64::new(inner.norm(), 0.0)
                    } else {
                        C64::new(1.0, 0.0)
                    };
                    acc = (acc.0 + rn.0 * phase, acc.1 + rn.1 * phase);
                }
                let l = BinaryForm::new(vec![acc.1, -acc.0]);
                consider(l.mul(&l), &mut best);
            } else {
                let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
                let mut best_pairing = None;
                let mut best_cost = f64::INFINITY;
                for pr in &pairings {
                    let cost =
                        p1_dist(rs[pr[0].0], rs[pr[0].1]).max(p1_dist(rs[pr[1].0], rs[pr[1].1]));
                    if cost < best_cost {
                        best_cost = cost;
                        best_pairing = Some(pr);
                    }
                }
                if let Some(pr) = best_pairing {
                    let m1 = p1_midpoint(rs[pr[0].0], rs[pr[0].1]);
                    let m2 = p1_midpoint(rs[pr[1].0], rs[pr[1].1]);
                    // r = (t₁ s − s₁ t)(t₂ s − s₂ t)
                    let l1 = BinaryForm::new(vec![m1.1, -m1.0]);
                    let l2 = BinaryForm::new(vec![m2.1, -m2.0]);
                    consider(l1.mul(&l2), &mut best);
                }
            }
        }
    }
    best.map(|(r, c, res)| (r, c * C64::new(m, 0.0), res))
}

/// Gauss–Newton refinement of (r, c) against a fixed restriction b,
/// minimizing ‖b − c·r²‖ with one r-coefficient gauge-frozen.
fn refine_square_root(b: &BinaryQuartic, r0: &BinaryForm, c0: C64) -> (BinaryForm, C64, f64) {
    use nalgebra::{DMatrix, DVector};
    let scale = b.max_abs().max(f64::MIN_POSITIVE);
    let gauge = {
        let mut g = 0;
        let mut m = 0.0;
        for (i, x) in r0.coeffs.iter().enumerate() {
            if x.norm() > m {
                m = x.norm();
                g = i;
            }
        }
        g
    };
    let free: Vec<usize> = (0..3).filter(|&i| i != gauge).collect();
    let mut r = r0.clone();
    let mut c = c0;
    let residual_vec = |r: &BinaryForm, c: C64| -> Vec<C64> {
        let r2 = r.mul(r);
        (0..5)
            .map(|k| (b.coeffs[k] - c * r2.coeffs[k]) / C64::new(scale, 0.0))
            .collect()
    };
    let res_norm = |v: &[C64]| v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut best = (r.clone(), c, res_norm(&residual_vec(&r, c)));
    for _ in 0..8 {
        let f0 = residual_vec(&r, c);
        let h = C64::new(1e-7, 0.0);
        // columns: c, then the free r coefficients
        let mut jac = DMatrix::<C64>::zeros(5, 3);
        let fc = residual_vec(&r, c + h);
        for k in 0..5 {
            jac[(k, 0)] = (fc[k] - f0[k]) / h;
        }
        for (col, &i) in free.iter().enumerate() {
            let mut rp = r.clone();
            rp.coeffs[i] += h;
            let fr = residual_vec(&rp, c);
            for k in 0..5 {
                jac[(k, col + 1)] = (fr[k] - f0[k]) / h;
            }
        }
        let rhs = DVector::from_vec(f0.clone());
        let step = crate::linalg::lstsq(&jac, &rhs);
        c -= step[0];
        for (col, &i) in free.iter().enumerate() {
            r.coeffs[i] -= step[col + 1];
        }
        let rn = res_norm(&residual_vec(&r, c));
        if rn < best.2 {
            best = (r.clone(), c, rn);
        }
        if rn < 1e-15 {
            break;
        }
    }
    // report the residual relative to ‖b‖₂ for consistency with recovery
    let r2 = best.0.mul(&best.0);
    let mut err = 0.0;
    for (x, y) in r2.coeffs.iter().zip(&b.coeffs) {
        err += (x * best.1 - y).norm_sqr();
    }
    (best.0, best.1, err.sqrt() / b.norm2())
}

/// Decide whether a binary quartic is a perfect square (times a scalar) and
/// recover the factorization.
///
/// The two principal subresultant conditions sres₀(b, ∂b) and sres₁(b, ∂b)
/// gate the decision; r comes from the degree-2 subresultant gcd with a
/// projective root-clustering fallback for the degenerate shapes (roots at
/// infinity, hyperflexes), is refined against b, and is always validated by
/// re-expansion.
pub fn square_certificate(
    b: &BinaryQuartic,
    prec: &Precision,
) -> Result<Option<SquareCertificate>> {
    if b.is_zero() {
        return Err(Error::InvalidInput(
            "square certificate of the zero restriction".into(),
        ));
    }
    let m = b.max_abs();
    let bhat = b.scale(C64::new(1.0 / m, 0.0));
    let p = bhat.univariate_in_s();
    let dp: Vec<C64> = (1..p.len())
        .map(|i| p[i] * C64::new(i as f64, 0.0))
        .collect();
    let s0 = subres::psc(&p, &dp, 0);
    let s1 = subres::psc(&p, &dp, 1);
    if s0.norm() > prec.tol_sq || s1.norm() > prec.tol_sq {
        return Ok(None);
    }
    let Some((r0, c0, _)) = recover_square_root(b, prec) else {
        return Ok(None);
    };
    let (r, c, res) = refine_square_root(b, &r0, c0);
    if res < prec.tol_sq {
        Ok(Some(SquareCertificate {
            scale: c,
            root: r,
            residual: res,
        }))
    } else {
        Ok(None)
    }
}

/// One certified bitangent.
#[derive(Debug, Clone)]
pub struct Bitangent {
    /// normalized line covector
    pub line: ProjVec,
    /// contact points (equal for hyperflex lines)
    pub contact: [ProjVec; 2],
    /// certificate re-expansion residual
    pub certificate: f64,
    /// binary quadratic whose square matches the restriction
    pub square_root: BinaryForm,
    /// parameterization of the line used for `square_root`
    pub p0: ProjVec,
    pub p1: ProjVec,
    /// chart the candidate was found in (solver provenance)
    pub chart: usize,
}

/// The 28 bitangents of a quartic.
#[derive(Debug, Clone)]
pub struct BitangentSet {
    pub quartic: HomPoly,
    pub lines: Vec<Bitangent>,
}

impl BitangentSet {
    pub fn dual_points(&self) -> Vec<ProjVec> {
        self.lines.iter().map(|b| b.line.dual()).collect()
    }

    pub fn covectors(&self) -> Vec<ProjVec> {
        self.lines.iter().map(|b| b.line).collect()
    }
}

/// Dual-chart line covector: coordinate `chart` equals −1, the remaining two
/// (ascending) are (u, v).
pub fn chart_line(chart: usize, u: C64, v: C64) -> ProjVec {
    let neg = C64::new(-1.0, 0.0);
    let coords = match chart {
        0 => [neg, u, v],
        1 => [u, neg, v],
        _ => [u, v, neg],
    };
    ProjVec::line(coords)
}

/// Fixed chart parameterization: p0 = e_a + u·e_c, p1 = e_b + v·e_c for
/// chart coordinate c and the others a < b. Polynomial in (u, v), which the
/// interpolation of the bitangency conditions relies on.
fn chart_basis(chart: usize, u: C64, v: C64) -> (ProjVec, ProjVec) {
    let o = C64::new(0.0, 0.0);
    let i = C64::new(1.0, 0.0);
    match chart {
        0 => (ProjVec::point([u, i, o]), ProjVec::point([v, o, i])),
        1 => (ProjVec::point([i, u, o]), ProjVec::point([o, v, i])),
        _ => (ProjVec::point([i, o, u]), ProjVec::point([o, i, v])),
    }
}

fn restriction_in_chart(q: &HomPoly, chart: usize, u: C64, v: C64) -> BinaryQuartic {
    let (p0, p1) = chart_basis(chart, u, v);
    restrict_along(q, &p0, &p1)
}

fn conditions_at(q: &HomPoly, chart: usize, u: C64, v: C64) -> (C64, C64) {
    let b = restriction_in_chart(q, chart, u, v);
    let p = b.univariate_in_s();
    let dp: Vec<C64> = (1..p.len())
        .map(|i| p[i] * C64::new(i as f64, 0.0))
        .collect();
    (subres::psc(&p, &dp, 0), subres::psc(&p, &dp, 1))
}

/// The two bitangency conditions of a chart as bivariate polynomials.
pub fn bitangency_conditions(q: &HomPoly, chart: usize) -> (BivarPoly, BivarPoly) {
    let a = elim::interpolate_bivariate(28, 28, |u, v| conditions_at(q, chart, u, v).0);
    let b = elim::interpolate_bivariate(28, 28, |u, v| conditions_at(q, chart, u, v).1);
    (a.trimmed(1e-10), b.trimmed(1e-10))
}
/// Polish the full square system b(u,v) = c·r(s,t)² in chart coordinates,
/// with the line, the scalar and the free coefficients of r as unknowns.
/// Unlike Newton on the bare subresultant conditions this system stays
/// regular at hyperflex lines, where sres₀ and sres₁ vanish to higher order.
fn polish_square<T: crate::dd::ComplexScalar>(
    q: &HomPoly,
    chart: usize,
    start: (C64, C64),
    r0: &BinaryForm,
    c0: C64,
    iters: usize,
) -> ((C64, C64), BinaryForm, C64, f64) {
    use crate::dd::solve_small;
    let exps: Vec<(usize, usize, usize)> = (0..q.coeffs.len())
        .map(|i| crate::poly::monomial_exponents(4, i))
        .collect();
    let qc: Vec<T> = q.coeffs.iter().map(|&z| T::from_c64(z)).collect();
    let binom = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    // restriction coefficients indexed by s-power 0..4
    let restrict_t = |u: T, v: T| -> [T; 5] {
        let mut up = [T::one(); 5];
        let mut vp = [T::one(); 5];
        for i in 1..5 {
            up[i] = up[i - 1].mul(u);
            vp[i] = vp[i - 1].mul(v);
        }
        let mut bk = [T::zero(); 5];
        for (m, &(a, b, cc)) in exps.iter().enumerate() {
            if qc[m].abs() == 0.0 {
                continue;
            }
            // chart roles: x_a = s, x_b = t, x_c = su + tv
            let (ec, ea) = match chart {
                0 => (a, b),
                1 => (b, a),
                _ => (cc, a),
            };
            for j in 0..=ec {
                let k = ea + j;
                let coeff = qc[m]
                    .mul(T::from_f64(binom[ec][j]))
                    .mul(up[j])
                    .mul(vp[ec - j]);
                bk[k] = bk[k].add(coeff);
            }
        }
        bk
    };
    // gauge: freeze the largest coefficient of r0
    let gauge = {
        let mut g = 0;
        let mut m = 0.0;
        for (i, x) in r0.coeffs.iter().enumerate() {
            if x.norm() > m {
                m = x.norm();
                g = i;
            }
        }
        g
    };
    // r by s-power: rp[j] = coefficient of s^j t^(2-j); BinaryForm stores
    // descending, so rp[j] = coeffs[2 - j]
    let frozen = T::from_c64(r0.coeffs[gauge]);
    let b_start = restriction_in_chart(q, chart, start.0, start.1);
    let scale = T::from_f64(b_start.max_abs().max(f64::MIN_POSITIVE));
    // unknowns: [u, v, c, r_free1, r_free2]
    let free: Vec<usize> = (0..3).filter(|&i| i != gauge).collect();
    let residual = |x: &[T; 5]| -> [T; 5] {
        let (u, v, c) = (x[0], x[1], x[2]);
        let mut rc = [T::zero(); 3]; // descending, like BinaryForm
        rc[gauge] = frozen;
        rc[free[0]] = x[3];
        rc[free[1]] = x[4];
        // r² by s-power: rp[j] = rc[2 - j]
        let rp = [rc[2], rc[1], rc[0]];
        let mut rsq = [T::zero(); 5];
        for i in 0..3 {
            for j in 0..3 {
                rsq[i + j] = rsq[i + j].add(rp[i].mul(rp[j]));
            }
        }
        let bk = restrict_t(u, v);
        let mut out = [T::zero(); 5];
        for k in 0..5 {
            out[k] = bk[k].sub(c.mul(rsq[k])).div(scale);
        }
        out
    };
    let res_norm = |f: &[T; 5]| f.iter().map(|x| x.abs()).fold(0.0, f64::max);

    let mut x = [
        T::from_c64(start.0),
        T::from_c64(start.1),
        T::from_c64(c0),
        T::from_c64(r0.coeffs[free[0]]),
        T::from_c64(r0.coeffs[free[1]]),
    ];
    let mut best = x;
    let mut best_res = res_norm(&residual(&x));
    let h = T::from_f64(T::eps().sqrt() * 0.1 + T::eps() * 10.0);
    for _ in 0..iters {
        let f0 = residual(&x);
        let mut jac = vec![T::zero(); 25];
        for col in 0..5 {
            let mut xp = x;
            xp[col] = xp[col].add(h);
            let fp = residual(&xp);
            for row in 0..5 {
                jac[row * 5 + col] = fp[row].sub(f0[row]).div(h);
            }
        }
        let mut rhs = f0;
        let Some(step) = solve_small(&mut jac, &mut rhs, 5) else {
            break;
        };
        let mut step_norm = 0.0;
        for col in 0..5 {
            x[col] = x[col].sub(step[col]);
            step_norm += step[col].abs();
        }
        let r = res_norm(&residual(&x));
        if r < best_res {
            best_res = r;
            best = x;
        }
        if r < T::eps() * 10.0 || step_norm < T::eps() * 10.0 {
            break;
        }
    }
    let mut rc = [C64::new(0.0, 0.0); 3];
    rc[gauge] = frozen.to_c64();
    rc[free[0]] = best[3].to_c64();
    rc[free[1]] = best[4].to_c64();
    (
        (best[0].to_c64(), best[1].to_c64()),
        BinaryForm::new(rc.to_vec()),
        best[2].to_c64(),
        best_res,
    )
}


#[derive(Debug, Clone)]
struct Candidate {
    covector: ProjVec,
    chart: usize,
    uv: (C64, C64),
    res: f64,
}

fn solve_chart(q: &HomPoly, chart: usize, prec: &Precision) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    let (a, b) = bitangency_conditions(q, chart);
    if a.is_negligible() || b.is_negligible() || a.deg_v() == 0 || b.deg_v() == 0 {
        return out;
    }
    let r = roots::trim(&elim::resultant_wrt_v(&a, &b), 1e-11);
    if r.len() <= 1 {
        return out;
    }
    let u_roots = roots::roots_best_effort(&r, prec);
    let (au, av) = (a.d_du(), a.d_dv());
    let (bu, bv) = (b.d_du(), b.d_dv());
    let sb = b.max_abs().max(f64::MIN_POSITIVE);
    for u in u_roots {
        let slice = roots::trim(&a.v_slice(u), 1e-8);
        if slice.len() <= 1 {
            continue;
        }
        let v_roots = roots::roots_best_effort(&slice, prec);
        for v in v_roots {
            let growth = (1.0 + u.norm() + v.norm()).powi(6);
            if b.eval(u, v).norm() / sb > 1e-2 * growth {
                continue;
            }
            let ((u1, v1), res1) = elim::newton2(&a, &b, &au, &av, &bu, &bv, (u, v), 30);
            if res1 > 1e-4 {
                continue;
            }
            let rest = restriction_in_chart(q, chart, u1, v1);
            let Some((r0, c0, _)) = recover_square_root(&rest, prec) else {
                continue;
            };
            let ((u2, v2), _, _, res2) = polish_square::<C64>(q, chart, (u1, v1), &r0, c0, 25);
            if res2 > 1e-10 {
                continue;
            }
            let Ok(cov) = chart_line(chart, u2, v2).normalized() else {
                continue;
            };
            if out
                .iter()
                .all(|c| projective::proj_dist(&c.covector, &cov) > prec.tol_dup)
            {
                out.push(Candidate {
                    covector: cov,
                    chart,
                    uv: (u2, v2),
                    res: res2,
                });
            }
        }
    }
    out
}

fn merge_candidates(all: Vec<Candidate>, prec: &Precision) -> Vec<Candidate> {
    let mut clusters: Vec<Candidate> = Vec::new();
    for c in all {
        match clusters
            .iter_mut()
            .find(|k| projective::proj_dist(&k.covector, &c.covector) <= prec.tol_dup)
        {
            Some(k) => {
                if c.res < k.res {
                    *k = c;
                }
            }
            None => clusters.push(c),
        }
    }
    clusters
}

/// Stable complex quadratic roots of a binary quadratic r₂s² + r₁st + r₀t².
pub fn binary_quadratic_roots(r: &BinaryForm) -> [(C64, C64); 2] {
    assert_eq!(r.degree, 2);
    let (a, b, c) = (r.coeffs[0], r.coeffs[1], r.coeffs[2]);
    let scale = r.max_abs();
    if a.norm() < 1e-14 * scale {
        // one root at infinity
        if b.norm() < 1e-14 * scale {
            // degenerate: double root at infinity
            return [(C64::new(1.0, 0.0), C64::new(0.0, 0.0)); 2];
        }
        return [
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            (-c / b, C64::new(1.0, 0.0)),
        ];
    }
    let disc = b * b - C64::new(4.0, 0.0) * a * c;
    let sq = disc.sqrt();
    // choose the sign that avoids cancellation
    let q = if (b + sq).norm() >= (b - sq).norm() {
        -(b + sq) * C64::new(0.5, 0.0)
    } else {
        -(b - sq) * C64::new(0.5, 0.0)
    };
    if q.norm() < 1e-300 {
        // double root at s/t = -b/(2a)
        let s = -b / (C64::new(2.0, 0.0) * a);
        return [(s, C64::new(1.0, 0.0)), (s, C64::new(1.0, 0.0))];
    }
    [(q / a, C64::new(1.0, 0.0)), (c / q, C64::new(1.0, 0.0))]
}

/// Polish a contact parameter: at a double root of b both ∂b/∂s and ∂b/∂t
/// vanish, so Newton on the partial with the well-scaled affine coordinate
/// converges to it.
fn polish_contact(b: &BinaryQuartic, root: (C64, C64)) -> (C64, C64) {
    let ds = b.d_ds();
    let dds = ds.d_ds();
    let (s0, t0) = root;
    if t0.norm() >= s0.norm() {
        // affine in s at t = 1
        let mut s = s0 / t0;
        let mut best = s;
        let mut best_res = ds.eval(s, C64::new(1.0, 0.0)).norm();
        for _ in 0..40 {
            let f = ds.eval(s, C64::new(1.0, 0.0));
            let df = dds.eval(s, C64::new(1.0, 0.0));
            if df.norm() < 1e-300 {
                break;
            }
            let step = f / df;
            s -= step;
            let r = ds.eval(s, C64::new(1.0, 0.0)).norm();
            if r < best_res {
                best_res = r;
                best = s;
            }
            if step.norm() < 1e-16 * (1.0 + s.norm()) {
                break;
            }
        }
        if (best - s0 / t0).norm() > 0.1 * (1.0 + best.norm()) {
            return root; // refused to leave the basin
        }
        (best, C64::new(1.0, 0.0))
    } else {
        let dt = d_dt(b);
        let ddt = d_dt(&dt);
        let mut t = t0 / s0;
        let mut best = t;
        let mut best_res = dt.eval(C64::new(1.0, 0.0), t).norm();
        for _ in 0..40 {
            let f = dt.eval(C64::new(1.0, 0.0), t);
            let df = ddt.eval(C64::new(1.0, 0.0), t);
            if df.norm() < 1e-300 {
                break;
            }
            let step = f / df;
            t -= step;
            let r = dt.eval(C64::new(1.0, 0.0), t).norm();
            if r < best_res {
                best_res = r;
                best = t;
            }
            if step.norm() < 1e-16 * (1.0 + t.norm()) {
                break;
            }
        }
        if (best - t0 / s0).norm() > 0.1 * (1.0 + best.norm()) {
            return root;
        }
        (C64::new(1.0, 0.0), best)
    }
}

fn d_dt(b: &BinaryForm) -> BinaryForm {
    let d = b.degree;
    assert!(d >= 1);
    let coeffs: Vec<C64> = (1..=d).map(|i| b.coeffs[i] * C64::new(i as f64, 0.0)).collect();
    BinaryForm::new(coeffs)
}

/// Certify a candidate line against the quartic; returns the full bitangent
/// record when the perfect-square certificate passes.
pub fn certify_line(
    q: &HomPoly,
    line: &ProjVec,
    chart: usize,
    prec: &Precision,
) -> Result<Option<Bitangent>> {
    let line = line.normalized()?;
    let rest = restrict(q, &line)?;
    let Some(cert) = square_certificate(&rest.form, prec)? else {
        return Ok(None);
    };
    let roots2 = binary_quadratic_roots(&cert.root);
    let mut contact = [ProjVec::point_re(1.0, 0.0, 0.0); 2];
    for (i, r) in roots2.iter().enumerate() {
        let (s, t) = polish_contact(&rest.form, *r);
        let pt = ProjVec::point([
            s * rest.p0.coords[0] + t * rest.p1.coords[0],
            s * rest.p0.coords[1] + t * rest.p1.coords[1],
            s * rest.p0.coords[2] + t * rest.p1.coords[2],
        ]);
        let pt = pt.normalized()?;
        // contact points lie on the quartic and on the line
        if q.incidence_residual(&pt) > prec.tol_geo {
            return Ok(None);
        }
        contact[i] = pt;
    }
    Ok(Some(Bitangent {
        line,
        contact,
        certificate: cert.residual,
        square_root: cert.root,
        p0: rest.p0,
        p1: rest.p1,
        chart,
    }))
}

fn lex_key(v: &ProjVec) -> [f64; 6] {
    [
        v.coords[0].re,
        v.coords[0].im,
        v.coords[1].re,
        v.coords[1].im,
        v.coords[2].re,
        v.coords[2].im,
    ]
}

fn lex_cmp(a: &ProjVec, b: &ProjVec) -> std::cmp::Ordering {
    let (ka, kb) = (lex_key(a), lex_key(b));
    for i in 0..6 {
        match ka[i].partial_cmp(&kb[i]).unwrap() {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Compute all 28 bitangents of a smooth quartic.
///
/// Candidates from the three dual charts are merged by projective
/// deduplication and certified individually; at standard precision a count
/// mismatch triggers one retry with double-double polishing before failing.
pub fn bitangents(q: &HomPoly, prec: &Precision) -> Result<BitangentSet> {
    if q.degree != 4 {
        return Err(Error::InvalidInput("bitangents need a quartic".into()));
    }
    prec.validate()?;
    if !elim::is_smooth(q, prec) {
        return Err(Error::NotSmooth);
    }
    let q = q.normalized()?;

    let run = |extended: bool| -> Vec<Bitangent> {
        let mut all: Vec<Candidate> = (0..3usize)
            .into_par_iter()
            .flat_map_iter(|chart| solve_chart(&q, chart, prec))
            .collect();
        if extended {
            for c in all.iter_mut() {
                let rest = restriction_in_chart(&q, c.chart, c.uv.0, c.uv.1);
                let Some((r0, c0, _)) = recover_square_root(&rest, prec) else {
                    continue;
                };
                let ((u, v), _, _, res) =
                    polish_square::<CDd>(&q, c.chart, c.uv, &r0, c0, 20);
                if res < c.res {
                    c.uv = (u, v);
                    c.res = res;
                    if let Ok(cov) = chart_line(c.chart, u, v).normalized() {
                        c.covector = cov;
                    }
                }
            }
        }
        let merged = merge_candidates(all, prec);
        let mut lines: Vec<Bitangent> = Vec::new();
        for c in merged {
            if let Ok(Some(bt)) = certify_line(&q, &c.covector, c.chart, prec) {
                if lines
                    .iter()
                    .all(|l| projective::proj_dist(&l.line, &bt.line) > prec.tol_dup)
                {
                    lines.push(bt);
                }
            }
        }
        lines
    };

    let mut lines = run(prec.mode == Mode::Extended);
    if lines.len() != 28 && prec.mode == Mode::Standard {
        lines = run(true);
    }
    if lines.len() != 28 {
        return Err(Error::CountMismatch(lines.len()));
    }
    lines.sort_by(|a, b| lex_cmp(&a.line, &b.line));
    Ok(BitangentSet { quartic: q, lines })
}

/// Whether the 8 contact points of four distinct bitangents lie on a conic.
pub fn syzygetic_test(q: &HomPoly, four: &[Bitangent], prec: &Precision) -> Result<bool> {
    if four.len() != 4 {
        return Err(Error::InvalidInput("syzygetic test needs 4 bitangents".into()));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if projective::proj_dist(&four[i].line, &four[j].line) <= prec.tol_dup {
                return Err(Error::InvalidInput(
                    "duplicated bitangent among the four".into(),
                ));
            }
        }
    }
    let _ = q;
    let pts: Vec<ProjVec> = four
        .iter()
        .flat_map(|b| b.contact.iter().cloned())
        .collect();
    let (_, svals) = crate::linalg::incidence_nullvector(&pts, 2)?;
    Ok(svals[5] < prec.tol_geo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::HomPoly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn fermat() -> HomPoly {
        HomPoly::from_terms_re(4, &[(4, 0, 0, 1.0), (0, 4, 0, 1.0), (0, 0, 4, 1.0)])
    }

    #[test]
    fn restrict_examples() {
        // x⁴+y⁴+z⁴ on the line z = 0 gives s⁴ + t⁴
        let q = fermat();
        let r = restrict(&q, &ProjVec::line_re(0.0, 0.0, 1.0)).unwrap();
        assert!((r.p0.coords[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((r.p1.coords[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((r.form.coeff_s(4) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((r.form.coeff_s(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(r.form.coeff_s(1).norm() < 1e-15);
        // x⁴ restricted to its own line is identically zero (flagged)
        let q2 = HomPoly::from_terms_re(4, &[(4, 0, 0, 1.0)]);
        let r2 = restrict(&q2, &ProjVec::line_re(1.0, 0.0, 0.0)).unwrap();
        assert!(r2.form.is_zero());
        assert!(square_certificate(&r2.form, &Precision::default()).is_err());
    }

    #[test]
    fn restrict_matches_pointwise_evaluation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut rnd = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let q = HomPoly::new(4, (0..15).map(|_| rnd()).collect()).unwrap();
        let line = ProjVec::line([rnd(), rnd(), rnd()]);
        let r = restrict(&q, &line).unwrap();
        for _ in 0..5 {
            let (s, t) = (rnd(), rnd());
            let pt = ProjVec::point([
                s * r.p0.coords[0] + t * r.p1.coords[0],
                s * r.p0.coords[1] + t * r.p1.coords[1],
                s * r.p0.coords[2] + t * r.p1.coords[2],
            ]);
            assert!((r.form.eval(s, t) - q.eval(&pt)).norm() < 1e-12);
        }
    }

    #[test]
    fn certificate_examples() {
        let prec = Precision::default();
        // (s² + st + t²)²
        let r = BinaryForm::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let b = r.mul(&r);
        let cert = square_certificate(&b, &prec).unwrap().unwrap();
        assert!(cert.residual < 1e-12);
        assert!((cert.scale - c(1.0, 0.0)).norm() < 1e-10);
        // s⁴ + t⁴: distinct simple roots, no certificate
        let b2 = BinaryForm::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(square_certificate(&b2, &prec).unwrap().is_none());
        // s⁴: hyperflex shape, r = s²
        let b3 = BinaryForm::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let cert3 = square_certificate(&b3, &prec).unwrap().unwrap();
        assert!(cert3.residual < 1e-12);
        assert!((cert3.root.coeffs[0].norm() - cert3.root.max_abs()).abs() < 1e-12);
    }

    #[test]
    fn fermat_has_28_certified_bitangents() {
        let prec = Precision::default();
        let set = bitangents(&fermat(), &prec).unwrap();
        assert_eq!(set.lines.len(), 28);
        for b in &set.lines {
            assert!(b.certificate < 1e-8, "certificate {}", b.certificate);
        }
        // the hyperflex line x = α y with α⁴ = -1 is among them, and its two
        // contact points coincide
        let alpha = C64::from_polar(1.0, std::f64::consts::PI / 4.0);
        let l = ProjVec::line([c(1.0, 0.0), -alpha, c(0.0, 0.0)]);
        let ln = l.normalized().unwrap();
        let hit = set
            .lines
            .iter()
            .find(|b| projective::proj_dist(&b.line, &ln) < 1e-6)
            .expect("hyperflex bitangent found");
        assert!(projective::proj_dist(&hit.contact[0], &hit.contact[1]) < 1e-4);
    }

    #[test]
    fn klein_has_28_certified_bitangents() {
        let prec = Precision::default();
        let klein = HomPoly::from_terms_re(4, &[(3, 1, 0, 1.0), (0, 3, 1, 1.0), (1, 0, 3, 1.0)]);
        let set = bitangents(&klein, &prec).unwrap();
        assert_eq!(set.lines.len(), 28);
        for b in &set.lines {
            assert!(b.certificate < 1e-8);
            for p in &b.contact {
                assert!(klein.incidence_residual(p) < 1e-8);
                assert!(b.line.incidence(p).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn singular_quartic_is_rejected() {
        let prec = Precision::default();
        let nodal = HomPoly::from_terms_re(
            4,
            &[
                (4, 0, 0, 1.0),
                (2, 2, 0, 2.0),
                (0, 4, 0, 1.0),
                (2, 1, 1, 3.0),
                (0, 3, 1, -1.0),
            ],
        );
        assert_eq!(bitangents(&nodal, &prec).unwrap_err(), Error::NotSmooth);
    }

    #[test]
    fn perturbed_fermat_deforms_continuously() {
        use rand::{Rng, SeedableRng};
        let prec = Precision::default();
        let base = bitangents(&fermat(), &prec).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut coeffs = fermat().coeffs.clone();
        for co in coeffs.iter_mut() {
            *co += c(rng.gen_range(-1e-4..1e-4), rng.gen_range(-1e-4..1e-4));
        }
        let pert = HomPoly::new(4, coeffs).unwrap();
        let set = bitangents(&pert, &prec).unwrap();
        assert_eq!(set.lines.len(), 28);
        // nearest-neighbor matching within a deformation tolerance
        let (perm, worst) = projective::match_sets(
            &base.covectors(),
            &set.covectors(),
            1e-2,
        )
        .expect("sets match");
        assert_eq!(perm.len(), 28);
        assert!(worst < 1e-2);
    }

    #[test]
    fn real_quartic_lines_closed_under_conjugation() {
        let prec = Precision::default();
        let set = bitangents(&crate::families::random_smooth_quartic(3, &prec), &prec).unwrap();
        let lines = set.covectors();
        let conj: Vec<ProjVec> = lines
            .iter()
            .map(|l| {
                ProjVec::line([
                    l.coords[0].conj(),
                    l.coords[1].conj(),
                    l.coords[2].conj(),
                ])
            })
            .collect();
        assert!(projective::match_sets(&lines, &conj, prec.tol_dup).is_some());
    }

    #[test]
    fn equivariance_under_projective_maps() {
        let prec = Precision::default();
        let q = crate::families::random_smooth_quartic(11, &prec);
        let m = elim::rotation_matrix(0xabcdef);
        let qm = q.compose_matrix(&m); // qm(x) = q(Mx)
        let set_m = bitangents(&qm, &prec).unwrap();
        let set = bitangents(&q, &prec).unwrap();
        // lines of qm are the pullbacks ℓM of lines ℓ of q
        let pulled: Vec<ProjVec> = set
            .covectors()
            .iter()
            .map(|l| projective::apply_matrix_covector(&m, l).normalized().unwrap())
            .collect();
        assert!(projective::match_sets(&pulled, &set_m.covectors(), 1e-6).is_some());
    }
}
