//! Bivariate elimination: chart restrictions of plane curves, resultants of
//! bivariate polynomials, intersection of two curves, and the smoothness
//! check through the common zeros of the partial derivatives.
//!
//! Projective problems are solved on three affine charts (distinguished
//! coordinate set to 1); every point of P² is interior to the chart of its
//! largest coordinate, and results are merged by projective deduplication.

use crate::poly::HomPoly;
use crate::projective::{self, ProjVec};
use crate::roots;
use crate::{Precision, C64};

/// Dense bivariate polynomial; `c[i][j]` multiplies u^i v^j.
#[derive(Debug, Clone)]
pub struct BivarPoly {
    pub cu: usize,
    pub cv: usize,
    pub c: Vec<C64>,
}

impl BivarPoly {
    pub fn zero(cu: usize, cv: usize) -> Self {
        BivarPoly {
            cu,
            cv,
            c: vec![C64::new(0.0, 0.0); cu * cv],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.c[i * self.cv + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut C64 {
        &mut self.c[i * self.cv + j]
    }

    pub fn deg_u(&self) -> usize {
        self.cu - 1
    }

    pub fn deg_v(&self) -> usize {
        self.cv - 1
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self) -> bool {
        self.max_abs() == 0.0
    }

    pub fn eval(&self, u: C64, v: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in (0..self.cu).rev() {
            let mut row = C64::new(0.0, 0.0);
            for j in (0..self.cv).rev() {
                row = row * v + self.at(i, j);
            }
            acc = acc * u + row;
        }
        acc
    }

    pub fn d_du(&self) -> BivarPoly {
        if self.cu == 1 {
            return BivarPoly::zero(1, self.cv);
        }
        let mut out = BivarPoly::zero(self.cu - 1, self.cv);
        for i in 1..self.cu {
            for j in 0..self.cv {
                *out.at_mut(i - 1, j) = self.at(i, j) * C64::new(i as f64, 0.0);
            }
        }
        out
    }

    pub fn d_dv(&self) -> BivarPoly {
        if self.cv == 1 {
            return BivarPoly::zero(self.cu, 1);
        }
        let mut out = BivarPoly::zero(self.cu, self.cv - 1);
        for i in 0..self.cu {
            for j in 1..self.cv {
                *out.at_mut(i, j - 1) = self.at(i, j) * C64::new(j as f64, 0.0);
            }
        }
        out
    }

    /// Drop trailing rows/columns below `rel_tol` times the largest
    /// coefficient.
    pub fn trimmed(&self, rel_tol: f64) -> BivarPoly {
        let floor = self.max_abs() * rel_tol;
        let mut cu = self.cu;
        while cu > 1 && (0..self.cv).all(|j| self.at(cu - 1, j).norm() <= floor) {
            cu -= 1;
        }
        let mut cv = self.cv;
        while cv > 1 && (0..cu).all(|i| self.at(i, cv - 1).norm() <= floor) {
            cv -= 1;
        }
        let mut out = BivarPoly::zero(cu, cv);
        for i in 0..cu {
            for j in 0..cv {
                *out.at_mut(i, j) = self.at(i, j);
            }
        }
        out
    }

    /// Coefficients in v of the slice at a fixed u, ascending (formal length
    /// cv).
    pub fn v_slice(&self, u: C64) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.cv];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for i in (0..self.cu).rev() {
                acc = acc * u + self.at(i, j);
            }
            *o = acc;
        }
        out
    }
}

/// Affine chart of a homogeneous polynomial: coordinate `chart` set to 1,
/// (u, v) the remaining coordinates in ascending index order.
pub fn chart_poly(p: &HomPoly, chart: usize) -> BivarPoly {
    let d = p.degree;
    let mut out = BivarPoly::zero(d + 1, d + 1);
    for (idx, coeff) in p.coeffs.iter().enumerate() {
        if coeff.norm() == 0.0 {
            continue;
        }
        let (a, b, c) = crate::poly::monomial_exponents(d, idx);
        let e = [a, b, c];
        let (i, j) = match chart {
            0 => (e[1], e[2]),
            1 => (e[0], e[2]),
            _ => (e[0], e[1]),
        };
        *out.at_mut(i, j) += *coeff;
    }
    out.trimmed(0.0)
}

/// Plane point with chart coordinate 1.
pub fn chart_point(chart: usize, u: C64, v: C64) -> ProjVec {
    let one = C64::new(1.0, 0.0);
    let coords = match chart {
        0 => [one, u, v],
        1 => [u, one, v],
        _ => [u, v, one],
    };
    ProjVec::point(coords)
}

/// Inverse DFT of values at the N-th roots of unity:
/// coeff_j = (1/N) Σ_k val_k ω^{-jk}.
pub fn idft(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (k, v) in values.iter().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
            acc += v * C64::from_polar(1.0, ang);
        }
        *o = acc / C64::new(n as f64, 0.0);
    }
    out
}

/// Interpolate a bivariate polynomial of degree bounds (du, dv) from values
/// of a callback on a roots-of-unity tensor grid.
pub fn interpolate_bivariate<F: FnMut(C64, C64) -> C64>(du: usize, dv: usize, mut f: F) -> BivarPoly {
    let nu = du + 1;
    let nv = dv + 1;
    let mut values = vec![C64::new(0.0, 0.0); nu * nv];
    for k in 0..nu {
        let u = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / nu as f64);
        for l in 0..nv {
            let v = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * l as f64 / nv as f64);
            values[k * nv + l] = f(u, v);
        }
    }
    let mut partial = vec![C64::new(0.0, 0.0); nu * nv];
    for k in 0..nu {
        let row = idft(&values[k * nv..(k + 1) * nv]);
        partial[k * nv..(k + 1) * nv].copy_from_slice(&row);
    }
    let mut out = BivarPoly::zero(nu, nv);
    let mut col = vec![C64::new(0.0, 0.0); nu];
    for j in 0..nv {
        for k in 0..nu {
            col[k] = partial[k * nv + j];
        }
        let coeffs = idft(&col);
        for i in 0..nu {
            *out.at_mut(i, j) = coeffs[i];
        }
    }
    out
}

/// Resultant of a and b with respect to v: univariate in u, ascending.
/// The formal Sylvester determinant is evaluated on a roots-of-unity grid in
/// u and interpolated.
pub fn resultant_wrt_v(a: &BivarPoly, b: &BivarPoly) -> Vec<C64> {
    let dva = a.deg_v();
    let dvb = b.deg_v();
    assert!(dva >= 1 && dvb >= 1, "resultant needs positive v-degrees");
    let size = dva + dvb;
    let bound = a.deg_u() * dvb + b.deg_u() * dva;
    let n = bound + 1;
    let mut values = Vec::with_capacity(n);
    let mut mat = vec![C64::new(0.0, 0.0); size * size];
    for k in 0..n {
        let u = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        let ca = a.v_slice(u);
        let cb = b.v_slice(u);
        for x in mat.iter_mut() {
            *x = C64::new(0.0, 0.0);
        }
        for i in 0..dvb {
            for (j, c) in ca.iter().rev().enumerate() {
                mat[i * size + i + j] = *c;
            }
        }
        for i in 0..dva {
            for (j, c) in cb.iter().rev().enumerate() {
                mat[(dvb + i) * size + i + j] = *c;
            }
        }
        values.push(crate::subres::det_small(&mut mat, size));
    }
    idft(&values)
}

/// Newton iteration on a 2×2 bivariate system. Returns the best iterate and
/// its residual relative to the coefficient scales.
pub fn newton2(
    f: &BivarPoly,
    g: &BivarPoly,
    fu: &BivarPoly,
    fv: &BivarPoly,
    gu: &BivarPoly,
    gv: &BivarPoly,
    start: (C64, C64),
    iters: usize,
) -> ((C64, C64), f64) {
    let sf = f.max_abs().max(f64::MIN_POSITIVE);
    let sg = g.max_abs().max(f64::MIN_POSITIVE);
    let res_at = |u: C64, v: C64| -> f64 {
        let rf = f.eval(u, v).norm() / sf;
        let rg = g.eval(u, v).norm() / sg;
        rf.max(rg)
    };
    let (mut u, mut v) = start;
    let mut best = (u, v);
    let mut best_res = res_at(u, v);
    for _ in 0..iters {
        let f0 = f.eval(u, v);
        let g0 = g.eval(u, v);
        let a = fu.eval(u, v);
        let b = fv.eval(u, v);
        let c = gu.eval(u, v);
        let d = gv.eval(u, v);
        let det = a * d - b * c;
        if det.norm() < 1e-300 {
            break;
        }
        let du = (f0 * d - b * g0) / det;
        let dv = (a * g0 - f0 * c) / det;
        u -= du;
        v -= dv;
        let r = res_at(u, v);
        if r < best_res {
            best_res = r;
            best = (u, v);
        }
        if r < 1e-16 || du.norm() + dv.norm() < 1e-16 * (1.0 + u.norm() + v.norm()) {
            break;
        }
    }
    (best, best_res)
}

/// Common zeros of two chart polynomials via Res_v elimination, back
/// substitution and Newton polishing. Best effort: callers enforce counts
/// and certify against the homogeneous originals.
pub fn chart_common_zeros(fa: &BivarPoly, ga: &BivarPoly, prec: &Precision) -> Vec<(C64, C64)> {
    let mut out = Vec::new();
    if fa.deg_v() == 0 && ga.deg_v() == 0 {
        return out;
    }
    let (a, b) = if fa.deg_v() == 0 { (ga, fa) } else { (fa, ga) };
    let r = if b.deg_v() == 0 {
        // b is univariate in u; common zeros live over its roots
        (0..b.cu).map(|i| b.at(i, 0)).collect::<Vec<_>>()
    } else {
        resultant_wrt_v(a, b)
    };
    let r = roots::trim(&r, 1e-11);
    if r.len() <= 1 {
        return out; // degenerate or constant resultant: nothing certified here
    }
    let u_roots = roots::roots_best_effort(&r, prec);
    let fu = a.d_du();
    let fv = a.d_dv();
    let gu = b.d_du();
    let gv = b.d_dv();
    let sb = b.max_abs().max(f64::MIN_POSITIVE);
    for u in u_roots {
        let slice = roots::trim(&a.v_slice(u), 1e-9);
        if slice.len() <= 1 {
            continue;
        }
        let v_roots = roots::roots_best_effort(&slice, prec);
        for v in v_roots {
            let growth = (1.0 + u.norm() + v.norm()).powi(b.deg_u() as i32);
            if b.eval(u, v).norm() / sb > 1e-3 * growth {
                continue;
            }
            let ((pu, pv), res) = newton2(a, b, &fu, &fv, &gu, &gv, (u, v), 40);
            if res < 1e-10 {
                out.push((pu, pv));
            }
        }
    }
    out
}

/// All certified common zeros of two plane curves, merged over the three
/// charts and deduplicated projectively. Acceptance is the homogeneous
/// incidence residual below `accept_res` for both curves.
pub fn intersect_curves(
    f: &HomPoly,
    g: &HomPoly,
    prec: &Precision,
    accept_res: f64,
) -> Vec<ProjVec> {
    let mut found: Vec<ProjVec> = Vec::new();
    for chart in 0..3 {
        let fa = chart_poly(f, chart).trimmed(1e-12);
        let ga = chart_poly(g, chart).trimmed(1e-12);
        if fa.is_negligible() || ga.is_negligible() {
            continue;
        }
        for (u, v) in chart_common_zeros(&fa, &ga, prec) {
            let p = match chart_point(chart, u, v).normalized() {
                Ok(p) => p,
                Err(_) => continue,
            };
            if f.incidence_residual(&p) > accept_res || g.incidence_residual(&p) > accept_res {
                continue;
            }
            if found.iter().all(|q| projective::proj_dist(q, &p) > prec.tol_dup) {
                found.push(p);
            }
        }
    }
    found
}

/// Fixed pseudo-random coordinate change used to escape chart-aligned
/// degeneracies.
pub fn rotation_matrix(seed: u64) -> [[C64; 3]; 3] {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        if projective::invert3(&m).is_ok() {
            return m;
        }
    }
}

/// Certified singular points: common zeros of the three partials, gathered
/// from all partial pairs, with a rotated retry for coordinate-aligned
/// degeneracies. By the Euler relation a gradient zero lies on the curve.
pub fn singular_points(p: &HomPoly, prec: &Precision) -> Vec<ProjVec> {
    let mut out: Vec<ProjVec> = Vec::new();
    let gather = |poly: &HomPoly, back: Option<&[[C64; 3]; 3]>, out: &mut Vec<ProjVec>| {
        let grad = poly.gradient();
        let scale: Vec<f64> = grad.iter().map(|g| g.norm2().max(f64::MIN_POSITIVE)).collect();
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if grad[i].is_zero() || grad[j].is_zero() {
                continue;
            }
            for q in intersect_curves(&grad[i], &grad[j], prec, 1e-6) {
                let ok = (0..3).all(|k| {
                    grad[k].is_zero()
                        || grad[k].eval(&q).norm()
                            / (scale[k] * q.norm().powi(grad[k].degree as i32))
                            < 100.0 * prec.tol_geo
                });
                if !ok {
                    continue;
                }
                let mapped = match back {
                    Some(m) => projective::apply_matrix(m, &q).normalized(),
                    None => Ok(q),
                };
                let Ok(mapped) = mapped else { continue };
                if out
                    .iter()
                    .all(|w| projective::proj_dist(w, &mapped) > prec.tol_dup)
                {
                    out.push(mapped);
                }
            }
        }
    };
    gather(p, None, &mut out);
    let m = rotation_matrix(0x9e37_79b9);
    let rotated = p.compose_matrix(&m);
    gather(&rotated, Some(&m), &mut out);
    out
}

/// Whether the curve has no singular point. A zero partial derivative means
/// the curve is a cylinder over a lower-dimensional thing and never smooth
/// for the degrees used here.
pub fn is_smooth(p: &HomPoly, prec: &Precision) -> bool {
    if p.gradient().iter().any(|g| g.is_zero()) {
        return false;
    }
    singular_points(p, prec).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::HomPoly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn chart_poly_round_trip() {
        let p = HomPoly::from_terms_re(
            3,
            &[(3, 0, 0, 1.0), (1, 1, 1, -2.0), (0, 2, 1, 0.5), (0, 0, 3, 1.0)],
        );
        for chart in 0..3 {
            let b = chart_poly(&p, chart);
            let (u, v) = (c(0.3, -0.8), c(1.1, 0.4));
            let pt = chart_point(chart, u, v);
            assert!((b.eval(u, v) - p.eval(&pt)).norm() < 1e-12);
        }
    }

    #[test]
    fn resultant_detects_common_zeros() {
        // f = u² + v² - 1, g = u - v: common zeros at u = ±1/√2
        let mut f = BivarPoly::zero(3, 3);
        *f.at_mut(2, 0) = c(1.0, 0.0);
        *f.at_mut(0, 2) = c(1.0, 0.0);
        *f.at_mut(0, 0) = c(-1.0, 0.0);
        let mut g = BivarPoly::zero(2, 2);
        *g.at_mut(1, 0) = c(1.0, 0.0);
        *g.at_mut(0, 1) = c(-1.0, 0.0);
        let f = f.trimmed(0.0);
        let g = g.trimmed(0.0);
        let r = resultant_wrt_v(&f, &g);
        let prec = Precision::default();
        let rr = roots::roots(&roots::trim(&r, 1e-12), &prec).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert_eq!(rr.len(), 2);
        assert!(rr.iter().any(|z| (z - c(s, 0.0)).norm() < 1e-9));
        assert!(rr.iter().any(|z| (z + c(s, 0.0)).norm() < 1e-9));
    }

    #[test]
    fn intersect_conic_with_cubic() {
        let conic = HomPoly::from_terms_re(2, &[(1, 0, 1, 1.0), (0, 2, 0, -1.0)]);
        let cubic = HomPoly::from_terms_re(
            3,
            &[(3, 0, 0, 1.0), (0, 3, 0, 1.0), (0, 0, 3, 1.0), (1, 1, 1, -0.9)],
        );
        let prec = Precision::default();
        let pts = intersect_curves(&conic, &cubic, &prec, 1e-8);
        assert_eq!(pts.len(), 6);
        for p in &pts {
            assert!(conic.incidence_residual(p) < 1e-9);
            assert!(cubic.incidence_residual(p) < 1e-9);
        }
    }

    #[test]
    fn smoothness_verdicts() {
        let prec = Precision::default();
        let fermat = HomPoly::from_terms_re(4, &[(4, 0, 0, 1.0), (0, 4, 0, 1.0), (0, 0, 4, 1.0)]);
        assert!(is_smooth(&fermat, &prec));
        let klein = HomPoly::from_terms_re(4, &[(3, 1, 0, 1.0), (0, 3, 1, 1.0), (1, 0, 3, 1.0)]);
        assert!(is_smooth(&klein, &prec));
        // (x² + y²)² + 3x²yz - y³z has a node at (0:0:1)
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
        let sp = singular_points(&nodal, &prec);
        assert!(!sp.is_empty());
        assert!(sp
            .iter()
            .any(|p| projective::proj_dist(p, &ProjVec::point_re(0.0, 0.0, 1.0)) < 1e-6));
        assert!(!is_smooth(&nodal, &prec));
    }

    #[test]
    fn degenerate_coordinate_aligned_singularities() {
        let prec = Precision::default();
        // x²yz is singular along coordinate lines; must not be smooth
        let p = HomPoly::from_terms_re(4, &[(2, 1, 1, 1.0)]);
        assert!(!is_smooth(&p, &prec));
        // smooth Hesse cubic despite coordinate-aligned partials
        let hesse = HomPoly::from_terms_re(
            3,
            &[(3, 0, 0, 1.0), (0, 3, 0, 1.0), (0, 0, 3, 1.0), (1, 1, 1, -0.6)],
        );
        assert!(is_smooth(&hesse, &prec));
        // the three-line cubic xyz is singular exactly at the vertices
        let xyz = HomPoly::from_terms_re(3, &[(1, 1, 1, 1.0)]);
        let sp = singular_points(&xyz, &prec);
        assert_eq!(sp.len(), 3);
    }

    #[test]
    fn flexes_of_fermat_cubic_via_hessian() {
        // c = x³+y³+z³ has Hessian ∝ xyz: 9 flexes, e.g. (1:-1:0)
        let prec = Precision::default();
        let cub = HomPoly::from_terms_re(3, &[(3, 0, 0, 1.0), (0, 3, 0, 1.0), (0, 0, 3, 1.0)]);
        let hess = HomPoly::from_terms_re(3, &[(1, 1, 1, 1.0)]);
        let pts = intersect_curves(&cub, &hess, &prec, 1e-8);
        assert_eq!(pts.len(), 9);
        assert!(pts
            .iter()
            .any(|p| projective::proj_dist(p, &ProjVec::point_re(1.0, -1.0, 0.0)) < 1e-8));
    }
}
