//! Plane-cubic geometry: classification, flexes, the chord-tangent group
//! law with a flex origin, 2-torsion, and the chord construction sending
//! {p, p+β} to the connecting line.

use crate::elim::{self};
use crate::linalg::nullspace_fit;
use crate::poly::{line_basis, restrict_along, BinaryForm, HomPoly};
use crate::projective::{self, cross, ProjVec};
use crate::roots;
use crate::{Error, Precision, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Smooth,
    Nodal,
    Reducible,
}

/// A plane cubic with its classification and, when smooth, a cached flex
/// origin for the group law.
#[derive(Debug, Clone)]
pub struct CubicCurve {
    pub poly: HomPoly,
    pub classification: Classification,
    pub flex_origin: Option<ProjVec>,
    flexes: Vec<ProjVec>,
}

/// Hessian determinant curve (degree 3(d−2); a cubic for cubics).
pub fn hessian(p: &HomPoly) -> HomPoly {
    let g = p.gradient();
    let h: Vec<Vec<HomPoly>> = (0..3).map(|i| (0..3).map(|j| g[i].partial(j)).collect()).collect();
    let term = |a: usize, b: usize, c: usize| h[0][a].mul(&h[1][b]).mul(&h[2][c]);
    let mut out = term(0, 1, 2);
    out = out.add(&term(1, 2, 0));
    out = out.add(&term(2, 0, 1));
    out = out.add(&term(0, 2, 1).scale(C64::new(-1.0, 0.0)));
    out = out.add(&term(1, 0, 2).scale(C64::new(-1.0, 0.0)));
    out = out.add(&term(2, 1, 0).scale(C64::new(-1.0, 0.0)));
    out
}

/// Classify a cubic: smooth when the gradient system has no projective
/// zero; reducible when a line through a singular point lies on the curve
/// (certified by restriction); nodal otherwise.
pub fn classify(c: &HomPoly, prec: &Precision) -> Classification {
    if c.degree != 3 {
        panic!("classify expects a cubic");
    }
    let sing = elim::singular_points(c, prec);
    if sing.is_empty() {
        return Classification::Smooth;
    }
    for p in &sing {
        if line_component_through(c, p, prec).is_some() {
            return Classification::Reducible;
        }
    }
    // a curve with two or more isolated singular points of degree 3 must be
    // reducible even if the line test was shy; the restriction certificate
    // through pairs of singular points settles it
    for i in 0..sing.len() {
        for j in (i + 1)..sing.len() {
            let l = cross(&sing[i], &sing[j]);
            if line_in_curve(c, &l, prec) {
                return Classification::Reducible;
            }
        }
    }
    if sing.len() >= 2 {
        return Classification::Reducible;
    }
    Classification::Nodal
}

/// Restriction certificate: the line lies on the curve.
fn line_in_curve(c: &HomPoly, line: &ProjVec, prec: &Precision) -> bool {
    let Ok(line) = line.normalized() else {
        return false;
    };
    let Ok((p0, p1)) = line_basis(&line) else {
        return false;
    };
    let b = restrict_along(c, &p0, &p1);
    b.max_abs() < 1e2 * prec.tol_geo * c.max_abs()
}

/// Find a line through the singular point lying on the cubic: common
/// direction zero of the tangent cone quadratic and the leading cubic term.
fn line_component_through(c: &HomPoly, p: &ProjVec, prec: &Precision) -> Option<ProjVec> {
    let p = p.normalized().ok()?;
    let jmax = p.argmax();
    let others: Vec<usize> = (0..3).filter(|&j| j != jmax).collect();
    let mut e1 = [C64::new(0.0, 0.0); 3];
    e1[others[0]] = C64::new(1.0, 0.0);
    let mut e2 = [C64::new(0.0, 0.0); 3];
    e2[others[1]] = C64::new(1.0, 0.0);
    let (e1, e2) = (ProjVec::point(e1), ProjVec::point(e2));
    // c(p + s·d(a,b)) = s²·C2(a,b) + s³·C3(a,b) at a singular p
    let g = c.gradient();
    let hess: Vec<Vec<C64>> = (0..3)
        .map(|i| (0..3).map(|j| g[i].partial(j).eval(&p)).collect())
        .collect();
    let hq = |x: &ProjVec, y: &ProjVec| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += hess[i][j] * x.coords[i] * y.coords[j];
            }
        }
        acc
    };
    let c2 = BinaryForm::new(vec![
        hq(&e1, &e1) * C64::new(0.5, 0.0),
        hq(&e1, &e2),
        hq(&e2, &e2) * C64::new(0.5, 0.0),
    ]);
    let c3 = restrict_along(c, &e1, &e2);
    let scale = c.max_abs();
    let candidates: Vec<(C64, C64)> = if c2.max_abs() > 1e-10 * scale {
        roots::binary_roots(&c2, prec).unwrap_or_default()
    } else if c3.max_abs() > 1e-10 * scale {
        roots::binary_roots(&c3, prec).unwrap_or_default()
    } else {
        return None;
    };
    for (a, b) in candidates {
        let d = ProjVec::point([
            a * e1.coords[0] + b * e2.coords[0],
            a * e1.coords[1] + b * e2.coords[1],
            a * e1.coords[2] + b * e2.coords[2],
        ]);
        let line = cross(&p, &d);
        if line_in_curve(c, &line, prec) {
            return line.normalized().ok();
        }
    }
    None
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

/// The 9 flexes of a smooth cubic: intersection with its Hessian, in
/// normalized-lexicographic order.
pub fn flexes(c: &HomPoly, prec: &Precision) -> Result<Vec<ProjVec>> {
    let h = hessian(c);
    let mut pts = elim::intersect_curves(c, &h, prec, 100.0 * prec.tol_geo);
    if pts.len() != 9 {
        return Err(Error::NoConvergence);
    }
    pts.sort_by(lex_cmp);
    Ok(pts)
}

impl CubicCurve {
    /// Classify and, for smooth cubics, compute flexes and pick the origin:
    /// the flex with lexicographically largest normalized coordinates.
    pub fn new(poly: HomPoly, prec: &Precision) -> Result<CubicCurve> {
        if poly.degree != 3 {
            return Err(Error::InvalidInput("CubicCurve needs degree 3".into()));
        }
        let poly = poly.normalized()?;
        let classification = classify(&poly, prec);
        let (flexes, flex_origin) = if classification == Classification::Smooth {
            let f = flexes(&poly, prec)?;
            let origin = f.iter().max_by(|a, b| lex_cmp(a, b)).cloned();
            (f, origin)
        } else {
            (Vec::new(), None)
        };
        Ok(CubicCurve {
            poly,
            classification,
            flex_origin,
            flexes,
        })
    }

    pub fn is_smooth(&self) -> bool {
        self.classification == Classification::Smooth
    }

    /// Replace the flex origin (it must be one of the computed flexes).
    pub fn with_origin(mut self, origin: &ProjVec, prec: &Precision) -> Result<CubicCurve> {
        let o = origin.normalized()?;
        if !self
            .flexes
            .iter()
            .any(|f| projective::proj_dist(f, &o) < 100.0 * prec.tol_dup)
        {
            return Err(Error::InvalidInput("origin is not a flex".into()));
        }
        self.flex_origin = Some(o);
        Ok(self)
    }

    pub fn flexes(&self) -> &[ProjVec] {
        &self.flexes
    }

    pub fn origin(&self) -> Result<&ProjVec> {
        self.flex_origin
            .as_ref()
            .ok_or_else(|| Error::DegenerateConfiguration("cubic has no flex origin".into()))
    }

    pub fn on_curve(&self, p: &ProjVec, prec: &Precision) -> bool {
        self.poly.incidence_residual(p) < prec.tol_geo
    }

    /// Tangent line at a smooth point.
    pub fn tangent_at(&self, p: &ProjVec) -> Result<ProjVec> {
        let g = self.poly.gradient();
        let cov = ProjVec::line([g[0].eval(p), g[1].eval(p), g[2].eval(p)]);
        if cov.max_abs() < 1e-12 * self.poly.max_abs() * p.norm().powi(2) {
            return Err(Error::TangentFailure);
        }
        cov.normalized()
    }

    /// Third intersection of a line with the cubic, the parameters of two
    /// known intersections removed (pass the same point twice for tangents).
    pub fn third_intersection(
        &self,
        line: &ProjVec,
        known1: &ProjVec,
        known2: &ProjVec,
    ) -> Result<ProjVec> {
        let line = line.normalized()?;
        let (p0, p1) = line_basis(&line)?;
        let b = restrict_along(&self.poly, &p0, &p1);
        if b.max_abs() < 1e-13 * self.poly.max_abs() {
            return Err(Error::TangentFailure); // line inside the curve
        }
        // the parameter of a point X on the line reads off the coordinates at
        // the basis slots
        let (j1, j2) = (slot_index(&p0), slot_index(&p1));
        let param = |x: &ProjVec| (x.coords[j1], x.coords[j2]);
        let b1 = b.deflate(param(known1));
        let b2 = b1.deflate(param(known2));
        if b2.degree != 1 || b2.max_abs() == 0.0 {
            return Err(Error::TangentFailure);
        }
        // root of the linear remainder, Newton-polished on the full cubic
        let (mut s, mut t) = (-b2.coeffs[1], b2.coeffs[0]);
        let db = b.d_ds();
        if t.norm() >= s.norm() {
            let mut x = s / t;
            let one = C64::new(1.0, 0.0);
            for _ in 0..3 {
                let f = b.eval(x, one);
                let df = db.eval(x, one);
                if df.norm() < 1e-14 * b.max_abs() {
                    break;
                }
                x -= f / df;
            }
            s = x;
            t = one;
        }
        let pt = ProjVec::point([
            s * p0.coords[0] + t * p1.coords[0],
            s * p0.coords[1] + t * p1.coords[1],
            s * p0.coords[2] + t * p1.coords[2],
        ]);
        pt.normalized()
    }

    /// Chord-tangent group law with the flex origin as identity.
    pub fn add(&self, p: &ProjVec, q: &ProjVec, prec: &Precision) -> Result<ProjVec> {
        let o = self.origin()?;
        let r = self.raw_chord(p, q, prec)?;
        self.raw_chord(o, &r, prec)
    }

    /// Inverse: third intersection of the line through the origin and p.
    pub fn neg(&self, p: &ProjVec, prec: &Precision) -> Result<ProjVec> {
        let o = self.origin()?;
        self.raw_chord(o, p, prec)
    }

    pub fn sub(&self, p: &ProjVec, q: &ProjVec, prec: &Precision) -> Result<ProjVec> {
        let nq = self.neg(q, prec)?;
        self.add(p, &nq, prec)
    }

    /// Third intersection of the line through p and q (tangent when they
    /// coincide projectively).
    fn raw_chord(&self, p: &ProjVec, q: &ProjVec, prec: &Precision) -> Result<ProjVec> {
        let line = if projective::proj_dist(p, q) <= prec.tol_dup {
            self.tangent_at(p)?
        } else {
            cross(p, q).normalized()?
        };
        self.third_intersection(&line, p, q)
    }

    /// The three points T ≠ O with 2T = O: intersection of the cubic with
    /// the polar conic of the origin, the origin's own cluster removed.
    pub fn two_torsion(&self, prec: &Precision) -> Result<Vec<ProjVec>> {
        let o = self.origin()?.clone();
        let g = self.poly.gradient();
        let mut polar = HomPoly::zero(2);
        for i in 0..3 {
            polar = polar.add(&g[i].scale(o.coords[i]));
        }
        let pts = elim::intersect_curves(&self.poly, &polar, prec, 1e-6);
        let mut out = Vec::new();
        for p in pts {
            if projective::proj_dist(&p, &o) < 1e-4 {
                continue;
            }
            let dbl = self.add(&p, &p, prec)?;
            if projective::proj_dist(&dbl, &o) < 10.0 * prec.tol_geo.max(1e-9) {
                if out.iter().all(|q| projective::proj_dist(q, &p) > prec.tol_dup) {
                    out.push(p);
                }
            }
        }
        if out.len() != 3 {
            return Err(Error::NoConvergence);
        }
        out.sort_by(lex_cmp);
        Ok(out)
    }

    /// Chord construction: the connecting line of p and p+β, a point of the
    /// dual plane. Invariant under p ↦ p+β.
    pub fn chord_map(&self, beta: &ProjVec, p: &ProjVec, prec: &Precision) -> Result<ProjVec> {
        let pb = self.add(p, beta, prec)?;
        if projective::proj_dist(p, &pb) <= prec.tol_dup {
            return Err(Error::DegenerateChord);
        }
        cross(p, &pb).normalized()
    }

    /// Sample distinct points on the cubic: one intersection per seeded
    /// random line (whole sections would create collinear triples).
    pub fn sample_points(&self, n: usize, seed: u64, prec: &Precision) -> Vec<ProjVec> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<ProjVec> = Vec::new();
        let mut guard = 0usize;
        while out.len() < n && guard < 100 * n {
            guard += 1;
            let line = ProjVec::line([
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ]);
            let Ok((p0, p1)) = line_basis(&line) else { continue };
            let b = restrict_along(&self.poly, &p0, &p1);
            let uni = b.univariate_in_s();
            let Ok(rs) = roots::roots(&roots::trim(&uni, 1e-12), prec) else {
                continue;
            };
            let Some(&r) = rs.first() else { continue };
            let pt = ProjVec::point([
                r * p0.coords[0] + p1.coords[0],
                r * p0.coords[1] + p1.coords[1],
                r * p0.coords[2] + p1.coords[2],
            ]);
            let Ok(pt) = pt.normalized() else { continue };
            if !self.on_curve(&pt, prec) {
                continue;
            }
            if out.iter().all(|q| projective::proj_dist(q, &pt) > 1e-3) {
                out.push(pt);
            }
        }
        out
    }
}

fn slot_index(basis_vec: &ProjVec) -> usize {
    // line_basis vectors have exactly one coordinate equal to 1
    for (i, c) in basis_vec.coords.iter().enumerate() {
        if (c - C64::new(1.0, 0.0)).norm() == 0.0 {
            return i;
        }
    }
    unreachable!("line_basis produces unit slots")
}

/// Common difference class of six pairs on a smooth cubic: all six must
/// agree within tol_dup and square to the origin. Returns the medoid.
pub fn beta_of_pairs(
    c: &CubicCurve,
    pairs: &[(ProjVec, ProjVec)],
    prec: &Precision,
) -> Result<ProjVec> {
    if pairs.len() != 6 {
        return Err(Error::InvalidInput("beta_of_pairs needs 6 pairs".into()));
    }
    let mut all: Vec<&ProjVec> = Vec::new();
    for (a, b) in pairs {
        all.push(a);
        all.push(b);
    }
    for i in 0..12 {
        if !c.on_curve(all[i], prec) {
            return Err(Error::InvalidInput("pair point off the cubic".into()));
        }
        for j in (i + 1)..12 {
            if projective::proj_dist(all[i], all[j]) <= prec.tol_dup {
                return Err(Error::InvalidInput("pair points not distinct".into()));
            }
        }
    }
    let mut diffs = Vec::with_capacity(6);
    for (a, b) in pairs {
        diffs.push(c.sub(a, b, prec)?);
    }
    for i in 0..6 {
        for j in (i + 1)..6 {
            if projective::proj_dist(&diffs[i], &diffs[j]) > prec.tol_dup {
                return Err(Error::InconsistentPairing(format!(
                    "difference classes of pairs {} and {} disagree",
                    i, j
                )));
            }
        }
    }
    let o = c.origin()?;
    for d in &diffs {
        let dbl = c.add(d, d, prec)?;
        if projective::proj_dist(&dbl, o) > 10.0 * prec.tol_geo.max(1e-9) {
            return Err(Error::InconsistentPairing(
                "common difference is not 2-torsion".into(),
            ));
        }
    }
    // medoid: the representative closest to all others
    let best = (0..6)
        .min_by(|&i, &j| {
            let si: f64 = (0..6).map(|k| projective::proj_dist(&diffs[i], &diffs[k])).sum();
            let sj: f64 = (0..6).map(|k| projective::proj_dist(&diffs[j], &diffs[k])).sum();
            si.partial_cmp(&sj).unwrap()
        })
        .unwrap();
    Ok(diffs[best])
}

/// Fit the conic through the six chord images of the pairs. The pairs must
/// already be certified by [`beta_of_pairs`]; the conic must be smooth.
pub fn conic_of_images(
    c: &CubicCurve,
    pairs: &[(ProjVec, ProjVec)],
    prec: &Precision,
) -> Result<(HomPoly, f64)> {
    let mut images = Vec::with_capacity(6);
    for (a, b) in pairs {
        if projective::proj_dist(a, b) <= prec.tol_dup {
            return Err(Error::DegenerateChord);
        }
        if !c.on_curve(a, prec) || !c.on_curve(b, prec) {
            return Err(Error::InvalidInput("pair point off the cubic".into()));
        }
        images.push(cross(a, b).dual().normalized()?);
    }
    let (conic, residual) = nullspace_fit(&images, 2, prec)?;
    if conic_gram_det(&conic) < 1e-8 {
        return Err(Error::DegenerateConfiguration(
            "chord-image conic is singular".into(),
        ));
    }
    Ok((conic, residual))
}

/// |det| of the normalized symmetric Gram matrix of a conic.
pub fn conic_gram_det(conic: &HomPoly) -> f64 {
    debug_assert_eq!(conic.degree, 2);
    let h = C64::new(0.5, 0.0);
    let c = &conic.coeffs; // x², xy, xz, y², yz, z²
    let g = [
        [c[0], c[1] * h, c[2] * h],
        [c[1] * h, c[3], c[4] * h],
        [c[2] * h, c[4] * h, c[5]],
    ];
    let fro: f64 = g
        .iter()
        .flatten()
        .map(|x| x.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if fro == 0.0 {
        return 0.0;
    }
    let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    det.norm() / fro.powi(3)
}

/// Fit the image cubic of the chord construction from chord images of
/// sampled points.
pub fn chord_image_cubic(
    c: &CubicCurve,
    beta: &ProjVec,
    prec: &Precision,
    seed: u64,
) -> Result<(HomPoly, f64)> {
    let samples = c.sample_points(24, seed, prec);
    let mut images = Vec::new();
    for p in &samples {
        match c.chord_map(beta, p, prec) {
            Ok(l) => images.push(l.dual()),
            Err(Error::DegenerateChord) => continue,
            Err(e) => return Err(e),
        }
    }
    if images.len() < 12 {
        return Err(Error::NoConvergence);
    }
    nullspace_fit(&images, 3, prec)
}
