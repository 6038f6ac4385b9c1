//! Points and lines of the complex projective plane.
//!
//! A [`ProjVec`] is a homogeneous complex triple together with a role flag.
//! Interpreting the same coordinates as a point or as a line is a role flip
//! (duality), never a data change.

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Point,
    Line,
}

/// Homogeneous triple, point or line of the plane or its dual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjVec {
    pub coords: [C64; 3],
    pub role: Role,
}

impl ProjVec {
    pub fn point(coords: [C64; 3]) -> Self {
        ProjVec {
            coords,
            role: Role::Point,
        }
    }

    pub fn line(coords: [C64; 3]) -> Self {
        ProjVec {
            coords,
            role: Role::Line,
        }
    }

    pub fn point_re(x: f64, y: f64, z: f64) -> Self {
        Self::point([C64::new(x, 0.0), C64::new(y, 0.0), C64::new(z, 0.0)])
    }

    pub fn line_re(a: f64, b: f64, c: f64) -> Self {
        Self::line([C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0)])
    }

    /// Duality involution: same coordinates, flipped role.
    pub fn dual(&self) -> Self {
        ProjVec {
            coords: self.coords,
            role: match self.role {
                Role::Point => Role::Line,
                Role::Line => Role::Point,
            },
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Index of the largest-magnitude coordinate; ties break to the smallest
    /// index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        let mut best_mag = self.coords[0].norm();
        for i in 1..3 {
            let m = self.coords[i].norm();
            if m > best_mag {
                best = i;
                best_mag = m;
            }
        }
        best
    }

    /// Scale so the largest-magnitude coordinate equals 1 exactly.
    ///
    /// Fails with [`Error::ZeroVector`] when every coordinate is negligible
    /// relative to `context_scale` (pass 0.0 to accept any nonzero vector).
    pub fn normalized_in_context(&self, tol: f64, context_scale: f64) -> Result<ProjVec> {
        let k = self.argmax();
        let pivot = self.coords[k];
        if pivot.norm() == 0.0 || pivot.norm() < tol * context_scale {
            return Err(Error::ZeroVector);
        }
        let mut coords = [C64::new(0.0, 0.0); 3];
        for i in 0..3 {
            coords[i] = self.coords[i] / pivot;
        }
        coords[k] = C64::new(1.0, 0.0);
        Ok(ProjVec {
            coords,
            role: self.role,
        })
    }

    pub fn normalized(&self) -> Result<ProjVec> {
        self.normalized_in_context(0.0, 0.0)
    }

    /// Incidence form `line · point` (bilinear, no conjugation).
    pub fn incidence(&self, other: &ProjVec) -> C64 {
        self.coords[0] * other.coords[0]
            + self.coords[1] * other.coords[1]
            + self.coords[2] * other.coords[2]
    }
}

/// Bilinear cross product. For two points it is the connecting line; for two
/// lines it is the intersection point.
pub fn cross(a: &ProjVec, b: &ProjVec) -> ProjVec {
    let u = &a.coords;
    let v = &b.coords;
    let coords = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let role = match a.role {
        Role::Point => Role::Line,
        Role::Line => Role::Point,
    };
    ProjVec { coords, role }
}

/// Projective distance: the sine of the angle between the homogeneous
/// representatives, computed as ‖a×b‖ / (‖a‖‖b‖). Zero iff projectively
/// equal; free of cancellation near zero.
pub fn proj_dist(a: &ProjVec, b: &ProjVec) -> f64 {
    let c = cross(a, b);
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    c.norm() / (na * nb)
}

/// Index of the nearest element of `set` to `v`, with the distance.
pub fn nearest(v: &ProjVec, set: &[ProjVec]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, w) in set.iter().enumerate() {
        let d = proj_dist(v, w);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// Greedy matching of two equal-length sets; returns the permutation `perm`
/// with `b[perm[i]] ≈ a[i]` and the largest matched distance, or None when
/// some element has no partner within `tol`.
pub fn match_sets(a: &[ProjVec], b: &[ProjVec], tol: f64) -> Option<(Vec<usize>, f64)> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut perm = vec![0usize; a.len()];
    let mut worst = 0.0f64;
    for (i, v) in a.iter().enumerate() {
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, w) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = proj_dist(v, w);
            if d < best.1 {
                best = (j, d);
            }
        }
        if best.1 > tol {
            return None;
        }
        used[best.0] = true;
        perm[i] = best.0;
        worst = worst.max(best.1);
    }
    Some((perm, worst))
}

/// Apply a 3×3 matrix to point coordinates: `p ↦ M p`.
pub fn apply_matrix(m: &[[C64; 3]; 3], p: &ProjVec) -> ProjVec {
    let mut coords = [C64::new(0.0, 0.0); 3];
    for i in 0..3 {
        for j in 0..3 {
            coords[i] += m[i][j] * p.coords[j];
        }
    }
    ProjVec {
        coords,
        role: p.role,
    }
}

/// Apply a matrix to a line covector: `ℓ ↦ ℓ M` (row-vector convention), the
/// transformation dual to `p ↦ M⁻¹ p` on points.
pub fn apply_matrix_covector(m: &[[C64; 3]; 3], l: &ProjVec) -> ProjVec {
    let mut coords = [C64::new(0.0, 0.0); 3];
    for j in 0..3 {
        for i in 0..3 {
            coords[j] += l.coords[i] * m[i][j];
        }
    }
    ProjVec {
        coords,
        role: l.role,
    }
}

/// 3×3 complex inverse (adjugate / determinant).
pub fn invert3(m: &[[C64; 3]; 3]) -> Result<[[C64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let scale: f64 = m
        .iter()
        .flatten()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .powi(3);
    if det.norm() < 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidInput("singular 3x3 matrix".into()));
    }
    let mut adj = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let r0 = (i + 1) % 3;
            let r1 = (i + 2) % 3;
            let c0 = (j + 1) % 3;
            let c1 = (j + 2) % 3;
            // adjugate is the transposed cofactor matrix
            adj[j][i] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    for row in adj.iter_mut() {
        for e in row.iter_mut() {
            *e /= det;
        }
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn normalize_scaling() {
        let v = ProjVec::point_re(2.0, 0.0, 0.0).normalized().unwrap();
        assert_eq!(v.coords[0], c(1.0, 0.0));
        assert_eq!(v.coords[1], c(0.0, 0.0));
    }

    #[test]
    fn normalize_tie_breaks_to_smallest_index() {
        // (0, 3i, 3): tie in magnitude between indices 1 and 2; index 1 wins,
        // so we divide by 3i and get (0, 1, -i).
        let v = ProjVec::point([c(0.0, 0.0), c(0.0, 3.0), c(3.0, 0.0)])
            .normalized()
            .unwrap();
        assert_eq!(v.coords[1], c(1.0, 0.0));
        assert!((v.coords[2] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn normalize_zero_vector_in_context() {
        let v = ProjVec::point_re(1e-300, 0.0, 0.0);
        assert_eq!(
            v.normalized_in_context(1e-8, 1.0).unwrap_err(),
            Error::ZeroVector
        );
        // but acceptable with no context scale
        assert!(v.normalized().is_ok());
    }

    #[test]
    fn cross_is_incident() {
        let p = ProjVec::point([c(1.0, 2.0), c(-0.3, 0.1), c(0.5, -1.0)]);
        let q = ProjVec::point([c(0.2, 0.0), c(1.0, -1.0), c(2.0, 0.3)]);
        let l = cross(&p, &q);
        assert_eq!(l.role, Role::Line);
        assert!(l.incidence(&p).norm() < 1e-14);
        assert!(l.incidence(&q).norm() < 1e-14);
    }

    #[test]
    fn proj_dist_scale_invariant() {
        let p = ProjVec::point([c(1.0, 2.0), c(-0.3, 0.1), c(0.5, -1.0)]);
        let q = ProjVec::point([c(3.0, 6.0), c(-0.9, 0.3), c(1.5, -3.0)]);
        assert!(proj_dist(&p, &q) < 1e-15);
        let r = ProjVec::point_re(1.0, 0.0, 0.0);
        assert!(proj_dist(&p, &r) > 0.1);
    }

    #[test]
    fn invert3_roundtrip() {
        let m = [
            [c(1.0, 0.5), c(0.0, 0.0), c(2.0, 0.0)],
            [c(0.0, 1.0), c(3.0, 0.0), c(0.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 1.0), c(1.0, 0.0)],
        ];
        let inv = invert3(&m).unwrap();
        let p = ProjVec::point([c(0.3, 0.1), c(-1.0, 0.4), c(0.7, 0.0)]);
        let q = apply_matrix(&inv, &apply_matrix(&m, &p));
        assert!(proj_dist(&p, &q) < 1e-13);
    }
}
