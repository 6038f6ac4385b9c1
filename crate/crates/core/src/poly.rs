//! Homogeneous ternary polynomials over ℂ and binary forms.
//!
//! Coefficients are indexed by the graded-lexicographic monomial list in
//! (x, y, z): exponents (a, b, c) with a+b+c = d sorted by a descending,
//! then b descending. Degree 4 therefore reads
//! x⁴, x³y, x³z, x²y², x²yz, x²z², xy³, xy²z, xyz², xz³, y⁴, y³z, y²z², yz³, z⁴.
//! Every file format and example in the crate depends on this order.

use crate::projective::ProjVec;
use crate::{Error, Result, C64};

/// Number of monomials of degree `d` in three variables: C(d+2, 2).
pub fn monomial_count(d: usize) -> usize {
    (d + 2) * (d + 1) / 2
}

/// Index of the monomial x^a y^b z^c (with a+b+c = d) in the fixed order.
pub fn monomial_index(d: usize, a: usize, b: usize) -> usize {
    let k = d - a;
    k * (k + 1) / 2 + (k - b)
}

/// Exponents (a, b, c) of the monomial at `idx` for degree `d`.
pub fn monomial_exponents(d: usize, idx: usize) -> (usize, usize, usize) {
    let mut k = 0usize;
    while (k + 1) * (k + 2) / 2 <= idx {
        k += 1;
    }
    let within = idx - k * (k + 1) / 2;
    let a = d - k;
    let b = k - within;
    (a, b, d - a - b)
}

/// Homogeneous polynomial in (x, y, z) of a fixed degree.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoly {
    pub degree: usize,
    pub coeffs: Vec<C64>,
}

impl HomPoly {
    pub fn new(degree: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::InvalidInput(format!(
                "degree {} needs {} coefficients, got {}",
                degree,
                monomial_count(degree),
                coeffs.len()
            )));
        }
        if coeffs.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidInput("all coefficients zero".into()));
        }
        Ok(HomPoly { degree, coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        HomPoly {
            degree,
            coeffs: vec![C64::new(0.0, 0.0); monomial_count(degree)],
        }
    }

    /// Build from a list of (a, b, c, coefficient) terms.
    pub fn from_terms(degree: usize, terms: &[(usize, usize, usize, C64)]) -> Self {
        let mut p = HomPoly::zero(degree);
        for &(a, b, c, v) in terms {
            debug_assert_eq!(a + b + c, degree);
            p.coeffs[monomial_index(degree, a, b)] += v;
        }
        p
    }

    pub fn from_terms_re(degree: usize, terms: &[(usize, usize, usize, f64)]) -> Self {
        let t: Vec<_> = terms
            .iter()
            .map(|&(a, b, c, v)| (a, b, c, C64::new(v, 0.0)))
            .collect();
        Self::from_terms(degree, &t)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> HomPoly {
        HomPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &HomPoly) -> HomPoly {
        debug_assert_eq!(self.degree, other.degree);
        HomPoly {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Scale so the largest-magnitude coefficient is exactly 1 (same rule as
    /// projective normalization, applied to the coefficient vector).
    pub fn normalized(&self) -> Result<HomPoly> {
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = c.norm();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag == 0.0 {
            return Err(Error::ZeroVector);
        }
        let pivot = self.coeffs[best];
        let mut coeffs: Vec<C64> = self.coeffs.iter().map(|c| c / pivot).collect();
        coeffs[best] = C64::new(1.0, 0.0);
        Ok(HomPoly {
            degree: self.degree,
            coeffs,
        })
    }

    pub fn eval(&self, p: &ProjVec) -> C64 {
        let [x, y, z] = p.coords;
        let d = self.degree;
        // power tables
        let mut xp = vec![C64::new(1.0, 0.0); d + 1];
        let mut yp = xp.clone();
        let mut zp = xp.clone();
        for i in 1..=d {
            xp[i] = xp[i - 1] * x;
            yp[i] = yp[i - 1] * y;
            zp[i] = zp[i - 1] * z;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (idx, coeff) in self.coeffs.iter().enumerate() {
            if coeff.norm() == 0.0 {
                continue;
            }
            let (a, b, c) = monomial_exponents(d, idx);
            acc += coeff * xp[a] * yp[b] * zp[c];
        }
        acc
    }

    /// Monomial evaluation vector at `p`, in the fixed order.
    pub fn monomial_vector(degree: usize, p: &ProjVec) -> Vec<C64> {
        let [x, y, z] = p.coords;
        let d = degree;
        let mut xp = vec![C64::new(1.0, 0.0); d + 1];
        let mut yp = xp.clone();
        let mut zp = xp.clone();
        for i in 1..=d {
            xp[i] = xp[i - 1] * x;
            yp[i] = yp[i - 1] * y;
            zp[i] = zp[i - 1] * z;
        }
        (0..monomial_count(d))
            .map(|idx| {
                let (a, b, c) = monomial_exponents(d, idx);
                xp[a] * yp[b] * zp[c]
            })
            .collect()
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn partial(&self, var: usize) -> HomPoly {
        assert!(self.degree >= 1);
        let d = self.degree;
        let mut out = HomPoly::zero(d - 1);
        for (idx, coeff) in self.coeffs.iter().enumerate() {
            if coeff.norm() == 0.0 {
                continue;
            }
            let (a, b, c) = monomial_exponents(d, idx);
            let e = [a, b, c];
            if e[var] == 0 {
                continue;
            }
            let mut f = e;
            f[var] -= 1;
            let j = monomial_index(d - 1, f[0], f[1]);
            out.coeffs[j] += coeff * C64::new(e[var] as f64, 0.0);
        }
        out
    }

    pub fn gradient(&self) -> [HomPoly; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let d = self.degree + other.degree;
        let mut out = HomPoly::zero(d);
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.norm() == 0.0 {
                continue;
            }
            let (a1, b1, _) = monomial_exponents(self.degree, i);
            for (j, cj) in other.coeffs.iter().enumerate() {
                if cj.norm() == 0.0 {
                    continue;
                }
                let (a2, b2, _) = monomial_exponents(other.degree, j);
                out.coeffs[monomial_index(d, a1 + a2, b1 + b2)] += ci * cj;
            }
        }
        out
    }

    /// Substitution x ↦ M x (row-major 3×3): returns q with q(x) = self(M x).
    pub fn compose_matrix(&self, m: &[[C64; 3]; 3]) -> HomPoly {
        // linear forms for the images of x, y, z
        let lin: Vec<HomPoly> = (0..3)
            .map(|i| {
                HomPoly::from_terms(
                    1,
                    &[
                        (1, 0, 0, m[i][0]),
                        (0, 1, 0, m[i][1]),
                        (0, 0, 1, m[i][2]),
                    ],
                )
            })
            .collect();
        let d = self.degree;
        // power tables of the three linear forms
        let mut pows: Vec<Vec<HomPoly>> = Vec::with_capacity(3);
        for l in &lin {
            let mut v = vec![HomPoly::from_terms_re(0, &[(0, 0, 0, 1.0)])];
            for k in 1..=d {
                v.push(v[k - 1].mul(l));
            }
            pows.push(v);
        }
        let mut out = HomPoly::zero(d);
        for (idx, coeff) in self.coeffs.iter().enumerate() {
            if coeff.norm() == 0.0 {
                continue;
            }
            let (a, b, c) = monomial_exponents(d, idx);
            let term = pows[0][a].mul(&pows[1][b]).mul(&pows[2][c]).scale(*coeff);
            out = out.add(&term);
        }
        out
    }

    /// Relative incidence residual |self(p)| / (‖self‖₂ · ‖p‖^d).
    pub fn incidence_residual(&self, p: &ProjVec) -> f64 {
        let v = self.eval(p);
        let np = p.norm();
        v.norm() / (self.norm2() * np.powi(self.degree as i32)).max(f64::MIN_POSITIVE)
    }
}

/// Binary form b(s, t) of degree d, coefficients stored by descending powers
/// of s: [b_d, b_{d-1}, …, b_0] for b = Σ b_k s^k t^{d-k}.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm {
    pub degree: usize,
    pub coeffs: Vec<C64>,
}

/// Restriction of a quartic to a line: b(s,t) = b₄s⁴ + b₃s³t + b₂s²t² + b₁st³ + b₀t⁴.
pub type BinaryQuartic = BinaryForm;

impl BinaryForm {
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    /// Coefficient of s^k t^(d-k).
    pub fn coeff_s(&self, k: usize) -> C64 {
        self.coeffs[self.degree - k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, s: C64, t: C64) -> C64 {
        // Horner in s with t-weights
        let d = self.degree;
        let mut tp = vec![C64::new(1.0, 0.0); d + 1];
        for i in 1..=d {
            tp[i] = tp[i - 1] * t;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            // coeffs[i] multiplies s^(d-i) t^i
            acc = acc * s + c * tp[i];
        }
        acc
    }

    /// ∂b/∂s as a binary form of degree d−1.
    pub fn d_ds(&self) -> BinaryForm {
        let d = self.degree;
        assert!(d >= 1);
        let coeffs: Vec<C64> = (0..d)
            .map(|i| self.coeffs[i] * C64::new((d - i) as f64, 0.0))
            .collect();
        BinaryForm::new(coeffs)
    }

    /// Coefficients of the univariate b(s, 1), ascending in s.
    pub fn univariate_in_s(&self) -> Vec<C64> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let d = self.degree + other.degree;
        let mut coeffs = vec![C64::new(0.0, 0.0); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BinaryForm::new(coeffs)
    }

    /// Divide by the linear form (t₀ s − s₀ t) vanishing at the projective
    /// root (s₀ : t₀); returns the degree d−1 quotient. The root is assumed
    /// to be (numerically) a root of the form.
    pub fn deflate(&self, root: (C64, C64)) -> BinaryForm {
        let (s0, t0) = root;
        let d = self.degree;
        assert!(d >= 1);
        let mut q = vec![C64::new(0.0, 0.0); d];
        if t0.norm() >= s0.norm() {
            // b = (s - r t) * q up to scale, r = s0/t0; synthetic division
            // descending in s
            let r = s0 / t0;
            let mut carry = C64::new(0.0, 0.0);
            for k in 0..d {
                let qk = self.coeffs[k] + carry;
                q[k] = qk;
                carry = qk * r;
            }
            BinaryForm::new(q)
        } else {
            // symmetric division ascending in t: b = (t - r' s) * q', r' = t0/s0
            let r = t0 / s0;
            let mut carry = C64::new(0.0, 0.0);
            for k in 0..d {
                let qk = self.coeffs[d - k] + carry;
                q[d - 1 - k] = qk;
                carry = qk * r;
            }
            BinaryForm::new(q)
        }
    }
}

/// Deterministic basis of a line: with jmax the largest-magnitude covector
/// coordinate (ties to the smallest index) and j₁ < j₂ the others,
/// pᵢ = e_{jᵢ} − (ℓ_{jᵢ}/ℓ_{jmax}) e_{jmax}. Both satisfy ℓ·pᵢ = 0.
pub fn line_basis(line: &ProjVec) -> Result<(ProjVec, ProjVec)> {
    let jmax = line.argmax();
    if line.coords[jmax].norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let pivot = line.coords[jmax];
    let others: Vec<usize> = (0..3).filter(|&j| j != jmax).collect();
    let mut basis = Vec::with_capacity(2);
    for &j in &others {
        let mut coords = [C64::new(0.0, 0.0); 3];
        coords[j] = C64::new(1.0, 0.0);
        coords[jmax] = -line.coords[j] / pivot;
        basis.push(ProjVec::point(coords));
    }
    Ok((basis[0], basis[1]))
}

/// Restriction of a homogeneous polynomial along the pencil s·p0 + t·p1:
/// the binary form b(s, t) = p(s p0 + t p1).
pub fn restrict_along(p: &HomPoly, p0: &ProjVec, p1: &ProjVec) -> BinaryForm {
    let d = p.degree;
    // powers of the three binary linear forms (p0_k s + p1_k t)
    let mut pows: Vec<Vec<BinaryForm>> = Vec::with_capacity(3);
    for k in 0..3 {
        let lin = BinaryForm::new(vec![p0.coords[k], p1.coords[k]]);
        let mut v = vec![BinaryForm::new(vec![C64::new(1.0, 0.0)])];
        for e in 1..=d {
            v.push(v[e - 1].mul(&lin));
        }
        pows.push(v);
    }
    let mut out = vec![C64::new(0.0, 0.0); d + 1];
    for (idx, coeff) in p.coeffs.iter().enumerate() {
        if coeff.norm() == 0.0 {
            continue;
        }
        let (a, b, c) = monomial_exponents(d, idx);
        let term = pows[0][a].mul(&pows[1][b]).mul(&pows[2][c]);
        for (i, t) in term.coeffs.iter().enumerate() {
            out[i] += coeff * t;
        }
    }
    BinaryForm::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn monomial_order_is_the_documented_one() {
        // degree 4: x⁴, x³y, x³z, x²y², x²yz, x²z², xy³, xy²z, xyz², xz³,
        //           y⁴, y³z, y²z², yz³, z⁴
        let expected = [
            (4, 0, 0),
            (3, 1, 0),
            (3, 0, 1),
            (2, 2, 0),
            (2, 1, 1),
            (2, 0, 2),
            (1, 3, 0),
            (1, 2, 1),
            (1, 1, 2),
            (1, 0, 3),
            (0, 4, 0),
            (0, 3, 1),
            (0, 2, 2),
            (0, 1, 3),
            (0, 0, 4),
        ];
        assert_eq!(monomial_count(4), 15);
        for (i, &(a, b, cc)) in expected.iter().enumerate() {
            assert_eq!(monomial_index(4, a, b), i);
            assert_eq!(monomial_exponents(4, i), (a, b, cc));
        }
        assert_eq!(monomial_count(3), 10);
        assert_eq!(monomial_count(2), 6);
        assert_eq!(monomial_count(1), 3);
    }

    #[test]
    fn eval_and_partial_satisfy_euler() {
        // x q_x + y q_y + z q_z = d q
        let q = HomPoly::from_terms_re(
            4,
            &[
                (4, 0, 0, 1.0),
                (2, 1, 1, -2.5),
                (0, 4, 0, 0.7),
                (1, 0, 3, 3.1),
                (0, 2, 2, -1.2),
            ],
        );
        let p = ProjVec::point([c(0.3, 0.7), c(-1.1, 0.2), c(0.9, -0.4)]);
        let g = q.gradient();
        let euler = p.coords[0] * g[0].eval(&p) + p.coords[1] * g[1].eval(&p)
            + p.coords[2] * g[2].eval(&p);
        assert!((euler - q.eval(&p) * c(4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn mul_matches_pointwise() {
        let a = HomPoly::from_terms_re(2, &[(2, 0, 0, 1.0), (0, 1, 1, -3.0), (1, 1, 0, 2.0)]);
        let b = HomPoly::from_terms_re(1, &[(1, 0, 0, 0.5), (0, 0, 1, 1.5)]);
        let ab = a.mul(&b);
        assert_eq!(ab.degree, 3);
        let p = ProjVec::point([c(1.2, -0.3), c(0.4, 0.9), c(-0.7, 0.2)]);
        assert!((ab.eval(&p) - a.eval(&p) * b.eval(&p)).norm() < 1e-13);
    }

    #[test]
    fn compose_matrix_matches_pointwise() {
        let q = HomPoly::from_terms_re(3, &[(3, 0, 0, 1.0), (1, 1, 1, -2.0), (0, 0, 3, 0.5)]);
        let m = [
            [c(1.0, 0.1), c(0.2, 0.0), c(0.0, -0.4)],
            [c(0.0, 0.0), c(0.9, 0.0), c(1.1, 0.2)],
            [c(0.3, 0.0), c(-0.5, 0.0), c(1.0, 0.0)],
        ];
        let qm = q.compose_matrix(&m);
        let p = ProjVec::point([c(0.8, 0.1), c(-0.2, 0.5), c(0.4, -0.9)]);
        let mp = crate::projective::apply_matrix(&m, &p);
        assert!((qm.eval(&p) - q.eval(&mp)).norm() < 1e-12);
    }

    #[test]
    fn binary_deflate_and_eval() {
        // (2s - t)(s + 3t) = 2s² + 5st - 3t²
        let b = BinaryForm::new(vec![c(2.0, 0.0), c(5.0, 0.0), c(-3.0, 0.0)]);
        assert!(b.eval(c(1.0, 0.0), c(2.0, 0.0)).norm() < 1e-14);
        let q = b.deflate((c(1.0, 0.0), c(2.0, 0.0)));
        assert_eq!(q.degree, 1);
        // quotient vanishes at the other root (-3 : 1)
        assert!(q.eval(c(-3.0, 0.0), c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn binary_derivative() {
        let b = BinaryForm::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        // d/ds (s⁴ + t⁴) = 4s³
        let db = b.d_ds();
        assert_eq!(db.coeffs[0], c(4.0, 0.0));
        assert!(db.coeffs[1..].iter().all(|x| x.norm() == 0.0));
    }
}
