//! Double-double arithmetic: unevaluated sums of two doubles giving ~31
//! significant decimal digits. This is the software-implemented extended
//! precision behind [`crate::precision::Mode::Extended`]; it is applied to
//! the polishing and certification paths, which is where accuracy is made.

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x0 = self.hi.sqrt();
        // one Newton step in double-double doubles the accuracy
        let x = Dd::from_f64(x0);
        let r = self.sub(x.mul(x));
        x.add(Dd::from_f64(r.to_f64() / (2.0 * x0)))
    }

    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: CDd = CDd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn from_c64(z: crate::C64) -> CDd {
        CDd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn from_f64(x: f64) -> CDd {
        CDd {
            re: Dd::from_f64(x),
            im: Dd::ZERO,
        }
    }

    pub fn to_c64(self) -> crate::C64 {
        crate::C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: CDd) -> CDd {
        CDd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn sub(self, o: CDd) -> CDd {
        CDd {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    pub fn neg(self) -> CDd {
        CDd {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.mul(self.re).add(self.im.mul(self.im))
    }

    pub fn div(self, o: CDd) -> CDd {
        let d = o.norm_sqr();
        let num = self.mul(CDd {
            re: o.re,
            im: o.im.neg(),
        });
        CDd {
            re: num.re.div(d),
            im: num.im.div(d),
        }
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    pub fn scale_f64(self, s: f64) -> CDd {
        let sd = Dd::from_f64(s);
        CDd {
            re: self.re.mul(sd),
            im: self.im.mul(sd),
        }
    }
}

/// Complex scalar abstraction letting the polishing paths run in either
/// binary64 or double-double.
pub trait ComplexScalar: Copy {
    fn from_c64(z: crate::C64) -> Self;
    fn to_c64(self) -> crate::C64;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn abs(self) -> f64;
    /// working-precision epsilon for step sizes and stopping
    fn eps() -> f64;
}

impl ComplexScalar for crate::C64 {
    fn from_c64(z: crate::C64) -> Self {
        z
    }
    fn to_c64(self) -> crate::C64 {
        self
    }
    fn zero() -> Self {
        crate::C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        crate::C64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        crate::C64::new(x, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn eps() -> f64 {
        2.2e-16
    }
}

impl ComplexScalar for CDd {
    fn from_c64(z: crate::C64) -> Self {
        CDd::from_c64(z)
    }
    fn to_c64(self) -> crate::C64 {
        CDd::to_c64(self)
    }
    fn zero() -> Self {
        CDd::ZERO
    }
    fn one() -> Self {
        CDd::ONE
    }
    fn from_f64(x: f64) -> Self {
        CDd::from_f64(x)
    }
    fn add(self, o: Self) -> Self {
        CDd::add(self, o)
    }
    fn sub(self, o: Self) -> Self {
        CDd::sub(self, o)
    }
    fn mul(self, o: Self) -> Self {
        CDd::mul(self, o)
    }
    fn div(self, o: Self) -> Self {
        CDd::div(self, o)
    }
    fn neg(self) -> Self {
        CDd::neg(self)
    }
    fn abs(self) -> f64 {
        CDd::abs(self)
    }
    fn eps() -> f64 {
        1.2e-32
    }
}

/// Solve a flat row-major n×n system A x = b in place by Gaussian
/// elimination with partial pivoting; generic over the scalar.
pub fn solve_small<T: ComplexScalar>(a: &mut [T], b: &mut [T], n: usize) -> Option<Vec<T>> {
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let mut piv = col;
        let mut piv_mag = a[col * n + col].abs();
        for r in (col + 1)..n {
            let mag = a[r * n + col].abs();
            if mag > piv_mag {
                piv = r;
                piv_mag = mag;
            }
        }
        if piv_mag == 0.0 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in (col + 1)..n {
            let f = a[r * n + col].div(d);
            if f.abs() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[col * n + c];
                a[r * n + c] = a[r * n + c].sub(f.mul(v));
            }
            let v = b[col];
            b[r] = b[r].sub(f.mul(v));
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in (row + 1)..n {
            s = s.sub(a[row * n + c].mul(x[c]));
        }
        x[row] = s.div(a[row * n + row]);
    }
    Some(x)
}

/// Determinant of a flat row-major n×n complex double-double matrix
/// (partial pivoting), used by the extended-precision certification path.
pub fn det_small_cdd(m: &mut [CDd], n: usize) -> CDd {
    let mut det = CDd::ONE;
    for col in 0..n {
        let mut piv = col;
        let mut piv_mag = m[col * n + col].abs();
        for r in (col + 1)..n {
            let mag = m[r * n + col].abs();
            if mag > piv_mag {
                piv = r;
                piv_mag = mag;
            }
        }
        if piv_mag == 0.0 {
            return CDd::ZERO;
        }
        if piv != col {
            for c in 0..n {
                m.swap(col * n + c, piv * n + c);
            }
            det = det.neg();
        }
        let d = m[col * n + col];
        det = det.mul(d);
        for r in (col + 1)..n {
            let f = m[r * n + col].div(d);
            if f.abs() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[col * n + c];
                m[r * n + c] = m[r * n + c].sub(f.mul(v));
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_has_about_30_digits() {
        // (1 + 1e-20) - 1 survives in double-double
        let one = Dd::ONE;
        let tiny = Dd::from_f64(1e-20);
        let s = one.add(tiny).sub(one);
        assert!((s.to_f64() - 1e-20).abs() < 1e-33);
    }

    #[test]
    fn dd_mul_div_roundtrip() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let c = a.mul(b).div(b);
        assert!((c.sub(a)).abs() < 1e-30);
    }

    #[test]
    fn dd_sqrt() {
        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        let back = r.mul(r).sub(two);
        assert!(back.abs() < 1e-30);
    }

    #[test]
    fn cdd_field_ops() {
        let a = CDd::from_c64(crate::C64::new(1.25, -0.75));
        let b = CDd::from_c64(crate::C64::new(-0.5, 2.0));
        let c = a.mul(b).div(b).sub(a);
        assert!(c.abs() < 1e-30);
    }

    #[test]
    fn cdd_determinant_matches_f64() {
        use crate::subres::det_small;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let n = 5;
        let mut m64: Vec<crate::C64> = (0..n * n)
            .map(|_| crate::C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut mdd: Vec<CDd> = m64.iter().map(|&z| CDd::from_c64(z)).collect();
        let d64 = det_small(&mut m64, n);
        let ddd = det_small_cdd(&mut mdd, n).to_c64();
        assert!((d64 - ddd).norm() < 1e-12 * (1.0 + d64.norm()));
    }
}
