//! Double-double arithmetic (about 31 significant digits).
//!
//! Used on the real Laplace axis, where the Gaver–Stehfest weights grow to
//! ~1e20 and plain `f64` cancels away every digit of the result.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: 6.931471805599452862e-01,
    lo: 2.319046813846299558e-17,
};

/// 1/k! for k = 3..=12, used by the exponential Taylor kernel.
const INV_FACT: [Dd; 10] = [
    Dd { hi: 1.666666666666666574e-01, lo: 9.251858538542970657e-18 },
    Dd { hi: 4.166666666666666435e-02, lo: 2.312964634635742664e-18 },
    Dd { hi: 8.333333333333333218e-03, lo: 1.156482317317871380e-19 },
    Dd { hi: 1.388888888888888942e-03, lo: -5.300543954373577059e-20 },
    Dd { hi: 1.984126984126984125e-04, lo: 1.720955829342070529e-22 },
    Dd { hi: 2.480158730158730157e-05, lo: 2.151194786677588161e-23 },
    Dd { hi: 2.755731922398589251e-06, lo: -1.858393274046472081e-22 },
    Dd { hi: 2.755731922398588828e-07, lo: 2.376771462225029732e-23 },
    Dd { hi: 2.505210838544172022e-08, lo: -1.448814070935911966e-24 },
    Dd { hi: 2.087675698786810019e-09, lo: -1.207345059113259972e-25 },
];

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact conversion of an integer with up to 106 significant bits.
    pub fn from_i128(v: i128) -> Self {
        let hi = v as f64;
        // `hi` is the correctly rounded value, so the residual fits in i128.
        let rest = v - hi as i128;
        Dd::renorm(hi, rest as f64)
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    fn ldexp(self, exp: i32) -> Self {
        let f = 2f64.powi(exp);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::new(f64::NAN, f64::NAN) };
        }
        let x = self.hi.sqrt();
        let xd = Dd::from(x);
        xd + (self - xd.sqr()) / (xd * 2.0)
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.78 {
            return Dd::new(f64::INFINITY, 0.0);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let m = (self.hi / LN2.hi).round();
        // r in [-ln2/2, ln2/2] / 512
        let r = (self - LN2 * m).ldexp(-9);
        let thresh = 1e-32 * r.hi.abs();
        let mut s = r + r.sqr().ldexp(-1);
        let mut p = r.sqr() * r;
        for inv in INV_FACT.iter() {
            let term = p * *inv;
            s = s + term;
            if term.hi.abs() <= thresh {
                break;
            }
            p = p * r;
        }
        // (1 + s)^2 - 1 = 2s + s^2, applied nine times undoes the 1/512.
        for _ in 0..9 {
            s = s.ldexp(1) + s.sqr();
        }
        (s + Dd::ONE).ldexp(m as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Dd::new(f64::NEG_INFINITY, 0.0)
            } else {
                Dd::new(f64::NAN, f64::NAN)
            };
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        // One Newton step on exp(x) = a doubles the f64 precision.
        let x = Dd::from(self.hi.ln());
        x + self * (-x).exp() - Dd::ONE
    }

    /// `self^y` for `self >= 0`.
    pub fn powf(self, y: Dd) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return match y.hi.partial_cmp(&0.0) {
                Some(Ordering::Greater) => Dd::ZERO,
                Some(Ordering::Equal) => Dd::ONE,
                _ => Dd::new(f64::INFINITY, 0.0),
            };
        }
        (y * self.ln()).exp()
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            k >>= 1;
        }
        acc
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        Dd::renorm(q1, q2) + Dd::from(q3)
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, b: f64) -> Dd {
        self + Dd::from(b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, b: f64) -> Dd {
        self - Dd::from(b)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        Dd::renorm(p, e + self.lo * b)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        self / Dd::from(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Dd, hi: f64, lo: f64) -> f64 {
        ((a - Dd::new(hi, lo)) / Dd::new(hi, lo)).to_f64().abs()
    }

    // Reference values: mpmath at the exact f64 inputs (tests/oracles/oracles.py).
    #[test]
    fn transcendental_accuracy() {
        let e07 = Dd::from(0.7).exp();
        assert!(rel(e07, 2.0137527074704766, -2.0058243549764793e-16) < 1e-30, "{e07:?}");
        let l3 = Dd::from(3.0).ln();
        assert!(rel(l3, 1.0986122886681098, -9.07129723500153e-17) < 1e-30, "{l3:?}");
        let p = Dd::from(2.5).powf(Dd::from(0.3));
        assert!(rel(p, 1.3163822043342375, -7.113171158760339e-17) < 1e-30, "{p:?}");
        let s2 = Dd::from(2.0).sqrt();
        assert!(rel(s2, 1.4142135623730951, -9.667293313452913e-17) < 1e-31);
    }

    #[test]
    fn exp_ln_inverse() {
        for &v in &[1e-8, 0.01, 0.5, 1.0, 3.7, 42.0, 2000.0] {
            let x = Dd::from(v) / Dd::from(3.0);
            let back = x.exp().ln();
            assert!((back - x).to_f64().abs() < 1e-29 * x.to_f64().max(1.0), "{v}");
        }
    }

    #[test]
    fn integer_conversion_is_exact() {
        let v: i128 = 123_456_789_012_345_678_901_234_567_890;
        let d = Dd::from_i128(v);
        let back = d.hi as i128 + d.lo as i128;
        assert!((back - v).abs() < 1 << 12);
        assert_eq!(Dd::from_i128(-17).to_f64(), -17.0);
    }
}
