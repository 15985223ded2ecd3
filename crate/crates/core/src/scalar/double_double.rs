//! Double-double arithmetic: an unevaluated sum of two f64s giving a
//! ~106-bit mantissa with the f64 exponent range. Algorithms follow the
//! classic error-free transformations (two_sum / two_prod with FMA) and
//! the QD-library style argument reductions for exp/ln/sqrt/sinh.
//!
//! Per-operation accuracy: +,-,*,/,sqrt are within a few units of 2^-104;
//! exp and ln are bounded by the ln(2)-reduction error at roughly 2^-98.
//! `Real::UNIT_ROUNDOFF` is set to 2^-96 as a conservative per-op bound
//! covering the transcendentals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Real;

#[derive(Copy, Clone, Debug, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

const INV_FACT: [DoubleDouble; 15] = [
    DoubleDouble::from_parts(0.16666666666666666, 9.25185853854297e-18), // 1/3!
    DoubleDouble::from_parts(0.041666666666666664, 2.3129646346357427e-18), // 1/4!
    DoubleDouble::from_parts(0.008333333333333333, 1.1564823173178714e-19), // 1/5!
    DoubleDouble::from_parts(0.001388888888888889, -5.300543954373577e-20), // 1/6!
    DoubleDouble::from_parts(0.0001984126984126984, 1.7209558293420705e-22), // 1/7!
    DoubleDouble::from_parts(2.48015873015873e-5, 2.1511947866775882e-23),  // 1/8!
    DoubleDouble::from_parts(2.7557319223985893e-6, -1.858393274046472e-22), // 1/9!
    DoubleDouble::from_parts(2.755731922398589e-7, 2.3767714622250297e-23), // 1/10!
    DoubleDouble::from_parts(2.505210838544172e-8, -1.448814070935912e-24), // 1/11!
    DoubleDouble::from_parts(2.08767569878681e-9, -1.20734505911326e-25),   // 1/12!
    DoubleDouble::from_parts(1.6059043836821613e-10, 1.2585294588752098e-26), // 1/13!
    DoubleDouble::from_parts(1.1470745597729725e-11, 2.0655512752830745e-28), // 1/14!
    DoubleDouble::from_parts(7.647163731819816e-13, 7.03872877733453e-30),  // 1/15!
    DoubleDouble::from_parts(4.779477332387385e-14, 4.399205485834081e-31), // 1/16!
    DoubleDouble::from_parts(2.8114572543455206e-15, 1.6508842730861433e-31), // 1/17!
];

impl DoubleDouble {
    pub const PI: DoubleDouble =
        DoubleDouble::from_parts(3.141592653589793, 1.2246467991473532e-16);
    pub const LN_2: DoubleDouble =
        DoubleDouble::from_parts(0.6931471805599453, 2.3190468138462996e-17);

    /// Builds from an already-normalized (hi, lo) pair: hi = fl(hi + lo).
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        DoubleDouble { hi: h, lo: l }
    }

    #[inline]
    fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        Self::renorm(s1, s2 + self.lo)
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        Self::renorm(p1, p2 + self.lo * b)
    }

    #[inline]
    fn sqr(self) -> Self {
        let (p1, p2) = two_prod(self.hi, self.hi);
        Self::renorm(p1, p2 + 2.0 * self.hi * self.lo + self.lo * self.lo)
    }

    fn recip(self) -> Self {
        DoubleDouble::one() / self
    }

    fn nan() -> Self {
        DoubleDouble { hi: f64::NAN, lo: 0.0 }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    #[inline]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Self::renorm(s1, s2 + t2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        Self::renorm(p1, p2 + self.hi * b.lo + self.lo * b.hi)
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    #[inline]
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (s1, s2) = quick_two_sum(q1, q2);
        DoubleDouble { hi: s1, lo: s2 }.add_f64(q3)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble { hi: 0.0, lo: 0.0 }
    }

    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble { hi: 1.0, lo: 0.0 }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl Real for DoubleDouble {
    const NAME: &'static str = "extended";
    // 2^-96: conservative per-op bound including exp/ln (see module docs).
    const UNIT_ROUNDOFF: f64 = 1.262177448353619e-29;

    #[inline]
    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn from_u64(x: u64) -> Self {
        let hi = x as f64;
        // hi is integral and within i128 range, so the remainder is exact.
        let rem = (x as i128) - (hi as i128);
        let (h, l) = two_sum(hi, rem as f64);
        DoubleDouble { hi: h, lo: l }
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn pi() -> Self {
        Self::PI
    }

    fn ln_2() -> Self {
        Self::LN_2
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.hi < 0.0 {
            return Self::nan();
        }
        // Karp: with x ~ 1/sqrt(a), sqrt(a) ~ a*x + (a - (a*x)^2) * x/2.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let (p1, p2) = two_prod(ax, ax);
        let err = self - DoubleDouble { hi: p1, lo: p2 };
        Self::renorm(ax, err.hi * (x * 0.5))
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble { hi: f64::INFINITY, lo: 0.0 };
        }
        if self.hi < -709.0 {
            return Self::zero();
        }
        if self.is_zero() {
            return Self::one();
        }
        // self = k*ln2 + r, then exp(r) via Taylor on r/512 and 9 squarings.
        let k = (self.hi / Self::LN_2.hi + 0.5).floor();
        let r = (self - Self::LN_2.mul_f64(k)).ldexp(-9);

        let r2 = r.sqr();
        let mut s = r + r2.ldexp(-1);
        let mut p = r2 * r;
        let mut t = p * INV_FACT[0];
        let mut i = 0;
        // terms below (eps/512) no longer affect the unscaled sum
        let thresh = 2f64.powi(-104) / 512.0;
        loop {
            s = s + t;
            p = p * r;
            i += 1;
            if i >= INV_FACT.len() {
                break;
            }
            t = p * INV_FACT[i];
            if t.hi.abs() <= thresh {
                s = s + t;
                break;
            }
        }
        // (1+s)^(2^9), keeping s = result - 1 to avoid cancellation
        for _ in 0..9 {
            s = s.ldexp(1) + s.sqr();
        }
        s.add_f64(1.0).ldexp(k as i32)
    }

    fn ln(self) -> Self {
        if self == Self::one() {
            return Self::zero();
        }
        if self.hi <= 0.0 {
            return Self::nan();
        }
        // Newton on exp(x) = a from the f64 seed: one step doubles the
        // 53 correct bits past the dd target.
        let x0 = DoubleDouble::from(self.hi.ln());
        x0 + (self * (-x0).exp()).add_f64(-1.0)
    }

    fn sinh(self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if self.hi.abs() > 0.05 {
            let e = self.exp();
            return (e - e.recip()).ldexp(-1);
        }
        // Taylor for small arguments to avoid cancellation:
        // x + x^3/3! + x^5/5! + ...
        let r = self.sqr();
        let mut s = self;
        let mut t = self;
        let mut m = 1.0;
        let thresh = self.hi.abs() * 2f64.powi(-104);
        loop {
            m += 2.0;
            t = t * r;
            t = t / DoubleDouble::from((m - 1.0) * m);
            s = s + t;
            if t.hi.abs() <= thresh {
                break;
            }
        }
        s
    }

    #[inline]
    fn ldexp(self, e: i32) -> Self {
        let f = 2f64.powi(e);
        DoubleDouble { hi: self.hi * f, lo: self.lo * f }
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}
