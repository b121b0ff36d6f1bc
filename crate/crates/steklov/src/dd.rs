//! Compensated double-double arithmetic.
//!
//! A `Dd` is an unevaluated sum of two `f64`s carrying roughly 106 bits of
//! significand. It is built entirely from IEEE double operations (error-free
//! transforms: two-sum and FMA-based two-product), so results stay bitwise
//! deterministic. It is used in the one place where plain doubles cannot
//! resolve the quantity of interest: the asymptotic remainder of the annulus
//! eigenvalue, which near machine precision is smaller than one ulp of the
//! eigenvalue itself.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: returns (fl(a+b), roundoff).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Error-free sum assuming |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_u32(x: u32) -> Dd {
        Dd::from_f64(f64::from(x))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Square root by one double-double Newton correction of the f64 estimate.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let y = self.hi.sqrt();
        let yd = Dd::from_f64(y);
        // y + (a - y^2) / (2y); the correction is tiny, so an f64 divide suffices.
        let diff = self - yd * yd;
        yd + Dd::from_f64(diff.to_f64() / (2.0 * y))
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, mut e: u32) -> Dd {
        let mut base = self;
        let mut acc = Dd::from_f64(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        // Three-term long division; each step removes one f64's worth of error.
        let q1 = self.hi / o.hi;
        let r1 = self - o.mul_f64(q1);
        let q2 = r1.hi / o.hi;
        let r2 = r1 - o.mul_f64(q2);
        let q3 = r2.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl Dd {
    #[inline]
    fn mul_f64(self, f: f64) -> Dd {
        let (p, e) = two_prod(self.hi, f);
        let e = e + self.lo * f;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_keeps_bits_f64_drops() {
        let big = Dd::from_f64(1e16);
        let sum = big + Dd::from_f64(1.0);
        assert_eq!((sum - big).to_f64(), 1.0);
        // the same computation collapses in plain f64
        assert_eq!((1e16_f64 + 1.0) - 1e16, 0.0);
    }

    #[test]
    fn sqrt_squares_back() {
        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        let back = r * r - two;
        assert!(back.to_f64().abs() < 1e-31, "residual {}", back.to_f64());
    }

    #[test]
    fn division_round_trip() {
        let third = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        let back = third * Dd::from_f64(3.0) - Dd::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn powers_match_repeated_multiplication() {
        let x = Dd::from_f64(0.02);
        let mut acc = Dd::from_f64(1.0);
        for _ in 0..11 {
            acc = acc * x;
        }
        let diff = (x.powi(11) - acc).to_f64().abs();
        assert!(diff <= 1e-30 * acc.to_f64().abs());
    }

    #[test]
    fn abs_and_neg() {
        let x = Dd::from_f64(-3.5);
        assert_eq!(x.abs().to_f64(), 3.5);
        assert_eq!((-x).to_f64(), 3.5);
    }
}
