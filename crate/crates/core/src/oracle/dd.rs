//! Double-double arithmetic: an unevaluated sum `hi + lo` carrying about 31
//! significant digits. Only what the series oracle needs is implemented.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

const LN2: DD = DD { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
const HALF_LN_2PI: DD = DD { hi: 0.918_938_533_204_672_8, lo: -3.878_294_158_067_241_4e-17 };

/// Unit roundoff of the format, roughly 2^-104.
pub const DD_EPS: f64 = 4.93e-32;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
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

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> DD {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn sqr(self) -> DD {
        self * self
    }

    /// Scale by an exact power of two.
    pub fn ldexp(self, k: i32) -> DD {
        let s = 2f64.powi(k);
        DD { hi: self.hi * s, lo: self.lo * s }
    }

    pub fn powi(self, mut n: u32) -> DD {
        let mut base = self;
        let mut acc = DD::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            n >>= 1;
        }
        acc
    }

    pub fn exp(self) -> DD {
        if self.hi > 709.0 {
            return DD::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DD::ZERO;
        }
        // x = k ln2 + r, then exp(r / 16) by Taylor and square back
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * DD::new(k);
        let r = r.ldexp(-4);
        let mut term = DD::ONE;
        let mut sum = DD::ONE;
        for i in 1..=24 {
            term = term * r / DD::new(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        for _ in 0..4 {
            sum = sum.sqr();
        }
        // apply 2^k in two steps to stay clear of overflow in the scale factor
        let k = k as i32;
        sum.ldexp(k / 2).ldexp(k - k / 2)
    }

    /// Natural logarithm by Newton steps on `exp`.
    pub fn ln(self) -> DD {
        assert!(self.hi > 0.0, "ln of a non-positive double-double");
        let mut y = DD::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - DD::ONE;
        }
        y
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::new(x)
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, o: DD) -> DD {
        self + (-o)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, o: DD) -> DD {
        let q1 = self.hi / o.hi;
        let r = self - o * DD::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DD::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

impl PartialOrd for DD {
    fn partial_cmp(&self, o: &DD) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            other => other,
        }
    }
}

// B_{2j} as exact numerator / denominator, j = 1..15
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174_611.0, 330.0),
    (854_513.0, 138.0),
    (-236_364_091.0, 2730.0),
    (8_553_103.0, 6.0),
    (-23_749_461_029.0, 870.0),
    (8_615_841_276_005.0, 14322.0),
];

/// ln Gamma(x) for x > 0: Stirling's series at x >= 30, shifted down by recurrence.
pub fn ln_gamma_dd(x: DD) -> DD {
    assert!(x.hi > 0.0, "ln_gamma_dd needs a positive argument");
    let mut shift = DD::ONE;
    let mut y = x;
    while y.hi < 30.0 {
        shift = shift * y;
        y = y + DD::ONE;
    }
    let inv = DD::ONE / y;
    let inv2 = inv.sqr();
    let mut corr = DD::ZERO;
    let mut pow = inv;
    for (j, &(num, den)) in BERNOULLI.iter().enumerate() {
        let n = 2.0 * (j as f64 + 1.0);
        let c = DD::new(num) / (DD::new(den) * DD::new(n * (n - 1.0)));
        corr = corr + c * pow;
        pow = pow * inv2;
    }
    let stirling = (y - DD::new(0.5)) * y.ln() - y + HALF_LN_2PI + corr;
    if shift == DD::ONE {
        stirling
    } else {
        stirling - shift.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_keeps_extra_digits() {
        let third = DD::ONE / DD::new(3.0);
        let back = third * DD::new(3.0) - DD::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let tiny = DD::new(1.0) + DD::new(1e-20);
        assert_eq!(tiny.lo, 1e-20);
    }

    #[test]
    fn exp_and_ln_round_trip() {
        for &x in &[-40.0, -3.3, -1e-5, 0.7, 12.5, 300.0] {
            let v = DD::new(x).exp().ln() - DD::new(x);
            assert!(v.to_f64().abs() < 1e-29 * (1.0 + x.abs()), "x = {x}");
        }
        // e to 32 digits: 2.71828182845904523536028747135266
        let e = DD::ONE.exp();
        assert_eq!(e.hi, std::f64::consts::E);
        assert!((e.lo - 1.445_646_891_729_250_2e-16).abs() < 1e-30, "{e:?}");
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        // ln(20!) and ln Gamma(0.5) = ln(sqrt(pi))
        let mut f = DD::ONE;
        for k in 2..=20 {
            f = f * DD::new(k as f64);
        }
        let d = ln_gamma_dd(DD::new(21.0)) - f.ln();
        assert!(d.to_f64().abs() < 1e-28, "{d:?}");
        let half = ln_gamma_dd(DD::new(0.5)).to_f64();
        assert!((half - 0.572_364_942_924_700_087_1).abs() < 1e-16);
    }
}
