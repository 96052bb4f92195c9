//! Shared oracles for the integration tests.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Sub};

/// Double-double number `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            Dd {
                hi: -self.hi,
                lo: -self.lo,
            }
        } else {
            self
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd {
            hi: -o.hi,
            lo: -o.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Dd::from(q3)
    }
}

/// Laurent coefficients `c_2..` of ℘ in double-double.
pub fn laurent_dd(g2: f64, g3: f64, terms: usize) -> Vec<Dd> {
    let mut c = vec![Dd::ZERO; terms + 2];
    c[2] = Dd::from(g2) / Dd::from(20.0);
    c[3] = Dd::from(g3) / Dd::from(28.0);
    for k in 4..c.len() {
        let mut conv = Dd::ZERO;
        for m in 2..=k - 2 {
            conv = conv + c[m] * c[k - m];
        }
        c[k] = Dd::from(3.0) * conv / Dd::from(((2 * k + 1) * (k - 3)) as f64);
    }
    c
}

/// ℘ summed directly from the Laurent series in double-double, with no
/// argument reduction. `None` if the series has not converged to 1e-30
/// within the available terms (the argument is near or past the radius of
/// convergence).
pub fn wp_laurent_oracle(z: f64, coeffs: &[Dd]) -> Option<f64> {
    let zz = Dd::from(z) * Dd::from(z);
    let mut value = Dd::from(1.0) / zz;
    let mut power = Dd::from(1.0);
    let mut small = 0;
    for ck in coeffs.iter().skip(2) {
        power = power * zz;
        let term = *ck * power;
        value = value + term;
        if term.abs().hi < 1e-30 * value.abs().hi {
            small += 1;
            if small >= 3 {
                return Some(value.to_f64());
            }
        } else {
            small = 0;
        }
    }
    None
}

/// `max(|g2|^(1/4), |g3|^(1/6))`, the natural inverse length of the germs.
pub fn germ_scale(g2: f64, g3: f64) -> f64 {
    g2.abs().powf(0.25).max(g3.abs().powf(1.0 / 6.0))
}
