//! Test oracles that do not go through the library's arithmetic.
#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Double-double number (~106-bit significand).
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

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // one Newton step on top of the f64 root doubles the precision
        let y = Dd::new(self.hi.sqrt());
        y + (self - y * y) / (y * Dd::new(2.0))
    }

    pub fn powi(self, n: u32) -> Dd {
        (0..n).fold(Dd::new(1.0), |acc, _| acc * self)
    }

    /// `x^(k/2)` for a non-negative integer `k`.
    pub fn pow_half(self, k: u32) -> Dd {
        let whole = self.powi(k / 2);
        if k % 2 == 1 {
            whole * self.sqrt()
        } else {
            whole
        }
    }

    pub fn min(self, other: Dd) -> Dd {
        if (self - other).to_f64() <= 0.0 {
            self
        } else {
            other
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        Dd::new(q1) + Dd::new(q2) + Dd::new(q3)
    }
}

pub fn dd(x: f64) -> Dd {
    Dd::new(x)
}

/// Model coefficients restricted to exponents that are multiples of 1/2, so that
/// every power can be formed from products and one square root.
#[derive(Debug, Clone, Copy)]
pub struct HalfIntModel {
    pub alpha_m1: f64,
    pub alpha_0: f64,
    pub alpha_1: f64,
    pub alpha_2: f64,
    pub sigma: f64,
    /// `2r`
    pub two_r: u32,
    /// `2ρ`
    pub two_rho: u32,
}

impl HalfIntModel {
    pub fn example1() -> Self {
        HalfIntModel {
            alpha_m1: 1.5,
            alpha_0: 2.0,
            alpha_1: 1.0,
            alpha_2: 13.0,
            sigma: 1.0,
            two_r: 8,
            two_rho: 3,
        }
    }

    pub fn example3() -> Self {
        HalfIntModel {
            two_r: 4,
            ..Self::example1()
        }
    }

    fn rho(&self) -> Dd {
        dd(self.two_rho as f64) / dd(2.0)
    }

    /// The value `A` of the quadratic `Y² − AY − a₋₁h`.
    pub fn rhs(&self, y: Dd, h: Dd, dw: Dd, cap: Dd, milstein: bool) -> Dd {
        let phi = y.min(cap);
        let theta = dd(-self.alpha_0) + dd(self.alpha_1) * phi - dd(self.alpha_2) * phi.pow_half(self.two_r);
        let g = dd(self.sigma) * phi.pow_half(self.two_rho);
        let mut a = phi + theta * h + g * dw;
        if milstein {
            let g_hat = self.rho() * dd(self.sigma) * dd(self.sigma) * phi.pow_half(2 * self.two_rho - 2);
            a = a + dd(0.5) * (dw * dw - h) * g_hat;
        }
        a
    }

    /// One semi-implicit step in double-double given the truncation level.
    pub fn step(&self, y: Dd, h: Dd, dw: Dd, cap: Dd, milstein: bool) -> Dd {
        let a = self.rhs(y, h, dw, cap, milstein);
        let c = dd(self.alpha_m1) * h;
        (a + (a * a + dd(4.0) * c).sqrt()) / dd(2.0)
    }

    /// Replays a whole path in double-double.
    pub fn replay(&self, x0: f64, h: f64, cap: f64, increments: &[f64], milstein: bool) -> Vec<f64> {
        let mut y = dd(x0);
        let mut out = vec![x0];
        for &w in increments {
            y = self.step(y, dd(h), dd(w), dd(cap), milstein);
            out.push(y.to_f64());
        }
        out
    }
}

/// Plain bisection for the unique root of an increasing function on `(lo, hi)`.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    assert!(f(lo) < 0.0 && f(hi) > 0.0, "bracket has no sign change");
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
