//! Bessel functions of the first kind of integer order and the zeros of their
//! derivatives, as needed for the Neumann spectrum of the unit disk.
//!
//! `J_m` is summed from its power series in double-double arithmetic. The
//! alternating terms grow to roughly `e^x / x` before cancelling, so plain
//! `f64` summation loses about nine digits at `x = 20`; the extra word keeps
//! the result at full double precision over the range used here.

use crate::error::SpectraError;

/// Largest supported order for [`bessel_jm_prime_zero`].
pub const MAX_ORDER: usize = 8;
/// Largest supported zero index.
pub const MAX_ZERO_INDEX: usize = 10;

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let s = Dd::quick_two_sum(s.hi, s.lo + t.hi);
        Dd::quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        Dd::quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let p = Dd::two_prod(q1, d);
        let r = Dd::two_sum(self.hi, -p.hi);
        let q2 = (r.hi + (r.lo - p.lo + self.lo)) / d;
        Dd::quick_two_sum(q1, q2)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

/// `J_m(x)` for integer order `m` and `x >= 0` (negative `x` uses parity).
pub fn bessel_jn(m: usize, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_jn(m, -x);
        return if m % 2 == 0 { v } else { -v };
    }
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let half = Dd::from_f64(x / 2.0);
    let q = half.mul(half).neg();
    // (x/2)^m / m!
    let mut term = Dd::from_f64(1.0);
    for j in 1..=m {
        term = term.mul(half).div_f64(j as f64);
    }
    let mut sum = Dd::ZERO;
    let mut k = 0usize;
    loop {
        sum = sum.add(term);
        k += 1;
        term = term.mul(q).div_f64((k * (k + m)) as f64);
        if k as f64 > x && term.hi.abs() <= 1e-33 * sum.hi.abs().max(1e-300) {
            break;
        }
        if k > 400 || term.hi == 0.0 {
            break;
        }
    }
    sum.hi + sum.lo
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_jn(0, x)
}

/// `J_m'(x)`.
pub fn bessel_jn_prime(m: usize, x: f64) -> f64 {
    if m == 0 {
        -bessel_jn(1, x)
    } else {
        0.5 * (bessel_jn(m - 1, x) - bessel_jn(m + 1, x))
    }
}

// J'' from Bessel's equation.
fn bessel_jn_second(m: usize, x: f64) -> f64 {
    let mf = m as f64;
    -bessel_jn_prime(m, x) / x - (1.0 - mf * mf / (x * x)) * bessel_jn(m, x)
}

/// The `k`-th non-negative zero of `J_m'` with the Neumann disk convention:
/// for `m = 0` the first zero is `0` (the constant mode); for `m >= 1` the
/// trivial zero at the origin is not counted.
pub fn bessel_jm_prime_zero(m: usize, k: usize) -> Result<f64, SpectraError> {
    if m > MAX_ORDER {
        return Err(SpectraError::OrderOutOfRange(m));
    }
    if k == 0 || k > MAX_ZERO_INDEX {
        return Err(SpectraError::ZeroIndexOutOfRange(k));
    }
    if m == 0 && k == 1 {
        return Ok(0.0);
    }
    let wanted = if m == 0 { k - 1 } else { k };
    let f = |x: f64| bessel_jn_prime(m, x);
    let step = 0.05;
    let mut found = 0;
    let mut lo = step;
    let mut f_lo = f(lo);
    while lo < 80.0 {
        let hi = lo + step;
        let f_hi = f(hi);
        if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
            found += 1;
            if found == wanted {
                return newton_bracketed(m, lo, hi);
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(SpectraError::NoConvergence)
}

/// Shorthand for the radial family: `bessel_jm_prime_zero(0, k)`.
pub fn bessel_j0_prime_zero(k: usize) -> Result<f64, SpectraError> {
    bessel_jm_prime_zero(0, k)
}

// Newton on J_m' kept inside [lo, hi]; falls back to bisection when a step
// leaves the bracket.
fn newton_bracketed(m: usize, mut lo: f64, mut hi: f64) -> Result<f64, SpectraError> {
    let f = |x: f64| bessel_jn_prime(m, x);
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let d = bessel_jn_second(m, x);
        let mut next = x - fx / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    if hi - lo < 1e-12 {
        Ok(0.5 * (lo + hi))
    } else {
        Err(SpectraError::NoConvergence)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // J_m(x) = (1/2pi) * integral over a period of cos(m t - x sin t); the
    // trapezoid rule converges geometrically for this periodic integrand.
    fn jn_quadrature(m: usize, x: f64) -> f64 {
        let n = 256;
        let h = 2.0 * PI / n as f64;
        (0..n)
            .map(|i| {
                let t = i as f64 * h;
                (m as f64 * t - x * t.sin()).cos()
            })
            .sum::<f64>()
            / n as f64
    }

    #[test]
    fn j0_at_origin() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_jn(3, 0.0), 0.0);
    }

    #[test]
    fn series_matches_quadrature_on_0_20() {
        for m in 0..=3 {
            for i in 0..=200 {
                let x = i as f64 * 0.1;
                let err = (bessel_jn(m, x) - jn_quadrature(m, x)).abs();
                assert!(err < 1e-12, "m={m} x={x} err={err}");
            }
        }
    }

    #[test]
    fn series_accurate_beyond_20_for_high_orders() {
        for m in [5, 8, 9] {
            for x in [22.0, 27.5, 31.0] {
                let err = (bessel_jn(m, x) - jn_quadrature(m, x)).abs();
                assert!(err < 1e-12, "m={m} x={x} err={err}");
            }
        }
    }

    #[test]
    fn radial_neumann_zeros() {
        assert_eq!(bessel_j0_prime_zero(1).unwrap(), 0.0);
        let z2 = bessel_j0_prime_zero(2).unwrap();
        assert!((z2 - 3.8317).abs() < 1e-4);
        assert!((z2 * z2 - 14.68).abs() < 0.01);
        assert!(bessel_jn(1, z2).abs() < 1e-13);
    }

    #[test]
    fn zeros_are_roots_of_the_quadrature_derivative() {
        // independent check: central difference of the quadrature J_m
        for m in 0..=MAX_ORDER {
            for k in 1..=5 {
                let z = bessel_jm_prime_zero(m, k).unwrap();
                if z == 0.0 {
                    continue;
                }
                let h = 1e-5;
                let d = (jn_quadrature(m, z + h) - jn_quadrature(m, z - h)) / (2.0 * h);
                assert!(d.abs() < 1e-8, "m={m} k={k} z={z} d={d}");
            }
        }
    }

    #[test]
    fn zeros_increase_and_interlace_with_order() {
        for m in 0..=MAX_ORDER {
            let zs: Vec<f64> = (1..=MAX_ZERO_INDEX)
                .map(|k| bessel_jm_prime_zero(m, k).unwrap())
                .collect();
            assert!(zs.windows(2).all(|w| w[1] > w[0] + 1.0));
            if m >= 1 {
                // j'_{m,1} >= sqrt(m(m+2))
                let mf = m as f64;
                assert!(zs[0] >= (mf * (mf + 2.0)).sqrt());
            }
        }
    }

    #[test]
    fn index_range() {
        assert!(bessel_j0_prime_zero(0).is_err());
        assert!(bessel_j0_prime_zero(11).is_err());
        assert!(bessel_jm_prime_zero(9, 1).is_err());
        assert!(bessel_j0_prime_zero(10).is_ok());
    }
}
