use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{int, rat, Angle, NumericsError, Rational};

pub const START_PRECISION_BITS: u32 = 64;
pub const MAX_PRECISION_BITS: u32 = 4096;

/// A closed interval with exact rational endpoints known to contain some real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RealInterval {
    pub fn point(x: Rational) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    pub fn add(&self, o: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn scale(&self, r: &Rational) -> RealInterval {
        let (a, b) = (&self.lo * r, &self.hi * r);
        if r.is_negative() {
            RealInterval { lo: b, hi: a }
        } else {
            RealInterval { lo: a, hi: b }
        }
    }

    /// Division by an interval of strictly positive reals.
    pub fn div_positive(&self, o: &RealInterval) -> RealInterval {
        debug_assert!(o.lo.is_positive());
        let lo = if self.lo.is_negative() { &self.lo / &o.lo } else { &self.lo / &o.hi };
        let hi = if self.hi.is_negative() { &self.hi / &o.hi } else { &self.hi / &o.lo };
        RealInterval { lo, hi }
    }

    /// The unique integer strictly inside, if the interval sits between two integers.
    fn ceil_if_separated(&self) -> Option<BigInt> {
        let f = self.lo.floor();
        if f == self.lo || self.hi.floor() != f || self.hi.is_integer() {
            return None;
        }
        Some(f.to_integer() + 1)
    }
}

/// Fixed-point value `v` with error `e`: the real lies in `[(v−e)/2^w, (v+e)/2^w]`.
struct Fixed {
    v: BigInt,
    e: BigInt,
}

impl Fixed {
    fn interval(&self, w: u32) -> RealInterval {
        let s = BigInt::one() << w;
        RealInterval { lo: Rational::new(&self.v - &self.e, s.clone()), hi: Rational::new(&self.v + &self.e, s) }
    }

    fn add(&self, o: &Fixed) -> Fixed {
        Fixed { v: &self.v + &o.v, e: &self.e + &o.e }
    }

    fn mul_int(&self, k: &BigInt) -> Fixed {
        Fixed { v: &self.v * k, e: &self.e * k.abs() }
    }
}

/// atanh(u/v) for `0 ≤ u/v ≤ 1/3`, as a fixed-point value at `w` fractional bits.
fn atanh_fixed(u: &BigInt, v: &BigInt, w: u32) -> Fixed {
    let mut pow = (u << w) / v;
    let (u2, v2) = (u * u, v * v);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        sum += &pow / BigInt::from(2 * k + 1);
        if pow.is_zero() {
            break;
        }
        pow = pow * &u2 / &v2;
        k += 1;
    }
    // every truncated power is within 2 ulps, every quotient within 3; the tail is under 6
    Fixed { v: sum, e: BigInt::from(3 * (k + 1) + 6) }
}

fn ln2_fixed(w: u32) -> Fixed {
    let t = atanh_fixed(&BigInt::from(1), &BigInt::from(3), w);
    t.mul_int(&BigInt::from(2))
}

fn ln3_fixed(w: u32) -> Fixed {
    let t = atanh_fixed(&BigInt::from(1), &BigInt::from(5), w).mul_int(&BigInt::from(2));
    ln2_fixed(w).add(&t)
}

/// ln x for a positive rational.
fn ln_fixed(x: &Rational, w: u32) -> Fixed {
    debug_assert!(x.is_positive());
    let (n, d) = (x.numer().clone(), x.denom().clone());
    let mut k = n.bits() as i64 - d.bits() as i64;
    let two = int(2);
    let pow2 = |k: i64| if k >= 0 { int(BigInt::one() << k as u64) } else { Rational::new(BigInt::one(), BigInt::one() << (-k) as u64) };
    let mut y = x / pow2(k);
    if y < rat(3, 4) {
        y *= &two;
        k -= 1;
    }
    if y >= rat(3, 2) {
        y /= &two;
        k += 1;
    }
    let (yn, yd) = (y.numer(), y.denom());
    let (u, v) = (yn - yd, yn + yd);
    let mut t = atanh_fixed(&u.abs(), &v, w).mul_int(&BigInt::from(2));
    if u.is_negative() {
        t.v = -t.v;
    }
    t.add(&ln2_fixed(w).mul_int(&BigInt::from(k)))
}

fn ln_rational_interval(x: &Rational, w: u32) -> RealInterval {
    ln_fixed(x, w).interval(w)
}

/// Interval for ln x, `x > 0`, evaluated with `bits` fractional bits of working precision.
pub fn ln_interval(x: &Angle, bits: u32) -> Result<RealInterval, NumericsError> {
    if x.signum() != Ordering::Greater {
        return Err(NumericsError::UndefinedInput(format!("logarithm of {x}")));
    }
    if let Some(r) = x.as_rational() {
        return Ok(ln_rational_interval(r, bits));
    }
    let mut guard = bits + 8;
    loop {
        let (lo, hi) = x.enclose(guard);
        if lo.is_positive() {
            let l = ln_rational_interval(&lo, bits);
            let h = ln_rational_interval(&hi, bits);
            return Ok(RealInterval { lo: l.lo, hi: h.hi });
        }
        guard *= 2;
    }
}

fn ln6_interval(w: u32) -> RealInterval {
    ln2_fixed(w).add(&ln3_fixed(w)).interval(w)
}

/// log 2 / log 6
pub fn log6_of_two(bits: u32) -> RealInterval {
    let w = bits + 16;
    ln2_fixed(w).interval(w).div_positive(&ln6_interval(w))
}

/// log 3 / log 6
pub fn log6_of_three(bits: u32) -> RealInterval {
    let w = bits + 16;
    ln3_fixed(w).interval(w).div_positive(&ln6_interval(w))
}

/// exp(q) for rational `0 ≤ q ≤ 2`.
fn exp_fixed(q: &Rational, w: u32) -> Fixed {
    debug_assert!(!q.is_negative());
    let (qn, qd) = (q.numer(), q.denom());
    let qf = q.to_f64().unwrap_or(2.0) + 1e-9;
    let mut term = BigInt::one() << w;
    let mut sum = term.clone();
    let mut e_term = 0.0f64;
    let mut e_sum = 0.0f64;
    let mut k = 1u64;
    loop {
        term = term * qn / (qd * BigInt::from(k));
        e_term = e_term * qf / k as f64 + 1.0;
        sum += &term;
        e_sum += e_term;
        if term.is_zero() && (k as f64) > 2.0 * qf + 1.0 {
            break;
        }
        k += 1;
    }
    let tail = 2.0 * (e_term + 1.0);
    Fixed { v: sum, e: BigInt::from((e_sum + tail).ceil() as u64 + 2) }
}

fn check_domain(x: &Angle) -> Result<(), NumericsError> {
    if x.cmp_rational(&rat(1, 3)) == Ordering::Less || x.cmp_rational(&int(2)) == Ordering::Greater {
        return Err(NumericsError::Domain(x.to_string()));
    }
    Ok(())
}

fn clamp_unit(mut r: RealInterval) -> RealInterval {
    let (zero, one) = (int(0), int(1));
    if r.lo < zero {
        r.lo = zero.clone();
    }
    if r.hi > one {
        r.hi = one.clone();
    }
    if r.hi < r.lo {
        r.hi = r.lo.clone();
    }
    r
}

fn target(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

/// φ(x) = (log x + log 3)/log 6 on `[1/3, 2]`, as an interval of width at most `2^-bits`.
pub fn phi(x: &Angle, bits: u32) -> Result<RealInterval, NumericsError> {
    check_domain(x)?;
    let goal = target(bits);
    let mut w = bits.max(START_PRECISION_BITS) + 32;
    loop {
        let num = ln_interval(x, w)?.add(&ln3_fixed(w).interval(w));
        let r = clamp_unit(num.div_positive(&ln6_interval(w)));
        if r.width() <= goal || w > 4 * MAX_PRECISION_BITS {
            return Ok(r);
        }
        w *= 2;
    }
}

/// φ⁻¹(y) = 6^y / 3 for rational `y ∈ [0, 1]`.
pub fn phi_inverse(y: &Rational, bits: u32) -> Result<RealInterval, NumericsError> {
    if y.is_negative() || y > &int(1) {
        return Err(NumericsError::Domain(y.to_string()));
    }
    let goal = target(bits);
    let mut w = bits.max(START_PRECISION_BITS) + 32;
    loop {
        let l6 = ln6_interval(w);
        let (zl, zh) = (y * &l6.lo, y * &l6.hi);
        let lo = exp_fixed(&zl.max(int(0)), w);
        let hi = exp_fixed(&zh, w);
        let r = RealInterval { lo: lo.interval(w).lo / int(3), hi: hi.interval(w).hi / int(3) };
        if r.width() <= goal || w > 4 * MAX_PRECISION_BITS {
            return Ok(r);
        }
        w *= 2;
    }
}

/// `rnd_α(x + j·log3/log6)`: the integer `n` with `n − 1 < x + j·log3/log6 + (log α − log 2)/log 6 < n`.
pub fn rnd_alpha_shifted(alpha: &Angle, x: &Rational, j: &BigInt) -> Result<BigInt, NumericsError> {
    if alpha.signum() != Ordering::Greater {
        return Err(NumericsError::Domain(alpha.to_string()));
    }
    let mut w = START_PRECISION_BITS;
    loop {
        let guard = w + 16 + j.bits() as u32;
        let num = ln3_fixed(guard).mul_int(j).interval(guard).add(&ln_interval(alpha, guard)?).sub(&ln2_fixed(guard).interval(guard));
        let y = num.div_positive(&ln6_interval(guard));
        let y = RealInterval { lo: &y.lo + x, hi: &y.hi + x };
        if let Some(n) = y.ceil_if_separated() {
            return Ok(n);
        }
        if w >= MAX_PRECISION_BITS {
            return Err(NumericsError::EndpointAmbiguity(w));
        }
        w *= 2;
    }
}

/// `rnd_α(x)`: the integer `n` whose interval `(n − log3/log6 − logα/log6, n + log2/log6 − logα/log6)` holds `x`.
pub fn rnd_alpha(alpha: &Angle, x: &Rational) -> Result<BigInt, NumericsError> {
    rnd_alpha_shifted(alpha, x, &BigInt::zero())
}
