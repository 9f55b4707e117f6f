use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{floor_div, NumericsError, Rational};

/// An exact real of the form `a + b·√d` with `a, b` rational and `d` square-free.
///
/// Rationals are stored with `b = 0` and `d = 0`. Values over different radicands
/// can be compared but not added.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Angle {
    a: Rational,
    b: Rational,
    d: u64,
}

/// Canonical external view of an [`Angle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AngleKind {
    Rational(Rational),
    /// `(p + q·√d) / r`
    Surd { p: BigInt, q: BigInt, d: u64, r: BigInt },
}

fn square_free_split(d: u64) -> (u64, u64) {
    // d = k² · s with s square-free
    let mut k = 1u64;
    let mut s = d;
    let mut f = 2u64;
    while f.saturating_mul(f) <= s {
        let ff = f * f;
        while s % ff == 0 {
            s /= ff;
            k *= f;
        }
        f += 1;
    }
    (k, s)
}

/// Sign of `x + y·√d` for rational `x, y` and integer `d ≥ 0`.
pub(crate) fn sign_quadratic(x: &Rational, y: &Rational, d: &BigInt) -> Ordering {
    let zero = Rational::zero();
    let sx = x.cmp(&zero);
    let sy = y.cmp(&zero);
    if sy == Ordering::Equal || d.is_zero() {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    let x2 = x * x;
    let y2d = y * y * Rational::from_integer(d.clone());
    match x2.cmp(&y2d) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

/// ⌊q·√d⌋ for integer q, with d not a perfect square.
fn floor_mul_sqrt(q: &BigInt, d: u64) -> BigInt {
    let sq = (q * q * BigInt::from(d)).sqrt();
    if q.is_negative() {
        -sq - 1
    } else {
        sq
    }
}

impl Angle {
    pub fn from_rational(r: Rational) -> Self {
        Angle { a: r, b: Rational::zero(), d: 0 }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    /// `a + b·√d` for an arbitrary positive radicand; square factors are pulled out.
    pub fn quadratic(a: Rational, b: Rational, d: u64) -> Result<Self, NumericsError> {
        if d == 0 {
            return Err(NumericsError::InvalidSurd("radicand must be positive".into()));
        }
        let (k, s) = square_free_split(d);
        let b = b * Rational::from_integer(BigInt::from(k));
        if s == 1 {
            return Ok(Self::from_rational(a + b));
        }
        if b.is_zero() {
            return Ok(Self::from_rational(a));
        }
        Ok(Angle { a, b, d: s })
    }

    /// `(p + q·√d) / r`
    pub fn surd(p: BigInt, q: BigInt, d: u64, r: BigInt) -> Result<Self, NumericsError> {
        if r.is_zero() {
            return Err(NumericsError::InvalidSurd("zero denominator".into()));
        }
        Self::quadratic(Rational::new(p, r.clone()), Rational::new(q, r), d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    /// Radicand, or 0 for rationals.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn kind(&self) -> AngleKind {
        if self.is_rational() {
            return AngleKind::Rational(self.a.clone());
        }
        let r = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom());
        let q = self.b.numer() * (&r / self.b.denom());
        AngleKind::Surd { p, q, d: self.d, r }
    }

    fn common_radicand(&self, other: &Angle) -> Result<u64, NumericsError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(NumericsError::MixedRadicands(x, y)),
        }
    }

    fn normalized(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() {
            Angle { a, b, d: 0 }
        } else {
            Angle { a, b, d }
        }
    }

    pub fn checked_add(&self, other: &Angle) -> Result<Angle, NumericsError> {
        let d = self.common_radicand(other)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Angle) -> Result<Angle, NumericsError> {
        let d = self.common_radicand(other)?;
        Ok(Self::normalized(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Angle) -> Result<Angle, NumericsError> {
        let d = self.common_radicand(other)?;
        let dd = Rational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, d))
    }

    pub fn checked_div(&self, other: &Angle) -> Result<Angle, NumericsError> {
        if other.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        let d = self.common_radicand(other)?;
        // multiply by the conjugate of the divisor
        let dd = Rational::from_integer(BigInt::from(d));
        let norm = &other.a * &other.a - &other.b * &other.b * &dd;
        let conj = Self::normalized(other.a.clone(), -other.b.clone(), d);
        let num = self.checked_mul(&conj)?;
        Ok(Self::normalized(&num.a / &norm, &num.b / &norm, d))
    }

    pub fn mul_rational(&self, r: &Rational) -> Angle {
        Self::normalized(&self.a * r, &self.b * r, self.d)
    }

    pub fn mul_int(&self, n: i64) -> Angle {
        self.mul_rational(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn add_rational(&self, r: &Rational) -> Angle {
        Angle { a: &self.a + r, b: self.b.clone(), d: self.d }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_quadratic(&self.a, &self.b, &BigInt::from(self.d))
    }

    /// Compare against a rational without allocating an [`Angle`].
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        sign_quadratic(&(&self.a - r), &self.b, &BigInt::from(self.d))
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        let r = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&r / self.a.denom());
        let q = self.b.numer() * (&r / self.b.denom());
        floor_div(&(p + floor_mul_sqrt(&q, self.d)), &r)
    }

    /// `⌈x⌉ = −⌊−x⌋`
    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    /// `x − ⌊x⌋ ∈ [0, 1)`
    pub fn fract(&self) -> Angle {
        self.add_rational(&Rational::from_integer(-self.floor()))
    }

    /// Reduce into `[0, m)` for a positive rational modulus.
    pub fn rem_euclid(&self, m: &Rational) -> Angle {
        let q = self.mul_rational(&m.recip()).floor();
        self.add_rational(&-(m * Rational::from_integer(q)))
    }

    pub fn abs(&self) -> Angle {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Nearest double; exact paths never rely on this.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Rational enclosure `[lo, lo + 2^-bits]` containing the value.
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.a.clone(), self.a.clone());
        }
        let scale = BigInt::one() << bits;
        let f = self.mul_rational(&Rational::from_integer(scale.clone())).floor();
        let lo = Rational::new(f.clone(), scale.clone());
        let hi = Rational::new(f + 1, scale);
        (lo, hi)
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        if let Ok(diff) = self.checked_sub(other) {
            return diff.signum();
        }
        // self − other = A + u with u = B√d1 + C√d2 over distinct square-free radicands
        let a = &self.a - &other.a;
        let (b, c) = (&self.b, -other.b.clone());
        let (d1, d2) = (BigInt::from(self.d), BigInt::from(other.d));
        let su = {
            let sb = b.cmp(&Rational::zero());
            let sc = c.cmp(&Rational::zero());
            if sb == sc {
                sb
            } else {
                let bb = b * b * Rational::from_integer(d1.clone());
                let cc = &c * &c * Rational::from_integer(d2.clone());
                if bb > cc {
                    sb
                } else {
                    sc
                }
            }
        };
        let sv = (-a.clone()).cmp(&Rational::zero());
        if su != sv {
            return su.cmp(&sv);
        }
        // same sign: compare u² with A², u² − A² = E + 2BC·√(d1·d2)
        let e = b * b * Rational::from_integer(d1.clone()) + &c * &c * Rational::from_integer(d2.clone())
            - &a * &a;
        let f = Rational::from_integer(BigInt::from(2)) * b * &c;
        let sq = sign_quadratic(&e, &f, &(d1 * d2));
        if su == Ordering::Greater {
            sq
        } else {
            sq.reverse()
        }
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Add for &Angle {
    type Output = Angle;
    /// Panics on mixed radicands; use [`Angle::checked_add`] when that can happen.
    fn add(self, rhs: &Angle) -> Angle {
        self.checked_add(rhs).expect("angles over different quadratic fields")
    }
}

impl Sub for &Angle {
    type Output = Angle;
    fn sub(self, rhs: &Angle) -> Angle {
        self.checked_sub(rhs).expect("angles over different quadratic fields")
    }
}

impl From<Rational> for Angle {
    fn from(r: Rational) -> Self {
        Angle::from_rational(r)
    }
}

impl From<i64> for Angle {
    fn from(n: i64) -> Self {
        Angle::from_integer(n)
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            AngleKind::Rational(r) => fmt_rational(&r, f),
            AngleKind::Surd { p, q, d, r } => {
                let sign = if q.sign() == Sign::Minus { '-' } else { '+' };
                write!(f, "({}{}{}*sqrt({}))/{}", p, sign, q.abs(), d, r)
            }
        }
    }
}

/// Parse `p`, `p/q` into a canonical rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let bad = || NumericsError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl FromStr for Angle {
    type Err = NumericsError;

    /// Accepts `p`, `p/q`, `(p+q*sqrt(d))/r`, `(p-q*sqrt(d))/r`; the `/r` and the `q*` are optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumericsError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if !t.contains("sqrt") {
            return parse_rational(&t).map(Angle::from_rational);
        }
        let (body, r) = if let Some(rest) = t.strip_prefix('(') {
            let close = rest.rfind(')').ok_or_else(bad)?;
            let (inner, tail) = (&rest[..close], &rest[close + 1..]);
            let r = match tail.strip_prefix('/') {
                Some(r) => BigInt::from_str(r).map_err(|_| bad())?,
                None if tail.is_empty() => BigInt::one(),
                None => return Err(bad()),
            };
            (inner.to_string(), r)
        } else {
            (t.clone(), BigInt::one())
        };
        let at = body.find("sqrt(").ok_or_else(bad)?;
        let d_end = body[at..].find(')').ok_or_else(bad)? + at;
        if d_end + 1 != body.len() {
            return Err(bad());
        }
        let d: u64 = body[at + 5..d_end].parse().map_err(|_| bad())?;
        let head = &body[..at];
        // head is "<p><sign><q>*" or "<p><sign>" or "<q>*" or ""
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (p, q) = match split {
            Some(i) => {
                let p = BigInt::from_str(&head[..i]).map_err(|_| bad())?;
                let qs = &head[i..];
                let q = match qs {
                    "+" => BigInt::one(),
                    "-" => -BigInt::one(),
                    _ => BigInt::from_str(qs.trim_start_matches('+')).map_err(|_| bad())?,
                };
                (p, q)
            }
            None => {
                let q = match head {
                    "" | "+" => BigInt::one(),
                    "-" => -BigInt::one(),
                    _ => BigInt::from_str(head).map_err(|_| bad())?,
                };
                (BigInt::zero(), q)
            }
        };
        Angle::surd(p, q, d, r)
    }
}
