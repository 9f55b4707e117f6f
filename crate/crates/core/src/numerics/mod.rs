//! Exact arithmetic: rationals, quadratic surds, valuations, affine floors and
//! interval logarithms for the conjugacy `φ(x) = (log x + log 3)/log 6`.

mod affine;
mod angle;
mod logs;

pub use affine::AffineFloor;
pub use angle::{parse_rational, Angle, AngleKind};
pub use logs::{
    ln_interval, log6_of_two, log6_of_three, phi, phi_inverse, rnd_alpha, rnd_alpha_shifted, RealInterval,
    MAX_PRECISION_BITS, START_PRECISION_BITS,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("undefined input: {0}")]
    UndefinedInput(String),
    #[error("cannot parse `{0}` as an exact number")]
    Parse(String),
    #[error("invalid surd: {0}")]
    InvalidSurd(String),
    #[error("values over different radicands {0} and {1}")]
    MixedRadicands(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} outside the domain [1/3, 2]")]
    Domain(String),
    #[error("cannot separate the point from an interval endpoint at {0} bits")]
    EndpointAmbiguity(u32),
    #[error("integer overflow")]
    Overflow,
}

/// ⌊n / d⌋ for `d > 0`.
pub fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

/// `|q|_a = −n_a` where `a^{n_a}` exactly divides `q`.
pub fn valuation(q: &Rational, a: u64) -> Result<i64, NumericsError> {
    if q.is_zero() {
        return Err(NumericsError::UndefinedInput("valuation of zero".into()));
    }
    if a < 2 || !(2..a).take_while(|k| k * k <= a).all(|k| a % k != 0) {
        return Err(NumericsError::UndefinedInput(format!("{a} is not prime")));
    }
    let p = BigInt::from(a);
    let count = |x: &BigInt| {
        let mut x = x.abs();
        let mut n = 0i64;
        while (&x % &p).is_zero() {
            x /= &p;
            n += 1;
        }
        n
    };
    Ok(count(q.denom()) - count(q.numer()))
}

/// ⌊n·α + t⌋
pub fn floor_affine(alpha: &Angle, n: &BigInt, t: &Rational) -> BigInt {
    alpha.mul_rational(&Rational::from_integer(n.clone())).add_rational(t).floor()
}

/// ⌈n·α + t⌉ = −⌊−(n·α + t)⌋
pub fn ceil_affine(alpha: &Angle, n: &BigInt, t: &Rational) -> BigInt {
    -(-alpha.mul_rational(&Rational::from_integer(n.clone())).add_rational(t)).floor()
}

pub(crate) fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub(crate) fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}
