use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{floor_div, Angle, NumericsError};

/// `n ↦ ⌊(n·a + b + (n·c + e)·√d) / den⌋`, the floor sequence of `n·α + t`.
///
/// Evaluates in `i128` while everything fits and falls back to big integers.
#[derive(Clone, Debug)]
pub struct AffineFloor {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    e: BigInt,
    d: u64,
    den: BigInt,
    small: Option<[i128; 5]>,
}

fn isqrt_u128(v: u128) -> u128 {
    let mut x = (v as f64).sqrt() as u128;
    while x.checked_mul(x).map_or(true, |sq| sq > v) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= v) {
        x += 1;
    }
    x
}

fn fits(x: &BigInt) -> Option<i128> {
    let v = x.to_i128()?;
    (v.unsigned_abs() < (1u128 << 62)).then_some(v)
}

impl AffineFloor {
    /// Floor sequence of `n·alpha + t`; both must live in the same quadratic field.
    pub fn new(alpha: &Angle, t: &Angle) -> Result<Self, NumericsError> {
        let d = match (alpha.radicand(), t.radicand()) {
            (0, x) | (x, 0) => x,
            (x, y) if x == y => x,
            (x, y) => return Err(NumericsError::MixedRadicands(x, y)),
        };
        let parts = [alpha.rational_part(), alpha.surd_part(), t.rational_part(), t.surd_part()];
        let den = parts.iter().fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()));
        let scale = |r: &num_rational::BigRational| r.numer() * (&den / r.denom());
        let (a, c, b, e) = (scale(parts[0]), scale(parts[1]), scale(parts[2]), scale(parts[3]));
        Ok(Self::from_parts(a, b, c, e, d, den))
    }

    fn from_parts(a: BigInt, b: BigInt, c: BigInt, e: BigInt, d: u64, den: BigInt) -> Self {
        let small = (|| Some([fits(&a)?, fits(&b)?, fits(&c)?, fits(&e)?, fits(&den)?]))();
        AffineFloor { a, b, c, e, d, den, small }
    }

    /// The sequence of `−(n·α + t)`, used for ceilings.
    pub fn negated(&self) -> Self {
        Self::from_parts(-&self.a, -&self.b, -&self.c, -&self.e, self.d, self.den.clone())
    }

    fn at_small(&self, n: i64) -> Option<i128> {
        let [a, b, c, e, den] = self.small?;
        let n = n as i128;
        let p = n.checked_mul(a)?.checked_add(b)?;
        let q = n.checked_mul(c)?.checked_add(e)?;
        let s = if q == 0 || self.d == 0 {
            0
        } else {
            let qa = q.unsigned_abs();
            let root = isqrt_u128(qa.checked_mul(qa)?.checked_mul(self.d as u128)?) as i128;
            if q < 0 {
                -root - 1
            } else {
                root
            }
        };
        Some(p.checked_add(s)?.div_euclid(den))
    }

    fn at_big(&self, n: i64) -> BigInt {
        let n = BigInt::from(n);
        let p = &n * &self.a + &self.b;
        let q = &n * &self.c + &self.e;
        let s = if q.is_zero() || self.d == 0 {
            BigInt::zero()
        } else {
            let root = (&q * &q * BigInt::from(self.d)).sqrt();
            if q.is_negative() {
                -root - 1
            } else {
                root
            }
        };
        floor_div(&(p + s), &self.den)
    }

    pub fn at(&self, n: i64) -> BigInt {
        match self.at_small(n) {
            Some(v) => BigInt::from(v),
            None => self.at_big(n),
        }
    }

    /// Floors for `n ∈ [lo, hi]`; values must fit `i64` (they do for any bounded angle).
    pub fn range(&self, lo: i64, hi: i64) -> Result<Vec<i64>, NumericsError> {
        (lo..=hi)
            .map(|n| {
                let v = match self.at_small(n) {
                    Some(v) => i64::try_from(v).ok(),
                    None => self.at_big(n).to_i64(),
                };
                v.ok_or(NumericsError::Overflow)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_edges() {
        for v in [0u128, 1, 2, 3, 4, 15, 16, 17, u64::MAX as u128, (1u128 << 100) + 7] {
            let r = isqrt_u128(v);
            assert!(r * r <= v && (r + 1) * (r + 1) > v);
        }
    }

    #[test]
    fn small_and_big_paths_agree() {
        let alpha: Angle = "(1+1*sqrt(2))/2".parse().unwrap();
        let t: Angle = "(3-1*sqrt(2))/7".parse().unwrap();
        let f = AffineFloor::new(&alpha, &t).unwrap();
        for n in -300..300 {
            assert_eq!(f.at_small(n).map(BigInt::from).unwrap(), f.at_big(n));
            let direct = (&alpha.mul_int(n) + &t).floor();
            assert_eq!(f.at(n), direct);
        }
    }

    #[test]
    fn negated_gives_ceilings() {
        let alpha: Angle = "(0+1*sqrt(3))/3".parse().unwrap();
        let t = Angle::ratio(1, 5);
        let g = AffineFloor::new(&alpha, &t).unwrap().negated();
        for n in -50..50 {
            assert_eq!(-g.at(n), (&alpha.mul_int(n) + &t).ceil());
        }
    }
}
