//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use kc_core::construction::required_depth;
use kc_core::numerics::{Angle, Rational};
use kc_core::torus::{f_inverse_step, f_step, Branch, SkewState, TorusPoint};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RADICANDS: [u64; 8] = [2, 3, 5, 6, 7, 10, 11, 13];

pub struct Gen {
    pub rng: ChaCha8Rng,
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// `p/q ∈ [1/3, 2)` with `q ≤ max_q`.
    pub fn rational_angle(&mut self, max_q: i64) -> Angle {
        let q = self.rng.gen_range(2..=max_q);
        let p = self.rng.gen_range((q + 2) / 3..2 * q);
        Angle::ratio(p, q)
    }

    /// `a + b√d` inside `(1/3, 2)` with small rational `a`, `b`.
    pub fn surd_angle(&mut self) -> Angle {
        loop {
            let d = RADICANDS[self.rng.gen_range(0..RADICANDS.len())];
            let b = rat(self.rng.gen_range(1..=12), self.rng.gen_range(5..=13));
            let target: f64 = self.rng.gen_range(0.34..1.99);
            let rest = target - b.to_f64().unwrap() * (d as f64).sqrt();
            let den = self.rng.gen_range(1..=997i64);
            let a = rat((rest * den as f64).round() as i64, den);
            let x = Angle::quadratic(a, b, d).unwrap();
            if x > Angle::ratio(1, 3) && x < Angle::from_integer(2) && !x.is_rational() {
                return x;
            }
        }
    }

    pub fn angle(&mut self) -> Angle {
        if self.rng.gen_bool(0.5) {
            self.rational_angle(1000)
        } else {
            self.surd_angle()
        }
    }

    /// A random integer in `[0, 6^depth)`.
    pub fn integer_below_six_pow(&mut self, depth: u32) -> BigInt {
        let mut n = BigInt::zero();
        for _ in 0..depth {
            n = n * 6 + self.rng.gen_range(0..6u32);
        }
        n
    }

    /// A phase in `[0, 1)`: rational, or in the field of `alpha` when it is a surd.
    pub fn unit_phase(&mut self, alpha: &Angle) -> Angle {
        let q = self.rng.gen_range(1..=500i64);
        let base = Angle::ratio(self.rng.gen_range(0..q), q);
        if alpha.is_rational() || self.rng.gen_bool(0.5) {
            return base;
        }
        let k = self.rng.gen_range(1..=9i64);
        base.checked_add(&alpha.mul_rational(&rat(k, 11))).unwrap().fract()
    }

    pub fn skew(&mut self, alpha: &Angle, depth: u32) -> SkewState {
        let top = self.unit_phase(alpha).add_rational(&Rational::from_integer(self.integer_below_six_pow(depth)));
        SkewState::new(alpha.clone(), TorusPoint::from_top(depth, top)).unwrap()
    }

    /// A state deep enough to build rows `[lo, hi)` with `extra` spare levels.
    pub fn skew_for_rows(&mut self, alpha: &Angle, lo: i64, hi: i64, extra: u32) -> SkewState {
        let depth = required_depth(alpha, lo - 1, hi, Branch::default()).unwrap() + extra;
        self.skew(alpha, depth)
    }
}

/// Dividing steps going up to `hi` and halving steps going down to `lo`.
pub fn up_down_counts(alpha: &Angle, lo: i64, hi: i64) -> (u32, u32) {
    let (mut up, mut down) = (0, 0);
    let mut a = alpha.clone();
    for _ in 0..hi {
        let (n, dbl) = f_step(&a, Branch::default()).unwrap();
        up += u32::from(!dbl);
        a = n;
    }
    let mut a = alpha.clone();
    for _ in 0..-lo {
        let (p, dbl) = f_inverse_step(&a, Branch::default()).unwrap();
        down += u32::from(dbl);
        a = p;
    }
    (up, down)
}
