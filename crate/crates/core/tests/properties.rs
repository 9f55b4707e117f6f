//! Randomized invariants of the numerics, torus and Sturmian layers.

mod common;

use common::{rat, Gen};
use kc_core::bounds::f_inverse_powers;
use kc_core::numerics::{log6_of_two, phi};
use kc_core::numerics::{floor_affine, valuation, Angle, Rational};
use kc_core::sturmian::{estimate_angle, is_balanced, phase_interval, rotation_word, RoundingMode, Word};
use kc_core::torus::{f, f_inverse_step, Branch, Scalar, TorusPoint};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use std::collections::HashSet;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn valuation_is_additive(p in 1i64..100_000, q in 1i64..100_000, r in 1i64..100_000, s in 1i64..100_000, ai in 0usize..4) {
        let a = [2u64, 3, 5, 7][ai];
        let (x, y) = (rat(p, q), rat(-r, s));
        prop_assert_eq!(valuation(&(&x * &y), a).unwrap(), valuation(&x, a).unwrap() + valuation(&y, a).unwrap());
    }

    #[test]
    fn floor_affine_matches_enclosure(seed in any::<u64>(), n in -1_000_000i64..1_000_000) {
        let mut g = Gen::new(seed);
        let alpha = g.surd_angle();
        let t = rat(g.rng.gen_range(-500..500), g.rng.gen_range(1..300));
        let x = alpha.mul_int(n).add_rational(&t);
        let (lo, hi) = x.enclose(96);
        if lo.floor() == hi.floor() {
            prop_assert_eq!(floor_affine(&alpha, &BigInt::from(n), &t), lo.floor().to_integer());
        }
    }

    #[test]
    fn f_is_conjugate_to_a_rotation(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let x = g.angle();
        let shift = log6_of_two(80).to_f64();
        let before = phi(&x, 60).unwrap().to_f64();
        let after = phi(&f(&x, Branch::default()).unwrap(), 60).unwrap().to_f64();
        let d = (after - before - shift).rem_euclid(1.0);
        prop_assert!(d.min(1.0 - d) < 1e-12, "φ(f(x)) − φ(x) − log2/log6 = {d}");
    }

    #[test]
    fn torus_ops_keep_levels_consistent(seed in any::<u64>(), ops in proptest::collection::vec(0u8..6, 1..24)) {
        let mut g = Gen::new(seed);
        let alpha = g.surd_angle();
        let mut p = TorusPoint::from_top(8, g.unit_phase(&alpha).add_rational(&Rational::from_integer(g.integer_below_six_pow(8))));
        for op in ops {
            p = match op {
                0 => p.scalar_multiply(Scalar::Two).unwrap(),
                1 => p.scalar_multiply(Scalar::Three).unwrap(),
                2 | 3 if p.depth() == 0 => p,
                2 => p.scalar_multiply(Scalar::Half).unwrap(),
                3 => p.scalar_multiply(Scalar::Third).unwrap(),
                4 => p.scalar_add(&alpha).unwrap(),
                _ => p.neg(),
            };
            let levels = p.levels();
            for i in 0..p.depth() as usize {
                let six = Rational::from_integer(BigInt::from(6).pow(i as u32));
                prop_assert_eq!(&levels[i + 1].rem_euclid(&six), &levels[i]);
            }
            prop_assert_eq!(&TorusPoint::from_levels(levels).unwrap(), &p);
        }
    }

    #[test]
    fn scalars_invert_and_are_homomorphisms(seed in any::<u64>(), depth in 1u32..6) {
        let mut g = Gen::new(seed);
        let alpha = g.surd_angle();
        let draw = |g: &mut Gen| TorusPoint::from_top(depth, g.unit_phase(&alpha).add_rational(&Rational::from_integer(g.integer_below_six_pow(depth))));
        let (t, s) = (draw(&mut g), draw(&mut g));
        for (a, inv) in [(Scalar::Two, Scalar::Half), (Scalar::Three, Scalar::Third)] {
            let round = t.scalar_multiply(a).unwrap().scalar_multiply(inv).unwrap();
            prop_assert_eq!(round, t.truncate(depth - 1));
            let lhs = t.add(&s).unwrap().scalar_multiply(a).unwrap();
            let rhs = t.scalar_multiply(a).unwrap().add(&s.scalar_multiply(a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

fn unit_phase(g: &mut Gen, alpha: &Angle) -> Angle {
    g.unit_phase(alpha)
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn rotation_words_are_balanced(seed in any::<u64>(), len in 1i64..=64, ceil in any::<bool>()) {
        let mut g = Gen::new(seed);
        let alpha = g.angle();
        let t = unit_phase(&mut g, &alpha);
        let mode = if ceil { RoundingMode::Ceiling } else { RoundingMode::Floor };
        let start = g.rng.gen_range(-1000..1000);
        let w = rotation_word(&alpha, &t, mode, start, start + len - 1).unwrap();
        prop_assert!(is_balanced(&w).is_balanced(), "{} unbalanced", w);
    }

    #[test]
    fn floor_and_ceiling_differ_by_one_transposition(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let alpha = g.surd_angle();
        // A phase on the orbit makes one of the points an integer.
        let k = g.rng.gen_range(-40..40i64);
        let t = alpha.mul_int(-k).add_rational(&Rational::from_integer(g.rng.gen_range(-3..3).into()));
        let a = rotation_word(&alpha, &t, RoundingMode::Floor, -60, 60).unwrap();
        let b = rotation_word(&alpha, &t, RoundingMode::Ceiling, -60, 60).unwrap();
        let diff: Vec<usize> = (0..a.len()).filter(|&i| a.symbols[i] != b.symbols[i]).collect();
        prop_assert!(diff.is_empty() || diff.len() == 2);
        if diff.len() == 2 {
            let (i, j) = (diff[0], diff[1]);
            prop_assert_eq!(j, i + 1);
            prop_assert_eq!((a.symbols[i], a.symbols[j]), (b.symbols[j], b.symbols[i]));
        }
    }

    #[test]
    fn phase_interval_recovers_phase(seed in any::<u64>(), len in 1i64..=24, ceil in any::<bool>()) {
        let mut g = Gen::new(seed);
        let alpha = g.angle();
        let t = unit_phase(&mut g, &alpha);
        let mode = if ceil { RoundingMode::Ceiling } else { RoundingMode::Floor };
        let w = rotation_word(&alpha, &t, mode, 1, len).unwrap();
        let cells = phase_interval(&w, &alpha, mode).unwrap();
        prop_assert!(cells.iter().any(|c| c.contains(&t)), "t={} not in {:?}", t, cells);
    }

    #[test]
    fn estimate_angle_contains_alpha(seed in any::<u64>(), len in 1i64..=128) {
        let mut g = Gen::new(seed);
        let alpha = g.angle();
        let t = unit_phase(&mut g, &alpha);
        let w = rotation_word(&alpha, &t, RoundingMode::Floor, 0, len - 1).unwrap();
        let est = estimate_angle(&w).unwrap();
        prop_assert!(alpha.cmp_rational(&est.lo).is_ge() && alpha.cmp_rational(&est.hi).is_le());
    }

    #[test]
    fn factor_complexity_is_sturmian(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let alpha = g.surd_angle();
        let t = unit_phase(&mut g, &alpha);
        let w = rotation_word(&alpha, &t, RoundingMode::Floor, 0, 400).unwrap();
        for n in 1..=32usize {
            let factors: HashSet<&[u8]> = w.symbols.windows(n).collect();
            prop_assert!(factors.len() <= n + 1, "{} factors of length {}", factors.len(), n);
        }
    }
}

#[test]
fn f_inverse_exponents_match_iteration() {
    // Exact iteration inflates denominators, so it is only followed for the first steps;
    // the full range is checked for unit increments.
    const EXACT: usize = 400;
    let mut g = Gen::new(0x5eed_0012);
    for _ in 0..100 {
        let alpha = g.angle();
        let formula = f_inverse_powers(&alpha, 10_000).unwrap();
        for (j, pair) in formula.windows(2).enumerate() {
            let ((a0, b0), (a1, b1)) = (pair[0], pair[1]);
            assert_eq!(a1 + b1, a0 + b0 + 1, "alpha={alpha} j={}", j + 1);
            assert!(a1 >= a0 && b1 >= b0);
        }
        let mut x = alpha.clone();
        let (mut a, mut b) = (0u64, 0u64);
        for (j, want) in formula.iter().enumerate().take(EXACT).skip(1) {
            let (prev, halves) = f_inverse_step(&x, Branch::default()).unwrap();
            if halves {
                b += 1
            } else {
                a += 1
            }
            x = prev;
            assert_eq!((a, b), *want, "alpha={alpha} j={j}");
        }
    }
}

#[test]
fn word_factors_keep_positions() {
    let w: Word = "@5:120".parse().unwrap();
    assert_eq!(w.factor(1, 2).to_string(), "@6:20");
}
