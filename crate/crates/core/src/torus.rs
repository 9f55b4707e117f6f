//! Truncations of the inverse limit of the circles ℝ/6ⁿℤ and the skew-product maps
//! `f̂(α, t)` and `T̂(α, t) = (α, t + α)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::numerics::{int, rat, Angle, NumericsError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("depth exhausted: need {needed}, have {available}")]
    DepthExhausted { needed: u32, available: u32 },
    #[error("angle {0} outside [1/3, 2] or without a preimage on this branch")]
    AngleOutOfRange(String),
    #[error("level {level} is outside [0, 6^{level}) or inconsistent with level {}", level + 1)]
    Inconsistent { level: usize },
    #[error("cannot parse torus point `{0}`")]
    Parse(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub(crate) fn six_pow(i: u32) -> Rational {
    int(BigInt::from(6u32).pow(i))
}

/// Scalars acting on 𝒯 by `M_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scalar {
    Two,
    Three,
    Half,
    Third,
}

/// A depth-`K` truncation `(t_0, …, t_K)`, `t_i ∈ [0, 6^i)`.
///
/// Only `t_K` is stored; lower levels are its residues, so `t_i = t_{i+1} mod 6^i`
/// holds by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    depth: u32,
    top: Angle,
}

impl TorusPoint {
    pub fn zero(depth: u32) -> Self {
        TorusPoint { depth, top: Angle::zero() }
    }

    /// The point whose deepest level is `top mod 6^depth`.
    pub fn from_top(depth: u32, top: Angle) -> Self {
        let top = top.rem_euclid(&six_pow(depth));
        TorusPoint { depth, top }
    }

    /// Validates ranges and consistency of explicitly given levels.
    pub fn from_levels(levels: Vec<Angle>) -> Result<Self, TorusError> {
        if levels.is_empty() {
            return Err(TorusError::Parse("no levels".into()));
        }
        let depth = (levels.len() - 1) as u32;
        for (i, t) in levels.iter().enumerate() {
            let m = six_pow(i as u32);
            if t.signum() == Ordering::Less || t.cmp_rational(&m) != Ordering::Less {
                return Err(TorusError::Inconsistent { level: i });
            }
            if i + 1 < levels.len() && levels[i + 1].rem_euclid(&m) != *t {
                return Err(TorusError::Inconsistent { level: i });
            }
        }
        Ok(TorusPoint { depth, top: levels.into_iter().last().unwrap() })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn top(&self) -> &Angle {
        &self.top
    }

    pub fn level(&self, i: u32) -> Angle {
        assert!(i <= self.depth, "level {i} beyond depth {}", self.depth);
        if i == self.depth {
            return self.top.clone();
        }
        self.top.rem_euclid(&six_pow(i))
    }

    pub fn levels(&self) -> Vec<Angle> {
        (0..=self.depth).map(|i| self.level(i)).collect()
    }

    /// Canonical lift: the deeper levels repeat `t_K`.
    pub fn lift(&self, depth: u32) -> TorusPoint {
        assert!(depth >= self.depth);
        TorusPoint { depth, top: self.top.clone() }
    }

    pub fn truncate(&self, depth: u32) -> TorusPoint {
        assert!(depth <= self.depth);
        TorusPoint { depth, top: self.level(depth) }
    }

    /// `M_a`; the fractional scalars consume one level.
    pub fn scalar_multiply(&self, a: Scalar) -> Result<TorusPoint, TorusError> {
        let k = self.depth;
        match a {
            Scalar::Two => Ok(Self::from_top(k, self.top.mul_int(2))),
            Scalar::Three => Ok(Self::from_top(k, self.top.mul_int(3))),
            Scalar::Half | Scalar::Third => {
                if k == 0 {
                    return Err(TorusError::DepthExhausted { needed: 1, available: 0 });
                }
                let div = if a == Scalar::Half { 2 } else { 3 };
                Ok(Self::from_top(k - 1, self.top.mul_rational(&rat(1, div))))
            }
        }
    }

    /// `A_r`, level-wise addition.
    pub fn scalar_add(&self, r: &Angle) -> Result<TorusPoint, TorusError> {
        Ok(Self::from_top(self.depth, self.top.checked_add(r)?))
    }

    /// Level-wise group operation on the shared depth.
    pub fn add(&self, other: &TorusPoint) -> Result<TorusPoint, TorusError> {
        let k = self.depth.min(other.depth);
        Ok(Self::from_top(k, self.level(k).checked_add(&other.level(k))?))
    }

    pub fn neg(&self) -> TorusPoint {
        Self::from_top(self.depth, -self.top.clone())
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.depth)?;
        for t in self.levels() {
            write!(f, ";{t}")?;
        }
        Ok(())
    }
}

impl FromStr for TorusPoint {
    type Err = TorusError;

    /// `depth;t0;…;tK`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TorusError::Parse(s.to_string());
        let mut parts = s.trim().split(';');
        let depth: u32 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let levels = parts.map(|p| p.parse::<Angle>()).collect::<Result<Vec<_>, _>>()?;
        if levels.len() != depth as usize + 1 {
            return Err(bad());
        }
        Self::from_levels(levels)
    }
}

/// Which side of the split at `x = 1` doubles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Branch {
    /// `2x` on `[1/3, 1)`, `x/3` on `[1, 2]`.
    #[default]
    DivideAtOne,
    /// `2x` on `[1/3, 1]`, `x/3` on `(1, 2]`.
    DoubleAtOne,
}

pub fn in_angle_range(a: &Angle) -> bool {
    a.cmp_rational(&rat(1, 3)) != Ordering::Less && a.cmp_rational(&int(2)) != Ordering::Greater
}

fn doubles(a: &Angle, branch: Branch) -> bool {
    match a.cmp_rational(&Rational::one()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => branch == Branch::DoubleAtOne,
    }
}

/// One step of `f`; `true` when the step doubles.
pub fn f_step(a: &Angle, branch: Branch) -> Result<(Angle, bool), TorusError> {
    if !in_angle_range(a) {
        return Err(TorusError::AngleOutOfRange(a.to_string()));
    }
    Ok(if doubles(a, branch) { (a.mul_int(2), true) } else { (a.mul_rational(&rat(1, 3)), false) })
}

pub fn f(a: &Angle, branch: Branch) -> Result<Angle, TorusError> {
    f_step(a, branch).map(|(x, _)| x)
}

/// The preimage under `f`; `true` when the preimage doubles (so the step back halves).
///
/// At `2/3` both `1/3` and `2` map there; the preimage that itself has a preimage wins.
pub fn f_inverse_step(b: &Angle, branch: Branch) -> Result<(Angle, bool), TorusError> {
    if !in_angle_range(b) {
        return Err(TorusError::AngleOutOfRange(b.to_string()));
    }
    let half = b.mul_rational(&rat(1, 2));
    let triple = b.mul_int(3);
    let half_ok = in_angle_range(&half) && doubles(&half, branch);
    let triple_ok = in_angle_range(&triple) && !doubles(&triple, branch);
    match (half_ok, triple_ok) {
        (true, true) => Ok(match branch {
            Branch::DivideAtOne => (half, true),
            Branch::DoubleAtOne => (triple, false),
        }),
        (true, false) => Ok((half, true)),
        (false, true) => Ok((triple, false)),
        (false, false) => Err(TorusError::AngleOutOfRange(b.to_string())),
    }
}

pub fn f_inverse(b: &Angle, branch: Branch) -> Result<Angle, TorusError> {
    f_inverse_step(b, branch).map(|(x, _)| x)
}

/// A point `(α, t)` of `[1/3, 2] × 𝒯`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewState {
    pub angle: Angle,
    pub phase: TorusPoint,
}

impl SkewState {
    pub fn new(angle: Angle, phase: TorusPoint) -> Result<Self, TorusError> {
        if !in_angle_range(&angle) {
            return Err(TorusError::AngleOutOfRange(angle.to_string()));
        }
        Ok(SkewState { angle, phase })
    }
}

/// `f̂(α, t) = (2α, 2t)` or `(α/3, t/3)`.
pub fn fhat(s: &SkewState, branch: Branch) -> Result<SkewState, TorusError> {
    let (angle, dbl) = f_step(&s.angle, branch)?;
    let phase = s.phase.scalar_multiply(if dbl { Scalar::Two } else { Scalar::Third })?;
    Ok(SkewState { angle, phase })
}

pub fn fhat_inverse(s: &SkewState, branch: Branch) -> Result<SkewState, TorusError> {
    let (angle, dbl) = f_inverse_step(&s.angle, branch)?;
    let phase = s.phase.scalar_multiply(if dbl { Scalar::Half } else { Scalar::Three })?;
    Ok(SkewState { angle, phase })
}

/// `T̂(α, t) = (α, t + α)`
pub fn that(s: &SkewState) -> Result<SkewState, TorusError> {
    Ok(SkewState { angle: s.angle.clone(), phase: s.phase.scalar_add(&s.angle)? })
}

pub fn that_inverse(s: &SkewState) -> Result<SkewState, TorusError> {
    Ok(SkewState { angle: s.angle.clone(), phase: s.phase.scalar_add(&-s.angle.clone())? })
}
