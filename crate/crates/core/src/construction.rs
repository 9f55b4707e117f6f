//! Building windows of tiles from parameter vectors `(α_m, t_m)` and from points of
//! the skew product, and recovering a skew-product point from parameter vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{rat, Angle, NumericsError, Rational};
use crate::sturmian::{rounded_sequence, RoundingMode};
use crate::tiles::{Label, Multiplier, TileKey, TileSet, Window};
use crate::torus::{fhat, fhat_inverse, f_inverse_step, f_step, Branch, SkewState, TorusError, TorusPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("empty rectangle")]
    EmptyRect,
    #[error("parameters cover rows {have_lo}..={have_hi}, construction needs {need_lo}..={need_hi}")]
    Coverage { need_lo: i64, need_hi: i64, have_lo: i64, have_hi: i64 },
    #[error("consecutive parameters at rows {row} and {} do not satisfy the bounded-carry property", row + 1)]
    BcViolation { row: i64 },
    #[error("no tile carries labels {labels} at row {row}, column {col}")]
    NoMatchingTile { row: i64, col: i64, labels: String },
    #[error("torus depth {available} is below the required {needed}")]
    DepthExhausted { needed: u32, available: u32 },
    #[error("phases are inconsistent with a single torus point at row {row}")]
    Inconsistent { row: i64 },
    #[error("parameter range must contain row 0")]
    MissingRowZero,
    #[error("cannot parse parameter vectors: {0}")]
    Parse(String),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// `(α_m, t_m)` for consecutive rows `m = row_lo, row_lo + 1, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterVectors {
    pub row_lo: i64,
    pub angles: Vec<Angle>,
    pub phases: Vec<Angle>,
}

impl ParameterVectors {
    /// Last covered row (inclusive).
    pub fn row_hi(&self) -> i64 {
        self.row_lo + self.angles.len() as i64 - 1
    }

    fn index(&self, row: i64) -> usize {
        (row - self.row_lo) as usize
    }

    pub fn angle(&self, row: i64) -> &Angle {
        &self.angles[self.index(row)]
    }

    pub fn phase(&self, row: i64) -> &Angle {
        &self.phases[self.index(row)]
    }

    fn require(&self, lo: i64, hi: i64) -> Result<(), ConstructionError> {
        if self.angles.is_empty() || lo < self.row_lo || hi > self.row_hi() {
            return Err(ConstructionError::Coverage { need_lo: lo, need_hi: hi, have_lo: self.row_lo, have_hi: self.row_hi() });
        }
        Ok(())
    }
}

/// One line per row: `row;angle;phase`.
impl fmt::Display for ParameterVectors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (a, t)) in self.angles.iter().zip(&self.phases).enumerate() {
            writeln!(f, "{};{a};{t}", self.row_lo + k as i64)?;
        }
        Ok(())
    }
}

impl FromStr for ParameterVectors {
    type Err = ConstructionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rows = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let f: Vec<&str> = line.split(';').collect();
            if f.len() != 3 {
                return Err(ConstructionError::Parse(line.to_string()));
            }
            let row: i64 = f[0].trim().parse().map_err(|_| ConstructionError::Parse(line.to_string()))?;
            rows.push((row, f[1].parse::<Angle>()?, f[2].parse::<Angle>()?));
        }
        let row_lo = rows.first().ok_or_else(|| ConstructionError::Parse("no rows".into()))?.0;
        if rows.iter().enumerate().any(|(k, r)| r.0 != row_lo + k as i64) {
            return Err(ConstructionError::Parse("rows must be consecutive and increasing".into()));
        }
        let (angles, phases) = rows.into_iter().map(|(_, a, t)| (a, t)).unzip();
        Ok(ParameterVectors { row_lo, angles, phases })
    }
}

/// `α_{m+1}/α_m`, when it is one of the two multipliers.
fn multiplier_between(a: &Angle, next: &Angle) -> Option<Multiplier> {
    if *next == a.mul_int(2) {
        Some(Multiplier::Two)
    } else if *next == a.mul_rational(&rat(1, 3)) {
        Some(Multiplier::OneThird)
    } else {
        None
    }
}

/// `3·(t_{m+1} − λ·t_m)` when it is an integer.
fn delta_thirds(lambda: Multiplier, t: &Angle, next: &Angle) -> Option<i64> {
    let d = match lambda {
        Multiplier::Two => next.checked_sub(&t.mul_int(2)).ok()?.mul_int(3),
        Multiplier::OneThird => next.mul_int(3).checked_sub(t).ok()?,
    };
    let q = d.as_rational()?;
    if !q.is_integer() {
        return None;
    }
    q.to_integer().to_i64()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcReport {
    pub holds: bool,
    /// Lower row of the first failing pair.
    pub first_violation: Option<i64>,
}

/// Checks that every consecutive pair has `α_{m+1} ∈ {2α_m, α_m/3}` inside `[1/3, 2]`
/// and that `t_{m+1} − λ_m t_m` lies in `(1/3)ℤ` in the form the side labels need.
pub fn check_bc_property(p: &ParameterVectors) -> BcReport {
    let bad = (0..p.angles.len().saturating_sub(1)).find(|&k| {
        let (a, b) = (&p.angles[k], &p.angles[k + 1]);
        let ok = crate::torus::in_angle_range(a)
            && crate::torus::in_angle_range(b)
            && multiplier_between(a, b).is_some_and(|l| delta_thirds(l, &p.phases[k], &p.phases[k + 1]).is_some());
        !ok
    });
    BcReport { holds: bad.is_none(), first_violation: bad.map(|k| p.row_lo + k as i64) }
}

/// Half-open rectangle of cells, rows `[row_lo, row_hi)`, columns `[col_lo, col_hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub row_lo: i64,
    pub row_hi: i64,
    pub col_lo: i64,
    pub col_hi: i64,
}

impl Rect {
    pub fn new(row_lo: i64, row_hi: i64, col_lo: i64, col_hi: i64) -> Result<Self, ConstructionError> {
        if row_lo >= row_hi || col_lo >= col_hi {
            return Err(ConstructionError::EmptyRect);
        }
        Ok(Rect { row_lo, row_hi, col_lo, col_hi })
    }

    pub fn width(&self) -> usize {
        (self.col_hi - self.col_lo) as usize
    }

    pub fn height(&self) -> usize {
        (self.row_hi - self.row_lo) as usize
    }

    pub fn cells(&self) -> u128 {
        self.width() as u128 * self.height() as u128
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamSource {
    Vectors(ParameterVectors),
    Skew(SkewState),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub source: ParamSource,
    pub mode: RoundingMode,
    pub rect: Rect,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionFlag {
    /// `α_row = 1`, where the two branches of `f` disagree.
    OrbitThroughOne { row: i64 },
    /// `α_row ∈ {1/3, 1/2}`, an endpoint of the interval deciding `0′`.
    ZeroPrimeEndpoint { row: i64 },
}

impl fmt::Display for ConstructionFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionFlag::OrbitThroughOne { row } => write!(f, "orbit_through_one row={row}"),
            ConstructionFlag::ZeroPrimeEndpoint { row } => write!(f, "zero_prime_endpoint row={row}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub window: Window,
    pub flags: Vec<ConstructionFlag>,
}

/// `α ∈ [1/3, 1/2]`: zeros on the matching edge are primed.
fn primes_zero(a: &Angle) -> bool {
    a.cmp_rational(&rat(1, 3)) != Ordering::Less && a.cmp_rational(&rat(1, 2)) != Ordering::Greater
}

/// `R(nα + t)` for `n ∈ [c0 − 1, c1 − 1]`; the ceiling variant is `⌈·⌉ − 1` so that both
/// modes keep `R(x) − x ∈ [−1, 0]`.
fn row_rounding(alpha: &Angle, t: &Angle, mode: RoundingMode, c0: i64, c1: i64) -> Result<Vec<i64>, NumericsError> {
    let v = rounded_sequence(alpha, t, mode, c0 - 1, c1 - 1)?;
    Ok(match mode {
        RoundingMode::Floor => v,
        RoundingMode::Ceiling => v.into_iter().map(|x| x - 1).collect(),
    })
}

struct RowInput<'a> {
    lambda: Multiplier,
    delta3: i64,
    xs: &'a [i64],
    ys: &'a [i64],
    prime_bottom: bool,
    prime_top: bool,
}

/// Labels of the cells of one row; `Err` carries the offending column offset and labels.
fn row_keys(r: &RowInput) -> Result<Vec<TileKey>, (usize, String)> {
    let scale = match r.lambda {
        Multiplier::Two => 6,
        Multiplier::OneThird => 1,
    };
    let side: Vec<i64> = r.xs.iter().zip(r.ys).map(|(x, y)| scale * x - 3 * y + r.delta3).collect();
    (0..r.xs.len() - 1)
        .map(|k| {
            let b = r.xs[k + 1] - r.xs[k];
            let t = r.ys[k + 1] - r.ys[k];
            let describe = || format!("bottom={b} top={t} left={}/3 right={}/3", side[k], side[k + 1]);
            let bottom = Label::from_symbol(b, r.prime_bottom).ok_or_else(|| (k, describe()))?;
            let top = Label::from_symbol(t, r.prime_top).ok_or_else(|| (k, describe()))?;
            let left = i8::try_from(side[k]).map_err(|_| (k, describe()))?;
            let right = i8::try_from(side[k + 1]).map_err(|_| (k, describe()))?;
            Ok(TileKey { multiplier: r.lambda, bottom, left, top, right })
        })
        .collect()
}

fn rows_pair_inputs(
    p: &ParameterVectors,
    row: i64,
) -> Result<(Multiplier, i64, bool, bool), ConstructionError> {
    let (a, an) = (p.angle(row), p.angle(row + 1));
    let lambda = multiplier_between(a, an).ok_or(ConstructionError::BcViolation { row })?;
    let delta3 = delta_thirds(lambda, p.phase(row), p.phase(row + 1)).ok_or(ConstructionError::BcViolation { row })?;
    Ok((lambda, delta3, primes_zero(p.angle(row - 1)), primes_zero(a)))
}

/// Labelled cells of the rectangle, rows bottom-up.
fn label_rect(p: &ParameterVectors, mode: RoundingMode, rect: &Rect) -> Result<Vec<Vec<TileKey>>, ConstructionError> {
    p.require(rect.row_lo - 1, rect.row_hi)?;
    let roundings: Vec<Vec<i64>> = (rect.row_lo..=rect.row_hi)
        .into_par_iter()
        .map(|m| row_rounding(p.angle(m), p.phase(m), mode, rect.col_lo, rect.col_hi))
        .collect::<Result<_, _>>()?;
    (rect.row_lo..rect.row_hi)
        .into_par_iter()
        .map(|m| {
            let (lambda, delta3, prime_bottom, prime_top) = rows_pair_inputs(p, m)?;
            let k = (m - rect.row_lo) as usize;
            let input = RowInput { lambda, delta3, xs: &roundings[k], ys: &roundings[k + 1], prime_bottom, prime_top };
            row_keys(&input).map_err(|(c, labels)| ConstructionError::NoMatchingTile { row: m, col: rect.col_lo + c as i64, labels })
        })
        .collect()
}

fn flags_for(p: &ParameterVectors, rect: &Rect) -> Vec<ConstructionFlag> {
    let mut flags = Vec::new();
    for m in rect.row_lo - 1..rect.row_hi {
        let a = p.angle(m);
        if a.cmp_rational(&Rational::one()) == Ordering::Equal {
            flags.push(ConstructionFlag::OrbitThroughOne { row: m });
        }
        if *a == Angle::ratio(1, 3) || *a == Angle::ratio(1, 2) {
            flags.push(ConstructionFlag::ZeroPrimeEndpoint { row: m });
        }
    }
    flags
}

/// Builds the window over `rect`: cell `(m, n)` has bottom `R(x_n) − R(x_{n−1})`,
/// top `R(y_n) − R(y_{n−1})` and right side `λ(R(x_n) − t_m) − (R(y_n) − t_{m+1})`,
/// with `x_n = nα_m + t_m` and `y_n = nα_{m+1} + t_{m+1}`.
pub fn basic_construct(spec: &ConstructionSpec) -> Result<Construction, ConstructionError> {
    let rect = &spec.rect;
    if rect.row_lo >= rect.row_hi || rect.col_lo >= rect.col_hi {
        return Err(ConstructionError::EmptyRect);
    }
    let expanded;
    let p = match &spec.source {
        ParamSource::Vectors(p) => p,
        ParamSource::Skew(s) => {
            expanded = expand_parameters(s, rect.row_lo - 1, rect.row_hi, spec.branch)?;
            &expanded
        }
    };
    let rows = label_rect(p, spec.mode, rect)?;
    let ts = TileSet::canonical();
    let mut grid = Vec::with_capacity(rect.width() * rect.height());
    for (r, keys) in rows.iter().enumerate() {
        for (c, key) in keys.iter().enumerate() {
            let id = ts.id_of_key(key).ok_or_else(|| ConstructionError::NoMatchingTile {
                row: rect.row_lo + r as i64,
                col: rect.col_lo + c as i64,
                labels: key.to_tile_string(),
            })?;
            grid.push(id);
        }
    }
    Ok(Construction {
        window: Window::new(rect.width(), rect.height(), rect.row_lo, rect.col_lo, grid),
        flags: flags_for(p, rect),
    })
}

impl TileKey {
    fn to_tile_string(self) -> String {
        format!("{}/{}/{}/{}/{}", self.multiplier, self.bottom, self.left, self.top, self.right)
    }
}

/// Number of dividing steps of `f` going up to `hi` and of halving steps of `f⁻¹`
/// going down to `lo`; the larger is the torus depth the expansion consumes.
pub fn required_depth(angle: &Angle, lo: i64, hi: i64, branch: Branch) -> Result<u32, ConstructionError> {
    let mut up = 0u32;
    let mut a = angle.clone();
    for _ in 0..hi.max(0) {
        let (next, dbl) = f_step(&a, branch)?;
        up += u32::from(!dbl);
        a = next;
    }
    let mut down = 0u32;
    let mut a = angle.clone();
    for _ in 0..(-lo).max(0) {
        let (prev, dbl) = f_inverse_step(&a, branch)?;
        down += u32::from(dbl);
        a = prev;
    }
    Ok(up.max(down))
}

/// Parameter vectors over rows `[lo, hi]` of the orbit of `s` under `f̂`, with row 0 at
/// `s`; each phase is level 0 of the torus coordinate.
pub fn expand_parameters(s: &SkewState, lo: i64, hi: i64, branch: Branch) -> Result<ParameterVectors, ConstructionError> {
    if lo > hi {
        return Err(ConstructionError::EmptyRect);
    }
    let needed = required_depth(&s.angle, lo, hi, branch)?;
    if needed > s.phase.depth() {
        return Err(ConstructionError::DepthExhausted { needed, available: s.phase.depth() });
    }
    let (span_lo, span_hi) = (lo.min(0), hi.max(0));
    let mut below = Vec::new();
    let mut cur = s.clone();
    for _ in span_lo..0 {
        cur = fhat_inverse(&cur, branch)?;
        below.push(cur.clone());
    }
    below.reverse();
    let mut states = below;
    states.push(s.clone());
    let mut cur = s.clone();
    for _ in 0..span_hi {
        cur = fhat(&cur, branch)?;
        states.push(cur.clone());
    }
    let keep = &states[(lo - span_lo) as usize..=(hi - span_lo) as usize];
    Ok(ParameterVectors {
        row_lo: lo,
        angles: keep.iter().map(|st| st.angle.clone()).collect(),
        phases: keep.iter().map(|st| st.phase.level(0)).collect(),
    })
}

/// The window of `K(α, t)` over `rect`.
pub fn k_map(s: &SkewState, mode: RoundingMode, rect: Rect, branch: Branch) -> Result<Construction, ConstructionError> {
    basic_construct(&ConstructionSpec { source: ParamSource::Skew(s.clone()), mode, rect, branch })
}

/// Inverse of `2^a` (or `3^b`) modulo `m`, for coprime arguments.
fn mod_inverse(x: &BigInt, m: &BigInt) -> BigInt {
    let g = x.extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// A point `(α_0, t)` of the skew product at the given torus depth whose expansion
/// reproduces the phases. Rows above 0 fix the top level modulo `3^b` (with `b` the
/// number of dividing steps so far), rows below fix it modulo `2^a` (halving steps);
/// the two residues are merged and the least representative is chosen.
pub fn recover_parameters(p: &ParameterVectors, target_depth: u32) -> Result<SkewState, ConstructionError> {
    if p.angles.is_empty() || p.row_lo > 0 || p.row_hi() < 0 {
        return Err(ConstructionError::MissingRowZero);
    }
    let bc = check_bc_property(p);
    if let Some(row) = bc.first_violation {
        return Err(ConstructionError::BcViolation { row });
    }
    let t0 = p.phase(0).clone();
    // Λ_i = 2^e2 · 3^e3 relative to row 0.
    let mut exps: Vec<(i64, i64, i64)> = Vec::new();
    let (mut e2, mut e3) = (0i64, 0i64);
    for m in 0..p.row_hi() {
        match multiplier_between(p.angle(m), p.angle(m + 1)).unwrap() {
            Multiplier::Two => e2 += 1,
            Multiplier::OneThird => e3 -= 1,
        }
        exps.push((m + 1, e2, e3));
    }
    let (mut e2, mut e3) = (0i64, 0i64);
    for m in (p.row_lo + 1..=0).rev() {
        match multiplier_between(p.angle(m - 1), p.angle(m)).unwrap() {
            Multiplier::Two => e2 -= 1,
            Multiplier::OneThird => e3 += 1,
        }
        exps.push((m - 1, e2, e3));
    }
    let needed = exps.iter().map(|&(_, a, b)| (-a).max(-b).max(0)).max().unwrap_or(0) as u32;
    if needed > target_depth {
        return Err(ConstructionError::DepthExhausted { needed, available: target_depth });
    }

    // N ≡ res3 (mod mod3) and N ≡ res2 (mod mod2).
    let (mut res3, mut mod3) = (BigInt::zero(), BigInt::one());
    let (mut res2, mut mod2) = (BigInt::zero(), BigInt::one());
    let mut ordered = exps.clone();
    ordered.sort_by_key(|&(row, _, _)| row.abs());
    for (row, a, b) in ordered {
        // frac(2^a 3^b (t_0 + N)) = t_row  ⟺  num·N ≡ rhs (mod den); rows above have
        // a ≥ 0 ≥ b, rows below a ≤ 0 ≤ b.
        let above = a >= 0 && b <= 0;
        let (num, den) = if above {
            (BigInt::from(2).pow(a as u32), BigInt::from(3).pow((-b) as u32))
        } else {
            (BigInt::from(3).pow(b as u32), BigInt::from(2).pow((-a) as u32))
        };
        let lhs = t0.mul_rational(&Rational::from_integer(num.clone()));
        let rhs = p
            .phase(row)
            .mul_rational(&Rational::from_integer(den.clone()))
            .checked_sub(&lhs)?
            .as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
            .ok_or(ConstructionError::Inconsistent { row })?;
        let residue = (rhs * mod_inverse(&num, &den)).mod_floor(&den);
        // Moduli on one side are powers of one prime, so the larger one refines the smaller.
        let (res, modulus) = if above { (&mut res3, &mut mod3) } else { (&mut res2, &mut mod2) };
        let consistent = if den >= *modulus { residue.mod_floor(modulus) == *res } else { res.mod_floor(&den) == residue };
        if !consistent {
            return Err(ConstructionError::Inconsistent { row });
        }
        if den > *modulus {
            *res = residue;
            *modulus = den;
        }
    }
    // CRT for coprime mod3, mod2.
    let m = &mod3 * &mod2;
    let n = (&res3 * &mod2 * mod_inverse(&mod2, &mod3) + &res2 * &mod3 * mod_inverse(&mod3, &mod2)).mod_floor(&m);
    let top = t0.add_rational(&Rational::from_integer(n));
    let phase = TorusPoint::from_top(target_depth, top);
    Ok(SkewState::new(p.angle(0).clone(), phase)?)
}

/// Label quadruples of every cell over a fixed sweep of angles, phases and both
/// rounding modes.
pub(crate) fn sweep_cell_labels() -> Result<(Vec<TileKey>, usize), ConstructionError> {
    let mut angles: Vec<Angle> = Vec::new();
    for q in 1..=24i64 {
        for p in 1..=2 * q {
            if p.gcd(&q) == 1 && 3 * p >= q {
                angles.push(Angle::ratio(p, q));
            }
        }
    }
    for d in [2u64, 3, 5, 7] {
        for k in 1..=6i64 {
            // k/7 · √d reduced into the angle range
            let a = Angle::quadratic(Rational::zero(), rat(k, 7), d)?;
            let mut a = a;
            while a.cmp_rational(&rat(1, 3)) == Ordering::Less {
                a = a.mul_int(2);
            }
            while a.cmp_rational(&rat(2, 1)) == Ordering::Greater {
                a = a.mul_rational(&rat(1, 3));
            }
            angles.push(a);
        }
    }
    let tops: Vec<Angle> = (0..4i64).map(|j| Angle::ratio(37 * j * j + 11 * j + 5, 41)).collect();
    let mut jobs = Vec::new();
    for a in &angles {
        for t in &tops {
            for mode in [RoundingMode::Floor, RoundingMode::Ceiling] {
                jobs.push((a.clone(), t.clone(), mode));
            }
        }
    }
    let draws = jobs.len();
    let keys: Vec<Vec<TileKey>> = jobs
        .into_par_iter()
        .map(|(a, t, mode)| {
            let s = SkewState::new(a, TorusPoint::from_top(6, t))?;
            let rect = Rect::new(-1, 3, -8, 16)?;
            // Angles without a backward orbit on this branch (only 2) are skipped.
            let p = match expand_parameters(&s, -2, 3, Branch::default()) {
                Ok(p) => p,
                Err(ConstructionError::Torus(TorusError::AngleOutOfRange(_))) => return Ok(Vec::new()),
                Err(e) => return Err(e),
            };
            Ok(label_rect(&p, mode, &rect)?.concat())
        })
        .collect::<Result<_, ConstructionError>>()?;
    let mut all: Vec<TileKey> = keys.concat();
    all.sort();
    all.dedup();
    Ok((all, draws))
}
