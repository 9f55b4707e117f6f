//! Cut sets and coarseness, the Diophantine sets `𝒢^{a,b}`, Farey intervals, density
//! times of circle rotations, exponents of `f⁻ʲ`, good-angle windows, and desk-scale
//! checks of the waiting-time bounds.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::construction::{expand_parameters, k_map, ConstructionError, Rect};
use crate::numerics::{int, log6_of_three, ln_interval, log6_of_two, phi, rat, rnd_alpha_shifted, Angle, NumericsError, Rational, RealInterval};
use crate::sturmian::RoundingMode;
use crate::tiles::Window;
use crate::torus::{f_inverse_step, Branch, SkewState, TorusError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

fn six_pow(i: u32) -> Rational {
    Rational::from_integer(BigInt::from(6).pow(i))
}

/// Sorted distinct points of the circle `ℝ/(6^level ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSet {
    pub level: u32,
    pub points: Vec<Angle>,
}

impl CutSet {
    pub fn new(level: u32, points: impl IntoIterator<Item = Angle>) -> Self {
        let m = six_pow(level);
        let set: BTreeSet<Angle> = points.into_iter().map(|p| p.rem_euclid(&m)).collect();
        CutSet { level, points: set.into_iter().collect() }
    }

    pub fn circumference(&self) -> Rational {
        six_pow(self.level)
    }

    /// Index of the cell (arc between consecutive points, closed on the left) holding `x`.
    pub fn cell_of(&self, x: &Angle) -> usize {
        let x = x.rem_euclid(&self.circumference());
        match self.points.partition_point(|p| *p <= x) {
            0 => self.points.len() - 1,
            k => k - 1,
        }
    }
}

/// `{−iα + k/2^m mod 1 : 0 ≤ i ≤ n, 0 ≤ k < 2^m}`
pub fn cut_set_x(alpha: &Angle, m: u32, n: u32) -> CutSet {
    let shifts = 1i64 << m;
    let pts = (0..=n as i64).flat_map(|i| (0..shifts).map(move |k| alpha.mul_int(-i).add_rational(&rat(k, shifts))));
    CutSet::new(0, pts)
}

/// Circular gaps between consecutive points, starting after the first point.
fn gaps(c: &CutSet) -> Vec<Angle> {
    let m = c.circumference();
    let n = c.points.len();
    (0..n)
        .map(|k| {
            let next = if k + 1 < n { c.points[k + 1].clone() } else { c.points[0].add_rational(&m) };
            &next - &c.points[k]
        })
        .collect()
}

/// κ: the smallest circular gap; the whole circumference for a single point.
pub fn coarseness(c: &CutSet) -> Angle {
    gaps(c).into_iter().min().unwrap_or_else(|| Angle::from_rational(c.circumference()))
}

/// `𝒢^{a,b} = {α : |α − p/q| > 1/b for all q ≤ a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSpec {
    pub a: u64,
    pub b: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMembership {
    pub member: bool,
    pub witness: Rational,
    pub distance: Angle,
}

/// Scans `p ∈ {⌊qα⌋, ⌈qα⌉}` for every `q ≤ a`; the witness is the closest fraction
/// (smallest denominator on ties).
pub fn g_membership(alpha: &Angle, spec: &GSpec) -> GMembership {
    let mut best: Option<(Angle, Rational)> = None;
    for q in 1..=spec.a.max(1) as i64 {
        let f = alpha.mul_int(q).floor();
        for p in [f.clone(), f + 1] {
            if p.is_negative() {
                continue;
            }
            let frac = Rational::new(p, BigInt::from(q));
            let d = alpha.add_rational(&-frac.clone()).abs();
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, frac));
            }
        }
    }
    let (distance, witness) = best.expect("a ≥ 1");
    let member = distance.cmp_rational(&spec.b.recip()) == std::cmp::Ordering::Greater;
    GMembership { member, witness, distance }
}

/// ℱ_n: half-open intervals `[x, y)` between consecutive fractions of denominator at
/// most `n` that meet `[lo, hi)`.
pub fn farey_intervals(n: u64, lo: &Rational, hi: &Rational) -> Result<Vec<(Rational, Rational)>, BoundsError> {
    if n == 0 {
        return Err(BoundsError::InvalidInput("Farey order must be positive".into()));
    }
    let (start, end) = (lo.floor().to_integer(), hi.floor().to_integer() + 1);
    let mut fr = BTreeSet::new();
    for q in 1..=n {
        let qb = BigInt::from(q);
        let mut p = &start * &qb;
        while p <= &end * &qb {
            fr.insert(Rational::new(p.clone(), qb.clone()));
            p += 1;
        }
    }
    let fr: Vec<Rational> = fr.into_iter().collect();
    Ok(fr.windows(2).filter(|w| w[0] < *hi && w[1] > *lo).map(|w| (w[0].clone(), w[1].clone())).collect())
}

/// `D^i_ℓ`: the first orbit length that is ℓ-dense, or the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityTime {
    Steps(u64),
    CapExceeded,
}

impl DensityTime {
    pub fn steps(self) -> Option<u64> {
        match self {
            DensityTime::Steps(n) => Some(n),
            DensityTime::CapExceeded => None,
        }
    }
}

/// Smallest `N ≤ cap` with `{0, α, …, (N−1)α} mod 6^level` within `ℓ` of every point.
///
/// Walks the three-gap structure: with record returns `u, v` and gaps `a = {uβ}`,
/// `b = 1 − {vβ}` (β = α/6^level mod 1), every `N ∈ [max(u,v)+1, u+v]` has largest gap
/// `a + b` below `u + v` and `max(a, b)` at `u + v`.
pub fn density_time(alpha: &Angle, level: u32, ell: &Angle, cap: u64) -> DensityTime {
    if cap == 0 {
        return DensityTime::CapExceeded;
    }
    let inv = six_pow(level).recip();
    let beta = alpha.mul_rational(&inv).fract();
    let target = ell.mul_rational(&inv).mul_int(2);
    let one = Angle::from_integer(1);
    if one <= target {
        return DensityTime::Steps(1);
    }
    if beta.is_zero() {
        return DensityTime::CapExceeded;
    }
    let (mut u, mut v) = (1u64, 1u64);
    let (mut a, mut b) = (beta.clone(), &one - &beta);
    loop {
        let (lo_n, hi_n) = (u.max(v) + 1, u + v);
        if lo_n > cap {
            return DensityTime::CapExceeded;
        }
        if lo_n < hi_n && &a + &b <= target {
            return DensityTime::Steps(lo_n);
        }
        if a.clone().max(b.clone()) <= target {
            return if hi_n <= cap { DensityTime::Steps(hi_n) } else { DensityTime::CapExceeded };
        }
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => return DensityTime::CapExceeded,
            std::cmp::Ordering::Greater => {
                u += v;
                a = &a - &b;
            }
            std::cmp::Ordering::Less => {
                v += u;
                b = &b - &a;
            }
        }
    }
}

/// Sorted circular gaps of `{0, α, …, (count−1)α} mod circumference`.
pub fn orbit_gaps(alpha: &Angle, circumference: &Rational, count: u64) -> Vec<Angle> {
    let pts = (0..count as i64).map(|i| alpha.mul_int(i));
    let c = CutSet { level: 0, points: pts.map(|p| p.rem_euclid(circumference)).collect::<BTreeSet<_>>().into_iter().collect() };
    let mut g: Vec<Angle> = {
        let n = c.points.len();
        (0..n)
            .map(|k| {
                let next = if k + 1 < n { c.points[k + 1].clone() } else { c.points[0].add_rational(circumference) };
                &next - &c.points[k]
            })
            .collect()
    };
    if (c.points.len() as u64) < count {
        // repeated points: a zero gap
        g.push(Angle::zero());
    }
    g.sort();
    g
}

/// Smallest and largest circular gap of `{0, α, …, (count−1)α} mod circumference` from
/// the three-gap structure; coinciding points give a zero smallest gap.
pub fn orbit_gap_extremes(alpha: &Angle, circumference: &Rational, count: u64) -> (Angle, Angle) {
    let whole = Angle::from_rational(circumference.clone());
    let beta = alpha.mul_rational(&circumference.recip()).fract();
    if count <= 1 {
        return (whole.clone(), whole);
    }
    if beta.is_zero() {
        return (Angle::zero(), whole);
    }
    let one = Angle::from_integer(1);
    let (mut u, mut v) = (1u64, 1u64);
    let (mut a, mut b) = (beta.clone(), &one - &beta);
    while count > u + v {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => return (Angle::zero(), a.mul_rational(circumference)),
            std::cmp::Ordering::Greater => {
                u += v;
                a = &a - &b;
            }
            std::cmp::Ordering::Less => {
                v += u;
                b = &b - &a;
            }
        }
    }
    let small = a.clone().min(b.clone());
    let large = if count < u + v { &a + &b } else { a.max(b) };
    (small.mul_rational(circumference), large.mul_rational(circumference))
}

/// Exponents `(a, b)` with `f^{−j}(α) = (3^a/2^b)·α`, `b = rnd_α(j·log3/log6)`.
pub fn f_inverse_power(alpha: &Angle, j: u64) -> Result<(u64, u64), BoundsError> {
    if j == 0 {
        return Ok((0, 0));
    }
    let b = rnd_alpha_shifted(alpha, &Rational::zero(), &BigInt::from(j))?;
    let b = b.to_u64().filter(|&b| b <= j).ok_or_else(|| BoundsError::InvalidInput(format!("exponent {b} outside 0..={j}")))?;
    Ok((j - b, b))
}

/// [`f_inverse_power`] for every `j ≤ j_max`, sharing one evaluation of the logarithms.
pub fn f_inverse_powers(alpha: &Angle, j_max: u64) -> Result<Vec<(u64, u64)>, BoundsError> {
    if alpha.signum() != std::cmp::Ordering::Greater {
        return Err(NumericsError::Domain(alpha.to_string()).into());
    }
    let bits = 96 + 64 - j_max.max(1).leading_zeros();
    let l3 = log6_of_three(bits);
    let ln2 = ln_interval(&Angle::from_integer(2), bits + 16)?;
    let ln6 = ln_interval(&Angle::from_integer(6), bits + 16)?;
    let shift = ln_interval(alpha, bits + 16)?.sub(&ln2).div_positive(&ln6);
    let mut out = Vec::with_capacity(j_max as usize + 1);
    for j in 0..=j_max {
        let y = l3.scale(&Rational::from_integer(BigInt::from(j))).add(&shift);
        let (lo, hi) = (y.lo.floor(), y.hi.floor());
        let b = if j == 0 {
            0
        } else if lo == hi && !y.lo.is_integer() && !y.hi.is_integer() {
            (lo.to_integer() + BigInt::one()).to_u64().unwrap_or(u64::MAX)
        } else {
            f_inverse_power(alpha, j)?.1
        };
        if b > j {
            return Err(BoundsError::InvalidInput(format!("exponent {b} outside 0..={j}")));
        }
        out.push((j - b, b));
    }
    Ok(out)
}

/// The same exponents by applying `f⁻¹` step by step.
pub fn f_inverse_power_iterated(alpha: &Angle, j: u64, branch: Branch) -> Result<(u64, u64), BoundsError> {
    let (mut a, mut b) = (0u64, 0u64);
    let mut x = alpha.clone();
    for _ in 0..j {
        let (prev, halves) = f_inverse_step(&x, branch)?;
        if halves {
            b += 1;
        } else {
            a += 1;
        }
        x = prev;
    }
    Ok((a, b))
}

/// A certified subinterval `(lo, hi)` of `𝒢^{a,b} ∩ 𝒢^{c,d}` inside one Farey interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatnessCertificate {
    pub farey_lo: Rational,
    pub farey_hi: Rational,
    pub lo: Rational,
    pub hi: Rational,
    /// Whether the subinterval lies in `[1/3, 2]`.
    pub in_range: bool,
}

impl FatnessCertificate {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

/// `𝒲_{n×m}` with one fatness certificate per interval of `ℱ_a` meeting `[1/3, 2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodAngleWindow {
    pub m: u32,
    pub n: u32,
    pub first: GSpec,
    pub second: GSpec,
    pub certificates: Vec<FatnessCertificate>,
}

impl GoodAngleWindow {
    pub fn contains(&self, alpha: &Angle) -> bool {
        g_membership(alpha, &self.first).member && g_membership(alpha, &self.second).member
    }

    pub fn fatness(&self) -> Rational {
        rat(2, 1) / &self.second.b
    }
}

/// `a = 2^m n`, `b = 2^{2m+2} n²`, `c = 6^m 2^{2m+2} n²`, `d = 6^{4m+3} n⁴`.
pub fn window_parameters(m: u32, n: u32) -> (u64, u64, u64, BigInt) {
    let n64 = n as u64;
    let a = (1u64 << m) * n64;
    let b = (1u64 << (2 * m + 2)) * n64 * n64;
    let c = 6u64.pow(m) * b;
    let d = BigInt::from(6).pow(4 * m + 3) * BigInt::from(n64.pow(4));
    (a, b, c, d)
}

/// Builds `𝒲_{n×m}`: in each Farey interval the `𝒢^{a,b}` component is the interval
/// shrunk by `1/b`; a window of width `3/c²` around its middle meets at most a few
/// fractions of denominator `≤ c`, and removing their `1/d`-balls leaves the certified gap.
pub fn good_angle_window(m: u32, n: u32) -> Result<GoodAngleWindow, BoundsError> {
    if m == 0 || n == 0 {
        return Err(BoundsError::InvalidInput("m and n must be positive".into()));
    }
    if m > 2 || n > 4 {
        return Err(BoundsError::Resource(format!("good-angle windows are supported for m ≤ 2, n ≤ 4 (got m={m}, n={n})")));
    }
    let (a, b, c, d) = window_parameters(m, n);
    let (bq, cq, dq) = (Rational::from_integer(b.into()), Rational::from_integer(c.into()), Rational::from_integer(d.clone()));
    let (third, two) = (rat(1, 3), rat(2, 1));
    let half_k = rat(3, 2) / (&cq * &cq);
    let ball = dq.recip();
    let mut certificates = Vec::new();
    for (x, y) in farey_intervals(a, &third, &two)? {
        let (jlo, jhi) = (&x + bq.recip(), &y - bq.recip());
        let (rlo, rhi) = (jlo.clone().max(third.clone()), jhi.clone().min(two.clone()));
        let in_range = &rhi - &rlo > &half_k * int(2);
        let mid = if in_range { (&rlo + &rhi) / int(2) } else { (&jlo + &jhi) / int(2) };
        let (k0, k1) = (&mid - &half_k, &mid + &half_k);
        if k0 <= jlo || k1 >= jhi {
            return Err(BoundsError::Precondition(format!("Farey interval [{x}, {y}) too short for the window")));
        }
        let mut fracs = BTreeSet::new();
        let (slo, shi) = (&k0 - &ball, &k1 + &ball);
        for q in 1..=c {
            let qr = Rational::from_integer(q.into());
            let mut p = (&slo * &qr).ceil().to_integer();
            let pmax = (&shi * &qr).floor().to_integer();
            while p <= pmax {
                fracs.insert(Rational::new(p.clone(), q.into()));
                p += 1;
            }
        }
        let mut best: Option<(Rational, Rational)> = None;
        let mut cursor = k0.clone();
        let mut consider = |lo: Rational, hi: Rational| {
            if hi > lo && best.as_ref().map_or(true, |(bl, bh)| &hi - &lo > bh - bl) {
                best = Some((lo, hi));
            }
        };
        for f in &fracs {
            consider(cursor.clone(), f - &ball);
            cursor = cursor.max(f + &ball);
        }
        consider(cursor, k1.clone());
        let (lo, hi) = best.ok_or_else(|| BoundsError::Precondition("window fully covered".into()))?;
        if &hi - &lo < &ball * int(2) {
            return Err(BoundsError::Precondition(format!("no gap of width 2/d in [{x}, {y})")));
        }
        certificates.push(FatnessCertificate { farey_lo: x, farey_hi: y, lo, hi, in_range });
    }
    Ok(GoodAngleWindow {
        m,
        n,
        first: GSpec { a, b: bq },
        second: GSpec { a: c, b: dq },
        certificates,
    })
}

/// An angle `r·√d` strictly inside `(lo, hi)`, irrational for non-square `d`.
pub fn surd_in_interval(lo: &Rational, hi: &Rational, d: u64) -> Result<Angle, BoundsError> {
    if lo >= hi || !lo.is_positive() {
        return Err(BoundsError::InvalidInput(format!("empty or non-positive interval ({lo}, {hi})")));
    }
    let root = Angle::quadratic(Rational::zero(), Rational::one(), d)?;
    let mid = (lo + hi) / int(2);
    let mut bits = 64;
    loop {
        let (s, _) = root.enclose(bits);
        let candidate = root.mul_rational(&(&mid / &s));
        if candidate.cmp_rational(lo).is_gt() && candidate.cmp_rational(hi).is_lt() {
            return Ok(candidate);
        }
        bits *= 2;
        if bits > 1 << 14 {
            return Err(BoundsError::Resource("interval too narrow".into()));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaitingTimeReport {
    pub kappa: Angle,
    pub density_time: DensityTime,
    pub bound: Rational,
    pub holds: bool,
}

impl WaitingTimeReport {
    pub fn to_kv(&self) -> String {
        let d = match self.density_time {
            DensityTime::Steps(n) => n.to_string(),
            DensityTime::CapExceeded => "cap_exceeded".into(),
        };
        format!("kappa={}\nkappa_approx={:.6e}\ndensity_time={d}\nbound={}\nholds={}\n", self.kappa, self.kappa.to_f64(), self.bound, self.holds)
    }
}

/// Checks `D^m_κ(α) ≤ 6^m c` with `κ` the coarseness of `π_α(𝒳_{m,n})`, given
/// `α ∈ 𝒢^{2^m n, b} ∩ 𝒢^{6^m b, c}`.
pub fn verify_waiting_time(alpha: &Angle, m: u32, n: u32, b: &Rational, c: &Rational) -> Result<WaitingTimeReport, BoundsError> {
    let first = GSpec { a: (1u64 << m) * n as u64, b: b.clone() };
    let six_m = six_pow(m);
    let second_a = (&six_m * b).floor().to_integer().to_u64().ok_or_else(|| BoundsError::Resource("6^m·b too large".into()))?;
    let second = GSpec { a: second_a, b: c.clone() };
    let mut failed = Vec::new();
    if !g_membership(alpha, &first).member {
        failed.push(format!("alpha not in G^({}, {b})", first.a));
    }
    if !g_membership(alpha, &second).member {
        failed.push(format!("alpha not in G^({}, {c})", second.a));
    }
    if !failed.is_empty() {
        return Err(BoundsError::Precondition(failed.join("; ")));
    }
    let kappa = coarseness(&cut_set_x(alpha, m, n));
    let bound = &six_m * c;
    let cap = bound.floor().to_integer().to_u64().ok_or_else(|| BoundsError::Resource("6^m·c too large".into()))?;
    let dt = density_time(alpha, m, &kappa, cap);
    Ok(WaitingTimeReport { kappa, holds: dt.steps().is_some(), density_time: dt, bound })
}

/// Occurrences of `config` in `w`, as absolute `(row, col)` of its lower-left cell.
pub fn find_occurrences(w: &Window, config: &Window) -> Vec<(i64, i64)> {
    let mut hits = Vec::new();
    if config.width > w.width || config.height > w.height {
        return hits;
    }
    for r in 0..=w.height - config.height {
        for c in 0..=w.width - config.width {
            let matches = (0..config.height).all(|i| {
                let row = &w.grid[(r + i) * w.width + c..(r + i) * w.width + c + config.width];
                row == &config.grid[i * config.width..(i + 1) * config.width]
            });
            if matches {
                hits.push((w.origin_row + r as i64, w.origin_col + c as i64));
            }
        }
    }
    hits
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowRecurrence {
    pub row: i64,
    pub certified: bool,
    pub occurrences: usize,
    pub first_hit: Option<i64>,
    /// Longest run of starting columns before the next occurrence (lead-in included).
    pub max_gap: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceReport {
    pub config: Window,
    pub horizon_rows: i64,
    pub horizon_cols: i64,
    /// `(row offset, column offset)` of the first occurrence in each row where it occurs.
    pub first_hits: Vec<(i64, i64)>,
    pub rows: Vec<RowRecurrence>,
    pub bound_cols: BigInt,
    /// log10 of the vertical bound `((324/log 6)·6^{4m} n⁴)^{14.3}·log 6`.
    pub bound_rows_log10: f64,
    /// No certified row with occurrences has a gap above `bound_cols`.
    pub holds: bool,
}

impl RecurrenceReport {
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "config_rows={}\nconfig_cols={}", self.config.height, self.config.width);
        let _ = writeln!(s, "horizon_rows={}\nhorizon_cols={}", self.horizon_rows, self.horizon_cols);
        let _ = writeln!(s, "bound_cols={}\nbound_rows_log10={:.3}", self.bound_cols, self.bound_rows_log10);
        for r in &self.rows {
            let opt = |x: Option<i64>| x.map_or("none".to_string(), |v| v.to_string());
            let _ = writeln!(
                s,
                "row={} certified={} occurrences={} first_hit={} max_gap={}",
                r.row,
                r.certified,
                r.occurrences,
                opt(r.first_hit),
                opt(r.max_gap)
            );
        }
        let _ = writeln!(s, "holds={}", self.holds);
        s
    }
}

/// `6^{5m+3} n⁴` for an `m`-row, `n`-column configuration.
pub fn horizontal_bound(m: u32, n: u32) -> BigInt {
    BigInt::from(6).pow(5 * m + 3) * BigInt::from(n).pow(4)
}

/// log10 of `((324/log 6)·6^{4m} n⁴)^{14.3}·log 6`.
pub fn vertical_bound_log10(m: u32, n: u32) -> f64 {
    let ln6 = 6f64.ln();
    let inner = (324.0 / ln6).log10() + 4.0 * m as f64 * 6f64.log10() + 4.0 * (n as f64).log10();
    14.3 * inner + ln6.log10()
}

/// Scans the window of `K(s)` over rows `[0, horizon_rows)` and columns `[0, horizon_cols)`
/// for `config` and records per-row first hits and gaps. A row is certified when its angle
/// lies in `𝒲_{n×m}` for the configuration's size; only certified rows are held to the bound.
pub fn empirical_recurrence(
    config: &Window,
    s: &SkewState,
    mode: RoundingMode,
    branch: Branch,
    horizon_rows: i64,
    horizon_cols: i64,
    max_cells: u128,
) -> Result<RecurrenceReport, BoundsError> {
    let mut v = empirical_recurrence_many(std::slice::from_ref(config), s, mode, branch, horizon_rows, horizon_cols, max_cells)?;
    Ok(v.remove(0))
}

/// [`empirical_recurrence`] for several configurations over one generated window.
pub fn empirical_recurrence_many(
    configs: &[Window],
    s: &SkewState,
    mode: RoundingMode,
    branch: Branch,
    horizon_rows: i64,
    horizon_cols: i64,
    max_cells: u128,
) -> Result<Vec<RecurrenceReport>, BoundsError> {
    let rect = Rect::new(0, horizon_rows, 0, horizon_cols)?;
    if rect.cells() > max_cells {
        return Err(BoundsError::Resource(format!("{} cells exceed the budget of {max_cells}", rect.cells())));
    }
    let w = k_map(s, mode, rect, branch)?.window;
    let params = expand_parameters(s, 0, horizon_rows - 1, branch)?;
    let mut certified_cache: HashMap<(u32, u32, i64), bool> = HashMap::new();
    configs
        .iter()
        .map(|config| {
            let (m, n) = (config.height as u32, config.width as u32);
            if horizon_rows < m as i64 || horizon_cols < n as i64 {
                return Err(BoundsError::InvalidInput("horizon smaller than the configuration".into()));
            }
            let (a, b, c, d) = window_parameters(m, n);
            let first = GSpec { a, b: Rational::from_integer(b.into()) };
            let second = GSpec { a: c, b: Rational::from_integer(d) };
            let hits = find_occurrences(&w, config);
            let bound_cols = horizontal_bound(m, n);
            let mut rows = Vec::new();
            let mut first_hits = Vec::new();
            let mut holds = true;
            for r in 0..=horizon_rows - m as i64 {
                let cols: Vec<i64> = hits.iter().filter(|h| h.0 == r).map(|h| h.1).collect();
                let alpha = params.angle(r);
                let certified = *certified_cache
                    .entry((m, n, r))
                    .or_insert_with(|| g_membership(alpha, &first).member && g_membership(alpha, &second).member);
                let max_gap = cols.first().map(|&c0| cols.windows(2).map(|p| p[1] - p[0]).fold(c0 + 1, i64::max));
                if let Some(&c0) = cols.first() {
                    first_hits.push((r, c0));
                }
                if certified && max_gap.is_some_and(|g| BigInt::from(g) > bound_cols) {
                    holds = false;
                }
                rows.push(RowRecurrence { row: r, certified, occurrences: cols.len(), first_hit: cols.first().copied(), max_gap });
            }
            Ok(RecurrenceReport {
                config: config.clone(),
                horizon_rows,
                horizon_cols,
                first_hits,
                rows,
                bound_cols,
                bound_rows_log10: vertical_bound_log10(m, n),
                holds,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitDensity {
    pub ell: f64,
    /// Orbit length at which `{α_0, …, α_{N−1}}` first becomes ℓ-dense in `[1/3, 2]`.
    pub steps: Option<u64>,
    /// `k_ℓ = ⌈(3/(ℓ log 6))^{14.3} log 6⌉`
    pub bound: f64,
    pub holds: bool,
}

pub fn f_orbit_bound(ell: f64) -> f64 {
    let ln6 = 6f64.ln();
    ((3.0 / (ell * ln6)).powf(14.3) * ln6).ceil()
}

/// Simulates the `f`-orbit of `α_0` in the coordinate `θ = φ(α)`, where `f` is the
/// rotation by `log 2/log 6`, and reports when it first becomes ℓ-dense in `[1/3, 2]`.
/// Positions are 64-bit fixed point; gaps are measured in `α = 6^θ/3` as `f64`.
pub fn f_orbit_density(alpha0: &Angle, ell: f64, cap: u64) -> Result<OrbitDensity, BoundsError> {
    let to_fixed = |x: f64| (x * 2f64.powi(64)) as u64;
    let theta0 = to_fixed(phi(alpha0, 64)?.to_f64().min(1.0 - 1e-18));
    let step = {
        let l2 = log6_of_two(96).midpoint() * Rational::from_integer(BigInt::one() << 64);
        l2.floor().to_integer().to_u64().expect("log 2/log 6 < 1")
    };
    let x_of = |t: u64| 6f64.powf(t as f64 / 2f64.powi(64)) / 3.0;
    let bad = |p: u64, q: u64| x_of(q) - x_of(p) > 2.0 * ell;
    let mut pts = BTreeSet::new();
    let mut bad_gaps = 0i64;
    let mut theta = theta0;
    let mut steps = None;
    for k in 1..=cap {
        if pts.insert(theta) {
            let prev = pts.range(..theta).next_back().copied();
            let next = pts.range(theta + 1..).next().copied();
            if let (Some(p), Some(q)) = (prev, next) {
                bad_gaps -= i64::from(bad(p, q));
            }
            if let Some(p) = prev {
                bad_gaps += i64::from(bad(p, theta));
            }
            if let Some(q) = next {
                bad_gaps += i64::from(bad(theta, q));
            }
        }
        let lo = *pts.first().unwrap();
        let hi = *pts.last().unwrap();
        if bad_gaps == 0 && x_of(lo) - 1.0 / 3.0 <= ell && 2.0 - x_of(hi) <= ell {
            steps = Some(k);
            break;
        }
        theta = theta.wrapping_add(step);
    }
    let bound = f_orbit_bound(ell);
    Ok(OrbitDensity { ell, steps, bound, holds: steps.is_some_and(|s| (s as f64) <= bound) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrrRecord {
    pub q: u64,
    pub p: u64,
    pub distance: f64,
    /// `|log2/log6 − p/q|·q^{14.3}·log 6`; at least 1 when the inequality holds.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrrScan {
    pub q_max: u64,
    /// Denominators where `‖q·log2/log6‖` reaches a new minimum.
    pub records: Vec<IrrRecord>,
    pub min_ratio: IrrRecord,
    pub all_hold: bool,
}

impl IrrScan {
    pub fn to_table(&self) -> String {
        let mut s = String::from("q\tp\t|L-p/q|\tratio\n");
        for r in &self.records {
            let _ = writeln!(s, "{}\t{}\t{:.6e}\t{:.6e}", r.q, r.p, r.distance, r.ratio);
        }
        let _ = writeln!(s, "min_ratio_q={}\nmin_ratio={:.6e}\nall_hold={}", self.min_ratio.q, self.min_ratio.ratio, self.all_hold);
        s
    }
}

/// Checks `|log2/log6 − p/q| ≥ (1/log 6)·q^{−14.3}` for every `2 ≤ q ≤ q_max` with
/// `log2/log6` held to 256 bits.
pub fn irrationality_witness_scan(q_max: u64) -> Result<IrrScan, BoundsError> {
    if q_max > 1_000_000 {
        return Err(BoundsError::Resource("q_max is limited to 10^6".into()));
    }
    if q_max < 2 {
        return Err(BoundsError::InvalidInput("q_max must be at least 2".into()));
    }
    const W: u32 = 256;
    let l = log6_of_two(W + 32).midpoint() * Rational::from_integer(BigInt::one() << W);
    let l = l.floor().to_integer();
    let modulus = BigInt::one() << W;
    let half = BigInt::one() << (W - 1);
    let ln_ln6 = 6f64.ln().ln();
    let mut records = Vec::new();
    let mut best_dist = f64::INFINITY;
    let mut min_ratio: Option<IrrRecord> = None;
    let mut all_hold = true;
    for q in 2..=q_max {
        let ql = &l * BigInt::from(q);
        let (p, rem) = ql.div_mod_floor(&modulus);
        let (p, dist) = if rem >= half { (p + 1, &modulus - &rem) } else { (p, rem) };
        let distance = (Rational::new(dist, modulus.clone())).to_f64().unwrap_or(0.0);
        let ratio = (distance.ln() + 14.3 * (q as f64).ln() + ln_ln6).exp();
        let rec = IrrRecord { q, p: p.to_u64().unwrap_or(0), distance, ratio };
        if ratio < 1.0 {
            all_hold = false;
        }
        if distance < best_dist {
            best_dist = distance;
            records.push(rec.clone());
        }
        if min_ratio.as_ref().map_or(true, |m| ratio < m.ratio) {
            min_ratio = Some(rec);
        }
    }
    Ok(IrrScan { q_max, records, min_ratio: min_ratio.unwrap(), all_hold })
}

/// Continued-fraction convergent denominators `q_0 = 1, q_1, …` up to `q_max` of a real
/// known to lie in `x`, as far as the interval determines the partial quotients.
pub fn convergent_denominators(x: &RealInterval, q_max: u64) -> Vec<u64> {
    let (mut lo, mut hi) = (x.lo.clone(), x.hi.clone());
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut out = vec![1];
    loop {
        let (fl, fh) = (lo.floor(), hi.floor());
        if fl != fh {
            break;
        }
        let (rl, rh) = (&lo - &fl, &hi - &fh);
        if rl.is_zero() || rh.is_zero() {
            break;
        }
        (lo, hi) = (rh.recip(), rl.recip());
        let (al, ah) = (lo.floor(), hi.floor());
        if al != ah {
            break;
        }
        let Some(next) = al.to_integer().to_u64().and_then(|a| a.checked_mul(q)).and_then(|v| v.checked_add(q_prev)) else { break };
        if next > q_max {
            break;
        }
        (q_prev, q) = (q, next);
        out.push(q);
    }
    out
}
