//! Rotation words `⌊iα + t⌋ − ⌊(i−1)α + t⌋`, balance, angle and phase recovery, and
//! straddle words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numerics::{int, AffineFloor, Angle, NumericsError, Rational, RealInterval};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SturmianError {
    #[error("empty or reversed index range {0}..{1}")]
    InvalidRange(i64, i64),
    #[error("word is not balanced: {0} vs {1}")]
    Unbalanced(Word, Word),
    #[error("words have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("empty word")]
    Empty,
    #[error("cannot parse word `{0}`")]
    Parse(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RoundingMode {
    #[default]
    Floor,
    Ceiling,
}

/// A finite word over small symbols; `symbols[k]` sits at position `base_index + k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub symbols: Vec<u8>,
    pub base_index: i64,
}

impl Word {
    pub fn new(symbols: Vec<u8>, base_index: i64) -> Self {
        Word { symbols, base_index }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn last_index(&self) -> i64 {
        self.base_index + self.symbols.len() as i64 - 1
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word::new(self.symbols[start..start + len].to_vec(), self.base_index + start as i64)
    }

    pub fn sum(&self) -> i64 {
        self.symbols.iter().map(|&s| s as i64).sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}:", self.base_index)?;
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = SturmianError;

    /// `@<base>:<digits>`, or bare digits with base index 0.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SturmianError::Parse(s.to_string());
        let (base, digits) = match s.strip_prefix('@') {
            Some(rest) => {
                let (b, d) = rest.split_once(':').ok_or_else(bad)?;
                (b.parse::<i64>().map_err(|_| bad())?, d)
            }
            None => (0, s),
        };
        let symbols = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::new(symbols, base))
    }
}

/// `R(n·α + t)` over `n ∈ [lo, hi]`, with `R = ⌊·⌋` or `⌈·⌉`.
pub(crate) fn rounded_sequence(
    alpha: &Angle,
    t: &Angle,
    mode: RoundingMode,
    lo: i64,
    hi: i64,
) -> Result<Vec<i64>, NumericsError> {
    let seq = AffineFloor::new(alpha, t)?;
    Ok(match mode {
        RoundingMode::Floor => seq.range(lo, hi)?,
        RoundingMode::Ceiling => seq.negated().range(lo, hi)?.into_iter().map(|v| -v).collect(),
    })
}

/// Symbols `R(iα + t) − R((i−1)α + t)` for `i ∈ [i_from, i_to]`.
pub fn rotation_word(
    alpha: &Angle,
    t: &Angle,
    mode: RoundingMode,
    i_from: i64,
    i_to: i64,
) -> Result<Word, SturmianError> {
    if i_from > i_to {
        return Err(SturmianError::InvalidRange(i_from, i_to));
    }
    let r = rounded_sequence(alpha, t, mode, i_from - 1, i_to)?;
    let symbols = r.windows(2).map(|w| (w[1] - w[0]) as u8).collect();
    Ok(Word::new(symbols, i_from))
}

/// Outcome of a balance check; an unbalanced word carries two equal-length factors
/// whose sums differ by at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Balance {
    Balanced,
    Unbalanced { u: Word, v: Word },
}

impl Balance {
    pub fn is_balanced(&self) -> bool {
        matches!(self, Balance::Balanced)
    }
}

pub fn is_balanced(w: &Word) -> Balance {
    let prefix = prefix_sums(w);
    let n = w.len();
    for len in 1..=n {
        let (mut lo, mut hi) = ((0usize, i64::MAX), (0usize, i64::MIN));
        for start in 0..=n - len {
            let s = prefix[start + len] - prefix[start];
            if s < lo.1 {
                lo = (start, s);
            }
            if s > hi.1 {
                hi = (start, s);
            }
        }
        if hi.1 - lo.1 > 1 {
            return Balance::Unbalanced { u: w.factor(lo.0, len), v: w.factor(hi.0, len) };
        }
    }
    Balance::Balanced
}

fn prefix_sums(w: &Word) -> Vec<i64> {
    let mut p = vec![0i64; w.len() + 1];
    for (k, &s) in w.symbols.iter().enumerate() {
        p[k + 1] = p[k] + s as i64;
    }
    p
}

/// A closed interval containing the angle of every rotation sequence having `w` as a factor.
///
/// Each factor of length ℓ and sum s forces `|s − ℓα| < 1`.
pub fn estimate_angle(w: &Word) -> Result<RealInterval, SturmianError> {
    if w.is_empty() {
        return Err(SturmianError::Empty);
    }
    if let Balance::Unbalanced { u, v } = is_balanced(w) {
        return Err(SturmianError::Unbalanced(u, v));
    }
    let prefix = prefix_sums(w);
    let n = w.len();
    let mut lo = Rational::from_integer(i64::MIN.into());
    let mut hi = Rational::from_integer(i64::MAX.into());
    for len in 1..=n {
        let sums = (0..=n - len).map(|s| prefix[s + len] - prefix[s]);
        let (mn, mx) = sums.fold((i64::MAX, i64::MIN), |(a, b), s| (a.min(s), b.max(s)));
        let l = Rational::new((mx - 1).into(), (len as i64).into());
        let h = Rational::new((mn + 1).into(), (len as i64).into());
        lo = lo.max(l);
        hi = hi.min(h);
    }
    Ok(RealInterval { lo, hi })
}

/// An arc of the phase circle `[0, 1)`; an endpoint of 1 means the arc runs up to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseInterval {
    pub lo: Angle,
    pub hi: Angle,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl PhaseInterval {
    pub fn contains(&self, t: &Angle) -> bool {
        let above = match t.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match t.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        (above && below) || (self.hi_closed && self.hi.cmp_rational(&int(1)) == Ordering::Equal && t.is_zero())
    }
}

impl fmt::Display for PhaseInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// Sorted distinct points `−kα mod 1` for `k ∈ [k_lo, k_hi]`, together with 0.
pub(crate) fn circle_cut_points(alpha: &Angle, k_lo: i64, k_hi: i64) -> Vec<Angle> {
    let mut pts: Vec<Angle> = (k_lo..=k_hi).map(|k| alpha.mul_int(-k).fract()).collect();
    pts.push(Angle::zero());
    pts.sort();
    pts.dedup();
    pts
}

/// The exact set of phases `t ∈ [0, 1)` for which `rotation_word(α, t, mode)` over the
/// positions of `w` equals `w`.
pub fn phase_interval(w: &Word, alpha: &Angle, mode: RoundingMode) -> Result<Vec<PhaseInterval>, SturmianError> {
    if w.is_empty() {
        return Err(SturmianError::Empty);
    }
    let (from, to) = (w.base_index, w.last_index());
    let mut cuts = circle_cut_points(alpha, from - 1, to);
    cuts.push(Angle::from_integer(1));
    let floor = mode == RoundingMode::Floor;
    let mut out: Vec<PhaseInterval> = Vec::new();
    for pair in cuts.windows(2) {
        let mid = (&pair[0] + &pair[1]).mul_rational(&Rational::new(1.into(), 2.into()));
        let hit = rotation_word(alpha, &mid, mode, from, to)?.symbols == w.symbols;
        if !hit {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.hi == pair[0] => last.hi = pair[1].clone(),
            _ => out.push(PhaseInterval {
                lo: pair[0].clone(),
                hi: pair[1].clone(),
                lo_closed: floor,
                hi_closed: !floor,
            }),
        }
    }
    Ok(out)
}

/// Context kept on each side of a candidate when testing the transposed word for balance.
const STRADDLE_CONTEXT: usize = 16;

/// The middle order of a straddle word at `k`: `w_0 = w_3`, `w_1 ≠ w_2`, and swapping
/// `w_1, w_2` keeps the surrounding word balanced, as it must when floor and ceiling
/// rotation sequences differ by that single transposition.
fn straddle_order(symbols: &[u8], k: usize) -> Option<Ordering> {
    let w = &symbols[k..k + 4];
    if w[0] != w[3] || w[1] == w[2] {
        return None;
    }
    let lo = k.saturating_sub(STRADDLE_CONTEXT);
    let hi = (k + 4 + STRADDLE_CONTEXT).min(symbols.len());
    let mut swapped = symbols[lo..hi].to_vec();
    swapped.swap(k + 1 - lo, k + 2 - lo);
    is_balanced(&Word::new(swapped, 0)).is_balanced().then(|| w[1].cmp(&w[2]))
}

/// Positions of every stacked pair of straddle words whose middle pairs are ordered
/// oppositely. Candidates near either end have little context, so the balance test on the
/// transposed word is weaker there.
pub fn misaligned_straddles(top: &Word, bottom: &Word) -> Result<Vec<i64>, SturmianError> {
    if top.len() != bottom.len() {
        return Err(SturmianError::LengthMismatch(top.len(), bottom.len()));
    }
    Ok((0..top.len().saturating_sub(3))
        .filter(|&k| match (straddle_order(&top.symbols, k), straddle_order(&bottom.symbols, k)) {
            (Some(x), Some(y)) => x != y,
            _ => false,
        })
        .map(|k| top.base_index + k as i64)
        .collect())
}

/// Position of the first misaligned stacked pair of straddle words.
pub fn detect_misaligned_straddle(top: &Word, bottom: &Word) -> Result<Option<i64>, SturmianError> {
    Ok(misaligned_straddles(top, bottom)?.first().copied())
}
