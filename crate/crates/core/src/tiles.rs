//! The thirteen Kari-Culik tiles, windows of tile IDs, Wang adjacency, the bottom
//! projection Φ, row types and row fillings.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::numerics::{parse_rational, rat, Rational};
use crate::sturmian::{estimate_angle, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilesError {
    #[error("tile sweep produced {0} distinct tiles, expected 13")]
    SweepCount(usize),
    #[error("construction failed during the tile sweep: {0}")]
    Sweep(String),
    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
    #[error("row {0} is outside the window")]
    RowOutside(i64),
    #[error("row {0} needs a vertical neighbour to decide its type")]
    InsufficientContext(i64),
    #[error("row {0} mixes multipliers or stacks three type-2 rows")]
    InvalidConfiguration(i64),
    #[error("words have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
}

fn parse_err(what: &'static str, detail: impl Into<String>) -> TilesError {
    TilesError::Parse { what, detail: detail.into() }
}

/// Bottom/top edge label; `0′` is distinct for adjacency and collapses to 0 under Φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Zero,
    ZeroPrime,
    One,
    Two,
}

impl Label {
    pub fn value(self) -> u8 {
        match self {
            Label::Zero | Label::ZeroPrime => 0,
            Label::One => 1,
            Label::Two => 2,
        }
    }

    pub(crate) fn from_symbol(s: i64, primed: bool) -> Option<Label> {
        match (s, primed) {
            (0, false) => Some(Label::Zero),
            (0, true) => Some(Label::ZeroPrime),
            (1, _) => Some(Label::One),
            (2, _) => Some(Label::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Zero => "0",
            Label::ZeroPrime => "0'",
            Label::One => "1",
            Label::Two => "2",
        })
    }
}

impl FromStr for Label {
    type Err = TilesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(Label::Zero),
            "0'" => Ok(Label::ZeroPrime),
            "1" => Ok(Label::One),
            "2" => Ok(Label::Two),
            other => Err(parse_err("label", other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplier {
    OneThird,
    Two,
}

impl Multiplier {
    pub fn value(self) -> Rational {
        match self {
            Multiplier::OneThird => rat(1, 3),
            Multiplier::Two => rat(2, 1),
        }
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Multiplier::OneThird => "1/3",
            Multiplier::Two => "2",
        })
    }
}

impl FromStr for Multiplier {
    type Err = TilesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1/3" => Ok(Multiplier::OneThird),
            "2" => Ok(Multiplier::Two),
            other => Err(parse_err("multiplier", other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tile {
    pub bottom: Label,
    pub top: Label,
    pub left: Rational,
    pub right: Rational,
    pub multiplier: Multiplier,
}

pub type TileId = u8;

/// Side labels are multiples of 1/3; this is `3·label`.
pub(crate) fn thirds(r: &Rational) -> Option<i8> {
    let t = r * Rational::from_integer(BigInt::from(3));
    if !t.is_integer() {
        return None;
    }
    t.to_integer().to_i8()
}

impl Tile {
    fn sort_key(&self) -> (Multiplier, Label, Rational, Label, Rational) {
        (self.multiplier, self.bottom, self.left.clone(), self.top, self.right.clone())
    }

    pub(crate) fn key(&self) -> TileKey {
        TileKey {
            multiplier: self.multiplier,
            bottom: self.bottom,
            left: thirds(&self.left).unwrap_or(i8::MIN),
            top: self.top,
            right: thirds(&self.right).unwrap_or(i8::MIN),
        }
    }
}

/// `λ·a + b = c + d` with `(a, b, c, d) = (bottom, left, top, right)` and `0′` read as 0.
pub fn check_multiplier(tile: &Tile) -> bool {
    let num = |l: Label| Rational::from_integer(BigInt::from(l.value()));
    tile.multiplier.value() * num(tile.bottom) + &tile.left == num(tile.top) + &tile.right
}

/// Tile labels with the side labels in thirds, for fast lookup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct TileKey {
    pub multiplier: Multiplier,
    pub bottom: Label,
    pub left: i8,
    pub top: Label,
    pub right: i8,
}

impl TileKey {
    pub(crate) fn to_tile(self) -> Tile {
        Tile {
            bottom: self.bottom,
            top: self.top,
            left: rat(self.left as i64, 3),
            right: rat(self.right as i64, 3),
            multiplier: self.multiplier,
        }
    }
}

/// Tile IDs of each general row type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowTypeSubsets {
    pub one_third: Vec<TileId>,
    pub two_one: Vec<TileId>,
    pub two_two_t: Vec<TileId>,
    pub two_two_b: Vec<TileId>,
}

impl RowTypeSubsets {
    pub fn get(&self, t: RowType) -> &[TileId] {
        match t {
            RowType::OneThird => &self.one_third,
            RowType::TwoOne => &self.two_one,
            RowType::TwoTwoT => &self.two_two_t,
            RowType::TwoTwoB => &self.two_two_b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSet {
    tiles: Vec<Tile>,
    keys: Vec<TileKey>,
    lookup: HashMap<TileKey, TileId>,
}

static CANONICAL: OnceLock<TileSet> = OnceLock::new();

const CANONICAL_TABLE: &str = include_str!("../data/tiles.txt");

impl TileSet {
    /// Sorts by (multiplier, bottom, left, top, right) and numbers the tiles from 0.
    pub fn from_tiles(mut tiles: Vec<Tile>) -> TileSet {
        tiles.sort_by_key(|t| t.sort_key());
        tiles.dedup();
        let keys: Vec<TileKey> = tiles.iter().map(Tile::key).collect();
        let lookup = keys.iter().enumerate().map(|(i, k)| (*k, i as TileId)).collect();
        TileSet { tiles, keys, lookup }
    }

    /// The committed table of thirteen tiles.
    pub fn canonical() -> &'static TileSet {
        CANONICAL.get_or_init(|| TileSet::parse(CANONICAL_TABLE).expect("committed tile table parses"))
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn get(&self, id: TileId) -> Option<&Tile> {
        self.tiles.get(id as usize)
    }

    pub fn id_of(&self, tile: &Tile) -> Option<TileId> {
        self.lookup.get(&tile.key()).copied()
    }

    pub(crate) fn id_of_key(&self, key: &TileKey) -> Option<TileId> {
        self.lookup.get(key).copied()
    }

    pub(crate) fn key(&self, id: TileId) -> &TileKey {
        &self.keys[id as usize]
    }

    /// `id;multiplier;bottom;left;top;right`, one tile per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, t) in self.tiles.iter().enumerate() {
            s.push_str(&format!("{i};{};{};{};{};{}\n", t.multiplier, t.bottom, fmt_q(&t.left), t.top, fmt_q(&t.right)));
        }
        s
    }

    /// Inverse of [`TileSet::to_text`]; IDs must run 0, 1, … in canonical order.
    pub fn parse(text: &str) -> Result<TileSet, TilesError> {
        let mut tiles = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let f: Vec<&str> = line.split(';').collect();
            if f.len() != 6 {
                return Err(parse_err("tile line", line));
            }
            let id: usize = f[0].trim().parse().map_err(|_| parse_err("tile id", f[0]))?;
            if id != tiles.len() {
                return Err(parse_err("tile id", format!("expected {}, found {id}", tiles.len())));
            }
            let q = |s: &str| parse_rational(s).map_err(|_| parse_err("side label", s));
            tiles.push(Tile {
                multiplier: f[1].parse()?,
                bottom: f[2].parse()?,
                left: q(f[3])?,
                top: f[4].parse()?,
                right: q(f[5])?,
            });
        }
        let set = TileSet::from_tiles(tiles.clone());
        if set.tiles != tiles {
            return Err(parse_err("tile table", "tiles are not in canonical order"));
        }
        Ok(set)
    }

    /// Left→right successors: `j` may follow `i` when `right(i) = left(j)`.
    pub fn transition_graph(&self, ids: &[TileId]) -> Vec<(TileId, TileId)> {
        let mut edges = Vec::new();
        for &i in ids {
            for &j in ids {
                if self.keys[i as usize].right == self.keys[j as usize].left {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Row-type subsets read off the label adjacency between the two multiplier classes.
    pub fn row_type_subsets(&self) -> RowTypeSubsets {
        let labels = |m: Multiplier, top: bool| -> BTreeSet<Label> {
            self.keys.iter().filter(|k| k.multiplier == m).map(|k| if top { k.top } else { k.bottom }).collect()
        };
        let (tops13, bottoms13) = (labels(Multiplier::OneThird, true), labels(Multiplier::OneThird, false));
        let (tops2, bottoms2) = (labels(Multiplier::Two, true), labels(Multiplier::Two, false));
        let pick = |below: &BTreeSet<Label>, above: &BTreeSet<Label>| -> Vec<TileId> {
            (0..self.len() as TileId)
                .filter(|&i| {
                    let k = &self.keys[i as usize];
                    k.multiplier == Multiplier::Two && below.contains(&k.bottom) && above.contains(&k.top)
                })
                .collect()
        };
        RowTypeSubsets {
            one_third: (0..self.len() as TileId).filter(|&i| self.keys[i as usize].multiplier == Multiplier::OneThird).collect(),
            two_one: pick(&tops13, &bottoms13),
            two_two_b: pick(&tops13, &bottoms2),
            two_two_t: pick(&tops2, &bottoms13),
        }
    }
}

fn fmt_q(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Derives the tile set by sweeping the construction over a grid of angles and
/// phases in both rounding modes and collecting every labelled cell.
pub fn derive_tileset() -> Result<TileSet, TilesError> {
    derive_tileset_with_draws().map(|(set, _)| set)
}

/// [`derive_tileset`] together with the number of parameter draws swept.
pub fn derive_tileset_with_draws() -> Result<(TileSet, usize), TilesError> {
    let (tiles, draws) = crate::construction::sweep_cell_labels().map_err(|e| TilesError::Sweep(e.to_string()))?;
    let set = TileSet::from_tiles(tiles.into_iter().map(TileKey::to_tile).collect());
    if set.len() != 13 {
        return Err(TilesError::SweepCount(set.len()));
    }
    Ok((set, draws))
}

/// A rectangle of tile IDs; `grid[r·width + c]` is the tile at row `origin_row + r`,
/// column `origin_col + c`. Rows grow upwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub width: usize,
    pub height: usize,
    pub origin_row: i64,
    pub origin_col: i64,
    pub grid: Vec<TileId>,
}

impl Window {
    pub fn new(width: usize, height: usize, origin_row: i64, origin_col: i64, grid: Vec<TileId>) -> Self {
        assert_eq!(grid.len(), width * height);
        Window { width, height, origin_row, origin_col, grid }
    }

    pub fn rows(&self) -> std::ops::Range<i64> {
        self.origin_row..self.origin_row + self.height as i64
    }

    pub fn cols(&self) -> std::ops::Range<i64> {
        self.origin_col..self.origin_col + self.width as i64
    }

    pub fn get(&self, row: i64, col: i64) -> Option<TileId> {
        let r = usize::try_from(row - self.origin_row).ok().filter(|&r| r < self.height)?;
        let c = usize::try_from(col - self.origin_col).ok().filter(|&c| c < self.width)?;
        Some(self.grid[r * self.width + c])
    }

    /// Tile IDs of one row, by absolute row index.
    pub fn row(&self, row: i64) -> Option<&[TileId]> {
        let r = usize::try_from(row - self.origin_row).ok().filter(|&r| r < self.height)?;
        Some(&self.grid[r * self.width..(r + 1) * self.width])
    }

    /// The sub-window over absolute rows `[r0, r1)` and columns `[c0, c1)`.
    pub fn sub_window(&self, r0: i64, r1: i64, c0: i64, c1: i64) -> Option<Window> {
        if r0 < self.origin_row || c0 < self.origin_col || r1 > self.rows().end || c1 > self.cols().end || r0 >= r1 || c0 >= c1 {
            return None;
        }
        let mut grid = Vec::with_capacity(((r1 - r0) * (c1 - c0)) as usize);
        for r in r0..r1 {
            let row = self.row(r)?;
            grid.extend_from_slice(&row[(c0 - self.origin_col) as usize..(c1 - self.origin_col) as usize]);
        }
        Some(Window::new((c1 - c0) as usize, (r1 - r0) as usize, r0, c0, grid))
    }

    /// `width height origin_row origin_col`, then one line of IDs per row from the lowest row up.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.width, self.height, self.origin_row, self.origin_col);
        for r in 0..self.height {
            let line: Vec<String> = self.grid[r * self.width..(r + 1) * self.width].iter().map(|i| i.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Window, TilesError> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &'static str| tokens.next().ok_or_else(|| parse_err(what, "unexpected end of input"));
        let width: usize = next("width")?.parse().map_err(|_| parse_err("width", "not a number"))?;
        let height: usize = next("height")?.parse().map_err(|_| parse_err("height", "not a number"))?;
        let origin_row: i64 = next("origin row")?.parse().map_err(|_| parse_err("origin row", "not a number"))?;
        let origin_col: i64 = next("origin column")?.parse().map_err(|_| parse_err("origin column", "not a number"))?;
        if width == 0 || height == 0 {
            return Err(parse_err("window", "empty window"));
        }
        let mut grid = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            let id: TileId = next("tile id")?.parse().map_err(|_| parse_err("tile id", "not a tile id"))?;
            grid.push(id);
        }
        if tokens.next().is_some() {
            return Err(parse_err("window", "trailing data"));
        }
        Ok(Window::new(width, height, origin_row, origin_col, grid))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Between `(row, col)` and `(row, col + 1)`.
    Horizontal,
    /// Between `(row, col)` and `(row + 1, col)`.
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: EdgeKind,
    pub row: i64,
    pub col: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            EdgeKind::Horizontal => "horizontal",
            EdgeKind::Vertical => "vertical",
        };
        write!(f, "{k} mismatch at row {} col {}", self.row, self.col)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Cells holding an ID outside the tile set.
    pub unknown_ids: Vec<(i64, i64)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.unknown_ids.is_empty()
    }
}

/// Checks every shared edge for label equality; `0` and `0′` differ.
pub fn validate_window(w: &Window) -> ValidationReport {
    let ts = TileSet::canonical();
    let mut report = ValidationReport::default();
    let n = ts.len() as TileId;
    for r in 0..w.height {
        for c in 0..w.width {
            if w.grid[r * w.width + c] >= n {
                report.unknown_ids.push((w.origin_row + r as i64, w.origin_col + c as i64));
            }
        }
    }
    if !report.unknown_ids.is_empty() {
        return report;
    }
    for r in 0..w.height {
        for c in 0..w.width {
            let k = ts.key(w.grid[r * w.width + c]);
            let (row, col) = (w.origin_row + r as i64, w.origin_col + c as i64);
            if c + 1 < w.width && k.right != ts.key(w.grid[r * w.width + c + 1]).left {
                report.violations.push(Violation { kind: EdgeKind::Horizontal, row, col });
            }
            if r + 1 < w.height && k.top != ts.key(w.grid[(r + 1) * w.width + c]).bottom {
                report.violations.push(Violation { kind: EdgeKind::Vertical, row, col });
            }
        }
    }
    report
}

fn project(w: &Window, top: bool) -> Vec<Word> {
    let ts = TileSet::canonical();
    (0..w.height)
        .map(|r| {
            let symbols = w.grid[r * w.width..(r + 1) * w.width]
                .iter()
                .map(|&id| {
                    let k = ts.key(id);
                    if top { k.top.value() } else { k.bottom.value() }
                })
                .collect();
            Word::new(symbols, w.origin_col)
        })
        .collect()
}

/// Φ: the bottom labels of every row with `0′ ↦ 0`, lowest row first.
pub fn project_bottom(w: &Window) -> Vec<Word> {
    project(w, false)
}

/// Top labels of every row with `0′ ↦ 0`, lowest row first.
pub fn project_top(w: &Window) -> Vec<Word> {
    project(w, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowType {
    OneThird,
    TwoOne,
    TwoTwoT,
    TwoTwoB,
}

impl fmt::Display for RowType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowType::OneThird => "one_third",
            RowType::TwoOne => "two_one",
            RowType::TwoTwoT => "two_two_t",
            RowType::TwoTwoB => "two_two_b",
        })
    }
}

fn row_multiplier(w: &Window, row: i64) -> Result<Option<Multiplier>, TilesError> {
    let Some(ids) = w.row(row) else { return Ok(None) };
    let ts = TileSet::canonical();
    let m = ts.key(ids[0]).multiplier;
    if ids.iter().any(|&i| ts.key(i).multiplier != m) {
        return Err(TilesError::InvalidConfiguration(row));
    }
    Ok(Some(m))
}

/// The general type of a row: from the neighbours' multipliers when present, else from
/// primed zeros, else from the bottom-word angle estimate when it is decisive.
pub fn classify_row(w: &Window, row: i64) -> Result<RowType, TilesError> {
    let own = row_multiplier(w, row)?.ok_or(TilesError::RowOutside(row))?;
    if own == Multiplier::OneThird {
        return Ok(RowType::OneThird);
    }
    let below = row_multiplier(w, row - 1)?;
    let above = row_multiplier(w, row + 1)?;
    use Multiplier::*;
    match (below, above) {
        (Some(Two), Some(Two)) => return Err(TilesError::InvalidConfiguration(row)),
        (Some(OneThird), Some(OneThird)) => return Ok(RowType::TwoOne),
        (Some(Two), _) => return Ok(RowType::TwoTwoT),
        (_, Some(Two)) => return Ok(RowType::TwoTwoB),
        _ => {}
    }
    let ts = TileSet::canonical();
    let ids = w.row(row).unwrap();
    if ids.iter().any(|&i| ts.key(i).bottom == Label::ZeroPrime) {
        return Ok(RowType::TwoTwoT);
    }
    if ids.iter().any(|&i| ts.key(i).top == Label::ZeroPrime) {
        return Ok(RowType::TwoTwoB);
    }
    let bottoms = &project_bottom(w)[(row - w.origin_row) as usize];
    if let Ok(est) = estimate_angle(bottoms) {
        let (third, half, two_thirds, one) = (rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1));
        if est.lo > half && est.hi < two_thirds {
            return Ok(RowType::TwoOne);
        }
        if est.lo >= third && est.hi < half {
            return Ok(RowType::TwoTwoB);
        }
        if est.lo > two_thirds && est.hi < one {
            return Ok(RowType::TwoTwoT);
        }
    }
    Err(TilesError::InsufficientContext(row))
}

fn label_matches(l: Label, s: u8) -> bool {
    l.value() == s
}

/// All tile sequences of the hinted row type whose tops and bottoms project to the
/// given words and whose side labels chain.
pub fn enumerate_row_fillings(top: &Word, bottom: &Word, hint: RowType) -> Result<Vec<Vec<TileId>>, TilesError> {
    if top.len() != bottom.len() {
        return Err(TilesError::LengthMismatch(top.len(), bottom.len()));
    }
    let ts = TileSet::canonical();
    let subsets = ts.row_type_subsets();
    let pool = subsets.get(hint);
    let candidates: Vec<Vec<TileId>> = (0..top.len())
        .map(|k| {
            pool.iter()
                .copied()
                .filter(|&i| {
                    let key = ts.key(i);
                    label_matches(key.top, top.symbols[k]) && label_matches(key.bottom, bottom.symbols[k])
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(top.len());
    chain(ts, &candidates, &mut path, &mut out, &|a, b| ts.key(a).right == ts.key(b).left);
    Ok(out)
}

fn chain<T: Copy>(
    ts: &TileSet,
    candidates: &[Vec<T>],
    path: &mut Vec<T>,
    out: &mut Vec<Vec<T>>,
    fits: &dyn Fn(T, T) -> bool,
) {
    let k = path.len();
    if k == candidates.len() {
        out.push(path.clone());
        return;
    }
    for &c in &candidates[k] {
        if k == 0 || fits(path[k - 1], c) {
            path.push(c);
            chain(ts, candidates, path, out, fits);
            path.pop();
        }
    }
}

/// Fillings of a stacked 2.2b/2.2t pair: `top` is read on the upper row's tops and
/// `bottom` on the lower row's bottoms; the shared middle labels are free.
pub fn enumerate_stacked_fillings(top: &Word, bottom: &Word) -> Result<Vec<Vec<(TileId, TileId)>>, TilesError> {
    if top.len() != bottom.len() {
        return Err(TilesError::LengthMismatch(top.len(), bottom.len()));
    }
    let ts = TileSet::canonical();
    let subsets = ts.row_type_subsets();
    let candidates: Vec<Vec<(TileId, TileId)>> = (0..top.len())
        .map(|k| {
            let mut v = Vec::new();
            for &lo in &subsets.two_two_b {
                for &hi in &subsets.two_two_t {
                    let (kl, kh) = (ts.key(lo), ts.key(hi));
                    if kl.top == kh.bottom && label_matches(kl.bottom, bottom.symbols[k]) && label_matches(kh.top, top.symbols[k]) {
                        v.push((lo, hi));
                    }
                }
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(top.len());
    let fits = |a: (TileId, TileId), b: (TileId, TileId)| ts.key(a.0).right == ts.key(b.0).left && ts.key(a.1).right == ts.key(b.1).left;
    chain(ts, &candidates, &mut path, &mut out, &fits);
    Ok(out)
}

/// Telescoping sum `λ·Σ bottoms − Σ tops` of a row segment, which equals `right_end − left_start`.
pub fn row_telescope(ids: &[TileId]) -> (Rational, Rational) {
    let ts = TileSet::canonical();
    let mut acc = Rational::zero();
    for &i in ids {
        let t = &ts.tiles[i as usize];
        acc += t.multiplier.value() * Rational::from_integer(t.bottom.value().into()) - Rational::from_integer(t.top.value().into());
    }
    let ends = &ts.tiles[*ids.last().unwrap() as usize].right - &ts.tiles[ids[0] as usize].left;
    (acc, ends)
}
