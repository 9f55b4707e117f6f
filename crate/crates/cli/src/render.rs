//! Image emitters for tile windows and parameter-space partitions.

use std::fmt::Write as _;
use std::str::FromStr;

use kc_core::numerics::{Angle, Rational};
use kc_core::sturmian::RoundingMode;
use kc_core::tiles::{Label, Multiplier, TileSet, Window};
use kc_core::torus::{fhat, Branch, SkewState, TorusPoint};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Ppm,
    Ascii,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "svg" => Ok(Format::Svg),
            "ppm" => Ok(Format::Ppm),
            "ascii" => Ok(Format::Ascii),
            _ => Err(CliError::Usage(format!("unknown format `{s}` (svg, ppm, ascii)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorBy {
    TileId,
    BottomSymbol,
    Multiplier,
}

impl FromStr for ColorBy {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "tile-id" | "tile_id" => Ok(ColorBy::TileId),
            "bottom-symbol" | "bottom_symbol" => Ok(ColorBy::BottomSymbol),
            "multiplier" => Ok(ColorBy::Multiplier),
            _ => Err(CliError::Usage(format!("unknown coloring `{s}` (tile-id, bottom-symbol, multiplier)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: Format,
    pub cell_px: u32,
    pub color_by: ColorBy,
}

impl RenderOptions {
    pub fn new(format: Format, cell_px: u32, color_by: ColorBy) -> Result<Self, CliError> {
        if cell_px == 0 || cell_px > 256 {
            return Err(CliError::Usage(format!("cell size {cell_px} outside 1..=256")));
        }
        Ok(RenderOptions { format, cell_px, color_by })
    }
}

/// Class indices over a rectangle of cells; row 0 is drawn at the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub classes: Vec<u16>,
}

impl Raster {
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.classes[y * self.width + x]
    }
}

const PALETTE: [[u8; 3]; 16] = [
    [0xe6, 0x19, 0x4b],
    [0x3c, 0xb4, 0x4b],
    [0x43, 0x63, 0xd8],
    [0xff, 0xe1, 0x19],
    [0xf5, 0x82, 0x31],
    [0x91, 0x1e, 0xb4],
    [0x46, 0xf0, 0xf0],
    [0xf0, 0x32, 0xe6],
    [0xbc, 0xf6, 0x0c],
    [0xfa, 0xbe, 0xbe],
    [0x00, 0x80, 0x80],
    [0x9a, 0x63, 0x24],
    [0x80, 0x00, 0x00],
    [0xaa, 0xff, 0xc3],
    [0x80, 0x80, 0x00],
    [0x00, 0x00, 0x75],
];
const UNKNOWN: [u8; 3] = [0x80, 0x80, 0x80];
const ASCII_GLYPHS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

fn color(class: u16) -> [u8; 3] {
    if class == u16::MAX {
        UNKNOWN
    } else {
        PALETTE[class as usize % PALETTE.len()]
    }
}

fn glyph(class: u16) -> char {
    if class == u16::MAX {
        '?'
    } else {
        ASCII_GLYPHS[class as usize % ASCII_GLYPHS.len()] as char
    }
}

fn window_class(set: &TileSet, id: u8, by: ColorBy) -> u16 {
    let Some(tile) = set.get(id) else { return u16::MAX };
    match by {
        ColorBy::TileId => id as u16,
        ColorBy::BottomSymbol => match tile.bottom {
            Label::Zero | Label::ZeroPrime => 0,
            Label::One => 1,
            Label::Two => 2,
        },
        ColorBy::Multiplier => match tile.multiplier {
            Multiplier::OneThird => 3,
            Multiplier::Two => 2,
        },
    }
}

/// Window cells as a raster, highest row on top.
pub fn window_raster(w: &Window, by: ColorBy) -> Raster {
    let set = TileSet::canonical();
    let mut classes = Vec::with_capacity(w.grid.len());
    for r in (0..w.height).rev() {
        classes.extend(w.grid[r * w.width..(r + 1) * w.width].iter().map(|&id| window_class(set, id, by)));
    }
    Raster { width: w.width, height: w.height, classes }
}

pub fn render_window(w: &Window, o: &RenderOptions) -> Vec<u8> {
    encode(&window_raster(w, o.color_by), o.format, o.cell_px)
}

pub fn encode(r: &Raster, format: Format, cell_px: u32) -> Vec<u8> {
    match format {
        Format::Svg => encode_svg(r, cell_px),
        Format::Ppm => encode_ppm(r, cell_px),
        Format::Ascii => encode_ascii(r),
    }
}

fn encode_svg(r: &Raster, px: u32) -> Vec<u8> {
    let px = px as usize;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w = r.width * px,
        h = r.height * px
    );
    for y in 0..r.height {
        for x in 0..r.width {
            let [red, green, blue] = color(r.get(x, y));
            let _ = writeln!(
                s,
                r##"<rect class="cell" x="{}" y="{}" width="{px}" height="{px}" fill="#{red:02x}{green:02x}{blue:02x}"/>"##,
                x * px,
                y * px
            );
        }
    }
    s.push_str("</svg>\n");
    s.into_bytes()
}

fn encode_ppm(r: &Raster, px: u32) -> Vec<u8> {
    let px = px as usize;
    let (w, h) = (r.width * px, r.height * px);
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h * 3);
    for y in 0..r.height {
        let line: Vec<u8> = (0..r.width).flat_map(|x| color(r.get(x, y)).repeat(px)).collect();
        for _ in 0..px {
            out.extend_from_slice(&line);
        }
    }
    out
}

fn encode_ascii(r: &Raster) -> Vec<u8> {
    let mut s = String::with_capacity((r.width + 1) * r.height);
    for y in 0..r.height {
        s.extend((0..r.width).map(|x| glyph(r.get(x, y))));
        s.push('\n');
    }
    s.into_bytes()
}

/// Which partition the raster colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionColoring {
    /// The symbol `R(α′ + t′) − R(t′)` at the zero position of `f̂^i(α, t)`.
    Symbol,
    /// The `m × n` window over rows `[i, i + m)` and columns `[1, n]`, numbered by first appearance.
    Config,
}

impl FromStr for PartitionColoring {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "symbol" => Ok(PartitionColoring::Symbol),
            "config" => Ok(PartitionColoring::Config),
            _ => Err(CliError::Usage(format!("unknown partition coloring `{s}` (symbol, config)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionSpec {
    pub m: u32,
    pub n: u32,
    pub iterates: u32,
    pub level: u32,
    pub width: usize,
    pub height: usize,
    /// Upper end of the phase axis; at most `6^level`.
    pub y_max: Rational,
    pub rounding: RoundingMode,
    pub coloring: PartitionColoring,
}

pub const MAX_PARTITION_LEVEL: u32 = 3;

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Pixel-center angle of column `x`, spanning `[1/3, 2]` left to right.
pub fn pixel_angle(x: usize, width: usize) -> Rational {
    rat(1, 3) + rat(5, 3) * rat(2 * x as i64 + 1, 2 * width as i64)
}

/// Pixel-center phase of raster row `y`, with `y = 0` at the top.
pub fn pixel_phase(y: usize, height: usize, y_max: &Rational) -> Rational {
    y_max * rat(2 * (height - y) as i64 - 1, 2 * height as i64)
}

fn round(mode: RoundingMode, x: &Angle) -> BigInt {
    match mode {
        RoundingMode::Floor => x.floor(),
        RoundingMode::Ceiling => x.ceil() - BigInt::one(),
    }
}

/// Colors `[1/3, 2] × [0, y_max)` by the cell of `f̂^{-i} 𝒫_{m,n}` seen through the
/// level-`level` coordinate.
pub fn partition_raster(spec: &PartitionSpec, max_cells: u128) -> Result<Raster, CliError> {
    if spec.level > MAX_PARTITION_LEVEL {
        return Err(CliError::Resource(format!("partition level {} exceeds {MAX_PARTITION_LEVEL}", spec.level)));
    }
    if spec.m == 0 || spec.n == 0 || spec.width == 0 || spec.height == 0 {
        return Err(CliError::Usage("partition sizes must be positive".into()));
    }
    if (spec.width as u128) * (spec.height as u128) > max_cells {
        return Err(CliError::Resource(format!("{}x{} pixels exceed the cell budget {max_cells}", spec.width, spec.height)));
    }
    let six_pow = Rational::from_integer(BigInt::from(6).pow(spec.level));
    if spec.y_max <= Rational::zero() || spec.y_max > six_pow {
        return Err(CliError::Usage(format!("phase range must lie in (0, 6^{}]", spec.level)));
    }
    let mut seen: Vec<Vec<u8>> = Vec::new();
    let mut classes = Vec::with_capacity(spec.width * spec.height);
    for y in 0..spec.height {
        let phase = Angle::from_rational(pixel_phase(y, spec.height, &spec.y_max));
        for x in 0..spec.width {
            let alpha = Angle::from_rational(pixel_angle(x, spec.width));
            let s = SkewState::new(alpha, TorusPoint::from_top(spec.level, phase.clone())).map_err(construction)?;
            let class = match spec.coloring {
                PartitionColoring::Symbol => {
                    let mut s = s;
                    for _ in 0..spec.iterates {
                        s = fhat(&s, Branch::default()).map_err(construction)?;
                    }
                    let t = s.phase.level(0);
                    let sym = round(spec.rounding, &s.angle.checked_add(&t).map_err(construction)?) - round(spec.rounding, &t);
                    u16::try_from(sym).unwrap_or(u16::MAX)
                }
                PartitionColoring::Config => {
                    let lo = spec.iterates as i64;
                    let rect = kc_core::construction::Rect::new(lo, lo + spec.m as i64, 1, spec.n as i64 + 1).map_err(construction)?;
                    let grid = kc_core::construction::k_map(&s, spec.rounding, rect, Branch::default()).map_err(construction)?.window.grid;
                    let k = match seen.iter().position(|g| *g == grid) {
                        Some(k) => k,
                        None => {
                            seen.push(grid);
                            seen.len() - 1
                        }
                    };
                    k as u16
                }
            };
            classes.push(class);
        }
    }
    Ok(Raster { width: spec.width, height: spec.height, classes })
}

fn construction(e: impl std::fmt::Display) -> CliError {
    CliError::Construction(e.to_string())
}

pub fn render_partition(spec: &PartitionSpec, format: Format, cell_px: u32, max_cells: u128) -> Result<Vec<u8>, CliError> {
    Ok(encode(&partition_raster(spec, max_cells)?, format, cell_px))
}
