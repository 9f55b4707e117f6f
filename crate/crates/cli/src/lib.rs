//! The `kc` command line: tile-set derivation, window generation and checking, rendering,
//! and the bound verifiers.
//!
//! Exit codes: 0 ok, 1 invalid result, 2 construction or resource error, 3 parse error,
//! 4 usage error.

pub mod render;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kc_core::bounds::{
    empirical_recurrence_many, farey_intervals, g_membership, good_angle_window, irrationality_witness_scan, surd_in_interval,
    verify_waiting_time, window_parameters, GSpec,
};
use kc_core::construction::{k_map, required_depth, Rect};
use kc_core::numerics::{parse_rational, Angle, Rational};
use kc_core::sturmian::{detect_misaligned_straddle, RoundingMode};
use kc_core::tiles::{classify_row, derive_tileset_with_draws, project_bottom, project_top, validate_window, TileSet, Window};
use kc_core::torus::{Branch, SkewState, TorusPoint};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use render::{ColorBy, Format, PartitionColoring, PartitionSpec, RenderOptions};

pub const DEFAULT_MAX_CELLS: u128 = 100_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Construction(_) | CliError::Resource(_) => 2,
            CliError::Parse(_) | CliError::Io { .. } => 3,
            CliError::Usage(_) => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "kc", version, about = "Sturmian Wang tilings: construction, checking, rendering and bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the tile table; with --derive, rebuild it from a parameter sweep.
    Tileset {
        #[arg(long)]
        derive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the window of K(α, t) over a rectangle.
    Generate(GenerateArgs),
    /// Check a window file for edge mismatches and misaligned straddles.
    Verify { path: PathBuf },
    /// Draw a window file.
    Render {
        path: PathBuf,
        #[arg(long, default_value = "svg")]
        format: String,
        #[arg(long, default_value_t = 16)]
        cell_px: u32,
        #[arg(long, default_value = "bottom-symbol")]
        color_by: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the parameter-space partition seen through one torus level.
    Partition(PartitionArgs),
    /// Bound verifiers.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Angle: `p/q`, an integer, or `(p+q*sqrt(d))/r`.
    #[arg(long)]
    pub alpha: String,
    /// Top-level phase value, or a full torus point `depth;t0;…;tK`.
    #[arg(long)]
    pub phase: Option<String>,
    /// Torus depth; defaults to the least depth covering the rectangle.
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, default_value = "floor")]
    pub rounding: String,
    /// Half-open rows and columns `r0:r1:c0:c1`.
    #[arg(long, default_value = "0:1:0:8", allow_hyphen_values = true)]
    pub rect: String,
    /// Draws the phase when --phase is absent.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Number of f̂ pullbacks.
    #[arg(long, default_value_t = 0)]
    pub iterates: u32,
    /// Torus level of the phase axis.
    #[arg(long, default_value_t = 0)]
    pub level: u32,
    #[arg(long, default_value_t = 200)]
    pub width: usize,
    #[arg(long, default_value_t = 200)]
    pub height: usize,
    /// Upper end of the phase axis; defaults to 6^level.
    #[arg(long)]
    pub y_max: Option<String>,
    #[arg(long, default_value = "floor")]
    pub rounding: String,
    #[arg(long, default_value = "symbol")]
    pub color_by: String,
    #[arg(long, default_value = "ppm")]
    pub format: String,
    #[arg(long, default_value_t = 1)]
    pub cell_px: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Check D ≤ 6^m c at an angle in the good-angle window.
    WaitingTime {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Defaults to a certified angle drawn under --seed.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Horizontal recurrence gaps of every m×n configuration along a strip.
    Recurrence {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        phase: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        cols: i64,
        #[arg(long, default_value = "floor")]
        rounding: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Components of 𝒢^{a,b} inside [lo, hi], or membership of one angle.
    Gscan {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "1/3")]
        lo: String,
        #[arg(long, default_value = "2")]
        hi: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Irrationality witnesses for log 2 / log 6.
    IrrScan {
        #[arg(long, default_value_t = 10_000)]
        q_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Bytes to emit and whether the result counts as valid.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub out: Option<PathBuf>,
    pub valid: bool,
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(bytes: impl Into<Vec<u8>>, out: Option<PathBuf>) -> Self {
        Outcome { bytes: bytes.into(), out, valid: true, notes: Vec::new() }
    }
}

pub fn max_cells() -> Result<u128, CliError> {
    match std::env::var("KC_MAX_CELLS") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("KC_MAX_CELLS `{v}` is not a number"))),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

fn parse_angle(s: &str) -> Result<Angle, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("bad angle `{s}`: {e}")))
}

fn parse_rat(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("bad rational `{s}`: {e}")))
}

pub fn parse_rounding(s: &str) -> Result<RoundingMode, CliError> {
    match s {
        "floor" => Ok(RoundingMode::Floor),
        "ceil" | "ceiling" => Ok(RoundingMode::Ceiling),
        _ => Err(CliError::Usage(format!("unknown rounding `{s}` (floor, ceil)"))),
    }
}

pub fn parse_rect(s: &str) -> Result<Rect, CliError> {
    let parts: Vec<i64> = s
        .split(':')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad rectangle `{s}`, expected r0:r1:c0:c1")))?;
    let [r0, r1, c0, c1] = parts[..] else {
        return Err(CliError::Usage(format!("bad rectangle `{s}`, expected r0:r1:c0:c1")));
    };
    Rect::new(r0, r1, c0, c1).map_err(|e| CliError::Usage(e.to_string()))
}

fn construction(e: impl std::fmt::Display) -> CliError {
    CliError::Construction(e.to_string())
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// A random phase `p/q + N` with `q ≤ 1000` and `N < 6^depth`.
fn seeded_phase(rng: &mut ChaCha8Rng, depth: u32) -> Angle {
    let q = rng.gen_range(1..=1000i64);
    let mut n = BigInt::zero();
    for _ in 0..depth {
        n = n * 6 + rng.gen_range(0..6u32);
    }
    Angle::ratio(rng.gen_range(0..q), q).add_rational(&Rational::from_integer(n))
}

fn skew_state(alpha: &Angle, phase: Option<&str>, depth: Option<u32>, needed: u32, seed: Option<u64>) -> Result<SkewState, CliError> {
    let point = match phase {
        Some(p) if p.contains(';') => {
            let pt: TorusPoint = p.parse().map_err(|e| CliError::Usage(format!("bad phase `{p}`: {e}")))?;
            match depth {
                Some(d) if d < pt.depth() => pt.truncate(d),
                Some(d) => pt.lift(d),
                None => pt,
            }
        }
        Some(p) => TorusPoint::from_top(depth.unwrap_or(needed), parse_angle(p)?),
        None => {
            let d = depth.unwrap_or(needed);
            let top = match seed {
                Some(seed) => seeded_phase(&mut ChaCha8Rng::seed_from_u64(seed), d),
                None => Angle::zero(),
            };
            TorusPoint::from_top(d, top)
        }
    };
    SkewState::new(alpha.clone(), point).map_err(construction)
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<Outcome, CliError> {
    let alpha = parse_angle(&a.alpha)?;
    let mode = parse_rounding(&a.rounding)?;
    let rect = parse_rect(&a.rect)?;
    let budget = max_cells()?;
    if rect.cells() > budget {
        return Err(CliError::Resource(format!("{} cells exceed the budget {budget}", rect.cells())));
    }
    let needed = required_depth(&alpha, rect.row_lo - 1, rect.row_hi, Branch::default()).map_err(construction)?;
    let s = skew_state(&alpha, a.phase.as_deref(), a.depth, needed, a.seed)?;
    let c = k_map(&s, mode, rect, Branch::default()).map_err(construction)?;
    let report = validate_window(&c.window);
    let mut notes: Vec<String> = c.flags.iter().map(|f| f.to_string()).collect();
    notes.extend(report.violations.iter().map(|v| v.to_string()));
    Ok(Outcome { bytes: c.window.to_text().into_bytes(), out: a.out.clone(), valid: report.is_valid(), notes })
}

/// The text report for a window: validation, row types and straddle scan.
pub fn verify_report(w: &Window) -> (String, bool) {
    let mut s = String::new();
    let report = validate_window(w);
    let _ = writeln!(s, "size={}x{} origin={},{}", w.width, w.height, w.origin_row, w.origin_col);
    let _ = writeln!(s, "violations={}", report.violations.len());
    for v in &report.violations {
        let _ = writeln!(s, "  {v}");
    }
    let _ = writeln!(s, "unknown_ids={}", report.unknown_ids.len());
    for (r, c) in &report.unknown_ids {
        let _ = writeln!(s, "  unknown tile at row {r} col {c}");
    }
    let mut straddles = 0;
    if report.unknown_ids.is_empty() {
        let (tops, bottoms) = (project_top(w), project_bottom(w));
        for (k, row) in w.rows().enumerate() {
            let ty = classify_row(w, row).map_or("undetermined".to_string(), |t| t.to_string());
            let hit = detect_misaligned_straddle(&tops[k], &bottoms[k]).ok().flatten();
            straddles += usize::from(hit.is_some());
            let at = hit.map_or(String::new(), |i| format!(" misaligned_straddle_at={i}"));
            let _ = writeln!(s, "row={row} type={ty}{at}");
        }
    }
    let _ = writeln!(s, "misaligned_straddles={straddles}");
    let valid = report.is_valid() && straddles == 0;
    let _ = writeln!(s, "valid={valid}");
    (s, valid)
}

pub fn cmd_verify(path: &PathBuf) -> Result<Outcome, CliError> {
    let w = Window::parse(&read(path)?).map_err(|e| CliError::Parse(e.to_string()))?;
    let (text, valid) = verify_report(&w);
    Ok(Outcome { bytes: text.into_bytes(), out: None, valid, notes: Vec::new() })
}

/// A certified angle of the `(m, n)` good-angle window, chosen by `seed`.
pub fn certified_angle(m: u32, n: u32, seed: u64) -> Result<Angle, CliError> {
    let w = good_angle_window(m, n).map_err(|e| CliError::Resource(e.to_string()))?;
    let certs: Vec<_> = w.certificates.iter().filter(|c| c.in_range).collect();
    if certs.is_empty() {
        return Err(CliError::Construction("no certified interval inside [1/3, 2]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = certs[rng.gen_range(0..certs.len())];
    const RADICANDS: [u64; 4] = [2, 3, 5, 7];
    surd_in_interval(&c.lo, &c.hi, RADICANDS[rng.gen_range(0..RADICANDS.len())]).map_err(construction)
}

fn bounds_error(e: kc_core::bounds::BoundsError) -> CliError {
    use kc_core::bounds::BoundsError::*;
    match e {
        Resource(m) => CliError::Resource(m),
        Precondition(m) => CliError::Invalid(format!("precondition failed: {m}")),
        InvalidInput(m) => CliError::Usage(m),
        other => CliError::Construction(other.to_string()),
    }
}

pub fn cmd_bounds(c: &BoundsCommand) -> Result<Outcome, CliError> {
    match c {
        BoundsCommand::WaitingTime { m, n, alpha, seed, out } => {
            let (m, n) = (*m, *n);
            let alpha = match alpha {
                Some(a) => parse_angle(a)?,
                None => certified_angle(m, n, *seed)?,
            };
            let (a, b, c, d) = window_parameters(m, n);
            let rep = verify_waiting_time(&alpha, m, n, &Rational::from_integer(b.into()), &Rational::from_integer(d.clone()))
                .map_err(bounds_error)?;
            let text = format!("m={m}\nn={n}\nalpha={alpha}\na={a}\nb={b}\nc={c}\nd={d}\n{}", rep.to_kv());
            Ok(Outcome { bytes: text.into_bytes(), out: out.clone(), valid: rep.holds, notes: Vec::new() })
        }
        BoundsCommand::Recurrence { m, n, alpha, phase, cols, rounding, seed, out } => {
            let (m, n) = (*m, *n);
            let mode = parse_rounding(rounding)?;
            let alpha = match alpha {
                Some(a) => parse_angle(a)?,
                None => certified_angle(m, n, *seed)?,
            };
            let rows = m as i64;
            let needed = required_depth(&alpha, -1, rows, Branch::default()).map_err(construction)?;
            let s = skew_state(&alpha, phase.as_deref(), None, needed, Some(*seed))?;
            let probe_cols = (*cols).min(2_000);
            let probe = k_map(&s, mode, Rect::new(0, rows, 0, probe_cols).map_err(|e| CliError::Usage(e.to_string()))?, Branch::default())
                .map_err(construction)?
                .window;
            let mut configs = Vec::new();
            for c0 in 0..=probe_cols - n as i64 {
                let w = probe.sub_window(0, rows, c0, c0 + n as i64).expect("inside the probe");
                let w = Window::new(w.width, w.height, 0, 0, w.grid);
                if !configs.contains(&w) {
                    configs.push(w);
                }
            }
            let reps = empirical_recurrence_many(&configs, &s, mode, Branch::default(), rows, *cols, max_cells()?).map_err(bounds_error)?;
            let mut text = format!("alpha={alpha}\nphase={}\nconfigs={}\n", s.phase, configs.len());
            let mut holds = true;
            for (cfg, rep) in configs.iter().zip(&reps) {
                let ids: Vec<String> = cfg.grid.iter().map(|i| i.to_string()).collect();
                let _ = write!(text, "\nconfig={}\n{}", ids.join(","), rep.to_kv());
                holds &= rep.holds;
            }
            Ok(Outcome { bytes: text.into_bytes(), out: out.clone(), valid: holds, notes: Vec::new() })
        }
        BoundsCommand::Gscan { a, b, lo, hi, alpha, out } => {
            let b = parse_rat(b)?;
            if b <= Rational::zero() || *a == 0 {
                return Err(CliError::Usage("a and b must be positive".into()));
            }
            let spec = GSpec { a: *a, b: b.clone() };
            if let Some(x) = alpha {
                let x = parse_angle(x)?;
                let g = g_membership(&x, &spec);
                let text = format!("alpha={x}\nmember={}\nwitness={}\ndistance={}\n", g.member, g.witness, g.distance);
                return Ok(Outcome { bytes: text.into_bytes(), out: out.clone(), valid: true, notes: Vec::new() });
            }
            let (lo, hi) = (parse_rat(lo)?, parse_rat(hi)?);
            let r = b.recip();
            let mut text = String::from("lo\thi\n");
            let mut measure = Rational::zero();
            for (x, y) in farey_intervals(*a, &lo, &hi).map_err(bounds_error)? {
                let cl = (&x + &r).max(lo.clone());
                let ch = (&y - &r).min(hi.clone());
                if cl < ch {
                    let _ = writeln!(text, "{cl}\t{ch}");
                    measure += &ch - &cl;
                }
            }
            let _ = writeln!(text, "measure={measure}");
            Ok(Outcome::ok(text, out.clone()))
        }
        BoundsCommand::IrrScan { q_max, out } => {
            let scan = irrationality_witness_scan(*q_max).map_err(bounds_error)?;
            Ok(Outcome { bytes: scan.to_table().into_bytes(), out: out.clone(), valid: scan.all_hold, notes: Vec::new() })
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Tileset { derive, out } => {
            if !*derive {
                return Ok(Outcome::ok(TileSet::canonical().to_text(), out.clone()));
            }
            let (set, draws) = derive_tileset_with_draws().map_err(construction)?;
            let valid = set == *TileSet::canonical();
            let notes = vec![format!("draws={draws} tiles={} matches_table={valid}", set.len())];
            Ok(Outcome { bytes: set.to_text().into_bytes(), out: out.clone(), valid, notes })
        }
        Command::Generate(a) => cmd_generate(a),
        Command::Verify { path } => cmd_verify(path),
        Command::Render { path, format, cell_px, color_by, out } => {
            let o = RenderOptions::new(format.parse::<Format>()?, *cell_px, color_by.parse::<ColorBy>()?)?;
            let w = Window::parse(&read(path)?).map_err(|e| CliError::Parse(e.to_string()))?;
            Ok(Outcome::ok(render::render_window(&w, &o), out.clone()))
        }
        Command::Partition(p) => {
            let six = Rational::from_integer(BigInt::from(6).pow(p.level.min(render::MAX_PARTITION_LEVEL + 1)));
            let spec = PartitionSpec {
                m: p.m,
                n: p.n,
                iterates: p.iterates,
                level: p.level,
                width: p.width,
                height: p.height,
                y_max: p.y_max.as_deref().map(parse_rat).transpose()?.unwrap_or(six),
                rounding: parse_rounding(&p.rounding)?,
                coloring: p.color_by.parse::<PartitionColoring>()?,
            };
            let format = p.format.parse::<Format>()?;
            RenderOptions::new(format, p.cell_px, ColorBy::TileId)?;
            Ok(Outcome::ok(render::render_partition(&spec, format, p.cell_px, max_cells()?)?, p.out.clone()))
        }
        Command::Bounds { command } => cmd_bounds(command),
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    for n in &outcome.notes {
        let _ = writeln!(stderr, "{n}");
    }
    let written = match &outcome.out {
        Some(p) => std::fs::write(p, &outcome.bytes).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => stdout.write_all(&outcome.bytes).map_err(|source| CliError::Io { path: "stdout".into(), source }),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    i32::from(!outcome.valid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_parsing() {
        let r = parse_rect("-2:3:0:8").unwrap();
        assert_eq!((r.row_lo, r.row_hi, r.col_lo, r.col_hi), (-2, 3, 0, 8));
        assert!(parse_rect("0:0:0:1").is_err());
        assert!(parse_rect("1:2:3").is_err());
        assert!(parse_rect("a:b:c:d").is_err());
    }

    #[test]
    fn rounding_names() {
        assert_eq!(parse_rounding("ceil").unwrap(), RoundingMode::Ceiling);
        assert_eq!(parse_rounding("floor").unwrap(), RoundingMode::Floor);
        assert_eq!(parse_rounding("round").unwrap_err().exit_code(), 4);
    }

    #[test]
    fn seeded_phase_is_deterministic() {
        let a = seeded_phase(&mut ChaCha8Rng::seed_from_u64(7), 2);
        let b = seeded_phase(&mut ChaCha8Rng::seed_from_u64(7), 2);
        assert_eq!(a, b);
        assert!(a.cmp_rational(&Rational::from_integer(36.into())).is_lt());
    }

    #[test]
    fn explicit_phase_depth_is_respected() {
        let alpha: Angle = "3/2".parse().unwrap();
        let s = skew_state(&alpha, Some("1/2"), Some(4), 1, None).unwrap();
        assert_eq!(s.phase.depth(), 4);
        let s = skew_state(&alpha, Some("2;1/2;7/2;43/2"), None, 0, None).unwrap();
        assert_eq!(s.phase.depth(), 2);
    }
}
