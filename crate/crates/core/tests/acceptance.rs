//! Acceptance suite: one test per criterion, each printing a pass/fail line with timing.
//!
//! Run with `cargo test -p kc-core --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use common::{rat, up_down_counts, Gen};
use kc_core::bounds::{
    coarseness, cut_set_x, empirical_recurrence_many, f_orbit_density, g_membership, good_angle_window,
    irrationality_witness_scan, orbit_gap_extremes, orbit_gaps, surd_in_interval, verify_waiting_time, DensityTime, GSpec,
    GoodAngleWindow,
};
use kc_core::construction::{
    expand_parameters, k_map, recover_parameters, required_depth, Rect,
};
use kc_core::numerics::{Angle, Rational};
use kc_core::sturmian::{misaligned_straddles, RoundingMode, Word};
use kc_core::tiles::{
    check_multiplier, classify_row, derive_tileset_with_draws, enumerate_row_fillings, enumerate_stacked_fillings,
    project_bottom, project_top, validate_window, RowType, TileSet, Window,
};
use kc_core::torus::{fhat, that, Branch, SkewState, TorusPoint};
use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rayon::prelude::*;

const CELL_BUDGET: u128 = 100_000_000;

static SERIAL: Mutex<()> = Mutex::new(());

/// Criteria hold a shared lock so each one is timed alone, even under the parallel runner.
fn begin() -> (MutexGuard<'static, ()>, Instant) {
    let guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    (guard, Instant::now())
}

fn report(n: u32, name: &str, start: Instant, limit: Duration, ok: bool, detail: String) {
    let elapsed = start.elapsed();
    let pass = ok && elapsed <= limit;
    println!(
        "criterion {n:>2} {name}: {} in {:.2}s (limit {}s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(elapsed <= limit, "criterion {n} exceeded its time limit");
}

fn mode_of(bit: bool) -> RoundingMode {
    if bit {
        RoundingMode::Ceiling
    } else {
        RoundingMode::Floor
    }
}

#[test]
fn criterion_01_tile_set_cardinality() {
    let (_serial, start) = begin();
    let (set, draws) = derive_tileset_with_draws().unwrap();
    let ok = set.len() == 13 && draws >= 1000 && set.tiles().iter().all(check_multiplier) && set == *TileSet::canonical();
    report(1, "tile-set cardinality", start, Duration::from_secs(10), ok, format!("tiles={} draws={draws}", set.len()));
}

#[test]
fn criterion_02_robinson_validity() {
    let (_serial, start) = begin();
    let failures: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut g = Gen::new(0x5eed_0002 ^ i);
            let alpha = if i % 2 == 0 { g.rational_angle(1000) } else { g.surd_angle() };
            let h = g.rng.gen_range(1..=64);
            let w = g.rng.gen_range(1..=64);
            let r0 = g.rng.gen_range(-8..=8);
            let c0 = g.rng.gen_range(-500..=500);
            let mode = mode_of(i % 4 >= 2);
            let s = g.skew_for_rows(&alpha, r0, r0 + h, 0);
            let rect = Rect::new(r0, r0 + h, c0, c0 + w).unwrap();
            match k_map(&s, mode, rect, Branch::default()) {
                Ok(c) if validate_window(&c.window).is_valid() => None,
                Ok(_) => Some(format!("invalid window for alpha={alpha}")),
                Err(e) => Some(format!("alpha={alpha}: {e}")),
            }
        })
        .collect();
    let detail = format!("windows=10000 failures={}", failures.len());
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    report(2, "Robinson validity", start, Duration::from_secs(120), failures.is_empty(), detail);
}

fn shifted(r: &Rect, dr: i64, dc: i64) -> Rect {
    Rect::new(r.row_lo + dr, r.row_hi + dr, r.col_lo + dc, r.col_hi + dc).unwrap()
}

#[test]
fn criterion_03_skew_product_conjugacy() {
    let (_serial, start) = begin();
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut g = Gen::new(0x5eed_0003 ^ i);
            let alpha = g.angle();
            let (r0, h) = (g.rng.gen_range(-6..=6), g.rng.gen_range(1..=12));
            let (c0, w) = (g.rng.gen_range(-200..=200), g.rng.gen_range(1..=32));
            let rect = Rect::new(r0, r0 + h, c0, c0 + w).unwrap();
            let depth = required_depth(&alpha, r0 - 3, r0 + h + 3, Branch::default()).unwrap() + 2;
            let s = g.skew(&alpha, depth);
            let mode = mode_of(i % 2 == 1);
            let km = |st: &SkewState, r: Rect| k_map(st, mode, r, Branch::default()).map(|c| c.window.grid);
            let check = || -> Result<Option<String>, String> {
                let e = |x: kc_core::construction::ConstructionError| x.to_string();
                let t = that(&s).map_err(|x| x.to_string())?;
                let f = fhat(&s, Branch::default()).map_err(|x| x.to_string())?;
                if km(&t, rect).map_err(e)? != km(&s, shifted(&rect, 0, 1)).map_err(e)? {
                    return Ok(Some(format!("horizontal identity fails for alpha={alpha}")));
                }
                if km(&f, rect).map_err(e)? != km(&s, shifted(&rect, 1, 0)).map_err(e)? {
                    return Ok(Some(format!("vertical identity fails for alpha={alpha}")));
                }
                let ft = fhat(&t, Branch::default()).map_err(|x| x.to_string())?;
                let tf = that(&f).map_err(|x| x.to_string())?;
                if ft != tf || km(&ft, rect).map_err(e)? != km(&s, shifted(&rect, 1, 1)).map_err(e)? {
                    return Ok(Some(format!("shifts do not commute for alpha={alpha}")));
                }
                Ok(None)
            };
            match check() {
                Ok(r) => r,
                Err(e) => Some(e),
            }
        })
        .collect();
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    report(3, "skew-product conjugacy", start, Duration::from_secs(60), failures.is_empty(), format!("rects=1000 failures={}", failures.len()));
}

#[test]
fn criterion_04_w_round_trip() {
    let (_serial, start) = begin();
    let mut g = Gen::new(0x5eed_0004);
    let mut checked = 0;
    let mut failures = Vec::new();
    while checked < 1000 {
        let alpha = g.angle();
        let (up, down) = up_down_counts(&alpha, -8, 8);
        let depth = up.max(down);
        // Phase data of depth at most 3, reduced to the least representative: the rows
        // determine the top level only modulo 2^down·3^up.
        let info = g.rng.gen_range(0..=3u32);
        let modulus = BigInt::from(2).pow(down) * BigInt::from(3).pow(up);
        let n = g.integer_below_six_pow(info) % &modulus;
        let top = g.unit_phase(&alpha).add_rational(&Rational::from_integer(n));
        let s = SkewState::new(alpha.clone(), TorusPoint::from_top(depth, top)).unwrap();
        let p = expand_parameters(&s, -8, 8, Branch::default()).unwrap();
        match recover_parameters(&p, depth) {
            Ok(r) => {
                if r != s {
                    failures.push(format!("recover(expand(s)) != s for alpha={alpha}"));
                } else if expand_parameters(&r, -8, 8, Branch::default()).unwrap() != p {
                    failures.push(format!("expand(recover(p)) != p for alpha={alpha}"));
                }
            }
            Err(e) => failures.push(format!("alpha={alpha}: {e}")),
        }
        checked += 1;
    }
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    report(4, "W round trip", start, Duration::from_secs(30), failures.is_empty(), format!("vectors={checked} failures={}", failures.len()));
}

/// `min |α − p/(2^m q)|` over `q ≤ n`.
fn spacing_bound(alpha: &Angle, m: u32, n: u32) -> Angle {
    let mut best: Option<Angle> = None;
    for q in 1..=n as i64 {
        let den = (1i64 << m) * q;
        let f = alpha.mul_int(den).floor();
        for p in [f.clone(), f + 1] {
            let d = alpha.add_rational(&-Rational::new(p, BigInt::from(den))).abs();
            if best.as_ref().map_or(true, |b| d < *b) {
                best = Some(d);
            }
        }
    }
    best.unwrap()
}

#[test]
fn criterion_05_x_spacing_and_refinement() {
    let (_serial, start) = begin();
    let mut spacing_checks = 0;
    let mut spacing_failures = Vec::new();
    for q in 1..=50i64 {
        for p in (q + 2) / 3..=2 * q {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let alpha = Angle::ratio(p, q);
            for m in 0..=2 {
                for n in 1..=4 {
                    spacing_checks += 1;
                    if coarseness(&cut_set_x(&alpha, m, n)) < spacing_bound(&alpha, m, n) {
                        spacing_failures.push(format!("alpha={alpha} m={m} n={n}"));
                    }
                }
            }
        }
    }

    // Refinement: windows over rows [0, m) and columns [1, n] are constant on each cell of
    // the level-m lift of the cut set; three samples per cell.
    let mut g = Gen::new(0x5eed_0005);
    let alphas: Vec<Angle> = (0..6).map(|_| g.surd_angle()).chain([Angle::ratio(7, 10), Angle::ratio(13, 11)]).collect();
    let jobs: Vec<(Angle, u32, u32)> = alphas.iter().flat_map(|a| (1..=2).flat_map(move |m| (1..=4).map(move |n| (a.clone(), m, n)))).collect();
    let results: Vec<(usize, Vec<String>)> = jobs
        .par_iter()
        .map(|(alpha, m, n)| {
            let (m, n) = (*m, *n);
            let cuts = cut_set_x(alpha, m, n);
            let depth = required_depth(alpha, -1, m as i64, Branch::default()).unwrap().max(m);
            let rect = Rect::new(0, m as i64, 1, n as i64 + 1).unwrap();
            let pts = &cuts.points;
            let lifts = 6i64.pow(m);
            let mut cells = 0;
            let mut bad = Vec::new();
            for k in 0..pts.len() {
                let lo = pts[k].clone();
                let hi = if k + 1 < pts.len() { pts[k + 1].clone() } else { pts[0].add_rational(&Rational::one()) };
                let gap = &hi - &lo;
                for j in 0..lifts {
                    cells += 1;
                    let windows: Vec<Vec<u8>> = [rat(1, 4), rat(1, 2), rat(3, 4)]
                        .iter()
                        .map(|f| {
                            let top = lo.checked_add(&gap.mul_rational(f)).unwrap().add_rational(&Rational::from_integer(j.into()));
                            let s = SkewState::new(alpha.clone(), TorusPoint::from_top(depth, top)).unwrap();
                            k_map(&s, RoundingMode::Floor, rect, Branch::default()).unwrap().window.grid
                        })
                        .collect();
                    if windows.iter().any(|w| *w != windows[0]) {
                        bad.push(format!("alpha={alpha} m={m} n={n} cell {k} lift {j}"));
                    }
                }
            }
            (cells, bad)
        })
        .collect();
    let cells: usize = results.iter().map(|r| r.0).sum();
    let refinement_failures: Vec<&String> = results.iter().flat_map(|r| &r.1).collect();
    for f in spacing_failures.iter().take(3) {
        println!("  spacing: {f}");
    }
    for f in refinement_failures.iter().take(3) {
        println!("  refinement: {f}");
    }
    let ok = spacing_failures.is_empty() && refinement_failures.is_empty() && cells >= 1000;
    let detail = format!("spacing_checks={spacing_checks} cells={cells} failures={}", spacing_failures.len() + refinement_failures.len());
    report(5, "X spacing and refinement", start, Duration::from_secs(300), ok, detail);
}

#[test]
fn criterion_06_g_density_and_sparsity() {
    let (_serial, start) = begin();
    let mut g = Gen::new(0x5eed_0006);
    let mut certified = 0;
    let mut failures = Vec::new();
    let mut cross_checked = 0;
    while certified < 100 {
        let k = [1i64, 6, 36][certified % 3];
        let a = g.rng.gen_range(1..=3i64);
        let b = 4 * (k * a) * (k * a) * g.rng.gen_range(1..=4i64);
        let alpha = g.angle();
        if !g_membership(&alpha, &GSpec { a: (k * a) as u64, b: rat(b, 1) }).member {
            continue;
        }
        certified += 1;
        let circ = rat(k, 1);
        let (_, max_gap) = orbit_gap_extremes(&alpha, &circ, (k * b) as u64);
        let (min_gap, _) = orbit_gap_extremes(&alpha, &circ, (k * a + 1) as u64);
        if max_gap.cmp_rational(&rat(1, a)).is_ge() {
            failures.push(format!("{alpha}: {}-orbit not 1/{a}-dense mod {k}", k * b));
        }
        if min_gap.cmp_rational(&rat(1, b)).is_le() {
            failures.push(format!("{alpha}: {}-orbit not 1/{b}-sparse mod {k}", k * a + 1));
        }
        if k * b <= 3000 {
            cross_checked += 1;
            let gaps = orbit_gaps(&alpha, &circ, (k * b) as u64);
            if *gaps.last().unwrap() != max_gap {
                failures.push(format!("{alpha}: three-gap maximum disagrees with sorting"));
            }
            let gaps = orbit_gaps(&alpha, &circ, (k * a + 1) as u64);
            if gaps[0] != min_gap {
                failures.push(format!("{alpha}: three-gap minimum disagrees with sorting"));
            }
        }
    }
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    let detail = format!("memberships={certified} sorted_cross_checks={cross_checked} failures={}", failures.len());
    report(6, "G density and sparsity", start, Duration::from_secs(60), failures.is_empty(), detail);
}

/// Angles inside in-range fatness certificates: the rational midpoint and surds.
fn certified_angles(w: &GoodAngleWindow, per_cert: usize) -> Vec<Angle> {
    let mut out = Vec::new();
    for c in w.certificates.iter().filter(|c| c.in_range) {
        out.push(Angle::from_rational(c.midpoint()));
        for d in common::RADICANDS.iter().take(per_cert) {
            out.push(surd_in_interval(&c.lo, &c.hi, *d).unwrap());
        }
    }
    out
}

#[test]
fn criterion_07_waiting_time() {
    let (_serial, start) = begin();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut worst = 0u64;
    for m in 1..=2u32 {
        for n in 1..=2u32 {
            let w = good_angle_window(m, n).unwrap();
            let angles = certified_angles(&w, 3);
            let reports: Vec<_> = angles
                .par_iter()
                .map(|alpha| {
                    let r = verify_waiting_time(alpha, m, n, &w.first.b, &w.second.b);
                    (alpha.clone(), r)
                })
                .collect();
            for (alpha, r) in reports {
                checked += 1;
                match r {
                    Ok(rep) => {
                        if !rep.holds || rep.kappa.cmp_rational(&w.first.b.recip()).is_le() {
                            failures.push(format!("m={m} n={n} alpha={alpha}: {}", rep.to_kv().replace('\n', " ")));
                        }
                        if let DensityTime::Steps(d) = rep.density_time {
                            worst = worst.max(d);
                            // Independent oracle: sort the orbit at level m directly.
                            if d <= 20_000 {
                                let circ = Rational::from_integer(BigInt::from(6).pow(m));
                                let two_kappa = rep.kappa.mul_int(2);
                                let dense = |k: u64| *orbit_gaps(&alpha, &circ, k).last().unwrap() <= two_kappa;
                                if !dense(d) || (d > 1 && dense(d - 1)) {
                                    failures.push(format!("m={m} n={n} alpha={alpha}: density time {d} disagrees with sorting"));
                                }
                            }
                        }
                    }
                    Err(e) => failures.push(format!("m={m} n={n} alpha={alpha}: {e}")),
                }
            }
        }
    }
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    let detail = format!("angles={checked} max_density_time={worst} failures={}", failures.len());
    report(7, "waiting time", start, Duration::from_secs(600), failures.is_empty() && checked > 0, detail);
}

/// All distinct `h × w` sub-windows of `win` over its first `cols` columns.
fn configs_in(win: &Window, h: usize, w: usize, cols: usize) -> Vec<Window> {
    let mut seen = BTreeSet::new();
    for r in 0..=win.height - h {
        for c in 0..=cols.min(win.width) - w {
            let grid: Vec<u8> = (0..h).flat_map(|i| win.grid[(r + i) * win.width + c..(r + i) * win.width + c + w].to_vec()).collect();
            seen.insert(grid);
        }
    }
    seen.into_iter().map(|g| Window::new(w, h, 0, 0, g)).collect()
}

#[test]
fn criterion_08_recurrence_at_scale() {
    let (_serial, start) = begin();
    let mut failures = Vec::new();
    let mut g = Gen::new(0x5eed_0008);

    // (i) horizontal recurrence along 10^6-column strips at certified angles.
    let mut strips = 0;
    let mut configs_checked = 0;
    let mut max_gap_seen = 0i64;
    for size in [1usize, 2] {
        let w = good_angle_window(size as u32, size as u32).unwrap();
        let angles: Vec<Angle> = w
            .certificates
            .iter()
            .filter(|c| c.in_range)
            .map(|c| surd_in_interval(&c.lo, &c.hi, common::RADICANDS[g.rng.gen_range(0..4)]).unwrap())
            .collect();
        let states: Vec<SkewState> = angles.iter().map(|a| g.skew_for_rows(a, 0, size as i64, 1)).collect();
        let results: Vec<Result<(usize, i64, Vec<String>), String>> = states
            .par_iter()
            .map(|s| {
                let probe = k_map(s, RoundingMode::Floor, Rect::new(0, size as i64, 0, 20_000).unwrap(), Branch::default()).map_err(|e| e.to_string())?;
                let configs = configs_in(&probe.window, size, size, 20_000);
                let reps = empirical_recurrence_many(&configs, s, RoundingMode::Floor, Branch::default(), size as i64, 1_000_000, CELL_BUDGET)
                    .map_err(|e| e.to_string())?;
                let mut bad = Vec::new();
                let mut worst = 0;
                for rep in &reps {
                    let row0 = &rep.rows[0];
                    if !row0.certified {
                        bad.push(format!("row 0 at alpha={} not certified", s.angle));
                    }
                    worst = worst.max(row0.max_gap.unwrap_or(0));
                    if !rep.holds {
                        bad.push(format!("gap above bound at alpha={}", s.angle));
                    }
                }
                Ok((reps.len(), worst, bad))
            })
            .collect();
        for r in results {
            match r {
                Ok((n, worst, bad)) => {
                    strips += 1;
                    configs_checked += n;
                    max_gap_seen = max_gap_seen.max(worst);
                    failures.extend(bad);
                }
                Err(e) => failures.push(e),
            }
        }
    }

    // (ii) f-orbit ℓ-density within k_ℓ steps, simulated directly.
    let mut orbit_steps = Vec::new();
    for ell in [0.2, 0.1] {
        for alpha in [Angle::ratio(5, 7), g.surd_angle(), g.surd_angle()] {
            let d = f_orbit_density(&alpha, ell, 10_000_000).unwrap();
            orbit_steps.push(d.steps.unwrap_or(0));
            if !d.holds {
                failures.push(format!("f-orbit of {alpha} not {ell}-dense within k_l={}", d.bound));
            }
        }
    }

    // (iii) irrationality measure of log 2/log 6 up to q = 10^4.
    let scan = irrationality_witness_scan(10_000).unwrap();
    if !scan.all_hold {
        failures.push("irrationality inequality fails".into());
    }
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    let detail = format!(
        "strips={strips} configs={configs_checked} max_gap={max_gap_seen} orbit_steps={orbit_steps:?} min_irr_ratio={:.3e}@q={} failures={}",
        scan.min_ratio.ratio,
        scan.min_ratio.q,
        failures.len()
    );
    report(8, "recurrence at scale", start, Duration::from_secs(900), failures.is_empty() && strips > 0, detail);
}

#[test]
fn criterion_09_minimality_evidence() {
    let (_serial, start) = begin();
    let w = good_angle_window(2, 2).unwrap();
    let certs: Vec<_> = w.certificates.iter().filter(|c| c.in_range).cloned().collect();
    let mut g = Gen::new(0x5eed_0009);
    let states: Vec<SkewState> = (0..10)
        .map(|_| {
            let c = &certs[g.rng.gen_range(0..certs.len())];
            let d = common::RADICANDS[g.rng.gen_range(0..common::RADICANDS.len())];
            let alpha = surd_in_interval(&c.lo, &c.hi, d).unwrap();
            g.skew_for_rows(&alpha, -500, 500, 0)
        })
        .collect();
    let sets: Vec<(HashSet<u8>, HashSet<[u8; 4]>)> = states
        .par_iter()
        .map(|s| {
            let win = k_map(s, RoundingMode::Floor, Rect::new(-500, 500, -500, 500).unwrap(), Branch::default()).unwrap().window;
            let ones: HashSet<u8> = win.grid.iter().copied().collect();
            let mut twos = HashSet::new();
            for r in 0..win.height - 1 {
                for c in 0..win.width - 1 {
                    let at = |i: usize, j: usize| win.grid[(r + i) * win.width + c + j];
                    twos.insert([at(0, 0), at(0, 1), at(1, 0), at(1, 1)]);
                }
            }
            (ones, twos)
        })
        .collect();
    let all_ones: HashSet<u8> = sets.iter().flat_map(|s| s.0.iter().copied()).collect();
    let all_twos: HashSet<[u8; 4]> = sets.iter().flat_map(|s| s.1.iter().copied()).collect();
    let missing: usize = sets.iter().map(|(o, t)| (all_ones.len() - o.len()) + (all_twos.len() - t.len())).sum();
    let detail = format!("windows=10 size=1000x1000 tiles={} two_by_two={} missing={missing}", all_ones.len(), all_twos.len());
    report(9, "minimality evidence", start, Duration::from_secs(300), missing == 0, detail);
}

/// Random windows with their row types; rows at the window edges may lack context.
fn sample_windows(seed: u64, count: u64, rows: i64, cols: i64) -> Vec<Window> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut g = Gen::new(seed ^ i);
            let alpha = g.angle();
            let r0 = g.rng.gen_range(-10..=10);
            let s = g.skew_for_rows(&alpha, r0, r0 + rows, 0);
            let rect = Rect::new(r0, r0 + rows, 0, cols).unwrap();
            k_map(&s, mode_of(i % 2 == 1), rect, Branch::default()).unwrap().window
        })
        .collect()
}

#[test]
fn criterion_10_straddle_exclusion() {
    let (_serial, start) = begin();
    // Rows carry MARGIN extra columns on each side so every counted candidate has real
    // context for the transposition test.
    const MARGIN: i64 = 8;
    const COLS: i64 = 64 + 2 * MARGIN;
    let windows = sample_windows(0x5eed_0010, 250, 40, COLS);
    let interior = |k: &i64| *k >= MARGIN && *k + 4 <= COLS - MARGIN;
    let mut rows = 0;
    let mut stacked = 0;
    let mut hits = Vec::new();
    for w in &windows {
        let (tops, bottoms) = (project_top(w), project_bottom(w));
        for r in 0..w.height {
            rows += 1;
            let row = w.origin_row + r as i64;
            for i in misaligned_straddles(&tops[r], &bottoms[r]).unwrap().into_iter().filter(interior) {
                hits.push(format!("row {row} col {i}"));
            }
            if r + 1 < w.height && classify_row(w, row) == Ok(RowType::TwoTwoB) {
                stacked += 1;
                for i in misaligned_straddles(&tops[r + 1], &bottoms[r]).unwrap().into_iter().filter(interior) {
                    hits.push(format!("stacked rows {row}/{} col {i}", row + 1));
                }
            }
        }
    }
    for h in hits.iter().take(5) {
        println!("  {h}");
    }
    let detail = format!("rows={rows} stacked_pairs={stacked} misaligned={}", hits.len());
    report(10, "straddle exclusion", start, Duration::from_secs(60), hits.is_empty() && rows >= 10_000, detail);
}

#[test]
fn criterion_11_phi_multiplicity() {
    let (_serial, start) = begin();
    let word = |s: &str| s.parse::<Word>().unwrap();
    let mut failures = Vec::new();
    for (t, b) in [("211", "100"), ("22222", "10101"), ("22211", "10100")] {
        let n = enumerate_stacked_fillings(&word(t), &word(b)).unwrap().len();
        if n != 2 {
            failures.push(format!("({t},{b}) has {n} stacked fillings, expected 2"));
        }
    }
    let quoted = [
        ("11", "22", RowType::OneThird, 1),
        ("00", "11", RowType::OneThird, 1),
        ("01", "11", RowType::OneThird, 1),
        ("01", "22", RowType::OneThird, 1),
        ("01", "21", RowType::OneThird, 1),
        ("01", "12", RowType::OneThird, 2),
        ("1", "1", RowType::TwoOne, 1),
        ("2", "1", RowType::TwoOne, 2),
    ];
    for (t, b, ty, want) in quoted {
        let n = enumerate_row_fillings(&word(t), &word(b), ty).unwrap().len();
        if n != want {
            failures.push(format!("({t},{b}) in {ty} has {n} fillings, expected {want}"));
        }
    }
    let windows = sample_windows(0x5eed_0011, 150, 16, 48);
    let mut pairs = 0;
    let mut max_seen = 0;
    for w in &windows {
        let (tops, bottoms) = (project_top(w), project_bottom(w));
        for r in 0..w.height {
            let row = w.origin_row + r as i64;
            let n = match classify_row(w, row) {
                Ok(ty @ (RowType::OneThird | RowType::TwoOne)) => enumerate_row_fillings(&tops[r], &bottoms[r], ty).unwrap().len(),
                Ok(RowType::TwoTwoB) if r + 1 < w.height => enumerate_stacked_fillings(&tops[r + 1], &bottoms[r]).unwrap().len(),
                _ => continue,
            };
            pairs += 1;
            max_seen = max_seen.max(n);
            if n == 0 || n > 2 {
                failures.push(format!("row {row}: {n} fillings"));
            }
        }
    }
    for f in failures.iter().take(5) {
        println!("  {f}");
    }
    let detail = format!("generated_pairs={pairs} max_fillings={max_seen} failures={}", failures.len());
    report(11, "Phi multiplicity", start, Duration::from_secs(60), failures.is_empty(), detail);
}
