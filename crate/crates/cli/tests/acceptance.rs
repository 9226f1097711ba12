//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::Instant;

use common::{column, solnoon, table, text_column, FIXED_RUNS};
use solnoon_core::verify::{run_criterion, VerifyConfig};

const ALPHA: f64 = 0.21;

type Verdict = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Verdict);

/// Library checks for one criterion, summarised as the worst deviation ratio.
fn library(criterion: u8) -> Verdict {
    let outcomes = run_criterion(criterion, &VerifyConfig::default()).map_err(|e| e.to_string())?;
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| {
            format!(
                "{} deviation {:.3e} > {:.1e}",
                o.name, o.deviation, o.threshold
            )
        })
        .collect();
    if !failed.is_empty() {
        return Err(failed.join("; "));
    }
    let detail: Vec<String> = outcomes
        .iter()
        .map(|o| format!("{} {:.2e}", o.name, o.deviation))
        .collect();
    Ok(detail.join(", "))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The emitted √N·σ_φ table equals 1/(√N|p0|), SQL rows sit at 1, and the cat
/// state beats the SQL exactly when N > 1/p0².
fn fig3_table() -> Verdict {
    let (n_max, p0_list) = (100.0, [0.1, 0.25, 0.5, 1.0]);
    let t = table(&[
        "sensitivity",
        "--state",
        "scs",
        "--N-max",
        "100",
        "--p0",
        "0.1,0.25,0.5,1",
    ])?;
    let series = text_column(&t, "series");
    let n = column(&t, "N");
    let p0 = column(&t, "p0");
    let scaled = column(&t, "sqrtN_sigma_phi");
    let mut worst: f64 = 0.0;
    let mut crossings = 0;
    let mut previous_beat: std::collections::HashMap<u64, bool> = Default::default();
    for i in 0..t.rows.len() {
        let n = n[i].ok_or("missing N")?;
        let value = scaled[i].ok_or("missing sqrtN_sigma_phi")?;
        if series[i] == "sql" {
            worst = worst.max((value - 1.0).abs());
            continue;
        }
        let p = p0[i].ok_or("missing p0")?;
        let expected = 1.0 / (n.sqrt() * p);
        worst = worst.max((value - expected).abs() / expected);
        let margin = n * p * p - 1.0;
        if margin.abs() > 1e-9 {
            let beats = value < 1.0;
            ensure(beats == (margin > 0.0), || {
                format!("N={n} p0={p}: beats SQL = {beats}")
            })?;
            let before = previous_beat.insert(p.to_bits(), beats);
            ensure(before != Some(true) || beats, || {
                format!("p0={p}: crossing not monotone at N={n}")
            })?;
            crossings += usize::from(before == Some(false) && beats);
        }
    }
    ensure(worst <= 1e-14, || format!("table deviation {worst:.3e}"))?;
    // A crossing lies inside the sweep when 1 < 1/p0² < N_max.
    let expected = p0_list
        .iter()
        .filter(|&&p| p * p < 1.0 - 1e-9 && n_max * p * p > 1.0 + 1e-9)
        .count();
    ensure(crossings == expected, || {
        format!("{crossings} SQL crossings, expected {expected}")
    })?;
    Ok(format!("cli table {worst:.2e}, {crossings} crossings"))
}

/// σ_Θ decreases strictly to 0 at Θ_max, is NA beyond, and N ≥ 2 beats N = 1.
fn fig4_table() -> Verdict {
    let t = table(&["theta-sweep", "--N", "1,2,3,4", "--theta-grid", "0:1.6:321"])?;
    let n = column(&t, "N");
    let theta = column(&t, "theta");
    let sigma = column(&t, "sigma_theta");
    let beats = column(&t, "beats_single_particle");
    for target in [1.0, 2.0, 3.0, 4.0] {
        let rows: Vec<usize> = (0..t.rows.len())
            .filter(|&i| n[i] == Some(target))
            .collect();
        let edge = 2.0 * (1.0 - ALPHA) / (target * target);
        let inside: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&i| theta[i].unwrap() <= edge * (1.0 + 1e-12))
            .collect();
        for &i in &rows {
            ensure(sigma[i].is_some() == inside.contains(&i), || {
                format!("N={target}: NA misplaced at Θ={:?}", theta[i])
            })?;
        }
        let values: Vec<f64> = inside.iter().map(|&i| sigma[i].unwrap()).collect();
        ensure(values.windows(2).all(|w| w[1] < w[0]), || {
            format!("N={target}: not strictly decreasing")
        })?;
        ensure((values[0] - edge / target).abs() <= 1e-15, || {
            format!("N={target}: σ_Θ(0) = {}", values[0])
        })?;
        let last = *inside.last().unwrap();
        if (theta[last].unwrap() - edge).abs() <= 1e-12 * edge {
            ensure(values[values.len() - 1] == 0.0, || {
                format!("N={target}: σ_Θ(Θ_max) ≠ 0")
            })?;
        }
        if target >= 2.0 {
            ensure(inside.iter().all(|&i| beats[i] == Some(1.0)), || {
                format!("N={target}: does not beat N = 1")
            })?;
        }
    }
    Ok("cli table shape".to_string())
}

/// Every command, run twice with the same configuration, emits identical bytes.
fn determinism() -> Verdict {
    let mut runs = 0;
    for args in FIXED_RUNS {
        for format in ["csv", "json"] {
            let full = [*args, &["--format", format]].concat();
            let first = solnoon(&full);
            let second = solnoon(&full);
            ensure(first.status.code() == Some(0), || {
                format!("{full:?} exited with {:?}", first.status.code())
            })?;
            ensure(
                first.stdout == second.stdout && first.stderr == second.stderr,
                || format!("{full:?} differs between runs"),
            )?;
            runs += 1;
        }
    }
    let threaded = [FIXED_RUNS[4], &["--threads", "3"]].concat();
    ensure(
        solnoon(&threaded).stdout == solnoon(FIXED_RUNS[4]).stdout,
        || "thread count changes output".to_string(),
    )?;
    Ok(format!("{runs} command pairs identical"))
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    Ok(format!("{}; {}", a?, b?))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "overlap-integral fit", || library(1)),
        (2, "stationary fixed points", || library(2)),
        (3, "energy conservation", || library(3)),
        (4, "oracle vs closed-form parity", || library(4)),
        (5, "SU(2) algebra and swap identity", || library(5)),
        (6, "Heisenberg limit", || library(6)),
        (7, "phase-sensitivity table", || {
            combine(library(7), fig3_table())
        }),
        (8, "super-Heisenberg scaling", || library(8)),
        (9, "Θ-sensitivity shape", || {
            combine(library(9), fig4_table())
        }),
        (10, "determinism", determinism),
    ];
    let mut failures = 0;
    for (k, name, check) in criteria {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {k:>2} {name} ({secs:.1} s): {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {k:>2} {name} ({secs:.1} s): {why}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
