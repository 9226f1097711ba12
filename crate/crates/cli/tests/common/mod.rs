#![allow(dead_code)]

use std::process::{Command, Output};

use solnoon_cli::table::{Format, Table};

pub fn solnoon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solnoon"))
        .args(args)
        .output()
        .expect("spawn solnoon")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

/// Runs a table-emitting command and parses its CSV output.
pub fn table(args: &[&str]) -> Result<Table, String> {
    let out = solnoon(args);
    if out.status.code() != Some(0) {
        return Err(format!(
            "{args:?} exited with {:?}: {}",
            out.status.code(),
            stderr(&out)
        ));
    }
    Table::parse(&stdout(&out), Format::Csv).map_err(|e| e.to_string())
}

pub fn column(t: &Table, name: &str) -> Vec<Option<f64>> {
    t.numbers(name)
        .unwrap_or_else(|| panic!("column {name} missing"))
}

pub fn text_column(t: &Table, name: &str) -> Vec<String> {
    let k = t
        .column(name)
        .unwrap_or_else(|| panic!("column {name} missing"));
    t.rows
        .iter()
        .map(|r| r[k].as_text().unwrap_or_default().to_string())
        .collect()
}

/// Every subcommand with a fixed configuration, small enough for a debug build.
pub const FIXED_RUNS: &[&[&str]] = &[
    &[
        "dynamics", "--lambda", "2.0", "--p0", "0.6", "--theta0", "0", "--t-end", "100",
    ],
    &[
        "dynamics",
        "--u",
        "1.2",
        "--kappa",
        "0.5",
        "--particles",
        "3",
        "--mass",
        "-1",
        "--p0",
        "-0.3",
        "--t-end",
        "20",
    ],
    &["stationary"],
    &["catsize", "--N", "100,1000,10000", "--p0-grid", "0:1:101"],
    &[
        "catsize",
        "--N",
        "10",
        "--p0-grid",
        "0:1:11",
        "--overlap",
        "exact",
    ],
    &[
        "mzi-sweep",
        "--state",
        "scs",
        "--N",
        "8",
        "--p0",
        "0.5",
        "--phi-grid",
        "-1:1:21",
        "--oracle",
    ],
    &[
        "mzi-sweep",
        "--state",
        "noon",
        "--N",
        "5",
        "--lambda",
        "1.2",
        "--oracle",
    ],
    &["sensitivity", "--state", "noon", "--N-max", "100"],
    &["sensitivity", "--state", "scs", "--N-max", "100"],
    &["theta-sweep", "--N", "1,2,3,4"],
    &["verify", "--N-max", "12"],
];
