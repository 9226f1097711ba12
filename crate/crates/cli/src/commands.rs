use std::f64::consts::LN_10;

use rayon::prelude::*;
use solnoon_core::dicke_oracle::{MziOracle, N_MAX};
use solnoon_core::dynamics::{eom_rhs, evolve, VariationalState};
use solnoon_core::interferometry::{
    fig3_data, mean_parity, phase_sensitivity, variance_parity, Fig3Series,
};
use solnoon_core::nonlinear_metrology::{fig4_data, theta_max};
use solnoon_core::numerics::{OdeSettings, QuadratureSettings};
use solnoon_core::states::{overlap_x_with, to_dicke, OverlapMode, SuperpositionSpec};
use solnoon_core::stationary::stationary_points;
use solnoon_core::variational::{lambda_param, MassSign, ModelParams};
use solnoon_core::verify::{run_all, VerifyConfig};
use solnoon_core::ALPHA;

use crate::args::{
    CatsizeArgs, Command, CouplingArgs, DynamicsArgs, GlobalOpts, MziSweepArgs, OverlapChoice,
    SensitivityArgs, StateChoice, StationaryArgs, ThetaSweepArgs, VerifyArgs,
};
use crate::error::CliError;
use crate::table::{Cell, Table};

/// Result of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    /// Human-readable lines for standard output.
    pub report: Vec<String>,
    pub verify_passed: Option<bool>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self {
            table,
            report: Vec::new(),
            verify_passed: None,
        }
    }
}

pub fn run(command: &Command, global: &GlobalOpts) -> Result<Outcome, CliError> {
    match command {
        Command::Dynamics(a) => dynamics(a, global).map(Outcome::from),
        Command::Stationary(a) => stationary(a).map(Outcome::from),
        Command::Catsize(a) => catsize(a, global).map(Outcome::from),
        Command::MziSweep(a) => mzi_sweep(a).map(Outcome::from),
        Command::Sensitivity(a) => sensitivity(a).map(Outcome::from),
        Command::ThetaSweep(a) => theta_sweep(a).map(Outcome::from),
        Command::Verify(a) => verify(a),
    }
}

fn header(command: &str) -> Table {
    let mut t = Table::default();
    t.meta("version", env!("CARGO_PKG_VERSION"))
        .meta("command", command)
        .meta("alpha", ALPHA);
    t
}

fn with_columns(mut t: Table, columns: &[&str]) -> Table {
    t.columns = columns.iter().map(|c| c.to_string()).collect();
    t
}

fn mass_sign(m: i32) -> Result<MassSign, CliError> {
    MassSign::try_from(m).map_err(|_| CliError::Config(format!("mass must be 1 or -1, got {m}")))
}

fn ode_settings(g: &GlobalOpts) -> OdeSettings {
    let d = OdeSettings::default();
    OdeSettings {
        rel_tol: g.rel_tol.unwrap_or(d.rel_tol),
        abs_tol: g.abs_tol.unwrap_or(d.abs_tol),
        ..d
    }
}

fn quad_settings(g: &GlobalOpts) -> QuadratureSettings {
    let d = QuadratureSettings::default();
    QuadratureSettings {
        rel_tol: g.rel_tol.unwrap_or(d.rel_tol),
        abs_tol: g.abs_tol.unwrap_or(d.abs_tol),
        ..d
    }
}

/// Λ from `--lambda` or `(--u, --kappa, --particles)`; `None` if neither.
fn coupling(c: &CouplingArgs, t: &mut Table) -> Result<Option<f64>, CliError> {
    let mass = mass_sign(c.mass)?;
    t.meta("mass", c.mass);
    let lambda = match (c.lambda, c.u, c.kappa, c.particles) {
        (Some(l), ..) => Some(l),
        (None, Some(u), Some(kappa), Some(n)) => {
            t.meta("u", u).meta("kappa", kappa).meta("particles", n);
            Some(lambda_param(&ModelParams::new(n, u, kappa, mass)?)?)
        }
        _ => None,
    };
    if let Some(l) = lambda {
        if !(l.is_finite() && l > 0.0) {
            return Err(CliError::Config(format!("Λ must be positive, got {l}")));
        }
        t.meta("lambda", l);
    }
    Ok(lambda)
}

fn dynamics(a: &DynamicsArgs, g: &GlobalOpts) -> Result<Table, CliError> {
    let mut t = header("dynamics");
    let lambda = coupling(&a.coupling, &mut t)?
        .ok_or_else(|| CliError::Config("give --lambda or --u, --kappa and --particles".into()))?;
    let settings = ode_settings(g);
    let initial = VariationalState::new(a.p0, a.theta0, lambda, mass_sign(a.coupling.mass)?)?;
    let traj = evolve(&initial, a.t_end, &settings)?;
    t.meta("p0", a.p0)
        .meta("theta0", a.theta0)
        .meta("t_end", a.t_end)
        .meta("rel_tol", settings.rel_tol)
        .meta("abs_tol", settings.abs_tol)
        .meta("rel_tol_used", traj.rel_tol_used)
        .meta("energy_drift", format!("{:.16e}", traj.energy_drift));
    let mut t = with_columns(t, &["t_prime", "p", "theta", "energy", "energy_drift"]);
    for (i, s) in traj.samples.iter().enumerate() {
        t.push(vec![
            Cell::Num(s.t_prime),
            Cell::Num(s.state.p),
            Cell::Num(s.state.theta),
            Cell::Num(s.energy),
            Cell::Num(traj.drift_at(i)),
        ]);
    }
    Ok(t)
}

fn stationary(a: &StationaryArgs) -> Result<Table, CliError> {
    let mut t = header("stationary");
    let mass = mass_sign(a.coupling.mass)?;
    let lambdas = match coupling(&a.coupling, &mut t)? {
        Some(l) => vec![l],
        None => {
            t.meta("lambda_grid", a.lambda_grid);
            a.lambda_grid.points()
        }
    };
    let mut t = with_columns(t, &["lambda", "branch", "p0", "theta0", "residual"]);
    for l in lambdas {
        for pt in stationary_points(l, mass) {
            let (dp, dth) = eom_rhs(&VariationalState {
                p: pt.p0,
                theta: pt.theta0,
                lambda: pt.lambda,
                mass,
            });
            t.push(vec![
                Cell::Num(l),
                Cell::Text(pt.branch.label().into()),
                Cell::Num(pt.p0),
                Cell::Num(pt.theta0),
                Cell::Num(dp.abs().max(dth.abs())),
            ]);
        }
    }
    Ok(t)
}

fn catsize(a: &CatsizeArgs, g: &GlobalOpts) -> Result<Table, CliError> {
    if a.n.is_empty() || a.n.contains(&0) {
        return Err(CliError::Config(
            "--N needs positive particle numbers".into(),
        ));
    }
    let (mode, label) = match a.overlap {
        OverlapChoice::Parabolic => (OverlapMode::Parabolic, "parabolic"),
        OverlapChoice::Exact => (OverlapMode::ExactQuadrature, "exact"),
    };
    let q = quad_settings(g);
    let mut t = header("catsize");
    t.meta(
        "N",
        a.n.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
    )
    .meta("p0_grid", a.p0_grid)
    .meta("overlap", label);
    if mode == OverlapMode::ExactQuadrature {
        t.meta("rel_tol", q.rel_tol).meta("abs_tol", q.abs_tol);
    }
    let p0s = a.p0_grid.points();
    let xs: Vec<f64> = p0s
        .par_iter()
        .map(|&p| overlap_x_with(p, mode, &q))
        .collect::<Result<_, _>>()?;
    let mut t = with_columns(t, &["N", "p0", "overlap_x", "log10_cat_size", "cat_size"]);
    for &n in &a.n {
        for (&p, &x) in p0s.iter().zip(&xs) {
            let ln_cat = if x == 0.0 {
                f64::INFINITY
            } else {
                -(n as f64) * x.ln()
            };
            t.push(vec![
                Cell::Int(n.into()),
                Cell::Num(p),
                Cell::Num(x),
                Cell::Num(ln_cat / LN_10),
                Cell::Num(ln_cat.exp()),
            ]);
        }
    }
    Ok(t)
}

fn mzi_sweep(a: &MziSweepArgs) -> Result<Table, CliError> {
    let mut t = header("mzi-sweep");
    let spec = match a.state {
        StateChoice::Scs => {
            t.meta("state", "scs").meta("p0", a.p0);
            SuperpositionSpec::scs(a.n, a.p0)?
        }
        StateChoice::Noon => {
            t.meta("state", "noon");
            let spec = match a.lambda {
                Some(l) => SuperpositionSpec::noon_at_lambda(a.n, l)?,
                None => SuperpositionSpec::noon(a.n, a.theta_n.unwrap_or(0.0))?,
            };
            if let Some(l) = a.lambda {
                t.meta("lambda", l);
            }
            if let solnoon_core::states::StateKind::Noon { theta_n } = spec.kind {
                t.meta("theta_n", theta_n);
            }
            spec
        }
    };
    t.meta("N", a.n)
        .meta("phi_grid", a.phi_grid)
        .meta("oracle", a.oracle);
    let phis = a.phi_grid.points();
    let mut columns = vec!["phi", "mean", "variance"];
    let oracle_rows = if a.oracle {
        if a.n > N_MAX {
            return Err(CliError::Config(format!("--oracle supports N ≤ {N_MAX}")));
        }
        columns.extend(["oracle_mean", "oracle_variance"]);
        let oracle = MziOracle::new(a.n)?;
        let state = to_dicke(&spec)?;
        Some(
            phis.par_iter()
                .map(|&phi| oracle.measure_parity(&state, phi))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };
    let mut t = with_columns(t, &columns);
    for (k, &phi) in phis.iter().enumerate() {
        let mut row = vec![
            Cell::Num(phi),
            Cell::Num(mean_parity(&spec, phi)?),
            Cell::Num(variance_parity(&spec, phi)?),
        ];
        if let Some(r) = &oracle_rows {
            row.extend([Cell::Num(r[k].mean), Cell::Num(r[k].variance)]);
        }
        t.push(row);
    }
    Ok(t)
}

fn sensitivity(a: &SensitivityArgs) -> Result<Table, CliError> {
    if a.n_min == 0 || a.n_min > a.n_max {
        return Err(CliError::Config(format!(
            "need 1 ≤ N-min ≤ N-max, got {}..{}",
            a.n_min, a.n_max
        )));
    }
    let mut t = header("sensitivity");
    t.meta("N_min", a.n_min).meta("N_max", a.n_max);
    match a.state {
        StateChoice::Noon => t.meta("state", "noon"),
        StateChoice::Scs => t.meta("state", "scs").meta(
            "p0",
            a.p0.iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
    };
    let ns: Vec<u32> = (a.n_min..=a.n_max).collect();
    let mut t = with_columns(
        t,
        &[
            "N",
            "series",
            "p0",
            "sigma_phi",
            "sqrtN_sigma_phi",
            "scaling",
        ],
    );
    let sql_row = |n: u32| {
        let rn = (n as f64).sqrt();
        vec![
            Cell::Int(n.into()),
            Cell::Text("sql".into()),
            Cell::Missing,
            Cell::Num(1.0 / rn),
            Cell::Num(1.0),
            Cell::Text("SQL".into()),
        ]
    };
    match a.state {
        StateChoice::Noon => {
            for &n in &ns {
                let s = phase_sensitivity(&SuperpositionSpec::noon(n, 0.0)?)?;
                t.push(vec![
                    Cell::Int(n.into()),
                    Cell::Text("noon".into()),
                    Cell::Missing,
                    Cell::Num(s.sigma_phi),
                    Cell::Num((n as f64).sqrt() * s.sigma_phi),
                    Cell::Text(s.scaling.as_str().into()),
                ]);
                t.push(sql_row(n));
            }
        }
        StateChoice::Scs => {
            for row in fig3_data(&ns, &a.p0)? {
                match row.series {
                    Fig3Series::Sql => t.push(sql_row(row.n)),
                    Fig3Series::Scs { p0_abs } => {
                        let s = phase_sensitivity(&SuperpositionSpec::scs(row.n, p0_abs)?)?;
                        t.push(vec![
                            Cell::Int(row.n.into()),
                            Cell::Text("scs".into()),
                            Cell::Num(p0_abs),
                            Cell::Num(s.sigma_phi),
                            Cell::Num(row.reduced_sigma),
                            Cell::Text(s.scaling.as_str().into()),
                        ]);
                    }
                }
            }
        }
    }
    Ok(t)
}

fn flag(b: Option<bool>) -> Cell {
    b.map_or(Cell::Missing, |b| Cell::Int(b.into()))
}

fn theta_sweep(a: &ThetaSweepArgs) -> Result<Table, CliError> {
    let mut t = header("theta-sweep");
    t.meta(
        "N",
        a.n.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
    )
    .meta("theta_grid", a.theta_grid);
    let rows = fig4_data(&a.n, &a.theta_grid.points())?;
    let mut t = with_columns(
        t,
        &[
            "N",
            "theta",
            "theta_max",
            "sigma_theta",
            "sigma_theta_linear",
            "at_boundary",
            "beats_single_particle",
        ],
    );
    for r in rows {
        t.push(vec![
            Cell::Int(r.n.into()),
            Cell::Num(r.theta),
            Cell::Num(theta_max(r.n, ALPHA)),
            Cell::opt(r.sigma),
            Cell::Num(r.sigma_linear),
            flag(r.sigma.map(|_| r.at_boundary)),
            flag(r.beats_single_particle),
        ]);
    }
    Ok(t)
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    if a.n_max == 0 || a.n_max > N_MAX {
        return Err(CliError::Config(format!(
            "--N-max must lie in 1..={N_MAX}, got {}",
            a.n_max
        )));
    }
    let cfg = VerifyConfig {
        n_max: a.n_max,
        alpha: a.inject_alpha.unwrap_or(ALPHA),
        ..VerifyConfig::default()
    };
    let outcomes = run_all(&cfg)?;
    let mut t = header("verify");
    t.meta("N_max", a.n_max);
    if let Some(alpha) = a.inject_alpha {
        t.meta("injected_alpha", alpha);
    }
    let mut t = with_columns(
        t,
        &["criterion", "check", "deviation", "threshold", "status"],
    );
    let mut report = Vec::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        report.push(format!(
            "{status} [{}] {:<30} deviation {:.3e}  threshold {:.1e}",
            o.criterion, o.name, o.deviation, o.threshold
        ));
        t.push(vec![
            Cell::Int(o.criterion.into()),
            Cell::Text(o.name.into()),
            Cell::Num(o.deviation),
            Cell::Num(o.threshold),
            Cell::Text(status.into()),
        ]);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    report.push(if passed {
        format!("verify: PASS ({} checks)", outcomes.len())
    } else {
        format!("verify: FAIL ({failed} of {} checks)", outcomes.len())
    });
    Ok(Outcome {
        table: t,
        report,
        verify_passed: Some(passed),
    })
}
