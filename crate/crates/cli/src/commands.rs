use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use blowuplab::classify::{default_horizon, VerifyReport};
use blowuplab::elliptic::{k_agm, lemniscate_quarter_period, LemniscaticTable};
use blowuplab::{
    classify, estimate_blowup_time, integrate, verify_verdict, DiagnosticsReport, Error, IntegrateOptions,
    IntegratorKind, OdeParams, State, Termination, Trajectory, Verdict, VerdictKind,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{ClassifyCmd, Cli, Command, EllipticCmd, IntegrateCmd, PortraitCmd};
use crate::csvio::{fmt_f64, write_trajectory, writer};
use crate::{CliError, EXIT_FAILURE, EXIT_OK};

pub const THREADS_ENV: &str = "BLOWUPLAB_THREADS";

fn core_error(e: Error) -> CliError {
    match e {
        Error::Domain(_) | Error::InvalidOptions(_) => CliError::Usage(e.to_string()),
        other => CliError::Failed(other.to_string()),
    }
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV}: expected a positive integer, got '{s}'"))),
        },
    }
}

pub fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let run = move || match cli.command {
        Command::Integrate(c) => cmd_integrate(&c),
        Command::Portrait(c) => cmd_portrait(&c),
        Command::Classify(c) => cmd_classify(&c),
        Command::Elliptic(c) => cmd_elliptic(&c),
    };
    match thread_count()? {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Failed(format!("thread pool: {e}")))?
            .install(run),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Failed(format!("cannot create {}: {e}", path.display())))
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn params_json(p: &OdeParams) -> Value {
    json!({
        "A": p.a(),
        "B": p.b(),
        "m": p.m(),
        "disc": p.disc(),
        "k_minus": p.k_minus(),
        "k_plus": p.k_plus(),
    })
}

fn options_json(kind: IntegratorKind, o: &IntegrateOptions) -> Value {
    json!({
        "integrator": kind.name(),
        "h0": o.h0,
        "tol": o.local_tol,
        "h_min": o.h_min,
        "max_steps": o.max_steps,
        "record_every": o.record_every,
        "threshold": o.blowup_threshold,
        "stage_tol": o.stage_tol,
        "stage_max_iter": o.stage_max_iter,
        "step_cap": o.step_cap.unwrap_or(kind.default_step_cap()),
    })
}

fn is_inconclusive(t: &Termination) -> bool {
    matches!(t, Termination::StepUnderflow { .. } | Termination::MaxSteps)
}

fn cmd_integrate(c: &IntegrateCmd) -> Result<i32, CliError> {
    let p = c.params.resolve()?;
    let kind = c.solver.kind(IntegratorKind::Rk4);
    let opts = c.solver.options(c.t_end, 1)?;
    if !c.t0.is_finite() {
        return Err(CliError::Usage(format!("t0: must be finite, got {}", c.t0)));
    }
    for (name, x) in [("u0", c.u0), ("v0", c.v0)] {
        if !x.is_finite() {
            return Err(CliError::Usage(format!("{name}: must be finite, got {x}")));
        }
    }
    let s0 = State::new(c.t0, c.u0, c.v0);
    let traj = integrate(&p, &s0, kind, &opts).map_err(core_error)?;

    let mut w = create(&c.out)?;
    write_trajectory(&mut w, &p, &traj.states)?;
    w.flush()?;

    let verdict = classify(&p, c.u0, c.v0);
    let estimate = match traj.termination {
        Termination::BlowUp { .. } => estimate_blowup_time(&traj).ok(),
        _ => None,
    };
    let diagnostics = DiagnosticsReport::for_trajectory(&p, &traj).ok();
    let last = traj.last();
    let sidecar = json!({
        "params": params_json(&p),
        "initial": {"t0": c.t0, "u0": c.u0, "v0": c.v0},
        "t_end": c.t_end,
        "options": options_json(kind, &opts),
        "verdict": verdict,
        "termination": traj.termination,
        "blowup_estimate": estimate,
        "n_states": traj.states.len(),
        "final": {"t": last.t, "u": last.u, "du": last.v},
        "diagnostics": diagnostics,
        "csv": c.out.file_name().map(|s| s.to_string_lossy().into_owned()),
    });
    write_json(&sidecar_path(&c.out), &sidecar)?;

    println!(
        "{}: {} states, t in [{}, {}] -> {}",
        traj.termination.label(),
        traj.states.len(),
        traj.first().t,
        last.t,
        c.out.display()
    );
    if is_inconclusive(&traj.termination) {
        eprintln!("inconclusive: run ended with {}", traj.termination.label());
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

/// Grid points in row-major order, `v0` outer.
fn grid_points(us: &[f64], vs: &[f64]) -> Vec<(f64, f64)> {
    vs.iter().flat_map(|&v| us.iter().map(move |&u| (u, v))).collect()
}

struct PortraitRun {
    u0: f64,
    v0: f64,
    verdict: Verdict,
    fwd: Trajectory,
    bwd: Trajectory,
}

fn stationary(v: &Verdict) -> bool {
    matches!(v.kind, VerdictKind::Stationary | VerdictKind::Trivial)
}

fn branch_json(t: &Trajectory) -> Value {
    json!({
        "termination": t.termination,
        "n_states": t.states.len(),
        "t_last": t.last().t,
    })
}

fn cmd_portrait(c: &PortraitCmd) -> Result<i32, CliError> {
    let p = c.params.resolve()?;
    let (us, vs) = c.grid.axes()?;
    if !(c.horizon.is_finite() && c.horizon > 0.0) {
        return Err(CliError::Usage(format!("horizon: must be positive, got {}", c.horizon)));
    }
    let default_kind = if p.disc() < 0.0 { IntegratorKind::Gauss6 } else { IntegratorKind::Rk4 };
    let kind = c.solver.kind(default_kind);
    let fwd_opts = c.solver.options(c.horizon, 10)?;
    let bwd_opts = fwd_opts.with_t_end(-c.horizon);

    let runs: Vec<PortraitRun> = grid_points(&us, &vs)
        .into_par_iter()
        .map(|(u0, v0)| {
            let s0 = State::new(0.0, u0, v0);
            Ok(PortraitRun {
                u0,
                v0,
                verdict: classify(&p, u0, v0),
                fwd: integrate(&p, &s0, kind, &fwd_opts).map_err(core_error)?,
                bwd: integrate(&p, &s0, kind, &bwd_opts).map_err(core_error)?,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let mut out = writer(create(&c.out)?);
    out.write_record(["traj_id", "branch", "t", "u", "du", "terminated"])?;
    for (id, r) in runs.iter().enumerate() {
        for (branch, traj) in [("fwd", &r.fwd), ("bwd", &r.bwd)] {
            let flag = if stationary(&r.verdict) { "stationary" } else { traj.termination.label() };
            for s in &traj.states {
                out.write_record([id.to_string(), branch.into(), fmt_f64(s.t), fmt_f64(s.u), fmt_f64(s.v), flag.into()])?;
            }
        }
    }
    out.flush()?;

    let trajectories: Vec<Value> = runs
        .iter()
        .enumerate()
        .map(|(id, r)| {
            json!({
                "traj_id": id,
                "u0": r.u0,
                "v0": r.v0,
                "verdict": r.verdict.kind.name(),
                "basis": r.verdict.basis,
                "fwd": branch_json(&r.fwd),
                "bwd": branch_json(&r.bwd),
            })
        })
        .collect();
    let mut separatrices = Vec::new();
    if let Some((km, kp)) = p.roots() {
        if p.b() > 0.0 && p.a() >= 0.0 {
            let n = c.separatrix_points.max(2);
            let (lo, hi) = (us[0], us[us.len() - 1]);
            for (label, k) in [("k_plus", kp), ("k_minus", km)] {
                let points: Vec<[f64; 2]> = (0..n)
                    .map(|i| {
                        let u = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                        [u, -k * u * u]
                    })
                    .collect();
                separatrices.push(json!({"root": label, "k": k, "curve": "du = -k u^2", "points": points}));
            }
        }
    }
    let manifest = json!({
        "params": params_json(&p),
        "options": options_json(kind, &fwd_opts),
        "horizon": c.horizon,
        "grid": {"u0": us, "v0": vs, "order": "v0 outer, u0 inner"},
        "csv": c.out.file_name().map(|s| s.to_string_lossy().into_owned()),
        "trajectories": trajectories,
        "separatrices": separatrices,
    });
    write_json(&sidecar_path(&c.out), &manifest)?;

    let blowups = runs.iter().filter(|r| r.fwd.termination.is_blowup() || r.bwd.termination.is_blowup()).count();
    println!("{} trajectories, {} with blow-up -> {}", runs.len(), blowups, c.out.display());
    let stuck = runs
        .iter()
        .filter(|r| is_inconclusive(&r.fwd.termination) || is_inconclusive(&r.bwd.termination))
        .count();
    if stuck > 0 {
        eprintln!("inconclusive: {stuck} trajectories ended early");
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

/// Outcome of `--verify` for one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verified {
    Skipped,
    Pass,
    Fail,
    Inconclusive,
    Error,
}

impl Verified {
    pub fn label(self) -> &'static str {
        match self {
            Verified::Skipped => "",
            Verified::Pass => "pass",
            Verified::Fail => "fail",
            Verified::Inconclusive => "inconclusive",
            Verified::Error => "error",
        }
    }

    fn from_report(r: &Result<VerifyReport, Error>) -> Self {
        match r {
            Ok(rep) if rep.pass => Verified::Pass,
            Ok(_) => Verified::Fail,
            Err(Error::Inconclusive(_)) => Verified::Inconclusive,
            Err(_) => Verified::Error,
        }
    }
}

fn cmd_classify(c: &ClassifyCmd) -> Result<i32, CliError> {
    let p = c.params.resolve()?;
    let (us, vs) = c.grid.axes()?;
    if let Some(h) = c.horizon {
        if !(h.is_finite() && h > 0.0) {
            return Err(CliError::Usage(format!("horizon: must be positive, got {h}")));
        }
    }
    let rows: Vec<(f64, f64, Verdict, Verified)> = grid_points(&us, &vs)
        .into_par_iter()
        .map(|(u0, v0)| {
            let verdict = classify(&p, u0, v0);
            let verified = if c.verify {
                let horizon = c.horizon.unwrap_or(default_horizon(verdict.kind));
                Verified::from_report(&verify_verdict(&p, u0, v0, &verdict, horizon))
            } else {
                Verified::Skipped
            };
            (u0, v0, verdict, verified)
        })
        .collect();

    let sink: Box<dyn Write> = match &c.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut out = writer(sink);
    out.write_record(["u0", "v0", "verdict", "basis", "verified"])?;
    for (u0, v0, verdict, verified) in &rows {
        out.write_record([
            fmt_f64(*u0),
            fmt_f64(*v0),
            verdict.kind.name().to_string(),
            verdict.basis.clone(),
            verified.label().to_string(),
        ])?;
    }
    out.flush()?;

    let bad = rows
        .iter()
        .filter(|r| matches!(r.3, Verified::Fail | Verified::Inconclusive | Verified::Error))
        .count();
    if bad > 0 {
        eprintln!("{bad} of {} rows did not verify", rows.len());
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_elliptic(c: &EllipticCmd) -> Result<i32, CliError> {
    if !c.quarter_period && !c.sl && c.k.is_empty() && c.table.is_none() {
        return Err(CliError::Usage(
            "elliptic: give at least one of --quarter-period, --sl, --K, --table".into(),
        ));
    }
    if c.sl && c.t.is_empty() {
        return Err(CliError::Usage("t: --sl needs at least one --t".into()));
    }
    let mut moduli = Vec::with_capacity(c.k.len());
    for &k in &c.k {
        moduli.push((k, k_agm(k).map_err(|e| CliError::Usage(format!("K: {e}")))?));
    }
    if c.table.is_some() && c.n == 0 {
        return Err(CliError::Usage("n: must be >= 1".into()));
    }
    for &t in &c.t {
        if !t.is_finite() {
            return Err(CliError::Usage(format!("t: must be finite, got {t}")));
        }
    }

    let stdout = std::io::stdout();
    let mut so = stdout.lock();
    if c.quarter_period {
        writeln!(so, "{}", fmt_f64(lemniscate_quarter_period()))?;
    }
    if c.sl {
        for &t in &c.t {
            let (y, dy) = blowuplab::elliptic::sl(t);
            writeln!(so, "{},{}", fmt_f64(y), fmt_f64(dy))?;
        }
    }
    for (_, kk) in &moduli {
        writeln!(so, "{}", fmt_f64(*kk))?;
    }
    if let Some(path) = &c.table {
        let table = LemniscaticTable::get();
        let period = 4.0 * table.quarter_period;
        let mut out = writer(create(path)?);
        out.write_record(["t", "sl", "dsl"])?;
        for i in 0..=c.n {
            let t = period * i as f64 / c.n as f64;
            let (y, dy) = table.sl(t);
            out.write_record([fmt_f64(t), fmt_f64(y), fmt_f64(dy)])?;
        }
        out.flush()?;
    }
    so.flush()?;
    Ok(EXIT_OK)
}
