use std::path::PathBuf;

use blowuplab::{IntegrateOptions, IntegratorKind, OdeParams};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "blowuplab",
    version,
    about = "Trajectories, phase portraits and blow-up classification for u'' = A u u' + B u^3",
    args_override_self = true
)]
pub struct Cli {
    /// key=value file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one initial condition and write a trajectory CSV with a JSON sidecar.
    #[command(allow_negative_numbers = true)]
    Integrate(IntegrateCmd),
    /// Integrate a grid of initial conditions both ways in time.
    #[command(allow_negative_numbers = true)]
    Portrait(PortraitCmd),
    /// Classify (and optionally verify) a grid of initial conditions.
    #[command(allow_negative_numbers = true)]
    Classify(ClassifyCmd),
    /// Lemniscatic constants, the sl table and complete elliptic integrals.
    #[command(allow_negative_numbers = true)]
    Elliptic(EllipticCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Rk4,
    Gauss6,
}

impl From<IntegratorArg> for IntegratorKind {
    fn from(k: IntegratorArg) -> Self {
        match k {
            IntegratorArg::Rk4 => IntegratorKind::Rk4,
            IntegratorArg::Gauss6 => IntegratorKind::Gauss6,
        }
    }
}

/// Either the dimension or both coefficients.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Dimension m > 2; sets A = (8-m)/(m-2), B = 2(m-4)/(m-2)^2.
    #[arg(long)]
    pub m: Option<f64>,
    /// Coefficient A (requires --B).
    #[arg(long = "A", value_name = "A")]
    pub a: Option<f64>,
    /// Coefficient B (requires --A).
    #[arg(long = "B", value_name = "B")]
    pub b: Option<f64>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<OdeParams, CliError> {
        match (self.m, self.a, self.b) {
            (Some(m), None, None) => {
                OdeParams::from_dimension(m).map_err(|e| CliError::Usage(format!("m: {e}")))
            }
            (None, Some(a), Some(b)) => {
                if !a.is_finite() {
                    return Err(CliError::Usage(format!("A: must be finite, got {a}")));
                }
                if !b.is_finite() {
                    return Err(CliError::Usage(format!("B: must be finite, got {b}")));
                }
                Ok(OdeParams::from_coeffs(a, b))
            }
            _ => Err(CliError::Usage(
                "m: give exactly one of --m or the pair --A/--B".into(),
            )),
        }
    }
}

/// Integrator settings shared by the trajectory commands.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// rk4 or gauss6.
    #[arg(long, value_enum)]
    pub integrator: Option<IntegratorArg>,
    /// Initial step.
    #[arg(long)]
    pub h0: Option<f64>,
    /// Local error tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub h_min: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Keep every n-th accepted step.
    #[arg(long)]
    pub record_every: Option<usize>,
    /// |u| beyond which a run counts as blown up.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Gauss-6 stage iteration tolerance.
    #[arg(long)]
    pub stage_tol: Option<f64>,
    #[arg(long)]
    pub stage_max_iter: Option<usize>,
    /// Step cap near blow-up, h <= cap/|u|.
    #[arg(long)]
    pub step_cap: Option<f64>,
}

fn field_error(field: &str, e: blowuplab::Error) -> CliError {
    CliError::Usage(format!("{field}: {e}"))
}

impl SolverArgs {
    pub fn kind(&self, default: IntegratorKind) -> IntegratorKind {
        self.integrator.map(Into::into).unwrap_or(default)
    }

    /// Options for a run to `t_end`, validated field by field so that errors
    /// name the offending flag.
    pub fn options(&self, t_end: f64, default_record_every: usize) -> Result<IntegrateOptions, CliError> {
        let mut o = IntegrateOptions::new(t_end);
        o.record_every = default_record_every;
        let checks: [(&str, Option<f64>, &mut f64); 5] = [
            ("h0", self.h0, &mut o.h0),
            ("tol", self.tol, &mut o.local_tol),
            ("h-min", self.h_min, &mut o.h_min),
            ("threshold", self.threshold, &mut o.blowup_threshold),
            ("stage-tol", self.stage_tol, &mut o.stage_tol),
        ];
        for (name, value, slot) in checks {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(CliError::Usage(format!("{name}: must be positive, got {v}")));
                }
                *slot = v;
            }
        }
        if let Some(n) = self.max_steps {
            o.max_steps = n;
        }
        if let Some(n) = self.record_every {
            o.record_every = n;
        }
        if let Some(n) = self.stage_max_iter {
            o.stage_max_iter = n;
        }
        if let Some(c) = self.step_cap {
            o.step_cap = Some(c);
            if let Err(e) = o.validate() {
                return Err(field_error("step-cap", e));
            }
        }
        if o.record_every == 0 {
            return Err(CliError::Usage("record-every: must be >= 1".into()));
        }
        if o.max_steps == 0 {
            return Err(CliError::Usage("max-steps: must be >= 1".into()));
        }
        if o.stage_max_iter == 0 {
            return Err(CliError::Usage("stage-max-iter: must be >= 1".into()));
        }
        if !t_end.is_finite() {
            return Err(CliError::Usage(format!("t-end: must be finite, got {t_end}")));
        }
        o.validate().map_err(|e| field_error("options", e))?;
        Ok(o)
    }
}

#[derive(Debug, Clone, Args)]
pub struct IntegrateCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub u0: f64,
    #[arg(long)]
    pub v0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    /// End time; may lie before --t0.
    #[arg(long)]
    pub t_end: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Trajectory CSV; the sidecar is written next to it with a .json extension.
    #[arg(long, default_value = "trajectory.csv")]
    pub out: PathBuf,
}

/// Inclusive grid `lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn parse(field: &str, s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("{field}: {why} in '{s}', expected lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("wrong number of fields"));
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad("bad lower bound"))?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad("bad upper bound"))?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad("bad point count"))?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if lo > hi {
            return Err(bad("lo exceeds hi"));
        }
        if n == 0 || (n == 1 && lo != hi) {
            return Err(bad("need n >= 2 for a nondegenerate range"));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Two axes, u0 then v0, each lo:hi:n inclusive.
    #[arg(long, num_args = 2, value_names = ["U_AXIS", "V_AXIS"], required = true, allow_hyphen_values = true)]
    pub grid: Vec<String>,
}

impl GridArgs {
    pub fn axes(&self) -> Result<(Vec<f64>, Vec<f64>), CliError> {
        if self.grid.len() != 2 {
            return Err(CliError::Usage("grid: expected two axes".into()));
        }
        let u = GridAxis::parse("grid", &self.grid[0])?;
        let v = GridAxis::parse("grid", &self.grid[1])?;
        Ok((u.points(), v.points()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct PortraitCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Each trajectory runs on [-horizon, horizon].
    #[arg(long, default_value_t = 20.0)]
    pub horizon: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Points per separatrix curve in the manifest.
    #[arg(long, default_value_t = 201)]
    pub separatrix_points: usize,
    /// Portrait CSV; the manifest is written next to it with a .json extension.
    #[arg(long, default_value = "portrait.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Check every verdict numerically.
    #[arg(long)]
    pub verify: bool,
    /// Verification horizon; defaults depend on the verdict.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EllipticCmd {
    /// Print the lemniscatic quarter period.
    #[arg(long)]
    pub quarter_period: bool,
    /// Print `sl(t),sl'(t)` for each --t.
    #[arg(long)]
    pub sl: bool,
    #[arg(long, requires = "sl")]
    pub t: Vec<f64>,
    /// Print K(k) for each modulus.
    #[arg(long = "K", value_name = "k")]
    pub k: Vec<f64>,
    /// Write sl on one period to this CSV.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Intervals in the table.
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
}
