//! Numerical laboratory for the ODE family `u'' = A u u' + B u^3`.
//!
//! The family arises from the logarithmic derivative `u = f'/f` of a positive
//! conformal factor `f`. The crate integrates solutions with explicit RK4 or
//! implicit Gauss–Legendre steppers, tracks finite-time blow-up, classifies
//! initial conditions by the sign structure of `(A, B)`, checks the energy and
//! `g_k` evolution laws along trajectories, and maps solutions back to `f`.

pub mod classify;
pub mod closed_forms;
pub mod colehopf;
pub mod diagnostics;
pub mod elliptic;
mod error;
pub mod integrate;
pub mod model;
pub mod quadrature;

pub use classify::{classify, detect_period, verify_verdict, PeriodReport, Verdict, VerdictKind};
pub use closed_forms::{ClosedForm, ClosedFormValue};
pub use diagnostics::DiagnosticsReport;
pub use error::{Error, Result};
pub use integrate::{
    estimate_blowup_time, integrate, integrate_two_sided, quadrature_blowup_time, step_gauss6,
    step_rk4, IntegrateOptions, IntegratorKind, Termination, Trajectory,
};
pub use model::{OdeParams, State};
