//! CSV writing and reading. Floats carry 17 significant digits so that a
//! file read back reproduces every value exactly.

use std::io::{Read, Write};

use blowuplab::diagnostics::{energy, g_k};
use blowuplab::{OdeParams, State};

use crate::CliError;

pub const TRAJECTORY_HEADER: [&str; 6] = ["t", "u", "du", "e", "g_kminus", "g_kplus"];

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Writes `t,u,du,e,g_kminus,g_kplus`; the `g` columns are empty without
/// real characteristic roots.
pub fn write_trajectory<W: Write>(w: W, p: &OdeParams, states: &[State]) -> Result<(), CliError> {
    let mut out = writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    let roots = p.roots();
    for s in states {
        let (gm, gp) = match roots {
            Some((km, kp)) => (fmt_f64(g_k(s, km)), fmt_f64(g_k(s, kp))),
            None => (String::new(), String::new()),
        };
        out.write_record([fmt_f64(s.t), fmt_f64(s.u), fmt_f64(s.v), fmt_f64(energy(p, s)), gm, gp])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads the `t,u,du` columns of a trajectory CSV.
pub fn read_trajectory<R: Read>(r: R) -> Result<Vec<State>, CliError> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Failed(format!("missing column '{name}'")))
    };
    let (it, iu, iv) = (col("t")?, col("u")?, col("du")?);
    let mut states = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64, CliError> {
            let field = rec.get(i).unwrap_or("");
            field
                .parse()
                .map_err(|_| CliError::Failed(format!("bad number '{field}'")))
        };
        states.push(State::new(num(it)?, num(iu)?, num(iv)?));
    }
    Ok(states)
}
