//! Grid evaluation. Points run on a rayon pool; rows come back in grid order.

use crate::config::{Mode, SweepConfig};
use num_complex::Complex64;
use paircat_core::{
    default_witness_pair, evolve, pair_cat_coeffs, reduction_witness,
    relative_entropy_of_entanglement, DampingSchedule, Error, PairCatParams, SchmidtVector,
    SignedLog, TargetState, Teleportation,
};
use rayon::prelude::*;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("at {point}: {source}")]
    Point { point: String, source: Error },
    #[error("{mode} sweeps are run by a different command")]
    WrongMode { mode: Mode },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// A CSV table with an optional trailing `#` comment line.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Option<String>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let mut out = w.into_inner().map_err(|e| e.into_error())?;
        if let Some(s) = &self.summary {
            writeln!(out, "# {s}")?;
        }
        out.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    /// Column lookup by header name.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }
}

/// Twelve significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

const NA: &str = "NA";

fn point_label(xi: f64, q: usize, phi: f64, extra: &str, value: f64) -> String {
    format!("xi={xi}, q={q}, phi={phi}, {extra}={value}")
}

/// Builds the resource, or `None` for a degenerate superposition.
fn resource(xi: f64, q: usize, phi: f64, n_max: usize) -> Result<Option<SchmidtVector>, Error> {
    let params = PairCatParams::with_truncation(Complex64::new(xi, 0.0), q, phi, n_max)?;
    match pair_cat_coeffs(&params) {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateState { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The Cartesian product of `(xi, q, phi, last)` in lexicographic order.
fn grid4(cfg: &SweepConfig, last: &[f64]) -> Vec<(f64, usize, f64, f64)> {
    let mut out = Vec::new();
    for xi in cfg.xi.points() {
        for &q in &cfg.q {
            for phi in cfg.phi.points() {
                for &z in last {
                    out.push((xi, q, phi, z));
                }
            }
        }
    }
    out
}

fn evaluate<P, F>(
    points: &[P],
    threads: Option<usize>,
    eval: F,
) -> Result<Vec<Vec<String>>, SweepError>
where
    P: Sync,
    F: Fn(&P) -> Result<Vec<String>, SweepError> + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    pool.install(|| points.par_iter().map(&eval).collect())
}

pub fn run_entanglement_sweep(
    cfg: &SweepConfig,
    threads: Option<usize>,
) -> Result<Table, SweepError> {
    if cfg.mode != Mode::Entanglement {
        return Err(SweepError::WrongMode { mode: cfg.mode });
    }
    let points = grid4(cfg, &cfg.d.points());
    let rows = evaluate(&points, threads, |&(xi, q, phi, d)| {
        let err = |source| SweepError::Point {
            point: point_label(xi, q, phi, "d", d),
            source,
        };
        let mut row = vec![fmt_float(xi), q.to_string(), fmt_float(phi), fmt_float(d)];
        match resource(xi, q, phi, cfg.n_max).map_err(err)? {
            None => row.push(NA.into()),
            Some(v) => {
                let sched = DampingSchedule::from_degree(d).map_err(err)?;
                let e = relative_entropy_of_entanglement(&evolve(&v, &sched)).map_err(err)?;
                row.push(fmt_float(e));
            }
        }
        Ok(row)
    })?;
    Ok(Table {
        header: vec!["xi", "q", "phi", "d", "E"],
        rows,
        summary: None,
    })
}

pub fn run_fidelity_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<Table, SweepError> {
    let gammas = match cfg.mode {
        Mode::Fidelity => vec![0.0],
        Mode::FidelityDamped => cfg.gamma_t.points(),
        mode => return Err(SweepError::WrongMode { mode }),
    };
    let mut points = Vec::new();
    for (xi, q, phi, alpha) in grid4(cfg, &cfg.alpha) {
        for &g in &gammas {
            points.push((xi, q, phi, alpha, g));
        }
    }
    let damped = cfg.mode == Mode::FidelityDamped;
    let rows = evaluate(&points, threads, |&(xi, q, phi, alpha, g)| {
        let err = |source| SweepError::Point {
            point: point_label(xi, q, phi, "alpha", alpha) + &format!(", gamma_t={g}"),
            source,
        };
        let mut row = vec![
            fmt_float(xi),
            q.to_string(),
            fmt_float(phi),
            fmt_float(alpha),
            fmt_float(g),
        ];
        match resource(xi, q, phi, cfg.n_max).map_err(err)? {
            None => row.push(NA.into()),
            Some(v) => {
                let target =
                    TargetState::coherent(Complex64::new(alpha, 0.0), cfg.k_max).map_err(err)?;
                let run = Teleportation::from_resource(v, target);
                let f = if damped {
                    run.average_fidelity_damped(g)
                } else {
                    run.average_fidelity()
                };
                row.push(fmt_float(f.map_err(err)?));
            }
        }
        Ok(row)
    })?;
    Ok(Table {
        header: vec!["xi", "q", "phi", "alpha", "gamma_t", "F_bar"],
        rows,
        summary: None,
    })
}

const WITNESS_HEADER: [&str; 20] = [
    "xi",
    "q",
    "phi",
    "d",
    "i",
    "j",
    "omega1_sign",
    "omega1_ln_abs",
    "omega2_sign",
    "omega2_ln_abs",
    "omega3_sign",
    "omega3_ln_abs",
    "omega4_sign",
    "omega4_ln_abs",
    "omega1_plus_omega2",
    "omega3_plus_omega4",
    "min_index",
    "distillable",
    "status",
    "ln_decoherence",
];

fn signed_cells(s: SignedLog) -> [String; 2] {
    [s.sign.to_string(), fmt_float(s.ln_abs)]
}

/// Witness values per grid point. `status` is `ok`, `single-term` (fewer
/// than two nonzero coefficients, no pair to test) or `degenerate`.
pub fn run_witness_report(cfg: &SweepConfig, threads: Option<usize>) -> Result<Table, SweepError> {
    if cfg.mode != Mode::Witness {
        return Err(SweepError::WrongMode { mode: cfg.mode });
    }
    let points = grid4(cfg, &cfg.d.points());
    let rows = evaluate(&points, threads, |&(xi, q, phi, d)| {
        let err = |source| SweepError::Point {
            point: point_label(xi, q, phi, "d", d),
            source,
        };
        let mut row = vec![fmt_float(xi), q.to_string(), fmt_float(phi), fmt_float(d)];
        let blank = |row: &mut Vec<String>, distillable: &str, status: &str| {
            row.extend(std::iter::repeat_n(NA.to_string(), 13));
            row.push(distillable.into());
            row.push(status.into());
            row.push(NA.into());
        };
        let Some(v) = resource(xi, q, phi, cfg.n_max).map_err(err)? else {
            blank(&mut row, NA, "degenerate");
            return Ok(row);
        };
        let Some((i, j)) = default_witness_pair(&v) else {
            blank(&mut row, "false", "single-term");
            return Ok(row);
        };
        let sched = DampingSchedule::from_degree(d).map_err(err)?;
        let w = reduction_witness(&v, &sched, i, j).map_err(err)?;
        row.push(i.to_string());
        row.push(j.to_string());
        for s in w.omega {
            row.extend(signed_cells(s));
        }
        let (s12, s34) = w.identity_sums();
        row.push(fmt_float(s12));
        row.push(fmt_float(s34));
        row.push((w.min_index + 1).to_string());
        row.push(w.distillable.to_string());
        row.push("ok".into());
        row.push(fmt_float(w.ln_decoherence));
        Ok(row)
    })?;
    let k = WITNESS_HEADER
        .iter()
        .position(|h| *h == "distillable")
        .expect("column exists");
    let held = rows.iter().filter(|r| r[k] == "true").count();
    let summary = format!(
        "distillable at every point: {} ({held} of {} points)",
        held == rows.len(),
        rows.len()
    );
    Ok(Table {
        header: WITNESS_HEADER.to_vec(),
        rows,
        summary: Some(summary),
    })
}

/// Runs whichever sweep `cfg.mode` selects.
pub fn run(cfg: &SweepConfig, threads: Option<usize>) -> Result<Table, SweepError> {
    match cfg.mode {
        Mode::Entanglement => run_entanglement_sweep(cfg, threads),
        Mode::Witness => run_witness_report(cfg, threads),
        Mode::Fidelity | Mode::FidelityDamped => run_fidelity_sweep(cfg, threads),
    }
}
