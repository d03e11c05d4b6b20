//! Cartesian parameter sweeps of targets and classification.
//!
//! Cells are evaluated on a rayon pool and collected in input order, the
//! first axis varying slowest. A cell whose parameters are rejected is kept
//! as a row with a non-`ok` status instead of aborting the sweep.

use esu_core::{classify, coupling_c, targets, EsuError};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{AxisName, ParamSet, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{label, num, Report, Table};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "ESU_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub values: Vec<f64>,
    pub status: &'static str,
    pub c: Option<f64>,
    #[serde(rename = "Y1")]
    pub y1: Option<f64>,
    #[serde(rename = "Y2")]
    pub y2: Option<f64>,
    pub classification: Option<esu_core::Classification>,
    pub message: Option<String>,
}

fn status_label(e: &EsuError) -> &'static str {
    match e {
        EsuError::InvalidParameter(_) | EsuError::Domain(_) => "invalid",
        EsuError::SingularRenormalization { .. } | EsuError::SingularSupport { .. } => "singular",
        EsuError::NoSolution(_) | EsuError::NoSolutionWithN { .. } | EsuError::ModeInKernel { .. } => "no_solution",
        EsuError::SolverFailure(_) => "solver_failure",
    }
}

/// All grid points, first axis slowest.
fn grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut cells = vec![Vec::new()];
    for values in axes {
        cells = cells
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(*v);
                    next
                })
            })
            .collect();
    }
    cells
}

fn evaluate_cell(base: &ParamSet, names: &[AxisName], index: usize, values: Vec<f64>) -> SweepRow {
    let mut p = *base;
    for pass_derived in [false, true] {
        for (name, v) in names.iter().zip(&values) {
            if name.is_derived() == pass_derived {
                name.apply(&mut p, *v);
            }
        }
    }
    let mut row = SweepRow {
        index,
        values,
        status: "ok",
        c: None,
        y1: None,
        y2: None,
        classification: None,
        message: None,
    };
    let outcome = p.build().map_err(|e| match e {
        CliError::Core(e) => e,
        other => EsuError::InvalidParameter(other.to_string()),
    });
    let params = match outcome {
        Ok(params) => params,
        Err(e) => {
            row.status = status_label(&e);
            row.message = Some(e.to_string());
            return row;
        }
    };
    row.c = Some(coupling_c(&params));
    match targets(&params) {
        Ok(t) => {
            row.y1 = Some(t.y1);
            row.y2 = Some(t.y2);
            row.classification = Some(classify(&t));
        }
        Err(e) => {
            row.status = status_label(&e);
            row.message = Some(e.to_string());
        }
    }
    row
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let spec = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("`sweep` section is required".into()))?;
    if spec.axes.is_empty() {
        return Err(CliError::Config("sweep needs at least one axis".into()));
    }
    let names: Vec<AxisName> = spec.axes.iter().map(|a| a.name).collect();
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(CliError::Config(format!("axis {} given twice", n.label())));
        }
    }
    let values = spec.axes.iter().map(|a| a.points()).collect::<Result<Vec<_>>>()?;
    let cells = grid(&values);
    let base = *cfg.param_set();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        cells
            .into_par_iter()
            .enumerate()
            .map(|(i, v)| evaluate_cell(&base, &names, i, v))
            .collect()
    }))
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report> {
    let rows = run_sweep(cfg)?;
    let spec = cfg.sweep.as_ref().expect("checked by run_sweep");
    let axis_labels: Vec<&str> = spec.axes.iter().map(|a| a.name.label()).collect();
    let mut header = vec!["index".to_string()];
    header.extend(axis_labels.iter().map(|s| format!("axis_{s}")));
    header.extend(["c", "Y1", "Y2", "qf", "full", "boundary", "status"].map(String::from));
    let mut table = Table { header, rows: Vec::with_capacity(rows.len()) };
    for r in &rows {
        let mut cells = vec![r.index.to_string()];
        cells.extend(r.values.iter().map(|v| num(*v)));
        cells.extend([r.c, r.y1, r.y2].map(|v| v.map(num).unwrap_or_default()));
        match &r.classification {
            Some(c) => cells.extend([label(&c.qf), label(&c.full), c.boundary.to_string()]),
            None => cells.extend([String::new(), String::new(), String::new()]),
        }
        cells.push(r.status.to_string());
        table.push(cells);
    }
    let json = json!({ "axes": axis_labels, "rows": rows });
    Ok(Report { json, table })
}
