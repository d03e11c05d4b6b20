//! The single-point commands.

use esu_core::semiclassical::SemiclassicalTargets;
use esu_core::{
    classify, construct_two_mode, coupling_c, energy_pressure_reg, energy_pressure_ren, kms_temperature_solve,
    mode_frequency, moments, ricci_scalar, solve_entropy_minimizer, suggest_n_high, targets, two_point,
    verify_solution, Classification, MinimizerState, ModelParams, SymmetricState,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{label, num, opt, Report, Table};

/// Default residual tolerance of `solve`, relative to `max(1, |Y1|, |Y2|)`.
pub const SOLVE_TOL: f64 = 1e-12;

fn resolve_targets(cfg: &RunConfig, params: &ModelParams) -> Result<SemiclassicalTargets> {
    match cfg.targets {
        Some(t) => Ok(SemiclassicalTargets::with_values(*params, t.y1, t.y2)?),
        None => Ok(targets(params)?),
    }
}

fn residual_scale(t: &SemiclassicalTargets) -> f64 {
    1f64.max(t.y1.abs()).max(t.y2.abs())
}

fn classification_json(c: &Classification) -> Value {
    serde_json::to_value(c).expect("classification serialises")
}

fn classification_cells(c: &Classification) -> Vec<String> {
    vec![label(&c.qf), label(&c.full), c.boundary.to_string()]
}

pub fn cmd_targets(cfg: &RunConfig) -> Result<Report> {
    let params = cfg.param_set().build()?;
    let t = targets(&params)?;
    let (x1, x2) = (t.x1.expect("computed targets"), t.x2.expect("computed targets"));
    let c = coupling_c(&params);
    let l0 = mode_frequency(&params, 0);
    let r = ricci_scalar(&params);
    let json = json!({
        "c": c,
        "l0": l0,
        "R": r,
        "Y1": t.y1,
        "Y2": t.y2,
        "X1": x1,
        "X2": x2,
        "kappa_eff": t.eff.kappa_eff,
        "Lambda_eff": t.eff.lambda_eff,
        "c_prime": t.eff.c_prime,
        "c1": t.eff.c1,
        "c2": t.eff.c2,
    });
    let mut table = Table::new([
        "c", "l0", "R", "Y1", "Y2", "X1", "X1_tail_bound", "X2", "X2_tail_bound", "kappa_eff", "Lambda_eff",
        "c_prime", "c1", "c2",
    ]);
    table.push(
        [c, l0, r, t.y1, t.y2, x1.value, x1.tail_bound, x2.value, x2.tail_bound]
            .into_iter()
            .chain([t.eff.kappa_eff, t.eff.lambda_eff, t.eff.c_prime, t.eff.c1, t.eff.c2])
            .map(num)
            .collect(),
    );
    Ok(Report { json, table })
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Report> {
    let params = cfg.param_set().build()?;
    let t = resolve_targets(cfg, &params)?;
    let class = classify(&t);
    let mut json = classification_json(&class);
    json["Y1"] = json!(t.y1);
    json["Y2"] = json!(t.y2);
    let mut table = Table::new(["qf", "full", "boundary", "Y1", "Y2"]);
    let mut row = classification_cells(&class);
    row.extend([num(t.y1), num(t.y2)]);
    table.push(row);
    Ok(Report { json, table })
}

/// Modes as `n:a_n` pairs joined by `;`, for the CSV projection.
fn mode_list(state: &SymmetricState) -> String {
    match state {
        SymmetricState::Ground => String::new(),
        SymmetricState::Kms { .. } => "kms".into(),
        SymmetricState::Modes { coeffs } => {
            coeffs.iter().map(|(n, a)| format!("{n}:{}", num(*a))).collect::<Vec<_>>().join(";")
        }
    }
}

pub fn cmd_solve(cfg: &RunConfig, n_high: Option<u64>, tol: Option<f64>) -> Result<Report> {
    let params = cfg.param_set().build()?;
    let t = resolve_targets(cfg, &params)?;
    let class = classify(&t);
    let n = match n_high.or(cfg.n_high) {
        Some(n) => n,
        None => suggest_n_high(&t)?,
    };
    let state = construct_two_mode(&t, n)?;
    let (r1, r2) = verify_solution(&state, &t);
    let tol = check_tol(tol.unwrap_or(SOLVE_TOL))? * residual_scale(&t);
    if !(r1.abs() <= tol && r2.abs() <= tol) {
        return Err(esu_core::EsuError::SolverFailure(format!("residuals ({r1:e}, {r2:e}) exceed {tol:e}")).into());
    }
    let json = json!({
        "classification": classification_json(&class),
        "Y1": t.y1,
        "Y2": t.y2,
        "n_high": n,
        "state": state,
        "residuals": [r1, r2],
    });
    let mut table = Table::new(["qf", "full", "boundary", "Y1", "Y2", "n_high", "modes", "r1", "r2"]);
    let mut row = classification_cells(&class);
    row.extend([num(t.y1), num(t.y2), n.to_string(), mode_list(&state), num(r1), num(r2)]);
    table.push(row);
    Ok(Report { json, table })
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Config(format!("--tol must be positive, got {tol}")))
    }
}

pub fn cmd_minimize(cfg: &RunConfig, tol: Option<f64>) -> Result<Report> {
    let params = cfg.param_set().build()?;
    let t = resolve_targets(cfg, &params)?;
    let class = classify(&t);
    let result = solve_entropy_minimizer(&t)?;
    if let Some(tol) = tol {
        let tol = check_tol(tol)? * residual_scale(&t);
        let [r1, r2] = result.residuals;
        if !(r1.abs() <= tol && r2.abs() <= tol) {
            return Err(esu_core::EsuError::SolverFailure(format!("residuals ({r1:e}, {r2:e}) exceed {tol:e}")).into());
        }
    }
    let kms_beta = kms_temperature_solve(&t);
    let mut json = serde_json::to_value(&result).expect("minimiser result serialises");
    json["classification"] = classification_json(&class);
    json["kms_beta"] = json!(kms_beta);
    let kind = match &result.state {
        MinimizerState::Symmetric(s) => match s {
            SymmetricState::Ground => "ground",
            SymmetricState::Kms { .. } => "kms",
            SymmetricState::Modes { .. } => "modes",
        },
        MinimizerState::Bose(_) => "bose",
    };
    let mut table = Table::new([
        "qf", "full", "boundary", "kind", "lambda", "beta", "r1", "r2", "entropy", "kms_beta",
    ]);
    let mut row = classification_cells(&class);
    row.extend([
        kind.to_string(),
        opt(result.lambda),
        opt(result.beta),
        num(result.residuals[0]),
        num(result.residuals[1]),
        num(result.entropy),
        opt(kms_beta),
    ]);
    table.push(row);
    Ok(Report { json, table })
}

pub fn cmd_evaluate(cfg: &RunConfig) -> Result<Report> {
    let params = cfg.param_set().build()?;
    let state = cfg.state.clone().unwrap_or(SymmetricState::Ground);
    let (sa, sal2) = moments(&state, &params);
    let (e_reg, p_reg) = energy_pressure_reg(&state, &params);
    let (e_ren, p_ren) = energy_pressure_ren(&state, &params);
    let mut points = Vec::with_capacity(cfg.points.len());
    let mut table = Table::new([
        "dt", "chi", "re", "im", "energy_reg", "pressure_reg", "energy_ren", "pressure_ren",
    ]);
    for pt in &cfg.points {
        let w = two_point(&state, &params, pt.dt, pt.chi, cfg.eps, cfg.n_max)?;
        points.push(json!({ "dt": pt.dt, "chi": pt.chi, "re": w.re, "im": w.im }));
        table.push([pt.dt, pt.chi, w.re, w.im, e_reg, p_reg, e_ren, p_ren].into_iter().map(num).collect());
    }
    let json = json!({
        "state": state,
        "sum_a": sa,
        "sum_a_l2": sal2,
        "energy_reg": e_reg,
        "pressure_reg": p_reg,
        "energy_ren": e_ren,
        "pressure_ren": p_ren,
        "eps": cfg.eps,
        "n_max": cfg.n_max,
        "points": points,
    });
    Ok(Report { json, table })
}
