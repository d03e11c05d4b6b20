//! Effective couplings, the local renormalisation shifts of energy and
//! pressure, and the Hadamard parametrix of the static universe.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_i1, bessel_j1};
use crate::error::{EsuError, Result};
use crate::params::{coupling_c, ricci_scalar, ModelParams};

/// Renormalised couplings `kappa'`, `Lambda'`, `c'` and the curvature shifts
/// `c1`, `c2` of energy and pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConstants {
    pub kappa_eff: f64,
    pub lambda_eff: f64,
    pub c_prime: f64,
    pub c1: f64,
    pub c2: f64,
}

/// `(c', c1, c2)`, which stay finite even when `kappa'` does not exist.
pub fn curvature_counterterms(params: &ModelParams) -> (f64, f64, f64) {
    let r = ricci_scalar(params);
    let rc = params.renorm();
    let m2 = params.m() * params.m();
    let lam = params.lambda();
    let c_prime = (3.0 * rc.alpha(3) + rc.alpha(4) + rc.alpha(5)) / 6.0;
    let quartic = rc.alpha(1) * m2 * m2 + rc.beta(1) * lam * lam + rc.beta(3) * lam * m2;
    let quadratic = rc.alpha(2) * m2 + rc.beta(2) * lam;
    let c1 = quartic - 0.5 * r * quadratic - r * r * c_prime;
    let c2 = quadratic + 4.0 * r * c_prime;
    (c_prime, c1, c2)
}

pub fn effective_constants(params: &ModelParams) -> Result<EffectiveConstants> {
    let rc = params.renorm();
    let m2 = params.m() * params.m();
    let lam = params.lambda();
    let kappa = params.kappa();
    let shift = kappa * (rc.alpha(2) * m2 + rc.beta(2) * lam);
    let denominator = 1.0 - shift;
    if denominator.abs() <= 1e-14 * (1.0 + shift.abs()) {
        return Err(EsuError::SingularRenormalization { denominator });
    }
    let quartic = rc.alpha(1) * m2 * m2 + rc.beta(1) * lam * lam + rc.beta(3) * lam * m2;
    let (c_prime, c1, c2) = curvature_counterterms(params);
    Ok(EffectiveConstants {
        kappa_eff: kappa / denominator,
        lambda_eff: (lam - kappa * quartic) / denominator,
        c_prime,
        c1,
        c2,
    })
}

/// Shift regularised energy and pressure to their renormalised values.
pub fn renormalized_energy_pressure(e_reg: f64, p_reg: f64, params: &ModelParams) -> (f64, f64) {
    let c = coupling_c(params);
    let a = params.a();
    let shift = c * c / (32.0 * PI * PI * a.powi(4));
    let (_, c1, c2) = curvature_counterterms(params);
    let r = ricci_scalar(params);
    (e_reg - shift - c1, p_reg - shift - c1 - c2 * r / 3.0)
}

/// Synge world function `sigma = -dt^2/2 + a^2 chi^2/2` and `u0 = chi/sin chi`,
/// after checking that the separation is admissible.
fn separation(params: &ModelParams, dt: f64, chi: f64) -> Result<(f64, f64)> {
    if !dt.is_finite() || !chi.is_finite() {
        return Err(EsuError::Domain("separation must be finite".into()));
    }
    if !(0.0..PI).contains(&chi) {
        return Err(EsuError::Domain(format!(
            "geodesic distance must lie in [0, pi) (antipodal points excluded), got {chi}"
        )));
    }
    let a = params.a();
    let tt = 0.5 * dt * dt;
    let xx = 0.5 * a * a * chi * chi;
    let sigma = xx - tt;
    if sigma.abs() <= 1e-14 * (tt + xx) || (tt + xx) == 0.0 {
        return Err(EsuError::SingularSupport { sigma });
    }
    let u0 = if chi == 0.0 { 1.0 } else { chi / chi.sin() };
    Ok((sigma, u0))
}

/// `log(sigma_+)`: on the timelike side the `-i eps` shift of the time
/// difference gives `Im sigma_eps = eps dt`, hence the sign of `dt` picks the branch.
fn log_sigma_plus(sigma: f64, dt: f64) -> Complex64 {
    if sigma > 0.0 {
        Complex64::new(sigma.ln(), 0.0)
    } else {
        Complex64::new((-sigma).ln(), PI * dt.signum())
    }
}

/// `F(w) = sum_k w^k / (k! (k+1)!)` through its Bessel closed forms.
fn f_closed(w: f64) -> f64 {
    if w > 0.0 {
        let s = w.sqrt();
        bessel_i1(2.0 * s) / s
    } else if w < 0.0 {
        let s = (-w).sqrt();
        bessel_j1(2.0 * s) / s
    } else {
        1.0
    }
}

fn f_series(w: f64, n_terms: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 0..n_terms {
        sum += term;
        let kf = k as f64;
        term *= w / ((kf + 1.0) * (kf + 2.0));
    }
    sum
}

/// The Hadamard parametrix at real separation `(dt, chi)`.
///
/// Returned as a complex number: for timelike separation the logarithm
/// acquires an imaginary part `+-pi` depending on the sign of `dt`.
pub fn hadamard_parametrix(params: &ModelParams, dt: f64, chi: f64) -> Result<Complex64> {
    let (sigma, u0) = separation(params, dt, chi)?;
    let c = coupling_c(params);
    let a2 = params.a() * params.a();
    let leading = Complex64::new(u0 / (8.0 * PI * PI * sigma), 0.0);
    if c == 0.0 {
        return Ok(leading);
    }
    let w = c * sigma / (2.0 * a2);
    let log = log_sigma_plus(sigma, dt);
    Ok(leading + log * (u0 * c / (16.0 * PI * PI * a2) * f_closed(w)))
}

/// The parametrix from its defining series, truncated after `n_terms` terms.
pub fn hadamard_parametrix_series(params: &ModelParams, dt: f64, chi: f64, n_terms: usize) -> Result<Complex64> {
    let (sigma, u0) = separation(params, dt, chi)?;
    let c = coupling_c(params);
    let a2 = params.a() * params.a();
    let w = c * sigma / (2.0 * a2);
    let log = log_sigma_plus(sigma, dt);
    Ok(Complex64::new(u0 / (8.0 * PI * PI * sigma), 0.0)
        + log * (u0 * c / (16.0 * PI * PI * a2) * f_series(w, n_terms)))
}

/// `(-Box + m^2 + xi R) H` from its series, at real separation.
pub fn hadamard_source(params: &ModelParams, dt: f64, chi: f64) -> Result<f64> {
    if !(0.0..PI).contains(&chi) {
        return Err(EsuError::Domain(format!("geodesic distance must lie in [0, pi), got {chi}")));
    }
    let c = coupling_c(params);
    let a2 = params.a() * params.a();
    let sigma = 0.5 * a2 * chi * chi - 0.5 * dt * dt;
    let u0 = if chi == 0.0 { 1.0 } else { chi / chi.sin() };
    let w = c * sigma / (2.0 * a2);
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut fact = 2.0; // (k+1)! (k+2)! at k = 0
    for k in 0..60 {
        let kf = k as f64;
        let term = (2.0 * kf + 3.0) / fact * pow;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        pow *= w;
        fact *= (kf + 2.0) * (kf + 3.0);
    }
    Ok(-u0 * c * c / (16.0 * PI * PI * a2 * a2) * sum)
}
