//! Symmetric states and their observables.
//!
//! A symmetric state is the ground state plus a correction determined by
//! non-negative mode coefficients `a_n`. The correction enters the two-point
//! function as `sum_n a_n/(n+1) cos(dt l_n/a) C_n^{(1)}(cos chi)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EsuError, Result};
use crate::params::{coupling_c, mode_frequency, ModelParams};
use crate::renorm::renormalized_energy_pressure;
use crate::series::ground_moments;

/// Relative size below which terms of an infinite mode sum are dropped.
const SUM_REL_TOL: f64 = 1e-18;
const SUM_MAX_TERMS: u64 = 1_000_000_000;

/// Anything that assigns a coefficient `a_n >= 0` to each mode.
pub trait ModeCoefficients {
    fn coefficient(&self, params: &ModelParams, n: u64) -> f64;

    /// The modes with `a_n > 0` if there are finitely many, in increasing order.
    fn finite_support(&self) -> Option<Vec<u64>>;
}

/// The coefficient data of a symmetric state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "StateDocument")]
pub enum SymmetricState {
    Ground,
    Kms { beta: f64 },
    Modes { coeffs: BTreeMap<u64, f64> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum StateDocument {
    Ground,
    Kms { beta: f64 },
    Modes { coeffs: BTreeMap<String, f64> },
}

impl TryFrom<StateDocument> for SymmetricState {
    type Error = EsuError;

    fn try_from(doc: StateDocument) -> Result<Self> {
        match doc {
            StateDocument::Ground => Ok(SymmetricState::Ground),
            StateDocument::Kms { beta } => SymmetricState::kms(beta),
            StateDocument::Modes { coeffs } => {
                // internally tagged documents hand integer map keys over as strings
                let parsed = coeffs
                    .into_iter()
                    .map(|(k, v)| {
                        k.parse::<u64>()
                            .map(|n| (n, v))
                            .map_err(|_| EsuError::InvalidParameter(format!("mode index {k:?} is not a non-negative integer")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SymmetricState::modes(parsed)
            }
        }
    }
}

impl SymmetricState {
    pub fn kms(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(SymmetricState::Kms { beta })
    }

    /// Finitely supported state; zero entries are dropped, negative ones rejected.
    pub fn modes<I: IntoIterator<Item = (u64, f64)>>(coeffs: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, a) in coeffs {
            if !(a.is_finite() && a >= 0.0) {
                return Err(EsuError::InvalidParameter(format!("mode coefficient a_{n} = {a} must be finite and >= 0")));
            }
            if a > 0.0 {
                *map.entry(n).or_insert(0.0) += a;
            }
        }
        if map.is_empty() {
            Ok(SymmetricState::Ground)
        } else {
            Ok(SymmetricState::Modes { coeffs: map })
        }
    }
}

impl ModeCoefficients for SymmetricState {
    fn coefficient(&self, params: &ModelParams, n: u64) -> f64 {
        match self {
            SymmetricState::Ground => 0.0,
            SymmetricState::Kms { beta } => kms_coefficient_unchecked(params, *beta, n),
            SymmetricState::Modes { coeffs } => coeffs.get(&n).copied().unwrap_or(0.0),
        }
    }

    fn finite_support(&self) -> Option<Vec<u64>> {
        match self {
            SymmetricState::Ground => Some(Vec::new()),
            SymmetricState::Kms { .. } => None,
            SymmetricState::Modes { coeffs } => Some(coeffs.keys().copied().collect()),
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(EsuError::Domain(format!("inverse temperature must be positive and finite, got {beta}")))
    }
}

/// Thermal coefficient `a_n = (n+1)^2 / (2 pi^2 a^2 l_n) / (e^{beta l_n / a} - 1)`.
pub fn kms_coefficient(params: &ModelParams, beta: f64, n: u64) -> Result<f64> {
    check_beta(beta)?;
    Ok(kms_coefficient_unchecked(params, beta, n))
}

fn kms_coefficient_unchecked(params: &ModelParams, beta: f64, n: u64) -> f64 {
    let l = mode_frequency(params, n);
    let a = params.a();
    let k = (n + 1) as f64;
    k * k / (2.0 * PI * PI * a * a * l) / (beta * l / a).exp_m1()
}

/// `sum_n f(n, a_n, l_n)` over the modes of `state`.
///
/// Infinite sums must have terms that eventually decay at least
/// geometrically with a non-increasing ratio; they stop once the geometric
/// tail estimate drops below `1e-18` of the running sum.
pub fn sum_over_modes<S, F>(state: &S, params: &ModelParams, mut f: F) -> f64
where
    S: ModeCoefficients + ?Sized,
    F: FnMut(u64, f64, f64) -> f64,
{
    if let Some(support) = state.finite_support() {
        return support
            .into_iter()
            .map(|n| f(n, state.coefficient(params, n), mode_frequency(params, n)))
            .sum();
    }
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 0..SUM_MAX_TERMS {
        let term = f(n, state.coefficient(params, n), mode_frequency(params, n));
        sum += term;
        let size = term.abs();
        if size == 0.0 && n > 0 {
            break;
        }
        if size < prev {
            let ratio = size / prev;
            let tail = size * ratio / (1.0 - ratio);
            if ratio < 0.9 && size <= SUM_REL_TOL * sum.abs() && tail <= SUM_REL_TOL * sum.abs() {
                break;
            }
        }
        prev = size;
    }
    sum
}

/// `(sum_n a_n, sum_n a_n l_n^2 / a^2)`, the coincidence limits of the state
/// correction and of its mixed time derivative.
pub fn moments<S: ModeCoefficients + ?Sized>(state: &S, params: &ModelParams) -> (f64, f64) {
    let a2 = params.a() * params.a();
    let sa = sum_over_modes(state, params, |_, an, _| an);
    let sal2 = sum_over_modes(state, params, |_, an, l| an * l * l / a2);
    (sa, sal2)
}

/// `sin((n+1) chi) / sin(chi) = C_n^{(1)}(cos chi)`.
fn chebyshev_u(n: u64, chi: f64, sin_chi: f64) -> f64 {
    if chi == 0.0 {
        (n + 1) as f64
    } else {
        (((n + 1) as f64) * chi).sin() / sin_chi
    }
}

/// `sum_{k > big_k} z^k sin(k chi) / sin chi` in closed form, `|z| < 1`.
fn geometric_tail(z: Complex64, chi: f64, big_k: u64) -> Complex64 {
    let p = (big_k + 1) as f64;
    if chi.sin().abs() < 1e-8 {
        // limit chi -> 0: sum_{k > K} k z^k
        return z.powf(p) * (p - big_k as f64 * z) / ((1.0 - z) * (1.0 - z));
    }
    let e = Complex64::from_polar(1.0, chi);
    let qp = z * e;
    let qm = z / e;
    let s = qp.powf(p) / (1.0 - qp) - qm.powf(p) / (1.0 - qm);
    s / (2.0 * Complex64::i() * chi.sin())
}

/// Regulated and truncated two-point function at separation `(dt, chi)`.
///
/// The ground-state mode sum carries the factor `e^{-eps l_n / a}` and is summed
/// over `n <= n_max`; the modes beyond `n_max` are added through the closed
/// geometric sum of their leading large-`n` behaviour, which is exact when
/// `c = 0`. The state correction is summed without regulator.
pub fn two_point<S: ModeCoefficients + ?Sized>(
    state: &S,
    params: &ModelParams,
    dt: f64,
    chi: f64,
    eps: f64,
    n_max: u64,
) -> Result<Complex64> {
    if !(0.0..PI).contains(&chi) {
        return Err(EsuError::Domain(format!(
            "geodesic distance must lie in [0, pi) (antipodal points excluded), got {chi}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) || !dt.is_finite() {
        return Err(EsuError::Domain(format!("regulator must be positive, got eps = {eps}")));
    }
    let a = params.a();
    let sin_chi = chi.sin();
    let pref = 1.0 / (4.0 * PI * PI * a * a);
    let mut ground = Complex64::new(0.0, 0.0);
    for n in 0..=n_max {
        let l = mode_frequency(params, n);
        let k = (n + 1) as f64;
        let phase = Complex64::from_polar((-eps * l / a).exp(), -dt * l / a);
        ground += phase * (k / l * chebyshev_u(n, chi, sin_chi));
    }
    let z = Complex64::from_polar((-eps / a).exp(), -dt / a);
    ground += geometric_tail(z, chi, n_max + 1);
    let correction = sum_over_modes(state, params, |n, an, l| {
        an / (n + 1) as f64 * (dt * l / a).cos() * chebyshev_u(n, chi, sin_chi)
    });
    Ok(ground * pref + correction)
}

/// Regularised energy density and pressure.
pub fn energy_pressure_reg<S: ModeCoefficients + ?Sized>(state: &S, params: &ModelParams) -> (f64, f64) {
    let (m0g, m2g) = ground_moments(params);
    let (sa, sal2) = moments(state, params);
    energy_pressure_from_moments(params, m0g + sa, m2g + sal2)
}

/// Regularised energy and pressure from the total coincidence limits.
pub(crate) fn energy_pressure_from_moments(params: &ModelParams, m0: f64, m2: f64) -> (f64, f64) {
    let c = coupling_c(params);
    let a = params.a();
    let m = params.m();
    let unit = c * c / (64.0 * PI * PI * a.powi(4));
    (m2 + 3.0 * unit, (m * m * m0 - m2) / 3.0 + unit)
}

/// Renormalised energy density and pressure.
pub fn energy_pressure_ren<S: ModeCoefficients + ?Sized>(state: &S, params: &ModelParams) -> (f64, f64) {
    let (e, p) = energy_pressure_reg(state, params);
    renormalized_energy_pressure(e, p, params)
}
