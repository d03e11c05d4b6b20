//! Density-matrix spectrum, entropy, and the entropy-minimising solution.
//!
//! Entropy follows the sign convention `Tr(rho log rho) <= 0`; minimising it
//! is the same as maximising the usual von Neumann entropy.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{EsuError, Result};
use crate::params::{mode_frequency, ModelParams};
use crate::roots::{bisect, bracket_decreasing};
use crate::semiclassical::{classify, verify_solution, QfClass, SemiclassicalTargets, CLASSIFY_TOL};
use crate::states::{kms_coefficient, sum_over_modes, ModeCoefficients, SymmetricState};

const MAX_DOUBLINGS: usize = 200;
const BISECT_ITER: usize = 400;
const RESIDUAL_TOL: f64 = 1e-10;

/// `2 pi^2 a^2 l_n a_n / (n+1)^2`, the mean occupation of one mode.
fn occupation(params: &ModelParams, n: u64, an: f64, l: f64) -> f64 {
    let a = params.a();
    let k = (n + 1) as f64;
    2.0 * PI * PI * a * a * l * an / (k * k)
}

/// Eigenvalue `eps_n` of the one-particle Hamiltonian describing the state
/// as a density matrix: `eps_n = log(1 + 1/occupation)`.
pub fn occupation_spectrum<S: ModeCoefficients + ?Sized>(state: &S, params: &ModelParams, n: u64) -> Result<f64> {
    let an = state.coefficient(params, n);
    if !(an > 0.0) {
        return Err(EsuError::ModeInKernel { n });
    }
    let nu = occupation(params, n, an, mode_frequency(params, n));
    Ok((1.0 / nu).ln_1p())
}

/// `Tr(rho log rho) = sum_n (n+1)^2 [nu ln nu - (1+nu) ln(1+nu)]`.
pub fn von_neumann_entropy<S: ModeCoefficients + ?Sized>(state: &S, params: &ModelParams) -> f64 {
    sum_over_modes(state, params, |n, an, l| {
        if an <= 0.0 {
            return 0.0;
        }
        let nu = occupation(params, n, an, l);
        let k = (n + 1) as f64;
        k * k * (nu * nu.ln() - (1.0 + nu) * nu.ln_1p())
    })
}

/// Minimiser of the entropy for `m > 0`, of Bose form
/// `a_n = (n+1)^2 / (2 pi^2 a^2 l_n) / (e^{E_n} - 1)` with
/// `E_n = lambda m^2 / (2 pi^2 a^2 l_n) + beta l_n / a`.
///
/// `ground_exponent` is `E_0 > 0`, kept alongside `lambda` because
/// `lambda` approaches its lower limit with cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "bose")]
pub struct BoseState {
    pub lambda: f64,
    pub beta: f64,
    pub ground_exponent: f64,
}

impl BoseState {
    /// Bose state from `beta > 0` and the ground exponent `E_0 > 0`.
    pub fn from_ground_exponent(params: &ModelParams, beta: f64, e0: f64) -> Result<Self> {
        let m2 = params.m() * params.m();
        if m2 == 0.0 {
            return Err(EsuError::Domain("the Bose form needs m > 0".into()));
        }
        if !(beta > 0.0 && e0 > 0.0 && beta.is_finite() && e0.is_finite()) {
            return Err(EsuError::Domain(format!("need beta > 0 and E_0 > 0, got ({beta}, {e0})")));
        }
        let a = params.a();
        let l0 = mode_frequency(params, 0);
        let lambda = lambda_min(params, beta) + e0 * 2.0 * PI * PI * a * a * l0 / m2;
        Ok(Self { lambda, beta, ground_exponent: e0 })
    }

    /// Bose state from the Lagrange multipliers; `lambda` must exceed its lower limit.
    pub fn new(params: &ModelParams, lambda: f64, beta: f64) -> Result<Self> {
        let m2 = params.m() * params.m();
        if m2 == 0.0 {
            return Err(EsuError::Domain("the Bose form needs m > 0".into()));
        }
        check_beta(beta)?;
        let a = params.a();
        let l0 = mode_frequency(params, 0);
        let e0 = (lambda - lambda_min(params, beta)) * m2 / (2.0 * PI * PI * a * a * l0);
        if !(e0 > 0.0) {
            return Err(EsuError::Domain(format!(
                "lambda = {lambda} must exceed {} for beta = {beta}",
                lambda_min(params, beta)
            )));
        }
        Ok(Self { lambda, beta, ground_exponent: e0 })
    }

    /// Exponent `E_n`, written as `beta n(n+2)/(a l_n) + E_0 l_0 / l_n`.
    pub fn exponent(&self, params: &ModelParams, n: u64) -> f64 {
        let a = params.a();
        let l = mode_frequency(params, n);
        let l0 = mode_frequency(params, 0);
        let nf = n as f64;
        self.beta * nf * (nf + 2.0) / (a * l) + self.ground_exponent * l0 / l
    }
}

impl ModeCoefficients for BoseState {
    fn coefficient(&self, params: &ModelParams, n: u64) -> f64 {
        let a = params.a();
        let l = mode_frequency(params, n);
        let k = (n + 1) as f64;
        k * k / (2.0 * PI * PI * a * a * l) / self.exponent(params, n).exp_m1()
    }

    fn finite_support(&self) -> Option<Vec<u64>> {
        None
    }
}

/// `lambda_0(beta) = -2 pi^2 a l_0^2 beta / m^2`, where `E_0` vanishes.
pub fn lambda_min(params: &ModelParams, beta: f64) -> f64 {
    let m2 = params.m() * params.m();
    let l0 = mode_frequency(params, 0);
    -2.0 * PI * PI * params.a() * l0 * l0 * beta / m2
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(EsuError::Domain(format!("beta must be positive and finite, got {beta}")))
    }
}

fn sums<S: ModeCoefficients>(state: &S, params: &ModelParams) -> (f64, f64) {
    let (sa, sal2) = crate::states::moments(state, params);
    (params.m() * params.m() * sa, sal2)
}

/// `(G1, G2) = (m^2 sum a_n, sum a_n l_n^2 / a^2)` for the Bose form with
/// multipliers `(lambda, beta)`; for `m = 0` `lambda` is ignored.
pub fn constraint_sums(params: &ModelParams, lambda: f64, beta: f64) -> Result<(f64, f64)> {
    check_beta(beta)?;
    if params.m() == 0.0 {
        return Ok(sums(&SymmetricState::Kms { beta }, params));
    }
    Ok(sums(&BoseState::new(params, lambda, beta)?, params))
}

/// The entropy minimiser's state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MinimizerState {
    Symmetric(SymmetricState),
    Bose(BoseState),
}

impl ModeCoefficients for MinimizerState {
    fn coefficient(&self, params: &ModelParams, n: u64) -> f64 {
        match self {
            MinimizerState::Symmetric(s) => s.coefficient(params, n),
            MinimizerState::Bose(s) => s.coefficient(params, n),
        }
    }

    fn finite_support(&self) -> Option<Vec<u64>> {
        match self {
            MinimizerState::Symmetric(s) => s.finite_support(),
            MinimizerState::Bose(s) => s.finite_support(),
        }
    }
}

/// The entropy-minimising solution. `lambda` and `beta` are absent when the
/// solution does not come from finite multipliers: the ground state, the
/// single-mode boundary solution, and `lambda` for `m = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerResult {
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub residuals: [f64; 2],
    pub entropy: f64,
    pub state: MinimizerState,
}

fn residual_scale(t: &SemiclassicalTargets) -> f64 {
    1f64.max(t.y1.abs()).max(t.y2.abs())
}

fn finish(
    targets: &SemiclassicalTargets,
    state: MinimizerState,
    lambda: Option<f64>,
    beta: Option<f64>,
) -> Result<MinimizerResult> {
    let p = &targets.params;
    let (r1, r2) = verify_solution(&state, targets);
    let tol = RESIDUAL_TOL * residual_scale(targets);
    if !(r1.abs() <= tol && r2.abs() <= tol) {
        return Err(EsuError::SolverFailure(format!(
            "residuals ({r1:e}, {r2:e}) exceed {tol:e} at lambda = {lambda:?}, beta = {beta:?}"
        )));
    }
    let entropy = von_neumann_entropy(&state, p);
    Ok(MinimizerResult { lambda, beta, residuals: [r1, r2], entropy, state })
}

/// Solve `G2(beta) = y2` for the KMS family.
fn solve_kms_beta(params: &ModelParams, y2: f64) -> Result<f64> {
    let f = |beta: f64| sums(&SymmetricState::Kms { beta }, params).1 - y2;
    let (lo, hi) = bracket_decreasing(f, 1.0, MAX_DOUBLINGS)?;
    bisect(f, lo, hi, 1e-16, BISECT_ITER)
}

/// For fixed `beta`, the ground exponent `E_0` with `G1 = y1`.
fn solve_ground_exponent(params: &ModelParams, beta: f64, y1: f64) -> Result<f64> {
    let g1 = |e0: f64| sums(&BoseState { lambda: f64::NAN, beta, ground_exponent: e0 }, params).0 - y1;
    let (lo, hi) = bracket_decreasing(g1, 1.0, MAX_DOUBLINGS)?;
    bisect(g1, lo, hi, 1e-16, BISECT_ITER)
}

/// The solution minimising `Tr(rho log rho)` among all symmetric quasi-free solutions.
pub fn solve_entropy_minimizer(targets: &SemiclassicalTargets) -> Result<MinimizerResult> {
    let p = &targets.params;
    let class = classify(targets);
    match class.qf {
        QfClass::Empty => Err(EsuError::NoSolution(format!(
            "no symmetric quasi-free solution for Y1 = {:e}, Y2 = {:e}",
            targets.y1, targets.y2
        ))),
        QfClass::UniqueGround => finish(targets, MinimizerState::Symmetric(SymmetricState::Ground), None, None),
        QfClass::UniqueNonGround => {
            let m2 = p.m() * p.m();
            let state = SymmetricState::modes([(0, targets.y1 / m2)])?;
            finish(targets, MinimizerState::Symmetric(state), None, None)
        }
        QfClass::Infinite if p.m() == 0.0 => {
            let beta = solve_kms_beta(p, targets.y2)?;
            finish(targets, MinimizerState::Symmetric(SymmetricState::kms(beta)?), None, Some(beta))
        }
        QfClass::Infinite => {
            let y1 = targets.y1;
            let y2 = targets.y2;
            // G2 along the curve G1 = y1 decreases in beta, from +inf towards
            // (m^2 + xi R) y1 / m^2
            let mut failure = None;
            let mut h = |beta: f64| match solve_ground_exponent(p, beta, y1) {
                Ok(e0) => sums(&BoseState { lambda: f64::NAN, beta, ground_exponent: e0 }, p).1 - y2,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            };
            let bracket = bracket_decreasing(&mut h, 1.0, MAX_DOUBLINGS);
            let beta = bracket.and_then(|(lo, hi)| bisect(&mut h, lo, hi, 1e-16, BISECT_ITER));
            if let Some(e) = failure {
                return Err(e);
            }
            let beta = beta?;
            let e0 = solve_ground_exponent(p, beta, y1)?;
            let state = BoseState::from_ground_exponent(p, beta, e0)?;
            finish(targets, MinimizerState::Bose(state), Some(state.lambda), Some(beta))
        }
    }
}

/// The inverse temperature of the KMS solution, if the targets admit one.
pub fn kms_temperature_solve(targets: &SemiclassicalTargets) -> Option<f64> {
    let p = &targets.params;
    if !(targets.y2 > 0.0) {
        return None;
    }
    let m2 = p.m() * p.m();
    if m2 == 0.0 && targets.y1.abs() > CLASSIFY_TOL * targets.y1_scale {
        return None;
    }
    let beta = solve_kms_beta(p, targets.y2).ok()?;
    let (r1, r2) = verify_solution(&SymmetricState::Kms { beta }, targets);
    let tol = RESIDUAL_TOL * residual_scale(targets);
    (r1.abs() <= tol && r2.abs() <= tol).then_some(beta)
}

/// KMS coefficients for `n = 0..=n_max`, convenient for comparisons.
pub fn kms_coefficients(params: &ModelParams, beta: f64, n_max: u64) -> Result<Vec<f64>> {
    (0..=n_max).map(|n| kms_coefficient(params, beta, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiclassical::construct_two_mode;
    use crate::states::moments;

    fn params(a: f64, m: f64, xi: f64) -> ModelParams {
        ModelParams::new(a, 0.0, m, xi, 1.0).unwrap()
    }

    #[test]
    fn occupation_examples() {
        let p = params(1.0, 0.0, 1.0 / 6.0);
        let s = SymmetricState::modes([(0, 1.0 / (2.0 * PI * PI))]).unwrap();
        assert!((occupation_spectrum(&s, &p, 0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(occupation_spectrum(&s, &p, 1), Err(EsuError::ModeInKernel { n: 1 })));
        let big = SymmetricState::modes([(0, 1e12)]).unwrap();
        let e = occupation_spectrum(&big, &p, 0).unwrap();
        assert!(e > 0.0 && e < 1e-11);
    }

    #[test]
    fn kms_occupation_is_linear_in_frequency() {
        let p = params(1.4, 0.6, 0.1);
        for beta in [0.5, 1.0, 2.0] {
            let s = SymmetricState::kms(beta).unwrap();
            for n in 0..=100 {
                let e = occupation_spectrum(&s, &p, n).unwrap();
                let want = beta * mode_frequency(&p, n) / 1.4;
                assert!((e - want).abs() <= 1e-12 * want, "beta={beta} n={n}");
            }
        }
    }

    #[test]
    fn entropy_examples() {
        let p = params(1.0, 0.0, 1.0 / 6.0);
        assert_eq!(von_neumann_entropy(&SymmetricState::Ground, &p), 0.0);
        // one bosonic mode with Boltzmann ratio x: Tr rho log rho = log(1-x) + x log x / (1-x)
        let a0 = 0.37;
        let s = SymmetricState::modes([(0, a0)]).unwrap();
        let x = (-occupation_spectrum(&s, &p, 0).unwrap()).exp();
        let oracle = (1.0 - x).ln() + x * x.ln() / (1.0 - x);
        assert!((von_neumann_entropy(&s, &p) - oracle).abs() < 1e-12);
        // thermal state, mode energies n+1 with multiplicity (n+1)^2
        let kms = SymmetricState::kms(1.0).unwrap();
        let mut thermal = 0.0;
        for k in 1..200 {
            let e = k as f64;
            let x = (-e).exp();
            thermal += (k * k) as f64 * (-(e * x / (1.0 - x)) + (1.0 - x).ln());
        }
        assert!((von_neumann_entropy(&kms, &p) - thermal).abs() < 1e-10);
        assert!(von_neumann_entropy(&kms, &p) < 0.0);
    }

    #[test]
    fn constraint_sum_examples() {
        let p = params(1.0, 0.0, 1.0 / 6.0);
        let (g1, g2) = constraint_sums(&p, 123.0, 1.0).unwrap();
        assert_eq!(g1, 0.0);
        let oracle: f64 = (1..200).map(|k| (k as f64).powi(3) / (2.0 * PI * PI * ((k as f64).exp() - 1.0))).sum();
        assert!((g2 - oracle).abs() < 1e-14 * oracle);
        assert!(constraint_sums(&p, 0.0, 600.0).unwrap().1 < 1e-200);
        assert!(constraint_sums(&p, 0.0, 0.0).is_err());
        let q = params(1.0, 1.0, 0.0);
        assert!(constraint_sums(&q, lambda_min(&q, 1.0), 1.0).is_err());
    }

    #[test]
    fn constraint_sums_decrease() {
        let p = params(1.2, 0.7, 0.05);
        let mut beta = 0.3;
        while beta < 5.0 {
            let l0 = lambda_min(&p, beta);
            for dl in [0.1, 1.0, 10.0] {
                let (g1, g2) = constraint_sums(&p, l0 + dl, beta).unwrap();
                let (h1, h2) = constraint_sums(&p, l0 + dl * 1.01, beta).unwrap();
                assert!(h1 < g1 && h2 < g2);
                // at fixed lambda, raising beta moves lambda_0 down, so the point stays admissible
                let (k1, k2) = constraint_sums(&p, l0 + dl, beta * 1.01).unwrap();
                assert!(k1 < g1 && k2 < g2);
            }
            beta *= 1.7;
        }
    }

    #[test]
    fn massless_roundtrip() {
        let p = params(1.3, 0.0, 0.2);
        for beta in [0.5, 1.0, 2.0] {
            let y2 = constraint_sums(&p, 0.0, beta).unwrap().1;
            let t = SemiclassicalTargets::with_values(p, 0.0, y2).unwrap();
            let r = solve_entropy_minimizer(&t).unwrap();
            assert!((r.beta.unwrap() - beta).abs() < 1e-8);
            assert_eq!(kms_temperature_solve(&t).map(|b| (b - beta).abs() < 1e-8), Some(true));
        }
    }

    #[test]
    fn ground_and_empty_cases() {
        let p = params(1.0, 1.0, 0.0);
        let t = SemiclassicalTargets::with_values(p, 0.0, 0.0).unwrap();
        let r = solve_entropy_minimizer(&t).unwrap();
        assert_eq!(r.state, MinimizerState::Symmetric(SymmetricState::Ground));
        assert_eq!(r.entropy, 0.0);
        let t = SemiclassicalTargets::with_values(p, 1.0, 0.5).unwrap();
        assert!(matches!(solve_entropy_minimizer(&t), Err(EsuError::NoSolution(_))));
        let t = SemiclassicalTargets::with_values(params(1.0, 0.0, 0.2), 0.0, -1.0).unwrap();
        assert_eq!(kms_temperature_solve(&t), None);
    }

    #[test]
    fn boundary_case_is_single_mode() {
        let p = params(1.0, 1.0, 0.0);
        let t = SemiclassicalTargets::with_values(p, 0.4, 0.4).unwrap();
        let r = solve_entropy_minimizer(&t).unwrap();
        assert_eq!(r.state, MinimizerState::Symmetric(SymmetricState::modes([(0, 0.4)]).unwrap()));
    }

    #[test]
    fn massive_minimiser_beats_two_mode_solutions() {
        let p = params(1.0, 1.0, 0.0);
        let t = SemiclassicalTargets::with_values(p, 0.1, 0.5).unwrap();
        let r = solve_entropy_minimizer(&t).unwrap();
        assert!(r.residuals[0].abs() <= 1e-10 && r.residuals[1].abs() <= 1e-10);
        let MinimizerState::Bose(b) = r.state else { panic!("expected Bose form") };
        assert!(b.lambda > lambda_min(&p, b.beta));
        let (g1, g2) = constraint_sums(&p, b.lambda, b.beta).unwrap();
        assert!((g1 - 0.1).abs() < 1e-9 && (g2 - 0.5).abs() < 1e-9);
        for n in 2..=20 {
            let s = construct_two_mode(&t, n).unwrap();
            assert!(r.entropy <= von_neumann_entropy(&s, &p) + 1e-10, "n_high={n}");
        }
        // not on the KMS curve
        assert_eq!(kms_temperature_solve(&t), None);
    }

    /// The minimiser plus a finite perturbation.
    struct Perturbed<'a> {
        base: &'a BoseState,
        delta: [(u64, f64); 3],
    }

    impl ModeCoefficients for Perturbed<'_> {
        fn coefficient(&self, params: &ModelParams, n: u64) -> f64 {
            let d: f64 = self.delta.iter().filter(|(k, _)| *k == n).map(|(_, v)| v).sum();
            self.base.coefficient(params, n) + d
        }

        fn finite_support(&self) -> Option<Vec<u64>> {
            None
        }
    }

    #[test]
    fn first_order_optimality() {
        let p = params(1.1, 0.8, 0.02);
        let t = SemiclassicalTargets::with_values(p, 0.2, 1.5).unwrap();
        let r = solve_entropy_minimizer(&t).unwrap();
        let MinimizerState::Bose(b) = r.state else { panic!("expected Bose form") };
        let base = von_neumann_entropy(&b, &p);
        for (i, j, k) in [(0u64, 1u64, 2u64), (0, 2, 5), (1, 3, 4), (0, 4, 9)] {
            // direction with sum d = 0 and sum d l^2 = 0
            let (li, lj, lk) = (mode_frequency(&p, i), mode_frequency(&p, j), mode_frequency(&p, k));
            let (qi, qj, qk) = (li * li, lj * lj, lk * lk);
            let di = qk - qj;
            let dj = qi - qk;
            let dk = qj - qi;
            let smallest = [i, j, k].iter().map(|&n| b.coefficient(&p, n)).fold(f64::INFINITY, f64::min);
            let size = [di, dj, dk].iter().map(|v| v.abs()).fold(0.0, f64::max);
            for s in [1e-3, -1e-3, 1e-2, -1e-2] {
                let h = s * smallest / size;
                let pert = Perturbed { base: &b, delta: [(i, h * di), (j, h * dj), (k, h * dk)] };
                let (r1, r2) = verify_solution(&pert, &t);
                assert!(r1.abs() < 1e-9 && r2.abs() < 1e-9);
                let e = von_neumann_entropy(&pert, &p);
                assert!(e - base >= -1e-8, "({i},{j},{k}) s={s}: {e} < {base}");
            }
        }
        let (sa, _) = moments(&b, &p);
        assert!((0.64 * sa - 0.2).abs() < 1e-10);
    }
}
