//! The semi-classical Einstein equation for symmetric states.
//!
//! A symmetric state with coefficients `a_n` solves the equation iff
//! `m^2 sum a_n = Y1` and `sum a_n l_n^2 / a^2 = Y2`, where the targets `Y1`,
//! `Y2` depend only on the parameters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{EsuError, Result};
use crate::params::{coupling_c, mode_frequency, ricci_scalar, ModelParams};
use crate::renorm::{effective_constants, EffectiveConstants};
use crate::series::{x1, x2, SeriesValue};
use crate::states::{moments, ModeCoefficients, SymmetricState};

/// Relative tolerance for the equalities in the classification.
pub const CLASSIFY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiclassicalTargets {
    pub y1: f64,
    pub y2: f64,
    pub eff: EffectiveConstants,
    pub params: ModelParams,
    /// The constants the targets were built from; `None` for [`SemiclassicalTargets::with_values`].
    pub x1: Option<SeriesValue>,
    pub x2: Option<SeriesValue>,
    /// Magnitude of the largest contributions to `y1`, `y2`, used as the
    /// reference for deciding that a target vanishes.
    pub y1_scale: f64,
    pub y2_scale: f64,
}

impl SemiclassicalTargets {
    /// Prescribed targets, bypassing the formulas. Zero tests are then exact.
    pub fn with_values(params: ModelParams, y1: f64, y2: f64) -> Result<Self> {
        if !y1.is_finite() || !y2.is_finite() {
            return Err(EsuError::InvalidParameter(format!("targets must be finite, got ({y1}, {y2})")));
        }
        let eff = effective_constants(&params)?;
        Ok(Self { y1, y2, eff, params, x1: None, x2: None, y1_scale: y1.abs(), y2_scale: y2.abs() })
    }
}

pub fn targets(params: &ModelParams) -> Result<SemiclassicalTargets> {
    let eff = effective_constants(params)?;
    let c = coupling_c(params);
    let x1 = x1(c)?;
    let x2 = x2(c)?;
    let a = params.a();
    let a4 = a.powi(4);
    let ma2 = params.m() * params.m() * a * a;
    let r = ricci_scalar(params);
    let log = (0.5 * a * a).ln();
    let k = eff.kappa_eff;

    let y1_parts = [
        -8.0 * ma2 * x1.value / (32.0 * PI * PI * a4),
        c * c / (32.0 * PI * PI * a4),
        2.0 * ma2 * c * log / (32.0 * PI * PI * a4),
        r / k,
        -4.0 * eff.lambda_eff / k,
    ];
    let y2_parts = [
        -16.0 * x2.value / (64.0 * PI * PI * a4),
        2.0 * c * c / (64.0 * PI * PI * a4),
        c * c * log / (64.0 * PI * PI * a4),
        r / (2.0 * k),
        -eff.lambda_eff / k,
        -eff.c_prime * r * r,
    ];
    let y1: f64 = y1_parts.iter().sum();
    let y2: f64 = y2_parts.iter().sum();
    if !y1.is_finite() || !y2.is_finite() {
        return Err(EsuError::InvalidParameter(format!("targets are not finite: ({y1}, {y2})")));
    }
    Ok(SemiclassicalTargets {
        y1,
        y2,
        eff,
        params: *params,
        x1: Some(x1),
        x2: Some(x2),
        y1_scale: y1_parts.iter().map(|v| v.abs()).fold(0.0, f64::max),
        y2_scale: y2_parts.iter().map(|v| v.abs()).fold(0.0, f64::max),
    })
}

/// Structure of the set of symmetric quasi-free solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QfClass {
    Empty,
    UniqueGround,
    UniqueNonGround,
    Infinite,
}

/// Structure of the set of all symmetric solutions, quasi-free or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FullClass {
    Empty,
    UniqueGround,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub qf: QfClass,
    pub full: FullClass,
    /// Set when an equality was accepted only within tolerance, and on the
    /// unique non-ground boundary.
    pub boundary: bool,
}

impl Classification {
    fn from_qf(qf: QfClass, within_tol: bool) -> Self {
        let full = match qf {
            QfClass::Empty => FullClass::Empty,
            QfClass::UniqueGround => FullClass::UniqueGround,
            QfClass::UniqueNonGround | QfClass::Infinite => FullClass::Infinite,
        };
        Self { qf, full, boundary: within_tol || qf == QfClass::UniqueNonGround }
    }
}

/// Outcome of comparing `x` with zero at a reference scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Negative,
    Zero { exact: bool },
    Positive,
}

fn sign_at_scale(x: f64, scale: f64) -> Sign {
    if x == 0.0 {
        Sign::Zero { exact: true }
    } else if x.abs() <= CLASSIFY_TOL * scale {
        Sign::Zero { exact: false }
    } else if x > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

pub fn classify(targets: &SemiclassicalTargets) -> Classification {
    let p = &targets.params;
    let m2 = p.m() * p.m();
    let s1 = sign_at_scale(targets.y1, targets.y1_scale);
    let s2 = sign_at_scale(targets.y2, targets.y2_scale);
    let inexact = |s: Sign| s == Sign::Zero { exact: false };
    if let (Sign::Zero { .. }, Sign::Zero { .. }) = (s1, s2) {
        return Classification::from_qf(QfClass::UniqueGround, inexact(s1) || inexact(s2));
    }
    if m2 == 0.0 {
        return match (s1, s2) {
            (Sign::Zero { .. }, Sign::Positive) => Classification::from_qf(QfClass::Infinite, inexact(s1)),
            _ => Classification::from_qf(QfClass::Empty, inexact(s1)),
        };
    }
    if s1 != Sign::Positive {
        return Classification::from_qf(QfClass::Empty, inexact(s1));
    }
    let lhs = m2 * targets.y2;
    let rhs = p.effective_mass_sq() * targets.y1;
    let scale = (m2 * targets.y2_scale).max(p.effective_mass_sq() * targets.y1_scale);
    match sign_at_scale(lhs - rhs, scale) {
        Sign::Positive => Classification::from_qf(QfClass::Infinite, false),
        Sign::Zero { exact } => Classification::from_qf(QfClass::UniqueNonGround, !exact),
        Sign::Negative => Classification::from_qf(QfClass::Empty, false),
    }
}

/// An explicit solution supported on at most the modes `0` and `n_high`.
pub fn construct_two_mode(targets: &SemiclassicalTargets, n_high: u64) -> Result<SymmetricState> {
    let p = &targets.params;
    let class = classify(targets);
    let (y1, y2) = (targets.y1, targets.y2);
    let a2 = p.a() * p.a();
    let m2 = p.m() * p.m();
    match class.qf {
        QfClass::Empty => Err(EsuError::NoSolution(format!(
            "no symmetric quasi-free solution for Y1 = {y1:e}, Y2 = {y2:e}"
        ))),
        QfClass::UniqueGround => Ok(SymmetricState::Ground),
        QfClass::UniqueNonGround => SymmetricState::modes([(0, y1 / m2)]),
        QfClass::Infinite if m2 == 0.0 => {
            let l = mode_frequency(p, n_high);
            SymmetricState::modes([(n_high, a2 * y2 / (l * l))])
        }
        QfClass::Infinite => {
            if n_high == 0 {
                return Err(EsuError::NoSolutionWithN {
                    n_high,
                    reason: "the upper mode must differ from the ground mode".into(),
                });
            }
            let l0 = mode_frequency(p, 0);
            let ln = mode_frequency(p, n_high);
            let (l02, ln2) = (l0 * l0, ln * ln);
            let q = y1 / (a2 * m2);
            if ln2 * q < y2 {
                return Err(EsuError::NoSolutionWithN {
                    n_high,
                    reason: format!("need l_N^2 Y1/(a^2 m^2) >= Y2, got {:e} < {y2:e}", ln2 * q),
                });
            }
            let pre = a2 / (ln2 - l02);
            let a0 = (pre * (ln2 * q - y2)).max(0.0);
            let an = (pre * (y2 - l02 * q)).max(0.0);
            SymmetricState::modes([(0, a0), (n_high, an)])
        }
    }
}

/// Smallest `n_high` accepted by [`construct_two_mode`].
pub fn suggest_n_high(targets: &SemiclassicalTargets) -> Result<u64> {
    let p = &targets.params;
    let class = classify(targets);
    match class.qf {
        QfClass::Empty => Err(EsuError::NoSolution(format!(
            "no symmetric quasi-free solution for Y1 = {:e}, Y2 = {:e}",
            targets.y1, targets.y2
        ))),
        QfClass::Infinite if p.m() > 0.0 => {
            let a2 = p.a() * p.a();
            let need = a2 * p.m() * p.m() * targets.y2 / targets.y1;
            let c = coupling_c(p);
            let guess = ((need - c).max(0.0).sqrt() - 1.0).floor().max(1.0);
            if !guess.is_finite() || guess > 1e15 {
                return Err(EsuError::NoSolution(format!("required mode index is out of range ({guess:e})")));
            }
            let mut n = (guess as u64).saturating_sub(1).max(1);
            while {
                let l = mode_frequency(p, n);
                l * l * targets.y1 / (a2 * p.m() * p.m()) < targets.y2
            } {
                n += 1;
            }
            Ok(n)
        }
        _ => Ok(0),
    }
}

/// Residuals `(m^2 sum a_n - Y1, sum a_n l_n^2 / a^2 - Y2)`.
pub fn verify_solution<S: ModeCoefficients + ?Sized>(state: &S, targets: &SemiclassicalTargets) -> (f64, f64) {
    let p = &targets.params;
    let (sa, sal2) = moments(state, p);
    (p.m() * p.m() * sa - targets.y1, sal2 - targets.y2)
}

/// Targets after the rescaling `a -> lam a` with `xi`, `m a`, `Lambda a^2`
/// and `kappa / a^2` held fixed.
pub fn scale_transform(targets: &SemiclassicalTargets, lam: f64) -> Result<(f64, f64)> {
    if !(lam > 0.0 && lam.is_finite()) {
        return Err(EsuError::Domain(format!("scale factor must be positive, got {lam}")));
    }
    let p = &targets.params;
    let a = p.a();
    let a4 = a.powi(4);
    let c = coupling_c(p);
    let ma2 = p.m() * p.m() * a * a;
    let log = lam.ln();
    let s = lam.powi(-4);
    Ok((
        s * (targets.y1 + ma2 * c * log / (8.0 * PI * PI * a4)),
        s * (targets.y2 + c * c * log / (32.0 * PI * PI * a4)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::RenormConstants;
    use crate::series::ground_moments;
    use proptest::prelude::*;

    fn params(a: f64, lambda: f64, m: f64, xi: f64, kappa: f64) -> ModelParams {
        ModelParams::new(a, lambda, m, xi, kappa).unwrap()
    }

    #[test]
    fn conformal_massless_targets() {
        let (a, lam, kappa) = (1.7, 0.3, 2.0);
        let t = targets(&params(a, lam, 0.0, 1.0 / 6.0, kappa)).unwrap();
        let r = 6.0 / (a * a);
        assert!((t.y1 - (r - 4.0 * lam) / kappa).abs() < 1e-15);
        let y2 = -1.0 / (480.0 * PI * PI * a.powi(4)) + (r - 2.0 * lam) / (2.0 * kappa);
        assert!((t.y2 - y2).abs() < 1e-15);
        let t = targets(&params(1.0, 1.5, 0.0, 1.0 / 6.0, 1.0)).unwrap();
        assert_eq!(t.y1, 0.0);
    }

    #[test]
    fn y1_cross_check_with_ground_moment() {
        let rc = RenormConstants::new([0.1, 0.2, 0.3, -0.1, 0.05], [0.2, -0.1, 0.3]).unwrap();
        let p = ModelParams::with_renorm(1.3, 0.4, 0.9, 0.12, 1.5, rc).unwrap();
        let t = targets(&p).unwrap();
        let (m0, _) = ground_moments(&p);
        let c = coupling_c(&p);
        let a4 = 1.3f64.powi(4);
        let want = (6.0 / 1.69 - 4.0 * t.eff.lambda_eff) / t.eff.kappa_eff - 0.81 * m0 + c * c / (32.0 * PI * PI * a4);
        assert!((t.y1 - want).abs() < 1e-13);
    }

    #[test]
    fn singular_renormalisation_propagates() {
        let rc = RenormConstants::new([0.0; 5], [0.0, 1.0, 0.0]).unwrap();
        let p = ModelParams::with_renorm(1.0, 1.0, 0.0, 0.2, 1.0, rc).unwrap();
        assert!(matches!(targets(&p), Err(EsuError::SingularRenormalization { .. })));
    }

    fn fixed(m: f64, xi: f64, y1: f64, y2: f64) -> SemiclassicalTargets {
        SemiclassicalTargets::with_values(params(1.0, 0.0, m, xi, 1.0), y1, y2).unwrap()
    }

    #[test]
    fn classification_examples() {
        let c = classify(&fixed(0.0, 0.2, 0.0, 0.0));
        assert_eq!((c.qf, c.full, c.boundary), (QfClass::UniqueGround, FullClass::UniqueGround, false));
        let c = classify(&fixed(0.0, 0.2, 0.0, 1.0));
        assert_eq!((c.qf, c.full), (QfClass::Infinite, FullClass::Infinite));
        let c = classify(&fixed(1.0, 0.0, 1.0, 2.0));
        assert_eq!((c.qf, c.full), (QfClass::Infinite, FullClass::Infinite));
        let c = classify(&fixed(1.0, 0.0, 1.0, 1.0));
        assert_eq!((c.qf, c.full, c.boundary), (QfClass::UniqueNonGround, FullClass::Infinite, true));
        assert_eq!(classify(&fixed(1.0, 0.0, 1.0, 0.5)).qf, QfClass::Empty);
        assert_eq!(classify(&fixed(1.0, 0.0, 0.0, 0.5)).qf, QfClass::Empty);
        assert_eq!(classify(&fixed(1.0, 0.0, -1.0, 0.5)).qf, QfClass::Empty);
        assert_eq!(classify(&fixed(0.0, 0.2, 0.5, 1.0)).qf, QfClass::Empty);
        assert_eq!(classify(&fixed(0.0, 0.2, 0.0, -1.0)).qf, QfClass::Empty);
        let json = serde_json::to_string(&classify(&fixed(0.0, 0.2, 0.0, 0.0))).unwrap();
        assert_eq!(json, r#"{"qf":"unique_ground","full":"unique_ground","boundary":false}"#);
    }

    #[test]
    fn classification_tolerance_sets_boundary() {
        let c = classify(&fixed(1.0, 0.0, 1.0, 1.0 + 1e-14));
        assert_eq!(c.qf, QfClass::UniqueNonGround);
        assert!(c.boundary);
        // computed targets cancelling to rounding level count as zero
        let mut t = targets(&params(1.0, 1.5, 0.0, 1.0 / 6.0, 1.0)).unwrap();
        t.y1 = 1e-16;
        let c = classify(&t);
        assert_eq!(c.qf, QfClass::Infinite);
        assert!(c.boundary);
    }

    #[test]
    fn two_mode_examples() {
        assert_eq!(construct_two_mode(&fixed(1.0, 0.0, 0.0, 0.0), 4).unwrap(), SymmetricState::Ground);
        let s = construct_two_mode(&fixed(0.0, 1.0 / 6.0, 0.0, 1.0), 2).unwrap();
        let SymmetricState::Modes { coeffs } = &s else { panic!("expected modes") };
        assert_eq!(coeffs.len(), 1);
        assert!((coeffs[&2] - 1.0 / 9.0).abs() < 1e-16);
        let t = fixed(1.0, 0.0, 1.0, 2.0);
        let s = construct_two_mode(&t, 5).unwrap();
        let (r1, r2) = verify_solution(&s, &t);
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
        assert!(matches!(construct_two_mode(&fixed(1.0, 0.0, 1.0, 0.5), 5), Err(EsuError::NoSolution(_))));
        // l_1^2 = 4 here, so Y2 = 10 needs a higher mode
        assert!(matches!(
            construct_two_mode(&fixed(1.0, 0.0, 1.0, 10.0), 1),
            Err(EsuError::NoSolutionWithN { n_high: 1, .. })
        ));
        assert!(matches!(construct_two_mode(&t, 0), Err(EsuError::NoSolutionWithN { .. })));
    }

    #[test]
    fn suggested_index_is_minimal() {
        let t = fixed(1.0, 0.0, 1.0, 10.0);
        let n = suggest_n_high(&t).unwrap();
        assert!(construct_two_mode(&t, n).is_ok());
        assert!(n == 1 || construct_two_mode(&t, n - 1).is_err());
        assert_eq!(n, 3);
        assert_eq!(suggest_n_high(&fixed(0.0, 0.2, 0.0, 1.0)).unwrap(), 0);
        assert!(suggest_n_high(&fixed(1.0, 0.0, -1.0, 1.0)).is_err());
    }

    #[test]
    fn verify_examples() {
        assert_eq!(verify_solution(&SymmetricState::Ground, &fixed(1.0, 0.0, 0.0, 0.0)), (0.0, 0.0));
        assert_eq!(verify_solution(&SymmetricState::Ground, &fixed(1.0, 0.0, 0.0, 1.0)), (0.0, -1.0));
    }

    #[test]
    fn scale_transform_examples() {
        let t = targets(&params(1.3, 0.2, 0.7, 0.05, 1.1)).unwrap();
        assert_eq!(scale_transform(&t, 1.0).unwrap(), (t.y1, t.y2));
        assert!(scale_transform(&t, 0.0).is_err());
        let t0 = targets(&params(1.3, 0.2, 0.0, 1.0 / 6.0, 1.1)).unwrap();
        let (a, b) = scale_transform(&t0, 2.0).unwrap();
        assert!((a - t0.y1 / 16.0).abs() < 1e-16 && (b - t0.y2 / 16.0).abs() < 1e-16);
    }

    #[test]
    fn scale_transform_matches_recomputation() {
        for (m, xi) in [(0.8, 0.05), (0.0, 0.3), (1.2, -0.1)] {
            let p = params(1.3, 0.2, m, xi, 1.1);
            let t = targets(&p).unwrap();
            for lam in [0.5, 2.0, 10.0] {
                let (a, b) = scale_transform(&t, lam).unwrap();
                let r = targets(&p.rescaled(lam).unwrap()).unwrap();
                assert!((a - r.y1).abs() < 1e-10 * r.y1.abs().max(1.0), "m={m} lam={lam}");
                assert!((b - r.y2).abs() < 1e-10 * r.y2.abs().max(1.0), "m={m} lam={lam}");
            }
        }
    }

    #[test]
    fn classification_invariant_under_conformal_scaling() {
        let p = params(1.0, 1.5, 0.0, 1.0 / 6.0, 1.0);
        let t = targets(&p).unwrap();
        let base = classify(&t);
        for lam in [0.3, 1.0, 7.0] {
            let (y1, y2) = scale_transform(&t, lam).unwrap();
            let scaled = SemiclassicalTargets::with_values(p.rescaled(lam).unwrap(), y1, y2).unwrap();
            assert_eq!(classify(&scaled).qf, base.qf);
        }
    }

    proptest! {
        #[test]
        fn infinite_branch_family(
            m in 0.1f64..2.0, xi in -0.1f64..0.5, y1 in 0.01f64..5.0, excess in 0.01f64..20.0, extra in 0u64..30,
        ) {
            let p = ModelParams::new(1.0, 0.0, m, xi, 1.0);
            prop_assume!(p.is_ok());
            let p = p.unwrap();
            prop_assume!(coupling_c(&p) > -0.99);
            let m2 = m * m;
            let y2 = (p.effective_mass_sq() * y1 + excess) / m2;
            let t = SemiclassicalTargets::with_values(p, y1, y2).unwrap();
            prop_assert_eq!(classify(&t).qf, QfClass::Infinite);
            let n = suggest_n_high(&t).unwrap();
            let s1 = construct_two_mode(&t, n + extra).unwrap();
            let s2 = construct_two_mode(&t, n + extra + 1).unwrap();
            prop_assert_ne!(&s1, &s2);
            for s in [&s1, &s2] {
                let (r1, r2) = verify_solution(s, &t);
                let scale = 1.0f64.max(y1.abs()).max(y2.abs());
                prop_assert!(r1.abs() <= 1e-12 * scale && r2.abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn bijection_by_substitution(m in 0.1f64..2.0, a0 in 0.0f64..2.0, a5 in 0.0f64..2.0) {
            let p = params(1.0, 0.0, m, 0.1, 1.0);
            let state = SymmetricState::modes([(0, a0), (5, a5)]).unwrap();
            let (sa, sal2) = moments(&state, &p);
            let t = SemiclassicalTargets::with_values(p, m * m * sa, sal2).unwrap();
            let (r1, r2) = verify_solution(&state, &t);
            prop_assert!(r1 == 0.0 && r2 == 0.0);
            let off = SemiclassicalTargets::with_values(p, m * m * sa + 1e-6, sal2).unwrap();
            prop_assert!(verify_solution(&state, &off).0.abs() > 1e-7);
        }
    }
}
