//! The finite coincidence-limit constants `X1`, `X2` and the ground-state
//! moments built from them.
//!
//! Both constants are convergent series whose summands decay like
//! `(n+1)^{-3}`. They are summed directly up to an index `K` chosen from the
//! requested tolerance, the `(n+1)^{-3}` tail is added in closed form through
//! the Hurwitz zeta value `zeta(3, K+1)`, and the next order of the
//! asymptotic expansion bounds what is left.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{EsuError, Result};
use crate::params::{coupling_c, ModelParams};

/// Default absolute tolerance on the discarded remainder.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Direct summation switches to the binomial expansion once `k^2 > 1e4 |c|`.
const EXPANSION_RATIO: f64 = 1e4;

/// Never truncate before this index so that the tail sums stay accurate.
const MIN_TERMS: u64 = 20;

/// A summed series together with the index it was truncated at and a bound
/// on the remainder that the truncation discarded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub n_used: u64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    X1,
    X2,
}

impl Which {
    /// Exponent `r` of the binomial `(1 + u)^r` behind the summand.
    fn exponent(self) -> f64 {
        match self {
            Which::X1 => -0.5,
            Which::X2 => 0.5,
        }
    }

    /// First power of `u = c / k^2` that survives the subtractions.
    fn first_power(self) -> usize {
        match self {
            Which::X1 => 2,
            Which::X2 => 3,
        }
    }

    fn closed_part(self, c: f64) -> f64 {
        match self {
            Which::X1 => -(1.0 + 6.0 * c) / 12.0,
            Which::X2 => (1.0 + 10.0 * c - 15.0 * c * c) / 120.0,
        }
    }
}

/// Generalised binomial coefficients `binom(r, j)` for `j = 0..=len-1`.
fn binomial_coeffs(r: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut b = 1.0;
    for j in 0..len {
        out.push(b);
        b *= (r - j as f64) / (j as f64 + 1.0);
    }
    out
}

struct Summand {
    which: Which,
    c: f64,
    coeffs: Vec<f64>,
}

impl Summand {
    fn new(which: Which, c: f64) -> Self {
        Self { which, c, coeffs: binomial_coeffs(which.exponent(), 12) }
    }

    /// Coefficient of `k^{-3}` in the large-`k` expansion of the summand.
    fn leading(&self) -> f64 {
        self.coeffs[self.which.first_power()] * self.c.powi(self.which.first_power() as i32)
    }

    /// Coefficient of the first neglected order `k^{-5}`, in absolute value.
    fn next_order(&self) -> f64 {
        let j = self.which.first_power() + 1;
        (self.coeffs[j] * self.c.powi(j as i32)).abs()
    }

    fn eval(&self, k: u64) -> f64 {
        let kf = k as f64;
        let c = self.c;
        if kf * kf > EXPANSION_RATIO * c.abs() {
            // k^p * sum_{j >= first} binom(r, j) u^j with |u| < 1e-4
            let u = c / (kf * kf);
            let first = self.which.first_power();
            let mut acc = 0.0;
            for j in (first..self.coeffs.len()).rev() {
                acc = acc * u + self.coeffs[j];
            }
            let scale = match self.which {
                Which::X1 => kf,
                Which::X2 => kf * kf * kf,
            };
            scale * acc * u.powi(first as i32)
        } else {
            // l - k = c / (l + k) removes the cancellation between the terms
            let l = (kf * kf + c).sqrt();
            let s = l + kf;
            match self.which {
                Which::X1 => c * c * (2.0 * kf + l) / (2.0 * kf * l * s * s),
                Which::X2 => c * c * c * (l + 3.0 * kf) / (8.0 * kf * s * s * s),
            }
        }
    }

    /// Bound on `sum_{k > big_k}` of everything beyond the `k^{-3}` term.
    fn remainder_bound(&self, big_k: u64) -> f64 {
        let kf = big_k as f64;
        let shrink = 1.0 - self.c.abs() / ((kf + 1.0) * (kf + 1.0));
        self.next_order() / (4.0 * kf.powi(4) * shrink)
    }
}

/// Hurwitz zeta `zeta(3, n) = sum_{k >= n} k^{-3}` by Euler-Maclaurin, `n >= 20`.
pub(crate) fn zeta3_tail(n: u64) -> f64 {
    let x = n as f64;
    let x2 = x * x;
    let inv2 = 1.0 / x2;
    // integral + f(n)/2 + Bernoulli corrections through B_10
    inv2 / 2.0 + inv2 / (2.0 * x) + inv2 * inv2 / 4.0 - inv2.powi(3) / 12.0 + inv2.powi(4) / 12.0
        - 0.15 * inv2.powi(5)
        + 5.0 / 12.0 * inv2.powi(6)
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_c(c: f64) -> Result<()> {
    if c.is_finite() && c > -1.0 {
        Ok(())
    } else {
        Err(EsuError::Domain(format!("series constants require c > -1, got {c}")))
    }
}

/// Smallest admissible truncation index for a requested tolerance.
fn truncation_index(s: &Summand, tol: f64) -> u64 {
    let c = s.c.abs();
    let by_size = (4.0 * c).sqrt().ceil();
    // bound(K) <= next / (3 K^4) once K^2 >= 4|c|
    let by_tol = (s.next_order() / (3.0 * tol)).powf(0.25).ceil();
    (by_size.max(by_tol) as u64).max(MIN_TERMS)
}

fn sum_truncated(which: Which, c: f64, big_k: u64) -> SeriesValue {
    if c == 0.0 {
        return SeriesValue { value: which.closed_part(0.0), n_used: 0, tail_bound: 0.0 };
    }
    let s = Summand::new(which, c);
    let mut acc = CompensatedSum::default();
    // smallest terms first
    for k in (1..=big_k).rev() {
        acc.add(s.eval(k));
    }
    acc.add(s.leading() * zeta3_tail(big_k + 1));
    acc.add(which.closed_part(c));
    SeriesValue { value: acc.total(), n_used: big_k, tail_bound: s.remainder_bound(big_k) }
}

fn sum_to_tol(which: Which, c: f64, tol: f64) -> Result<SeriesValue> {
    check_c(c)?;
    if !(tol > 0.0) {
        return Err(EsuError::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if c == 0.0 {
        return Ok(sum_truncated(which, c, 0));
    }
    let k = truncation_index(&Summand::new(which, c), tol);
    Ok(sum_truncated(which, c, k))
}

/// `X1 = -(1+6c)/12 + sum_n [(n+1)^2/l_n - (n+1) + c/(2(n+1))]`.
pub fn x1(c: f64) -> Result<SeriesValue> {
    sum_to_tol(Which::X1, c, DEFAULT_TOL)
}

/// [`x1`] with a caller-chosen remainder tolerance.
pub fn x1_with_tol(c: f64, tol: f64) -> Result<SeriesValue> {
    sum_to_tol(Which::X1, c, tol)
}

/// [`x1`] summed directly over exactly `n_terms` terms before the tail correction.
pub fn x1_truncated(c: f64, n_terms: u64) -> Result<SeriesValue> {
    check_c(c)?;
    Ok(sum_truncated(Which::X1, c, n_terms.max(MIN_TERMS).max((4.0 * c.abs()).sqrt().ceil() as u64)))
}

/// `X2 = (1+10c-15c^2)/120 + sum_n [(n+1)^2 l_n - (n+1)^3 - c(n+1)/2 + c^2/(8(n+1))]`.
pub fn x2(c: f64) -> Result<SeriesValue> {
    sum_to_tol(Which::X2, c, DEFAULT_TOL)
}

/// [`x2`] with a caller-chosen remainder tolerance.
pub fn x2_with_tol(c: f64, tol: f64) -> Result<SeriesValue> {
    sum_to_tol(Which::X2, c, tol)
}

/// [`x2`] summed directly over exactly `n_terms` terms before the tail correction.
pub fn x2_truncated(c: f64, n_terms: u64) -> Result<SeriesValue> {
    check_c(c)?;
    Ok(sum_truncated(Which::X2, c, n_terms.max(MIN_TERMS).max((4.0 * c.abs()).sqrt().ceil() as u64)))
}

/// Coincidence limits of the ground state minus the Hadamard parametrix:
/// `m0` for the field itself and `m2` for its mixed time derivative.
pub fn ground_moments(params: &ModelParams) -> (f64, f64) {
    let c = coupling_c(params);
    let x1 = x1(c).expect("c > -1 for valid parameters").value;
    let x2 = x2(c).expect("c > -1 for valid parameters").value;
    ground_moments_from(params, x1, x2)
}

pub(crate) fn ground_moments_from(params: &ModelParams, x1: f64, x2: f64) -> (f64, f64) {
    let c = coupling_c(params);
    let a2 = params.a() * params.a();
    let log = (0.5 * a2).ln();
    let m0 = -c / (16.0 * PI * PI * a2) * log + x1 / (4.0 * PI * PI * a2);
    let m2 = -c * c / (64.0 * PI * PI * a2 * a2) * (3.0 + log) + x2 / (4.0 * PI * PI * a2 * a2);
    (m0, m2)
}
