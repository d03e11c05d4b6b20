//! Physical parameters of the Einstein static universe and the spectral data
//! they determine.
//!
//! All quantities are pure numbers in units where the Hadamard length scale
//! equals one, so `log(a^2 / 2)` is evaluated with `a` as given.

use serde::{Deserialize, Serialize};

use crate::error::{EsuError, Result};

/// Coefficients of the local curvature terms in the renormalised stress tensor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RenormConstants {
    pub alpha: [f64; 5],
    pub beta: [f64; 3],
}

impl RenormConstants {
    pub fn new(alpha: [f64; 5], beta: [f64; 3]) -> Result<Self> {
        if alpha.iter().chain(beta.iter()).any(|v| !v.is_finite()) {
            return Err(EsuError::InvalidParameter(
                "renormalisation constants must be finite".into(),
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self, i: usize) -> f64 {
        self.alpha[i - 1]
    }

    pub fn beta(&self, i: usize) -> f64 {
        self.beta[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().chain(self.beta.iter()).all(|&v| v == 0.0)
    }
}

/// Curvature of the static universe: Ricci scalar and the energy component
/// of the Einstein tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureData {
    pub ricci_scalar: f64,
    pub g00: f64,
}

/// Physical inputs `(a, Lambda, m, xi, kappa)` plus renormalisation constants.
///
/// Validated on construction and immutable afterwards: `a > 0`, `m >= 0`,
/// `kappa != 0`, everything finite, and `c = m^2 a^2 + 6 xi - 1 > -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsDocument", into = "ParamsDocument")]
pub struct ModelParams {
    a: f64,
    lambda: f64,
    m: f64,
    xi: f64,
    kappa: f64,
    renorm: RenormConstants,
}

impl ModelParams {
    pub fn new(a: f64, lambda: f64, m: f64, xi: f64, kappa: f64) -> Result<Self> {
        Self::with_renorm(a, lambda, m, xi, kappa, RenormConstants::default())
    }

    pub fn with_renorm(
        a: f64,
        lambda: f64,
        m: f64,
        xi: f64,
        kappa: f64,
        renorm: RenormConstants,
    ) -> Result<Self> {
        for (name, v) in [("a", a), ("Lambda", lambda), ("m", m), ("xi", xi), ("kappa", kappa)] {
            if !v.is_finite() {
                return Err(EsuError::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        if a <= 0.0 {
            return Err(EsuError::InvalidParameter(format!("radius a must be positive, got {a}")));
        }
        if m < 0.0 {
            return Err(EsuError::InvalidParameter(format!("mass m must be non-negative, got {m}")));
        }
        if kappa == 0.0 {
            return Err(EsuError::InvalidParameter("kappa must be non-zero".into()));
        }
        let renorm = RenormConstants::new(renorm.alpha, renorm.beta)?;
        let c = m * m * a * a + 6.0 * xi - 1.0;
        if c <= -1.0 {
            return Err(EsuError::InvalidParameter(format!(
                "c = m^2 a^2 + 6 xi - 1 = {c} must exceed -1 (m^2 + xi R > 0)"
            )));
        }
        Ok(Self { a, lambda, m, xi, kappa, renorm })
    }

    /// Parameters with the same physics but a different renormalisation.
    pub fn replace_renorm(&self, renorm: RenormConstants) -> Result<Self> {
        Self::with_renorm(self.a, self.lambda, self.m, self.xi, self.kappa, renorm)
    }

    /// Rescale `a -> lam a` keeping `xi`, `m^2 a^2`, `Lambda a^2` and `kappa / a^2` fixed.
    pub fn rescaled(&self, lam: f64) -> Result<Self> {
        if !(lam > 0.0 && lam.is_finite()) {
            return Err(EsuError::Domain(format!("scale factor must be positive, got {lam}")));
        }
        Self::with_renorm(
            self.a * lam,
            self.lambda / (lam * lam),
            self.m / lam,
            self.xi,
            self.kappa * lam * lam,
            self.renorm,
        )
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Cosmological constant.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn renorm(&self) -> &RenormConstants {
        &self.renorm
    }

    pub fn curvature(&self) -> CurvatureData {
        let r = ricci_scalar(self);
        CurvatureData { ricci_scalar: r, g00: 0.5 * r }
    }

    /// `m^2 + xi R = l_0^2 / a^2`, strictly positive.
    pub fn effective_mass_sq(&self) -> f64 {
        (coupling_c(self) + 1.0) / (self.a * self.a)
    }
}

/// The coupling parameter `c = m^2 a^2 + 6 xi - 1`; `c > -1` for valid parameters.
pub fn coupling_c(params: &ModelParams) -> f64 {
    params.m * params.m * params.a * params.a + 6.0 * params.xi - 1.0
}

/// Mode frequency `l_n = sqrt((n+1)^2 + c)`, the square root of the n-th
/// eigenvalue of `-Delta + m^2 a^2 + 6 xi` on the unit three-sphere.
pub fn mode_frequency(params: &ModelParams, n: u64) -> f64 {
    mode_frequency_c(coupling_c(params), n)
}

/// [`mode_frequency`] for a bare value of `c`.
pub fn mode_frequency_c(c: f64, n: u64) -> f64 {
    let k = (n + 1) as f64;
    (k * k + c).sqrt()
}

/// Ricci scalar `R = 6 / a^2`.
pub fn ricci_scalar(params: &ModelParams) -> f64 {
    6.0 / (params.a * params.a)
}

/// JSON form: `{"a","Lambda","m","xi","kappa","alpha":[5],"beta":[3]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDocument {
    a: f64,
    #[serde(rename = "Lambda")]
    lambda: f64,
    m: f64,
    xi: f64,
    kappa: f64,
    #[serde(default)]
    alpha: [f64; 5],
    #[serde(default)]
    beta: [f64; 3],
}

impl TryFrom<ParamsDocument> for ModelParams {
    type Error = EsuError;

    fn try_from(doc: ParamsDocument) -> Result<Self> {
        ModelParams::with_renorm(
            doc.a,
            doc.lambda,
            doc.m,
            doc.xi,
            doc.kappa,
            RenormConstants { alpha: doc.alpha, beta: doc.beta },
        )
    }
}

impl From<ModelParams> for ParamsDocument {
    fn from(p: ModelParams) -> Self {
        ParamsDocument {
            a: p.a,
            lambda: p.lambda,
            m: p.m,
            xi: p.xi,
            kappa: p.kappa,
            alpha: p.renorm.alpha,
            beta: p.renorm.beta,
        }
    }
}

impl ModelParams {
    /// Parse a parameter document; missing renormalisation arrays default to zeros.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| EsuError::InvalidParameter(e.to_string()))
    }
}
