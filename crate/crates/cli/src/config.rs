//! The JSON run configuration.

use std::path::{Path, PathBuf};

use esu_core::{ModelParams, RenormConstants, SymmetricState};
use serde::Deserialize;

use crate::error::{CliError, Result};

/// Everything a run needs besides the command line flags.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Inline parameters; exclusive with `params_file`.
    pub params: Option<ParamSet>,
    /// Parameter file, relative to the configuration file.
    pub params_file: Option<PathBuf>,
    /// Prescribed `(Y1, Y2)` replacing the computed targets.
    pub targets: Option<TargetOverride>,
    pub n_high: Option<u64>,
    /// State for `evaluate`; the ground state when absent.
    pub state: Option<SymmetricState>,
    #[serde(default)]
    pub points: Vec<Point>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_n_max")]
    pub n_max: u64,
    pub sweep: Option<SweepSpec>,
}

fn default_eps() -> f64 {
    1e-4
}

fn default_n_max() -> u64 {
    100_000
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetOverride {
    pub y1: f64,
    pub y2: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub dt: f64,
    pub chi: f64,
}

/// Unvalidated parameter values, so that sweeps can overwrite single entries.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSet {
    pub a: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub m: f64,
    pub xi: f64,
    pub kappa: f64,
    #[serde(default)]
    pub alpha: [f64; 5],
    #[serde(default)]
    pub beta: [f64; 3],
}

impl ParamSet {
    pub fn build(&self) -> Result<ModelParams> {
        let rc = RenormConstants::new(self.alpha, self.beta)?;
        Ok(ModelParams::with_renorm(self.a, self.lambda, self.m, self.xi, self.kappa, rc)?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
}

/// One sweep axis: either explicit `values` or a `range` `[start, stop, count]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: AxisName,
    pub values: Option<Vec<f64>>,
    pub range: Option<(f64, f64, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum AxisName {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "Lambda")]
    Lambda,
    #[serde(rename = "m")]
    M,
    #[serde(rename = "xi")]
    Xi,
    #[serde(rename = "kappa")]
    Kappa,
    /// Sets `xi` so that `m^2 a^2 + 6 xi - 1` takes the value.
    #[serde(rename = "c")]
    C,
    /// Sets `alpha3` so that `(3 alpha3 + alpha4 + alpha5) / 6` takes the value.
    #[serde(rename = "c_prime")]
    CPrime,
    #[serde(rename = "alpha1")]
    Alpha1,
    #[serde(rename = "alpha2")]
    Alpha2,
    #[serde(rename = "alpha3")]
    Alpha3,
    #[serde(rename = "alpha4")]
    Alpha4,
    #[serde(rename = "alpha5")]
    Alpha5,
    #[serde(rename = "beta1")]
    Beta1,
    #[serde(rename = "beta2")]
    Beta2,
    #[serde(rename = "beta3")]
    Beta3,
}

impl AxisName {
    pub fn label(self) -> &'static str {
        match self {
            AxisName::A => "a",
            AxisName::Lambda => "Lambda",
            AxisName::M => "m",
            AxisName::Xi => "xi",
            AxisName::Kappa => "kappa",
            AxisName::C => "c",
            AxisName::CPrime => "c_prime",
            AxisName::Alpha1 => "alpha1",
            AxisName::Alpha2 => "alpha2",
            AxisName::Alpha3 => "alpha3",
            AxisName::Alpha4 => "alpha4",
            AxisName::Alpha5 => "alpha5",
            AxisName::Beta1 => "beta1",
            AxisName::Beta2 => "beta2",
            AxisName::Beta3 => "beta3",
        }
    }

    /// Derived axes are applied after the plain ones so they see the final `a`, `m`, `alpha`.
    pub fn is_derived(self) -> bool {
        matches!(self, AxisName::C | AxisName::CPrime)
    }

    pub fn apply(self, p: &mut ParamSet, v: f64) {
        match self {
            AxisName::A => p.a = v,
            AxisName::Lambda => p.lambda = v,
            AxisName::M => p.m = v,
            AxisName::Xi => p.xi = v,
            AxisName::Kappa => p.kappa = v,
            AxisName::C => p.xi = (v + 1.0 - p.m * p.m * p.a * p.a) / 6.0,
            AxisName::CPrime => p.alpha[2] = (6.0 * v - p.alpha[3] - p.alpha[4]) / 3.0,
            AxisName::Alpha1 => p.alpha[0] = v,
            AxisName::Alpha2 => p.alpha[1] = v,
            AxisName::Alpha3 => p.alpha[2] = v,
            AxisName::Alpha4 => p.alpha[3] = v,
            AxisName::Alpha5 => p.alpha[4] = v,
            AxisName::Beta1 => p.beta[0] = v,
            AxisName::Beta2 => p.beta[1] = v,
            AxisName::Beta3 => p.beta[2] = v,
        }
    }
}

impl Axis {
    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match (&self.values, self.range) {
            (Some(v), None) => v.clone(),
            (None, Some((start, stop, count))) => {
                if count == 0 {
                    return Err(CliError::Config(format!("axis {}: range needs count >= 1", self.name.label())));
                }
                if count == 1 {
                    vec![start]
                } else {
                    let step = (stop - start) / (count - 1) as f64;
                    (0..count).map(|i| if i == count - 1 { stop } else { start + step * i as f64 }).collect()
                }
            }
            _ => {
                return Err(CliError::Config(format!(
                    "axis {}: give exactly one of `values` or `range`",
                    self.name.label()
                )))
            }
        };
        if pts.is_empty() || pts.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config(format!("axis {}: values must be finite and non-empty", self.name.label())));
        }
        Ok(pts)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let Some(file) = cfg.params_file.take() {
            if cfg.params.is_some() {
                return Err(CliError::Config("give either `params` or `params_file`, not both".into()));
            }
            let full = path.parent().unwrap_or(Path::new(".")).join(file);
            let text = std::fs::read_to_string(&full)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", full.display())))?;
            let params = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", full.display())))?;
            cfg.params = Some(params);
        }
        if cfg.params.is_none() {
            return Err(CliError::Config("missing `params` or `params_file`".into()));
        }
        Ok(cfg)
    }

    pub fn param_set(&self) -> &ParamSet {
        self.params.as_ref().expect("checked on load")
    }
}
