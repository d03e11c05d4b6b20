//! Gegenbauer polynomials, eigenspace dimensions and projection kernels of
//! the Laplace-Beltrami operator on the round sphere `S^p`.

use std::f64::consts::PI;

use crate::error::{EsuError, Result};

/// Degree `n` spherical harmonics on `S^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SphereDegree {
    pub n: u64,
    pub p: u32,
}

impl SphereDegree {
    pub fn new(n: u64, p: u32) -> Result<Self> {
        if p < 2 {
            return Err(EsuError::Domain(format!("sphere dimension p must be >= 2, got {p}")));
        }
        Ok(Self { n, p })
    }

    pub fn dimension(&self) -> u64 {
        eigenspace_dim(self.n, self.p)
    }

    pub fn eigenvalue(&self) -> u64 {
        laplacian_eigenvalue(self.n, self.p)
    }

    /// Gegenbauer index `(p - 1) / 2` belonging to this sphere.
    pub fn alpha(&self) -> f64 {
        0.5 * (self.p as f64 - 1.0)
    }
}

/// `C_n^{(alpha)}(y)` by forward three-term recurrence.
pub fn gegenbauer(n: u64, alpha: f64, y: f64) -> Result<f64> {
    if !(y.abs() <= 1.0) {
        return Err(EsuError::Domain(format!("Gegenbauer argument must lie in [-1, 1], got {y}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(EsuError::Domain(format!("Gegenbauer index must be positive, got {alpha}")));
    }
    Ok(gegenbauer_unchecked(n, alpha, y))
}

fn gegenbauer_unchecked(n: u64, alpha: f64, y: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * alpha * y;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 * y * (kf + alpha) * cur - (kf + 2.0 * alpha - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Iterator over `C_0^{(1)}(y), C_1^{(1)}(y), ...` using
/// `C_{n+2} = 2 y C_{n+1} - C_n`.
#[derive(Debug, Clone)]
pub struct Gegenbauer1 {
    y: f64,
    prev: f64,
    cur: f64,
}

impl Gegenbauer1 {
    pub fn new(y: f64) -> Self {
        // C_{-2} = -1 and C_{-1} = 0 continue the recurrence backwards
        Self { y, prev: -1.0, cur: 0.0 }
    }
}

impl Iterator for Gegenbauer1 {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let next = 2.0 * self.y * self.cur - self.prev;
        self.prev = self.cur;
        self.cur = next;
        Some(next)
    }
}

/// Dimension of the degree-`n` eigenspace on `S^p`; `(n + 1)^2` for `p = 3`.
pub fn eigenspace_dim(n: u64, p: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    let p = p as u64;
    let d = binomial(n + p - 1, n) + binomial(n + p - 2, n - 1);
    u64::try_from(d).expect("eigenspace dimension overflows u64")
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 - k as u128 + i) / i;
    }
    acc
}

/// Eigenvalue `n (n + p - 1)` of `-Delta` on `S^p`.
pub fn laplacian_eigenvalue(n: u64, p: u32) -> u64 {
    n * (n + p as u64 - 1)
}

/// `Gamma(k / 2)` for a positive integer `k`.
fn gamma_half(k: u32) -> f64 {
    debug_assert!(k > 0);
    if k % 2 == 0 {
        (1..k / 2).map(f64::from).product()
    } else {
        // Gamma(j + 1/2) = (2j)! / (4^j j!) sqrt(pi)
        let j = (k - 1) / 2;
        (1..=j).map(|i| (2 * i - 1) as f64 / 2.0).product::<f64>() * PI.sqrt()
    }
}

/// Area of the unit sphere `S^p`.
pub fn sphere_volume(p: u32) -> f64 {
    2.0 * PI.powf(0.5 * (p as f64 + 1.0)) / gamma_half(p + 1)
}

/// Integral kernel `E_n^{(p)}(chi)` of the orthogonal projection onto the
/// degree-`n` eigenspace, as a function of geodesic distance.
pub fn projection_kernel(n: u64, p: u32, chi: f64) -> Result<f64> {
    let deg = SphereDegree::new(n, p)?;
    if !(0.0..=PI).contains(&chi) {
        return Err(EsuError::Domain(format!("geodesic distance must lie in [0, pi], got {chi}")));
    }
    let pf = p as f64;
    let prefactor = (2.0 * n as f64 + pf - 1.0) * gamma_half(p + 1)
        / (2.0 * (pf - 1.0) * PI.powf(0.5 * (pf + 1.0)));
    Ok(prefactor * gegenbauer_unchecked(n, deg.alpha(), chi.cos().clamp(-1.0, 1.0)))
}
