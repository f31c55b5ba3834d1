//! Particle, Jacobi and spherical coordinates of the four-particle chain.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::model::ModelParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoordError {
    #[error("spherical angles are undefined at the origin of Jacobi space")]
    DegenerateOrigin,
    #[error("configuration lies on the Wolfes plane x1 + x2 = 2 x3 (X2 = 0)")]
    Singular,
    #[error("spherical coordinates out of domain: r={r}, theta={theta}, phi={phi}")]
    OutOfDomain { r: f64, theta: f64, phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleConfig {
    pub positions: [f64; 4],
}

impl ParticleConfig {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self {
            positions: [x1, x2, x3, x4],
        }
    }
}

/// Internal coordinates `(X1, X2, X3)` plus the center-of-mass coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiConfig {
    pub internal: [f64; 3],
    pub center: f64,
}

impl JacobiConfig {
    pub const fn new(x1: f64, x2: f64, x3: f64, center: f64) -> Self {
        Self {
            internal: [x1, x2, x3],
            center,
        }
    }

    pub fn radius(&self) -> f64 {
        let [a, b, c] = self.internal;
        (a * a + b * b + c * c).sqrt()
    }
}

/// `r ≥ 0`, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalConfig {
    r: f64,
    theta: f64,
    phi: f64,
}

impl SphericalConfig {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self, CoordError> {
        let ok =
            r.is_finite() && r >= 0.0 && (0.0..=PI).contains(&theta) && (0.0..TAU).contains(&phi);
        if ok {
            Ok(Self { r, theta, phi })
        } else {
            Err(CoordError::OutOfDomain { r, theta, phi })
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Rows map particle positions to `(X1, X2, X3, X)`.
pub fn jacobi_matrix() -> [[f64; 4]; 4] {
    let s6 = 1.0 / 6f64.sqrt();
    let s12 = 1.0 / 12f64.sqrt();
    [
        [INV_SQRT2, -INV_SQRT2, 0.0, 0.0],
        [s6, s6, -2.0 * s6, 0.0],
        [s12, s12, s12, -3.0 * s12],
        [0.5, 0.5, 0.5, 0.5],
    ]
}

pub fn to_jacobi(p: &ParticleConfig) -> JacobiConfig {
    let [x1, x2, x3, x4] = p.positions;
    JacobiConfig::new(
        (x1 - x2) / 2f64.sqrt(),
        (x1 + x2 - 2.0 * x3) / 6f64.sqrt(),
        (x1 + x2 + x3 - 3.0 * x4) / 12f64.sqrt(),
        0.5 * (x1 + x2 + x3 + x4),
    )
}

/// Inverse of [`to_jacobi`]; the matrix is orthogonal so this is its transpose.
pub fn from_jacobi(j: &JacobiConfig) -> ParticleConfig {
    let m = jacobi_matrix();
    let y = [j.internal[0], j.internal[1], j.internal[2], j.center];
    let mut x = [0.0; 4];
    for (col, xi) in x.iter_mut().enumerate() {
        *xi = (0..4).map(|row| m[row][col] * y[row]).sum();
    }
    ParticleConfig { positions: x }
}

/// Drops the center of mass. φ is 0 on the polar axis.
pub fn to_spherical(j: &JacobiConfig) -> Result<SphericalConfig, CoordError> {
    let [x1, x2, x3] = j.internal;
    let r = j.radius();
    if r == 0.0 {
        return Err(CoordError::DegenerateOrigin);
    }
    let theta = (x3 / r).clamp(-1.0, 1.0).acos();
    let phi = if x1 == 0.0 && x2 == 0.0 {
        0.0
    } else {
        let raw = x2.atan2(x1);
        let wrapped = if raw < 0.0 { raw + TAU } else { raw };
        // -0.0 + 2π rounds to exactly 2π
        if wrapped >= TAU {
            0.0
        } else {
            wrapped
        }
    };
    SphericalConfig::new(r, theta, phi)
}

pub fn from_spherical(s: &SphericalConfig) -> JacobiConfig {
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    JacobiConfig::new(s.r * st * cp, s.r * st * sp, s.r * ct, 0.0)
}

/// `Σ_{i<j} (x_i - x_j)²`.
pub fn pair_sum(p: &ParticleConfig) -> f64 {
    let x = &p.positions;
    let mut sum = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let d = x[i] - x[j];
            sum += d * d;
        }
    }
    sum
}

/// Potential energy of the model in particle coordinates.
pub fn potential_particle(p: &ParticleConfig, params: &ModelParams) -> Result<f64, CoordError> {
    let [x1, x2, x3, _] = p.positions;
    let wolfes = x1 + x2 - 2.0 * x3;
    let w2 = params.omega() * params.omega();
    Ok(w2 / 8.0 * pair_sum(p) + wolfes_term(params.g1_squared(), wolfes * wolfes)?)
}

/// Internal potential `(ω²/2)|X|² + g₁²/(6X2²)`; the center of mass is free.
pub fn potential_jacobi(j: &JacobiConfig, params: &ModelParams) -> Result<f64, CoordError> {
    let [a, b, c] = j.internal;
    let w2 = params.omega() * params.omega();
    Ok(0.5 * w2 * (a * a + b * b + c * c) + wolfes_term(params.g1_squared(), 6.0 * b * b)?)
}

/// `g1² / denominator`; the pole only exists when the coupling is on.
fn wolfes_term(g1_squared: f64, denominator: f64) -> Result<f64, CoordError> {
    if g1_squared == 0.0 {
        Ok(0.0)
    } else if denominator == 0.0 {
        Err(CoordError::Singular)
    } else {
        Ok(g1_squared / denominator)
    }
}
