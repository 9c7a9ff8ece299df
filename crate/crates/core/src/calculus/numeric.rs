//! Finite-difference residuals for black-box functions.
//!
//! Derivatives are taken only along the real direction and along the radial
//! ray through the point with the local imaginary unit `ι` held fixed:
//!
//! ```text
//! ∂₀f ≈ [f(q + h) - f(q - h)] / 2h
//! ∂ₓf ≈ [f(q + ιh) - f(q - ιh)] / 2h
//! ```
//!
//! Moving along a coordinate axis would rotate `ι` and measure a different
//! condition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Hypercomplex, Octonion, Quaternion};
use crate::error::{Error, Result};

pub const DEFAULT_H: f64 = 1e-5;
pub const DEFAULT_AXIS_EPS: f64 = 1e-6;
pub const MIN_H: f64 = 1e-8;
pub const MAX_H: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FdScheme {
    /// Second-order central differences.
    #[default]
    Central2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub h: f64,
    pub scheme: FdScheme,
    /// Points whose vector part is shorter than this are rejected.
    pub axis_eps: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self { h: DEFAULT_H, scheme: FdScheme::Central2, axis_eps: DEFAULT_AXIS_EPS }
    }
}

impl FdConfig {
    pub fn with_h(h: f64) -> Self {
        Self { h, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_H..=MAX_H).contains(&self.h) {
            return Err(Error::InvalidConfig(format!(
                "step h = {:e} outside [{MIN_H:e}, {MAX_H:e}]",
                self.h
            )));
        }
        if !(self.axis_eps > 0.0 && self.axis_eps.is_finite()) {
            return Err(Error::InvalidConfig(format!("axis_eps = {:e} must be positive", self.axis_eps)));
        }
        Ok(())
    }
}

/// Which analyticity condition a residual measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    LocalCr,
    LocalCrVectorForm,
    LocalCrOctonion,
    IotaConsistency,
    ComplexCr,
    Harmonic,
    Naive,
    Directional,
    Fueter,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LocalCr => "local-cr",
            Self::LocalCrVectorForm => "local-cr-vector-form",
            Self::LocalCrOctonion => "local-cr-octonion",
            Self::IotaConsistency => "iota-consistency",
            Self::ComplexCr => "complex-cr",
            Self::Harmonic => "harmonic",
            Self::Naive => "naive",
            Self::Directional => "directional",
            Self::Fueter => "fueter",
        }
    }
}

/// A point or residual value; serialized as a bare 4- or 8-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Quaternion(Quaternion),
    Octonion(Octonion),
}

impl Element {
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Self::Quaternion(q) => q.to_vec(),
            Self::Octonion(o) => o.to_vec(),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Self::Quaternion(q) => Hypercomplex::norm(q),
            Self::Octonion(o) => o.norm(),
        }
    }
}

impl From<Quaternion> for Element {
    fn from(q: Quaternion) -> Self {
        Self::Quaternion(q)
    }
}

impl From<Octonion> for Element {
    fn from(o: Octonion) -> Self {
        Self::Octonion(o)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub condition: Condition,
    pub point: Element,
    pub residual: Element,
    pub residual_norm: f64,
    pub h: f64,
}

impl ResidualReport {
    fn new(condition: Condition, point: Element, residual: Element, h: f64) -> Self {
        Self { condition, point, residual_norm: residual.norm(), residual, h }
    }
}

struct RayDerivatives<T> {
    iota: T,
    d0: T,
    dx: T,
}

fn checked<T: Hypercomplex>(f: &impl Fn(T) -> T, at: T) -> Result<T> {
    let v = f(at);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: at.to_vec() })
    }
}

fn ray_derivatives<T: Hypercomplex>(
    f: &impl Fn(T) -> T,
    q: T,
    cfg: &FdConfig,
) -> Result<RayDerivatives<T>> {
    cfg.validate()?;
    let iota = q.polar(cfg.axis_eps)?.iota;
    let h = cfg.h;
    let along_real = T::from_real(h);
    let along_ray = iota.scale(h);
    let inv = 1.0 / (2.0 * h);
    let d0 = (checked(f, q + along_real)? - checked(f, q - along_real)?).scale(inv);
    let dx = (checked(f, q + along_ray)? - checked(f, q - along_ray)?).scale(inv);
    Ok(RayDerivatives { iota, d0, dx })
}

/// `∂₀f + ι∂ₓf`, zero for left Weierstrass series.
pub fn local_cr_residual_numeric(
    f: impl Fn(Quaternion) -> Quaternion,
    q: Quaternion,
    cfg: &FdConfig,
) -> Result<ResidualReport> {
    let r = ray_derivatives(&f, q, cfg)?;
    let residual = r.d0 + r.iota * r.dx;
    Ok(ResidualReport::new(Condition::LocalCr, q.into(), residual.into(), cfg.h))
}

/// Local derivative `½(∂₀f - ι∂ₓf)`.
pub fn local_derivative_numeric(
    f: impl Fn(Quaternion) -> Quaternion,
    q: Quaternion,
    cfg: &FdConfig,
) -> Result<Quaternion> {
    let r = ray_derivatives(&f, q, cfg)?;
    Ok((r.d0 - r.iota * r.dx).scale(0.5))
}

/// The local condition expanded over the global units, with `D = x̂·∂⃗`:
///
/// `∂₀f₀ - x̂·Df⃗ + Q⃗·(∂₀f⃗ + x̂ Df₀ + x̂ ∧ Df⃗)`.
///
/// Uses only real vector algebra, no quaternion products.
pub fn local_cr_residual_vectorform(
    f: impl Fn(Quaternion) -> Quaternion,
    q: Quaternion,
    cfg: &FdConfig,
) -> Result<ResidualReport> {
    let r = ray_derivatives(&f, q, cfg)?;
    let xhat = [r.iota.x1, r.iota.x2, r.iota.x3];
    let (d0f0, d0f) = (r.d0.x0, [r.d0.x1, r.d0.x2, r.d0.x3]);
    let (df0, df) = (r.dx.x0, [r.dx.x1, r.dx.x2, r.dx.x3]);
    let dot = xhat[0] * df[0] + xhat[1] * df[1] + xhat[2] * df[2];
    let cross = [
        xhat[1] * df[2] - xhat[2] * df[1],
        xhat[2] * df[0] - xhat[0] * df[2],
        xhat[0] * df[1] - xhat[1] * df[0],
    ];
    let vector: [f64; 3] = std::array::from_fn(|n| d0f[n] + xhat[n] * df0 + cross[n]);
    let residual = Quaternion::new(d0f0 - dot, vector[0], vector[1], vector[2]);
    Ok(ResidualReport::new(Condition::LocalCrVectorForm, q.into(), residual.into(), cfg.h))
}

/// Norm of `∂ₓ(ιx) - ι`, where `ιx = ix₁ + jx₂ + kx₃` is the vector part.
pub fn iota_consistency(q: Quaternion, cfg: &FdConfig) -> Result<f64> {
    let r = ray_derivatives(&|p: Quaternion| p.vector_part(), q, cfg)?;
    Ok((r.dx - r.iota).norm())
}

/// Octonionic `∂₀f + ι∂ₓf` with the seven-component `ι`.
pub fn local_cr_residual_octonion(
    f: impl Fn(Octonion) -> Octonion,
    o: Octonion,
    cfg: &FdConfig,
) -> Result<ResidualReport> {
    let r = ray_derivatives(&f, o, cfg)?;
    let residual = r.d0 + r.iota * r.dx;
    Ok(ResidualReport::new(Condition::LocalCrOctonion, o.into(), residual.into(), cfg.h))
}

/// Local residuals over many points, in input order.
///
/// With `parallel` set the function is called from several threads at once.
pub fn local_cr_batch<F>(
    f: &F,
    points: &[Quaternion],
    cfg: &FdConfig,
    parallel: bool,
) -> Vec<Result<ResidualReport>>
where
    F: Fn(Quaternion) -> Quaternion + Sync,
{
    if parallel {
        points.par_iter().map(|&q| local_cr_residual_numeric(f, q, cfg)).collect()
    } else {
        points.iter().map(|&q| local_cr_residual_numeric(f, q, cfg)).collect()
    }
}
