//! Barrier physics and local emission current density (LECD).
//!
//! Energies are in eV, fields in V/nm, distances in nm and current densities
//! in A/nm². Transmission uses the simple-JWKB form D = exp(−G).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{A_FN, B_FN, C2, FOUR_PI_EPS0, K_B};
use crate::error::{require_positive, Error, Result};
use crate::smf::{self, SmfVariant};

/// Default guard on the Swanson-Bell parameter: λ_T has a pole at p = 1.
pub const DEFAULT_P_LIMIT: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BarrierKind {
    /// M = H − eFz.
    ExactTriangular,
    /// M = H − eFz − e²/(16πε₀z).
    SchottkyNordheim,
}

/// Zero-field barrier height `h` (eV) under local field `f` (V/nm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierState {
    pub h: f64,
    pub field: f64,
}

impl BarrierState {
    pub fn new(h: f64, field: f64) -> Result<Self> {
        require_positive("barrier height H", h)?;
        require_positive("local field F", field)?;
        Ok(Self { h, field })
    }

    /// f_H = c² F / H².
    pub fn scaled_field(&self) -> f64 {
        C2 * self.field / (self.h * self.h)
    }

    fn checked_scaled_field(&self) -> Result<f64> {
        let f = self.scaled_field();
        if f > 0.0 && f <= 1.0 {
            Ok(f)
        } else {
            Err(Error::ScaledFieldOutOfRange { f })
        }
    }
}

/// Temperature together with the decay width it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalState {
    pub temperature: f64,
    pub d_f: f64,
    /// Swanson-Bell parameter p = k_B T / d_F.
    pub p: f64,
}

impl ThermalState {
    pub fn new(temperature: f64, d_f: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "temperature must be >= 0 K, got {temperature}"
            )));
        }
        require_positive("decay width d_F", d_f)?;
        Ok(Self {
            temperature,
            d_f,
            p: K_B * temperature / d_f,
        })
    }
}

/// F_φ = φ²/c², V/nm.
pub fn reference_field(phi: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::NonPositiveWorkFunction(phi));
    }
    Ok(phi * phi / C2)
}

/// f = c² φ^-2 F.
pub fn scaled_field(phi: f64, field: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::NonPositiveWorkFunction(phi));
    }
    if !(field >= 0.0) {
        return Err(Error::NonPositiveInput {
            what: "local field F",
            value: field,
        });
    }
    Ok(C2 * field / (phi * phi))
}

/// Δ_S = c F^1/2, eV.
pub fn schottky_reduction(field: f64) -> Result<f64> {
    if !(field >= 0.0) {
        return Err(Error::NonPositiveInput {
            what: "local field F",
            value: field,
        });
    }
    Ok((C2 * field).sqrt())
}

fn checked_scaled(phi: f64, field: f64) -> Result<f64> {
    let f = scaled_field(phi, field)?;
    if f > 0.0 && f <= 1.0 {
        Ok(f)
    } else {
        Err(Error::ScaledFieldOutOfRange { f })
    }
}

/// Motive energy M(H, F, z) in eV. The image term e²/(16πε₀z) is
/// 1/(4·4πε₀·z) in these units.
pub fn motive_energy(kind: BarrierKind, h: f64, field: f64, z: f64) -> Result<f64> {
    let triangular = h - field * z;
    match kind {
        BarrierKind::ExactTriangular => {
            if !(z >= 0.0) {
                return Err(Error::Domain {
                    function: "motive_energy",
                    x: z,
                    domain: "z >= 0",
                });
            }
            Ok(triangular)
        }
        BarrierKind::SchottkyNordheim => {
            if !(z > 0.0) {
                return Err(Error::Domain {
                    function: "motive_energy",
                    x: z,
                    domain: "z > 0 for the image term",
                });
            }
            Ok(triangular - 1.0 / (4.0 * FOUR_PI_EPS0 * z))
        }
    }
}

/// Gamow factor G(H, F). ET: b H^3/2 / F; SN: v(f_H) times that.
pub fn gamow(kind: BarrierKind, h: f64, field: f64, variant: SmfVariant) -> Result<f64> {
    let state = BarrierState::new(h, field)?;
    let g_et = B_FN * h.powf(1.5) / field;
    match kind {
        BarrierKind::ExactTriangular => Ok(g_et),
        BarrierKind::SchottkyNordheim => {
            let f_h = state.checked_scaled_field()?;
            Ok(smf::v_unchecked(f_h, variant) * g_et)
        }
    }
}

/// Transmission probability D = exp(−G).
pub fn transmission(kind: BarrierKind, h: f64, field: f64, variant: SmfVariant) -> Result<f64> {
    Ok((-gamow(kind, h, field, variant)?).exp())
}

/// Decay width at the Fermi level, eV. The SN width is the ET width divided
/// by t(f).
pub fn decay_width(kind: BarrierKind, phi: f64, field: f64, variant: SmfVariant) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::NonPositiveWorkFunction(phi));
    }
    require_positive("local field F", field)?;
    let d_et = 2.0 / (3.0 * B_FN) * field / phi.sqrt();
    match kind {
        BarrierKind::ExactTriangular => Ok(d_et),
        BarrierKind::SchottkyNordheim => {
            let f = checked_scaled(phi, field)?;
            Ok(d_et / smf::t_unchecked(f, variant))
        }
    }
}

/// λ_T = πp / sin(πp) with the default guard p < 0.9.
pub fn temperature_factor(p: f64) -> Result<f64> {
    temperature_factor_with_limit(p, DEFAULT_P_LIMIT)
}

pub fn temperature_factor_with_limit(p: f64, limit: f64) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(Error::Domain {
            function: "temperature_factor",
            x: p,
            domain: "p >= 0",
        });
    }
    if p >= limit.min(1.0) {
        return Err(Error::TemperatureRegime { p, limit });
    }
    let x = PI * p;
    if x < 1e-4 {
        // Even series; avoids 0/0 at p = 0.
        return Ok(1.0 + x * x / 6.0 + 7.0 * x.powi(4) / 360.0);
    }
    Ok(x / x.sin())
}

/// Elementary (ET barrier, zero temperature) LECD, A/nm².
pub fn lecd_elementary(phi: f64, field: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::NonPositiveWorkFunction(phi));
    }
    require_positive("local field F", field)?;
    Ok(A_FN / phi * field * field * (-B_FN * phi.powf(1.5) / field).exp())
}

/// Kernel current density a φ^-1 F² exp(−v(f) b φ^3/2 / F), A/nm².
pub fn kernel_current_density(phi: f64, field: f64, variant: SmfVariant) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::NonPositiveWorkFunction(phi));
    }
    require_positive("local field F", field)?;
    let f = checked_scaled(phi, field)?;
    let v = smf::v_unchecked(f, variant);
    Ok(A_FN / phi * field * field * (-v * B_FN * phi.powf(1.5) / field).exp())
}

/// Murphy-Good finite-temperature LECD, A/nm²:
/// λ_T t(f)^-2 a φ^-1 F² exp(−v(f) b φ^3/2 / F).
pub fn lecd_mg(phi: f64, temperature: f64, field: f64, variant: SmfVariant) -> Result<f64> {
    lecd_mg_with_limit(phi, temperature, field, variant, DEFAULT_P_LIMIT)
}

pub fn lecd_mg_with_limit(
    phi: f64,
    temperature: f64,
    field: f64,
    variant: SmfVariant,
    p_limit: f64,
) -> Result<f64> {
    let kernel = kernel_current_density(phi, field, variant)?;
    let f = checked_scaled(phi, field)?;
    let t = smf::t_unchecked(f, variant);
    let d_f = decay_width(BarrierKind::SchottkyNordheim, phi, field, variant)?;
    let thermal = ThermalState::new(temperature, d_f)?;
    let lambda = temperature_factor_with_limit(thermal.p, p_limit)?;
    Ok(lambda * kernel / (t * t))
}
