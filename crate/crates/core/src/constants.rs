//! Universal constants in field-emission customary units (eV, V, nm, A),
//! plus the work-function-derived parameters used throughout the crate.
//!
//! The primary constants are hard-coded CODATA-2018-derived values to seven
//! significant figures. Combinations (`ab2`, `c2`, `bc2`, ...) are computed
//! from them so identities between them hold to machine precision.
//!
//! Areas are kept in nm² and current densities in A/nm² everywhere inside
//! the crate. Use [`NM2_PER_M2`] / [`NM2_PER_MM2`] at presentation time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Schrödinger-equation constant for an electron, eV^-1/2 nm^-1.
pub const KAPPA_E: f64 = 5.123_168;
/// Sommerfeld electron supply constant, A m^-2 eV^-2.
pub const Z_S: f64 = 1.618_311e14;
/// First Fowler-Nordheim constant, A eV V^-2.
pub const A_FN: f64 = 1.541_434e-6;
/// Second Fowler-Nordheim constant, eV^-3/2 V nm^-1.
pub const B_FN: f64 = 6.830_890;
/// 4πε₀, eV V^-2 nm.
pub const FOUR_PI_EPS0: f64 = 0.694_461_5;
/// Schottky constant squared, eV² V^-1 nm. With charge measured in units of
/// e this is exactly 1/(4πε₀).
pub const C2: f64 = 1.0 / FOUR_PI_EPS0;
/// Boltzmann constant, eV K^-1.
pub const K_B: f64 = 8.617_333_262e-5;

pub const NM2_PER_M2: f64 = 1.0e18;
pub const NM2_PER_MM2: f64 = 1.0e12;
pub const NM_PER_MM: f64 = 1.0e6;

/// Full table of universal constants and their useful combinations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalConstants {
    pub kappa_e: f64,
    pub z_s: f64,
    pub a: f64,
    pub b: f64,
    pub c_schottky: f64,
    pub four_pi_eps0: f64,
    /// 2/(3b), eV^3/2 (V/nm)^-1.
    pub two_thirds_over_b: f64,
    /// a·b², A eV^-2 nm^-2.
    pub ab2: f64,
    /// c², eV² V^-1 nm.
    pub c2: f64,
    /// b·c², eV^1/2.
    pub bc2: f64,
    pub k_b: f64,
}

impl UniversalConstants {
    pub fn fe_customary() -> Self {
        Self {
            kappa_e: KAPPA_E,
            z_s: Z_S,
            a: A_FN,
            b: B_FN,
            c_schottky: C2.sqrt(),
            four_pi_eps0: FOUR_PI_EPS0,
            two_thirds_over_b: 2.0 / (3.0 * B_FN),
            ab2: A_FN * B_FN * B_FN,
            c2: C2,
            bc2: B_FN * C2,
            k_b: K_B,
        }
    }
}

impl Default for UniversalConstants {
    fn default() -> Self {
        Self::fe_customary()
    }
}

/// Parameters that depend on the local work function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkFunctionDerived {
    /// Local work function, eV.
    pub phi: f64,
    /// Scaling parameter η = b c² φ^-1/2.
    pub eta: f64,
    /// Reference field F_φ = φ²/c², the field that pulls the SN barrier
    /// top down to the Fermi level, V/nm.
    pub f_ref: f64,
    /// a b² φ², A nm^-2.
    pub ab2_phi2: f64,
}

impl WorkFunctionDerived {
    pub fn derive(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(Error::NonPositiveWorkFunction(phi));
        }
        Ok(Self {
            phi,
            eta: B_FN * C2 / phi.sqrt(),
            f_ref: phi * phi / C2,
            ab2_phi2: A_FN * B_FN * B_FN * phi * phi,
        })
    }

    /// b φ^3/2, V nm^-1.
    pub fn b_phi32(&self) -> f64 {
        B_FN * self.phi.powf(1.5)
    }
}

/// Convenience wrapper mirroring [`WorkFunctionDerived::derive`].
pub fn derive(phi: f64) -> Result<WorkFunctionDerived> {
    WorkFunctionDerived::derive(phi)
}
