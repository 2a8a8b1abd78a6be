//! FIM/FEM magnification arithmetic: from image-record measurements to the
//! electron source area on the emitter.
//!
//! The pipeline is record mm → screen mm → emitter nm. Magnification is
//! taken as uniform and isotropic over the image.

use serde::{Deserialize, Serialize};

use crate::constants::NM_PER_MM;
use crate::error::{require_positive, Error, Result};

pub const DEFAULT_BROADENING: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FimMeasurements {
    /// Physical diameter of the reference channel-plate hole, mm.
    pub hole_true_diameter: f64,
    /// Same hole measured on the record, mm.
    pub hole_record_diameter: f64,
    /// Distance between adjacent atom image spots on the record, mm.
    pub spot_separation_record: f64,
    /// Nearest-neighbour separation in the imaged net plane, nm.
    pub nn_spacing: f64,
}

/// FEM spot radius, measured either on the record or already scaled to the
/// screen. Both in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpotRadius {
    Record(f64),
    Screen(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FemMeasurements {
    pub spot_radius: SpotRadius,
    /// Divisor for beam broadening, ≥ 1.
    pub broadening_correction: f64,
}

impl FemMeasurements {
    pub fn new(spot_radius: SpotRadius) -> Self {
        Self {
            spot_radius,
            broadening_correction: DEFAULT_BROADENING,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceGeometry {
    pub m_lin: f64,
    #[serde(rename = "M_area")]
    pub m_area: f64,
    #[serde(rename = "screen_radius_mm")]
    pub screen_radius: f64,
    #[serde(rename = "corrected_radius_mm")]
    pub corrected_radius: f64,
    #[serde(rename = "rho_S_nm")]
    pub rho_s: f64,
    #[serde(rename = "A_S_nm2")]
    pub area_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaComparison {
    #[serde(rename = "A_f_ET_over_A_S")]
    pub et_over_s: f64,
    #[serde(rename = "A_S_over_A_f_SN")]
    pub s_over_sn: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FimFemResult {
    pub record_scale: f64,
    pub geometry: SourceGeometry,
}

/// Divisor converting record distances to screen distances.
pub fn record_scale(hole_true: f64, hole_record: f64) -> Result<f64> {
    require_positive("true hole diameter", hole_true)?;
    require_positive("recorded hole diameter", hole_record)?;
    Ok(hole_record / hole_true)
}

pub fn linear_magnification(fim: &FimMeasurements) -> Result<f64> {
    let scale = record_scale(fim.hole_true_diameter, fim.hole_record_diameter)?;
    require_positive("spot separation on record", fim.spot_separation_record)?;
    require_positive("nearest-neighbour spacing", fim.nn_spacing)?;
    Ok(fim.spot_separation_record / scale * NM_PER_MM / fim.nn_spacing)
}

pub fn source_geometry(
    fem: &FemMeasurements,
    record_scale: f64,
    m_lin: f64,
) -> Result<SourceGeometry> {
    require_positive("record scale", record_scale)?;
    require_positive("linear magnification", m_lin)?;
    if !(fem.broadening_correction >= 1.0 && fem.broadening_correction.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "broadening correction must be >= 1, got {}",
            fem.broadening_correction
        )));
    }
    let screen_radius = match fem.spot_radius {
        SpotRadius::Record(r) => require_positive("FEM spot radius", r)? / record_scale,
        SpotRadius::Screen(r) => require_positive("FEM spot radius", r)?,
    };
    let corrected_radius = screen_radius / fem.broadening_correction;
    let rho_s = corrected_radius * NM_PER_MM / m_lin;
    Ok(SourceGeometry {
        m_lin,
        m_area: m_lin * m_lin,
        screen_radius,
        corrected_radius,
        rho_s,
        area_s: std::f64::consts::PI * rho_s * rho_s,
    })
}

pub fn analyze(fim: &FimMeasurements, fem: &FemMeasurements) -> Result<FimFemResult> {
    let scale = record_scale(fim.hole_true_diameter, fim.hole_record_diameter)?;
    let m_lin = linear_magnification(fim)?;
    Ok(FimFemResult {
        record_scale: scale,
        geometry: source_geometry(fem, scale, m_lin)?,
    })
}

/// A_f^ET / A^S and A^S / A_f^SN.
pub fn compare_areas(area_s: f64, area_et: f64, area_sn: f64) -> Result<AreaComparison> {
    require_positive("source area A_S", area_s)?;
    require_positive("formal area A_f_ET", area_et)?;
    require_positive("formal area A_f_SN", area_sn)?;
    Ok(AreaComparison {
        et_over_s: area_et / area_s,
        s_over_sn: area_s / area_sn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hfc() -> (FimMeasurements, FemMeasurements) {
        (
            FimMeasurements {
                hole_true_diameter: 2.0,
                hole_record_diameter: 4.5,
                spot_separation_record: 1.7,
                nn_spacing: 0.322,
            },
            FemMeasurements::new(SpotRadius::Screen(2.95)),
        )
    }

    fn within(a: f64, b: f64, tol: f64) -> bool {
        ((a - b) / b).abs() <= tol
    }

    #[test]
    fn scale_examples() {
        assert_eq!(record_scale(2.0, 4.5).unwrap(), 2.25);
        assert_eq!(record_scale(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(record_scale(2.0, 3.0).unwrap(), 1.5);
        assert!(matches!(
            record_scale(0.0, 1.0),
            Err(Error::NonPositiveInput { .. })
        ));
    }

    #[test]
    fn hfc_table() {
        let (fim, fem) = hfc();
        let r = analyze(&fim, &fem).unwrap();
        let g = r.geometry;
        assert!(within(g.m_lin, 2.36e6, 0.02), "{}", g.m_lin);
        assert!(within(g.corrected_radius, 2.46, 0.02));
        assert!(within(g.rho_s, 1.041, 0.02), "{}", g.rho_s);
        assert!(within(g.area_s, 3.41, 0.02), "{}", g.area_s);
        assert_eq!(g.m_area, g.m_lin * g.m_lin);
        assert!((g.area_s - std::f64::consts::PI * g.rho_s.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn record_level_radius() {
        let (fim, _) = hfc();
        let rec = FemMeasurements::new(SpotRadius::Record(2.95 * 2.25));
        let scr = FemMeasurements::new(SpotRadius::Screen(2.95));
        let a = analyze(&fim, &rec).unwrap().geometry;
        let b = analyze(&fim, &scr).unwrap().geometry;
        assert!(within(a.area_s, b.area_s, 1e-14));
    }

    #[test]
    fn scaling_properties() {
        let (mut fim, fem) = hfc();
        let base = analyze(&fim, &fem).unwrap().geometry;
        fim.spot_separation_record *= 2.0;
        assert!(within(
            linear_magnification(&fim).unwrap(),
            2.0 * base.m_lin,
            1e-15
        ));

        let unity = FimMeasurements {
            hole_true_diameter: 1.0,
            hole_record_diameter: 1.0,
            spot_separation_record: 0.5e-6,
            nn_spacing: 0.5,
        };
        assert!(within(linear_magnification(&unity).unwrap(), 1.0, 1e-15));

        let (fim, _) = hfc();
        let no_corr = FemMeasurements {
            spot_radius: SpotRadius::Screen(2.95),
            broadening_correction: 1.0,
        };
        let g = analyze(&fim, &no_corr).unwrap().geometry;
        assert!(within(g.area_s / base.area_s, 1.44, 1e-12));
        assert!(within(g.rho_s, 2.95e6 / base.m_lin, 1e-15));

        let double = FemMeasurements::new(SpotRadius::Screen(5.9));
        let d = analyze(&fim, &double).unwrap().geometry;
        assert!(within(d.area_s / base.area_s, 4.0, 1e-12));
    }

    #[test]
    fn division_order_is_irrelevant() {
        let (fim, _) = hfc();
        let a = 2.95 / 1.2 * 1e6 / linear_magnification(&fim).unwrap();
        let b = 2.95 * 1e6 / (1.2 * (1.7 / 2.25 * 1e6 / 0.322));
        let c = 2.95 * 2.25 * 0.322 / (1.2 * 1.7);
        assert!(within(a, b, 1e-14) && within(a, c, 1e-14));
    }

    #[test]
    fn comparison() {
        let c = compare_areas(3.41, 90.0, 0.46).unwrap();
        assert!(within(c.et_over_s, 26.4, 0.01));
        assert!(within(c.s_over_sn, 7.4, 0.01));
        let one = compare_areas(1.0, 1.0, 1.0).unwrap();
        assert_eq!((one.et_over_s, one.s_over_sn), (1.0, 1.0));
        let k = compare_areas(3.41 * 7.0, 90.0 * 7.0, 0.46 * 7.0).unwrap();
        assert!(within(k.et_over_s, c.et_over_s, 1e-15) && within(k.s_over_sn, c.s_over_sn, 1e-15));
        assert!(compare_areas(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn invalid_broadening() {
        let (fim, _) = hfc();
        let fem = FemMeasurements {
            spot_radius: SpotRadius::Screen(2.95),
            broadening_correction: 0.9,
        };
        assert!(analyze(&fim, &fem).is_err());
    }
}
