//! Parameter extraction from a fitted FN plot under the Schottky-Nordheim
//! barrier, using the tangent method.
//!
//! For a chosen fitting voltage V_t the conversion factor β is found as the
//! fixed point of two maps:
//!
//! ```text
//! f_t  = (c² φ^-2 V_t) · β_i          s_t = s(f_t)
//! β_i+1 = −s_t · b φ^3/2 / S_expt
//! ```
//!
//! The converged (β, f_t, s_t) then give r_t = exp(η u(f_t)) and the formal
//! emission areas
//!
//! ```text
//! A_f^SN = R S² / (a b² φ² · r_t s_t²)      A_f^ET = R S² / (a b² φ²)
//! ```
//!
//! The ET result is the SN one with r_t = s_t = 1.

use serde::{Deserialize, Serialize};

use crate::constants::{WorkFunctionDerived, C2, K_B, NM2_PER_M2};
use crate::emission::{self, BarrierKind, DEFAULT_P_LIMIT};
use crate::error::{require_positive, Error, Result};
use crate::fnfit::{
    orthodoxy_test, FnFitResult, IvDataset, IvPoint, OrthodoxyThresholds, OrthodoxyVerdict, Verdict,
};
use crate::smf::{self, SmfVariant};

/// Approximate t(f) used by the d_F shortcut.
pub const T_SHORTCUT: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ConvergenceMode {
    /// |Δβ| / β ≤ tol.
    #[default]
    Relative,
    /// |Δβ| ≤ tol, in nm^-1.
    Absolute,
}

/// Fitting voltages to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VtGrid {
    /// N evenly spaced voltages over [V_min, V_max], plus V_mid if N is even.
    Auto(usize),
    Explicit(Vec<f64>),
}

impl Default for VtGrid {
    fn default() -> Self {
        VtGrid::Auto(21)
    }
}

impl VtGrid {
    pub fn voltages(&self, fit: &FnFitResult) -> Result<Vec<f64>> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
        let mut out = match self {
            VtGrid::Auto(0) => {
                return Err(Error::InvalidInput(
                    "V_t grid needs at least one point".into(),
                ))
            }
            VtGrid::Auto(1) => vec![fit.v_mid],
            VtGrid::Auto(n) => {
                let step = (fit.v_max - fit.v_min) / (*n - 1) as f64;
                let mut v: Vec<f64> = (0..*n).map(|i| fit.v_min + step * i as f64).collect();
                // Pin the endpoints exactly.
                v[n - 1] = fit.v_max;
                match v.iter_mut().find(|x| close(**x, fit.v_mid)) {
                    Some(x) => *x = fit.v_mid,
                    None => v.push(fit.v_mid),
                }
                v
            }
            VtGrid::Explicit(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidInput("V_t grid is empty".into()));
                }
                for &v in list {
                    check_in_range(fit, v)?;
                }
                list.clone()
            }
        };
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| close(*a, *b));
        Ok(out)
    }
}

/// Where I_m(V_t) comes from when computing J_extr and B_pract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CurrentPolicy {
    /// Exact data point, else FN-coordinate interpolation, else fitted line.
    #[default]
    Auto,
    /// Exact point or interpolation only.
    DataOnly,
    /// Always the fitted line.
    FitLine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    /// Local work function, eV.
    pub phi: f64,
    /// Temperature, K. Only used to check the λ_T regime.
    pub temperature: f64,
    /// nm^-1.
    pub beta_start: f64,
    pub convergence_tol: f64,
    pub convergence_mode: ConvergenceMode,
    pub max_iterations: usize,
    pub variant: SmfVariant,
    pub vt_grid: VtGrid,
    /// Macroscopic emitter footprint, nm².
    pub area_macro_nm2: Option<f64>,
    pub current_policy: CurrentPolicy,
    /// An extra measured (voltage V, current A) pair, treated like a data
    /// point.
    pub measured_current: Option<(f64, f64)>,
    pub orthodoxy: OrthodoxyThresholds,
    pub p_limit: f64,
    /// Use d_F = d_F^ET / 1.05 instead of d_F^ET / t(f_t).
    pub decay_width_shortcut: bool,
}

impl ExtractionConfig {
    pub fn new(phi: f64) -> Self {
        Self {
            phi,
            temperature: 300.0,
            beta_start: 1.0e-3,
            convergence_tol: 1.0e-4,
            convergence_mode: ConvergenceMode::Relative,
            max_iterations: 100,
            variant: SmfVariant::HighPrecision,
            vt_grid: VtGrid::default(),
            area_macro_nm2: None,
            current_policy: CurrentPolicy::Auto,
            measured_current: None,
            orthodoxy: OrthodoxyThresholds::default(),
            p_limit: DEFAULT_P_LIMIT,
            decay_width_shortcut: false,
        }
    }

    fn validate(&self) -> Result<WorkFunctionDerived> {
        let wf = WorkFunctionDerived::derive(self.phi)?;
        require_positive("beta_start", self.beta_start)?;
        require_positive("convergence_tol", self.convergence_tol)?;
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be >= 1".into()));
        }
        if let Some(a) = self.area_macro_nm2 {
            if !(a > 0.0) {
                return Err(Error::NonPositiveArea {
                    what: "macroscopic area A_M",
                    value: a,
                });
            }
        }
        Ok(wf)
    }
}

/// Converged state of the β iteration at one fitting voltage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittingPoint {
    #[serde(rename = "V_t_V")]
    pub v_t: f64,
    #[serde(rename = "beta_per_nm")]
    pub beta: f64,
    /// Apex field F_t = β V_t.
    #[serde(rename = "F_t_V_per_nm")]
    pub field_t: f64,
    /// Scaled field f_t.
    #[serde(rename = "f_t")]
    pub scaled_t: f64,
    pub s_t: f64,
    pub r_t: f64,
    pub rt_st2: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_scaled(f: f64) -> Result<f64> {
    if f > 0.0 && f <= 1.0 {
        Ok(f)
    } else {
        Err(Error::ScaledFieldOutOfRange { f })
    }
}

/// Runs the β fixed-point iteration at fitting voltage `v_t`.
pub fn iterate_beta(
    v_t: f64,
    s_expt: f64,
    phi: f64,
    config: &ExtractionConfig,
) -> Result<FittingPoint> {
    let wf = WorkFunctionDerived::derive(phi)?;
    if !(s_expt < 0.0) {
        return Err(Error::PositiveSlope(s_expt));
    }
    require_positive("fitting voltage V_t", v_t)?;
    require_positive("beta_start", config.beta_start)?;
    require_positive("convergence_tol", config.convergence_tol)?;

    let to_scaled = C2 / (phi * phi) * v_t;
    let slope_scale = -wf.b_phi32() / s_expt;
    let mut beta = config.beta_start;
    let mut iterations = None;
    for i in 1..=config.max_iterations {
        let f = check_scaled(to_scaled * beta)?;
        let next = smf::s_unchecked(f, config.variant) * slope_scale;
        let delta = match config.convergence_mode {
            ConvergenceMode::Relative => ((next - beta) / beta).abs(),
            ConvergenceMode::Absolute => (next - beta).abs(),
        };
        beta = next;
        if delta <= config.convergence_tol {
            iterations = Some(i);
            break;
        }
    }
    let iterations = iterations.ok_or(Error::NonConvergence {
        v_t,
        iterations: config.max_iterations,
    })?;

    let f_t = check_scaled(to_scaled * beta)?;
    let s_t = smf::s_unchecked(f_t, config.variant);
    let r_t = (wf.eta * smf::u_unchecked(f_t, config.variant)).exp();
    Ok(FittingPoint {
        v_t,
        beta,
        field_t: beta * v_t,
        scaled_t: f_t,
        s_t,
        r_t,
        rt_st2: r_t * s_t * s_t,
        iterations,
        converged: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub point: FittingPoint,
    #[serde(rename = "A_f_SN_nm2")]
    pub area_sn: f64,
    #[serde(rename = "A_f_ET_nm2")]
    pub area_et: f64,
    /// Area extraction parameter, SN barrier, nm²/A.
    #[serde(rename = "Lambda_SN_nm2_per_A")]
    pub lambda_sn: f64,
    #[serde(rename = "Lambda_ET_nm2_per_A")]
    pub lambda_et: f64,
    #[serde(rename = "alpha_f_SN")]
    pub alpha_f_sn: Option<f64>,
    /// Decay width at the Fermi level, SN barrier, eV.
    #[serde(rename = "d_F_SN_eV")]
    pub d_f: f64,
    /// I_m(V_t) used for J_extr, A.
    #[serde(rename = "I_m_A")]
    pub current: f64,
    pub current_source: CurrentSource,
    /// Extracted LECD, A/nm².
    #[serde(rename = "J_extr_A_per_nm2")]
    pub j_extr: f64,
    /// Practical brightness, A m^-2 sr^-1 eV^-1.
    #[serde(rename = "B_pract_A_per_m2_sr_eV")]
    pub b_pract: f64,
    /// Swanson-Bell parameter at the configured temperature.
    pub p_swanson_bell: f64,
    pub orthodoxy: OrthodoxyVerdict,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurrentSource {
    DataPoint,
    Interpolated,
    FitLine,
}

fn check_in_range(fit: &FnFitResult, v_t: f64) -> Result<()> {
    let slack = 1e-9 * fit.v_max;
    if v_t >= fit.v_min - slack && v_t <= fit.v_max + slack {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "fitting voltage {v_t} V is outside the measured range [{}, {}] V",
            fit.v_min, fit.v_max
        )))
    }
}

fn current_at(
    fit: &FnFitResult,
    data: Option<&IvDataset>,
    v_t: f64,
    config: &ExtractionConfig,
) -> Result<(f64, CurrentSource)> {
    if config.current_policy != CurrentPolicy::FitLine {
        let mut points: Vec<IvPoint> = data.map(|d| d.points.clone()).unwrap_or_default();
        if let Some((voltage, current)) = config.measured_current {
            points.push(IvPoint { voltage, current });
            points.sort_by(|a, b| a.voltage.total_cmp(&b.voltage));
        }
        if let Some(p) = points
            .iter()
            .find(|p| (p.voltage - v_t).abs() <= 1e-9 * v_t)
        {
            return Ok((p.current, CurrentSource::DataPoint));
        }
        if data.is_some() {
            if let Some(w) = points
                .windows(2)
                .find(|w| w[0].voltage < v_t && v_t < w[1].voltage)
            {
                let fnc = |p: &IvPoint| (1.0 / p.voltage, (p.current / p.voltage.powi(2)).ln());
                let (x0, y0) = fnc(&w[0]);
                let (x1, y1) = fnc(&w[1]);
                let x = 1.0 / v_t;
                let y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
                return Ok((y.exp() * v_t * v_t, CurrentSource::Interpolated));
            }
        }
        if config.current_policy == CurrentPolicy::DataOnly {
            return Err(Error::MissingCurrent { v_t });
        }
    }
    Ok((fit.current_at(v_t), CurrentSource::FitLine))
}

/// Full extraction at one fitting voltage.
pub fn extract_at(
    fit: &FnFitResult,
    data: Option<&IvDataset>,
    v_t: f64,
    config: &ExtractionConfig,
) -> Result<ExtractionResult> {
    let wf = config.validate()?;
    check_in_range(fit, v_t)?;
    let point = iterate_beta(v_t, fit.s, config.phi, config)?;

    let lambda_et = 1.0 / wf.ab2_phi2;
    let lambda_sn = lambda_et / point.rt_st2;
    let area_sn = lambda_sn * fit.rs2;
    let area_et = lambda_et * fit.rs2;

    let d_f = if config.decay_width_shortcut {
        emission::decay_width(
            BarrierKind::ExactTriangular,
            config.phi,
            point.field_t,
            config.variant,
        )? / T_SHORTCUT
    } else {
        emission::decay_width(
            BarrierKind::SchottkyNordheim,
            config.phi,
            point.field_t,
            config.variant,
        )?
    };

    let (current, current_source) = current_at(fit, data, v_t, config)?;
    let j_extr = current / area_sn;
    let b_pract = practical_brightness(current, area_sn, d_f)?;
    let alpha_f_sn = config
        .area_macro_nm2
        .map(|a_m| formal_area_efficiency(area_sn, a_m))
        .transpose()?;

    let orthodoxy = orthodoxy_test(fit, config.phi, point.beta, config.orthodoxy);
    let p_swanson_bell = K_B * config.temperature / d_f;
    let mut warnings = Vec::new();
    if orthodoxy.verdict != Verdict::Pass {
        warnings.push(format!(
            "orthodoxy test {:?}: f spans [{:.4}, {:.4}]",
            orthodoxy.verdict, orthodoxy.f_low, orthodoxy.f_high
        ));
    }
    if p_swanson_bell >= config.p_limit {
        warnings.push(format!(
            "temperature regime: p = {p_swanson_bell:.4} at {} K is at or above {}",
            config.temperature, config.p_limit
        ));
    }

    Ok(ExtractionResult {
        point,
        area_sn,
        area_et,
        lambda_sn,
        lambda_et,
        alpha_f_sn,
        d_f,
        current,
        current_source,
        j_extr,
        b_pract,
        p_swanson_bell,
        orthodoxy,
        warnings,
    })
}

/// One grid point of a sweep; failures stay attached to their voltage.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub v_t: f64,
    pub result: Result<ExtractionResult>,
}

/// Extraction across the configured V_t grid, ascending in V_t.
pub fn sweep(
    fit: &FnFitResult,
    data: Option<&IvDataset>,
    config: &ExtractionConfig,
) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    Ok(config
        .vt_grid
        .voltages(fit)?
        .into_iter()
        .map(|v_t| SweepPoint {
            v_t,
            result: extract_at(fit, data, v_t, config),
        })
        .collect())
}

/// Extraction at the mid-range voltage, the conventional definitive choice.
pub fn definitive(
    fit: &FnFitResult,
    data: Option<&IvDataset>,
    config: &ExtractionConfig,
) -> Result<ExtractionResult> {
    extract_at(fit, data, fit.v_mid, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaErrorBound {
    #[serde(rename = "A_f_SN_at_V_mid_nm2")]
    pub area_at_vmid: f64,
    #[serde(rename = "A_f_SN_at_V_max_nm2")]
    pub area_at_vmax: f64,
    pub relative_bound: f64,
}

/// The true fitting voltage lies above V_mid, so extracting at V_max bounds
/// the error from taking V_t = V_mid.
pub fn area_error_bound(
    fit: &FnFitResult,
    data: Option<&IvDataset>,
    config: &ExtractionConfig,
) -> Result<AreaErrorBound> {
    let mid = extract_at(fit, data, fit.v_mid, config)?.area_sn;
    let max = extract_at(fit, data, fit.v_max, config)?.area_sn;
    Ok(AreaErrorBound {
        area_at_vmid: mid,
        area_at_vmax: max,
        relative_bound: (max - mid).abs() / mid,
    })
}

/// α_f = A_f / A_M (both nm²).
pub fn formal_area_efficiency(area_formal: f64, area_macro: f64) -> Result<f64> {
    for (what, value) in [
        ("formal emission area A_f", area_formal),
        ("macroscopic area A_M", area_macro),
    ] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveArea { what, value });
        }
    }
    Ok(area_formal / area_macro)
}

/// B_pract ≈ 1.44 J / (π d_F), with J = I/A converted to A/m².
pub fn practical_brightness(current: f64, area_sn: f64, d_f: f64) -> Result<f64> {
    require_positive("current I_m", current)?;
    require_positive("formal area A_f^SN", area_sn)?;
    require_positive("decay width d_F", d_f)?;
    let j_m2 = current / area_sn * NM2_PER_M2;
    Ok(1.44 * j_m2 / (std::f64::consts::PI * d_f))
}

/// Forward model: I_m = A_f · J_k(φ, βV) at each voltage.
pub fn synthesize_emg_points(
    area_sn: f64,
    beta: f64,
    phi: f64,
    voltages: &[f64],
    variant: SmfVariant,
) -> Result<Vec<IvPoint>> {
    if !(area_sn > 0.0) {
        return Err(Error::NonPositiveArea {
            what: "formal emission area A_f",
            value: area_sn,
        });
    }
    require_positive("conversion factor beta", beta)?;
    voltages
        .iter()
        .map(|&v| {
            require_positive("voltage", v)?;
            let j = emission::kernel_current_density(phi, beta * v, variant)?;
            Ok(IvPoint {
                voltage: v,
                current: area_sn * j,
            })
        })
        .collect()
}

pub fn synthesize_emg_iv(
    area_sn: f64,
    beta: f64,
    phi: f64,
    voltages: &[f64],
    variant: SmfVariant,
) -> Result<IvDataset> {
    let points = synthesize_emg_points(area_sn, beta, phi, voltages, variant)?;
    IvDataset::new("synthetic EMG", points)
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
            v[n - 1] = hi;
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnfit::fit_dataset;

    fn hfc_fit() -> FnFitResult {
        FnFitResult::from_parameters(-19.38, -3329.0, 362.0, 390.0).unwrap()
    }

    #[test]
    fn hfc_iteration() {
        let cfg = ExtractionConfig::new(2.5);
        let p = iterate_beta(376.0, -3329.0, 2.5, &cfg).unwrap();
        assert!(((p.beta - 7.26e-3) / 7.26e-3).abs() < 0.015, "{}", p.beta);
        assert!((p.scaled_t - 0.629).abs() < 0.005);
        assert!((p.s_t - 0.892).abs() < 0.002);
        assert!(p.iterations <= 10);
        assert!(p.converged);
        assert_eq!(p.field_t, p.beta * p.v_t);
        assert!((p.scaled_t - C2 / 6.25 * p.field_t).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_residual_and_start_independence() {
        let phi: f64 = 2.5;
        let b_phi32 = crate::constants::B_FN * phi.powf(1.5);
        let mut betas = Vec::new();
        for start in [1e-4, 3e-4, 1e-3, 5e-3, 1e-2] {
            let cfg = ExtractionConfig {
                beta_start: start,
                ..ExtractionConfig::new(phi)
            };
            let p = iterate_beta(376.0, -3329.0, phi, &cfg).unwrap();
            let residual = p.beta * -3329.0 + p.s_t * b_phi32;
            assert!(residual.abs() <= cfg.convergence_tol * (p.beta * 3329.0));
            betas.push(p.beta);
        }
        let lo = betas.iter().cloned().fold(f64::MAX, f64::min);
        let hi = betas.iter().cloned().fold(f64::MIN, f64::max);
        assert!((hi - lo) / lo <= 10.0 * 1e-4);
    }

    #[test]
    fn start_value_beyond_barrier_top_is_reported() {
        let cfg = ExtractionConfig {
            beta_start: 0.1,
            ..ExtractionConfig::new(2.5)
        };
        assert!(matches!(
            iterate_beta(376.0, -3329.0, 2.5, &cfg),
            Err(Error::ScaledFieldOutOfRange { .. })
        ));
    }

    #[test]
    fn non_convergence_is_reported() {
        let cfg = ExtractionConfig {
            max_iterations: 2,
            convergence_tol: 1e-14,
            ..ExtractionConfig::new(2.5)
        };
        assert_eq!(
            iterate_beta(376.0, -3329.0, 2.5, &cfg),
            Err(Error::NonConvergence {
                v_t: 376.0,
                iterations: 2
            })
        );
        assert!(matches!(
            iterate_beta(376.0, 10.0, 2.5, &ExtractionConfig::new(2.5)),
            Err(Error::PositiveSlope(_))
        ));
    }

    #[test]
    fn absolute_convergence_mode() {
        let cfg = ExtractionConfig {
            convergence_mode: ConvergenceMode::Absolute,
            convergence_tol: 1e-9,
            ..ExtractionConfig::new(2.5)
        };
        let p = iterate_beta(376.0, -3329.0, 2.5, &cfg).unwrap();
        let rel = iterate_beta(376.0, -3329.0, 2.5, &ExtractionConfig::new(2.5)).unwrap();
        assert!(((p.beta - rel.beta) / p.beta).abs() < 1e-4);
    }

    #[test]
    fn hfc_extraction() {
        let cfg = ExtractionConfig::new(2.5);
        let r = extract_at(&hfc_fit(), None, 376.0, &cfg).unwrap();
        assert!(((r.area_et - 90.0) / 90.0).abs() < 0.10, "{}", r.area_et);
        assert!(((r.area_sn - 0.46) / 0.46).abs() < 0.15, "{}", r.area_sn);
        assert!(((r.point.rt_st2 - 224.0) / 224.0).abs() < 0.03);
        assert!(((r.area_et / r.area_sn) / r.point.rt_st2 - 1.0).abs() < 1e-14);
        assert!((r.area_sn / (r.lambda_sn * hfc_fit().rs2) - 1.0).abs() < 1e-15);
        assert_eq!(r.current_source, CurrentSource::FitLine);
        assert!(r.alpha_f_sn.is_none());
        // f_t = 0.63 is above the pass band.
        assert!(r.warnings.iter().any(|w| w.contains("Inconclusive")));
    }

    #[test]
    fn hfc_brightness_with_measured_current() {
        let cfg = ExtractionConfig {
            measured_current: Some((376.0, 75e-9)),
            ..ExtractionConfig::new(2.5)
        };
        let r = extract_at(&hfc_fit(), None, 376.0, &cfg).unwrap();
        assert_eq!(r.current, 75e-9);
        assert_eq!(r.current_source, CurrentSource::DataPoint);
        assert!((r.j_extr - 75e-9 / r.area_sn).abs() < 1e-25);
        let expected = 1.44 * r.j_extr * 1e18 / (std::f64::consts::PI * r.d_f);
        assert!((r.b_pract / expected - 1.0).abs() < 1e-14);
        assert!(r.b_pract > 1e11 && r.b_pract < 1e12, "{}", r.b_pract);
    }

    #[test]
    fn et_limit_when_corrections_vanish() {
        let r = extract_at(&hfc_fit(), None, 376.0, &ExtractionConfig::new(2.5)).unwrap();
        // r_t = s_t = 1 turns Λ_SN into Λ_ET.
        assert!((r.lambda_sn * r.point.rt_st2 / r.lambda_et - 1.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_fitting_voltage() {
        let cfg = ExtractionConfig::new(2.5);
        assert!(matches!(
            extract_at(&hfc_fit(), None, 400.0, &cfg),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn current_policies() {
        let data = synthesize_emg_iv(
            0.46,
            7.26e-3,
            2.5,
            &linspace(362.0, 390.0, 5),
            SmfVariant::HighPrecision,
        )
        .unwrap();
        let fit = fit_dataset(&data).unwrap();
        let cfg = ExtractionConfig::new(2.5);
        let exact = extract_at(&fit, Some(&data), 369.0, &cfg).unwrap();
        assert_eq!(exact.current_source, CurrentSource::DataPoint);
        assert_eq!(exact.current, data.points[1].current);

        let mid = extract_at(&fit, Some(&data), 372.0, &cfg).unwrap();
        assert_eq!(mid.current_source, CurrentSource::Interpolated);
        assert!(mid.current > data.points[1].current && mid.current < data.points[2].current);

        let only = ExtractionConfig {
            current_policy: CurrentPolicy::DataOnly,
            ..ExtractionConfig::new(2.5)
        };
        assert_eq!(
            extract_at(&fit, None, 372.0, &only),
            Err(Error::MissingCurrent { v_t: 372.0 })
        );
        let line = ExtractionConfig {
            current_policy: CurrentPolicy::FitLine,
            ..ExtractionConfig::new(2.5)
        };
        let l = extract_at(&fit, Some(&data), 369.0, &line).unwrap();
        assert_eq!(l.current_source, CurrentSource::FitLine);
    }

    #[test]
    fn decay_width_shortcut() {
        let exact = extract_at(&hfc_fit(), None, 376.0, &ExtractionConfig::new(2.5)).unwrap();
        let cfg = ExtractionConfig {
            decay_width_shortcut: true,
            ..ExtractionConfig::new(2.5)
        };
        let short = extract_at(&hfc_fit(), None, 376.0, &cfg).unwrap();
        assert!(((short.d_f - exact.d_f) / exact.d_f).abs() < 0.05);
    }

    #[test]
    fn grid_construction() {
        let fit = hfc_fit();
        let g = VtGrid::Auto(21).voltages(&fit).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 362.0);
        assert_eq!(g[20], 390.0);
        assert!(g.contains(&376.0));
        let even = VtGrid::Auto(4).voltages(&fit).unwrap();
        assert_eq!(even.len(), 5);
        assert!(even.contains(&376.0));
        assert_eq!(VtGrid::Auto(1).voltages(&fit).unwrap(), vec![376.0]);
        assert!(VtGrid::Auto(0).voltages(&fit).is_err());
        assert!(VtGrid::Explicit(vec![300.0]).voltages(&fit).is_err());
        assert_eq!(
            VtGrid::Explicit(vec![380.0, 370.0, 380.0])
                .voltages(&fit)
                .unwrap(),
            vec![370.0, 380.0]
        );
    }

    #[test]
    fn sweep_single_point_matches_extract_at() {
        let cfg = ExtractionConfig {
            vt_grid: VtGrid::Auto(1),
            ..ExtractionConfig::new(2.5)
        };
        let s = sweep(&hfc_fit(), None, &cfg).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            s[0].result.as_ref().unwrap(),
            &extract_at(&hfc_fit(), None, 376.0, &cfg).unwrap()
        );
    }

    #[test]
    fn sweep_collects_failures() {
        let cfg = ExtractionConfig {
            max_iterations: 1,
            ..ExtractionConfig::new(2.5)
        };
        let s = sweep(&hfc_fit(), None, &cfg).unwrap();
        assert_eq!(s.len(), 21);
        assert!(s
            .iter()
            .all(|p| matches!(p.result, Err(Error::NonConvergence { .. }))));
    }

    #[test]
    fn error_bound() {
        let cfg = ExtractionConfig::new(2.5);
        let b = area_error_bound(&hfc_fit(), None, &cfg).unwrap();
        assert!(
            (b.relative_bound - 0.06).abs() <= 0.02,
            "{}",
            b.relative_bound
        );
        let again = area_error_bound(&hfc_fit(), None, &cfg).unwrap();
        assert_eq!(b, again);
        let flat = FnFitResult::from_parameters(-19.38, -3329.0, 376.0, 376.0).unwrap();
        assert_eq!(
            area_error_bound(&flat, None, &cfg).unwrap().relative_bound,
            0.0
        );
    }

    #[test]
    fn area_efficiency() {
        let a = formal_area_efficiency(8e6, 0.92e12).unwrap();
        assert!((a / 8.70e-6 - 1.0).abs() < 0.01);
        let b = formal_area_efficiency(2.3e4, 500e12).unwrap();
        assert!((b / 4.6e-11 - 1.0).abs() < 0.01);
        assert_eq!(formal_area_efficiency(5.0, 5.0).unwrap(), 1.0);
        assert!(matches!(
            formal_area_efficiency(0.0, 1.0),
            Err(Error::NonPositiveArea { .. })
        ));
        let cfg = ExtractionConfig {
            area_macro_nm2: Some(1e6),
            ..ExtractionConfig::new(2.5)
        };
        let r = extract_at(&hfc_fit(), None, 376.0, &cfg).unwrap();
        assert_eq!(r.alpha_f_sn, Some(r.area_sn / 1e6));
    }

    #[test]
    fn brightness_arithmetic() {
        let b = practical_brightness(75e-9, 0.46, 0.155).unwrap();
        assert!((b / 4.8e11 - 1.0).abs() < 0.02, "{b}");
        let b2 = practical_brightness(150e-9, 0.46, 0.155).unwrap();
        assert!((b2 / b - 2.0).abs() < 1e-14);
        assert!(practical_brightness(0.0, 0.46, 0.155).is_err());
    }

    #[test]
    fn synthesis_is_on_the_emg_curve() {
        let volts = linspace(362.0, 390.0, 8);
        let pts =
            synthesize_emg_points(0.46, 7.26e-3, 2.5, &volts, SmfVariant::HighPrecision).unwrap();
        assert!(pts.windows(2).all(|w| w[1].current > w[0].current));
        for p in &pts {
            let field = 7.26e-3 * p.voltage;
            let f = C2 / 6.25 * field;
            let v = smf::v_fd(f, SmfVariant::HighPrecision).unwrap();
            let curve = (0.46 * crate::constants::A_FN / 2.5 * 7.26e-3f64.powi(2)).ln()
                - v * crate::constants::B_FN * 2.5f64.powf(1.5) / field;
            assert!(((p.current / p.voltage.powi(2)).ln() - curve).abs() < 1e-12);
        }
        assert!(matches!(
            synthesize_emg_points(0.46, 7.26e-3, 2.5, &[1000.0], SmfVariant::HighPrecision),
            Err(Error::ScaledFieldOutOfRange { .. })
        ));
        assert!(
            synthesize_emg_points(-1.0, 7.26e-3, 2.5, &volts, SmfVariant::HighPrecision).is_err()
        );
    }

    #[test]
    fn round_trip_hfc_generator() {
        let volts = linspace(362.0, 390.0, 15);
        let data =
            synthesize_emg_iv(0.46, 7.26e-3, 2.5, &volts, SmfVariant::HighPrecision).unwrap();
        let fit = fit_dataset(&data).unwrap();
        let r = definitive(&fit, Some(&data), &ExtractionConfig::new(2.5)).unwrap();
        assert!((r.point.beta / 7.26e-3 - 1.0).abs() < 0.01);
        assert!((r.area_sn / 0.46 - 1.0).abs() < 0.12);
    }
}
