//! Current-voltage ingestion, Fowler-Nordheim coordinates and the straight
//! line fitted to them.
//!
//! FN coordinates are x = 1/V_m (V^-1) and y = ln(I_m/V_m²). The fitted line
//! is y = ln R + S·x, with S in Np·V and negative for FE-like data.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::constants::C2;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IvPoint {
    /// Measured voltage, V.
    pub voltage: f64,
    /// Measured current, A.
    pub current: f64,
}

/// Measured I-V data, sorted by strictly increasing voltage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IvDataset {
    pub label: String,
    pub points: Vec<IvPoint>,
}

pub const MIN_POINTS: usize = 3;

impl IvDataset {
    /// Validates, sorts by voltage and merges duplicate voltages (mean
    /// current).
    pub fn new(label: impl Into<String>, points: Vec<IvPoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            let line = i as u64 + 1;
            if !(p.voltage > 0.0 && p.voltage.is_finite()) {
                return Err(Error::NonPositiveValue {
                    line,
                    what: "voltage",
                    value: p.voltage,
                });
            }
            if !(p.current > 0.0 && p.current.is_finite()) {
                return Err(Error::NonPositiveValue {
                    line,
                    what: "current",
                    value: p.current,
                });
            }
        }
        Self::canonical(label.into(), points)
    }

    fn canonical(label: String, mut points: Vec<IvPoint>) -> Result<Self> {
        points.sort_by(|a, b| a.voltage.total_cmp(&b.voltage));
        let mut merged: Vec<IvPoint> = Vec::with_capacity(points.len());
        let mut run = 0usize;
        for p in points {
            match merged.last_mut() {
                Some(last) if last.voltage == p.voltage => {
                    run += 1;
                    last.current += (p.current - last.current) / run as f64;
                }
                _ => {
                    run = 1;
                    merged.push(p);
                }
            }
        }
        if merged.len() < MIN_POINTS {
            return Err(Error::TooFewPoints {
                needed: MIN_POINTS,
                got: merged.len(),
            });
        }
        Ok(Self {
            label,
            points: merged,
        })
    }

    pub fn v_min(&self) -> f64 {
        self.points[0].voltage
    }

    pub fn v_max(&self) -> f64 {
        self.points[self.points.len() - 1].voltage
    }
}

/// How to read the two CSV columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvFormat {
    /// Multiplier taking the current column to amperes (1e-9 for nA).
    pub current_multiplier: f64,
}

impl Default for CsvFormat {
    fn default() -> Self {
        Self {
            current_multiplier: 1.0,
        }
    }
}

/// Reads `voltage_V,current_A` CSV. A non-numeric first row is taken as a
/// header; `#` lines are comments.
pub fn load_iv<R: Read>(source: R, format: CsvFormat, label: &str) -> Result<IvDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let mut points = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let is_first = std::mem::replace(&mut first, false);
        if record.len() < 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let voltage = record[0].parse::<f64>();
        let current = record[1].parse::<f64>();
        let (voltage, current) = match (voltage, current) {
            (Ok(v), Ok(i)) => (v, i * format.current_multiplier),
            _ if is_first => continue,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("non-numeric row {:?},{:?}", &record[0], &record[1]),
                })
            }
        };
        if !(voltage > 0.0 && voltage.is_finite()) {
            return Err(Error::NonPositiveValue {
                line,
                what: "voltage",
                value: voltage,
            });
        }
        if !(current > 0.0 && current.is_finite()) {
            return Err(Error::NonPositiveValue {
                line,
                what: "current",
                value: current,
            });
        }
        points.push(IvPoint { voltage, current });
    }
    IvDataset::canonical(label.to_string(), points)
}

/// A point in FN coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnPoint {
    /// 1/V_m, V^-1.
    pub x: f64,
    /// ln(I_m / V_m²).
    pub y: f64,
}

pub fn fn_transform(dataset: &IvDataset) -> Vec<FnPoint> {
    dataset
        .points
        .iter()
        .map(|p| FnPoint {
            x: 1.0 / p.voltage,
            y: (p.current / (p.voltage * p.voltage)).ln(),
        })
        .collect()
}

/// Straight line fitted to an FN plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnFitResult {
    #[serde(rename = "ln_R_expt")]
    pub ln_r: f64,
    /// R_expt, A/V².
    #[serde(rename = "R_expt_A_per_V2")]
    pub r: f64,
    /// S_expt, Np·V (negative).
    #[serde(rename = "S_expt_V")]
    pub s: f64,
    /// R_expt·S_expt², A.
    #[serde(rename = "RS2_A")]
    pub rs2: f64,
    #[serde(rename = "V_min_V")]
    pub v_min: f64,
    #[serde(rename = "V_max_V")]
    pub v_max: f64,
    #[serde(rename = "V_mid_V")]
    pub v_mid: f64,
    pub rms_residual: f64,
    pub n_points: usize,
}

impl FnFitResult {
    /// Builds a fit record straight from line parameters, skipping the
    /// regression.
    pub fn from_parameters(ln_r: f64, slope: f64, v_min: f64, v_max: f64) -> Result<Self> {
        if !ln_r.is_finite() {
            return Err(Error::InvalidInput(format!(
                "ln R must be finite, got {ln_r}"
            )));
        }
        if !(slope < 0.0) {
            return Err(Error::PositiveSlope(slope));
        }
        if !(v_min > 0.0 && v_max >= v_min && v_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "voltage range must satisfy 0 < lo <= hi, got {v_min},{v_max}"
            )));
        }
        Ok(Self::assemble(ln_r, slope, v_min, v_max, 0.0, 0))
    }

    fn assemble(ln_r: f64, s: f64, v_min: f64, v_max: f64, rms: f64, n: usize) -> Self {
        let r = ln_r.exp();
        Self {
            ln_r,
            r,
            s,
            rs2: r * s * s,
            v_min,
            v_max,
            v_mid: 0.5 * (v_min + v_max),
            rms_residual: rms,
            n_points: n,
        }
    }

    /// ln(I/V²) on the fitted line at voltage `v`.
    pub fn line_at(&self, v: f64) -> f64 {
        self.ln_r + self.s / v
    }

    /// Current on the fitted line at voltage `v`, A.
    pub fn current_at(&self, v: f64) -> f64 {
        self.line_at(v).exp() * v * v
    }
}

/// Ordinary least squares of y on x. Needs at least two points with
/// distinct abscissae.
pub fn fit_line(points: &[FnPoint]) -> Result<FnFitResult> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.x).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.y).sum::<f64>() / nf;
    let (sxx, sxy) = points.iter().fold((0.0, 0.0), |(sxx, sxy), p| {
        let dx = p.x - mean_x;
        (sxx + dx * dx, sxy + dx * (p.y - mean_y))
    });
    let spread = points
        .iter()
        .map(|p| (p.x - mean_x).abs())
        .fold(0.0, f64::max);
    if !(spread > f64::EPSILON * mean_x.abs()) || sxx == 0.0 {
        return Err(Error::DegenerateAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    if !(slope < 0.0) {
        return Err(Error::PositiveSlope(slope));
    }
    let rss: f64 = points
        .iter()
        .map(|p| (p.y - intercept - slope * p.x).powi(2))
        .sum();
    let x_max = points.iter().map(|p| p.x).fold(f64::MIN, f64::max);
    let x_min = points.iter().map(|p| p.x).fold(f64::MAX, f64::min);
    Ok(FnFitResult::assemble(
        intercept,
        slope,
        1.0 / x_max,
        1.0 / x_min,
        (rss / nf).sqrt(),
        n,
    ))
}

/// Transform and fit in one step.
pub fn fit_dataset(dataset: &IvDataset) -> Result<FnFitResult> {
    fit_line(&fn_transform(dataset))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthodoxyThresholds {
    pub pass_lo: f64,
    pub pass_hi: f64,
    pub fail_lo: f64,
    pub fail_hi: f64,
}

impl Default for OrthodoxyThresholds {
    fn default() -> Self {
        // The outer band comes from the orthodoxy-test literature, not from
        // the pass band itself.
        Self {
            pass_lo: 0.15,
            pass_hi: 0.45,
            fail_lo: 0.10,
            fail_hi: 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthodoxyVerdict {
    pub f_low: f64,
    pub f_high: f64,
    pub verdict: Verdict,
    pub thresholds: OrthodoxyThresholds,
}

/// Scaled fields at the ends of the measured range, judged against the
/// pass and fail bands. Advisory only.
pub fn orthodoxy_test(
    fit: &FnFitResult,
    phi: f64,
    beta: f64,
    thresholds: OrthodoxyThresholds,
) -> OrthodoxyVerdict {
    let scale = C2 / (phi * phi) * beta;
    let f_low = scale * fit.v_min;
    let f_high = scale * fit.v_max;
    let inside = |lo: f64, hi: f64| f_low >= lo && f_high <= hi;
    let verdict = if inside(thresholds.pass_lo, thresholds.pass_hi) {
        Verdict::Pass
    } else if !inside(thresholds.fail_lo, thresholds.fail_hi) {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    OrthodoxyVerdict {
        f_low,
        f_high,
        verdict,
        thresholds,
    }
}
