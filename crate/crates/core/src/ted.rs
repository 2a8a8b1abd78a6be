//! Total-energy distribution of the emitted electrons (Young form), and the
//! incident normal-energy distribution.
//!
//! Energies are measured from the emitter Fermi level. The unnormalized
//! density is
//!
//! ```text
//! g(ε) = exp(ε/d_F) / (1 + exp(ε/k_B T))
//! ```
//!
//! whose integral over the real line is d_F λ_T(p), p = k_B T / d_F.

use serde::{Deserialize, Serialize};

use crate::constants::{K_B, Z_S};
use crate::emission::{self, BarrierKind, DEFAULT_P_LIMIT};
use crate::error::{require_positive, Error, Result};
use crate::smf::SmfVariant;

pub use crate::extract::practical_brightness;

pub const DEFAULT_SAMPLES: usize = 16_385;
pub const MIN_SAMPLES: usize = 64;
/// Window ends are pushed out until the density there is below this fraction
/// of the peak.
pub const TAIL_FRACTION: f64 = 1.0e-9;

/// ln(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Incident normal-energy distribution N(T, ε_n), A m^-2 eV^-1.
///
/// At T = 0 this is the degenerate limit −z_S ε_n below the Fermi level and
/// zero above it.
pub fn ined(temperature: f64, eps_n: f64) -> Result<f64> {
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::NonPositiveInput {
            what: "temperature",
            value: temperature,
        });
    }
    if temperature == 0.0 {
        return Ok(if eps_n < 0.0 { -Z_S * eps_n } else { 0.0 });
    }
    let kt = K_B * temperature;
    Ok(Z_S * kt * softplus(-eps_n / kt))
}

/// Young-form kernel with fixed d_F and k_B T, not normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YoungDensity {
    pub d_f: f64,
    pub kt: f64,
}

impl YoungDensity {
    pub fn new(d_f: f64, temperature: f64) -> Result<Self> {
        require_positive("decay width d_F", d_f)?;
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::NonPositiveInput {
                what: "temperature",
                value: temperature,
            });
        }
        Ok(Self {
            d_f,
            kt: K_B * temperature,
        })
    }

    pub fn p(&self) -> f64 {
        self.kt / self.d_f
    }

    pub fn eval(&self, eps: f64) -> f64 {
        if self.kt == 0.0 {
            return match eps.partial_cmp(&0.0) {
                Some(std::cmp::Ordering::Less) => (eps / self.d_f).exp(),
                Some(std::cmp::Ordering::Equal) => 0.5,
                _ => 0.0,
            };
        }
        (eps / self.d_f - softplus(eps / self.kt)).exp()
    }

    /// Location of the maximum, from g'(ε) = 0.
    /// Maximum value; at T = 0 the supremum approached from below the step.
    pub fn peak_value(&self) -> f64 {
        if self.kt == 0.0 {
            1.0
        } else {
            self.eval(self.analytic_peak())
        }
    }

    pub fn analytic_peak(&self) -> f64 {
        if self.kt == 0.0 {
            0.0
        } else {
            let p = self.p();
            self.kt * (p / (1.0 - p)).ln()
        }
    }

    /// Exact integral over the real line, d_F λ_T(p).
    pub fn integral(&self, p_limit: f64) -> Result<f64> {
        Ok(self.d_f * emission::temperature_factor_with_limit(self.p(), p_limit)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TedSpec {
    /// eV.
    pub phi: f64,
    /// K.
    pub temperature: f64,
    /// V/nm.
    pub field: f64,
    pub variant: SmfVariant,
    /// Initial energy window relative to the Fermi level, eV. `None` selects
    /// [−10 d_F, 10 k_B T + 5 d_F].
    pub window: Option<(f64, f64)>,
    pub samples: usize,
    pub p_limit: f64,
}

impl TedSpec {
    pub fn new(phi: f64, temperature: f64, field: f64) -> Self {
        Self {
            phi,
            temperature,
            field,
            variant: SmfVariant::HighPrecision,
            window: None,
            samples: DEFAULT_SAMPLES,
            p_limit: DEFAULT_P_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TedSample {
    #[serde(rename = "eps_eV")]
    pub energy: f64,
    #[serde(rename = "density_per_eV")]
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TedCurve {
    pub samples: Vec<TedSample>,
    #[serde(rename = "d_F_eV")]
    pub d_f: f64,
    #[serde(rename = "T_K")]
    pub temperature: f64,
    pub p: f64,
    #[serde(rename = "fwhm_eV")]
    pub fwhm: f64,
    #[serde(rename = "peak_energy_eV")]
    pub peak_energy: f64,
    /// |trapezoid integral of the raw density / d_F λ_T − 1|.
    pub normalization_residual: f64,
}

impl TedCurve {
    pub fn density_model(&self) -> YoungDensity {
        YoungDensity {
            d_f: self.d_f,
            kt: K_B * self.temperature,
        }
    }
}

/// Composite trapezoid over (energy, density) samples.
pub fn trapezoid(samples: &[TedSample]) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[0].density + w[1].density) * (w[1].energy - w[0].energy))
        .sum()
}

/// TED for given (φ, T, F).
pub fn ted_curve(spec: &TedSpec) -> Result<TedCurve> {
    emission::scaled_field(spec.phi, spec.field)?;
    let d_f = emission::decay_width(
        BarrierKind::SchottkyNordheim,
        spec.phi,
        spec.field,
        spec.variant,
    )?;
    young_curve(
        d_f,
        spec.temperature,
        spec.window,
        spec.samples,
        spec.p_limit,
    )
}

/// TED for a given decay width, bypassing the barrier model.
pub fn young_curve(
    d_f: f64,
    temperature: f64,
    window: Option<(f64, f64)>,
    samples: usize,
    p_limit: f64,
) -> Result<TedCurve> {
    let g = YoungDensity::new(d_f, temperature)?;
    let exact = g.integral(p_limit)?;
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "TED needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let (mut lo, mut hi) = window.unwrap_or((-10.0 * d_f, 10.0 * g.kt + 5.0 * d_f));
    if !(lo < 0.0 && hi > 0.0) {
        return Err(Error::InvalidInput(format!(
            "TED window [{lo}, {hi}] eV must contain the Fermi level"
        )));
    }

    let peak_energy = peak(&g);
    let peak_value = g.peak_value();
    while g.eval(lo) > TAIL_FRACTION * peak_value {
        lo -= d_f;
    }
    while g.eval(hi) > TAIL_FRACTION * peak_value {
        hi += d_f;
    }

    // Uniform grid with ε = 0 on a node, so the Fermi step is integrated
    // symmetrically.
    let h = (hi - lo) / (samples - 1) as f64;
    let first = (lo / h).floor() as i64;
    let last = (hi / h).ceil() as i64;
    let mut pts: Vec<TedSample> = Vec::with_capacity((last - first + 2) as usize);
    for k in first..=last {
        let energy = k as f64 * h;
        if k == 0 && g.kt == 0.0 {
            pts.push(TedSample {
                energy,
                density: 1.0,
            });
            pts.push(TedSample {
                energy,
                density: 0.0,
            });
        } else {
            pts.push(TedSample {
                energy,
                density: g.eval(energy),
            });
        }
    }

    let raw = trapezoid(&pts);
    for s in &mut pts {
        s.density /= raw;
    }

    let mut curve = TedCurve {
        samples: pts,
        d_f,
        temperature,
        p: g.p(),
        fwhm: 0.0,
        peak_energy,
        normalization_residual: (raw / exact - 1.0).abs(),
    };
    curve.fwhm = fwhm(&curve)?;
    Ok(curve)
}

/// Golden-section search on the bracket around the largest sample of a
/// coarse scan.
fn peak(g: &YoungDensity) -> f64 {
    if g.kt == 0.0 {
        return 0.0;
    }
    let span = 10.0 * g.d_f.max(g.kt);
    let n = 200;
    let step = 2.0 * span / n as f64;
    let (imax, _) = (0..=n)
        .map(|i| g.eval(-span + step * i as f64))
        .enumerate()
        .fold(
            (0, f64::MIN),
            |best, (i, v)| if v > best.1 { (i, v) } else { best },
        );
    let mut a = -span + step * imax.saturating_sub(1) as f64;
    let mut b = -span + step * (imax + 1).min(n) as f64;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    while (b - a).abs() > 1e-13 * (1.0 + g.d_f) {
        if g.eval(c) > g.eval(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    0.5 * (a + b)
}

fn bisect(mut lo: f64, mut hi: f64, mut above: impl FnMut(f64) -> bool) -> f64 {
    // `above(lo)` and `above(hi)` differ.
    let lo_above = above(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if above(mid) == lo_above {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Full width at half maximum, eV.
pub fn fwhm(curve: &TedCurve) -> Result<f64> {
    let s = &curve.samples;
    let top = s.iter().map(|x| x.density).fold(f64::MIN, f64::max);
    let crossings = s
        .windows(2)
        .filter(|w| (w[0].density >= 0.5 * top) != (w[1].density >= 0.5 * top))
        .count();
    if crossings > 2 {
        return Err(Error::MultiPeak { crossings });
    }
    if crossings < 2 {
        return Err(Error::InvalidInput(
            "TED window does not contain both half-maximum crossings".into(),
        ));
    }

    let g = curve.density_model();
    let e0 = curve.peak_energy;
    let half = if g.kt == 0.0 { 0.5 } else { 0.5 * g.eval(e0) };
    let lo = s[0].energy;
    let hi = s[s.len() - 1].energy;
    let left = bisect(lo, e0, |e| g.eval(e) >= half);
    // At T = 0 the high-energy flank is the step at ε = 0.
    let right = if g.kt == 0.0 {
        0.0
    } else {
        bisect(e0, hi, |e| g.eval(e) >= half)
    };
    Ok(right - left)
}
