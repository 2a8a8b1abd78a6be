//! Browser bindings for the emgfe demo page.
//!
//! Three operations are exposed: special-function curves, a total-energy
//! distribution, and a fitting-voltage sweep for a given FN-plot line. Each
//! has a plain Rust function (tested natively) and a thin `wasm_bindgen`
//! wrapper that flattens the result into typed arrays.

use emgfe::extract::{self, ExtractionConfig, VtGrid};
use emgfe::fnfit::FnFitResult;
use emgfe::smf::{self, SmfVariant};
use emgfe::ted::{self, TedSpec};
use wasm_bindgen::prelude::*;

/// v and s in both variants, sampled on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SmfCurves {
    pub x: Vec<f64>,
    pub v_fd06: Vec<f64>,
    pub v_hp: Vec<f64>,
    pub s_fd06: Vec<f64>,
    pub s_hp: Vec<f64>,
}

pub fn smf_curves(n: usize) -> emgfe::Result<SmfCurves> {
    let n = n.max(2);
    let x = extract::linspace(0.0, 1.0, n);
    let eval = |f: fn(f64, SmfVariant) -> emgfe::Result<f64>, var| -> emgfe::Result<Vec<f64>> {
        x.iter().map(|&xi| f(xi, var)).collect()
    };
    Ok(SmfCurves {
        v_fd06: eval(smf::v_fd, SmfVariant::SimpleGood)?,
        v_hp: eval(smf::v_fd, SmfVariant::HighPrecision)?,
        s_fd06: eval(smf::s_fd, SmfVariant::SimpleGood)?,
        s_hp: eval(smf::s_fd, SmfVariant::HighPrecision)?,
        x,
    })
}

/// A TED curve thinned to at most `max_points` for drawing.
#[derive(Debug, Clone, PartialEq)]
pub struct TedPlot {
    pub energy: Vec<f64>,
    pub density: Vec<f64>,
    pub d_f: f64,
    pub fwhm: f64,
    pub peak_energy: f64,
    pub p: f64,
}

pub fn ted_plot(
    phi: f64,
    field: f64,
    temperature: f64,
    max_points: usize,
) -> emgfe::Result<TedPlot> {
    let c = ted::ted_curve(&TedSpec::new(phi, temperature, field))?;
    let step = (c.samples.len() / max_points.max(2)).max(1);
    let kept = c.samples.iter().step_by(step);
    Ok(TedPlot {
        energy: kept.clone().map(|s| s.energy).collect(),
        density: kept.map(|s| s.density).collect(),
        d_f: c.d_f,
        fwhm: c.fwhm,
        peak_energy: c.peak_energy,
        p: c.p,
    })
}

/// Extraction results across the fitting-voltage range. Failed points are
/// dropped and counted.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlot {
    pub v_t: Vec<f64>,
    pub beta: Vec<f64>,
    pub area_sn: Vec<f64>,
    pub area_et: Vec<f64>,
    pub failed: usize,
}

pub fn sweep_plot(
    ln_r: f64,
    slope: f64,
    v_lo: f64,
    v_hi: f64,
    phi: f64,
    n: usize,
) -> emgfe::Result<SweepPlot> {
    let fit = FnFitResult::from_parameters(ln_r, slope, v_lo, v_hi)?;
    let cfg = ExtractionConfig {
        vt_grid: VtGrid::Auto(n.max(1)),
        ..ExtractionConfig::new(phi)
    };
    let mut out = SweepPlot {
        v_t: Vec::new(),
        beta: Vec::new(),
        area_sn: Vec::new(),
        area_et: Vec::new(),
        failed: 0,
    };
    for p in extract::sweep(&fit, None, &cfg)? {
        match p.result {
            Ok(r) => {
                out.v_t.push(p.v_t);
                out.beta.push(r.point.beta);
                out.area_sn.push(r.area_sn);
                out.area_et.push(r.area_et);
            }
            Err(_) => out.failed += 1,
        }
    }
    Ok(out)
}

fn js_err(e: emgfe::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Smf(SmfCurves);

#[wasm_bindgen]
impl Smf {
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize) -> Result<Smf, JsError> {
        smf_curves(n).map(Smf).map_err(js_err)
    }
    pub fn x(&self) -> Vec<f64> {
        self.0.x.clone()
    }
    pub fn v_fd06(&self) -> Vec<f64> {
        self.0.v_fd06.clone()
    }
    pub fn v_hp(&self) -> Vec<f64> {
        self.0.v_hp.clone()
    }
    pub fn s_fd06(&self) -> Vec<f64> {
        self.0.s_fd06.clone()
    }
    pub fn s_hp(&self) -> Vec<f64> {
        self.0.s_hp.clone()
    }
}

#[wasm_bindgen]
pub struct Ted(TedPlot);

#[wasm_bindgen]
impl Ted {
    #[wasm_bindgen(constructor)]
    pub fn new(phi: f64, field: f64, temperature: f64, max_points: usize) -> Result<Ted, JsError> {
        ted_plot(phi, field, temperature, max_points)
            .map(Ted)
            .map_err(js_err)
    }
    pub fn energy(&self) -> Vec<f64> {
        self.0.energy.clone()
    }
    pub fn density(&self) -> Vec<f64> {
        self.0.density.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn d_f(&self) -> f64 {
        self.0.d_f
    }
    #[wasm_bindgen(getter)]
    pub fn fwhm(&self) -> f64 {
        self.0.fwhm
    }
    #[wasm_bindgen(getter)]
    pub fn peak_energy(&self) -> f64 {
        self.0.peak_energy
    }
    #[wasm_bindgen(getter)]
    pub fn p(&self) -> f64 {
        self.0.p
    }
}

#[wasm_bindgen]
pub struct Sweep(SweepPlot);

#[wasm_bindgen]
impl Sweep {
    #[wasm_bindgen(constructor)]
    pub fn new(
        ln_r: f64,
        slope: f64,
        v_lo: f64,
        v_hi: f64,
        phi: f64,
        n: usize,
    ) -> Result<Sweep, JsError> {
        sweep_plot(ln_r, slope, v_lo, v_hi, phi, n)
            .map(Sweep)
            .map_err(js_err)
    }
    pub fn v_t(&self) -> Vec<f64> {
        self.0.v_t.clone()
    }
    pub fn beta(&self) -> Vec<f64> {
        self.0.beta.clone()
    }
    pub fn area_sn(&self) -> Vec<f64> {
        self.0.area_sn.clone()
    }
    pub fn area_et(&self) -> Vec<f64> {
        self.0.area_et.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn failed(&self) -> usize {
        self.0.failed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smf_endpoints() {
        let c = smf_curves(101).unwrap();
        assert_eq!(c.x.len(), 101);
        assert_eq!(c.v_hp[0], 1.0);
        assert!(c.v_hp[100].abs() < 1e-9);
        assert!(c
            .s_fd06
            .iter()
            .zip(&c.s_hp)
            .all(|(a, b)| (a - b).abs() < 0.01));
        assert_eq!(smf_curves(0).unwrap().x, vec![0.0, 1.0]);
    }

    #[test]
    fn ted_is_thinned() {
        let t = ted_plot(2.5, 2.8, 300.0, 400).unwrap();
        assert!(t.energy.len() <= 800 && t.energy.len() >= 400);
        assert_eq!(t.energy.len(), t.density.len());
        assert!(t.peak_energy < 0.0);
        assert!(ted_plot(2.5, 50.0, 300.0, 400).is_err());
    }

    #[test]
    fn sweep_matches_library() {
        let s = sweep_plot(-19.38, -3329.0, 362.0, 390.0, 2.5, 21).unwrap();
        assert_eq!(s.v_t.len(), 21);
        assert_eq!(s.failed, 0);
        assert!(s.beta.windows(2).all(|w| w[1] < w[0]));
        assert!(s.area_sn.windows(2).all(|w| w[1] > w[0]));
        assert!(sweep_plot(-19.38, 10.0, 362.0, 390.0, 2.5, 21).is_err());
    }
}
