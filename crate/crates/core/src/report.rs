//! Analysis report assembly and plot-ready series.
//!
//! A report is plain data: building it twice from the same inputs gives
//! byte-identical JSON. Sections that fail carry an error record instead of
//! aborting the whole report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{self, AreaErrorBound, ExtractionConfig, ExtractionResult};
use crate::fimfem::{self, AreaComparison, FemMeasurements, FimFemResult, FimMeasurements};
use crate::fnfit::{self, FnFitResult, FnPoint, IvDataset, OrthodoxyVerdict};
use crate::ted::{self, TedSpec};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SIG_DIGITS: usize = 6;

/// Either a computed section or the error that prevented it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Error { kind: String, message: String },
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Error { .. } => None,
        }
    }
}

impl<T> From<Result<T>> for Outcome<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Error {
                kind: e.kind().to_string(),
                message: e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub version: String,
}

impl Default for Generator {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputsEcho {
    pub dataset_label: String,
    pub n_points: usize,
    #[serde(rename = "phi_eV")]
    pub phi: f64,
    #[serde(rename = "T_K")]
    pub temperature: f64,
    pub config: ExtractionConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    #[serde(rename = "V_t_V")]
    pub v_t: f64,
    pub outcome: Outcome<ExtractionResult>,
}

/// TED at the definitive apex field. The spec is kept so the full curve can
/// be regenerated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TedSummary {
    pub spec: TedSpec,
    #[serde(rename = "d_F_eV")]
    pub d_f: f64,
    #[serde(rename = "fwhm_eV")]
    pub fwhm: f64,
    #[serde(rename = "peak_energy_eV")]
    pub peak_energy: f64,
    pub p: f64,
    pub normalization_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FimFemSection {
    pub result: FimFemResult,
    pub comparison: Outcome<AreaComparison>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FimFemInputs {
    pub fim: FimMeasurements,
    pub fem: FemMeasurements,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReportOptions {
    pub ted: bool,
    pub fimfem: Option<FimFemInputs>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub generator: Generator,
    pub schema_version: u32,
    pub inputs: InputsEcho,
    pub fit: FnFitResult,
    pub fn_points: Vec<FnPoint>,
    pub orthodoxy: OrthodoxyVerdict,
    pub definitive: Outcome<ExtractionResult>,
    pub sweep: Vec<SweepEntry>,
    pub error_bound: Outcome<AreaErrorBound>,
    pub ted: Option<Outcome<TedSummary>>,
    pub fimfem: Option<Outcome<FimFemSection>>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Fit, then everything downstream of the fit.
pub fn build_report(
    dataset: &IvDataset,
    config: &ExtractionConfig,
    options: &ReportOptions,
) -> Result<AnalysisReport> {
    let fit = fnfit::fit_dataset(dataset)?;
    build_report_from_fit(&fit, Some(dataset), &dataset.label, config, options)
}

/// Report for a line given directly as (ln R, S, voltage range), with
/// optional measured data for currents and the FN plot.
pub fn build_report_from_fit(
    fit: &FnFitResult,
    dataset: Option<&IvDataset>,
    label: &str,
    config: &ExtractionConfig,
    options: &ReportOptions,
) -> Result<AnalysisReport> {
    crate::constants::derive(config.phi)?;
    let mut warnings = Vec::new();

    // The orthodoxy test needs a β; the definitive one is the natural choice.
    let definitive = extract::definitive(fit, dataset, config);
    let beta_for_test = match &definitive {
        Ok(r) => r.point.beta,
        Err(_) => config.beta_start,
    };
    let orthodoxy = fnfit::orthodoxy_test(fit, config.phi, beta_for_test, config.orthodoxy);

    let sweep: Vec<SweepEntry> = extract::sweep(fit, dataset, config)?
        .into_iter()
        .map(|p| {
            if let Err(e) = &p.result {
                warnings.push(format!("sweep at V_t = {} V: {e}", p.v_t));
            }
            SweepEntry {
                v_t: p.v_t,
                outcome: p.result.into(),
            }
        })
        .collect();

    match &definitive {
        Ok(r) => warnings.extend(r.warnings.iter().cloned()),
        Err(e) => warnings.push(format!("definitive extraction: {e}")),
    }

    let error_bound = extract::area_error_bound(fit, dataset, config);
    if let Err(e) = &error_bound {
        warnings.push(format!("error bound: {e}"));
    }

    let ted = options.ted.then(|| {
        let summary = match &definitive {
            Ok(r) => ted_summary(TedSpec {
                variant: config.variant,
                p_limit: config.p_limit,
                ..TedSpec::new(config.phi, config.temperature, r.point.field_t)
            }),
            Err(_) => Err(Error::MissingSection("definitive")),
        };
        if let Err(e) = &summary {
            warnings.push(format!("ted: {e}"));
        }
        Outcome::from(summary)
    });

    let fimfem = options.fimfem.map(|inp| {
        let section = fimfem::analyze(&inp.fim, &inp.fem).map(|result| {
            let comparison = match &definitive {
                Ok(r) => fimfem::compare_areas(result.geometry.area_s, r.area_et, r.area_sn),
                Err(_) => Err(Error::MissingSection("definitive")),
            };
            FimFemSection {
                result,
                comparison: comparison.into(),
            }
        });
        if let Err(e) = &section {
            warnings.push(format!("fimfem: {e}"));
        }
        Outcome::from(section)
    });

    Ok(AnalysisReport {
        generator: Generator::default(),
        schema_version: SCHEMA_VERSION,
        inputs: InputsEcho {
            dataset_label: label.to_string(),
            n_points: dataset.map_or(0, |d| d.points.len()),
            phi: config.phi,
            temperature: config.temperature,
            config: config.clone(),
        },
        fit: *fit,
        fn_points: dataset.map(fnfit::fn_transform).unwrap_or_default(),
        orthodoxy,
        definitive: definitive.into(),
        sweep,
        error_bound: error_bound.into(),
        ted,
        fimfem,
        warnings,
    })
}

fn ted_summary(spec: TedSpec) -> Result<TedSummary> {
    let c = ted::ted_curve(&spec)?;
    Ok(TedSummary {
        spec,
        d_f: c.d_f,
        fwhm: c.fwhm,
        peak_energy: c.peak_energy,
        p: c.p,
        normalization_residual: c.normalization_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    SweepBeta,
    SweepArea,
    SweepBrightness,
    TedCurve,
    FnPlot,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 5] = [
        SeriesKind::SweepBeta,
        SeriesKind::SweepArea,
        SeriesKind::SweepBrightness,
        SeriesKind::TedCurve,
        SeriesKind::FnPlot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::SweepBeta => "sweep_beta",
            SeriesKind::SweepArea => "sweep_area",
            SeriesKind::SweepBrightness => "sweep_brightness",
            SeriesKind::TedCurve => "ted_curve",
            SeriesKind::FnPlot => "fn_plot",
        }
    }
}

impl std::str::FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown series '{s}'")))
    }
}

/// Numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    /// CSV with a header row. `digits` = None writes full precision.
    pub fn to_csv(&self, digits: Option<usize>) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|&x| match digits {
                    Some(n) => format_sig(x, n),
                    None => format!("{x:?}"),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn sweep_series(
    report: &AnalysisReport,
    column: &'static str,
    value: impl Fn(&ExtractionResult) -> f64,
) -> Result<Series> {
    let rows: Vec<Vec<f64>> = report
        .sweep
        .iter()
        .filter_map(|e| e.outcome.ok().map(|r| vec![e.v_t, value(r)]))
        .collect();
    if rows.is_empty() {
        return Err(Error::MissingSection("sweep"));
    }
    Ok(Series {
        columns: vec!["V_t_V", column],
        rows,
    })
}

pub fn emit_series(report: &AnalysisReport, which: SeriesKind) -> Result<Series> {
    match which {
        SeriesKind::SweepBeta => sweep_series(report, "beta_per_nm", |r| r.point.beta),
        SeriesKind::SweepArea => sweep_series(report, "A_f_SN_nm2", |r| r.area_sn),
        SeriesKind::SweepBrightness => {
            sweep_series(report, "B_pract_A_per_m2_sr_eV", |r| r.b_pract)
        }
        SeriesKind::TedCurve => {
            let summary = report
                .ted
                .as_ref()
                .and_then(|o| o.ok())
                .ok_or(Error::MissingSection("ted"))?;
            let curve = ted::ted_curve(&summary.spec)?;
            Ok(Series {
                columns: vec!["eps_eV", "density_per_eV"],
                rows: curve
                    .samples
                    .iter()
                    .map(|s| vec![s.energy, s.density])
                    .collect(),
            })
        }
        SeriesKind::FnPlot => {
            let fit = &report.fit;
            let rows = if report.fn_points.is_empty() {
                [fit.v_max, fit.v_min]
                    .iter()
                    .map(|&v| {
                        let y = fit.line_at(v);
                        vec![1.0 / v, y, y]
                    })
                    .collect()
            } else {
                report
                    .fn_points
                    .iter()
                    .map(|p| vec![p.x, p.y, fit.line_at(1.0 / p.x)])
                    .collect()
            };
            Ok(Series {
                columns: vec!["inv_V", "ln_I_over_V2", "fit_ln_I_over_V2"],
                rows,
            })
        }
    }
}

/// Formats `x` to `digits` significant figures, choosing plain or exponent
/// notation like C's `%g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0072634, 6), "0.0072634");
        assert_eq!(format_sig(7.26341234e-3, 6), "0.00726341");
        assert_eq!(format_sig(4.8e11, 6), "4.8e11");
        assert_eq!(format_sig(-3329.0, 6), "-3329");
        assert_eq!(format_sig(123456.7, 6), "123457");
        assert_eq!(format_sig(1234567.0, 6), "1.23457e6");
        assert_eq!(format_sig(2.5e-10, 3), "2.5e-10");
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(0.99999999, 6), "1");
    }

    #[test]
    fn outcome_conversion() {
        let o: Outcome<f64> = Err(Error::MissingSection("ted")).into();
        assert_eq!(
            o,
            Outcome::Error {
                kind: "MissingSection".into(),
                message: Error::MissingSection("ted").to_string()
            }
        );
        assert_eq!(Outcome::from(Ok::<_, Error>(1.0)).ok(), Some(&1.0));
    }

    #[test]
    fn series_names_parse() {
        for k in SeriesKind::ALL {
            assert_eq!(k.name().parse::<SeriesKind>().unwrap(), k);
        }
        assert!("bogus".parse::<SeriesKind>().is_err());
    }

    #[test]
    fn csv_formatting() {
        let s = Series {
            columns: vec!["a", "b"],
            rows: vec![vec![1.0, 0.1 + 0.2]],
        };
        assert_eq!(s.to_csv(Some(6)), "a,b\n1,0.3\n");
        assert_eq!(s.to_csv(None), "a,b\n1.0,0.30000000000000004\n");
    }
}
