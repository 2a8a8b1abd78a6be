//! `emgfe` command-line tool.
//!
//! Exit status: 0 success, 1 input or flag error, 2 numeric failure
//! (non-convergence, scaled field out of range, temperature regime).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod parse;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use emgfe::extract::{ExtractionConfig, ExtractionResult, VtGrid};
use emgfe::fimfem::{self, FemMeasurements, FimMeasurements, SpotRadius};
use emgfe::fnfit::{self, CsvFormat, FnFitResult};
use emgfe::report::{self, format_sig, AnalysisReport, Outcome, ReportOptions, SeriesKind};
use emgfe::smf::{self, SmfVariant};
use emgfe::{extract, ted, Error};

#[derive(Parser, Debug)]
#[command(
    name = "emgfe",
    version,
    about = "Field emission I-V analysis with Extended Murphy-Good theory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit an I-V data file and extract emission parameters.
    Analyze(AnalyzeArgs),
    /// Extract parameters from a known FN-plot line, skipping the regression.
    Fit(FitArgs),
    /// Total-energy distribution for given work function, field and temperature.
    Ted(TedArgs),
    /// Evaluate the special field emission functions v, u, t, s, r.
    Smf(SmfArgs),
    /// FIM/FEM magnification arithmetic and electron source area.
    Fimfem(FimFemArgs),
    /// Generate synthetic I-V data from the forward emission model.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct ExtractArgs {
    /// Local work function, eV.
    #[arg(long)]
    phi: f64,
    /// Emitter temperature, K.
    #[arg(long, default_value_t = 300.0)]
    temp: f64,
    /// Macroscopic emitter area, e.g. 0.92mm2 or 8e6nm2 (bare number = nm2).
    #[arg(long, value_parser = parse::area_nm2)]
    area_macro: Option<f64>,
    /// Fitting-voltage grid: a point count N or a comma list of voltages.
    #[arg(long, value_parser = parse::vt_grid, default_value = "21")]
    vt_grid: VtGrid,
    /// Special-function variant: hp or fd06.
    #[arg(long, default_value = "hp")]
    variant: SmfVariant,
    /// Starting value for the conversion factor, nm^-1.
    #[arg(long, default_value_t = 1e-3)]
    beta_start: f64,
    /// Measured current at one voltage, as V,I with I in amperes.
    #[arg(long, value_parser = parse::pair)]
    current: Option<(f64, f64)>,
    /// Also compute the total-energy distribution at the definitive field.
    #[arg(long)]
    ted: bool,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write plot-ready CSV series into this directory.
    #[arg(long)]
    series: Option<PathBuf>,
    /// Significant digits in CSV series.
    #[arg(long, default_value_t = report::DEFAULT_SIG_DIGITS)]
    digits: usize,
}

impl ExtractArgs {
    fn config(&self) -> ExtractionConfig {
        ExtractionConfig {
            temperature: self.temp,
            beta_start: self.beta_start,
            variant: self.variant,
            vt_grid: self.vt_grid.clone(),
            area_macro_nm2: self.area_macro,
            measured_current: self.current,
            ..ExtractionConfig::new(self.phi)
        }
    }

    fn options(&self) -> ReportOptions {
        ReportOptions {
            ted: self.ted,
            fimfem: None,
        }
    }
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// CSV with voltage (V) and current columns.
    #[arg(long)]
    input: PathBuf,
    /// Unit of the current column: A, mA, uA, nA or pA.
    #[arg(long, value_parser = parse::current_unit, default_value = "A")]
    current_unit: f64,
    #[command(flatten)]
    extract: ExtractArgs,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Intercept ln(R) of the FN-plot line, R in A/V^2.
    #[arg(long = "lnR", allow_negative_numbers = true)]
    ln_r: f64,
    /// Slope S of the FN-plot line, V.
    #[arg(long, allow_negative_numbers = true)]
    slope: f64,
    /// Measured voltage range as lo,hi.
    #[arg(long, value_parser = parse::pair)]
    vrange: (f64, f64),
    #[command(flatten)]
    extract: ExtractArgs,
}

#[derive(Args, Debug)]
struct TedArgs {
    #[arg(long)]
    phi: f64,
    /// Apex barrier field, V/nm.
    #[arg(long)]
    field: f64,
    #[arg(long, default_value_t = 300.0)]
    temp: f64,
    #[arg(long, default_value = "hp")]
    variant: SmfVariant,
    #[arg(long, default_value_t = ted::DEFAULT_SAMPLES)]
    samples: usize,
    /// Write the normalized curve as CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = report::DEFAULT_SIG_DIGITS)]
    digits: usize,
}

#[derive(Args, Debug)]
struct SmfArgs {
    /// Scaled barrier field, 0 <= x <= 1.
    #[arg(long)]
    x: f64,
    /// Scaling parameter for r = exp(eta u).
    #[arg(long)]
    eta: Option<f64>,
}

#[derive(Args, Debug)]
struct FimFemArgs {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Physical reference hole diameter, mm.
    #[arg(long)]
    hole_true: Option<f64>,
    /// Reference hole diameter on the record, mm.
    #[arg(long)]
    hole_record: Option<f64>,
    /// Atom image-spot separation on the record, mm.
    #[arg(long)]
    spot_separation: Option<f64>,
    /// Nearest-neighbour spacing in the imaged plane, nm.
    #[arg(long)]
    nn_spacing: Option<f64>,
    /// FEM spot radius measured on the screen, mm.
    #[arg(long, conflicts_with = "spot_radius_record")]
    spot_radius_screen: Option<f64>,
    /// FEM spot radius measured on the record, mm.
    #[arg(long)]
    spot_radius_record: Option<f64>,
    /// Beam-broadening divisor (default 1.2).
    #[arg(long)]
    broadening: Option<f64>,
    /// Formal areas to compare with, as A_f_ET,A_f_SN in nm2.
    #[arg(long, value_parser = parse::pair)]
    compare: Option<(f64, f64)>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Formal emission area, nm2.
    #[arg(long, allow_negative_numbers = true)]
    area: f64,
    /// Conversion factor, nm^-1.
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    phi: f64,
    /// Voltages as lo,hi,n.
    #[arg(long, value_parser = parse::voltage_range)]
    voltages: (f64, f64, usize),
    #[arg(long, default_value = "hp")]
    variant: SmfVariant,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    digits: usize,
}

enum Failure {
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CmdResult = Result<(), Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn line(out: &mut String, label: &str, value: f64, unit: &str) {
    let text = format!("  {label:<24}{:>14}  {unit}", format_sig(value, 6));
    let _ = writeln!(out, "{}", text.trim_end());
}

fn definitive_table(r: &ExtractionResult) -> String {
    let mut s = String::new();
    let p = &r.point;
    let _ = writeln!(
        s,
        "definitive extraction at V_t = {} V",
        format_sig(p.v_t, 6)
    );
    line(&mut s, "beta", p.beta, "nm^-1");
    line(&mut s, "F_t", p.field_t, "V/nm");
    line(&mut s, "f_t", p.scaled_t, "");
    line(&mut s, "s_t", p.s_t, "");
    line(&mut s, "r_t", p.r_t, "");
    line(&mut s, "r_t s_t^2", p.rt_st2, "");
    line(&mut s, "A_f_SN", r.area_sn, "nm2");
    line(&mut s, "A_f_ET", r.area_et, "nm2");
    if let Some(a) = r.alpha_f_sn {
        line(&mut s, "alpha_f_SN", a, "");
    }
    line(&mut s, "d_F", r.d_f, "eV");
    line(&mut s, "I_m", r.current, "A");
    line(&mut s, "J_extr", r.j_extr, "A/nm2");
    line(&mut s, "B_pract", r.b_pract, "A m^-2 sr^-1 eV^-1");
    line(&mut s, "iterations", p.iterations as f64, "");
    s
}

fn finish_report(rep: &AnalysisReport, args: &ExtractArgs) -> CmdResult {
    if let Some(path) = &args.out {
        write_file(path, &rep.to_json())?;
    }
    if let Some(dir) = &args.series {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for kind in SeriesKind::ALL {
            match report::emit_series(rep, kind) {
                Ok(series) => {
                    let path = dir.join(format!("{}.csv", kind.name()));
                    write_file(&path, &series.to_csv(Some(args.digits)))?;
                }
                Err(Error::MissingSection(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "FN fit ({} points)", rep.fn_points.len());
    line(&mut out, "ln R", rep.fit.ln_r, "ln(A/V^2)");
    line(&mut out, "S", rep.fit.s, "V");
    line(&mut out, "V_mid", rep.fit.v_mid, "V");
    line(&mut out, "rms residual", rep.fit.rms_residual, "");
    let _ = writeln!(
        out,
        "  {:<24}{:>14}  f in [{}, {}]",
        "orthodoxy",
        format!("{:?}", rep.orthodoxy.verdict),
        format_sig(rep.orthodoxy.f_low, 4),
        format_sig(rep.orthodoxy.f_high, 4)
    );
    if let Outcome::Ok(b) = &rep.error_bound {
        line(&mut out, "area error bound", b.relative_bound * 100.0, "%");
    }
    if let Some(Outcome::Ok(t)) = &rep.ted {
        line(&mut out, "TED FWHM", t.fwhm, "eV");
    }
    for w in &rep.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    match &rep.definitive {
        Outcome::Ok(r) => {
            out.push_str(&definitive_table(r));
            print!("{out}");
            Ok(())
        }
        Outcome::Error { kind, message } => {
            print!("{out}");
            let msg = format!(
                "definitive extraction at V_t = {} V failed: {message}",
                rep.fit.v_mid
            );
            if matches!(
                kind.as_str(),
                "NonConvergence" | "ScaledFieldOutOfRange" | "TemperatureRegime" | "MultiPeak"
            ) {
                Err(Failure::Numeric(msg))
            } else {
                Err(Failure::Input(msg))
            }
        }
    }
}

fn cmd_analyze(a: AnalyzeArgs) -> CmdResult {
    let file = fs::File::open(&a.input).map_err(|e| io_err(&a.input, e))?;
    let label = a.input.display().to_string();
    let data = fnfit::load_iv(
        file,
        CsvFormat {
            current_multiplier: a.current_unit,
        },
        &label,
    )?;
    let cfg = a.extract.config();
    emgfe::constants::derive(cfg.phi)?;
    let rep = report::build_report(&data, &cfg, &a.extract.options())?;
    finish_report(&rep, &a.extract)
}

fn cmd_fit(a: FitArgs) -> CmdResult {
    let fit = FnFitResult::from_parameters(a.ln_r, a.slope, a.vrange.0, a.vrange.1)?;
    let cfg = a.extract.config();
    let rep =
        report::build_report_from_fit(&fit, None, "fit parameters", &cfg, &a.extract.options())?;
    finish_report(&rep, &a.extract)
}

fn cmd_ted(a: TedArgs) -> CmdResult {
    let spec = ted::TedSpec {
        variant: a.variant,
        samples: a.samples,
        ..ted::TedSpec::new(a.phi, a.temp, a.field)
    };
    let curve = ted::ted_curve(&spec)?;
    if let Some(path) = &a.out {
        let mut csv = String::from("eps_eV,density_per_eV\n");
        for s in &curve.samples {
            let _ = writeln!(
                csv,
                "{},{}",
                format_sig(s.energy, a.digits),
                format_sig(s.density, a.digits)
            );
        }
        write_file(path, &csv)?;
    }
    let mut out = String::new();
    line(&mut out, "d_F", curve.d_f, "eV");
    line(&mut out, "p", curve.p, "");
    line(&mut out, "FWHM", curve.fwhm, "eV");
    line(&mut out, "FWHM / d_F", curve.fwhm / curve.d_f, "");
    line(&mut out, "peak energy", curve.peak_energy, "eV");
    line(
        &mut out,
        "normalization residual",
        curve.normalization_residual,
        "",
    );
    print!("{out}");
    Ok(())
}

fn cmd_smf(a: SmfArgs) -> CmdResult {
    // Fail early on the domain for every function.
    smf::v_fd(a.x, SmfVariant::HighPrecision)?;
    if let Some(eta) = a.eta {
        if !(eta >= 0.0) {
            return Err(Failure::Input(format!("eta must be >= 0, got {eta}")));
        }
    }
    let cell = |r: emgfe::Result<f64>| r.map_or_else(|_| "n/a".to_string(), |v| format_sig(v, 10));
    let mut out = format!(
        "x = {}\n  {:<6}{:>18}{:>18}\n",
        format_sig(a.x, 10),
        "",
        "fd06",
        "hp"
    );
    type F = fn(f64, SmfVariant) -> emgfe::Result<f64>;
    let funcs: [(&str, F); 4] = [
        ("v", smf::v_fd),
        ("u", smf::u_fd),
        ("t", smf::t_fd),
        ("s", smf::s_fd),
    ];
    for (name, f) in funcs {
        let _ = writeln!(
            out,
            "  {name:<6}{:>18}{:>18}",
            cell(f(a.x, SmfVariant::SimpleGood)),
            cell(f(a.x, SmfVariant::HighPrecision))
        );
    }
    if let Some(eta) = a.eta {
        let _ = writeln!(
            out,
            "  {:<6}{:>18}{:>18}",
            "r",
            cell(smf::r_fd(eta, a.x, SmfVariant::SimpleGood)),
            cell(smf::r_fd(eta, a.x, SmfVariant::HighPrecision))
        );
    }
    print!("{out}");
    Ok(())
}

fn cmd_fimfem(a: FimFemArgs) -> CmdResult {
    let file = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            parse::key_values(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => Default::default(),
    };
    let known = [
        "hole_true_mm",
        "hole_record_mm",
        "spot_separation_mm",
        "nn_spacing_nm",
        "spot_radius_screen_mm",
        "spot_radius_record_mm",
        "broadening",
    ];
    if let Some(k) = file.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Failure::Input(format!("unknown config key '{k}'")));
    }
    let get = |flag: Option<f64>, key: &str| flag.or_else(|| file.get(key).copied());
    let need = |flag: Option<f64>, key: &str| {
        get(flag, key).ok_or_else(|| Failure::Input(format!("missing measurement '{key}'")))
    };

    let fim = FimMeasurements {
        hole_true_diameter: need(a.hole_true, "hole_true_mm")?,
        hole_record_diameter: need(a.hole_record, "hole_record_mm")?,
        spot_separation_record: need(a.spot_separation, "spot_separation_mm")?,
        nn_spacing: need(a.nn_spacing, "nn_spacing_nm")?,
    };
    let spot_radius = match (
        a.spot_radius_screen,
        a.spot_radius_record,
        file.get("spot_radius_screen_mm"),
        file.get("spot_radius_record_mm"),
    ) {
        (Some(r), _, _, _) => SpotRadius::Screen(r),
        (None, Some(r), _, _) => SpotRadius::Record(r),
        (None, None, Some(&r), None) => SpotRadius::Screen(r),
        (None, None, None, Some(&r)) => SpotRadius::Record(r),
        (None, None, Some(_), Some(_)) => {
            return Err(Failure::Input(
                "give either spot_radius_screen_mm or spot_radius_record_mm, not both".into(),
            ))
        }
        (None, None, None, None) => {
            return Err(Failure::Input(
                "missing measurement 'spot_radius_screen_mm'".into(),
            ))
        }
    };
    let fem = FemMeasurements {
        spot_radius,
        broadening_correction: get(a.broadening, "broadening")
            .unwrap_or(fimfem::DEFAULT_BROADENING),
    };

    let r = fimfem::analyze(&fim, &fem)?;
    let g = r.geometry;
    let mut out = String::new();
    line(&mut out, "record scale", r.record_scale, "");
    line(
        &mut out,
        "spot separation (screen)",
        fim.spot_separation_record / r.record_scale,
        "mm",
    );
    line(&mut out, "m_lin", g.m_lin, "");
    line(&mut out, "M_area", g.m_area, "");
    line(&mut out, "spot radius (screen)", g.screen_radius, "mm");
    line(&mut out, "corrected radius", g.corrected_radius, "mm");
    line(&mut out, "rho_S", g.rho_s, "nm");
    line(&mut out, "A_S", g.area_s, "nm2");
    if let Some((et, sn)) = a.compare {
        let c = fimfem::compare_areas(g.area_s, et, sn)?;
        line(&mut out, "A_f_ET / A_S", c.et_over_s, "");
        line(&mut out, "A_S / A_f_SN", c.s_over_sn, "");
    }
    print!("{out}");
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> CmdResult {
    let (lo, hi, n) = a.voltages;
    if n < 2 {
        return Err(Failure::Input(format!("need at least 2 voltages, got {n}")));
    }
    let volts = extract::linspace(lo, hi, n);
    let points = extract::synthesize_emg_points(a.area, a.beta, a.phi, &volts, a.variant)?;
    let mut csv = String::from("voltage_V,current_A\n");
    for p in &points {
        let _ = writeln!(
            csv,
            "{},{}",
            format_sig(p.voltage, a.digits),
            format_sig(p.current, a.digits)
        );
    }
    match &a.out {
        Some(path) => write_file(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Ted(a) => cmd_ted(a),
        Command::Smf(a) => cmd_smf(a),
        Command::Fimfem(a) => cmd_fimfem(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
