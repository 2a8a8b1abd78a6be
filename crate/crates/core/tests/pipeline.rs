use emgfe::extract::{self, ExtractionConfig, VtGrid};
use emgfe::fimfem::{FemMeasurements, FimMeasurements, SpotRadius};
use emgfe::fnfit::{self, CsvFormat, FnFitResult, IvDataset};
use emgfe::report::{self, AnalysisReport, FimFemInputs, Outcome, ReportOptions, SeriesKind};
use emgfe::{Error, SmfVariant};

fn hfc_dataset() -> IvDataset {
    let volts = extract::linspace(362.0, 390.0, 15);
    extract::synthesize_emg_iv(0.42, 7.24e-3, 2.5, &volts, SmfVariant::HighPrecision).unwrap()
}

fn hfc_fim() -> FimFemInputs {
    FimFemInputs {
        fim: FimMeasurements {
            hole_true_diameter: 2.0,
            hole_record_diameter: 4.5,
            spot_separation_record: 1.7,
            nn_spacing: 0.322,
        },
        fem: FemMeasurements::new(SpotRadius::Screen(2.95)),
    }
}

fn full_options() -> ReportOptions {
    ReportOptions {
        ted: true,
        fimfem: Some(hfc_fim()),
    }
}

#[test]
fn csv_to_report() {
    let data = hfc_dataset();
    let mut csv = String::from("# synthetic\nvoltage_V,current_A\n");
    for p in &data.points {
        csv.push_str(&format!("{:?},{:?}\n", p.voltage, p.current));
    }
    let loaded = fnfit::load_iv(csv.as_bytes(), CsvFormat::default(), "hfc").unwrap();
    assert_eq!(loaded.points, data.points);

    let cfg = ExtractionConfig::new(2.5);
    let rep = report::build_report(&loaded, &cfg, &full_options()).unwrap();
    let def = rep.definitive.ok().unwrap();
    assert_eq!(def.point.v_t, rep.fit.v_mid);
    assert!((def.point.beta / 7.24e-3 - 1.0).abs() < 0.01);
    assert!((0.39..=0.53).contains(&def.area_sn));
    assert_eq!(rep.sweep.len(), 21);
    for e in &rep.sweep {
        assert!(e.v_t >= rep.fit.v_min && e.v_t <= rep.fit.v_max);
        assert!(e.outcome.ok().is_some());
    }
    let ted = rep.ted.as_ref().unwrap().ok().unwrap();
    assert!(ted.normalization_residual < 1e-6);
    let ff = rep.fimfem.as_ref().unwrap().ok().unwrap();
    let cmp = ff.comparison.ok().unwrap();
    assert!((cmp.et_over_s / (def.area_et / ff.result.geometry.area_s) - 1.0).abs() < 1e-15);
    assert!(rep.warnings.iter().any(|w| w.contains("orthodoxy")));
}

#[test]
fn report_round_trips_and_is_deterministic() {
    let data = hfc_dataset();
    let cfg = ExtractionConfig::new(2.5);
    let a = report::build_report(&data, &cfg, &full_options()).unwrap();
    let b = report::build_report(&data, &cfg, &full_options()).unwrap();
    let json = a.to_json();
    assert_eq!(json, b.to_json());
    let back = AnalysisReport::from_json(&json).unwrap();
    assert_eq!(back, a);
    assert_eq!(back.to_json(), json);
    assert!(json.contains("\"A_f_SN_nm2\""));
    assert!(json.contains("\"schema_version\": 1"));
}

#[test]
fn collinear_three_points() {
    let fit = FnFitResult::from_parameters(-19.38, -3329.0, 362.0, 390.0).unwrap();
    let points = [362.0, 376.0, 390.0]
        .iter()
        .map(|&v| emgfe::IvPoint {
            voltage: v,
            current: fit.current_at(v),
        })
        .collect();
    let data = IvDataset::new("line", points).unwrap();
    let rep = report::build_report(
        &data,
        &ExtractionConfig::new(2.5),
        &ReportOptions::default(),
    )
    .unwrap();
    assert!(rep.fit.rms_residual < 1e-12);
    assert!(rep.definitive.ok().is_some());
    assert!(rep.ted.is_none() && rep.fimfem.is_none());

    let s = report::emit_series(&rep, SeriesKind::FnPlot).unwrap();
    assert_eq!(s.rows.len(), 3);
    for row in &s.rows {
        assert!((row[1] - row[2]).abs() < 1e-9);
    }
    assert_eq!(
        report::emit_series(&rep, SeriesKind::TedCurve),
        Err(Error::MissingSection("ted"))
    );
}

#[test]
fn series_from_fit_only_report() {
    let fit = FnFitResult::from_parameters(-19.38, -3329.0, 362.0, 390.0).unwrap();
    let cfg = ExtractionConfig::new(2.5);
    let rep = report::build_report_from_fit(&fit, None, "fit-only", &cfg, &full_options()).unwrap();

    let beta = report::emit_series(&rep, SeriesKind::SweepBeta).unwrap();
    assert_eq!(beta.rows.len(), 21);
    let vals: Vec<f64> = beta.rows.iter().map(|r| r[1]).collect();
    let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
    let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
    assert!(((hi - lo) / lo - 0.01).abs() < 0.005);

    let bright = report::emit_series(&rep, SeriesKind::SweepBrightness).unwrap();
    let b: Vec<f64> = bright.rows.iter().map(|r| r[1]).collect();
    assert!(b.windows(2).all(|w| w[1] > w[0]) || b.windows(2).all(|w| w[1] < w[0]));

    let ted = report::emit_series(&rep, SeriesKind::TedCurve).unwrap();
    let integral: f64 = ted
        .rows
        .windows(2)
        .map(|w| 0.5 * (w[0][1] + w[1][1]) * (w[1][0] - w[0][0]))
        .sum();
    assert!((integral - 1.0).abs() < 1e-12);

    let fn_plot = report::emit_series(&rep, SeriesKind::FnPlot).unwrap();
    assert_eq!(fn_plot.rows.len(), 2);
    let area = report::emit_series(&rep, SeriesKind::SweepArea).unwrap();
    assert!(area.to_csv(Some(6)).starts_with("V_t_V,A_f_SN_nm2\n362,"));
}

#[test]
fn failed_sections_are_recorded() {
    let fit = FnFitResult::from_parameters(-19.38, -3329.0, 362.0, 390.0).unwrap();
    let cfg = ExtractionConfig {
        max_iterations: 1,
        vt_grid: VtGrid::Auto(3),
        ..ExtractionConfig::new(2.5)
    };
    let rep = report::build_report_from_fit(&fit, None, "x", &cfg, &full_options()).unwrap();
    assert!(matches!(&rep.definitive, Outcome::Error { kind, .. } if kind == "NonConvergence"));
    assert!(rep.sweep.iter().all(|e| e.outcome.ok().is_none()));
    assert!(matches!(rep.ted, Some(Outcome::Error { .. })));
    assert_eq!(
        report::emit_series(&rep, SeriesKind::SweepArea),
        Err(Error::MissingSection("sweep"))
    );
    let json = rep.to_json();
    assert_eq!(AnalysisReport::from_json(&json).unwrap(), rep);
}

#[test]
fn bad_work_function_is_rejected() {
    let fit = FnFitResult::from_parameters(-19.38, -3329.0, 362.0, 390.0).unwrap();
    let cfg = ExtractionConfig::new(0.0);
    assert_eq!(
        report::build_report_from_fit(&fit, None, "x", &cfg, &ReportOptions::default()),
        Err(Error::NonPositiveWorkFunction(0.0))
    );
}
