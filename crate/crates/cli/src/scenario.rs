//! Scenario orchestration: grid, series, reports and manifest.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use spinstar::asymptotics::{coefficients, AsymptoticCoefficients, Asymptotics};
use spinstar::distances::{blp_measure_per_period, blp_measure_windowed, sigma_series};
use spinstar::dynamics::evolve_bloch;
use spinstar::master_eq::RateOptions;
use spinstar::timescales::{default_window, fwhm_analytic, fwhm_numeric, period, window_segments};
use spinstar::{
    compute_spectrum, thermal_weights, BlochVector, CollapseRevivalReport, DistanceSeries, ModelParams, PairCoefficients,
    Propagator, PropagatorSample,
};

use crate::config::{Format, GridKind, PairSpec, ScenarioConfig};
use crate::output::{reports_csv, reports_json, sha256_hex, table_csv, table_json, Column, Reports, Table};
use crate::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Evolve,
    Distance,
    Envelope,
    Timescales,
    Rates,
    Measure,
    Verify,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Distance => "distance",
            Command::Envelope => "envelope",
            Command::Timescales => "timescales",
            Command::Rates => "rates",
            Command::Measure => "measure",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] spinstar::Error),
    #[error("grid would hold {points} points, above max_points = {max}; use grid = bursts or raise max_points")]
    GridTooLarge { points: usize, max: usize },
    #[error("grid = bursts needs the fast frequency: {0}")]
    NoFastScale(spinstar::Error),
    #[error("cannot write {path}: {msg}")]
    Io { path: String, msg: String },
}

pub struct RunOutput {
    pub command: Command,
    pub series: Table,
    pub reports: Reports,
    pub manifest: serde_json::Map<String, Value>,
    pub failed_checks: usize,
}

fn pair_coefficients(pair: &PairSpec) -> PairCoefficients {
    match pair {
        PairSpec::Z => PairCoefficients::z_pair(),
        PairSpec::X => PairCoefficients::x_pair(),
        PairSpec::States(a, b) => PairCoefficients::from_states(*a, *b),
    }
}

fn pair_states(pair: &PairSpec) -> (BlochVector, BlochVector) {
    pair_coefficients(pair).states.expect("pairs built from states")
}

/// Uniform segments (start, step, count) making up the time grid.
pub fn grid_segments(
    cfg: &ScenarioConfig,
    coeffs: &std::result::Result<AsymptoticCoefficients, spinstar::Error>,
) -> Result<Vec<(f64, f64, usize)>, RunError> {
    let span = cfg.t_end - cfg.t_start;
    let uniform = |step: f64| {
        let n = (span / step * (1.0 + 1e-12)).floor() as usize + 1;
        vec![(cfg.t_start, step, n)]
    };
    let base = cfg.step.unwrap_or(span / (cfg.n_points - 1) as f64);
    let segs = match cfg.grid {
        GridKind::Uniform => uniform(base),
        GridKind::Auto => match coeffs {
            Ok(c) => uniform(base.min(PI / (8.0 * c.nu0))),
            Err(_) => uniform(base),
        },
        GridKind::Bursts => {
            let c = coeffs.as_ref().map_err(|e| RunError::NoFastScale(e.clone()))?;
            let w = cfg.window.unwrap_or_else(|| default_window(c));
            let windows = (span / w).floor() as usize;
            let stride = (windows / cfg.bursts).max(1);
            window_segments(cfg.t_start, cfg.t_end, w, stride, cfg.burst_points)
        }
    };
    let points: usize = segs.iter().map(|s| s.2).sum();
    if points > cfg.max_points {
        return Err(RunError::GridTooLarge { points, max: cfg.max_points });
    }
    Ok(segs)
}

fn num(v: f64) -> Value {
    json!(v)
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

fn report_section(map: &mut Reports, name: &str, entries: Vec<(&str, Value)>) {
    let s = map.entry(name.into()).or_default();
    for (k, v) in entries {
        s.insert(k.into(), v);
    }
}

fn cr_entries(r: &CollapseRevivalReport) -> Vec<(&'static str, Value)> {
    vec![
        ("t_cr", num(r.t_cr)),
        ("t_p", num(r.t_p)),
        ("delta", num(r.delta)),
        ("t_r", num(r.t_r)),
        ("t_c", num(r.t_c)),
        ("ratio", num(r.ratio)),
        ("h_plus", num(r.h_plus)),
        ("h_minus", num(r.h_minus)),
        ("max_gamma_plus", num(r.max_gamma_plus)),
        ("max_gamma_minus", num(r.max_gamma_minus)),
        ("min_gamma_plus", num(r.min_gamma_plus)),
        ("min_gamma_minus", num(r.min_gamma_minus)),
        ("w_value", opt(r.w_value)),
    ]
}

pub fn run_scenario(cfg: &ScenarioConfig, command: Command) -> Result<RunOutput, RunError> {
    let clock = Instant::now();
    let mut toggles = cfg.toggles;
    match command {
        Command::Evolve | Command::Distance => toggles.exact = true,
        Command::Envelope => {
            toggles.exact = true;
            toggles.envelope = true;
        }
        Command::Timescales => toggles.timescales = true,
        Command::Rates => toggles.rates = true,
        Command::Measure => {
            toggles.exact = true;
            toggles.measure = true;
        }
        Command::Verify => toggles.verify = true,
    }
    let params = ModelParams::new(cfg.n_bath, cfg.g, cfg.omega_s, cfg.omega_b, cfg.t_bath)?;
    let prop = Propagator::new(&compute_spectrum(&params), &thermal_weights(&params));
    let coeffs = coefficients(&params);
    let asym = coeffs.clone().and_then(|c| Asymptotics::with_coefficients(&params, c));
    let pc = pair_coefficients(&cfg.pair);
    let mut warnings: Vec<String> = Vec::new();
    let mut reports = Reports::new();
    let mut series = Table::default();

    let needs_samples = toggles.exact || toggles.envelope || toggles.measure || toggles.timescales || command == Command::Evolve;
    let needs_grid = needs_samples || toggles.rates;
    let segments = if needs_grid { grid_segments(cfg, &coeffs)? } else { Vec::new() };
    let grid: Vec<f64> = segments.iter().flat_map(|&(a, st, n)| (0..n).map(move |i| a + i as f64 * st)).collect();
    let samples: Vec<PropagatorSample> = if needs_samples {
        segments.iter().flat_map(|&(a, st, n)| prop.sample_uniform(a, st, n)).collect()
    } else {
        Vec::new()
    };
    let d_series = if needs_samples { Some(DistanceSeries::from_samples(&samples, &pc)?) } else { None };

    if needs_grid {
        series.columns.push(Column::float("t", grid.clone()));
    }
    if command == Command::Evolve {
        let (a, b) = pair_states(&cfg.pair);
        let ea: Vec<BlochVector> = samples.iter().map(|s| evolve_bloch(s, &a)).collect();
        let eb: Vec<BlochVector> = samples.iter().map(|s| evolve_bloch(s, &b)).collect();
        for (i, v) in [(1, &ea), (2, &eb)] {
            series.columns.push(Column::float(&format!("x{i}"), v.iter().map(|b| b.x).collect()));
            series.columns.push(Column::float(&format!("y{i}"), v.iter().map(|b| b.y).collect()));
            series.columns.push(Column::float(&format!("z{i}"), v.iter().map(|b| b.z).collect()));
        }
    }
    if toggles.exact {
        series.columns.push(Column::float("D_exact", d_series.as_ref().unwrap().d_values.clone()));
    }
    if toggles.envelope {
        match &asym {
            Ok(a) => {
                let env: Result<Vec<(f64, f64)>, spinstar::Error> = grid
                    .par_iter()
                    .map(|&t| match cfg.pair {
                        PairSpec::Z => {
                            let e = a.envelope_z(t);
                            Ok((e.upper, e.lower))
                        }
                        PairSpec::X => a.envelope_x(t).map(|e| (e.upper, e.lower)),
                        PairSpec::States(..) => a.envelope_general(&pc, t).map(|e| (e.full.upper, e.full.lower)),
                    })
                    .collect();
                match env {
                    Ok(v) => {
                        series.columns.push(Column::float("env_upper", v.iter().map(|e| e.0).collect()));
                        series.columns.push(Column::float("env_lower", v.iter().map(|e| e.1).collect()));
                    }
                    Err(e) => warnings.push(format!("envelope omitted: {e}")),
                }
            }
            Err(e) => warnings.push(format!("envelope omitted: {e}")),
        }
    }
    if toggles.measure {
        let ds = d_series.as_ref().unwrap();
        match sigma_series(ds) {
            Ok(s) => series.columns.push(Column::float("sigma", s.sigma_values)),
            Err(e) => warnings.push(format!("sigma omitted: {e}")),
        }
        let pr = coeffs.as_ref().ok().map(|c| period(&params, c));
        let per = pr.and_then(|p| p.t_cr).unwrap_or(ds.span());
        report_section(
            &mut reports,
            "measure",
            vec![
                ("blp_windowed", num(blp_measure_windowed(ds))),
                ("blp_per_period", num(blp_measure_per_period(ds, per))),
                ("normalizing_period", num(per)),
            ],
        );
    }
    if toggles.rates {
        let opts = RateOptions { eps_rate: cfg.eps_rate, eps_singular: cfg.eps_singular };
        let r = prop.rates_series(&grid, &opts);
        series.columns.push(Column::float("omega", r.iter().map(|x| x.omega).collect()));
        series.columns.push(Column::float("gamma_d", r.iter().map(|x| x.gamma_d).collect()));
        series.columns.push(Column::float("gamma_minus", r.iter().map(|x| x.gamma_minus).collect()));
        series.columns.push(Column::float("gamma_plus", r.iter().map(|x| x.gamma_plus).collect()));
        series.columns.push(Column::flag("any_negative", r.iter().map(|x| x.any_negative).collect()));
        series.columns.push(Column::flag("singular", r.iter().map(|x| x.singular).collect()));
        report_section(
            &mut reports,
            "rates",
            vec![
                ("points", json!(r.len())),
                ("negative_points", json!(r.iter().filter(|x| x.any_negative).count())),
                ("singular_points", json!(r.iter().filter(|x| x.singular).count())),
            ],
        );
    }

    let mut cr_exists = Value::Null;
    let mut cr_resolved = Value::Null;
    if toggles.timescales {
        match &coeffs {
            Ok(c) => {
                let p = period(&params, c);
                cr_exists = json!(p.exists);
                cr_resolved = json!(p.resolved);
                report_section(
                    &mut reports,
                    "period",
                    vec![
                        ("exists", json!(p.exists)),
                        ("t_cr", opt(p.t_cr)),
                        ("resolved", json!(p.resolved)),
                        ("c", num(p.c)),
                        ("regime", p.regime.map_or(Value::Null, |r| json!(r.as_str()))),
                        ("approx_large_gn", num(p.approx_large_gn)),
                        ("approx_order_one_c", num(p.approx_order_one_c)),
                        ("approx_small_gn", num(p.approx_small_gn)),
                        ("nu0", num(c.nu0)),
                        ("nu_cr", num(c.nu_cr)),
                    ],
                );
                match fwhm_analytic(&params, c, &pc, cfg.revival_index) {
                    Ok(r) => report_section(&mut reports, "fwhm_analytic", cr_entries(&r)),
                    Err(e) => report_section(&mut reports, "fwhm_analytic", vec![("error", json!(e.to_string()))]),
                }
                let w = cfg.window.unwrap_or_else(|| default_window(c));
                match fwhm_numeric(d_series.as_ref().unwrap(), w) {
                    Ok(r) => report_section(&mut reports, "fwhm_numeric", cr_entries(&r)),
                    Err(e) => report_section(&mut reports, "fwhm_numeric", vec![("error", json!(e.to_string()))]),
                }
            }
            Err(e) => report_section(&mut reports, "period", vec![("error", json!(e.to_string()))]),
        }
    }

    let mut failed_checks = 0;
    if toggles.verify {
        let checks = verify::run_checks(cfg.n_bath, cfg.verify_draws, cfg.seed)?;
        failed_checks = checks.iter().filter(|c| !c.pass).count();
        let entries: Vec<(String, Value)> = checks
            .iter()
            .flat_map(|c| {
                [
                    (format!("{}.measured", c.name), num(c.measured)),
                    (format!("{}.tolerance", c.name), num(c.tolerance)),
                    (format!("{}.pass", c.name), json!(c.pass)),
                ]
            })
            .collect();
        let s = reports.entry("verify".into()).or_default();
        for (k, v) in entries {
            s.insert(k, v);
        }
        s.insert("failed".into(), json!(failed_checks));
    }

    let mut manifest = serde_json::Map::new();
    manifest.insert("program".into(), json!("spinstar"));
    manifest.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    manifest.insert("command".into(), json!(command.as_str()));
    let effective = ScenarioConfig { toggles, ..cfg.clone() };
    manifest.insert("config".into(), json!(effective.echo()));
    manifest.insert("grid_points".into(), json!(grid.len()));
    let (valid, interval) = match &coeffs {
        Ok(c) => (json!(c.validity_ok), json!([c.validity_interval.0, c.validity_interval.1])),
        Err(_) => (json!(false), Value::Null),
    };
    manifest.insert(
        "validity".into(),
        json!({
            "asymptotics": match &asym { Ok(_) => "ok".to_string(), Err(e) => e.to_string() },
            "validity_ok": valid,
            "validity_interval": interval,
        }),
    );
    if let Err(e) = &asym {
        warnings.push(format!("asymptotic results unavailable: {e}"));
    }
    manifest.insert("collapse_revival".into(), json!({ "exists": cr_exists, "resolved": cr_resolved }));
    manifest.insert("warnings".into(), json!(warnings));
    manifest.insert(
        "wall_time_s".into(),
        if cfg.record_wall_time { json!(clock.elapsed().as_secs_f64()) } else { Value::Null },
    );
    Ok(RunOutput { command, series, reports, manifest, failed_checks })
}

fn write_file(path: &Path, body: &str) -> Result<(), RunError> {
    std::fs::write(path, body).map_err(|e| RunError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// `<stem><suffix>` next to `out`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "spinstar".into());
    out.with_file_name(format!("{stem}{suffix}"))
}

/// Writes the run; with no `out` the document goes to stdout. Returns the written paths.
pub fn write_outputs(run: &mut RunOutput, format: Format, precision: usize, out: Option<&Path>) -> Result<Vec<PathBuf>, RunError> {
    match format {
        Format::Csv => {
            let series = table_csv(&run.series, precision);
            let reports = reports_csv(&run.reports, precision);
            let Some(out) = out else {
                print!("{series}");
                eprint!("{reports}");
                return Ok(Vec::new());
            };
            let rpath = sibling(out, "_reports.csv");
            let mpath = sibling(out, "_manifest.json");
            run.manifest.insert(
                "files".into(),
                json!([
                    { "path": file_name(out), "sha256": sha256_hex(series.as_bytes()) },
                    { "path": file_name(&rpath), "sha256": sha256_hex(reports.as_bytes()) },
                ]),
            );
            let manifest = serde_json::to_string_pretty(&run.manifest).unwrap() + "\n";
            write_file(out, &series)?;
            write_file(&rpath, &reports)?;
            write_file(&mpath, &manifest)?;
            Ok(vec![out.to_path_buf(), rpath, mpath])
        }
        Format::Json => {
            let series = json!([table_json(&run.series, precision)]);
            let reports = reports_json(&run.reports, precision);
            let body = serde_json::to_string(&json!({ "series": series, "reports": reports })).unwrap();
            let name = out.map(file_name).unwrap_or_else(|| "-".into());
            run.manifest.insert("files".into(), json!([{ "path": name, "part": "series+reports", "sha256": sha256_hex(body.as_bytes()) }]));
            let doc = serde_json::to_string_pretty(&json!({ "manifest": run.manifest, "series": series, "reports": reports })).unwrap() + "\n";
            match out {
                Some(p) => {
                    write_file(p, &doc)?;
                    Ok(vec![p.to_path_buf()])
                }
                None => {
                    print!("{doc}");
                    Ok(Vec::new())
                }
            }
        }
    }
}
