use std::path::PathBuf;

use hardylab_core::circle_grid::{BoundarySignal, CircleGrid, RealSignal};
use hardylab_core::factorization::{
    clipped_log_modulus, inner_outer, is_inner, is_outer, jensen_report, synth_outer, DEFAULT_INNER_TOL,
    DEFAULT_OUTER_TOL,
};
use hardylab_core::hardy::sup_norm;
use hardylab_core::mideal::{
    analytic_prime_check, approx_unit_main1, approx_unit_peak, certify_mideal, relative_unit_error, CertifiedIdeal,
    CertifyParams, IdealSpec, Strategy, DEFAULT_CERT_TOL, DEFAULT_RANGE_TOL,
};
use hardylab_core::toeplitz::{
    adjoint_kernel_dim, default_order_schedule, density_profile, write_density_csv, DEFAULT_KERNEL_TOL,
};
use hardylab_core::zero_sets::{in_zinfty, ZeroSetParams};
use hardylab_core::{LabError, Result};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::json;
use crate::source;
use crate::Command;

/// Density threshold separating outer from non-outer symbols.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 0.05;

/// Report printed on stdout plus files for the output directory.
#[derive(Debug, Default)]
pub struct Output {
    pub report: String,
    pub files: Vec<(PathBuf, String)>,
    /// Directory used when `--out` is absent.
    pub default_dir: Option<PathBuf>,
}

impl Output {
    pub fn json<T: Serialize>(name: &str, value: &T) -> Result<Self> {
        let report = json::to_string(value)?;
        Ok(Self { files: vec![(PathBuf::from(name), report.clone())], report, default_dir: None })
    }

    pub fn with_file(mut self, name: impl Into<PathBuf>, text: String) -> Self {
        self.files.push((name.into(), text));
        self
    }
}

pub fn csv_text(f: &BoundarySignal) -> Result<String> {
    let mut buf = Vec::new();
    f.write_csv(&mut buf)?;
    String::from_utf8(buf).map_err(|e| LabError::Format(e.to_string()))
}

fn grid(cfg: &RunConfig) -> Result<CircleGrid> {
    CircleGrid::new(cfg.grid_size())
}

fn single(cfg: &RunConfig) -> Result<&str> {
    match cfg.functions.as_slice() {
        [f] => Ok(f),
        [] => Err(LabError::BadParameter("no function given".into())),
        _ => Err(LabError::BadParameter("exactly one function expected".into())),
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| LabError::BadParameter(format!("missing --{flag}")))
}

pub fn parse_strategy(s: &str) -> Result<Strategy> {
    s.parse().map_err(|_| LabError::BadParameter(format!("unknown strategy {s}")))
}

pub fn zero_set_params(cfg: &RunConfig) -> ZeroSetParams {
    let mut p = ZeroSetParams::default();
    if let Some(e) = &cfg.eps_schedule {
        p.eps_schedule = e.clone();
    }
    if let Some(w) = &cfg.width_schedule {
        p.width_schedule = w.clone();
    }
    p
}

pub fn certify_params(cfg: &RunConfig) -> CertifyParams {
    CertifyParams {
        schedule: cfg.schedule.clone(),
        bound: cfg.bound,
        tol: cfg.tol.unwrap_or(DEFAULT_CERT_TOL),
        zero_set: zero_set_params(cfg),
        ..CertifyParams::default()
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        Command::SynthOuter { .. } => synth(cfg),
        Command::Factorize { .. } => factorize(cfg),
        Command::Zeroset { .. } => zeroset(cfg),
        Command::Density { .. } => density(cfg),
        Command::ToeplitzKernel { order, .. } => kernel(cfg, *order),
        Command::ApproxUnit { .. } => approx_unit(cfg),
        Command::Certify { dump_units, .. } => certify(cfg, *dump_units),
        Command::Member { .. } => member(cfg),
        Command::PrimeCheck { .. } => prime_check(cfg),
        Command::Reproduce { .. } => unreachable!("handled by the reproduce module"),
    }
}

fn synth(cfg: &RunConfig) -> Result<Output> {
    let spec = single(cfg)?;
    let k = if source::is_registered(spec) {
        clipped_log_modulus(&source::boundary(spec, grid(cfg)?)?).0
    } else {
        RealSignal::from_complex(&source::boundary(spec, grid(cfg)?)?)?
    };
    let outer = synth_outer(&k)?;
    let mut log_csv = Vec::new();
    outer.write_log_modulus_csv(&mut log_csv)?;
    let log_csv = String::from_utf8(log_csv).map_err(|e| LabError::Format(e.to_string()))?;
    Ok(Output::json("outer.json", &outer.metadata())?
        .with_file("log_modulus.csv", log_csv)
        .with_file("outer.csv", csv_text(outer.boundary())?))
}

fn factorize(cfg: &RunConfig) -> Result<Output> {
    let f = source::boundary(single(cfg)?, grid(cfg)?)?;
    let tol = cfg.tol.unwrap_or(DEFAULT_OUTER_TOL);
    let fac = inner_outer(&f)?;
    let report = json!({
        "factorization": fac.metadata(),
        "jensen": jensen_report(&f)?,
        "is_outer": is_outer(&f, tol)?,
        "is_inner": is_inner(&f, DEFAULT_INNER_TOL)?,
        "outer_tol": tol,
    });
    Ok(Output::json("factorization.json", &report)?
        .with_file("inner.csv", csv_text(&fac.inner)?)
        .with_file("outer.csv", csv_text(fac.outer.boundary())?))
}

fn zeroset(cfg: &RunConfig) -> Result<Output> {
    let f = source::boundary(single(cfg)?, grid(cfg)?)?;
    let mut params = zero_set_params(cfg);
    params.extension_tol = cfg.tol;
    let report = in_zinfty(&f, &params)?;
    let body = json!({
        "points": report.zero_set.unimodular_points(),
        "angles": report.zero_set.angles(),
        "in_zinfty": report.member,
        "extension_tol": params.tol_for(&f),
        "zero_set": report.zero_set,
        "continuity": report.reports,
    });
    Output::json("zeroset.json", &body)
}

fn density(cfg: &RunConfig) -> Result<Output> {
    let orders = cfg.orders.clone().unwrap_or_else(default_order_schedule);
    let max_order = orders.iter().copied().max().unwrap_or(1);
    let f = source::analytic(single(cfg)?, (2 * max_order).max(64), grid(cfg)?)?;
    let profile = density_profile(&f, &orders)?;
    let threshold = cfg.tol.unwrap_or(DEFAULT_DENSITY_THRESHOLD);
    let last = profile.last().map(|p| p.1).unwrap_or(f64::INFINITY);
    let rows: Vec<_> = profile
        .iter()
        .map(|&(m, d)| json!({"M": m, "distance": d, "distance_squared": d * d}))
        .collect();
    let body = json!({"profile": rows, "threshold": threshold, "dense": last < threshold});
    let mut csv = Vec::new();
    write_density_csv(&profile, &mut csv)?;
    let csv = String::from_utf8(csv).map_err(|e| LabError::Format(e.to_string()))?;
    Ok(Output::json("density.json", &body)?.with_file("density.csv", csv))
}

fn kernel(cfg: &RunConfig, order: usize) -> Result<Output> {
    let phi = source::analytic(single(cfg)?, (2 * order).max(64), grid(cfg)?)?;
    let tol = cfg.tol.unwrap_or(DEFAULT_KERNEL_TOL);
    let dim = adjoint_kernel_dim(&phi, order, tol)?;
    Output::json("kernel.json", &json!({"M": order, "tol": tol, "kernel_dim": dim}))
}

fn approx_unit(cfg: &RunConfig) -> Result<Output> {
    let g = source::boundary(single(cfg)?, grid(cfg)?)?;
    let strategy = parse_strategy(cfg.strategy.as_deref().unwrap_or("main1"))?;
    let body;
    let unit = match strategy {
        Strategy::Main1 => {
            let m = cfg.stage.unwrap_or(8);
            let st = approx_unit_main1(&g, m)?;
            body = json!({
                "strategy": strategy,
                "stage": m,
                "set_measure": st.set.measure(),
                "value_at_zero": st.value_at_zero,
                "degenerate": st.degenerate,
                "sup_norm": sup_norm(&st.unit),
                "relative_error": relative_unit_error(&st.unit, &g)?,
            });
            st.unit
        }
        Strategy::Peak => {
            let n = cfg.stage.unwrap_or(200);
            let f = g.map(|v| 1.0 - v)?;
            let unit = approx_unit_peak(&f, n, DEFAULT_RANGE_TOL)?;
            body = json!({
                "strategy": strategy,
                "stage": n,
                "sup_norm": sup_norm(&unit),
                "relative_error": relative_unit_error(&unit, &g)?,
            });
            unit
        }
        Strategy::Combined => {
            return Err(LabError::StrategyInapplicable("approx-unit builds single-generator units".into()))
        }
    };
    Ok(Output::json("unit.json", &body)?.with_file("unit.csv", csv_text(&unit)?))
}

fn ideal(cfg: &RunConfig) -> Result<IdealSpec> {
    let gens = source::boundaries(&cfg.functions, grid(cfg)?)?;
    IdealSpec::new(format!("I({})", cfg.functions.join(", ")), gens)
}

fn certify(cfg: &RunConfig, dump_units: bool) -> Result<Output> {
    let ideal = ideal(cfg)?;
    let strategy = match &cfg.strategy {
        Some(s) => parse_strategy(s)?,
        None if ideal.generators().len() > 1 => Strategy::Combined,
        None => Strategy::Main1,
    };
    let cert = certify_mideal(&ideal, strategy, &certify_params(cfg))?;
    let mut out = Output::json("certificate.json", &cert)?;
    if dump_units {
        for (stage, u) in cert.schedule.iter().zip(&cert.units) {
            out = out.with_file(format!("units/unit_{stage:04}.csv"), csv_text(u)?);
        }
    }
    Ok(out)
}

fn member(cfg: &RunConfig) -> Result<Output> {
    let certified = CertifiedIdeal::new(ideal(cfg)?, &certify_params(cfg))?;
    let g = source::boundary(required(&cfg.g, "g")?, grid(cfg)?)?;
    Output::json("membership.json", &certified.membership(&g)?)
}

fn prime_check(cfg: &RunConfig) -> Result<Output> {
    let certified = CertifiedIdeal::new(ideal(cfg)?, &certify_params(cfg))?;
    let a = source::boundary(required(&cfg.a, "a")?, grid(cfg)?)?;
    let b = source::boundary(required(&cfg.b, "b")?, grid(cfg)?)?;
    let delta = cfg.delta.ok_or_else(|| LabError::BadParameter("missing --delta".into()))?;
    Output::json("prime_check.json", &analytic_prime_check(&certified, &a, &b, delta)?)
}
