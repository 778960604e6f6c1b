//! Approximate units for closed ideals of `H^∞` and the certificate built
//! from them, plus membership and analytic-prime testers.
//!
//! Three constructions are implemented:
//!
//! * `main1`: for an outer generator `f`, the outer function with
//!   log-modulus `χ_{A_m}·log|f|`, where `A_m ⊇ A_{m+1}` are nested sublevel
//!   sets `{|f| < e^{-m}}`;
//! * `peak`: for a generator `1 - f` with `‖f‖ ≤ 1`, the polynomials
//!   `1 - ((1 + f)/2)^n`;
//! * `combined`: `main1` units of several generators folded with
//!   `ζ = u + v - uv`.
//!
//! Errors are reported relative to the generator: `‖u·g - g‖_∞ / ‖g‖_∞`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_grid::{sublevel_set, ArcSet, BoundarySignal, RealSignal};
use crate::error::{LabError, Result};
use crate::factorization::{clipped_log_modulus, inner_residual, is_outer, synth_outer, DEFAULT_INNER_TOL, DEFAULT_OUTER_TOL};
use crate::hardy::sup_norm;
use crate::zero_sets::{continuous_extension, in_zinfty, ContinuityReport, ZeroSetEstimate, ZeroSetParams};

/// Default certificate tolerance.
pub const DEFAULT_CERT_TOL: f64 = 0.05;
/// Default bound on the sup norm of main1 and peak units.
pub const DEFAULT_UNIT_BOUND: f64 = 2.0;
/// Default bound for combined units `u + v - uv` built from units of modulus at most one.
pub const COMBINED_UNIT_BOUND: f64 = 3.0;
/// Default tolerance for `1` lying in the sampled range of `f`.
pub const DEFAULT_RANGE_TOL: f64 = 1e-3;
/// Slack on `‖f‖ ≤ 1` for the peak construction.
pub const NORM_SLACK: f64 = 1e-9;

/// Closed ideal generated by finitely many bounded analytic functions.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSpec {
    label: String,
    generators: Vec<BoundarySignal>,
}

impl IdealSpec {
    pub fn new(label: impl Into<String>, generators: Vec<BoundarySignal>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| LabError::BadParameter("an ideal needs at least one generator".into()))?;
        for g in &generators {
            if g.grid() != first.grid() {
                return Err(LabError::LengthMismatch {
                    expected: first.len(),
                    got: g.len(),
                });
            }
            if g.is_identically_zero() {
                return Err(LabError::ZeroFunction);
            }
        }
        Ok(Self {
            label: label.into(),
            generators,
        })
    }

    pub fn single(label: impl Into<String>, generator: BoundarySignal) -> Result<Self> {
        Self::new(label, vec![generator])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[BoundarySignal] {
        &self.generators
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Main1,
    Peak,
    Combined,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Main1, Strategy::Peak, Strategy::Combined];

    /// Default stage schedule: `m = 1..=12` for the outer constructions,
    /// `n ∈ {25, 50, 100, 200, 400}` for peak units.
    pub fn default_schedule(self) -> Vec<usize> {
        match self {
            Strategy::Main1 | Strategy::Combined => (1..=12).collect(),
            Strategy::Peak => vec![25, 50, 100, 200, 400],
        }
    }

    pub fn default_bound(self) -> f64 {
        match self {
            Strategy::Main1 | Strategy::Peak => DEFAULT_UNIT_BOUND,
            Strategy::Combined => COMBINED_UNIT_BOUND,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Main1 => "main1",
            Strategy::Peak => "peak",
            Strategy::Combined => "combined",
        })
    }
}

impl FromStr for Strategy {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main1" => Ok(Strategy::Main1),
            "peak" => Ok(Strategy::Peak),
            "combined" => Ok(Strategy::Combined),
            other => Err(LabError::BadParameter(format!("unknown strategy {other}"))),
        }
    }
}

/// One stage of the `main1` construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Main1Stage {
    pub m: usize,
    pub set: ArcSet,
    /// Nodes of `A_m`, ascending.
    pub nodes: Vec<usize>,
    pub unit: BoundarySignal,
    /// `u_m(0) = exp(mean χ_{A_m}·log|f|)`.
    pub value_at_zero: f64,
    /// `A_m` holds no node, so the unit is `1`.
    pub degenerate: bool,
}

impl Main1Stage {
    /// `(max over A_m^c of ||u| - 1|, max over A_m of |u|)`.
    pub fn dichotomy(&self) -> (f64, f64) {
        let mut inside = vec![false; self.unit.len()];
        self.nodes.iter().for_each(|&j| inside[j] = true);
        let (mut off, mut on) = (0.0_f64, 0.0_f64);
        for (v, &a) in self.unit.values().iter().zip(&inside) {
            if a {
                on = on.max(v.norm());
            } else {
                off = off.max((v.norm() - 1.0).abs());
            }
        }
        (off, on)
    }
}

/// Nested sets and units along `stages` (strictly increasing, from 1) for the
/// boundary samples `f` of an outer function.
///
/// `A_m = {|f| < e^{-m}} ∩ A_{m'}` with `m'` the previous stage; the unit is
/// the outer function with log-modulus `χ_{A_m}·log|f|`.
pub fn main1_chain(f: &BoundarySignal, stages: &[usize]) -> Result<Vec<Main1Stage>> {
    if stages.is_empty() || stages[0] == 0 || stages.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::BadParameter("stage schedule must be increasing from 1".into()));
    }
    if f.is_identically_zero() {
        return Err(LabError::ZeroFunction);
    }
    let grid = f.grid();
    let (k, _) = clipped_log_modulus(f);
    let mut prev = ArcSet::full();
    let mut out = Vec::with_capacity(stages.len());
    for &m in stages {
        let set = sublevel_set(f, (-(m as f64)).exp())?.intersect(&prev);
        let nodes = set.node_indices(grid);
        let mut masked = vec![0.0; grid.size()];
        nodes.iter().for_each(|&j| masked[j] = k.values()[j]);
        let degenerate = nodes.is_empty();
        let (unit, value_at_zero) = if degenerate {
            (BoundarySignal::constant(grid, Complex64::new(1.0, 0.0)), 1.0)
        } else {
            let outer = synth_outer(&RealSignal::new(grid, masked)?)?;
            (outer.boundary().clone(), outer.value_at_zero())
        };
        prev = set.clone();
        out.push(Main1Stage {
            m,
            set,
            nodes,
            unit,
            value_at_zero,
            degenerate,
        });
    }
    Ok(out)
}

/// Stage `m` of the `main1` construction, after checking that `f` is outer
/// and in `Z^∞`.
pub fn approx_unit_main1(f: &BoundarySignal, m: usize) -> Result<Main1Stage> {
    if m == 0 {
        return Err(LabError::BadParameter("stage index must be at least 1".into()));
    }
    check_outer_zinfty(f, &ZeroSetParams::default(), DEFAULT_OUTER_TOL)?;
    let stages: Vec<usize> = (1..=m).collect();
    Ok(main1_chain(f, &stages)?.pop().expect("nonempty schedule"))
}

fn check_outer_zinfty(f: &BoundarySignal, params: &ZeroSetParams, outer_tol: f64) -> Result<()> {
    if !is_outer(f, outer_tol)? {
        return Err(LabError::NotOuter("Jensen gap exceeds tolerance".into()));
    }
    let z = in_zinfty(f, params)?;
    if !z.member {
        return Err(LabError::NotInZinfty(format!(
            "no continuous extension at {} of {} essential zeros",
            z.reports.iter().filter(|r| !r.is_continuous()).count(),
            z.reports.len()
        )));
    }
    Ok(())
}

fn half_plus(f: &BoundarySignal) -> Result<BoundarySignal> {
    f.map(|v| (v + 1.0) / 2.0)
}

/// `1 - ((1 + f)/2)^n` without the hypothesis checks.
pub fn peak_unit_unchecked(f: &BoundarySignal, n: usize) -> Result<BoundarySignal> {
    half_plus(f)?.map(|g| 1.0 - g.powu(n as u32))
}

/// Peak-set unit `1 - ((1 + f)/2)^n` for `‖f‖ ≤ 1` with `1` in the sampled
/// range of `f` (within `range_tol`).
pub fn approx_unit_peak(f: &BoundarySignal, n: usize, range_tol: f64) -> Result<BoundarySignal> {
    let sup = sup_norm(f);
    if sup > 1.0 + NORM_SLACK {
        return Err(LabError::NormExceeded(sup));
    }
    let miss = f.values().iter().map(|v| (1.0 - v).norm()).fold(f64::INFINITY, f64::min);
    if !(miss < range_tol) {
        return Err(LabError::RangeMiss(miss));
    }
    peak_unit_unchecked(f, n)
}

/// `sup |(1 - g) g^n|` with `g = (1 + f)/2`.
pub fn peak_stage_error(f: &BoundarySignal, n: usize) -> Result<f64> {
    let g = half_plus(f)?;
    Ok(sup_norm(&g.map(|x| (1.0 - x) * x.powu(n as u32))?))
}

/// `sup |(1 - g) f_n - (1 - g) + (1 - g) g^n|`, zero up to round-off.
pub fn peak_identity_residual(f: &BoundarySignal, n: usize) -> Result<f64> {
    let g = half_plus(f)?;
    let fnn = peak_unit_unchecked(f, n)?;
    let r = g.zip_with(&fnn, |g, u| (1.0 - g) * u - (1.0 - g) + (1.0 - g) * g.powu(n as u32))?;
    Ok(sup_norm(&r))
}

/// `ζ = u + v - u·v`.
pub fn combine_units(u: &BoundarySignal, v: &BoundarySignal) -> Result<BoundarySignal> {
    u.zip_with(v, |a, b| a + b - a * b)
}

/// `‖u·g - g‖_∞ / ‖g‖_∞`.
pub fn relative_unit_error(u: &BoundarySignal, g: &BoundarySignal) -> Result<f64> {
    let diff = u.zip_with(g, |a, b| a * b - b)?;
    Ok(sup_norm(&diff) / sup_norm(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    NotOuter,
    NotInZinfty,
    NormExceeded,
    RangeMiss,
    ToleranceNotReached,
    BoundExceeded,
}

/// Parameters of [`certify_mideal`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyParams {
    /// Stage schedule; `None` selects [`Strategy::default_schedule`].
    pub schedule: Option<Vec<usize>>,
    /// Sup-norm bound; `None` selects [`Strategy::default_bound`].
    pub bound: Option<f64>,
    pub tol: f64,
    pub outer_tol: f64,
    pub inner_tol: f64,
    pub range_tol: f64,
    pub zero_set: ZeroSetParams,
}

impl Default for CertifyParams {
    fn default() -> Self {
        Self {
            schedule: None,
            bound: None,
            tol: DEFAULT_CERT_TOL,
            outer_tol: DEFAULT_OUTER_TOL,
            inner_tol: DEFAULT_INNER_TOL,
            range_tol: DEFAULT_RANGE_TOL,
            zero_set: ZeroSetParams::default(),
        }
    }
}

/// Per-stage side data of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageInfo {
    pub stage: usize,
    pub sup_norm: f64,
    /// Measure of `A_m` per generator (outer constructions only).
    pub set_measures: Vec<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxUnitCertificate {
    pub label: String,
    pub strategy: Strategy,
    pub grid_size: usize,
    pub schedule: Vec<usize>,
    /// `errors[s][i]`: relative error of stage `s` on generator `i`.
    pub errors: Vec<Vec<f64>>,
    pub sup_bound: f64,
    pub bound: f64,
    pub tol: f64,
    pub stages: Vec<StageInfo>,
    /// Inner residual of each generator, `max | |g| - 1 |`.
    pub inner_residuals: Vec<f64>,
    pub verdict: Verdict,
    pub failure_reason: Option<FailureReason>,
    pub failure_detail: Option<String>,
    #[serde(skip)]
    pub units: Vec<BoundarySignal>,
}

impl ApproxUnitCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Largest error per stage over the generators.
    pub fn stage_errors(&self) -> Vec<f64> {
        self.errors.iter().map(|row| row.iter().copied().fold(0.0, f64::max)).collect()
    }

    pub fn final_error(&self) -> Option<f64> {
        self.stage_errors().last().copied()
    }

    fn fail(mut self, reason: FailureReason, detail: impl Into<String>) -> Self {
        self.verdict = Verdict::Fail;
        self.failure_reason = Some(reason);
        self.failure_detail = Some(detail.into());
        self
    }
}

/// Builds approximate units for `ideal` along the schedule and certifies the
/// M-ideal property: pass iff every final-stage error is at most `tol` and
/// every unit has sup norm at most `bound`.
///
/// Generators failing the Jensen outerness test produce a failed certificate
/// with reason [`FailureReason::NotOuter`]. Structural misuse (several
/// generators for a single-generator strategy) is an error.
pub fn certify_mideal(ideal: &IdealSpec, strategy: Strategy, params: &CertifyParams) -> Result<ApproxUnitCertificate> {
    let bound = params.bound.unwrap_or_else(|| strategy.default_bound());
    if !(params.tol > 0.0 && bound > 0.0) {
        return Err(LabError::BadParameter("tolerance and bound must be positive".into()));
    }
    let gens = ideal.generators();
    if strategy != Strategy::Combined && gens.len() != 1 {
        return Err(LabError::StrategyInapplicable(format!(
            "{strategy} needs exactly one generator, got {}",
            gens.len()
        )));
    }
    let schedule = params.schedule.clone().unwrap_or_else(|| strategy.default_schedule());
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::BadParameter("stage schedule must be increasing and positive".into()));
    }
    let mut cert = ApproxUnitCertificate {
        label: ideal.label().to_string(),
        strategy,
        grid_size: gens[0].len(),
        schedule: Vec::new(),
        errors: Vec::new(),
        sup_bound: 0.0,
        bound,
        tol: params.tol,
        stages: Vec::new(),
        inner_residuals: gens.iter().map(inner_residual).collect::<Result<_>>()?,
        verdict: Verdict::Pass,
        failure_reason: None,
        failure_detail: None,
        units: Vec::new(),
    };
    let not_outer: Vec<usize> = gens
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match is_outer(g, params.outer_tol) {
            Ok(true) => None,
            _ => Some(i),
        })
        .collect();

    match strategy {
        Strategy::Peak => {
            let f = gens[0].map(|g| 1.0 - g)?;
            let checked = approx_unit_peak(&f, schedule[0], params.range_tol);
            for &n in &schedule {
                let u = peak_unit_unchecked(&f, n)?;
                record_stage(&mut cert, n, u, gens, Vec::new(), false)?;
            }
            if !not_outer.is_empty() {
                let detail = inner_detail(&cert, &not_outer);
                return Ok(cert.fail(FailureReason::NotOuter, detail));
            }
            match checked {
                Err(LabError::NormExceeded(s)) => {
                    return Ok(cert.fail(FailureReason::NormExceeded, format!("sup |1 - g| = {s:.6e} exceeds 1")))
                }
                Err(LabError::RangeMiss(d)) => {
                    return Ok(cert.fail(FailureReason::RangeMiss, format!("1 - g stays {d:.6e} away from 1")))
                }
                Err(e) => return Err(e),
                Ok(_) => {}
            }
        }
        Strategy::Main1 | Strategy::Combined => {
            if !not_outer.is_empty() {
                let detail = inner_detail(&cert, &not_outer);
                return Ok(cert.fail(FailureReason::NotOuter, detail));
            }
            for (i, g) in gens.iter().enumerate() {
                if let Err(e) = check_outer_zinfty(g, &params.zero_set, params.outer_tol) {
                    return match e {
                        LabError::NotInZinfty(msg) => {
                            Ok(cert.fail(FailureReason::NotInZinfty, format!("generator {i}: {msg}")))
                        }
                        LabError::NotOuter(msg) => Ok(cert.fail(FailureReason::NotOuter, format!("generator {i}: {msg}"))),
                        other => Err(other),
                    };
                }
            }
            let chains = gens
                .iter()
                .map(|g| main1_chain(g, &schedule))
                .collect::<Result<Vec<_>>>()?;
            for (s, &m) in schedule.iter().enumerate() {
                let mut zeta = chains[0][s].unit.clone();
                for chain in &chains[1..] {
                    zeta = combine_units(&zeta, &chain[s].unit)?;
                }
                let measures = chains.iter().map(|c| c[s].set.measure()).collect();
                let degenerate = chains.iter().all(|c| c[s].degenerate);
                record_stage(&mut cert, m, zeta, gens, measures, degenerate)?;
            }
        }
    }

    if cert.sup_bound > bound {
        let detail = format!("sup norm {:.6e} exceeds bound {:.6e}", cert.sup_bound, bound);
        return Ok(cert.fail(FailureReason::BoundExceeded, detail));
    }
    let last = cert.final_error().unwrap_or(f64::INFINITY);
    if !(last <= params.tol) {
        let detail = format!("final error {last:.6e} above tolerance {:.6e}", params.tol);
        return Ok(cert.fail(FailureReason::ToleranceNotReached, detail));
    }
    Ok(cert)
}

fn inner_detail(cert: &ApproxUnitCertificate, idx: &[usize]) -> String {
    let parts: Vec<String> = idx
        .iter()
        .map(|&i| format!("generator {i} fails the Jensen test (inner residual {:.3e})", cert.inner_residuals[i]))
        .collect();
    parts.join("; ")
}

fn record_stage(
    cert: &mut ApproxUnitCertificate,
    stage: usize,
    unit: BoundarySignal,
    gens: &[BoundarySignal],
    set_measures: Vec<f64>,
    degenerate: bool,
) -> Result<()> {
    let errors = gens
        .iter()
        .map(|g| relative_unit_error(&unit, g))
        .collect::<Result<Vec<_>>>()?;
    let sup = sup_norm(&unit);
    cert.sup_bound = cert.sup_bound.max(sup);
    cert.schedule.push(stage);
    cert.errors.push(errors);
    cert.stages.push(StageInfo {
        stage,
        sup_norm: sup,
        set_measures,
        degenerate,
    });
    cert.units.push(unit);
    Ok(())
}

/// A certified ideal together with the essential zero sets used by the
/// membership criterion.
#[derive(Debug, Clone)]
pub struct CertifiedIdeal {
    ideal: IdealSpec,
    certificate: ApproxUnitCertificate,
    zero_sets: Vec<ZeroSetEstimate>,
    params: ZeroSetParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    /// Points common to the generators' essential zero sets.
    pub ideal_zeros: Vec<Complex64>,
    pub candidate_zero_set: ZeroSetEstimate,
    pub zeros_contained: bool,
    pub continuity: Vec<ContinuityReport>,
    /// The extension exists and vanishes at every ideal zero.
    pub vanishes_continuously: bool,
}

impl CertifiedIdeal {
    /// Certifies `ideal` with `main1` (one generator) or `combined` (several).
    pub fn new(ideal: IdealSpec, params: &CertifyParams) -> Result<Self> {
        let strategy = if ideal.generators().len() == 1 {
            Strategy::Main1
        } else {
            Strategy::Combined
        };
        let certificate = certify_mideal(&ideal, strategy, params)?;
        if !certificate.passed() {
            return Err(LabError::NotCertified(
                certificate.failure_detail.clone().unwrap_or_else(|| "certificate failed".into()),
            ));
        }
        let zero_sets = ideal
            .generators()
            .iter()
            .map(|g| params.zero_set.zero_set(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ideal,
            certificate,
            zero_sets,
            params: params.zero_set.clone(),
        })
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    pub fn certificate(&self) -> &ApproxUnitCertificate {
        &self.certificate
    }

    pub fn zero_sets(&self) -> &[ZeroSetEstimate] {
        &self.zero_sets
    }

    /// Points of the first generator's zero set shared by all the others.
    pub fn common_zeros(&self) -> Vec<Complex64> {
        let first = &self.zero_sets[0];
        first
            .points
            .iter()
            .filter(|p| self.zero_sets[1..].iter().all(|z| z.contains_angle(p.angle, first.resolution)))
            .map(|p| p.point)
            .collect()
    }

    /// `g` belongs to the ideal iff the common essential zeros of the
    /// generators are essential zeros of `g` and `g` extends continuously to
    /// them with value 0.
    pub fn membership(&self, g: &BoundarySignal) -> Result<MembershipReport> {
        let ideal_zeros = self.common_zeros();
        let candidate_zero_set = self.params.zero_set(g)?;
        let res = candidate_zero_set.resolution;
        let zeros_contained = ideal_zeros.iter().all(|z| candidate_zero_set.contains_angle(z.arg(), res));
        let tol = self.params.tol_for(g);
        let continuity = continuous_extension(g, &ideal_zeros, &self.params.width_schedule, tol)?;
        let vanishes_continuously = continuity
            .iter()
            .all(|r| r.extension_value.is_some_and(|v| v.norm() <= tol));
        Ok(MembershipReport {
            member: zeros_contained && vanishes_continuously,
            ideal_zeros,
            candidate_zero_set,
            zeros_contained,
            continuity,
            vanishes_continuously,
        })
    }
}

/// Certifies `ideal` and tests `g` for membership.
pub fn membership(g: &BoundarySignal, ideal: &IdealSpec, params: &CertifyParams) -> Result<MembershipReport> {
    CertifiedIdeal::new(ideal.clone(), params)?.membership(g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeCheckReport {
    pub ess_inf_a: f64,
    pub delta: f64,
    pub product: MembershipReport,
    pub factor: MembershipReport,
    pub result: bool,
}

/// Analytic-prime property of a certified ideal: with `ess inf |a| > δ` and
/// `a·b ∈ I`, checks `b ∈ I`.
///
/// A violated hypothesis is [`LabError::HypothesisFailed`]; `b ∉ I` despite
/// the hypotheses is [`LabError::InvariantViolation`].
pub fn analytic_prime_check(ideal: &CertifiedIdeal, a: &BoundarySignal, b: &BoundarySignal, delta: f64) -> Result<PrimeCheckReport> {
    if !(delta > 0.0) {
        return Err(LabError::BadParameter(format!("δ = {delta} must be positive")));
    }
    let ess_inf_a = a.values().iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if !(ess_inf_a > delta) {
        return Err(LabError::HypothesisFailed(format!("ess inf |a| = {ess_inf_a:.6e} is not above δ = {delta:.6e}")));
    }
    let ab = a.mul(b)?;
    let product = ideal.membership(&ab)?;
    if !product.member {
        return Err(LabError::HypothesisFailed("a·b is not in the ideal".into()));
    }
    let factor = ideal.membership(b)?;
    if !factor.member {
        return Err(LabError::InvariantViolation(format!(
            "b is not in the certified ideal {} although a·b is",
            ideal.ideal().label()
        )));
    }
    Ok(PrimeCheckReport {
        ess_inf_a,
        delta,
        product,
        factor,
        result: true,
    })
}
