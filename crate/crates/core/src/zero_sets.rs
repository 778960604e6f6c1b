//! Essential zero sets on the circle and continuity of boundary values at
//! their points.
//!
//! The essential zero set of `f` is read off its outer factor: a point is an
//! essential zero when every neighbourhood meets the sublevel set
//! `{|f_O| < ε}` in positive measure, for every `ε`. On a grid this is probed
//! along finite schedules of thresholds and window widths.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_grid::{circular_distance, normalize_angle, sublevel_set, ArcSet, BoundarySignal};
use crate::error::{LabError, Result};
use crate::factorization::inner_outer;
use crate::hardy::sup_norm;

/// Relative slack separating round-off ties from genuine sublevel samples.
const TIE_SLACK: f64 = 1e-9;

const V_SLACK: f64 = 1.05;

/// Minimum number of grid nodes in a probing window.
pub const MIN_WINDOW_NODES: usize = 8;

/// Thresholds `e^{-1}, …, e^{-8}`.
pub fn default_eps_schedule() -> Vec<f64> {
    (1..=8).map(|m| (-(m as f64)).exp()).collect()
}

/// Window widths `2^{-1}, …, 2^{-8}` radians.
pub fn default_width_schedule() -> Vec<f64> {
    (1..=8).map(|m| 0.5_f64.powi(m)).collect()
}

/// Angular resolution of the estimates on an `n`-node grid: eight cells.
pub fn resolution(n: usize) -> f64 {
    MIN_WINDOW_NODES as f64 * TAU / n as f64
}

/// Default continuity tolerance: `ess sup |f| · N^{-1/4}`.
pub fn default_extension_tol(f: &BoundarySignal) -> f64 {
    sup_norm(f) * (f.len() as f64).powf(-0.25)
}

/// One row of the evidence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SublevelEvidence {
    pub eps: f64,
    pub width: f64,
    /// Normalized measure of `{|f_O| < eps}` inside the window.
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroPoint {
    pub point: Complex64,
    /// Angle in `[0, 2π)`.
    pub angle: f64,
    pub evidence: Vec<SublevelEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSetEstimate {
    pub points: Vec<ZeroPoint>,
    pub resolution: f64,
}

impl ZeroSetEstimate {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.angle).collect()
    }

    pub fn unimodular_points(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.point).collect()
    }

    /// Whether some reported point lies within `tol` radians of `theta`.
    pub fn contains_angle(&self, theta: f64, tol: f64) -> bool {
        self.points.iter().any(|p| circular_distance(p.angle, theta) <= tol)
    }

    /// Every point of `self` lies within `tol` of a point of `other`.
    pub fn is_subset_of(&self, other: &ZeroSetEstimate, tol: f64) -> bool {
        self.points.iter().all(|p| other.contains_angle(p.angle, tol))
    }

    /// Compares with an expected list of angles: same count and pairwise
    /// matching within `tol`.
    pub fn matches_angles(&self, expected: &[f64], tol: f64) -> bool {
        self.points.len() == expected.len()
            && expected.iter().all(|&t| self.contains_angle(t, tol))
            && self.points.iter().all(|p| expected.iter().any(|&t| circular_distance(p.angle, t) <= tol))
    }
}

fn check_schedule(name: &str, s: &[f64]) -> Result<()> {
    if s.is_empty() || s.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(LabError::BadParameter(format!("{name} schedule must be nonempty and positive")));
    }
    if s.windows(2).any(|w| w[1] >= w[0]) {
        return Err(LabError::BadParameter(format!("{name} schedule must be strictly decreasing")));
    }
    Ok(())
}

/// Probing window of nominal width `w` around `theta`, widened to hold at
/// least [`MIN_WINDOW_NODES`] nodes.
fn window(theta: f64, w: f64, n: usize) -> ArcSet {
    ArcSet::centered(theta, w.max(resolution(n)))
}

/// Grid surrogate of `ess inf |f|` over each node's cell, from moduli only.
///
/// Near a simple zero `|f|` is V-shaped: with neighbours `l`, `r` and centre
/// `c`, a zero inside the cell gives `c = |l - r|/2`, `c ≤ (l + r)/4` and
/// `min(l, r) ≥ max(l, r)/3`, with equality when the zero sits half a node
/// away. Nodes passing that shape test, up to a relative slack of `5%` for the
/// tilt of a smooth cofactor, get `max(0, c - |l - r|/2)`; others keep `c`. Every value is then raised by a
/// relative `1e-9` so that samples equal to a threshold up to round-off are
/// not counted below it.
pub fn cell_floor(f: &BoundarySignal) -> Vec<f64> {
    let m = f.modulus();
    let n = m.len();
    (0..n)
        .map(|j| {
            let (l, c, r) = (m[(j + n - 1) % n], m[j], m[(j + 1) % n]);
            let v_shaped = 4.0 * c <= (l + r) * V_SLACK && 3.0 * l.min(r) * V_SLACK >= l.max(r);
            let floor = if v_shaped { (c - (l - r).abs() / 2.0).max(0.0) } else { c };
            floor * (1.0 + TIE_SLACK)
        })
        .collect()
}

/// Midpoints of the connected pieces of `s`, after joining pieces separated
/// by gaps of at most `gap`.
fn cluster_centers(s: &ArcSet, gap: f64) -> Vec<f64> {
    if s.is_empty() {
        return Vec::new();
    }
    if s.is_full() {
        return vec![0.0];
    }
    let comps = s.components();
    // start from a component preceded by a wide gap so no cluster wraps
    let k = comps.len();
    let gap_before = |i: usize| {
        let (ps, pl) = comps[(i + k - 1) % k];
        normalize_angle(comps[i].0 - (ps + pl))
    };
    let first = (0..k).find(|&i| k == 1 || gap_before(i) > gap);
    let Some(first) = first else {
        // every gap is small: one cluster covering nearly everything
        return vec![0.0];
    };
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for step in 0..k {
        let i = (first + step) % k;
        let (start, len) = comps[i];
        match clusters.last_mut() {
            Some(last) if step > 0 && gap_before(i) <= gap => {
                last.1 = normalize_angle(start + len - last.0);
                if last.1 == 0.0 {
                    last.1 = TAU;
                }
            }
            _ => clusters.push((start, len)),
        }
    }
    clusters.iter().map(|&(a, l)| normalize_angle(a + l / 2.0)).collect()
}

/// Essential zero set of `f` read off its outer factor.
///
/// Sublevel sets are taken of [`cell_floor`] of the outer boundary values.
/// Candidates are the cluster midpoints of the finest sublevel set; a
/// candidate is kept when every `(ε, w)` pair of the schedules shows positive
/// sublevel measure in the window of width `w` around it.
pub fn essential_zero_set(f: &BoundarySignal, eps_schedule: &[f64], width_schedule: &[f64]) -> Result<ZeroSetEstimate> {
    if f.is_identically_zero() {
        return Err(LabError::ZeroFunction);
    }
    check_schedule("threshold", eps_schedule)?;
    check_schedule("width", width_schedule)?;
    let n = f.len();
    let res = resolution(n);
    let fac = inner_outer(f)?;
    let floor = BoundarySignal::new(
        f.grid(),
        cell_floor(fac.outer.boundary()).into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    )?;
    let levels = eps_schedule
        .iter()
        .map(|&eps| sublevel_set(&floor, eps))
        .collect::<Result<Vec<_>>>()?;
    let finest = levels.last().expect("schedule is nonempty");
    let mut points = Vec::new();
    for theta in cluster_centers(finest, res) {
        let mut evidence = Vec::with_capacity(levels.len() * width_schedule.len());
        for (&eps, level) in eps_schedule.iter().zip(&levels) {
            for &w in width_schedule {
                let measure = level.intersect(&window(theta, w, n)).measure();
                evidence.push(SublevelEvidence { eps, width: w, measure });
            }
        }
        if evidence.iter().all(|e| e.measure > 0.0) {
            points.push(ZeroPoint {
                point: Complex64::from_polar(1.0, theta),
                angle: theta,
                evidence,
            });
        }
    }
    points.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    Ok(ZeroSetEstimate { points, resolution: res })
}

/// [`essential_zero_set`] with the default schedules.
pub fn essential_zero_set_default(f: &BoundarySignal) -> Result<ZeroSetEstimate> {
    essential_zero_set(f, &default_eps_schedule(), &default_width_schedule())
}

/// Diameter of a finite planar point set.
pub fn diameter(points: &[Complex64]) -> f64 {
    let hull = convex_hull(points);
    let mut best = 0.0_f64;
    for (i, a) in hull.iter().enumerate() {
        for b in &hull[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let base = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= base + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Diameter of the sampled values of `f` in the window of width `w` centred
/// at the unimodular point `z`.
pub fn oscillation(f: &BoundarySignal, z: Complex64, w: f64) -> Result<f64> {
    let grid = f.grid();
    if !(w > grid.spacing()) {
        return Err(LabError::BadParameter(format!("window width {w} must exceed the grid spacing")));
    }
    let nodes = ArcSet::centered(z.arg(), w).node_indices(grid);
    if nodes.is_empty() {
        return Err(LabError::EmptyRegion);
    }
    let values: Vec<Complex64> = nodes.iter().map(|&j| f.values()[j]).collect();
    Ok(diameter(&values))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub point: Complex64,
    /// Effective window widths, decreasing.
    pub widths: Vec<f64>,
    pub oscillations: Vec<f64>,
    pub tol: f64,
    /// Mean over the finest window, present when the oscillations settle
    /// below `tol` without growing.
    pub extension_value: Option<Complex64>,
}

impl ContinuityReport {
    pub fn is_continuous(&self) -> bool {
        self.extension_value.is_some()
    }
}

/// Tests continuity of `f` at each of `points` along the window schedule.
///
/// The extension exists when the oscillation sequence never increases and
/// its last entry is below `tol`.
pub fn continuous_extension(
    f: &BoundarySignal,
    points: &[Complex64],
    width_schedule: &[f64],
    tol: f64,
) -> Result<Vec<ContinuityReport>> {
    check_schedule("width", width_schedule)?;
    let n = f.len();
    let mut reports = Vec::with_capacity(points.len());
    for &z in points {
        if (z.norm() - 1.0).abs() > 1e-9 {
            return Err(LabError::BadParameter(format!("{z} is not unimodular")));
        }
        let widths: Vec<f64> = width_schedule.iter().map(|&w| w.max(resolution(n))).collect();
        let oscillations = widths
            .iter()
            .map(|&w| oscillation(f, z, w))
            .collect::<Result<Vec<_>>>()?;
        let settled = oscillations.windows(2).all(|o| o[1] <= o[0]) && *oscillations.last().unwrap() < tol;
        let extension_value = settled.then(|| {
            let nodes = window(z.arg(), *widths.last().unwrap(), n).node_indices(f.grid());
            nodes.iter().map(|&j| f.values()[j]).sum::<Complex64>() / nodes.len() as f64
        });
        reports.push(ContinuityReport {
            point: z,
            widths,
            oscillations,
            tol,
            extension_value,
        });
    }
    Ok(reports)
}

/// Schedules and tolerance shared by the zero-set based tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSetParams {
    pub eps_schedule: Vec<f64>,
    pub width_schedule: Vec<f64>,
    /// Continuity tolerance; `None` selects [`default_extension_tol`].
    pub extension_tol: Option<f64>,
}

impl Default for ZeroSetParams {
    fn default() -> Self {
        Self {
            eps_schedule: default_eps_schedule(),
            width_schedule: default_width_schedule(),
            extension_tol: None,
        }
    }
}

impl ZeroSetParams {
    pub fn zero_set(&self, f: &BoundarySignal) -> Result<ZeroSetEstimate> {
        essential_zero_set(f, &self.eps_schedule, &self.width_schedule)
    }

    pub fn tol_for(&self, f: &BoundarySignal) -> f64 {
        self.extension_tol.unwrap_or_else(|| default_extension_tol(f))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZinftyReport {
    pub member: bool,
    pub zero_set: ZeroSetEstimate,
    pub reports: Vec<ContinuityReport>,
}

/// Membership in `Z^∞`: continuity of `f` at every point of its essential
/// zero set.
pub fn in_zinfty(f: &BoundarySignal, params: &ZeroSetParams) -> Result<ZinftyReport> {
    let zero_set = params.zero_set(f)?;
    let reports = continuous_extension(f, &zero_set.unimodular_points(), &params.width_schedule, params.tol_for(f))?;
    Ok(ZinftyReport {
        member: reports.iter().all(ContinuityReport::is_continuous),
        zero_set,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_grid::CircleGrid;
    use crate::factorization::{blaschke_boundary, singular_inner_boundary};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sig(n: usize, f: impl Fn(Complex64) -> Complex64) -> BoundarySignal {
        let g = CircleGrid::new(n).unwrap();
        BoundarySignal::from_fn(g, |t| f(Complex64::from_polar(1.0, t))).unwrap()
    }

    #[test]
    fn one_minus_z_has_zero_at_one() {
        let f = sig(1 << 14, |z| 1.0 - z);
        let est = essential_zero_set_default(&f).unwrap();
        assert!(est.matches_angles(&[0.0], est.resolution), "{:?}", est.angles());
        let ev = &est.points[0].evidence;
        assert_eq!(ev.len(), 64);
        assert!(ev.iter().all(|e| e.measure > 0.0));
    }

    #[test]
    fn invertible_function_has_empty_zero_set() {
        let f = sig(1 << 12, |z| 2.0 + z);
        assert!(essential_zero_set_default(&f).unwrap().is_empty());
    }

    #[test]
    fn zero_function_is_rejected() {
        let f = sig(64, |_| c(0.0, 0.0));
        assert!(matches!(essential_zero_set_default(&f), Err(LabError::ZeroFunction)));
        assert!(matches!(in_zinfty(&f, &ZeroSetParams::default()), Err(LabError::ZeroFunction)));
    }

    #[test]
    fn schedules_must_decrease() {
        let f = sig(64, |z| 1.0 - z);
        assert!(essential_zero_set(&f, &[0.1, 0.2], &[0.5]).is_err());
        assert!(essential_zero_set(&f, &[0.1], &[]).is_err());
    }

    #[test]
    fn inner_factor_does_not_move_zeros() {
        let n = 1 << 13;
        let f = sig(n, |z| (1.0 - z) * (1.0 + z));
        let g = CircleGrid::new(n).unwrap();
        let b = blaschke_boundary(g, c(0.3, -0.4)).unwrap();
        let s = singular_inner_boundary(g, c(-1.0, 0.0)).unwrap();
        let base = essential_zero_set_default(&f).unwrap();
        for inner in [b, s] {
            let est = essential_zero_set_default(&f.mul(&inner).unwrap()).unwrap();
            assert!(est.matches_angles(&base.angles(), base.resolution));
        }
    }

    #[test]
    fn oscillation_examples() {
        let g = CircleGrid::new(1 << 14).unwrap();
        let konst = BoundarySignal::constant(g, c(0.3, 0.1));
        assert_eq!(oscillation(&konst, c(0.0, 1.0), 0.3).unwrap(), 0.0);

        let z = sig(1 << 14, |z| z);
        let d = oscillation(&z, c(1.0, 0.0), 0.2).unwrap();
        assert_abs_diff_eq!(d, 2.0 * 0.1_f64.sin(), epsilon = 2.0 * g.spacing());

        let s = singular_inner_boundary(g, c(1.0, 0.0)).unwrap();
        let d = oscillation(&s, c(1.0, 0.0), 0.01).unwrap();
        assert!(d > 1.99, "{d}");

        assert!(matches!(oscillation(&z, c(1.0, 0.0), g.spacing()), Err(LabError::BadParameter(_))));
    }

    #[test]
    fn diameter_matches_brute_force() {
        let pts: Vec<Complex64> = (0..50).map(|k| Complex64::from_polar(1.0 + (k % 7) as f64 * 0.1, k as f64)).collect();
        let mut brute = 0.0_f64;
        for a in &pts {
            for b in &pts {
                brute = brute.max((a - b).norm());
            }
        }
        assert_abs_diff_eq!(diameter(&pts), brute, epsilon = 1e-15);
        assert_eq!(diameter(&[c(1.0, 2.0)]), 0.0);
        assert_eq!(diameter(&[]), 0.0);
    }

    #[test]
    fn polynomial_extends_continuously_to_zero() {
        let f = sig(1 << 14, |z| 1.0 - z);
        let reps = continuous_extension(&f, &[c(1.0, 0.0)], &default_width_schedule(), default_extension_tol(&f)).unwrap();
        let r = &reps[0];
        assert!(r.oscillations.windows(2).all(|o| o[1] <= o[0]));
        assert!(r.extension_value.unwrap().norm() < 1e-3);
        assert!(in_zinfty(&f, &ZeroSetParams::default()).unwrap().member);
    }

    #[test]
    fn singular_inner_has_no_extension_at_its_atom() {
        let g = CircleGrid::new(1 << 14).unwrap();
        let s = singular_inner_boundary(g, c(0.0, 1.0)).unwrap();
        let reps = continuous_extension(&s, &[c(0.0, 1.0)], &default_width_schedule(), default_extension_tol(&s)).unwrap();
        assert!(reps[0].extension_value.is_none());
        assert!(reps[0].oscillations.iter().all(|&o| o > 1.9));
    }

    #[test]
    fn cluster_centers_join_across_zero() {
        let s = ArcSet::centered(0.0, 0.2).union(&ArcSet::centered(PI, 0.1));
        let mut c = cluster_centers(&s, 0.01);
        c.sort_by(f64::total_cmp);
        assert_eq!(c.len(), 2);
        assert_abs_diff_eq!(circular_distance(c[0], 0.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c[1], PI, epsilon = 1e-12);
        let near = ArcSet::centered(1.0, 0.1).union(&ArcSet::centered(1.11, 0.1));
        assert_eq!(cluster_centers(&near, 0.02).len(), 1);
        assert_eq!(cluster_centers(&near, 0.001).len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn evidence_is_monotone_and_points_separated(a in 0.0..TAU, b in 0.0..TAU) {
            // closer zeros share one piece of the finest sublevel set
            prop_assume!(circular_distance(a, b) > 4.0 * resolution(1 << 12));
            let (za, zb) = (Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b));
            let f = sig(1 << 12, |z| (za - z) * (zb - z));
            let est = essential_zero_set_default(&f).unwrap();
            let widths = default_width_schedule().len();
            for p in &est.points {
                for w in 0..widths {
                    let col: Vec<f64> = p.evidence.iter().skip(w).step_by(widths).map(|e| e.measure).collect();
                    prop_assert!(col.windows(2).all(|m| m[1] <= m[0]));
                }
            }
            for (i, p) in est.points.iter().enumerate() {
                for q in &est.points[i + 1..] {
                    prop_assert!(circular_distance(p.angle, q.angle) >= est.resolution);
                }
            }
            prop_assert!(est.contains_angle(a, est.resolution));
            prop_assert!(est.contains_angle(b, est.resolution));
        }

        #[test]
        fn subset_survives_coarsening(a in 0.0..TAU, r in 1.0..4.0f64) {
            prop_assume!(circular_distance(a, PI) > 4.0 * resolution(1 << 12));
            let za = Complex64::from_polar(1.0, a);
            let f = sig(1 << 12, |z| za - z);
            let g = sig(1 << 12, |z| (za - z) * (1.0 + z));
            let (ef, eg) = (essential_zero_set_default(&f).unwrap(), essential_zero_set_default(&g).unwrap());
            prop_assert!(ef.is_subset_of(&eg, ef.resolution));
            prop_assert!(ef.is_subset_of(&eg, ef.resolution * r));
        }
    }
}
