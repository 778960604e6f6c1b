//! Discretization of the unit circle: grids, boundary signals, arc sets and
//! normalized Lebesgue measure.
//!
//! Every grid node stands for the half-open cell of width `2π/N` centred on
//! it, so a node behaves like an atom of measure `1/N`. "Almost everywhere"
//! statements are therefore checked at grid resolution.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// Smallest admissible grid.
pub const MIN_GRID_SIZE: usize = 8;
/// Default number of nodes.
pub const DEFAULT_GRID_SIZE: usize = 1 << 14;

/// Endpoint slack used when merging arcs and testing node membership.
const ARC_EPS: f64 = 1e-12;

/// Uniform grid `θ_j = 2πj/N`, `j = 0..N`, on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CircleGrid {
    size: usize,
}

impl CircleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < MIN_GRID_SIZE || !size.is_power_of_two() {
            return Err(LabError::InvalidGrid(size, MIN_GRID_SIZE));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Node spacing `2π/N`.
    pub fn spacing(&self) -> f64 {
        TAU / self.size as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.size as f64
    }

    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(j))
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.size).map(move |j| self.angle(j))
    }

    /// Index of the node nearest to the angle `theta` (any real).
    pub fn nearest_node(&self, theta: f64) -> usize {
        let t = normalize_angle(theta);
        ((t / self.spacing()).round() as usize) % self.size
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Angle of `theta` measured in `(-π, π]`.
pub fn signed_angle(theta: f64) -> f64 {
    let t = normalize_angle(theta);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// Shortest angular distance between two points of the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    signed_angle(a - b).abs()
}

/// Complex samples of a boundary function on a [`CircleGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySignal {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl BoundarySignal {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(LabError::LengthMismatch {
                expected: grid.size(),
                got: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(LabError::NonFinite(j));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(θ_j)` for every node.
    pub fn from_fn(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.angles().map(f).collect())
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        Self {
            grid,
            values: vec![c; grid.size()],
        }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm() == 0.0)
    }

    /// Pointwise map. Fails if the map produces non-finite values.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two signals on the same grid.
    pub fn zip_with(
        &self,
        other: &BoundarySignal,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_same_grid(other)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn mul(&self, other: &BoundarySignal) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    fn check_same_grid(&self, other: &BoundarySignal) -> Result<()> {
        if self.grid != other.grid {
            return Err(LabError::LengthMismatch {
                expected: self.grid.size(),
                got: other.grid.size(),
            });
        }
        Ok(())
    }

    /// Reads the `theta,re,im` CSV format. The angles must be the nodes
    /// `2πj/N` within `1e-9`.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names != ["theta", "re", "im"] {
            return Err(LabError::Format(format!(
                "expected header theta,re,im, found {}",
                names.join(",")
            )));
        }
        let mut thetas = Vec::new();
        let mut values = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let parse = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .ok_or_else(|| LabError::Format(format!("row {row}: missing column {i}")))?
                    .parse::<f64>()
                    .map_err(|e| LabError::Format(format!("row {row}: {e}")))
            };
            thetas.push(parse(0)?);
            values.push(Complex64::new(parse(1)?, parse(2)?));
        }
        let grid = CircleGrid::new(values.len())
            .map_err(|e| LabError::Format(format!("bad row count: {e}")))?;
        for (j, &t) in thetas.iter().enumerate() {
            if (t - grid.angle(j)).abs() > 1e-9 {
                return Err(LabError::Format(format!(
                    "row {j}: theta {t} is not the uniform node {}",
                    grid.angle(j)
                )));
            }
        }
        BoundarySignal::new(grid, values).map_err(|e| LabError::Format(e.to_string()))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["theta", "re", "im"])?;
        for (j, v) in self.values.iter().enumerate() {
            wtr.write_record([
                fmt_f64(self.grid.angle(j)),
                fmt_f64(v.re),
                fmt_f64(v.im),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Fixed 17-significant-digit formatting used by every text output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Real samples on a [`CircleGrid`]; used for log-modulus data.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSignal {
    grid: CircleGrid,
    values: Vec<f64>,
}

impl RealSignal {
    pub fn new(grid: CircleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(LabError::LengthMismatch {
                expected: grid.size(),
                got: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::NonFinite(j));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: CircleGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.angles().map(f).collect())
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn to_complex(&self) -> BoundarySignal {
        BoundarySignal {
            grid: self.grid,
            values: self.values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    /// Interprets a complex signal as real; the imaginary parts must vanish
    /// to `1e-12` relative to the largest sample.
    pub fn from_complex(signal: &BoundarySignal) -> Result<Self> {
        let scale = signal.values().iter().fold(1.0_f64, |m, v| m.max(v.norm()));
        if let Some(j) = signal.values().iter().position(|v| v.im.abs() > 1e-12 * scale) {
            return Err(LabError::Format(format!("sample {j} is not real")));
        }
        Self::new(signal.grid(), signal.values().iter().map(|v| v.re).collect())
    }
}

/// Finite union of half-open arcs `[a, b)` of the circle.
///
/// Stored normalized: endpoints in `[0, 2π]`, sorted, pairwise disjoint and
/// merged. An arc crossing angle zero is split into `[a, 2π)` and `[0, b)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSet {
    arcs: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty() -> Self {
        Self { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        Self {
            arcs: vec![(0.0, TAU)],
        }
    }

    /// The arc that starts at `start` and runs counterclockwise for `length`.
    pub fn arc(start: f64, length: f64) -> Self {
        Self::from_raw(vec![(start, length)])
    }

    /// The arc of total width `width` centred at angle `center`.
    pub fn centered(center: f64, width: f64) -> Self {
        Self::arc(center - width / 2.0, width)
    }

    /// Builds a normalized set from `(start, length)` pairs.
    fn from_raw(raw: Vec<(f64, f64)>) -> Self {
        let mut pieces = Vec::with_capacity(raw.len() + 1);
        for (start, length) in raw {
            if !(length > 0.0) {
                continue;
            }
            if length >= TAU - ARC_EPS {
                return Self::full();
            }
            let a = normalize_angle(start);
            let b = a + length;
            if b > TAU {
                pieces.push((a, TAU));
                pieces.push((0.0, b - TAU));
            } else {
                pieces.push((a, b));
            }
        }
        Self::merge(pieces)
    }

    fn merge(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|&(a, b)| b - a > 0.0);
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut arcs: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match arcs.last_mut() {
                Some(last) if a <= last.1 + ARC_EPS => last.1 = last.1.max(b),
                _ => arcs.push((a, b)),
            }
        }
        if let Some(last) = arcs.last_mut() {
            if last.1 > TAU - ARC_EPS {
                last.1 = TAU;
            }
        }
        if arcs.len() == 1 && arcs[0].0 <= ARC_EPS && arcs[0].1 >= TAU - ARC_EPS {
            return Self::full();
        }
        Self { arcs }
    }

    /// Normalized arcs as `(start, end)` pairs in `[0, 2π]`.
    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Normalized Lebesgue measure in `[0, 1]`.
    pub fn measure(&self) -> f64 {
        let total: f64 = self.arcs.iter().map(|(a, b)| b - a).sum();
        (total / TAU).clamp(0.0, 1.0)
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = normalize_angle(theta);
        // arcs are sorted by start: binary search for the last start <= t
        let idx = self.arcs.partition_point(|&(a, _)| a <= t);
        idx > 0 && t < self.arcs[idx - 1].1
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        let mut cursor = 0.0;
        for &(a, b) in &self.arcs {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < TAU {
            out.push((cursor, TAU));
        }
        Self::merge(out)
    }

    pub fn union(&self, other: &ArcSet) -> Self {
        let mut pieces = self.arcs.clone();
        pieces.extend_from_slice(&other.arcs);
        Self::merge(pieces)
    }

    pub fn intersect(&self, other: &ArcSet) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.arcs.len() && j < other.arcs.len() {
            let (a1, b1) = self.arcs[i];
            let (a2, b2) = other.arcs[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if hi > lo {
                out.push((lo, hi));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::merge(out)
    }

    /// Set difference `self ∖ other`.
    pub fn difference(&self, other: &ArcSet) -> Self {
        self.intersect(&other.complement())
    }

    /// Extends every arc by `w` on both sides. Requires `0 ≤ w < π`.
    pub fn dilate(&self, w: f64) -> Result<Self> {
        if !(0.0..PI).contains(&w) {
            return Err(LabError::BadParameter(format!("dilation width {w} not in [0, π)")));
        }
        if self.is_full() {
            return Ok(self.clone());
        }
        Ok(Self::from_raw(
            self.arcs.iter().map(|&(a, b)| (a - w, b - a + 2.0 * w)).collect(),
        ))
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0] == (0.0, TAU)
    }

    /// `true` when `self ⊆ other` up to endpoint round-off.
    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        self.difference(other).measure() <= 1e-12
    }

    /// Indices of grid nodes lying in the set, ascending.
    pub fn node_indices(&self, grid: CircleGrid) -> Vec<usize> {
        let h = grid.spacing();
        let n = grid.size();
        let mut out = Vec::new();
        for &(a, b) in &self.arcs {
            let first = ((a / h).ceil() as usize).saturating_sub(1);
            let last = ((b / h).ceil() as usize + 1).min(n);
            for j in first..last {
                let t = grid.angle(j);
                if t >= a && t < b {
                    out.push(j);
                }
            }
        }
        out.dedup();
        out
    }

    /// Connected components as `(start, length)`, joining the pieces split at
    /// angle zero.
    pub fn components(&self) -> Vec<(f64, f64)> {
        if self.is_full() {
            return vec![(0.0, TAU)];
        }
        let mut comps: Vec<(f64, f64)> = self.arcs.iter().map(|&(a, b)| (a, b - a)).collect();
        if comps.len() >= 2 {
            let first = comps[0];
            let last = *comps.last().unwrap();
            if first.0 <= ARC_EPS && last.0 + last.1 >= TAU - ARC_EPS {
                comps.pop();
                comps[0] = (last.0, last.1 + first.1);
            }
        }
        comps
    }
}

/// Normalized measure of a set.
pub fn measure(s: &ArcSet) -> f64 {
    s.measure()
}

/// Union of maximal runs of nodes with `|f(θ_j)| < ε`; each run becomes the
/// half-open arc covering the cells of its nodes.
pub fn sublevel_set(f: &BoundarySignal, eps: f64) -> Result<ArcSet> {
    if !(eps > 0.0) {
        return Err(LabError::BadParameter(format!("sublevel threshold {eps} must be positive")));
    }
    let grid = f.grid();
    let h = grid.spacing();
    let mut raw = Vec::new();
    let mut run_start: Option<usize> = None;
    for (j, v) in f.values().iter().enumerate() {
        let inside = v.norm() < eps;
        match (inside, run_start) {
            (true, None) => run_start = Some(j),
            (false, Some(s)) => {
                raw.push((grid.angle(s) - h / 2.0, (j - s) as f64 * h));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        raw.push((grid.angle(s) - h / 2.0, (grid.size() - s) as f64 * h));
    }
    Ok(ArcSet::from_raw(raw))
}

/// Grid surrogate of the essential supremum of `|f|` over `s`.
pub fn ess_sup_on(f: &BoundarySignal, s: &ArcSet) -> Result<f64> {
    extremum_on(f, s, f64::max)
}

/// Grid surrogate of the essential infimum of `|f|` over `s`.
pub fn ess_inf_on(f: &BoundarySignal, s: &ArcSet) -> Result<f64> {
    extremum_on(f, s, f64::min)
}

fn extremum_on(f: &BoundarySignal, s: &ArcSet, pick: fn(f64, f64) -> f64) -> Result<f64> {
    let nodes = s.node_indices(f.grid());
    nodes
        .iter()
        .map(|&j| f.values()[j].norm())
        .reduce(pick)
        .ok_or(LabError::EmptyRegion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(CircleGrid::new(4).is_err());
        assert!(CircleGrid::new(12).is_err());
        assert!(CircleGrid::new(16).is_ok());
    }

    #[test]
    fn measure_basics() {
        assert_eq!(ArcSet::full().measure(), 1.0);
        assert_eq!(ArcSet::empty().measure(), 0.0);
        assert_abs_diff_eq!(ArcSet::arc(0.0, PI).measure(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn complement_of_full_is_empty() {
        assert!(ArcSet::full().complement().is_empty());
        assert!(ArcSet::empty().complement().is_full());
    }

    #[test]
    fn dilate_wraps_through_zero() {
        let s = ArcSet::arc(0.0, 0.1).dilate(0.05).unwrap();
        assert_abs_diff_eq!(s.measure(), 0.2 / TAU, epsilon = 1e-14);
        assert!(s.contains(-0.04));
        assert!(s.contains(0.149));
        assert!(!s.contains(0.151));
        assert_eq!(s.components().len(), 1);
        assert!(ArcSet::arc(0.0, 0.1).dilate(PI).is_err());
    }

    #[test]
    fn intersect_half_circles() {
        let s = ArcSet::arc(0.0, PI).intersect(&ArcSet::arc(PI / 2.0, PI));
        assert_abs_diff_eq!(s.measure(), 0.25, epsilon = 1e-15);
        assert_eq!(s.arcs(), &[(PI / 2.0, PI)]);
    }

    #[test]
    fn sublevel_of_one_minus_z() {
        let g = grid(1 << 14);
        let f = BoundarySignal::from_fn(g, |t| Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t)).unwrap();
        let s = sublevel_set(&f, 0.1).unwrap();
        let expected = 2.0 * (0.05_f64).asin() / PI;
        assert!((s.measure() - expected).abs() <= 2.0 / g.size() as f64);
        assert_eq!(s.components().len(), 1);
    }

    #[test]
    fn sublevel_constants() {
        let g = grid(64);
        let one = BoundarySignal::constant(g, Complex64::new(1.0, 0.0));
        assert!(sublevel_set(&one, 1.0).unwrap().is_empty());
        let zero = BoundarySignal::constant(g, Complex64::new(0.0, 0.0));
        assert!(sublevel_set(&zero, 0.5).unwrap().is_full());
        assert!(sublevel_set(&zero, 0.0).is_err());
    }

    #[test]
    fn ess_sup_and_inf() {
        let g = grid(1 << 12);
        let f = BoundarySignal::from_fn(g, |t| Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t)).unwrap();
        let sup = ess_sup_on(&f, &ArcSet::full()).unwrap();
        assert!((sup - 2.0).abs() <= g.spacing());
        let c = BoundarySignal::constant(g, Complex64::new(0.0, -3.0));
        assert_eq!(ess_inf_on(&c, &ArcSet::arc(1.0, 0.5)).unwrap(), 3.0);
        let e = BoundarySignal::from_fn(g, |t| Complex64::from_polar(1.0, t)).unwrap();
        assert_abs_diff_eq!(ess_sup_on(&e, &ArcSet::arc(2.0, 0.3)).unwrap(), 1.0, epsilon = 1e-15);
        assert!(matches!(ess_sup_on(&e, &ArcSet::empty()), Err(LabError::EmptyRegion)));
    }

    #[test]
    fn node_indices_match_contains() {
        let g = grid(256);
        let s = ArcSet::centered(0.0, 0.2).union(&ArcSet::arc(3.0, 0.4));
        let nodes = s.node_indices(g);
        let brute: Vec<usize> = (0..g.size()).filter(|&j| s.contains(g.angle(j))).collect();
        assert_eq!(nodes, brute);
    }

    #[test]
    fn csv_round_trip_and_validation() {
        let g = grid(16);
        let f = BoundarySignal::from_fn(g, |t| Complex64::new(t.cos(), t.sin() * 0.5)).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = BoundarySignal::read_csv(buf.as_slice()).unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-15);
        }
        let bad = "theta,re,im\n0,1,0\n0.5,1,0\n";
        assert!(BoundarySignal::read_csv(bad.as_bytes()).is_err());
        let wrong_header = "t,re,im\n";
        assert!(matches!(
            BoundarySignal::read_csv(wrong_header.as_bytes()),
            Err(LabError::Format(_))
        ));
    }
}
