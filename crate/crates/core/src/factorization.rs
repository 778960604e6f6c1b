//! Outer functions from log-modulus data, elementary inner functions, and the
//! inner-outer split `f = f_I · f_O`.
//!
//! An outer function is rebuilt from `k = log|f|` as
//! `exp(k + i·H[k])` on the circle and `exp(herglotz(k, z))` inside the disc,
//! where `H` is the conjugate function. Log data is clipped at
//! [`LOG_CLIP_FLOOR`] so that integrable singularities such as
//! `log|1 - e^{iθ}|` keep finite quadrature; the bias this introduces is
//! resolution dependent and documented per operation.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_grid::{BoundarySignal, CircleGrid, RealSignal};
use crate::error::{LabError, Result};
use crate::hardy::{conjugate_function, fourier_coefficients, herglotz_integral};

/// Floor applied to `log|f|`.
pub const LOG_CLIP_FLOOR: f64 = -30.0;
/// Largest admissible fraction of clipped nodes.
pub const MAX_CLIPPED_FRACTION: f64 = 0.2;
/// Default tolerance of [`is_inner`].
pub const DEFAULT_INNER_TOL: f64 = 1e-6;
/// Default relative tolerance of [`is_outer`].
pub const DEFAULT_OUTER_TOL: f64 = 1e-2;

/// Outer function determined by its (clipped) boundary log-modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterFn {
    log_modulus: RealSignal,
    boundary: BoundarySignal,
    clipped: Vec<usize>,
}

impl OuterFn {
    /// Clipped log-modulus `k`.
    pub fn log_modulus(&self) -> &RealSignal {
        &self.log_modulus
    }

    /// Boundary values `exp(k + i·H[k])`.
    pub fn boundary(&self) -> &BoundarySignal {
        &self.boundary
    }

    pub fn grid(&self) -> CircleGrid {
        self.boundary.grid()
    }

    /// Nodes whose log-modulus sat at or below the clip floor.
    pub fn clipped_nodes(&self) -> &[usize] {
        &self.clipped
    }

    /// `exp(herglotz(k, z))` for `|z| < 1`.
    pub fn value_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(herglotz_integral(&self.log_modulus, z)?.exp())
    }

    /// Normalization constant `f(0) = exp(mean k) > 0`.
    pub fn value_at_zero(&self) -> f64 {
        self.log_modulus.mean().exp()
    }

    /// Taylor coefficients read off the boundary samples (`N/2` of them).
    pub fn taylor_coefficients(&self) -> Vec<Complex64> {
        let c = fourier_coefficients(self.boundary.values());
        c[..c.len() / 2].to_vec()
    }

    /// Writes the log-modulus in the boundary CSV format (imaginary part 0).
    pub fn write_log_modulus_csv<W: Write>(&self, writer: W) -> Result<()> {
        self.log_modulus.to_complex().write_csv(writer)
    }

    pub fn metadata(&self) -> OuterMetadata {
        OuterMetadata {
            grid_size: self.grid().size(),
            normalization: self.value_at_zero(),
            clip_floor: LOG_CLIP_FLOOR,
            clipped_nodes: self.clipped.len(),
        }
    }
}

/// JSON companion of an [`OuterFn`] log-modulus CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterMetadata {
    pub grid_size: usize,
    /// Value of the outer function at the origin (positive real).
    pub normalization: f64,
    pub clip_floor: f64,
    pub clipped_nodes: usize,
}

/// `log|f|` clipped below at [`LOG_CLIP_FLOOR`], plus the clipped node list.
pub fn clipped_log_modulus(f: &BoundarySignal) -> (RealSignal, Vec<usize>) {
    let mut clipped = Vec::new();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let l = v.norm().ln();
            if l <= LOG_CLIP_FLOOR {
                clipped.push(j);
                LOG_CLIP_FLOOR
            } else {
                l
            }
        })
        .collect();
    let k = RealSignal::new(f.grid(), values).expect("clipped logs of finite samples are finite");
    (k, clipped)
}

fn check_clipped(clipped: usize, total: usize) -> Result<()> {
    if clipped as f64 > MAX_CLIPPED_FRACTION * total as f64 {
        return Err(LabError::UnboundedLogData { clipped, total });
    }
    Ok(())
}

/// Builds the outer function with boundary log-modulus `k`.
///
/// Values below the floor are clipped; more than 20% clipped nodes is an
/// [`LabError::UnboundedLogData`] error. The result is zero-free in the disc
/// and positive at the origin.
pub fn synth_outer(k: &RealSignal) -> Result<OuterFn> {
    let mut clipped = Vec::new();
    let values: Vec<f64> = k
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            if v <= LOG_CLIP_FLOOR {
                clipped.push(j);
                LOG_CLIP_FLOOR
            } else {
                v
            }
        })
        .collect();
    check_clipped(clipped.len(), values.len())?;
    let log_modulus = RealSignal::new(k.grid(), values)?;
    let harmonic_conjugate = conjugate_function(&log_modulus);
    let boundary = BoundarySignal::new(
        k.grid(),
        log_modulus
            .values()
            .iter()
            .zip(harmonic_conjugate.values())
            .map(|(&m, &phase)| Complex64::from_polar(m.exp(), phase))
            .collect(),
    )?;
    Ok(OuterFn {
        log_modulus,
        boundary,
        clipped,
    })
}

/// Blaschke factor with zero `a`, normalized to be positive at the origin:
/// `(|a|/a)·(a - z)/(1 - ā z)`, and `z` itself when `a = 0`.
pub fn blaschke(a: Complex64, z: Complex64) -> Result<Complex64> {
    if !(a.norm() < 1.0) {
        return Err(LabError::BadParameter(format!("Blaschke zero {a} must lie in the disc")));
    }
    if a.norm() == 0.0 {
        return Ok(z);
    }
    Ok(a.conj() / a.norm() * (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z))
}

/// Singular inner function `exp((z + α)/(z - α))` with a unit point mass at
/// the unimodular `α`.
pub fn singular_inner(alpha: Complex64, z: Complex64) -> Result<Complex64> {
    check_unimodular(alpha)?;
    let d = z - alpha;
    if d.norm() <= 1e-14 {
        return Err(LabError::SingularPoint);
    }
    Ok(((z + alpha) / d).exp())
}

fn check_unimodular(alpha: Complex64) -> Result<()> {
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(LabError::BadParameter(format!("{alpha} is not unimodular")));
    }
    Ok(())
}

/// Boundary samples of a Blaschke factor.
pub fn blaschke_boundary(grid: CircleGrid, a: Complex64) -> Result<BoundarySignal> {
    let values = grid
        .angles()
        .map(|t| blaschke(a, Complex64::from_polar(1.0, t)))
        .collect::<Result<Vec<_>>>()?;
    BoundarySignal::new(grid, values)
}

/// Boundary samples of [`singular_inner`].
///
/// On the circle the exponent is `-i·cot(φ/2)` with `φ = θ - arg α`, an odd
/// function of `φ` with no limit at `α`. A node sitting exactly on `α` takes
/// the principal value `0` of that exponent, i.e. the sample `1`; every other
/// node is computed in the closed form, which is unimodular to round-off.
pub fn singular_inner_boundary(grid: CircleGrid, alpha: Complex64) -> Result<BoundarySignal> {
    check_unimodular(alpha)?;
    let base = alpha.arg();
    BoundarySignal::from_fn(grid, |t| {
        let phi = t - base;
        let half_tan = (phi / 2.0).tan();
        if half_tan.abs() < 1e-14 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, -1.0 / half_tan)
        }
    })
}

/// Result of [`inner_outer`].
#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub inner: BoundarySignal,
    pub outer: OuterFn,
    /// `max | |inner| - 1 |` over unclipped nodes.
    pub unimodular_residual: f64,
}

/// JSON record accompanying the inner/outer CSV pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationMetadata {
    pub grid_size: usize,
    pub unimodular_residual: f64,
    pub outer_normalization: f64,
    pub clipped_nodes: usize,
    pub clip_floor: f64,
}

impl FactorizationResult {
    pub fn metadata(&self) -> FactorizationMetadata {
        FactorizationMetadata {
            grid_size: self.inner.grid().size(),
            unimodular_residual: self.unimodular_residual,
            outer_normalization: self.outer.value_at_zero(),
            clipped_nodes: self.outer.clipped_nodes().len(),
            clip_floor: LOG_CLIP_FLOOR,
        }
    }
}

fn unit(v: Complex64) -> Complex64 {
    let r = v.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        v / r
    }
}

/// Splits `f` into an inner factor and an outer factor positive at 0.
///
/// The outer factor is `synth_outer(log|f|)`; the inner factor is the
/// pointwise quotient. At clipped nodes the quotient is replaced by the
/// phase difference, and those nodes are left out of the residual.
pub fn inner_outer(f: &BoundarySignal) -> Result<FactorizationResult> {
    if f.is_identically_zero() {
        return Err(LabError::ZeroFunction);
    }
    let (k, clipped) = clipped_log_modulus(f);
    check_clipped(clipped.len(), f.len())?;
    let outer = synth_outer(&k)?;
    let mut is_clipped = vec![false; f.len()];
    clipped.iter().for_each(|&j| is_clipped[j] = true);
    let mut residual = 0.0_f64;
    let inner_values = f
        .values()
        .iter()
        .zip(outer.boundary().values())
        .zip(&is_clipped)
        .map(|((&v, &o), &c)| {
            if c {
                unit(v) * unit(o).conj()
            } else {
                let q = v / o;
                residual = residual.max((q.norm() - 1.0).abs());
                q
            }
        })
        .collect();
    Ok(FactorizationResult {
        inner: BoundarySignal::new(f.grid(), inner_values)?,
        outer,
        unimodular_residual: residual,
    })
}

/// `max | |f| - 1 |` over the nodes.
pub fn inner_residual(f: &BoundarySignal) -> Result<f64> {
    if f.is_identically_zero() {
        return Err(LabError::ZeroFunction);
    }
    Ok(f.values().iter().fold(0.0, |m, v| m.max((v.norm() - 1.0).abs())))
}

/// Unimodular boundary values within `tol`.
pub fn is_inner(f: &BoundarySignal, tol: f64) -> Result<bool> {
    Ok(inner_residual(f)? <= tol)
}

/// The two sides of Jensen's inequality `|f(0)| ≤ exp(mean log|f|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JensenReport {
    /// `|a_0|`, the modulus of the zeroth Fourier coefficient.
    pub value_at_zero: f64,
    /// `exp(mean log|f|)` with clipping.
    pub jensen_bound: f64,
    /// `| |a_0| - bound | / bound`.
    pub relative_gap: f64,
}

pub fn jensen_report(f: &BoundarySignal) -> Result<JensenReport> {
    if f.is_identically_zero() {
        return Err(LabError::ZeroFunction);
    }
    let a0 = f.values().iter().sum::<Complex64>() / f.len() as f64;
    let (k, _) = clipped_log_modulus(f);
    let bound = k.mean().exp();
    Ok(JensenReport {
        value_at_zero: a0.norm(),
        jensen_bound: bound,
        relative_gap: (a0.norm() - bound).abs() / bound,
    })
}

/// Equality in Jensen's inequality within relative `tol`: the computable
/// signature of an outer function.
pub fn is_outer(f: &BoundarySignal, tol: f64) -> Result<bool> {
    Ok(jensen_report(f)?.relative_gap <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_grid::ArcSet;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_minus_z(t: f64) -> Complex64 {
        c(1.0, 0.0) - Complex64::from_polar(1.0, t)
    }

    #[test]
    fn synth_of_zero_is_one() {
        let g = CircleGrid::new(256).unwrap();
        let f = synth_outer(&RealSignal::from_fn(g, |_| 0.0).unwrap()).unwrap();
        assert!(f.boundary().values().iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-15));
        assert_eq!(f.value_at_zero(), 1.0);
    }

    #[test]
    fn synth_of_cosine_is_exponential() {
        let g = CircleGrid::new(4096).unwrap();
        let f = synth_outer(&RealSignal::from_fn(g, f64::cos).unwrap()).unwrap();
        let a = f.taylor_coefficients();
        let mut fact = 1.0;
        for (n, coeff) in a.iter().enumerate().take(13) {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((coeff - c(1.0 / fact, 0.0)).norm() < 1e-8, "n={n}");
        }
        let z = c(0.3, 0.5);
        assert!((f.value_at(z).unwrap() - z.exp()).norm() < 1e-10);
    }

    #[test]
    fn synth_of_log_one_minus_z() {
        let n = 1 << 14;
        let g = CircleGrid::new(n).unwrap();
        let k = RealSignal::from_fn(g, |t| one_minus_z(t).norm().ln().max(LOG_CLIP_FLOOR)).unwrap();
        let f = synth_outer(&k).unwrap();
        // Discrete oracle: Σ_{j≠0} log|1 - ω^j| = log N, plus the clipped node.
        let expected = (((n as f64).ln() + LOG_CLIP_FLOOR) / n as f64).exp();
        assert_abs_diff_eq!(f.value_at_zero(), expected, epsilon = 1e-12);
        assert!((f.value_at_zero() - 1.0).abs() < 1.5e-3);
        assert_eq!(f.clipped_nodes(), &[0]);
        let z = c(0.5, 0.0);
        assert!((f.value_at(z).unwrap() - (c(1.0, 0.0) - z)).norm() < 5e-3);
    }

    #[test]
    fn synth_rejects_unbounded_log_data() {
        let g = CircleGrid::new(64).unwrap();
        let k = RealSignal::from_fn(g, |t| if t < 2.0 { -40.0 } else { 0.0 }).unwrap();
        assert!(matches!(synth_outer(&k), Err(LabError::UnboundedLogData { .. })));
    }

    #[test]
    fn elementary_inner_functions() {
        let z = c(0.3, -0.2);
        assert_eq!(blaschke(c(0.0, 0.0), z).unwrap(), z);
        assert_abs_diff_eq!(blaschke(c(0.5, 0.0), c(0.0, 0.0)).unwrap().re, 0.5, epsilon = 1e-15);
        assert!(blaschke(c(1.0, 0.0), z).is_err());
        assert_abs_diff_eq!(
            singular_inner(c(1.0, 0.0), c(0.0, 0.0)).unwrap().re,
            (-1.0_f64).exp(),
            epsilon = 1e-15
        );
        assert!(matches!(
            singular_inner(c(0.0, 1.0), c(0.0, 1.0)),
            Err(LabError::SingularPoint)
        ));
        let g = CircleGrid::new(1024).unwrap();
        let s = singular_inner_boundary(g, c(0.0, 1.0)).unwrap();
        for (j, v) in s.values().iter().enumerate() {
            let t = g.angle(j);
            if (t - FRAC_PI_2).abs() > 1e-9 {
                let direct = singular_inner(c(0.0, 1.0), Complex64::from_polar(1.0, t)).unwrap();
                assert_abs_diff_eq!(direct.norm(), 1.0, epsilon = 1e-10);
                assert!((direct - v).norm() < 1e-9);
            }
        }
        let b = blaschke_boundary(g, c(0.2, 0.6)).unwrap();
        assert!(b.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn factor_z_times_one_minus_z() {
        let g = CircleGrid::new(1 << 14).unwrap();
        let f = BoundarySignal::from_fn(g, |t| Complex64::from_polar(1.0, t) * one_minus_z(t)).unwrap();
        let fac = inner_outer(&f).unwrap();
        assert!(fac.unimodular_residual < 1e-6);
        for (j, o) in fac.outer.boundary().values().iter().enumerate().skip(1) {
            assert_abs_diff_eq!(o.norm(), one_minus_z(g.angle(j)).norm(), epsilon = 1e-12);
        }
        // inner ≈ e^{iθ}: the clipped node adds a discrete delta of height
        // 30 - ln N to log|outer|, whose discrete conjugate lives on odd
        // offsets with size (2δ/N)·cot(θ/2)
        let n = g.size() as f64;
        let delta = -LOG_CLIP_FLOOR - n.ln();
        for j in 1..g.size() {
            let t = g.angle(j);
            let q = fac.inner.values()[j] / Complex64::from_polar(1.0, t);
            let bound = 2.0 * delta / n * (t / 2.0).tan().recip().abs() * 1.1 + 1e-9;
            if bound > 0.05 {
                // too close to the zero for the linearised estimate
                continue;
            }
            assert!(q.arg().abs() <= bound, "j={j} arg={} bound={bound}", q.arg());
        }
    }

    #[test]
    fn factor_outer_polynomial() {
        let g = CircleGrid::new(1 << 12).unwrap();
        let f = BoundarySignal::from_fn(g, |t| c(2.0, 0.0) + Complex64::from_polar(1.0, t)).unwrap();
        let fac = inner_outer(&f).unwrap();
        let c0 = fac.inner.values()[0];
        assert!(fac.unimodular_residual < 1e-8);
        assert!(fac.inner.values().iter().all(|v| (v - c0).norm() < 1e-8));
        assert_abs_diff_eq!(fac.outer.value_at_zero(), 2.0, epsilon = 1e-12);
        assert!(matches!(
            inner_outer(&BoundarySignal::constant(g, c(0.0, 0.0))),
            Err(LabError::ZeroFunction)
        ));
    }

    #[test]
    fn factor_singular_inner() {
        let g = CircleGrid::new(1 << 14).unwrap();
        let s = singular_inner_boundary(g, c(1.0, 0.0)).unwrap();
        let fac = inner_outer(&s).unwrap();
        let away = ArcSet::centered(0.0, 0.1).complement().node_indices(g);
        for j in away {
            assert!((fac.outer.boundary().values()[j] - c(1.0, 0.0)).norm() < 1e-6);
        }
        assert!((fac.inner.values()[g.size() / 2] - s.values()[g.size() / 2]).norm() < 1e-6);
    }

    #[test]
    fn inner_and_outer_predicates() {
        let g = CircleGrid::new(1 << 14).unwrap();
        let e = BoundarySignal::from_fn(g, |t| Complex64::from_polar(1.0, t)).unwrap();
        assert!(is_inner(&e, DEFAULT_INNER_TOL).unwrap());
        assert!(!is_outer(&e, DEFAULT_OUTER_TOL).unwrap());
        let h = BoundarySignal::from_fn(g, one_minus_z).unwrap();
        assert!(is_outer(&h, DEFAULT_OUTER_TOL).unwrap());
        assert!(!is_inner(&h, DEFAULT_INNER_TOL).unwrap());
        let zh = e.mul(&h).unwrap();
        let report = jensen_report(&zh).unwrap();
        assert!(report.value_at_zero < 1e-12);
        assert_abs_diff_eq!(report.jensen_bound, 1.0, epsilon = 2e-3);
        assert!(!is_outer(&zh, DEFAULT_OUTER_TOL).unwrap());
        let zero = BoundarySignal::constant(g, c(0.0, 0.0));
        assert!(matches!(is_inner(&zero, 1e-6), Err(LabError::ZeroFunction)));
        assert!(matches!(is_outer(&zero, 1e-2), Err(LabError::ZeroFunction)));
    }
}
