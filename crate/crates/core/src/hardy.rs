//! Transform engine: Fourier coefficients on the circle grid, analytic
//! projection, conjugate function, Herglotz and Poisson integrals, Taylor
//! evaluation inside the disc, and norms.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::circle_grid::{BoundarySignal, CircleGrid, RealSignal};
use crate::error::{LabError, Result};

/// Default relative tolerance on negative-frequency energy.
pub const DEFAULT_LEAK_TOL: f64 = 1e-8;
/// Points with `|z|` above this are treated as lying on the circle.
pub const MAX_INTERIOR_RADIUS: f64 = 1.0 - 1e-9;

/// Discrete Fourier coefficients `c_n = (1/N) Σ_j f(θ_j) e^{-inθ_j}`.
///
/// Index `n < N/2` holds frequency `n`; index `N - n` holds frequency `-n`.
pub fn fourier_coefficients(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`fourier_coefficients`]: `f(θ_j) = Σ_n c_n e^{inθ_j}`.
pub fn synthesize(coefficients: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coefficients.to_vec();
    FftPlanner::<f64>::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

/// Truncated Taylor series `f(z) = Σ a_k z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticRep {
    coefficients: Vec<Complex64>,
}

impl AnalyticRep {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(LabError::BadParameter("empty coefficient list".into()));
        }
        if let Some(j) = coefficients
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(LabError::NonFinite(j));
        }
        Ok(Self { coefficients })
    }

    /// Polynomial with real coefficients, lowest degree first.
    pub fn real_polynomial(coefficients: &[f64]) -> Self {
        Self {
            coefficients: coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.norm() == 0.0)
    }

    /// Drops trailing coefficients below `tol` times the largest one.
    pub fn trimmed(&self, tol: f64) -> Self {
        let max = self.coefficients.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
        let keep = self
            .coefficients
            .iter()
            .rposition(|c| c.norm() > tol * max)
            .map_or(1, |p| p + 1);
        Self {
            coefficients: self.coefficients[..keep].to_vec(),
        }
    }

    /// Keeps at most `len` leading coefficients.
    pub fn truncated(&self, len: usize) -> Self {
        Self {
            coefficients: self.coefficients[..len.clamp(1, self.len())].to_vec(),
        }
    }

    /// Cauchy product, truncated to `max_len` coefficients.
    pub fn product(&self, other: &AnalyticRep, max_len: usize) -> Self {
        let len = (self.len() + other.len() - 1).min(max_len.max(1));
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, &a) in self.coefficients.iter().enumerate().take(len) {
            for (j, &b) in other.coefficients.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Self { coefficients: out }
    }

    /// `sqrt(Σ |a_k|²)`.
    pub fn h2_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Boundary samples on `grid`; coefficients beyond `N` alias onto
    /// `k mod N`.
    pub fn boundary(&self, grid: CircleGrid) -> BoundarySignal {
        let n = grid.size();
        let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
        for (k, &a) in self.coefficients.iter().enumerate() {
            spectrum[k % n] += a;
        }
        BoundarySignal::new(grid, synthesize(&spectrum))
            .expect("finite coefficients give finite samples")
    }

    /// Horner evaluation of the Taylor polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rep: AnalyticRep = serde_json::from_str(text)?;
        Self::new(rep.coefficients)
    }
}

/// Taylor coefficients `a_k = c_k`, `0 ≤ k < N/2`, of boundary data that is
/// of Hardy class at this resolution.
///
/// Fails with [`LabError::NotAnalytic`] when the negative-frequency energy
/// (Nyquist counted half) exceeds `leak_tol` times the total energy.
pub fn analytic_projection(f: &BoundarySignal, leak_tol: f64) -> Result<AnalyticRep> {
    let c = fourier_coefficients(f.values());
    let n = c.len();
    let half = n / 2;
    let total: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let negative: f64 =
        c[half + 1..].iter().map(|x| x.norm_sqr()).sum::<f64>() + 0.5 * c[half].norm_sqr();
    if total > 0.0 && negative > leak_tol * total {
        return Err(LabError::NotAnalytic {
            leak: negative / total,
            tol: leak_tol,
        });
    }
    AnalyticRep::new(c[..half].to_vec())
}

/// Conjugate (Hilbert) transform on the circle: Fourier multiplier
/// `-i·sgn(n)`, with the mean and Nyquist terms sent to zero.
pub fn conjugate_function(k: &RealSignal) -> RealSignal {
    let n = k.grid().size();
    let half = n / 2;
    let mut c = fourier_coefficients(k.to_complex().values());
    let minus_i = Complex64::new(0.0, -1.0);
    c[0] = Complex64::new(0.0, 0.0);
    c[half] = Complex64::new(0.0, 0.0);
    for (idx, v) in c.iter_mut().enumerate() {
        if (1..half).contains(&idx) {
            *v *= minus_i;
        } else if idx > half {
            *v *= -minus_i;
        }
    }
    let values = synthesize(&c).into_iter().map(|v| v.re).collect();
    RealSignal::new(k.grid(), values).expect("transform of finite data is finite")
}

fn check_interior(z: Complex64) -> Result<()> {
    if !(z.norm() <= MAX_INTERIOR_RADIUS) {
        return Err(LabError::PointOnBoundary(z));
    }
    Ok(())
}

/// Node-mean quadrature of `(1/2π) ∫ S(z,θ) k(θ) dθ` with the Herglotz kernel
/// `S(z,θ) = (e^{iθ}+z)/(e^{iθ}-z)`.
pub fn herglotz_integral(k: &RealSignal, z: Complex64) -> Result<Complex64> {
    check_interior(z)?;
    let grid = k.grid();
    let sum = k
        .values()
        .iter()
        .enumerate()
        .fold(Complex64::new(0.0, 0.0), |acc, (j, &kj)| {
            let w = grid.point(j);
            acc + (w + z) / (w - z) * kj
        });
    Ok(sum / grid.size() as f64)
}

/// Harmonic (Poisson) extension of `k` evaluated at `z`.
pub fn poisson_integral(k: &RealSignal, z: Complex64) -> Result<f64> {
    check_interior(z)?;
    let grid = k.grid();
    let r2 = z.norm_sqr();
    let sum: f64 = k
        .values()
        .iter()
        .enumerate()
        .map(|(j, &kj)| (1.0 - r2) / (grid.point(j) - z).norm_sqr() * kj)
        .sum();
    Ok(sum / grid.size() as f64)
}

/// Horner evaluation of `f` at `z`.
pub fn evaluate(f: &AnalyticRep, z: Complex64) -> Complex64 {
    f.evaluate(z)
}

/// Values `f(r e^{iθ})` along an increasing radius schedule in `(0, 1)`.
///
/// No limit is extrapolated; callers judge convergence from the trace.
pub fn radial_trace(f: &AnalyticRep, theta: f64, schedule: &[f64]) -> Result<Vec<Complex64>> {
    if schedule.iter().any(|&r| !(r > 0.0 && r < 1.0))
        || schedule.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(LabError::BadParameter(
            "radius schedule must be increasing in (0, 1)".into(),
        ));
    }
    Ok(schedule
        .iter()
        .map(|&r| f.evaluate(Complex64::from_polar(r, theta)))
        .collect())
}

/// Largest modulus over the nodes.
pub fn sup_norm(f: &BoundarySignal) -> f64 {
    f.values().iter().fold(0.0, |m, v| m.max(v.norm()))
}

/// Root mean square modulus over the nodes.
pub fn h2_norm(f: &BoundarySignal) -> f64 {
    (f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64).sqrt()
}
