//! Built-in test functions, addressable by name.
//!
//! Each entry yields boundary samples on any grid and a Taylor series. Closed
//! forms are used where available; functions defined through their
//! log-modulus fall back to the Fourier coefficients of the synthesized
//! boundary values.

use std::f64::consts::E;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_grid::{signed_angle, BoundarySignal, CircleGrid, RealSignal};
use crate::error::{LabError, Result};
use crate::factorization::{blaschke, singular_inner_boundary, synth_outer, LOG_CLIP_FLOOR};
use crate::hardy::{fourier_coefficients, AnalyticRep};
use crate::zero_sets::resolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionClass {
    Outer,
    Inner,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub name: &'static str,
    pub class: FunctionClass,
    pub formula: &'static str,
}

const fn entry(name: &'static str, class: FunctionClass, formula: &'static str) -> Entry {
    Entry { name, class, formula }
}

use FunctionClass::{Inner, Mixed, Outer};

const ENTRIES: &[Entry] = &[
    entry("one", Outer, "1"),
    entry("one-minus-z", Outer, "1 - z"),
    entry("one-plus-z", Outer, "1 + z"),
    entry("two-plus-z", Outer, "2 + z"),
    entry("exp-z", Outer, "exp(z)"),
    entry("one-minus-z-exp-z", Outer, "(1 - z) exp(z)"),
    entry("one-minus-z-squared", Outer, "(1 - z)^2"),
    entry("z", Inner, "z"),
    entry("z-squared", Inner, "z^2"),
    entry("singular-inner-1", Inner, "exp((z + 1)/(z - 1))"),
    entry("singular-inner-i", Inner, "exp((z + i)/(z - i))"),
    entry("blaschke-half", Inner, "(1/2 - z)/(1 - z/2)"),
    entry("z-one-minus-z", Mixed, "z (1 - z)"),
    entry("blaschke-half-one-minus-z", Mixed, "(1/2 - z)/(1 - z/2) (1 - z)"),
    entry("singular-inner-1-two-plus-z", Mixed, "exp((z + 1)/(z - 1)) (2 + z)"),
    entry(
        "section6-piecewise-k",
        Outer,
        "outer with log-modulus -n on 1/(n+1) < |t| <= 1/n, 1/n near pi - 2^-n, 1 elsewhere",
    ),
    entry("example-7-3", Outer, "(1 - exp((z + i)/(z - i))) (1 - z)"),
    entry("example-7-5-f", Outer, "outer with log-modulus -(t^2 + 1) for t < 0, -t for t >= 0"),
    entry("example-7-5", Outer, "alpha - f for example-7-5-f, alpha from a grid search"),
];

/// Functions over which the two outerness oracles are compared.
pub const ORACLE_CORPUS: &[&str] = &[
    "one-minus-z",
    "one-plus-z",
    "two-plus-z",
    "exp-z",
    "one-minus-z-exp-z",
    "z",
    "z-squared",
    "singular-inner-1",
    "blaschke-half",
    "z-one-minus-z",
    "blaschke-half-one-minus-z",
    "singular-inner-1-two-plus-z",
];

pub fn entries() -> &'static [Entry] {
    ENTRIES
}

pub fn lookup(name: &str) -> Result<&'static Entry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| LabError::Unknown(name.to_string()))
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn closed_form(name: &str, z: Complex64) -> Option<Complex64> {
    let one = c(1.0);
    let b = |z| blaschke(c(0.5), z).expect("1/2 lies in the disc");
    Some(match name {
        "one" => one,
        "one-minus-z" => one - z,
        "one-plus-z" => one + z,
        "two-plus-z" => 2.0 + z,
        "exp-z" => z.exp(),
        "one-minus-z-exp-z" => (one - z) * z.exp(),
        "one-minus-z-squared" => (one - z) * (one - z),
        "z" => z,
        "z-squared" => z * z,
        "blaschke-half" => b(z),
        "z-one-minus-z" => z * (one - z),
        "blaschke-half-one-minus-z" => b(z) * (one - z),
        _ => return None,
    })
}

/// Boundary samples of the named function.
pub fn boundary(name: &str, grid: CircleGrid) -> Result<BoundarySignal> {
    lookup(name)?;
    if closed_form(name, c(0.0)).is_some() {
        return BoundarySignal::from_fn(grid, |t| {
            closed_form(name, Complex64::from_polar(1.0, t)).expect("checked above")
        });
    }
    let i = Complex64::new(0.0, 1.0);
    match name {
        "singular-inner-1" => singular_inner_boundary(grid, c(1.0)),
        "singular-inner-i" => singular_inner_boundary(grid, i),
        "singular-inner-1-two-plus-z" => {
            let s = singular_inner_boundary(grid, c(1.0))?;
            s.zip_with(&BoundarySignal::from_fn(grid, |t| 2.0 + Complex64::from_polar(1.0, t))?, |a, b| a * b)
        }
        "section6-piecewise-k" => Ok(synth_outer(&piecewise_log_modulus(grid))?.boundary().clone()),
        "example-7-3" => {
            let s = singular_inner_boundary(grid, i)?;
            BoundarySignal::new(
                grid,
                s.values()
                    .iter()
                    .zip(grid.angles())
                    .map(|(&sv, t)| (c(1.0) - sv) * (c(1.0) - Complex64::from_polar(1.0, t)))
                    .collect(),
            )
        }
        "example-7-5-f" => Ok(synth_outer(&kinked_log_modulus(grid))?.boundary().clone()),
        "example-7-5" => {
            let f = synth_outer(&kinked_log_modulus(grid))?;
            let alpha = translation_alpha(f.boundary()).alpha;
            f.boundary().map(|v| alpha - v)
        }
        _ => unreachable!("every registered name is handled"),
    }
}

/// First `len` Taylor coefficients of the named function.
///
/// Functions known only through boundary data use the Fourier coefficients
/// on `grid`, so `len` is capped at `N/2` for them.
pub fn taylor(name: &str, len: usize, grid: CircleGrid) -> Result<AnalyticRep> {
    lookup(name)?;
    if len == 0 {
        return Err(LabError::BadParameter("Taylor length must be positive".into()));
    }
    let poly = |p: &[f64]| AnalyticRep::real_polynomial(p).truncated(len);
    let exp = || AnalyticRep::new(exp_coefficients(len)).expect("finite");
    let half_blaschke = || {
        let coefs = (0..len)
            .map(|n| c(if n == 0 { 0.5 } else { -0.75 * 0.5_f64.powi(n as i32 - 1) }))
            .collect();
        AnalyticRep::new(coefs).expect("finite")
    };
    let sing = |alpha: Complex64| AnalyticRep::new(singular_inner_coefficients(alpha, len)).expect("finite");
    let one_minus_z = poly(&[1.0, -1.0]);
    Ok(match name {
        "one" => poly(&[1.0]),
        "one-minus-z" => one_minus_z,
        "one-plus-z" => poly(&[1.0, 1.0]),
        "two-plus-z" => poly(&[2.0, 1.0]),
        "exp-z" => exp(),
        "one-minus-z-exp-z" => one_minus_z.product(&exp(), len),
        "one-minus-z-squared" => poly(&[1.0, -2.0, 1.0]),
        "z" => poly(&[0.0, 1.0]),
        "z-squared" => poly(&[0.0, 0.0, 1.0]),
        "singular-inner-1" => sing(c(1.0)),
        "singular-inner-i" => sing(Complex64::new(0.0, 1.0)),
        "blaschke-half" => half_blaschke(),
        "z-one-minus-z" => poly(&[0.0, 1.0, -1.0]),
        "blaschke-half-one-minus-z" => half_blaschke().product(&one_minus_z, len),
        "singular-inner-1-two-plus-z" => sing(c(1.0)).product(&poly(&[2.0, 1.0]), len),
        _ => {
            let b = boundary(name, grid)?;
            let coefs = fourier_coefficients(b.values());
            AnalyticRep::new(coefs[..len.min(grid.size() / 2)].to_vec())?
        }
    })
}

fn exp_coefficients(len: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let mut term = 1.0;
    for n in 0..len {
        out.push(c(term));
        term /= (n + 1) as f64;
    }
    out
}

/// Taylor coefficients of `exp((z + α)/(z - α))`, `|α| = 1`.
///
/// `exp(-2w/(1 - w))` generates the Laguerre polynomials `L_n^{(-1)}(2)`, so
/// with `w = ᾱz` the coefficients are `e^{-1} L_n^{(-1)}(2) ᾱ^n`.
pub fn singular_inner_coefficients(alpha: Complex64, len: usize) -> Vec<Complex64> {
    let mut lag = Vec::with_capacity(len);
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 0..len {
        lag.push(cur);
        // (n+1) L_{n+1} = (2n + 1 + a - x) L_n - (n + a) L_{n-1}, a = -1, x = 2
        let next = ((2.0 * n as f64 - 2.0) * cur - (n as f64 - 1.0) * prev) / (n as f64 + 1.0);
        prev = cur;
        cur = next;
    }
    let conj = alpha.conj();
    let mut power = c(1.0);
    lag.into_iter()
        .map(|l| {
            let v = power * (l / E);
            power *= conj;
            v
        })
        .collect()
}

/// Log-modulus of the piecewise outer function: `-n` on
/// `1/(n+1) < |θ| ≤ 1/n`, `1/n` on `[π - 2^{-n} - 8^{-n}, π - 2^{-n}]`, and
/// `1` elsewhere; angles taken in `(-π, π]`. The value at `θ = 0` is the
/// limit `-∞`, clipped.
pub fn piecewise_log_modulus(grid: CircleGrid) -> RealSignal {
    RealSignal::from_fn(grid, |t| {
        let s = signed_angle(t);
        if s == 0.0 {
            return LOG_CLIP_FLOOR;
        }
        if s.abs() <= 1.0 {
            return -(1.0 / s.abs()).floor();
        }
        for n in 1..=60 {
            let hi = std::f64::consts::PI - 0.5_f64.powi(n);
            let lo = hi - 0.125_f64.powi(n);
            if (lo..=hi).contains(&s) {
                return 1.0 / n as f64;
            }
        }
        1.0
    })
    .expect("finite log-modulus")
}

/// Log-modulus `-(θ² + 1)` for `θ < 0` and `-θ` for `θ ≥ 0`, `θ ∈ (-π, π]`.
pub fn kinked_log_modulus(grid: CircleGrid) -> RealSignal {
    RealSignal::from_fn(grid, |t| {
        let s = signed_angle(t);
        if s < 0.0 {
            -(s * s + 1.0)
        } else {
            -s
        }
    })
    .expect("finite log-modulus")
}

/// Outcome of the unimodular search for `α` with `1 ∈ Z_T(α - f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSearch {
    pub alpha: Complex64,
    /// `min |α - f(θ_j)|` over the nodes of the window around `θ = 0`.
    pub score: f64,
    pub window: f64,
    pub candidates: usize,
}

/// Numerical search over a uniform unimodular grid plus the normalized
/// samples near `θ = 0`, minimizing the distance from `α` to the values of
/// `f` in a window of eight cells around `1`.
pub fn translation_alpha(f: &BoundarySignal) -> AlphaSearch {
    let grid = f.grid();
    let n = grid.size();
    let window = resolution(n);
    let near: Vec<Complex64> = (0..n)
        .filter(|&j| signed_angle(grid.angle(j)).abs() <= window / 2.0)
        .map(|j| f.values()[j])
        .collect();
    let score = |a: Complex64| near.iter().map(|&v| (a - v).norm()).fold(f64::INFINITY, f64::min);
    let candidates: Vec<Complex64> = grid
        .angles()
        .map(|t| Complex64::from_polar(1.0, t))
        .chain(near.iter().filter(|v| v.norm() > 0.0).map(|v| v / v.norm()))
        .collect();
    let (alpha, best) = candidates
        .iter()
        .map(|&a| (a, score(a)))
        .fold((c(1.0), f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    AlphaSearch {
        alpha,
        score: best,
        window,
        candidates: candidates.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn every_entry_builds() {
        let g = CircleGrid::new(1 << 10).unwrap();
        for e in entries() {
            let b = boundary(e.name, g).unwrap();
            assert_eq!(b.len(), g.size());
            let t = taylor(e.name, 16, g).unwrap();
            assert!((1..=16).contains(&t.len()), "{}", e.name);
        }
        assert!(matches!(lookup("nope"), Err(LabError::Unknown(_))));
        for name in ORACLE_CORPUS {
            lookup(name).unwrap();
        }
    }

    #[test]
    fn taylor_series_match_closed_forms_inside() {
        let g = CircleGrid::new(64).unwrap();
        let z = Complex64::new(0.3, -0.4);
        for name in ["exp-z", "one-minus-z-exp-z", "blaschke-half", "blaschke-half-one-minus-z"] {
            let t = taylor(name, 80, g).unwrap();
            let want = closed_form(name, z).unwrap();
            assert_abs_diff_eq!((t.evaluate(z) - want).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn singular_inner_taylor_matches_exponential() {
        for alpha in [c(1.0), Complex64::new(0.0, 1.0), Complex64::from_polar(1.0, 2.5)] {
            let t = AnalyticRep::new(singular_inner_coefficients(alpha, 400)).unwrap();
            for z in [c(0.0), Complex64::new(0.2, 0.3), Complex64::new(-0.5, 0.1)] {
                let want = ((z + alpha) / (z - alpha)).exp();
                assert_abs_diff_eq!((t.evaluate(z) - want).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn piecewise_log_modulus_values() {
        let g = CircleGrid::new(1 << 14).unwrap();
        let k = piecewise_log_modulus(g);
        assert_eq!(k.values()[0], LOG_CLIP_FLOOR);
        let at = |t: f64| k.values()[g.nearest_node(t)];
        assert_eq!(at(0.8), -1.0);
        assert_eq!(at(-0.8), -1.0);
        assert_eq!(at(0.3), -3.0);
        assert_eq!(at(2.0), 1.0);
        assert_eq!(at(std::f64::consts::PI - 0.5 - 0.06), 1.0);
        assert_eq!(at(std::f64::consts::PI - 0.25 - 0.01), 0.5);
    }

    #[test]
    fn alpha_search_hits_node_zero() {
        let g = CircleGrid::new(1 << 12).unwrap();
        let f = synth_outer(&kinked_log_modulus(g)).unwrap();
        let a = translation_alpha(f.boundary());
        assert_abs_diff_eq!(a.alpha.norm(), 1.0, epsilon = 1e-12);
        assert!(a.score < 1e-12);
    }
}
