//! Truncated Toeplitz operators with analytic symbols, their adjoint kernels,
//! and Szegő least-squares distances.
//!
//! With the monomial basis `1, z, …, z^{M-1}` of `H²` the compression of
//! multiplication by `φ = Σ a_k z^k` is the lower-triangular matrix
//! `T_{jk} = a_{j-k}`.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circle_grid::fmt_f64;
use crate::error::{LabError, Result};
use crate::hardy::AnalyticRep;

/// Default relative singular value cutoff.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-10;

/// Orders `16, 32, …, 1024`.
pub fn default_order_schedule() -> Vec<usize> {
    (4..=10).map(|p| 1usize << p).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzTruncation {
    symbol: AnalyticRep,
    order: usize,
}

impl ToeplitzTruncation {
    pub fn symbol(&self) -> &AnalyticRep {
        &self.symbol
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry `T_{jk}`.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        if j < k {
            return Complex64::new(0.0, 0.0);
        }
        self.symbol
            .coefficients()
            .get(j - k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.order, self.order, |j, k| self.entry(j, k))
    }
}

/// The `M×M` truncation of `T_φ`.
pub fn toeplitz_matrix(phi: &AnalyticRep, order: usize) -> Result<ToeplitzTruncation> {
    if order == 0 {
        return Err(LabError::BadParameter("truncation order must be at least 1".into()));
    }
    Ok(ToeplitzTruncation {
        symbol: phi.truncated(order),
        order,
    })
}

/// Number of singular values of the `M×M` truncation below `tol` times the
/// largest one.
pub fn adjoint_kernel_dim(phi: &AnalyticRep, order: usize, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(LabError::BadParameter(format!("kernel tolerance {tol} must be positive")));
    }
    let t = toeplitz_matrix(phi, order)?.to_matrix();
    let sv = t.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return Ok(order);
    }
    Ok(sv.iter().filter(|&&s| s < tol * top).count())
}

/// `min ‖1 - p·f‖_{H²}` over polynomials `p` of degree `< M`.
///
/// The least-squares problem has the `(M + L - 1)×M` banded Toeplitz matrix
/// of `f` (`L` Taylor coefficients) as design matrix and is solved by
/// Householder reflections restricted to the band.
pub fn szego_distance(f: &AnalyticRep, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(LabError::BadParameter("truncation order must be at least 1".into()));
    }
    let f = f.trimmed(0.0);
    if f.is_zero() {
        return Err(LabError::ZeroFunction);
    }
    let a = f.coefficients();
    let band = a.len();
    let m = order;
    let rows = m + band - 1;
    // column-major storage, column k lives at [k*rows, (k+1)*rows)
    let mut mat = vec![Complex64::new(0.0, 0.0); rows * m];
    for k in 0..m {
        mat[k * rows + k..k * rows + k + band].copy_from_slice(a);
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); rows];
    rhs[0] = Complex64::new(1.0, 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); band];
    for k in 0..m {
        let end = (k + band).min(rows);
        let len = end - k;
        let col = &mat[k * rows + k..k * rows + end];
        let norm = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = col[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        v[..len].copy_from_slice(col);
        v[0] += phase * norm;
        let vnorm = v[..len].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v[..len].iter_mut().for_each(|x| *x /= vnorm);
        let reflect = |target: &mut [Complex64]| {
            let dot: Complex64 = v[..len].iter().zip(target.iter()).map(|(vi, ti)| vi.conj() * ti).sum();
            let scale = dot * 2.0;
            target.iter_mut().zip(&v[..len]).for_each(|(ti, vi)| *ti -= vi * scale);
        };
        for j in k..(k + band).min(m) {
            reflect(&mut mat[j * rows + k..j * rows + end]);
        }
        reflect(&mut rhs[k..end]);
    }
    Ok(rhs[m..].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
}

/// [`szego_distance`] along an increasing order schedule.
pub fn density_profile(f: &AnalyticRep, schedule: &[usize]) -> Result<Vec<(usize, f64)>> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::BadParameter("order schedule must be increasing and positive".into()));
    }
    schedule.iter().map(|&m| Ok((m, szego_distance(f, m)?))).collect()
}

/// Writes a profile as CSV with header `M,distance`.
pub fn write_density_csv<W: Write>(profile: &[(usize, f64)], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["M", "distance"])?;
    for (m, d) in profile {
        w.write_record([m.to_string(), fmt_f64(*d)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> AnalyticRep {
        AnalyticRep::real_polynomial(c)
    }

    fn cplx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Least squares through the normal equations, as an independent check.
    fn normal_equations_distance(f: &AnalyticRep, m: usize) -> f64 {
        let a = f.coefficients();
        let rows = m + a.len() - 1;
        let mat = DMatrix::from_fn(rows, m, |i, k| {
            if i >= k && i - k < a.len() {
                a[i - k]
            } else {
                cplx(0.0)
            }
        });
        let mut e0 = DVector::from_element(rows, cplx(0.0));
        e0[0] = cplx(1.0);
        let adj = mat.adjoint();
        let p = (&adj * &mat).lu().solve(&(&adj * &e0)).unwrap();
        (e0 - mat * p).norm()
    }

    #[test]
    fn matrix_examples() {
        let shift = toeplitz_matrix(&poly(&[0.0, 1.0]), 3).unwrap().to_matrix();
        let want = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).map(cplx);
        assert_eq!(shift, want);
        let t = toeplitz_matrix(&poly(&[1.0, -1.0]), 2).unwrap().to_matrix();
        assert_eq!(t, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 1.0]).map(cplx));
        let e = poly(&[1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]);
        let t = toeplitz_matrix(&e, 4).unwrap();
        for k in 0..4 {
            for j in k..4 {
                let fact: f64 = (1..=(j - k)).map(|x| x as f64).product();
                assert_abs_diff_eq!(t.entry(j, k).re, 1.0 / fact, epsilon = 1e-15);
            }
        }
        assert!(toeplitz_matrix(&e, 0).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(adjoint_kernel_dim(&poly(&[0.0, 0.0, 1.0]), 8, DEFAULT_KERNEL_TOL).unwrap(), 2);
        assert_eq!(adjoint_kernel_dim(&poly(&[1.0, -1.0]), 64, 1e-10).unwrap(), 0);
        assert_eq!(adjoint_kernel_dim(&poly(&[2.0, 1.0]), 64, 1e-10).unwrap(), 0);
        assert_eq!(adjoint_kernel_dim(&poly(&[0.0]), 5, 1e-10).unwrap(), 5);
    }

    #[test]
    fn szego_closed_forms() {
        for m in [1, 3, 7, 15, 63, 255] {
            let d = szego_distance(&poly(&[1.0, -1.0]), m).unwrap();
            assert_abs_diff_eq!(d * d, 1.0 / (m as f64 + 1.0), epsilon = 1e-12);
            assert_abs_diff_eq!(szego_distance(&poly(&[0.0, 1.0]), m).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(szego_distance(&poly(&[1.0]), m).unwrap(), 0.0, epsilon = 1e-15);
        }
        assert!(matches!(szego_distance(&poly(&[0.0, 0.0]), 4), Err(LabError::ZeroFunction)));
    }

    #[test]
    fn profile_examples() {
        let p = density_profile(&poly(&[1.0, -1.0]), &[1, 3, 7, 15]).unwrap();
        for ((_, d), want) in p.iter().zip([0.5_f64, 0.25, 0.125, 0.0625]) {
            assert_abs_diff_eq!(*d, want.sqrt(), epsilon = 1e-9);
        }
        let p = density_profile(&poly(&[0.0, 1.0, -1.0]), &default_order_schedule()).unwrap();
        assert!(p.iter().all(|&(_, d)| d >= 1.0 - 1e-12));
        assert!(density_profile(&poly(&[1.0]), &[4, 2]).is_err());
        let mut out = Vec::new();
        write_density_csv(&[(1, 0.5)], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "M,distance\n1,5.0000000000000000e-1\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn householder_agrees_with_normal_equations(
            c in prop::collection::vec(-1.0..1.0f64, 1..5), m in 1usize..24
        ) {
            let mut c = c;
            c[0] += 2.0;
            let f = poly(&c);
            let d = szego_distance(&f, m).unwrap();
            prop_assert!((d - normal_equations_distance(&f, m)).abs() < 1e-8);
        }

        #[test]
        fn profile_is_nonincreasing(c in prop::collection::vec(-1.0..1.0f64, 1..6)) {
            prop_assume!(c.iter().any(|x| x.abs() > 1e-3));
            let p = density_profile(&poly(&c), &[1, 2, 4, 8, 16, 32]).unwrap();
            prop_assert!(p.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
        }

        #[test]
        fn truncation_is_multiplicative(
            a in prop::collection::vec(-1.0..1.0f64, 1..5),
            b in prop::collection::vec(-1.0..1.0f64, 1..5),
        ) {
            let m = a.len() + b.len();
            let (fa, fb) = (poly(&a), poly(&b));
            let prod = fa.product(&fb, m);
            let lhs = toeplitz_matrix(&prod, m).unwrap().to_matrix();
            let rhs = toeplitz_matrix(&fa, m).unwrap().to_matrix() * toeplitz_matrix(&fb, m).unwrap().to_matrix();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn kernel_grows_with_order_when_symbol_vanishes_at_zero(
            c in prop::collection::vec(0.1..1.0f64, 1..4), shift in 1usize..3
        ) {
            let mut coefs = vec![0.0; shift];
            coefs.extend(c);
            let f = poly(&coefs);
            let dims: Vec<usize> = (1..12).map(|m| adjoint_kernel_dim(&f, m, 1e-10).unwrap()).collect();
            prop_assert!(dims.windows(2).all(|w| w[1] >= w[0]));
        }

        #[test]
        fn dominant_diagonal_means_trivial_kernel(c in prop::collection::vec(-1.0..1.0f64, 1..4), m in 1usize..40) {
            let off: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut coefs = vec![off + 0.5];
            coefs.extend(c);
            prop_assert_eq!(adjoint_kernel_dim(&poly(&coefs), m, 1e-10).unwrap(), 0);
        }
    }
}
