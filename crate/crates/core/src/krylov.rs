//! Plain conjugate gradient: no preconditioner, no restarts, so iteration
//! counts track `sqrt(κ)` directly.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, DenseMatrix};
use crate::operator::{Base, LowRankUpdate, PerturbedOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgReport {
    pub iterations: usize,
    /// `‖b - A x‖ / ‖b‖` of the returned iterate.
    pub final_residual: f64,
    pub converged: bool,
}

pub fn cg_solve(
    op: &PerturbedOperator,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, CgReport)> {
    cg_solve_observed(op, b, tol, max_iter, |_, _| {})
}

/// As [`cg_solve`], calling `observe(iteration, x)` after every update.
pub fn cg_solve_observed(
    op: &PerturbedOperator,
    b: &[f64],
    tol: f64,
    max_iter: usize,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<(Vec<f64>, CgReport)> {
    let n = op.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    if !op.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let b_norm = norm2(b);
    if !(b_norm > 0.0) {
        return Err(Error::Precondition("right-hand side must be nonzero".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be > 0, got {tol}")));
    }

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    while iterations < max_iter && rr.sqrt() > tol * b_norm {
        op.apply_into(&p, &mut ap)?;
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NotSpd(pap));
        }
        let alpha = rr / pap;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        iterations += 1;
        observe(iterations, &x);
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        rr = rr_next;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }

    op.apply_into(&x, &mut ap)?;
    let true_res: Vec<f64> = b.iter().zip(&ap).map(|(bi, ai)| bi - ai).collect();
    let final_residual = norm2(&true_res) / b_norm;
    Ok((
        x,
        CgReport {
            iterations,
            final_residual,
            converged: final_residual <= tol,
        },
    ))
}

/// `n` eigenvalues at the Chebyshev–Lobatto points of `[1, κ]`, endpoints
/// included. CG on such a spectrum needs close to the worst-case
/// `sqrt(κ)`-proportional iteration count.
pub fn chebyshev_spectrum(n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| {
            let theta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
            0.5 * (kappa + 1.0) - 0.5 * (kappa - 1.0) * theta.cos()
        })
        .collect()
}

/// `n` evenly spaced eigenvalues in `[1, κ]`.
pub fn linear_spectrum(n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| 1.0 + (kappa - 1.0) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `diag(1, ..., 1, 0) + g gᵀ` together with its exact condition number.
///
/// The update only mixes `e_n` with the direction of `g` in the leading
/// block, so apart from `n - 2` unit eigenvalues the spectrum is that of the
/// `2 x 2` matrix `[[1 + a, sqrt(a) b], [sqrt(a) b, b²]]`, `a = Σ_{i<n} g_i²`,
/// `b = g_n`.
pub fn smoothed_spd_system(g: &[f64]) -> Result<(PerturbedOperator, f64)> {
    let n = g.len();
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    let mut d = vec![1.0; n];
    d[n - 1] = 0.0;
    let op = PerturbedOperator::new(
        Base::Diagonal(d),
        Some(LowRankUpdate::symmetric(DenseMatrix::from_row_major(n, 1, g.to_vec())?)?),
    )?;
    let a = dot(&g[..n - 1], &g[..n - 1]);
    let b = g[n - 1];
    let (p, q, r) = (1.0 + a, a.sqrt() * b, b * b);
    let half_tr = 0.5 * (p + r);
    let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    let hi = half_tr + disc;
    // Product of the two eigenvalues is p r - q² = b²; avoids cancellation.
    let lo = if hi > 0.0 { b * b / hi } else { 0.0 };
    let (lmax, lmin) = if n > 2 { (hi.max(1.0), lo.min(1.0)) } else { (hi, lo) };
    if !(lmin > 0.0) {
        return Err(Error::SingularMatrix);
    }
    Ok((op, lmax / lmin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{condition_number, svd_values};
    use crate::rng::Seed;

    #[test]
    fn identity_one_iteration() {
        let op = PerturbedOperator::unperturbed(Base::Diagonal(vec![1.0; 5])).unwrap();
        let b = [1.0, -2.0, 3.0, 0.5, 0.0];
        let (x, rep) = cg_solve(&op, &b, 1e-12, 10).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged);
        assert_eq!(x, b.to_vec());
    }

    #[test]
    fn rejects_nonsymmetric() {
        let up = LowRankUpdate::rank_one(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let op = PerturbedOperator::new(Base::Diagonal(vec![1.0, 1.0]), Some(up)).unwrap();
        assert!(matches!(cg_solve(&op, &[1.0, 1.0], 1e-8, 10), Err(Error::NotSymmetric)));
    }

    #[test]
    fn detects_indefinite() {
        let op = PerturbedOperator::unperturbed(Base::Diagonal(vec![1.0, -1.0])).unwrap();
        assert!(matches!(cg_solve(&op, &[0.0, 1.0], 1e-8, 10), Err(Error::NotSpd(_))));
    }

    #[test]
    fn zero_rhs_rejected() {
        let op = PerturbedOperator::unperturbed(Base::Diagonal(vec![1.0, 1.0])).unwrap();
        assert!(cg_solve(&op, &[0.0, 0.0], 1e-8, 10).is_err());
    }

    #[test]
    fn iteration_cap_reports_unconverged() {
        let d: Vec<f64> = (1..=50).map(|i| i as f64 * i as f64).collect();
        let op = PerturbedOperator::unperturbed(Base::Diagonal(d)).unwrap();
        let (_, rep) = cg_solve(&op, &[1.0; 50], 1e-12, 3).unwrap();
        assert_eq!(rep.iterations, 3);
        assert!(!rep.converged);
    }

    #[test]
    fn dense_spd_solution() {
        let a = DenseMatrix::from_fn(6, 6, |i, j| if i == j { 4.0 } else { 1.0 / (1 + i + j) as f64 });
        let op = PerturbedOperator::unperturbed(Base::Dense(a.clone())).unwrap();
        let b = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let (x, rep) = cg_solve(&op, &b, 1e-12, 100).unwrap();
        assert!(rep.converged);
        let ax = a.matvec(&x).unwrap();
        let res: Vec<f64> = ax.iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(norm2(&res) <= 1e-12 * norm2(&b));
    }

    #[test]
    fn spectra_span_interval() {
        for spec in [chebyshev_spectrum(50, 1e3), linear_spectrum(50, 1e3)] {
            let lo = spec.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = spec.iter().cloned().fold(0.0, f64::max);
            assert!(lo >= 1.0 && hi <= 1e3 + 1e-9);
            assert!((hi / lo - 1e3).abs() < 1e-9);
        }
    }

    #[test]
    fn smoothed_kappa_matches_svd() {
        for t in 0..5 {
            let g = Seed::new(8, 0).trial(t).rng().gaussian_vec(12);
            let (op, kappa) = smoothed_spd_system(&g).unwrap();
            let exact = condition_number(&svd_values(&op.to_dense().unwrap()).unwrap())
                .unwrap()
                .finite()
                .unwrap();
            assert!((kappa / exact - 1.0).abs() < 1e-8, "{kappa} vs {exact}");
        }
    }

    #[test]
    fn smoothed_system_cg_within_kappa_budget() {
        for t in 0..10 {
            let g = Seed::new(9, 0).trial(t).rng().gaussian_vec(200);
            let (op, kappa) = smoothed_spd_system(&g).unwrap();
            let (_, rep) = cg_solve(&op, &vec![1.0; 200], 1e-8, 10_000).unwrap();
            assert!(rep.converged);
            assert!(rep.iterations as f64 <= 20.0 * kappa.sqrt());
        }
    }
}
