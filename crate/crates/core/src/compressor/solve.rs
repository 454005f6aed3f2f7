//! Normal-equation solves used by both alternating half-steps.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::dft::PartialDft;
use crate::error::{invalid, Error, Result};
use crate::signal::FrequencyGrid;

/// Condition estimate above which a normal-equation matrix counts as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Problems at least this large (N * N_r * L multiply-adds) compute `U` and
/// `V` on separate threads.
const PARALLEL_WORK: usize = 1 << 20;

/// Ratio of extreme eigenvalues of a Hermitian PSD matrix; infinite when
/// the smallest is not positive.
pub fn hermitian_condition(u: &DMatrix<Complex64>) -> f64 {
    let eig = SymmetricEigen::new(u.clone()).eigenvalues;
    let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if max <= 0.0 || min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `U X = V` for Hermitian positive-definite `U`.
pub fn hermitian_solve(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let condition = hermitian_condition(u);
    if condition > MAX_CONDITION {
        return Err(Error::RankDeficient { condition });
    }
    let chol = Cholesky::new(u.clone()).ok_or(Error::RankDeficient { condition })?;
    Ok(chol.solve(v))
}

/// Minimum-norm solution `U^+ V` for Hermitian PSD `U`, via its eigendecomposition.
pub fn hermitian_pinv_solve(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(u.clone());
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let cutoff = max / MAX_CONDITION;
    let inv = eig
        .eigenvalues
        .map(|l| if l > cutoff && l > 0.0 { Complex64::new(1.0 / l, 0.0) } else { Complex64::new(0.0, 0.0) });
    let q = &eig.eigenvectors;
    q * DMatrix::from_diagonal(&inv) * (q.adjoint() * v)
}

/// `F_L^H X^H` for stacked users: row `u * L + l` holds `conj(x_u(m) F(m, l))`.
pub(crate) fn stacked_design_adjoint(xs: &[Vec<Complex64>], dft: &PartialDft) -> DMatrix<Complex64> {
    let taps = dft.taps();
    DMatrix::from_fn(xs.len() * taps, dft.n(), |row, m| {
        let (u, l) = (row / taps, row % taps);
        (xs[u][m] * dft.at(m, l)).conj()
    })
}

/// Normal-equation pieces `(U, V) = (A^H A, A^H Y)` given `A^H`.
pub(crate) fn normal_equations(
    design_adj: &DMatrix<Complex64>,
    y: &DMatrix<Complex64>,
) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let gram = || design_adj * design_adj.adjoint();
    let project = || design_adj * y;
    if design_adj.len() * y.ncols() >= PARALLEL_WORK {
        std::thread::scope(|s| {
            let u = s.spawn(gram);
            let v = project();
            (u.join().expect("gram worker panicked"), v)
        })
    } else {
        (gram(), project())
    }
}

/// Least-squares channel update `(F_L^H X^H X F_L)^{-1} F_L^H X^H Y_f`.
///
/// Three steps: store `F_L^H X^H` (`L N` products since `X` is diagonal),
/// form `U` and `V` independently, then solve `U H = V`.
pub fn fast_h_update(
    x_diag: &[Complex64],
    dft: &PartialDft,
    grid: &FrequencyGrid,
) -> Result<DMatrix<Complex64>> {
    if x_diag.len() != grid.n_subcarriers() || dft.n() != grid.n_subcarriers() {
        return Err(invalid("data diagonal, DFT and grid disagree on N"));
    }
    let design_adj = stacked_design_adjoint(std::slice::from_ref(&x_diag.to_vec()), dft);
    let (u, v) = normal_equations(&design_adj, grid.samples());
    hermitian_solve(&u, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SVD;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::signal::channel::complex_gaussian;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(r, c, |_, _| complex_gaussian(rng, 1.0))
    }

    #[test]
    fn scalar_case_with_unit_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let y = random_matrix(&mut rng, 8, 3);
        let grid = FrequencyGrid::new(y.clone()).unwrap();
        let dft = PartialDft::new(8, 1);
        let h = fast_h_update(&[Complex64::new(1.0, 0.0); 8], &dft, &grid).unwrap();
        // U = N, V = column sums.
        for r in 0..3 {
            let want = y.column(r).sum() / 8.0;
            assert!((h[(0, r)] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn matches_svd_least_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (n, l, n_r) = (32, 4, 8);
        let x: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng, 1.0)).collect();
        let y = random_matrix(&mut rng, n, n_r);
        let dft = PartialDft::new(n, l);
        let fast = fast_h_update(&x, &dft, &FrequencyGrid::new(y.clone()).unwrap()).unwrap();

        let a = DMatrix::from_fn(n, l, |m, k| x[m] * dft.at(m, k));
        let direct = SVD::new(a, true, true).solve(&y, 1e-14).unwrap();
        let rel = (&fast - &direct).norm() / direct.norm();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn zero_data_is_rank_deficient() {
        let grid = FrequencyGrid::new(DMatrix::from_element(8, 2, Complex64::new(1.0, 0.0))).unwrap();
        let err = fast_h_update(&[Complex64::new(0.0, 0.0); 8], &PartialDft::new(8, 2), &grid);
        assert!(matches!(err, Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn pinv_solve_is_minimum_norm() {
        // U = diag(2, 0): the null direction gets no weight.
        let u = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        let v = DMatrix::from_column_slice(2, 1, &[Complex64::new(4.0, 2.0), Complex64::new(0.0, 0.0)]);
        let x = hermitian_pinv_solve(&u, &v);
        assert!((x[(0, 0)] - Complex64::new(2.0, 1.0)).norm() < 1e-14);
        assert!(x[(1, 0)].norm() < 1e-14);
        assert!(hermitian_condition(&u).is_infinite());
    }
}
