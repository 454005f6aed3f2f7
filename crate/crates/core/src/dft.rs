//! Partial DFT matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// The first `L` columns of the unnormalized `N`-point DFT matrix.
///
/// Entry `(m, l)` is `exp(-j 2 pi m l / N)`, so `F_L * H_t` is the per-antenna
/// FFT of the zero-padded tap matrix `H_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialDft {
    matrix: DMatrix<Complex64>,
}

impl PartialDft {
    pub fn new(n: usize, taps: usize) -> Self {
        // Exponents are reduced mod N before evaluating the twiddle so large
        // products m*l do not lose phase precision.
        let twiddles: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            .collect();
        let matrix = DMatrix::from_fn(n, taps, |m, l| twiddles[(m * l) % n]);
        PartialDft { matrix }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn taps(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    #[inline]
    pub fn at(&self, m: usize, l: usize) -> Complex64 {
        self.matrix[(m, l)]
    }

    /// `F_L * taps`: maps an `L x N_r` time-domain tap matrix to its `N x N_r`
    /// frequency response.
    pub fn apply(&self, taps: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.matrix * taps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_and_column_norms() {
        let f = PartialDft::new(16, 5);
        for l in 0..5 {
            let norm2: f64 = (0..16).map(|m| f.at(m, l).norm_sqr()).sum();
            assert!((norm2 - 16.0).abs() < 1e-12);
        }
        let expected = Complex64::from_polar(1.0, -2.0 * PI * 3.0 * 4.0 / 16.0);
        assert!((f.at(3, 4) - expected).norm() < 1e-14);
        assert_eq!(f.at(0, 4), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn columns_are_orthogonal() {
        let f = PartialDft::new(12, 4);
        let gram = f.matrix().adjoint() * f.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 12.0 } else { 0.0 };
                assert!((gram[(i, j)] - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
