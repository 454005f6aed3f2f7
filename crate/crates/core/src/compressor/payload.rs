use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Shape of a decomposition: block length, antennas carried, users and taps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PayloadDims {
    pub n: usize,
    pub n_r: usize,
    pub n_u: usize,
    pub taps: usize,
}

impl PayloadDims {
    /// Complex samples on the wire: `N_u (N + L N_r)`.
    pub fn sample_count(&self) -> usize {
        self.n_u * (self.n + self.taps * self.n_r)
    }
}

/// What the radio head ships for one block: per-user data diagonals and the
/// stacked `(L N_u) x N_r` channel factor.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedPayload {
    pub x_hat: Vec<Vec<Complex64>>,
    pub h_hat: DMatrix<Complex64>,
    pub iterations: usize,
    pub residual: f64,
    pub dims: PayloadDims,
}

impl CompressedPayload {
    pub fn new(
        x_hat: Vec<Vec<Complex64>>,
        h_hat: DMatrix<Complex64>,
        iterations: usize,
        residual: f64,
    ) -> Result<Self> {
        let n_u = x_hat.len();
        if n_u == 0 {
            return Err(invalid("payload needs at least one user"));
        }
        let n = x_hat[0].len();
        if n == 0 || x_hat.iter().any(|x| x.len() != n) {
            return Err(invalid("user diagonals must share a nonzero length"));
        }
        if !h_hat.nrows().is_multiple_of(n_u) || h_hat.nrows() == 0 || h_hat.ncols() == 0 {
            return Err(invalid("channel factor rows must be a positive multiple of the user count"));
        }
        let dims = PayloadDims { n, n_r: h_hat.ncols(), n_u, taps: h_hat.nrows() / n_u };
        Ok(CompressedPayload { x_hat, h_hat, iterations, residual, dims })
    }

    pub fn is_multi_user(&self) -> bool {
        self.dims.n_u > 1
    }

    pub fn sample_count(&self) -> usize {
        self.x_hat.iter().map(Vec::len).sum::<usize>() + self.h_hat.len()
    }

    /// `L x N_r` block of user `u`.
    pub fn user_channel(&self, u: usize) -> DMatrix<Complex64> {
        let l = self.dims.taps;
        self.h_hat.rows(u * l, l).into_owned()
    }

    /// Keeps only the channel columns of the first `k` antennas.
    pub fn restrict_antennas(&self, k: usize) -> Result<CompressedPayload> {
        if k == 0 || k > self.dims.n_r {
            return Err(invalid(format!("antenna subset {k} outside 1..={}", self.dims.n_r)));
        }
        let mut out = self.clone();
        out.h_hat = self.h_hat.columns(0, k).into_owned();
        out.dims.n_r = k;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_count_matches_formula() {
        let p = CompressedPayload::new(
            vec![vec![Complex64::default(); 16]; 3],
            DMatrix::zeros(3 * 2, 5),
            0,
            1.0,
        )
        .unwrap();
        assert_eq!(p.dims, PayloadDims { n: 16, n_r: 5, n_u: 3, taps: 2 });
        assert_eq!(p.sample_count(), 3 * (16 + 2 * 5));
        assert_eq!(p.sample_count(), p.dims.sample_count());
        let s = p.restrict_antennas(2).unwrap();
        assert_eq!(s.sample_count(), 3 * (16 + 2 * 2));
        assert!(p.restrict_antennas(6).is_err());
    }

    #[test]
    fn rejects_inconsistent_shapes() {
        assert!(CompressedPayload::new(vec![], DMatrix::zeros(2, 2), 0, 0.0).is_err());
        assert!(CompressedPayload::new(
            vec![vec![Complex64::default(); 4], vec![Complex64::default(); 3]],
            DMatrix::zeros(2, 2),
            0,
            0.0
        )
        .is_err());
        assert!(CompressedPayload::new(vec![vec![Complex64::default(); 4]; 2], DMatrix::zeros(3, 2), 0, 0.0).is_err());
    }
}
