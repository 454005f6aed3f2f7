//! Rank-`L` truncated-SVD baseline, applied in the frequency domain without
//! mean-centering.

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::signal::FrequencyGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PcaDims {
    pub n: usize,
    pub n_r: usize,
    pub rank: usize,
}

impl PcaDims {
    pub fn sample_count(&self) -> usize {
        self.rank * (self.n + self.n_r)
    }
}

/// `scores` (`N x L`, singular values folded in) times `components` (`L x N_r`).
#[derive(Debug, Clone, PartialEq)]
pub struct PcaPayload {
    pub scores: DMatrix<Complex64>,
    pub components: DMatrix<Complex64>,
    pub dims: PcaDims,
}

impl PcaPayload {
    pub fn new(scores: DMatrix<Complex64>, components: DMatrix<Complex64>) -> Result<Self> {
        if scores.ncols() != components.nrows() || scores.ncols() == 0 {
            return Err(invalid("scores and components disagree on rank"));
        }
        if scores.nrows() == 0 || components.ncols() == 0 {
            return Err(invalid("empty PCA payload"));
        }
        let dims = PcaDims { n: scores.nrows(), n_r: components.ncols(), rank: scores.ncols() };
        Ok(PcaPayload { scores, components, dims })
    }

    pub fn sample_count(&self) -> usize {
        self.scores.len() + self.components.len()
    }

    pub fn restrict_antennas(&self, k: usize) -> Result<PcaPayload> {
        if k == 0 || k > self.dims.n_r {
            return Err(invalid(format!("antenna subset {k} outside 1..={}", self.dims.n_r)));
        }
        PcaPayload::new(self.scores.clone(), self.components.columns(0, k).into_owned())
    }
}

pub fn pca_compress(grid: &FrequencyGrid, rank: usize) -> Result<PcaPayload> {
    let (n, n_r) = (grid.n_subcarriers(), grid.n_antennas());
    if rank == 0 || rank > n.min(n_r) {
        return Err(invalid(format!("rank {rank} outside 1..={}", n.min(n_r))));
    }
    let svd = SVD::new(grid.samples().clone(), true, true);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let keep = &order[..rank];

    let scores = DMatrix::from_fn(n, rank, |m, k| u[(m, keep[k])] * svd.singular_values[keep[k]]);
    let components = DMatrix::from_fn(rank, n_r, |k, r| v_t[(keep[k], r)]);
    PcaPayload::new(scores, components)
}

pub fn pca_reconstruct(p: &PcaPayload) -> FrequencyGrid {
    FrequencyGrid::from_matrix_unchecked(&p.scores * &p.components)
}
