//! Linear combining of a received (or reconstructed) grid.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::estimate::ChannelEstimate;
use crate::compressor::solve::{hermitian_condition, hermitian_solve, MAX_CONDITION};
use crate::error::{invalid, Result};
use crate::signal::FrequencyGrid;

/// Per-user soft estimates; `None` marks an erased subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizedSymbols {
    pub users: Vec<Vec<Option<Complex64>>>,
}

impl EqualizedSymbols {
    pub fn erasures(&self) -> usize {
        self.users.iter().flatten().filter(|s| s.is_none()).count()
    }
}

fn check_shapes(grid: &FrequencyGrid, est: &ChannelEstimate, k: usize) -> Result<()> {
    if est.n_subcarriers() != grid.n_subcarriers() {
        return Err(invalid("estimate and grid disagree on N"));
    }
    if k == 0 || k > grid.n_antennas() || k > est.n_antennas() {
        return Err(invalid(format!(
            "antenna subset {k} outside 1..={}",
            grid.n_antennas().min(est.n_antennas())
        )));
    }
    Ok(())
}

/// Maximal-ratio combining over the first `k` antennas.
pub fn mrc_combine(grid: &FrequencyGrid, est: &ChannelEstimate, k: usize) -> Result<EqualizedSymbols> {
    check_shapes(grid, est, k)?;
    if est.n_users() != 1 {
        return Err(invalid("MRC expects a single-user channel estimate"));
    }
    let (y, h) = (grid.samples(), &est.freq_response[0]);
    let symbols = (0..grid.n_subcarriers())
        .map(|m| {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for r in 0..k {
                num += h[(m, r)].conj() * y[(m, r)];
                den += h[(m, r)].norm_sqr();
            }
            (den > f64::MIN_POSITIVE).then(|| num / den)
        })
        .collect();
    Ok(EqualizedSymbols { users: vec![symbols] })
}

/// Zero-forcing over the first `k` antennas: `x = H_m^+ y_m` per subcarrier.
pub fn zf_equalize(grid: &FrequencyGrid, est: &ChannelEstimate, k: usize) -> Result<EqualizedSymbols> {
    check_shapes(grid, est, k)?;
    let n_u = est.n_users();
    if n_u == 0 || k < n_u {
        return Err(invalid(format!("zero-forcing {n_u} users needs at least {n_u} antennas, got {k}")));
    }
    let (n, y) = (grid.n_subcarriers(), grid.samples());
    let mut users = vec![Vec::with_capacity(n); n_u];
    for m in 0..n {
        let gram = DMatrix::from_fn(n_u, n_u, |v, u| {
            (0..k).map(|r| est.freq_response[v][(m, r)].conj() * est.freq_response[u][(m, r)]).sum::<Complex64>()
        });
        let rhs = DMatrix::from_fn(n_u, 1, |v, _| {
            (0..k).map(|r| est.freq_response[v][(m, r)].conj() * y[(m, r)]).sum::<Complex64>()
        });
        let solved = if n_u == 1 {
            let den = gram[(0, 0)].re;
            (den > f64::MIN_POSITIVE).then(|| vec![rhs[(0, 0)] / den])
        } else if hermitian_condition(&gram) > MAX_CONDITION {
            None
        } else {
            hermitian_solve(&gram, &rhs).ok().map(|x| x.iter().copied().collect())
        };
        match solved {
            Some(x) => users.iter_mut().zip(x).for_each(|(out, v)| out.push(Some(v))),
            None => users.iter_mut().for_each(|out| out.push(None)),
        }
    }
    Ok(EqualizedSymbols { users })
}
