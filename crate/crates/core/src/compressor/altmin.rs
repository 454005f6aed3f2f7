//! Alternating least-squares blind deconvolution of a received grid into
//! diagonal data factors and a time-domain channel factor.
//!
//! Each iteration solves for the channel with the data fixed, then for every
//! subcarrier's data with the channel fixed. Both half-steps are exact
//! least-squares minimizers so the residual never increases. The single-user
//! solver is the `N_u = 1` case of the same engine.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::payload::CompressedPayload;
use super::solve::{hermitian_condition, hermitian_pinv_solve, hermitian_solve, normal_equations, stacked_design_adjoint, MAX_CONDITION};
use crate::dft::PartialDft;
use crate::error::{degenerate, invalid, Error, Result};
use crate::signal::FrequencyGrid;

pub const DEFAULT_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_MAX_ITER: usize = 10;

/// How the data diagonals are seeded.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Init {
    /// Columns `0..N_u` of the grid. A column with negligible energy is
    /// swapped for the strongest unused one.
    #[default]
    LeadingColumns,
    /// Explicit column indices, one per user.
    Columns(Vec<usize>),
    /// Explicit starting diagonals, one per user.
    Diagonals(Vec<Vec<Complex64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AltMinOptions {
    pub taps: usize,
    pub users: usize,
    pub tolerance: f64,
    pub max_iter: usize,
    pub init: Init,
}

impl AltMinOptions {
    pub fn single_user(taps: usize) -> Self {
        AltMinOptions { taps, users: 1, tolerance: DEFAULT_TOLERANCE, max_iter: DEFAULT_MAX_ITER, init: Init::default() }
    }

    pub fn multi_user(taps: usize, users: usize) -> Self {
        AltMinOptions { users, ..Self::single_user(taps) }
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Converged,
    /// Hit the iteration cap with the residual still at or above tolerance.
    NotConverged,
}

/// Relative residuals logged after each half-step of one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub after_h: f64,
    pub after_x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub payload: CompressedPayload,
    pub status: Convergence,
    pub history: Vec<IterationRecord>,
}

impl Decomposition {
    pub fn converged(&self) -> bool {
        self.status == Convergence::Converged
    }

    /// `(iteration, residual)` pairs. Row 0 is the starting point, where no
    /// channel estimate exists yet and the reconstruction is zero.
    pub fn residual_trace(&self) -> Vec<(usize, f64)> {
        std::iter::once((0, 1.0))
            .chain(self.history.iter().map(|r| (r.iteration, r.after_x)))
            .collect()
    }
}

pub fn compress_su(grid: &FrequencyGrid, taps: usize, tolerance: f64, max_iter: usize) -> Result<Decomposition> {
    decompose(grid, &AltMinOptions::single_user(taps).tolerance(tolerance).max_iter(max_iter))
}

pub fn compress_mu(
    grid: &FrequencyGrid,
    taps: usize,
    users: usize,
    tolerance: f64,
    max_iter: usize,
) -> Result<Decomposition> {
    decompose(grid, &AltMinOptions::multi_user(taps, users).tolerance(tolerance).max_iter(max_iter))
}

fn validate(grid: &FrequencyGrid, opts: &AltMinOptions) -> Result<()> {
    let (n, n_r) = (grid.n_subcarriers(), grid.n_antennas());
    let (l, n_u) = (opts.taps, opts.users);
    if l == 0 || n_u == 0 {
        return Err(invalid("channel length and user count must be positive"));
    }
    if !(opts.tolerance > 0.0) {
        return Err(invalid(format!("tolerance {} must be positive", opts.tolerance)));
    }
    if n_u == 1 {
        if l >= n.min(n_r) {
            return Err(invalid(format!("need L < min(N, N_r); got L = {l}, N = {n}, N_r = {n_r}")));
        }
    } else {
        if l * n_u >= n {
            return Err(invalid(format!("need L N_u < N; got {l} * {n_u} >= {n}")));
        }
        if n_u > n_r {
            return Err(invalid(format!("need N_u <= N_r; got {n_u} > {n_r}")));
        }
    }
    Ok(())
}

fn initial_diagonals(grid: &FrequencyGrid, opts: &AltMinOptions, total: f64) -> Result<Vec<Vec<Complex64>>> {
    let y = grid.samples();
    let (n, n_r, n_u) = (grid.n_subcarriers(), grid.n_antennas(), opts.users);
    let column = |c: usize| y.column(c).iter().copied().collect::<Vec<_>>();
    let diags = match &opts.init {
        Init::LeadingColumns => {
            let norms: Vec<f64> = (0..n_r).map(|c| y.column(c).norm()).collect();
            let dead = 1e-6 * total / (n_r as f64).sqrt();
            let mut chosen: Vec<usize> = (0..n_u).collect();
            for slot in 0..n_u {
                if norms[chosen[slot]] < dead {
                    let best = (0..n_r)
                        .filter(|c| !chosen.contains(c))
                        .max_by(|a, b| norms[*a].total_cmp(&norms[*b]));
                    if let Some(best) = best {
                        chosen[slot] = best;
                    }
                }
            }
            chosen.into_iter().map(column).collect()
        }
        Init::Columns(cols) => {
            if cols.len() != n_u || cols.iter().any(|&c| c >= n_r) {
                return Err(invalid("need one in-range initialization column per user"));
            }
            cols.iter().map(|&c| column(c)).collect()
        }
        Init::Diagonals(d) => {
            if d.len() != n_u || d.iter().any(|x| x.len() != n) {
                return Err(invalid("need one length-N initial diagonal per user"));
            }
            d.clone()
        }
    };
    for d in &diags {
        let norm = d.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-12 * total {
            return Err(degenerate("initialization column carries no energy"));
        }
    }
    Ok(diags)
}

/// Runs the alternating minimization described by `opts` on `grid`.
pub fn decompose(grid: &FrequencyGrid, opts: &AltMinOptions) -> Result<Decomposition> {
    validate(grid, opts)?;
    let total = grid.frobenius_norm();
    if total == 0.0 {
        return Err(degenerate("received grid is all zero"));
    }
    let y = grid.samples();
    let (n, n_r, n_u, l) = (grid.n_subcarriers(), grid.n_antennas(), opts.users, opts.taps);
    let dft = PartialDft::new(n, l);

    let mut x = initial_diagonals(grid, opts, total)?;
    let mut h = DMatrix::zeros(l * n_u, n_r);
    let mut residual = 1.0;
    let mut history = Vec::with_capacity(opts.max_iter);
    let mut status = if residual < opts.tolerance { Convergence::Converged } else { Convergence::NotConverged };

    let mut b = frequency_factors(&dft, &h, n_u);
    while status == Convergence::NotConverged && history.len() < opts.max_iter {
        // Each half-step is an exact minimizer, so a computed increase is
        // rounding noise at a stationary point; keep the current factor then.
        let h_next = channel_update(&x, &dft, y)?;
        let b_next = frequency_factors(&dft, &h_next, n_u);
        let mut after_h = relative_residual(y, &x, &b_next, total);
        if after_h <= residual {
            (h, b) = (h_next, b_next);
        } else {
            after_h = residual;
        }
        let mut x_next = x.clone();
        data_update(y, &b, &mut x_next);
        let after_x = relative_residual(y, &x_next, &b, total);
        if after_x <= after_h {
            (x, residual) = (x_next, after_x);
        } else {
            residual = after_h;
        }
        history.push(IterationRecord { iteration: history.len() + 1, after_h, after_x: residual });
        if residual < opts.tolerance {
            status = Convergence::Converged;
        }
    }

    let iterations = history.len();
    let payload = CompressedPayload::new(x, h, iterations, residual)?;
    Ok(Decomposition { payload, status, history })
}

/// Least-squares channel for fixed data. Falls back to the minimum-norm
/// solution when the normal equations are singular.
fn channel_update(x: &[Vec<Complex64>], dft: &PartialDft, y: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let design_adj = stacked_design_adjoint(x, dft);
    let (u, v) = normal_equations(&design_adj, y);
    match hermitian_solve(&u, &v) {
        Ok(h) => Ok(h),
        Err(Error::RankDeficient { .. }) => Ok(hermitian_pinv_solve(&u, &v)),
        Err(e) => Err(e),
    }
}

/// `B_u = F_L H(u)` for each user.
pub(crate) fn frequency_factors(dft: &PartialDft, h: &DMatrix<Complex64>, n_u: usize) -> Vec<DMatrix<Complex64>> {
    let l = dft.taps();
    (0..n_u).map(|u| dft.matrix() * h.rows(u * l, l)).collect()
}

fn relative_residual(y: &DMatrix<Complex64>, x: &[Vec<Complex64>], b: &[DMatrix<Complex64>], total: f64) -> f64 {
    let mut acc = 0.0;
    for r in 0..y.ncols() {
        for m in 0..y.nrows() {
            let mut fit = Complex64::new(0.0, 0.0);
            for (xu, bu) in x.iter().zip(b) {
                fit += xu[m] * bu[(m, r)];
            }
            acc += (y[(m, r)] - fit).norm_sqr();
        }
    }
    acc.sqrt() / total
}

/// Per-subcarrier least-squares data for fixed channel factors.
fn data_update(y: &DMatrix<Complex64>, b: &[DMatrix<Complex64>], x: &mut [Vec<Complex64>]) {
    let (n, n_r, n_u) = (y.nrows(), y.ncols(), b.len());
    let energy: f64 = b.iter().map(|bu| bu.iter().map(|v| v.norm_sqr()).sum::<f64>()).sum();
    let floor = 1e-18 * energy / n as f64;

    if n_u == 1 {
        let b = &b[0];
        for m in 0..n {
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for r in 0..n_r {
                num += y[(m, r)] * b[(m, r)].conj();
                den += b[(m, r)].norm_sqr();
            }
            x[0][m] = if den < floor { Complex64::new(0.0, 0.0) } else { num / den };
        }
        return;
    }

    for m in 0..n {
        // Normal equations of y_m^T = x(m)^T B_m, with B_m the N_u x N_r rows of user channels.
        let gram = DMatrix::from_fn(n_u, n_u, |v, u| {
            (0..n_r).map(|r| b[v][(m, r)].conj() * b[u][(m, r)]).sum::<Complex64>()
        });
        let rhs = DVector::from_fn(n_u, |v, _| (0..n_r).map(|r| b[v][(m, r)].conj() * y[(m, r)]).sum::<Complex64>());
        let trace: f64 = (0..n_u).map(|u| gram[(u, u)].re).sum();
        if trace < floor {
            x.iter_mut().for_each(|xu| xu[m] = Complex64::new(0.0, 0.0));
            continue;
        }
        let rhs = DMatrix::from_column_slice(n_u, 1, rhs.as_slice());
        let sol = if hermitian_condition(&gram) > MAX_CONDITION {
            hermitian_pinv_solve(&gram, &rhs)
        } else {
            hermitian_solve(&gram, &rhs).unwrap_or_else(|_| hermitian_pinv_solve(&gram, &rhs))
        };
        for (u, xu) in x.iter_mut().enumerate() {
            xu[m] = sol[(u, 0)];
        }
    }
}
