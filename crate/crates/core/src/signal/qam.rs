//! Gray-mapped square M-QAM.
//!
//! A symbol index is the integer value of its bit pattern (MSB first). The
//! upper half of the bits selects the in-phase level and the lower half the
//! quadrature level, each through a binary-reflected Gray code. Points are
//! scaled to unit average energy.

use num_complex::Complex64;
use rand::Rng;
use std::sync::OnceLock;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QamOrder {
    Qam4,
    Qam16,
    Qam64,
    Qam256,
}

impl QamOrder {
    pub fn new(m: u32) -> Result<Self> {
        match m {
            4 => Ok(QamOrder::Qam4),
            16 => Ok(QamOrder::Qam16),
            64 => Ok(QamOrder::Qam64),
            256 => Ok(QamOrder::Qam256),
            other => Err(invalid(format!(
                "unsupported QAM order {other}; expected one of 4, 16, 64, 256"
            ))),
        }
    }

    pub fn size(self) -> usize {
        match self {
            QamOrder::Qam4 => 4,
            QamOrder::Qam16 => 16,
            QamOrder::Qam64 => 64,
            QamOrder::Qam256 => 256,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.size().trailing_zeros() as usize
    }

    /// Constellation points indexed by bit pattern.
    pub fn constellation(self) -> &'static [Complex64] {
        static TABLES: [OnceLock<Vec<Complex64>>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = match self {
            QamOrder::Qam4 => 0,
            QamOrder::Qam16 => 1,
            QamOrder::Qam64 => 2,
            QamOrder::Qam256 => 3,
        };
        TABLES[slot].get_or_init(|| build_constellation(self.size()))
    }

    /// Minimum distance between distinct points at unit average energy.
    pub fn min_distance(self) -> f64 {
        2.0 / (2.0 * (self.size() as f64 - 1.0) / 3.0).sqrt()
    }
}

impl std::fmt::Display for QamOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-QAM", self.size())
    }
}

fn gray_to_binary(mut g: usize) -> usize {
    let mut b = 0;
    while g != 0 {
        b ^= g;
        g >>= 1;
    }
    b
}

fn build_constellation(m: usize) -> Vec<Complex64> {
    let axis_bits = m.trailing_zeros() as usize / 2;
    let side = 1usize << axis_bits;
    let scale = 1.0 / (2.0 * (m as f64 - 1.0) / 3.0).sqrt();
    let level = |gray: usize| (2 * gray_to_binary(gray)) as f64 - (side - 1) as f64;
    (0..m)
        .map(|idx| {
            let i = level(idx >> axis_bits);
            let q = level(idx & (side - 1));
            Complex64::new(i * scale, q * scale)
        })
        .collect()
}

/// One user's block of modulated symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct UserData {
    pub user_id: usize,
    pub order: QamOrder,
    pub indices: Vec<usize>,
    pub symbols: Vec<Complex64>,
}

impl UserData {
    pub fn from_indices(user_id: usize, order: QamOrder, indices: Vec<usize>) -> Result<Self> {
        let table = order.constellation();
        let symbols = indices
            .iter()
            .map(|&i| {
                table
                    .get(i)
                    .copied()
                    .ok_or_else(|| invalid(format!("symbol index {i} outside {order}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UserData { user_id, order, indices, symbols })
    }

    /// Uniformly random symbols.
    pub fn random<R: Rng + ?Sized>(user_id: usize, n: usize, order: QamOrder, rng: &mut R) -> Self {
        let m = order.size();
        let indices: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
        let table = order.constellation();
        let symbols = indices.iter().map(|&i| table[i]).collect();
        UserData { user_id, order, indices, symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Maps a bit stream onto Gray-coded QAM symbols for user 1.
pub fn qam_modulate(bits: &[bool], order: QamOrder) -> Result<UserData> {
    let k = order.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(invalid(format!(
            "{} bits is not a multiple of {k} bits per {order} symbol",
            bits.len()
        )));
    }
    let indices = bits
        .chunks(k)
        .map(|chunk| chunk.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize))
        .collect();
    UserData::from_indices(1, order, indices)
}

/// Nearest-point hard decision. Ties resolve to the smallest index.
pub fn qam_demodulate(symbols: &[Complex64], order: QamOrder) -> Vec<usize> {
    let table = order.constellation();
    symbols.iter().map(|&s| nearest(table, s)).collect()
}

pub(crate) fn nearest(table: &[Complex64], s: Complex64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, p) in table.iter().enumerate() {
        let d = (s - p).norm_sqr();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn qpsk_gray_mapping() {
        let bits = [false, false, false, true, true, true, true, false];
        let data = qam_modulate(&bits, QamOrder::Qam4).unwrap();
        let h = FRAC_1_SQRT_2;
        let want = [
            Complex64::new(-h, -h),
            Complex64::new(-h, h),
            Complex64::new(h, h),
            Complex64::new(h, -h),
        ];
        for (got, want) in data.symbols.iter().zip(want) {
            assert!((got - want).norm() < 1e-15);
        }
        assert_eq!(data.indices, vec![0, 1, 3, 2]);
    }

    #[test]
    fn qam64_energy_and_min_distance() {
        // Enumerate all 64 bit patterns and check against brute force.
        let bits: Vec<bool> = (0..64usize)
            .flat_map(|i| (0..6).rev().map(move |b| (i >> b) & 1 == 1))
            .collect();
        let data = qam_modulate(&bits, QamOrder::Qam64).unwrap();
        let energy: f64 = data.symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / 64.0;
        assert!((energy - 1.0).abs() < 1e-12);
        let mut dmin = f64::INFINITY;
        for i in 0..64 {
            for j in (i + 1)..64 {
                dmin = dmin.min((data.symbols[i] - data.symbols[j]).norm());
            }
        }
        assert!((dmin - 2.0 / 42f64.sqrt()).abs() < 1e-12);
        assert!((QamOrder::Qam64.min_distance() - dmin).abs() < 1e-12);
    }

    #[test]
    fn all_orders_have_unit_energy() {
        for order in [QamOrder::Qam4, QamOrder::Qam16, QamOrder::Qam64, QamOrder::Qam256] {
            let table = order.constellation();
            let e: f64 = table.iter().map(|s| s.norm_sqr()).sum::<f64>() / table.len() as f64;
            assert!((e - 1.0).abs() < 1e-12, "{order}");
        }
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        let table = QamOrder::Qam16.constellation();
        let d = QamOrder::Qam16.min_distance();
        for i in 0..16 {
            for j in 0..16 {
                if ((table[i] - table[j]).norm() - d).abs() < 1e-9 {
                    assert_eq!((i ^ j).count_ones(), 1, "{i} vs {j}");
                }
            }
        }
    }

    #[test]
    fn empty_and_bad_inputs() {
        assert!(qam_modulate(&[], QamOrder::Qam16).unwrap().is_empty());
        assert!(qam_modulate(&[true, false, true], QamOrder::Qam16).is_err());
        assert!(QamOrder::new(8).is_err());
        assert!(QamOrder::new(32).is_err());
        assert_eq!(QamOrder::new(256).unwrap(), QamOrder::Qam256);
    }

    #[test]
    fn demod_round_trip_and_ties() {
        let idx: Vec<usize> = (0..16).collect();
        let data = UserData::from_indices(1, QamOrder::Qam16, idx.clone()).unwrap();
        assert_eq!(qam_demodulate(&data.symbols, QamOrder::Qam16), idx);
        assert_eq!(qam_demodulate(&[Complex64::new(0.0, 0.0)], QamOrder::Qam4), vec![0]);
    }

    #[test]
    fn demod_tolerates_small_perturbation() {
        // 0.01*sqrt(2) is well below half the 64-QAM minimum distance (~0.154).
        let table = QamOrder::Qam64.constellation();
        let shifted: Vec<Complex64> = table.iter().map(|p| p + Complex64::new(0.01, 0.01)).collect();
        let idx: Vec<usize> = (0..64).collect();
        assert_eq!(qam_demodulate(&shifted, QamOrder::Qam64), idx);
    }

    #[test]
    fn random_symbols_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data = UserData::random(2, 500, QamOrder::Qam256, &mut rng);
        let table = QamOrder::Qam256.constellation();
        for (i, s) in data.indices.iter().zip(&data.symbols) {
            assert_eq!(table[*i], *s);
        }
    }
}
