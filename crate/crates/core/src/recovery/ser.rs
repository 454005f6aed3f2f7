use super::equalize::EqualizedSymbols;
use crate::error::{invalid, Result};
use crate::signal::qam::nearest;
use crate::signal::{QamOrder, UserData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ErrorCount {
    pub errors: u64,
    pub symbols: u64,
}

impl ErrorCount {
    pub fn ser(&self) -> f64 {
        if self.symbols == 0 {
            0.0
        } else {
            self.errors as f64 / self.symbols as f64
        }
    }

    pub fn merge(&mut self, other: ErrorCount) {
        self.errors += other.errors;
        self.symbols += other.symbols;
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SerCount {
    pub per_user: Vec<ErrorCount>,
    pub pooled: ErrorCount,
}

/// Hard-decision symbol errors; erasures count as errors.
pub fn compute_ser(estimates: &EqualizedSymbols, truth: &[UserData], order: QamOrder) -> Result<SerCount> {
    if estimates.users.len() != truth.len() {
        return Err(invalid("estimate and truth user counts differ"));
    }
    let table = order.constellation();
    let mut out = SerCount::default();
    for (est, user) in estimates.users.iter().zip(truth) {
        if est.len() != user.len() {
            return Err(invalid("estimate and truth lengths differ"));
        }
        let errors = est
            .iter()
            .zip(&user.indices)
            .filter(|(s, &want)| s.is_none_or(|s| nearest(table, s) != want))
            .count() as u64;
        let count = ErrorCount { errors, symbols: est.len() as u64 };
        out.pooled.merge(count);
        out.per_user.push(count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth(n: usize) -> UserData {
        UserData::from_indices(1, QamOrder::Qam16, (0..n).map(|i| i % 16).collect()).unwrap()
    }

    #[test]
    fn counts() {
        let t = truth(1000);
        let mut est = EqualizedSymbols { users: vec![t.symbols.iter().map(|&s| Some(s)).collect()] };
        assert_eq!(compute_ser(&est, std::slice::from_ref(&t), QamOrder::Qam16).unwrap().pooled.ser(), 0.0);

        est.users[0][17] = Some(t.symbols[18]);
        let c = compute_ser(&est, std::slice::from_ref(&t), QamOrder::Qam16).unwrap();
        assert_eq!(c.pooled, ErrorCount { errors: 1, symbols: 1000 });
        assert_eq!(c.pooled.ser(), 0.001);

        let erased = EqualizedSymbols { users: vec![vec![None; 1000]] };
        assert_eq!(compute_ser(&erased, &[t], QamOrder::Qam16).unwrap().pooled.ser(), 1.0);
    }

    #[test]
    fn shape_mismatch() {
        let est = EqualizedSymbols { users: vec![vec![None; 3]] };
        assert!(compute_ser(&est, &[truth(4)], QamOrder::Qam16).is_err());
        assert!(compute_ser(&est, &[], QamOrder::Qam16).is_err());
    }
}
