//! Compression-ratio tables for the reference 64-antenna, 12-tap setup.

use crate::compressor::{cr_mu, cr_mu_pca, cr_su, cr_su_pca, CompressionRatio};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub method: &'static str,
    pub n: u64,
    pub n_r: u64,
    pub taps: u64,
    pub n_u: u64,
    pub ratio: CompressionRatio,
}

pub const TABLE_N: [u64; 2] = [1024, 4096];
pub const TABLE_N_R: u64 = 64;
pub const TABLE_TAPS: u64 = 12;
pub const TABLE_USERS: [u64; 2] = [1, 4];

/// Decomposition and PCA ratios for one and four users at N = 1024, 4096.
pub fn reproduce_tables() -> Vec<TableRow> {
    let mut rows = Vec::with_capacity(8);
    for n_u in TABLE_USERS {
        for method in ["MD", "PCA"] {
            for n in TABLE_N {
                let ratio = match (method, n_u) {
                    ("MD", 1) => cr_su(n, TABLE_N_R, TABLE_TAPS),
                    ("MD", _) => cr_mu(n, TABLE_N_R, TABLE_TAPS, n_u),
                    (_, 1) => cr_su_pca(n, TABLE_N_R, TABLE_TAPS),
                    _ => cr_mu_pca(n, TABLE_N_R, TABLE_TAPS, n_u),
                };
                rows.push(TableRow { method, n, n_r: TABLE_N_R, taps: TABLE_TAPS, n_u, ratio });
            }
        }
    }
    rows
}

pub fn tables_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("method,n,n_r,l,n_u,cr\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{},{}\n", r.method, r.n, r.n_r, r.taps, r.n_u, r.ratio));
    }
    out
}
