//! Fronthaul frame format (`.fhf`).
//!
//! All integers are little-endian `u32`; the residual is a little-endian
//! binary64. Layout:
//!
//! ```text
//! offset  field
//!      0  magic      "FHF1"
//!      4  version    1
//!      8  mode       0 = single-user, 1 = multi-user, 2 = PCA
//!     12  N
//!     16  N_r        antennas carried by the frame
//!     20  N_u        1 for single-user and PCA frames, at least 2 otherwise
//!     24  L          taps, or rank for PCA
//!     28  iterations 0 for PCA
//!     32  residual   0.0 for PCA
//!     40  body       binary32 (I, Q) pairs
//! ```
//!
//! The body of a decomposition frame holds the `N_u` data diagonals followed
//! by the `(L N_u) x N_r` channel factor in row-major order, `N_u (N + L N_r)`
//! samples in all. A PCA body holds the `N x L` scores then the `L x N_r`
//! components, both row-major, `L (N + N_r)` samples.
//!
//! Grid files (`.fhg`) hold a received matrix: magic "FHG1", version, `N`,
//! `N_r` as `u32`, then `N N_r` binary64 (I, Q) pairs in row-major order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::path::Path;
use thiserror::Error;

use crate::compressor::{CompressedPayload, CompressionRatio};
use crate::error::Result;
use crate::pca::PcaPayload;
use crate::signal::FrequencyGrid;

pub const FRAME_MAGIC: [u8; 4] = *b"FHF1";
pub const GRID_MAGIC: [u8; 4] = *b"FHG1";
pub const FRAME_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 40;
const GRID_HEADER_LEN: usize = 16;
const SAMPLE_BYTES: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u32),
    #[error("unknown mode {0}")]
    UnknownMode(u32),
    #[error("stream truncated: need {needed} bytes, have {available}")]
    Truncated { needed: u64, available: u64 },
    #[error("length mismatch: header implies {expected} bytes, stream has {actual}")]
    LengthMismatch { expected: u64, actual: u64 },
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("non-finite value at byte offset {offset}")]
    NonFinite { offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameMode {
    SingleUser,
    MultiUser,
    Pca,
}

impl FrameMode {
    fn code(self) -> u32 {
        match self {
            FrameMode::SingleUser => 0,
            FrameMode::MultiUser => 1,
            FrameMode::Pca => 2,
        }
    }

    fn from_code(code: u32) -> std::result::Result<Self, FrameError> {
        match code {
            0 => Ok(FrameMode::SingleUser),
            1 => Ok(FrameMode::MultiUser),
            2 => Ok(FrameMode::Pca),
            other => Err(FrameError::UnknownMode(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameHeader {
    pub mode: FrameMode,
    pub n: u32,
    pub n_r: u32,
    pub n_u: u32,
    pub taps: u32,
    pub iterations: u32,
    pub residual: f64,
}

impl FrameHeader {
    /// Complex samples the body must contain, or `None` on overflow.
    pub fn sample_count(&self) -> Option<u64> {
        let (n, n_r, n_u, l) = (self.n as u64, self.n_r as u64, self.n_u as u64, self.taps as u64);
        match self.mode {
            FrameMode::Pca => l.checked_mul(n.checked_add(n_r)?),
            _ => n_u.checked_mul(n.checked_add(l.checked_mul(n_r)?)?),
        }
    }

    fn body_len(&self) -> std::result::Result<u64, FrameError> {
        self.sample_count()
            .and_then(|s| s.checked_mul(SAMPLE_BYTES as u64))
            .ok_or_else(|| FrameError::InvalidDims("sample count overflows".into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Decomposition(CompressedPayload),
    Pca(PcaPayload),
}

fn u32_field(v: usize) -> u32 {
    u32::try_from(v).expect("dimension exceeds the u32 frame field")
}

fn push_sample(out: &mut Vec<u8>, v: Complex64) {
    out.extend_from_slice(&(v.re as f32).to_le_bytes());
    out.extend_from_slice(&(v.im as f32).to_le_bytes());
}

fn push_header(out: &mut Vec<u8>, h: &FrameHeader) {
    out.extend_from_slice(&FRAME_MAGIC);
    for v in [FRAME_VERSION, h.mode.code(), h.n, h.n_r, h.n_u, h.taps, h.iterations] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&h.residual.to_le_bytes());
}

fn push_rows(out: &mut Vec<u8>, m: &DMatrix<Complex64>) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            push_sample(out, m[(i, j)]);
        }
    }
}

pub fn header_of(p: &Payload) -> FrameHeader {
    match p {
        Payload::Decomposition(p) => FrameHeader {
            mode: if p.dims.n_u == 1 { FrameMode::SingleUser } else { FrameMode::MultiUser },
            n: u32_field(p.dims.n),
            n_r: u32_field(p.dims.n_r),
            n_u: u32_field(p.dims.n_u),
            taps: u32_field(p.dims.taps),
            iterations: u32_field(p.iterations),
            residual: p.residual,
        },
        Payload::Pca(p) => FrameHeader {
            mode: FrameMode::Pca,
            n: u32_field(p.dims.n),
            n_r: u32_field(p.dims.n_r),
            n_u: 1,
            taps: u32_field(p.dims.rank),
            iterations: 0,
            residual: 0.0,
        },
    }
}

pub fn encode(p: &Payload) -> Vec<u8> {
    let header = header_of(p);
    let body = header.body_len().expect("payload dimensions fit the frame") as usize;
    let mut out = Vec::with_capacity(HEADER_LEN + body);
    push_header(&mut out, &header);
    match p {
        Payload::Decomposition(p) => {
            p.x_hat.iter().flatten().for_each(|&v| push_sample(&mut out, v));
            push_rows(&mut out, &p.h_hat);
        }
        Payload::Pca(p) => {
            push_rows(&mut out, &p.scores);
            push_rows(&mut out, &p.components);
        }
    }
    out
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

pub fn decode_header(bytes: &[u8]) -> std::result::Result<FrameHeader, FrameError> {
    if bytes.len() < HEADER_LEN {
        return Err(FrameError::Truncated { needed: HEADER_LEN as u64, available: bytes.len() as u64 });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if magic != FRAME_MAGIC {
        return Err(FrameError::BadMagic(magic));
    }
    let version = read_u32(bytes, 4);
    if version != FRAME_VERSION {
        return Err(FrameError::UnsupportedVersion(version));
    }
    let mode = FrameMode::from_code(read_u32(bytes, 8))?;
    let header = FrameHeader {
        mode,
        n: read_u32(bytes, 12),
        n_r: read_u32(bytes, 16),
        n_u: read_u32(bytes, 20),
        taps: read_u32(bytes, 24),
        iterations: read_u32(bytes, 28),
        residual: f64::from_le_bytes(bytes[32..40].try_into().unwrap()),
    };
    if header.n == 0 || header.n_r == 0 || header.n_u == 0 || header.taps == 0 {
        return Err(FrameError::InvalidDims("zero dimension".into()));
    }
    if mode != FrameMode::MultiUser && header.n_u != 1 {
        return Err(FrameError::InvalidDims(format!("{mode:?} frame with N_u = {}", header.n_u)));
    }
    if mode == FrameMode::MultiUser && header.n_u < 2 {
        return Err(FrameError::InvalidDims("multi-user frame with a single user".into()));
    }
    if mode == FrameMode::Pca && (header.iterations != 0 || header.residual.to_bits() != 0) {
        return Err(FrameError::InvalidDims("PCA frame with iteration fields set".into()));
    }
    if !header.residual.is_finite() {
        return Err(FrameError::NonFinite { offset: 32 });
    }
    Ok(header)
}

struct SampleReader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl SampleReader<'_> {
    fn next(&mut self) -> std::result::Result<Complex64, FrameError> {
        let re = f32::from_le_bytes(self.bytes[self.at..self.at + 4].try_into().unwrap());
        let im = f32::from_le_bytes(self.bytes[self.at + 4..self.at + 8].try_into().unwrap());
        if !re.is_finite() || !im.is_finite() {
            return Err(FrameError::NonFinite { offset: self.at });
        }
        self.at += SAMPLE_BYTES;
        Ok(Complex64::new(re as f64, im as f64))
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> std::result::Result<DMatrix<Complex64>, FrameError> {
        let mut values = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            values.push(self.next()?);
        }
        Ok(DMatrix::from_row_slice(rows, cols, &values))
    }
}

pub fn decode(bytes: &[u8]) -> std::result::Result<Payload, FrameError> {
    let header = decode_header(bytes)?;
    let expected = HEADER_LEN as u64 + header.body_len()?;
    let actual = bytes.len() as u64;
    if actual < expected {
        return Err(FrameError::Truncated { needed: expected, available: actual });
    }
    if actual > expected {
        return Err(FrameError::LengthMismatch { expected, actual });
    }
    let (n, n_r, n_u, l) = (header.n as usize, header.n_r as usize, header.n_u as usize, header.taps as usize);
    let mut reader = SampleReader { bytes, at: HEADER_LEN };
    let dims_err = |e: crate::error::Error| FrameError::InvalidDims(e.to_string());
    match header.mode {
        FrameMode::Pca => {
            let scores = reader.matrix(n, l)?;
            let components = reader.matrix(l, n_r)?;
            PcaPayload::new(scores, components).map(Payload::Pca).map_err(dims_err)
        }
        _ => {
            let mut x_hat = Vec::with_capacity(n_u);
            for _ in 0..n_u {
                x_hat.push((0..n).map(|_| reader.next()).collect::<std::result::Result<Vec<_>, _>>()?);
            }
            let h_hat = reader.matrix(l * n_u, n_r)?;
            CompressedPayload::new(x_hat, h_hat, header.iterations as usize, header.residual)
                .map(Payload::Decomposition)
                .map_err(dims_err)
        }
    }
}

/// Original samples over transmitted samples; the frame header is not counted.
pub fn measured_cr(original: &FrequencyGrid, frame: &[u8]) -> Result<CompressionRatio> {
    let header = decode_header(frame)?;
    if header.n as usize != original.n_subcarriers() {
        return Err(crate::error::invalid("frame and grid disagree on N"));
    }
    if header.n_r as usize > original.n_antennas() {
        return Err(crate::error::invalid("frame carries more antennas than the grid"));
    }
    let body = frame.len().saturating_sub(HEADER_LEN) as u64;
    Ok(CompressionRatio {
        original: (original.n_subcarriers() * original.n_antennas()) as u64,
        transmitted: body / SAMPLE_BYTES as u64,
    })
}

pub fn write_frame(path: impl AsRef<Path>, p: &Payload) -> Result<()> {
    std::fs::write(path, encode(p))?;
    Ok(())
}

pub fn read_frame(path: impl AsRef<Path>) -> Result<Payload> {
    Ok(decode(&std::fs::read(path)?)?)
}

pub fn encode_grid(grid: &FrequencyGrid) -> Vec<u8> {
    let y = grid.samples();
    let mut out = Vec::with_capacity(GRID_HEADER_LEN + 16 * y.len());
    out.extend_from_slice(&GRID_MAGIC);
    for v in [FRAME_VERSION, u32_field(y.nrows()), u32_field(y.ncols())] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for m in 0..y.nrows() {
        for r in 0..y.ncols() {
            out.extend_from_slice(&y[(m, r)].re.to_le_bytes());
            out.extend_from_slice(&y[(m, r)].im.to_le_bytes());
        }
    }
    out
}

pub fn decode_grid(bytes: &[u8]) -> std::result::Result<FrequencyGrid, FrameError> {
    if bytes.len() < GRID_HEADER_LEN {
        return Err(FrameError::Truncated { needed: GRID_HEADER_LEN as u64, available: bytes.len() as u64 });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if magic != GRID_MAGIC {
        return Err(FrameError::BadMagic(magic));
    }
    let version = read_u32(bytes, 4);
    if version != FRAME_VERSION {
        return Err(FrameError::UnsupportedVersion(version));
    }
    let (n, n_r) = (read_u32(bytes, 8) as u64, read_u32(bytes, 12) as u64);
    if n == 0 || n_r == 0 {
        return Err(FrameError::InvalidDims("zero dimension".into()));
    }
    let expected = GRID_HEADER_LEN as u64 + n * n_r * 16;
    let actual = bytes.len() as u64;
    if actual < expected {
        return Err(FrameError::Truncated { needed: expected, available: actual });
    }
    if actual > expected {
        return Err(FrameError::LengthMismatch { expected, actual });
    }
    let mut values = Vec::with_capacity((n * n_r) as usize);
    for (i, chunk) in bytes[GRID_HEADER_LEN..].chunks_exact(16).enumerate() {
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        if !re.is_finite() || !im.is_finite() {
            return Err(FrameError::NonFinite { offset: GRID_HEADER_LEN + 16 * i });
        }
        values.push(Complex64::new(re, im));
    }
    let samples = DMatrix::from_row_slice(n as usize, n_r as usize, &values);
    Ok(FrequencyGrid::from_matrix_unchecked(samples))
}

pub fn write_grid(path: impl AsRef<Path>, grid: &FrequencyGrid) -> Result<()> {
    std::fs::write(path, encode_grid(grid))?;
    Ok(())
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<FrequencyGrid> {
    Ok(decode_grid(&std::fs::read(path)?)?)
}
