//! Portable binary container for labeled frame matrices.
//!
//! Layout, little-endian: 4-byte magic, u32 version, u32 frames, u32
//! columns, f64 hop in seconds, one u32-length-prefixed UTF-8 label per
//! column, then frames × columns f32 values row-major.

use std::io::{Read, Write};
use std::path::Path;

use crate::alignment::{AlignError, Posteriogram};
use crate::matrix::Matrix;
use crate::scalar::Real;

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContainerKind {
    Posteriogram,
    Features,
}

impl ContainerKind {
    pub fn magic(self) -> &'static [u8; 4] {
        match self {
            ContainerKind::Posteriogram => b"PGRM",
            ContainerKind::Features => b"FEAT",
        }
    }

    fn from_magic(m: &[u8]) -> Option<Self> {
        match m {
            b"PGRM" => Some(ContainerKind::Posteriogram),
            b"FEAT" => Some(ContainerKind::Features),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ContainerError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic {found:?}")]
    BadMagic { found: [u8; 4] },
    #[error("expected {expected:?} container, found {found:?}")]
    WrongKind { expected: ContainerKind, found: ContainerKind },
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u32),
    #[error("container truncated at byte {offset}")]
    Truncated { offset: usize },
    #[error("label {index} is not UTF-8")]
    InvalidLabel { index: usize },
    #[error("{trailing} trailing bytes after payload")]
    TrailingBytes { trailing: usize },
    #[error(transparent)]
    Posteriogram(#[from] AlignError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub kind: ContainerKind,
    pub hop_seconds: f64,
    pub labels: Vec<String>,
    pub values: Matrix<f32>,
}

pub fn write_container<W: Write>(mut w: W, m: &LabeledMatrix) -> std::io::Result<()> {
    assert_eq!(m.labels.len(), m.values.cols(), "one label per column");
    let mut buf = Vec::with_capacity(24 + m.values.as_slice().len() * 4);
    buf.extend_from_slice(m.kind.magic());
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(m.values.rows() as u32).to_le_bytes());
    buf.extend_from_slice(&(m.values.cols() as u32).to_le_bytes());
    buf.extend_from_slice(&m.hop_seconds.to_le_bytes());
    for label in &m.labels {
        buf.extend_from_slice(&(label.len() as u32).to_le_bytes());
        buf.extend_from_slice(label.as_bytes());
    }
    for v in m.values.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ContainerError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or(ContainerError::Truncated { offset: self.bytes.len() })?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, ContainerError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
}

pub fn parse_container(bytes: &[u8], expected: Option<ContainerKind>) -> Result<LabeledMatrix, ContainerError> {
    let mut c = Cursor { bytes, pos: 0 };
    let magic = c.take(4).map_err(|_| {
        let mut found = [0u8; 4];
        found[..bytes.len()].copy_from_slice(bytes);
        ContainerError::BadMagic { found }
    })?;
    let kind = ContainerKind::from_magic(magic)
        .ok_or_else(|| ContainerError::BadMagic { found: magic.try_into().expect("4 bytes") })?;
    if let Some(expected) = expected {
        if expected != kind {
            return Err(ContainerError::WrongKind { expected, found: kind });
        }
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(ContainerError::UnsupportedVersion(version));
    }
    let rows = c.u32()? as usize;
    let cols = c.u32()? as usize;
    let hop_seconds = f64::from_le_bytes(c.take(8)?.try_into().expect("8 bytes"));
    let mut labels = Vec::with_capacity(cols.min(1 << 16));
    for index in 0..cols {
        let len = c.u32()? as usize;
        let raw = c.take(len)?;
        labels.push(String::from_utf8(raw.to_vec()).map_err(|_| ContainerError::InvalidLabel { index })?);
    }
    let n = rows.checked_mul(cols).and_then(|n| n.checked_mul(4)).ok_or(ContainerError::Truncated { offset: c.pos })?;
    let payload = c.take(n)?;
    let data: Vec<f32> = payload.chunks_exact(4).map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes"))).collect();
    if c.pos != bytes.len() {
        return Err(ContainerError::TrailingBytes { trailing: bytes.len() - c.pos });
    }
    let values = Matrix::from_vec(rows, cols, data).expect("payload length checked");
    Ok(LabeledMatrix { kind, hop_seconds, labels, values })
}

pub fn read_container<R: Read>(mut r: R, expected: Option<ContainerKind>) -> Result<LabeledMatrix, ContainerError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    parse_container(&bytes, expected)
}

pub fn read_posteriogram(path: impl AsRef<Path>) -> Result<Posteriogram<f32>, ContainerError> {
    let m = read_container(std::fs::File::open(path)?, Some(ContainerKind::Posteriogram))?;
    Ok(Posteriogram::new(m.values, m.hop_seconds, m.labels)?)
}

pub fn posteriogram_to_container<T: Real>(post: &Posteriogram<T>) -> LabeledMatrix {
    LabeledMatrix {
        kind: ContainerKind::Posteriogram,
        hop_seconds: post.hop_seconds(),
        labels: post.symbols().to_vec(),
        values: post.values().map(|v| v.to_f32().unwrap_or(f32::NAN)),
    }
}

/// Wraps a frame × bin feature matrix; columns are labeled `{prefix}{i}`.
pub fn features_to_container<T: Real>(values: &Matrix<T>, hop_seconds: f64, prefix: &str) -> LabeledMatrix {
    LabeledMatrix {
        kind: ContainerKind::Features,
        hop_seconds,
        labels: (0..values.cols()).map(|i| format!("{prefix}{i}")).collect(),
        values: values.map(|v| v.to_f32().unwrap_or(f32::NAN)),
    }
}
