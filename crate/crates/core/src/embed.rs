//! Embedding matrices and initialization of rows for added subwords.
//!
//! Binary layout (little-endian): magic `TMIE`, `u32` version (1), `u32`
//! precision in bits (32), `u64` rows, `u64` dim, then `rows * dim` `f32`
//! values in row-major order. A `id<TAB>v1<TAB>...` text form can be
//! imported but is never written.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::merge::Resolution;

pub const MAGIC: &[u8; 4] = b"TMIE";
pub const VERSION: u32 = 1;
pub const PRECISION: u32 = 32;
const HEADER_LEN: usize = 4 + 4 + 4 + 8 + 8;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad magic {0:?}, expected \"TMIE\"")]
    BadMagic([u8; 4]),
    #[error("unsupported embedding file version {0}")]
    UnsupportedVersion(u32),
    #[error("unsupported precision {0} bits")]
    UnsupportedPrecision(u32),
    #[error("truncated embedding file: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },
    #[error("{0} trailing bytes after embedding payload")]
    TrailingBytes(u64),
    #[error("embedding dimension must be positive")]
    ZeroDim,
    #[error("data length {len} does not equal {rows} rows x {dim} columns")]
    Shape { rows: usize, dim: usize, len: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("provenance id {id} out of range for {rows} rows")]
    RowOutOfRange { id: u32, rows: usize },
    #[error("line {line}: {reason}")]
    Text { line: usize, reason: String },
}

/// Row-major `f32` matrix; row `i` belongs to token id `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    rows: usize,
    dim: usize,
    data: Vec<f32>,
}

impl EmbeddingMatrix {
    pub fn new(rows: usize, dim: usize, data: Vec<f32>) -> Result<Self, EmbedError> {
        if dim == 0 {
            return Err(EmbedError::ZeroDim);
        }
        if rows.checked_mul(dim) != Some(data.len()) {
            return Err(EmbedError::Shape {
                rows,
                dim,
                len: data.len(),
            });
        }
        Ok(EmbeddingMatrix { rows, dim, data })
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f32>]) -> Result<Self, EmbedError> {
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(EmbedError::DimMismatch(dim, r.len()));
            }
            data.extend_from_slice(r);
        }
        EmbeddingMatrix::new(rows.len(), dim, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * self.data.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&PRECISION.to_le_bytes());
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.dim as u64).to_le_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, EmbedError> {
        let found = bytes.len() as u64;
        if bytes.len() < HEADER_LEN {
            if bytes.len() >= 4 && &bytes[..4] != MAGIC {
                return Err(EmbedError::BadMagic(bytes[..4].try_into().unwrap()));
            }
            return Err(EmbedError::Truncated {
                expected: HEADER_LEN as u64,
                found,
            });
        }
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if &magic != MAGIC {
            return Err(EmbedError::BadMagic(magic));
        }
        let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let u64_at = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(EmbedError::UnsupportedVersion(version));
        }
        let precision = u32_at(8);
        if precision != PRECISION {
            return Err(EmbedError::UnsupportedPrecision(precision));
        }
        let (rows, dim) = (u64_at(12), u64_at(20));
        if dim == 0 {
            return Err(EmbedError::ZeroDim);
        }
        let expected = rows
            .checked_mul(dim)
            .and_then(|n| n.checked_mul(4))
            .and_then(|n| n.checked_add(HEADER_LEN as u64))
            .unwrap_or(u64::MAX);
        if found < expected {
            return Err(EmbedError::Truncated { expected, found });
        }
        if found > expected {
            return Err(EmbedError::TrailingBytes(found - expected));
        }
        let data = bytes[HEADER_LEN..]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        EmbeddingMatrix::new(rows as usize, dim as usize, data)
    }

    /// Parses the tab-separated text form. Ids must cover `0..rows` exactly
    /// once, in any order.
    pub fn from_tsv(text: &str) -> Result<Self, EmbedError> {
        let mut rows: Vec<(usize, usize, Vec<f32>)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                continue;
            }
            let err = |reason: String| EmbedError::Text {
                line: line_no,
                reason,
            };
            let mut fields = line.split('\t');
            let id: usize = fields
                .next()
                .unwrap_or_default()
                .parse()
                .map_err(|_| err("invalid id".into()))?;
            let values = fields
                .map(|f| f.trim().parse::<f32>().map_err(|_| err(format!("invalid value {f:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push((id, line_no, values));
        }
        let dim = rows.first().map(|r| r.2.len()).unwrap_or(0);
        if dim == 0 {
            return Err(EmbedError::ZeroDim);
        }
        let n = rows.len();
        let mut ordered: Vec<Option<Vec<f32>>> = vec![None; n];
        for (id, line, values) in rows {
            if values.len() != dim {
                return Err(EmbedError::Text {
                    line,
                    reason: format!("expected {dim} values, found {}", values.len()),
                });
            }
            match ordered.get_mut(id) {
                Some(slot @ None) => *slot = Some(values),
                Some(Some(_)) => {
                    return Err(EmbedError::Text {
                        line,
                        reason: format!("duplicate id {id}"),
                    })
                }
                None => {
                    return Err(EmbedError::Text {
                        line,
                        reason: format!("id {id} outside 0..{n}"),
                    })
                }
            }
        }
        let rows: Vec<Vec<f32>> = ordered.into_iter().map(|r| r.expect("ids cover 0..n")).collect();
        EmbeddingMatrix::from_rows(dim, &rows)
    }

    /// Appends the rows of `other` after the rows of `self`.
    pub fn concat(&self, other: &EmbeddingMatrix) -> Result<Self, EmbedError> {
        if self.dim != other.dim {
            return Err(EmbedError::DimMismatch(self.dim, other.dim));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        EmbeddingMatrix::new(self.rows + other.rows, self.dim, data)
    }
}

/// Builds one row per resolution. A single source row is copied bit for bit;
/// several source rows are averaged element-wise, summing in `f64` and
/// rounding once to `f32`.
pub fn initialize_new_rows(
    original: &EmbeddingMatrix,
    resolutions: &[Resolution],
) -> Result<EmbeddingMatrix, EmbedError> {
    for r in resolutions {
        if let Some(&id) = r
            .provenance
            .ids()
            .iter()
            .find(|&&id| id as usize >= original.rows)
        {
            return Err(EmbedError::RowOutOfRange {
                id,
                rows: original.rows,
            });
        }
    }
    let dim = original.dim;
    let mut data = vec![0f32; resolutions.len() * dim];
    data.par_chunks_mut(dim.max(1))
        .zip(resolutions.par_iter())
        .for_each(|(out, r)| match r.provenance.ids() {
            [single] => out.copy_from_slice(original.row(*single as usize)),
            ids => {
                let n = ids.len() as f64;
                for (k, slot) in out.iter_mut().enumerate() {
                    let (mut sum, mut lo, mut hi) = (0f64, f32::INFINITY, f32::NEG_INFINITY);
                    for &id in ids {
                        let x = original.row(id as usize)[k];
                        sum += f64::from(x);
                        lo = lo.min(x);
                        hi = hi.max(x);
                    }
                    *slot = ((sum / n) as f32).clamp(lo, hi);
                }
            }
        });
    EmbeddingMatrix::new(resolutions.len(), dim, data)
}

pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingMatrix, EmbedError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| EmbedError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    EmbeddingMatrix::from_bytes(&bytes)
}

pub fn load_embeddings_tsv(path: impl AsRef<Path>) -> Result<EmbeddingMatrix, EmbedError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| EmbedError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    EmbeddingMatrix::from_tsv(&text)
}

pub fn save_embeddings(matrix: &EmbeddingMatrix, path: impl AsRef<Path>) -> Result<(), EmbedError> {
    let path = path.as_ref();
    fs::write(path, matrix.to_bytes()).map_err(|source| EmbedError::Io {
        path: path.to_path_buf(),
        source,
    })
}
