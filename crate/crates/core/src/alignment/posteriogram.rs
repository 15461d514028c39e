use std::collections::HashMap;

use unicode_normalization::UnicodeNormalization;

use super::AlignError;
use crate::matrix::Matrix;
use crate::phoneme::PhonemeToken;
use crate::scalar::{logsumexp, Real};

/// Floor applied to log-probabilities before decoding, `ln(1e-12)`.
pub const LOG_FLOOR: f64 = -27.631021115928547;

const ROW_TOLERANCE: f64 = 1e-3;

/// Frame × phoneme-class log-probabilities from an acoustic model.
#[derive(Debug, Clone, PartialEq)]
pub struct Posteriogram<T> {
    values: Matrix<T>,
    hop_seconds: f64,
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl<T: Real> Posteriogram<T> {
    /// Validates shape, symbol uniqueness and that every row is a log
    /// distribution.
    pub fn new(values: Matrix<T>, hop_seconds: f64, symbols: Vec<String>) -> Result<Self, AlignError> {
        let bad = |m: String| AlignError::InvalidPosteriogram(m);
        if values.rows() == 0 || values.cols() == 0 {
            return Err(bad("needs at least one frame and one class".into()));
        }
        if symbols.len() != values.cols() {
            return Err(bad(format!("{} symbols for {} classes", symbols.len(), values.cols())));
        }
        if !(hop_seconds > 0.0 && hop_seconds.is_finite()) {
            return Err(AlignError::InvalidHop { hop: hop_seconds });
        }
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.nfd().collect::<String>(), i).is_some() {
                return Err(bad(format!("duplicate class symbol {s:?}")));
            }
        }
        for (t, row) in values.iter_rows().enumerate() {
            let total = logsumexp(row).as_f64();
            if !(total.abs() <= ROW_TOLERANCE) {
                return Err(bad(format!("frame {t} log-probabilities sum to {total} in log space")));
            }
        }
        Ok(Posteriogram { values, hop_seconds, symbols, index })
    }

    pub fn values(&self) -> &Matrix<T> {
        &self.values
    }

    pub fn hop_seconds(&self) -> f64 {
        self.hop_seconds
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn frames(&self) -> usize {
        self.values.rows()
    }

    pub fn class_of(&self, symbol: &str) -> Option<usize> {
        self.index.get(&symbol.nfd().collect::<String>()).copied()
    }
}

/// Gathers the posteriogram columns in transcript order, flooring every
/// value at [`LOG_FLOOR`]. Repeated phonemes repeat their column.
pub fn reorder<T: Real>(post: &Posteriogram<T>, transcript: &[PhonemeToken]) -> Result<Matrix<T>, AlignError> {
    let columns = transcript
        .iter()
        .map(|tok| post.class_of(&tok.symbol).ok_or_else(|| AlignError::SymbolNotInModel { symbol: tok.symbol.clone() }))
        .collect::<Result<Vec<_>, _>>()?;
    let floor = T::lit(LOG_FLOOR);
    let mut out = Matrix::filled(post.frames(), columns.len(), floor);
    for t in 0..post.frames() {
        let src = post.values.row(t);
        for (dst, &c) in out.row_mut(t).iter_mut().zip(&columns) {
            *dst = src[c].max(floor);
        }
    }
    Ok(out)
}
