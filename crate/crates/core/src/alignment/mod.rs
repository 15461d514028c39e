//! Phoneme-to-frame alignment over external posteriograms.

mod dijkstra;
mod mas;
mod posteriogram;
mod synth;

pub use dijkstra::dijkstra_align;
pub use mas::mas;
pub use posteriogram::{reorder, Posteriogram, LOG_FLOOR};
pub use synth::{adversarial_matrix, synthetic_posteriogram, SynthPosteriogram};

use crate::matrix::Matrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlignError {
    #[error("{frames} frames cannot cover {phones} phones")]
    TooFewFrames { frames: usize, phones: usize },
    #[error("score matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("score at frame {frame}, phone {phone} is NaN or +inf")]
    NonFiniteScore { frame: usize, phone: usize },
    #[error("symbol {symbol:?} is not a class of the acoustic model")]
    SymbolNotInModel { symbol: String },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("hop must be positive and finite, got {hop}")]
    InvalidHop { hop: f64 },
    #[error("posteriogram: {0}")]
    InvalidPosteriogram(String),
}

/// Per-phone frame counts and the total log-likelihood of the path.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentPath<T> {
    pub durations: Vec<usize>,
    pub score: T,
}

impl<T> AlignmentPath<T> {
    pub fn frames(&self) -> usize {
        self.durations.iter().sum()
    }

    pub fn zero_count(&self) -> usize {
        self.durations.iter().filter(|&&d| d == 0).count()
    }
}

/// Sum of `scores[t][phone(t)]` along the path described by `durations`.
pub fn path_score<T: Real>(scores: &Matrix<T>, durations: &[usize]) -> T {
    let mut t = 0;
    let mut total = T::zero();
    for (j, &d) in durations.iter().enumerate() {
        for _ in 0..d {
            total += scores.get(t, j);
            t += 1;
        }
    }
    total
}

pub(crate) fn check_scores<T: Real>(scores: &Matrix<T>) -> Result<(), AlignError> {
    if scores.rows() == 0 || scores.cols() == 0 {
        return Err(AlignError::EmptyMatrix);
    }
    for (t, row) in scores.iter_rows().enumerate() {
        if let Some(j) = row.iter().position(|v| v.is_nan() || *v == T::infinity()) {
            return Err(AlignError::NonFiniteScore { frame: t, phone: j });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SkipReport {
    pub utterances: usize,
    pub phones: usize,
    pub mas_zero_rate: f64,
    pub dijkstra_zero_rate: f64,
    /// Zero-duration phone counts per matrix: (MAS, Dijkstra).
    pub per_utterance: Vec<(usize, usize)>,
}

/// Runs both decoders on every matrix and reports the fraction of phones
/// that receive zero frames.
pub fn compare_skip_rate<T: Real>(corpus: &[Matrix<T>]) -> Result<SkipReport, AlignError> {
    if corpus.is_empty() {
        return Err(AlignError::EmptyCorpus);
    }
    let mut per_utterance = Vec::with_capacity(corpus.len());
    let mut phones = 0;
    for scores in corpus {
        let m = mas(scores)?;
        let d = dijkstra_align(scores)?;
        phones += scores.cols();
        per_utterance.push((m.zero_count(), d.zero_count()));
    }
    let (mz, dz) = per_utterance.iter().fold((0, 0), |(a, b), &(x, y)| (a + x, b + y));
    Ok(SkipReport {
        utterances: corpus.len(),
        phones,
        mas_zero_rate: mz as f64 / phones as f64,
        dijkstra_zero_rate: dz as f64 / phones as f64,
        per_utterance,
    })
}

pub fn durations_to_seconds(durations: &[usize], hop: f64) -> Result<Vec<f64>, AlignError> {
    if !(hop > 0.0 && hop.is_finite()) {
        return Err(AlignError::InvalidHop { hop });
    }
    Ok(durations.iter().map(|&d| d as f64 * hop).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seconds_conversion() {
        assert_eq!(durations_to_seconds(&[2, 1], 0.016).unwrap(), vec![0.032, 0.016]);
        assert!(durations_to_seconds(&[], 0.016).unwrap().is_empty());
        assert_eq!(durations_to_seconds(&[1], 0.0), Err(AlignError::InvalidHop { hop: 0.0 }));
        assert!(durations_to_seconds(&[1], f64::NAN).is_err());
    }

    #[test]
    fn skip_rate_needs_corpus() {
        assert_eq!(compare_skip_rate::<f64>(&[]), Err(AlignError::EmptyCorpus));
    }

    #[test]
    fn skip_rate_counts_zero_durations() {
        let lp = |p: f64| p.ln();
        let weak = Matrix::from_rows(&[
            [lp(0.9), lp(1e-9), lp(0.1)],
            [lp(0.9), lp(1e-9), lp(0.1)],
            [lp(0.1), lp(1e-9), lp(0.9)],
            [lp(0.1), lp(1e-9), lp(0.9)],
        ])
        .unwrap();
        let r = compare_skip_rate(&[weak]).unwrap();
        assert_eq!(r.per_utterance, vec![(0, 1)]);
        assert_eq!(r.mas_zero_rate, 0.0);
        assert!((r.dijkstra_zero_rate - 1.0 / 3.0).abs() < 1e-12);
    }
}
