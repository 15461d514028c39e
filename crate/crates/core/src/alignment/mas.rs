use super::{check_scores, AlignError, AlignmentPath};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Monotonic alignment search.
///
/// Finds the assignment of frames to phones that is monotonic, covers every
/// phone with at least one frame and maximizes the summed log-likelihood.
/// Among equally good paths the one whose phone changes happen latest is
/// returned, so earlier phones keep the longer share.
pub fn mas<T: Real>(scores: &Matrix<T>) -> Result<AlignmentPath<T>, AlignError> {
    check_scores(scores)?;
    let (frames, phones) = (scores.rows(), scores.cols());
    if frames < phones {
        return Err(AlignError::TooFewFrames { frames, phones });
    }
    let neg_inf = T::neg_infinity();
    let mut q = Matrix::filled(frames, phones, neg_inf);
    q.set(0, 0, scores.get(0, 0));
    for t in 1..frames {
        // phone j is reachable at frame t and can still finish in time
        let lo = (phones + t).saturating_sub(frames);
        let hi = t.min(phones - 1);
        for j in lo..=hi {
            let stay = q.get(t - 1, j);
            let advance = if j > 0 { q.get(t - 1, j - 1) } else { neg_inf };
            q.set(t, j, stay.max(advance) + scores.get(t, j));
        }
    }

    let mut durations = vec![0usize; phones];
    let mut j = phones - 1;
    durations[j] = 1;
    for t in (1..frames).rev() {
        if j > 0 && (j == t || q.get(t - 1, j - 1) >= q.get(t - 1, j)) {
            j -= 1;
        }
        durations[j] += 1;
    }
    debug_assert_eq!(j, 0);
    Ok(AlignmentPath { durations, score: q.get(frames - 1, phones - 1) })
}
