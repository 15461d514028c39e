use rand::Rng;

use super::{AlignError, Posteriogram};
use crate::matrix::Matrix;
use crate::scalar::{logsumexp, Real};

/// Controls for [`synthetic_posteriogram`].
#[derive(Debug, Clone, Copy)]
pub struct SynthPosteriogram {
    /// Logit given to the true class of a frame.
    pub sharpness: f64,
    /// Frames on each side of a boundary that also favour the neighbour.
    pub blur: usize,
    /// Uniform logit noise amplitude on every cell.
    pub noise: f64,
}

impl Default for SynthPosteriogram {
    fn default() -> Self {
        SynthPosteriogram { sharpness: 8.0, blur: 1, noise: 0.5 }
    }
}

/// Renders a posteriogram whose most likely path follows `durations` over
/// the class indices in `classes` (one per phone).
pub fn synthetic_posteriogram<T: Real, R: Rng>(
    symbols: &[String],
    classes: &[usize],
    durations: &[usize],
    hop_seconds: f64,
    params: SynthPosteriogram,
    rng: &mut R,
) -> Result<Posteriogram<T>, AlignError> {
    if classes.len() != durations.len() {
        return Err(AlignError::InvalidPosteriogram(format!(
            "{} classes for {} durations",
            classes.len(),
            durations.len()
        )));
    }
    let frames: usize = durations.iter().sum();
    let c = symbols.len();
    let mut owner = Vec::with_capacity(frames);
    for (j, &d) in durations.iter().enumerate() {
        owner.extend(std::iter::repeat(j).take(d));
    }
    let mut values = Matrix::filled(frames, c, T::zero());
    let mut logits = vec![0.0f64; c];
    for t in 0..frames {
        for v in logits.iter_mut() {
            *v = if params.noise > 0.0 { rng.gen_range(-params.noise..=params.noise) } else { 0.0 };
        }
        let j = owner[t];
        logits[classes[j]] += params.sharpness;
        for dt in 1..=params.blur {
            let half = params.sharpness / 2.0;
            if t >= dt && owner[t - dt] != j {
                logits[classes[owner[t - dt]]] += half / dt as f64;
            }
            if t + dt < frames && owner[t + dt] != j {
                logits[classes[owner[t + dt]]] += half / dt as f64;
            }
        }
        let norm = logsumexp(&logits);
        for (dst, &v) in values.row_mut(t).iter_mut().zip(&logits) {
            *dst = T::lit(v - norm);
        }
    }
    Posteriogram::new(values, hop_seconds, symbols.to_vec())
}

/// A transcript-ordered score matrix in which phone `weak` has probability
/// `1e-9` in every frame while the other phones follow random durations.
/// `weak` must be an interior phone.
pub fn adversarial_matrix<T: Real, R: Rng>(frames: usize, phones: usize, weak: usize, rng: &mut R) -> Matrix<T> {
    assert!(phones >= 3 && weak > 0 && weak + 1 < phones && frames >= phones);
    // split frames among the strong phones, at least one each
    let strong = phones - 1;
    let mut cuts: Vec<usize> = (1..frames).collect();
    for i in 0..strong - 1 {
        let k = rng.gen_range(i..cuts.len());
        cuts.swap(i, k);
    }
    let mut bounds: Vec<usize> = cuts[..strong - 1].to_vec();
    bounds.sort_unstable();
    bounds.push(frames);
    let mut owner = Vec::with_capacity(frames);
    let mut start = 0;
    for (s, &end) in bounds.iter().enumerate() {
        let phone = if s >= weak { s + 1 } else { s };
        owner.extend(std::iter::repeat(phone).take(end - start));
        start = end;
    }
    let mut m = Matrix::filled(frames, phones, T::zero());
    for t in 0..frames {
        let hit: f64 = rng.gen_range(0.6..0.95);
        let rest = (1.0 - hit) / (phones - 2) as f64;
        for j in 0..phones {
            let p = if j == weak {
                1e-9
            } else if j == owner[t] {
                hit
            } else {
                rest * rng.gen_range(0.5..1.5)
            };
            m.set(t, j, T::lit(p.ln()));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::super::{dijkstra_align, mas};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sharp_synthetic_path_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let symbols: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let classes = [0, 2, 1, 2, 3];
        let durations = [4, 2, 6, 3, 5];
        let params = SynthPosteriogram { sharpness: 10.0, blur: 0, noise: 0.2 };
        let post: Posteriogram<f64> = synthetic_posteriogram(&symbols, &classes, &durations, 0.016, params, &mut rng).unwrap();
        let toks: Vec<_> = classes.iter().map(|&c| crate::phoneme::PhonemeToken::new(symbols[c].clone())).collect();
        let scores = super::super::reorder(&post, &toks).unwrap();
        assert_eq!(mas(&scores).unwrap().durations, durations);
    }

    #[test]
    fn blurred_rows_stay_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let symbols: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let post: Posteriogram<f32> =
            synthetic_posteriogram(&symbols, &[0, 1, 0], &[3, 3, 3], 0.016, SynthPosteriogram::default(), &mut rng)
                .unwrap();
        assert_eq!(post.frames(), 9);
    }

    #[test]
    fn adversarial_column_is_skipped_only_by_dijkstra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m: Matrix<f64> = adversarial_matrix(30, 5, 2, &mut rng);
            assert!(m.column(2).iter().all(|&v| (v - 1e-9f64.ln()).abs() < 1e-12));
            assert_eq!(dijkstra_align(&m).unwrap().durations[2], 0);
            assert!(mas(&m).unwrap().durations.iter().all(|&d| d >= 1));
        }
    }
}
