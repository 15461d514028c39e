use serde::{Deserialize, Serialize};

use super::frames::{FrameTrack, TrackKind};
use super::ProsodyError;
use crate::phoneme::{FeatureTable, PhonemeToken};
use crate::scalar::Real;

/// Mean of each phone's frame span. Pitch tracks average only their voiced
/// (nonzero) frames, giving 0 when a span has none.
pub fn average_per_phone<T: Real>(track: &FrameTrack<T>, durations: &[usize]) -> Result<Vec<T>, ProsodyError> {
    let total: usize = durations.iter().sum();
    if total != track.len() {
        return Err(ProsodyError::LengthMismatch { expected: track.len(), got: total });
    }
    let mut out = Vec::with_capacity(durations.len());
    let mut start = 0;
    for &d in durations {
        let span = &track.values[start..start + d];
        start += d;
        let (sum, count) = span
            .iter()
            .filter(|&&v| track.kind != TrackKind::PitchHz || v != T::zero())
            .fold((T::zero(), 0usize), |(s, c), &v| (s + v, c + 1));
        out.push(if count == 0 { T::zero() } else { sum / T::from_usize_lossy(count) });
    }
    Ok(out)
}

/// Zeroes the pitch of unvoiced phones and both pitch and energy of
/// silence tokens.
pub fn zero_silences<T: Real>(
    pitch: &[T],
    energy: &[T],
    tokens: &[PhonemeToken],
    table: &FeatureTable,
) -> Result<(Vec<T>, Vec<T>), ProsodyError> {
    for len in [pitch.len(), energy.len()] {
        if len != tokens.len() {
            return Err(ProsodyError::LengthMismatch { expected: tokens.len(), got: len });
        }
    }
    let mut p = pitch.to_vec();
    let mut e = energy.to_vec();
    for (i, tok) in tokens.iter().enumerate() {
        if tok.is_silence {
            p[i] = T::zero();
            e[i] = T::zero();
        } else if table.is_unvoiced(&tok.symbol) {
            p[i] = T::zero();
        }
    }
    Ok((p, e))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    /// `v / mean(nonzero)`.
    #[default]
    Divide,
    /// `v - mean(nonzero)` on nonzero entries.
    Subtract,
}

/// Normalizes by the mean of the nonzero values; zeros stay zero and an
/// all-zero input is returned unchanged.
pub fn normalize_per_utterance<T: Real>(values: &[T], mode: NormMode) -> Vec<T> {
    let (sum, count) =
        values.iter().filter(|&&v| v != T::zero()).fold((T::zero(), 0usize), |(s, c), &v| (s + v, c + 1));
    if count == 0 {
        return values.to_vec();
    }
    let mean = sum / T::from_usize_lossy(count);
    values
        .iter()
        .map(|&v| {
            if v == T::zero() {
                v
            } else {
                match mode {
                    NormMode::Divide => v / mean,
                    NormMode::Subtract => v - mean,
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhoneProsody<T> {
    pub duration_frames: usize,
    pub pitch: T,
    pub energy: T,
}

/// Averages, zeroes and normalizes pitch and energy per phone.
pub fn phone_prosody<T: Real>(
    pitch: &FrameTrack<T>,
    energy: &FrameTrack<T>,
    durations: &[usize],
    tokens: &[PhonemeToken],
    table: &FeatureTable,
    mode: NormMode,
) -> Result<Vec<PhoneProsody<T>>, ProsodyError> {
    if durations.len() != tokens.len() {
        return Err(ProsodyError::LengthMismatch { expected: tokens.len(), got: durations.len() });
    }
    let p = average_per_phone(pitch, durations)?;
    let e = average_per_phone(energy, durations)?;
    let (p, e) = zero_silences(&p, &e, tokens, table)?;
    let p = normalize_per_utterance(&p, mode);
    let e = normalize_per_utterance(&e, mode);
    Ok(durations
        .iter()
        .zip(p.into_iter().zip(e))
        .map(|(&duration_frames, (pitch, energy))| PhoneProsody { duration_frames, pitch, energy })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn track(kind: TrackKind, v: &[f64]) -> FrameTrack<f64> {
        FrameTrack { values: v.to_vec(), kind }
    }

    #[test]
    fn averages_spans() {
        assert_eq!(average_per_phone(&track(TrackKind::Energy, &[100.0, 110.0, 120.0]), &[3]).unwrap(), vec![110.0]);
        assert_eq!(average_per_phone(&track(TrackKind::PitchHz, &[0.0, 200.0, 0.0]), &[3]).unwrap(), vec![200.0]);
        assert_eq!(average_per_phone(&track(TrackKind::Energy, &[0.0, 3.0, 0.0]), &[3]).unwrap(), vec![1.0]);
        assert_eq!(average_per_phone(&track(TrackKind::PitchHz, &[0.0, 0.0, 5.0]), &[2, 0, 1]).unwrap(), vec![0.0, 0.0, 5.0]);
        assert_eq!(
            average_per_phone(&track(TrackKind::Energy, &[1.0, 2.0]), &[1, 2]),
            Err(ProsodyError::LengthMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn zeroing_rules() {
        let table = FeatureTable::builtin();
        let toks = [PhonemeToken::new("s"), PhonemeToken::silence(","), PhonemeToken::new("a")];
        let (p, e) = zero_silences(&[180.0, 150.0, 200.0], &[0.5, 0.4, 0.7], &toks, table).unwrap();
        assert_eq!(p, vec![0.0, 0.0, 200.0]);
        assert_eq!(e, vec![0.5, 0.0, 0.7]);
        assert!(zero_silences(&[1.0], &[1.0, 2.0], &toks[..1], table).is_err());
    }

    #[test]
    fn normalization_examples() {
        let v = normalize_per_utterance(&[2.0f64, 4.0, 0.0], NormMode::Divide);
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-15 && (v[1] - 4.0 / 3.0).abs() < 1e-15 && v[2] == 0.0);
        assert_eq!(normalize_per_utterance(&[0.0, 0.0], NormMode::Divide), vec![0.0, 0.0]);
        assert_eq!(normalize_per_utterance(&[2.5f64; 3], NormMode::Divide), vec![1.0; 3]);
        assert_eq!(normalize_per_utterance(&[2.0, 4.0, 0.0], NormMode::Subtract), vec![-1.0, 1.0, 0.0]);
        assert!(normalize_per_utterance::<f64>(&[], NormMode::Divide).is_empty());
    }

    #[test]
    fn full_phone_pipeline() {
        let table = FeatureTable::builtin();
        let toks = [PhonemeToken::new("a"), PhonemeToken::new("s"), PhonemeToken::silence(","), PhonemeToken::new("o")];
        let pitch = track(TrackKind::PitchHz, &[100.0, 100.0, 0.0, 150.0, 0.0, 0.0, 300.0]);
        let energy = track(TrackKind::Energy, &[1.0, 1.0, 2.0, 2.0, 0.1, 0.1, 3.0]);
        let out = phone_prosody(&pitch, &energy, &[2, 2, 2, 1], &toks, table, NormMode::Divide).unwrap();
        let p: Vec<f64> = out.iter().map(|x| x.pitch).collect();
        let e: Vec<f64> = out.iter().map(|x| x.energy).collect();
        assert_eq!(p, vec![0.5, 0.0, 0.0, 1.5]);
        assert_eq!(e, vec![0.5, 1.0, 0.0, 1.5]);
    }

    fn values() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(prop_oneof![Just(0.0), 1e-3f64..1e3], 1..40)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn scale_invariance(v in values(), k in 1e-3f64..1e3) {
            let scaled: Vec<f64> = v.iter().map(|x| k * x).collect();
            let a = normalize_per_utterance(&v, NormMode::Divide);
            let b = normalize_per_utterance(&scaled, NormMode::Divide);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }

        #[test]
        fn zero_preservation(v in values()) {
            let n = normalize_per_utterance(&v, NormMode::Divide);
            for (x, y) in v.iter().zip(&n) {
                prop_assert_eq!(*x == 0.0, *y == 0.0);
            }
        }

        #[test]
        fn idempotence(v in values()) {
            let once = normalize_per_utterance(&v, NormMode::Divide);
            let twice = normalize_per_utterance(&once, NormMode::Divide);
            for (x, y) in once.iter().zip(&twice) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }

        #[test]
        fn averaging_commutes_with_concatenation(
            a in prop::collection::vec(0usize..5, 1..6),
            b in prop::collection::vec(0usize..5, 1..6),
            seed in prop::collection::vec(prop_oneof![Just(0.0), 50.0f64..400.0], 60),
        ) {
            let (na, nb): (usize, usize) = (a.iter().sum(), b.iter().sum());
            let ta = track(TrackKind::PitchHz, &seed[..na]);
            let tb = track(TrackKind::PitchHz, &seed[na..na + nb]);
            let both = track(TrackKind::PitchHz, &seed[..na + nb]);
            let durations: Vec<usize> = a.iter().chain(&b).copied().collect();
            let mut want = average_per_phone(&ta, &a).unwrap();
            want.extend(average_per_phone(&tb, &b).unwrap());
            prop_assert_eq!(average_per_phone(&both, &durations).unwrap(), want);
        }
    }
}
