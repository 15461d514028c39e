use serde::Serialize;

use super::{MelConfig, ProsodyError};
use crate::scalar::Real;

/// Periodic Hann window of length `n`.
pub fn hann_window<T: Real>(n: usize) -> Vec<T> {
    let n_t = T::from_usize_lossy(n);
    (0..n)
        .map(|i| {
            let phase = T::TAU() * T::from_usize_lossy(i) / n_t;
            T::lit(0.5) - T::lit(0.5) * phase.cos()
        })
        .collect()
}

/// Index into a signal of length `len` under mirror reflection without
/// repeating the edge sample, extended periodically for short signals.
pub(crate) fn reflect_index(i: isize, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let m = i.rem_euclid(period);
    if m < len as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

/// Copies frame `t` of the centered, reflect-padded signal into `out`.
pub(crate) fn fill_frame<T: Real>(audio: &[T], t: usize, hop: usize, out: &mut [T]) {
    let start = (t * hop) as isize - (out.len() / 2) as isize;
    if start >= 0 && start as usize + out.len() <= audio.len() {
        out.copy_from_slice(&audio[start as usize..start as usize + out.len()]);
    } else {
        for (k, o) in out.iter_mut().enumerate() {
            *o = audio[reflect_index(start + k as isize, audio.len())];
        }
    }
}

pub(crate) fn check_audio<T: Real>(audio: &[T], sample_rate: u32, cfg: &MelConfig) -> Result<(), ProsodyError> {
    cfg.validate()?;
    if sample_rate != cfg.sample_rate {
        return Err(ProsodyError::SampleRateMismatch { expected: cfg.sample_rate, got: sample_rate });
    }
    if audio.is_empty() {
        return Err(ProsodyError::EmptyAudio);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackKind {
    PitchHz,
    Energy,
}

/// One value per analysis frame, on the mel frame grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTrack<T> {
    pub values: Vec<T>,
    pub kind: TrackKind,
}

impl<T> FrameTrack<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// RMS of each Hann-windowed frame.
pub fn extract_energy<T: Real>(audio: &[T], sample_rate: u32, cfg: &MelConfig) -> Result<FrameTrack<T>, ProsodyError> {
    check_audio(audio, sample_rate, cfg)?;
    let n = cfg.win_length;
    let window = hann_window::<T>(n);
    let mut frame = vec![T::zero(); n];
    let n_t = T::from_usize_lossy(n);
    let values = (0..cfg.frame_count(audio.len()))
        .map(|t| {
            fill_frame(audio, t, cfg.hop_length, &mut frame);
            let power: T = frame.iter().zip(&window).map(|(&x, &w)| (x * w) * (x * w)).sum();
            (power / n_t).sqrt()
        })
        .collect();
    Ok(FrameTrack { values, kind: TrackKind::Energy })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_matches_numpy_reflect_mode() {
        // np.pad([0,1,2,3], 3, mode="reflect") -> [3,2,1,0,1,2,3,2,1,0]
        let got: Vec<usize> = (-3..7).map(|i| reflect_index(i, 4)).collect();
        assert_eq!(got, vec![3, 2, 1, 0, 1, 2, 3, 2, 1, 0]);
        assert_eq!(reflect_index(-5, 1), 0);
    }

    #[test]
    fn hann_is_periodic() {
        let w: Vec<f64> = hann_window(4);
        let want = [0.0, 0.5, 1.0, 0.5];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_input_energy_matches_closed_form() {
        // mean of the squared periodic Hann window is 3/8
        let cfg = MelConfig::default();
        for a in [0.25f64, 1.0] {
            let x = vec![a; 8000];
            let e = extract_energy(&x, 16000, &cfg).unwrap();
            for v in e.values {
                assert!((v - a * (3.0f64 / 8.0).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn square_wave_energy_matches_closed_form() {
        let cfg = MelConfig::default();
        let x: Vec<f64> = (0..16000).map(|i| if (i / 40) % 2 == 0 { 0.8 } else { -0.8 }).collect();
        let e = extract_energy(&x, 16000, &cfg).unwrap();
        for v in e.values {
            assert!((v - 0.8 * (3.0f64 / 8.0).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn silence_and_linearity() {
        let cfg = MelConfig::default();
        let e = extract_energy(&vec![0.0f64; 4000], 16000, &cfg).unwrap();
        assert!(e.values.iter().all(|&v| v == 0.0));
        let x: Vec<f64> = (0..4000).map(|i| ((i * 7919) % 101) as f64 / 101.0 - 0.5).collect();
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let a = extract_energy(&x, 16000, &cfg).unwrap();
        let b = extract_energy(&x2, 16000, &cfg).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((2.0 * u - v).abs() < 1e-12);
        }
    }
}
