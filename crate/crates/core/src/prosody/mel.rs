use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::frames::{check_audio, fill_frame, hann_window};
use super::ProsodyError;
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Analysis parameters shared by the mel, pitch and energy extractors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MelConfig {
    pub sample_rate: u32,
    /// Window and FFT size in samples.
    pub win_length: usize,
    pub hop_length: usize,
    pub n_mels: usize,
    pub fmin: f64,
    pub fmax: f64,
    /// Lower bound applied to mel energies before `log10`.
    pub log_floor: f64,
}

impl Default for MelConfig {
    fn default() -> Self {
        MelConfig { sample_rate: 16000, win_length: 1024, hop_length: 256, n_mels: 80, fmin: 0.0, fmax: 8000.0, log_floor: 1e-10 }
    }
}

impl MelConfig {
    pub fn validate(&self) -> Result<(), ProsodyError> {
        let fail = |m: &str| Err(ProsodyError::InvalidConfig(m.to_string()));
        if self.sample_rate == 0 {
            return fail("sample_rate must be positive");
        }
        if self.win_length < 2 || self.win_length % 2 != 0 {
            return fail("win_length must be an even number of at least 2");
        }
        if self.hop_length == 0 || self.hop_length > self.win_length {
            return fail("hop_length must be in 1..=win_length");
        }
        if self.n_mels == 0 {
            return fail("n_mels must be at least 1");
        }
        if !(self.fmin >= 0.0 && self.fmin < self.fmax && self.fmax <= self.sample_rate as f64 / 2.0) {
            return fail("need 0 <= fmin < fmax <= sample_rate / 2");
        }
        if !(self.log_floor > 0.0) {
            return fail("log_floor must be positive");
        }
        Ok(())
    }

    /// Frames produced for `len` samples with centered framing.
    pub fn frame_count(&self, len: usize) -> usize {
        1 + len / self.hop_length
    }

    pub fn hop_seconds(&self) -> f64 {
        self.hop_length as f64 / self.sample_rate as f64
    }

    pub fn n_bins(&self) -> usize {
        self.win_length / 2 + 1
    }
}

const F_SP: f64 = 200.0 / 3.0;
const MIN_LOG_HZ: f64 = 1000.0;
const MIN_LOG_MEL: f64 = MIN_LOG_HZ / F_SP;

fn log_step() -> f64 {
    6.4f64.ln() / 27.0
}

/// Slaney mel scale: linear below 1 kHz, logarithmic above.
pub fn hz_to_mel(hz: f64) -> f64 {
    if hz >= MIN_LOG_HZ {
        MIN_LOG_MEL + (hz / MIN_LOG_HZ).ln() / log_step()
    } else {
        hz / F_SP
    }
}

pub fn mel_to_hz(mel: f64) -> f64 {
    if mel >= MIN_LOG_MEL {
        MIN_LOG_HZ * (log_step() * (mel - MIN_LOG_MEL)).exp()
    } else {
        F_SP * mel
    }
}

/// Triangular, area-normalized mel filters as an `n_mels × (n_fft/2 + 1)`
/// matrix.
pub fn mel_filterbank<T: Real>(sample_rate: u32, n_fft: usize, n_mels: usize, fmin: f64, fmax: f64) -> Matrix<T> {
    let n_bins = n_fft / 2 + 1;
    let (lo, hi) = (hz_to_mel(fmin), hz_to_mel(fmax));
    let edges: Vec<f64> =
        (0..n_mels + 2).map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (n_mels + 1) as f64)).collect();
    let mut fb = Matrix::filled(n_mels, n_bins, T::zero());
    for m in 0..n_mels {
        let (left, center, right) = (edges[m], edges[m + 1], edges[m + 2]);
        let norm = 2.0 / (right - left);
        for k in 0..n_bins {
            let f = k as f64 * sample_rate as f64 / n_fft as f64;
            let rise = (f - left) / (center - left);
            let fall = (right - f) / (right - center);
            let w = rise.min(fall).max(0.0);
            fb.set(m, k, T::lit(w * norm));
        }
    }
    fb
}

/// Log-mel extractor with cached window, filterbank and FFT plan.
pub struct MelExtractor<T: Real> {
    cfg: MelConfig,
    window: Vec<T>,
    /// Per mel band: first nonzero bin and the nonzero weights.
    bands: Vec<(usize, Vec<T>)>,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> MelExtractor<T> {
    pub fn new(cfg: MelConfig) -> Result<Self, ProsodyError> {
        cfg.validate()?;
        let fb = mel_filterbank::<T>(cfg.sample_rate, cfg.win_length, cfg.n_mels, cfg.fmin, cfg.fmax);
        let bands = fb
            .iter_rows()
            .map(|row| {
                let first = row.iter().position(|&w| w > T::zero()).unwrap_or(0);
                let last = row.iter().rposition(|&w| w > T::zero()).map_or(first, |l| l + 1);
                (first, row[first..last].to_vec())
            })
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(cfg.win_length);
        Ok(MelExtractor { window: hann_window(cfg.win_length), bands, fft, cfg })
    }

    pub fn config(&self) -> &MelConfig {
        &self.cfg
    }

    /// `frames × n_mels` matrix of `log10(max(floor, mel energy))` computed
    /// from the STFT magnitude.
    pub fn compute(&self, audio: &[T], sample_rate: u32) -> Result<Matrix<T>, ProsodyError> {
        check_audio(audio, sample_rate, &self.cfg)?;
        let n = self.cfg.win_length;
        let frames = self.cfg.frame_count(audio.len());
        let floor = T::lit(self.cfg.log_floor);
        let mut out = Matrix::filled(frames, self.cfg.n_mels, T::zero());
        let mut raw = vec![T::zero(); n];
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); self.fft.get_inplace_scratch_len()];
        let mut mag = vec![T::zero(); self.cfg.n_bins()];
        for t in 0..frames {
            fill_frame(audio, t, self.cfg.hop_length, &mut raw);
            for ((b, &x), &w) in buf.iter_mut().zip(&raw).zip(&self.window) {
                *b = Complex::new(x * w, T::zero());
            }
            self.fft.process_with_scratch(&mut buf, &mut scratch);
            for (m, b) in mag.iter_mut().zip(&buf) {
                *m = b.norm();
            }
            for (dst, (first, weights)) in out.row_mut(t).iter_mut().zip(&self.bands) {
                let e: T = weights.iter().zip(&mag[*first..]).map(|(&w, &m)| w * m).sum();
                *dst = e.max(floor).log10();
            }
        }
        Ok(out)
    }
}

pub fn mel_spectrogram<T: Real>(audio: &[T], sample_rate: u32, cfg: &MelConfig) -> Result<Matrix<T>, ProsodyError> {
    MelExtractor::new(cfg.clone())?.compute(audio, sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mel_scale_round_trips_and_is_continuous() {
        for hz in [0.0, 440.0, 999.0, 1000.0, 4000.0, 8000.0] {
            assert!((mel_to_hz(hz_to_mel(hz)) - hz).abs() < 1e-9);
        }
        assert!((hz_to_mel(1000.0) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn filterbank_bands_have_unit_area_in_hz() {
        // each triangle has height 2/(right-left) and base (right-left)
        let fb: Matrix<f64> = mel_filterbank(16000, 1024, 80, 0.0, 8000.0);
        assert_eq!((fb.rows(), fb.cols()), (80, 513));
        let df = 16000.0 / 1024.0;
        for m in 20..80 {
            let area: f64 = fb.row(m).iter().sum::<f64>() * df;
            assert!((area - 1.0).abs() < 0.05, "band {m}: {area}");
        }
    }

    #[test]
    fn silence_hits_the_floor() {
        let m = mel_spectrogram(&vec![0.0f64; 16000], 16000, &MelConfig::default()).unwrap();
        assert_eq!((m.rows(), m.cols()), (63, 80));
        assert!(m.as_slice().iter().all(|&v| v == -10.0));
    }

    #[test]
    fn sine_peaks_in_the_band_containing_its_frequency() {
        let cfg = MelConfig::default();
        let x: Vec<f64> = (0..16000).map(|i| (std::f64::consts::TAU * 1000.0 * i as f64 / 16000.0).sin()).collect();
        let m = mel_spectrogram(&x, 16000, &cfg).unwrap();
        let fb: Matrix<f64> = mel_filterbank(16000, 1024, 80, 0.0, 8000.0);
        let bin = (1000.0f64 / (16000.0 / 1024.0)).round() as usize;
        let expected = (0..80).max_by(|&a, &b| fb.get(a, bin).total_cmp(&fb.get(b, bin))).unwrap();
        for t in 0..m.rows() {
            let arg = (0..80).max_by(|&a, &b| m.get(t, a).total_cmp(&m.get(t, b))).unwrap();
            assert!(arg.abs_diff(expected) <= 1, "frame {t}: {arg} vs {expected}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = MelConfig::default();
        assert_eq!(mel_spectrogram::<f64>(&[], 16000, &cfg), Err(ProsodyError::EmptyAudio));
        assert_eq!(
            mel_spectrogram(&[0.0f64; 10], 22050, &cfg),
            Err(ProsodyError::SampleRateMismatch { expected: 16000, got: 22050 })
        );
        let bad = MelConfig { hop_length: 2048, ..MelConfig::default() };
        assert!(matches!(mel_spectrogram(&[0.0f64; 10], 16000, &bad), Err(ProsodyError::InvalidConfig(_))));
        let bad = MelConfig { fmax: 9000.0, ..MelConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn deterministic_and_tiny_inputs() {
        let cfg = MelConfig::default();
        let x: Vec<f32> = (0..3000).map(|i| ((i * 7919 % 211) as f32 / 211.0) - 0.5).collect();
        let a = mel_spectrogram(&x, 16000, &cfg).unwrap();
        let b = mel_spectrogram(&x, 16000, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(mel_spectrogram(&[0.3f32], 16000, &cfg).unwrap().rows(), 1);
    }
}
