use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::frames::{check_audio, fill_frame, hann_window, FrameTrack, TrackKind};
use super::{MelConfig, ProsodyError};
use crate::scalar::Real;

/// Autocorrelation pitch tracker settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PitchConfig {
    pub min_hz: f64,
    pub max_hz: f64,
    /// Minimum normalized autocorrelation of a voiced frame.
    pub voicing_threshold: f64,
    /// Frames whose absolute peak is below this fraction of the signal peak
    /// are unvoiced.
    pub silence_threshold: f64,
    /// Penalty per octave favouring higher pitch candidates.
    pub octave_cost: f64,
}

impl Default for PitchConfig {
    fn default() -> Self {
        PitchConfig { min_hz: 60.0, max_hz: 400.0, voicing_threshold: 0.45, silence_threshold: 0.03, octave_cost: 0.01 }
    }
}

fn autocorrelation<T: Real>(x: &[T], fft_len: usize, planner: &mut FftPlanner<T>) -> Vec<T> {
    let fwd = planner.plan_fft_forward(fft_len);
    let inv = planner.plan_fft_inverse(fft_len);
    let mut buf = vec![Complex::new(T::zero(), T::zero()); fft_len];
    for (b, &v) in buf.iter_mut().zip(x) {
        b.re = v;
    }
    fwd.process(&mut buf);
    for b in buf.iter_mut() {
        *b = Complex::new(b.norm_sqr(), T::zero());
    }
    inv.process(&mut buf);
    let scale = T::from_usize_lossy(fft_len);
    buf[..x.len()].iter().map(|c| c.re / scale).collect()
}

/// Frame-synchronous f0 track in Hz; unvoiced frames are 0.
///
/// Each frame is mean-removed and Hann-windowed, its autocorrelation is
/// divided by the window's own autocorrelation, and the strongest local
/// maximum in the allowed lag range (refined by parabolic interpolation)
/// decides pitch and voicing.
pub fn extract_pitch<T: Real>(
    audio: &[T],
    sample_rate: u32,
    cfg: &MelConfig,
    pitch: &PitchConfig,
) -> Result<FrameTrack<T>, ProsodyError> {
    check_audio(audio, sample_rate, cfg)?;
    if !(pitch.min_hz > 0.0 && pitch.min_hz < pitch.max_hz) {
        return Err(ProsodyError::InvalidConfig("need 0 < min_hz < max_hz".into()));
    }
    let n = cfg.win_length;
    let sr = sample_rate as f64;
    let lag_min = ((sr / pitch.max_hz).floor() as usize).max(2);
    let lag_max = ((sr / pitch.min_hz).ceil() as usize).min(n / 2);
    if lag_min + 1 >= lag_max {
        return Err(ProsodyError::InvalidConfig("pitch range does not fit the analysis window".into()));
    }
    let fft_len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let window = hann_window::<T>(n);
    let r_w = autocorrelation(&window, fft_len, &mut planner);

    let global_peak = audio.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let mut frame = vec![T::zero(); n];
    let mut values = Vec::with_capacity(cfg.frame_count(audio.len()));
    let n_t = T::from_usize_lossy(n);
    for t in 0..cfg.frame_count(audio.len()) {
        fill_frame(audio, t, cfg.hop_length, &mut frame);
        let mean = frame.iter().copied().sum::<T>() / n_t;
        let local_peak = frame.iter().fold(T::zero(), |m, &v| m.max((v - mean).abs()));
        if global_peak == T::zero() || (local_peak / global_peak).as_f64() < pitch.silence_threshold {
            values.push(T::zero());
            continue;
        }
        for (v, &w) in frame.iter_mut().zip(&window) {
            *v = (*v - mean) * w;
        }
        let r_xw = autocorrelation(&frame, fft_len, &mut planner);
        if r_xw[0] <= T::zero() {
            values.push(T::zero());
            continue;
        }
        let r = |lag: usize| (r_xw[lag] / r_xw[0] / (r_w[lag] / r_w[0])).as_f64();

        let mut best: Option<(f64, f64)> = None;
        for lag in lag_min..=lag_max {
            let (a, b, c) = (r(lag - 1), r(lag), r(lag + 1));
            if !(b > a && b >= c) {
                continue;
            }
            let denom = a - 2.0 * b + c;
            let shift = if denom < 0.0 { (0.5 * (a - c) / denom).clamp(-0.5, 0.5) } else { 0.0 };
            let peak = b - 0.25 * (a - c) * shift;
            if peak <= pitch.voicing_threshold {
                continue;
            }
            let true_lag = lag as f64 + shift;
            let strength = peak - pitch.octave_cost * (pitch.min_hz * true_lag / sr).log2();
            if best.map_or(true, |(s, _)| strength > s) {
                best = Some((strength, true_lag));
            }
        }
        values.push(best.map_or(T::zero(), |(_, lag)| T::lit(sr / lag)));
    }
    Ok(FrameTrack { values, kind: TrackKind::PitchHz })
}
