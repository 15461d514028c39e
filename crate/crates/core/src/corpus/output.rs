/// Sample rate of the final output.
pub const OUTPUT_RATE: u32 = 48_000;
pub const OUTPUT_CUTOFF_HZ: f64 = 12_000.0;

/// Repeats every sample once: `[a, b]` becomes `[a, a, b, b]`.
pub fn repeat_samples(audio: &[f64]) -> Vec<f64> {
    audio.iter().flat_map(|&v| [v, v]).collect()
}

/// First-order low-pass `ωc / (s + ωc)` mapped to discrete time with the
/// bilinear transform (no frequency prewarping), zero initial state.
pub fn lowpass_first_order(audio: &[f64], cutoff_hz: f64, sample_rate: u32) -> Vec<f64> {
    let wc = std::f64::consts::TAU * cutoff_hz;
    let k = 2.0 * sample_rate as f64;
    let b = wc / (wc + k);
    let a1 = (wc - k) / (wc + k);
    let (mut x1, mut y1) = (0.0, 0.0);
    audio
        .iter()
        .map(|&x0| {
            let y0 = b * (x0 + x1) - a1 * y1;
            x1 = x0;
            y1 = y0;
            y0
        })
        .collect()
}

/// Scales to 16-bit, rounding half away from zero and clamping.
pub fn to_int16(audio: &[f64]) -> Vec<i16> {
    audio.iter().map(|&v| (v * 32767.0).round().clamp(-32768.0, 32767.0) as i16).collect()
}

/// 24 kHz float audio to 48 kHz int16: sample repetition, 12 kHz low-pass,
/// quantization.
pub fn finalize_output(audio: &[f64]) -> Vec<i16> {
    to_int16(&lowpass_first_order(&repeat_samples(audio), OUTPUT_CUTOFF_HZ, OUTPUT_RATE))
}
