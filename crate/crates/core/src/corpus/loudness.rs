use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Two-stage K-weighting biquads for one sample rate.
#[derive(Debug, Clone, Copy)]
struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
}

impl Biquad {
    fn run(&self, x: &[f64]) -> Vec<f64> {
        let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
        x.iter()
            .map(|&x0| {
                let y0 = self.b[0] * x0 + self.b[1] * x1 + self.b[2] * x2 - self.a[0] * y1 - self.a[1] * y2;
                x2 = x1;
                x1 = x0;
                y2 = y1;
                y1 = y0;
                y0
            })
            .collect()
    }
}

fn k_weighting(sample_rate: f64) -> [Biquad; 2] {
    // high shelf
    let (gain_db, q, fc) = (3.999843853973347, 0.7071752369554196, 1681.974450955533);
    let k = (std::f64::consts::PI * fc / sample_rate).tan();
    let vh = 10f64.powf(gain_db / 20.0);
    let vb = vh.powf(0.4996667741545416);
    let a0 = 1.0 + k / q + k * k;
    let shelf = Biquad {
        b: [(vh + vb * k / q + k * k) / a0, 2.0 * (k * k - vh) / a0, (vh - vb * k / q + k * k) / a0],
        a: [2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0],
    };
    // high pass
    let (q, fc) = (0.5003270373238773, 38.13547087602444);
    let k = (std::f64::consts::PI * fc / sample_rate).tan();
    let a0 = 1.0 + k / q + k * k;
    let highpass = Biquad { b: [1.0, -2.0, 1.0], a: [2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0] };
    [shelf, highpass]
}

const BLOCK_SECONDS: f64 = 0.4;
const STEP_SECONDS: f64 = 0.1;
const ABSOLUTE_GATE: f64 = -70.0;
const RELATIVE_GATE: f64 = -10.0;
const OFFSET: f64 = -0.691;

fn block_loudness(z: f64) -> f64 {
    OFFSET + 10.0 * z.log10()
}

/// Integrated loudness of a mono signal in LUFS (ITU-R BS.1770-4 gating).
/// Signals with no block above the absolute gate measure `-inf`.
pub fn measure_loudness(audio: &[f64], sample_rate: u32) -> Result<f64, CorpusError> {
    let sr = sample_rate as f64;
    let block = (BLOCK_SECONDS * sr).round() as usize;
    let step = (STEP_SECONDS * sr).round() as usize;
    if sample_rate == 0 || audio.len() < block || block == 0 {
        return Err(CorpusError::TooShort { samples: audio.len(), needed: block });
    }
    let [shelf, hp] = k_weighting(sr);
    let y = hp.run(&shelf.run(audio));
    let squares: Vec<f64> = y.iter().map(|v| v * v).collect();
    let blocks = (audio.len() - block) / step + 1;
    let z: Vec<f64> = (0..blocks)
        .map(|j| squares[j * step..j * step + block].iter().sum::<f64>() / block as f64)
        .collect();
    let above_abs: Vec<f64> = z.iter().copied().filter(|&zj| block_loudness(zj) >= ABSOLUTE_GATE).collect();
    if above_abs.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    let relative = block_loudness(above_abs.iter().sum::<f64>() / above_abs.len() as f64) + RELATIVE_GATE;
    let gated: Vec<f64> = above_abs.into_iter().filter(|&zj| block_loudness(zj) > relative).collect();
    if gated.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(block_loudness(gated.iter().sum::<f64>() / gated.len() as f64))
}

/// Level measure used for normalization targets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelUnit {
    /// Gated integrated loudness.
    #[default]
    Lufs,
    /// Plain RMS level relative to full scale.
    RmsDbfs,
}

pub fn measure_level(audio: &[f64], sample_rate: u32, unit: LevelUnit) -> Result<f64, CorpusError> {
    match unit {
        LevelUnit::Lufs => measure_loudness(audio, sample_rate),
        LevelUnit::RmsDbfs => {
            if audio.is_empty() {
                return Err(CorpusError::TooShort { samples: 0, needed: 1 });
            }
            let ms = audio.iter().map(|v| v * v).sum::<f64>() / audio.len() as f64;
            Ok(10.0 * ms.log10())
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakMode {
    /// Keep the exact target gain and report overshoot.
    #[default]
    Warn,
    /// Scale down so the peak sits at full scale, missing the target.
    Limit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub samples: Vec<f64>,
    pub gain_db: f64,
    pub measured_before: f64,
    /// Some sample magnitude exceeded 1.0 after the loudness gain.
    pub peak_exceeded: bool,
}

/// Applies the gain that brings the signal to `target`.
///
/// A single gain is exact except when blocks cross the fixed absolute gate,
/// so the measurement is repeated and the gain refined a few times.
pub fn normalize_loudness(
    audio: &[f64],
    sample_rate: u32,
    target: f64,
    unit: LevelUnit,
    peak: PeakMode,
) -> Result<Normalized, CorpusError> {
    let before = measure_level(audio, sample_rate, unit)?;
    if !before.is_finite() {
        return Err(CorpusError::Unmeasurable);
    }
    let mut gain_db = target - before;
    for _ in 0..4 {
        let g = 10f64.powf(gain_db / 20.0);
        let scaled: Vec<f64> = audio.iter().map(|v| v * g).collect();
        let level = measure_level(&scaled, sample_rate, unit)?;
        if !level.is_finite() || (level - target).abs() < 1e-3 {
            break;
        }
        gain_db += target - level;
    }
    let mut g = 10f64.powf(gain_db / 20.0);
    let max_abs = audio.iter().fold(0.0f64, |m, v| m.max(v.abs())) * g;
    let peak_exceeded = max_abs > 1.0;
    if peak_exceeded && peak == PeakMode::Limit {
        g /= max_abs;
        gain_db = 20.0 * g.log10();
    }
    Ok(Normalized { samples: audio.iter().map(|v| v * g).collect(), gain_db, measured_before: before, peak_exceeded })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(freq: f64, amp: f64, seconds: f64, sr: u32) -> Vec<f64> {
        let n = (seconds * sr as f64) as usize;
        (0..n).map(|i| amp * (std::f64::consts::TAU * freq * i as f64 / sr as f64).sin()).collect()
    }

    #[test]
    fn full_scale_997_hz_reads_minus_three() {
        for sr in [48000, 44100, 16000] {
            let l = measure_loudness(&sine(997.0, 1.0, 5.0, sr), sr).unwrap();
            assert!((l + 3.01).abs() < 0.1, "{sr}: {l}");
        }
    }

    #[test]
    fn half_amplitude_is_six_db_lower() {
        let a = measure_loudness(&sine(997.0, 1.0, 3.0, 48000), 48000).unwrap();
        let b = measure_loudness(&sine(997.0, 0.5, 3.0, 48000), 48000).unwrap();
        assert!((a - b - 20.0 * 2f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn short_and_silent_inputs() {
        assert!(matches!(measure_loudness(&[0.1; 3200], 16000), Err(CorpusError::TooShort { .. })));
        assert_eq!(measure_loudness(&[0.0; 16000], 16000).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(
            normalize_loudness(&[0.0; 16000], 16000, -30.0, LevelUnit::Lufs, PeakMode::Warn),
            Err(CorpusError::Unmeasurable)
        ));
    }

    #[test]
    fn gain_examples() {
        let x = sine(997.0, 1.0, 3.0, 48000);
        let before = measure_loudness(&x, 48000).unwrap();
        let n = normalize_loudness(&x, 48000, -30.0, LevelUnit::Lufs, PeakMode::Warn).unwrap();
        assert!((n.gain_db - (-30.0 - before)).abs() < 1e-6);
        assert!((measure_loudness(&n.samples, 48000).unwrap() + 30.0).abs() < 0.01);
        let same = normalize_loudness(&n.samples, 48000, -30.0, LevelUnit::Lufs, PeakMode::Warn).unwrap();
        assert!(same.gain_db.abs() < 0.1);
        let a = normalize_loudness(&x, 48000, -29.0, LevelUnit::Lufs, PeakMode::Warn).unwrap();
        let b = normalize_loudness(&x, 48000, -33.0, LevelUnit::Lufs, PeakMode::Warn).unwrap();
        assert!((a.gain_db - b.gain_db - 4.0).abs() < 1e-6);
    }

    #[test]
    fn peak_modes() {
        let x = sine(997.0, 0.1, 1.0, 16000);
        let warn = normalize_loudness(&x, 16000, -1.0, LevelUnit::Lufs, PeakMode::Warn).unwrap();
        assert!(warn.peak_exceeded);
        assert!(warn.samples.iter().any(|v| v.abs() > 1.0));
        let limit = normalize_loudness(&x, 16000, -1.0, LevelUnit::Lufs, PeakMode::Limit).unwrap();
        assert!(limit.samples.iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn rms_mode() {
        let x = sine(440.0, 1.0, 1.0, 16000);
        assert!((measure_level(&x, 16000, LevelUnit::RmsDbfs).unwrap() + 3.0103).abs() < 1e-3);
        let n = normalize_loudness(&x, 16000, -30.0, LevelUnit::RmsDbfs, PeakMode::Warn).unwrap();
        assert!((measure_level(&n.samples, 16000, LevelUnit::RmsDbfs).unwrap() + 30.0).abs() < 1e-9);
    }
}

#[cfg(test)]
mod round_trip {
    use super::*;
    use proptest::prelude::*;

    fn signal(parts: &[(f64, f64)], noise: f64, seconds: f64, seed: u64) -> Vec<f64> {
        use rand::{Rng, SeedableRng};
        let sr = 16000.0;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..(seconds * sr) as usize)
            .map(|i| {
                let t = i as f64 / sr;
                let tonal: f64 = parts.iter().map(|&(f, a)| a * (std::f64::consts::TAU * f * t).sin()).sum();
                tonal + noise * (rng.gen::<f64>() - 0.5)
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn normalize_then_measure_hits_target(
            parts in prop::collection::vec((50.0f64..7000.0, 0.0f64..1.0), 0..4),
            noise in 0.0f64..1.0,
            scale_db in -60.0f64..6.0,
            seconds in 0.4f64..2.5,
            seed in any::<u64>(),
        ) {
            let g = 10f64.powf(scale_db / 20.0);
            let x: Vec<f64> = signal(&parts, noise.max(1e-3), seconds, seed).iter().map(|v| v * g).collect();
            let n = normalize_loudness(&x, 16000, -30.0, LevelUnit::Lufs, PeakMode::Warn);
            match n {
                Ok(n) => {
                    let after = measure_loudness(&n.samples, 16000).unwrap();
                    prop_assert!((after + 30.0).abs() <= 0.1, "after {after}");
                }
                Err(CorpusError::Unmeasurable) => prop_assert!(measure_loudness(&x, 16000).unwrap().is_infinite()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}
