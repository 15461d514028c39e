//! Log-mel spectrogram against a direct DFT and an independently written
//! filterbank (librosa's ramp formulation).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toucan_prep::prosody::{MelConfig, MelExtractor};

fn slaney_mel(hz: f64) -> f64 {
    let f_sp = 200.0 / 3.0;
    let logstep = 6.4f64.ln() / 27.0;
    if hz < 1000.0 {
        hz / f_sp
    } else {
        1000.0 / f_sp + (hz / 1000.0).ln() / logstep
    }
}

fn slaney_hz(mel: f64) -> f64 {
    let f_sp = 200.0 / 3.0;
    let logstep = 6.4f64.ln() / 27.0;
    let min_log_mel = 1000.0 / f_sp;
    if mel < min_log_mel {
        mel * f_sp
    } else {
        1000.0 * (logstep * (mel - min_log_mel)).exp()
    }
}

fn oracle_filterbank(sr: f64, n_fft: usize, n_mels: usize, fmin: f64, fmax: f64) -> Vec<Vec<f64>> {
    let fftfreqs: Vec<f64> = (0..=n_fft / 2).map(|k| k as f64 * sr / n_fft as f64).collect();
    let (mlo, mhi) = (slaney_mel(fmin), slaney_mel(fmax));
    let mel_f: Vec<f64> = (0..n_mels + 2).map(|i| slaney_hz(mlo + i as f64 * (mhi - mlo) / (n_mels + 1) as f64)).collect();
    let fdiff: Vec<f64> = mel_f.windows(2).map(|w| w[1] - w[0]).collect();
    (0..n_mels)
        .map(|i| {
            let enorm = 2.0 / (mel_f[i + 2] - mel_f[i]);
            fftfreqs
                .iter()
                .map(|&f| {
                    let lower = -(mel_f[i] - f) / fdiff[i];
                    let upper = (mel_f[i + 2] - f) / fdiff[i + 1];
                    f64::max(0.0, f64::min(lower, upper)) * enorm
                })
                .collect()
        })
        .collect()
}

fn oracle_logmel(x: &[f64], cfg: &MelConfig) -> Vec<Vec<f64>> {
    let n = cfg.win_length;
    let hop = cfg.hop_length;
    let pad = n / 2;
    // numpy "reflect" padding
    let mut padded = Vec::with_capacity(x.len() + 2 * pad);
    for i in (1..=pad).rev() {
        padded.push(x[i]);
    }
    padded.extend_from_slice(x);
    for i in 0..pad {
        padded.push(x[x.len() - 2 - i]);
    }
    let window: Vec<f64> = (0..n).map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos()).collect();
    let cos: Vec<f64> = (0..n).map(|m| (2.0 * std::f64::consts::PI * m as f64 / n as f64).cos()).collect();
    let sin: Vec<f64> = (0..n).map(|m| (2.0 * std::f64::consts::PI * m as f64 / n as f64).sin()).collect();
    let fb = oracle_filterbank(cfg.sample_rate as f64, n, cfg.n_mels, cfg.fmin, cfg.fmax);
    let frames = 1 + (padded.len() - n) / hop;
    (0..frames)
        .map(|t| {
            let seg: Vec<f64> = (0..n).map(|i| padded[t * hop + i] * window[i]).collect();
            let mag: Vec<f64> = (0..=n / 2)
                .map(|k| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (i, &s) in seg.iter().enumerate() {
                        let m = (i * k) % n;
                        re += s * cos[m];
                        im -= s * sin[m];
                    }
                    (re * re + im * im).sqrt()
                })
                .collect();
            fb.iter()
                .map(|band| {
                    let e: f64 = band.iter().zip(&mag).map(|(w, m)| w * m).sum();
                    e.max(cfg.log_floor).log10()
                })
                .collect()
        })
        .collect()
}

#[test]
fn matches_direct_dft_on_random_signals() {
    let cfg = MelConfig::default();
    let ext = MelExtractor::<f64>::new(cfg.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x: Vec<f64> = (0..16000).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let got = ext.compute(&x, 16000).unwrap();
        let want = oracle_logmel(&x, &cfg);
        assert_eq!(got.rows(), want.len());
        for (t, row) in want.iter().enumerate() {
            for (m, &v) in row.iter().enumerate() {
                worst = worst.max((got.get(t, m) - v).abs());
            }
        }
    }
    assert!(worst <= 1e-4, "max abs diff {worst}");
}

#[test]
fn single_precision_extractor_stays_close() {
    let cfg = MelConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x: Vec<f64> = (0..8000).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let xf: Vec<f32> = x.iter().map(|&v| v as f32).collect();
    let got = MelExtractor::<f32>::new(cfg.clone()).unwrap().compute(&xf, 16000).unwrap();
    let want = oracle_logmel(&x, &cfg);
    for (t, row) in want.iter().enumerate() {
        for (m, &v) in row.iter().enumerate() {
            assert!((got.get(t, m) as f64 - v).abs() < 1e-3, "({t},{m})");
        }
    }
}

#[test]
fn frame_counts_agree_across_extractors() {
    use toucan_prep::prosody::{extract_energy, extract_pitch, PitchConfig};
    let cfg = MelConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for len in [1usize, 255, 256, 257, 1023, 1024, 5000] {
        let x: Vec<f64> = (0..len).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let mel = MelExtractor::<f64>::new(cfg.clone()).unwrap().compute(&x, 16000).unwrap();
        let e = extract_energy(&x, 16000, &cfg).unwrap();
        let p = extract_pitch(&x, 16000, &cfg, &PitchConfig::default()).unwrap();
        assert_eq!(mel.rows(), e.len());
        assert_eq!(mel.rows(), p.len());
        assert_eq!(mel.rows(), 1 + len / 256);
    }
}
