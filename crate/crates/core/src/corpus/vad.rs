use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::prosody::{extract_energy, MelConfig};

/// Hysteresis thresholds in dB relative to the utterance's median frame
/// level, plus an absolute floor below which no frame counts as speech.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VadConfig {
    pub on_db: f64,
    pub off_db: f64,
    pub floor_dbfs: f64,
}

impl Default for VadConfig {
    fn default() -> Self {
        VadConfig { on_db: -6.0, off_db: -12.0, floor_dbfs: -50.0 }
    }
}

impl VadConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.on_db.is_finite() && self.off_db.is_finite() && self.floor_dbfs.is_finite()) {
            return Err("VAD thresholds must be finite".into());
        }
        if self.off_db > self.on_db {
            return Err(format!("off_db {} must not exceed on_db {}", self.off_db, self.on_db));
        }
        Ok(())
    }
}

/// Per-frame speech (`true`) / non-speech labels on the mel frame grid.
pub fn energy_vad(audio: &[f64], sample_rate: u32, mel: &MelConfig, cfg: &VadConfig) -> Result<Vec<bool>, CorpusError> {
    let energy = extract_energy(audio, sample_rate, mel)?;
    let db: Vec<f64> = energy.values.iter().map(|&e| 20.0 * e.max(1e-10).log10()).collect();
    let mut sorted = db.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let on = (median + cfg.on_db).max(cfg.floor_dbfs);
    let off = (median + cfg.off_db).max(cfg.floor_dbfs);
    let mut speech = false;
    Ok(db
        .iter()
        .map(|&level| {
            speech = if speech { level >= off } else { level >= on };
            speech
        })
        .collect())
}

/// Parses `utt_id<TAB>labels` lines where labels is a string of `0`
/// (non-speech) and `1` (speech).
pub fn parse_vad_labels(src: &str) -> Result<Vec<(String, Vec<bool>)>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |message: &str| CorpusError::Parse { line: i + 1, message: message.into() };
        let (id, labels) = line.split_once('\t').ok_or_else(|| parse("expected utt_id<TAB>labels"))?;
        let labels = labels
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(parse("labels must be 0 or 1")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push((id.trim().to_string(), labels));
    }
    Ok(out)
}

pub fn format_vad_labels(utt_id: &str, labels: &[bool]) -> String {
    let bits: String = labels.iter().map(|&s| if s { '1' } else { '0' }).collect();
    format!("{utt_id}\t{bits}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> MelConfig {
        MelConfig::default()
    }

    fn tone(n: usize, sr: u32, amp: f64) -> Vec<f64> {
        (0..n).map(|i| amp * (std::f64::consts::TAU * 220.0 * i as f64 / sr as f64).sin()).collect()
    }

    #[test]
    fn silence_and_tone() {
        let sr = cfg().sample_rate;
        assert!(energy_vad(&vec![0.0; sr as usize], sr, &cfg(), &VadConfig::default()).unwrap().iter().all(|&s| !s));
        assert!(energy_vad(&tone(sr as usize, sr, 1.0), sr, &cfg(), &VadConfig::default()).unwrap().iter().all(|&s| s));
    }

    #[test]
    fn tone_silence_tone_flips_near_boundaries() {
        let c = cfg();
        let sr = c.sample_rate;
        let n = sr as usize;
        let mut x = tone(n, sr, 0.5);
        x.extend(vec![0.0; n]);
        x.extend(tone(n, sr, 0.5));
        let labels = energy_vad(&x, sr, &c, &VadConfig::default()).unwrap();
        // oracle: frames whose window lies wholly inside a region take its label
        let half = c.win_length / 2;
        for (t, &s) in labels.iter().enumerate() {
            let (lo, hi) = ((t * c.hop_length).saturating_sub(half), t * c.hop_length + half);
            if hi <= n || (lo >= 2 * n && hi <= 3 * n) {
                assert!(s, "frame {t}");
            } else if lo >= n && hi <= 2 * n {
                assert!(!s, "frame {t}");
            }
        }
        let flips: Vec<usize> = (1..labels.len()).filter(|&t| labels[t] != labels[t - 1]).collect();
        assert_eq!(flips.len(), 2);
        let hop = c.hop_length as f64;
        for (flip, boundary) in flips.iter().zip([n, 2 * n]) {
            assert!((*flip as f64 - boundary as f64 / hop).abs() <= 2.0, "{flip} vs {boundary}");
        }
    }

    #[test]
    fn label_file_round_trip() {
        let line = format_vad_labels("u1", &[false, true, true]);
        assert_eq!(line, "u1\t011");
        assert_eq!(parse_vad_labels(&line).unwrap(), vec![("u1".to_string(), vec![false, true, true])]);
        assert!(parse_vad_labels("u1\t012").is_err());
    }
}
