pub mod align;
pub mod eval;
pub mod finalize;
pub mod phonemize;
pub mod prep;
pub mod prosody;
pub mod synth;

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use toucan_prep::audio::read_wav;
use toucan_prep::corpus::UtteranceRecord;
use toucan_prep::phoneme::{tokenize_ipa, FeatureTable, PhonemeToken};

use crate::error::CliError;

/// Maps records in parallel; the first error in input order wins.
pub fn par_map<U: Send>(
    records: &[UtteranceRecord],
    f: impl Fn(&UtteranceRecord) -> Result<U, CliError> + Sync,
) -> Result<Vec<U>, CliError> {
    let results: Vec<Result<U, CliError>> = records.par_iter().map(|r| f(r).map_err(|e| e.for_utt(&r.utt_id))).collect();
    results.into_iter().collect()
}

/// Samples of a record's span, checked against the expected rate.
pub fn read_span(rec: &UtteranceRecord, expected_rate: u32) -> Result<Vec<f64>, CliError> {
    let audio = read_wav(&rec.audio_path)?;
    if audio.sample_rate != expected_rate {
        return Err(CliError::validation(format!(
            "{} is {} Hz, the configuration expects {expected_rate} Hz",
            rec.audio_path, audio.sample_rate
        )));
    }
    let sr = audio.sample_rate as f64;
    let start = (rec.start * sr).round() as usize;
    let end = ((rec.end * sr).round() as usize).min(audio.samples.len());
    if start >= end {
        return Err(CliError::validation(format!("span {}..{} s is outside {}", rec.start, rec.end, rec.audio_path)));
    }
    Ok(audio.samples[start..end].to_vec())
}

pub fn tokens_of(rec: &UtteranceRecord, table: &FeatureTable) -> Result<Vec<PhonemeToken>, CliError> {
    let ipa = rec.phonemes.as_deref().ok_or_else(|| CliError::validation("record has no phonemes; run phonemize first"))?;
    Ok(tokenize_ipa(ipa, table)?)
}

pub fn durations_of(rec: &UtteranceRecord) -> Result<&[usize], CliError> {
    rec.durations.as_deref().ok_or_else(|| CliError::validation("record has no durations; run align first"))
}

/// Pretty JSON to `path`, or one line on stdout.
pub fn emit_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent() {
                std::fs::create_dir_all(dir)?;
            }
            let mut text = serde_json::to_string_pretty(value).map_err(CliError::runtime)?;
            text.push('\n');
            std::fs::write(p, text).map_err(|e| CliError::runtime(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            let text = serde_json::to_string(value).map_err(CliError::runtime)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}
