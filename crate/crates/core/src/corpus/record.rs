use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// One manifest row. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub utt_id: String,
    pub audio_path: String,
    pub start: f64,
    pub end: f64,
    pub transcript: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speaker: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phonemes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub durations: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pitch: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loudness_lufs: Option<f64>,
    #[serde(default)]
    pub is_joint: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source_ids: Vec<String>,
    /// Set when the audio went through an external enhancement step.
    #[serde(default)]
    pub enhanced: bool,
}

impl UtteranceRecord {
    pub fn new(utt_id: impl Into<String>, audio_path: impl Into<String>, start: f64, end: f64, transcript: impl Into<String>) -> Self {
        UtteranceRecord {
            utt_id: utt_id.into(),
            audio_path: audio_path.into(),
            start,
            end,
            transcript: transcript.into(),
            speaker: None,
            phonemes: None,
            durations: None,
            pitch: None,
            energy: None,
            loudness_lufs: None,
            is_joint: false,
            source_ids: Vec::new(),
            enhanced: false,
        }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let fail = |message: &str| Err(CorpusError::InvalidRecord { utt_id: self.utt_id.clone(), message: message.into() });
        if self.utt_id.is_empty() {
            return fail("empty utt_id");
        }
        if !(self.start.is_finite() && self.end.is_finite() && self.start >= 0.0 && self.end > self.start) {
            return fail("span must satisfy 0 <= start < end");
        }
        if self.is_joint && self.source_ids.len() < 2 {
            return fail("joint records need at least two source ids");
        }
        if !self.is_joint && !self.source_ids.is_empty() {
            return fail("only joint records list source ids");
        }
        Ok(())
    }
}

/// Reads a JSONL manifest, validating every record. Blank lines are skipped.
pub fn read_manifest(reader: impl BufRead) -> Result<Vec<UtteranceRecord>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: UtteranceRecord =
            serde_json::from_str(&line).map_err(|e| CorpusError::Parse { line: i + 1, message: e.to_string() })?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_manifest(mut writer: impl Write, records: &[UtteranceRecord]) -> Result<(), CorpusError> {
    for rec in records {
        let line = serde_json::to_string(rec).map_err(std::io::Error::other)?;
        writeln!(writer, "{line}")?;
    }
    writer.flush()?;
    Ok(())
}
