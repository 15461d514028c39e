use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::phoneme::PhonemeToken;
use crate::text::split_pieces;

/// Characters treated as pause markers in transcripts.
pub const PAUSE_MARKERS: [char; 4] = [',', ';', '-', '"'];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PauseConfig {
    /// Minimum aligned duration, in frames, of a kept pause.
    pub min_sil_frames: usize,
    /// Minimum share of non-speech VAD frames inside the pause.
    pub min_nonspeech_fraction: f64,
}

impl Default for PauseConfig {
    fn default() -> Self {
        PauseConfig { min_sil_frames: 5, min_nonspeech_fraction: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkerDecision {
    pub marker: char,
    /// Byte offset in the input transcript.
    pub offset: usize,
    pub token_index: usize,
    pub frames: usize,
    pub nonspeech_fraction: f64,
    pub kept: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PauseValidation {
    pub transcript: String,
    pub decisions: Vec<MarkerDecision>,
}

impl PauseValidation {
    pub fn removed(&self) -> usize {
        self.decisions.iter().filter(|d| !d.kept).count()
    }
}

/// Keeps a pause marker only if the aligned silence token is long enough
/// and the VAD hears mostly non-speech during it; deletes it otherwise.
///
/// The n-th punctuation piece of the transcript corresponds to the n-th
/// silence token. Deleting a marker that stands between two spaces also
/// deletes the space before it.
pub fn validate_pause_markers(
    transcript: &str,
    tokens: &[PhonemeToken],
    durations: &[usize],
    vad_speech: &[bool],
    cfg: &PauseConfig,
) -> Result<PauseValidation, CorpusError> {
    if durations.len() != tokens.len() {
        return Err(CorpusError::LengthMismatch { what: "durations per token", expected: tokens.len(), got: durations.len() });
    }
    let frames: usize = durations.iter().sum();
    if vad_speech.len() != frames {
        return Err(CorpusError::LengthMismatch { what: "VAD frames", expected: frames, got: vad_speech.len() });
    }
    let puncts: Vec<_> = split_pieces(transcript).into_iter().filter(|p| !p.is_word()).collect();
    let silences: Vec<usize> = (0..tokens.len()).filter(|&i| tokens[i].is_silence).collect();
    if puncts.len() != silences.len() {
        return Err(CorpusError::LengthMismatch {
            what: "silence tokens per punctuation mark",
            expected: puncts.len(),
            got: silences.len(),
        });
    }
    let mut starts = Vec::with_capacity(durations.len());
    let mut acc = 0;
    for &d in durations {
        starts.push(acc);
        acc += d;
    }

    let mut decisions = Vec::new();
    for (piece, &tok) in puncts.iter().zip(&silences) {
        let marker = piece.text.chars().next().expect("pieces are non-empty");
        if !PAUSE_MARKERS.contains(&marker) {
            continue;
        }
        let span = &vad_speech[starts[tok]..starts[tok] + durations[tok]];
        let nonspeech_fraction =
            if span.is_empty() { 0.0 } else { span.iter().filter(|&&s| !s).count() as f64 / span.len() as f64 };
        let kept = durations[tok] >= cfg.min_sil_frames && nonspeech_fraction >= cfg.min_nonspeech_fraction;
        decisions.push(MarkerDecision {
            marker,
            offset: piece.start,
            token_index: tok,
            frames: durations[tok],
            nonspeech_fraction,
            kept,
        });
    }

    let bytes = transcript.as_bytes();
    let mut drop = vec![false; bytes.len()];
    for d in decisions.iter().filter(|d| !d.kept) {
        drop[d.offset] = true;
        let before = d.offset.checked_sub(1).filter(|&b| bytes[b] == b' ');
        let after_is_gap = bytes.get(d.offset + 1).is_none_or(|&c| c == b' ');
        if let (Some(b), true) = (before, after_is_gap) {
            drop[b] = true;
        }
    }
    // markers and spaces are ASCII, so byte filtering keeps UTF-8 intact
    let kept: Vec<u8> = bytes.iter().zip(&drop).filter(|(_, &d)| !d).map(|(&b, _)| b).collect();
    let transcript = String::from_utf8(kept).expect("only ASCII bytes were removed");
    Ok(PauseValidation { transcript, decisions })
}
