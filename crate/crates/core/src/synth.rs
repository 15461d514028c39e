//! Deterministic synthetic corpus: audio, posteriograms and training losses
//! rendered from transcripts, for end-to-end runs without external models.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alignment::{synthetic_posteriogram, AlignError, Posteriogram, SynthPosteriogram};
use crate::audio::{write_wav_f32, AudioError};
use crate::container::{posteriogram_to_container, write_container};
use crate::corpus::{write_manifest, CorpusError, UtteranceRecord};
use crate::frontend::{PipelineError, TextFrontend};
use crate::phoneme::FeatureTable;

const BUILTIN_TRANSCRIPTS: &str = include_str!("../data/corpus_transcripts.tsv");

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error(transparent)]
    Frontend(#[from] PipelineError),
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Audio(#[from] AudioError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("transcript line {line}: expected utt_id<TAB>text")]
    Transcript { line: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub sample_rate: u32,
    pub hop_length: usize,
    /// Utterance indices that get an outlying training loss.
    pub loss_outliers: Vec<(usize, f64)>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { seed: 7, sample_rate: 16_000, hop_length: 256, loss_outliers: vec![(3, 2.5), (11, 2.0)] }
    }
}

#[derive(Debug, Clone)]
pub struct SynthUtterance {
    pub utt_id: String,
    pub transcript: String,
    pub audio: Vec<f64>,
    pub posteriogram: Posteriogram<f32>,
    /// Frames per phone token that the audio and posteriogram follow.
    pub durations: Vec<usize>,
    pub loss: f64,
}

/// Parses `utt_id<TAB>text` lines; `#` starts a comment line.
pub fn parse_transcripts(src: &str) -> Result<Vec<(String, String)>, SynthError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, text) = line.split_once('\t').ok_or(SynthError::Transcript { line: i + 1 })?;
        out.push((id.trim().to_string(), text.trim().to_string()));
    }
    Ok(out)
}

/// The 20 transcripts shipped with the crate.
pub fn builtin_transcripts() -> Vec<(String, String)> {
    parse_transcripts(BUILTIN_TRANSCRIPTS).expect("shipped transcripts parse")
}

/// Every segment symbol of the table, sorted; the class inventory of the
/// synthetic acoustic model.
pub fn model_symbols(table: &FeatureTable) -> Vec<String> {
    let mut symbols: Vec<String> = table.segment_symbols().map(str::to_string).collect();
    symbols.sort();
    symbols
}

pub fn synth_utterance(
    index: usize,
    utt_id: &str,
    transcript: &str,
    frontend: &TextFrontend<'_>,
    cfg: &SynthConfig,
) -> Result<SynthUtterance, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(1_000_003).wrapping_add(index as u64));
    let text = frontend.run(transcript)?;
    let table = frontend.table;
    let durations: Vec<usize> = text
        .tokens
        .iter()
        .map(|t| {
            if t.is_silence {
                rng.gen_range(10..=18)
            } else if table.is_vowel(&t.symbol) {
                rng.gen_range(6..=12)
            } else {
                rng.gen_range(3..=7)
            }
        })
        .collect();
    let frames: usize = durations.iter().sum();
    let hop = cfg.hop_length;
    let sr = cfg.sample_rate as f64;
    let len = (frames - 1) * hop + hop / 2;

    let mut owner = Vec::with_capacity(frames);
    for (j, &d) in durations.iter().enumerate() {
        owner.extend(std::iter::repeat(j).take(d));
    }
    let n_tokens = text.tokens.len().max(1) as f64;
    let f0: Vec<f64> = (0..text.tokens.len())
        .map(|j| 180.0 - 60.0 * j as f64 / n_tokens + rng.gen_range(-8.0..8.0))
        .collect();
    let mut phase = 0.0f64;
    let mut audio = Vec::with_capacity(len);
    for i in 0..len {
        let t = ((i + hop / 2) / hop).min(frames - 1);
        let j = owner[t];
        let tok = &text.tokens[j];
        phase = (phase + std::f64::consts::TAU * f0[j] / sr) % std::f64::consts::TAU;
        let noise: f64 = rng.gen_range(-1.0..1.0);
        let v = if tok.is_silence {
            1e-4 * noise
        } else if table.is_unvoiced(&tok.symbol) {
            0.05 * noise
        } else {
            let amp = if table.is_vowel(&tok.symbol) { 0.3 } else { 0.15 };
            amp * (phase.sin() + 0.5 * (2.0 * phase).sin() + 0.25 * (3.0 * phase).sin())
        };
        audio.push(v);
    }

    let symbols = model_symbols(table);
    let classes: Vec<usize> = text
        .tokens
        .iter()
        .map(|t| symbols.binary_search(&t.symbol).map_err(|_| AlignError::SymbolNotInModel { symbol: t.symbol.clone() }))
        .collect::<Result<_, _>>()?;
    let posteriogram = synthetic_posteriogram::<f32, _>(
        &symbols,
        &classes,
        &durations,
        hop as f64 / sr,
        SynthPosteriogram::default(),
        &mut rng,
    )?;
    let loss = cfg
        .loss_outliers
        .iter()
        .find(|(k, _)| *k == index)
        .map(|&(_, l)| l)
        .unwrap_or_else(|| 1.0 + rng.gen_range(-0.05..0.05));
    Ok(SynthUtterance {
        utt_id: utt_id.to_string(),
        transcript: transcript.to_string(),
        audio,
        posteriogram,
        durations,
        loss,
    })
}

/// Writes `manifest.jsonl`, `losses.tsv`, `durations.tsv` (reference
/// frames per token), `audio/{id}.wav` and `posteriograms/{id}.pgrm` under
/// `dir`. Audio paths in the manifest are
/// relative to `dir`.
pub fn write_synth_corpus(
    dir: &Path,
    transcripts: &[(String, String)],
    frontend: &TextFrontend<'_>,
    cfg: &SynthConfig,
) -> Result<Vec<UtteranceRecord>, SynthError> {
    fs::create_dir_all(dir.join("audio"))?;
    fs::create_dir_all(dir.join("posteriograms"))?;
    let mut records = Vec::new();
    let mut losses = String::new();
    let mut durations = String::new();
    for (i, (id, text)) in transcripts.iter().enumerate() {
        let u = synth_utterance(i, id, text, frontend, cfg)?;
        let rel = format!("audio/{id}.wav");
        write_wav_f32(dir.join(&rel), &u.audio, cfg.sample_rate)?;
        let file = fs::File::create(dir.join(format!("posteriograms/{id}.pgrm")))?;
        write_container(std::io::BufWriter::new(file), &posteriogram_to_container(&u.posteriogram))?;
        let mut rec = UtteranceRecord::new(id, rel, 0.0, u.audio.len() as f64 / cfg.sample_rate as f64, text.clone());
        rec.speaker = Some("synth".into());
        records.push(rec);
        losses.push_str(&format!("{id}\t{:.6}\n", u.loss));
        let d: Vec<String> = u.durations.iter().map(usize::to_string).collect();
        durations.push_str(&format!("{id}\t{}\n", d.join(" ")));
    }
    write_manifest(std::io::BufWriter::new(fs::File::create(dir.join("manifest.jsonl"))?), &records)?;
    fs::write(dir.join("losses.tsv"), losses)?;
    fs::write(dir.join("durations.tsv"), durations)?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{mas, reorder};
    use crate::homograph::{HomographDictionary, PlusRules, TagMap, UnigramTagger};
    use crate::phoneme::{LexiconProvider, FRENCH};

    fn with_frontend<R>(f: impl FnOnce(&TextFrontend<'_>) -> R) -> R {
        let lex = LexiconProvider::builtin();
        let fe = TextFrontend {
            g2p: &lex,
            pos: UnigramTagger::builtin(),
            dictionary: HomographDictionary::builtin(),
            tagmap: TagMap::builtin(),
            rules: PlusRules::builtin(),
            table: FeatureTable::builtin(),
            lang: FRENCH,
        };
        f(&fe)
    }

    #[test]
    fn shipped_transcripts() {
        let t = builtin_transcripts();
        assert_eq!(t.len(), 20);
        assert_eq!(t[0].0, "utt001");
    }

    #[test]
    fn utterance_is_deterministic_and_alignable() {
        with_frontend(|fe| {
            let cfg = SynthConfig::default();
            let a = synth_utterance(0, "u", "Le président parle au peuple.", fe, &cfg).unwrap();
            let b = synth_utterance(0, "u", "Le président parle au peuple.", fe, &cfg).unwrap();
            assert_eq!(a.audio, b.audio);
            let frames: usize = a.durations.iter().sum();
            assert_eq!(crate::prosody::MelConfig::default().frame_count(a.audio.len()), frames);
            let tokens = fe.run(&a.transcript).unwrap().tokens;
            let path = mas(&reorder(&a.posteriogram, &tokens).unwrap()).unwrap();
            assert_eq!(path.zero_count(), 0);
            let off: usize = path.durations.iter().zip(&a.durations).map(|(x, y)| x.abs_diff(*y)).sum();
            assert!(off <= a.durations.len(), "{:?} vs {:?}", path.durations, a.durations);
        });
    }
}
