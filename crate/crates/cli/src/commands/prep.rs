use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use serde_json::json;
use toucan_prep::audio::write_wav_f32;
use toucan_prep::corpus::{
    clean_by_loss, energy_vad, make_joint_utterances, normalize_loudness, parse_losses, parse_vad_labels,
    render_joint, validate_pause_markers, MarkerDecision, UtteranceRecord,
};

use super::{durations_of, emit_json, par_map, read_span, tokens_of};
use crate::config::{PipelineConfig, Resources};
use crate::error::{warn, CliError};
use crate::manifest;

#[derive(Debug, Args)]
pub struct PrepArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Receives `manifest.jsonl`, reports and any rewritten audio.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Drop pause markers that the alignment and VAD do not confirm.
    #[arg(long)]
    pub validate_pauses: bool,
    /// External VAD labels (`utt_id<TAB>0101...`) instead of the energy VAD.
    #[arg(long, requires = "validate_pauses")]
    pub vad_labels: Option<PathBuf>,
    /// Loss file (`utt_id<TAB>loss`) for loss-ranked cleaning.
    #[arg(long)]
    pub clean: Option<PathBuf>,
    /// Normalize loudness and write the result under `out_dir/audio`.
    #[arg(long)]
    pub loudness: bool,
    /// Add joint utterances rendered under `out_dir/joints`.
    #[arg(long)]
    pub join: bool,
}

#[derive(Serialize)]
struct PauseLine<'a> {
    utt_id: &'a str,
    before: &'a str,
    after: &'a str,
    decisions: &'a [MarkerDecision],
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn run(args: &PrepArgs, cfg: &PipelineConfig, res: &Resources) -> Result<(), CliError> {
    let mut records = manifest::load(&args.manifest)?;
    let out = &args.out_dir;
    std::fs::create_dir_all(out)?;
    let sr = cfg.mel.sample_rate;
    let mut summary = json!({ "input_records": records.len() });

    if args.validate_pauses {
        let external: Option<HashMap<String, Vec<bool>>> = match &args.vad_labels {
            Some(p) => Some(parse_vad_labels(&read_text(p)?)?.into_iter().collect()),
            None => None,
        };
        let table = res.table();
        let results = par_map(&records, |r| {
            let tokens = tokens_of(r, table)?;
            let durations = durations_of(r)?;
            let vad = match &external {
                Some(map) => map.get(&r.utt_id).cloned().ok_or_else(|| CliError::validation("no VAD labels for utterance"))?,
                None => energy_vad(&read_span(r, sr)?, sr, &cfg.mel, &cfg.vad)?,
            };
            Ok(validate_pause_markers(&r.transcript, &tokens, durations, &vad, &cfg.pauses)?)
        })?;
        let mut lines = String::new();
        let mut removed = 0;
        for (r, v) in records.iter_mut().zip(results) {
            let line = PauseLine { utt_id: &r.utt_id, before: &r.transcript, after: &v.transcript, decisions: &v.decisions };
            lines.push_str(&serde_json::to_string(&line).map_err(CliError::runtime)?);
            lines.push('\n');
            removed += v.removed();
            if v.transcript != r.transcript {
                // phones, frames and prosody no longer match the transcript
                r.transcript = v.transcript;
                r.phonemes = None;
                r.durations = None;
                r.pitch = None;
                r.energy = None;
            }
        }
        std::fs::write(out.join("pauses.jsonl"), lines)?;
        summary["pause_markers_removed"] = removed.into();
    }

    if let Some(loss_path) = &args.clean {
        let losses = parse_losses(&read_text(loss_path)?)?;
        let known: HashSet<&str> = losses.iter().map(|(id, _)| id.as_str()).collect();
        if let Some(r) = records.iter().find(|r| !known.contains(r.utt_id.as_str())) {
            return Err(CliError::validation(format!("no loss for {}", r.utt_id)));
        }
        let present: HashSet<&str> = records.iter().map(|r| r.utt_id.as_str()).collect();
        let losses: Vec<(String, f64)> = losses.into_iter().filter(|(id, _)| present.contains(id.as_str())).collect();
        let report = clean_by_loss(&losses, cfg.cleaning.threshold, cfg.cleaning.window)?;
        let removed: HashSet<&str> = report.removed_ids.iter().map(String::as_str).collect();
        records.retain(|r| !removed.contains(r.utt_id.as_str()));
        emit_json(Some(&out.join("cleaning_report.json")), &report)?;
        summary["cleaned_removed"] = report.removed_ids.len().into();
    }

    let mut audio_cache: HashMap<String, Vec<f64>> = HashMap::new();
    if args.loudness {
        let audio_dir = out.join("audio");
        std::fs::create_dir_all(&audio_dir)?;
        let results = par_map(&records, |r| {
            let audio = read_span(r, sr)?;
            let target = cfg.loudness.target_for(r.speaker.as_deref());
            let n = normalize_loudness(&audio, sr, target, cfg.loudness.unit, cfg.loudness.peak)?;
            if n.peak_exceeded {
                warn(Some(&r.utt_id), format!("peaks exceed full scale after {:.2} dB gain", n.gain_db));
            }
            let path = audio_dir.join(format!("{}.wav", r.utt_id));
            write_wav_f32(&path, &n.samples, sr)?;
            let level = toucan_prep::corpus::measure_level(&n.samples, sr, cfg.loudness.unit)?;
            let mut r = r.clone();
            r.audio_path = manifest::absolute(&path).to_string_lossy().into_owned();
            r.end = n.samples.len() as f64 / sr as f64;
            r.start = 0.0;
            r.loudness_lufs = Some(level);
            Ok((r, n.samples))
        })?;
        records = Vec::with_capacity(results.len());
        for (r, samples) in results {
            audio_cache.insert(r.utt_id.clone(), samples);
            records.push(r);
        }
    }

    if args.join {
        let joint_dir = out.join("joints");
        std::fs::create_dir_all(&joint_dir)?;
        records.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
        let mut joints = Vec::new();
        for run in records.chunk_by(|a, b| a.speaker == b.speaker) {
            joints.extend(make_joint_utterances(run, &cfg.join, &joint_dir.to_string_lossy()));
        }
        let by_id: HashMap<&str, &UtteranceRecord> = records.iter().map(|r| (r.utt_id.as_str(), r)).collect();
        let rendered = par_map(&joints, |j| {
            let parts = j
                .source_ids
                .iter()
                .map(|id| match audio_cache.get(id) {
                    Some(a) => Ok(a.clone()),
                    None => read_span(by_id[id.as_str()], sr),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let slices: Vec<&[f64]> = parts.iter().map(Vec::as_slice).collect();
            let audio = render_joint(&slices, sr, cfg.join.pause_seconds);
            write_wav_f32(&j.audio_path, &audio, sr)?;
            let mut j = j.clone();
            j.end = audio.len() as f64 / sr as f64;
            Ok(j)
        })?;
        summary["joints"] = rendered.len().into();
        records.extend(rendered);
    }

    summary["output_records"] = records.len().into();
    manifest::store(&out.join("manifest.jsonl"), records)?;
    emit_json(None, &summary)
}
