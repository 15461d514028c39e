use std::path::PathBuf;

use clap::Args;
use toucan_prep::container::{features_to_container, write_container};
use toucan_prep::prosody::{extract_energy, extract_pitch, phone_prosody, MelExtractor};

use super::{durations_of, par_map, read_span, tokens_of};
use crate::config::{PipelineConfig, Resources};
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Args)]
pub struct ProsodyArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Also write `{utt_id}.feat` log-mel spectrograms here.
    #[arg(long)]
    pub features_dir: Option<PathBuf>,
}

pub fn run(args: &ProsodyArgs, cfg: &PipelineConfig, res: &Resources) -> Result<(), CliError> {
    let records = manifest::load(&args.manifest)?;
    let table = res.table();
    let mel = MelExtractor::<f64>::new(cfg.mel.clone())?;
    if let Some(dir) = &args.features_dir {
        std::fs::create_dir_all(dir)?;
    }
    let records = par_map(&records, |r| {
        let tokens = tokens_of(r, table)?;
        let durations = durations_of(r)?;
        let audio = read_span(r, cfg.mel.sample_rate)?;
        let frames = cfg.mel.frame_count(audio.len());
        let covered: usize = durations.iter().sum();
        if covered != frames {
            return Err(CliError::validation(format!("durations cover {covered} frames, the audio has {frames}")));
        }
        let pitch = extract_pitch(&audio, cfg.mel.sample_rate, &cfg.mel, &cfg.pitch)?;
        let energy = extract_energy(&audio, cfg.mel.sample_rate, &cfg.mel)?;
        let phones = phone_prosody(&pitch, &energy, durations, &tokens, table, cfg.prosody.norm)?;
        if let Some(dir) = &args.features_dir {
            let spec = mel.compute(&audio, cfg.mel.sample_rate)?;
            let file = std::fs::File::create(dir.join(format!("{}.feat", r.utt_id)))?;
            write_container(std::io::BufWriter::new(file), &features_to_container(&spec, cfg.mel.hop_seconds(), "mel"))?;
        }
        let mut r = r.clone();
        r.pitch = Some(phones.iter().map(|p| p.pitch).collect());
        r.energy = Some(phones.iter().map(|p| p.energy).collect());
        Ok(r)
    })?;
    manifest::store(&args.out, records)
}
