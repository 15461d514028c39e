use std::path::PathBuf;

use clap::Args;
use serde_json::json;
use toucan_prep::synth::{builtin_transcripts, parse_transcripts, write_synth_corpus, SynthConfig};

use crate::config::{PipelineConfig, Resources};
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory.
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `utt_id<TAB>text` lines; the shipped transcripts when omitted.
    #[arg(long)]
    pub transcripts: Option<PathBuf>,
}

pub fn run(args: &SynthArgs, cfg: &PipelineConfig, res: &Resources) -> Result<(), CliError> {
    let transcripts = match &args.transcripts {
        Some(p) => {
            let src = std::fs::read_to_string(p).map_err(|e| CliError::input(format!("cannot read {}: {e}", p.display())))?;
            parse_transcripts(&src)?
        }
        None => builtin_transcripts(),
    };
    let mut sc = SynthConfig { sample_rate: cfg.mel.sample_rate, hop_length: cfg.mel.hop_length, ..SynthConfig::default() };
    if let Some(seed) = args.seed {
        sc.seed = seed;
    }
    let records = write_synth_corpus(&args.out, &transcripts, &res.frontend(), &sc)?;
    println!("{}", json!({ "utterances": records.len(), "dir": args.out.display().to_string() }));
    Ok(())
}
