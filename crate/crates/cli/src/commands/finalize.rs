use std::path::PathBuf;

use clap::Args;
use toucan_prep::audio::{read_wav, write_wav_i16};
use toucan_prep::corpus::{finalize_output, normalize_loudness, OUTPUT_RATE};

use crate::config::PipelineConfig;
use crate::error::{warn, CliError};

/// Rate of the audio the output chain accepts.
const INPUT_RATE: u32 = 24_000;

#[derive(Debug, Args)]
pub struct FinalizeArgs {
    /// 24 kHz mono WAV.
    pub input: PathBuf,
    /// 48 kHz 16-bit WAV.
    pub output: PathBuf,
    /// Loudness target; overrides the speaker and default targets.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<f64>,
    #[arg(long)]
    pub speaker: Option<String>,
}

pub fn run(args: &FinalizeArgs, cfg: &PipelineConfig) -> Result<(), CliError> {
    let audio = read_wav(&args.input)?;
    if audio.sample_rate != INPUT_RATE {
        return Err(CliError::validation(format!("expected {INPUT_RATE} Hz input, got {} Hz", audio.sample_rate)));
    }
    let target = args.target.unwrap_or_else(|| cfg.loudness.target_for(args.speaker.as_deref()));
    let n = normalize_loudness(&audio.samples, audio.sample_rate, target, cfg.loudness.unit, cfg.loudness.peak)?;
    if n.peak_exceeded {
        warn(None, format!("peaks exceed full scale after {:.2} dB gain", n.gain_db));
    }
    write_wav_i16(&args.output, &finalize_output(&n.samples), OUTPUT_RATE)?;
    Ok(())
}
