//! `toucan-prep`: corpus preparation pipeline for French TTS.

mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{align, eval, finalize, phonemize, prep, prosody, synth};
use config::{PipelineConfig, Resources};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "toucan-prep", version, about = "French TTS front-end and corpus preparation")]
struct Cli {
    /// TOML configuration; falls back to $TOUCAN_PREP_CONFIG, then defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Text or manifest transcripts to IPA and articulatory vectors.
    Phonemize(phonemize::PhonemizeArgs),
    /// Phone durations from posteriograms, with a decoder skip-rate report.
    Align(align::AlignArgs),
    /// Phone-level pitch and energy.
    Prosody(prosody::ProsodyArgs),
    /// Pause validation, cleaning, loudness normalization and joints.
    Prep(prep::PrepArgs),
    /// Homograph resolution accuracy on a gold set.
    EvalHomographs(eval::EvalArgs),
    /// Writes the deterministic synthetic corpus.
    SynthCorpus(synth::SynthArgs),
    /// 24 kHz synthesis output to loudness-matched 48 kHz 16-bit WAV.
    Finalize(finalize::FinalizeArgs),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = PipelineConfig::load(cli.config.as_deref())?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build_global()
        .map_err(|e| CliError::runtime(format!("thread pool: {e}")))?;
    let res = Resources::load(&cfg)?;
    match &cli.command {
        Command::Phonemize(a) => phonemize::run(a, &res),
        Command::Align(a) => align::run(a, &res),
        Command::Prosody(a) => prosody::run(a, &cfg, &res),
        Command::Prep(a) => prep::run(a, &cfg, &res),
        Command::EvalHomographs(a) => eval::run(a, &res),
        Command::SynthCorpus(a) => synth::run(a, &cfg, &res),
        Command::Finalize(a) => finalize::run(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}
