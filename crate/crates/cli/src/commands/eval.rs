use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use toucan_prep::homograph::{evaluate_accuracy, load_gold, EvalReport, FileTagProvider, PosProvider};

use super::emit_json;
use crate::config::Resources;
use crate::error::CliError;

/// Published accuracy of the reference system on its own test set.
const REFERENCE_ACCURACY: f64 = 0.84;

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Gold file: `sentence<TAB>token_index<TAB>ipa` lines.
    #[arg(long)]
    pub gold: PathBuf,
    /// Pre-tagged sentences used instead of the configured tagger.
    #[arg(long)]
    pub tags: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Output<'a> {
    tagger: &'a str,
    #[serde(flatten)]
    report: EvalReport,
    reference_accuracy: f64,
    delta_to_reference: f64,
}

pub fn run(args: &EvalArgs, res: &Resources) -> Result<(), CliError> {
    let gold = load_gold(&args.gold)?;
    let file_tags;
    let provider: &dyn PosProvider = match &args.tags {
        Some(p) => {
            file_tags = FileTagProvider::load(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            &file_tags
        }
        None => res.pos(),
    };
    let report = evaluate_accuracy(&gold, provider, res.dictionary(), res.tagmap(), res.rules())?;
    let out = Output {
        tagger: provider.name(),
        delta_to_reference: report.accuracy - REFERENCE_ACCURACY,
        report,
        reference_accuracy: REFERENCE_ACCURACY,
    };
    emit_json(args.out.as_deref(), &out)
}
