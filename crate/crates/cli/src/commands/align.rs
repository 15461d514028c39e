use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use toucan_prep::alignment::{dijkstra_align, mas, reorder};
use toucan_prep::container::read_posteriogram;

use super::{emit_json, par_map, tokens_of};
use crate::config::Resources;
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Mas,
    Dijkstra,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory holding `{utt_id}.pgrm` posteriograms.
    #[arg(long)]
    pub posteriograms: PathBuf,
    #[arg(long, value_enum, default_value = "mas")]
    pub algo: Algo,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Skip-rate report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Serialize)]
struct UttSkips {
    utt_id: String,
    phones: usize,
    mas_zeros: usize,
    dijkstra_zeros: usize,
}

#[derive(Serialize)]
struct Report {
    algo: Algo,
    utterances: usize,
    phones: usize,
    mas_zero_rate: f64,
    dijkstra_zero_rate: f64,
    per_utterance: Vec<UttSkips>,
}

pub fn run(args: &AlignArgs, res: &Resources) -> Result<(), CliError> {
    let records = manifest::load(&args.manifest)?;
    let table = res.table();
    let results = par_map(&records, |r| {
        let tokens = tokens_of(r, table)?;
        let path = args.posteriograms.join(format!("{}.pgrm", r.utt_id));
        let post = read_posteriogram(&path).map_err(|e| CliError::from(e).with_context(&path.display().to_string()))?;
        let scores = reorder(&post, &tokens)?.map(f64::from);
        let m = mas(&scores)?;
        let d = dijkstra_align(&scores)?;
        let skips = UttSkips { utt_id: r.utt_id.clone(), phones: tokens.len(), mas_zeros: m.zero_count(), dijkstra_zeros: d.zero_count() };
        let mut r = r.clone();
        r.durations = Some(match args.algo {
            Algo::Mas => m.durations,
            Algo::Dijkstra => d.durations,
        });
        Ok((r, skips))
    })?;
    let (records, mut per_utterance): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    per_utterance.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
    let phones: usize = per_utterance.iter().map(|u| u.phones).sum();
    let rate = |f: fn(&UttSkips) -> usize| {
        if phones == 0 {
            0.0
        } else {
            per_utterance.iter().map(f).sum::<usize>() as f64 / phones as f64
        }
    };
    let report = Report {
        algo: args.algo,
        utterances: per_utterance.len(),
        phones,
        mas_zero_rate: rate(|u| u.mas_zeros),
        dijkstra_zero_rate: rate(|u| u.dijkstra_zeros),
        per_utterance,
    };
    manifest::store(&args.out, records)?;
    emit_json(args.report.as_deref(), &report)
}
