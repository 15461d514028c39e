use std::io::{Read, Write};
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use toucan_prep::frontend::HomographChoice;

use super::par_map;
use crate::config::Resources;
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Args)]
pub struct PhonemizeArgs {
    /// Text file with one utterance per line; stdin when omitted.
    pub input: Option<PathBuf>,
    /// Phonemize the transcripts of a manifest instead of raw text.
    #[arg(long, conflicts_with = "input")]
    pub manifest: Option<PathBuf>,
    /// Output file; stdout when omitted (required with --manifest).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Print only the IPA string per line.
    #[arg(long)]
    pub ipa_only: bool,
}

#[derive(Serialize)]
struct Line<'a> {
    text: &'a str,
    ipa: &'a str,
    symbols: Vec<&'a str>,
    vectors: Vec<Vec<u8>>,
    homographs: &'a [HomographChoice],
}

pub fn run(args: &PhonemizeArgs, res: &Resources) -> Result<(), CliError> {
    let fe = res.frontend();
    if let Some(m) = &args.manifest {
        let out = args.out.as_ref().ok_or_else(|| CliError::config("--out is required with --manifest"))?;
        let records = manifest::load(m)?;
        let records = par_map(&records, |r| {
            let mut r = r.clone();
            r.phonemes = Some(fe.run(&r.transcript)?.ipa);
            Ok(r)
        })?;
        return manifest::store(out, records);
    }

    let mut text = String::new();
    match &args.input {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::input(format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::input(format!("stdin: {e}")))?;
        }
    }
    let mut buf = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let p = fe.run(line)?;
        if args.ipa_only {
            writeln!(buf, "{}", p.ipa)?;
        } else {
            let line = Line {
                text: &p.cleaned,
                ipa: &p.ipa,
                symbols: p.tokens.iter().map(|t| t.symbol.as_str()).collect(),
                vectors: p.vectors.iter().map(|v| v.values.to_vec()).collect(),
                homographs: &p.homographs,
            };
            serde_json::to_writer(&mut buf, &line).map_err(CliError::runtime)?;
            buf.push(b'\n');
        }
    }
    match &args.out {
        Some(p) => std::fs::write(p, buf).map_err(|e| CliError::runtime(format!("cannot write {}: {e}", p.display()))),
        None => Ok(std::io::stdout().lock().write_all(&buf)?),
    }
}
