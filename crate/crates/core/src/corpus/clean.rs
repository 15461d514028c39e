use serde::Serialize;

use super::CorpusError;

pub const DEFAULT_CLEAN_THRESHOLD: f64 = 0.1;
pub const DEFAULT_CLEAN_WINDOW: usize = 10;

// keeps gaps that equal the threshold up to rounding from stopping the rule
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CleaningReport {
    /// Removed utterances, highest loss first.
    pub removed_ids: Vec<String>,
    pub kept_count: usize,
    /// `(top_loss, mean_of_next)` for every check, including the one that
    /// stopped the rule.
    pub threshold_trace: Vec<(f64, f64)>,
}

/// Drops the highest-loss utterances while the top loss exceeds the mean of
/// the next `window` losses by more than `threshold`.
///
/// Ties in loss are ordered by id. Near the end of the ranking the mean is
/// taken over however many losses remain; the rule stops when none do.
pub fn clean_by_loss(losses: &[(String, f64)], threshold: f64, window: usize) -> Result<CleaningReport, CorpusError> {
    let needed = window + 1;
    if losses.len() < needed {
        return Err(CorpusError::TooFewSamples { got: losses.len(), needed });
    }
    if let Some((id, _)) = losses.iter().find(|(_, l)| !l.is_finite()) {
        return Err(CorpusError::NonFiniteLoss { utt_id: id.clone() });
    }
    let mut ranked: Vec<&(String, f64)> = losses.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let mut removed_ids = Vec::new();
    let mut threshold_trace = Vec::new();
    for i in 0..ranked.len() {
        let next = &ranked[i + 1..(i + 1 + window).min(ranked.len())];
        if next.is_empty() {
            break;
        }
        let top = ranked[i].1;
        let mean = next.iter().map(|(_, l)| l).sum::<f64>() / next.len() as f64;
        threshold_trace.push((top, mean));
        if top - mean > threshold + EPS {
            removed_ids.push(ranked[i].0.clone());
        } else {
            break;
        }
    }
    Ok(CleaningReport { kept_count: losses.len() - removed_ids.len(), removed_ids, threshold_trace })
}

/// Parses `utt_id<TAB>loss` lines; `#` starts a comment line.
pub fn parse_losses(src: &str) -> Result<Vec<(String, f64)>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |message: String| CorpusError::Parse { line: i + 1, message };
        let (id, loss) = line.split_once('\t').ok_or_else(|| parse("expected utt_id<TAB>loss".into()))?;
        let loss: f64 = loss.trim().parse().map_err(|e| parse(format!("loss {loss:?}: {e}")))?;
        out.push((id.trim().to_string(), loss));
    }
    Ok(out)
}
