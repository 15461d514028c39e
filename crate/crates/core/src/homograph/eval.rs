use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use super::dictionary::HomographDictionary;
use super::resolve::{annotate_text, Method, PlusRules};
use super::tags::{PosError, PosProvider, TagMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("gold set is empty")]
    EmptyGoldSet,
    #[error("gold line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read gold file {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Provider(#[from] PosError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldItem {
    pub sentence: String,
    pub token_index: usize,
    pub ipa: String,
}

/// Parses `sentence<TAB>token_index<TAB>ipa` lines; `#` starts a comment.
pub fn parse_gold(src: &str) -> Result<Vec<GoldItem>, EvalError> {
    let mut items = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: &str| EvalError::Parse { line: i + 1, message: message.to_string() };
        let cols: Vec<&str> = line.split('\t').collect();
        let [sentence, index, ipa] = cols[..] else {
            return Err(parse_err("expected sentence<TAB>token_index<TAB>ipa"));
        };
        let token_index = index.trim().parse().map_err(|_| parse_err("token_index is not an integer"))?;
        items.push(GoldItem { sentence: sentence.to_string(), token_index, ipa: ipa.trim().to_string() });
    }
    Ok(items)
}

pub fn load_gold(path: impl AsRef<Path>) -> Result<Vec<GoldItem>, EvalError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)
        .map_err(|e| EvalError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_gold(&src)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MethodCounts {
    pub total: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub total: usize,
    pub correct: usize,
    pub by_method: BTreeMap<&'static str, MethodCounts>,
    /// Gold items answered wrongly: (item index, predicted pronunciation).
    pub errors: Vec<(usize, Option<String>)>,
}

fn same_ipa(a: &str, b: &str) -> bool {
    a.nfd().eq(b.nfd())
}

/// Exact-match accuracy of the resolver over a gold set.
pub fn evaluate_accuracy(
    gold: &[GoldItem],
    provider: &dyn PosProvider,
    dict: &HomographDictionary,
    tagmap: &TagMap,
    rules: &PlusRules,
) -> Result<EvalReport, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGoldSet);
    }
    let mut by_method: BTreeMap<&'static str, MethodCounts> = BTreeMap::new();
    let mut correct = 0;
    let mut errors = Vec::new();
    for (i, item) in gold.iter().enumerate() {
        let annotations = annotate_text(&item.sentence, provider, dict, tagmap, rules)?;
        let hit = annotations.iter().find(|a| a.token_index == item.token_index);
        let method = hit.map_or(Method::NotHomograph, |a| a.resolution.method);
        let predicted = hit.and_then(|a| a.resolution.pronunciation.clone());
        let ok = predicted.as_deref().is_some_and(|p| same_ipa(p, &item.ipa));
        let counts = by_method.entry(method.as_str()).or_default();
        counts.total += 1;
        if ok {
            counts.correct += 1;
            correct += 1;
        } else {
            errors.push((i, predicted));
        }
    }
    Ok(EvalReport { accuracy: correct as f64 / gold.len() as f64, total: gold.len(), correct, by_method, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homograph::{FileTagProvider, UnigramTagger};

    #[test]
    fn empty_gold_is_error() {
        let r = evaluate_accuracy(
            &[],
            UnigramTagger::builtin(),
            HomographDictionary::builtin(),
            TagMap::builtin(),
            PlusRules::builtin(),
        );
        assert_eq!(r.unwrap_err(), EvalError::EmptyGoldSet);
    }

    #[test]
    fn parse_gold_lines() {
        let g = parse_gold("# header\nLes fils.\t1\tfis\n").unwrap();
        assert_eq!(g, vec![GoldItem { sentence: "Les fils.".into(), token_index: 1, ipa: "fis".into() }]);
        assert!(matches!(parse_gold("a\tx\tb\n"), Err(EvalError::Parse { line: 1, .. })));
        assert!(matches!(parse_gold("a\t1\n"), Err(EvalError::Parse { line: 1, .. })));
    }

    #[test]
    fn unambiguous_coarse_tags_with_oracle_score_one() {
        let gold = parse_gold("Nous adoptions.\t1\tadɔptjɔ̃\nLes adoptions.\t1\tadɔpsjɔ̃\n").unwrap();
        let tags = FileTagProvider::parse("Nous\tPRON\nadoptions\tVERB\n.\tYPFOR\n\nLes\tDET\nadoptions\tNFP\n.\tYPFOR\n")
            .unwrap();
        let r = evaluate_accuracy(&gold, &tags, HomographDictionary::builtin(), TagMap::builtin(), PlusRules::builtin())
            .unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.by_method["coarse_match"], MethodCounts { total: 2, correct: 2 });
    }

    #[test]
    fn non_homograph_target_counts_as_miss() {
        let gold = parse_gold("La maison.\t1\tmɛzɔ̃\n").unwrap();
        let r = evaluate_accuracy(
            &gold,
            UnigramTagger::builtin(),
            HomographDictionary::builtin(),
            TagMap::builtin(),
            PlusRules::builtin(),
        )
        .unwrap();
        assert_eq!(r.correct, 0);
        assert_eq!(r.errors, vec![(0, None)]);
    }
}
