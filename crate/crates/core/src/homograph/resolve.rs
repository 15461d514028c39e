use std::collections::HashSet;
use std::sync::OnceLock;

use serde::Serialize;

use super::dictionary::{normalize_word, HomographDictionary};
use super::tags::{PosError, PosProvider, TagMap, TaggedToken};
use crate::text::split_pieces;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    NotHomograph,
    CoarseMatch,
    ExtendedMatch,
    DefaultFallback,
    PlusRule,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::NotHomograph => "not_homograph",
            Method::CoarseMatch => "coarse_match",
            Method::ExtendedMatch => "extended_match",
            Method::DefaultFallback => "default_fallback",
            Method::PlusRule => "plus_rule",
        }
    }
}

/// Which branch of the `plus` cascade fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlusRule {
    Negation,
    ConsonantOnset,
    VowelOnset,
    Plain,
}

impl PlusRule {
    pub fn ipa(self) -> &'static str {
        match self {
            PlusRule::Negation | PlusRule::ConsonantOnset => "ply",
            PlusRule::VowelOnset => "plyz",
            PlusRule::Plain => "plys",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resolution {
    /// `None` only for [`Method::NotHomograph`].
    pub pronunciation: Option<String>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plus_rule: Option<PlusRule>,
}

impl Resolution {
    fn not_homograph() -> Self {
        Resolution { pronunciation: None, method: Method::NotHomograph, plus_rule: None }
    }

    fn with(ipa: &str, method: Method) -> Self {
        Resolution { pronunciation: Some(ipa.to_string()), method, plus_rule: None }
    }
}

const NEGATION_CUES: [&str; 8] = ["ne", "n'", "non", "sans", "aucun", "jamais", "rien", "personne"];
const CLAUSE_DELIMITERS: [&str; 9] = [",", ";", ":", ".", "!", "?", "…", "...", "\""];
const BUILTIN_H_ASPIRE: &str = include_str!("../../data/h_aspire.txt");

/// Context parameters of the `plus` cascade.
#[derive(Debug, Clone)]
pub struct PlusRules {
    pub negation_cues: HashSet<String>,
    pub clause_delimiters: HashSet<String>,
    /// Words whose initial `h` is treated as a consonant.
    pub h_aspire: HashSet<String>,
}

impl Default for PlusRules {
    fn default() -> Self {
        PlusRules {
            negation_cues: NEGATION_CUES.iter().map(|s| s.to_string()).collect(),
            clause_delimiters: CLAUSE_DELIMITERS.iter().map(|s| s.to_string()).collect(),
            h_aspire: parse_word_list(BUILTIN_H_ASPIRE),
        }
    }
}

impl PlusRules {
    pub fn builtin() -> &'static PlusRules {
        static RULES: OnceLock<PlusRules> = OnceLock::new();
        RULES.get_or_init(PlusRules::default)
    }
}

/// One word per line, `#` comments.
pub fn parse_word_list(src: &str) -> HashSet<String> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(normalize_word)
        .collect()
}

const VOWEL_LETTERS: &str = "aeiouyàâäéèêëîïôöùûüœæ";

/// Whether a word begins with a vowel sound for liaison purposes.
///
/// Judged from spelling: a vowel letter is a vowel onset, `h` is a vowel
/// onset unless the word is listed as h-aspiré.
pub fn starts_with_vowel_sound(word: &str, h_aspire: &HashSet<String>) -> bool {
    let w = normalize_word(word);
    match w.chars().next() {
        Some('h') => !h_aspire.contains(&w),
        Some(c) => VOWEL_LETTERS.contains(c),
        None => false,
    }
}

fn is_plus(surface: &str) -> bool {
    normalize_word(surface) == "plus"
}

/// Resolves one token without sentence context. `plus` falls through to
/// the plain reading since no neighbours are visible.
pub fn resolve(token: &TaggedToken, dict: &HomographDictionary) -> Resolution {
    resolve_at(std::slice::from_ref(token), 0, dict, PlusRules::builtin())
}

fn resolve_at(sentence: &[TaggedToken], position: usize, dict: &HomographDictionary, rules: &PlusRules) -> Resolution {
    let token = &sentence[position];
    let Some(entry) = dict.get(&token.surface) else {
        return Resolution::not_homograph();
    };
    if is_plus(&token.surface) {
        return resolve_plus(sentence, position, rules);
    }
    let mut coarse = entry.candidates.iter().filter(|c| c.coarse == token.coarse_tag);
    if let (Some(only), None) = (coarse.next(), coarse.next()) {
        return Resolution::with(&only.ipa, Method::CoarseMatch);
    }
    if let Some(c) = entry.candidates.iter().find(|c| c.extended.as_deref() == Some(token.extended_tag.as_str())) {
        return Resolution::with(&c.ipa, Method::ExtendedMatch);
    }
    Resolution::with(&entry.default_candidate().ipa, Method::DefaultFallback)
}

/// Applies the `plus` cascade to the token at `position`.
///
/// 1. a negation cue earlier in the same clause gives /ply/;
/// 2. a following consonant-initial adjective or adverb gives /ply/;
/// 3. a following vowel-initial adjective or adverb gives /plyz/;
/// 4. anything else gives /plys/.
pub fn resolve_plus(sentence: &[TaggedToken], position: usize, rules: &PlusRules) -> Resolution {
    let negated = sentence[..position]
        .iter()
        .rev()
        .map(|t| normalize_word(&t.surface))
        .take_while(|w| !rules.clause_delimiters.contains(w))
        .any(|w| rules.negation_cues.contains(&w));
    let rule = if negated {
        PlusRule::Negation
    } else {
        match sentence.get(position + 1) {
            Some(next) if next.coarse_tag == "ADJ" || next.coarse_tag == "ADV" => {
                if starts_with_vowel_sound(&next.surface, &rules.h_aspire) {
                    PlusRule::VowelOnset
                } else {
                    PlusRule::ConsonantOnset
                }
            }
            _ => PlusRule::Plain,
        }
    };
    Resolution { pronunciation: Some(rule.ipa().to_string()), method: Method::PlusRule, plus_rule: Some(rule) }
}

/// A homograph found in running text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Annotation {
    /// Index into [`split_pieces`] of the whole text.
    pub token_index: usize,
    pub sentence_index: usize,
    pub surface: String,
    pub resolution: Resolution,
}

fn ends_sentence(piece: &str) -> bool {
    matches!(piece, "." | "!" | "?" | "…")
}

/// Tags `text` sentence by sentence and resolves every dictionary word.
pub fn annotate_text(
    text: &str,
    provider: &dyn PosProvider,
    dict: &HomographDictionary,
    tagmap: &TagMap,
    rules: &PlusRules,
) -> Result<Vec<Annotation>, PosError> {
    let pieces = split_pieces(text);
    let mut out = Vec::new();
    let mut start = 0;
    let mut sentence_index = 0;
    while start < pieces.len() {
        let mut end = start;
        while end < pieces.len() {
            end += 1;
            if ends_sentence(pieces[end - 1].text) && !pieces.get(end).is_some_and(|p| ends_sentence(p.text)) {
                break;
            }
        }
        let surfaces: Vec<&str> = pieces[start..end].iter().map(|p| p.text).collect();
        if surfaces.iter().any(|s| dict.contains(s)) {
            let tags = provider.tag(&surfaces)?;
            if tags.len() != surfaces.len() {
                return Err(PosError::LengthMismatch { expected: surfaces.len(), got: tags.len() });
            }
            let sentence: Vec<TaggedToken> = surfaces
                .iter()
                .zip(&tags)
                .enumerate()
                .map(|(i, (s, t))| TaggedToken::new(s, t, tagmap, sentence_index, start + i))
                .collect();
            for (i, tok) in sentence.iter().enumerate() {
                let resolution = resolve_at(&sentence, i, dict, rules);
                if resolution.method != Method::NotHomograph {
                    out.push(Annotation {
                        token_index: tok.token_index,
                        sentence_index,
                        surface: tok.surface.clone(),
                        resolution,
                    });
                }
            }
        }
        start = end;
        sentence_index += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homograph::{FileTagProvider, UnigramTagger};

    fn tok(surface: &str, tag: &str) -> TaggedToken {
        TaggedToken::new(surface, tag, TagMap::builtin(), 0, 0)
    }

    fn sentence(items: &[(&str, &str)]) -> Vec<TaggedToken> {
        items.iter().enumerate().map(|(i, (s, t))| TaggedToken::new(s, t, TagMap::builtin(), 0, i)).collect()
    }

    fn dict() -> &'static HomographDictionary {
        HomographDictionary::builtin()
    }

    #[test]
    fn adoptions_verb_is_coarse_match() {
        let r = resolve(&tok("adoptions", "VERB"), dict());
        assert_eq!(r, Resolution::with("adɔptjɔ̃", Method::CoarseMatch));
    }

    #[test]
    fn fils_singular_is_extended_match() {
        assert_eq!(resolve(&tok("fils", "NMS"), dict()), Resolution::with("fis", Method::ExtendedMatch));
        assert_eq!(resolve(&tok("fils", "NMP"), dict()), Resolution::with("fis", Method::DefaultFallback));
    }

    #[test]
    fn unknown_word_is_not_homograph() {
        assert_eq!(resolve(&tok("maison", "NFS"), dict()), Resolution::not_homograph());
    }

    #[test]
    fn fallback_uses_default_candidate() {
        let r = resolve(&tok("couvent", "ADJ"), dict());
        assert_eq!(r, Resolution::with("kuvɑ̃", Method::DefaultFallback));
    }

    #[test]
    fn plus_cascade_examples() {
        let rules = PlusRules::builtin();
        let neg = sentence(&[("Je", "PPER1S"), ("ne", "ADV"), ("veux", "VERB"), ("plus", "ADV"), (".", "YPFOR")]);
        assert_eq!(resolve_plus(&neg, 3, rules).plus_rule, Some(PlusRule::Negation));
        let grand = sentence(&[("plus", "ADV"), ("grand", "ADJMS")]);
        assert_eq!(resolve_plus(&grand, 0, rules).pronunciation.as_deref(), Some("ply"));
        let important = sentence(&[("plus", "ADV"), ("important", "ADJMS")]);
        assert_eq!(resolve_plus(&important, 0, rules).pronunciation.as_deref(), Some("plyz"));
        let sum = sentence(&[("deux", "CHIF"), ("plus", "ADV"), ("deux", "CHIF")]);
        assert_eq!(resolve_plus(&sum, 1, rules).pronunciation.as_deref(), Some("plys"));
    }

    #[test]
    fn negation_does_not_cross_clause_boundary() {
        let s = sentence(&[("ne", "ADV"), ("pas", "ADV"), (",", "PUNCT"), ("plus", "ADV"), ("grand", "ADJMS")]);
        assert_eq!(resolve_plus(&s, 3, PlusRules::builtin()).plus_rule, Some(PlusRule::ConsonantOnset));
    }

    #[test]
    fn h_aspire_blocks_liaison() {
        let rules = PlusRules::builtin();
        assert!(!starts_with_vowel_sound("haut", &rules.h_aspire));
        assert!(starts_with_vowel_sound("habile", &rules.h_aspire));
        assert!(starts_with_vowel_sound("Énorme", &rules.h_aspire));
        assert!(!starts_with_vowel_sound("grand", &rules.h_aspire));
        assert!(!starts_with_vowel_sound("", &rules.h_aspire));
    }

    #[test]
    fn annotate_without_homographs_is_empty() {
        let a = annotate_text(
            "La maison bleue.",
            UnigramTagger::builtin(),
            dict(),
            TagMap::builtin(),
            PlusRules::builtin(),
        )
        .unwrap();
        assert!(a.is_empty());
    }

    #[test]
    fn annotate_finds_fils() {
        let a = annotate_text(
            "Les fils du roi",
            UnigramTagger::builtin(),
            dict(),
            TagMap::builtin(),
            PlusRules::builtin(),
        )
        .unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!((a[0].token_index, a[0].surface.as_str()), (1, "fils"));
        assert_eq!(a[0].resolution.pronunciation.as_deref(), Some("fis"));
    }

    #[test]
    fn annotate_two_plus_one_negated() {
        // hand-applied cascade: the first plus follows "n'" in its clause;
        // the second sits after the comma and precedes the final stop
        let text = "Je n'en veux plus, mais lui en veut plus.";
        let a = annotate_text(text, UnigramTagger::builtin(), dict(), TagMap::builtin(), PlusRules::builtin()).unwrap();
        let got: Vec<(usize, &str)> =
            a.iter().map(|x| (x.token_index, x.resolution.pronunciation.as_deref().unwrap())).collect();
        assert_eq!(got, vec![(4, "ply"), (10, "plys")]);
    }

    #[test]
    fn annotate_indexes_across_sentences() {
        let text = "Il est grand. Les fils.";
        let tags = "Il\tPPER3MS\nest\tAUX\ngrand\tADJMS\n.\tYPFOR\n\nLes\tDET\nfils\tNMP\n.\tYPFOR\n";
        let p = FileTagProvider::parse(tags).unwrap();
        let a = annotate_text(text, &p, dict(), TagMap::builtin(), PlusRules::builtin()).unwrap();
        let got: Vec<(usize, usize, &str)> = a.iter().map(|x| (x.sentence_index, x.token_index, x.surface.as_str())).collect();
        assert_eq!(got, vec![(0, 1, "est"), (1, 5, "fils")]);
    }

    #[test]
    fn provider_failure_propagates() {
        let p = FileTagProvider::default();
        let err = annotate_text("Les fils.", &p, dict(), TagMap::builtin(), PlusRules::builtin()).unwrap_err();
        assert!(matches!(err, PosError::ProviderUnavailable { .. }));
    }
}
