//! Text to phoneme tokens: cleaning, homograph resolution, G2P and
//! articulatory encoding in one pass.

use std::collections::HashMap;

use serde::Serialize;

use crate::homograph::{annotate_text, Annotation, HomographDictionary, PlusRules, PosError, PosProvider, TagMap};
use crate::phoneme::{
    phonemize, tokenize_ipa, vectorize, ArticulatoryVector, FeatureTable, FrontendError, G2pError, G2pProvider,
    PhonemeToken,
};
use crate::text::{clean_text, split_pieces};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    G2p(#[from] G2pError),
    #[error(transparent)]
    Pos(#[from] PosError),
    #[error(transparent)]
    Tokenize(#[from] FrontendError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomographChoice {
    pub surface: String,
    pub ipa: Option<String>,
    pub method: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhonemizedText {
    pub cleaned: String,
    pub ipa: String,
    pub tokens: Vec<PhonemeToken>,
    pub vectors: Vec<ArticulatoryVector>,
    pub homographs: Vec<HomographChoice>,
}

/// Borrowed resources for the text front end.
#[derive(Clone, Copy)]
pub struct TextFrontend<'a> {
    pub g2p: &'a dyn G2pProvider,
    pub pos: &'a dyn PosProvider,
    pub dictionary: &'a HomographDictionary,
    pub tagmap: &'a TagMap,
    pub rules: &'a PlusRules,
    pub table: &'a FeatureTable,
    pub lang: &'a str,
}

impl TextFrontend<'_> {
    /// Words are transcribed one at a time so resolved homographs can
    /// replace the provider's pronunciation; punctuation is appended to the
    /// preceding word unchanged.
    pub fn run(&self, raw: &str) -> Result<PhonemizedText, PipelineError> {
        let cleaned = clean_text(raw);
        let annotations = annotate_text(&cleaned, self.pos, self.dictionary, self.tagmap, self.rules)?;
        let by_piece: HashMap<usize, &Annotation> = annotations.iter().map(|a| (a.token_index, a)).collect();
        let mut cache: HashMap<String, String> = HashMap::new();
        let mut ipa = String::new();
        for (i, piece) in split_pieces(&cleaned).iter().enumerate() {
            if !piece.is_word() {
                ipa.push_str(piece.text);
                continue;
            }
            let resolved = by_piece.get(&i).and_then(|a| a.resolution.pronunciation.clone());
            let word_ipa = match resolved {
                Some(p) => p,
                None => match cache.get(piece.text) {
                    Some(p) => p.clone(),
                    None => {
                        let p = phonemize(piece.text, self.g2p, self.lang)?;
                        cache.insert(piece.text.to_string(), p.clone());
                        p
                    }
                },
            };
            if !ipa.is_empty() {
                ipa.push(' ');
            }
            ipa.push_str(&word_ipa);
        }
        let tokens = tokenize_ipa(&ipa, self.table)?;
        let vectors = vectorize(&tokens, self.table)?;
        let homographs = annotations
            .into_iter()
            .map(|a| HomographChoice {
                surface: a.surface,
                ipa: a.resolution.pronunciation,
                method: a.resolution.method.as_str(),
            })
            .collect();
        Ok(PhonemizedText { cleaned, ipa, tokens, vectors, homographs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homograph::UnigramTagger;
    use crate::phoneme::{LexiconProvider, FRENCH};

    fn run(text: &str) -> PhonemizedText {
        let lex = LexiconProvider::builtin();
        let fe = TextFrontend {
            g2p: &lex,
            pos: UnigramTagger::builtin(),
            dictionary: HomographDictionary::builtin(),
            tagmap: TagMap::builtin(),
            rules: PlusRules::builtin(),
            table: FeatureTable::builtin(),
            lang: FRENCH,
        };
        fe.run(text).unwrap()
    }

    #[test]
    fn fils_resolves_inline() {
        let out = run("Le fils");
        assert!(out.ipa.ends_with("fis"), "{}", out.ipa);
        assert_eq!(out.homographs.len(), 1);
        assert_eq!(out.tokens.len(), out.vectors.len());
    }

    #[test]
    fn plus_liaison_and_negation() {
        assert!(run("Il est plus important.").ipa.contains("plyz"));
        assert!(run("Il ne pleut plus, le soleil revient.").ipa.contains("ply,"));
    }

    #[test]
    fn empty_input() {
        let out = run("   ");
        assert_eq!(out.ipa, "");
        assert!(out.tokens.is_empty());
    }

    #[test]
    fn punctuation_becomes_silence_tokens() {
        let out = run("Il est content, et moi aussi.");
        assert_eq!(out.tokens.iter().filter(|t| t.is_silence).count(), 2);
    }
}
