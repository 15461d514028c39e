//! Rule-based French homograph disambiguation from POS tags.

mod dictionary;
mod eval;
mod resolve;
mod tags;

pub use dictionary::{load_dictionary, Candidate, DictionaryError, HomographDictionary, HomographEntry};
pub use eval::{evaluate_accuracy, load_gold, parse_gold, EvalError, EvalReport, GoldItem, MethodCounts};
pub use resolve::{
    annotate_text, parse_word_list, resolve, resolve_plus, starts_with_vowel_sound, Annotation, Method, PlusRule, PlusRules,
    Resolution,
};
pub use tags::{FileTagProvider, PosError, PosProvider, TagMap, TaggedToken, UnigramTagger};
