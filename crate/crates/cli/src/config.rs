use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toucan_prep::corpus::{JoinConfig, LevelUnit, PauseConfig, PeakMode, VadConfig};
use toucan_prep::corpus::{DEFAULT_CLEAN_THRESHOLD, DEFAULT_CLEAN_WINDOW};
use toucan_prep::frontend::TextFrontend;
use toucan_prep::homograph::{
    load_dictionary, parse_word_list, FileTagProvider, HomographDictionary, PlusRules, PosProvider, TagMap,
    UnigramTagger,
};
use toucan_prep::phoneme::{CommandProvider, FeatureTable, G2pProvider, LexiconProvider};
use toucan_prep::prosody::{MelConfig, NormMode, PitchConfig};

use crate::error::CliError;

pub const CONFIG_ENV: &str = "TOUCAN_PREP_CONFIG";

/// Resource files. Relative paths resolve against the config file's
/// directory; unset entries use the resources built into the library.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsConfig {
    pub dictionary: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub modifiers: Option<PathBuf>,
    pub tagmap: Option<PathBuf>,
    pub h_aspire: Option<PathBuf>,
    pub pos_lexicon: Option<PathBuf>,
    pub g2p_lexicon: Option<PathBuf>,
    /// Pre-tagged sentences; replaces the unigram tagger when set.
    pub pos_tags: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct G2pConfig {
    /// External phonemizer program; the shipped lexicon is used when unset.
    pub command: Option<String>,
    pub args: Vec<String>,
    pub lang: String,
}

impl Default for G2pConfig {
    fn default() -> Self {
        G2pConfig { command: None, args: Vec::new(), lang: toucan_prep::phoneme::FRENCH.to_string() }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProsodySection {
    pub norm: NormMode,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoudnessConfig {
    pub target: f64,
    pub unit: LevelUnit,
    pub peak: PeakMode,
    /// Per-speaker targets overriding `target`.
    pub speakers: BTreeMap<String, f64>,
}

impl Default for LoudnessConfig {
    fn default() -> Self {
        LoudnessConfig { target: -30.0, unit: LevelUnit::Lufs, peak: PeakMode::Warn, speakers: BTreeMap::new() }
    }
}

impl LoudnessConfig {
    pub fn target_for(&self, speaker: Option<&str>) -> f64 {
        speaker.and_then(|s| self.speakers.get(s)).copied().unwrap_or(self.target)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CleaningConfig {
    pub threshold: f64,
    pub window: usize,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig { threshold: DEFAULT_CLEAN_THRESHOLD, window: DEFAULT_CLEAN_WINDOW }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: PathsConfig,
    pub g2p: G2pConfig,
    pub mel: MelConfig,
    pub pitch: PitchConfig,
    pub prosody: ProsodySection,
    pub loudness: LoudnessConfig,
    pub join: JoinConfig,
    pub cleaning: CleaningConfig,
    pub vad: VadConfig,
    pub pauses: PauseConfig,
    /// Worker threads; 0 uses every core.
    pub parallelism: usize,
}

impl PipelineConfig {
    /// Reads `explicit`, else the file named by the environment variable,
    /// else the defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        let path = explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let Some(path) = path else {
            let cfg = PipelineConfig::default();
            cfg.validate()?;
            return Ok(cfg);
        };
        let src = std::fs::read_to_string(&path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: PipelineConfig =
            toml::from_str(&src).map_err(|e| CliError::config(format!("{}: {}", path.display(), e.message())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.paths.resolve(base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.paths.check_exist()?;
        self.mel.validate().map_err(|e| CliError::config(format!("[mel] {e}")))?;
        let bad = |section: &str, msg: &str| Err(CliError::config(format!("[{section}] {msg}")));
        if !(self.pitch.min_hz > 0.0 && self.pitch.min_hz < self.pitch.max_hz) {
            return bad("pitch", "need 0 < min_hz < max_hz");
        }
        if !(0.0..=1.0).contains(&self.pitch.voicing_threshold) || !(0.0..=1.0).contains(&self.pitch.silence_threshold) {
            return bad("pitch", "thresholds must lie in [0, 1]");
        }
        let targets = std::iter::once(self.loudness.target).chain(self.loudness.speakers.values().copied());
        for t in targets {
            if !(t.is_finite() && (-70.0..=0.0).contains(&t)) {
                return bad("loudness", "targets must lie in [-70, 0]");
            }
        }
        if !(self.join.pause_seconds >= 0.0 && self.join.max_total_seconds > 0.0) {
            return bad("join", "need pause_seconds >= 0 and max_total_seconds > 0");
        }
        if !(self.cleaning.threshold >= 0.0 && self.cleaning.threshold.is_finite()) || self.cleaning.window == 0 {
            return bad("cleaning", "need a finite threshold >= 0 and window >= 1");
        }
        self.vad.validate().map_err(|m| CliError::config(format!("[vad] {m}")))?;
        if !(0.0..=1.0).contains(&self.pauses.min_nonspeech_fraction) {
            return bad("pauses", "min_nonspeech_fraction must lie in [0, 1]");
        }
        if self.parallelism > 1024 {
            return bad("pipeline", "parallelism must be at most 1024");
        }
        if self.g2p.lang.is_empty() {
            return bad("g2p", "lang must not be empty");
        }
        Ok(())
    }
}

impl PathsConfig {
    fn all(&mut self) -> [&mut Option<PathBuf>; 8] {
        [
            &mut self.dictionary,
            &mut self.features,
            &mut self.modifiers,
            &mut self.tagmap,
            &mut self.h_aspire,
            &mut self.pos_lexicon,
            &mut self.g2p_lexicon,
            &mut self.pos_tags,
        ]
    }

    fn resolve(&mut self, base: &Path) {
        for p in self.all().into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    fn check_exist(&self) -> Result<(), CliError> {
        let mut copy = self.clone();
        for p in copy.all().into_iter().flatten() {
            if !p.is_file() {
                return Err(CliError::config(format!("configured file {} does not exist", p.display())));
            }
        }
        if self.features.is_some() != self.modifiers.is_some() {
            return Err(CliError::config("[paths] features and modifiers must be set together"));
        }
        Ok(())
    }
}

/// Loaded resources; `None` fields fall back to the built-in data.
pub struct Resources {
    dictionary: Option<HomographDictionary>,
    table: Option<FeatureTable>,
    tagmap: Option<TagMap>,
    rules: Option<PlusRules>,
    pos: Box<dyn PosProvider>,
    g2p: Box<dyn G2pProvider>,
    lang: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

impl Resources {
    pub fn load(cfg: &PipelineConfig) -> Result<Self, CliError> {
        let p = &cfg.paths;
        let cfg_err = |path: &Path, e: &dyn std::fmt::Display| CliError::config(format!("{}: {e}", path.display()));
        let dictionary = match &p.dictionary {
            Some(path) => Some(load_dictionary(path).map_err(|e| cfg_err(path, &e))?),
            None => None,
        };
        let table = match (&p.features, &p.modifiers) {
            (Some(f), Some(m)) => Some(FeatureTable::parse(&read(f)?, &read(m)?).map_err(|e| cfg_err(f, &e))?),
            _ => None,
        };
        let tagmap = match &p.tagmap {
            Some(path) => Some(TagMap::parse(&read(path)?).map_err(|e| cfg_err(path, &e))?),
            None => None,
        };
        let rules = match &p.h_aspire {
            Some(path) => Some(PlusRules { h_aspire: parse_word_list(&read(path)?), ..PlusRules::default() }),
            None => None,
        };
        let pos: Box<dyn PosProvider> = match (&p.pos_tags, &p.pos_lexicon) {
            (Some(path), _) => Box::new(FileTagProvider::parse(&read(path)?).map_err(|e| cfg_err(path, &e))?),
            (None, Some(path)) => Box::new(UnigramTagger::parse(&read(path)?).map_err(|e| cfg_err(path, &e))?),
            (None, None) => Box::new(UnigramTagger::builtin().clone()),
        };
        let g2p: Box<dyn G2pProvider> = match (&cfg.g2p.command, &p.g2p_lexicon) {
            (Some(cmd), _) => Box::new(CommandProvider::new(cmd).with_args(cfg.g2p.args.iter().cloned())),
            (None, Some(path)) => Box::new(
                LexiconProvider::from_tsv(&read(path)?)
                    .map_err(|(line, m)| CliError::config(format!("{} line {line}: {m}", path.display())))?,
            ),
            (None, None) => Box::new(LexiconProvider::builtin()),
        };
        Ok(Resources { dictionary, table, tagmap, rules, pos, g2p, lang: cfg.g2p.lang.clone() })
    }

    pub fn table(&self) -> &FeatureTable {
        self.table.as_ref().unwrap_or_else(|| FeatureTable::builtin())
    }

    pub fn dictionary(&self) -> &HomographDictionary {
        self.dictionary.as_ref().unwrap_or_else(|| HomographDictionary::builtin())
    }

    pub fn tagmap(&self) -> &TagMap {
        self.tagmap.as_ref().unwrap_or_else(|| TagMap::builtin())
    }

    pub fn rules(&self) -> &PlusRules {
        self.rules.as_ref().unwrap_or_else(|| PlusRules::builtin())
    }

    pub fn pos(&self) -> &dyn PosProvider {
        self.pos.as_ref()
    }

    pub fn frontend(&self) -> TextFrontend<'_> {
        TextFrontend {
            g2p: self.g2p.as_ref(),
            pos: self.pos.as_ref(),
            dictionary: self.dictionary(),
            tagmap: self.tagmap(),
            rules: self.rules(),
            table: self.table(),
            lang: &self.lang,
        }
    }
}
