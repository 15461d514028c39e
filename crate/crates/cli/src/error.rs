use std::fmt;

use toucan_prep::alignment::AlignError;
use toucan_prep::audio::AudioError;
use toucan_prep::container::ContainerError;
use toucan_prep::corpus::CorpusError;
use toucan_prep::frontend::PipelineError;
use toucan_prep::homograph::EvalError;
use toucan_prep::phoneme::{FrontendError, G2pError};
use toucan_prep::prosody::ProsodyError;
use toucan_prep::synth::SynthError;

/// Failure classes with their process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Runtime,
    Config,
    Input,
    Validation,
}

impl Kind {
    pub fn exit_code(self) -> i32 {
        match self {
            Kind::Runtime => 1,
            Kind::Config => 2,
            Kind::Input => 3,
            Kind::Validation => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Runtime => "runtime",
            Kind::Config => "config",
            Kind::Input => "input",
            Kind::Validation => "validation",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
    pub utt_id: Option<String>,
}

impl CliError {
    pub fn new(kind: Kind, message: impl fmt::Display) -> Self {
        CliError { kind, message: message.to_string(), utt_id: None }
    }

    pub fn config(message: impl fmt::Display) -> Self {
        Self::new(Kind::Config, message)
    }

    pub fn input(message: impl fmt::Display) -> Self {
        Self::new(Kind::Input, message)
    }

    pub fn validation(message: impl fmt::Display) -> Self {
        Self::new(Kind::Validation, message)
    }

    pub fn runtime(message: impl fmt::Display) -> Self {
        Self::new(Kind::Runtime, message)
    }

    pub fn for_utt(mut self, utt_id: &str) -> Self {
        self.utt_id.get_or_insert_with(|| utt_id.to_string());
        self
    }

    pub fn with_context(mut self, ctx: &str) -> Self {
        self.message = format!("{ctx}: {}", self.message);
        self
    }

    /// Single-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::json!({
            "level": "error",
            "kind": self.kind.as_str(),
            "code": self.kind.exit_code(),
            "message": self.message,
        });
        if let Some(id) = &self.utt_id {
            v["utt_id"] = serde_json::Value::from(id.as_str());
        }
        v.to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn warn(utt_id: Option<&str>, message: impl fmt::Display) {
    let mut v = serde_json::json!({ "level": "warning", "message": message.to_string() });
    if let Some(id) = utt_id {
        v["utt_id"] = serde_json::Value::from(id);
    }
    eprintln!("{v}");
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::runtime(e)
    }
}

impl From<ContainerError> for CliError {
    fn from(e: ContainerError) -> Self {
        CliError::input(e)
    }
}

impl From<AudioError> for CliError {
    fn from(e: AudioError) -> Self {
        CliError::input(e)
    }
}

impl From<AlignError> for CliError {
    fn from(e: AlignError) -> Self {
        CliError::validation(e)
    }
}

impl From<ProsodyError> for CliError {
    fn from(e: ProsodyError) -> Self {
        CliError::validation(e)
    }
}

impl From<FrontendError> for CliError {
    fn from(e: FrontendError) -> Self {
        CliError::validation(e)
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::G2p(G2pError::ProviderUnavailable { .. }) | PipelineError::Pos(_) => CliError::runtime(e),
            _ => CliError::validation(e),
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Parse { .. } => CliError::input(e),
            CorpusError::Io(_) => CliError::runtime(e),
            _ => CliError::validation(e),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::EmptyGoldSet => CliError::validation(e),
            EvalError::Parse { .. } | EvalError::Io { .. } => CliError::input(e),
            EvalError::Provider(_) => CliError::runtime(e),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Frontend(e) => e.into(),
            SynthError::Align(e) => e.into(),
            SynthError::Audio(e) => e.into(),
            SynthError::Corpus(e) => e.into(),
            SynthError::Io(e) => e.into(),
            SynthError::Transcript { .. } => CliError::input(e),
        }
    }
}
