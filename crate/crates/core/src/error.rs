use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtsError {
    #[error("an LTS needs at least one state")]
    NoStates,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("state name `{0}` used twice")]
    DuplicateStateName(String),
}

/// Failure while reading the Aldebaran `.aut` format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("line {line}: malformed header, expected `des (initial, transitions, states)`")]
    MalformedHeader { line: usize },
    #[error("missing `des` header")]
    MissingHeader,
    #[error("line {line}: malformed transition `{text}`")]
    MalformedTransition { line: usize, text: String },
    #[error("line {line}: unterminated quoted label")]
    UnterminatedLabel { line: usize },
    #[error("line {line}: state index {index} out of range (header declares {states} states)")]
    StateOutOfRange { line: usize, index: usize, states: usize },
    #[error("line {line}: header declares {expected} transitions but {found} were given")]
    TransitionCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: malformed `#name` line")]
    MalformedName { line: usize },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: LtsError,
    },
}

impl AutError {
    pub fn line(&self) -> Option<usize> {
        match self {
            AutError::MissingHeader => None,
            AutError::MalformedHeader { line }
            | AutError::MalformedTransition { line, .. }
            | AutError::UnterminatedLabel { line }
            | AutError::StateOutOfRange { line, .. }
            | AutError::TransitionCount { line, .. }
            | AutError::MalformedName { line }
            | AutError::Invalid { line, .. } => Some(*line),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error("configuration {0} is not part of this game")]
    UnknownConfig(String),
    #[error("configuration {0} is not owned by Spoiler")]
    NotSpoilerOwned(String),
    #[error("round bound must be at least 1")]
    RoundBound,
    #[error("strategy has no move for configuration {0}")]
    StrategyUndefined(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error("pair ({0}, {1}) is not apart")]
    NotApart(String, String),
    #[error("configuration {0} is not winning for Spoiler")]
    NotWinning(String),
    #[error("proof does not match the game: {0}")]
    Mismatch(String),
    #[error("malformed proof document: {0}")]
    Document(String),
}
