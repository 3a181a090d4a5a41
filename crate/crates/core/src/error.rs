use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("SchemaError: {0}")]
    Schema(String),
    #[error("ConsistencyError: {entity}: {invariant}")]
    Consistency { entity: String, invariant: String },
    #[error("DanglingReference: unknown {kind} `{id}`")]
    DanglingReference { kind: &'static str, id: String },
    #[error("MissingTwist: no twist of `{constituent}` by `{character}`")]
    MissingTwist { constituent: String, character: String },
    #[error("UnsupportedSwap: no constituent for `{core}` with Deligne size {size}")]
    UnsupportedSwap { core: String, size: u32 },
    #[error("UnboundedConstituent: `{0}`")]
    UnboundedConstituent(String),
    #[error("NotSelfDual: `{0}`")]
    NotSelfDual(String),
    #[error("MissingFrobenius: `{0}`")]
    MissingFrobenius(String),
    #[error("NonRealProduct: {context} evaluates to {value}")]
    NonRealProduct { context: String, value: String },
    #[error("UnsupportedXuCase: {0}")]
    UnsupportedXuCase(String),
    #[error("MissingRSEntry: no Rankin-Selberg sign for {{`{left}`, `{right}`}}")]
    MissingRsEntry { left: String, right: String },
    #[error("MissingLocalization: `{cuspidal}` at place `{place}`")]
    MissingLocalization { cuspidal: String, place: String },
}

impl Error {
    pub fn consistency(entity: impl Into<String>, invariant: impl Into<String>) -> Self {
        Error::Consistency {
            entity: entity.into(),
            invariant: invariant.into(),
        }
    }

    pub fn dangling(kind: &'static str, id: impl Into<String>) -> Self {
        Error::DanglingReference {
            kind,
            id: id.into(),
        }
    }

    /// True for errors caused by malformed or incomplete input data, as
    /// opposed to a well-formed request outside the supported domain.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Schema(_)
                | Error::Consistency { .. }
                | Error::DanglingReference { .. }
                | Error::MissingTwist { .. }
                | Error::MissingFrobenius(_)
                | Error::MissingRsEntry { .. }
                | Error::MissingLocalization { .. }
        )
    }
}
