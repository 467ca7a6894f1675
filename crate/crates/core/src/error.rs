use thiserror::Error;

use crate::language::Elem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A finite language has no member outside the excluded set.
    #[error("language exhausted: every member is already excluded")]
    Exhausted,
    /// An infinite language failed to produce a member within its certified gap.
    #[error("search-bound certificate violated: no member in ({after}, {after}+{gap}]")]
    CertificateViolated { after: u64, gap: u64 },
    #[error("invalid enumeration: {0} is not a member of the language")]
    InvalidEnumeration(Elem),
    #[error("contradictory labels for element {0}")]
    ContradictoryLabel(Elem),
    #[error("collection `{collection}` has no {oracle} oracle")]
    MissingOracle {
        collection: String,
        oracle: &'static str,
    },
    #[error("iteration cap of {cap} reached in {context}")]
    IterationCap { cap: usize, context: &'static str },
    #[error("geometric draw exceeded {0} coin flips")]
    CoinCap(u32),
    #[error("rejection sampler exceeded {0} proposals")]
    RejectionCap(usize),
    #[error("machine read more than the declared {bound} random bits in one step")]
    BitBoundExceeded { bound: u32 },
    #[error("bit discovery reached the cap of {0} bits")]
    DiscoveryCap(u32),
    #[error("need at least 3 rows with positive error, found {0}")]
    InsufficientData(usize),
    #[error("sample of size {got} is too small, need at least {need}")]
    SampleTooSmall { need: usize, got: usize },
    #[error("empty sample")]
    EmptySample,
    #[error("collection `{0}` is not certified trivial for generation")]
    NotTrivial(String),
    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
