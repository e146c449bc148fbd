//! Attacks on AAG transcripts: the length-based beam search and the
//! field-based linear-algebra attack on a matrix image.

pub mod field;
pub mod lba;

pub use field::{field_based_attack, FieldAttackResult};
pub use lba::{lba, LbaConfig, LbaOutcome, LbaResult, Side};

#[derive(Debug, thiserror::Error)]
pub enum AttackError {
    #[error("no invertible solution in the span of the public algebra")]
    SingularSystem,
    #[error("transcript is inconsistent: {0}")]
    BadTranscript(String),
    #[error(transparent)]
    Platform(#[from] crate::platform::PlatformError),
    #[error(transparent)]
    Pc(#[from] crate::pc::PcError),
}
