//! Key exchange, encryption, signature, authentication and secret-sharing
//! protocols over polycyclic platform groups.

pub mod aag;
pub mod elgamal;
pub mod kolee;
pub mod sharing;
pub mod signature;
pub mod twisted;

use std::sync::Arc;

use crate::int::Int;
use crate::oracles::OracleError;
use crate::pc::{GroupElement, PcError, PcPresentation};
use crate::smallcanc::SmallCancError;

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("shared key was the identity in {attempts} consecutive sessions")]
    DegenerateKey { attempts: usize },
    #[error("key agreement failed: {0}")]
    AgreementFailure(String),
    #[error("platform group has no certified commuting pair")]
    NoCommutingPair,
    #[error("generators g{s} and g{t} of S and T do not commute")]
    NonCommutingSubgroups { s: usize, t: usize },
    #[error("conjugacy solver exhausted its budget")]
    SolverExhausted,
    #[error("platform group has no certified self-centralizing element")]
    NoCertifiedElement,
    #[error("key has no unused factorizations left; regenerate it")]
    FactorReuse,
    #[error("need {need} shares, got {have}")]
    InsufficientShares { have: usize, need: usize },
    #[error("transcript does not match its group: {0}")]
    Malformed(String),
    #[error(transparent)]
    SmallCanc(#[from] SmallCancError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Pc(#[from] PcError),
}

/// Rebuilds an element from a serialized exponent vector.
pub fn element_from(p: &Arc<PcPresentation>, exps: &[Int]) -> Result<GroupElement, ProtocolError> {
    GroupElement::from_exps(p, exps.to_vec()).map_err(|e| ProtocolError::Malformed(e.to_string()))
}

pub fn elements_from(p: &Arc<PcPresentation>, v: &[Vec<Int>]) -> Result<Vec<GroupElement>, ProtocolError> {
    v.iter().map(|e| element_from(p, e)).collect()
}

/// Checks that every generator in `a` commutes with every generator in `b`.
pub(crate) fn check_commuting(
    p: &Arc<PcPresentation>,
    a: &[usize],
    b: &[usize],
) -> Result<(), ProtocolError> {
    for &i in a {
        for &j in b {
            let gi = GroupElement::generator(p, i)?;
            let gj = GroupElement::generator(p, j)?;
            if !gi.commutator(&gj)?.is_identity() {
                return Err(ProtocolError::NonCommutingSubgroups { s: i + 1, t: j + 1 });
            }
        }
    }
    Ok(())
}
