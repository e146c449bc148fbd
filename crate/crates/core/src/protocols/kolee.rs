//! Ko-Lee key exchange over a pair of elementwise commuting subgroups.

use serde::Serialize;

use super::ProtocolError;
use crate::pc::{random_element, random_element_over, GroupElement};
use crate::platform::PlatformGroup;
use crate::rng::SeededRng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoLeeTranscript {
    pub base: GroupElement,
    /// `g^a`, sent by Alice.
    pub from_alice: GroupElement,
    /// `g^b`, sent by Bob.
    pub from_bob: GroupElement,
    #[serde(skip)]
    pub alice_secret: GroupElement,
    #[serde(skip)]
    pub bob_secret: GroupElement,
    /// `(g^b)^a`.
    pub key_alice: GroupElement,
    /// `(g^a)^b`.
    pub key_bob: GroupElement,
}

pub fn kolee_session(
    base: &GroupElement,
    a: &GroupElement,
    b: &GroupElement,
) -> Result<KoLeeTranscript, ProtocolError> {
    let from_alice = base.conjugate(a)?;
    let from_bob = base.conjugate(b)?;
    let key_alice = from_bob.conjugate(a)?;
    let key_bob = from_alice.conjugate(b)?;
    if key_alice != key_bob {
        return Err(ProtocolError::AgreementFailure("(g^b)^a != (g^a)^b".into()));
    }
    Ok(KoLeeTranscript {
        base: base.clone(),
        from_alice,
        from_bob,
        alice_secret: a.clone(),
        bob_secret: b.clone(),
        key_alice,
        key_bob,
    })
}

/// Random base of length 4..=8; secrets are words of length 2..=6 in the
/// two halves of the platform's commuting pair.
pub fn kolee_run(g: &PlatformGroup, rng: &mut SeededRng) -> Result<KoLeeTranscript, ProtocolError> {
    let (sa, sb) = g.commuting_pair().ok_or(ProtocolError::NoCommutingPair)?;
    let p = g.presentation();
    let (_, base) = random_element(p, 4, 8, rng)?;
    let (_, a) = random_element_over(p, sa, 2, 6, rng)?;
    let (_, b) = random_element_over(p, sb, 2, 6, rng)?;
    kolee_session(&base, &a, &b)
}
