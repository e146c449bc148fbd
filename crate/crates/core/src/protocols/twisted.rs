//! Fiat-Shamir style authentication on the double twisted conjugacy problem,
//! with group inversion as the antihomomorphism `*`.
//!
//! Public key `(phi, psi, w, t)` with `t = psi(s^-1) w phi(s)`. Each round
//! commits `u = psi(r^-1) t phi(r)`; on challenge 0 the prover reveals `r`
//! and the verifier recomputes `u` from `t`; on challenge 1 it reveals `s r`
//! and the verifier recomputes `u` from `w`. A prover without `s` passes a
//! round with probability 1/2.

use rand::Rng;
use serde::Serialize;

use super::ProtocolError;
use crate::oracles::Endomorphism;
use crate::pc::{random_element, GroupElement};
use crate::platform::PlatformGroup;
use crate::rng::SeededRng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedKey {
    pub phi: Endomorphism,
    pub psi: Endomorphism,
    pub w: GroupElement,
    pub t: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Round {
    pub u: GroupElement,
    pub challenge: bool,
    pub v: GroupElement,
    pub u_prime: GroupElement,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuthTranscript {
    pub rounds: Vec<Round>,
    pub accepted: bool,
}

/// `psi(a^-1) x phi(a)`.
fn twist(phi: &Endomorphism, psi: &Endomorphism, x: &GroupElement, a: &GroupElement) -> Result<GroupElement, ProtocolError> {
    Ok(psi.apply(&a.inv()?)?.mul(x)?.mul(&phi.apply(a)?)?)
}

pub fn twisted_keygen(
    g: &PlatformGroup,
    phi: Endomorphism,
    psi: Endomorphism,
    rng: &mut SeededRng,
) -> Result<(TwistedKey, GroupElement), ProtocolError> {
    let p = g.presentation();
    let (_, s) = random_element(p, 4, 8, rng)?;
    let (_, w) = random_element(p, 4, 8, rng)?;
    let t = twist(&phi, &psi, &w, &s)?;
    Ok((TwistedKey { phi, psi, w, t }, s))
}

/// Bob's check of one response.
pub fn verify_round(key: &TwistedKey, u: &GroupElement, challenge: bool, v: &GroupElement) -> Result<(GroupElement, bool), ProtocolError> {
    let base = if challenge { &key.w } else { &key.t };
    let u_prime = twist(&key.phi, &key.psi, base, v)?;
    let ok = &u_prime == u;
    Ok((u_prime, ok))
}

/// Honest prover holding `s`.
pub fn twisted_auth_rounds(
    g: &PlatformGroup,
    key: &TwistedKey,
    s: &GroupElement,
    rounds: usize,
    rng: &mut SeededRng,
) -> Result<AuthTranscript, ProtocolError> {
    let p = g.presentation();
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let (_, r) = random_element(p, 4, 8, rng)?;
        let u = twist(&key.phi, &key.psi, &key.t, &r)?;
        let challenge = rng.gen_bool(0.5);
        let v = if challenge { s.mul(&r)? } else { r };
        let (u_prime, accepted) = verify_round(key, &u, challenge, &v)?;
        out.push(Round {
            u,
            challenge,
            v,
            u_prime,
            accepted,
        });
    }
    let accepted = out.iter().all(|r| r.accepted);
    Ok(AuthTranscript { rounds: out, accepted })
}

/// Key generation followed by `rounds` honest rounds.
pub fn twisted_auth_session(
    g: &PlatformGroup,
    phi: Endomorphism,
    psi: Endomorphism,
    rounds: usize,
    rng: &mut SeededRng,
) -> Result<AuthTranscript, ProtocolError> {
    let (key, s) = twisted_keygen(g, phi, psi, rng)?;
    twisted_auth_rounds(g, &key, &s, rounds, rng)
}

/// A prover without `s`: it guesses the challenge and prepares a commitment
/// it can open for that guess only.
pub fn twisted_cheater_rounds(
    g: &PlatformGroup,
    key: &TwistedKey,
    rounds: usize,
    rng: &mut SeededRng,
) -> Result<AuthTranscript, ProtocolError> {
    let p = g.presentation();
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let (_, r) = random_element(p, 4, 8, rng)?;
        let guess = rng.gen_bool(0.5);
        let base = if guess { &key.w } else { &key.t };
        let u = twist(&key.phi, &key.psi, base, &r)?;
        let challenge = rng.gen_bool(0.5);
        let (u_prime, accepted) = verify_round(key, &u, challenge, &r)?;
        out.push(Round {
            u,
            challenge,
            v: r,
            u_prime,
            accepted,
        });
    }
    let accepted = out.iter().all(|r| r.accepted);
    Ok(AuthTranscript { rounds: out, accepted })
}
