//! Conjugacy-based signature scheme with a self-centralizing base element.
//!
//! Keys: `x = (g^n)^s` for a highly composite `n`. To sign, pick a fresh
//! factorization `n = n_i n_j` and `t`, publish `y = (g^{n_i})^t`, hash
//! `h = H(m || f(y))` and `alpha = t^-1 s h y`. Verification checks
//! `(y^{n_j})^alpha = x^{h y}`.

use rand::seq::SliceRandom;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::ProtocolError;
use crate::int::Int;
use crate::pc::{random_element, GroupElement};
use crate::platform::PlatformGroup;
use crate::rng::SeededRng;

/// `2^4 * 3^2 * 5`, with 30 divisors.
pub const DEFAULT_N: u64 = 720;
/// Signatures allowed per key before it must be regenerated.
pub const MAX_SIGNATURES: usize = 8;
/// Hash exponents per generator lie in `[-128, 128)`; larger exponents on a
/// unit generator make the conjugation matrices grow very quickly.
const HASH_EXP_BYTES: usize = 1;

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PublicKey {
    pub g: GroupElement,
    pub x: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureKeypair {
    public: PublicKey,
    s: GroupElement,
    n: u64,
    used: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub y: GroupElement,
    pub alpha: GroupElement,
    pub n_j: u64,
}

impl SignatureKeypair {
    pub fn public(&self) -> &PublicKey {
        &self.public
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn used_factors(&self) -> &[u64] {
        &self.used
    }
}

pub fn sig_keygen(g: &PlatformGroup, rng: &mut SeededRng) -> Result<SignatureKeypair, ProtocolError> {
    sig_keygen_with(g, DEFAULT_N, rng)
}

pub fn sig_keygen_with(g: &PlatformGroup, n: u64, rng: &mut SeededRng) -> Result<SignatureKeypair, ProtocolError> {
    let base = g.certified_element().ok_or(ProtocolError::NoCertifiedElement)?.clone();
    if n < 2 {
        return Err(ProtocolError::BadParams("n must be at least 2".into()));
    }
    let (_, s) = random_element(g.presentation(), 4, 8, rng)?;
    let x = base.pow(&Int::from(n))?.conjugate(&s)?;
    Ok(SignatureKeypair {
        public: PublicKey { g: base, x },
        s,
        n,
        used: Vec::new(),
    })
}

/// `H(m || f(y))`: SHA-256 stretched by a counter, one byte per generator
/// read as a signed exponent, reduced mod the relative order if finite.
pub fn hash_to_group(message: &[u8], y: &GroupElement) -> Result<GroupElement, ProtocolError> {
    let p = y.group();
    let mut stream = Vec::new();
    let mut counter = 0u32;
    while stream.len() < HASH_EXP_BYTES * p.ngens() {
        let mut h = Sha256::new();
        h.update(counter.to_be_bytes());
        h.update(message);
        h.update(y.to_string().as_bytes());
        stream.extend_from_slice(&h.finalize());
        counter += 1;
    }
    let exps = (0..p.ngens())
        .map(|i| {
            let raw = stream[i] as i8 as i64;
            match p.order(i) {
                Some(r) => Int::from(raw.rem_euclid(r as i64)),
                None => Int::from(raw),
            }
        })
        .collect();
    Ok(GroupElement::from_exps(p, exps)?)
}

pub fn sig_sign(kp: &mut SignatureKeypair, message: &[u8], rng: &mut SeededRng) -> Result<Signature, ProtocolError> {
    if kp.used.len() >= MAX_SIGNATURES {
        return Err(ProtocolError::FactorReuse);
    }
    let fresh: Vec<u64> = divisors(kp.n).into_iter().filter(|d| !kp.used.contains(d)).collect();
    let &n_i = fresh.choose(rng).ok_or(ProtocolError::FactorReuse)?;
    kp.used.push(n_i);
    let n_j = kp.n / n_i;

    let (_, t) = random_element(kp.s.group(), 4, 8, rng)?;
    let y = kp.public.g.pow(&Int::from(n_i))?.conjugate(&t)?;
    let h = hash_to_group(message, &y)?;
    let alpha = t.inv()?.mul(&kp.s)?.mul(&h)?.mul(&y)?;
    let sig = Signature { y, alpha, n_j };
    if !sig_verify(&kp.public, message, &sig)? {
        return Err(ProtocolError::AgreementFailure("honest signature failed to verify".into()));
    }
    Ok(sig)
}

pub fn sig_verify(pk: &PublicKey, message: &[u8], sig: &Signature) -> Result<bool, ProtocolError> {
    if sig.n_j == 0 {
        return Ok(false);
    }
    let h = hash_to_group(message, &sig.y)?;
    let lhs = sig.y.pow(&Int::from(sig.n_j))?.conjugate(&sig.alpha)?;
    let rhs = pk.x.conjugate(&h.mul(&sig.y)?)?;
    Ok(lhs == rhs)
}
