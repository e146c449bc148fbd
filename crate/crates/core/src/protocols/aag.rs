//! Anshel-Anshel-Goldfeld commutator key exchange.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{elements_from, element_from, ProtocolError};
use crate::int::Int;
use crate::pc::{random_element_over, GroupElement, PcPresentation};
use crate::platform::PlatformGroup;
use crate::rng::SeededRng;

/// Fresh sessions drawn before a run reports `DegenerateKey`.
pub const DEGENERATE_RETRIES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AagParams {
    #[serde(rename = "N1")]
    pub n1: usize,
    #[serde(rename = "N2")]
    pub n2: usize,
    #[serde(rename = "L1")]
    pub l1: usize,
    #[serde(rename = "L2")]
    pub l2: usize,
    #[serde(rename = "L")]
    pub l: usize,
}

impl AagParams {
    pub fn new(n1: usize, n2: usize, l1: usize, l2: usize, l: usize) -> Result<Self, ProtocolError> {
        if n1 == 0 || n2 == 0 || l == 0 || l1 == 0 || l1 > l2 {
            return Err(ProtocolError::BadParams(format!(
                "need N1, N2, L >= 1 and 1 <= L1 <= L2, got ({n1}, {n2}, {l1}, {l2}, {l})"
            )));
        }
        Ok(AagParams { n1, n2, l1, l2, l })
    }
}

/// One factor `x_index^sign` of a private key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyFactor {
    pub index: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AagPublic {
    pub a_bar: Vec<GroupElement>,
    pub b_bar: Vec<GroupElement>,
    /// `a'_i = B^-1 a_i B`, sent by Bob.
    pub a_prime: Vec<GroupElement>,
    /// `b'_j = A^-1 b_j A`, sent by Alice.
    pub b_prime: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AagPrivate {
    pub alice_key: Vec<KeyFactor>,
    pub bob_key: Vec<KeyFactor>,
    pub alice_secret: GroupElement,
    pub bob_secret: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AagTranscript {
    pub params: AagParams,
    pub public: AagPublic,
    pub private: AagPrivate,
    /// `A^-1 * prod a'_{s_k}^{e_k}`, from Alice's side.
    pub key_alice: GroupElement,
    /// `B^-1 * prod b'_{t_k}^{d_k}`, from Bob's side.
    pub key_bob: GroupElement,
}

impl AagTranscript {
    /// The shared secret `kappa = kappa_A`.
    pub fn shared_key(&self) -> &GroupElement {
        &self.key_alice
    }
}

/// Evaluates `prod x_{index}^{sign}`.
pub fn evaluate_key(
    p: &Arc<PcPresentation>,
    key: &[KeyFactor],
    xs: &[GroupElement],
) -> Result<GroupElement, ProtocolError> {
    let mut acc = GroupElement::identity(p);
    for f in key {
        let x = xs.get(f.index).ok_or_else(|| {
            ProtocolError::BadParams(format!("key factor index {} out of range", f.index))
        })?;
        acc = if f.sign > 0 { acc.mul(x)? } else { acc.mul(&x.inv()?)? };
    }
    Ok(acc)
}

fn random_key(n: usize, l: usize, rng: &mut SeededRng) -> Vec<KeyFactor> {
    (0..l)
        .map(|_| KeyFactor {
            index: rng.gen_range(0..n),
            sign: if rng.gen_bool(0.5) { 1 } else { -1 },
        })
        .collect()
}

/// Runs the exchange on given public sets and private keys. The result may
/// have an identity key; [`aag_run`] filters those.
pub fn aag_session(
    g: &PlatformGroup,
    params: AagParams,
    a_bar: Vec<GroupElement>,
    b_bar: Vec<GroupElement>,
    alice_key: Vec<KeyFactor>,
    bob_key: Vec<KeyFactor>,
) -> Result<AagTranscript, ProtocolError> {
    let p = g.presentation();
    let a = evaluate_key(p, &alice_key, &a_bar)?;
    let b = evaluate_key(p, &bob_key, &b_bar)?;
    let (a_inv, b_inv) = (a.inv()?, b.inv()?);
    let b_prime = b_bar
        .iter()
        .map(|x| x.conjugate_with_inverse(&a, &a_inv))
        .collect::<Result<Vec<_>, _>>()?;
    let a_prime = a_bar
        .iter()
        .map(|x| x.conjugate_with_inverse(&b, &b_inv))
        .collect::<Result<Vec<_>, _>>()?;

    // each side uses only its own private factors and the conjugates it
    // received
    let key_alice = a_inv.mul(&evaluate_key(p, &alice_key, &a_prime)?)?;
    let key_bob = b_inv.mul(&evaluate_key(p, &bob_key, &b_prime)?)?;
    if !key_alice.mul(&key_bob)?.is_identity() {
        return Err(ProtocolError::AgreementFailure("kappa_A * kappa_B != 1".into()));
    }
    Ok(AagTranscript {
        params,
        public: AagPublic {
            a_bar,
            b_bar,
            a_prime,
            b_prime,
        },
        private: AagPrivate {
            alice_key,
            bob_key,
            alice_secret: a,
            bob_secret: b,
        },
        key_alice,
        key_bob,
    })
}

/// AAG with Alice's words over `alice_gens` and Bob's over `bob_gens`.
pub fn aag_run_over(
    g: &PlatformGroup,
    params: AagParams,
    alice_gens: &[usize],
    bob_gens: &[usize],
    rng: &mut SeededRng,
) -> Result<AagTranscript, ProtocolError> {
    let p = g.presentation();
    for _ in 0..DEGENERATE_RETRIES {
        let draw = |n: usize, gens: &[usize], rng: &mut SeededRng| -> Result<Vec<GroupElement>, ProtocolError> {
            (0..n)
                .map(|_| Ok(random_element_over(p, gens, params.l1, params.l2, rng)?.1))
                .collect()
        };
        let a_bar = draw(params.n1, alice_gens, rng)?;
        let b_bar = draw(params.n2, bob_gens, rng)?;
        let alice_key = random_key(params.n1, params.l, rng);
        let bob_key = random_key(params.n2, params.l, rng);
        let t = aag_session(g, params, a_bar, b_bar, alice_key, bob_key)?;
        if !t.key_alice.is_identity() {
            return Ok(t);
        }
        log::debug!("degenerate AAG key, redrawing");
    }
    Err(ProtocolError::DegenerateKey {
        attempts: DEGENERATE_RETRIES,
    })
}

pub fn aag_run(g: &PlatformGroup, params: AagParams, rng: &mut SeededRng) -> Result<AagTranscript, ProtocolError> {
    let gens: Vec<usize> = (0..g.ngens()).collect();
    aag_run_over(g, params, &gens, &gens, rng)
}

/// Public half of a transcript as written to disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AagPublicRecord {
    pub group: String,
    pub params: AagParams,
    pub a_bar: Vec<Vec<Int>>,
    pub b_bar: Vec<Vec<Int>>,
    pub a_prime: Vec<Vec<Int>>,
    pub b_prime: Vec<Vec<Int>>,
}

/// Private half of a transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AagPrivateRecord {
    pub alice_key: Vec<KeyFactor>,
    pub bob_key: Vec<KeyFactor>,
    pub alice_secret: Vec<Int>,
    pub bob_secret: Vec<Int>,
    pub shared_key: Vec<Int>,
}

fn exps_of(v: &[GroupElement]) -> Vec<Vec<Int>> {
    v.iter().map(|x| x.exps().to_vec()).collect()
}

impl AagTranscript {
    pub fn public_record(&self, group: &str) -> AagPublicRecord {
        AagPublicRecord {
            group: group.to_string(),
            params: self.params,
            a_bar: exps_of(&self.public.a_bar),
            b_bar: exps_of(&self.public.b_bar),
            a_prime: exps_of(&self.public.a_prime),
            b_prime: exps_of(&self.public.b_prime),
        }
    }

    pub fn private_record(&self) -> AagPrivateRecord {
        AagPrivateRecord {
            alice_key: self.private.alice_key.clone(),
            bob_key: self.private.bob_key.clone(),
            alice_secret: self.private.alice_secret.exps().to_vec(),
            bob_secret: self.private.bob_secret.exps().to_vec(),
            shared_key: self.key_alice.exps().to_vec(),
        }
    }
}

impl AagPublicRecord {
    pub fn to_public(&self, p: &Arc<PcPresentation>) -> Result<AagPublic, ProtocolError> {
        Ok(AagPublic {
            a_bar: elements_from(p, &self.a_bar)?,
            b_bar: elements_from(p, &self.b_bar)?,
            a_prime: elements_from(p, &self.a_prime)?,
            b_prime: elements_from(p, &self.b_prime)?,
        })
    }
}

impl AagPrivateRecord {
    pub fn shared_key(&self, p: &Arc<PcPresentation>) -> Result<GroupElement, ProtocolError> {
        element_from(p, &self.shared_key)
    }
}
