//! Length-based attack with memory `M`: a beam search over conjugates of the
//! intercepted tuple, keeping the `M` shortest candidates per iteration.
//!
//! Attacking Alice, the state starts at `b'` and is conjugated by letters
//! `a_i^e`. Conjugators accumulate on the right, so a state `c = b'^x`; when
//! some `c^{a_i^e} = b` the key is `R = (x a_i^e)^-1`, which satisfies
//! `b^R = b'` and differs from Alice's `A` by an element centralizing every
//! `b_j`. That is enough to compute the shared key.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::AttackError;
use crate::int::Int;
use crate::pc::GroupElement;
use crate::protocols::aag::{evaluate_key, AagPublic, KeyFactor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Recover (an equivalent of) Alice's `A` from `b'`.
    Alice,
    /// Recover Bob's `B` from `a'`.
    Bob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LbaConfig {
    pub memory: usize,
    pub max_iterations: u64,
    pub time_budget: Option<Duration>,
    pub side: Side,
}

impl Default for LbaConfig {
    fn default() -> Self {
        LbaConfig {
            memory: 2,
            max_iterations: 10_000,
            time_budget: None,
            side: Side::Alice,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LbaOutcome {
    Success {
        /// `R` as a product of the attacked party's public generators.
        factors: Vec<KeyFactor>,
        /// The shared key `[A, B]` computed from `R` and public data.
        key: GroupElement,
    },
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LbaResult {
    pub outcome: LbaOutcome,
    pub iterations: u64,
    pub expansions: u64,
    /// Largest `|S'|` seen before truncation.
    pub peak_candidates: usize,
    /// Largest `|S|` kept, never above `M`.
    pub peak_kept: usize,
}

impl LbaResult {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, LbaOutcome::Success { .. })
    }

    pub fn key(&self) -> Option<&GroupElement> {
        match &self.outcome {
            LbaOutcome::Success { key, .. } => Some(key),
            LbaOutcome::Fail => None,
        }
    }
}

struct State {
    len: Int,
    tuple: Vec<GroupElement>,
    factors: Vec<KeyFactor>,
}

fn tuple_len(t: &[GroupElement]) -> Int {
    t.iter().fold(Int::ZERO, |acc, x| &acc + &x.nf_length())
}

/// Total order: tuple length, then the exponent vectors lexicographically.
fn compare(a: &State, b: &State) -> Ordering {
    a.len.cmp(&b.len).then_with(|| {
        a.tuple
            .iter()
            .zip(&b.tuple)
            .map(|(x, y)| x.exps().cmp(y.exps()))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn invert(factors: &[KeyFactor]) -> Vec<KeyFactor> {
    factors
        .iter()
        .rev()
        .map(|f| KeyFactor {
            index: f.index,
            sign: -f.sign,
        })
        .collect()
}

/// The attacked side's generators, the tuple it conjugated, and that tuple
/// before conjugation.
fn roles(public: &AagPublic, side: Side) -> (&[GroupElement], &[GroupElement], &[GroupElement], &[GroupElement]) {
    match side {
        Side::Alice => (&public.a_bar, &public.a_prime, &public.b_bar, &public.b_prime),
        Side::Bob => (&public.b_bar, &public.b_prime, &public.a_bar, &public.a_prime),
    }
}

/// Checks `target^R = conjugated` and computes the shared key from `R`.
pub fn recover_key(public: &AagPublic, side: Side, factors: &[KeyFactor]) -> Result<Option<GroupElement>, AttackError> {
    let (gens, gens_prime, target, conjugated) = roles(public, side);
    let Some(first) = gens.first() else {
        return Err(AttackError::BadTranscript("empty generator set".into()));
    };
    let p = first.group();
    let r = evaluate_key(p, factors, gens).map_err(|e| AttackError::BadTranscript(e.to_string()))?;
    let r_inv = r.inv()?;
    for (b, bp) in target.iter().zip(conjugated) {
        if &b.conjugate_with_inverse(&r, &r_inv)? != bp {
            return Ok(None);
        }
    }
    // R^-1 R(x') is [R, other secret] = kappa on Alice's side and
    // kappa^-1 on Bob's
    let r_prime = evaluate_key(p, factors, gens_prime).map_err(|e| AttackError::BadTranscript(e.to_string()))?;
    let k = r_inv.mul(&r_prime)?;
    Ok(Some(match side {
        Side::Alice => k,
        Side::Bob => k.inv()?,
    }))
}

pub fn lba(public: &AagPublic, cfg: &LbaConfig) -> Result<LbaResult, AttackError> {
    let (gens, _, target, conjugated) = roles(public, cfg.side);
    if cfg.memory == 0 {
        return Err(AttackError::BadTranscript("memory must be positive".into()));
    }
    if target.len() != conjugated.len() || gens.is_empty() {
        return Err(AttackError::BadTranscript("tuple sizes do not match".into()));
    }
    let start = Instant::now();
    let mut letters = Vec::with_capacity(2 * gens.len());
    for (i, a) in gens.iter().enumerate() {
        let ai = a.inv()?;
        letters.push((KeyFactor { index: i, sign: 1 }, a.clone(), ai.clone()));
        letters.push((KeyFactor { index: i, sign: -1 }, ai, a.clone()));
    }

    let mut result = LbaResult {
        outcome: LbaOutcome::Fail,
        iterations: 0,
        expansions: 0,
        peak_candidates: 0,
        peak_kept: 1,
    };
    let success = |factors: Vec<KeyFactor>| -> Result<LbaOutcome, AttackError> {
        let r = invert(&factors);
        let key = recover_key(public, cfg.side, &r)?
            .expect("LBA success must re-verify against the transcript");
        Ok(LbaOutcome::Success { factors: r, key })
    };
    if conjugated == target {
        result.outcome = success(Vec::new())?;
        return Ok(result);
    }

    let mut states = vec![State {
        len: tuple_len(conjugated),
        tuple: conjugated.to_vec(),
        factors: Vec::new(),
    }];
    while result.iterations < cfg.max_iterations {
        if cfg.time_budget.is_some_and(|t| start.elapsed() >= t) {
            break;
        }
        result.iterations += 1;
        let mut next = Vec::with_capacity(states.len() * letters.len());
        for st in &states {
            for (f, x, x_inv) in &letters {
                let tuple = st
                    .tuple
                    .iter()
                    .map(|c| c.conjugate_with_inverse(x, x_inv))
                    .collect::<Result<Vec<_>, _>>()?;
                result.expansions += 1;
                let mut factors = st.factors.clone();
                factors.push(*f);
                if tuple == target {
                    result.outcome = success(factors)?;
                    return Ok(result);
                }
                next.push(State {
                    len: tuple_len(&tuple),
                    tuple,
                    factors,
                });
            }
        }
        result.peak_candidates = result.peak_candidates.max(next.len());
        next.sort_by(compare);
        next.truncate(cfg.memory);
        result.peak_kept = result.peak_kept.max(next.len());
        states = next;
    }
    Ok(result)
}
