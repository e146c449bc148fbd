//! Randomized consistency testing for user-supplied presentations.
//!
//! A deterministic pass first runs the classical overlap triples on
//! generator letters (associativity of `g_k g_j g_i` for `k >= j >= i`,
//! power overlaps, and inverse round trips), then `trials` random triples
//! of words. Passing is evidence, not proof.

use std::sync::Arc;

use serde::Serialize;

use super::collect::Collector;
use super::element::random_word_over;
use super::word::{Letter, Word};
use super::PcPresentation;
use crate::int::Int;
use crate::rng::SeededRng;

const CHECK_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InconsistencyWitness {
    pub a: Word,
    pub b: Word,
    pub c: Word,
    /// Normal form of `(a b) c`, if collection finished.
    pub left: Option<Vec<Int>>,
    /// Normal form of `a (b c)`.
    pub right: Option<Vec<Int>>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConsistencyVerdict {
    ConsistentSoFar { checks: usize },
    Inconsistent(Box<InconsistencyWitness>),
}

impl ConsistencyVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyVerdict::ConsistentSoFar { .. })
    }
}

fn letter_set(p: &PcPresentation) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 0..p.ngens() {
        out.push(Word::generator(i));
        match p.order(i) {
            None => out.push(Word::from_pairs(&[(i, -1)])),
            Some(r) if r > 2 => out.push(Word::from_letters([Letter::new(i, (r - 1) as i64)])),
            Some(_) => {}
        }
    }
    out
}

/// Compares `(a b) c`, `a (b c)` and the collected concatenation `a b c`.
fn triple(p: &PcPresentation, a: &Word, b: &Word, c: &Word) -> Option<InconsistencyWitness> {
    let mut col = Collector::new(p, CHECK_BUDGET);
    let witness = |left, right, reason: &str| InconsistencyWitness {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        left,
        right,
        reason: reason.to_string(),
    };
    let run = |col: &mut Collector| -> Result<(Vec<Int>, Vec<Int>, Vec<Int>), super::PcError> {
        let ea = col.collect_word(a)?;
        let eb = col.collect_word(b)?;
        let ec = col.collect_word(c)?;
        let ab = col.mul(&ea, &eb)?;
        let left = col.mul(&ab, &ec)?;
        let bc = col.mul(&eb, &ec)?;
        let right = col.mul(&ea, &bc)?;
        let whole = col.collect_word(&a.concat(b).concat(c))?;
        Ok((left, right, whole))
    };
    match run(&mut col) {
        Err(e) => Some(witness(None, None, &format!("collection failed: {e}"))),
        Ok((left, right, whole)) => {
            if left != right {
                Some(witness(Some(left), Some(right), "(ab)c != a(bc)"))
            } else if left != whole {
                Some(witness(Some(left), Some(whole), "(ab)c != collect(abc)"))
            } else {
                None
            }
        }
    }
}

pub fn check_consistency(p: &Arc<PcPresentation>, trials: usize, rng: &mut SeededRng) -> ConsistencyVerdict {
    let mut checks = 0;
    let letters = letter_set(p);
    let gen_of = |w: &Word| w.letters()[0].gen;

    // inverse round trips: g_j g_i^e g_i^-e collects to g_j
    for i in 0..p.ngens() {
        for j in i + 1..p.ngens() {
            for e in [1i64, -1] {
                let w = Word::from_letters([Letter::new(j, 1), Letter::new(i, e)]);
                let back = Word::from_pairs(&[(i, -e)]);
                let mut col = Collector::new(p, CHECK_BUDGET);
                let got = col.collect_word(&w).and_then(|x| {
                    let y = col.collect_word(&back)?;
                    col.mul(&x, &y)
                });
                checks += 1;
                let expect = col.collect_word(&Word::generator(j)).ok();
                if got.as_ref().ok() != expect.as_ref() {
                    return ConsistencyVerdict::Inconsistent(Box::new(InconsistencyWitness {
                        a: Word::generator(j),
                        b: Word::from_pairs(&[(i, e)]),
                        c: back,
                        left: got.ok(),
                        right: expect,
                        reason: "conjugation relations are not mutually inverse".into(),
                    }));
                }
            }
        }
    }

    for x in &letters {
        for y in letters.iter().filter(|y| gen_of(y) <= gen_of(x)) {
            for z in letters.iter().filter(|z| gen_of(z) <= gen_of(y)) {
                checks += 1;
                if let Some(w) = triple(p, x, y, z) {
                    return ConsistencyVerdict::Inconsistent(Box::new(w));
                }
            }
        }
    }

    if p.ngens() > 0 {
        let gens: Vec<usize> = (0..p.ngens()).collect();
        for _ in 0..trials {
            let a = random_word_over(&gens, 1, 6, rng).expect("valid range");
            let b = random_word_over(&gens, 1, 6, rng).expect("valid range");
            let c = random_word_over(&gens, 1, 6, rng).expect("valid range");
            checks += 1;
            if let Some(w) = triple(p, &a, &b, &c) {
                return ConsistencyVerdict::Inconsistent(Box::new(w));
            }
        }
    }
    ConsistencyVerdict::ConsistentSoFar { checks }
}
