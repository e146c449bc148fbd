use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;

use super::collect::{syllables, Collector, DEFAULT_STEP_BUDGET};
use super::word::{Letter, Word};
use super::{PcError, PcPresentation};
use crate::int::Int;
use crate::rng::SeededRng;

/// An element in collected normal form. Two elements of the same group are
/// equal iff their exponent vectors are equal.
#[derive(Clone)]
pub struct GroupElement {
    group: Arc<PcPresentation>,
    exps: Vec<Int>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.exps == other.exps && same_group(&self.group, &other.group)
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.exps.hash(state)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text form `(e1,e2,...,en)`; this is the serialization the
/// signature scheme hashes.
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Serialized as the exponent vector; deserialize through
/// [`GroupElement::from_exps`] with the owning group.
impl serde::Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.exps.serialize(s)
    }
}

pub(crate) fn same_group(a: &Arc<PcPresentation>, b: &Arc<PcPresentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Collects `w` to normal form with the default step budget.
pub fn collect(p: &Arc<PcPresentation>, w: &Word) -> Result<GroupElement, PcError> {
    collect_with_budget(p, w, DEFAULT_STEP_BUDGET)
}

pub fn collect_with_budget(
    p: &Arc<PcPresentation>,
    w: &Word,
    budget: u64,
) -> Result<GroupElement, PcError> {
    let exps = Collector::new(p, budget).collect_word(w)?;
    Ok(GroupElement {
        group: p.clone(),
        exps,
    })
}

impl GroupElement {
    pub fn identity(p: &Arc<PcPresentation>) -> Self {
        GroupElement {
            group: p.clone(),
            exps: vec![Int::ZERO; p.ngens()],
        }
    }

    pub fn generator(p: &Arc<PcPresentation>, i: usize) -> Result<Self, PcError> {
        collect(p, &Word::generator(i))
    }

    /// Wraps an exponent vector, checking it is a valid normal form.
    pub fn from_exps(p: &Arc<PcPresentation>, exps: Vec<Int>) -> Result<Self, PcError> {
        if exps.len() != p.ngens() {
            return Err(PcError::WrongLength {
                expected: p.ngens(),
                got: exps.len(),
            });
        }
        for (i, e) in exps.iter().enumerate() {
            if let Some(r) = p.order(i) {
                if e.is_negative() || !(e < &Int::from(r)) {
                    return Err(PcError::NotNormalForm { gen: i + 1 });
                }
            }
        }
        Ok(GroupElement {
            group: p.clone(),
            exps,
        })
    }

    pub fn from_i64s(p: &Arc<PcPresentation>, exps: &[i64]) -> Result<Self, PcError> {
        Self::from_exps(p, exps.iter().map(|&e| Int::from(e)).collect())
    }

    pub fn group(&self) -> &Arc<PcPresentation> {
        &self.group
    }

    pub fn exps(&self) -> &[Int] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(Int::is_zero)
    }

    /// The normal form as a word `g_1^{e_1} .. g_n^{e_n}`.
    pub fn to_word(&self) -> Word {
        Word::from_letters(syllables(&self.exps))
    }

    /// Sum of |exponent| over the normal form.
    pub fn nf_length(&self) -> Int {
        self.exps.iter().fold(Int::ZERO, |acc, e| &acc + &e.abs())
    }

    fn check(&self, other: &GroupElement) -> Result<(), PcError> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(PcError::GroupMismatch)
        }
    }

    fn wrap(&self, exps: Vec<Int>) -> GroupElement {
        GroupElement {
            group: self.group.clone(),
            exps,
        }
    }

    fn collector(&self) -> Collector<'_> {
        Collector::new(&self.group, DEFAULT_STEP_BUDGET)
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, PcError> {
        self.check(other)?;
        let exps = self.collector().mul(&self.exps, &other.exps)?;
        Ok(self.wrap(exps))
    }

    pub fn inv(&self) -> Result<GroupElement, PcError> {
        let exps = self.collector().inverse(&self.exps)?;
        Ok(self.wrap(exps))
    }

    pub fn pow(&self, e: &Int) -> Result<GroupElement, PcError> {
        let exps = self.collector().pow(&self.exps, e)?;
        Ok(self.wrap(exps))
    }

    pub fn pow_i64(&self, e: i64) -> Result<GroupElement, PcError> {
        self.pow(&Int::from(e))
    }

    /// `x^-1 * self * x`.
    pub fn conjugate(&self, x: &GroupElement) -> Result<GroupElement, PcError> {
        self.check(x)?;
        let mut c = self.collector();
        let xi = c.inverse(&x.exps)?;
        let t = c.mul(&xi, &self.exps)?;
        let exps = c.mul(&t, &x.exps)?;
        Ok(self.wrap(exps))
    }

    /// Conjugation with a precomputed inverse of the conjugator.
    pub fn conjugate_with_inverse(
        &self,
        x: &GroupElement,
        x_inv: &GroupElement,
    ) -> Result<GroupElement, PcError> {
        self.check(x)?;
        let mut c = self.collector();
        let t = c.mul(&x_inv.exps, &self.exps)?;
        let exps = c.mul(&t, &x.exps)?;
        Ok(self.wrap(exps))
    }

    /// `[self, b] = self^-1 b^-1 self b`.
    pub fn commutator(&self, b: &GroupElement) -> Result<GroupElement, PcError> {
        self.check(b)?;
        let mut c = self.collector();
        let ai = c.inverse(&self.exps)?;
        let bi = c.inverse(&b.exps)?;
        let t = c.mul(&ai, &bi)?;
        let t = c.mul(&t, &self.exps)?;
        let exps = c.mul(&t, &b.exps)?;
        Ok(self.wrap(exps))
    }

    /// Evaluates a word whose letters index into `elems`.
    pub fn evaluate(
        p: &Arc<PcPresentation>,
        word: &[(usize, i64)],
        elems: &[GroupElement],
    ) -> Result<GroupElement, PcError> {
        let mut acc = GroupElement::identity(p);
        for &(i, e) in word {
            acc = acc.mul(&elems[i].pow_i64(e)?)?;
        }
        Ok(acc)
    }
}

pub fn hirsch_length(p: &PcPresentation) -> usize {
    p.hirsch_length()
}

/// Random freely reduced word over all generators together with its normal
/// form. See [`random_word_over`].
pub fn random_element(
    p: &Arc<PcPresentation>,
    len_min: usize,
    len_max: usize,
    rng: &mut SeededRng,
) -> Result<(Word, GroupElement), PcError> {
    let gens: Vec<usize> = (0..p.ngens()).collect();
    random_element_over(p, &gens, len_min, len_max, rng)
}

pub fn random_element_over(
    p: &Arc<PcPresentation>,
    gens: &[usize],
    len_min: usize,
    len_max: usize,
    rng: &mut SeededRng,
) -> Result<(Word, GroupElement), PcError> {
    let w = random_word_over(gens, len_min, len_max, rng)?;
    let g = collect(p, &w)?;
    Ok((w, g))
}

/// Draws a length uniformly from `[len_min, len_max]`, then letters
/// `g^{+-1}` uniformly among the `2|gens|` choices, skipping only the one
/// that would cancel the previous letter. The word has exactly the drawn
/// length and every generator/sign is equally frequent.
pub fn random_word_over(
    gens: &[usize],
    len_min: usize,
    len_max: usize,
    rng: &mut SeededRng,
) -> Result<Word, PcError> {
    if len_min > len_max {
        return Err(PcError::BadRange {
            min: len_min,
            max: len_max,
        });
    }
    let len = rng.gen_range(len_min..=len_max);
    if len == 0 {
        return Ok(Word::empty());
    }
    if gens.is_empty() {
        return Err(PcError::BadRange { min: len_min, max: len_max });
    }
    let choices = 2 * gens.len();
    let mut letters: Vec<(usize, i64)> = Vec::with_capacity(len);
    while letters.len() < len {
        let c = match letters.last() {
            None => rng.gen_range(0..choices),
            Some(&(pg, ps)) => {
                // uniform over the 2|gens|-1 letters that do not cancel
                let gi = gens.iter().position(|&g| g == pg).expect("letter from gens");
                let forbidden = 2 * gi + usize::from(ps > 0);
                let c = rng.gen_range(0..choices - 1);
                if c >= forbidden {
                    c + 1
                } else {
                    c
                }
            }
        };
        let (gen, sign) = (gens[c / 2], if c % 2 == 0 { 1 } else { -1 });
        letters.push((gen, sign));
    }
    Ok(Word::from_letters(letters.into_iter().map(|(g, s)| Letter::new(g, s))))
}
