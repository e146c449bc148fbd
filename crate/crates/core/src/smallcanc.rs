//! Small-cancellation presentations over a free alphabet and Dehn's
//! algorithm. Words are written with `a..z` for generators and `A..Z` for
//! their inverses.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rng::SeededRng;

pub const MAX_ALPHABET: usize = 26;
const GENERATION_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmallCancError {
    #[error("relator `{0}` is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("relator set is empty")]
    NoRelators,
    #[error("alphabet size must be in 2..={MAX_ALPHABET}, got {0}")]
    BadAlphabet(usize),
    #[error("letter outside the alphabet of size {0}")]
    LetterOutOfRange(usize),
    #[error("metric condition C'(1/6) not verified (lambda = {0})")]
    MetricNotVerified(String),
    #[error("no C'(1/6) relator set found after {0} attempts")]
    GenerationTimeout(usize),
    #[error("bad word character `{0}`")]
    Parse(char),
}

/// A word in the free group. Letter `k` (1-based) is generator `k`, `-k`
/// its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn new(letters: Vec<i32>) -> Self {
        FreeWord(letters)
    }

    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FreeWord(v).reduced()
    }

    pub fn reduced(&self) -> FreeWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &x in &self.0 {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        FreeWord(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.0.len() == 1 || f != -l,
                _ => false,
            }
    }

    fn rotate(&self, k: usize) -> FreeWord {
        let mut v = self.0.clone();
        v.rotate_left(k);
        FreeWord(v)
    }

    /// True if the word is `u^k` for some `k >= 2`.
    pub fn is_proper_power(&self) -> bool {
        let n = self.0.len();
        (1..n).any(|d| n.is_multiple_of(d) && self.0.iter().enumerate().all(|(i, x)| *x == self.0[i % d]))
    }

    fn max_letter(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &x in &self.0 {
            let base = if x > 0 { b'a' } else { b'A' };
            let c = (base + (x.unsigned_abs() as u8 - 1)) as char;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = SmallCancError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(FreeWord::empty());
        }
        s.chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(SmallCancError::Parse(c)),
            })
            .collect::<Result<_, _>>()
            .map(FreeWord)
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Closure of the relators under cyclic shifts and inversion, without
/// duplicates, in first-seen order.
pub fn symmetrize(relators: &[FreeWord]) -> Result<Vec<FreeWord>, SmallCancError> {
    if relators.is_empty() {
        return Err(SmallCancError::NoRelators);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in relators {
        if !r.is_cyclically_reduced() {
            return Err(SmallCancError::NotCyclicallyReduced(r.to_string()));
        }
        for base in [r.clone(), r.inverse()] {
            for k in 0..base.len() {
                let s = base.rotate(k);
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

fn common_prefix(a: &[i32], b: &[i32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Longest piece over the symmetrized set divided by the shortest relator.
/// The longest common prefix of distinct strings is attained by a pair that
/// is adjacent in sorted order.
fn metric(symmetrized: &[FreeWord], relators: &[FreeWord]) -> Ratio<u64> {
    let mut sorted: Vec<&[i32]> = symmetrized.iter().map(|w| w.letters()).collect();
    sorted.sort_unstable();
    let piece = sorted
        .windows(2)
        .map(|w| common_prefix(w[0], w[1]))
        .max()
        .unwrap_or(0);
    let min_len = relators.iter().map(FreeWord::len).min().unwrap_or(1);
    Ratio::new(piece as u64, min_len as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallCancPresentation {
    alphabet_size: usize,
    relators: Vec<FreeWord>,
    #[serde(skip)]
    symmetrized: Vec<FreeWord>,
    #[serde(serialize_with = "ratio_str")]
    lambda: Ratio<u64>,
}

fn ratio_str<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl SmallCancPresentation {
    /// Symmetrizes and measures the relators. The result may fail the
    /// metric condition; see [`Self::is_verified`].
    pub fn new(alphabet_size: usize, relators: Vec<FreeWord>) -> Result<Self, SmallCancError> {
        if !(2..=MAX_ALPHABET).contains(&alphabet_size) {
            return Err(SmallCancError::BadAlphabet(alphabet_size));
        }
        if relators.iter().any(|r| r.max_letter() > alphabet_size) {
            return Err(SmallCancError::LetterOutOfRange(alphabet_size));
        }
        let symmetrized = symmetrize(&relators)?;
        let lambda = metric(&symmetrized, &relators);
        Ok(SmallCancPresentation {
            alphabet_size,
            relators,
            symmetrized,
            lambda,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn symmetrized(&self) -> &[FreeWord] {
        &self.symmetrized
    }

    pub fn lambda(&self) -> Ratio<u64> {
        self.lambda
    }

    /// Strict C'(1/6).
    pub fn is_verified(&self) -> bool {
        self.lambda < Ratio::new(1, 6)
    }

    /// One relator per line.
    pub fn to_text(&self) -> String {
        self.relators.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn from_text(alphabet_size: usize, text: &str) -> Result<Self, SmallCancError> {
        let relators = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        Self::new(alphabet_size, relators)
    }
}

pub fn check_metric(p: &SmallCancPresentation) -> Ratio<u64> {
    p.lambda()
}

/// Dehn's algorithm: free reduction plus replacement of any subword that is
/// more than half of a symmetrized relator by the inverse of the rest. For a
/// C'(1/6) presentation the result is empty iff `w` is trivial.
pub fn dehn_reduce(p: &SmallCancPresentation, w: &FreeWord) -> Result<FreeWord, SmallCancError> {
    if !p.is_verified() {
        return Err(SmallCancError::MetricNotVerified(p.lambda.to_string()));
    }
    let mut cur = w.reduced();
    'outer: loop {
        let letters = cur.letters();
        for i in 0..letters.len() {
            for r in &p.symmetrized {
                let rl = r.letters();
                let l = common_prefix(&letters[i..], rl);
                if 2 * l > rl.len() {
                    let mut next = letters[..i].to_vec();
                    next.extend(rl[l..].iter().rev().map(|x| -x));
                    next.extend_from_slice(&letters[i + l..]);
                    cur = FreeWord(next).reduced();
                    continue 'outer;
                }
            }
        }
        return Ok(cur);
    }
}

fn random_reduced(alphabet: usize, len: usize, rng: &mut SeededRng) -> FreeWord {
    let mut v: Vec<i32> = Vec::with_capacity(len);
    while v.len() < len {
        let x = rng.gen_range(1..=alphabet as i32) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if v.last() != Some(&-x) {
            v.push(x);
        }
    }
    FreeWord(v)
}

fn random_cyclically_reduced(alphabet: usize, len: usize, rng: &mut SeededRng) -> FreeWord {
    loop {
        let w = random_reduced(alphabet, len, rng);
        if w.is_cyclically_reduced() {
            return w;
        }
    }
}

/// Rejection-samples `count` random cyclically reduced relators of length
/// `min_len..=min_len+3`, none a proper power, until the set satisfies
/// C'(1/6).
pub fn generate_relator_set(
    alphabet_size: usize,
    count: usize,
    min_len: usize,
    rng: &mut SeededRng,
) -> Result<SmallCancPresentation, SmallCancError> {
    if !(2..=MAX_ALPHABET).contains(&alphabet_size) {
        return Err(SmallCancError::BadAlphabet(alphabet_size));
    }
    if count == 0 || min_len == 0 {
        return Err(SmallCancError::NoRelators);
    }
    for _ in 0..GENERATION_ATTEMPTS {
        let relators = (0..count)
            .map(|_| {
                let len = rng.gen_range(min_len..=min_len + 3);
                random_cyclically_reduced(alphabet_size, len, rng)
            })
            .collect::<Vec<_>>();
        if relators.iter().any(FreeWord::is_proper_power) {
            continue;
        }
        let p = SmallCancPresentation::new(alphabet_size, relators)?;
        if p.is_verified() {
            return Ok(p);
        }
    }
    Err(SmallCancError::GenerationTimeout(GENERATION_ATTEMPTS))
}

/// Product of 1 to 3 conjugates `x r x^-1` of symmetrized relators with
/// conjugators of length 1 to 4, freely reduced.
fn trivial_word(p: &SmallCancPresentation, rng: &mut SeededRng) -> FreeWord {
    loop {
        let k = rng.gen_range(1..=3);
        let mut w = FreeWord::empty();
        for _ in 0..k {
            let r = p.symmetrized.choose(rng).expect("nonempty relator set");
            let xl = rng.gen_range(1..=4);
            let x = random_reduced(p.alphabet_size, xl, rng);
            w = w.concat(&x).concat(r).concat(&x.inverse());
        }
        if !w.is_empty() {
            return w;
        }
    }
}

/// Encodes a bit as a word that is trivial in the group (bit 1) or not
/// (bit 0). A bit-0 word takes its length from a freshly drawn bit-1 word,
/// so both lengths follow the same distribution.
pub fn encode_bit(p: &SmallCancPresentation, bit: bool, rng: &mut SeededRng) -> Result<FreeWord, SmallCancError> {
    if !p.is_verified() {
        return Err(SmallCancError::MetricNotVerified(p.lambda.to_string()));
    }
    if bit {
        return Ok(trivial_word(p, rng));
    }
    loop {
        let len = trivial_word(p, rng).len();
        let w = random_reduced(p.alphabet_size, len, rng);
        if !dehn_reduce(p, &w)?.is_empty() {
            return Ok(w);
        }
    }
}

pub fn decode_bit(p: &SmallCancPresentation, w: &FreeWord) -> Result<bool, SmallCancError> {
    Ok(dehn_reduce(p, w)?.is_empty())
}

/// What the dealer hands one participant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShareBundle {
    pub participant: usize,
    pub presentation: SmallCancPresentation,
    pub codewords: Vec<FreeWord>,
}

impl ShareBundle {
    pub fn decode(&self) -> Result<Vec<bool>, SmallCancError> {
        self.codewords
            .iter()
            .map(|w| decode_bit(&self.presentation, w))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(w("abAB").letters(), &[1, 2, -1, -2]);
        assert_eq!(w("abAB").to_string(), "abAB");
        assert_eq!(w("1"), FreeWord::empty());
        assert_eq!(FreeWord::empty().to_string(), "1");
        assert!("ab3".parse::<FreeWord>().is_err());
    }

    #[test]
    fn symmetrize_small_cases() {
        let s = symmetrize(&[w("ab")]).unwrap();
        let got: HashSet<String> = s.iter().map(ToString::to_string).collect();
        let want: HashSet<String> = ["ab", "ba", "BA", "AB"].iter().map(|x| x.to_string()).collect();
        assert_eq!(got, want);
        assert_eq!(symmetrize(&[w("a")]).unwrap(), vec![w("a"), w("A")]);
        assert!(matches!(symmetrize(&[w("abA")]), Err(SmallCancError::NotCyclicallyReduced(_))));
        assert!(matches!(symmetrize(&[w("aAb")]), Err(SmallCancError::NotCyclicallyReduced(_))));
        assert!(matches!(symmetrize(&[]), Err(SmallCancError::NoRelators)));
    }

    #[test]
    fn unverified_presentation_refuses_dehn() {
        let p = SmallCancPresentation::new(2, vec![w("abAB")]).unwrap();
        assert!(!p.is_verified());
        assert!(matches!(dehn_reduce(&p, &w("ab")), Err(SmallCancError::MetricNotVerified(_))));
    }

    #[test]
    fn proper_powers() {
        assert!(w("abaBabaB").is_proper_power());
        assert!(w("aaa").is_proper_power());
        assert!(!w("abaBab").is_proper_power());
        assert!(!w("a").is_proper_power());
    }

    #[test]
    fn min_len_six_times_out() {
        let mut rng = SeededRng::new(5);
        assert_eq!(
            generate_relator_set(2, 1, 6, &mut rng),
            Err(SmallCancError::GenerationTimeout(GENERATION_ATTEMPTS))
        );
    }
}
