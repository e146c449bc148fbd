use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::int::Int;

/// A syllable `g_gen^exp`. Generators are 0-based internally and printed
/// 1-based (`g1` is index 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub exp: Int,
}

impl Letter {
    pub fn new(gen: usize, exp: impl Into<Int>) -> Self {
        Letter {
            gen,
            exp: exp.into(),
        }
    }
}

/// A word in syllable form. Adjacent syllables always have distinct
/// generators and no syllable has a zero exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(gen: usize) -> Self {
        Word {
            letters: vec![Letter::new(gen, 1)],
        }
    }

    /// Builds a word from arbitrary syllables, merging neighbours and dropping
    /// zero exponents.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Convenience for tests and constructors: `(gen, exp)` pairs.
    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        Word::from_letters(pairs.iter().map(|&(g, e)| Letter::new(g, e)))
    }

    pub fn push(&mut self, l: Letter) {
        if l.exp.is_zero() {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == l.gen {
                last.exp += &l.exp;
                if last.exp.is_zero() {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(l);
    }

    pub fn extend(&mut self, other: &Word) {
        for l in &other.letters {
            self.push(l.clone());
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    exp: -&l.exp,
                })
                .collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.letters.len()
    }

    /// Letter count with syllables expanded, i.e. the sum of |exponent|.
    pub fn len(&self) -> Int {
        self.letters
            .iter()
            .fold(Int::ZERO, |acc, l| &acc + &l.exp.abs())
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn min_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).min()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "g{}^{}", l.gen + 1, l.exp)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad word token `{token}`: {reason}")]
pub struct WordParseError {
    pub token: String,
    pub reason: &'static str,
}

impl FromStr for Word {
    type Err = WordParseError;

    /// Parses space-separated `g<k>^<e>` tokens; `g<k>` alone means exponent 1
    /// and a lone `1` (or nothing) is the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut w = Word::empty();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let err = |reason| WordParseError {
                token: tok.to_string(),
                reason,
            };
            let body = tok.strip_prefix('g').ok_or_else(|| err("expected `g<k>^<e>`"))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<Int>().map_err(|_| err("bad exponent"))?),
                None => (body, Int::ONE),
            };
            let k: usize = idx.parse().map_err(|_| err("bad generator index"))?;
            if k == 0 {
                return Err(err("generator indices start at 1"));
            }
            w.push(Letter { gen: k - 1, exp });
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_merges_and_cancels() {
        let w = Word::from_pairs(&[(0, 2), (0, -2), (1, 1), (1, 3), (2, -1)]);
        assert_eq!(w, Word::from_pairs(&[(1, 4), (2, -1)]));
        assert_eq!(w.len(), Int::from(5));
    }

    #[test]
    fn inverse_reverses() {
        let w = Word::from_pairs(&[(0, 1), (1, -2)]);
        assert_eq!(w.inverse(), Word::from_pairs(&[(1, 2), (0, -1)]));
        assert!(w.concat(&w.inverse()).is_empty());
    }

    #[test]
    fn text_round_trip() {
        let w: Word = "g1^2 g3^-1 g2".parse().unwrap();
        assert_eq!(w, Word::from_pairs(&[(0, 2), (2, -1), (1, 1)]));
        assert_eq!(w.to_string(), "g1^2 g3^-1 g2^1");
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        assert_eq!("1".parse::<Word>().unwrap(), Word::empty());
        assert!("h1^2".parse::<Word>().is_err());
        assert!("g0^1".parse::<Word>().is_err());
    }
}
