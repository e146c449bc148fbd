use std::collections::HashSet;

use super::word::Word;
use super::PcError;

/// A polycyclic presentation on generators `g_1..g_n` (0-based internally).
///
/// Relations:
/// * `g_j^{g_i} = u_ij` and `g_j^{g_i^-1} = v_ij` for `i < j`, with both words
///   in `g_{i+1}..g_n`; an absent relation means `g_i` and `g_j` commute.
/// * `g_i^{r_i} = w_ii` for generators of finite relative order `r_i`, with
///   `w_ii` in `g_{i+1}..g_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    ngens: usize,
    orders: Vec<Option<u64>>,
    conj_pos: Vec<Word>,
    conj_neg: Vec<Word>,
    powers: Vec<Option<Word>>,
    conj_pos_inv: Vec<Word>,
    conj_neg_inv: Vec<Word>,
    powers_inv: Vec<Option<Word>>,
    // g_i commutes with every later generator
    central_on_tail: Vec<bool>,
}

impl PcPresentation {
    pub fn builder(ngens: usize) -> PcBuilder {
        PcBuilder::new(ngens)
    }

    /// Free abelian group of rank `n`.
    pub fn free_abelian(n: usize) -> PcPresentation {
        PcBuilder::new(n).build().expect("abelian presentation is valid")
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn orders(&self) -> &[Option<u64>] {
        &self.orders
    }

    pub fn order(&self, i: usize) -> Option<u64> {
        self.orders[i]
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ngens + j
    }

    /// `u_ij` (positive) or `v_ij` (negative); `i < j`.
    pub fn conj(&self, i: usize, j: usize, positive: bool) -> &Word {
        let k = self.idx(i, j);
        if positive {
            &self.conj_pos[k]
        } else {
            &self.conj_neg[k]
        }
    }

    pub(crate) fn conj_inverse(&self, i: usize, j: usize, positive: bool) -> &Word {
        let k = self.idx(i, j);
        if positive {
            &self.conj_pos_inv[k]
        } else {
            &self.conj_neg_inv[k]
        }
    }

    /// `w_ii` for finite generators (the empty word when unspecified).
    pub fn power(&self, i: usize) -> Option<&Word> {
        self.powers[i].as_ref()
    }

    pub(crate) fn power_inverse(&self, i: usize) -> Option<&Word> {
        self.powers_inv[i].as_ref()
    }

    pub(crate) fn central_on_tail(&self, i: usize) -> bool {
        self.central_on_tail[i]
    }

    /// Number of infinite cyclic factors in the polycyclic series.
    pub fn hirsch_length(&self) -> usize {
        self.orders.iter().filter(|o| o.is_none()).count()
    }

    /// A copy with one conjugation relation replaced. Nothing checks that the
    /// result is consistent.
    pub fn with_conj(&self, i: usize, j: usize, positive: bool, w: Word) -> Result<Self, PcError> {
        let mut b = PcBuilder::from_presentation(self);
        b.conj(i, j, positive, w)?;
        b.build()
    }

    /// True if `u_ij` (or `v_ij`) is anything other than `g_j`.
    pub fn has_nontrivial_conj(&self, i: usize, j: usize, positive: bool) -> bool {
        *self.conj(i, j, positive) != Word::generator(j)
    }
}

#[derive(Clone, Debug)]
pub struct PcBuilder {
    ngens: usize,
    orders: Vec<Option<u64>>,
    conj_pos: Vec<Word>,
    conj_neg: Vec<Word>,
    powers: Vec<Option<Word>>,
    explicit: HashSet<(bool, usize, usize)>,
}

impl PcBuilder {
    pub fn new(ngens: usize) -> Self {
        let mut conj = Vec::with_capacity(ngens * ngens);
        for _i in 0..ngens {
            for j in 0..ngens {
                conj.push(Word::generator(j));
            }
        }
        PcBuilder {
            ngens,
            orders: vec![None; ngens],
            conj_pos: conj.clone(),
            conj_neg: conj,
            powers: vec![None; ngens],
            explicit: HashSet::new(),
        }
    }

    fn from_presentation(p: &PcPresentation) -> Self {
        PcBuilder {
            ngens: p.ngens,
            orders: p.orders.clone(),
            conj_pos: p.conj_pos.clone(),
            conj_neg: p.conj_neg.clone(),
            powers: p.powers.clone(),
            explicit: HashSet::new(),
        }
    }

    fn check_gen(&self, i: usize) -> Result<(), PcError> {
        if i >= self.ngens {
            return Err(PcError::InvalidPresentation(format!(
                "generator g{} out of range (ngens = {})",
                i + 1,
                self.ngens
            )));
        }
        Ok(())
    }

    fn check_tail_word(&self, i: usize, w: &Word) -> Result<(), PcError> {
        for l in w.letters() {
            self.check_gen(l.gen)?;
            if l.gen <= i {
                return Err(PcError::InvalidPresentation(format!(
                    "relation word `{w}` for g{} uses g{}; only later generators are allowed",
                    i + 1,
                    l.gen + 1
                )));
            }
        }
        Ok(())
    }

    /// Sets the relative order of `g_i` (`r >= 2`).
    pub fn order(&mut self, i: usize, r: u64) -> Result<&mut Self, PcError> {
        self.check_gen(i)?;
        if r < 2 {
            return Err(PcError::InvalidPresentation(format!(
                "relative order of g{} must be at least 2, got {r}",
                i + 1
            )));
        }
        if self.orders[i].is_some() {
            return Err(PcError::InvalidPresentation(format!(
                "duplicate order for g{}",
                i + 1
            )));
        }
        self.orders[i] = Some(r);
        Ok(self)
    }

    /// Sets `g_j^{g_i} = w` (positive) or `g_j^{g_i^-1} = w` (negative).
    pub fn conj(&mut self, i: usize, j: usize, positive: bool, w: Word) -> Result<&mut Self, PcError> {
        self.check_gen(i)?;
        self.check_gen(j)?;
        if i >= j {
            return Err(PcError::InvalidPresentation(format!(
                "conjugation relation needs i < j, got ({}, {})",
                i + 1,
                j + 1
            )));
        }
        self.check_tail_word(i, &w)?;
        if !self.explicit.insert((positive, i, j)) {
            return Err(PcError::InvalidPresentation(format!(
                "duplicate conjugation relation conj {} {} {}",
                if positive { '+' } else { '-' },
                i + 1,
                j + 1
            )));
        }
        let k = i * self.ngens + j;
        if positive {
            self.conj_pos[k] = w;
        } else {
            self.conj_neg[k] = w;
        }
        Ok(self)
    }

    pub fn power(&mut self, i: usize, w: Word) -> Result<&mut Self, PcError> {
        self.check_gen(i)?;
        self.check_tail_word(i, &w)?;
        if self.powers[i].is_some() {
            return Err(PcError::InvalidPresentation(format!(
                "duplicate power relation for g{}",
                i + 1
            )));
        }
        self.powers[i] = Some(w);
        Ok(self)
    }

    pub fn build(&self) -> Result<PcPresentation, PcError> {
        let n = self.ngens;
        let mut powers = self.powers.clone();
        for i in 0..n {
            match (self.orders[i], &powers[i]) {
                (None, Some(_)) => {
                    return Err(PcError::InvalidPresentation(format!(
                        "power relation given for g{} which has infinite order",
                        i + 1
                    )))
                }
                (Some(_), None) => powers[i] = Some(Word::empty()),
                _ => {}
            }
        }
        let inv = |ws: &Vec<Word>| ws.iter().map(Word::inverse).collect::<Vec<_>>();
        let central_on_tail = (0..n)
            .map(|i| {
                (i + 1..n).all(|j| {
                    let k = i * n + j;
                    self.conj_pos[k] == Word::generator(j) && self.conj_neg[k] == Word::generator(j)
                })
            })
            .collect();
        Ok(PcPresentation {
            ngens: n,
            orders: self.orders.clone(),
            conj_pos_inv: inv(&self.conj_pos),
            conj_neg_inv: inv(&self.conj_neg),
            powers_inv: powers.iter().map(|w| w.as_ref().map(Word::inverse)).collect(),
            conj_pos: self.conj_pos.clone(),
            conj_neg: self.conj_neg.clone(),
            powers,
            central_on_tail,
        })
    }
}
