//! Collection from the left.
//!
//! The collected part is an exponent vector `g_1^{e_1} .. g_n^{e_n}`; the
//! uncollected part is a stack of `(word, repetitions)` frames processed left
//! to right. Multiplying the collected part by a letter `g_k^{+-1}` bumps
//! `e_k`, lifts the tail `g_{k+1}^{e_{k+1}}..` out of the vector and pushes
//! its conjugate (a product of `u_kj` / `v_kj` powers) back onto the stack.
//!
//! Two accelerations keep huge exponents tractable without changing the
//! result:
//! * a letter `g_k^f` with large `|f|` and a non-trivial tail conjugates the
//!   tail by `g_k^f` directly, by binary powering of the conjugation
//!   automorphism of `<g_{k+1}, .., g_n>`;
//! * a frame repeated many times is replaced by the collected power of its
//!   word, computed by square-and-multiply.

use std::borrow::Cow;

use super::word::{Letter, Word};
use super::{PcError, PcPresentation};
use crate::int::Int;

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

// Above this many unit steps a syllable (or frame repetition) is handled by
// powering instead.
const UNIT_STEP_LIMIT: u64 = 16;

struct Frame<'a> {
    letters: Cow<'a, [Letter]>,
    pos: usize,
    reps: Int,
}

impl<'a> Frame<'a> {
    fn borrowed(w: &'a Word, reps: Int) -> Self {
        Frame {
            letters: Cow::Borrowed(w.letters()),
            pos: 0,
            reps,
        }
    }

    fn owned(letters: Vec<Letter>) -> Self {
        Frame {
            letters: Cow::Owned(letters),
            pos: 0,
            reps: Int::ONE,
        }
    }
}

pub(crate) fn syllables(exps: &[Int]) -> Vec<Letter> {
    exps.iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(g, e)| Letter { gen: g, exp: e.clone() })
        .collect()
}

pub(crate) struct Collector<'p> {
    p: &'p PcPresentation,
    steps: u64,
    budget: u64,
}

impl<'p> Collector<'p> {
    pub fn new(p: &'p PcPresentation, budget: u64) -> Self {
        Collector { p, steps: 0, budget }
    }

    fn identity(&self) -> Vec<Int> {
        vec![Int::ZERO; self.p.ngens()]
    }

    fn tick(&mut self) -> Result<(), PcError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(PcError::BudgetExceeded { steps: self.budget });
        }
        Ok(())
    }

    pub fn collect_word(&mut self, w: &Word) -> Result<Vec<Int>, PcError> {
        if let Some(g) = w.max_gen() {
            if g >= self.p.ngens() {
                return Err(PcError::MalformedWord {
                    gen: g + 1,
                    ngens: self.p.ngens(),
                });
            }
        }
        let mut exps = self.identity();
        self.run(&mut exps, vec![Frame::owned(w.letters().to_vec())])?;
        Ok(exps)
    }

    /// Product of two collected exponent vectors.
    pub fn mul(&mut self, a: &[Int], b: &[Int]) -> Result<Vec<Int>, PcError> {
        let mut exps = a.to_vec();
        let letters = syllables(b);
        if !letters.is_empty() {
            self.run(&mut exps, vec![Frame::owned(letters)])?;
        }
        Ok(exps)
    }

    pub fn inverse(&mut self, a: &[Int]) -> Result<Vec<Int>, PcError> {
        let letters: Vec<Letter> = syllables(a)
            .into_iter()
            .rev()
            .map(|l| Letter { gen: l.gen, exp: -l.exp })
            .collect();
        let mut exps = self.identity();
        if !letters.is_empty() {
            self.run(&mut exps, vec![Frame::owned(letters)])?;
        }
        Ok(exps)
    }

    pub fn pow(&mut self, a: &[Int], e: &Int) -> Result<Vec<Int>, PcError> {
        let mut base = if e.is_negative() {
            self.inverse(a)?
        } else {
            a.to_vec()
        };
        let mut e = e.abs();
        let mut acc = self.identity();
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.mul(&acc, &base)?;
            }
            e = e.half();
            if !e.is_zero() {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    fn run(&mut self, exps: &mut [Int], mut stack: Vec<Frame<'p>>) -> Result<(), PcError> {
        while let Some(top) = stack.last_mut() {
            if top.letters.is_empty() || top.reps.is_zero() {
                stack.pop();
                continue;
            }
            if top.pos == top.letters.len() {
                top.reps = &top.reps - &Int::ONE;
                top.pos = 0;
                continue;
            }
            if top.pos == 0 && top.reps.abs_exceeds(UNIT_STEP_LIMIT) {
                let frame = stack.pop().expect("non-empty stack");
                let w = Word::from_letters(frame.letters.iter().cloned());
                let elem = self.collect_word(&w)?;
                let power = self.pow(&elem, &frame.reps)?;
                stack.push(Frame::owned(syllables(&power)));
                continue;
            }
            let Letter { gen, exp } = top.letters[top.pos].clone();
            top.pos += 1;
            self.apply(exps, &mut stack, gen, exp)?;
        }
        Ok(())
    }

    /// Multiplies the collected vector by `g_k^f`.
    fn apply(
        &mut self,
        exps: &mut [Int],
        stack: &mut Vec<Frame<'p>>,
        k: usize,
        f: Int,
    ) -> Result<(), PcError> {
        self.tick()?;
        let p = self.p;
        let n = exps.len();
        let tail_moves = !p.central_on_tail(k) && exps[k + 1..].iter().any(|e| !e.is_zero());
        if !tail_moves {
            exps[k] += &f;
            self.reduce_power(exps, stack, k);
            return Ok(());
        }

        if f.abs_exceeds(UNIT_STEP_LIMIT) {
            let mut tail = self.identity();
            for j in k + 1..n {
                tail[j] = std::mem::take(&mut exps[j]);
            }
            let moved = self.conj_power(k, &f, tail)?;
            exps[k] += &f;
            stack.push(Frame::owned(syllables(&moved)));
            self.reduce_power(exps, stack, k);
            return Ok(());
        }

        // One unit step; the remainder of the syllable is processed after
        // the conjugated tail.
        let s = f.signum();
        let rest = &f - &Int::from(s);
        if !rest.is_zero() {
            stack.push(Frame::owned(vec![Letter { gen: k, exp: rest }]));
        }
        let positive = s > 0;
        for j in (k + 1..n).rev() {
            let e = std::mem::take(&mut exps[j]);
            if e.is_zero() {
                continue;
            }
            let w = if e.is_positive() {
                p.conj(k, j, positive)
            } else {
                p.conj_inverse(k, j, positive)
            };
            stack.push(Frame::borrowed(w, e.abs()));
        }
        exps[k] += s;
        self.reduce_power(exps, stack, k);
        Ok(())
    }

    fn reduce_power(&self, exps: &mut [Int], stack: &mut Vec<Frame<'p>>, k: usize) {
        let Some(r) = self.p.order(k) else {
            return;
        };
        let (q, rem) = exps[k].div_mod_floor(r);
        if q.is_zero() {
            return;
        }
        exps[k] = Int::from(rem);
        let w = if q.is_positive() {
            self.p.power(k)
        } else {
            self.p.power_inverse(k)
        }
        .expect("finite generators always carry a power word");
        stack.push(Frame::borrowed(w, q.abs()));
    }

    /// `tail^{g_k^f}` for `tail` supported on generators after `k`.
    fn conj_power(&mut self, k: usize, f: &Int, tail: Vec<Int>) -> Result<Vec<Int>, PcError> {
        let n = self.p.ngens();
        let positive = f.is_positive();
        let mut images = Vec::with_capacity(n - k - 1);
        for j in k + 1..n {
            images.push(self.collect_word(self.p.conj(k, j, positive))?);
        }
        let mut e = f.abs();
        let mut result = tail;
        loop {
            if e.is_odd() {
                result = self.apply_images(k, &images, &result)?;
            }
            e = e.half();
            if e.is_zero() {
                break;
            }
            let mut squared = Vec::with_capacity(images.len());
            for im in &images {
                squared.push(self.apply_images(k, &images, im)?);
            }
            images = squared;
        }
        Ok(result)
    }

    /// Applies the endomorphism of `<g_{k+1}..g_n>` given by generator images.
    fn apply_images(&mut self, k: usize, images: &[Vec<Int>], x: &[Int]) -> Result<Vec<Int>, PcError> {
        let mut acc = self.identity();
        for (j, e) in x.iter().enumerate().skip(k + 1) {
            if e.is_zero() {
                continue;
            }
            let pw = self.pow(&images[j - k - 1], e)?;
            acc = self.mul(&acc, &pw)?;
        }
        Ok(acc)
    }
}
