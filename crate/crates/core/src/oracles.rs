//! Budgeted breadth-first search oracles for conjugacy, power conjugacy and
//! twisted conjugacy. Exponential by design; meant as ground truth at desk
//! scale and as the receiver-side solver of the power ElGamal variant.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::int::Int;
use crate::pc::{GroupElement, Letter, PcError, PcPresentation, Word};
use crate::platform::PlatformGroup;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("search budget must be positive")]
    BadBudget,
    #[error("invalid endomorphism: {0}")]
    InvalidEndomorphism(String),
    #[error(transparent)]
    Pc(#[from] PcError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_radius: usize,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_radius: usize) -> Result<Self, OracleError> {
        if max_nodes == 0 || max_radius == 0 {
            return Err(OracleError::BadBudget);
        }
        Ok(SearchBudget {
            max_nodes,
            max_radius,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome<W> {
    Found(W),
    /// Search stopped at this radius, by node budget or radius cap.
    Exhausted { radius: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult<W> {
    pub outcome: Outcome<W>,
    pub nodes_explored: u64,
}

impl<W> OracleResult<W> {
    pub fn found(&self) -> Option<&W> {
        match &self.outcome {
            Outcome::Found(w) => Some(w),
            Outcome::Exhausted { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.found().is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerWitness {
    pub n: u64,
    pub conjugator: Word,
}

/// One BFS letter: generator `gen` to the power `sign`.
#[derive(Clone)]
struct Step {
    gen: usize,
    sign: i64,
    elem: GroupElement,
    inv: GroupElement,
}

fn steps(p: &Arc<PcPresentation>) -> Result<Vec<Step>, PcError> {
    let mut out = Vec::with_capacity(2 * p.ngens());
    for gen in 0..p.ngens() {
        let g = GroupElement::generator(p, gen)?;
        let gi = g.inv()?;
        out.push(Step {
            gen,
            sign: 1,
            elem: g.clone(),
            inv: gi.clone(),
        });
        if p.order(gen) != Some(2) {
            out.push(Step {
                gen,
                sign: -1,
                elem: gi,
                inv: g,
            });
        }
    }
    Ok(out)
}

struct Node<S> {
    parent: usize,
    letter: Option<(usize, i64)>,
    elem: GroupElement,
    state: S,
}

fn word_of<S>(nodes: &[Node<S>], mut idx: usize) -> Word {
    let mut letters = Vec::new();
    while let Some((g, s)) = nodes[idx].letter {
        letters.push(Letter::new(g, s));
        idx = nodes[idx].parent;
    }
    letters.reverse();
    Word::from_letters(letters)
}

/// Generic BFS over elements `x`, rooted at the identity, extending by
/// right multiplication with generator letters. `advance` derives a child's
/// state from its parent's; `accept` tests a node. Returns the index of the
/// accepted node.
fn bfs<S>(
    p: &Arc<PcPresentation>,
    budget: SearchBudget,
    root: S,
    mut advance: impl FnMut(&S, &Step) -> Result<S, PcError>,
    mut accept: impl FnMut(&GroupElement, &S, usize) -> Result<bool, PcError>,
) -> Result<(Vec<Node<S>>, Option<usize>, u64, usize), PcError> {
    let steps = steps(p)?;
    let id = GroupElement::identity(p);
    let mut visited: HashMap<Vec<Int>, ()> = HashMap::new();
    visited.insert(id.exps().to_vec(), ());
    let mut nodes = vec![Node {
        parent: 0,
        letter: None,
        elem: id,
        state: root,
    }];
    let mut explored = 1u64;
    if accept(&nodes[0].elem, &nodes[0].state, 0)? {
        return Ok((nodes, Some(0), explored, 0));
    }
    let mut layer = 0..1;
    let mut radius = 0;
    while radius < budget.max_radius && !layer.is_empty() {
        radius += 1;
        let start = nodes.len();
        for idx in layer.clone() {
            for st in &steps {
                if explored >= budget.max_nodes {
                    return Ok((nodes, None, explored, radius));
                }
                let x = nodes[idx].elem.mul(&st.elem)?;
                if visited.insert(x.exps().to_vec(), ()).is_some() {
                    continue;
                }
                let state = advance(&nodes[idx].state, st)?;
                explored += 1;
                let hit = accept(&x, &state, radius)?;
                nodes.push(Node {
                    parent: idx,
                    letter: Some((st.gen, st.sign)),
                    elem: x,
                    state,
                });
                if hit {
                    let last = nodes.len() - 1;
                    return Ok((nodes, Some(last), explored, radius));
                }
            }
        }
        layer = start..nodes.len();
    }
    Ok((nodes, None, explored, radius))
}

/// Simultaneous conjugacy search: a word `c` with `a_i^c = b_i` for every
/// pair, of minimal length among generator words.
pub fn csp_enumerate(
    g: &PlatformGroup,
    pairs: &[(GroupElement, GroupElement)],
    budget: SearchBudget,
) -> Result<OracleResult<Word>, OracleError> {
    let p = g.presentation();
    for (a, b) in pairs {
        a.mul(b)?;
        GroupElement::identity(p).mul(a)?;
    }
    let targets: Vec<&GroupElement> = pairs.iter().map(|(_, b)| b).collect();
    let root: Vec<GroupElement> = pairs.iter().map(|(a, _)| a.clone()).collect();
    let (nodes, hit, explored, radius) = bfs(
        p,
        budget,
        root,
        |cur, st| cur.iter().map(|c| c.conjugate_with_inverse(&st.elem, &st.inv)).collect(),
        |_, cur, _| Ok(cur.iter().zip(&targets).all(|(c, b)| c == *b)),
    )?;
    let outcome = match hit {
        Some(i) => {
            let w = word_of(&nodes, i);
            let c = crate::pc::collect(p, &w)?;
            for (a, b) in pairs {
                assert_eq!(&a.conjugate(&c)?, b, "conjugacy witness failed re-verification");
            }
            Outcome::Found(w)
        }
        None => Outcome::Exhausted { radius },
    };
    Ok(OracleResult {
        outcome,
        nodes_explored: explored,
    })
}

/// Finds `n >= 1` and `c` with `a^n = b^c`. Stage `s` adds the power
/// `a^(s+1)` and the radius-`s` conjugates of `b`, so `n` and the radius
/// grow together.
pub fn power_csp_enumerate(
    g: &PlatformGroup,
    a: &GroupElement,
    b: &GroupElement,
    budget: SearchBudget,
) -> Result<OracleResult<PowerWitness>, OracleError> {
    let p = g.presentation();
    a.mul(b)?;
    GroupElement::identity(p).mul(a)?;
    // normal form of a^k -> k, and conjugate of b -> node index
    let mut powers: HashMap<Vec<Int>, u64> = HashMap::new();
    let mut conjugates: HashMap<Vec<Int>, usize> = HashMap::new();
    let mut a_pow = GroupElement::identity(p);
    let mut found: Option<(u64, usize)> = None;
    let mut nodes_seen = 0usize;
    let mut powers_added = 0u64;

    let (nodes, _, explored, radius) = bfs(
        p,
        budget,
        b.clone(),
        |cur, st| cur.conjugate_with_inverse(&st.elem, &st.inv),
        |_, cur, r| {
            let idx = nodes_seen;
            nodes_seen += 1;
            conjugates.entry(cur.exps().to_vec()).or_insert(idx);
            // a new radius: add the next power and test it against every
            // conjugate seen so far
            while (powers_added as usize) <= r {
                a_pow = a_pow.mul(a)?;
                powers_added += 1;
                powers.entry(a_pow.exps().to_vec()).or_insert(powers_added);
                if let Some(&j) = conjugates.get(a_pow.exps()) {
                    found = Some((powers_added, j));
                    return Ok(true);
                }
            }
            if let Some(&n) = powers.get(cur.exps()) {
                found = Some((n, idx));
                return Ok(true);
            }
            Ok(false)
        },
    )?;
    let outcome = match found {
        Some((n, idx)) => {
            let w = word_of(&nodes, idx);
            let c = crate::pc::collect(p, &w)?;
            assert_eq!(
                a.pow(&Int::from(n))?,
                b.conjugate(&c)?,
                "power conjugacy witness failed re-verification"
            );
            Outcome::Found(PowerWitness { n, conjugator: w })
        }
        None => Outcome::Exhausted { radius },
    };
    Ok(OracleResult {
        outcome,
        nodes_explored: explored,
    })
}

/// Group endomorphism given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    group: Arc<PcPresentation>,
    images: Vec<GroupElement>,
}

impl Endomorphism {
    /// Checks that every defining relation maps to a valid relation.
    pub fn new(p: &Arc<PcPresentation>, images: Vec<GroupElement>) -> Result<Self, OracleError> {
        if images.len() != p.ngens() {
            return Err(OracleError::InvalidEndomorphism(format!(
                "{} images for {} generators",
                images.len(),
                p.ngens()
            )));
        }
        let id = GroupElement::identity(p);
        for im in &images {
            id.mul(im)?;
        }
        let e = Endomorphism {
            group: p.clone(),
            images,
        };
        let n = p.ngens();
        for i in 0..n {
            let xi = &e.images[i];
            let xi_inv = xi.inv()?;
            for j in i + 1..n {
                let xj = &e.images[j];
                if xj.conjugate_with_inverse(xi, &xi_inv)? != e.apply_word(p.conj(i, j, true))? {
                    return Err(OracleError::InvalidEndomorphism(format!(
                        "relation g{}^g{} is not preserved",
                        j + 1,
                        i + 1
                    )));
                }
                if xj.conjugate_with_inverse(&xi_inv, xi)? != e.apply_word(p.conj(i, j, false))? {
                    return Err(OracleError::InvalidEndomorphism(format!(
                        "relation g{}^(g{}^-1) is not preserved",
                        j + 1,
                        i + 1
                    )));
                }
            }
            if let (Some(r), Some(w)) = (p.order(i), p.power(i)) {
                if xi.pow(&Int::from(r))? != e.apply_word(w)? {
                    return Err(OracleError::InvalidEndomorphism(format!(
                        "power relation of g{} is not preserved",
                        i + 1
                    )));
                }
            }
        }
        Ok(e)
    }

    pub fn identity(p: &Arc<PcPresentation>) -> Self {
        let images = (0..p.ngens())
            .map(|i| GroupElement::generator(p, i).expect("index in range"))
            .collect();
        Endomorphism {
            group: p.clone(),
            images,
        }
    }

    /// `x -> z^-1 x z`.
    pub fn inner(z: &GroupElement) -> Result<Self, OracleError> {
        let p = z.group();
        let zi = z.inv()?;
        let images = (0..p.ngens())
            .map(|i| GroupElement::generator(p, i)?.conjugate_with_inverse(z, &zi))
            .collect::<Result<_, _>>()?;
        Ok(Endomorphism {
            group: p.clone(),
            images,
        })
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    fn apply_word(&self, w: &Word) -> Result<GroupElement, PcError> {
        let mut acc = GroupElement::identity(&self.group);
        for l in w.letters() {
            acc = acc.mul(&self.images[l.gen].pow(&l.exp)?)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, PcError> {
        GroupElement::identity(&self.group).mul(x)?;
        self.apply_word(&x.to_word())
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, OracleError> {
        let images = other
            .images
            .iter()
            .map(|x| self.apply(x))
            .collect::<Result<_, _>>()?;
        Ok(Endomorphism {
            group: self.group.clone(),
            images,
        })
    }
}

/// Double twisted conjugacy search: `a` with `t = psi(a^-1) w phi(a)`.
/// Single twisted search is `psi = identity`.
pub fn twisted_csp_enumerate(
    g: &PlatformGroup,
    w: &GroupElement,
    t: &GroupElement,
    phi: &Endomorphism,
    psi: &Endomorphism,
    budget: SearchBudget,
) -> Result<OracleResult<Word>, OracleError> {
    let p = g.presentation();
    for e in [phi, psi] {
        if !crate::pc::same_group(&e.group, p) {
            return Err(OracleError::InvalidEndomorphism("endomorphism of another group".into()));
        }
    }
    w.mul(t)?;
    GroupElement::identity(p).mul(w)?;
    let phi_steps: HashMap<(usize, i64), GroupElement> = step_images(p, phi)?;
    let psi_inv_steps: HashMap<(usize, i64), GroupElement> = step_images(p, psi)?
        .into_iter()
        .map(|((g, s), x)| ((g, -s), x))
        .collect();
    // state: (psi(a^-1), phi(a))
    let root = (GroupElement::identity(p), GroupElement::identity(p));
    let (nodes, hit, explored, radius) = bfs(
        p,
        budget,
        root,
        |(psi_ai, phi_a), st| {
            // a' = a g  =>  psi(a'^-1) = psi(g^-1) psi(a^-1),  phi(a') = phi(a) phi(g)
            let left = psi_inv_steps[&(st.gen, st.sign)].mul(psi_ai)?;
            let right = phi_a.mul(&phi_steps[&(st.gen, st.sign)])?;
            Ok((left, right))
        },
        |_, (psi_ai, phi_a), _| Ok(&psi_ai.mul(w)?.mul(phi_a)? == t),
    )?;
    let outcome = match hit {
        Some(i) => {
            let word = word_of(&nodes, i);
            let a = crate::pc::collect(p, &word)?;
            let check = psi.apply(&a.inv()?)?.mul(w)?.mul(&phi.apply(&a)?)?;
            assert_eq!(&check, t, "twisted conjugacy witness failed re-verification");
            Outcome::Found(word)
        }
        None => Outcome::Exhausted { radius },
    };
    Ok(OracleResult {
        outcome,
        nodes_explored: explored,
    })
}

/// Images of every BFS letter `g^{+-1}` under `e`, keyed by (gen, sign).
fn step_images(
    p: &Arc<PcPresentation>,
    e: &Endomorphism,
) -> Result<HashMap<(usize, i64), GroupElement>, PcError> {
    let mut out = HashMap::new();
    for gen in 0..p.ngens() {
        let x = e.images[gen].clone();
        out.insert((gen, -1), x.inv()?);
        out.insert((gen, 1), x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::heisenberg;

    fn budget() -> SearchBudget {
        SearchBudget::new(10_000, 4).unwrap()
    }

    #[test]
    fn zero_budget_is_rejected() {
        assert!(SearchBudget::new(0, 3).is_err());
        assert!(SearchBudget::new(3, 0).is_err());
    }

    #[test]
    fn trivial_pair_found_at_root() {
        let g = heisenberg();
        let a = g.element(&[1, 2, 3]).unwrap();
        let r = csp_enumerate(&g, &[(a.clone(), a)], budget()).unwrap();
        assert_eq!(r.outcome, Outcome::Found(Word::empty()));
        assert_eq!(r.nodes_explored, 1);
    }

    #[test]
    fn heisenberg_endomorphism_from_any_pair() {
        // g1 -> x, g2 -> y, g3 -> [y, x] respects every relation
        let g = heisenberg();
        let x = g.element(&[2, -1, 4]).unwrap();
        let y = g.element(&[1, 3, 0]).unwrap();
        let z = y.commutator(&x).unwrap();
        let e = Endomorphism::new(g.presentation(), vec![x.clone(), y.clone(), z]).unwrap();
        let a = g.element(&[3, 1, -2]).unwrap();
        let b = g.element(&[-1, 2, 5]).unwrap();
        assert_eq!(
            e.apply(&a.mul(&b).unwrap()).unwrap(),
            e.apply(&a).unwrap().mul(&e.apply(&b).unwrap()).unwrap()
        );
        // swapping the central image breaks the relation
        let bad = Endomorphism::new(g.presentation(), vec![x, y, g.element(&[0, 0, 8]).unwrap()]);
        assert!(matches!(bad, Err(OracleError::InvalidEndomorphism(_))));
    }
}
