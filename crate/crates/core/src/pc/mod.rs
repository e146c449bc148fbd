//! Polycyclic presentations, collection to normal form and element arithmetic.

mod collect;
mod consistency;
mod element;
mod format;
mod presentation;
mod word;

pub use collect::DEFAULT_STEP_BUDGET;
pub(crate) use element::same_group;
pub use consistency::{check_consistency, ConsistencyVerdict, InconsistencyWitness};
pub use element::{
    collect, collect_with_budget, hirsch_length, random_element, random_element_over,
    random_word_over, GroupElement,
};
pub use format::{parse_presentation, write_presentation, HEADER};
pub use presentation::{PcBuilder, PcPresentation};
pub use word::{Letter, Word, WordParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PcError {
    #[error("word uses generator g{gen} but the presentation has {ngens} generators")]
    MalformedWord { gen: usize, ngens: usize },
    #[error("collection exceeded its budget of {steps} rewrite steps")]
    BudgetExceeded { steps: u64 },
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("bad length range [{min}, {max}]")]
    BadRange { min: usize, max: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("exponent of g{gen} is outside [0, r)")]
    NotNormalForm { gen: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::int::Int;

    fn heis() -> Arc<PcPresentation> {
        let mut b = PcPresentation::builder(3);
        b.conj(0, 1, true, Word::from_pairs(&[(1, 1), (2, 1)])).unwrap();
        b.conj(0, 1, false, Word::from_pairs(&[(1, 1), (2, -1)])).unwrap();
        Arc::new(b.build().unwrap())
    }

    fn e(p: &Arc<PcPresentation>, v: &[i64]) -> GroupElement {
        GroupElement::from_i64s(p, v).unwrap()
    }

    #[test]
    fn out_of_range_word_is_malformed() {
        let p = heis();
        let w = Word::from_pairs(&[(5, 1)]);
        assert!(matches!(collect(&p, &w), Err(PcError::MalformedWord { gen: 6, ngens: 3 })));
    }

    #[test]
    fn tiny_budget_is_reported() {
        let p = heis();
        let w = Word::from_pairs(&[(1, 3), (0, 3), (1, -3), (0, -3)]);
        assert!(matches!(
            collect_with_budget(&p, &w, 3),
            Err(PcError::BudgetExceeded { steps: 3 })
        ));
        assert!(collect_with_budget(&p, &w, 10_000).is_ok());
    }

    #[test]
    fn huge_exponents_take_the_powering_path() {
        // g2^N g1^M = g1^M g2^N g3^(MN) in the Heisenberg group
        let p = heis();
        let n = Int::from(1_000_000_007i64);
        let m = Int::from(998_244_353i64);
        let w = Word::from_letters([Letter { gen: 1, exp: n.clone() }, Letter { gen: 0, exp: m.clone() }]);
        let g = collect(&p, &w).unwrap();
        assert_eq!(g.exps(), &[m.clone(), n.clone(), &m * &n]);
        let back = g.inv().unwrap().mul(&g).unwrap();
        assert!(back.is_identity());
    }

    #[test]
    fn finite_orders_reduce() {
        // dihedral group of order 8: a^2 = 1, b^4 = 1, b^a = b^3
        let mut b = PcPresentation::builder(3);
        b.order(0, 2).unwrap().order(1, 2).unwrap().order(2, 2).unwrap();
        b.power(1, Word::generator(2)).unwrap();
        b.conj(0, 1, true, Word::from_pairs(&[(1, 1), (2, 1)])).unwrap();
        b.conj(0, 1, false, Word::from_pairs(&[(1, 1), (2, 1)])).unwrap();
        let p = Arc::new(b.build().unwrap());
        let a = e(&p, &[1, 0, 0]);
        let r = e(&p, &[0, 1, 0]);
        assert!(a.mul(&a).unwrap().is_identity());
        assert!(r.pow_i64(4).unwrap().is_identity());
        assert_eq!(r.pow_i64(2).unwrap(), e(&p, &[0, 0, 1]));
        assert_eq!(r.conjugate(&a).unwrap(), r.pow_i64(3).unwrap());
        let v = check_consistency(&p, 50, &mut crate::rng::SeededRng::new(1));
        assert!(v.is_consistent(), "{v:?}");
        // exponents stay in [0, r)
        let w = Word::from_pairs(&[(1, -7), (0, 5), (2, -3)]);
        for x in collect(&p, &w).unwrap().exps() {
            assert!(!x.is_negative() && x < &Int::from(2));
        }
    }

    #[test]
    fn from_exps_validates() {
        let mut b = PcPresentation::builder(1);
        b.order(0, 3).unwrap();
        let p = Arc::new(b.build().unwrap());
        assert!(GroupElement::from_i64s(&p, &[3]).is_err());
        assert!(GroupElement::from_i64s(&p, &[-1]).is_err());
        assert!(GroupElement::from_i64s(&p, &[1, 2]).is_err());
        assert!(GroupElement::from_i64s(&p, &[2]).is_ok());
    }

    #[test]
    fn group_mismatch() {
        let p = heis();
        let q = Arc::new(PcPresentation::free_abelian(3));
        let a = e(&p, &[1, 0, 0]);
        let b = e(&q, &[1, 0, 0]);
        assert_eq!(a.mul(&b), Err(PcError::GroupMismatch));
        assert_eq!(a.conjugate(&b), Err(PcError::GroupMismatch));
        assert_eq!(a.commutator(&b), Err(PcError::GroupMismatch));
    }

    #[test]
    fn bad_range() {
        let p = heis();
        let mut rng = crate::rng::SeededRng::new(0);
        assert!(matches!(random_element(&p, 3, 2, &mut rng), Err(PcError::BadRange { .. })));
        let (w, g) = random_element(&p, 0, 0, &mut rng).unwrap();
        assert!(w.is_empty() && g.is_identity());
    }

    #[test]
    fn trivial_group() {
        let p = Arc::new(PcPresentation::free_abelian(0));
        let id = collect(&p, &Word::empty()).unwrap();
        assert!(id.is_identity());
        assert!(check_consistency(&p, 5, &mut crate::rng::SeededRng::new(0)).is_consistent());
    }
}
