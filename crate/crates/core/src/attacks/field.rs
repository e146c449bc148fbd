//! Field-based attack. Let `W_k` span the matrix algebra generated by Bob's
//! public `b_j`, and `W'_k` be the same products of the `b'_j`; conjugation
//! by Alice's `A` maps `W_k` to `W'_k`. Any invertible `X = sum c_k W_k` with
//! `a_i X = X a'_i` equals `Z B` for some `Z` commuting with `A`, so
//! `(sum c_k W'_k)^-1 X = A^-1 X^-1 A X = [A, B]`.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::AttackError;
use crate::linalg::{q, QMatrix, SpanBasis, Q};
use crate::pc::{GroupElement, PcPresentation};
use crate::platform::{matrix_of, MatrixRep};
use crate::protocols::aag::AagPublic;
use crate::rng::SeededRng;

/// Random combinations tried after the nullspace basis vectors.
const RANDOM_TRIES: usize = 64;
const SWEEP_SEED: u64 = 0x00f1_e1d5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldAttackResult {
    /// Dimension of the algebra spanned by Bob's public matrices.
    pub algebra_dim: usize,
    /// Dimension of the solution space of `a_i X = X a'_i` in that algebra.
    pub solution_dim: usize,
    #[serde(skip)]
    pub key_matrix: QMatrix,
    /// The key as a group element, when the representation can decode it.
    pub key: Option<GroupElement>,
}

fn flatten(m: &QMatrix) -> Vec<Q> {
    m.entries().to_vec()
}

/// Basis of the unital algebra generated by `mats`, paired with the same
/// products of `mats_prime`.
fn algebra_basis(dim: usize, mats: &[QMatrix], mats_prime: &[QMatrix]) -> (Vec<QMatrix>, Vec<QMatrix>) {
    let mut span = SpanBasis::new();
    let id = QMatrix::identity(dim);
    span.insert(&flatten(&id));
    let mut basis = vec![id.clone()];
    let mut paired = vec![id];
    let mut k = 0;
    while k < basis.len() {
        for (m, mp) in mats.iter().zip(mats_prime) {
            let cand = basis[k].matmul(m);
            if span.insert(&flatten(&cand)) {
                let cand_p = paired[k].matmul(mp);
                basis.push(cand);
                paired.push(cand_p);
            }
        }
        k += 1;
    }
    (basis, paired)
}

fn combine(basis: &[QMatrix], c: &[Q]) -> QMatrix {
    let dim = basis[0].rows();
    basis
        .iter()
        .zip(c)
        .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
        .fold(QMatrix::zeros(dim, dim), |acc, (m, x)| acc.add(&m.scale(x)))
}

pub fn field_based_attack(
    public: &AagPublic,
    rep: &MatrixRep,
    p: &Arc<PcPresentation>,
) -> Result<FieldAttackResult, AttackError> {
    let mat = |v: &[GroupElement]| -> Result<Vec<QMatrix>, AttackError> {
        v.iter().map(|x| Ok(matrix_of(x, rep)?)).collect()
    };
    let a = mat(&public.a_bar)?;
    let a_prime = mat(&public.a_prime)?;
    let b = mat(&public.b_bar)?;
    let b_prime = mat(&public.b_prime)?;
    if a.len() != a_prime.len() || b.len() != b_prime.len() {
        return Err(AttackError::BadTranscript("tuple sizes do not match".into()));
    }
    let dim = rep.dim();
    let (basis, paired) = algebra_basis(dim, &b, &b_prime);

    // column k holds a_i W_k - W_k a'_i for every i, stacked
    let rows = a.len() * dim * dim;
    let mut system = QMatrix::zeros(rows, basis.len());
    for (k, w) in basis.iter().enumerate() {
        for (i, (ai, api)) in a.iter().zip(&a_prime).enumerate() {
            let d = ai.matmul(w).sub(&w.matmul(api));
            for (e, x) in d.entries().iter().enumerate() {
                system[(i * dim * dim + e, k)] = x.clone();
            }
        }
    }
    let null = system.nullspace();
    log::debug!("field attack: algebra dim {}, solution dim {}", basis.len(), null.len());

    let mut candidates: Vec<Vec<Q>> = null.clone();
    let mut rng = SeededRng::new(SWEEP_SEED);
    if null.len() > 1 {
        for _ in 0..RANDOM_TRIES {
            let coeffs: Vec<i64> = (0..null.len()).map(|_| rng.gen_range(-3..=3)).collect();
            let c = (0..basis.len())
                .map(|k| {
                    null.iter()
                        .zip(&coeffs)
                        .fold(q(0), |acc, (v, &s)| acc + &v[k] * q(s))
                })
                .collect();
            candidates.push(c);
        }
    }
    for c in candidates {
        let x = combine(&basis, &c);
        if num_traits::Zero::is_zero(&x.det()) {
            continue;
        }
        let y = combine(&paired, &c);
        let Some(y_inv) = y.inverse() else { continue };
        // a_i X = X a'_i must hold exactly
        debug_assert!(a.iter().zip(&a_prime).all(|(ai, api)| ai.matmul(&x) == x.matmul(api)));
        let key_matrix = y_inv.matmul(&x);
        let key = rep.decode(p, &key_matrix).ok();
        return Ok(FieldAttackResult {
            algebra_dim: basis.len(),
            solution_dim: null.len(),
            key_matrix,
            key,
        });
    }
    Err(AttackError::SingularSystem)
}
