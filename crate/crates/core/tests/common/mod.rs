//! Closed-form coordinate oracles shared by the integration tests. Nothing
//! here calls the collector.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Ratio;
use pcw_core::smallcanc::FreeWord;
use pcw_core::{GroupElement, Int};

pub type V3 = [i64; 3];

/// Heisenberg coordinates: `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ba')`.
pub fn heis_mul(x: V3, y: V3) -> V3 {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[1] * y[0]]
}

pub fn heis_inv(x: V3) -> V3 {
    [-x[0], -x[1], -x[2] + x[0] * x[1]]
}

pub fn heis_conj(a: V3, x: V3) -> V3 {
    heis_mul(heis_mul(heis_inv(x), a), x)
}

pub type M3 = [[i64; 3]; 3];

/// UT(3) normal form `t12^a t23^b t13^c` as an integer matrix.
pub fn ut3_matrix(v: V3) -> M3 {
    [[1, v[0], v[0] * v[1] + v[2]], [0, 1, v[1]], [0, 0, 1]]
}

pub fn ut3_coords(m: &M3) -> V3 {
    [m[0][1], m[1][2], m[0][2] - m[0][1] * m[1][2]]
}

pub fn m3_mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Inverse of a unitriangular 3x3 integer matrix.
pub fn m3_inv(m: &M3) -> M3 {
    let (a, b, c) = (m[0][1], m[1][2], m[0][2]);
    [[1, -a, a * b - c], [0, 1, -b], [0, 0, 1]]
}

pub fn ut3_mul(x: V3, y: V3) -> V3 {
    ut3_coords(&m3_mul(&ut3_matrix(x), &ut3_matrix(y)))
}

pub fn ut3_inv(x: V3) -> V3 {
    ut3_coords(&m3_inv(&ut3_matrix(x)))
}

pub fn ut3_conj(a: V3, x: V3) -> V3 {
    ut3_mul(ut3_mul(ut3_inv(x), a), x)
}

pub fn v3(g: &GroupElement) -> V3 {
    let e = g.exps();
    let f = |x: &Int| x.to_i64().expect("small coordinates");
    [f(&e[0]), f(&e[1]), f(&e[2])]
}

/// Outcome of one closed-form comparison sweep.
pub struct Sweep {
    pub checks: usize,
    pub mismatches: usize,
}

/// `n` random mul/inv/conjugate results on a three-generator group, compared
/// against `mul`, `inv` and `conj` given in coordinates.
pub fn closed_form_sweep(
    g: &pcw_core::PlatformGroup,
    n: usize,
    seed: u64,
    mul: fn(V3, V3) -> V3,
    inv: fn(V3) -> V3,
    conj: fn(V3, V3) -> V3,
) -> Sweep {
    use rand::Rng;
    let mut rng = pcw_core::SeededRng::new(seed);
    let mut s = Sweep { checks: 0, mismatches: 0 };
    for k in 0..n {
        let draw = |rng: &mut pcw_core::SeededRng| -> V3 { [0; 3].map(|_| rng.gen_range(-50..=50)) };
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        let ex = g.element(&x).unwrap();
        let ey = g.element(&y).unwrap();
        let ok = match k % 3 {
            0 => v3(&ex.mul(&ey).unwrap()) == mul(x, y),
            1 => v3(&ex.inv().unwrap()) == inv(x),
            _ => v3(&ex.conjugate(&ey).unwrap()) == conj(x, y),
        };
        s.checks += 1;
        if !ok {
            s.mismatches += 1;
        }
    }
    s
}

/// Every cyclic shift of every relator and of its inverse.
pub fn brute_symmetrize(rels: &[FreeWord]) -> BTreeSet<Vec<i32>> {
    let mut out = BTreeSet::new();
    for r in rels {
        for base in [r.clone(), r.inverse()] {
            let l = base.letters();
            for k in 0..l.len() {
                out.insert([&l[k..], &l[..k]].concat());
            }
        }
    }
    out
}

/// Longest common prefix over all pairs of distinct symmetrized relators,
/// over the shortest relator length.
pub fn brute_lambda(rels: &[FreeWord]) -> Ratio<u64> {
    let sym: Vec<Vec<i32>> = brute_symmetrize(rels).into_iter().collect();
    let mut piece = 0;
    for i in 0..sym.len() {
        for j in 0..sym.len() {
            if i != j {
                let l = sym[i].iter().zip(&sym[j]).take_while(|(a, b)| a == b).count();
                piece = piece.max(l);
            }
        }
    }
    let min = rels.iter().map(FreeWord::len).min().unwrap();
    Ratio::new(piece as u64, min as u64)
}
