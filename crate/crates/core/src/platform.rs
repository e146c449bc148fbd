//! Concrete platform groups: Heisenberg, unitriangular `UT(n, Z)`,
//! `Z^d x| Z^k` semidirect products from unit-action matrices, and direct
//! products. Each carries an exact matrix image where one is known.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::int::Int;
use crate::linalg::{q, QMatrix, Q};
use crate::pc::{
    check_consistency, ConsistencyVerdict, GroupElement, Letter, PcError, PcPresentation, Word,
};
use crate::rng::SeededRng;

const CONSTRUCTION_TRIALS: usize = 500;
const CONSTRUCTION_SEED: u64 = 0x5eed_0f9c;

#[derive(Debug, thiserror::Error)]
pub enum PlatformError {
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("action matrix {index} has determinant {det}, expected +-1")]
    NonUnimodular { index: usize, det: String },
    #[error("action matrices {a} and {b} do not commute")]
    NonCommutingUnits { a: usize, b: usize },
    #[error("presentation failed the consistency check: {0}")]
    Inconsistent(String),
    #[error("matrix image violates relation {0}")]
    RelatorViolated(String),
    #[error("generators g{a} and g{b} of the commuting pair do not commute")]
    NonCommutingPair { a: usize, b: usize },
    #[error("matrix representation does not belong to this group")]
    RepMismatch,
    #[error("matrix is not in the image of this representation")]
    NotInImage,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Pc(#[from] PcError),
}

/// How matrix coordinates map back to normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepLayout {
    /// g1 -> I+E23, g2 -> I+E12, g3 -> I+E13 on 3x3 matrices.
    Heisenberg,
    /// Elementary transvections in superdiagonal order.
    Unitriangular { n: usize },
    /// Affine block of size `degree+1` (row-vector convention) followed by a
    /// 2x2 unipotent block per unit generator.
    Affine { degree: usize, units: usize },
    /// Block diagonal; the first factor occupies `first_dim` rows.
    Product {
        first: Box<RepLayout>,
        second: Box<RepLayout>,
        first_dim: usize,
        first_gens: usize,
    },
    Custom,
}

/// Exact rational matrix image of a polycyclic group, one invertible matrix
/// per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    dim: usize,
    images: Vec<QMatrix>,
    inverses: Vec<QMatrix>,
    layout: RepLayout,
}

impl MatrixRep {
    pub fn new(images: Vec<QMatrix>, layout: RepLayout) -> Result<Self, PlatformError> {
        let dim = images.first().map_or(0, QMatrix::rows);
        let mut inverses = Vec::with_capacity(images.len());
        for (i, m) in images.iter().enumerate() {
            if m.rows() != dim || !m.is_square() {
                return Err(PlatformError::BadDimension(format!(
                    "image of g{} is {}x{}, expected {dim}x{dim}",
                    i + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            let inv = m.inverse().ok_or_else(|| {
                PlatformError::BadDimension(format!("image of g{} is singular", i + 1))
            })?;
            inverses.push(inv);
        }
        Ok(MatrixRep {
            dim,
            images,
            inverses,
            layout,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[QMatrix] {
        &self.images
    }

    pub fn layout(&self) -> &RepLayout {
        &self.layout
    }

    fn gen_pow(&self, i: usize, e: &Int) -> QMatrix {
        let mut base = if e.is_negative() {
            self.inverses[i].clone()
        } else {
            self.images[i].clone()
        };
        let mut e = e.abs();
        let mut acc = QMatrix::identity(self.dim);
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.matmul(&base);
            }
            e = e.half();
            if !e.is_zero() {
                base = base.matmul(&base);
            }
        }
        acc
    }

    fn eval_word(&self, w: &Word) -> QMatrix {
        w.letters()
            .iter()
            .fold(QMatrix::identity(self.dim), |acc, l| acc.matmul(&self.gen_pow(l.gen, &l.exp)))
    }

    /// Checks every defining relation of `p` holds for the images.
    pub fn verify(&self, p: &PcPresentation) -> Result<(), PlatformError> {
        if self.images.len() != p.ngens() {
            return Err(PlatformError::RepMismatch);
        }
        let n = p.ngens();
        for i in 0..n {
            for j in i + 1..n {
                let conj = self.inverses[i].matmul(&self.images[j]).matmul(&self.images[i]);
                if conj != self.eval_word(p.conj(i, j, true)) {
                    return Err(PlatformError::RelatorViolated(format!("g{}^g{}", j + 1, i + 1)));
                }
                let conj = self.images[i].matmul(&self.images[j]).matmul(&self.inverses[i]);
                if conj != self.eval_word(p.conj(i, j, false)) {
                    return Err(PlatformError::RelatorViolated(format!("g{}^(g{}^-1)", j + 1, i + 1)));
                }
            }
            if let (Some(r), Some(w)) = (p.order(i), p.power(i)) {
                if self.gen_pow(i, &Int::from(r)) != self.eval_word(w) {
                    return Err(PlatformError::RelatorViolated(format!("g{}^{r}", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Recovers the normal form of a matrix in the image, for layouts that
    /// support it.
    pub fn decode(&self, p: &Arc<PcPresentation>, m: &QMatrix) -> Result<GroupElement, PlatformError> {
        let exps = decode_layout(&self.layout, m, 0)?;
        let g = GroupElement::from_exps(p, exps).map_err(|_| PlatformError::NotInImage)?;
        if &matrix_of_unchecked(self, &g) != m {
            return Err(PlatformError::NotInImage);
        }
        Ok(g)
    }
}

fn int_entry(x: &Q) -> Result<Int, PlatformError> {
    if !x.is_integer() {
        return Err(PlatformError::NotInImage);
    }
    Ok(Int::from(x.to_integer()))
}

fn decode_layout(layout: &RepLayout, m: &QMatrix, off: usize) -> Result<Vec<Int>, PlatformError> {
    match layout {
        RepLayout::Heisenberg => Ok(vec![
            int_entry(&m[(off + 1, off + 2)])?,
            int_entry(&m[(off, off + 1)])?,
            int_entry(&m[(off, off + 2)])?,
        ]),
        RepLayout::Unitriangular { n } => {
            let mut sub = QMatrix::zeros(*n, *n);
            for r in 0..*n {
                for c in 0..*n {
                    sub[(r, c)] = m[(off + r, off + c)].clone();
                }
            }
            let exps = ut_coordinates(*n, &sub).ok_or(PlatformError::NotInImage)?;
            Ok(exps)
        }
        RepLayout::Affine { degree, units } => {
            let d = *degree;
            let mut exps = Vec::with_capacity(d + units);
            for i in 0..*units {
                let b = off + d + 1 + 2 * i;
                exps.push(int_entry(&m[(b + 1, b)])?);
            }
            for c in 0..d {
                exps.push(int_entry(&m[(off + d, off + c)])?);
            }
            Ok(exps)
        }
        RepLayout::Product {
            first,
            second,
            first_dim,
            ..
        } => {
            let mut a = decode_layout(first, m, off)?;
            a.extend(decode_layout(second, m, off + first_dim)?);
            Ok(a)
        }
        RepLayout::Custom => Err(PlatformError::NotInImage),
    }
}

fn matrix_of_unchecked(rep: &MatrixRep, g: &GroupElement) -> QMatrix {
    g.exps()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .fold(QMatrix::identity(rep.dim), |acc, (i, e)| acc.matmul(&rep.gen_pow(i, e)))
}

/// Image of `g` under `rep`: the ordered product of generator image powers.
pub fn matrix_of(g: &GroupElement, rep: &MatrixRep) -> Result<QMatrix, PlatformError> {
    if rep.images.len() != g.group().ngens() {
        return Err(PlatformError::RepMismatch);
    }
    Ok(matrix_of_unchecked(rep, g))
}

#[derive(Clone, Debug)]
pub struct PlatformGroup {
    name: String,
    presentation: Arc<PcPresentation>,
    matrix_image: Option<MatrixRep>,
    commuting_pair: Option<(Vec<usize>, Vec<usize>)>,
    certified_element: Option<GroupElement>,
}

impl PlatformGroup {
    fn assemble(
        name: String,
        p: PcPresentation,
        matrix_image: Option<MatrixRep>,
        commuting_pair: Option<(Vec<usize>, Vec<usize>)>,
    ) -> Result<Self, PlatformError> {
        let presentation = Arc::new(p);
        let mut rng = SeededRng::new(CONSTRUCTION_SEED);
        if let ConsistencyVerdict::Inconsistent(w) = check_consistency(&presentation, CONSTRUCTION_TRIALS, &mut rng) {
            return Err(PlatformError::Inconsistent(w.reason.clone()));
        }
        if let Some(rep) = &matrix_image {
            rep.verify(&presentation)?;
        }
        if let Some((a, b)) = &commuting_pair {
            for &i in a {
                for &j in b {
                    let gi = GroupElement::generator(&presentation, i)?;
                    let gj = GroupElement::generator(&presentation, j)?;
                    if !gi.commutator(&gj)?.is_identity() {
                        return Err(PlatformError::NonCommutingPair { a: i + 1, b: j + 1 });
                    }
                }
            }
        }
        Ok(PlatformGroup {
            name,
            presentation,
            matrix_image,
            commuting_pair,
            certified_element: None,
        })
    }

    /// Wraps a user presentation after a consistency check.
    pub fn from_presentation(name: impl Into<String>, p: PcPresentation) -> Result<Self, PlatformError> {
        Self::assemble(name.into(), p, None, None)
    }

    pub fn with_matrix_image(mut self, rep: MatrixRep) -> Result<Self, PlatformError> {
        rep.verify(&self.presentation)?;
        self.matrix_image = Some(rep);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn presentation(&self) -> &Arc<PcPresentation> {
        &self.presentation
    }

    pub fn hirsch_length(&self) -> usize {
        self.presentation.hirsch_length()
    }

    pub fn ngens(&self) -> usize {
        self.presentation.ngens()
    }

    pub fn matrix_image(&self) -> Option<&MatrixRep> {
        self.matrix_image.as_ref()
    }

    pub fn commuting_pair(&self) -> Option<(&[usize], &[usize])> {
        self.commuting_pair
            .as_ref()
            .map(|(a, b)| (a.as_slice(), b.as_slice()))
    }

    /// An element whose centralizer is exactly its cyclic subgroup, when the
    /// construction can prove one.
    pub fn certified_element(&self) -> Option<&GroupElement> {
        self.certified_element.as_ref()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(&self.presentation)
    }

    pub fn element(&self, exps: &[i64]) -> Result<GroupElement, PcError> {
        GroupElement::from_i64s(&self.presentation, exps)
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement::generator(&self.presentation, i).expect("generator index in range")
    }

    pub fn matrix_of(&self, g: &GroupElement) -> Result<QMatrix, PlatformError> {
        let rep = self.matrix_image.as_ref().ok_or(PlatformError::RepMismatch)?;
        matrix_of(g, rep)
    }
}

fn transvection(n: usize, i: usize, j: usize, e: i64) -> QMatrix {
    let mut m = QMatrix::identity(n);
    m[(i, j)] = q(e);
    m
}

/// Transvection positions `(i, j)` in generator order: superdiagonal by
/// superdiagonal, top to bottom.
pub fn ut_positions(n: usize) -> Vec<(usize, usize)> {
    (1..n)
        .flat_map(|d| (0..n - d).map(move |i| (i, i + d)))
        .collect()
}

/// Exponents of a unitriangular integer matrix over the transvection
/// generators, or `None` if it is not unitriangular and integral.
fn ut_coordinates(n: usize, m: &QMatrix) -> Option<Vec<Int>> {
    for r in 0..n {
        for c in 0..=r {
            let want = if r == c { Q::one() } else { Q::zero() };
            if m[(r, c)] != want {
                return None;
            }
        }
    }
    let mut rest = m.clone();
    let mut exps = Vec::new();
    for (i, j) in ut_positions(n) {
        let x = &rest[(i, j)];
        if !x.is_integer() {
            return None;
        }
        let e = Int::from(x.to_integer());
        if !e.is_zero() {
            // left-multiply by t_ij^-e: row i -= e * row j
            let ej = x.clone();
            for c in 0..n {
                let v = &rest[(j, c)] * &ej;
                rest[(i, c)] -= v;
            }
        }
        exps.push(e);
    }
    Some(exps)
}

fn word_from_exps(exps: &[Int]) -> Word {
    Word::from_letters(
        exps.iter()
            .enumerate()
            .map(|(g, e)| Letter { gen: g, exp: e.clone() }),
    )
}

/// The integral Heisenberg group: `g2^g1 = g2 g3`, `g3` central, Hirsch
/// length 3.
pub fn heisenberg() -> PlatformGroup {
    let mut b = PcPresentation::builder(3);
    b.conj(0, 1, true, Word::from_pairs(&[(1, 1), (2, 1)]))
        .and_then(|b| b.conj(0, 1, false, Word::from_pairs(&[(1, 1), (2, -1)])))
        .expect("valid relations");
    let p = b.build().expect("valid presentation");
    let images = vec![transvection(3, 1, 2, 1), transvection(3, 0, 1, 1), transvection(3, 0, 2, 1)];
    let rep = MatrixRep::new(images, RepLayout::Heisenberg).expect("invertible images");
    PlatformGroup::assemble("heisenberg".into(), p, Some(rep), None).expect("Heisenberg group is consistent")
}

/// `UT(n, Z)` on its `n(n-1)/2` elementary transvections.
pub fn unitriangular(n: usize) -> Result<PlatformGroup, PlatformError> {
    if n < 3 {
        return Err(PlatformError::BadDimension(format!("UT(n) needs n >= 3, got {n}")));
    }
    let pos = ut_positions(n);
    let gens: Vec<QMatrix> = pos.iter().map(|&(i, j)| transvection(n, i, j, 1)).collect();
    let invs: Vec<QMatrix> = pos.iter().map(|&(i, j)| transvection(n, i, j, -1)).collect();
    let mut b = PcPresentation::builder(pos.len());
    for a in 0..pos.len() {
        for c in a + 1..pos.len() {
            let up = invs[a].matmul(&gens[c]).matmul(&gens[a]);
            let down = gens[a].matmul(&gens[c]).matmul(&invs[a]);
            let up = word_from_exps(&ut_coordinates(n, &up).expect("unitriangular"));
            let down = word_from_exps(&ut_coordinates(n, &down).expect("unitriangular"));
            if up != Word::generator(c) {
                b.conj(a, c, true, up)?;
            }
            if down != Word::generator(c) {
                b.conj(a, c, false, down)?;
            }
        }
    }
    let p = b.build()?;
    let rep = MatrixRep::new(gens, RepLayout::Unitriangular { n })?;
    PlatformGroup::assemble(format!("ut:{n}"), p, Some(rep), None)
}

/// `Z^degree x| Z^k`: unit generators `g1..gk` act on translation generators
/// `g(k+1)..g(k+degree)` by right multiplication with the given integer
/// matrices, `t_v^{u_i} = t_{v M_i}`.
pub fn semidirect_from_action(degree: usize, action: &[Vec<Vec<i64>>]) -> Result<PlatformGroup, PlatformError> {
    if degree == 0 {
        return Err(PlatformError::BadDimension("degree must be positive".into()));
    }
    let k = action.len();
    let mut mats = Vec::with_capacity(k);
    for (idx, m) in action.iter().enumerate() {
        if m.len() != degree || m.iter().any(|r| r.len() != degree) {
            return Err(PlatformError::BadDimension(format!(
                "action matrix {idx} is not {degree}x{degree}"
            )));
        }
        let qm = QMatrix::from_i64_rows(m);
        let det = qm.det();
        if det != q(1) && det != q(-1) {
            return Err(PlatformError::NonUnimodular {
                index: idx,
                det: det.to_string(),
            });
        }
        mats.push(qm);
    }
    for a in 0..k {
        for b in a + 1..k {
            if mats[a].matmul(&mats[b]) != mats[b].matmul(&mats[a]) {
                return Err(PlatformError::NonCommutingUnits { a, b });
            }
        }
    }

    let translation = |row: &QMatrix, r: usize| -> Word {
        Word::from_letters((0..degree).map(|c| Letter {
            gen: k + c,
            exp: Int::from(row[(r, c)].to_integer()),
        }))
    };
    let mut b = PcPresentation::builder(k + degree);
    for (i, m) in mats.iter().enumerate() {
        let inv = m.inverse().expect("unimodular");
        for j in 0..degree {
            let up = translation(m, j);
            let down = translation(&inv, j);
            if up != Word::generator(k + j) {
                b.conj(i, k + j, true, up)?;
            }
            if down != Word::generator(k + j) {
                b.conj(i, k + j, false, down)?;
            }
        }
    }
    let p = b.build()?;

    // affine block (row-vector convention) plus one unipotent 2x2 block per
    // unit so the image is faithful even when the action is not
    let dim = degree + 1 + 2 * k;
    let mut images = Vec::with_capacity(k + degree);
    for (i, m) in mats.iter().enumerate() {
        let mut img = QMatrix::identity(dim);
        for r in 0..degree {
            for c in 0..degree {
                img[(r, c)] = m[(r, c)].clone();
            }
        }
        let blk = degree + 1 + 2 * i;
        img[(blk + 1, blk)] = q(1);
        images.push(img);
    }
    for j in 0..degree {
        let mut img = QMatrix::identity(dim);
        img[(degree, j)] = q(1);
        images.push(img);
    }
    let rep = MatrixRep::new(images, RepLayout::Affine { degree, units: k })?;
    let name = format!("semidirect:{degree}x{k}");
    let mut g = PlatformGroup::assemble(name, p, Some(rep), None)?;

    // C(u) = <u> when the single unit has no eigenvalue 1: u commutes with
    // u^a t_v iff v (M - I) = 0.
    if k == 1 && !mats[0].sub(&QMatrix::identity(degree)).det().is_zero() {
        g.certified_element = Some(g.generator(0));
    }
    Ok(g)
}

/// Factors of `a` come first; the two factors commute elementwise.
pub fn direct_product(a: &PlatformGroup, b: &PlatformGroup) -> Result<PlatformGroup, PlatformError> {
    let pa = a.presentation();
    let pb = b.presentation();
    let (na, nb) = (pa.ngens(), pb.ngens());
    let shift = |w: &Word| {
        Word::from_letters(w.letters().iter().map(|l| Letter {
            gen: l.gen + na,
            exp: l.exp.clone(),
        }))
    };
    let mut builder = PcPresentation::builder(na + nb);
    for (p, off) in [(pa, 0usize), (pb, na)] {
        let n = p.ngens();
        for i in 0..n {
            if let Some(r) = p.order(i) {
                builder.order(off + i, r)?;
                if let Some(w) = p.power(i) {
                    if !w.is_empty() {
                        let w = if off == 0 { w.clone() } else { shift(w) };
                        builder.power(off + i, w)?;
                    }
                }
            }
            for j in i + 1..n {
                for positive in [true, false] {
                    if p.has_nontrivial_conj(i, j, positive) {
                        let w = p.conj(i, j, positive);
                        let w = if off == 0 { w.clone() } else { shift(w) };
                        builder.conj(off + i, off + j, positive, w)?;
                    }
                }
            }
        }
    }
    let p = builder.build()?;
    let rep = match (a.matrix_image(), b.matrix_image()) {
        (Some(ra), Some(rb)) => {
            let dim = ra.dim() + rb.dim();
            let embed = |m: &QMatrix, off: usize| {
                let mut out = QMatrix::identity(dim);
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        out[(off + r, off + c)] = m[(r, c)].clone();
                    }
                }
                out
            };
            let mut images: Vec<QMatrix> = ra.images().iter().map(|m| embed(m, 0)).collect();
            images.extend(rb.images().iter().map(|m| embed(m, ra.dim())));
            let layout = RepLayout::Product {
                first: Box::new(ra.layout().clone()),
                second: Box::new(rb.layout().clone()),
                first_dim: ra.dim(),
                first_gens: na,
            };
            Some(MatrixRep::new(images, layout)?)
        }
        _ => None,
    };
    let pair = ((0..na).collect(), (na..na + nb).collect());
    PlatformGroup::assemble(format!("{}*{}", a.name(), b.name()), p, rep, Some(pair))
}

/// `Z[sqrt 2] x| <1 + sqrt 2>`, Hirsch length 3.
pub fn zsqrt2() -> PlatformGroup {
    let mut g = semidirect_from_action(2, &[vec![vec![1, 2], vec![1, 1]]]).expect("valid unit");
    g.name = "zsqrt2".into();
    g
}

/// `Z[theta] x| <theta>` with `theta^2 = theta + 1`, Hirsch length 3.
pub fn golden() -> PlatformGroup {
    let mut g = semidirect_from_action(2, &[vec![vec![0, 1], vec![1, 1]]]).expect("valid unit");
    g.name = "golden".into();
    g
}

/// The order `Z[sqrt 2, sqrt 3]` (basis 1, sqrt2, sqrt3, sqrt6) acted on by
/// the independent units `1 + sqrt2`, `2 + sqrt3` and `sqrt2 + sqrt3`;
/// Hirsch length 7.
pub fn quartic_field() -> PlatformGroup {
    let units = [
        vec![vec![1, 1, 0, 0], vec![2, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 2, 1]],
        vec![vec![2, 0, 1, 0], vec![0, 2, 0, 1], vec![3, 0, 2, 0], vec![0, 3, 0, 2]],
        vec![vec![0, 1, 1, 0], vec![2, 0, 0, 1], vec![3, 0, 0, 1], vec![0, 3, 2, 0]],
    ];
    let mut g = semidirect_from_action(4, &units).expect("valid commuting units");
    g.name = "quartic".into();
    g
}

/// Parses an action file: the degree, then the entries of each matrix in
/// row-major order, all whitespace separated. `#` starts a comment.
pub fn parse_action_file(text: &str) -> Result<(usize, Vec<Vec<Vec<i64>>>), PlatformError> {
    let nums: Vec<i64> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|t| t.parse::<i64>().map_err(|_| PlatformError::Parse(format!("bad integer `{t}`"))))
        .collect::<Result<_, _>>()?;
    let (&degree, rest) = nums
        .split_first()
        .ok_or_else(|| PlatformError::Parse("empty action file".into()))?;
    if degree <= 0 {
        return Err(PlatformError::Parse("degree must be positive".into()));
    }
    let d = degree as usize;
    if rest.len() % (d * d) != 0 {
        return Err(PlatformError::Parse(format!(
            "{} entries do not form whole {d}x{d} matrices",
            rest.len()
        )));
    }
    let mats = rest
        .chunks(d * d)
        .map(|c| c.chunks(d).map(<[i64]>::to_vec).collect())
        .collect();
    Ok((d, mats))
}

/// Text form of a matrix representation: `dim D`, then per generator a
/// `gen i` line followed by D rows of rationals.
pub fn write_rep(rep: &MatrixRep) -> String {
    let mut s = format!("dim {}\n", rep.dim());
    for (i, m) in rep.images().iter().enumerate() {
        s.push_str(&format!("gen {}\n", i + 1));
        for r in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|c| m[(r, c)].to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn parse_rep(text: &str) -> Result<MatrixRep, PlatformError> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let dim: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("dim "))
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| PlatformError::Parse("expected `dim D`".into()))?;
    let mut images = Vec::new();
    while let Some(line) = lines.next() {
        if !line.starts_with("gen ") {
            return Err(PlatformError::Parse(format!("expected `gen i`, got `{line}`")));
        }
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let row = lines
                .next()
                .ok_or_else(|| PlatformError::Parse("truncated matrix".into()))?;
            let vals: Vec<Q> = row
                .split_whitespace()
                .map(|t| t.parse::<Q>().map_err(|_| PlatformError::Parse(format!("bad rational `{t}`"))))
                .collect::<Result<_, _>>()?;
            if vals.len() != dim {
                return Err(PlatformError::Parse(format!("row has {} entries, expected {dim}", vals.len())));
            }
            rows.push(vals);
        }
        images.push(QMatrix::from_rows(rows));
    }
    MatrixRep::new(images, RepLayout::Custom)
}
