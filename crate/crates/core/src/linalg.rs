//! Dense matrices over the rationals with exact arithmetic.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn from_entries(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols);
        QMatrix { rows, cols, data }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = &self[(r, c)];
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: i64) -> Option<QMatrix> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = QMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        Some(acc)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        let v = &m[(row, c)] * &f;
                        m[(r, c)] -= v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Q::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Q::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pivot;
                for c in col..n {
                    let v = &m[(col, c)] * &f;
                    m[(r, c)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    /// Largest absolute numerator/denominator bit length, a size measure.
    pub fn height_bits(&self) -> u64 {
        self.data
            .iter()
            .map(|x| x.numer().abs().bits().max(x.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.matmul(rhs)
    }
}

/// Incrementally maintained row-reduced basis for testing linear
/// independence of vectors.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: Vec<(usize, Vec<Q>)>,
}

impl SpanBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the current span; returns whether it
    /// was added.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= y * &f;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= y * &f;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = QMatrix::from_i64_rows(&[vec![1, 2], vec![1, 1]]);
        assert_eq!(m.det(), q(-1));
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).is_identity());
        assert_eq!(inv, QMatrix::from_i64_rows(&[vec![-1, 2], vec![1, -1]]));
        let sing = QMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.det(), q(0));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = QMatrix::from_i64_rows(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 4 - m.rank());
        for v in ns {
            let col = QMatrix::from_rows(v.into_iter().map(|x| vec![x]).collect());
            let prod = m.matmul(&col);
            assert!(prod.entries().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        // 3x3 cofactor expansion as an independent route
        let rows = vec![vec![2, -1, 3], vec![0, 4, 5], vec![7, 1, -2]];
        let m = QMatrix::from_i64_rows(&rows);
        let a = |r: usize, c: usize| rows[r][c];
        let cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        assert_eq!(m.det(), q(cof));
    }

    #[test]
    fn span_basis_detects_dependence() {
        let mut s = SpanBasis::new();
        assert!(s.insert(&[q(1), q(2), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(2), q(5), q(1)]));
        assert!(s.insert(&[q(0), q(0), q(3)]));
        assert!(!s.insert(&[q(9), q(-4), q(7)]));
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn negative_power_uses_inverse() {
        let m = QMatrix::from_i64_rows(&[vec![0, 1], vec![1, 1]]);
        let p = m.pow(5).unwrap();
        assert!(p.matmul(&m.pow(-5).unwrap()).is_identity());
        assert_eq!(p, QMatrix::from_i64_rows(&[vec![3, 5], vec![5, 8]]));
    }
}
