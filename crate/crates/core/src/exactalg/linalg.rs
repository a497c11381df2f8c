use super::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse vector keyed by column index; zero entries are not stored.
pub type SparseVec = BTreeMap<usize, Rational>;

fn axpy(v: &mut SparseVec, a: &Rational, row: &SparseVec) {
    for (&j, x) in row {
        let e = v.entry(j).or_insert_with(Rational::zero);
        *e -= a * x;
        if e.is_zero() {
            v.remove(&j);
        }
    }
}

/// Incrementally built row-echelon basis of a subspace of `Q^ncols`.
///
/// Each stored row has a distinct leading column (its pivot) with entry 1.
/// Reducing a vector clears every pivot column, so the residual is the
/// canonical representative of its class modulo the span.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tracking(v, |_, _| {})
    }

    /// Reduction that reports each `(row index, multiplier)` subtracted.
    pub fn reduce_tracking(&self, v: &SparseVec, mut track: impl FnMut(usize, &Rational)) -> SparseVec {
        let mut v = v.clone();
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(j, _)| self.pivot_row.contains_key(j)).map(|(&j, a)| (j, a.clone()));
            let Some((j, a)) = next else { break };
            let r = self.pivot_row[&j];
            track(r, &a);
            axpy(&mut v, &a, &self.rows[r]);
            cursor = j + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&p, lead)) = r.iter().next() else { return false };
        let inv = lead.recip();
        let row: SparseVec = r.iter().map(|(&j, a)| (j, a * &inv)).collect();
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(row);
        true
    }
}

/// Dense rational matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Self {
        let c = cols.len();
        let r = cols.first().map(Vec::len).unwrap_or(0);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, a) in col.iter().enumerate() {
                m[(i, j)] = a.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &self[(i, j)] * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in 0..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Some solution of `Mx = b`, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let cols: Option<Vec<Vec<Rational>>> = (0..n)
            .map(|j| {
                let mut e = vec![Rational::zero(); n];
                e[j] = Rational::one();
                self.solve(&e)
            })
            .collect();
        let inv = Matrix::from_columns(&cols?);
        (self.mul(&inv) == Matrix::identity(n)).then_some(inv)
    }

    /// Nilpotency index if `M^k = 0` for some `k <= n`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert_eq!(self.rows, self.cols, "non-square matrix");
        let mut p = Matrix::identity(self.rows);
        for k in 1..=self.rows.max(1) {
            p = p.mul(self);
            if p.is_zero() {
                return Some(k);
            }
        }
        None
    }

    /// `exp(sM)` as the finite sum for nilpotent `M`; `None` otherwise.
    pub fn exp_nilpotent(&self, s: &Rational) -> Option<Matrix> {
        let k = self.nilpotency_index()?;
        let sm = self.scale(s);
        let mut term = Matrix::identity(self.rows);
        let mut acc = term.clone();
        for i in 1..k {
            term = term.mul(&sm).scale(&Rational::new(1.into(), (i as i64).into()));
            acc = acc.add(&term);
        }
        Some(acc)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of a family of vectors of equal length.
pub fn rank_of(vectors: &[Vec<Rational>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(&to_sparse(v));
    }
    e.rank()
}

pub fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(j, a)| (j, a.clone())).collect()
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (&j, a) in v {
        out[j] = a.clone();
    }
    out
}
