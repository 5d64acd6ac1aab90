//! Sparse exact linear algebra over [`Scalar`].
//!
//! Matrices are row-major maps with no stored zeros; elimination uses
//! leftmost pivots with exact scalar arithmetic and no magnitude heuristics,
//! so bases and ranks are reproducible across runs and platforms.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{Field, Scalar};

/// Sparse vector: index -> nonzero scalar.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SpVec {
    entries: BTreeMap<usize, Scalar>,
}

impl SpVec {
    pub fn new() -> Self {
        SpVec {
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(index: usize, field: &Field) -> Self {
        let mut v = SpVec::new();
        v.set(index, field.one());
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, Scalar)>>(it: I) -> Self {
        let mut v = SpVec::new();
        for (i, s) in it {
            v.add_to(i, s);
        }
        v
    }

    pub fn set(&mut self, index: usize, value: Scalar) {
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn add_to(&mut self, index: usize, value: Scalar) {
        if value.is_zero() {
            return;
        }
        match self.entries.get_mut(&index) {
            None => {
                self.entries.insert(index, value);
            }
            Some(e) => {
                *e += &value;
                if e.is_zero() {
                    self.entries.remove(&index);
                }
            }
        }
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries.get(&index)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, s)| (*i, s))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Leftmost nonzero index.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    pub fn scale(&self, s: &Scalar) -> SpVec {
        if s.is_zero() {
            return SpVec::new();
        }
        SpVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * s)).collect(),
        }
    }

    pub fn axpy(&mut self, coeff: &Scalar, other: &SpVec) {
        for (i, v) in other.iter() {
            self.add_to(i, coeff * v);
        }
    }
}

/// Sparse matrix over the scalar field.
#[derive(Clone, PartialEq, Eq)]
pub struct SpMat {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Scalar>>,
}

impl SpMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SpMat {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize, field: &Field) -> Self {
        let mut m = SpMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut m = SpMat::zero(rows, cols);
        for (r, c, s) in triplets {
            m.add_to(r, c, s);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, s: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if s.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, s);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, s: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if s.is_zero() {
            return;
        }
        match self.data[r].get_mut(&c) {
            None => {
                self.data[r].insert(c, s);
            }
            Some(e) => {
                *e += &s;
                if e.is_zero() {
                    self.data[r].remove(&c);
                }
            }
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Scalar> {
        self.data[r].get(&c)
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.data[r].iter().map(|(c, s)| (*c, s))
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, s)| (r, *c, s)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(r, row)| {
                row.len() == 1 && row.get(&r).map(|s| s.is_one()).unwrap_or(false)
            })
    }

    pub fn transpose(&self) -> SpMat {
        let mut out = SpMat::zero(self.cols, self.rows);
        for (r, c, s) in self.triplets() {
            out.set(c, r, s.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> SpMat {
        if s.is_zero() {
            return SpMat::zero(self.rows, self.cols);
        }
        SpMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, v * s)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &SpMat) -> SpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape");
        let mut out = self.clone();
        for (r, c, s) in other.triplets() {
            out.add_to(r, c, s.clone());
        }
        out
    }

    pub fn sub(&self, other: &SpMat) -> SpMat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SpMat {
        SpMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, -v)).collect())
                .collect(),
        }
    }

    /// Matrix product `self * other` (operator composition: `other` acts
    /// first when matrices act on column vectors).
    pub fn mul(&self, other: &SpMat) -> SpMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = SpMat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for (k, a) in self.data[r].iter() {
                for (c, b) in other.data[*k].iter() {
                    out.add_to(r, *c, a * b);
                }
            }
        }
        out
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &SpMat) -> SpMat {
        self.mul(other).sub(&other.mul(self))
    }

    /// Matrix-vector product, row by row.
    pub fn apply(&self, v: &SpVec) -> SpVec {
        let mut out = SpVec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: Option<Scalar> = None;
            for (c, a) in row.iter() {
                if let Some(x) = v.get(*c) {
                    let term = a * x;
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s + term,
                    });
                }
            }
            if let Some(s) = acc {
                out.add_to(r, s);
            }
        }
        out
    }

    /// Kronecker product; index `(i1, i2) -> i1 * d2 + i2` in both
    /// dimensions, matching the flattening of tensor-product bases.
    pub fn kron(&self, other: &SpMat) -> SpMat {
        let mut out = SpMat::zero(self.rows * other.rows, self.cols * other.cols);
        for (r1, c1, a) in self.triplets() {
            for (r2, c2, b) in other.triplets() {
                out.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> SpMat {
        assert_eq!(self.rows, self.cols, "pow of non-square matrix");
        let mut out: Option<SpMat> = None;
        for _ in 0..n {
            out = Some(match out {
                None => self.clone(),
                Some(m) => m.mul(self),
            });
        }
        out.unwrap_or_else(|| {
            // n = 0: identity; infer the field from any entry, defaulting to
            // generic-free rational 1 is wrong, so require an entry or treat
            // as identity over the caller's field via `identity`.
            panic!("pow(0) needs a field; use SpMat::identity")
        })
    }

    /// Exact rank via row reduction.
    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        for r in 0..self.rows {
            let v = SpVec {
                entries: self.data[r].clone(),
            };
            basis.insert(&v);
        }
        basis.rank()
    }

    /// Exact inverse, if the matrix is square and invertible.
    pub fn inverse(&self, field: &Field) -> Option<SpMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        // Augmented Gauss-Jordan with leftmost pivots.
        let mut a: Vec<BTreeMap<usize, Scalar>> = self.data.clone();
        let mut inv: Vec<BTreeMap<usize, Scalar>> = SpMat::identity(n, field).data;
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| a[r].contains_key(&col))?;
            a.swap(col, pivot_row);
            inv.swap(col, pivot_row);
            let pinv = a[col].get(&col).unwrap().inverse().expect("nonzero pivot");
            scale_row(&mut a[col], &pinv);
            scale_row(&mut inv[col], &pinv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                if let Some(f) = a[r].get(&col).cloned() {
                    let neg_f = -&f;
                    let (acol, arow) = split_rows(&mut a, col, r);
                    axpy_row(arow, &neg_f, acol);
                    let (icol, irow) = split_rows(&mut inv, col, r);
                    axpy_row(irow, &neg_f, icol);
                }
            }
        }
        Some(SpMat {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// `A^l / [l]!`, the quantum divided power of an operator.
    ///
    /// Over the generic field, entries of `A^l` with Laurent-polynomial
    /// entries must stay Laurent after the division; a genuine denominator
    /// signals a broken realization and is reported.
    pub fn divided_power(&self, l: u32, field: &Field) -> Result<SpMat, DividedPowerError> {
        if l == 0 {
            return Ok(SpMat::identity(self.rows, field));
        }
        let power = self.pow(l);
        let fact = field
            .qfact(l as i64)
            .expect("nonnegative factorial");
        let fact_inv = fact.inverse().expect("[l]! is nonzero");
        let was_laurent = matches!(field, Field::Generic)
            && power
                .triplets()
                .all(|(_, _, s)| s.as_fun().map(|f| f.is_laurent()).unwrap_or(true));
        let out = power.scale(&fact_inv);
        if was_laurent {
            for (r, c, s) in out.triplets() {
                if let Some(f) = s.as_fun() {
                    if !f.is_laurent() {
                        return Err(DividedPowerError {
                            l,
                            row: r,
                            col: c,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

fn scale_row(row: &mut BTreeMap<usize, Scalar>, s: &Scalar) {
    for v in row.values_mut() {
        *v = &*v * s;
    }
}

fn axpy_row(dst: &mut BTreeMap<usize, Scalar>, coeff: &Scalar, src: &BTreeMap<usize, Scalar>) {
    for (c, v) in src {
        let term = coeff * v;
        if term.is_zero() {
            continue;
        }
        match dst.get_mut(c) {
            None => {
                dst.insert(*c, term);
            }
            Some(e) => {
                *e += &term;
                if e.is_zero() {
                    dst.remove(c);
                }
            }
        }
    }
}

/// Borrow two distinct rows mutably.
fn split_rows<T>(rows: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = rows.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(a);
        (&hi[0] as &T, &mut lo[b])
    }
}

impl fmt::Debug for SpMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SpMat {}x{} [", self.rows, self.cols)?;
        for (r, c, s) in self.triplets() {
            writeln!(f, "  ({r}, {c}) = {s}")?;
        }
        write!(f, "]")
    }
}

/// Non-exact quantum divided power: entry `(row, col)` of `A^l` is not
/// divisible by `[l]!` in the Laurent ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedPowerError {
    pub l: u32,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for DividedPowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "divided power A^({}) is not integral at entry ({}, {})",
            self.l, self.row, self.col
        )
    }
}

/// A row-reduced basis of a subspace: rows in reduced echelon form, pivot
/// columns strictly increasing, every pivot 1 and alone in its column.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ambient: usize,
    rows: Vec<SpVec>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(ambient: usize) -> Self {
        EchelonBasis {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SpVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; returns the residue (zero iff `v` is
    /// in the span).
    pub fn reduce(&self, v: &SpVec) -> SpVec {
        let mut w = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Some(c) = w.get(p).cloned() {
                w.axpy(&-&c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &SpVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts a vector, keeping reduced echelon form. Returns `true` when
    /// the rank grew.
    pub fn insert(&mut self, v: &SpVec) -> bool {
        let mut w = self.reduce(v);
        let pivot = match w.leading_index() {
            None => return false,
            Some(p) => p,
        };
        let lead = w.get(pivot).unwrap().clone();
        w = w.scale(&lead.inverse().expect("nonzero leading entry"));
        // Eliminate the new pivot column from the existing rows.
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(pivot).cloned() {
                row.axpy(&-&c, &w);
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, w);
        true
    }
}

/// Right null space of `m`: a deterministic basis of `{x : m x = 0}`,
/// computed from the reduced echelon form; one basis vector per free column
/// in ascending order.
pub fn nullspace(m: &SpMat, field: &Field) -> Vec<SpVec> {
    let mut basis = EchelonBasis::new(m.cols());
    for r in 0..m.rows() {
        basis.insert(&SpVec::from_entries(
            m.row(r).map(|(c, s)| (c, s.clone())),
        ));
    }
    let pivots = basis.pivots().to_vec();
    let is_pivot = {
        let mut flags = vec![false; m.cols()];
        for &p in &pivots {
            flags[p] = true;
        }
        flags
    };
    let mut out = Vec::new();
    for free in 0..m.cols() {
        if is_pivot[free] {
            continue;
        }
        let mut v = SpVec::new();
        v.set(free, field.one());
        for (row, &p) in basis.rows().iter().zip(&pivots) {
            if let Some(c) = row.get(free) {
                v.set(p, -c);
            }
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn f() -> Field {
        Field::specialized(Rat::from_int(2)).unwrap()
    }

    fn m(field: &Field, rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SpMat {
        SpMat::from_triplets(
            rows,
            cols,
            entries
                .iter()
                .map(|&(r, c, v)| (r, c, field.from_int(v))),
        )
    }

    #[test]
    fn mul_and_kron() {
        let field = f();
        let a = m(&field, 2, 2, &[(0, 1, 1)]);
        let b = m(&field, 2, 2, &[(1, 0, 1)]);
        let ab = a.mul(&b);
        assert_eq!(ab, m(&field, 2, 2, &[(0, 0, 1)]));
        let ba = b.mul(&a);
        assert_eq!(ba, m(&field, 2, 2, &[(1, 1, 1)]));
        let k = a.kron(&b);
        assert_eq!(k.get(0 * 2 + 1, 1 * 2 + 0), Some(&field.one()));
        assert_eq!(k.nnz(), 1);
    }

    #[test]
    fn inverse_and_rank() {
        let field = f();
        let a = m(&field, 2, 2, &[(0, 0, 1), (0, 1, 2), (1, 1, 1)]);
        let inv = a.inverse(&field).unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
        assert_eq!(a.rank(), 2);
        let singular = m(&field, 2, 2, &[(0, 0, 1), (1, 0, 2)]);
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse(&field).is_none());
    }

    #[test]
    fn nullspace_exact() {
        let field = f();
        // x + 2y = 0 has a one-dimensional null space.
        let a = m(&field, 1, 2, &[(0, 0, 1), (0, 1, 2)]);
        let ns = nullspace(&a, &field);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(a.apply(v).is_zero());
        }
        let id = SpMat::identity(3, &field);
        assert!(nullspace(&id, &field).is_empty());
    }

    #[test]
    fn echelon_basis() {
        let field = f();
        let mut basis = EchelonBasis::new(3);
        let v1 = SpVec::from_entries([(0, field.from_int(1)), (1, field.from_int(1))]);
        let v2 = SpVec::from_entries([(1, field.from_int(1)), (2, field.from_int(1))]);
        assert!(basis.insert(&v1));
        assert!(basis.insert(&v2));
        assert!(!basis.insert(&v1));
        let sum = SpVec::from_entries([
            (0, field.from_int(2)),
            (1, field.from_int(4)),
            (2, field.from_int(2)),
        ]);
        assert!(basis.contains(&sum));
        assert_eq!(basis.rank(), 2);
        // Pivots strictly increasing, pivot entries are 1.
        assert_eq!(basis.pivots(), &[0, 1]);
        for (row, &p) in basis.rows().iter().zip(basis.pivots()) {
            assert!(row.get(p).unwrap().is_one());
        }
    }

    #[test]
    fn divided_power_integrality() {
        let g = Field::Generic;
        // Nilpotent single-entry operator: A^2 = 0, divided powers vanish.
        let a = SpMat::from_triplets(2, 2, [(0, 1, g.one())]);
        assert!(a.divided_power(2, &g).unwrap().is_zero());
        // [2] * E is divisible by [2]!.
        let b = a.scale(&g.qint(2));
        let d = b.divided_power(1, &g).unwrap();
        assert_eq!(d, b);
        // A itself is not divisible by [2]! = q + q^{-1} ... but A^2 = 0,
        // so the first failing case is a diagonal operator.
        let c = SpMat::from_triplets(1, 1, [(0, 0, g.one())]);
        assert!(c.divided_power(2, &g).is_err());
    }
}
