//! Sparse exact matrices: Smith normal form over Z, Gaussian elimination
//! over fields, and exact linear solves over every supported ring.
//!
//! Entries are stored in canonical sparse form: absent means zero, and no
//! stored entry is zero. Vectors are columns throughout.

use crate::ring::{RingSpec, Scalar};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Euclid, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn zero(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds an integer-entried matrix in any ring; test and construction helper.
    pub fn from_rows_i64(ring: RingSpec, data: &[&[i64]]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = Matrix::zero(ring, rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ring.from_i64(v));
            }
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if self.ring.is_zero(&v) {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.ring, self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            t.entries.insert((j, i), v.clone());
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            let s = out.ring.add(&out.get(i, j), v);
            out.set(i, j, s);
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        let mut out = Matrix::zero(self.ring, self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.entries.insert((i, j), self.ring.neg(v));
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = Matrix::zero(self.ring, self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, self.ring.mul(c, v));
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring);
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        // group rhs entries by row for the sparse product
        let mut rhs_rows: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            rhs_rows.entry(k).or_default().push((j, v));
        }
        for (&(i, k), a) in &self.entries {
            if let Some(row) = rhs_rows.get(&k) {
                for &(j, b) in row {
                    let term = self.ring.mul(a, b);
                    match acc.get_mut(&(i, j)) {
                        Some(cur) => *cur = self.ring.add(cur, &term),
                        None => {
                            acc.insert((i, j), term);
                        }
                    }
                }
            }
        }
        acc.retain(|_, v| !self.ring.is_zero(v));
        Matrix { ring: self.ring, rows: self.rows, cols: other.cols, entries: acc }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![self.ring.zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            let term = self.ring.mul(a, &v[j]);
            out[i] = self.ring.add(&out[i], &term);
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(ring: RingSpec, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zero(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.ring, other.ring);
        let mut m = Matrix::zero(self.ring, self.rows, self.cols + other.cols);
        for (&(i, j), v) in &self.entries {
            m.entries.insert((i, j), v.clone());
        }
        for (&(i, j), v) in &other.entries {
            m.entries.insert((i, j + self.cols), v.clone());
        }
        m
    }

    /// Vertical concatenation, `self` on top.
    pub fn vcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.ring, other.ring);
        let mut m = Matrix::zero(self.ring, self.rows + other.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m.entries.insert((i, j), v.clone());
        }
        for (&(i, j), v) in &other.entries {
            m.entries.insert((i + self.rows, j), v.clone());
        }
        m
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|&(i, j)| i == j)
    }

    /// Determinant via Bareiss fraction-free elimination (Z) or Gaussian
    /// elimination (fields). Intended for small matrices in tests.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.ring.one());
        }
        match self.ring {
            RingSpec::Integers => {
                let mut a: Vec<Vec<BigInt>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| match self.get(i, j) {
                                Scalar::Int(v) => v,
                                _ => unreachable!(),
                            })
                            .collect()
                    })
                    .collect();
                let mut sign = BigInt::one();
                let mut prev = BigInt::one();
                for k in 0..n - 1 {
                    if a[k][k].is_zero() {
                        let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                            return Ok(Scalar::Int(BigInt::zero()));
                        };
                        a.swap(k, p);
                        sign = -sign;
                    }
                    for i in k + 1..n {
                        for j in k + 1..n {
                            let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                            a[i][j] = num / &prev;
                        }
                        a[i][k] = BigInt::zero();
                    }
                    prev = a[k][k].clone();
                }
                Ok(Scalar::Int(sign * a[n - 1][n - 1].clone()))
            }
            _ => {
                let mut rows: Vec<Vec<Scalar>> =
                    (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
                let ring = self.ring;
                let mut det = ring.one();
                for k in 0..n {
                    let Some(p) = (k..n).find(|&i| !ring.is_zero(&rows[i][k])) else {
                        return Ok(ring.zero());
                    };
                    if p != k {
                        rows.swap(k, p);
                        det = ring.neg(&det);
                    }
                    let pivot = rows[k][k].clone();
                    det = ring.mul(&det, &pivot);
                    let inv = ring.inv(&pivot).expect("field pivot invertible");
                    for i in k + 1..n {
                        let factor = ring.mul(&rows[i][k], &inv);
                        if ring.is_zero(&factor) {
                            continue;
                        }
                        for j in k..n {
                            let t = ring.mul(&factor, &rows[k][j]);
                            rows[i][j] = ring.sub(&rows[i][j], &t);
                        }
                    }
                }
                Ok(det)
            }
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.format(&self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of `smith_normal_form`: `u * m * v = d` with `u`, `v` unimodular
/// and `d` diagonal with a divisibility chain.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

impl SnfDecomposition {
    /// The nonzero diagonal entries, i.e. the invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal()
            .into_iter()
            .filter_map(|s| match s {
                Scalar::Int(v) if !v.is_zero() => Some(v),
                _ => None,
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn big(s: &Scalar) -> &BigInt {
    match s {
        Scalar::Int(v) => v,
        _ => unreachable!("integer matrix expected"),
    }
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &Matrix) -> Result<SnfDecomposition> {
    if m.ring() != RingSpec::Integers {
        return Err(Error::NotIntegers(m.ring().to_string()));
    }
    let ring = RingSpec::Integers;
    let mut d = m.clone();
    let mut u = Matrix::identity(ring, m.rows());
    let mut v = Matrix::identity(ring, m.cols());

    // row/column elementary operations, mirrored into u and v so that
    // u * m * v = d stays invariant
    fn swap_rows(a: &mut Matrix, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        let cols: Vec<usize> = a
            .entries
            .keys()
            .filter(|&&(i, _)| i == r1 || i == r2)
            .map(|&(_, j)| j)
            .collect();
        for j in cols {
            let x = a.get(r1, j);
            let y = a.get(r2, j);
            a.set(r1, j, y);
            a.set(r2, j, x);
        }
    }
    fn swap_cols(a: &mut Matrix, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        let rows: Vec<usize> = a
            .entries
            .keys()
            .filter(|&&(_, j)| j == c1 || j == c2)
            .map(|&(i, _)| i)
            .collect();
        for i in rows {
            let x = a.get(i, c1);
            let y = a.get(i, c2);
            a.set(i, c1, y);
            a.set(i, c2, x);
        }
    }
    // row[target] += c * row[source]
    fn add_row(a: &mut Matrix, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let src: Vec<(usize, Scalar)> = a
            .entries
            .range((source, 0)..=(source, usize::MAX))
            .map(|(&(_, j), val)| (j, val.clone()))
            .collect();
        for (j, val) in src {
            let add = Scalar::Int(c * big(&val));
            let cur = a.get(target, j);
            a.set(target, j, RingSpec::Integers.add(&cur, &add));
        }
    }
    // col[target] += c * col[source]
    fn add_col(a: &mut Matrix, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let src: Vec<(usize, Scalar)> = a
            .entries
            .iter()
            .filter(|(&(_, j), _)| j == source)
            .map(|(&(i, _), val)| (i, val.clone()))
            .collect();
        for (i, val) in src {
            let add = Scalar::Int(c * big(&val));
            let cur = a.get(i, target);
            a.set(i, target, RingSpec::Integers.add(&cur, &add));
        }
    }
    fn negate_row(a: &mut Matrix, r: usize) {
        let src: Vec<(usize, Scalar)> = a
            .entries
            .range((r, 0)..=(r, usize::MAX))
            .map(|(&(_, j), val)| (j, val.clone()))
            .collect();
        for (j, val) in src {
            a.set(r, j, Scalar::Int(-big(&val).clone()));
        }
    }

    let n = m.rows().min(m.cols());
    let mut t = 0;
    while t < n {
        // smallest nonzero |entry| in the trailing submatrix
        let pivot = d
            .entries
            .iter()
            .filter(|(&(i, j), _)| i >= t && j >= t)
            .min_by_key(|(_, val)| big(val).abs())
            .map(|(&(i, j), _)| (i, j));
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            let below: Vec<usize> = d
                .entries
                .keys()
                .filter(|&&(i, j)| j == t && i > t)
                .map(|&(i, _)| i)
                .collect();
            for i in below {
                let q = big(&d.get(i, t)).div_euclid(big(&d.get(t, t)));
                add_row(&mut d, i, t, &-q.clone());
                add_row(&mut u, i, t, &-q);
                if !RingSpec::Integers.is_zero(&d.get(i, t)) {
                    // remainder became the new, smaller pivot
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // clear row t right of the pivot
            let right: Vec<usize> = d
                .entries
                .keys()
                .filter(|&&(i, j)| i == t && j > t)
                .map(|&(_, j)| j)
                .collect();
            for j in right {
                let q = big(&d.get(t, j)).div_euclid(big(&d.get(t, t)));
                add_col(&mut d, j, t, &-q.clone());
                add_col(&mut v, j, t, &-q);
                if !RingSpec::Integers.is_zero(&d.get(t, j)) {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility fixup: pivot must divide the whole trailing block
            let offender = d
                .entries
                .iter()
                .find(|(&(i, j), val)| i > t && j > t && !(big(val) % big(&d.get(t, t))).is_zero())
                .map(|(&(i, j), _)| (i, j));
            match offender {
                Some((i, _)) => {
                    add_row(&mut d, t, i, &BigInt::one());
                    add_row(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if big(&d.get(t, t)).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    Ok(SnfDecomposition { d, u, v })
}

/// Rank of the column span. Field coefficients only; over Z use
/// [`smith_normal_form`].
pub fn rank(m: &Matrix) -> Result<usize> {
    if !m.ring().is_field() {
        return Err(Error::NotAField(m.ring().to_string()));
    }
    Ok(row_echelon(m).pivots.len())
}

pub(crate) struct RowEchelon {
    /// Reduced rows, sparse by column index.
    pub rows: Vec<BTreeMap<usize, Scalar>>,
    /// Pivot column of each reduced row, strictly increasing.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form over a field.
pub(crate) fn row_echelon(m: &Matrix) -> RowEchelon {
    let ring = m.ring();
    assert!(ring.is_field());
    let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); m.rows()];
    for (&(i, j), val) in &m.entries {
        rows[i].insert(j, val.clone());
    }
    let mut out_rows: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..m.cols() {
        let Some(pos) = rows.iter().position(|r| r.keys().next() == Some(&col)) else {
            continue;
        };
        let mut pivot_row = rows.swap_remove(pos);
        let inv = ring.inv(pivot_row.get(&col).unwrap()).unwrap();
        for val in pivot_row.values_mut() {
            *val = ring.mul(val, &inv);
        }
        // eliminate from the remaining rows
        for r in rows.iter_mut() {
            if let Some(c) = r.get(&col).cloned() {
                for (&j, val) in &pivot_row {
                    let t = ring.mul(&c, val);
                    let cur = r.get(&j).cloned().unwrap_or_else(|| ring.zero());
                    let next = ring.sub(&cur, &t);
                    if ring.is_zero(&next) {
                        r.remove(&j);
                    } else {
                        r.insert(j, next);
                    }
                }
            }
        }
        // and from already-finished rows, for the fully reduced form
        for r in out_rows.iter_mut() {
            if let Some(c) = r.get(&col).cloned() {
                for (&j, val) in &pivot_row {
                    let t = ring.mul(&c, val);
                    let cur = r.get(&j).cloned().unwrap_or_else(|| ring.zero());
                    let next = ring.sub(&cur, &t);
                    if ring.is_zero(&next) {
                        r.remove(&j);
                    } else {
                        r.insert(j, next);
                    }
                }
            }
        }
        out_rows.push(pivot_row);
        pivots.push(col);
    }
    RowEchelon { rows: out_rows, pivots }
}

/// Solves `m x = b` for a single column, exactly over the matrix ring.
/// Returns `Ok(None)` when no solution exists (a result, not an error).
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: matrix has {} rows, rhs has {}",
            m.rows(),
            b.len()
        )));
    }
    let rhs = Matrix::from_columns(m.ring(), m.rows(), &[b.to_vec()]);
    Ok(solve_many(m, &rhs)?.map(|x| x.column(0)))
}

/// Solves `m X = B` column-wise; `None` if any column is unsolvable.
pub fn solve_many(m: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if b.rows() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: matrix has {} rows, rhs has {}",
            m.rows(),
            b.rows()
        )));
    }
    if m.ring() != b.ring() {
        return Err(Error::RingMismatch {
            expected: m.ring().to_string(),
            got: b.ring().to_string(),
        });
    }
    let ring = m.ring();
    match ring {
        RingSpec::Integers => {
            let snf = smith_normal_form(m)?;
            let ub = snf.u.mul(b);
            let r = snf.rank();
            let mut y = Matrix::zero(ring, m.cols(), b.cols());
            for col in 0..b.cols() {
                for i in 0..m.rows() {
                    let val = ub.get(i, col);
                    if i < r {
                        match ring.div_exact(&val, &snf.d.get(i, i)) {
                            Some(q) => y.set(i, col, q),
                            None => return Ok(None),
                        }
                    } else if !ring.is_zero(&val) {
                        return Ok(None);
                    }
                }
            }
            Ok(Some(snf.v.mul(&y)))
        }
        _ => {
            let aug = m.hcat(b);
            let ech = row_echelon(&aug);
            if ech.pivots.iter().any(|&p| p >= m.cols()) {
                return Ok(None);
            }
            let mut x = Matrix::zero(ring, m.cols(), b.cols());
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                for (&j, val) in row {
                    if j >= m.cols() {
                        x.set(p, j - m.cols(), val.clone());
                    }
                }
            }
            Ok(Some(x))
        }
    }
}

/// Columns spanning the kernel of `m`. Over Z the basis is saturated
/// (it spans the kernel lattice, not a finite-index sublattice).
pub fn kernel_basis(m: &Matrix) -> Result<Matrix> {
    let ring = m.ring();
    match ring {
        RingSpec::Integers => {
            let snf = smith_normal_form(m)?;
            let r = snf.rank();
            let mut cols = Vec::new();
            for j in r..m.cols() {
                cols.push(snf.v.column(j));
            }
            Ok(Matrix::from_columns(ring, m.cols(), &cols))
        }
        _ => {
            let ech = row_echelon(m);
            let pivot_set: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
            let mut cols = Vec::new();
            for free in 0..m.cols() {
                if pivot_set.contains(&free) {
                    continue;
                }
                let mut col = vec![ring.zero(); m.cols()];
                col[free] = ring.one();
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    if let Some(c) = row.get(&free) {
                        col[p] = ring.neg(c);
                    }
                }
                cols.push(col);
            }
            Ok(Matrix::from_columns(ring, m.cols(), &cols))
        }
    }
}

/// Whether every column of `b` lies in the column span of `m`
/// (integral span over Z).
pub fn span_contains(m: &Matrix, b: &Matrix) -> Result<bool> {
    Ok(solve_many(m, b)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    #[test]
    fn snf_examples() {
        // 1x1 already diagonal
        let m = Matrix::from_rows_i64(z(), &[&[2]]);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.d, m);
        assert_eq!(snf.u, Matrix::identity(z(), 1));
        assert_eq!(snf.v, Matrix::identity(z(), 1));

        // identity stays identity
        let m = Matrix::identity(z(), 2);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.d, m);

        // invariant factors 2, 4 by hand row/column reduction
        let m = Matrix::from_rows_i64(z(), &[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_transforms_are_unimodular() {
        let m = Matrix::from_rows_i64(z(), &[&[-6, 111, -36, 6], &[5, -672, 210, 74], &[0, -255, 81, 24], &[-7, 255, -81, -10]]);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert!(snf.d.is_diagonal());
        let det_u = snf.u.det().unwrap();
        let det_v = snf.v.det().unwrap();
        assert!(RingSpec::Integers.is_unit(&det_u));
        assert!(RingSpec::Integers.is_unit(&det_v));
        // divisibility chain
        let inv = snf.invariant_factors();
        for w in inv.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn rank_examples() {
        let q = RingSpec::Rationals;
        assert_eq!(rank(&Matrix::zero(q, 3, 3)).unwrap(), 0);
        assert_eq!(rank(&Matrix::identity(q, 4)).unwrap(), 4);
        let m = Matrix::from_rows_i64(q, &[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&m).unwrap(), 1);
        assert!(rank(&Matrix::zero(z(), 2, 2)).is_err());
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let f5 = RingSpec::prime_field(5).unwrap();
        let m = Matrix::from_rows_i64(f5, &[&[1, 2, 3], &[4, 0, 1]]);
        assert_eq!(rank(&m).unwrap(), rank(&m.transpose()).unwrap());
    }

    #[test]
    fn solve_examples() {
        // identity returns rhs
        let q = RingSpec::Rationals;
        let id = Matrix::identity(q, 3);
        let b = vec![q.from_i64(3), q.from_i64(-1), q.from_i64(7)];
        assert_eq!(solve(&id, &b).unwrap().unwrap(), b);

        // parity obstruction over Z
        let m2 = Matrix::from_rows_i64(z(), &[&[2]]);
        assert_eq!(solve(&m2, &[z().from_i64(1)]).unwrap(), None);
        assert_eq!(
            solve(&m2, &[z().from_i64(6)]).unwrap().unwrap(),
            vec![z().from_i64(3)]
        );

        // same system over Q has the solution 1/2
        let m2q = Matrix::from_rows_i64(q, &[&[2]]);
        let x = solve(&m2q, &[q.from_i64(1)]).unwrap().unwrap();
        assert_eq!(x, vec![q.parse("1/2").unwrap()]);

        // dimension mismatch is an error, not a "no solution"
        assert!(solve(&m2, &[z().from_i64(1), z().from_i64(2)]).is_err());
    }

    #[test]
    fn solve_remultiplies() {
        let m = Matrix::from_rows_i64(z(), &[&[2, 1], &[0, 3]]);
        let b = vec![z().from_i64(7), z().from_i64(9)];
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn kernel_is_saturated() {
        // kernel of [2 4] over Z is spanned by (2, -1), not (4, -2)
        let m = Matrix::from_rows_i64(z(), &[&[2, 4]]);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.cols(), 1);
        let col = k.column(0);
        let gcd: BigInt = match (&col[0], &col[1]) {
            (Scalar::Int(a), Scalar::Int(b)) => num_integer::Integer::gcd(a, b),
            _ => unreachable!(),
        };
        assert_eq!(gcd, BigInt::one());
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn empty_shapes() {
        let m = Matrix::zero(z(), 0, 3);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.rank(), 0);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.cols(), 3);
        let m = Matrix::zero(z(), 3, 0);
        assert_eq!(solve(&m, &[z().zero(), z().zero(), z().zero()]).unwrap(), Some(vec![]));
    }
}
