//! Finite cochain complexes of free modules with degree +1 differential.
//!
//! Grading is cohomological throughout. The sphere `S^n` is the ring in
//! degree `n` with zero differential; the disk `D^n` sits in degrees
//! `n-1, n` with the identity differential, so every disk is contractible
//! and the sphere-to-disk inclusion hits the degree-`n` component.

use crate::matrix::{self, Matrix};
use crate::ring::{RingSpec, Scalar};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

/// A finitely supported cochain complex of finite-rank free modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteComplex {
    ring: RingSpec,
    basis: BTreeMap<i64, Vec<String>>,
    diff: BTreeMap<i64, Matrix>,
}

/// A finitely generated module in invariant-factor form: `R^free_rank`
/// plus cyclic torsion summands (empty over fields).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDescription {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModuleDescription {
    pub fn zero() -> Self {
        ModuleDescription { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        ModuleDescription { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for ModuleDescription {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("R/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl FiniteComplex {
    /// Builds a complex, checking shapes and `d^2 = 0`.
    pub fn new(
        ring: RingSpec,
        basis: BTreeMap<i64, Vec<String>>,
        diff: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        let basis: BTreeMap<i64, Vec<String>> =
            basis.into_iter().filter(|(_, b)| !b.is_empty()).collect();
        let dim = |k: i64| basis.get(&k).map_or(0, |b| b.len());
        let mut clean = BTreeMap::new();
        for (&k, m) in &diff {
            if m.ring() != ring {
                return Err(Error::RingMismatch {
                    expected: ring.to_string(),
                    got: m.ring().to_string(),
                });
            }
            if m.rows() != dim(k + 1) || m.cols() != dim(k) {
                return Err(Error::DimensionMismatch(format!(
                    "differential at degree {k} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dim(k + 1),
                    dim(k)
                )));
            }
            if !m.is_zero() {
                clean.insert(k, m.clone());
            }
        }
        let c = FiniteComplex { ring, basis, diff: clean };
        for &k in c.diff.keys() {
            let dd = c.d(k + 1).mul(&c.d(k));
            if !dd.is_zero() {
                return Err(Error::DifferentialSquare(format!(
                    "d(k+1) . d(k) != 0 at degree k = {k}"
                )));
            }
        }
        Ok(c)
    }

    /// The zero complex.
    pub fn zero(ring: RingSpec) -> Self {
        FiniteComplex { ring, basis: BTreeMap::new(), diff: BTreeMap::new() }
    }

    /// `S^n`: the ring in degree `n`, zero differential.
    pub fn sphere(n: i64, ring: RingSpec) -> Self {
        let mut basis = BTreeMap::new();
        basis.insert(n, vec![format!("s{n}")]);
        FiniteComplex { ring, basis, diff: BTreeMap::new() }
    }

    /// `D^n`: generators in degrees `n-1` and `n`, identity differential.
    pub fn disk(n: i64, ring: RingSpec) -> Self {
        let mut basis = BTreeMap::new();
        basis.insert(n - 1, vec![format!("e{}", n - 1)]);
        basis.insert(n, vec![format!("e{n}")]);
        let mut diff = BTreeMap::new();
        diff.insert(n - 1, Matrix::identity(ring, 1));
        FiniteComplex { ring, basis, diff }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn dim(&self, k: i64) -> usize {
        self.basis.get(&k).map_or(0, |b| b.len())
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(|b| b.len()).sum()
    }

    pub fn labels(&self, k: i64) -> &[String] {
        self.basis.get(&k).map_or(&[], |b| b.as_slice())
    }

    /// Degrees with a nonempty basis, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.basis.keys().copied().collect()
    }

    /// The differential out of degree `k`, materialized with its exact shape.
    pub fn d(&self, k: i64) -> Matrix {
        match self.diff.get(&k) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.ring, self.dim(k + 1), self.dim(k)),
        }
    }

    /// Cohomology in degree `k`. Over fields the result is free; over Z the
    /// torsion comes from the Smith normal form of the boundaries expressed
    /// in cycle coordinates.
    pub fn homology(&self, k: i64) -> Result<ModuleDescription> {
        if self.dim(k) == 0 {
            return Ok(ModuleDescription::zero());
        }
        let cycles = matrix::kernel_basis(&self.d(k))?;
        let boundaries = self.d(k - 1);
        // boundaries are cycles, and over Z the cycle basis is saturated,
        // so this solve always succeeds
        let in_cycle_coords = matrix::solve_many(&cycles, &boundaries)?
            .expect("boundaries must lie in the cycle span");
        match self.ring {
            RingSpec::Integers => {
                let snf = matrix::smith_normal_form(&in_cycle_coords)?;
                let torsion: Vec<BigInt> = snf
                    .invariant_factors()
                    .into_iter()
                    .filter(|f| !f.is_one())
                    .collect();
                Ok(ModuleDescription {
                    free_rank: cycles.cols() - snf.rank(),
                    torsion,
                })
            }
            _ => {
                let r = matrix::rank(&in_cycle_coords)?;
                Ok(ModuleDescription::free(cycles.cols() - r))
            }
        }
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        for k in self.support() {
            if !self.homology(k)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Searches for a contracting homotopy `h` with `d h + h d = id`,
    /// degreewise, as one exact linear solve.
    pub fn contracting_homotopy(&self) -> Result<Option<Homotopy>> {
        let degrees = self.support();
        if degrees.is_empty() {
            return Ok(Some(Homotopy { components: BTreeMap::new() }));
        }
        // unknowns: entries of h_k : C^k -> C^{k-1} for every supported k
        let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
        let mut total = 0usize;
        for &k in &degrees {
            let size = self.dim(k) * self.dim(k - 1);
            if size > 0 {
                offsets.insert(k, total);
                total += size;
            }
        }
        let h_entry = |k: i64, row: usize, col: usize| -> Option<usize> {
            // h_k has shape (dim(k-1), dim(k)); column-major packing
            offsets.get(&k).map(|off| off + col * self.dim(k - 1) + row)
        };
        let mut system = Vec::new(); // (row index -> coefficient) pairs per equation
        let mut rhs = Vec::new();
        for &k in &degrees {
            let dk = self.d(k);
            let dkm1 = self.d(k - 1);
            let n = self.dim(k);
            // equation block: d_{k-1} h_k + h_{k+1} d_k = id on degree k
            for i in 0..n {
                for j in 0..n {
                    let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                    // (d_{k-1} h_k)[i,j] = sum_l d_{k-1}[i,l] h_k[l,j]
                    for l in 0..self.dim(k - 1) {
                        let c = dkm1.get(i, l);
                        if self.ring.is_zero(&c) {
                            continue;
                        }
                        if let Some(idx) = h_entry(k, l, j) {
                            let cur = row.get(&idx).cloned().unwrap_or_else(|| self.ring.zero());
                            row.insert(idx, self.ring.add(&cur, &c));
                        }
                    }
                    // (h_{k+1} d_k)[i,j] = sum_l h_{k+1}[i,l] d_k[l,j]
                    for l in 0..self.dim(k + 1) {
                        let c = dk.get(l, j);
                        if self.ring.is_zero(&c) {
                            continue;
                        }
                        if let Some(idx) = h_entry(k + 1, i, l) {
                            let cur = row.get(&idx).cloned().unwrap_or_else(|| self.ring.zero());
                            row.insert(idx, self.ring.add(&cur, &c));
                        }
                    }
                    system.push(row);
                    rhs.push(if i == j { self.ring.one() } else { self.ring.zero() });
                }
            }
        }
        let mut mat = Matrix::zero(self.ring, system.len(), total);
        for (r, row) in system.iter().enumerate() {
            for (&c, v) in row {
                mat.set(r, c, v.clone());
            }
        }
        let Some(sol) = matrix::solve(&mat, &rhs)? else {
            return Ok(None);
        };
        let mut components = BTreeMap::new();
        for &k in &degrees {
            if let Some(&off) = offsets.get(&k) {
                let (rows, cols) = (self.dim(k - 1), self.dim(k));
                let mut h = Matrix::zero(self.ring, rows, cols);
                for col in 0..cols {
                    for row in 0..rows {
                        h.set(row, col, sol[off + col * rows + row].clone());
                    }
                }
                components.insert(k, h);
            }
        }
        Ok(Some(Homotopy { components }))
    }

    /// Contractibility: over a field, vanishing homology; over Z, vanishing
    /// homology plus an explicit null-homotopy of the identity.
    pub fn is_contractible(&self) -> Result<bool> {
        if !self.is_acyclic()? {
            return Ok(false);
        }
        if self.ring.is_field() {
            return Ok(true);
        }
        Ok(self.contracting_homotopy()?.is_some())
    }

    /// Tensor product, with the Koszul sign on the second Leibniz term.
    pub fn tensor(&self, other: &FiniteComplex) -> Result<FiniteComplex> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                expected: self.ring.to_string(),
                got: other.ring.to_string(),
            });
        }
        // basis of degree k: pairs (i, j) with i + j = k, ordered by i
        let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        let mut index: BTreeMap<(i64, usize, i64, usize), usize> = BTreeMap::new();
        for &i in &self.support() {
            for &j in &other.support() {
                let k = i + j;
                let bucket = basis.entry(k).or_default();
                for (a, la) in self.labels(i).iter().enumerate() {
                    for (b, lb) in other.labels(j).iter().enumerate() {
                        index.insert((i, a, j, b), bucket.len());
                        bucket.push(format!("{la}⊗{lb}"));
                    }
                }
            }
        }
        let dim = |k: i64| basis.get(&k).map_or(0, |b| b.len());
        let mut diff: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (&(i, a, j, b), &col) in &index {
            let k = i + j;
            let m = diff
                .entry(k)
                .or_insert_with(|| Matrix::zero(self.ring, dim(k + 1), dim(k)));
            // d(u ⊗ v) = du ⊗ v + (-1)^i u ⊗ dv
            let da = self.d(i);
            for a2 in 0..self.dim(i + 1) {
                let c = da.get(a2, a);
                if !self.ring.is_zero(&c) {
                    let row = index[&(i + 1, a2, j, b)];
                    let cur = m.get(row, col);
                    m.set(row, col, self.ring.add(&cur, &c));
                }
            }
            let db = other.d(j);
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            for b2 in 0..other.dim(j + 1) {
                let c = db.get(b2, b);
                if !self.ring.is_zero(&c) {
                    let row = index[&(i, a, j + 1, b2)];
                    let signed = if sign == 1 { c } else { self.ring.neg(&c) };
                    let cur = m.get(row, col);
                    m.set(row, col, self.ring.add(&cur, &signed));
                }
            }
        }
        FiniteComplex::new(self.ring, basis, diff)
    }

    pub fn direct_sum(&self, other: &FiniteComplex) -> Result<FiniteComplex> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                expected: self.ring.to_string(),
                got: other.ring.to_string(),
            });
        }
        let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> =
            self.support().into_iter().chain(other.support()).collect();
        for &k in &degrees {
            let mut b: Vec<String> = self.labels(k).iter().map(|l| format!("l:{l}")).collect();
            b.extend(other.labels(k).iter().map(|l| format!("r:{l}")));
            basis.insert(k, b);
        }
        let mut diff = BTreeMap::new();
        for &k in &degrees {
            let (ra, rb) = (self.dim(k + 1), other.dim(k + 1));
            let (ca, cb) = (self.dim(k), other.dim(k));
            if (ra + rb) == 0 || (ca + cb) == 0 {
                continue;
            }
            let mut m = Matrix::zero(self.ring, ra + rb, ca + cb);
            for (&(i, j), v) in self.d(k).entries() {
                m.set(i, j, v.clone());
            }
            for (&(i, j), v) in other.d(k).entries() {
                m.set(i + ra, j + ca, v.clone());
            }
            diff.insert(k, m);
        }
        FiniteComplex::new(self.ring, basis, diff)
    }
}

/// A degreewise homotopy `h_k : C^k -> C^{k-1}`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    pub components: BTreeMap<i64, Matrix>,
}

impl Homotopy {
    pub fn component(&self, c: &FiniteComplex, k: i64) -> Matrix {
        self.components
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(c.ring(), c.dim(k - 1), c.dim(k)))
    }

    /// Verifies `d h + h d = id` in every supported degree.
    pub fn contracts(&self, c: &FiniteComplex) -> bool {
        for k in c.support() {
            let lhs = c
                .d(k - 1)
                .mul(&self.component(c, k))
                .add(&self.component(c, k + 1).mul(&c.d(k)));
            if lhs != Matrix::identity(c.ring(), c.dim(k)) {
                return false;
            }
        }
        true
    }
}

/// A degreewise map of complexes commuting with the differentials.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: FiniteComplex,
    target: FiniteComplex,
    components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(
        source: FiniteComplex,
        target: FiniteComplex,
        components: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch {
                expected: source.ring().to_string(),
                got: target.ring().to_string(),
            });
        }
        let components: BTreeMap<i64, Matrix> =
            components.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        for (&k, m) in &components {
            if m.rows() != target.dim(k) || m.cols() != source.dim(k) {
                return Err(Error::DimensionMismatch(format!(
                    "chain map component at degree {k} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(k),
                    source.dim(k)
                )));
            }
        }
        let f = ChainMap { source, target, components };
        for k in f.source.support() {
            let lhs = f.component(k + 1).mul(&f.source.d(k));
            let rhs = f.target.d(k).mul(&f.component(k));
            if lhs != rhs {
                return Err(Error::DifferentialSquare(format!(
                    "map does not commute with differentials at degree {k}"
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &FiniteComplex) -> Self {
        let components = c
            .support()
            .into_iter()
            .map(|k| (k, Matrix::identity(c.ring(), c.dim(k))))
            .collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn zero(source: FiniteComplex, target: FiniteComplex) -> Result<Self> {
        ChainMap::new(source, target, BTreeMap::new())
    }

    pub fn source(&self) -> &FiniteComplex {
        &self.source
    }

    pub fn target(&self) -> &FiniteComplex {
        &self.target
    }

    pub fn component(&self, k: i64) -> Matrix {
        self.components
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.source.ring(), self.target.dim(k), self.source.dim(k)))
    }

    /// Mapping cone: degree k is `source^{k+1} (+) target^k` with
    /// differential `d(x, y) = (-d x, f(x) + d y)`.
    pub fn cone(&self) -> Result<FiniteComplex> {
        let ring = self.source.ring();
        let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> = self
            .source
            .support()
            .into_iter()
            .map(|k| k - 1)
            .chain(self.target.support())
            .collect();
        for &k in &degrees {
            let mut b: Vec<String> =
                self.source.labels(k + 1).iter().map(|l| format!("c:{l}")).collect();
            b.extend(self.target.labels(k).iter().map(|l| format!("t:{l}")));
            if !b.is_empty() {
                basis.insert(k, b);
            }
        }
        let sdim = |k: i64| self.source.dim(k + 1) + self.target.dim(k);
        let mut diff = BTreeMap::new();
        for &k in &degrees {
            let (rows, cols) = (sdim(k + 1), sdim(k));
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(ring, rows, cols);
            let a_rows = self.source.dim(k + 2);
            for (&(i, j), v) in self.source.d(k + 1).entries() {
                m.set(i, j, ring.neg(v));
            }
            for (&(i, j), v) in self.component(k + 1).entries() {
                m.set(i + a_rows, j, v.clone());
            }
            for (&(i, j), v) in self.target.d(k).entries() {
                m.set(i + a_rows, j + self.source.dim(k + 1), v.clone());
            }
            diff.insert(k, m);
        }
        FiniteComplex::new(ring, basis, diff)
    }

    /// Quasi-isomorphism test by direct comparison of cohomology: equal
    /// invariants in every degree plus surjectivity of the induced map.
    /// (Finitely generated modules are Hopfian, so a surjection between
    /// isomorphic modules is an isomorphism.)
    pub fn is_quasi_iso(&self) -> Result<bool> {
        let degrees: std::collections::BTreeSet<i64> = self
            .source
            .support()
            .into_iter()
            .chain(self.target.support())
            .collect();
        for &k in &degrees {
            let ha = self.source.homology(k)?;
            let hb = self.target.homology(k)?;
            if ha != hb {
                return Ok(false);
            }
            if hb.is_zero() {
                continue;
            }
            // surjectivity on cohomology: every target cycle is an image
            // of a source cycle plus a target boundary
            let za = matrix::kernel_basis(&self.source.d(k))?;
            let zb = matrix::kernel_basis(&self.target.d(k))?;
            let fz = self.component(k).mul(&za);
            let generators = fz.hcat(&self.target.d(k - 1));
            if !matrix::span_contains(&generators, &zb)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Deterministic generators of small random complexes and chain maps,
/// used by the property sweeps and the test suite.
pub mod sample {
    use super::*;
    use rand::Rng;

    /// A random complex supported in `[-2, 2]`: a sum of shifted spheres
    /// and disks conjugated by a random unimodular change of basis, so
    /// `d^2 = 0` holds by construction.
    pub fn random_complex<R: Rng>(ring: RingSpec, rng: &mut R) -> FiniteComplex {
        let mut c = FiniteComplex::zero(ring);
        let pieces = rng.gen_range(1..=4);
        for _ in 0..pieces {
            let n = rng.gen_range(-2..=2);
            let piece = if rng.gen_bool(0.5) {
                FiniteComplex::sphere(n, ring)
            } else {
                FiniteComplex::disk(n, ring)
            };
            c = c.direct_sum(&piece).expect("same ring");
        }
        // random elementary change of basis within each degree
        let mut basis = BTreeMap::new();
        for k in c.support() {
            basis.insert(k, c.labels(k).to_vec());
        }
        let mut p: BTreeMap<i64, Matrix> = BTreeMap::new();
        let mut p_inv: BTreeMap<i64, Matrix> = BTreeMap::new();
        for k in c.support() {
            let n = c.dim(k);
            let mut m = Matrix::identity(ring, n);
            let mut inv = Matrix::identity(ring, n);
            for _ in 0..rng.gen_range(0..=2 * n) {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i == j {
                    continue;
                }
                let cval = ring.from_i64(rng.gen_range(-2..=2i64));
                // m <- E m, inv <- inv E^{-1}
                let mut e = Matrix::identity(ring, n);
                e.set(i, j, cval.clone());
                let mut e_inv = Matrix::identity(ring, n);
                e_inv.set(i, j, ring.neg(&cval));
                m = e.mul(&m);
                inv = inv.mul(&e_inv);
            }
            p.insert(k, m);
            p_inv.insert(k, inv);
        }
        let mut diff = BTreeMap::new();
        for k in c.support() {
            let pk1 = p.get(&(k + 1)).cloned().unwrap_or_else(|| Matrix::identity(ring, c.dim(k + 1)));
            let pk_inv = p_inv.get(&k).cloned().unwrap_or_else(|| Matrix::identity(ring, c.dim(k)));
            let d = pk1.mul(&c.d(k)).mul(&pk_inv);
            if !d.is_zero() {
                diff.insert(k, d);
            }
        }
        FiniteComplex::new(ring, basis, diff).expect("conjugated differential still squares to zero")
    }

    /// A random chain map `a -> b`: a random exact combination of a basis
    /// of the solution space of the commuting constraints.
    pub fn random_chain_map<R: Rng>(
        a: &FiniteComplex,
        b: &FiniteComplex,
        rng: &mut R,
    ) -> ChainMap {
        let ring = a.ring();
        let degrees: Vec<i64> = a
            .support()
            .into_iter()
            .filter(|&k| b.dim(k) > 0)
            .collect();
        let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
        let mut total = 0usize;
        for &k in &degrees {
            offsets.insert(k, total);
            total += b.dim(k) * a.dim(k);
        }
        if total == 0 {
            return ChainMap::zero(a.clone(), b.clone()).unwrap();
        }
        let entry = |k: i64, row: usize, col: usize| offsets[&k] + col * b.dim(k) + row;
        // constraints: f_{k+1} d_k - d'_k f_k = 0
        let mut rows_acc: Vec<BTreeMap<usize, Scalar>> = Vec::new();
        for &k in &degrees {
            let da = a.d(k);
            let db = b.d(k);
            for i in 0..b.dim(k + 1) {
                for j in 0..a.dim(k) {
                    let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                    if offsets.contains_key(&(k + 1)) {
                        for l in 0..a.dim(k + 1) {
                            let c = da.get(l, j);
                            if !ring.is_zero(&c) {
                                let idx = entry(k + 1, i, l);
                                let cur = row.get(&idx).cloned().unwrap_or_else(|| ring.zero());
                                row.insert(idx, ring.add(&cur, &c));
                            }
                        }
                    }
                    for l in 0..b.dim(k) {
                        let c = db.get(i, l);
                        if !ring.is_zero(&c) {
                            let idx = entry(k, l, j);
                            let cur = row.get(&idx).cloned().unwrap_or_else(|| ring.zero());
                            row.insert(idx, ring.sub(&cur, &c));
                        }
                    }
                    if !row.is_empty() {
                        rows_acc.push(row);
                    }
                }
            }
        }
        let mut mat = Matrix::zero(ring, rows_acc.len(), total);
        for (r, row) in rows_acc.iter().enumerate() {
            for (&c, v) in row {
                mat.set(r, c, v.clone());
            }
        }
        let kernel = matrix::kernel_basis(&mat).expect("kernel over any supported ring");
        let mut coeffs = vec![ring.zero(); kernel.cols()];
        for c in coeffs.iter_mut() {
            *c = ring.from_i64(rng.gen_range(-2..=2i64));
        }
        let flat = kernel.mul_vec(&coeffs);
        let mut components = BTreeMap::new();
        for &k in &degrees {
            let mut m = Matrix::zero(ring, b.dim(k), a.dim(k));
            for col in 0..a.dim(k) {
                for row in 0..b.dim(k) {
                    m.set(row, col, flat[entry(k, row, col)].clone());
                }
            }
            components.insert(k, m);
        }
        ChainMap::new(a.clone(), b.clone(), components).expect("solution of the commuting constraints")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rings() -> Vec<RingSpec> {
        vec![
            RingSpec::Integers,
            RingSpec::Rationals,
            RingSpec::prime_field(2).unwrap(),
        ]
    }

    #[test]
    fn sphere_homology() {
        for ring in rings() {
            for n in [-3, 0, 2] {
                let s = FiniteComplex::sphere(n, ring);
                for k in n - 1..=n + 1 {
                    let h = s.homology(k).unwrap();
                    if k == n {
                        assert_eq!(h, ModuleDescription::free(1));
                    } else {
                        assert!(h.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn disk_is_contractible() {
        for ring in rings() {
            for n in [-2, 0, 5] {
                let d = FiniteComplex::disk(n, ring);
                assert_eq!(d.total_dim(), 2);
                assert!(d.is_acyclic().unwrap());
                let h = d.contracting_homotopy().unwrap().unwrap();
                assert!(h.contracts(&d));
            }
        }
    }

    #[test]
    fn sphere_is_not_contractible() {
        for ring in rings() {
            assert!(!FiniteComplex::sphere(1, ring).is_contractible().unwrap());
        }
    }

    #[test]
    fn multiplication_by_two() {
        // R --2--> R in degrees 0 -> 1 over Z: H^1 = Z/2
        let ring = RingSpec::Integers;
        let mut basis = BTreeMap::new();
        basis.insert(0, vec!["a".to_string()]);
        basis.insert(1, vec!["b".to_string()]);
        let mut diff = BTreeMap::new();
        diff.insert(0, Matrix::from_rows_i64(ring, &[&[2]]));
        let c = FiniteComplex::new(ring, basis, diff).unwrap();
        assert_eq!(c.homology(0).unwrap(), ModuleDescription::zero());
        let h1 = c.homology(1).unwrap();
        assert_eq!(h1.free_rank, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
        assert!(!c.is_contractible().unwrap());
    }

    #[test]
    fn cone_of_identity_is_disk_shaped() {
        let ring = RingSpec::Integers;
        let s = FiniteComplex::sphere(2, ring);
        let cone = ChainMap::identity(&s).cone().unwrap();
        assert_eq!(cone.total_dim(), 2);
        assert_eq!(cone.dim(1), 1);
        assert_eq!(cone.dim(2), 1);
        assert!(cone.is_acyclic().unwrap());
        assert_eq!(cone.d(1), Matrix::identity(ring, 1));
    }

    #[test]
    fn cone_of_zero_map_splits() {
        let ring = RingSpec::Rationals;
        let s = FiniteComplex::sphere(0, ring);
        let z = ChainMap::zero(s.clone(), s.clone()).unwrap();
        let cone = z.cone().unwrap();
        assert_eq!(cone.homology(-1).unwrap(), ModuleDescription::free(1));
        assert_eq!(cone.homology(0).unwrap(), ModuleDescription::free(1));
    }

    #[test]
    fn tensor_with_sphere_zero_is_identity_shaped() {
        let ring = RingSpec::Integers;
        let s0 = FiniteComplex::sphere(0, ring);
        let d = FiniteComplex::disk(3, ring);
        let t = s0.tensor(&d).unwrap();
        assert_eq!(t.support(), d.support());
        for k in t.support() {
            assert_eq!(t.dim(k), d.dim(k));
            assert_eq!(t.homology(k).unwrap(), d.homology(k).unwrap());
        }
    }

    #[test]
    fn tensor_disk_sphere_acyclic() {
        for ring in rings() {
            let t = FiniteComplex::disk(1, ring)
                .tensor(&FiniteComplex::sphere(2, ring))
                .unwrap();
            assert!(t.is_acyclic().unwrap());
        }
    }

    #[test]
    fn tensor_disks_differential_squares() {
        // FiniteComplex::new re-checks d^2 = 0, so construction succeeding is the assertion
        let t = FiniteComplex::disk(1, RingSpec::Integers)
            .tensor(&FiniteComplex::disk(2, RingSpec::Integers))
            .unwrap();
        assert_eq!(t.total_dim(), 4);
    }

    #[test]
    fn quasi_iso_examples() {
        let ring = RingSpec::Integers;
        let d = FiniteComplex::disk(2, ring);
        assert!(ChainMap::identity(&d).is_quasi_iso().unwrap());
        // 0 -> D^n is a quasi-isomorphism
        let from_zero = ChainMap::zero(FiniteComplex::zero(ring), d.clone()).unwrap();
        assert!(from_zero.is_quasi_iso().unwrap());
        // the sphere-to-disk generating cofibration is not
        let s = FiniteComplex::sphere(2, ring);
        let mut comp = BTreeMap::new();
        let mut m = Matrix::zero(ring, 1, 1);
        m.set(0, 0, ring.one());
        comp.insert(2, m);
        let incl = ChainMap::new(s, d, comp).unwrap();
        assert!(!incl.is_quasi_iso().unwrap());
    }

    #[test]
    fn quasi_iso_iff_cone_acyclic_randomized() {
        for ring in rings() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..40 {
                let a = sample::random_complex(ring, &mut rng);
                let b = sample::random_complex(ring, &mut rng);
                let f = sample::random_chain_map(&a, &b, &mut rng);
                let via_cone = f.cone().unwrap().is_acyclic().unwrap();
                assert_eq!(f.is_quasi_iso().unwrap(), via_cone);
            }
        }
    }

    #[test]
    fn tensor_homotopy_from_contractible_factor() {
        // tensoring with a disk stays contractible, with the induced homotopy
        for ring in rings() {
            let d = FiniteComplex::disk(0, ring);
            let s = FiniteComplex::sphere(1, ring);
            let t = s.tensor(&d).unwrap();
            let h = t.contracting_homotopy().unwrap().unwrap();
            assert!(h.contracts(&t));
        }
    }
}
