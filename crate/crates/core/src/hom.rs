//! Truncated hom complexes and the H^0 category.
//!
//! A window is the span of all normal-form monomials between two objects
//! whose weighted size stays within a cap, where the per-generator weights
//! come from [`CategoryPresentation::weights`]. Under such weights the
//! differential never leaves the window, so a window is an honest
//! subcomplex and everything computed on it is exact linear algebra. If no
//! weight certificate exists the construction verifies closure monomial by
//! monomial and fails loudly instead of silently truncating the
//! differential.
//!
//! DG relations are imposed per degree per window by quotienting out the
//! span of all two-sided relation multiples that fit in the window.

use crate::complex::{FiniteComplex, ModuleDescription};
use crate::matrix::{self, Matrix};
use crate::monomial::{Element, GenId, Monomial, ObjId, Tree, TruncationConfig};
use crate::presentation::{CategoryKind, CategoryPresentation};
use crate::ring::{RingSpec, Scalar};
use crate::{Error, Result};
use num_traits::One;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A truncated hom complex together with the dictionary between complex
/// coordinates and monomials.
#[derive(Debug)]
pub struct HomTruncation {
    pub source: ObjId,
    pub target: ObjId,
    pub cap: u64,
    pub max_arity: usize,
    /// True when the presentation certifies degreewise finite hom spaces
    /// and enlarging the window does not change the quotient dimensions.
    pub exact: bool,
    pub complex: FiniteComplex,
    window: BTreeMap<i64, Vec<Monomial>>,
    index: BTreeMap<i64, BTreeMap<Monomial, usize>>,
    /// Projection window-coordinates -> quotient coordinates, per degree.
    to_quotient: BTreeMap<i64, Matrix>,
    /// Section quotient-coordinates -> window-coordinates, per degree.
    section: BTreeMap<i64, Matrix>,
    ring: RingSpec,
}

impl HomTruncation {
    pub fn dim(&self, k: i64) -> usize {
        self.complex.dim(k)
    }

    pub fn window_monomials(&self, k: i64) -> &[Monomial] {
        self.window.get(&k).map_or(&[], |v| v.as_slice())
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.window.keys().copied().collect()
    }

    /// Expresses an element in quotient coordinates at its degree.
    /// `None` when some monomial falls outside the window.
    pub fn express(&self, e: &Element) -> Result<Option<Vec<Scalar>>> {
        let k = e.degree;
        let dim = self.dim(k);
        let mut window_vec = vec![self.ring.zero(); self.window_monomials(k).len()];
        if e.is_zero() {
            return Ok(Some(vec![self.ring.zero(); dim]));
        }
        let Some(index) = self.index.get(&k) else {
            return Ok(None);
        };
        for (m, c) in e.terms() {
            match index.get(m) {
                Some(&i) => window_vec[i] = c.clone(),
                None => return Ok(None),
            }
        }
        let proj = self.to_quotient.get(&k).expect("projection exists for indexed degrees");
        Ok(Some(proj.mul_vec(&window_vec)))
    }

    /// The element represented by a quotient basis coordinate.
    pub fn rep_element(&self, cat: &CategoryPresentation, k: i64, i: usize) -> Element {
        let monos = self.window_monomials(k);
        let mut e = Element::zero(self.ring, self.source, self.target, k);
        if let Some(section) = self.section.get(&k) {
            for (row, m) in monos.iter().enumerate() {
                let c = section.get(row, i);
                if !self.ring.is_zero(&c) {
                    e.add_term(m.clone(), c);
                }
            }
        }
        let _ = cat;
        e
    }

    /// Label -> monomial dictionary for coordinates represented by a single
    /// monomial (always the case for relation-free presentations).
    pub fn basis_dictionary(&self) -> BTreeMap<String, Monomial> {
        let mut out = BTreeMap::new();
        for (k, labels) in self.label_map() {
            for (i, label) in labels.iter().enumerate() {
                if let Some(m) = self.single_monomial_rep(k, i) {
                    out.insert(label.clone(), m);
                }
            }
        }
        out
    }

    fn label_map(&self) -> BTreeMap<i64, Vec<String>> {
        self.complex
            .support()
            .into_iter()
            .map(|k| (k, self.complex.labels(k).to_vec()))
            .collect()
    }

    fn single_monomial_rep(&self, k: i64, i: usize) -> Option<Monomial> {
        let section = self.section.get(&k)?;
        let mut found = None;
        for (row, m) in self.window_monomials(k).iter().enumerate() {
            let c = section.get(row, i);
            if !self.ring.is_zero(&c) {
                if found.is_some() || !c.eq(&self.ring.one()) {
                    return None;
                }
                found = Some(m.clone());
            }
        }
        found
    }

    /// The quotient coordinate of the unit monomial, if the unit survives
    /// as a window coordinate (source = target presentations only).
    pub fn unit_coordinate(&self) -> Option<usize> {
        let idx = self.index.get(&0)?;
        let &i = idx.get(&Monomial::Unit(self.source))?;
        let proj = self.to_quotient.get(&0)?;
        let mut window_vec = vec![self.ring.zero(); self.window_monomials(0).len()];
        window_vec[i] = self.ring.one();
        let q = proj.mul_vec(&window_vec);
        let mut coord = None;
        for (j, c) in q.iter().enumerate() {
            if !self.ring.is_zero(c) {
                if coord.is_some() || !c.eq(&self.ring.one()) {
                    return None;
                }
                coord = Some(j);
            }
        }
        coord
    }
}

/// Public entry: the cached truncated hom complex at a configuration.
pub fn hom_complex(
    cat: &CategoryPresentation,
    x: ObjId,
    y: ObjId,
    cfg: &TruncationConfig,
) -> Result<Arc<HomTruncation>> {
    cat.hom_cached(x, y, cfg.max_word_length() as u64, cfg.max_arity())
}

/// All normal-form monomials from `x` to `y` with weighted size within the
/// cap (and unit if `x == y`), in canonical order.
pub fn enumerate_window(
    cat: &CategoryPresentation,
    x: ObjId,
    y: ObjId,
    cap: u64,
    max_arity: usize,
) -> Vec<Monomial> {
    let weights = cat.weights().unwrap_or_else(|| {
        cat.quiver().generators().map(|g| (g, 1)).collect()
    });
    let mut out: Vec<Monomial> = Vec::new();
    if x == y {
        out.push(Monomial::Unit(x));
    }
    // generator adjacency by source object
    let mut by_source: BTreeMap<ObjId, Vec<GenId>> = BTreeMap::new();
    for g in cat.quiver().generators() {
        by_source.entry(cat.quiver().generator(g).source).or_default().push(g);
    }
    // DFS over application-order sequences
    let mut stack: Vec<(Vec<GenId>, ObjId, u64)> = vec![(Vec::new(), x, 0)];
    let mut sequences: Vec<Vec<GenId>> = Vec::new();
    while let Some((seq, at, used)) = stack.pop() {
        if at == y && !seq.is_empty() {
            sequences.push(seq.clone());
        }
        if let Some(nexts) = by_source.get(&at) {
            for &g in nexts {
                let w = weights.get(&g).copied().unwrap_or(1);
                if used + w <= cap {
                    let mut next = seq.clone();
                    next.push(g);
                    stack.push((next, cat.quiver().generator(g).target, used + w));
                }
            }
        }
    }
    for seq in sequences {
        // display order is the reverse of application order
        let display: Vec<GenId> = seq.into_iter().rev().collect();
        match cat.kind() {
            CategoryKind::Dg => out.push(Monomial::Word(display)),
            CategoryKind::Ainf => {
                for t in tree_shapes(&display, max_arity) {
                    out.push(Monomial::Tree(t));
                }
            }
        }
    }
    out.sort();
    out
}

/// All planar trees on a fixed display-ordered leaf sequence with node
/// arities between 2 and the bound.
fn tree_shapes(leaves: &[GenId], max_arity: usize) -> Vec<Tree> {
    if leaves.len() == 1 {
        return vec![Tree::Leaf(leaves[0])];
    }
    let mut out = Vec::new();
    let n = leaves.len();
    for arity in 2..=max_arity.min(n) {
        for parts in compositions(n, arity) {
            // cartesian product of child shapes
            let mut children_options: Vec<Vec<Tree>> = Vec::with_capacity(arity);
            let mut start = 0;
            for &len in &parts {
                children_options.push(tree_shapes(&leaves[start..start + len], max_arity));
                start += len;
            }
            let mut acc: Vec<Vec<Tree>> = vec![Vec::new()];
            for options in &children_options {
                let mut next = Vec::with_capacity(acc.len() * options.len());
                for prefix in &acc {
                    for option in options {
                        let mut t = prefix.clone();
                        t.push(option.clone());
                        next.push(t);
                    }
                }
                acc = next;
            }
            for children in acc {
                out.push(Tree::Node(children));
            }
        }
    }
    out
}

/// Ordered compositions of `n` into `k` positive parts.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=n - (k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Builds the truncated hom complex; called through the presentation cache.
pub(crate) fn build_hom(
    cat: &CategoryPresentation,
    x: ObjId,
    y: ObjId,
    cap: u64,
    max_arity: usize,
) -> Result<HomTruncation> {
    let ring = cat.ring();
    let monos = enumerate_window(cat, x, y, cap, max_arity);
    let mut window: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    for m in monos {
        window.entry(m.degree(cat.quiver())).or_default().push(m);
    }
    let mut index: BTreeMap<i64, BTreeMap<Monomial, usize>> = BTreeMap::new();
    for (&k, monos) in &window {
        index.insert(k, monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect());
    }
    let wdim = |k: i64| window.get(&k).map_or(0, |v| v.len());
    // full-window differential matrices
    let mut full_diff: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&k, monos) in &window {
        let mut d = Matrix::zero(ring, wdim(k + 1), wdim(k));
        for (col, m) in monos.iter().enumerate() {
            let dm = cat.m1_monomial(m);
            for (term, c) in dm.terms() {
                let row = index
                    .get(&(k + 1))
                    .and_then(|idx| idx.get(term))
                    .copied()
                    .ok_or_else(|| {
                        Error::WindowNotClosed(format!(
                            "m1({}) has support {} outside the window (cap {cap})",
                            m.display(cat.quiver()),
                            term.display(cat.quiver())
                        ))
                    })?;
                d.set(row, col, c.clone());
            }
        }
        full_diff.insert(k, d);
    }
    // relation quotient per degree
    let mut to_quotient: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut section: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut rel_span: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&k, monos) in &window {
        let w = monos.len();
        if cat.relations().is_empty() {
            to_quotient.insert(k, Matrix::identity(ring, w));
            section.insert(k, Matrix::identity(ring, w));
            labels.insert(k, monos.iter().map(|m| m.display(cat.quiver()).to_string()).collect());
            continue;
        }
        let multiples = relation_multiples(cat, x, y, k, cap)?;
        let mut span = Matrix::zero(ring, w, multiples.len());
        for (col, e) in multiples.iter().enumerate() {
            for (m, c) in e.terms() {
                let row = index[&k]
                    .get(m)
                    .copied()
                    .expect("relation multiples stay inside the window by weight additivity");
                span.set(row, col, c.clone());
            }
        }
        let (proj, sect) = quotient_maps(&span)?;
        let q = proj.rows();
        let mut lab = Vec::with_capacity(q);
        for i in 0..q {
            // label by the representing monomial when the section column is
            // a single unit-coefficient monomial, synthetically otherwise
            let mut single = None;
            let mut clean = true;
            for (row, m) in monos.iter().enumerate() {
                let c = sect.get(row, i);
                if !ring.is_zero(&c) {
                    if single.is_some() || !c.eq(&ring.one()) {
                        clean = false;
                        break;
                    }
                    single = Some(m.clone());
                }
            }
            match (clean, single) {
                (true, Some(m)) => lab.push(m.display(cat.quiver()).to_string()),
                _ => lab.push(format!("q{k}_{i}")),
            }
        }
        labels.insert(k, lab);
        to_quotient.insert(k, proj);
        section.insert(k, sect);
        rel_span.insert(k, span);
    }
    // quotient differential, with stability of the relation span verified
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut diff: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&k, lab) in &labels {
        if !lab.is_empty() {
            basis.insert(k, lab.clone());
        }
    }
    for (&k, d_full) in &full_diff {
        let proj_next = to_quotient
            .get(&(k + 1))
            .cloned()
            .unwrap_or_else(|| Matrix::identity(ring, wdim(k + 1)));
        if let Some(span) = rel_span.get(&k) {
            if !proj_next.mul(d_full).mul(span).is_zero() {
                return Err(Error::WindowNotClosed(format!(
                    "relation span at degree {k} is not stable under the differential within the window"
                )));
            }
        }
        let sect = section.get(&k).cloned().unwrap_or_else(|| Matrix::identity(ring, wdim(k)));
        let d_quot = proj_next.mul(d_full).mul(&sect);
        if !d_quot.is_zero() {
            diff.insert(k, d_quot);
        }
    }
    let complex = FiniteComplex::new(ring, basis, diff)?;
    // exactness: certified finite homs plus window stability under enlargement
    let exact = cat.finite_homs() && {
        let margin = cat
            .weights()
            .map(|w| w.values().copied().max().unwrap_or(1))
            .unwrap_or(1);
        quotient_dims(cat, x, y, cap + margin, max_arity)? == quotient_dims_from(&complex)
    };
    Ok(HomTruncation {
        source: x,
        target: y,
        cap,
        max_arity,
        exact,
        complex,
        window,
        index,
        to_quotient,
        section,
        ring,
    })
}

fn quotient_dims_from(c: &FiniteComplex) -> BTreeMap<i64, usize> {
    c.support().into_iter().map(|k| (k, c.dim(k))).collect()
}

/// Dimensions of the relation quotient per degree at a cap, without
/// building the full complex.
fn quotient_dims(
    cat: &CategoryPresentation,
    x: ObjId,
    y: ObjId,
    cap: u64,
    max_arity: usize,
) -> Result<BTreeMap<i64, usize>> {
    let ring = cat.ring();
    let monos = enumerate_window(cat, x, y, cap, max_arity);
    let mut window: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    for m in monos {
        window.entry(m.degree(cat.quiver())).or_default().push(m);
    }
    let mut out = BTreeMap::new();
    for (&k, monos) in &window {
        let dim = if cat.relations().is_empty() {
            monos.len()
        } else {
            let idx: BTreeMap<&Monomial, usize> =
                monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let multiples = relation_multiples(cat, x, y, k, cap)?;
            let mut span = Matrix::zero(ring, monos.len(), multiples.len());
            for (col, e) in multiples.iter().enumerate() {
                for (m, c) in e.terms() {
                    span.set(idx[m], col, c.clone());
                }
            }
            let r = match ring {
                RingSpec::Integers => matrix::smith_normal_form(&span)?.rank(),
                _ => matrix::rank(&span)?,
            };
            monos.len() - r
        };
        if dim > 0 {
            out.insert(k, dim);
        }
    }
    Ok(out)
}

/// Projection and section for the quotient by a column span. Over Z the
/// span must be saturated (all invariant factors 1), otherwise the
/// quotient has torsion and is rejected.
fn quotient_maps(span: &Matrix) -> Result<(Matrix, Matrix)> {
    let ring = span.ring();
    let w = span.rows();
    match ring {
        RingSpec::Integers => {
            let snf = matrix::smith_normal_form(span)?;
            let r = snf.rank();
            if snf.invariant_factors().iter().any(|f| !f.is_one()) {
                return Err(Error::Unsupported(
                    "relation quotient is not free over Z; use field coefficients".into(),
                ));
            }
            // span = u^{-1} (first r coordinates); quotient = last w - r
            // coordinates of u
            let u_inv = matrix::solve_many(&snf.u, &Matrix::identity(ring, w))?
                .expect("unimodular matrix inverts over Z");
            let mut proj = Matrix::zero(ring, w - r, w);
            for i in r..w {
                for j in 0..w {
                    proj.set(i - r, j, snf.u.get(i, j));
                }
            }
            let mut sect = Matrix::zero(ring, w, w - r);
            for i in r..w {
                for row in 0..w {
                    sect.set(row, i - r, u_inv.get(row, i));
                }
            }
            Ok((proj, sect))
        }
        _ => {
            // row-reduce the transposed span: pivot coordinates are
            // eliminated, the rest represent the quotient
            let ech = matrix::row_echelon(&span.transpose());
            let pivots: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
            let reps: Vec<usize> = (0..w).filter(|i| !pivots.contains(i)).collect();
            let rep_pos: BTreeMap<usize, usize> =
                reps.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let mut proj = Matrix::zero(ring, reps.len(), w);
            for (&rep, &pos) in &rep_pos {
                proj.set(pos, rep, ring.one());
            }
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                for (&j, c) in row {
                    if !pivots.contains(&j) {
                        proj.set(rep_pos[&j], p, ring.neg(c));
                    }
                }
            }
            let mut sect = Matrix::zero(ring, w, reps.len());
            for (&rep, &pos) in &rep_pos {
                sect.set(rep, pos, ring.one());
            }
            Ok((proj, sect))
        }
    }
}

/// All two-sided relation multiples from `x` to `y` in a fixed degree whose
/// every term fits the weight cap.
pub fn relation_multiples(
    cat: &CategoryPresentation,
    x: ObjId,
    y: ObjId,
    degree: i64,
    cap: u64,
) -> Result<Vec<Element>> {
    if cat.kind() != CategoryKind::Dg {
        return Ok(Vec::new());
    }
    let quiver = cat.quiver();
    let weights = cat.weights().unwrap_or_else(|| quiver.generators().map(|g| (g, 1)).collect());
    let mut out = Vec::new();
    for rel in cat.relations() {
        let max_term_weight = rel.terms().map(|(m, _)| m.weight(&weights)).max().unwrap_or(0);
        if max_term_weight > cap {
            continue;
        }
        let budget = cap - max_term_weight;
        // u : rel.target -> y, v : x -> rel.source, weight(u) + weight(v) <= budget
        let lefts = enumerate_window(cat, rel.target, y, budget, 1);
        for u in lefts {
            let wu = u.weight(&weights);
            let rights = enumerate_window(cat, x, rel.source, budget - wu, 1);
            let ue = Element::from_monomial(quiver, cat.ring(), u.clone(), cat.ring().one())?;
            for v in rights {
                let ve = Element::from_monomial(quiver, cat.ring(), v, cat.ring().one())?;
                let prod = crate::monomial::compose_word(
                    quiver,
                    &ue,
                    &crate::monomial::compose_word(quiver, rel, &ve)?,
                )?;
                if prod.degree == degree && !prod.is_zero() {
                    out.push(prod);
                }
            }
        }
    }
    Ok(out)
}

/// Ideal membership within a window: true iff the element reduces to zero
/// against the relation span. Sound; a `false` only means "not within this
/// window".
pub fn reduces_to_zero(
    cat: &CategoryPresentation,
    e: &Element,
    cfg: &TruncationConfig,
) -> Result<bool> {
    if e.is_zero() {
        return Ok(true);
    }
    if cat.relations().is_empty() {
        return Ok(false);
    }
    let weights = cat
        .weights()
        .unwrap_or_else(|| cat.quiver().generators().map(|g| (g, 1)).collect());
    let mut cap = cfg.max_word_length() as u64;
    let e_weight = e.terms().map(|(m, _)| m.weight(&weights)).max().unwrap_or(0);
    let rel_weight = cat
        .relations()
        .iter()
        .flat_map(|r| r.terms().map(|(m, _)| m.weight(&weights)))
        .max()
        .unwrap_or(0);
    cap = cap.max(e_weight + rel_weight);
    let multiples = relation_multiples(cat, e.source, e.target, e.degree, cap)?;
    let mut solver = ComboSolver::new(cat.ring());
    let vars: Vec<usize> = (0..multiples.len()).map(|_| solver.new_var()).collect();
    for (e_m, var) in multiples.iter().zip(&vars) {
        solver.add_column(0, e_m, *var, false);
    }
    solver.add_rhs(0, e);
    Ok(solver.solve()?.is_some())
}

/// Sparse exact solver for linear conditions phrased over elements: each
/// block pairs monomial-indexed rows, columns are variables.
pub struct ComboSolver {
    ring: RingSpec,
    rows: BTreeMap<(u32, Monomial), usize>,
    triplets: Vec<(usize, usize, Scalar)>,
    rhs: BTreeMap<usize, Scalar>,
    ncols: usize,
}

impl ComboSolver {
    pub fn new(ring: RingSpec) -> Self {
        ComboSolver { ring, rows: BTreeMap::new(), triplets: Vec::new(), rhs: BTreeMap::new(), ncols: 0 }
    }

    pub fn new_var(&mut self) -> usize {
        self.ncols += 1;
        self.ncols - 1
    }

    fn row_of(&mut self, block: u32, m: &Monomial) -> usize {
        let next = self.rows.len();
        *self.rows.entry((block, m.clone())).or_insert(next)
    }

    /// Adds `(+/-) e` as the coefficient column of `var` in a block.
    pub fn add_column(&mut self, block: u32, e: &Element, var: usize, negate: bool) {
        let terms: Vec<(Monomial, Scalar)> =
            e.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, c) in terms {
            let row = self.row_of(block, &m);
            let c = if negate { self.ring.neg(&c) } else { c };
            self.triplets.push((row, var, c));
        }
    }

    /// Sets the right-hand side of a block from an element.
    pub fn add_rhs(&mut self, block: u32, e: &Element) {
        let terms: Vec<(Monomial, Scalar)> =
            e.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, c) in terms {
            let row = self.row_of(block, &m);
            let cur = self.rhs.get(&row).cloned().unwrap_or_else(|| self.ring.zero());
            self.rhs.insert(row, self.ring.add(&cur, &c));
        }
    }

    /// Solves the accumulated system exactly; `None` when inconsistent.
    pub fn solve(self) -> Result<Option<Vec<Scalar>>> {
        let nrows = self.rows.len();
        let mut m = Matrix::zero(self.ring, nrows, self.ncols);
        for (row, col, c) in self.triplets {
            let cur = m.get(row, col);
            m.set(row, col, self.ring.add(&cur, &c));
        }
        let mut b = vec![self.ring.zero(); nrows];
        for (row, c) in self.rhs {
            b[row] = c;
        }
        matrix::solve(&m, &b)
    }
}

/// Searches for `h` supported on degree `target.degree - 1` window
/// monomials with `m1(h) = target`, exactly. The window only bounds the
/// candidate support; the equation itself is exact.
pub fn coboundary_preimage(
    cat: &CategoryPresentation,
    target: &Element,
    cap: u64,
    max_arity: usize,
) -> Result<Option<Element>> {
    let candidates = enumerate_window(cat, target.source, target.target, cap, max_arity)
        .into_iter()
        .filter(|m| m.degree(cat.quiver()) == target.degree - 1)
        .collect::<Vec<_>>();
    let mut solver = ComboSolver::new(cat.ring());
    let vars: Vec<usize> = (0..candidates.len()).map(|_| solver.new_var()).collect();
    for (m, var) in candidates.iter().zip(&vars) {
        let dm = cat.m1_monomial(m);
        solver.add_column(0, &dm, *var, false);
    }
    solver.add_rhs(0, target);
    let Some(coeffs) = solver.solve()? else {
        return Ok(None);
    };
    let mut h = Element::zero(cat.ring(), target.source, target.target, target.degree - 1);
    for (m, var) in candidates.iter().zip(&vars) {
        let coeff = &coeffs[*var];
        if !cat.ring().is_zero(coeff) {
            h.add_term(m.clone(), coeff.clone());
        }
    }
    Ok(Some(h))
}

/// Whether `[a] = [b]` in window cohomology: solves `m1(h) = a - b` over a
/// slightly enlarged candidate window.
pub fn classes_equal(
    cat: &CategoryPresentation,
    a: &Element,
    b: &Element,
    cap: u64,
    max_arity: usize,
) -> Result<bool> {
    let diff = a.sub(b)?;
    if diff.is_zero() {
        return Ok(true);
    }
    Ok(coboundary_preimage(cat, &diff, cap + 2, max_arity)?.is_some())
}

/// Decides invertibility of the class of a closed degree-0 element in H^0
/// by solving for a two-sided inverse up to homotopy:
/// `m2(u, g) - id = m1(h)` and `m2(g, v) - id = m1(t)`.
pub fn h0_invertible(
    cat: &CategoryPresentation,
    g: &Element,
    cap: u64,
    max_arity: usize,
) -> Result<bool> {
    if g.degree != 0 {
        return Ok(false);
    }
    if !cat.m1_element(g).is_zero() {
        return Ok(false);
    }
    let (a, b) = (g.source, g.target);
    let unit_a = cat.unit_element(a);
    let unit_b = cat.unit_element(b);
    for (unit, left) in [(unit_a, true), (unit_b, false)] {
        // unknown candidate inverse u and homotopy h
        let u_cands: Vec<Monomial> = enumerate_window(cat, b, a, cap, max_arity)
            .into_iter()
            .filter(|m| m.degree(cat.quiver()) == 0)
            .collect();
        let (hx, hy) = if left { (a, a) } else { (b, b) };
        let h_cands: Vec<Monomial> = enumerate_window(cat, hx, hy, cap + 2, max_arity)
            .into_iter()
            .filter(|m| m.degree(cat.quiver()) == -1)
            .collect();
        let mut solver = ComboSolver::new(cat.ring());
        let u_vars: Vec<usize> = (0..u_cands.len()).map(|_| solver.new_var()).collect();
        let h_vars: Vec<usize> = (0..h_cands.len()).map(|_| solver.new_var()).collect();
        // block 0: m2(u, g) (resp. m2(g, u)) - m1(h) = unit
        for (m, var) in u_cands.iter().zip(&u_vars) {
            let me = Element::from_monomial(cat.quiver(), cat.ring(), m.clone(), cat.ring().one())?;
            let prod = if left { cat.compose2(&me, g)? } else { cat.compose2(g, &me)? };
            solver.add_column(0, &prod, *var, false);
            // block 1: u must be closed
            let dm = cat.m1_element(&me);
            solver.add_column(1, &dm, *var, false);
        }
        for (m, var) in h_cands.iter().zip(&h_vars) {
            let dm = cat.m1_monomial(m);
            solver.add_column(0, &dm, *var, true);
        }
        solver.add_rhs(0, &unit);
        if solver.solve()?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The degree-0 cohomology category on a window: hom modules, chosen cycle
/// representatives, and the induced composition table.
#[derive(Debug)]
pub struct H0Category {
    pub objects: Vec<ObjId>,
    pub homs: BTreeMap<(ObjId, ObjId), H0Hom>,
    /// composition[(x,y,z)][(i,j)] = class coordinates of rep_j . rep_i
    /// (apply hom(x,y) rep i first), `None` when the product escapes the
    /// window.
    pub composition: BTreeMap<(ObjId, ObjId, ObjId), BTreeMap<(usize, usize), Option<Vec<Scalar>>>>,
}

#[derive(Debug)]
pub struct H0Hom {
    pub module: ModuleDescription,
    /// Representing cycles of the free summands.
    pub reps: Vec<Element>,
    /// Cycle basis in quotient coordinates; the boundary matrix; which
    /// cycle column realizes each representative.
    cycles: Matrix,
    boundaries: Matrix,
    rep_cycle_columns: Vec<usize>,
}

impl H0Hom {
    fn new(
        module: ModuleDescription,
        reps: Vec<Element>,
        cycles: Matrix,
        boundaries: Matrix,
        rep_cycle_columns: Vec<usize>,
    ) -> Self {
        H0Hom { module, reps, cycles, boundaries, rep_cycle_columns }
    }

    /// Class coordinates of a cycle given in quotient coordinates; `None`
    /// when the element does not lie in the rep/boundary span (e.g. after
    /// escaping the window).
    pub fn class_of(&self, ring: RingSpec, coords: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let nreps = self.reps.len();
        if nreps == 0 {
            // only the zero class: the element must be a boundary
            let target = Matrix::from_columns(ring, coords.len(), &[coords.to_vec()]);
            return Ok(if matrix::span_contains(&self.boundaries, &target)? {
                Some(Vec::new())
            } else {
                None
            });
        }
        // solve [reps | boundaries] (a; b) = coords, read off a
        let cols: Vec<Vec<Scalar>> = (0..nreps)
            .map(|i| self.cycles.column(self.rep_cycle_columns[i]))
            .collect();
        let reps_m = Matrix::from_columns(ring, coords.len(), &cols);
        let aug = reps_m.hcat(&self.boundaries);
        match matrix::solve(&aug, coords)? {
            Some(sol) => Ok(Some(sol[..nreps].to_vec())),
            None => Ok(None),
        }
    }
}

/// Degree-0 cohomology of every hom window, with representatives and the
/// induced composition on classes.
pub fn h0(cat: &CategoryPresentation, cfg: &TruncationConfig) -> Result<H0Category> {
    let ring = cat.ring();
    let objects: Vec<ObjId> = cat.quiver().objects().collect();
    let mut homs: BTreeMap<(ObjId, ObjId), H0Hom> = BTreeMap::new();
    for &x in &objects {
        for &y in &objects {
            let hom = hom_complex(cat, x, y, cfg)?;
            let module = hom.complex.homology(0)?;
            let cycles = matrix::kernel_basis(&hom.complex.d(0))?;
            let boundaries = hom.complex.d(-1);
            // choose representatives of the free summands
            let in_cycle_coords = matrix::solve_many(&cycles, &boundaries)?
                .expect("boundaries lie in the cycle span");
            let rep_cols = free_complement_columns(&in_cycle_coords)?;
            let mut reps = Vec::new();
            for &c in &rep_cols {
                let vec = cycles.column(c);
                let mut e = Element::zero(ring, x, y, 0);
                // expand quotient coordinates through the section
                let rep_elems: Vec<Element> =
                    (0..hom.dim(0)).map(|i| hom.rep_element(cat, 0, i)).collect();
                for (i, coeff) in vec.iter().enumerate() {
                    if !ring.is_zero(coeff) {
                        e = e.add(&rep_elems[i].scale(coeff))?;
                    }
                }
                reps.push(e);
            }
            homs.insert(
                (x, y),
                H0Hom::new(module, reps, cycles, boundaries, rep_cols),
            );
        }
    }
    // composition table on representatives
    let mut composition = BTreeMap::new();
    for &x in &objects {
        for &y in &objects {
            for &z in &objects {
                let mut table = BTreeMap::new();
                let fst = &homs[&(x, y)];
                let snd = &homs[&(y, z)];
                let out_pair = &homs[&(x, z)];
                let out_hom = hom_complex(cat, x, z, cfg)?;
                for (i, f) in fst.reps.iter().enumerate() {
                    for (j, g) in snd.reps.iter().enumerate() {
                        let prod = cat.compose2(g, f)?;
                        let class = match out_hom.express(&prod)? {
                            Some(coords) => out_pair.class_of(ring, &coords)?,
                            None => None,
                        };
                        table.insert((i, j), class);
                    }
                }
                composition.insert((x, y, z), table);
            }
        }
    }
    Ok(H0Category { objects, homs, composition })
}

/// Columns of the identity complement to a column span: coordinates not
/// hit by pivots (field) or by unit invariant factors (Z).
fn free_complement_columns(in_coords: &Matrix) -> Result<Vec<usize>> {
    let n = in_coords.rows();
    match in_coords.ring() {
        RingSpec::Integers => {
            let snf = matrix::smith_normal_form(in_coords)?;
            let r = snf.rank();
            // the free part corresponds to u^{-1} e_i for i >= r; project to
            // plain coordinates by picking those columns of u^{-1}
            let u_inv = matrix::solve_many(&snf.u, &Matrix::identity(RingSpec::Integers, n))?
                .expect("unimodular");
            // representative columns: prefer plain coordinates when u is a
            // permutation-like matrix; otherwise fall back to the u-mixed ones
            let mut cols = Vec::new();
            for i in r..n {
                // find the single nonzero coordinate if there is one
                let col = u_inv.column(i);
                let nz: Vec<usize> = col
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !RingSpec::Integers.is_zero(v))
                    .map(|(j, _)| j)
                    .collect();
                if nz.len() == 1 {
                    cols.push(nz[0]);
                } else {
                    cols.push(i);
                }
            }
            cols.sort_unstable();
            cols.dedup();
            Ok(cols)
        }
        _ => {
            let ech = matrix::row_echelon(&in_coords.transpose());
            let pivots: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
            Ok((0..n).filter(|i| !pivots.contains(i)).collect())
        }
    }
}

/// Verifies that the unit spans a differential-closed direct summand of
/// the degree-0 component: solves for a retraction functional that is 1 on
/// the unit and kills every window boundary.
pub fn split_unit_check(
    cat: &CategoryPresentation,
    x: ObjId,
    cfg: &TruncationConfig,
) -> Result<bool> {
    let hom = hom_complex(cat, x, x, cfg)?;
    let q0 = hom.dim(0);
    if q0 == 0 {
        return Ok(false);
    }
    let unit = cat.unit_element(x);
    let Some(unit_coords) = hom.express(&unit)? else {
        return Ok(false);
    };
    let boundaries = hom.complex.d(-1);
    // unknown functional p with p . boundaries = 0 and p(unit) = 1
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for j in 0..boundaries.cols() {
        rows.push(boundaries.column(j));
        rhs.push(cat.ring().zero());
    }
    rows.push(unit_coords);
    rhs.push(cat.ring().one());
    let mut m = Matrix::zero(cat.ring(), rows.len(), q0);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    Ok(matrix::solve(&m, &rhs)?.is_some())
}
