//! Graded quivers and the monomial bases of finitely presented categories:
//! composition words in the DG case, planar rooted trees with operation
//! nodes in the A-infinity case, and formal units.
//!
//! Composition order convention: the word `g*f` and the tree `m2(g,f)`
//! both denote "apply `f` first, then `g`". Vectors of factors are stored
//! in display order, so the first entry is the last map applied.
//!
//! Strict unitality is a rewrite system applied eagerly by [`graft`]:
//! `m2(id, a) = a = m2(a, id)` and `mk(..., id, ...) = 0` for `k >= 3`.
//! Units therefore never occur inside a stored word or tree, which makes
//! monomial equality syntactic.

use crate::ring::{RingSpec, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

#[derive(Debug, Clone)]
pub struct GeneratorData {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
    pub degree: i64,
}

/// A finite graded quiver: labelled objects plus graded generator arrows.
#[derive(Debug, Clone, Default)]
pub struct GradedQuiver {
    objects: Vec<String>,
    generators: Vec<GeneratorData>,
}

fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else { return false };
    if !(first.is_ascii_alphabetic() || first == '_') {
        return false;
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
        return false;
    }
    // reserved: the unit keyword and operation-node syntax
    if name == "id" {
        return false;
    }
    if let Some(rest) = name.strip_prefix('m') {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            return false;
        }
    }
    true
}

impl GradedQuiver {
    pub fn new() -> Self {
        GradedQuiver::default()
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Result<ObjId> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace()) {
            return Err(Error::InvalidPresentation(format!("bad object name `{name}`")));
        }
        if self.objects.contains(&name) {
            return Err(Error::InvalidPresentation(format!("duplicate object `{name}`")));
        }
        self.objects.push(name);
        Ok(ObjId(self.objects.len() as u32 - 1))
    }

    pub fn add_generator(
        &mut self,
        name: impl Into<String>,
        source: ObjId,
        target: ObjId,
        degree: i64,
    ) -> Result<GenId> {
        let name = name.into();
        if !valid_generator_name(&name) {
            return Err(Error::InvalidPresentation(format!("bad generator name `{name}`")));
        }
        if self.generators.iter().any(|g| g.name == name) {
            return Err(Error::InvalidPresentation(format!("duplicate generator `{name}`")));
        }
        if source.0 as usize >= self.objects.len() || target.0 as usize >= self.objects.len() {
            return Err(Error::InvalidPresentation(format!(
                "generator `{name}` has endpoints outside the object set"
            )));
        }
        self.generators.push(GeneratorData { name, source, target, degree });
        Ok(GenId(self.generators.len() as u32 - 1))
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.generators.len() as u32).map(GenId)
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.0 as usize]
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|n| n == name).map(|i| ObjId(i as u32))
    }

    pub fn generator(&self, g: GenId) -> &GeneratorData {
        &self.generators[g.0 as usize]
    }

    pub fn generator_by_name(&self, name: &str) -> Option<GenId> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| GenId(i as u32))
    }
}

/// A planar rooted tree whose internal nodes are operations `m^k`
/// (arity = number of children, at least 2) and whose leaves are
/// generators. Children are in display order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(GenId),
    Node(Vec<Tree>),
}

impl Tree {
    pub fn leaves(&self) -> Vec<GenId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<GenId>) {
        match self {
            Tree::Leaf(g) => out.push(*g),
            Tree::Node(children) => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(children) => children.iter().map(Tree::leaf_count).sum(),
        }
    }

    /// Sum over internal nodes of `2 - arity`; the degree shift of the tree.
    pub fn node_shift(&self) -> i64 {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(children) => {
                2 - children.len() as i64 + children.iter().map(Tree::node_shift).sum::<i64>()
            }
        }
    }

    pub fn max_arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(children) => children
                .len()
                .max(children.iter().map(Tree::max_arity).max().unwrap_or(0)),
        }
    }
}

/// A basis monomial of a hom space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    /// The strict unit at an object.
    Unit(ObjId),
    /// A nonempty composable word of generators, display order (DG case).
    Word(Vec<GenId>),
    /// A planar tree with operation nodes (A-infinity case).
    Tree(Tree),
}

impl Monomial {
    pub fn generator_word(g: GenId) -> Self {
        Monomial::Word(vec![g])
    }

    pub fn generator_tree(g: GenId) -> Self {
        Monomial::Tree(Tree::Leaf(g))
    }

    pub fn source(&self, quiver: &GradedQuiver) -> ObjId {
        match self {
            Monomial::Unit(x) => *x,
            Monomial::Word(gens) => quiver.generator(*gens.last().expect("nonempty word")).source,
            Monomial::Tree(t) => {
                let leaves = t.leaves();
                quiver.generator(*leaves.last().expect("nonempty tree")).source
            }
        }
    }

    pub fn target(&self, quiver: &GradedQuiver) -> ObjId {
        match self {
            Monomial::Unit(x) => *x,
            Monomial::Word(gens) => quiver.generator(gens[0]).target,
            Monomial::Tree(t) => quiver.generator(t.leaves()[0]).target,
        }
    }

    /// Degree: leaf degrees plus `2 - k` for every `m^k` node; units are 0.
    pub fn degree(&self, quiver: &GradedQuiver) -> i64 {
        match self {
            Monomial::Unit(_) => 0,
            Monomial::Word(gens) => gens.iter().map(|g| quiver.generator(*g).degree).sum(),
            Monomial::Tree(t) => {
                let leaf_sum: i64 = t.leaves().iter().map(|g| quiver.generator(*g).degree).sum();
                leaf_sum + t.node_shift()
            }
        }
    }

    /// Number of generator leaves (0 for units).
    pub fn leaf_count(&self) -> usize {
        match self {
            Monomial::Unit(_) => 0,
            Monomial::Word(gens) => gens.len(),
            Monomial::Tree(t) => t.leaf_count(),
        }
    }

    /// Weighted size with respect to per-generator weights; the windows in
    /// the hom-complex machinery are cut by this measure.
    pub fn weight(&self, weights: &BTreeMap<GenId, u64>) -> u64 {
        let of = |g: &GenId| weights.get(g).copied().unwrap_or(1);
        match self {
            Monomial::Unit(_) => 0,
            Monomial::Word(gens) => gens.iter().map(of).sum(),
            Monomial::Tree(t) => t.leaves().iter().map(of).sum(),
        }
    }

    /// Checks the composability chain (and tree arities).
    pub fn validate(&self, quiver: &GradedQuiver) -> Result<()> {
        let check_chain = |gens: &[GenId]| -> Result<()> {
            for pair in gens.windows(2) {
                let left = quiver.generator(pair[0]);
                let right = quiver.generator(pair[1]);
                if left.source != right.target {
                    return Err(Error::NonComposable(format!(
                        "`{}` expects source {}, but `{}` has target {}",
                        left.name,
                        quiver.object_name(left.source),
                        right.name,
                        quiver.object_name(right.target)
                    )));
                }
            }
            Ok(())
        };
        match self {
            Monomial::Unit(_) => Ok(()),
            Monomial::Word(gens) => {
                if gens.is_empty() {
                    return Err(Error::InvalidPresentation("empty word".into()));
                }
                check_chain(gens)
            }
            Monomial::Tree(t) => {
                fn arities_ok(t: &Tree) -> bool {
                    match t {
                        Tree::Leaf(_) => true,
                        Tree::Node(children) => children.len() >= 2 && children.iter().all(arities_ok),
                    }
                }
                if !arities_ok(t) {
                    return Err(Error::InvalidPresentation("tree node with arity < 2".into()));
                }
                check_chain(&t.leaves())
            }
        }
    }

    pub fn display<'a>(&'a self, quiver: &'a GradedQuiver) -> MonomialDisplay<'a> {
        MonomialDisplay { monomial: self, quiver }
    }
}

pub struct MonomialDisplay<'a> {
    monomial: &'a Monomial,
    quiver: &'a GradedQuiver,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn tree(t: &Tree, quiver: &GradedQuiver, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Tree::Leaf(g) => write!(f, "{}", quiver.generator(*g).name),
                Tree::Node(children) => {
                    write!(f, "m{}(", children.len())?;
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        tree(c, quiver, f)?;
                    }
                    write!(f, ")")
                }
            }
        }
        match self.monomial {
            Monomial::Unit(x) => write!(f, "id@{}", self.quiver.object_name(*x)),
            Monomial::Word(gens) => {
                let names: Vec<&str> =
                    gens.iter().map(|g| self.quiver.generator(*g).name.as_str()).collect();
                write!(f, "{}", names.join("*"))
            }
            Monomial::Tree(t) => tree(t, self.quiver, f),
        }
    }
}

/// Truncation bookkeeping: a bound on generator leaves per monomial and on
/// the arity of operation nodes. Both are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationConfig {
    max_word_length: usize,
    max_arity: usize,
}

impl TruncationConfig {
    pub fn new(max_word_length: usize, max_arity: usize) -> Result<Self> {
        if max_word_length == 0 || max_arity == 0 {
            return Err(Error::InvalidPresentation(
                "truncation bounds must be at least 1".into(),
            ));
        }
        Ok(TruncationConfig { max_word_length, max_arity })
    }

    pub fn max_word_length(&self) -> usize {
        self.max_word_length
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig { max_word_length: 6, max_arity: 4 }
    }
}

/// A homogeneous linear combination of monomials sharing source, target
/// and degree. The `truncated` flag records that terms were dropped by a
/// truncation somewhere in the history of the value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub ring: RingSpec,
    pub source: ObjId,
    pub target: ObjId,
    pub degree: i64,
    terms: BTreeMap<Monomial, Scalar>,
    pub truncated: bool,
}

impl Element {
    pub fn zero(ring: RingSpec, source: ObjId, target: ObjId, degree: i64) -> Self {
        Element { ring, source, target, degree, terms: BTreeMap::new(), truncated: false }
    }

    pub fn from_monomial(
        quiver: &GradedQuiver,
        ring: RingSpec,
        m: Monomial,
        coeff: Scalar,
    ) -> Result<Self> {
        m.validate(quiver)?;
        let mut e = Element::zero(
            ring,
            m.source(quiver),
            m.target(quiver),
            m.degree(quiver),
        );
        e.add_term(m, coeff);
        Ok(e)
    }

    pub fn unit(quiver: &GradedQuiver, ring: RingSpec, x: ObjId) -> Self {
        Element::from_monomial(quiver, ring, Monomial::Unit(x), ring.one())
            .expect("unit monomial is always valid")
    }

    pub fn generator(quiver: &GradedQuiver, ring: RingSpec, g: GenId, as_tree: bool) -> Self {
        let m = if as_tree { Monomial::generator_tree(g) } else { Monomial::generator_word(g) };
        Element::from_monomial(quiver, ring, m, ring.one()).expect("generator monomial is valid")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// The monomials in the support, in canonical order.
    pub fn support(&self) -> Vec<&Monomial> {
        self.terms.keys().collect()
    }

    pub fn add_term(&mut self, m: Monomial, coeff: Scalar) {
        if self.ring.is_zero(&coeff) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                let next = self.ring.add(cur, &coeff);
                if self.ring.is_zero(&next) {
                    self.terms.remove(&m);
                } else {
                    *cur = next;
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
    }

    fn compatible(&self, other: &Element) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                expected: self.ring.to_string(),
                got: other.ring.to_string(),
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(());
        }
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree) {
            return Err(Error::DegreeMismatch(format!(
                "elements have different endpoints or degrees: ({:?},{:?},{}) vs ({:?},{:?},{})",
                self.source, self.target, self.degree, other.source, other.target, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.compatible(other)?;
        let mut out = if self.is_zero() && !other.is_zero() {
            Element::zero(self.ring, other.source, other.target, other.degree)
        } else {
            Element::zero(self.ring, self.source, self.target, self.degree)
        };
        out.truncated = self.truncated || other.truncated;
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = Element::zero(self.ring, self.source, self.target, self.degree);
        out.truncated = self.truncated;
        for (m, v) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(c, v));
        }
        out
    }

    /// Drops every monomial with more generator leaves than the bound and
    /// records the truncation in the provenance flag.
    pub fn truncate(&self, cfg: &TruncationConfig) -> Element {
        let mut out = Element::zero(self.ring, self.source, self.target, self.degree);
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            if m.leaf_count() <= cfg.max_word_length() {
                out.add_term(m.clone(), c.clone());
            } else {
                out.truncated = true;
            }
        }
        out
    }

    pub fn display<'a>(&'a self, quiver: &'a GradedQuiver) -> ElementDisplay<'a> {
        ElementDisplay { element: self, quiver }
    }
}

pub struct ElementDisplay<'a> {
    element: &'a Element,
    quiver: &'a GradedQuiver,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.element.is_zero() {
            return write!(f, "0");
        }
        let ring = self.element.ring;
        let one = ring.one();
        let minus_one = ring.neg(&one);
        for (i, (m, c)) in self.element.terms().enumerate() {
            let (sign, mag) = if *c == minus_one {
                ("-", None)
            } else if *c == one {
                ("+", None)
            } else {
                let formatted = ring.format(c);
                match formatted.strip_prefix('-') {
                    Some(stripped) => ("-", Some(stripped.to_string())),
                    None => ("+", Some(formatted)),
                }
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            if let Some(mag) = mag {
                write!(f, "{} ", mag)?;
            }
            write!(f, "{}", m.display(self.quiver))?;
        }
        Ok(())
    }
}

/// DG composition `a . b` (apply `b` first), extended bilinearly, with
/// strict units absorbed.
pub fn compose_word(quiver: &GradedQuiver, a: &Element, b: &Element) -> Result<Element> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch { expected: a.ring.to_string(), got: b.ring.to_string() });
    }
    let ring = a.ring;
    let mut out = Element::zero(ring, b.source, a.target, a.degree + b.degree);
    out.truncated = a.truncated || b.truncated;
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    if b.target != a.source {
        return Err(Error::NonComposable(format!(
            "cannot post-compose: left factor starts at {}, right factor ends at {}",
            quiver.object_name(a.source),
            quiver.object_name(b.target)
        )));
    }
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let coeff = ring.mul(ca, cb);
            let m = match (ma, mb) {
                (Monomial::Unit(_), m) | (m, Monomial::Unit(_)) => m.clone(),
                (Monomial::Word(x), Monomial::Word(y)) => {
                    let mut w = x.clone();
                    w.extend_from_slice(y);
                    Monomial::Word(w)
                }
                _ => {
                    return Err(Error::NonComposable(
                        "compose_word expects word monomials (DG kind)".into(),
                    ))
                }
            };
            out.add_term(m, coeff);
        }
    }
    Ok(out)
}

/// Attaches an `m^k` root to `k` composable elements, multilinearly, with
/// the strict-unit rewrites applied eagerly. `max_arity` is enforced when a
/// truncation config is in force.
pub fn graft(
    quiver: &GradedQuiver,
    children: &[Element],
    cfg: Option<&TruncationConfig>,
) -> Result<Element> {
    let k = children.len();
    if k < 2 {
        return Err(Error::InvalidPresentation("graft needs at least 2 children".into()));
    }
    if let Some(cfg) = cfg {
        if k > cfg.max_arity() {
            return Err(Error::ArityExceeded { arity: k, max: cfg.max_arity() });
        }
    }
    let ring = children[0].ring;
    for c in children {
        if c.ring != ring {
            return Err(Error::RingMismatch {
                expected: ring.to_string(),
                got: c.ring.to_string(),
            });
        }
    }
    let degree: i64 = children.iter().map(|c| c.degree).sum::<i64>() + (2 - k as i64);
    let mut out = Element::zero(
        ring,
        children[k - 1].source,
        children[0].target,
        degree,
    );
    out.truncated = children.iter().any(|c| c.truncated);
    if children.iter().any(Element::is_zero) {
        return Ok(out);
    }
    for pair in children.windows(2) {
        if pair[1].target != pair[0].source {
            return Err(Error::NonComposable(format!(
                "graft children do not compose: {} vs {}",
                quiver.object_name(pair[0].source),
                quiver.object_name(pair[1].target)
            )));
        }
    }
    // multilinear expansion over the choice of one term per child
    let mut stack: Vec<(usize, Vec<Monomial>, Scalar)> = vec![(0, Vec::new(), ring.one())];
    while let Some((i, chosen, coeff)) = stack.pop() {
        if i == k {
            if let Some(m) = graft_monomials(&chosen) {
                out.add_term(m, coeff);
            }
            continue;
        }
        for (m, c) in children[i].terms() {
            let mut next = chosen.clone();
            next.push(m.clone());
            stack.push((i + 1, next, ring.mul(&coeff, c)));
        }
    }
    Ok(out)
}

/// The strict-unit rewrite on a single tuple of monomials; `None` means the
/// term is annihilated (a unit under an operation of arity >= 3).
fn graft_monomials(children: &[Monomial]) -> Option<Monomial> {
    let as_tree = |m: &Monomial| -> Tree {
        match m {
            Monomial::Tree(t) => t.clone(),
            Monomial::Word(_) => panic!("graft applies to tree monomials, not words"),
            Monomial::Unit(_) => unreachable!("units are rewritten away before tree assembly"),
        }
    };
    if children.len() == 2 {
        match (&children[0], &children[1]) {
            (Monomial::Unit(_), m) | (m, Monomial::Unit(_)) => Some(m.clone()),
            (a, b) => Some(Monomial::Tree(Tree::Node(vec![as_tree(a), as_tree(b)]))),
        }
    } else {
        if children.iter().any(|m| matches!(m, Monomial::Unit(_))) {
            return None;
        }
        Some(Monomial::Tree(Tree::Node(children.iter().map(as_tree).collect())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn interval_quiver() -> (GradedQuiver, GenId, GenId, GenId, GenId) {
        let mut q = GradedQuiver::new();
        let x1 = q.add_object("1").unwrap();
        let x2 = q.add_object("2").unwrap();
        let f = q.add_generator("f", x1, x2, 0).unwrap();
        let g = q.add_generator("g", x2, x1, 0).unwrap();
        let r1 = q.add_generator("r1", x1, x1, -1).unwrap();
        let r2 = q.add_generator("r2", x2, x2, -1).unwrap();
        (q, f, g, r1, r2)
    }

    #[test]
    fn name_validation() {
        let mut q = GradedQuiver::new();
        let x = q.add_object("1").unwrap();
        assert!(q.add_generator("m2", x, x, 0).is_err());
        assert!(q.add_generator("id", x, x, 0).is_err());
        assert!(q.add_generator("2fast", x, x, 0).is_err());
        assert!(q.add_generator("f'", x, x, 0).is_ok());
    }

    #[test]
    fn word_composition_and_units() {
        let (q, f, g, ..) = interval_quiver();
        let ring = RingSpec::Integers;
        let ef = Element::generator(&q, ring, f, false);
        let eg = Element::generator(&q, ring, g, false);
        let gf = compose_word(&q, &eg, &ef).unwrap();
        assert_eq!(gf.support(), vec![&Monomial::Word(vec![g, f])]);
        assert_eq!(gf.degree, 0);
        // unit absorption
        let u = Element::unit(&q, ring, q.object_by_name("1").unwrap());
        assert_eq!(compose_word(&q, &gf, &u).unwrap(), gf);
        assert_eq!(compose_word(&q, &u, &gf).unwrap(), gf);
        // non-composable endpoints rejected
        assert!(compose_word(&q, &ef, &eg.neg()).is_ok());
        assert!(compose_word(&q, &ef, &ef).is_err());
        // word concatenation is associative
        let fg = compose_word(&q, &ef, &eg).unwrap();
        let left = compose_word(&q, &compose_word(&q, &ef, &gf).unwrap(), &eg).unwrap();
        let right = compose_word(&q, &ef, &compose_word(&q, &gf, &eg).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(fg.degree, 0);
    }

    #[test]
    fn graft_unit_laws() {
        let (q, f, g, ..) = interval_quiver();
        let ring = RingSpec::Integers;
        let tf = Element::generator(&q, ring, f, true);
        let tg = Element::generator(&q, ring, g, true);
        let u1 = Element::unit(&q, ring, q.object_by_name("1").unwrap());
        let u2 = Element::unit(&q, ring, q.object_by_name("2").unwrap());
        // m2(id, a) = a and m2(a, id) = a
        assert_eq!(graft(&q, &[u2.clone(), tf.clone()], None).unwrap(), tf);
        assert_eq!(graft(&q, &[tf.clone(), u1.clone()], None).unwrap(), tf);
        // m3 with a unit anywhere vanishes
        let m3 = graft(&q, &[tf.clone(), u1.clone(), graft(&q, &[tg.clone(), tf.clone()], None).unwrap()], None).unwrap();
        assert!(m3.is_zero());
        // the two associations are distinct basis trees
        let gf = graft(&q, &[tg.clone(), tf.clone()], None).unwrap();
        let fg = graft(&q, &[tf.clone(), tg.clone()], None).unwrap();
        let left_comb = graft(&q, &[fg.clone(), tf.clone()], None).unwrap();
        let right_comb = graft(&q, &[tf.clone(), gf.clone()], None).unwrap();
        assert_ne!(left_comb, right_comb);
        assert_eq!(left_comb.degree, 0);
        // degree of m3 over degree-0 leaves is -1
        let m3 = graft(&q, &[tf.clone(), tg.clone(), tf.clone()], None).unwrap();
        assert_eq!(m3.degree, -1);
    }

    #[test]
    fn graft_respects_arity_bound() {
        let (q, f, g, ..) = interval_quiver();
        let ring = RingSpec::Integers;
        let tf = Element::generator(&q, ring, f, true);
        let tg = Element::generator(&q, ring, g, true);
        let cfg = TruncationConfig::new(6, 2).unwrap();
        let err = graft(&q, &[tf.clone(), tg, tf], Some(&cfg));
        assert!(matches!(err, Err(Error::ArityExceeded { arity: 3, max: 2 })));
    }

    #[test]
    fn graft_is_multilinear() {
        let (q, f, g, r1, _) = interval_quiver();
        let ring = RingSpec::Rationals;
        let tf = Element::generator(&q, ring, f, true);
        let tg = Element::generator(&q, ring, g, true);
        let tr = Element::generator(&q, ring, r1, true);
        // elements of mixed degree are rejected outright
        let u1 = Element::unit(&q, ring, q.object_by_name("1").unwrap());
        assert!(tr.add(&u1).is_err());
        // graft(k, [a + b, c]) = graft(k, [a, c]) + graft(k, [b, c])
        let gf = graft(&q, &[tg.clone(), tf.clone()], None).unwrap();
        let sum = gf.add(&u1.scale(&ring.from_i64(3))).unwrap();
        let lhs = graft(&q, &[tf.clone(), sum], None).unwrap();
        let rhs = graft(&q, &[tf.clone(), gf.clone()], None)
            .unwrap()
            .add(&tf.scale(&ring.from_i64(3)))
            .unwrap();
        assert_eq!(lhs, rhs);
        // and commutes with scalars
        let a = graft(&q, &[tf.clone(), gf.clone()], None).unwrap();
        let b = graft(&q, &[tf.clone(), gf.scale(&ring.from_i64(2))], None).unwrap();
        assert_eq!(b, a.scale(&ring.from_i64(2)));
    }

    #[test]
    fn truncate_is_idempotent_and_flags() {
        let (q, f, g, ..) = interval_quiver();
        let ring = RingSpec::Integers;
        let ef = Element::generator(&q, ring, f, false);
        let eg = Element::generator(&q, ring, g, false);
        let mut w = ef.clone();
        for _ in 0..3 {
            w = compose_word(&q, &w, &compose_word(&q, &eg, &ef).unwrap()).unwrap();
        }
        // w is a single word of length 7
        assert_eq!(w.support()[0].leaf_count(), 7);
        let cfg = TruncationConfig::new(6, 4).unwrap();
        let t = w.truncate(&cfg);
        assert!(t.is_zero());
        assert!(t.truncated);
        assert_eq!(t.truncate(&cfg), t);
        let short = ef.truncate(&cfg);
        assert_eq!(short, ef);
        assert!(!short.truncated);
    }

    /// Raw trees may still contain unit leaves; used to exercise the
    /// unit-rewrite system in arbitrary order.
    #[derive(Debug, Clone)]
    enum RawTree {
        Leaf(GenId),
        Unit(ObjId),
        Node(Vec<RawTree>),
    }

    fn rewrite_once(t: &RawTree, rng: &mut impl Rng) -> Option<Option<RawTree>> {
        // returns Some(result) if a redex was rewritten; result None = term killed
        match t {
            RawTree::Node(children) => {
                let mut order: Vec<usize> = (0..children.len()).collect();
                order.shuffle(rng);
                // maybe rewrite this node first, maybe recurse first
                let here_first = rng.gen_bool(0.5);
                let rewrite_here = |children: &Vec<RawTree>| -> Option<Option<RawTree>> {
                    let unit_pos = children.iter().position(|c| matches!(c, RawTree::Unit(_)))?;
                    if children.len() == 2 {
                        Some(Some(children[1 - unit_pos].clone()))
                    } else {
                        Some(None)
                    }
                };
                if here_first {
                    if let Some(res) = rewrite_here(children) {
                        return Some(res);
                    }
                }
                for &i in &order {
                    if let Some(res) = rewrite_once(&children[i], rng) {
                        let mut next = children.clone();
                        match res {
                            Some(sub) => next[i] = sub,
                            None => return Some(None),
                        }
                        return Some(Some(RawTree::Node(next)));
                    }
                }
                if !here_first {
                    if let Some(res) = rewrite_here(children) {
                        return Some(res);
                    }
                }
                None
            }
            _ => None,
        }
    }

    fn normalize_random(mut t: RawTree, rng: &mut impl Rng) -> Option<RawTree> {
        loop {
            match rewrite_once(&t, rng) {
                Some(Some(next)) => t = next,
                Some(None) => return None,
                None => return Some(t),
            }
        }
    }

    fn normalize_deterministic(t: &RawTree) -> Option<RawTree> {
        match t {
            RawTree::Node(children) => {
                let mut out = Vec::new();
                for c in children {
                    out.push(normalize_deterministic(c)?);
                }
                let unit_positions: Vec<usize> = out
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| matches!(c, RawTree::Unit(_)))
                    .map(|(i, _)| i)
                    .collect();
                if out.len() == 2 {
                    match unit_positions.len() {
                        0 => Some(RawTree::Node(out)),
                        1 => Some(out[1 - unit_positions[0]].clone()),
                        _ => Some(out[0].clone()),
                    }
                } else if unit_positions.is_empty() {
                    Some(RawTree::Node(out))
                } else {
                    None
                }
            }
            other => Some(other.clone()),
        }
    }

    fn tree_eq(a: &RawTree, b: &RawTree) -> bool {
        match (a, b) {
            (RawTree::Leaf(x), RawTree::Leaf(y)) => x == y,
            (RawTree::Unit(x), RawTree::Unit(y)) => x == y,
            (RawTree::Node(xs), RawTree::Node(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| tree_eq(x, y))
            }
            _ => false,
        }
    }

    fn random_raw(rng: &mut impl Rng, budget: usize) -> (RawTree, usize) {
        if budget <= 1 || rng.gen_bool(0.4) {
            if rng.gen_bool(0.3) {
                (RawTree::Unit(ObjId(0)), 1)
            } else {
                (RawTree::Leaf(GenId(rng.gen_range(0..3))), 1)
            }
        } else {
            let arity = rng.gen_range(2..=3.min(budget));
            let mut used = 0;
            let mut children = Vec::new();
            for i in 0..arity {
                let remaining = budget - used - (arity - i - 1);
                let (c, u) = random_raw(rng, remaining.max(1));
                used += u;
                children.push(c);
            }
            (RawTree::Node(children), used)
        }
    }

    #[test]
    fn unit_rewrite_system_is_confluent() {
        // random rewrite orders agree with the deterministic normal form
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let (raw, _) = random_raw(&mut rng, 8);
            let det = normalize_deterministic(&raw);
            let rnd = normalize_random(raw.clone(), &mut rng);
            match (&det, &rnd) {
                (None, None) => {}
                (Some(a), Some(b)) => assert!(tree_eq(a, b), "divergent normal forms"),
                _ => panic!("one order killed the term, the other did not"),
            }
        }
    }
}
