//! Finitely presented DG- and strictly unital A-infinity categories.
//!
//! A presentation is a graded quiver, a kind (DG or A-infinity), a
//! differential assignment on generators, and — in the DG case only — a
//! list of relations. The differential of an arbitrary monomial is
//! produced by Leibniz expansion (words) or by solving the Stasheff
//! identity for the `m1 . mk` term (trees).
//!
//! Sign conventions, fixed once here and used everywhere:
//!
//! * On a word `a_k * ... * a_1` (display order, first entry applied
//!   last), the differential of the i-th letter carries the sign
//!   `(-1)^(sum of degrees of the letters strictly to its left)`.
//! * On a tree `mk(t_1, ..., t_k)` the Stasheff term `(r, s, t)` with
//!   `r + s + t = k` carries the sign
//!   `(-1)^(r + s*t + s*(deg t_1 + ... + deg t_r))`.
//!
//! With these choices the two-argument case reduces to the Leibniz rule
//! `m1(m2(a,b)) = m2(m1 a, b) + (-1)^{deg a} m2(a, m1 b)`, so the DG
//! shadow of an A-infinity presentation reproduces its word differential.

use crate::hom;
use crate::monomial::{
    compose_word, graft, Element, GenId, GradedQuiver, Monomial, ObjId, Tree, TruncationConfig,
};
use crate::report::{CheckReport, ReportConfig};
use crate::ring::RingSpec;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Mutex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CategoryKind {
    Dg,
    Ainf,
}

/// A finitely presented category: quiver + kind + differential
/// assignments + relations (DG only; A-infinity presentations are free).
#[derive(Debug)]
pub struct CategoryPresentation {
    name: String,
    kind: CategoryKind,
    ring: RingSpec,
    quiver: GradedQuiver,
    diff: BTreeMap<GenId, Element>,
    relations: Vec<Element>,
    /// Certificate that every hom space is degreewise finite-dimensional,
    /// set by the builtin constructors and file loaders.
    finite_homs: bool,
    m1_cache: Mutex<BTreeMap<Monomial, Element>>,
    hom_cache: Mutex<BTreeMap<(ObjId, ObjId, u64, usize), std::sync::Arc<hom::HomTruncation>>>,
}

impl Clone for CategoryPresentation {
    fn clone(&self) -> Self {
        CategoryPresentation {
            name: self.name.clone(),
            kind: self.kind,
            ring: self.ring,
            quiver: self.quiver.clone(),
            diff: self.diff.clone(),
            relations: self.relations.clone(),
            finite_homs: self.finite_homs,
            m1_cache: Mutex::new(BTreeMap::new()),
            hom_cache: Mutex::new(BTreeMap::new()),
        }
    }
}

impl CategoryPresentation {
    pub fn new(
        name: impl Into<String>,
        kind: CategoryKind,
        ring: RingSpec,
        quiver: GradedQuiver,
        diff: BTreeMap<GenId, Element>,
        relations: Vec<Element>,
        finite_homs: bool,
    ) -> Result<Self> {
        let name = name.into();
        if kind == CategoryKind::Ainf && !relations.is_empty() {
            return Err(Error::InvalidPresentation(
                "A-infinity presentations are free: relations are not supported".into(),
            ));
        }
        let check_kind = |e: &Element| -> Result<()> {
            for (m, _) in e.terms() {
                let ok = match (kind, m) {
                    (_, Monomial::Unit(_)) => true,
                    (CategoryKind::Dg, Monomial::Word(_)) => true,
                    (CategoryKind::Ainf, Monomial::Tree(_)) => true,
                    _ => false,
                };
                if !ok {
                    return Err(Error::InvalidPresentation(format!(
                        "monomial `{}` does not match category kind",
                        m.display(&quiver)
                    )));
                }
                m.validate(&quiver)?;
            }
            Ok(())
        };
        let mut clean_diff = BTreeMap::new();
        for (&g, e) in &diff {
            if e.is_zero() {
                continue;
            }
            if e.ring != ring {
                return Err(Error::RingMismatch { expected: ring.to_string(), got: e.ring.to_string() });
            }
            check_kind(e)?;
            let data = quiver.generator(g);
            if e.source != data.source || e.target != data.target {
                return Err(Error::InvalidPresentation(format!(
                    "differential of `{}` has wrong endpoints",
                    data.name
                )));
            }
            if e.degree != data.degree + 1 {
                return Err(Error::InvalidPresentation(format!(
                    "differential of `{}` must raise degree by one (got {} from {})",
                    data.name, e.degree, data.degree
                )));
            }
            clean_diff.insert(g, e.clone());
        }
        for r in &relations {
            if r.is_zero() {
                return Err(Error::InvalidPresentation("zero relation".into()));
            }
            if r.ring != ring {
                return Err(Error::RingMismatch { expected: ring.to_string(), got: r.ring.to_string() });
            }
            check_kind(r)?;
        }
        Ok(CategoryPresentation {
            name,
            kind,
            ring,
            quiver,
            diff: clean_diff,
            relations,
            finite_homs,
            m1_cache: Mutex::new(BTreeMap::new()),
            hom_cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> CategoryKind {
        self.kind
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn quiver(&self) -> &GradedQuiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn finite_homs(&self) -> bool {
        self.finite_homs
    }

    pub fn differential_of(&self, g: GenId) -> Option<&Element> {
        self.diff.get(&g)
    }

    /// The generator as a one-term element of the right monomial flavor.
    pub fn generator_element(&self, g: GenId) -> Element {
        Element::generator(&self.quiver, self.ring, g, self.kind == CategoryKind::Ainf)
    }

    pub fn unit_element(&self, x: ObjId) -> Element {
        Element::unit(&self.quiver, self.ring, x)
    }

    /// Binary composition: word concatenation (DG) or an `m2` node (A-inf).
    pub fn compose2(&self, a: &Element, b: &Element) -> Result<Element> {
        match self.kind {
            CategoryKind::Dg => compose_word(&self.quiver, a, b),
            CategoryKind::Ainf => graft(&self.quiver, &[a.clone(), b.clone()], None),
        }
    }

    /// Per-generator weights under which the differential never increases
    /// the weighted size of a monomial; `None` if no such certificate is
    /// found. Windows cut by these weights are honest subcomplexes.
    pub fn weights(&self) -> Option<BTreeMap<GenId, u64>> {
        let mut w: BTreeMap<GenId, u64> = self.quiver.generators().map(|g| (g, 1)).collect();
        for _ in 0..64 {
            let mut changed = false;
            for (&g, e) in &self.diff {
                let need = e.terms().map(|(m, _)| m.weight(&w)).max().unwrap_or(0);
                let cur = w.get_mut(&g).expect("every generator has a weight");
                if *cur < need {
                    *cur = need;
                    changed = true;
                }
            }
            if !changed {
                return Some(w);
            }
            if w.values().any(|&x| x > 1_000_000) {
                return None;
            }
        }
        None
    }

    fn sign(&self, exponent: i64) -> crate::ring::Scalar {
        if exponent.rem_euclid(2) == 0 {
            self.ring.one()
        } else {
            self.ring.neg(&self.ring.one())
        }
    }

    /// The differential of a single monomial, exact and window-free.
    pub fn m1_monomial(&self, m: &Monomial) -> Element {
        if let Some(hit) = self.m1_cache.lock().unwrap().get(m) {
            return hit.clone();
        }
        let result = self.m1_monomial_uncached(m);
        debug_assert!(
            result.is_zero() || result.degree == m.degree(&self.quiver) + 1,
            "differential must raise degree by one"
        );
        self.m1_cache.lock().unwrap().insert(m.clone(), result.clone());
        result
    }

    fn m1_monomial_uncached(&self, m: &Monomial) -> Element {
        let quiver = &self.quiver;
        let zero = |m: &Monomial| {
            Element::zero(self.ring, m.source(quiver), m.target(quiver), m.degree(quiver) + 1)
        };
        match m {
            Monomial::Unit(_) => zero(m),
            Monomial::Word(gens) => {
                let mut acc = zero(m);
                let mut left_degree = 0i64;
                for (i, g) in gens.iter().enumerate() {
                    if let Some(dg) = self.diff.get(g) {
                        let mut term = dg.clone();
                        if i > 0 {
                            let prefix = Element::from_monomial(
                                quiver,
                                self.ring,
                                Monomial::Word(gens[..i].to_vec()),
                                self.ring.one(),
                            )
                            .expect("prefix of a valid word is valid");
                            term = compose_word(quiver, &prefix, &term)
                                .expect("differential keeps endpoints");
                        }
                        if i + 1 < gens.len() {
                            let suffix = Element::from_monomial(
                                quiver,
                                self.ring,
                                Monomial::Word(gens[i + 1..].to_vec()),
                                self.ring.one(),
                            )
                            .expect("suffix of a valid word is valid");
                            term = compose_word(quiver, &term, &suffix)
                                .expect("differential keeps endpoints");
                        }
                        acc = acc
                            .add(&term.scale(&self.sign(left_degree)))
                            .expect("Leibniz terms share endpoints and degree");
                    }
                    left_degree += quiver.generator(*g).degree;
                }
                acc
            }
            Monomial::Tree(t) => match t {
                Tree::Leaf(g) => match self.diff.get(g) {
                    Some(dg) => dg.clone(),
                    None => zero(m),
                },
                Tree::Node(children) => {
                    let child_elements: Vec<Element> = children
                        .iter()
                        .map(|c| {
                            Element::from_monomial(
                                quiver,
                                self.ring,
                                Monomial::Tree(c.clone()),
                                self.ring.one(),
                            )
                            .expect("subtree of a valid tree is valid")
                        })
                        .collect();
                    let mut acc = zero(m);
                    let n = children.len();
                    for (r, s, t) in stasheff_shapes(n) {
                        if (r, s, t) == (0, n, 0) {
                            continue;
                        }
                        let term = self.stasheff_term(&child_elements, r, s, t);
                        acc = acc.add(&term.neg()).expect("Stasheff terms are homogeneous");
                    }
                    acc
                }
            },
        }
    }

    /// One Stasheff summand on a display-ordered tuple of elements.
    fn stasheff_term(&self, tuple: &[Element], r: usize, s: usize, t: usize) -> Element {
        let quiver = &self.quiver;
        let n = tuple.len();
        debug_assert_eq!(r + s + t, n);
        let inner: Element = if s == 1 {
            self.m1_element(&tuple[r])
        } else {
            graft(quiver, &tuple[r..r + s], None).expect("composable slice")
        };
        let mut outer_args: Vec<Element> = Vec::with_capacity(r + 1 + t);
        outer_args.extend_from_slice(&tuple[..r]);
        outer_args.push(inner);
        outer_args.extend_from_slice(&tuple[r + s..]);
        let applied = if outer_args.len() == 1 {
            self.m1_element(&outer_args[0])
        } else {
            graft(quiver, &outer_args, None).expect("composable outer arguments")
        };
        let left_degree: i64 = tuple[..r].iter().map(|e| e.degree).sum();
        let exponent = r as i64 + (s * t) as i64 + s as i64 * left_degree;
        applied.scale(&self.sign(exponent))
    }

    /// Linear extension of the monomial differential.
    pub fn m1_element(&self, e: &Element) -> Element {
        let mut acc = Element::zero(self.ring, e.source, e.target, e.degree + 1);
        acc.truncated = e.truncated;
        for (m, c) in e.terms() {
            acc = acc
                .add(&self.m1_monomial(m).scale(c))
                .expect("differentials of same-degree monomials agree in degree");
        }
        acc
    }

    /// The full Stasheff sum on a composable display-ordered tuple,
    /// including the `m1 . mk` term; zero iff the identity holds.
    pub fn stasheff_defect(&self, tuple: &[Element]) -> Result<Element> {
        if tuple.is_empty() {
            return Err(Error::InvalidPresentation("empty Stasheff tuple".into()));
        }
        let n = tuple.len();
        if n == 1 {
            return Ok(self.m1_element(&self.m1_element(&tuple[0])));
        }
        let degree: i64 = tuple.iter().map(|e| e.degree).sum::<i64>() + (2 - n as i64) + 1;
        let mut acc = Element::zero(self.ring, tuple[n - 1].source, tuple[0].target, degree);
        for (r, s, t) in stasheff_shapes(n) {
            acc = acc
                .add(&self.stasheff_term(tuple, r, s, t))
                .expect("Stasheff terms are homogeneous");
        }
        Ok(acc)
    }

    /// Structure verification: `d^2 = 0` on generators and relations (DG),
    /// the Stasheff identities on all window tuples up to the arity bound
    /// (A-infinity, strict-unit laws included via unit tuples).
    pub fn check_structure(&self, cfg: &TruncationConfig) -> CheckReport {
        let rcfg = ReportConfig::new(self.ring, cfg, 0);
        let id = format!("structure/{}", self.name);
        let mut witnesses: Vec<String> = Vec::new();
        match self.kind {
            CategoryKind::Dg => {
                for (&g, e) in &self.diff {
                    let dd = self.m1_element(e);
                    let ok = if self.relations.is_empty() {
                        dd.is_zero()
                    } else {
                        hom::reduces_to_zero(self, &dd, cfg).unwrap_or(false)
                    };
                    if !ok {
                        witnesses.push(format!(
                            "d^2({}) = {} != 0",
                            self.quiver.generator(g).name,
                            dd.display(&self.quiver)
                        ));
                    }
                }
                for rel in &self.relations {
                    let dr = self.m1_element(rel);
                    let ok = dr.is_zero() || hom::reduces_to_zero(self, &dr, cfg).unwrap_or(false);
                    if !ok {
                        witnesses.push(format!(
                            "relation `{}` is not closed: d = {}",
                            rel.display(&self.quiver),
                            dr.display(&self.quiver)
                        ));
                    }
                }
            }
            CategoryKind::Ainf => {
                let cap = cfg.max_word_length() as u64;
                let tuples = self.window_tuples(cap, cfg.max_arity());
                for tuple in tuples {
                    match self.stasheff_defect(&tuple) {
                        Ok(defect) if defect.is_zero() => {}
                        Ok(defect) => {
                            let shown: Vec<String> =
                                tuple.iter().map(|e| e.display(&self.quiver).to_string()).collect();
                            witnesses.push(format!(
                                "Stasheff defect on ({}) = {}",
                                shown.join("; "),
                                defect.display(&self.quiver)
                            ));
                            if witnesses.len() >= 5 {
                                break;
                            }
                        }
                        Err(e) => {
                            witnesses.push(format!("tuple rejected: {e}"));
                            break;
                        }
                    }
                }
            }
        }
        if witnesses.is_empty() {
            CheckReport::pass(id, rcfg)
        } else {
            let mut r = CheckReport::fail(id, rcfg, witnesses.remove(0));
            for w in witnesses {
                r = r.with_witness(w);
            }
            r
        }
    }

    /// All composable display-ordered tuples of window monomials (units
    /// included) with total weight within the cap, sizes 1..=max_arity.
    fn window_tuples(&self, cap: u64, max_arity: usize) -> Vec<Vec<Element>> {
        let weights = self.weights().unwrap_or_default();
        // window monomials grouped by (source, target)
        let mut per_pair: BTreeMap<(ObjId, ObjId), Vec<(Monomial, u64)>> = BTreeMap::new();
        for x in self.quiver.objects() {
            for y in self.quiver.objects() {
                let monos = hom::enumerate_window(self, x, y, cap, max_arity);
                let entry: Vec<(Monomial, u64)> =
                    monos.into_iter().map(|m| (m.clone(), m.weight(&weights))).collect();
                if !entry.is_empty() {
                    per_pair.insert((x, y), entry);
                }
            }
        }
        let to_element = |m: &Monomial| {
            Element::from_monomial(&self.quiver, self.ring, m.clone(), self.ring.one())
                .expect("window monomials are valid")
        };
        let mut tuples = Vec::new();
        // build in application order (last display entry first)
        let mut stack: Vec<(Vec<Monomial>, ObjId, u64)> = Vec::new();
        for (&(x, y), monos) in &per_pair {
            let _ = x;
            for (m, w) in monos {
                if *w <= cap {
                    stack.push((vec![m.clone()], y, *w));
                }
            }
        }
        while let Some((chain, end, used)) = stack.pop() {
            // record the display-order tuple (reverse of application order)
            let display: Vec<Element> = chain.iter().rev().map(to_element).collect();
            tuples.push(display);
            if chain.len() >= max_arity {
                continue;
            }
            for (&(x, y), monos) in &per_pair {
                if x != end {
                    continue;
                }
                for (m, w) in monos {
                    if used + *w <= cap {
                        let mut next = chain.clone();
                        next.push(m.clone());
                        stack.push((next, y, used + *w));
                    }
                }
            }
        }
        tuples
    }
}

/// All `(r, s, t)` with `r + s + t = n`, `s >= 1`.
fn stasheff_shapes(n: usize) -> Vec<(usize, usize, usize)> {
    let mut shapes = Vec::new();
    for r in 0..n {
        for s in 1..=n - r {
            shapes.push((r, s, n - r - s));
        }
    }
    shapes
}

/// The builtin catalog of named presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinName {
    Empty,
    A,
    B,
    I,
    I0,
    I1,
    I2Dg,
    K,
    C(i64),
    P(i64),
    KAinf,
    I1Ainf,
}

impl std::fmt::Display for BuiltinName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuiltinName::Empty => write!(f, "empty"),
            BuiltinName::A => write!(f, "a"),
            BuiltinName::B => write!(f, "b"),
            BuiltinName::I => write!(f, "i"),
            BuiltinName::I0 => write!(f, "i0"),
            BuiltinName::I1 => write!(f, "i1"),
            BuiltinName::I2Dg => write!(f, "i2"),
            BuiltinName::K => write!(f, "k"),
            BuiltinName::C(n) => write!(f, "c({n})"),
            BuiltinName::P(n) => write!(f, "p({n})"),
            BuiltinName::KAinf => write!(f, "k_ainf"),
            BuiltinName::I1Ainf => write!(f, "i1_ainf"),
        }
    }
}

impl std::str::FromStr for BuiltinName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let parse_param = |body: &str| -> Result<i64> {
            body.parse::<i64>().map_err(|_| Error::UnknownBuiltin(s.clone()))
        };
        match s.as_str() {
            "empty" => Ok(BuiltinName::Empty),
            "a" => Ok(BuiltinName::A),
            "b" => Ok(BuiltinName::B),
            "i" => Ok(BuiltinName::I),
            "i0" => Ok(BuiltinName::I0),
            "i1" => Ok(BuiltinName::I1),
            "i2" | "i2_dg" => Ok(BuiltinName::I2Dg),
            "k" => Ok(BuiltinName::K),
            "k_ainf" | "kainf" => Ok(BuiltinName::KAinf),
            "i1_ainf" => Ok(BuiltinName::I1Ainf),
            other => {
                if let Some(body) = other.strip_prefix("c(").and_then(|b| b.strip_suffix(')')) {
                    Ok(BuiltinName::C(parse_param(body)?))
                } else if let Some(body) = other.strip_prefix("p(").and_then(|b| b.strip_suffix(')')) {
                    Ok(BuiltinName::P(parse_param(body)?))
                } else {
                    Err(Error::UnknownBuiltin(other.to_string()))
                }
            }
        }
    }
}

/// Constructs a builtin presentation over the given coefficient ring.
pub fn builtin(name: BuiltinName, ring: RingSpec) -> CategoryPresentation {
    let named = name.to_string();
    match name {
        BuiltinName::Empty => CategoryPresentation::new(
            named,
            CategoryKind::Dg,
            ring,
            GradedQuiver::new(),
            BTreeMap::new(),
            Vec::new(),
            true,
        )
        .expect("empty presentation"),
        BuiltinName::A => {
            let mut q = GradedQuiver::new();
            q.add_object("3").unwrap();
            CategoryPresentation::new(named, CategoryKind::Dg, ring, q, BTreeMap::new(), Vec::new(), true)
                .expect("one-object presentation")
        }
        BuiltinName::B => {
            let mut q = GradedQuiver::new();
            q.add_object("4").unwrap();
            q.add_object("5").unwrap();
            CategoryPresentation::new(named, CategoryKind::Dg, ring, q, BTreeMap::new(), Vec::new(), true)
                .expect("discrete presentation")
        }
        BuiltinName::I0 => {
            let mut q = GradedQuiver::new();
            q.add_object("1").unwrap();
            q.add_object("2").unwrap();
            CategoryPresentation::new(named, CategoryKind::Dg, ring, q, BTreeMap::new(), Vec::new(), true)
                .expect("discrete presentation")
        }
        BuiltinName::I1 => {
            let (q, _, _) = interval_stage_quiver();
            CategoryPresentation::new(named, CategoryKind::Dg, ring, q, BTreeMap::new(), Vec::new(), false)
                .expect("free presentation")
        }
        BuiltinName::I => {
            let mut q = GradedQuiver::new();
            let x1 = q.add_object("1").unwrap();
            let x2 = q.add_object("2").unwrap();
            let j01 = q.add_generator("j01", x1, x2, 0).unwrap();
            let j10 = q.add_generator("j10", x2, x1, 0).unwrap();
            // j01 . j10 = id_2 and j10 . j01 = id_1
            let e_j01 = Element::generator(&q, ring, j01, false);
            let e_j10 = Element::generator(&q, ring, j10, false);
            let rel2 = compose_word(&q, &e_j01, &e_j10)
                .unwrap()
                .sub(&Element::unit(&q, ring, x2))
                .unwrap();
            let rel1 = compose_word(&q, &e_j10, &e_j01)
                .unwrap()
                .sub(&Element::unit(&q, ring, x1))
                .unwrap();
            CategoryPresentation::new(
                named,
                CategoryKind::Dg,
                ring,
                q,
                BTreeMap::new(),
                vec![rel1, rel2],
                true,
            )
            .expect("interval presentation")
        }
        BuiltinName::I2Dg | BuiltinName::K => {
            let (mut q, f, g) = interval_stage_quiver();
            let x1 = q.object_by_name("1").unwrap();
            let x2 = q.object_by_name("2").unwrap();
            let r1 = q.add_generator("r1", x1, x1, -1).unwrap();
            let r2 = q.add_generator("r2", x2, x2, -1).unwrap();
            let ef = Element::generator(&q, ring, f, false);
            let eg = Element::generator(&q, ring, g, false);
            let mut diff = BTreeMap::new();
            // d(r1) = g*f - id_1, d(r2) = f*g - id_2
            diff.insert(
                r1,
                compose_word(&q, &eg, &ef).unwrap().sub(&Element::unit(&q, ring, x1)).unwrap(),
            );
            diff.insert(
                r2,
                compose_word(&q, &ef, &eg).unwrap().sub(&Element::unit(&q, ring, x2)).unwrap(),
            );
            if name == BuiltinName::K {
                let r12 = q.add_generator("r12", x1, x2, -2).unwrap();
                let er1 = Element::generator(&q, ring, r1, false);
                let er2 = Element::generator(&q, ring, r2, false);
                // d(r12) = r2*f - f*r1; the minus sign is forced by d^2 = 0
                let d_r12 = compose_word(&q, &er2, &ef)
                    .unwrap()
                    .sub(&compose_word(&q, &ef, &er1).unwrap())
                    .unwrap();
                diff.insert(r12, d_r12);
            }
            CategoryPresentation::new(named, CategoryKind::Dg, ring, q, diff, Vec::new(), false)
                .expect("semi-free presentation")
        }
        BuiltinName::C(n) => {
            let mut q = GradedQuiver::new();
            let x8 = q.add_object("8").unwrap();
            let x9 = q.add_object("9").unwrap();
            q.add_generator("s", x8, x9, n).unwrap();
            CategoryPresentation::new(named, CategoryKind::Dg, ring, q, BTreeMap::new(), Vec::new(), true)
                .expect("sphere-hom presentation")
        }
        BuiltinName::P(n) => {
            let mut q = GradedQuiver::new();
            let x6 = q.add_object("6").unwrap();
            let x7 = q.add_object("7").unwrap();
            let e = q.add_generator("e", x6, x7, n - 1).unwrap();
            let de = q.add_generator("de", x6, x7, n).unwrap();
            let mut diff = BTreeMap::new();
            diff.insert(e, Element::generator(&q, ring, de, false));
            CategoryPresentation::new(named, CategoryKind::Dg, ring, q, diff, Vec::new(), true)
                .expect("disk-hom presentation")
        }
        BuiltinName::I1Ainf => {
            let (q, _, _) = interval_stage_quiver();
            CategoryPresentation::new(named, CategoryKind::Ainf, ring, q, BTreeMap::new(), Vec::new(), false)
                .expect("free A-infinity presentation")
        }
        BuiltinName::KAinf => {
            let (mut q, f, g) = interval_stage_quiver();
            let x1 = q.object_by_name("1").unwrap();
            let x2 = q.object_by_name("2").unwrap();
            let r1 = q.add_generator("r1", x1, x1, -1).unwrap();
            let r2 = q.add_generator("r2", x2, x2, -1).unwrap();
            let tf = Element::generator(&q, ring, f, true);
            let tg = Element::generator(&q, ring, g, true);
            let mut diff = BTreeMap::new();
            // m1(r1) = m2(g,f) - id_1, m1(r2) = m2(f,g) - id_2
            diff.insert(
                r1,
                graft(&q, &[tg.clone(), tf.clone()], None)
                    .unwrap()
                    .sub(&Element::unit(&q, ring, x1))
                    .unwrap(),
            );
            diff.insert(
                r2,
                graft(&q, &[tf, tg], None)
                    .unwrap()
                    .sub(&Element::unit(&q, ring, x2))
                    .unwrap(),
            );
            CategoryPresentation::new(named, CategoryKind::Ainf, ring, q, diff, Vec::new(), false)
                .expect("free A-infinity presentation")
        }
    }
}

fn interval_stage_quiver() -> (GradedQuiver, GenId, GenId) {
    let mut q = GradedQuiver::new();
    let x1 = q.add_object("1").unwrap();
    let x2 = q.add_object("2").unwrap();
    let f = q.add_generator("f", x1, x2, 0).unwrap();
    let g = q.add_generator("g", x2, x1, 0).unwrap();
    (q, f, g)
}

/// Disjoint union of two presentations, renaming objects and generators of
/// the right factor on collision by appending primes. Returns the union and
/// the object/generator translation maps for the right factor.
pub fn disjoint_union(
    left: &CategoryPresentation,
    right: &CategoryPresentation,
) -> Result<(CategoryPresentation, BTreeMap<ObjId, ObjId>, BTreeMap<GenId, GenId>)> {
    if left.kind() != right.kind() {
        return Err(Error::InvalidPresentation("cannot mix DG and A-infinity factors".into()));
    }
    if left.ring() != right.ring() {
        return Err(Error::RingMismatch {
            expected: left.ring().to_string(),
            got: right.ring().to_string(),
        });
    }
    let mut quiver = left.quiver().clone();
    let mut obj_map = BTreeMap::new();
    for o in right.quiver().objects() {
        let mut name = right.quiver().object_name(o).to_string();
        while quiver.object_by_name(&name).is_some() {
            name.push('\'');
        }
        obj_map.insert(o, quiver.add_object(name)?);
    }
    let mut gen_map = BTreeMap::new();
    for g in right.quiver().generators() {
        let data = right.quiver().generator(g);
        let mut name = data.name.clone();
        while quiver.generator_by_name(&name).is_some() {
            name.push('\'');
        }
        gen_map.insert(
            g,
            quiver.add_generator(name, obj_map[&data.source], obj_map[&data.target], data.degree)?,
        );
    }
    let translate = |e: &Element| -> Element {
        let mut out = Element::zero(
            e.ring,
            obj_map[&e.source],
            obj_map[&e.target],
            e.degree,
        );
        for (m, c) in e.terms() {
            let m2 = match m {
                Monomial::Unit(x) => Monomial::Unit(obj_map[x]),
                Monomial::Word(gens) => Monomial::Word(gens.iter().map(|g| gen_map[g]).collect()),
                Monomial::Tree(t) => {
                    fn tr(t: &Tree, map: &BTreeMap<GenId, GenId>) -> Tree {
                        match t {
                            Tree::Leaf(g) => Tree::Leaf(map[g]),
                            Tree::Node(cs) => Tree::Node(cs.iter().map(|c| tr(c, map)).collect()),
                        }
                    }
                    Monomial::Tree(tr(t, &gen_map))
                }
            };
            out.add_term(m2, c.clone());
        }
        out
    };
    let mut diff: BTreeMap<GenId, Element> = left.diff.clone();
    for (g, e) in &right.diff {
        diff.insert(gen_map[g], translate(e));
    }
    let mut relations = left.relations.clone();
    relations.extend(right.relations.iter().map(translate));
    let cat = CategoryPresentation::new(
        format!("{}+{}", left.name(), right.name()),
        left.kind(),
        left.ring(),
        quiver,
        diff,
        relations,
        left.finite_homs() && right.finite_homs(),
    )?;
    Ok((cat, obj_map, gen_map))
}

/// Hom-window cache shared by the hom module.
impl CategoryPresentation {
    pub(crate) fn hom_cached(
        &self,
        x: ObjId,
        y: ObjId,
        cap: u64,
        max_arity: usize,
    ) -> Result<std::sync::Arc<hom::HomTruncation>> {
        if let Some(hit) = self.hom_cache.lock().unwrap().get(&(x, y, cap, max_arity)) {
            return Ok(hit.clone());
        }
        let built = std::sync::Arc::new(hom::build_hom(self, x, y, cap, max_arity)?);
        // idempotent insertion: a racing builder produces the same value
        let mut cache = self.hom_cache.lock().unwrap();
        Ok(cache.entry((x, y, cap, max_arity)).or_insert(built).clone())
    }
}
