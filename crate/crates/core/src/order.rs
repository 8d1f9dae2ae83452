//! Weak Bruhat order on `*`-permutations with a fixed star pattern, its
//! Tamari classes, the quotient order and brute-force lattice checks.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forest::LinearizedForest;
use crate::starseq::{ranks, BlockPattern, StarSequence, Term};

/// Default cap on `n` for star-free patterns.
pub const DEFAULT_SN_CAP: usize = 8;
/// Default cap on `n` for patterns containing stars.
pub const DEFAULT_PATTERN_CAP: usize = 6;

/// A finite poset given by its elements and cover pairs `(lower, upper)`.
/// A cover may carry a label (the transposition `(i i+1)` for weak Bruhat).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset<T> {
    elements: Vec<T>,
    covers: Vec<(usize, usize)>,
    labels: Vec<Option<usize>>,
}

/// Outcome of [`Poset::is_lattice`], with a witness pair on failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeVerdict {
    Lattice,
    NoJoin(usize, usize),
    NoMeet(usize, usize),
}

impl LatticeVerdict {
    pub fn is_lattice(self) -> bool {
        self == LatticeVerdict::Lattice
    }

    pub fn witness(self) -> Option<(usize, usize)> {
        match self {
            LatticeVerdict::Lattice => None,
            LatticeVerdict::NoJoin(a, b) | LatticeVerdict::NoMeet(a, b) => Some((a, b)),
        }
    }
}

impl<T> Poset<T> {
    /// Builds a poset from cover pairs, rejecting cycles and covers that are
    /// implied by transitivity.
    pub fn new(elements: Vec<T>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let labels = vec![None; covers.len()];
        Self::with_labels(elements, covers, labels)
    }

    pub fn with_labels(
        elements: Vec<T>,
        covers: Vec<(usize, usize)>,
        labels: Vec<Option<usize>>,
    ) -> Result<Self> {
        let p = Self::unchecked(elements, covers, labels)?;
        let reduced = p.transitive_reduction()?;
        if reduced.len() != p.covers.len() {
            return Err(Error::Internal("cover relation is not irredundant".into()));
        }
        Ok(p)
    }

    /// Builds a poset from any acyclic relation by transitive reduction.
    pub fn from_relation(elements: Vec<T>, relation: Vec<(usize, usize)>) -> Result<Self> {
        let relation: Vec<_> = relation.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let labels = vec![None; relation.len()];
        let p = Self::unchecked(elements, relation, labels)?;
        let covers: Vec<_> = p.transitive_reduction()?.into_iter().map(|e| p.covers[e]).collect();
        let labels = vec![None; covers.len()];
        Ok(Poset {
            elements: p.elements,
            covers,
            labels,
        })
    }

    fn unchecked(elements: Vec<T>, covers: Vec<(usize, usize)>, labels: Vec<Option<usize>>) -> Result<Self> {
        let n = elements.len();
        if let Some(&(a, b)) = covers.iter().find(|&&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::Internal(format!("bad cover pair ({a},{b})")));
        }
        let p = Poset {
            elements,
            covers,
            labels,
        };
        p.topological_order()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn cover_label(&self, edge: usize) -> Option<usize> {
        self.labels[edge]
    }

    fn upper_covers(&self) -> Vec<Vec<usize>> {
        let mut up = vec![Vec::new(); self.len()];
        for &(a, b) in &self.covers {
            up[a].push(b);
        }
        up
    }

    /// A linear extension (lower elements first).
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indegree = vec![0usize; self.len()];
        for &(_, b) in &self.covers {
            indegree[b] += 1;
        }
        let up = self.upper_covers();
        let mut stack: Vec<usize> = (0..self.len()).rev().filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(i) = stack.pop() {
            order.push(i);
            for &j in up[i].iter().rev() {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    stack.push(j);
                }
            }
        }
        if order.len() != self.len() {
            return Err(Error::Internal("cover relation has a cycle".into()));
        }
        Ok(order)
    }

    /// Reflexive up-sets, one bitset per element.
    pub fn up_sets(&self) -> Vec<FixedBitSet> {
        let order = self.topological_order().expect("acyclic by construction");
        let up = self.upper_covers();
        let mut sets = vec![FixedBitSet::with_capacity(self.len()); self.len()];
        for &i in order.iter().rev() {
            let mut s = FixedBitSet::with_capacity(self.len());
            s.insert(i);
            for &j in &up[i] {
                s.union_with(&sets[j]);
            }
            sets[i] = s;
        }
        sets
    }

    /// Reflexive down-sets, one bitset per element.
    pub fn down_sets(&self) -> Vec<FixedBitSet> {
        let up = self.up_sets();
        let mut down = vec![FixedBitSet::with_capacity(self.len()); self.len()];
        for (a, s) in up.iter().enumerate() {
            for b in s.ones() {
                down[b].insert(a);
            }
        }
        down
    }

    /// Indices of the edges that are covers of their own closure.
    fn transitive_reduction(&self) -> Result<Vec<usize>> {
        let up_sets = self.up_sets();
        let up = self.upper_covers();
        let mut seen = BTreeSet::new();
        Ok(self
            .covers
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| seen.insert((a, b)) && !up[a].iter().any(|&w| w != b && up_sets[w].contains(b)))
            .map(|(e, _)| e)
            .collect())
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        // BFS; for repeated queries use `up_sets`.
        let up = self.upper_covers();
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            if !seen.put(x) {
                stack.extend(up[x].iter().copied());
            }
        }
        false
    }

    /// Brute-force lattice test: every pair needs a least upper bound and a
    /// greatest lower bound.
    pub fn is_lattice(&self) -> LatticeVerdict {
        let n = self.len();
        let order = self.topological_order().expect("acyclic by construction");
        let mut rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        // bitsets indexed by rank so the first set bit is a minimal element
        let reindex = |sets: Vec<FixedBitSet>| -> Vec<FixedBitSet> {
            sets.into_iter()
                .map(|s| {
                    let mut r = FixedBitSet::with_capacity(n);
                    for i in s.ones() {
                        r.insert(rank[i]);
                    }
                    r
                })
                .collect()
        };
        let up = reindex(self.up_sets());
        let down = reindex(self.down_sets());
        for a in 0..n {
            for b in a + 1..n {
                let mut ub = up[a].clone();
                ub.intersect_with(&up[b]);
                match ub.minimum() {
                    Some(u) if ub.is_subset(&up[order[u]]) => {}
                    _ => return LatticeVerdict::NoJoin(a, b),
                }
                let mut lb = down[a].clone();
                lb.intersect_with(&down[b]);
                match lb.maximum() {
                    Some(l) if lb.is_subset(&down[order[l]]) => {}
                    _ => return LatticeVerdict::NoMeet(a, b),
                }
            }
        }
        LatticeVerdict::Lattice
    }
}

impl<T: fmt::Display> Poset<T> {
    /// `{elements, covers, classes?}` with elements rendered as text.
    pub fn to_json(&self, classes: Option<&CongruenceClassification>) -> Value {
        let mut v = json!({
            "elements": self.elements.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "covers": self.covers.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        });
        if let Some(c) = classes {
            v["classes"] = json!(c.class_of);
        }
        v
    }
}

/// Tamari classes of a weak Bruhat poset, with the interval endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClassification {
    class_of: Vec<usize>,
    bottoms: Vec<usize>,
    tops: Vec<usize>,
}

impl CongruenceClassification {
    pub fn class_count(&self) -> usize {
        self.bottoms.len()
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn bottom(&self, class: usize) -> usize {
        self.bottoms[class]
    }

    pub fn top(&self, class: usize) -> usize {
        self.tops[class]
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.class_of.len()).filter(|&e| self.class_of[e] == class).collect()
    }
}

/// A Tamari class as the interval `[bottom, top]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassInterval<T> {
    pub bottom: T,
    pub top: T,
}

impl<T: fmt::Display> fmt::Display for ClassInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} .. {}]", self.bottom, self.top)
    }
}

/// Cap applied when none is given: 8 for star-free patterns, 6 otherwise.
pub fn default_cap(pattern: &BlockPattern) -> usize {
    if pattern.slots().iter().all(|&c| c) {
        DEFAULT_SN_CAP
    } else {
        DEFAULT_PATTERN_CAP
    }
}

/// The weak Bruhat order on `S_n'` for `pattern`, using the default cap.
pub fn weak_bruhat(pattern: &BlockPattern) -> Result<Poset<StarSequence>> {
    weak_bruhat_with_cap(pattern, default_cap(pattern))
}

/// Elements are all fillings of `pattern`, indexed in lexicographic order;
/// `σ ⋖ (i i+1)∘σ` whenever `i` stands left of `i+1` in `σ`.
pub fn weak_bruhat_with_cap(pattern: &BlockPattern, cap: usize) -> Result<Poset<StarSequence>> {
    let n = pattern.n();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "n",
            value: n,
            cap,
        });
    }
    let perms: Vec<Vec<usize>> = if n == 0 {
        vec![Vec::new()]
    } else {
        (1..=n).permutations(n).collect()
    };
    let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut covers = Vec::new();
    let mut labels = Vec::new();
    for (e, perm) in perms.iter().enumerate() {
        let mut pos = vec![0; n + 1];
        for (p, &v) in perm.iter().enumerate() {
            pos[v] = p;
        }
        for i in 1..n {
            if pos[i] < pos[i + 1] {
                let mut up = perm.clone();
                up.swap(pos[i], pos[i + 1]);
                covers.push((e, index[up.as_slice()]));
                labels.push(Some(i));
            }
        }
    }
    let elements = perms
        .iter()
        .map(|p| pattern.fill(p))
        .collect::<Result<Vec<_>>>()?;
    // covers of the weak order are irredundant by length, skip re-checking
    Ok(Poset {
        elements,
        covers,
        labels,
    })
}

/// Inversion set over positions: concrete positions `p < q` form an
/// inversion when the value at `p` is larger. Left weak order is
/// containment of these sets.
fn inversion_mask(s: &StarSequence) -> u128 {
    let values: Vec<usize> = s.terms().iter().filter_map(|t| t.value()).collect();
    let mut mask = 0u128;
    for (q, &b) in values.iter().enumerate() {
        for (p, &a) in values[..q].iter().enumerate() {
            if a > b {
                mask |= 1 << (q * (q - 1) / 2 + p);
            }
        }
    }
    mask
}

fn subset(a: u128, b: u128) -> bool {
    a & !b == 0
}

/// Groups a weak Bruhat poset into Tamari classes: the connected components
/// of the cover edges `(i i+1)` whose transposition keeps the forest.
/// Verifies that every class is an interval with a 231-avoiding bottom and a
/// 132-avoiding top, and that classes coincide with forest shapes.
pub fn classify(p: &Poset<StarSequence>) -> Result<CongruenceClassification> {
    let n = p.len();
    let concrete = |s: &StarSequence| s.terms().iter().filter(|t| t.value().is_some()).count();
    let widest = p.elements.iter().map(concrete).max().unwrap_or(0);
    if widest > 16 {
        return Err(Error::CapExceeded {
            what: "concrete terms",
            value: widest,
            cap: 16,
        });
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (e, &(a, b)) in p.covers.iter().enumerate() {
        let i = p.labels[e].ok_or_else(|| Error::Internal("weak Bruhat cover without a label".into()))?;
        if p.elements[a].preserves_forest(i)? {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut id_of_root = HashMap::new();
    let class_of: Vec<usize> = (0..n)
        .map(|e| {
            let r = find(&mut parent, e);
            let next = id_of_root.len();
            *id_of_root.entry(r).or_insert(next)
        })
        .collect();
    let classes = id_of_root.len();
    let masks: Vec<u128> = p.elements.iter().map(inversion_mask).collect();
    let mut members = vec![Vec::new(); classes];
    for (e, &c) in class_of.iter().enumerate() {
        members[c].push(e);
    }
    let mut bottoms = Vec::with_capacity(classes);
    let mut tops = Vec::with_capacity(classes);
    for (c, ms) in members.iter().enumerate() {
        let bottom = *ms.iter().min_by_key(|&&e| masks[e].count_ones()).expect("non-empty class");
        let top = *ms.iter().max_by_key(|&&e| masks[e].count_ones()).expect("non-empty class");
        if !ms.iter().all(|&e| subset(masks[bottom], masks[e]) && subset(masks[e], masks[top])) {
            return Err(Error::Internal(format!("class {c} has no unique bottom and top")));
        }
        if p.elements[top].occurs_132() {
            return Err(Error::Internal(format!("top of class {c} contains 132")));
        }
        if p.elements[bottom].occurs_231() {
            return Err(Error::Internal(format!("bottom of class {c} contains 231")));
        }
        bottoms.push(bottom);
        tops.push(top);
    }
    for (x, &mask) in masks.iter().enumerate() {
        for c in 0..classes {
            if subset(masks[bottoms[c]], mask) && subset(mask, masks[tops[c]]) && class_of[x] != c {
                return Err(Error::Internal(format!(
                    "{} lies in the interval of class {c} but not in the class",
                    p.elements[x]
                )));
            }
        }
    }
    let mut shape_class = HashMap::new();
    for (e, s) in p.elements.iter().enumerate() {
        let shape = LinearizedForest::tau(s)?.shape();
        if *shape_class.entry(shape).or_insert(class_of[e]) != class_of[e] {
            return Err(Error::Internal(format!("forest shape of {s} straddles two classes")));
        }
    }
    if shape_class.len() != classes {
        return Err(Error::Internal("one class holds several forest shapes".into()));
    }
    Ok(CongruenceClassification {
        class_of,
        bottoms,
        tops,
    })
}

/// Goes up by forest-preserving transpositions until none applies; the
/// result is the 132-avoiding top of the class.
pub fn class_top(s: &StarSequence) -> Result<StarSequence> {
    climb(s, |s, i| s.is_left_of(i, i + 1))
}

/// Goes down by forest-preserving transpositions; the result is the
/// 231-avoiding bottom of the class.
pub fn class_bottom(s: &StarSequence) -> Result<StarSequence> {
    climb(s, |s, i| s.is_left_of(i + 1, i))
}

fn climb(s: &StarSequence, direction: impl Fn(&StarSequence, usize) -> bool) -> Result<StarSequence> {
    let mut cur = s.clone();
    'outer: loop {
        for i in 1..cur.n() {
            if direction(&cur, i) && cur.preserves_forest(i)? {
                cur = cur.transpose(i)?;
                continue 'outer;
            }
        }
        return Ok(cur);
    }
}

/// The quotient order on classes, transitively reduced.
pub fn quotient<T: Clone>(p: &Poset<T>, c: &CongruenceClassification) -> Result<Poset<ClassInterval<T>>> {
    let elements = (0..c.class_count())
        .map(|k| ClassInterval {
            bottom: p.elements[c.bottom(k)].clone(),
            top: p.elements[c.top(k)].clone(),
        })
        .collect();
    let relation = p
        .covers
        .iter()
        .map(|&(a, b)| (c.class_of(a), c.class_of(b)))
        .filter(|(x, y)| x != y)
        .collect();
    Poset::from_relation(elements, relation)
}

/// Checks that `S_n' / ~` is isomorphic to the product of the `S_{m_i} / ~`
/// through block-wise flattening, as ordered sets.
pub fn product_check(pattern: &BlockPattern) -> Result<bool> {
    product_check_with_cap(pattern, default_cap(pattern))
}

pub fn product_check_with_cap(pattern: &BlockPattern, cap: usize) -> Result<bool> {
    let p = weak_bruhat_with_cap(pattern, cap)?;
    let c = classify(&p)?;
    let q = quotient(&p, &c)?;
    let blocks = pattern.blocks();
    struct Factor {
        index: HashMap<StarSequence, usize>,
        classes: CongruenceClassification,
        up: Vec<FixedBitSet>,
        size: usize,
    }
    let factors = blocks
        .iter()
        .map(|b| {
            let fp = weak_bruhat_with_cap(&BlockPattern::plain(b.len()), cap)?;
            let classes = classify(&fp)?;
            let fq = quotient(&fp, &classes)?;
            let index = fp.elements.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
            Ok(Factor {
                index,
                size: classes.class_count(),
                classes,
                up: fq.up_sets(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let image = |s: &StarSequence| -> Result<Vec<usize>> {
        blocks
            .iter()
            .zip(&factors)
            .map(|(b, f)| {
                let vals: Vec<usize> = s.terms()[b.clone()].iter().filter_map(|t| t.value()).collect();
                let flat = StarSequence::permutation(&ranks(&vals)?)?;
                Ok(f.classes.class_of(f.index[&flat]))
            })
            .collect()
    };
    let mut phi: Vec<Option<Vec<usize>>> = vec![None; c.class_count()];
    for (e, s) in p.elements.iter().enumerate() {
        let img = image(s)?;
        match &phi[c.class_of(e)] {
            None => phi[c.class_of(e)] = Some(img),
            Some(prev) if *prev != img => return Ok(false),
            Some(_) => {}
        }
    }
    let phi: Vec<Vec<usize>> = phi.into_iter().map(|x| x.expect("every class is hit")).collect();
    let distinct: BTreeSet<&Vec<usize>> = phi.iter().collect();
    let product_size: usize = factors.iter().map(|f| f.size).product();
    if distinct.len() != phi.len() || phi.len() != product_size {
        return Ok(false);
    }
    let up = q.up_sets();
    for a in 0..phi.len() {
        for b in 0..phi.len() {
            let componentwise = factors
                .iter()
                .enumerate()
                .all(|(i, f)| f.up[phi[a][i]].contains(phi[b][i]));
            if up[a].contains(b) != componentwise {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Graphviz Hasse diagram, edges drawn from lower to upper element. With a
/// classification, edges inside a class are solid and the rest dashed.
pub fn hasse_dot<T: fmt::Display>(p: &Poset<T>, classes: Option<&CongruenceClassification>) -> String {
    let mut out = String::from("digraph hasse {\n");
    if !p.is_empty() {
        out.push_str("  rankdir=BT;\n");
    }
    for (i, e) in p.elements.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{e}\"];");
    }
    for &(a, b) in &p.covers {
        let style = match classes {
            Some(c) if c.class_of(a) != c.class_of(b) => "dashed",
            _ => "solid",
        };
        let _ = writeln!(out, "  n{a} -> n{b} [style={style}];");
    }
    out.push_str("}\n");
    out
}

/// Moves a permutation of `S_n` into `S_n'` by writing its values into the
/// concrete slots of `pattern`.
pub fn insert_stars(perm: &StarSequence, pattern: &BlockPattern) -> Result<StarSequence> {
    let values: Vec<usize> = perm.terms().iter().filter_map(|t| t.value()).collect();
    if perm.terms().contains(&Term::Star) {
        return Err(Error::MalformedSequence("expected a star-free permutation".into()));
    }
    pattern.fill(&values)
}
