//! Linearized labeled `k`-ary forests and their shapes.
//!
//! A forest is an ordered list of trees followed by an implicit infinite
//! tail of singleton trees. Leaves are numbered `0, 1, 2, ...` from left to
//! right across the whole forest; root labels are never stored, they follow
//! from the position of each tree in the list.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde_json::{json, Value};

use crate::error::{check_arity, Error, Result};
use crate::starseq::{StarSequence, Term};
use crate::xmonoid::XWord;

/// A tree node. `L` is the caret label: `usize` for linearized forests,
/// `()` for shapes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node<L> {
    Leaf,
    Caret(L, Vec<Node<L>>),
}

impl<L> Node<L> {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Caret(_, cs) => cs.iter().map(Node::leaf_count).sum(),
        }
    }

    pub fn caret_count(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Caret(_, cs) => 1 + cs.iter().map(Node::caret_count).sum::<usize>(),
        }
    }

    pub fn map_labels<M>(&self, f: &mut impl FnMut(&L) -> M) -> Node<M> {
        match self {
            Node::Leaf => Node::Leaf,
            Node::Caret(l, cs) => {
                let label = f(l);
                Node::Caret(label, cs.iter().map(|c| c.map_labels(f)).collect())
            }
        }
    }

    /// Caret labels in preorder.
    pub fn preorder_labels<'a>(&'a self, out: &mut Vec<&'a L>) {
        if let Node::Caret(l, cs) = self {
            out.push(l);
            for c in cs {
                c.preorder_labels(out);
            }
        }
    }

    fn check_arity(&self, k: usize) -> Result<()> {
        match self {
            Node::Leaf => Ok(()),
            Node::Caret(_, cs) if cs.len() != k => Err(Error::MalformedForest(format!(
                "caret with {} children in a {k}-ary forest",
                cs.len()
            ))),
            Node::Caret(_, cs) => cs.iter().try_for_each(|c| c.check_arity(k)),
        }
    }

    /// Replaces the leaves, left to right, by nodes drawn from `roots`.
    fn graft(&self, roots: &mut impl Iterator<Item = Node<L>>, relabel: &impl Fn(&L) -> L) -> Node<L> {
        match self {
            Node::Leaf => roots.next().unwrap_or(Node::Leaf),
            Node::Caret(l, cs) => Node::Caret(
                relabel(l),
                cs.iter().map(|c| c.graft(roots, relabel)).collect(),
            ),
        }
    }
}

/// Caret labels that can be shifted when stacking forests.
pub trait CaretLabel: Clone + Ord {
    fn shifted(&self, by: usize) -> Self;
}

impl CaretLabel for usize {
    fn shifted(&self, by: usize) -> Self {
        self + by
    }
}

impl CaretLabel for () {
    fn shifted(&self, _: usize) -> Self {}
}

/// An ordered `k`-ary forest; trailing singleton trees are implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest<L> {
    arity: usize,
    trees: Vec<Node<L>>,
}

/// A forest with carets labeled `1..n`, decreasing along root-to-leaf paths.
pub type LinearizedForest = Forest<usize>;

/// A forest with caret labels erased.
pub type ForestShape = Forest<()>;

impl<L: CaretLabel> Forest<L> {
    fn from_trees_unchecked(arity: usize, mut trees: Vec<Node<L>>) -> Self {
        while trees.last().is_some_and(Node::is_leaf) {
            trees.pop();
        }
        Forest { arity, trees }
    }

    pub fn empty(k: usize) -> Result<Self> {
        check_arity(k)?;
        Ok(Forest {
            arity: k,
            trees: Vec::new(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The explicit trees, up to the last non-trivial one.
    pub fn trees(&self) -> &[Node<L>] {
        &self.trees
    }

    pub fn caret_count(&self) -> usize {
        self.trees.iter().map(Node::caret_count).sum()
    }

    /// The only tree of a single-tree forest (a leaf for the empty forest).
    pub fn single_tree(&self) -> Result<Node<L>> {
        match self.trees.len() {
            0 => Ok(Node::Leaf),
            1 => Ok(self.trees[0].clone()),
            m => Err(Error::NotSingleTree(m)),
        }
    }

    /// Stacks `g` on top of `self`: root `i` of `self` becomes leaf `i` of
    /// `g`, and the carets of `g` are relabeled past those of `self`.
    pub fn stack(&self, g: &Forest<L>) -> Result<Forest<L>> {
        if self.arity != g.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: g.arity,
            });
        }
        let m = self.caret_count();
        let mut roots = self.trees.iter().cloned().chain(std::iter::repeat(Node::Leaf));
        let relabel = |l: &L| l.shifted(m);
        let mut trees: Vec<Node<L>> = g.trees.iter().map(|t| t.graft(&mut roots, &relabel)).collect();
        let consumed: usize = g.trees.iter().map(Node::leaf_count).sum();
        trees.extend(self.trees.iter().skip(consumed).cloned());
        Ok(Self::from_trees_unchecked(self.arity, trees))
    }

    pub fn shape(&self) -> ForestShape {
        Forest {
            arity: self.arity,
            trees: self.trees.iter().map(|t| t.map_labels(&mut |_| ())).collect(),
        }
    }

    /// Nested-array JSON for the trees; leaves are `null`.
    pub fn trees_json(&self) -> Value {
        fn node<L>(n: &Node<L>) -> Value {
            match n {
                Node::Leaf => Value::Null,
                Node::Caret(_, cs) => Value::Array(cs.iter().map(node).collect()),
            }
        }
        Value::Array(self.trees.iter().map(node).collect())
    }

    fn parse_trees_json(k: usize, value: &Value) -> Result<Vec<Node<()>>> {
        fn node(v: &Value) -> Result<Node<()>> {
            match v {
                Value::Null => Ok(Node::Leaf),
                Value::Array(cs) => Ok(Node::Caret((), cs.iter().map(node).collect::<Result<_>>()?)),
                other => Err(Error::Parse(format!("unexpected tree element {other}"))),
            }
        }
        let trees = value
            .as_array()
            .ok_or_else(|| Error::Parse("`trees` must be an array".into()))?
            .iter()
            .map(node)
            .collect::<Result<Vec<_>>>()?;
        for t in &trees {
            t.check_arity(k)?;
        }
        Ok(trees)
    }
}

impl ForestShape {
    pub fn new(k: usize, trees: Vec<Node<()>>) -> Result<Self> {
        check_arity(k)?;
        for t in &trees {
            t.check_arity(k)?;
        }
        Ok(Self::from_trees_unchecked(k, trees))
    }

    /// All labelings of the carets by `1..n` that decrease along every
    /// root-to-leaf path, in lexicographic order of their sequences.
    pub fn linearizations(&self) -> Vec<LinearizedForest> {
        // arena of carets in preorder with child-caret lists
        let mut children: Vec<Vec<usize>> = Vec::new();
        fn index(node: &Node<()>, children: &mut Vec<Vec<usize>>) -> Option<usize> {
            match node {
                Node::Leaf => None,
                Node::Caret(_, cs) => {
                    let me = children.len();
                    children.push(Vec::new());
                    let kids: Vec<usize> = cs.iter().filter_map(|c| index(c, children)).collect();
                    children[me] = kids;
                    Some(me)
                }
            }
        }
        for t in &self.trees {
            index(t, &mut children);
        }
        let n = children.len();
        let mut pending = vec![0usize; n];
        let mut parent = vec![None; n];
        for (p, kids) in children.iter().enumerate() {
            pending[p] = kids.len();
            for &c in kids {
                parent[c] = Some(p);
            }
        }
        let mut labels = vec![0usize; n];
        let mut out = Vec::new();
        fn backtrack(
            next: usize,
            n: usize,
            pending: &mut [usize],
            parent: &[Option<usize>],
            labels: &mut [usize],
            shape: &ForestShape,
            out: &mut Vec<LinearizedForest>,
        ) {
            if next > n {
                let mut it = labels.iter().copied();
                let trees = shape
                    .trees
                    .iter()
                    .map(|t| t.map_labels(&mut |_| it.next().expect("one label per caret")))
                    .collect();
                out.push(Forest {
                    arity: shape.arity,
                    trees,
                });
                return;
            }
            for c in 0..n {
                if labels[c] == 0 && pending[c] == 0 {
                    labels[c] = next;
                    if let Some(p) = parent[c] {
                        pending[p] -= 1;
                    }
                    backtrack(next + 1, n, pending, parent, labels, shape, out);
                    if let Some(p) = parent[c] {
                        pending[p] += 1;
                    }
                    labels[c] = 0;
                }
            }
        }
        backtrack(1, n, &mut pending, &parent, &mut labels, self, &mut out);
        out.sort_by_cached_key(|f| f.pi());
        out
    }

    /// The linearization whose word is in top normal form; a canonical
    /// representative of the class without enumerating all linearizations.
    pub fn top_linearization(&self) -> Result<LinearizedForest> {
        fn postorder(node: &Node<()>, next: &mut usize) -> Node<usize> {
            match node {
                Node::Leaf => Node::Leaf,
                Node::Caret(_, cs) => {
                    let children = cs.iter().map(|c| postorder(c, next)).collect();
                    *next += 1;
                    Node::Caret(*next, children)
                }
            }
        }
        let mut next = 0;
        let trees = self.trees.iter().map(|t| postorder(t, &mut next)).collect();
        let any = LinearizedForest::new(self.arity, trees)?;
        LinearizedForest::forest_of_word(&any.word_of().top_normal_form(self.arity)?, self.arity)
    }

    pub fn to_json(&self) -> Value {
        json!({ "arity": self.arity, "trees": self.trees_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let k = json_arity(value)?;
        let trees = Self::parse_trees_json(k, &value["trees"])?;
        Self::new(k, trees)
    }
}

fn json_arity(value: &Value) -> Result<usize> {
    let k = value
        .get("arity")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer field `arity`".into()))? as usize;
    check_arity(k)?;
    Ok(k)
}

impl LinearizedForest {
    /// Validates `k`-arity, that labels are a bijection onto `1..n` and that
    /// they decrease from every root towards the leaves.
    pub fn new(k: usize, trees: Vec<Node<usize>>) -> Result<Self> {
        check_arity(k)?;
        let mut labels = Vec::new();
        for t in &trees {
            t.check_arity(k)?;
            t.preorder_labels(&mut labels);
        }
        let mut sorted: Vec<usize> = labels.iter().map(|&&l| l).collect();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &l)| l != i + 1) {
            return Err(Error::MalformedForest(
                "caret labels must be a bijection onto 1..n".into(),
            ));
        }
        fn decreasing(node: &Node<usize>, bound: usize) -> bool {
            match node {
                Node::Leaf => true,
                Node::Caret(l, cs) => *l < bound && cs.iter().all(|c| decreasing(c, *l)),
            }
        }
        if !trees.iter().all(|t| decreasing(t, usize::MAX)) {
            return Err(Error::MalformedForest(
                "caret labels must decrease along root-to-leaf paths".into(),
            ));
        }
        Ok(Self::from_trees_unchecked(k, trees))
    }

    /// Draws the forest of `s`: caret `j` covers the gaps at the positions
    /// of `j`. Gaps left uncovered are the stars.
    pub fn tau(s: &StarSequence) -> Result<Self> {
        let k = s.arity();
        // current roots as (first leaf, last leaf, subtree)
        let mut roots: Vec<(usize, usize, Node<usize>)> = Vec::new();
        let ensure = |roots: &mut Vec<(usize, usize, Node<usize>)>, leaf: usize| {
            while roots.last().is_none_or(|r| r.1 < leaf) {
                let next = roots.last().map_or(0, |r| r.1 + 1);
                roots.push((next, next, Node::Leaf));
            }
        };
        for (j, locations) in s.all_positions().into_iter().enumerate() {
            // zero-based position p is the gap between leaves p and p + 1
            let last = *locations.last().expect("every value occurs");
            ensure(&mut roots, last + 1);
            let r = roots
                .iter()
                .position(|root| root.0 <= locations[0] && locations[0] <= root.1)
                .expect("roots cover every leaf up to the last location");
            if r + k > roots.len()
                || locations
                    .iter()
                    .enumerate()
                    .any(|(t, &p)| roots[r + t + 1].0 != p + 1)
            {
                return Err(Error::MalformedSequence(format!(
                    "locations of {} cannot be covered by one caret",
                    j + 1
                )));
            }
            let merged: Vec<_> = roots.drain(r..r + k).collect();
            let first = merged[0].0;
            let last_leaf = merged[k - 1].1;
            let node = Node::Caret(j + 1, merged.into_iter().map(|m| m.2).collect());
            roots.insert(r, (first, last_leaf, node));
        }
        Ok(Self::from_trees_unchecked(
            k,
            roots.into_iter().map(|r| r.2).collect(),
        ))
    }

    /// Reads off the sequence: position `p` holds the label of the caret
    /// covering gap `(p - 1, p)`, or a star if the gap is uncovered.
    pub fn pi(&self) -> StarSequence {
        fn walk(node: &Node<usize>, next_leaf: &mut usize, gaps: &mut BTreeMap<usize, usize>) {
            match node {
                Node::Leaf => *next_leaf += 1,
                Node::Caret(l, cs) => {
                    for (t, c) in cs.iter().enumerate() {
                        if t > 0 {
                            gaps.insert(*next_leaf, *l);
                        }
                        walk(c, next_leaf, gaps);
                    }
                }
            }
        }
        let mut gaps = BTreeMap::new();
        let mut next_leaf = 0;
        for t in &self.trees {
            walk(t, &mut next_leaf, &mut gaps);
        }
        let len = gaps.keys().next_back().copied().unwrap_or(0);
        let terms = (1..=len)
            .map(|g| gaps.get(&g).map_or(Term::Star, |&l| Term::Value(l)))
            .collect();
        StarSequence::new(self.arity, terms).expect("a linearized forest yields a valid sequence")
    }

    /// Replays the carets in label order and records, for each, the root
    /// index of its leftmost child at the moment it is added.
    pub fn word_of(&self) -> XWord {
        // per caret: first leaf of each child, indexed by label
        let mut child_firsts: Vec<Vec<usize>> = vec![Vec::new(); self.caret_count()];
        fn walk(node: &Node<usize>, next_leaf: &mut usize, out: &mut Vec<Vec<usize>>) -> usize {
            match node {
                Node::Leaf => {
                    *next_leaf += 1;
                    *next_leaf - 1
                }
                Node::Caret(l, cs) => {
                    let firsts: Vec<usize> = cs.iter().map(|c| walk(c, next_leaf, out)).collect();
                    let first = firsts[0];
                    out[l - 1] = firsts;
                    first
                }
            }
        }
        let mut next_leaf = 0;
        for t in &self.trees {
            walk(t, &mut next_leaf, &mut child_firsts);
        }
        // current roots, by first leaf
        let mut roots: Vec<usize> = (0..next_leaf.max(1)).collect();
        let indices = child_firsts
            .iter()
            .map(|firsts| {
                let r = roots
                    .iter()
                    .position(|&f| f == firsts[0])
                    .expect("leftmost child is a current root");
                debug_assert!(firsts.iter().enumerate().all(|(t, &f)| roots[r + t] == f));
                roots.drain(r + 1..r + self.arity);
                r
            })
            .collect();
        XWord::new(indices)
    }

    /// Builds the forest of a word: letter `j` with index `i` adds a caret
    /// labeled `j` joining roots `i..i+k-1`.
    pub fn forest_of_word(word: &XWord, k: usize) -> Result<Self> {
        check_arity(k)?;
        let mut roots: Vec<Node<usize>> = Vec::new();
        for (j, &i) in word.indices().iter().enumerate() {
            if roots.len() < i + k {
                roots.resize(i + k, Node::Leaf);
            }
            let children: Vec<_> = roots.drain(i..i + k).collect();
            roots.insert(i, Node::Caret(j + 1, children));
        }
        Ok(Self::from_trees_unchecked(k, roots))
    }

    /// JSON: `{arity, trees, labels}` with `labels` in preorder.
    pub fn to_json(&self) -> Value {
        let mut labels = Vec::new();
        for t in &self.trees {
            t.preorder_labels(&mut labels);
        }
        json!({ "arity": self.arity, "trees": self.trees_json(), "labels": labels })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let k = json_arity(value)?;
        let trees = Self::parse_trees_json(k, &value["trees"])?;
        let labels = value
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `labels`".into()))?
            .iter()
            .map(|l| {
                l.as_u64()
                    .map(|l| l as usize)
                    .ok_or_else(|| Error::Parse(format!("bad caret label {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let carets: usize = trees.iter().map(Node::caret_count).sum();
        if carets != labels.len() {
            return Err(Error::Parse(format!(
                "{} labels for {carets} carets",
                labels.len()
            )));
        }
        let mut it = labels.into_iter();
        let trees = trees
            .iter()
            .map(|t| t.map_labels(&mut |_| it.next().expect("count checked")))
            .collect();
        Self::new(k, trees)
    }

    /// Graphviz rendering: leaves as boxes labeled by leaf index, carets as
    /// circles labeled by their linearization label.
    pub fn to_dot(&self) -> String {
        fn walk(node: &Node<usize>, ids: &mut usize, next_leaf: &mut usize, out: &mut String) -> usize {
            let me = *ids;
            *ids += 1;
            match node {
                Node::Leaf => {
                    let _ = writeln!(out, "  n{me} [shape=box, label=\"{}\"];", *next_leaf);
                    *next_leaf += 1;
                }
                Node::Caret(l, cs) => {
                    let _ = writeln!(out, "  n{me} [shape=circle, label=\"{l}\"];");
                    for c in cs {
                        let child = walk(c, ids, next_leaf, out);
                        let _ = writeln!(out, "  n{me} -> n{child};");
                    }
                }
            }
            me
        }
        let mut out = String::from("digraph forest {\n");
        let (mut ids, mut next_leaf) = (0, 0);
        for t in &self.trees {
            walk(t, &mut ids, &mut next_leaf, &mut out);
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for LinearizedForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl fmt::Display for ForestShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// All single-tree `k`-ary shapes with `n` carets.
pub fn single_tree_shapes(k: usize, n: usize) -> Result<Vec<ForestShape>> {
    check_arity(k)?;
    let mut memo: Vec<Vec<Node<()>>> = vec![vec![Node::Leaf]];
    for m in 1..=n {
        let mut here = Vec::new();
        // distribute m - 1 carets over k ordered children
        fn fill(
            remaining: usize,
            slots: usize,
            memo: &[Vec<Node<()>>],
            prefix: &mut Vec<Node<()>>,
            out: &mut Vec<Node<()>>,
        ) {
            if slots == 1 {
                for t in &memo[remaining] {
                    prefix.push(t.clone());
                    out.push(Node::Caret((), prefix.clone()));
                    prefix.pop();
                }
                return;
            }
            for take in 0..=remaining {
                for t in &memo[take] {
                    prefix.push(t.clone());
                    fill(remaining - take, slots - 1, memo, prefix, out);
                    prefix.pop();
                }
            }
        }
        fill(m - 1, k, &memo, &mut Vec::new(), &mut here);
        memo.push(here);
    }
    Ok(memo
        .swap_remove(n)
        .into_iter()
        .map(|t| ForestShape::from_trees_unchecked(k, vec![t]))
        .collect())
}

/// Number of single-tree `k`-ary shapes with `n` carets, by enumeration.
pub fn count_shapes(k: usize, n: usize) -> Result<usize> {
    Ok(single_tree_shapes(k, n)?.len())
}
