//! `*`-sequences: `*`-permutations for arity 2 and their `S_{k,n}`-style
//! generalizations, the inversion-word bijection with `X*`, interlacing,
//! pattern occurrences and the two classical Tamari encodings.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_arity, Error, Result};
use crate::forest::{ForestShape, Node};
use crate::xmonoid::XWord;

/// A term of a `*`-sequence. A star compares larger than every value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Value(usize),
    Star,
}

impl Term {
    pub fn value(self) -> Option<usize> {
        match self {
            Term::Value(v) => Some(v),
            Term::Star => None,
        }
    }

    pub fn is_star(self) -> bool {
        matches!(self, Term::Star)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Value(v) => write!(f, "{v}"),
            Term::Star => f.write_str("*"),
        }
    }
}

/// A finite sequence over `{1..n} ∪ {*}` in which each value occurs `k - 1`
/// times and the terms between two occurrences of `j` are values below `j`.
/// Trailing stars are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarSequence {
    arity: usize,
    terms: Vec<Term>,
    n: usize,
}

impl StarSequence {
    pub fn new(k: usize, mut terms: Vec<Term>) -> Result<Self> {
        check_arity(k)?;
        while terms.last() == Some(&Term::Star) {
            terms.pop();
        }
        let mut positions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (p, t) in terms.iter().enumerate() {
            if let Term::Value(v) = *t {
                if v == 0 {
                    return Err(Error::MalformedSequence(format!(
                        "value 0 at position {}",
                        p + 1
                    )));
                }
                positions.entry(v).or_default().push(p);
            }
        }
        let n = positions.keys().next_back().copied().unwrap_or(0);
        for v in 1..=n {
            let occ = positions.get(&v).map_or(0, Vec::len);
            if occ != k - 1 {
                return Err(Error::MalformedSequence(format!(
                    "value {v} occurs {occ} times, expected {}",
                    k - 1
                )));
            }
            let ps = &positions[&v];
            for pair in ps.windows(2) {
                for t in &terms[pair[0] + 1..pair[1]] {
                    if *t >= Term::Value(v) {
                        return Err(Error::MalformedSequence(format!(
                            "{t} lies between two occurrences of {v}"
                        )));
                    }
                }
            }
        }
        Ok(StarSequence { arity: k, terms, n })
    }

    /// A star-free `*`-permutation (arity 2) from its values.
    pub fn permutation(values: &[usize]) -> Result<Self> {
        Self::from_values(2, values)
    }

    pub fn from_values(k: usize, values: &[usize]) -> Result<Self> {
        Self::new(k, values.iter().map(|&v| Term::Value(v)).collect())
    }

    pub fn empty(k: usize) -> Result<Self> {
        Self::new(k, Vec::new())
    }

    /// Parses `3 2 * 4 1` or, when every value is a single digit, `32*41`.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let text = text.trim();
        let tokens: Vec<String> = if text.contains(char::is_whitespace) || text.contains(',') {
            text.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(str::to_owned)
                .collect()
        } else {
            text.chars().map(String::from).collect()
        };
        let terms = tokens
            .iter()
            .map(|tok| match tok.as_str() {
                "*" => Ok(Term::Star),
                _ => tok
                    .parse::<usize>()
                    .map(Term::Value)
                    .map_err(|_| Error::Parse(format!("bad sequence term {tok:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, terms)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of distinct concrete values.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Position (1-based) of the last concrete term; 0 when empty.
    pub fn z(&self) -> usize {
        self.terms.len()
    }

    pub fn is_star_free(&self) -> bool {
        !self.terms.iter().any(|t| t.is_star())
    }

    /// Term at 1-based position `p`; positions past the end hold stars.
    pub fn term(&self, p: usize) -> Term {
        self.terms.get(p - 1).copied().unwrap_or(Term::Star)
    }

    /// Zero-based positions of `value`.
    pub fn positions(&self, value: usize) -> Vec<usize> {
        self.terms
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == Term::Value(value))
            .map(|(p, _)| p)
            .collect()
    }

    /// Zero-based positions of every value, indexed by `value - 1`.
    pub(crate) fn all_positions(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(self.arity - 1); self.n];
        for (p, t) in self.terms.iter().enumerate() {
            if let Term::Value(v) = *t {
                out[v - 1].push(p);
            }
        }
        out
    }

    /// Compact rendering without separators; only unambiguous below 10.
    pub fn compact(&self) -> String {
        self.terms.iter().map(Term::to_string).collect()
    }

    /// `inv_j`: how many terms left of `j` exceed `j`, stars included.
    pub fn inversion_word(&self) -> XWord {
        let positions = self.all_positions();
        let word = positions
            .iter()
            .enumerate()
            .map(|(j, ps)| {
                let v = Term::Value(j + 1);
                let count = |p: usize| self.terms[..p].iter().filter(|t| **t > v).count();
                let first = count(ps[0]);
                debug_assert!(ps.iter().all(|&p| count(p) == first));
                first
            })
            .collect();
        XWord::new(word)
    }

    /// Slot placement: at step `j`, skip `i_j` open slots and fill the next
    /// `k - 1` open slots with `j`. Unfilled slots become stars.
    pub fn from_word(word: &XWord, k: usize) -> Result<Self> {
        check_arity(k)?;
        let mut slots: Vec<Option<usize>> = Vec::new();
        for (j, &skip) in word.indices().iter().enumerate() {
            let mut open_seen = 0;
            let mut placed = 0;
            let mut p = 0;
            while placed < k - 1 {
                if p == slots.len() {
                    slots.push(None);
                }
                if slots[p].is_none() {
                    if open_seen >= skip {
                        slots[p] = Some(j + 1);
                        placed += 1;
                    }
                    open_seen += 1;
                }
                p += 1;
            }
        }
        let terms = slots
            .into_iter()
            .map(|s| s.map_or(Term::Star, Term::Value))
            .collect();
        Self::new(k, terms)
    }

    /// The `÷` product: lift `other` by `self.n()` and write its terms, in
    /// order, into the stars of `self` (extended by stars as needed).
    pub fn interlace(&self, other: &StarSequence) -> Result<StarSequence> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        let lift = |t: Term| match t {
            Term::Value(v) => Term::Value(v + self.n),
            Term::Star => Term::Star,
        };
        let mut incoming = other.terms.iter().copied().map(lift);
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .map(|&t| match t {
                Term::Star => incoming.next().unwrap_or(Term::Star),
                t => t,
            })
            .collect();
        terms.extend(incoming);
        StarSequence::new(self.arity, terms)
    }

    fn has_triple(&self, pred: impl Fn(usize, Term, usize) -> bool) -> bool {
        let z = self.terms.len();
        for a in 0..z {
            let Term::Value(x) = self.terms[a] else {
                continue;
            };
            for c in a + 2..z {
                let Term::Value(y) = self.terms[c] else {
                    continue;
                };
                if self.terms[a + 1..c].iter().any(|&mid| pred(x, mid, y)) {
                    return true;
                }
            }
        }
        false
    }

    /// `σ(a) < σ(c) < σ(b)` with `a < b < c`; the middle may be a star.
    pub fn occurs_132(&self) -> bool {
        self.has_triple(|a, b, c| a < c && Term::Value(c) < b)
    }

    /// `σ(a) + 1 = σ(c) < σ(b)`.
    pub fn occurs_overline_132(&self) -> bool {
        self.has_triple(|a, b, c| a + 1 == c && Term::Value(c) < b)
    }

    /// `σ(c) < σ(a) < σ(b)`.
    pub fn occurs_231(&self) -> bool {
        self.has_triple(|a, b, c| c < a && Term::Value(a) < b)
    }

    /// `σ(a) = σ(c) + 1 < σ(b)`.
    pub fn occurs_overline_231(&self) -> bool {
        self.has_triple(|a, b, c| a == c + 1 && Term::Value(a) < b)
    }

    fn check_adjacent_value(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.n {
            return Err(Error::ValueOutOfRange {
                value: i,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Exchanges every occurrence of `i` with every occurrence of `i + 1`.
    pub fn transpose(&self, i: usize) -> Result<StarSequence> {
        self.check_adjacent_value(i)?;
        let terms = self
            .terms
            .iter()
            .map(|&t| match t {
                Term::Value(v) if v == i => Term::Value(i + 1),
                Term::Value(v) if v == i + 1 => Term::Value(i),
                t => t,
            })
            .collect();
        StarSequence::new(self.arity, terms)
    }

    /// True iff some term strictly between an occurrence of `i` and one of
    /// `i + 1` exceeds `i + 1`, i.e. the transposition keeps the forest.
    pub fn preserves_forest(&self, i: usize) -> Result<bool> {
        self.check_adjacent_value(i)?;
        let lo = self.positions(i);
        let hi = self.positions(i + 1);
        let bound = Term::Value(i + 1);
        Ok(lo.iter().any(|&a| {
            hi.iter().any(|&c| {
                let (l, r) = if a < c { (a, c) } else { (c, a) };
                self.terms[l + 1..r].iter().any(|&t| t > bound)
            })
        }))
    }

    /// True iff every occurrence of `i` lies left of every occurrence of `i + 1`.
    pub fn is_left_of(&self, i: usize, j: usize) -> bool {
        let a = self.positions(i);
        let b = self.positions(j);
        match (a.last(), b.first()) {
            (Some(x), Some(y)) => x < y,
            _ => false,
        }
    }

    /// Inverse of a star-free permutation.
    pub fn inverse(&self) -> Result<StarSequence> {
        if self.arity != 2 || !self.is_star_free() {
            return Err(Error::MalformedSequence(
                "inverse needs a star-free permutation of arity 2".into(),
            ));
        }
        let mut inv = vec![0; self.n];
        for (p, t) in self.terms.iter().enumerate() {
            if let Term::Value(v) = *t {
                inv[v - 1] = p + 1;
            }
        }
        StarSequence::permutation(&inv)
    }

    /// Star pattern of `self` as a [`BlockPattern`].
    pub fn pattern(&self) -> BlockPattern {
        BlockPattern {
            slots: self.terms.iter().map(|t| !t.is_star()).collect(),
        }
    }
}

impl fmt::Display for StarSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, t) in self.terms.iter().enumerate() {
            if p > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// The unique permutation order-isomorphic to `values`.
pub fn flatten<T: Ord>(values: &[T]) -> Result<StarSequence> {
    StarSequence::permutation(&ranks(values)?)
}

pub(crate) fn ranks<T: Ord>(values: &[T]) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    for pair in order.windows(2) {
        if values[pair[0]] == values[pair[1]] {
            return Err(Error::DuplicateEntry(pair[1].max(pair[0]) + 1));
        }
    }
    let mut out = vec![0; values.len()];
    for (rank, &p) in order.iter().enumerate() {
        out[p] = rank + 1;
    }
    Ok(out)
}

/// Huang–Tamari encoding of a binary tree shape: for the `i`-th interior
/// vertex in in-order, the largest leaf label below it.
pub fn huang_tamari_encoding(shape: &ForestShape) -> Result<Vec<usize>> {
    if shape.arity() != 2 {
        return Err(Error::MalformedForest(
            "Huang-Tamari encoding needs a binary tree".into(),
        ));
    }
    let tree = shape.single_tree()?;
    fn walk(node: &Node<()>, next_leaf: &mut usize, out: &mut Vec<usize>) -> usize {
        match node {
            Node::Leaf => {
                let l = *next_leaf;
                *next_leaf += 1;
                l
            }
            Node::Caret(_, children) => {
                walk(&children[0], next_leaf, out);
                let slot = out.len();
                out.push(0);
                let max = walk(&children[1], next_leaf, out);
                out[slot] = max;
                max
            }
        }
    }
    let mut out = Vec::new();
    if !tree.is_leaf() {
        walk(&tree, &mut 0, &mut out);
    }
    Ok(out)
}

/// Björner–Wachs encoding: `r_i` counts the consecutive terms of `σ^{-1}`
/// right after position `i` that are smaller than `σ^{-1}(i)`.
pub fn bjorner_wachs_encoding(sigma: &StarSequence) -> Result<Vec<usize>> {
    let inv = sigma.inverse()?;
    let t = inv.terms();
    Ok((0..t.len())
        .map(|i| t[i + 1..].iter().take_while(|&&x| x < t[i]).count())
        .collect())
}

/// A star pattern: which positions `1..z` hold concrete terms. The last
/// position is always concrete.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockPattern {
    slots: Vec<bool>,
}

impl BlockPattern {
    pub fn new(slots: Vec<bool>) -> Result<Self> {
        if slots.last() == Some(&false) {
            return Err(Error::Parse("block pattern must end with a concrete slot".into()));
        }
        Ok(BlockPattern { slots })
    }

    /// Star-free pattern on `n` positions.
    pub fn plain(n: usize) -> Self {
        BlockPattern {
            slots: vec![true; n],
        }
    }

    /// Concrete blocks of the given sizes separated by single stars.
    pub fn from_blocks(sizes: &[usize]) -> Result<Self> {
        Self::from_blocks_and_gaps(sizes, &vec![1; sizes.len().saturating_sub(1)], 0)
    }

    /// `leading` stars, then blocks `sizes[i]` separated by `gaps[i]` stars.
    pub fn from_blocks_and_gaps(sizes: &[usize], gaps: &[usize], leading: usize) -> Result<Self> {
        if gaps.len() + 1 != sizes.len().max(1) || sizes.contains(&0) || gaps.contains(&0) {
            return Err(Error::Parse("block sizes and gaps must be positive and interleave".into()));
        }
        let mut slots = vec![false; leading];
        for (i, &m) in sizes.iter().enumerate() {
            if i > 0 {
                slots.extend(std::iter::repeat_n(false, gaps[i - 1]));
            }
            slots.extend(std::iter::repeat_n(true, m));
        }
        if sizes.is_empty() {
            slots.clear();
        }
        Self::new(slots)
    }

    pub fn slots(&self) -> &[bool] {
        &self.slots
    }

    pub fn n(&self) -> usize {
        self.slots.iter().filter(|&&c| c).count()
    }

    /// Sizes `m_1..m_r` of the maximal concrete blocks.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks().iter().map(|b| b.len()).collect()
    }

    /// Zero-based position ranges of the concrete blocks.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = None;
        for (p, &c) in self.slots.iter().enumerate() {
            match (c, start) {
                (true, None) => start = Some(p),
                (false, Some(s)) => {
                    out.push(s..p);
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push(s..self.slots.len());
        }
        out
    }

    /// Writes the permutation `values` into the concrete slots.
    pub fn fill(&self, values: &[usize]) -> Result<StarSequence> {
        if values.len() != self.n() {
            return Err(Error::MalformedSequence(format!(
                "pattern has {} concrete slots, got {} values",
                self.n(),
                values.len()
            )));
        }
        let mut it = values.iter();
        let terms = self
            .slots
            .iter()
            .map(|&c| {
                if c {
                    Term::Value(*it.next().expect("length checked"))
                } else {
                    Term::Star
                }
            })
            .collect();
        StarSequence::new(2, terms)
    }

    /// Accepts `_ _ * _` or `__*_`.
    pub fn parse(text: &str) -> Result<Self> {
        let slots = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '_' => Ok(true),
                '*' => Ok(false),
                other => Err(Error::Parse(format!("bad pattern symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(slots)
    }
}

impl fmt::Display for BlockPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, &c) in self.slots.iter().enumerate() {
            if p > 0 {
                f.write_str(" ")?;
            }
            f.write_str(if c { "_" } else { "*" })?;
        }
        Ok(())
    }
}
