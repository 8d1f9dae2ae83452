//! Partitions of the `((k-1)n+2)`-gon into `(k+1)`-gons.
//!
//! Vertices are labeled `0..=(k-1)n+1` in positive orientation. Boundary
//! edge `(i, i+1)` stands for leaf `i` of the corresponding `k`-ary tree, the
//! edge `(0, (k-1)n+1)` for its root, and each diagonal for a non-root caret.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use serde_json::{json, Value};

use crate::error::{check_arity, Error, Result};
use crate::forest::{single_tree_shapes, ForestShape, LinearizedForest, Node};
use crate::order::Poset;
use crate::starseq::StarSequence;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolygonPartition {
    arity: usize,
    n: usize,
    diagonals: BTreeSet<(usize, usize)>,
}

fn normalize((a, b): (usize, usize)) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl PolygonPartition {
    /// Validates the diagonal set: `n - 1` pairwise non-crossing diagonals
    /// cutting the polygon into `(k+1)`-gons.
    pub fn new(k: usize, n: usize, diagonals: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_arity(k)?;
        let p = PolygonPartition {
            arity: k,
            n,
            diagonals: diagonals.into_iter().map(normalize).collect(),
        };
        let nv = p.vertex_count();
        for &(a, b) in &p.diagonals {
            if b >= nv {
                return Err(Error::InvalidPartition(format!("vertex {b} outside the {nv}-gon")));
            }
            if b == a + 1 || (a == 0 && b == nv - 1) {
                return Err(Error::InvalidPartition(format!("({a},{b}) is a side, not a diagonal")));
            }
        }
        if p.diagonals.len() + 1 != n.max(1) {
            return Err(Error::InvalidPartition(format!(
                "{} diagonals, expected {}",
                p.diagonals.len(),
                n.saturating_sub(1)
            )));
        }
        let ds: Vec<_> = p.diagonals.iter().copied().collect();
        for (i, &(a, b)) in ds.iter().enumerate() {
            for &(c, d) in &ds[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Err(Error::InvalidPartition(format!("({a},{b}) crosses ({c},{d})")));
                }
            }
        }
        p.to_tree()?;
        Ok(p)
    }

    /// The degenerate 2-gon standing for a trivial tree.
    pub fn two_gon(k: usize) -> Result<Self> {
        Self::new(k, 0, [])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of `(k+1)`-gons.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        (self.arity - 1) * self.n + 2
    }

    pub fn diagonals(&self) -> &BTreeSet<(usize, usize)> {
        &self.diagonals
    }

    fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let nv = self.vertex_count();
        let mut adj = vec![BTreeSet::new(); nv];
        for v in 0..nv {
            let w = (v + 1) % nv;
            if v != w {
                adj[v].insert(w);
                adj[w].insert(v);
            }
        }
        for &(a, b) in &self.diagonals {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    /// The face bounded by the chord `(from, to)` on the side reached by
    /// walking in positive direction from `from`, as its vertex list.
    fn face(&self, adj: &[BTreeSet<usize>], from: usize, to: usize) -> Vec<usize> {
        let nv = self.vertex_count();
        let dist = |x: usize| (x + nv - from) % nv;
        let span = dist(to);
        let mut face = vec![from];
        let mut v = from;
        while v != to {
            let dv = dist(v);
            v = *adj[v]
                .iter()
                .filter(|&&u| dist(u) > dv && dist(u) <= span && !(v == from && u == to))
                .max_by_key(|&&u| dist(u))
                .expect("a partition face closes");
            face.push(v);
        }
        face
    }

    /// All faces, each listed in positive orientation.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let nv = self.vertex_count();
        let mut out = Vec::new();
        let mut stack = vec![(0, nv - 1)];
        while let Some((a, b)) = stack.pop() {
            if b <= a + 1 {
                continue;
            }
            let f = self.face(&adj, a, b);
            for w in f.windows(2) {
                stack.push((w[0], w[1]));
            }
            out.push(f);
        }
        out.sort();
        out
    }

    /// One line per face, for debugging.
    pub fn face_listing(&self) -> String {
        let mut out = String::new();
        for f in self.faces() {
            let _ = writeln!(out, "face {}", f.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
        }
        out
    }

    /// The tree whose leaves are the boundary edges `(i, i+1)`, whose root is
    /// `(0, (k-1)n+1)` and whose other carets are the diagonals.
    pub fn to_tree(&self) -> Result<ForestShape> {
        let adj = self.adjacency();
        let k = self.arity;
        let build = |a: usize, b: usize| -> Result<Node<()>> {
            fn go(p: &PolygonPartition, adj: &[BTreeSet<usize>], k: usize, a: usize, b: usize) -> Result<Node<()>> {
                if b == a + 1 {
                    return Ok(Node::Leaf);
                }
                let f = p.face(adj, a, b);
                if f.len() != k + 1 {
                    return Err(Error::InvalidPartition(format!(
                        "face {f:?} has {} sides, expected {}",
                        f.len(),
                        k + 1
                    )));
                }
                let children = f.windows(2).map(|w| go(p, adj, k, w[0], w[1])).collect::<Result<_>>()?;
                Ok(Node::Caret((), children))
            }
            go(self, &adj, k, a, b)
        };
        let root = build(0, self.vertex_count() - 1)?;
        ForestShape::new(k, vec![root])
    }

    pub fn from_tree(shape: &ForestShape) -> Result<Self> {
        let tree = shape.single_tree()?;
        let k = shape.arity();
        let n = tree.caret_count();
        let mut diagonals = Vec::new();
        fn walk(node: &Node<()>, next_leaf: &mut usize, is_root: bool, out: &mut Vec<(usize, usize)>) {
            match node {
                Node::Leaf => *next_leaf += 1,
                Node::Caret(_, cs) => {
                    let first = *next_leaf;
                    for c in cs {
                        walk(c, next_leaf, false, out);
                    }
                    if !is_root {
                        out.push((first, *next_leaf));
                    }
                }
            }
        }
        walk(&tree, &mut 0, true, &mut diagonals);
        Self::new(k, n, diagonals)
    }

    /// Size of diagonal `d`: its smaller endpoint is the `i`-th smallest
    /// vertex of the `2k`-gon formed by the two faces that share `d`.
    pub fn diagonal_size(&self, d: (usize, usize)) -> Result<usize> {
        Ok(self.surrounding_2k_gon(d)?.0 + 1)
    }

    /// Sorted vertices of the `2k`-gon around `d` and the index of `d`'s
    /// smaller endpoint in it.
    fn surrounding_2k_gon(&self, d: (usize, usize)) -> Result<(usize, Vec<usize>)> {
        let (a, b) = normalize(d);
        if !self.diagonals.contains(&(a, b)) {
            return Err(Error::DiagonalNotPresent(a, b));
        }
        let adj = self.adjacency();
        let mut gon: Vec<usize> = self.face(&adj, a, b);
        gon.extend(self.face(&adj, b, a));
        gon.sort_unstable();
        gon.dedup();
        let k = self.arity;
        let idx = gon.iter().position(|&v| v == a).expect("endpoint on its own face");
        if gon.len() != 2 * k || idx >= k || gon[idx + k] != b {
            return Err(Error::Internal(format!(
                "diagonal ({a},{b}) does not join opposite vertices of {gon:?}"
            )));
        }
        Ok((idx, gon))
    }

    /// Replaces a diagonal of size `i < k` by the diagonal of size `i + 1`
    /// in the same `2k`-gon.
    pub fn flip_up(&self, d: (usize, usize)) -> Result<Self> {
        let (idx, gon) = self.surrounding_2k_gon(d)?;
        let k = self.arity;
        if idx + 1 == k {
            let (a, b) = normalize(d);
            return Err(Error::MaximalDiagonal(a, b));
        }
        let mut diagonals = self.diagonals.clone();
        diagonals.remove(&normalize(d));
        diagonals.insert((gon[idx + 1], gon[idx + 1 + k]));
        Ok(PolygonPartition {
            arity: k,
            n: self.n,
            diagonals,
        })
    }

    /// Sum of all diagonal endpoints. Both endpoints of a flipped diagonal move
    /// up and no other diagonal changes, so this strictly increases under
    /// [`flip_up`](Self::flip_up).
    pub fn label_sum(&self) -> usize {
        self.diagonals.iter().map(|&(a, b)| a + b).sum()
    }

    /// Every upward flip available in `self`.
    pub fn upward_flips(&self) -> Vec<((usize, usize), PolygonPartition)> {
        self.diagonals
            .iter()
            .filter_map(|&d| self.flip_up(d).ok().map(|p| (d, p)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.arity,
            "n": self.n,
            "diagonals": self.diagonals.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("missing integer field `{name}`")))
        };
        let (k, n) = (field("k")?, field("n")?);
        let diagonals = value
            .get("diagonals")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field `diagonals`".into()))?
            .iter()
            .map(|d| match d.as_array().map(Vec::as_slice) {
                Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                    (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                    _ => Err(Error::Parse(format!("bad diagonal {d}"))),
                },
                _ => Err(Error::Parse(format!("bad diagonal {d}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, n, diagonals)
    }
}

impl fmt::Display for PolygonPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.diagonals.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")
    }
}

/// Builds the partition of a star-free sequence of `S_{k,n}` by growing a
/// path from `(0, (k-1)n+1)`, adding the locations of `n, n-1, ..., 1`.
/// Returns the partition and the path after each step.
pub fn partition_from_sequence(s: &StarSequence) -> Result<(PolygonPartition, Vec<Vec<usize>>)> {
    let k = s.arity();
    let n = s.n();
    if !s.is_star_free() || s.z() != (k - 1) * n {
        return Err(Error::MalformedSequence(format!("{s} is not a star-free member of S_{{{k},{n}}}")));
    }
    let nv = (k - 1) * n + 2;
    let mut path: BTreeSet<usize> = [0, nv - 1].into_iter().collect();
    let mut paths = Vec::with_capacity(n);
    let mut edges = BTreeSet::new();
    for i in (1..=n).rev() {
        path.extend(s.positions(i).into_iter().map(|p| p + 1));
        let v: Vec<usize> = path.iter().copied().collect();
        edges.extend(v.windows(2).map(|w| (w[0], w[1])));
        paths.push(v);
    }
    let diagonals = edges
        .into_iter()
        .filter(|&(a, b)| b != a + 1 && !(a == 0 && b == nv - 1));
    Ok((PolygonPartition::new(k, n, diagonals)?, paths))
}

/// The flip order on all partitions of the `((k-1)n+2)`-gon, elements sorted
/// by their diagonal sets.
pub fn tamari_order_partitions(k: usize, n: usize, cap: usize) -> Result<Poset<PolygonPartition>> {
    let shapes = single_tree_shapes(k, n)?;
    if shapes.len() > cap {
        return Err(Error::CapExceeded {
            what: "partitions",
            value: shapes.len(),
            cap,
        });
    }
    let mut parts = shapes
        .iter()
        .map(PolygonPartition::from_tree)
        .collect::<Result<Vec<_>>>()?;
    parts.sort();
    let index: HashMap<&PolygonPartition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut flips = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        for (_, q) in p.upward_flips() {
            flips.push((i, index[&q]));
        }
    }
    Poset::from_relation(parts, flips)
}

/// A finite sequence of partitioned polygons followed by implicit 2-gons;
/// the polygon image of a forest shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSequence {
    arity: usize,
    polygons: Vec<PolygonPartition>,
}

impl PartitionSequence {
    pub fn new(k: usize, mut polygons: Vec<PolygonPartition>) -> Result<Self> {
        check_arity(k)?;
        if let Some(p) = polygons.iter().find(|p| p.arity != k) {
            return Err(Error::ArityMismatch {
                left: k,
                right: p.arity,
            });
        }
        while polygons.last().is_some_and(|p| p.n == 0) {
            polygons.pop();
        }
        Ok(PartitionSequence { arity: k, polygons })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn polygons(&self) -> &[PolygonPartition] {
        &self.polygons
    }

    pub fn from_shape(shape: &ForestShape) -> Result<Self> {
        let k = shape.arity();
        let polygons = shape
            .trees()
            .iter()
            .map(|t| PolygonPartition::from_tree(&ForestShape::new(k, vec![t.clone()])?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, polygons)
    }

    pub fn from_sequence(s: &StarSequence) -> Result<Self> {
        Self::from_shape(&LinearizedForest::tau(s)?.shape())
    }

    pub fn to_shape(&self) -> Result<ForestShape> {
        let trees = self
            .polygons
            .iter()
            .map(|p| p.to_tree()?.single_tree())
            .collect::<Result<Vec<_>>>()?;
        ForestShape::new(self.arity, trees)
    }

    /// Glues the root edge of polygon `i` of `self` onto leaf edge `i` of
    /// `other`, where leaf edges are numbered across the whole sequence.
    pub fn glue(&self, other: &PartitionSequence) -> Result<PartitionSequence> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        let k = self.arity;
        let two_gon = PolygonPartition::two_gon(k)?;
        let mut roots = self.polygons.iter().cloned().chain(std::iter::repeat(two_gon));
        let mut out = Vec::new();
        let mut consumed = 0;
        for q in &other.polygons {
            let nq = q.vertex_count();
            consumed += nq - 1;
            if nq == 2 {
                out.push(roots.next().expect("infinite tail"));
                continue;
            }
            let mut qmap = vec![0; nq];
            let mut counter = 0;
            let mut diagonals = Vec::new();
            for j in 0..nq - 1 {
                let r = roots.next().expect("infinite tail");
                let nr = r.vertex_count();
                let start = counter;
                counter += nr - 1;
                let rmap = |v: usize| start + v;
                diagonals.extend(r.diagonals.iter().map(|&(a, b)| (rmap(a), rmap(b))));
                if nr > 2 {
                    diagonals.push((start, counter));
                }
                qmap[j + 1] = counter;
            }
            diagonals.extend(q.diagonals.iter().map(|&(a, b)| (qmap[a], qmap[b])));
            let n = (counter - 1) / (k - 1);
            out.push(PolygonPartition::new(k, n, diagonals)?);
        }
        out.extend(self.polygons.iter().skip(consumed).cloned());
        Self::new(k, out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.polygons.iter().map(PolygonPartition::to_json).collect())
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Parse("partition sequence must be a JSON array".into()))?;
        let polygons = items
            .iter()
            .map(PolygonPartition::from_json)
            .collect::<Result<Vec<_>>>()?;
        let k = polygons.first().map_or(2, |p| p.arity);
        Self::new(k, polygons)
    }
}
