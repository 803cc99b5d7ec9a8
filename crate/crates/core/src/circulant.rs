//! The circulant model of `K_n`.
//!
//! Vertices carry standard labels `1..=n` and sit clockwise on a regular
//! polygon. An edge `{u, v}` has type `min(|u - v|, n - |u - v|)` and a
//! starting vertex `s` with `s + type == other (mod n)`. Rotating a path adds
//! the same shift to every label, which preserves all edge types.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex label. Standard labels are 1-based.
pub type Vertex = usize;

/// Unordered edge stored with the smaller label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Number of vertices of the host complete graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(usize);

impl Order {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(Order(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn max_type(self) -> usize {
        self.0 / 2
    }

    pub fn edge_count(self) -> usize {
        self.0 * (self.0 - 1) / 2
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }
}

fn check_vertex(n: usize, v: Vertex) -> Result<()> {
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(())
}

/// Reduces an arbitrary integer to a standard label in `1..=n`.
pub fn wrap(n: usize, v: i64) -> Vertex {
    let n = n as i64;
    ((v - 1).rem_euclid(n) + 1) as Vertex
}

/// Clockwise distance between two vertices.
pub fn cd(n: usize, u: Vertex, v: Vertex) -> usize {
    let d = u.abs_diff(v) % n;
    d.min(n - d)
}

/// Type of the edge `{u, v}` in `K_n`.
pub fn edge_type(n: usize, u: Vertex, v: Vertex) -> Result<usize> {
    check_vertex(n, u)?;
    check_vertex(n, v)?;
    if u == v {
        return Err(Error::Loop(u));
    }
    Ok(cd(n, u, v))
}

/// An edge identified by its starting vertex and type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypedEdge {
    pub start: Vertex,
    pub etype: usize,
}

impl TypedEdge {
    /// For type `n/2` the canonical start is the smaller label.
    pub fn from_endpoints(n: usize, u: Vertex, v: Vertex) -> Result<Self> {
        let etype = edge_type(n, u, v)?;
        let start = if 2 * etype == n {
            u.min(v)
        } else if wrap(n, u as i64 + etype as i64) == v {
            u
        } else {
            v
        };
        Ok(TypedEdge { start, etype })
    }

    pub fn endpoints(&self, n: usize) -> Edge {
        Edge::new(self.start, wrap(n, (self.start + self.etype) as i64))
    }

    /// Every vertex that may serve as the starting vertex.
    pub fn admissible_starts(&self, n: usize) -> Vec<Vertex> {
        if 2 * self.etype == n {
            let e = self.endpoints(n);
            vec![e.0, e.1]
        } else {
            vec![self.start]
        }
    }
}

/// Clockwise distance between the starting vertices of two edges. Type `n/2`
/// edges are measured from whichever endpoint gives the smaller value.
pub fn cd_edges(n: usize, e: &TypedEdge, f: &TypedEdge) -> usize {
    let mut best = usize::MAX;
    for a in e.admissible_starts(n) {
        for b in f.admissible_starts(n) {
            best = best.min(cd(n, a, b));
        }
    }
    best
}

/// Canonical index of an edge: lexicographic order over sorted endpoint pairs.
pub fn edge_index(n: usize, u: Vertex, v: Vertex) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(a >= 1 && b <= n && a < b);
    (a - 1) * (2 * n - a) / 2 + (b - a - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_from_index(n: usize, mut idx: usize) -> Edge {
    let mut a = 1;
    loop {
        let row = n - a;
        if idx < row {
            return Edge(a, a + 1 + idx);
        }
        idx -= row;
        a += 1;
    }
}

/// All edges of `K_n` in canonical index order.
pub fn all_edges(n: usize) -> impl Iterator<Item = Edge> {
    (1..=n).flat_map(move |a| (a + 1..=n).map(move |b| Edge(a, b)))
}

/// Signed labels for odd `n`: signed `0` is standard `n`, positive labels
/// coincide, and signed `-s` is standard `n - s`.
#[derive(Debug, Clone, Copy)]
pub struct SignedLabeling {
    n: usize,
}

impl SignedLabeling {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::NeedOddOrder(n));
        }
        Ok(SignedLabeling { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half(&self) -> i64 {
        (self.n as i64 - 1) / 2
    }

    pub fn to_standard(&self, s: i64) -> Vertex {
        debug_assert!(s.abs() <= self.half());
        wrap(self.n, s)
    }

    pub fn to_signed(&self, v: Vertex) -> i64 {
        let v = v as i64;
        if v == self.n as i64 {
            0
        } else if v <= self.half() {
            v
        } else {
            v - self.n as i64
        }
    }

    pub fn edge(&self, a: i64, b: i64) -> Edge {
        Edge::new(self.to_standard(a), self.to_standard(b))
    }
}

/// An ordered, repetition-free vertex sequence on `K_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathSeq {
    n: usize,
    vertices: Vec<Vertex>,
}

impl PathSeq {
    pub fn new(n: usize, vertices: Vec<Vertex>) -> Result<Self> {
        Order::new(n)?;
        if vertices.len() < 2 {
            return Err(Error::PathTooShort(vertices.len()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &vertices {
            check_vertex(n, v)?;
            if seen[v] {
                return Err(Error::RepeatedVertex(v));
            }
            seen[v] = true;
        }
        Ok(PathSeq { n, vertices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }

    pub fn len_edges(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| Edge::new(w[0], w[1]))
    }

    pub fn typed_edges(&self) -> Vec<TypedEdge> {
        self.vertices
            .windows(2)
            .map(|w| TypedEdge::from_endpoints(self.n, w[0], w[1]).expect("validated path"))
            .collect()
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    /// Shift every vertex by `shift` (mod `n`).
    pub fn rotate(&self, shift: i64) -> PathSeq {
        PathSeq {
            n: self.n,
            vertices: self
                .vertices
                .iter()
                .map(|&v| wrap(self.n, v as i64 + shift))
                .collect(),
        }
    }

    pub fn reversed(&self) -> PathSeq {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        PathSeq {
            n: self.n,
            vertices,
        }
    }

    pub fn edge_set(&self) -> EdgeSet {
        let mut s = EdgeSet::new(self.n);
        for e in self.edges() {
            s.insert(e);
        }
        s
    }

    /// Re-home the path on a larger complete graph without relabelling.
    pub fn embed(&self, n: usize) -> Result<PathSeq> {
        PathSeq::new(n, self.vertices.clone())
    }
}

impl fmt::Display for PathSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand for rotating a path.
pub fn rotate(path: &PathSeq, shift: i64) -> PathSeq {
    path.rotate(shift)
}

/// A set of edges of `K_n`, stored as a bitset over canonical indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    n: usize,
    bits: Vec<u64>,
}

impl EdgeSet {
    pub fn new(n: usize) -> Self {
        let m = n * (n - 1) / 2;
        EdgeSet {
            n,
            bits: vec![0; m.div_ceil(64)],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Self {
        let mut s = EdgeSet::new(n);
        for e in edges {
            s.insert(e);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Returns `false` if the edge was already present.
    pub fn insert(&mut self, e: Edge) -> bool {
        let i = edge_index(self.n, e.0, e.1);
        let (w, b) = (i / 64, i % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        self.bits[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, e: Edge) -> bool {
        let i = edge_index(self.n, e.0, e.1);
        let (w, b) = (i / 64, i % 64);
        let present = self.bits[w] & (1 << b) != 0;
        self.bits[w] &= !(1 << b);
        present
    }

    pub fn contains(&self, e: Edge) -> bool {
        let i = edge_index(self.n, e.0, e.1);
        self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.n;
        self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(edge_from_index(n, w * 64 + b))
            })
        })
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }
}

/// An ordered family of paths on one `K_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFamily {
    n: usize,
    paths: Vec<PathSeq>,
}

impl PathFamily {
    pub fn new(n: usize, paths: Vec<PathSeq>) -> Result<Self> {
        Order::new(n)?;
        for (i, p) in paths.iter().enumerate() {
            if p.n() != n {
                return Err(Error::FamilyOrderMismatch {
                    index: i,
                    expected: n,
                    found: p.n(),
                });
            }
        }
        Ok(PathFamily { n, paths })
    }

    pub fn empty(n: usize) -> Self {
        PathFamily { n, paths: vec![] }
    }

    /// All `n` rotations of `path`, in shift order `0..n`.
    pub fn rotations(path: &PathSeq) -> Self {
        let n = path.n();
        PathFamily {
            n,
            paths: (0..n as i64).map(|i| path.rotate(i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn paths(&self) -> &[PathSeq] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn push(&mut self, path: PathSeq) -> Result<()> {
        if path.n() != self.n {
            return Err(Error::FamilyOrderMismatch {
                index: self.paths.len(),
                expected: self.n,
                found: path.n(),
            });
        }
        self.paths.push(path);
        Ok(())
    }

    pub fn into_paths(self) -> Vec<PathSeq> {
        self.paths
    }
}

/// Why an edge set is not a linear forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForestViolation {
    Degree { vertex: Vertex, degree: usize },
    Cycle { vertices: Vec<Vertex> },
}

impl fmt::Display for ForestViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForestViolation::Degree { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree}")
            }
            ForestViolation::Cycle { vertices } => write!(f, "cycle through {vertices:?}"),
        }
    }
}

/// Splits a linear forest into its maximal paths.
///
/// Paths are emitted in order of their smaller endpoint and oriented from that
/// endpoint. Isolated vertices are omitted.
pub fn decompose_linear_forest(s: &EdgeSet) -> std::result::Result<Vec<PathSeq>, ForestViolation> {
    let n = s.n();
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    for e in s.iter() {
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    if let Some(v) = (1..=n).find(|&v| adj[v].len() > 2) {
        return Err(ForestViolation::Degree {
            vertex: v,
            degree: adj[v].len(),
        });
    }
    let mut visited = vec![false; n + 1];
    let mut paths = Vec::new();
    for start in 1..=n {
        if visited[start] || adj[start].len() != 1 {
            continue;
        }
        let mut walk = vec![start];
        visited[start] = true;
        let (mut prev, mut cur) = (start, adj[start][0]);
        loop {
            walk.push(cur);
            visited[cur] = true;
            match adj[cur].iter().find(|&&w| w != prev) {
                Some(&next) if adj[cur].len() == 2 => {
                    prev = cur;
                    cur = next;
                }
                _ => break,
            }
        }
        paths.push(PathSeq { n, vertices: walk });
    }
    // Anything left with edges lies on a cycle.
    if let Some(v) = (1..=n).find(|&v| !visited[v] && !adj[v].is_empty()) {
        let mut cycle = vec![v];
        let (mut prev, mut cur) = (v, adj[v][0]);
        while cur != v {
            cycle.push(cur);
            let next = if adj[cur][0] == prev {
                adj[cur][1]
            } else {
                adj[cur][0]
            };
            prev = cur;
            cur = next;
        }
        return Err(ForestViolation::Cycle { vertices: cycle });
    }
    Ok(paths)
}

/// Types occurring among the given edges, with multiplicities, indexed by type.
pub fn type_counts(n: usize, edges: impl IntoIterator<Item = Edge>) -> Vec<usize> {
    let mut counts = vec![0; n / 2 + 1];
    for e in edges {
        counts[cd(n, e.0, e.1)] += 1;
    }
    counts
}

/// The full type universe `1..=floor(n/2)`.
pub fn all_types(n: usize) -> BTreeSet<usize> {
    (1..=n / 2).collect()
}
