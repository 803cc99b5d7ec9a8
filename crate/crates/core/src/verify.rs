//! Certification of path families and single paths.
//!
//! Every edge of `K_n` gets a signature: bit `i` is set iff the edge lies on
//! path `i` of the family. A family separates weakly iff the signatures are
//! pairwise distinct, and strongly iff no signature is contained in another.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::circulant::{
    all_edges, cd, cd_edges, edge_from_index, edge_index, Edge, PathFamily, PathSeq, TypedEdge,
    Vertex,
};
use crate::error::{Error, Result};

/// Default cap on reported witness pairs.
pub const WITNESS_CAP: usize = 32;

/// Families above this order skip strong verification unless forced.
pub const STRONG_DEFAULT_MAX_N: usize = 100;

/// Per-edge membership bit-vectors for a family, indexed by canonical edge index.
#[derive(Debug, Clone)]
pub struct SignatureTable {
    n: usize,
    family_size: usize,
    words: usize,
    data: Vec<u64>,
}

impl SignatureTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family_size(&self) -> usize {
        self.family_size
    }

    pub fn edge_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn get(&self, edge_idx: usize) -> &[u64] {
        &self.data[edge_idx * self.words..(edge_idx + 1) * self.words]
    }

    pub fn of(&self, e: Edge) -> &[u64] {
        self.get(edge_index(self.n, e.0, e.1))
    }

    pub fn popcount(&self, edge_idx: usize) -> usize {
        self.get(edge_idx)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Indices of the paths containing the edge.
    pub fn members(&self, e: Edge) -> Vec<usize> {
        let sig = self.of(e);
        (0..self.family_size)
            .filter(|&i| sig[i / 64] & (1 << (i % 64)) != 0)
            .collect()
    }
}

pub fn signatures(family: &PathFamily) -> SignatureTable {
    let n = family.n();
    let m = n * (n - 1) / 2;
    let words = family.len().div_ceil(64).max(1);
    let mut data = vec![0u64; m * words];
    for (i, path) in family.paths().iter().enumerate() {
        let (w, bit) = (i / 64, 1u64 << (i % 64));
        for e in path.edges() {
            data[edge_index(n, e.0, e.1) * words + w] |= bit;
        }
    }
    SignatureTable {
        n,
        family_size: family.len(),
        words,
        data,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weak,
    Strong,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub separating: bool,
    pub mode: Mode,
    pub family_size: usize,
    /// Exact number of unseparated pairs, even when the witness list is capped.
    pub unseparated_count: u64,
    pub unseparated_pairs: Vec<(Edge, Edge)>,
    pub uncovered_edges: Vec<Edge>,
}

fn uncovered(table: &SignatureTable) -> Vec<Edge> {
    (0..table.edge_count())
        .filter(|&i| table.get(i).iter().all(|&w| w == 0))
        .map(|i| edge_from_index(table.n, i))
        .collect()
}

/// Weak separation by sorting signatures and scanning for equal runs.
pub fn verify_weak(family: &PathFamily) -> SeparationReport {
    verify_weak_capped(family, WITNESS_CAP)
}

pub fn verify_weak_capped(family: &PathFamily, cap: usize) -> SeparationReport {
    let table = signatures(family);
    let m = table.edge_count();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_unstable_by(|&a, &b| table.get(a).cmp(table.get(b)).then(a.cmp(&b)));

    let mut count = 0u64;
    let mut pairs = Vec::new();
    let mut run_start = 0;
    for k in 1..=m {
        if k < m && table.get(order[k]) == table.get(order[run_start]) {
            continue;
        }
        let run = &order[run_start..k];
        let len = run.len() as u64;
        count += len * (len.saturating_sub(1)) / 2;
        'outer: for (i, &a) in run.iter().enumerate() {
            for &b in &run[i + 1..] {
                if pairs.len() >= cap {
                    break 'outer;
                }
                pairs.push((edge_from_index(table.n, a), edge_from_index(table.n, b)));
            }
        }
        run_start = k;
    }
    pairs.sort();
    SeparationReport {
        separating: count == 0,
        mode: Mode::Weak,
        family_size: family.len(),
        unseparated_count: count,
        unseparated_pairs: pairs,
        uncovered_edges: uncovered(&table),
    }
}

/// Pairwise oracle: for every pair of edges, look for a path containing
/// exactly one of them. Independent of the signature machinery.
pub fn verify_weak_naive(family: &PathFamily) -> bool {
    let n = family.n();
    let sets: Vec<HashSet<Edge>> = family.paths().iter().map(|p| p.edges().collect()).collect();
    let edges: Vec<Edge> = all_edges(n).collect();
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            if !sets.iter().any(|s| s.contains(e) != s.contains(f)) {
                return false;
            }
        }
    }
    true
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Strong separation: no signature may be a subset of another.
///
/// Signatures are grouped by popcount and a pair is only tested in the
/// direction that can hold. Quadratic in the number of edges.
pub fn verify_strong(family: &PathFamily) -> SeparationReport {
    verify_strong_capped(family, WITNESS_CAP)
}

pub fn verify_strong_capped(family: &PathFamily, cap: usize) -> SeparationReport {
    let table = signatures(family);
    let m = table.edge_count();
    let pops: Vec<usize> = (0..m).map(|i| table.popcount(i)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (pops[i], i));

    let mut count = 0u64;
    let mut pairs = Vec::new();
    for (k, &a) in order.iter().enumerate() {
        let sa = table.get(a);
        for &b in &order[k + 1..] {
            // pops[a] <= pops[b], so only a ⊆ b can hold.
            if is_subset(sa, table.get(b)) {
                count += 1;
                if pairs.len() < cap {
                    let (ea, eb) = (edge_from_index(table.n, a), edge_from_index(table.n, b));
                    pairs.push(if ea < eb { (ea, eb) } else { (eb, ea) });
                }
            }
        }
    }
    pairs.sort();
    SeparationReport {
        separating: count == 0,
        mode: Mode::Strong,
        family_size: family.len(),
        unseparated_count: count,
        unseparated_pairs: pairs,
        uncovered_edges: uncovered(&table),
    }
}

pub fn verify(family: &PathFamily, mode: Mode) -> SeparationReport {
    match mode {
        Mode::Weak => verify_weak(family),
        Mode::Strong => verify_strong(family),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// Two types whose same-type pairs share a clockwise distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DistanceClash {
    pub type_a: usize,
    pub type_b: usize,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub n: usize,
    pub parity: Parity,
    pub gp1: bool,
    pub gp2: bool,
    pub gp3: bool,
    pub missing_types: Vec<usize>,
    pub once_types: Vec<usize>,
    pub overfull_types: Vec<usize>,
    pub clashes: Vec<DistanceClash>,
    /// Even `n` only: types with a same-type pair at distance `n/2`.
    pub antipodal_types: Vec<usize>,
}

impl GeneratorReport {
    pub fn is_generator(&self) -> bool {
        self.gp1 && self.gp2 && self.gp3
    }
}

fn typed_by_type(n: usize, edges: &[TypedEdge]) -> BTreeMap<usize, Vec<TypedEdge>> {
    let mut by_type: BTreeMap<usize, Vec<TypedEdge>> = BTreeMap::new();
    for e in edges {
        by_type.entry(e.etype).or_default().push(*e);
    }
    debug_assert!(by_type.keys().all(|&x| x >= 1 && x <= n / 2));
    by_type
}

/// Distance bookkeeping shared by the generator and F-separator checks:
/// records pairwise distances per type and reports values seen for two types.
fn distance_clashes(
    n: usize,
    by_type: &BTreeMap<usize, Vec<TypedEdge>>,
    restrict: Option<&BTreeSet<usize>>,
) -> (Vec<DistanceClash>, Vec<usize>) {
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut clashes = BTreeSet::new();
    let mut antipodal = BTreeSet::new();
    for (&x, es) in by_type {
        if restrict.is_some_and(|r| !r.contains(&x)) || es.len() < 2 {
            continue;
        }
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                let d = cd_edges(n, &es[i], &es[j]);
                if n.is_multiple_of(2) && 2 * d == n {
                    antipodal.insert(x);
                }
                match owner.get(&d) {
                    Some(&y) if y != x => {
                        clashes.insert(DistanceClash {
                            type_a: y.min(x),
                            type_b: y.max(x),
                            distance: d,
                        });
                    }
                    Some(_) => {}
                    None => {
                        owner.insert(d, x);
                    }
                }
            }
        }
    }
    (
        clashes.into_iter().collect(),
        antipodal.into_iter().collect(),
    )
}

/// Evaluates the three generator-path conditions for the parity of `n`.
pub fn check_generator(path: &PathSeq) -> GeneratorReport {
    let n = path.n();
    let even = n.is_multiple_of(2);
    let by_type = typed_by_type(n, &path.typed_edges());
    let missing_types: Vec<usize> = (1..=n / 2).filter(|x| !by_type.contains_key(x)).collect();
    let once_types: Vec<usize> = by_type
        .iter()
        .filter(|(&x, es)| es.len() == 1 && !(even && 2 * x == n))
        .map(|(&x, _)| x)
        .collect();
    let overfull_types: Vec<usize> = by_type
        .iter()
        .filter(|(_, es)| es.len() > 2)
        .map(|(&x, _)| x)
        .collect();
    let (clashes, antipodal_types) = distance_clashes(n, &by_type, None);
    GeneratorReport {
        n,
        parity: if even { Parity::Even } else { Parity::Odd },
        gp1: missing_types.is_empty(),
        gp2: once_types.len() <= 1 && overfull_types.is_empty(),
        gp3: clashes.is_empty() && antipodal_types.is_empty(),
        missing_types,
        once_types,
        overfull_types,
        clashes,
        antipodal_types,
    }
}

/// Partition of the type universe into well-behaved types `f` and defective
/// types `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FSplit {
    pub f: BTreeSet<usize>,
    pub d: BTreeSet<usize>,
}

impl FSplit {
    /// `d` becomes the complement of `f` in `1..=floor(n/2)`.
    pub fn from_f(n: usize, f: BTreeSet<usize>) -> Self {
        let d = (1..=n / 2).filter(|x| !f.contains(x)).collect();
        FSplit { f, d }
    }

    pub fn is_partition_of(&self, n: usize) -> bool {
        self.f.is_disjoint(&self.d)
            && self.f.len() + self.d.len() == n / 2
            && self.f.iter().chain(&self.d).all(|&x| x >= 1 && x <= n / 2)
    }

    /// `|D ∪ {1}|`.
    pub fn fixing_count(&self) -> usize {
        self.d.len() + usize::from(!self.d.contains(&1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FSeparatorReport {
    pub partition: bool,
    /// Every type of `F ∪ D` occurs at least once.
    pub coverage: bool,
    /// Every type of `F` occurs exactly twice.
    pub doubled: bool,
    /// The `F`-typed edges satisfy the distance condition.
    pub distances: bool,
    pub missing_types: Vec<usize>,
    pub miscounted_types: Vec<usize>,
    pub clashes: Vec<DistanceClash>,
    pub antipodal_types: Vec<usize>,
}

impl FSeparatorReport {
    pub fn passes(&self) -> bool {
        self.partition && self.coverage && self.doubled && self.distances
    }
}

/// Checks an arbitrary edge collection against an F/D split.
pub fn check_f_separator_edges(n: usize, edges: &[Edge], split: &FSplit) -> FSeparatorReport {
    let typed: Vec<TypedEdge> = edges
        .iter()
        .map(|e| TypedEdge::from_endpoints(n, e.0, e.1).expect("edge on K_n"))
        .collect();
    let by_type = typed_by_type(n, &typed);
    let missing_types: Vec<usize> = split
        .f
        .iter()
        .chain(&split.d)
        .filter(|x| !by_type.contains_key(x))
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let miscounted_types: Vec<usize> = split
        .f
        .iter()
        .filter(|x| by_type.get(x).map_or(0, Vec::len) != 2)
        .copied()
        .collect();
    let (clashes, antipodal_types) = distance_clashes(n, &by_type, Some(&split.f));
    FSeparatorReport {
        partition: split.is_partition_of(n),
        coverage: missing_types.is_empty(),
        doubled: miscounted_types.is_empty(),
        distances: clashes.is_empty() && antipodal_types.is_empty(),
        missing_types,
        miscounted_types,
        clashes,
        antipodal_types,
    }
}

pub fn check_f_separator(path: &PathSeq, split: &FSplit) -> FSeparatorReport {
    let edges: Vec<Edge> = path.edges().collect();
    check_f_separator_edges(path.n(), &edges, split)
}

/// Types whose `m >= 2` edges sit at consecutive circular gaps of exactly `n/m`.
pub fn equally_spaced_types_edges(n: usize, edges: &[Edge]) -> BTreeSet<usize> {
    let mut starts: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for e in edges {
        let t = TypedEdge::from_endpoints(n, e.0, e.1).expect("edge on K_n");
        starts.entry(t.etype).or_default().push(t.start);
    }
    let mut out = BTreeSet::new();
    for (x, mut s) in starts {
        let m = s.len();
        if m < 2 || !n.is_multiple_of(m) {
            continue;
        }
        s.sort_unstable();
        let gap = n / m;
        let ok = (0..m).all(|i| {
            let next = if i + 1 < m { s[i + 1] } else { s[0] + n };
            next - s[i] == gap
        });
        if ok {
            out.insert(x);
        }
    }
    out
}

pub fn equally_spaced_types(path: &PathSeq) -> BTreeSet<usize> {
    let edges: Vec<Edge> = path.edges().collect();
    equally_spaced_types_edges(path.n(), &edges)
}

/// Crossing number of an edge for odd `n`.
///
/// With `M_k = {(k - j, k + j)}` the rotation of the central matching that
/// leaves `k` uncovered, the edge lies in the unique `M_k` with
/// `2k ≡ u + v (mod n)`. The crossing number is the type of the `M_k` edge at
/// signed vertex 0, and 0 for edges of `M_0` itself.
pub fn crossing_number(n: usize, e: Edge) -> Result<usize> {
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::NeedOddOrder(n));
    }
    crate::circulant::edge_type(n, e.0, e.1)?;
    let inv2 = n.div_ceil(2);
    let k = ((e.0 + e.1) % n) * inv2 % n;
    if k == 0 {
        return Ok(0);
    }
    // M_k pairs vertex 0 with 2k.
    let partner = (2 * k) % n;
    Ok(cd(n, n, if partner == 0 { n } else { partner }))
}

/// Quantities from the counting argument behind the `n - 1` lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundDiagnostics {
    pub uncovered: usize,
    /// Edges lying on every path (0 for an empty family).
    pub in_every_path: usize,
    /// For each path, the number of edges found on no other path.
    pub unique_per_path: Vec<usize>,
    /// `histogram[k]` = number of edges on exactly `k` paths.
    pub multiplicity_histogram: Vec<usize>,
}

pub fn lb_diagnostics(family: &PathFamily) -> LowerBoundDiagnostics {
    let table = signatures(family);
    let k = family.len();
    let mut hist = vec![0usize; k + 1];
    let mut unique = vec![0usize; k];
    for i in 0..table.edge_count() {
        let pop = table.popcount(i);
        hist[pop] += 1;
        if pop == 1 {
            let sig = table.get(i);
            let w = sig.iter().position(|&w| w != 0).unwrap();
            unique[w * 64 + sig[w].trailing_zeros() as usize] += 1;
        }
    }
    LowerBoundDiagnostics {
        uncovered: hist[0],
        in_every_path: if k == 0 { 0 } else { hist[k] },
        unique_per_path: unique,
        multiplicity_histogram: hist,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize, v: &[usize]) -> PathSeq {
        PathSeq::new(n, v.to_vec()).unwrap()
    }

    fn single_edges(n: usize) -> PathFamily {
        PathFamily::new(n, all_edges(n).map(|e| path(n, &[e.0, e.1])).collect()).unwrap()
    }

    #[test]
    fn signatures_examples() {
        let fam = PathFamily::rotations(&path(5, &[1, 3, 2, 5]));
        let t = signatures(&fam);
        let sigs: BTreeSet<Vec<u64>> = (0..10).map(|i| t.get(i).to_vec()).collect();
        assert_eq!(sigs.len(), 10);
        assert!((0..10).all(|i| (1..=2).contains(&t.popcount(i))));

        let t = signatures(&PathFamily::empty(5));
        assert!((0..10).all(|i| t.popcount(i) == 0));

        let t = signatures(&PathFamily::new(3, vec![path(3, &[1, 2, 3])]).unwrap());
        assert_eq!(t.members(Edge(1, 2)), vec![0]);
        assert_eq!(t.members(Edge(2, 3)), vec![0]);
        assert!(t.members(Edge(1, 3)).is_empty());
    }

    #[test]
    fn weak_examples() {
        assert!(verify_weak(&single_edges(4)).separating);
        assert!(verify_weak(&PathFamily::rotations(&path(5, &[1, 3, 2, 5]))).separating);

        let r = verify_weak(&PathFamily::new(4, vec![path(4, &[1, 2, 3])]).unwrap());
        assert!(!r.separating);
        assert!(r.unseparated_pairs.contains(&(Edge(1, 2), Edge(2, 3))));
        assert_eq!(r.uncovered_edges.len(), 4);
        // one pair on the path plus C(4,2) among uncovered edges
        assert_eq!(r.unseparated_count, 1 + 6);
    }

    #[test]
    fn witness_cap_keeps_exact_count() {
        let r = verify_weak_capped(&PathFamily::empty(8), 5);
        assert_eq!(r.unseparated_pairs.len(), 5);
        assert_eq!(r.unseparated_count, 28 * 27 / 2);
    }

    #[test]
    fn strong_rejects_p5() {
        let fam = PathFamily::rotations(&path(5, &[1, 3, 2, 5]));
        assert!(verify_weak(&fam).separating);
        assert!(!verify_strong(&fam).separating);
    }

    #[test]
    fn strong_single_edges() {
        assert!(verify_strong(&single_edges(5)).separating);
    }

    #[test]
    fn generator_examples() {
        assert!(check_generator(&path(7, &[1, 2, 3, 5, 7, 4])).is_generator());
        let r = check_generator(&path(5, &[1, 2, 3, 4, 5]));
        assert!(!r.gp1);
        assert_eq!(r.missing_types, vec![2]);
        let p16 = path(16, &[1, 11, 13, 15, 14, 3, 8, 12, 16, 9, 2, 10, 7, 4, 5]);
        let r = check_generator(&p16);
        assert_eq!(r.parity, Parity::Even);
        assert!(r.is_generator(), "{r:?}");
    }

    #[test]
    fn generator_overfull_type() {
        // three 1-type edges
        let r = check_generator(&path(7, &[1, 2, 3, 4]));
        assert!(!r.gp2);
        assert_eq!(r.overfull_types, vec![1]);
    }

    #[test]
    fn generator_antipodal_pair() {
        // 1-type edges starting at 1 and 4 on K_6
        let r = check_generator(&path(6, &[2, 1, 3, 5, 4]));
        assert_eq!(r.antipodal_types, vec![1]);
        assert!(!r.gp3);
    }

    #[test]
    fn f_separator_examples() {
        let p7 = path(7, &[1, 2, 3, 5, 7, 4]);
        let gen = check_generator(&p7);
        let f: BTreeSet<usize> = (1..=3).filter(|x| !gen.once_types.contains(x)).collect();
        assert!(check_f_separator(&p7, &FSplit::from_f(7, f)).passes());

        // a central matching alone has a single 1-type edge
        let m0: Vec<Edge> = (1..=3).map(|i| Edge::new(7 - i, i)).collect();
        let r = check_f_separator_edges(7, &m0, &FSplit::from_f(7, [1].into()));
        assert!(!r.doubled);
        assert_eq!(r.miscounted_types, vec![1]);
    }

    #[test]
    fn equally_spaced_examples() {
        // 1-type edges at 1 and 4 on K_6
        assert_eq!(equally_spaced_types(&path(6, &[2, 1, 3, 5, 4])), [1].into());
        // 2-type edges at 1, 4, 7 on K_9
        let edges = [Edge(1, 3), Edge(4, 6), Edge(7, 9)];
        assert_eq!(equally_spaced_types_edges(9, &edges), [2].into());
        assert!(equally_spaced_types_edges(9, &edges[..2]).is_empty());
        // odd n with at most two edges per type never qualifies
        assert!(equally_spaced_types(&path(7, &[1, 2, 3, 5, 7, 4])).is_empty());
    }

    #[test]
    fn crossing_number_examples() {
        let s = crate::circulant::SignedLabeling::new(35).unwrap();
        assert_eq!(crossing_number(35, s.edge(-5, 5)).unwrap(), 0);
        assert_eq!(crossing_number(35, s.edge(1, -16)).unwrap(), 15);
        assert_eq!(crossing_number(35, s.edge(-2, 5)).unwrap(), 3);
        assert!(crossing_number(8, Edge(1, 2)).is_err());
    }

    #[test]
    fn crossing_number_by_matching_enumeration() {
        for n in [13usize, 35] {
            let s = crate::circulant::SignedLabeling::new(n).unwrap();
            let h = s.half();
            for k in -h..=h {
                // M_k built explicitly; the edge at signed 0 is (0, 2k).
                let zero_type = if k == 0 {
                    0
                } else {
                    crate::circulant::edge_type(n, n, crate::circulant::wrap(n, 2 * k)).unwrap()
                };
                for j in 1..=h {
                    let e = Edge::new(
                        crate::circulant::wrap(n, k - j),
                        crate::circulant::wrap(n, k + j),
                    );
                    assert_eq!(crossing_number(n, e).unwrap(), zero_type, "n={n} k={k}");
                }
                if k != 0 {
                    let e = Edge::new(
                        crate::circulant::wrap(n, -k - 1),
                        crate::circulant::wrap(n, -k + 1),
                    );
                    assert_eq!(crossing_number(n, e).unwrap(), zero_type);
                }
            }
        }
    }

    #[test]
    fn lb_examples() {
        let fam = PathFamily::rotations(&path(5, &[1, 3, 2, 5]));
        let d = lb_diagnostics(&fam);
        assert!(d.uncovered <= 1);
        assert_eq!(d.unique_per_path.len(), 5);
        assert_eq!(d.multiplicity_histogram.iter().sum::<usize>(), 10);

        let d = lb_diagnostics(&PathFamily::empty(6));
        assert_eq!(d.uncovered, 15);

        let h = path(5, &[1, 2, 3, 4, 5]);
        let d = lb_diagnostics(&PathFamily::new(5, vec![h.clone(), h]).unwrap());
        assert_eq!(d.multiplicity_histogram[2], 4);
        assert_eq!(d.unique_per_path, vec![0, 0]);
        assert_eq!(d.in_every_path, 4);
    }
}
