//! The linear-forest construction of an F-separator path for odd `n` with
//! `n ≡ 3, 5 (mod 6)`.
//!
//! Everything here is computed in signed labels (`0, ±1, …, ±(n-1)/2`, see
//! [`SignedLabeling`]) and stored in standard labels. The forest
//! `L = M_0 ∪ R ∪ B` holds the central matching plus two runs of long edges
//! whose types each appear exactly twice. Connector edges of small type then
//! join `L` into one Hamiltonian path.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::circulant::{
    cd, decompose_linear_forest, Edge, EdgeSet, PathSeq, SignedLabeling, TypedEdge,
};
use crate::error::{Error, Result};
use crate::verify::{check_f_separator, equally_spaced_types, FSeparatorReport, FSplit};

/// Smallest order from which the connector claims are guaranteed.
pub const CONNECT_MIN_N: usize = 45;

/// The forest `L` and its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestTrace {
    pub n: usize,
    pub m0: Vec<Edge>,
    pub r1: Vec<Edge>,
    pub r2: Vec<Edge>,
    pub b: Vec<Edge>,
    pub x_b: usize,
    pub r: usize,
    pub t: usize,
}

impl ForestTrace {
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.m0
            .iter()
            .chain(&self.r1)
            .chain(&self.r2)
            .chain(&self.b)
            .copied()
    }

    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet::from_edges(self.n, self.edges())
    }

    /// Types carried by `R ∪ B`.
    pub fn long_types(&self) -> BTreeSet<usize> {
        self.r1
            .iter()
            .chain(&self.r2)
            .chain(&self.b)
            .map(|e| cd(self.n, e.0, e.1))
            .collect()
    }
}

/// Connector edges added on top of `L`, grouped by stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectTrace {
    /// Joins the paths ending in the negative low segment.
    pub c_b: Vec<Edge>,
    /// `C_0, C_1, …, C_ℓ`: joins for the paths leaving the positive low segment.
    pub c_sets: Vec<Vec<Edge>>,
    /// The edge `(5, 7)`.
    pub special: Option<Edge>,
    /// The 3-type edge `(0, 3)`.
    pub zero_three: Option<Edge>,
    pub e_v: Option<Edge>,
    pub e_m: Vec<Edge>,
    /// Remaining even-type joins.
    pub c_a: Vec<Edge>,
    /// Joins made outside the even/short rule (only when the pipeline runs
    /// below its guaranteed range).
    pub relaxed: Vec<Edge>,
    /// Connector steps that were skipped because they would break the forest
    /// (only in lenient mode).
    pub skipped: Vec<Edge>,
    /// Whether the final joins were made in descending endpoint order.
    pub reversed: bool,
}

impl ConnectTrace {
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.c_b
            .iter()
            .chain(self.c_sets.iter().flatten())
            .chain(&self.special)
            .chain(&self.zero_three)
            .chain(&self.e_v)
            .chain(&self.e_m)
            .chain(&self.c_a)
            .chain(&self.relaxed)
            .copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullTrace {
    pub forest: ForestTrace,
    pub connect: ConnectTrace,
}

/// An F-separator path with its split and how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FSeparatorResult {
    pub path: PathSeq,
    pub split: FSplit,
    pub trace: Option<FullTrace>,
}

impl FSeparatorResult {
    pub fn n(&self) -> usize {
        self.path.n()
    }
}

/// Whether the forest construction applies to `n`.
pub fn forest_applies(n: usize) -> bool {
    n >= 13 && matches!(n % 6, 3 | 5)
}

fn inapplicable(n: usize, reason: &str) -> Error {
    Error::Inapplicable {
        method: "main",
        n,
        reason: reason.into(),
    }
}

/// Builds `L = M_0 ∪ R_1 ∪ R_2 ∪ B` and checks that it is a linear forest.
pub fn build_linear_forest(n: usize) -> Result<ForestTrace> {
    if !forest_applies(n) {
        return Err(inapplicable(n, "needs n ≡ 3, 5 (mod 6) and n >= 13"));
    }
    let s = SignedLabeling::new(n)?;
    let h = s.half();
    let ni = n as i64;

    let m0 = (1..=h).map(|i| s.edge(-i, i)).collect();
    let r1 = vec![s.edge(1, -(ni - 3) / 2), s.edge(-1, -h)];
    let r = if h % 2 == 1 {
        (ni - 7) / 4
    } else {
        (ni - 9) / 4
    };
    let r2 = (0..r).map(|k| s.edge(-3 - 2 * k, h - k)).collect();

    // x_b = 2 i_b + 3 with i_b even, i.e. the largest x ≡ 3 (mod 4) with
    // 4x <= n - 1.
    let cap = (ni - 1) / 4;
    let x_b = cap - (cap - 3).rem_euclid(4);
    let t = (x_b + 1) / 2;
    let b = (0..t)
        .map(|k| s.edge(-(x_b - 3) / 2 + 2 * k, (x_b + 3) / 2 + k))
        .collect();

    let trace = ForestTrace {
        n,
        m0,
        r1,
        r2,
        b,
        x_b: x_b as usize,
        r: r as usize,
        t: t as usize,
    };
    let edges = trace.edge_set();
    if edges.len() != trace.edges().count() {
        return Err(Error::Construction(format!("n={n}: forest edges overlap")));
    }
    decompose_linear_forest(&edges)
        .map_err(|v| Error::Construction(format!("n={n}: L is not a linear forest: {v}")))?;
    Ok(trace)
}

/// Incremental linear forest over signed labels with union-find.
struct Joiner {
    s: SignedLabeling,
    deg: Vec<u8>,
    parent: Vec<usize>,
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Joiner {
    fn new(s: SignedLabeling, initial: impl Iterator<Item = Edge>) -> Result<Self> {
        let n = s.n();
        let mut j = Joiner {
            s,
            deg: vec![0; n + 1],
            parent: (0..=n).collect(),
            adj: vec![Vec::new(); n + 1],
            edges: Vec::new(),
        };
        for e in initial {
            if !j.can_join_std(e.0, e.1) {
                return Err(Error::Construction(format!(
                    "initial edge {e} breaks forest"
                )));
            }
            j.link_std(e.0, e.1);
        }
        Ok(j)
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn can_join_std(&mut self, a: usize, b: usize) -> bool {
        a != b && self.deg[a] < 2 && self.deg[b] < 2 && self.find(a) != self.find(b)
    }

    fn link_std(&mut self, a: usize, b: usize) -> Edge {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
        self.deg[a] += 1;
        self.deg[b] += 1;
        self.adj[a].push(b);
        self.adj[b].push(a);
        let e = Edge::new(a, b);
        self.edges.push(e);
        e
    }

    fn std(&self, v: i64) -> usize {
        self.s.to_standard(v)
    }

    fn deg(&self, v: i64) -> u8 {
        self.deg[self.std(v)]
    }

    fn can_join(&mut self, a: i64, b: i64) -> bool {
        let (a, b) = (self.std(a), self.std(b));
        self.can_join_std(a, b)
    }

    /// Adds `(a, b)`; in strict mode a forest violation is an error, otherwise
    /// it is recorded in `skipped`.
    fn join(
        &mut self,
        a: i64,
        b: i64,
        strict: bool,
        skipped: &mut Vec<Edge>,
    ) -> Result<Option<Edge>> {
        if self.can_join(a, b) {
            let (a, b) = (self.std(a), self.std(b));
            return Ok(Some(self.link_std(a, b)));
        }
        let e = self.s.edge(a, b);
        if strict {
            return Err(Error::Construction(format!(
                "n={}: connector {e} (signed ({a},{b})) would create a cycle or degree-3 vertex",
                self.s.n()
            )));
        }
        skipped.push(e);
        Ok(None)
    }

    fn component_count(&self) -> usize {
        self.s.n() - self.edges.len()
    }

    fn is_endpoint(&self, v: i64) -> bool {
        self.deg(v) == 1
    }

    /// The other end of the path through endpoint `v`.
    fn other_end(&self, v: i64) -> i64 {
        let (mut prev, mut cur) = (usize::MAX, self.std(v));
        while let Some(&next) = self.adj[cur].iter().find(|&&w| w != prev) {
            prev = cur;
            cur = next;
        }
        self.s.to_signed(cur)
    }
}

/// Follows a path of `adj` from `start` and returns its other end and length.
fn walk(adj: &BTreeMap<i64, Vec<i64>>, start: i64) -> (i64, usize) {
    let (mut prev, mut cur, mut len) = (None, start, 0);
    while let Some(&next) = adj[&cur].iter().find(|&&w| Some(w) != prev) {
        prev = Some(cur);
        cur = next;
        len += 1;
    }
    (cur, len)
}

/// Connects `L` into a single F-separator path. Requires `n >= 45`.
pub fn connect_forest(trace: &ForestTrace) -> Result<FSeparatorResult> {
    if trace.n < CONNECT_MIN_N {
        return Err(inapplicable(trace.n, "connector claims need n >= 45"));
    }
    connect(trace, true)
}

/// Runs the same connector stages for any `n`, skipping steps that would
/// break the forest. The result still has to pass verification before use.
pub fn connect_forest_lenient(trace: &ForestTrace) -> Result<FSeparatorResult> {
    connect(trace, false)
}

fn connect(trace: &ForestTrace, strict: bool) -> Result<FSeparatorResult> {
    let mut result = connect_ordered(trace, strict, false)?;
    if !equally_spaced_types(&result.path).is_empty() {
        result = connect_ordered(trace, strict, true)?;
        let bad = equally_spaced_types(&result.path);
        if !bad.is_empty() {
            return Err(Error::Construction(format!(
                "n={}: equally spaced types {bad:?} in both join orders; trace: {:?}",
                trace.n, result.trace
            )));
        }
    }
    Ok(result)
}

fn connect_ordered(trace: &ForestTrace, strict: bool, reversed: bool) -> Result<FSeparatorResult> {
    let n = trace.n;
    let s = SignedLabeling::new(n)?;
    let h = s.half();
    let x_b = trace.x_b as i64;
    let r = trace.r as i64;
    let mut j = Joiner::new(s, trace.edges())?;
    let mut ct = ConnectTrace {
        reversed,
        ..Default::default()
    };
    let mut skipped = Vec::new();

    // Signed adjacency of L, used to follow paths for the T+ bookkeeping.
    let mut adj: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for e in trace.edges() {
        let (a, b) = (s.to_signed(e.0), s.to_signed(e.1));
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }

    // C_B: zig-zag through the even endpoints of [a1, a2] with 2-type edges.
    let a1 = -x_b - 1;
    let a2 = -(x_b - 3) / 2 - 2;
    // The formula runs past the last path once the interval is used up, so
    // only joins between distinct components are taken.
    let mut k = 0;
    while a2 - 4 * k > a1 {
        let hi = (a2 - 4 * k, a2 - 2 - 4 * k);
        let lo = (a1 + 2 + 4 * k, a1 + 4 + 4 * k);
        for (a, b) in [hi, lo] {
            if a.min(b) < a1 || a.max(b) > a2 {
                continue;
            }
            if j.is_endpoint(a) && j.is_endpoint(b) && j.can_join(a, b) {
                ct.c_b.extend(j.join(a, b, strict, &mut skipped)?);
            }
        }
        k += 1;
    }

    // The chain from -x_b - 1 ends at 0 or at a second T- endpoint, nominally
    // -(3x_b + 7)/4; the actual end is what e_v has to pick up.
    let chain_end = if j.is_endpoint(a1) {
        Some(j.other_end(a1)).filter(|&v| v != 0)
    } else {
        None
    };

    // C_0: (9,11), (13,15), … inside [9, (x_b - 1)/2].
    let top = (x_b - 1) / 2;
    let mut c0 = Vec::new();
    let mut v = 9;
    while v + 2 <= top {
        if let Some(e) = j.join(v, v + 2, strict, &mut skipped)? {
            c0.push(e);
        }
        v += 4;
    }
    ct.c_sets.push(c0);

    // C_1, …, C_ℓ: the path from odd v in [7, top] ends in U- after 2i+1
    // edges for v in T_i; pair consecutive ends within each U_i.
    let mut classes: BTreeMap<usize, Vec<(i64, i64)>> = BTreeMap::new();
    let mut v = 7;
    while v <= top {
        if adj.get(&v).map_or(0, Vec::len) == 1 {
            let (end, len) = walk(&adj, v);
            classes.entry(len).or_default().push((v, end));
        }
        v += 2;
    }
    for (_, members) in classes {
        let mut ci = Vec::new();
        for pair in members.chunks(2) {
            if let [(_, u1), (_, u2)] = pair {
                if let Some(e) = j.join(*u1, *u2, strict, &mut skipped)? {
                    ci.push(e);
                }
            }
        }
        ct.c_sets.push(ci);
    }

    // Without T+ endpoints (x_b < 15) vertex 7 already carries a B edge.
    if 7 <= top {
        ct.special = j.join(5, 7, strict, &mut skipped)?;
    }

    // C_A begins with (0, 3).
    ct.zero_three = j.join(0, 3, strict, &mut skipped)?;

    // e_v from the T- chain end to the largest even endpoint of U- in another
    // component.
    let u_minus_hi = -(h - r + 1);
    if let Some(ev) = chain_end.filter(|&v| j.is_endpoint(v)) {
        let target = (-h..=u_minus_hi)
            .rev()
            .filter(|&u| u % 2 == 0)
            .find(|&u| j.is_endpoint(u) && j.can_join(ev, u));
        if let Some(u) = target {
            ct.e_v = j.join(ev, u, strict, &mut skipped)?;
        }
    }

    // E_M: 1-type joins inside M+ = [x_b + 2, h - r].
    let m_plus: Vec<i64> = (x_b + 2..=h - r).collect();
    for pair in m_plus.chunks(2) {
        if let [a, b] = pair {
            if let Some(e) = j.join(*a, *b, strict, &mut skipped)? {
                ct.e_m.push(e);
            }
        }
    }

    // Remaining joins among even endpoints of [-h, -x_b - 1].
    let short = (n - 1) / 4;
    while j.component_count() > 1 {
        let mut ends: Vec<i64> = (-h..=-x_b - 1).filter(|&u| j.is_endpoint(u)).collect();
        if reversed {
            ends.reverse();
        }
        let mut progress = false;
        for i in 0..ends.len() {
            let a = ends[i];
            if !j.is_endpoint(a) {
                continue;
            }
            // a join must not leave a component whose ends both lie outside
            // the region while other components remain
            let in_region = |v: i64| (-h..=-x_b - 1).contains(&v);
            let partner = ends[i + 1..].iter().copied().find(|&b| {
                let t = cd(n, j.std(a), j.std(b));
                t.is_multiple_of(2)
                    && t <= short
                    && j.is_endpoint(b)
                    && j.can_join(a, b)
                    && (j.component_count() == 2
                        || in_region(j.other_end(a))
                        || in_region(j.other_end(b)))
            });
            if let Some(b) = partner {
                ct.c_a.extend(j.join(a, b, true, &mut skipped)?);
                progress = true;
                if j.component_count() == 1 {
                    break;
                }
            }
        }
        if !progress {
            // Outside the guaranteed range: join the closest pair of endpoints
            // from different components.
            let mut all: Vec<i64> = (-h..=h).filter(|&u| j.is_endpoint(u)).collect();
            if reversed {
                all.reverse();
            }
            let mut best: Option<(usize, i64, i64)> = None;
            for (i, &a) in all.iter().enumerate() {
                for &b in &all[i + 1..] {
                    if j.can_join(a, b) {
                        let t = cd(n, j.std(a), j.std(b));
                        if best.is_none_or(|(bt, _, _)| t < bt) {
                            best = Some((t, a, b));
                        }
                    }
                }
            }
            let Some((_, a, b)) = best else {
                return Err(Error::Construction(format!("n={n}: cannot join forest")));
            };
            if strict {
                return Err(Error::Construction(format!(
                    "n={n}: no even short join available; closest is signed ({a},{b})"
                )));
            }
            ct.relaxed.extend(j.join(a, b, true, &mut skipped)?);
        }
    }
    ct.skipped = skipped;

    let edges = EdgeSet::from_edges(n, j.edges.iter().copied());
    let paths = decompose_linear_forest(&edges)
        .map_err(|v| Error::Construction(format!("n={n}: connected graph is not a path: {v}")))?;
    let [path] = <[PathSeq; 1]>::try_from(paths)
        .map_err(|p| Error::Construction(format!("n={n}: {} components remain", p.len())))?;
    let split = split_from_path(&path);
    Ok(FSeparatorResult {
        path,
        split,
        trace: Some(FullTrace {
            forest: trace.clone(),
            connect: ct,
        }),
    })
}

/// F = types appearing exactly twice whose pair distances are pairwise
/// distinct. On a clash the larger type moves to D.
pub fn split_from_path(path: &PathSeq) -> FSplit {
    let n = path.n();
    let mut by_type: BTreeMap<usize, Vec<TypedEdge>> = BTreeMap::new();
    for e in path.typed_edges() {
        by_type.entry(e.etype).or_default().push(e);
    }
    let mut f: BTreeSet<usize> = by_type
        .iter()
        .filter(|(&x, es)| es.len() == 2 && !(n.is_multiple_of(2) && 2 * x == n))
        .map(|(&x, _)| x)
        .collect();
    let distance = |x: usize| {
        let es = &by_type[&x];
        crate::circulant::cd_edges(n, &es[0], &es[1])
    };
    f.retain(|&x| !(n.is_multiple_of(2) && 2 * distance(x) == n));
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut dropped = BTreeSet::new();
    for &x in &f {
        let d = distance(x);
        if let std::collections::btree_map::Entry::Vacant(e) = owner.entry(d) {
            e.insert(x);
        } else {
            dropped.insert(x);
        }
    }
    f.retain(|x| !dropped.contains(x));
    FSplit::from_f(n, f)
}

/// `(5n + 16 log2 n + 167) / 32`.
pub fn d_bound(n: usize) -> f64 {
    let n = n as f64;
    (5.0 * n + 16.0 * n.log2() + 167.0) / 32.0
}

/// Full check of a pipeline result: path-ness is structural, this adds the
/// F-separator conditions, the absence of equally spaced types and the
/// size bound on `D ∪ {1}`.
#[derive(Debug, Clone)]
pub struct PipelineCheck {
    pub f_separator: FSeparatorReport,
    pub equally_spaced: BTreeSet<usize>,
    pub fixing_count: usize,
    pub bound: f64,
}

impl PipelineCheck {
    pub fn passes(&self) -> bool {
        self.f_separator.passes()
            && self.equally_spaced.is_empty()
            && self.fixing_count as f64 <= self.bound.ceil()
    }
}

pub fn check_pipeline(result: &FSeparatorResult) -> PipelineCheck {
    PipelineCheck {
        f_separator: check_f_separator(&result.path, &result.split),
        equally_spaced: equally_spaced_types(&result.path),
        fixing_count: result.split.fixing_count(),
        bound: d_bound(result.n()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::crossing_number;

    #[test]
    fn forest_for_35_matches_figure() {
        let t = build_linear_forest(35).unwrap();
        assert_eq!((t.x_b, t.r, t.t), (7, 7, 4));
        let s = SignedLabeling::new(35).unwrap();
        let b: BTreeSet<Edge> = [(-2, 5), (0, 6), (2, 7), (4, 8)]
            .iter()
            .map(|&(a, c)| s.edge(a, c))
            .collect();
        assert_eq!(t.b.iter().copied().collect::<BTreeSet<_>>(), b);
        let r2: Vec<(i64, i64)> = (0..7).map(|k| (-3 - 2 * k, 17 - k)).collect();
        let expected: BTreeSet<Edge> = r2.iter().map(|&(a, c)| s.edge(a, c)).collect();
        assert_eq!(t.r2.iter().copied().collect::<BTreeSet<_>>(), expected);
        let r1: BTreeSet<Edge> = [s.edge(1, -16), s.edge(-1, -17)].into();
        assert_eq!(t.r1.iter().copied().collect::<BTreeSet<_>>(), r1);
        let paths = decompose_linear_forest(&t.edge_set()).unwrap();
        // endpoint count formula (n - 2 x_b + (-1)^((n-1)/2)) / 4
        assert_eq!(paths.len(), (35 - 14 - 1) / 4);
    }

    #[test]
    fn forest_parameter_branches() {
        let t = build_linear_forest(33).unwrap();
        assert_eq!(t.r, 6);
        assert!(build_linear_forest(37).is_err()); // 37 ≡ 1 (mod 6)
        assert!(build_linear_forest(11).is_err());
        assert!(build_linear_forest(34).is_err());
    }

    #[test]
    fn long_types_and_crossing_numbers() {
        let mut clashing = vec![];
        for n in (13..=301).filter(|&n| forest_applies(n)) {
            let t = build_linear_forest(n).unwrap();
            let h = (n - 1) / 2;
            let mut types: Vec<usize> =
                t.r1.iter()
                    .chain(&t.r2)
                    .chain(&t.b)
                    .map(|e| cd(n, e.0, e.1))
                    .collect();
            let count = types.len();
            types.sort_unstable();
            types.dedup();
            assert_eq!(types.len(), count, "n={n}: repeated long type");
            // B has t = (x_b + 1) / 2 edges of types x_b down to (x_b + 1) / 2
            let expected: BTreeSet<usize> =
                (h - t.r - 1..=h).chain(t.x_b.div_ceil(2)..=t.x_b).collect();
            assert_eq!(
                types.into_iter().collect::<BTreeSet<_>>(),
                expected,
                "n={n}"
            );

            let mut crossings: Vec<usize> =
                t.r1.iter()
                    .chain(&t.r2)
                    .chain(&t.b)
                    .map(|&e| crossing_number(n, e).unwrap())
                    .collect();
            assert!(crossings.iter().all(|&c| c != 0), "n={n}");
            crossings.sort_unstable();
            crossings.dedup();
            if crossings.len() != count {
                clashing.push(n);
            }
        }
        // (1, -(n-3)/2) has crossing number (n-5)/2, a multiple of 3 for
        // n = 5 (mod 6), and meets B's multiples of 3 while n is small
        assert_eq!(clashing, vec![17, 29]);
    }

    #[test]
    fn pipeline_at_47_and_45() {
        for n in [45, 47] {
            let res = connect_forest(&build_linear_forest(n).unwrap()).unwrap();
            assert_eq!(res.path.len_edges(), n - 1);
            let check = check_pipeline(&res);
            assert!(check.passes(), "n={n}: {check:?}");
            let trace = res.trace.as_ref().unwrap();
            assert!(trace.connect.skipped.is_empty());
            assert!(trace.connect.relaxed.is_empty());
            for e in &trace.connect.c_b {
                assert_eq!(cd(n, e.0, e.1), 2, "n={n}: C_B edge {e}");
            }
            let path_edges: BTreeSet<Edge> = res.path.edges().collect();
            let trace_edges: BTreeSet<Edge> =
                trace.forest.edges().chain(trace.connect.edges()).collect();
            assert_eq!(path_edges, trace_edges);
        }
    }

    #[test]
    fn connect_rejects_small_n() {
        let t = build_linear_forest(41).unwrap();
        assert!(connect_forest(&t).is_err());
    }
}
