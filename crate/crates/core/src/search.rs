//! Exhaustive search: generator paths by backtracking, and exact minimum
//! separating path systems for very small `n`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::circulant::{all_edges, cd, edge_index, PathFamily, PathSeq, TypedEdge, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    /// The whole space was enumerated without success.
    Exhausted,
    BudgetExceeded,
}

/// Limits on a search. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub wall_time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget {
            max_nodes: None,
            wall_time_limit: None,
        }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            wall_time_limit: None,
        }
    }

    pub fn with_time(mut self, limit: Duration) -> Self {
        self.wall_time_limit = Some(limit);
        self
    }
}

struct Meter {
    budget: SearchBudget,
    started: Instant,
    nodes: u64,
    blown: bool,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Meter {
            budget,
            started: Instant::now(),
            nodes: 0,
            blown: false,
        }
    }

    /// Counts one node; returns false once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.blown {
            return false;
        }
        self.nodes += 1;
        if self.budget.max_nodes.is_some_and(|m| self.nodes > m) {
            self.blown = true;
        }
        if self.nodes.is_multiple_of(4096)
            && self
                .budget
                .wall_time_limit
                .is_some_and(|t| self.started.elapsed() > t)
        {
            self.blown = true;
        }
        !self.blown
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSearch {
    pub path: Option<PathSeq>,
    pub outcome: Outcome,
    pub nodes: u64,
}

struct GenState {
    n: usize,
    half_type: Option<usize>,
    path: Vec<Vertex>,
    used: Vec<bool>,
    /// Edges placed so far, per type.
    by_type: Vec<Vec<TypedEdge>>,
    /// For each clockwise distance, the type whose pair sits there.
    owner: Vec<usize>,
    missing: usize,
    /// Types seen exactly once, ignoring type n/2.
    once: usize,
}

impl GenState {
    fn new(n: usize) -> Self {
        GenState {
            n,
            half_type: n.is_multiple_of(2).then_some(n / 2),
            path: vec![],
            used: vec![false; n + 1],
            by_type: vec![vec![]; n / 2 + 1],
            owner: vec![0; n / 2 + 1],
            missing: n / 2,
            once: 0,
        }
    }

    fn counts_for_once(&self, x: usize) -> bool {
        self.half_type != Some(x)
    }

    /// Tries to append `v`; returns false (state unchanged) if an invariant
    /// would break.
    fn push(&mut self, v: Vertex) -> bool {
        let Some(&u) = self.path.last() else {
            self.path.push(v);
            self.used[v] = true;
            return true;
        };
        let e = TypedEdge::from_endpoints(self.n, u, v).unwrap();
        let x = e.etype;
        match self.by_type[x].len() {
            0 => {}
            1 => {
                let d = crate::circulant::cd_edges(self.n, &self.by_type[x][0], &e);
                if self.owner[d] != 0 || (self.half_type.is_some() && 2 * d == self.n) {
                    return false;
                }
            }
            _ => return false,
        }
        match self.by_type[x].len() {
            0 => {
                self.missing -= 1;
                if self.counts_for_once(x) {
                    self.once += 1;
                }
            }
            _ => {
                let d = crate::circulant::cd_edges(self.n, &self.by_type[x][0], &e);
                self.owner[d] = x;
                if self.counts_for_once(x) {
                    self.once -= 1;
                }
            }
        }
        self.by_type[x].push(e);
        self.path.push(v);
        self.used[v] = true;
        true
    }

    fn pop(&mut self) {
        let v = self.path.pop().unwrap();
        self.used[v] = false;
        let Some(&u) = self.path.last() else { return };
        let x = cd(self.n, u, v);
        let e = self.by_type[x].pop().unwrap();
        match self.by_type[x].len() {
            0 => {
                self.missing += 1;
                if self.counts_for_once(x) {
                    self.once -= 1;
                }
            }
            _ => {
                let d = crate::circulant::cd_edges(self.n, &self.by_type[x][0], &e);
                self.owner[d] = 0;
                if self.counts_for_once(x) {
                    self.once += 1;
                }
            }
        }
    }

    fn is_generator(&self) -> bool {
        self.missing == 0 && self.once <= 1
    }

    /// Lower bound on the edges still needed to reach GP1 and GP2.
    fn edges_needed(&self) -> usize {
        let half_missing = usize::from(self.half_type.is_some_and(|h| self.by_type[h].is_empty()));
        let missing = self.missing - half_missing;
        // every missing type arrives once; all but one single type must double
        half_missing + missing + (missing + self.once).saturating_sub(1)
    }

    fn edges_left(&self) -> usize {
        self.n - self.path.len()
    }
}

/// Depth-first search for a generator path on `K_n`.
///
/// The path starts at vertex 1 and its first step goes clockwise by at most
/// `n/2`; extensions are tried in ascending label order, so the result is the
/// first generator in that order.
pub fn search_generator(n: usize, budget: SearchBudget) -> GeneratorSearch {
    let mut meter = Meter::new(budget);
    let mut st = GenState::new(n);
    st.push(1);
    let found = meter.tick() && dfs(&mut st, &mut meter);
    let path = found.then(|| PathSeq::new(n, st.path.clone()).expect("search keeps a path"));
    GeneratorSearch {
        outcome: if found {
            Outcome::Found
        } else if meter.blown {
            Outcome::BudgetExceeded
        } else {
            Outcome::Exhausted
        },
        path,
        nodes: meter.nodes,
    }
}

fn dfs(st: &mut GenState, meter: &mut Meter) -> bool {
    if st.path.len() >= 2 && st.is_generator() {
        return true;
    }
    if st.edges_needed() > st.edges_left() {
        return false;
    }
    let n = st.n;
    let candidates: Vec<Vertex> = if st.path.len() == 1 {
        (2..=1 + n / 2).collect()
    } else {
        (1..=n).filter(|&v| !st.used[v]).collect()
    };
    for v in candidates {
        if !st.push(v) {
            continue;
        }
        if !meter.tick() {
            st.pop();
            return false;
        }
        if dfs(st, meter) {
            return true;
        }
        st.pop();
        if meter.blown {
            return false;
        }
    }
    false
}

/// Every path of `K_n` with at least one edge, one orientation each
/// (first vertex smaller than last), as edge bitmasks.
fn enumerate_paths(n: usize) -> Vec<(Vec<Vertex>, u64)> {
    fn extend(
        n: usize,
        cur: &mut Vec<Vertex>,
        used: &mut [bool],
        out: &mut Vec<(Vec<Vertex>, u64)>,
    ) {
        if cur.len() >= 2 && cur[0] < *cur.last().unwrap() {
            let mask = cur
                .windows(2)
                .fold(0u64, |m, w| m | 1 << edge_index(n, w[0], w[1]));
            out.push((cur.clone(), mask));
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                extend(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n + 1];
    for s in 1..=n {
        used[s] = true;
        let mut cur = vec![s];
        extend(n, &mut cur, &mut used, &mut out);
        used[s] = false;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMinimum {
    pub size: usize,
    pub family: PathFamily,
    /// Sizes below `size` that were refuted exhaustively.
    pub refuted_below: usize,
    pub nodes: u64,
}

/// Minimum size of a separating path system of `K_n`, for `2 <= n <= 5`.
///
/// Iterative deepening on the family size from 0 upwards; each level picks
/// paths in increasing index order and prunes when a class of edges with
/// equal partial signatures is larger than the remaining paths can split.
pub fn exact_min_sps(n: usize, budget: SearchBudget) -> Result<ExactMinimum> {
    if !(2..=5).contains(&n) {
        return Err(Error::Inapplicable {
            method: "exact",
            n,
            reason: "exact search is limited to 2 <= n <= 5".into(),
        });
    }
    let m = n * (n - 1) / 2;
    let paths = enumerate_paths(n);
    let masks: Vec<u64> = paths.iter().map(|p| p.1).collect();
    let mut meter = Meter::new(budget);
    for k in 0..=m {
        let mut chosen = Vec::with_capacity(k);
        let sigs = vec![0u32; m];
        if pick(&masks, m, k, 0, &mut chosen, &sigs, &mut meter) {
            let family = PathFamily::new(
                n,
                chosen
                    .iter()
                    .map(|&i| PathSeq::new(n, paths[i].0.clone()))
                    .collect::<Result<_>>()?,
            )?;
            return Ok(ExactMinimum {
                size: k,
                family,
                refuted_below: k,
                nodes: meter.nodes,
            });
        }
        if meter.blown {
            return Err(Error::BudgetExceeded { nodes: meter.nodes });
        }
    }
    unreachable!("single-edge paths always separate")
}

fn classes_fit(sigs: &[u32], remaining: usize) -> bool {
    let mut sorted = sigs.to_vec();
    sorted.sort_unstable();
    let cap = 1usize << remaining.min(20);
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            if run > cap {
                return false;
            }
        } else {
            run = 1;
        }
    }
    true
}

fn pick(
    masks: &[u64],
    m: usize,
    k: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    sigs: &[u32],
    meter: &mut Meter,
) -> bool {
    if !meter.tick() {
        return false;
    }
    let remaining = k - chosen.len();
    if !classes_fit(sigs, remaining) {
        return false;
    }
    if remaining == 0 {
        return true;
    }
    let bit = chosen.len() as u32;
    for i in from..masks.len() {
        if masks.len() - i < remaining {
            break;
        }
        let next: Vec<u32> = (0..m)
            .map(|e| sigs[e] | (((masks[i] >> e) & 1) as u32) << bit)
            .collect();
        chosen.push(i);
        if pick(masks, m, k, i + 1, chosen, &next, meter) {
            return true;
        }
        chosen.pop();
        if meter.blown {
            return false;
        }
    }
    false
}

/// Number of edges of `K_n`; handy for lower-bound arithmetic in callers.
pub fn edge_total(n: usize) -> usize {
    all_edges(n).count()
}
