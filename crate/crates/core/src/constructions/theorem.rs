//! Families for all large `n`: rotations of an F-separator path plus fixing
//! paths, adapted to the four residues of `n` modulo 6.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::fixing::fixing_paths;
use super::forest::{
    build_linear_forest, check_pipeline, connect_forest, connect_forest_lenient, forest_applies,
    split_from_path, FSeparatorResult, FullTrace, CONNECT_MIN_N,
};
use super::prime::{is_prime, prime_generator};
use crate::circulant::{cd_edges, Edge, PathFamily, PathSeq, TypedEdge, Vertex};
use crate::error::{Error, Result};
use crate::verify::{check_f_separator, equally_spaced_types, verify_weak, FSplit};

/// Smallest `n` covered by [`theorem_family`].
pub const THEOREM_MIN_N: usize = 44;

/// `(21n + 16 log2 n + 232) / 16`.
pub fn theorem_bound(n: usize) -> f64 {
    let x = n as f64;
    (21.0 * x + 16.0 * x.log2() + 232.0) / 16.0
}

/// Fixing paths `Q_x, Q_x'` on `K_m` for every type in `types` (ascending),
/// relabelled into `K_n`.
fn fixings(m: usize, types: &BTreeSet<usize>, n: usize) -> Result<Vec<PathSeq>> {
    let mut out = Vec::with_capacity(2 * types.len());
    for &x in types {
        let (q, q2) = fixing_paths(m, x)?;
        out.push(q.embed(n)?);
        out.push(q2.embed(n)?);
    }
    Ok(out)
}

fn with_one(d: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut t = d.clone();
    t.insert(1);
    t
}

/// The `n` rotations of `P` followed by `Q_x, Q_x'` for `x ∈ D ∪ {1}`.
pub fn rotations_plus_fixings(result: &FSeparatorResult) -> Result<PathFamily> {
    let n = result.n();
    if n.is_multiple_of(2) {
        return Err(Error::NeedOddOrder(n));
    }
    let bad = equally_spaced_types(&result.path);
    if !bad.is_empty() {
        return Err(Error::Construction(format!(
            "equally spaced types {bad:?} in P"
        )));
    }
    let mut family = PathFamily::rotations(&result.path);
    for q in fixings(n, &with_one(&result.split.d), n)? {
        family.push(q)?;
    }
    Ok(family)
}

/// Which of the four residue cases handles `n`, and the order of the base.
pub fn case_of(n: usize) -> (u8, usize) {
    match n % 6 {
        3 | 5 => (1, n),
        0 | 4 => (2, n - 1),
        1 => (3, n - 2),
        _ => (4, n - 3),
    }
}

/// How a theorem family was assembled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremTrace {
    pub case: u8,
    pub base_n: usize,
    /// `prime` or `forest`.
    pub base_method: String,
    /// Split of the base path, before any enlargement.
    pub base_split: FSplit,
    /// Rerouted edges `g` (and `g'`) of the base path.
    pub rerouted: Vec<Edge>,
    /// Types added to `D` to cover the rerouted edges.
    pub added_types: BTreeSet<usize>,
    /// Final `D' ∪ {1}`, the types that received fixing paths.
    pub fixed_types: BTreeSet<usize>,
    /// Edges among the added vertices carried by extended fixing paths.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub closing: Vec<Edge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<FullTrace>,
}

fn prime_base(m: usize) -> Result<FSeparatorResult> {
    let path = prime_generator(m as u64)?;
    let split = split_from_path(&path);
    Ok(FSeparatorResult {
        path,
        split,
        trace: None,
    })
}

fn base_ok(r: &FSeparatorResult) -> bool {
    check_f_separator(&r.path, &r.split).passes() && equally_spaced_types(&r.path).is_empty()
}

/// An F-separator path on `K_m`. From `m >= 45` this is the forest pipeline
/// with its full check; below that a prime generator is preferred and the
/// lenient pipeline is only accepted if it passes the F-separator check.
fn base_path(m: usize) -> Result<(FSeparatorResult, &'static str)> {
    if m >= CONNECT_MIN_N && forest_applies(m) {
        let r = connect_forest(&build_linear_forest(m)?)?;
        let check = check_pipeline(&r);
        if !check.passes() {
            return Err(Error::Construction(format!(
                "pipeline result for n={m} fails its check: {check:?}"
            )));
        }
        return Ok((r, "forest"));
    }
    if m % 2 == 1 && is_prime(m as u64) {
        return Ok((prime_base(m)?, "prime"));
    }
    if forest_applies(m) {
        let r = connect_forest_lenient(&build_linear_forest(m)?)?;
        if base_ok(&r) {
            return Ok((r, "forest"));
        }
    }
    Err(Error::Inapplicable {
        method: "main",
        n: m,
        reason: "no F-separator path available for the base order".into(),
    })
}

/// Rotation `i` of `P`, with every edge listed in `reroute` subdivided by the
/// matching extra vertex and `pendant` (if any) hung off the last vertex.
fn adapted_rotation(
    base: &PathSeq,
    i: usize,
    reroute: &[(Edge, Vertex)],
    pendant: Option<Vertex>,
    n: usize,
) -> Result<PathSeq> {
    let rotated = base.rotate(i as i64);
    let m = base.n();
    let shifted: Vec<(Edge, Vertex)> = reroute
        .iter()
        .map(|&(g, v)| {
            let s = |x: usize| crate::circulant::wrap(m, (x + i) as i64);
            (Edge::new(s(g.0), s(g.1)), v)
        })
        .collect();
    let vs = rotated.vertices();
    let mut out = Vec::with_capacity(vs.len() + reroute.len() + 1);
    for (k, &w) in vs.iter().enumerate() {
        out.push(w);
        if let Some(&next) = vs.get(k + 1) {
            if let Some(&(_, v)) = shifted.iter().find(|(g, _)| *g == Edge::new(w, next)) {
                out.push(v);
            }
        }
    }
    if let Some(v) = pendant {
        out.push(v);
    }
    PathSeq::new(n, out)
}

/// Types `x_h ∈ F` whose pair of edges in `P` sits at distance `d` on `K_m`.
fn clashing_f_type(path: &PathSeq, f: &BTreeSet<usize>, d: usize) -> Option<usize> {
    let m = path.n();
    let typed = path.typed_edges();
    f.iter().copied().find(|&x| {
        let es: Vec<&TypedEdge> = typed.iter().filter(|e| e.etype == x).collect();
        es.len() == 2 && cd_edges(m, es[0], es[1]) == d
    })
}

/// Edges of `P` whose type appears at least twice, ordered by starting
/// vertex and then type.
fn doubled_edges(path: &PathSeq) -> Vec<TypedEdge> {
    let typed = path.typed_edges();
    let mut out: Vec<TypedEdge> = typed
        .iter()
        .copied()
        .filter(|e| typed.iter().filter(|f| f.etype == e.etype).count() >= 2)
        .collect();
    out.sort_by_key(|e| (e.start, e.etype));
    out
}

struct Assembly {
    family: PathFamily,
    trace: TheoremTrace,
}

fn assemble(n: usize) -> Result<Assembly> {
    let (case, m) = case_of(n);
    let (base, base_method) = base_path(m)?;
    let p = &base.path;
    let mut trace = TheoremTrace {
        case,
        base_n: m,
        base_method: base_method.into(),
        base_split: base.split.clone(),
        rerouted: vec![],
        added_types: BTreeSet::new(),
        fixed_types: with_one(&base.split.d),
        closing: vec![],
        pipeline: base.trace.clone(),
    };
    match case {
        1 => {
            let family = rotations_plus_fixings(&base)?;
            Ok(Assembly { family, trace })
        }
        2 => {
            let mut paths = Vec::with_capacity(m + 2 * trace.fixed_types.len());
            for i in 0..m {
                paths.push(adapted_rotation(p, i, &[], Some(n), n)?);
            }
            paths.extend(fixings(m, &trace.fixed_types, n)?);
            let family = PathFamily::new(n, paths)?;
            Ok(Assembly { family, trace })
        }
        _ => {
            let extra = if case == 3 { 1 } else { 2 };
            let candidates = doubled_edges(p);
            let choices: Vec<Vec<TypedEdge>> = if extra == 1 {
                candidates.iter().map(|&g| vec![g]).collect()
            } else {
                let mut v = vec![];
                for (a, &g) in candidates.iter().enumerate() {
                    for &h in &candidates[a + 1..] {
                        if g.etype != h.etype {
                            v.push(vec![g, h]);
                        }
                    }
                }
                v
            };
            let pendant = n;
            let mut last_err = None;
            for gs in choices {
                let reroute: Vec<(Edge, Vertex)> = gs
                    .iter()
                    .enumerate()
                    .map(|(k, g)| (g.endpoints(m), m + 1 + k))
                    .collect();
                let mut added = BTreeSet::new();
                for g in &gs {
                    added.insert(g.etype);
                    if let Some(h) = clashing_f_type(p, &base.split.f, g.etype) {
                        added.insert(h);
                    }
                }
                let mut fixed = with_one(&base.split.d);
                fixed.extend(&added);
                let mut paths = Vec::with_capacity(m + 2 * fixed.len());
                for i in 0..m {
                    paths.push(adapted_rotation(p, i, &reroute, Some(pendant), n)?);
                }
                let mut fix = fixings(m, &fixed, n)?;
                let mut closing = vec![];
                if case == 4 {
                    // the three edges among v, v', v̄ lie on no adapted path;
                    // hang two of them off Q_{x_g} and Q_{x_g'}
                    let (v, v2, vbar) = (m + 1, m + 2, n);
                    for (g, tail) in gs.iter().zip([[v, v2], [v2, vbar]]) {
                        let at = 2 * fixed.iter().position(|&x| x == g.etype).unwrap();
                        let mut vs = fix[at].vertices().to_vec();
                        vs.extend(tail);
                        closing.push(Edge::new(tail[0], tail[1]));
                        fix[at] = PathSeq::new(n, vs)?;
                    }
                }
                paths.extend(fix);
                let family = PathFamily::new(n, paths)?;
                let rep = verify_weak(&family);
                if rep.separating {
                    trace.rerouted = reroute.iter().map(|r| r.0).collect();
                    trace.added_types = added;
                    trace.fixed_types = fixed;
                    trace.closing = closing;
                    return Ok(Assembly { family, trace });
                }
                last_err = Some(gs);
            }
            Err(Error::Construction(format!(
                "case {case} for n={n}: no rerouting choice separates (last tried {last_err:?})"
            )))
        }
    }
}

/// A verified family for `n >= 44` within `(21n + 16 log2 n + 232) / 16`,
/// together with how it was built.
pub fn theorem_family(n: usize) -> Result<(PathFamily, TheoremTrace)> {
    if n < THEOREM_MIN_N {
        return Err(Error::Inapplicable {
            method: "main",
            n,
            reason: format!("the residue construction needs n >= {THEOREM_MIN_N}"),
        });
    }
    let (family, trace) = theorem_family_attempt(n)?;
    let cap = theorem_bound(n).ceil() as usize;
    if family.len() > cap {
        return Err(Error::Construction(format!(
            "n={n}: family of size {} exceeds the bound {cap}",
            family.len()
        )));
    }
    Ok((family, trace))
}

/// Same assembly for any `n` where a base path exists, with no size promise.
/// The result is always checked with [`verify_weak`].
pub fn theorem_family_attempt(n: usize) -> Result<(PathFamily, TheoremTrace)> {
    if n < 8 {
        return Err(Error::Inapplicable {
            method: "main",
            n,
            reason: "too small for the residue construction".into(),
        });
    }
    let Assembly { family, trace } = assemble(n)?;
    if !verify_weak(&family).separating {
        return Err(Error::Construction(format!(
            "case {} family for n={n} does not separate",
            trace.case
        )));
    }
    Ok((family, trace))
}
