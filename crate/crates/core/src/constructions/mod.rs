//! Constructions of separating path systems and the dispatcher that picks
//! the smallest verified one.

pub mod catalog;
pub mod fixing;
pub mod forest;
pub mod prime;
pub mod theorem;

use serde::{Deserialize, Serialize};

pub use catalog::catalog_generator;
pub use fixing::fixing_paths;
pub use forest::{
    build_linear_forest, check_pipeline, connect_forest, connect_forest_lenient, split_from_path,
    FSeparatorResult, ForestTrace, FullTrace,
};
pub use prime::{is_prime, prime_generator, prime_plus_one};
pub use theorem::{
    rotations_plus_fixings, theorem_bound, theorem_family, theorem_family_attempt, TheoremTrace,
};

use crate::circulant::{all_edges, Order, PathFamily, PathSeq};
use crate::error::Result;
use crate::search::{search_generator, SearchBudget};
use crate::verify::verify_weak;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Catalog,
    Prime,
    PrimePlusOne,
    #[serde(rename = "main_theorem_case_1")]
    MainCase1,
    #[serde(rename = "main_theorem_case_2")]
    MainCase2,
    #[serde(rename = "main_theorem_case_3")]
    MainCase3,
    #[serde(rename = "main_theorem_case_4")]
    MainCase4,
    Search,
    TrivialEdges,
}

impl Method {
    pub fn main_case(case: u8) -> Self {
        match case {
            1 => Method::MainCase1,
            2 => Method::MainCase2,
            3 => Method::MainCase3,
            _ => Method::MainCase4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Catalog => "catalog",
            Method::Prime => "prime",
            Method::PrimePlusOne => "prime_plus_one",
            Method::MainCase1 => "main_theorem_case_1",
            Method::MainCase2 => "main_theorem_case_2",
            Method::MainCase3 => "main_theorem_case_3",
            Method::MainCase4 => "main_theorem_case_4",
            Method::Search => "search",
            Method::TrivialEdges => "trivial_edges",
        }
    }
}

/// Which method produced a family, its size and the size bound it claims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionProvenance {
    pub method: Method,
    pub size: usize,
    pub bound_claimed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TheoremTrace>,
}

/// Rotations of a generator-like path.
pub fn rotation_family(path: &PathSeq) -> PathFamily {
    PathFamily::rotations(path)
}

/// Every edge of `K_n` as its own path.
pub fn trivial_family(n: usize) -> Result<PathFamily> {
    let paths = all_edges(n)
        .map(|e| PathSeq::new(n, vec![e.0, e.1]))
        .collect::<Result<_>>()?;
    PathFamily::new(n, paths)
}

/// Node budget for the generator search inside [`construct_best`]. A node
/// count rather than a clock keeps the dispatcher's output machine-independent.
pub const DISPATCH_SEARCH_NODES: u64 = 5_000_000;

struct Best {
    family: PathFamily,
    prov: ConstructionProvenance,
}

fn offer(
    best: &mut Option<Best>,
    family: PathFamily,
    method: Method,
    bound: Option<f64>,
    trace: Option<TheoremTrace>,
) {
    if best
        .as_ref()
        .is_some_and(|b| b.family.len() <= family.len())
    {
        return;
    }
    if !verify_weak(&family).separating {
        return;
    }
    let prov = ConstructionProvenance {
        method,
        size: family.len(),
        bound_claimed: bound,
        trace,
    };
    *best = Some(Best { family, prov });
}

/// Smallest verified family among the applicable methods, in priority order
/// catalog, prime, prime + 1, main theorem, search, trivial.
pub fn construct_best(n: usize) -> Result<(PathFamily, ConstructionProvenance)> {
    let order = Order::new(n)?;
    let nf = n as f64;
    let mut best: Option<Best> = None;
    let at_most_n = |b: &Option<Best>| b.as_ref().is_some_and(|b| b.family.len() <= n);

    if n <= 20 {
        let p = catalog_generator(n)?;
        offer(
            &mut best,
            rotation_family(&p),
            Method::Catalog,
            Some(nf),
            None,
        );
    }
    if n % 2 == 1 && is_prime(n as u64) {
        let p = prime_generator(n as u64)?;
        offer(
            &mut best,
            rotation_family(&p),
            Method::Prime,
            Some(nf),
            None,
        );
    }
    if n >= 4 && (n - 1) % 2 == 1 && is_prime(n as u64 - 1) {
        offer(
            &mut best,
            prime_plus_one(n as u64 - 1)?,
            Method::PrimePlusOne,
            Some(nf),
            None,
        );
    }
    if !at_most_n(&best) {
        let attempt = if n >= theorem::THEOREM_MIN_N {
            theorem_family(n).map(|r| (r, Some(theorem_bound(n))))
        } else {
            theorem_family_attempt(n).map(|r| (r, None))
        };
        if let Ok(((family, trace), bound)) = attempt {
            offer(
                &mut best,
                family,
                Method::main_case(trace.case),
                bound,
                Some(trace),
            );
        }
    }
    if !at_most_n(&best) && n < theorem::THEOREM_MIN_N {
        if let Some(p) = search_generator(n, SearchBudget::nodes(DISPATCH_SEARCH_NODES)).path {
            offer(
                &mut best,
                rotation_family(&p),
                Method::Search,
                Some(nf),
                None,
            );
        }
    }
    if best
        .as_ref()
        .is_none_or(|b| b.family.len() > order.edge_count())
    {
        offer(
            &mut best,
            trivial_family(n)?,
            Method::TrivialEdges,
            Some(order.edge_count() as f64),
            None,
        );
    }
    let Best { family, prov } = best.expect("the trivial family always separates");
    Ok((family, prov))
}
