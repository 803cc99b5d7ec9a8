//! Fixing paths: two paths using only types `{1, x}` that together cover every
//! `x`-type edge of `K_n`.

use crate::circulant::{wrap, PathSeq};
use crate::error::{Error, Result};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Returns `(Q_x, Q_x')`.
///
/// With `f = gcd(n, x)` the `x`-type edges form `f` cycles of length
/// `a = n / f`. `Q_x` walks `a - 1` edges of each cycle, starting at
/// `v_1 = 1` and stepping from the end `v_i' = v_i - x` of one cycle to
/// `v_{i+1} = v_i' + 1`. `Q_x'` collects the skipped edges `(v_i, v_i')`
/// joined by the same 1-type links.
///
/// When `a = 2` (that is `x = n/2`) every cycle is a single edge and `Q_x'`
/// already covers them all; `Q_x` is then just the first link edge.
pub fn fixing_paths(n: usize, x: usize) -> Result<(PathSeq, PathSeq)> {
    if x == 0 || x > n / 2 {
        return Err(Error::TypeOutOfRange {
            etype: x,
            max: n / 2,
        });
    }
    let f = gcd(n, x);
    let a = n / f;
    let step = |v: usize, k: i64| wrap(n, v as i64 + k);

    let mut starts = vec![1usize];
    for i in 0..f - 1 {
        starts.push(step(starts[i], -(x as i64) + 1));
    }

    let mut skipped = Vec::with_capacity(2 * f);
    for &v in &starts {
        skipped.push(v);
        skipped.push(step(v, -(x as i64)));
    }
    let q_prime = PathSeq::new(n, skipped)?;

    let q = if a == 2 {
        match f {
            1 => q_prime.clone(),
            _ => PathSeq::new(n, vec![q_prime.vertices()[1], q_prime.vertices()[2]])?,
        }
    } else {
        let mut walk = Vec::with_capacity(n);
        for &v in &starts {
            for k in 0..a {
                walk.push(step(v, (k * x) as i64));
            }
        }
        PathSeq::new(n, walk)?
    };
    Ok((q, q_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::{all_edges, cd, Edge};
    use std::collections::BTreeSet;

    #[test]
    fn examples() {
        let (q, qp) = fixing_paths(6, 2).unwrap();
        assert_eq!(q.vertices(), &[1, 3, 5, 6, 2, 4]);
        assert_eq!(qp.vertices(), &[1, 5, 6, 4]);

        let (q, qp) = fixing_paths(5, 1).unwrap();
        assert_eq!(q.vertices(), &[1, 2, 3, 4, 5]);
        assert_eq!(qp.vertices(), &[1, 5]);

        let (q, qp) = fixing_paths(6, 3).unwrap();
        assert!(q.edges().all(|e| cd(6, e.0, e.1) == 1));
        assert_eq!(qp.vertices(), &[1, 4, 5, 2, 3, 6]);

        assert!(fixing_paths(6, 4).is_err());
        assert!(fixing_paths(6, 0).is_err());
    }

    #[test]
    fn coverage_and_types_up_to_60() {
        for n in 2..=60 {
            for x in 1..=n / 2 {
                let (q, qp) = fixing_paths(n, x).unwrap();
                let union: BTreeSet<Edge> = q.edges().chain(qp.edges()).collect();
                for e in all_edges(n).filter(|e| cd(n, e.0, e.1) == x) {
                    assert!(union.contains(&e), "n={n} x={x} missing {e}");
                }
                for e in &union {
                    let t = cd(n, e.0, e.1);
                    assert!(t == 1 || t == x, "n={n} x={x} stray {e}");
                }
            }
        }
    }
}
