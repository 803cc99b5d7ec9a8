//! Generator paths from primitive roots, and the `p + 1` extension.

use crate::circulant::{wrap, Edge, PathFamily, PathSeq};
use crate::error::{Error, Result};

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Least `g >= 2` of multiplicative order `p - 1`.
pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(Error::NotOddPrime(p))
}

/// The path `(p, g, g + g^2, ..., g + ... + g^(p-2))` on `K_p`.
///
/// It has `p - 2` edges; the edge at position `(p - 1) / 2` is its only 1-type
/// edge and every other type appears exactly twice.
pub fn prime_generator(p: u64) -> Result<PathSeq> {
    let g = smallest_primitive_root(p)?;
    let mut vertices = vec![p as usize];
    let (mut sum, mut power) = (0u64, 1u64);
    for _ in 1..=p - 2 {
        power = power * g % p;
        sum = (sum + power) % p;
        vertices.push(wrap(p as usize, sum as i64));
    }
    PathSeq::new(p as usize, vertices)
}

/// The unique 1-type edge of [`prime_generator`], between partial sums `k - 1`
/// and `k` with `k = (p - 1) / 2`.
pub fn prime_generator_one_type_edge(path: &PathSeq) -> Edge {
    let k = (path.n() - 1) / 2;
    let v = path.vertices();
    Edge::new(v[k - 1], v[k])
}

/// Family of `p + 1` paths on `K_{p+1}`.
///
/// Rotation 0 is kept as is, rotation `i` for `1 <= i <= p - 1` gets the
/// pendant edge `(i, p + 1)` at its first vertex, and the last path is the
/// 1-type cycle of `K_p` opened at the generator's 1-type edge.
pub fn prime_plus_one(p: u64) -> Result<PathFamily> {
    let base = prime_generator(p)?;
    let p = p as usize;
    let n = p + 1;
    let mut paths = Vec::with_capacity(n);
    paths.push(base.embed(n)?);
    for i in 1..p {
        let rotated = base.rotate(i as i64);
        debug_assert_eq!(rotated.vertices()[0], i);
        let mut vertices = vec![n];
        vertices.extend_from_slice(rotated.vertices());
        paths.push(PathSeq::new(n, vertices)?);
    }
    let h = prime_generator_one_type_edge(&base);
    // h joins consecutive labels a and a+1 (possibly p and 1); walk the cycle
    // from a+1 the long way round to a.
    let a = if wrap(p, h.0 as i64 + 1) == h.1 {
        h.0
    } else {
        h.1
    };
    let cycle: Vec<usize> = (1..=p as i64).map(|k| wrap(p, a as i64 + k)).collect();
    paths.push(PathSeq::new(n, cycle)?);
    PathFamily::new(n, paths)
}
