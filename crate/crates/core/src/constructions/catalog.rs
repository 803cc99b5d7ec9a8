//! Hand-found generator paths for `n <= 20`.

use crate::circulant::PathSeq;
use crate::error::{Error, Result};

const CATALOG: [&[usize]; 19] = [
    &[1, 2],
    &[1, 2, 3],
    &[1, 2, 4],
    &[1, 3, 2, 5],
    &[1, 5, 4, 3, 6],
    &[1, 2, 3, 5, 7, 4],
    &[1, 3, 5, 2, 6, 7, 8],
    &[1, 5, 9, 3, 4, 6, 8, 2],
    &[1, 4, 7, 6, 5, 9, 3, 8, 10],
    &[1, 3, 5, 10, 4, 11, 7, 8, 9, 6],
    &[1, 2, 11, 9, 10, 3, 7, 4, 8, 6, 12, 5],
    &[1, 3, 4, 13, 11, 6, 10, 7, 12, 5, 8, 9],
    &[1, 3, 6, 9, 10, 11, 2, 7, 13, 5, 12, 8, 4],
    &[1, 14, 15, 5, 10, 3, 12, 6, 9, 13, 2, 4, 11, 8, 7],
    &[1, 11, 13, 15, 14, 3, 8, 12, 16, 9, 2, 10, 7, 4, 5],
    &[1, 3, 5, 16, 10, 11, 12, 9, 6, 15, 7, 14, 4, 17, 13, 8],
    &[1, 15, 10, 5, 13, 3, 12, 9, 6, 7, 8, 2, 14, 16, 18, 11, 4],
    &[
        1, 3, 5, 18, 12, 11, 10, 13, 16, 7, 17, 6, 14, 9, 4, 19, 15, 8,
    ],
    &[
        1, 5, 10, 15, 18, 8, 17, 6, 20, 14, 7, 19, 2, 4, 16, 9, 13, 12, 11,
    ],
];

/// The catalogued generator path `P(n)` for `2 <= n <= 20`.
///
/// `n = 2, 3, 4` use small paths chosen here; the rest are the published ones.
pub fn catalog_generator(n: usize) -> Result<PathSeq> {
    if !(2..=20).contains(&n) {
        return Err(Error::Inapplicable {
            method: "catalog",
            n,
            reason: "catalog covers 2..=20".into(),
        });
    }
    PathSeq::new(n, CATALOG[n - 2].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_generator;

    #[test]
    fn verbatim_entries() {
        assert_eq!(catalog_generator(5).unwrap().vertices(), &[1, 3, 2, 5]);
        assert_eq!(
            catalog_generator(11).unwrap().vertices(),
            &[1, 3, 5, 10, 4, 11, 7, 8, 9, 6]
        );
        assert_eq!(
            catalog_generator(20).unwrap().vertices(),
            &[1, 5, 10, 15, 18, 8, 17, 6, 20, 14, 7, 19, 2, 4, 16, 9, 13, 12, 11]
        );
        assert!(catalog_generator(1).is_err());
        assert!(catalog_generator(21).is_err());
    }

    #[test]
    fn every_entry_is_a_generator() {
        for n in 2..=20 {
            let r = check_generator(&catalog_generator(n).unwrap());
            assert!(r.is_generator(), "n={n}: {r:?}");
        }
    }
}
