use proptest::prelude::*;

use sepath::circulant::{decompose_linear_forest, EdgeSet, PathFamily, PathSeq};
use sepath::cli::FamilyFile;
use sepath::constructions::{ConstructionProvenance, Method};
use sepath::verify::{verify_strong, verify_weak, verify_weak_naive};

fn path_on(n: usize) -> impl Strategy<Value = PathSeq> {
    (Just((1..=n).collect::<Vec<_>>()).prop_shuffle(), 2..=n)
        .prop_map(move |(vs, len)| PathSeq::new(n, vs[..len].to_vec()).unwrap())
}

fn family() -> impl Strategy<Value = PathFamily> {
    (3usize..=11).prop_flat_map(|n| {
        prop::collection::vec(path_on(n), 1..10)
            .prop_map(move |paths| PathFamily::new(n, paths).unwrap())
    })
}

proptest! {
    #[test]
    fn rotating_every_path_keeps_the_verdict(fam in family(), shift in 0i64..20) {
        let rotated = PathFamily::new(
            fam.n(),
            fam.paths().iter().map(|p| p.rotate(shift)).collect(),
        ).unwrap();
        prop_assert_eq!(verify_weak(&fam).separating, verify_weak(&rotated).separating);
        prop_assert_eq!(verify_strong(&fam).separating, verify_strong(&rotated).separating);
    }

    #[test]
    fn strong_implies_weak(fam in family()) {
        if verify_strong(&fam).separating {
            prop_assert!(verify_weak(&fam).separating);
        }
        prop_assert_eq!(verify_weak(&fam).separating, verify_weak_naive(&fam));
    }

    #[test]
    fn family_file_round_trip(fam in family()) {
        let prov = ConstructionProvenance {
            method: Method::Search,
            size: fam.len(),
            bound_claimed: Some(fam.n() as f64),
            trace: None,
        };
        let file = FamilyFile::from_family(&fam, &prov).unwrap();
        let text = file.to_json().unwrap();
        let back = FamilyFile::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json().unwrap(), text);
        prop_assert_eq!(back.family().unwrap(), fam);
    }

    #[test]
    fn forest_decomposition_partitions_edges(fam in family()) {
        // the edges of one path, plus a second path on unused vertices
        let p = &fam.paths()[0];
        let n = fam.n();
        let mut set = p.edge_set();
        let rest: Vec<usize> = (1..=n).filter(|v| !p.vertices().contains(v)).collect();
        for w in rest.windows(2) {
            set.insert(sepath::Edge::new(w[0], w[1]));
        }
        let paths = decompose_linear_forest(&set).unwrap();
        let mut union = EdgeSet::new(n);
        let mut total = 0;
        for q in &paths {
            total += q.len_edges();
            union.union_with(&q.edge_set());
        }
        prop_assert_eq!(total, set.len());
        prop_assert_eq!(union, set);
    }
}
