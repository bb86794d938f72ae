use std::collections::HashSet;

use proptest::prelude::*;
use qamseq::galois::{default_polynomial, GaloisRing};
use qamseq::varrate::{plan_p2m, plan_sq, worked_example, AssignmentTree, Preference, RateRequest};
use qamseq::Error;

fn ring(r: u32) -> GaloisRing {
    GaloisRing::new(r, default_polynomial(r).unwrap()).unwrap()
}

fn request() -> impl Strategy<Value = (u32, Vec<(u32, usize)>)> {
    (4u32..=6).prop_flat_map(|r| (Just(r), prop::collection::vec((0..r, 0usize..5), 0..5)))
}

fn check_tree(tree: &AssignmentTree, q: usize) {
    let mut seen = HashSet::new();
    for u in &tree.users {
        assert_eq!(u.coefficients.len(), u.m);
        for &c in &u.coefficients {
            assert!(seen.insert(c), "coefficient {c:?} reused");
        }
    }
    for &c in &tree.leftover {
        assert!(seen.insert(c));
    }
    assert_eq!(seen.len(), q);
    // assigned nodes form an antichain
    for (i, n) in tree.nodes.iter().enumerate() {
        if n.user.is_none() {
            continue;
        }
        let mut p = tree.nodes[i].parent;
        while let Some(id) = p {
            assert!(tree.nodes[id].user.is_none());
            p = tree.nodes[id].parent;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sq_planner_succeeds_exactly_when_demand_fits(
        (r, pairs) in request(),
        identity in any::<bool>(),
    ) {
        let rg = ring(r);
        let req = RateRequest::new(&pairs);
        let prefer = if identity { Preference::Identity } else { Preference::NonIdentity };
        let fits = req.demand() <= 1 << r;
        match plan_sq(&rg, &req, prefer) {
            Ok(tree) => {
                prop_assert!(fits);
                check_tree(&tree, 1 << r);
                let wanted: usize = req.counts.values().sum();
                prop_assert_eq!(tree.users.len(), wanted);
                let fam = tree.to_family(&rg).unwrap();
                prop_assert_eq!(fam.num_users(), wanted + tree.leftover.len());
            }
            Err(e) => {
                prop_assert!(!fits);
                prop_assert!(matches!(e, Error::Infeasible(_)));
            }
        }
    }

    #[test]
    fn p2m_planner_keeps_sets_disjoint(r in 4u32..=6, ms in prop::collection::vec(1usize..=4, 0..6)) {
        let rg = ring(r);
        if let Ok(tree) = plan_p2m(&rg, &ms) {
            prop_assert!(tree.experimental);
            check_tree(&tree, 1 << r);
            prop_assert_eq!(tree.users.len(), ms.len());
        }
    }
}

#[test]
fn worked_example_builds_a_family() {
    let (rg, tree) = worked_example().unwrap();
    let fam = tree.to_family(&rg).unwrap();
    // three planned users plus the m = 1 leftovers
    assert_eq!(fam.num_users(), 3 + tree.leftover.len());
    let ms: Vec<usize> = (0..3).map(|u| fam.user_m(u)).collect();
    assert_eq!(ms, vec![5, 3, 2]);
}
