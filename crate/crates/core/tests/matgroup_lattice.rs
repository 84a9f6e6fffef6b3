use std::collections::BTreeSet;
use std::sync::OnceLock;

use galsym_core::matgroup::{gl2, gl2_order};
use galsym_core::{Dichotomy, GroupElement, MatGroup};
use proptest::prelude::*;

type ElementSet = BTreeSet<[u32; 4]>;

fn element_set(g: &MatGroup) -> ElementSet {
    g.elements().iter().map(|e| e.entries()).collect()
}

fn subgroups_of_gl2_3() -> &'static Vec<MatGroup> {
    static CELL: OnceLock<Vec<MatGroup>> = OnceLock::new();
    CELL.get_or_init(|| MatGroup::enumerate_all_subgroups(3).unwrap())
}

/// Bottom-up lattice: cyclic subgroups, then joins of pairs until nothing new appears.
fn lattice_oracle(p: u32) -> BTreeSet<ElementSet> {
    let g = gl2(p).unwrap();
    let mut found: Vec<(Vec<GroupElement>, ElementSet)> = Vec::new();
    let mut seen = BTreeSet::new();
    for e in g.elements() {
        let c = MatGroup::close(p, &[*e]).unwrap();
        if seen.insert(element_set(&c)) {
            found.push((c.elements().to_vec(), element_set(&c)));
        }
    }
    let mut frontier = 0;
    while frontier < found.len() {
        let end = found.len();
        for i in 0..end {
            for j in frontier.max(i + 1)..end {
                let mut gens = found[i].0.clone();
                gens.extend_from_slice(&found[j].0);
                let join = MatGroup::close(p, &gens).unwrap();
                let key = element_set(&join);
                if seen.insert(key.clone()) {
                    found.push((join.elements().to_vec(), key));
                }
            }
        }
        frontier = end;
    }
    seen
}

#[test]
fn subgroup_count_matches_the_join_closure_oracle() {
    let ours: BTreeSet<ElementSet> = subgroups_of_gl2_3().iter().map(element_set).collect();
    assert_eq!(ours.len(), subgroups_of_gl2_3().len(), "a subgroup was listed twice");
    let oracle = lattice_oracle(3);
    assert_eq!(ours, oracle);
    assert_eq!(ours.len(), 55);
}

#[test]
fn enumeration_contains_trivial_and_full_group() {
    let orders: Vec<usize> = subgroups_of_gl2_3().iter().map(MatGroup::order).collect();
    assert!(orders.contains(&1));
    assert!(orders.contains(&48));
    assert!(MatGroup::enumerate_all_subgroups(5).is_err());
}

#[test]
fn every_subgroup_satisfies_lagrange_and_closure() {
    for h in subgroups_of_gl2_3() {
        assert_eq!(gl2_order(3) % h.order(), 0);
        assert!(h.verify_invariants());
        for a in h.elements() {
            assert!(h.contains(&a.inverse()));
            for b in h.elements() {
                assert!(h.contains(&a.mul(b)));
            }
        }
    }
}

fn p_part(n: usize, p: usize) -> usize {
    let mut q = 1;
    while n.is_multiple_of(q * p) {
        q *= p;
    }
    q
}

#[test]
fn sylow_order_is_the_p_part() {
    for h in subgroups_of_gl2_3() {
        let s = h.sylow_p();
        assert_eq!(s.order(), p_part(h.order(), 3));
        assert!(s.is_subgroup_of(h));
    }
    let g5 = gl2(5).unwrap();
    assert_eq!(g5.sylow_p().order(), 5);
}

#[test]
fn dichotomy_is_exhaustive_at_three() {
    let mut counted = 0;
    for h in subgroups_of_gl2_3() {
        if h.order() % 3 != 0 {
            assert!(h.classify_dichotomy().is_err());
            continue;
        }
        counted += 1;
        let borel = h.borel_witness().is_some();
        assert!(borel != h.contains_sl2(), "order {} got both or neither verdict", h.order());
        if let Dichotomy::BorelConjugate { witness } = h.classify_dichotomy().unwrap() {
            assert!(h.conjugate(&witness).elements().iter().all(GroupElement::is_upper_triangular));
        }
    }
    assert!(counted > 0);
}

fn same_variant(a: &Dichotomy, b: &Dichotomy) -> bool {
    matches!(
        (a, b),
        (Dichotomy::BorelConjugate { .. }, Dichotomy::BorelConjugate { .. }) | (Dichotomy::ContainsSl2, Dichotomy::ContainsSl2)
    )
}

proptest! {
    #[test]
    fn dichotomy_is_conjugation_invariant(i in 0usize..55, c in 0usize..48) {
        let h = &subgroups_of_gl2_3()[i];
        prop_assume!(h.order().is_multiple_of(3));
        let g = gl2(3).unwrap();
        let conj = h.conjugate(&g.element(c));
        prop_assert_eq!(conj.order(), h.order());
        prop_assert!(same_variant(&h.classify_dichotomy().unwrap(), &conj.classify_dichotomy().unwrap()));
    }

    #[test]
    fn random_pairs_at_five_close_to_valid_subgroups(a in 0usize..480, b in 0usize..480) {
        let g = gl2(5).unwrap();
        let h = MatGroup::close(5, &[g.element(a), g.element(b)]).unwrap();
        prop_assert_eq!(480 % h.order(), 0);
        prop_assert!(h.verify_invariants());
        prop_assert_eq!(h.sylow_p().order(), p_part(h.order(), 5));
        if h.order().is_multiple_of(5) {
            prop_assert!(h.classify_dichotomy().is_ok());
        }
    }
}
