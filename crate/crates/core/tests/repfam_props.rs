use bcongest::repfam::{
    binomial, compose_check, find_blocker, is_q_representative, minimize, represents, Elem, SetFamily,
};
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

/// Families over a universe of at most 12 elements with sets of size at
/// most 4.
fn family() -> impl Strategy<Value = SetFamily> {
    (1u64..=12, 1usize..=4).prop_flat_map(|(u, p)| {
        vec(btree_set(0..u as Elem, 0..=p), 0..14).prop_map(SetFamily::from_sets)
    })
}

fn without(f: &SetFamily, i: usize) -> SetFamily {
    SetFamily::from_sets(f.sets().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s.to_vec()))
}

fn subsets(n: Elem, size: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == size {
            out.push((0..n).filter(|&e| mask >> e & 1 == 1).collect());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn minimize_is_representative_minimal_and_bounded(f in family(), q in 0usize..=4) {
        let m = minimize(&f, q);
        prop_assert!(is_q_representative(&m, &f, q).unwrap());
        for i in 0..m.len() {
            prop_assert!(!is_q_representative(&without(&m, i), &f, q).unwrap());
        }
        let p = f.max_set_size() as u64;
        prop_assert!(m.len() as u64 <= binomial(p + q as u64, p));
    }

    #[test]
    fn fast_check_matches_exhaustive(f in family(), q in 0usize..=4, mask in any::<u16>()) {
        let sub = SetFamily::from_sets(
            f.sets().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.to_vec()),
        );
        prop_assert_eq!(represents(&sub, &f, q), is_q_representative(&sub, &f, q).unwrap());
    }

    #[test]
    fn representation_is_transitive(f in family(), q in 0usize..=3, m1 in any::<u16>(), m2 in any::<u16>()) {
        let b = SetFamily::from_sets(f.sets().enumerate().filter(|&(i, _)| m1 >> i & 1 == 1).map(|(_, s)| s.to_vec()));
        let c = SetFamily::from_sets(b.sets().enumerate().filter(|&(i, _)| m2 >> i & 1 == 1).map(|(_, s)| s.to_vec()));
        prop_assert!(compose_check(&f, &b, &c, q).unwrap());
        // Minimizing twice keeps representing the original family.
        let once = minimize(&f, q);
        prop_assert!(is_q_representative(&minimize(&once, q), &f, q).unwrap());
    }

    #[test]
    fn blockers_are_genuine(f in family(), q in 0usize..=4) {
        let sets: Vec<&[Elem]> = f.sets().collect();
        for (i, s) in sets.iter().enumerate() {
            let others: Vec<&[Elem]> = sets.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| *t).collect();
            if let Some(b) = find_blocker(s, &others, q) {
                prop_assert!(b.elements.len() <= q);
                prop_assert!(b.elements.iter().all(|e| !s.contains(e)));
                prop_assert!(others.iter().all(|t| t.iter().any(|e| b.elements.contains(e))));
            }
        }
    }
}

#[test]
fn all_p_subsets_meet_the_bound() {
    for p in 1..=4usize {
        for q in 0..=4usize {
            if p + q > 10 {
                continue;
            }
            let f = SetFamily::from_sets(subsets((p + q) as Elem, p));
            let m = minimize(&f, q);
            assert_eq!(m.len() as u64, binomial((p + q) as u64, p as u64), "p = {p}, q = {q}");
            assert_eq!(m.len(), f.len());
        }
    }
}

#[test]
fn witnesses_survive_minimization() {
    let f = SetFamily::from_min_witness([(vec![1, 2], 'b'), (vec![1, 2], 'a'), (vec![3], 'c')]);
    assert_eq!(f.len(), 2);
    let m = minimize(&f, 1);
    assert!(m.members().iter().all(|x| x.witness.is_some()));
    assert_eq!(m.members().iter().find(|x| x.set == vec![1, 2]).and_then(|x| x.witness), Some('a'));
}
