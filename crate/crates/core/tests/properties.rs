use std::sync::OnceLock;

use proptest::prelude::*;

use lalgebra::closure::{enumerate_3approx, ClosureMap};
use lalgebra::dbio;
use lalgebra::perm::{all_perms, is_group, Perm};
use lalgebra::poset::enumerate_posets;
use lalgebra::rmatrix::enumerate_rmatrices;
use lalgebra::search::enumerate_general;
use lalgebra::young::{enumerate_young, young_canonical, YoungDiagram};
use lalgebra::MulTable;

fn tables(n: usize) -> &'static [MulTable] {
    static CACHE: OnceLock<Vec<Vec<MulTable>>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=5)
            .map(|n| if n == 0 { vec![] } else { enumerate_general(n).collect() })
            .collect()
    })[n]
}

fn perm(m: usize) -> impl Strategy<Value = Perm> {
    Just((0..m as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

/// A size, one of its classes, and two permutations.
fn table_and_perms() -> impl Strategy<Value = (MulTable, Perm, Perm)> {
    (2usize..=5).prop_flat_map(|n| (0..tables(n).len(), perm(n - 1), perm(n - 1)).prop_map(move |(i, g, h)| (tables(n)[i].clone(), g, h)))
}

proptest! {
    #[test]
    fn action_is_a_right_action((m, g, h) in table_and_perms()) {
        prop_assert_eq!(m.apply_perm(&g).apply_perm(&h), m.apply_perm(&g.compose(&h)));
    }

    #[test]
    fn canonical_form_is_a_class_function((m, g, _h) in table_and_perms()) {
        let img = m.apply_perm(&g);
        prop_assert!(img.verify().valid());
        prop_assert_eq!(img.canonical_form(), m.clone());
        prop_assert_eq!(img.is_canonical(), img == m);
    }

    #[test]
    fn isomorphism_witness_is_correct((m, g, _h) in table_and_perms()) {
        let img = m.apply_perm(&g);
        let w = m.isomorphism_to(&img).unwrap().expect("conjugate tables are isomorphic");
        prop_assert_eq!(m.apply_perm(&w), img);
        prop_assert!(w.images() <= g.images());
    }

    #[test]
    fn records_round_trip((m, g, _h) in table_and_perms()) {
        let img = m.apply_perm(&g);
        prop_assert_eq!(dbio::parse(&dbio::serialize(&img)).unwrap(), img);
    }

    #[test]
    fn poset_canonical_is_a_class_function((k, g) in (1usize..=5).prop_flat_map(|k| (Just(k), perm(k))), pick in any::<prop::sample::Index>()) {
        let ps = enumerate_posets(k).unwrap();
        let p = &ps[pick.index(ps.len())];
        let labels: Vec<usize> = g.images().iter().map(|&x| x as usize).collect();
        prop_assert_eq!(&p.relabel(&labels).canonical(), p);
    }

    #[test]
    fn closure_conjugates_stay_valid_and_share_a_leader((k, g) in (1usize..=5).prop_flat_map(|k| (Just(k), perm(k))), pick in any::<prop::sample::Index>()) {
        let all = enumerate_3approx(k).unwrap();
        let s = &all[pick.index(all.len())];
        let c = s.conjugate(&g);
        prop_assert!(c.verify() && c.has_restricted_semimodularity() && c.is_discrete());
        let leader = |x: &ClosureMap| all_perms(k).map(|p| x.conjugate(&p).linearization()).max().unwrap();
        prop_assert_eq!(leader(&c), s.linearization());
        prop_assert_eq!(c.conjugate(&g.inverse()), s.clone());
    }

    #[test]
    fn rmatrix_canonical_is_a_class_function((m, g) in (1usize..=5).prop_flat_map(|m| (Just(m), perm(m))), pick in any::<prop::sample::Index>()) {
        let all = enumerate_rmatrices(m).unwrap();
        let r = &all[pick.index(all.len())];
        prop_assert_eq!(&r.permute(&g).canonical(), r);
    }

    #[test]
    fn young_canonical_is_a_class_function(p in 1usize..=6, pick in any::<prop::sample::Index>(), g in perm(6)) {
        let all = enumerate_young(p).unwrap();
        let d = &all[pick.index(all.len())];
        let m = d.dim();
        // restrict g to the coordinates in use
        let images: Vec<usize> = {
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by_key(|&i| g.apply(i));
            let mut inv = vec![0; m];
            for (r, &i) in order.iter().enumerate() { inv[i] = r; }
            inv
        };
        let pts = d.points().iter().map(|v| {
            let mut w = vec![0; m];
            for (i, &c) in v.iter().enumerate() { w[images[i]] = c; }
            w
        }).collect();
        let moved = YoungDiagram::new(m, pts).unwrap();
        prop_assert_eq!(&young_canonical(&moved), d);
    }
}

#[test]
fn automorphism_groups_match_brute_force() {
    for n in 1..=5 {
        for m in tables(n) {
            let brute: Vec<Perm> = all_perms(n - 1).filter(|g| m.apply_perm(g) == *m).collect();
            let aut = m.automorphism_group();
            assert_eq!(aut, brute, "{m:?}");
            assert!(is_group(&aut));
        }
    }
}

#[test]
fn symmetry_groups_of_splitting_structures_are_groups() {
    for p in enumerate_posets(5).unwrap() {
        assert!(is_group(&p.automorphisms()));
    }
    for s in enumerate_3approx(5).unwrap() {
        assert!(is_group(&s.stabilizer()));
    }
    for r in enumerate_rmatrices(5).unwrap() {
        assert!(is_group(&r.stabilizer()));
    }
}
