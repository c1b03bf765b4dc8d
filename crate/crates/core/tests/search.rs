use std::collections::HashSet;

use lalgebra::poset::{enumerate_posets, PosetMatrix};
use lalgebra::search::{
    class_cases, enumerate_class, enumerate_diamond, enumerate_discrete, enumerate_general, enumerate_on_poset, split_cases, CellOrder,
    Mode, SearchCase, Strategy,
};
use lalgebra::{AlgebraClass, MulTable};

fn check_case(case: &SearchCase) -> usize {
    let out: Vec<MulTable> = case.solutions().collect();
    let mut keys = HashSet::new();
    for m in &out {
        assert!(m.verify().valid());
        assert!(case.admits(m), "{m:?} violates its case");
        assert!(case.is_lex_leader(m), "{m:?} is not a lex-leader");
        assert!(keys.insert(m.canonical_form()), "{m:?} duplicates a class");
    }
    out.len()
}

#[test]
fn every_case_is_sound_lex_leading_and_duplicate_free() {
    for n in 1..=5 {
        for case in split_cases(n, false).unwrap() {
            check_case(&case);
        }
    }
}

#[test]
fn square_order_is_as_valid_as_row_major() {
    for n in 3..=6 {
        let mut total = 0;
        for case in split_cases(n, false).unwrap() {
            total += check_case(&case.with_order(CellOrder::square(n)));
        }
        assert_eq!(total, enumerate_general(n).count());
    }
}

#[test]
fn table_one_small_sizes() {
    let general: Vec<usize> = (1..=6).map(|n| enumerate_general(n).count()).collect();
    assert_eq!(general, [1, 1, 5, 44, 632, 15582]);
    let split: Vec<usize> = (1..=6).map(|n| enumerate_class(n, AlgebraClass::All).unwrap().count()).collect();
    assert_eq!(split, general);
}

#[test]
fn discrete_counts() {
    let got: Vec<usize> = (2..=6).map(|n| enumerate_discrete(n).unwrap().count()).collect();
    assert_eq!(got, [1, 3, 15, 101, 1241]);
    for n in 2..=5 {
        let filtered = enumerate_general(n).filter(MulTable::is_discrete).count();
        assert_eq!(filtered, enumerate_discrete(n).unwrap().count());
    }
}

#[test]
fn hilbert_counts() {
    let got: Vec<usize> = (1..=7)
        .map(|n| enumerate_class(n, AlgebraClass::Hilbert).unwrap().count())
        .collect();
    assert_eq!(got, [1, 1, 2, 6, 21, 95, 550]);
    for n in 1..=6 {
        let (cases, _) = class_cases(n, AlgebraClass::Hilbert, Strategy::General).unwrap();
        let general = cases[0].solutions().count();
        assert_eq!(general, enumerate_general(n).filter(MulTable::is_hilbert).count());
        assert_eq!(general, got[n - 1]);
    }
}

#[test]
fn diamond_mode_agrees_with_the_plain_poset_search() {
    for n in 4..=6 {
        let via_r = enumerate_diamond(n).unwrap().count();
        let direct = enumerate_on_poset(&PosetMatrix::diamond(n - 1), n).unwrap().count();
        assert_eq!(via_r, direct, "n = {n}");
    }
    assert!(enumerate_diamond(3).is_err());
}

#[test]
fn discrete_mode_agrees_with_the_antichain_poset_search() {
    for n in 2..=6 {
        let direct = enumerate_on_poset(&PosetMatrix::antichain(n - 1), n).unwrap().count();
        assert_eq!(enumerate_discrete(n).unwrap().count(), direct, "n = {n}");
    }
}

#[test]
fn poset_sums_equal_general_counts() {
    for n in 2..=6 {
        let sum: usize = enumerate_posets(n - 1)
            .unwrap()
            .iter()
            .map(|p| {
                let out: Vec<MulTable> = enumerate_on_poset(p, n).unwrap().collect();
                assert!(out.iter().all(|m| m.natural_order() == *p));
                out.len()
            })
            .sum();
        assert_eq!(sum, enumerate_general(n).count(), "n = {n}");
    }
}

#[test]
fn chain_case_gives_bell_many_linear_algebras() {
    let bell = [1, 1, 2, 5, 15, 52, 203];
    for n in 2..=7 {
        let out: Vec<MulTable> = enumerate_on_poset(&PosetMatrix::chain(n - 1), n).unwrap().collect();
        assert_eq!(out.len(), bell[n - 1]);
        assert!(out.iter().all(MulTable::is_linear));
    }
}

#[test]
fn poset_argument_errors() {
    assert!(enumerate_on_poset(&PosetMatrix::chain(3), 5).is_err());
    let cyclic = PosetMatrix::from_rel(2, vec![true, true, true, true]);
    assert!(SearchCase::poset(cyclic).is_err());
}

#[test]
fn case_modes_follow_the_split() {
    let cases = split_cases(6, false).unwrap();
    let tags: Vec<&str> = cases.iter().map(|c| c.mode.tag()).collect();
    let first_diamond = tags.iter().position(|&t| t == "diamond").unwrap();
    let first_poset = tags.iter().position(|&t| t == "poset").unwrap();
    assert!(tags[..first_diamond].iter().all(|&t| t == "discrete"));
    assert!(tags[first_diamond..first_poset].iter().all(|&t| t == "diamond"));
    assert!(tags[first_poset..].iter().all(|&t| t == "poset"));
    for c in &cases {
        if let Mode::Poset(p) = &c.mode {
            assert!(!p.is_antichain() && !p.is_diamond());
        }
    }
    assert_eq!(cases.len(), 8 + 11 + (63 - 2));
}
