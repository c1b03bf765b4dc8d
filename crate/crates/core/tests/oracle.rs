//! The engine against a solver-free oracle: every table is filled cell by
//! cell with every value, partial tables are rejected as soon as a fully
//! instantiated axiom fails, and survivors are grouped by a brute-force
//! orbit key.

use std::collections::{BTreeMap, BTreeSet};

use lalgebra::search::{enumerate_general, split_cases};
use lalgebra::MulTable;

/// All labeled L-algebras of size `n` with unit `n-1`, as flat tables.
fn labeled_algebras(n: usize) -> Vec<Vec<u8>> {
    let u = n - 1;
    let mut t = vec![u8::MAX; n * n];
    for i in 0..n {
        t[u * n + i] = i as u8;
        t[i * n + u] = u as u8;
        t[i * n + i] = u as u8;
    }
    let free: Vec<usize> = (0..n * n).filter(|&c| t[c] == u8::MAX).collect();
    let mut out = Vec::new();
    fill(n, &mut t, &free, 0, &mut out);
    out
}

fn get(n: usize, t: &[u8], i: usize, j: usize) -> Option<usize> {
    let v = t[i * n + j];
    (v != u8::MAX).then_some(v as usize)
}

fn consistent(n: usize, t: &[u8]) -> bool {
    let u = n - 1;
    for x in 0..n {
        for y in 0..n {
            if x != y && get(n, t, x, y) == Some(u) && get(n, t, y, x) == Some(u) {
                return false;
            }
            for z in 0..n {
                let lhs = get(n, t, x, y).zip(get(n, t, x, z)).and_then(|(a, b)| get(n, t, a, b));
                let rhs = get(n, t, y, x).zip(get(n, t, y, z)).and_then(|(a, b)| get(n, t, a, b));
                if let (Some(l), Some(r)) = (lhs, rhs) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn fill(n: usize, t: &mut Vec<u8>, free: &[usize], at: usize, out: &mut Vec<Vec<u8>>) {
    if at == free.len() {
        out.push(t.clone());
        return;
    }
    for v in 0..n as u8 {
        t[free[at]] = v;
        if consistent(n, t) {
            fill(n, t, free, at + 1, out);
        }
    }
    t[free[at]] = u8::MAX;
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Least relabeling `t'[g i][g j] = g t[i][j]` over all `g` fixing the unit.
fn orbit_key(n: usize, t: &[u8]) -> Vec<u8> {
    permutations(n - 1)
        .into_iter()
        .map(|mut g| {
            g.push(n - 1);
            let mut r = vec![0u8; n * n];
            for i in 0..n {
                for j in 0..n {
                    r[g[i] * n + g[j]] = g[t[i * n + j] as usize] as u8;
                }
            }
            r
        })
        .min()
        .unwrap()
}

#[test]
fn oracle_agrees_with_both_strategies_up_to_five() {
    for n in 1..=5 {
        let labeled = labeled_algebras(n);
        assert!(labeled.iter().all(|t| MulTable::new(n, t.clone()).unwrap().verify().valid()));
        let oracle: BTreeSet<Vec<u8>> = labeled.iter().map(|t| orbit_key(n, t)).collect();

        let general: Vec<MulTable> = enumerate_general(n).collect();
        let general_keys: BTreeSet<Vec<u8>> = general.iter().map(|m| orbit_key(n, m.entries())).collect();
        assert_eq!(general.len(), general_keys.len(), "duplicates in general mode, n = {n}");
        assert_eq!(general_keys, oracle, "general mode, n = {n}");

        let mut split = BTreeMap::new();
        for (c, case) in split_cases(n, false).unwrap().iter().enumerate() {
            for m in case.solutions() {
                assert!(split.insert(orbit_key(n, m.entries()), c).is_none(), "duplicate class, n = {n}");
            }
        }
        assert_eq!(split.keys().cloned().collect::<BTreeSet<_>>(), oracle, "split mode, n = {n}");
    }
}

#[test]
fn oracle_counts_labeled_tables_by_orbit_stabilizer() {
    // |labeled| = Σ over classes of (n-1)!/|Aut|
    for n in 1..=5 {
        let labeled = labeled_algebras(n).len();
        let fact: usize = (1..n).product();
        let total: usize = enumerate_general(n).map(|m| fact / m.automorphism_group().len()).sum();
        assert_eq!(labeled, total, "n = {n}");
    }
}
