//! Finite L-algebras as multiplication tables.
//!
//! Elements are `0..n` with the logical unit fixed at `n-1`. Textual formats
//! ([`crate::dbio`]) use 1-based labels, so element `i` is printed as `i+1`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{all_perms, Perm};
use crate::poset::PosetMatrix;

/// An `n × n` table over `0..n`, `entries[i*n + j] = i·j`.
///
/// Construction only checks the shape and the entry range; the L-algebra
/// conditions are checked by [`MulTable::verify`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MulTable {
    n: usize,
    entries: Vec<u8>,
}

/// Outcome of [`MulTable::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub first_violation: Option<Violation>,
}

/// A failed condition with the 0-based witness that exposed it.
///
/// Conditions are numbered as in the matrix description of an L-algebra:
/// 1 row of the unit, 2 column of the unit, 3 diagonal, 4 cycloid equation,
/// 5 antisymmetry of the natural order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: u8,
    pub witness: Vec<usize>,
}

impl VerifyReport {
    pub fn valid(&self) -> bool {
        self.first_violation.is_none()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "condition {} fails at ({})", self.condition, w.join(","))
    }
}

impl MulTable {
    pub fn new(n: usize, entries: Vec<u8>) -> Result<Self> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::Shape(format!("size {n} out of range 1..=255")));
        }
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} entries for size {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&v| v as usize >= n) {
            return Err(Error::Shape(format!(
                "entry ({},{}) = {} is not an element",
                pos / n + 1,
                pos % n + 1,
                entries[pos] as usize + 1
            )));
        }
        Ok(MulTable { n, entries })
    }

    /// Builds a table from a closure `f(i, j) = i·j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(u8::try_from(f(i, j)).map_err(|_| Error::Shape(format!("entry ({i},{j}) does not fit in a byte")))?);
            }
        }
        MulTable::new(n, entries)
    }

    /// Builds a table from 1-based rows, as written in the literature.
    pub fn from_rows_1based(rows: &[&[usize]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape(format!("row of length {} in size {n}", row.len())));
            }
            for &v in row.iter() {
                if v == 0 || v > n {
                    return Err(Error::Shape(format!("entry {v} outside 1..={n}")));
                }
                entries.push((v - 1) as u8);
            }
        }
        MulTable::new(n, entries)
    }

    /// The unit-only algebra of size one.
    pub fn trivial() -> Self {
        MulTable { n: 1, entries: vec![0] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> usize {
        self.n - 1
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j] as usize
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Natural order test: `x ≤ y` iff `x·y = e`.
    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.get(x, y) == self.unit()
    }

    /// Checks conditions 1–5 and reports the first failure, scanning
    /// conditions in order and witnesses lexicographically.
    pub fn verify(&self) -> VerifyReport {
        VerifyReport {
            first_violation: self.first_violation(),
        }
    }

    fn first_violation(&self) -> Option<Violation> {
        let n = self.n;
        let e = self.unit();
        let fail = |condition: u8, witness: Vec<usize>| Some(Violation { condition, witness });
        for j in 0..n {
            if self.get(e, j) != j {
                return fail(1, vec![j]);
            }
        }
        for i in 0..n {
            if self.get(i, e) != e {
                return fail(2, vec![i]);
            }
        }
        for k in 0..n {
            if self.get(k, k) != e {
                return fail(3, vec![k]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.cycloid_holds(i, j, k) {
                        return fail(4, vec![i, j, k]);
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.get(i, j) == e && self.get(j, i) == e {
                    return fail(5, vec![i, j]);
                }
            }
        }
        None
    }

    #[inline]
    fn cycloid_holds(&self, i: usize, j: usize, k: usize) -> bool {
        self.get(self.get(i, j), self.get(i, k)) == self.get(self.get(j, i), self.get(j, k))
    }

    pub fn is_l_algebra(&self) -> bool {
        self.first_violation().is_none()
    }

    /// `x·(y·z) = (x·y)·(x·z)` for all triples.
    pub fn is_hilbert(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.get(x, self.get(y, z)) == self.get(self.get(x, y), self.get(x, z)))))
    }

    /// The natural order restricted to the non-unit elements.
    ///
    /// Panics if the relation is not a partial order, which cannot happen
    /// for a valid L-algebra.
    pub fn natural_order(&self) -> PosetMatrix {
        let k = self.n - 1;
        let rel = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| self.leq(i, j))
            .collect();
        let p = PosetMatrix::from_rel(k, rel);
        assert!(p.is_partial_order(), "natural order of an L-algebra must be a partial order");
        p
    }

    /// The order below the unit is an antichain.
    pub fn is_discrete(&self) -> bool {
        let e = self.unit();
        (0..e).all(|x| (0..e).all(|y| x == y || !self.leq(x, y)))
    }

    /// The natural order is total.
    pub fn is_linear(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| (0..n).all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    /// Value of `(x₁ ∧ … ∧ x_k)·z` rewritten with the L-algebra operation:
    /// `(a ∧ x)·z = (a·x)·(a·z)`.
    pub fn wedge_dot(&self, xs: &[usize], z: usize) -> Result<usize> {
        match xs {
            [] => Err(Error::Argument("wedge_dot needs at least one element".into())),
            [x] => Ok(self.get(*x, z)),
            [init @ .., last] => {
                let a_last = self.wedge_dot(init, *last)?;
                let a_z = self.wedge_dot(init, z)?;
                Ok(self.get(a_last, a_z))
            }
        }
    }

    /// `M^g` with `(M^g)[i][j] = g⁻¹(M[g(i)][g(j)])`, the unit fixed.
    ///
    /// The action is a right action: `(M^g)^h = M^(g∘h)` where
    /// `(g∘h)(x) = g(h(x))`, see [`Perm::compose`].
    pub fn apply_perm(&self, g: &Perm) -> MulTable {
        assert_eq!(g.degree() + 1, self.n, "permutation degree must be n-1");
        let ginv = g.inverse();
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(ginv.apply(self.get(g.apply(i), g.apply(j))) as u8);
            }
        }
        MulTable { n, entries }
    }

    /// Compares `M^g` with `other` in row-major order without building `M^g`.
    fn cmp_image(&self, g: &Perm, ginv: &Perm, other: &MulTable) -> Ordering {
        let n = self.n;
        for i in 0..n {
            let gi = g.apply(i);
            for j in 0..n {
                let v = ginv.apply(self.get(gi, g.apply(j)));
                match v.cmp(&other.get(i, j)) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }

    /// The row-major lexicographically least table in the orbit of `self`.
    pub fn canonical_form(&self) -> MulTable {
        let mut best = self.clone();
        for g in all_perms(self.n - 1) {
            let ginv = g.inverse();
            if self.cmp_image(&g, &ginv, &best) == Ordering::Less {
                best = self.apply_perm(&g);
            }
        }
        best
    }

    /// True when no `g` gives a row-major smaller `M^g`.
    pub fn is_canonical(&self) -> bool {
        all_perms(self.n - 1).all(|g| {
            let ginv = g.inverse();
            self.cmp_image(&g, &ginv, self) != Ordering::Less
        })
    }

    /// The lexicographically least `g` with `other = self^g`, if any.
    pub fn isomorphism_to(&self, other: &MulTable) -> Result<Option<Perm>> {
        if self.n != other.n {
            return Err(Error::Argument(format!("size mismatch: {} vs {}", self.n, other.n)));
        }
        let mut found = None;
        self.search_isos(other, &mut |g| {
            found = Some(g);
            false
        });
        Ok(found)
    }

    /// All `g` with `self^g = self`, in lexicographic order.
    pub fn automorphism_group(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        self.search_isos(self, &mut |g| {
            out.push(g);
            true
        });
        out
    }

    /// Backtracking over `g(0), g(1), …` in ascending order; `visit`
    /// returns false to stop.
    fn search_isos(&self, other: &MulTable, visit: &mut dyn FnMut(Perm) -> bool) {
        let m = self.n - 1;
        let mut img = vec![usize::MAX; self.n];
        img[m] = m;
        let mut used = vec![false; self.n];
        used[m] = true;
        self.iso_step(other, 0, &mut img, &mut used, visit);
    }

    fn iso_step(&self, other: &MulTable, t: usize, img: &mut [usize], used: &mut [bool], visit: &mut dyn FnMut(Perm) -> bool) -> bool {
        let m = self.n - 1;
        if t == m {
            // pairs whose value image was unknown when checked
            let n = self.n;
            if !(0..n).all(|i| (0..n).all(|j| img[other.get(i, j)] == self.get(img[i], img[j]))) {
                return true;
            }
            let g = Perm::from_images(img[..m].iter().map(|&x| x as u8).collect()).expect("search produced a bijection");
            return visit(g);
        }
        for cand in 0..m {
            if used[cand] {
                continue;
            }
            img[t] = cand;
            used[cand] = true;
            if self.iso_consistent(other, t, img) && !self.iso_step(other, t + 1, img, used, visit) {
                used[cand] = false;
                img[t] = usize::MAX;
                return false;
            }
            used[cand] = false;
        }
        img[t] = usize::MAX;
        true
    }

    /// Checks `g(other[i][j]) = self[g(i)][g(j)]` for all pairs touching `t`
    /// whose value image is already known.
    fn iso_consistent(&self, other: &MulTable, t: usize, img: &[usize]) -> bool {
        let m = self.n - 1;
        let check = |i: usize, j: usize| {
            let b = other.get(i, j);
            let a = self.get(img[i], img[j]);
            if b == m || img[b] != usize::MAX {
                img[b] == a
            } else {
                a != m && !img.contains(&a)
            }
        };
        (0..=t).all(|s| check(s, t) && check(t, s)) && check(m, t) && check(t, m)
    }

    /// `((x·y)·z)·((y·x)·z) = ((x·y)·z)·z` for all triples.
    pub fn is_semiregular(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.get(x, y);
                let yx = self.get(y, x);
                (0..n).all(|z| {
                    let a = self.get(xy, z);
                    self.get(a, self.get(yx, z)) == self.get(a, z)
                })
            })
        })
    }

    /// Semiregular, and every `x ≤ y` admits some `z ≥ x` with `z·x = y`.
    pub fn is_regular(&self) -> bool {
        let n = self.n;
        self.is_semiregular()
            && (0..n).all(|x| {
                (0..n)
                    .filter(|&y| self.leq(x, y))
                    .all(|y| (0..n).any(|z| self.leq(x, z) && self.get(z, x) == y))
            })
    }

    /// Elements `x` with some `y ≤ x` such that `x·y = y`. Always contains
    /// the unit.
    pub fn dense_elements(&self) -> Vec<usize> {
        let n = self.n;
        (0..n).filter(|&x| (0..n).any(|y| self.leq(y, x) && self.get(x, y) == y)).collect()
    }

    /// For a linear algebra, the least `x` with `y·x = x` for all `y > x`.
    pub fn smallest_invariant(&self) -> Result<usize> {
        if !self.is_linear() {
            return Err(Error::Argument("smallest_invariant needs a linear algebra".into()));
        }
        let n = self.n;
        let invariant = |x: usize| (0..n).all(|y| y == x || !self.leq(x, y) || self.get(y, x) == x);
        let mut best = self.unit();
        for x in (0..n).filter(|&x| invariant(x)) {
            if self.leq(x, best) {
                best = x;
            }
        }
        Ok(best)
    }
}

impl fmt::Debug for MulTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MulTable({})", crate::dbio::serialize(self))
    }
}

impl fmt::Display for MulTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| (self.get(i, j) + 1).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size3(m12: usize, m21: usize) -> MulTable {
        MulTable::from_rows_1based(&[&[3, m12, 3], &[m21, 3, 3], &[1, 2, 3]]).unwrap()
    }

    #[test]
    fn small_tables_verify() {
        assert!(MulTable::trivial().verify().valid());
        let two = MulTable::from_rows_1based(&[&[2, 2], &[1, 2]]).unwrap();
        assert!(two.verify().valid());
        assert!(two.is_hilbert());
        assert!(two.is_discrete() && two.is_linear());
        assert_eq!(two.natural_order().rel_rows(), vec![vec![true]]);
    }

    #[test]
    fn antisymmetry_violation_reports_condition_five() {
        let report = size3(3, 3).verify();
        let v = report.first_violation.unwrap();
        assert_eq!(v.condition, 5);
        assert_eq!(v.witness, vec![0, 1]);
        assert_eq!(v.to_string(), "condition 5 fails at (1,2)");
    }

    #[test]
    fn forced_rows_are_checked_first() {
        let bad = MulTable::from_rows_1based(&[&[2, 2], &[2, 2]]).unwrap();
        assert_eq!(bad.verify().first_violation.unwrap().condition, 1);
        let bad = MulTable::from_rows_1based(&[&[2, 1], &[1, 2]]).unwrap();
        assert_eq!(bad.verify().first_violation.unwrap().condition, 2);
        let bad = MulTable::from_rows_1based(&[&[1, 2], &[1, 2]]).unwrap();
        assert_eq!(bad.verify().first_violation.unwrap().condition, 3);
    }

    #[test]
    fn shape_errors_are_distinct_from_axiom_failures() {
        assert!(matches!(MulTable::new(2, vec![1, 1, 0]), Err(Error::Shape(_))));
        assert!(matches!(MulTable::new(2, vec![1, 1, 0, 2]), Err(Error::Shape(_))));
        assert!(matches!(MulTable::new(0, vec![]), Err(Error::Shape(_))));
    }

    #[test]
    fn wedge_dot_matches_rewriting() {
        let m = size3(2, 1);
        assert!(m.verify().valid());
        for x in 0..3 {
            for z in 0..3 {
                assert_eq!(m.wedge_dot(&[x], z).unwrap(), m.get(x, z));
            }
        }
        assert_eq!(m.wedge_dot(&[2, 2], 1).unwrap(), 1);
        assert_eq!(m.wedge_dot(&[0, 1], 2).unwrap(), 2);
        let k3 = m.wedge_dot(&[0, 1, 0], 1).unwrap();
        let expect = m.get(m.get(m.get(0, 1), m.get(0, 0)), m.get(m.get(0, 1), m.get(0, 1)));
        assert_eq!(k3, expect);
        assert!(m.wedge_dot(&[], 0).is_err());
    }

    #[test]
    fn isomorphism_search_finds_least_witness() {
        let m = size3(2, 1);
        let g = Perm::from_images(vec![1, 0]).unwrap();
        let mg = m.apply_perm(&g);
        let found = m.isomorphism_to(&mg).unwrap().unwrap();
        assert_eq!(m.apply_perm(&found), mg);
        assert_eq!(m.isomorphism_to(&m).unwrap().unwrap(), Perm::identity(2));
        assert!(m.isomorphism_to(&MulTable::trivial()).is_err());
    }

    #[test]
    fn trivial_algebra_predicates() {
        let t = MulTable::trivial();
        assert!(t.is_semiregular() && t.is_regular());
        assert_eq!(t.dense_elements(), vec![0]);
        assert_eq!(t.smallest_invariant().unwrap(), 0);
        let two = MulTable::from_rows_1based(&[&[2, 2], &[1, 2]]).unwrap();
        assert_eq!(two.smallest_invariant().unwrap(), 0);
        assert_eq!(two.automorphism_group(), vec![Perm::identity(1)]);
    }

    #[test]
    fn smallest_invariant_rejects_non_linear() {
        let m = size3(2, 1);
        assert!(!m.is_linear());
        assert!(m.smallest_invariant().is_err());
    }
}
