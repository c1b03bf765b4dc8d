//! Separating 3-approximate semilattices.
//!
//! A [`ClosureMap`] records, for every triple `(x₁, x₂, x₃)` of non-unit
//! elements, the set `cl({x₁, x₂, x₃})`; a 2-set or 1-set is encoded by
//! repeating arguments. For a discrete L-algebra, `y ∈ cl(A)` means
//! `(⋀A)·y = e`, so these maps describe a truncation of the ∧-closure and
//! split the discrete search into a handful of cases.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{all_perms, Perm};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClosureMap {
    k: usize,
    /// `cl[(x1*k + x2)*k + x3]`, bitmask over `0..k`.
    cl: Vec<u16>,
}

impl ClosureMap {
    /// Builds the map from `f(x₁, x₂, x₃) = cl({x₁,x₂,x₃})` as a bitmask.
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize, usize) -> u16) -> Self {
        assert!(k <= 16, "ground set too large");
        let mut cl = Vec::with_capacity(k * k * k);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    cl.push(f(a, b, c));
                }
            }
        }
        ClosureMap { k, cl }
    }

    /// The minimal closure `cl(A) = A`.
    pub fn trivial(k: usize) -> Self {
        ClosureMap::from_fn(k, |a, b, c| 1 << a | 1 << b | 1 << c)
    }

    pub fn size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn closure(&self, a: usize, b: usize, c: usize) -> u16 {
        self.cl[(a * self.k + b) * self.k + c]
    }

    /// `S(x₁, x₂, x₃, y)`.
    #[inline]
    pub fn s(&self, a: usize, b: usize, c: usize, y: usize) -> bool {
        self.closure(a, b, c) & (1 << y) != 0
    }

    fn members(&self, mask: u16) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(move |&y| mask & (1 << y) != 0)
    }

    /// Symmetry, extensivity, transitivity and separation of points.
    pub fn verify(&self) -> bool {
        let k = self.k;
        let triples = || (0..k).flat_map(move |a| (0..k).flat_map(move |b| (0..k).map(move |c| (a, b, c))));
        let symmetric = triples().all(|(a, b, c)| {
            let v = self.closure(a, b, c);
            [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
                .iter()
                .all(|&(x, y, z)| self.closure(x, y, z) == v)
        });
        let extensive = triples().all(|(a, b, c)| {
            let v = self.closure(a, b, c);
            let need = 1 << a | 1 << b | 1 << c;
            v & need == need
        });
        let transitive = triples().all(|(a, b, c)| {
            let v = self.closure(a, b, c);
            self.members(v)
                .all(|x| self.members(v).all(|y| self.members(v).all(|z| self.closure(x, y, z) & !v == 0)))
        });
        let separating = (0..k).all(|x| (0..x).all(|y| self.closure(x, x, x) != self.closure(y, y, y)));
        symmetric && extensive && transitive && separating
    }

    /// If `y ∈ cl{x₁,x₂,x₃} ∖ cl{x₁,x₂}` then `cl{x₁,x₂,x₃} ⊆ cl{x₁,x₂,y}`.
    pub fn has_restricted_semimodularity(&self) -> bool {
        let k = self.k;
        (0..k).all(|a| {
            (0..k).all(|b| {
                let pair = self.closure(a, b, b);
                (0..k).all(|c| {
                    let full = self.closure(a, b, c);
                    self.members(full & !pair).all(|y| full & !self.closure(a, b, y) == 0)
                })
            })
        })
    }

    /// `cl{x} = {x}` for every point.
    pub fn is_discrete(&self) -> bool {
        (0..self.k).all(|x| self.closure(x, x, x) == 1 << x)
    }

    /// The conjugate map `cl'(π(A)) = π(cl(A))`.
    pub fn conjugate(&self, pi: &Perm) -> ClosureMap {
        let k = self.k;
        let inv = pi.inverse();
        ClosureMap::from_fn(k, |a, b, c| map_mask(self.closure(inv.apply(a), inv.apply(b), inv.apply(c)), pi, k))
    }

    /// All `π` with `conjugate(π) = self`.
    pub fn stabilizer(&self) -> Vec<Perm> {
        all_perms(self.k).filter(|p| self.conjugate(p) == *self).collect()
    }

    /// Truth table of `S` over sorted quadruples `x₁ ≤ x₂ ≤ x₃`, then `y`,
    /// ascending. Comparisons between maps use this order.
    pub fn linearization(&self) -> Vec<bool> {
        sorted_multisets(self.k)
            .into_iter()
            .flat_map(|(a, b, c)| (0..self.k).map(move |y| (a, b, c, y)))
            .map(|(a, b, c, y)| self.s(a, b, c, y))
            .collect()
    }

    /// Lexicographically greatest among all its conjugates.
    pub fn is_lex_greatest(&self) -> bool {
        let own = self.linearization();
        all_perms(self.k).all(|p| self.conjugate(&p).linearization() <= own)
    }

    /// The 1-marginal `x ≤ y ⟺ y ∈ cl{x}` as an order matrix.
    pub fn point_order(&self) -> crate::poset::PosetMatrix {
        let k = self.k;
        crate::poset::PosetMatrix::from_rel(k, (0..k * k).map(|x| self.s(x / k, x / k, x / k, x % k)).collect())
    }

    /// Text block: `k`, then one line `x1 x2 x3 : y1 y2 ...` per sorted
    /// multiset, 1-based.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.k);
        for (a, b, c) in sorted_multisets(self.k) {
            let ys: Vec<String> = self.members(self.closure(a, b, c)).map(|y| (y + 1).to_string()).collect();
            out.push_str(&format!("{} {} {} : {}\n", a + 1, b + 1, c + 1, ys.join(" ")));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |msg: String| Error::Argument(format!("closure map: {msg}"));
        let k: usize = lines
            .next()
            .ok_or_else(|| bad("empty input".into()))?
            .trim()
            .parse()
            .map_err(|_| bad("bad size".into()))?;
        if k == 0 || k > 16 {
            return Err(bad(format!("size {k} out of range")));
        }
        let mut table: HashMap<(usize, usize, usize), u16> = HashMap::new();
        for line in lines {
            let (lhs, rhs) = line.split_once(':').ok_or_else(|| bad(format!("missing ':' in {line:?}")))?;
            let parse = |s: &str| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| match t.parse::<usize>() {
                        Ok(v) if (1..=k).contains(&v) => Ok(v - 1),
                        _ => Err(bad(format!("bad element {t:?}"))),
                    })
                    .collect()
            };
            let xs = parse(lhs)?;
            let [a, b, c] = xs[..] else {
                return Err(bad(format!("expected three arguments in {line:?}")));
            };
            let mask = parse(rhs)?.iter().fold(0u16, |m, &y| m | 1 << y);
            let mut key = [a, b, c];
            key.sort();
            table.insert((key[0], key[1], key[2]), mask);
        }
        if table.len() != sorted_multisets(k).len() {
            return Err(bad("missing multisets".into()));
        }
        Ok(ClosureMap::from_fn(k, |a, b, c| {
            let mut key = [a, b, c];
            key.sort();
            table[&(key[0], key[1], key[2])]
        }))
    }
}

impl fmt::Debug for ClosureMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosureMap({:?})", self.to_text())
    }
}

pub(crate) fn map_mask(mask: u16, pi: &Perm, k: usize) -> u16 {
    (0..k).filter(|&y| mask & (1 << y) != 0).fold(0, |m, y| m | 1 << pi.apply(y))
}

/// `(a, b, c)` with `a ≤ b ≤ c`, lexicographically.
pub(crate) fn sorted_multisets(k: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in a..k {
            for c in b..k {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Backtracking state for [`enumerate_3approx`]. Closures are assigned per
/// support set (a 2- or 3-subset), in the order those supports first occur
/// among the sorted multisets, so that every assigned prefix is a prefix of
/// the linearization.
struct ApproxSearch {
    k: usize,
    /// Supports of size 2 and 3 in assignment order.
    vars: Vec<u16>,
    /// Support mask of each sorted multiset.
    multiset_support: Vec<u16>,
    /// Closure by support mask; singletons are fixed, `0` means unassigned.
    cl: Vec<u16>,
    perms: Vec<PermData>,
    out: Vec<ClosureMap>,
}

struct PermData {
    /// `π(mask)` for all masks.
    image: Vec<u16>,
    /// `π⁻¹(support of multiset t)` for all sorted multisets.
    pre_support: Vec<u16>,
}

impl ApproxSearch {
    fn new(k: usize) -> Self {
        let multisets = sorted_multisets(k);
        let support = |&(a, b, c): &(usize, usize, usize)| (1u16 << a) | (1 << b) | (1 << c);
        let mut vars: Vec<u16> = Vec::new();
        for s in multisets.iter().map(support) {
            if s.count_ones() > 1 && !vars.contains(&s) {
                vars.push(s);
            }
        }
        let multiset_support: Vec<u16> = multisets.iter().map(support).collect();
        let mut cl = vec![0u16; 1 << k];
        for x in 0..k {
            cl[1 << x] = 1 << x;
        }
        let perms = all_perms(k)
            .map(|p| {
                let inv = p.inverse();
                PermData {
                    image: (0..1u32 << k).map(|m| map_mask(m as u16, &p, k)).collect(),
                    pre_support: multiset_support.iter().map(|&s| map_mask(s, &inv, k)).collect(),
                }
            })
            .collect();
        ApproxSearch {
            k,
            vars,
            multiset_support,
            cl,
            perms,
            out: Vec::new(),
        }
    }

    fn subsets_up_to_three(&self, mask: u16) -> Vec<u16> {
        let pts: Vec<usize> = (0..self.k).filter(|&y| mask & (1 << y) != 0).collect();
        let mut out = Vec::new();
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate().skip(i + 1) {
                out.push(1 << a | 1 << b);
                for &c in &pts[j + 1..] {
                    out.push(1 << a | 1 << b | 1 << c);
                }
            }
        }
        out
    }

    /// All constraints whose closures are assigned.
    fn consistent(&self) -> bool {
        for &x in &self.vars {
            let cx = self.cl[x as usize];
            if cx == 0 {
                continue;
            }
            // transitivity
            for b in self.subsets_up_to_three(cx) {
                let cb = self.cl[b as usize];
                if cb != 0 && cb & !cx != 0 {
                    return false;
                }
            }
            // restricted semimodularity with Q = x minus one point
            for drop in (0..self.k).filter(|&d| x & (1 << d) != 0) {
                let q = x & !(1 << drop);
                let cq = self.cl[q as usize];
                if cq == 0 {
                    continue;
                }
                let mut extra = cx & !cq;
                while extra != 0 {
                    let y = extra.trailing_zeros();
                    extra &= extra - 1;
                    let cqy = self.cl[(q | 1 << y) as usize];
                    if cqy != 0 && cx & !cqy != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Prunes when some conjugate is already known to be lexicographically
    /// greater on the assigned prefix.
    fn lex_ok(&self) -> bool {
        let key = |mask: u16| -> u32 { (0..self.k).fold(0, |acc, y| acc << 1 | (mask >> y & 1) as u32) };
        'perm: for p in &self.perms {
            for (t, &s) in self.multiset_support.iter().enumerate() {
                let own = self.cl[s as usize];
                let pre = self.cl[p.pre_support[t] as usize];
                if own == 0 || pre == 0 {
                    continue 'perm;
                }
                let img = p.image[pre as usize];
                match key(img).cmp(&key(own)) {
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Less => continue 'perm,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    fn run(&mut self, t: usize) {
        if t == self.vars.len() {
            let k = self.k;
            let cl = &self.cl;
            self.out
                .push(ClosureMap::from_fn(k, |a, b, c| cl[(1 << a | 1 << b | 1 << c) as usize]));
            return;
        }
        let support = self.vars[t];
        let free = !support & ((1u32 << self.k) - 1) as u16;
        // all supersets of the support, larger closures first
        let mut choices: Vec<u16> = Vec::new();
        let mut sub = free;
        loop {
            choices.push(support | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        for c in choices {
            self.cl[support as usize] = c;
            if self.consistent() && self.lex_ok() {
                self.run(t + 1);
            }
        }
        self.cl[support as usize] = 0;
    }
}

/// Discrete separating 3-approximate semilattices with restricted lower
/// semimodularity on `k` points, one per conjugacy class, each the
/// lexicographically greatest in its class. Sorted by decreasing
/// linearization.
pub fn enumerate_3approx(k: usize) -> Result<Vec<ClosureMap>> {
    if k == 0 {
        return Err(Error::Argument("ground set must be non-empty".into()));
    }
    if k > 8 {
        return Err(Error::Argument("3-approximate semilattices are only enumerated for k ≤ 8".into()));
    }
    let mut search = ApproxSearch::new(k);
    search.run(0);
    let mut out = search.out;
    out.sort_by_key(|s| std::cmp::Reverse(s.linearization()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn trivial_closure_is_valid() {
        for k in 1..=4 {
            let t = ClosureMap::trivial(k);
            assert!(t.verify());
            assert!(t.has_restricted_semimodularity());
            assert!(t.is_discrete());
        }
    }

    #[test]
    fn full_closure_is_not_separating() {
        let full = ClosureMap::from_fn(3, |_, _, _| 0b111);
        assert!(!full.verify());
    }

    #[test]
    fn flipped_bit_breaks_semimodularity() {
        // cl{0,1} = {0,1,2} but cl{0,2} = {0,2}: point 2 joins the closure
        // of {0,1} without the closures agreeing.
        let s = ClosureMap::from_fn(3, |a, b, c| {
            let set = 1u16 << a | 1 << b | 1 << c;
            if set == 0b011 {
                0b111
            } else {
                set
            }
        });
        assert!(!s.has_restricted_semimodularity());
        let fixed = ClosureMap::from_fn(3, |a, b, c| {
            let set = 1u16 << a | 1 << b | 1 << c;
            if set.count_ones() >= 2 {
                0b111
            } else {
                set
            }
        });
        assert!(fixed.verify() && fixed.has_restricted_semimodularity());
    }

    /// Brute force at k = 3 over raw closure tables on sorted multisets,
    /// filtered by the defining properties and grouped by conjugacy.
    #[test]
    fn three_points_match_brute_force() {
        let k = 3;
        let ms = sorted_multisets(k);
        let options: Vec<Vec<u16>> = ms
            .iter()
            .map(|&(a, b, c)| {
                let s = 1u16 << a | 1 << b | 1 << c;
                (0..8u16).filter(|m| m & s == s).collect()
            })
            .collect();
        let mut classes = HashSet::new();
        let mut idx = vec![0usize; ms.len()];
        loop {
            let table: HashMap<(usize, usize, usize), u16> = ms
                .iter()
                .zip(&idx)
                .enumerate()
                .map(|(t, (&key, &i))| (key, options[t][i]))
                .collect();
            let s = ClosureMap::from_fn(k, |a, b, c| {
                let mut key = [a, b, c];
                key.sort();
                table[&(key[0], key[1], key[2])]
            });
            if s.verify() && s.has_restricted_semimodularity() && s.is_discrete() {
                let rep = all_perms(k).map(|p| s.conjugate(&p).linearization()).max().unwrap();
                classes.insert(rep);
            }
            let mut t = 0;
            loop {
                if t == idx.len() {
                    let found: HashSet<_> = enumerate_3approx(k).unwrap().iter().map(|s| s.linearization()).collect();
                    assert_eq!(found, classes);
                    return;
                }
                idx[t] += 1;
                if idx[t] < options[t].len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
        }
    }

    #[test]
    fn outputs_are_valid_lex_greatest_and_non_conjugate() {
        for k in 1..=5 {
            let all = enumerate_3approx(k).unwrap();
            let mut seen = HashSet::new();
            for s in &all {
                assert!(s.verify() && s.has_restricted_semimodularity() && s.is_discrete());
                assert!(s.is_lex_greatest());
                let rep = all_perms(k).map(|p| s.conjugate(&p).linearization()).max().unwrap();
                assert!(seen.insert(rep));
            }
        }
        assert_eq!(enumerate_3approx(1).unwrap().len(), 1);
    }

    #[test]
    fn conjugation_preserves_validity() {
        for s in enumerate_3approx(4).unwrap() {
            for p in all_perms(4) {
                let c = s.conjugate(&p);
                assert!(c.verify() && c.has_restricted_semimodularity());
            }
        }
    }

    #[test]
    fn point_marginal_is_an_order() {
        for s in enumerate_3approx(4).unwrap() {
            assert!(s.point_order().is_partial_order());
        }
    }

    #[test]
    fn text_round_trip() {
        for s in enumerate_3approx(4).unwrap() {
            assert_eq!(ClosureMap::from_text(&s.to_text()).unwrap(), s);
        }
        assert!(ClosureMap::from_text("2\n1 1 1 : 1\n").is_err());
    }
}
