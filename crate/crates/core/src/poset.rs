//! Finite posets on the non-unit elements.
//!
//! A poset on `0..k` is stored as its reflexive order matrix. Posets are
//! enumerated up to isomorphism by repeatedly adding a new minimal element
//! below an upward-closed subset, then keeping one canonical labeling per
//! class.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetMatrix {
    k: usize,
    rel: Vec<bool>,
}

impl PosetMatrix {
    /// Wraps a row-major relation matrix. Order axioms are not checked here,
    /// see [`PosetMatrix::is_partial_order`].
    pub fn from_rel(k: usize, rel: Vec<bool>) -> Self {
        assert_eq!(rel.len(), k * k, "relation matrix must be k×k");
        PosetMatrix { k, rel }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Argument("poset matrix must be square".into()));
        }
        let p = PosetMatrix::from_rel(k, rows.concat());
        if !p.is_partial_order() {
            return Err(Error::Argument("relation is not a partial order".into()));
        }
        Ok(p)
    }

    pub fn antichain(k: usize) -> Self {
        PosetMatrix::from_rel(k, (0..k * k).map(|x| x / k == x % k).collect())
    }

    /// `0 > 1 > … > k-1`.
    pub fn chain(k: usize) -> Self {
        PosetMatrix::from_rel(k, (0..k * k).map(|x| x / k >= x % k).collect())
    }

    /// Middle elements `0..k-1` pairwise incomparable, `k-1` below all.
    pub fn diamond(k: usize) -> Self {
        PosetMatrix::from_rel(k, (0..k * k).map(|x| x / k == x % k || x / k == k - 1).collect())
    }

    pub fn size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.k + j]
    }

    pub fn rel(&self) -> &[bool] {
        &self.rel
    }

    pub fn rel_rows(&self) -> Vec<Vec<bool>> {
        self.rel.chunks(self.k).map(|c| c.to_vec()).collect()
    }

    pub fn is_partial_order(&self) -> bool {
        let k = self.k;
        (0..k).all(|i| self.leq(i, i))
            && (0..k).all(|i| (0..k).all(|j| i == j || !(self.leq(i, j) && self.leq(j, i))))
            && (0..k).all(|i| (0..k).all(|j| !self.leq(i, j) || (0..k).all(|l| !self.leq(j, l) || self.leq(i, l))))
    }

    pub fn is_antichain(&self) -> bool {
        *self == PosetMatrix::antichain(self.k)
    }

    pub fn is_chain(&self) -> bool {
        let k = self.k;
        (0..k).all(|i| (0..k).all(|j| self.leq(i, j) || self.leq(j, i)))
    }

    /// Isomorphic to the diamond order: one bottom element below an antichain
    /// of at least two elements.
    pub fn is_diamond(&self) -> bool {
        let k = self.k;
        if k < 3 {
            return false;
        }
        let bottoms: Vec<usize> = (0..k).filter(|&b| (0..k).all(|x| self.leq(b, x))).collect();
        let [b] = bottoms[..] else {
            return false;
        };
        (0..k).all(|x| (0..k).all(|y| x == y || x == b || y == b || !self.leq(x, y)))
    }

    /// All order automorphisms in lexicographic order.
    pub fn automorphisms(&self) -> Vec<Perm> {
        let k = self.k;
        let mut out = Vec::new();
        let mut img = vec![usize::MAX; k];
        let mut used = vec![false; k];
        self.auto_step(0, &mut img, &mut used, &mut out);
        out
    }

    fn auto_step(&self, t: usize, img: &mut [usize], used: &mut [bool], out: &mut Vec<Perm>) {
        let k = self.k;
        if t == k {
            out.push(Perm::from_images(img.iter().map(|&x| x as u8).collect()).unwrap());
            return;
        }
        for c in 0..k {
            if used[c] {
                continue;
            }
            img[t] = c;
            let ok = (0..=t).all(|s| self.leq(s, t) == self.leq(img[s], c) && self.leq(t, s) == self.leq(c, img[s]));
            if ok {
                used[c] = true;
                self.auto_step(t + 1, img, used, out);
                used[c] = false;
            }
        }
        img[t] = usize::MAX;
    }

    /// Bitmask of elements `≥ i`.
    fn up_mask(&self, i: usize) -> u32 {
        (0..self.k).filter(|&j| self.leq(i, j)).fold(0, |m, j| m | 1 << j)
    }

    /// Upward-closed subsets, as bitmasks in increasing numeric order.
    pub fn up_sets(&self) -> Vec<u32> {
        let ups: Vec<u32> = (0..self.k).map(|i| self.up_mask(i)).collect();
        (0..1u32 << self.k)
            .filter(|&u| (0..self.k).all(|i| u & (1 << i) == 0 || ups[i] & !u == 0))
            .collect()
    }

    /// Adds a new element `k`, minimal, lying below exactly `upset`.
    pub fn add_minimal(&self, upset: u32) -> PosetMatrix {
        let k = self.k + 1;
        let mut rel = vec![false; k * k];
        for i in 0..self.k {
            for j in 0..self.k {
                rel[i * k + j] = self.leq(i, j);
            }
        }
        rel[(k - 1) * k + (k - 1)] = true;
        for j in 0..self.k {
            rel[(k - 1) * k + j] = upset & (1 << j) != 0;
        }
        PosetMatrix { k, rel }
    }

    /// Relabels so that new label `a` is old element `labels[a]`.
    pub fn relabel(&self, labels: &[usize]) -> PosetMatrix {
        let k = self.k;
        let rel = (0..k * k).map(|x| self.leq(labels[x / k], labels[x % k])).collect();
        PosetMatrix { k, rel }
    }

    /// The lexicographically least relabeling, comparing entries in the
    /// growing-box order `(0,0), (0,1), (1,1), (1,0), (0,2), (1,2), (2,2),
    /// (2,1), (2,0), …`.
    pub fn canonical(&self) -> PosetMatrix {
        let labels = box_canonical_labels(self.k, |i, j| self.leq(i, j));
        self.relabel(&labels)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }
}

impl fmt::Debug for PosetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PosetMatrix({})",
            self.rel.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>()
        )
    }
}

/// Cells of the growing-box order for `k` labels.
pub(crate) fn box_order(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(k * k);
    for t in 0..k {
        out.extend((0..=t).map(|i| (i, t)));
        out.extend((0..t).rev().map(|j| (t, j)));
    }
    out
}

/// Labeling that minimises the boolean matrix `rel` in growing-box order.
///
/// Branch and bound over the label assignment: once labels `0..=t` are
/// placed, shell `t` of the relabeled matrix is fixed and can be compared
/// against the best labeling found so far.
pub(crate) fn box_canonical_labels(k: usize, rel: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    struct Search<'a> {
        k: usize,
        rel: &'a dyn Fn(usize, usize) -> bool,
        best: Option<(Vec<Vec<bool>>, Vec<usize>)>,
        version: u64,
    }

    impl Search<'_> {
        fn shell(&self, labels: &[usize], t: usize) -> Vec<bool> {
            let mut s = Vec::with_capacity(2 * t + 1);
            s.extend((0..=t).map(|i| (self.rel)(labels[i], labels[t])));
            s.extend((0..t).rev().map(|j| (self.rel)(labels[t], labels[j])));
            s
        }

        fn step(&mut self, labels: &mut Vec<usize>, used: &mut [bool], shells: &mut Vec<Vec<bool>>, mut equal: bool) {
            let t = labels.len();
            if t == self.k {
                if !equal || self.best.is_none() {
                    self.best = Some((shells.clone(), labels.clone()));
                    self.version += 1;
                }
                return;
            }
            for c in 0..self.k {
                if used[c] {
                    continue;
                }
                labels.push(c);
                let s = self.shell(labels, t);
                let ord = match (&self.best, equal) {
                    (Some((best, _)), true) => s.cmp(&best[t]),
                    _ => std::cmp::Ordering::Less,
                };
                if ord != std::cmp::Ordering::Greater {
                    used[c] = true;
                    shells.push(s);
                    let before = self.version;
                    self.step(labels, used, shells, ord == std::cmp::Ordering::Equal && self.best.is_some());
                    shells.pop();
                    used[c] = false;
                    if self.version != before {
                        // the best labeling now extends the current prefix
                        equal = true;
                    }
                }
                labels.pop();
            }
        }
    }

    let mut search = Search {
        k,
        rel: &rel,
        best: None,
        version: 0,
    };
    search.step(&mut Vec::with_capacity(k), &mut vec![false; k], &mut Vec::with_capacity(k), false);
    search.best.map(|(_, l)| l).unwrap_or_default()
}

/// One canonical representative per isomorphism class of posets on `k`
/// elements, sorted by their row-major relation matrix.
pub fn enumerate_posets(k: usize) -> Result<Vec<PosetMatrix>> {
    if k == 0 {
        return Err(Error::Argument("poset size must be at least 1".into()));
    }
    let mut level = vec![PosetMatrix::antichain(1)];
    for _ in 1..k {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for p in &level {
            for u in p.up_sets() {
                let c = p.add_minimal(u).canonical();
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        next.sort();
        level = next;
    }
    Ok(level)
}

/// Writes posets as blocks: `k`, then `k` rows of space-separated 0/1.
pub fn format_posets(posets: &[PosetMatrix]) -> String {
    let mut out = String::new();
    for p in posets {
        out.push_str(&format!("{}\n", p.k));
        for row in p.rel.chunks(p.k) {
            let r: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            out.push_str(&r.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parses one or more poset blocks.
pub fn parse_posets(text: &str) -> Result<Vec<PosetMatrix>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut out = Vec::new();
    while let Some((ln, header)) = lines.next() {
        let k: usize = header.trim().parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: format!("expected poset size, got {header:?}"),
        })?;
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, row) = lines.next().ok_or(Error::Parse {
                line: ln + 1,
                msg: "truncated poset block".into(),
            })?;
            let row: Vec<bool> = row
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    _ => Err(Error::Parse {
                        line: ln + 1,
                        msg: format!("expected 0 or 1, got {t:?}"),
                    }),
                })
                .collect::<Result<_>>()?;
            if row.len() != k {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("expected {k} entries"),
                });
            }
            rows.push(row);
        }
        out.push(PosetMatrix::from_rows(&rows).map_err(|e| Error::Parse {
            line: ln + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}
