//! Permutations of the non-unit elements `0..m`.
//!
//! A table of size `n` is acted on by permutations of `0..n-1`; the unit
//! `n-1` is always fixed, so a [`Perm`] of degree `m = n-1` is extended by
//! `g(m) = m` wherever it is applied to table entries.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm {
            images: (0..m as u8).collect(),
        }
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            let x = x as usize;
            if x >= m || seen[x] {
                return Err(Error::Argument(format!("{images:?} is not a permutation of 0..{m}")));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Number of moved-or-fixed points, i.e. `n-1` for tables of size `n`.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// Image of `x`; points outside `0..degree` (the unit) are fixed.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        match self.images.get(x) {
            Some(&y) => y as usize,
            None => x,
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

/// All permutations of `0..m` in lexicographic order of their image vectors.
pub fn all_perms(m: usize) -> AllPerms {
    AllPerms {
        next: Some((0..m as u8).collect()),
    }
}

pub struct AllPerms {
    next: Option<Vec<u8>>,
}

impl Iterator for AllPerms {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Perm { images: cur })
    }
}

/// Advances `v` to its lexicographic successor; false when `v` was last.
pub(crate) fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Checks that `perms` contains the identity and is closed under
/// composition and inversion.
pub fn is_group(perms: &[Perm]) -> bool {
    let Some(first) = perms.first() else {
        return false;
    };
    let set: std::collections::HashSet<&Perm> = perms.iter().collect();
    if !set.contains(&Perm::identity(first.degree())) {
        return false;
    }
    perms
        .iter()
        .all(|g| set.contains(&g.inverse()) && perms.iter().all(|h| set.contains(&g.compose(h))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_permutations_in_order() {
        let perms: Vec<_> = all_perms(4).collect();
        assert_eq!(perms.len(), 24);
        assert!(perms.windows(2).all(|w| w[0] < w[1]));
        assert!(perms[0].is_identity());
        assert_eq!(all_perms(0).count(), 1);
    }

    #[test]
    fn compose_applies_right_operand_first() {
        let g = Perm::from_images(vec![1, 2, 0]).unwrap();
        let h = Perm::from_images(vec![0, 2, 1]).unwrap();
        let gh = g.compose(&h);
        for x in 0..3 {
            assert_eq!(gh.apply(x), g.apply(h.apply(x)));
        }
        assert!(g.compose(&g.inverse()).is_identity());
        assert_eq!(g.apply(3), 3);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0]).is_err());
        assert!(Perm::from_images(vec![0, 2]).is_err());
    }

    #[test]
    fn symmetric_group_is_a_group() {
        let perms: Vec<_> = all_perms(3).collect();
        assert!(is_group(&perms));
        assert!(!is_group(&perms[1..]));
    }
}
