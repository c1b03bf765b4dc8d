//! Linear L-algebras: totally ordered under the natural order.
//!
//! A linear algebra of size `n` lives on `x₀ > x₁ > … > x_{n-1}` with
//! `x₀ = e`. In table labels `xᵢ` is element `n-1-i`, so labels increase
//! with the order and the bottom is `0`. Total orders are rigid, so
//! distinct tables in this labeling are pairwise non-isomorphic.
//!
//! Every linear algebra arises from the one-element algebra by repeatedly
//! adding a new bottom `x_n` and choosing `p·x_n`, where `p` is the smallest
//! invariant element; see [`extend_linear`].
//!
//! ```
//! use lalgebra::linear::{bell, enumerate_linear};
//! assert_eq!(enumerate_linear(6).unwrap().len(), 52);
//! assert_eq!(bell(5).to_string(), "52");
//! ```

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::MulTable;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearAlgebra {
    table: MulTable,
}

impl LinearAlgebra {
    /// Accepts a table whose natural order is `0 < 1 < … < n-1`.
    pub fn new(table: MulTable) -> Result<Self> {
        if !table.is_l_algebra() {
            return Err(Error::Argument("not an L-algebra".into()));
        }
        let n = table.size();
        if !(0..n).all(|a| (0..n).all(|b| table.leq(a, b) == (a <= b))) {
            return Err(Error::Argument("natural order is not 0 < 1 < … < n-1".into()));
        }
        Ok(LinearAlgebra { table })
    }

    /// The one-element algebra.
    pub fn trivial() -> Self {
        LinearAlgebra {
            table: MulTable::trivial(),
        }
    }

    pub fn table(&self) -> &MulTable {
        &self.table
    }

    pub fn into_table(self) -> MulTable {
        self.table
    }

    pub fn size(&self) -> usize {
        self.table.size()
    }

    /// Table label of `xᵢ`.
    pub fn label(&self, i: usize) -> usize {
        self.size() - 1 - i
    }

    /// Index `j` with `xᵢ·xⱼ = x_result`.
    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.label(self.table.get(self.label(i), self.label(j)))
    }

    /// Index of the smallest invariant element (`0` only for size 1).
    pub fn smallest_invariant_index(&self) -> usize {
        self.label(self.table.smallest_invariant().expect("linear by construction"))
    }

    /// The order facts every linear algebra satisfies: strict monotonicity
    /// of left multiplication below the multiplier, `x·y ≥ y`, antitonicity
    /// in the left argument, and `p·x > x` below the smallest invariant
    /// `p ≠ e`.
    pub fn order_laws_hold(&self) -> bool {
        let t = &self.table;
        let n = self.size();
        let strict = (0..n).all(|x| (0..=x).all(|y| (0..y).all(|z| t.get(x, y) > t.get(x, z))));
        let above = (0..n).all(|x| (0..n).all(|y| t.get(x, y) >= y));
        let anti = (0..n).all(|x| (x..n).all(|y| (0..n).all(|z| t.get(x, z) >= t.get(y, z))));
        let p = self.label(self.smallest_invariant_index());
        let lifts = p == t.unit() || (0..=p).all(|x| t.get(p, x) > x);
        strict && above && anti && lifts
    }
}

/// The unique extension of `x` by a new bottom `x_n` with `p·x_n = x_c`,
/// `p` the smallest invariant element. Admissible `c` are `n` itself and
/// the indices with `x_c < p·x_{n-1}`.
pub fn extend_linear(x: &LinearAlgebra, c: usize) -> Result<LinearAlgebra> {
    let n = x.size();
    let p = x.smallest_invariant_index();
    let bound = x.mul_index(p, n - 1);
    if c > n || c <= bound {
        return Err(Error::Precondition(format!(
            "x_{c} is not admissible: p·x_{} = x_{bound} must lie strictly above it (p = x_{p})",
            n - 1
        )));
    }
    // products by index in the extended algebra, x_n the new bottom
    let dot = |a: usize| -> usize {
        if c == n || a < p {
            n
        } else {
            x.mul_index(x.mul_index(p, a), c)
        }
    };
    let m = n + 1;
    let table = MulTable::from_fn(m, |u, v| {
        // labels in the new table; index i has label m-1-i
        let (a, b) = (m - 1 - u, m - 1 - v);
        let r = if a == n {
            0
        } else if b == n {
            dot(a)
        } else {
            x.mul_index(a, b)
        };
        m - 1 - r
    })?;
    debug_assert!(table.is_l_algebra());
    Ok(LinearAlgebra { table })
}

/// The indices `c` accepted by [`extend_linear`], ascending.
pub fn admissible_values(x: &LinearAlgebra) -> Vec<usize> {
    let n = x.size();
    let bound = x.mul_index(x.smallest_invariant_index(), n - 1);
    (bound + 1..=n).collect()
}

/// All linear L-algebras of size `n`, in depth-first order of the choices
/// of `c`.
pub fn enumerate_linear(n: usize) -> Result<Vec<LinearAlgebra>> {
    if n == 0 {
        return Err(Error::Argument("size must be at least 1".into()));
    }
    let mut level = vec![LinearAlgebra::trivial()];
    for _ in 1..n {
        let mut next = Vec::new();
        for x in &level {
            for c in admissible_values(x) {
                next.push(extend_linear(x, c)?);
            }
        }
        level = next;
    }
    Ok(level)
}

/// Bell number `B(m)` from the Bell triangle.
pub fn bell(m: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("non-empty row").clone());
        for v in &row {
            let s = next.last().expect("non-empty row") + v;
            next.push(s);
        }
        row = next;
    }
    row.swap_remove(0)
}

/// Splits `x` with smallest invariant `x_m` into the restriction to
/// `x₀, …, x_{m-1}` and the indices of `{x_m·x_j : j > m}`, ascending.
pub fn decompose_linear(x: &LinearAlgebra) -> Result<(LinearAlgebra, Vec<usize>)> {
    let n = x.size();
    if n < 2 {
        return Err(Error::Argument("decomposition needs at least two elements".into()));
    }
    let m = x.smallest_invariant_index();
    let head = MulTable::from_fn(m, |u, v| {
        let (a, b) = (m - 1 - u, m - 1 - v);
        m - 1 - x.mul_index(a, b)
    })?;
    let mut tail: Vec<usize> = (m + 1..n).map(|j| x.mul_index(m, j)).collect();
    tail.sort_unstable();
    Ok((LinearAlgebra::new(head)?, tail))
}

/// Inverse of [`decompose_linear`].
pub fn reconstruct_linear(head: &LinearAlgebra, tail: &[usize]) -> Result<LinearAlgebra> {
    let mut x = extend_linear(head, head.size())?;
    for &c in tail {
        x = extend_linear(&x, c)?;
    }
    Ok(x)
}
