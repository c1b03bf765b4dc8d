//! Translation of search cases into constraint models.

use super::solver::{Constraint, Model, TermId};
use super::{Mode, SearchCase};
use crate::closure::ClosureMap;
use crate::poset::PosetMatrix;
use crate::rmatrix::RMatrix;

pub(crate) fn build(case: &SearchCase) -> Model {
    let n = case.n;
    let mut m = Model::new(n);
    let k = n - 1;
    m.order = case.cell_order.cells().iter().map(|&(i, j)| (i * n + j) as u16).collect();
    m.symmetries = case.symmetry_group.clone();
    cycloid(&mut m);
    if case.hilbert {
        hilbert(&mut m);
    }
    match &case.mode {
        Mode::General => {
            for i in 0..k {
                for j in i + 1..k {
                    let (a, b) = (m.cell(i, j), m.cell(j, i));
                    m.add(Constraint::AnyNotUnit(vec![a, b]));
                }
            }
        }
        Mode::Poset(p) => poset(&mut m, p),
        Mode::Discrete(s) => discrete(&mut m, s),
        Mode::Diamond(r) => {
            poset(&mut m, &PosetMatrix::diamond(k));
            diamond(&mut m, r);
        }
    }
    m
}

/// `(i·j)·(i·k) = (j·i)·(j·k)` for distinct non-unit `i < j` and `k`.
fn cycloid(m: &mut Model) {
    let k = m.unit();
    for i in 0..k {
        for j in i + 1..k {
            for l in (0..k).filter(|&l| l != i && l != j) {
                let (ij, il, ji, jl) = (m.cell(i, j), m.cell(i, l), m.cell(j, i), m.cell(j, l));
                let lhs = m.mul(ij, il);
                let rhs = m.mul(ji, jl);
                m.add(Constraint::Eq(lhs, rhs));
            }
        }
    }
}

/// `x·(y·z) = (x·y)·(x·z)` for non-unit `x`, `y ≠ z`.
fn hilbert(m: &mut Model) {
    let k = m.unit();
    for x in 0..k {
        for y in 0..k {
            for z in (0..k).filter(|&z| z != y) {
                let xt = m.elem(x);
                let yz = m.cell(y, z);
                let lhs = m.mul(xt, yz);
                let (xy, xz) = (m.cell(x, y), m.cell(x, z));
                let rhs = m.mul(xy, xz);
                m.add(Constraint::Eq(lhs, rhs));
            }
        }
    }
}

fn poset(m: &mut Model, p: &PosetMatrix) {
    let k = m.unit();
    let unit_bit = 1u16 << k;
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            if p.leq(i, j) {
                m.restrict(i, j, unit_bit);
            } else {
                m.restrict(i, j, !unit_bit);
            }
        }
    }
    // y ≤ z forces x·y ≤ x·z
    for j in 0..k {
        for l in (0..k).filter(|&l| l != j && p.leq(j, l)) {
            for i in 0..k {
                let (ij, il) = (m.cell(i, j), m.cell(i, l));
                let t = m.mul(ij, il);
                m.add(Constraint::IsUnit(t));
            }
        }
    }
    // x ≤ y gives x·z = (y·x)·(y·z)
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i && p.leq(i, j)) {
            for l in 0..k {
                let il = m.cell(i, l);
                let (ji, jl) = (m.cell(j, i), m.cell(j, l));
                let rhs = m.mul(ji, jl);
                m.add(Constraint::Eq(il, rhs));
            }
        }
    }
}

fn unit_iff(m: &mut Model, t: TermId, holds: bool) {
    m.add(if holds { Constraint::IsUnit(t) } else { Constraint::NotUnit(t) });
}

fn discrete(m: &mut Model, s: &ClosureMap) {
    let k = m.unit();
    let unit_bit = 1u16 << k;
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            m.restrict(i, j, !unit_bit);
        }
    }
    // (i∧j)·l = (i·j)·(i·l)
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            for l in 0..k {
                let (ij, il) = (m.cell(i, j), m.cell(i, l));
                let t = m.mul(ij, il);
                unit_iff(m, t, s.s(i, j, j, l));
            }
        }
    }
    // (i∧j∧h)·l = ((i·j)·(i·h))·((i·j)·(i·l))
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            for h in (0..k).filter(|&h| h != i && h != j) {
                for l in 0..k {
                    let (ij, ih, il) = (m.cell(i, j), m.cell(i, h), m.cell(i, l));
                    let a = m.mul(ij, ih);
                    let b = m.mul(ij, il);
                    let t = m.mul(a, b);
                    unit_iff(m, t, s.s(i, j, h, l));
                }
            }
        }
    }
}

/// `R[i][j] = 1` iff `(i·j)·(i·l) = e` for every middle element `l`.
fn diamond(m: &mut Model, r: &RMatrix) {
    let mid = r.size();
    for i in 0..mid {
        for j in (0..mid).filter(|&j| j != i) {
            let terms: Vec<TermId> = (0..mid)
                .map(|l| {
                    let (ij, il) = (m.cell(i, j), m.cell(i, l));
                    m.mul(ij, il)
                })
                .collect();
            if r.get(i, j) {
                for t in terms {
                    m.add(Constraint::IsUnit(t));
                }
            } else {
                m.add(Constraint::AnyNotUnit(terms));
            }
        }
    }
}
