//! Regular L-algebras as Young diagrams.
//!
//! A finite, non-empty, upward-closed set of vectors in the negative cone
//! of `ℤ^m` is an L-algebra under `x·y = min(x, y) − x` (coordinatewise),
//! and every finite regular L-algebra arises this way, uniquely up to
//! permuting coordinates.
//!
//! ```
//! use lalgebra::young::{young_to_lalgebra, YoungDiagram};
//! let d = YoungDiagram::new(2, vec![vec![0, 0], vec![-1, 0], vec![0, -1]]).unwrap();
//! let m = young_to_lalgebra(&d);
//! assert!(m.is_regular());
//! ```

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::algebra::MulTable;
use crate::error::{Error, Result};
use crate::perm::all_perms;

/// Points are kept sorted, so the zero vector comes last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    dim: usize,
    points: Vec<Vec<i32>>,
}

impl YoungDiagram {
    pub fn new(dim: usize, points: Vec<Vec<i32>>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::Argument(format!("invalid diagram: {msg}")));
        if points.iter().any(|v| v.len() != dim) {
            return bad("point of the wrong dimension");
        }
        if points.iter().flatten().any(|&c| c > 0) {
            return bad("positive coordinate");
        }
        let set: BTreeSet<Vec<i32>> = points.into_iter().collect();
        if !set.contains(&vec![0; dim]) {
            return bad("missing the zero vector");
        }
        for v in &set {
            for i in (0..dim).filter(|&i| v[i] < 0) {
                let mut w = v.clone();
                w[i] += 1;
                if !set.contains(&w) {
                    return bad("not upward closed");
                }
            }
        }
        if (0..dim).any(|i| set.iter().all(|v| v[i] == 0)) {
            return bad("unused coordinate");
        }
        Ok(YoungDiagram {
            dim,
            points: set.into_iter().collect(),
        })
    }

    /// `{0}`.
    pub fn point() -> Self {
        YoungDiagram {
            dim: 0,
            points: vec![Vec::new()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i32>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn permuted(&self, images: &[u8]) -> YoungDiagram {
        let mut points: Vec<Vec<i32>> = self
            .points
            .iter()
            .map(|v| {
                let mut w = vec![0; self.dim];
                for (i, &c) in v.iter().enumerate() {
                    w[images[i] as usize] = c;
                }
                w
            })
            .collect();
        points.sort();
        YoungDiagram { dim: self.dim, points }
    }

    /// Points `v ∉ D` that can be added while staying upward closed,
    /// possibly in one new coordinate.
    fn addable(&self) -> Vec<Vec<i32>> {
        let m = self.dim + 1;
        let lifted: HashSet<Vec<i32>> = self.points.iter().map(|v| lift(v, m)).collect();
        let mut out = BTreeSet::new();
        for w in &lifted {
            for i in 0..m {
                let mut v = w.clone();
                v[i] -= 1;
                if lifted.contains(&v) {
                    continue;
                }
                let ok = (0..m).filter(|&j| v[j] < 0).all(|j| {
                    let mut u = v.clone();
                    u[j] += 1;
                    lifted.contains(&u)
                });
                if ok {
                    out.insert(v);
                }
            }
        }
        out.into_iter().collect()
    }

    fn with_point(&self, v: Vec<i32>) -> YoungDiagram {
        let m = self.dim + 1;
        let mut points: Vec<Vec<i32>> = self.points.iter().map(|w| lift(w, m)).collect();
        points.push(v);
        let used = (0..m).filter(|&i| points.iter().any(|p| p[i] != 0)).count();
        for p in &mut points {
            p.truncate(used);
        }
        points.sort();
        YoungDiagram { dim: used, points }
    }

    /// `p`, then one line of `m` integers per point.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.len());
        for v in &self.points {
            let cs: Vec<String> = v.iter().map(i32::to_string).collect();
            out.push_str(&cs.join(" "));
            out.push('\n');
        }
        out
    }
}

fn lift(v: &[i32], m: usize) -> Vec<i32> {
    let mut w = v.to_vec();
    w.resize(m, 0);
    w
}

/// Parses consecutive diagram blocks. Each header `p` is followed by
/// exactly `p` point lines, which are empty for the one-point diagram.
pub fn parse_diagrams(text: &str) -> Result<Vec<YoungDiagram>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut at = 0;
    while at < lines.len() {
        if lines[at].trim().is_empty() {
            at += 1;
            continue;
        }
        let perr = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
        let p: usize = lines[at]
            .trim()
            .parse()
            .map_err(|_| perr(at, format!("expected a point count, got {:?}", lines[at])))?;
        if at + p >= lines.len() + usize::from(p == 0) {
            return Err(perr(at, "truncated diagram".into()));
        }
        let mut points = Vec::with_capacity(p);
        for t in 1..=p {
            let v: Vec<i32> = lines[at + t]
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| perr(at + t, format!("bad coordinate {s:?}"))))
                .collect::<Result<_>>()?;
            points.push(v);
        }
        let dim = points.first().map_or(0, Vec::len);
        out.push(YoungDiagram::new(dim, points).map_err(|e| perr(at, e.to_string()))?);
        at += p + 1;
    }
    Ok(out)
}

pub fn format_diagrams(ds: &[YoungDiagram]) -> String {
    ds.iter().map(YoungDiagram::to_text).collect()
}

/// The cone algebra on the points of `d`, labeled in sorted order so the
/// zero vector is the unit.
pub fn young_to_lalgebra(d: &YoungDiagram) -> MulTable {
    let index: HashMap<&Vec<i32>, usize> = d.points.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let table = MulTable::from_fn(d.len(), |a, b| {
        let (x, y) = (&d.points[a], &d.points[b]);
        let z: Vec<i32> = x.iter().zip(y).map(|(&p, &q)| p.min(q) - p).collect();
        *index.get(&z).expect("upward closed sets are closed under the operation")
    })
    .expect("labels are in range");
    debug_assert!(table.is_l_algebra());
    table
}

/// The coordinates of each element: coatoms become `−e_x`, and
/// `vec(y) = vec(x·y) + vec(x)` for a coatom `x ≥ y`. Every admissible
/// choice of `x` is checked to give the same vector.
pub fn young_coordinates(m: &MulTable) -> Result<Vec<Vec<i32>>> {
    if !m.is_l_algebra() || !m.is_regular() {
        return Err(Error::Precondition("not a regular L-algebra".into()));
    }
    let e = m.unit();
    if m.dense_elements() != [e] {
        return Err(Error::Precondition("the algebra has dense elements other than the unit".into()));
    }
    let n = m.size();
    let below_e: Vec<usize> = (0..e).collect();
    let coatoms: Vec<usize> = below_e
        .iter()
        .copied()
        .filter(|&x| !below_e.iter().any(|&z| z != x && m.leq(x, z)))
        .collect();
    let dim = coatoms.len();
    let mut memo: Vec<Option<Vec<i32>>> = vec![None; n];
    memo[e] = Some(vec![0; dim]);
    fn vec_of(m: &MulTable, coatoms: &[usize], memo: &mut Vec<Option<Vec<i32>>>, y: usize) -> Result<Vec<i32>> {
        if let Some(v) = &memo[y] {
            return Ok(v.clone());
        }
        let mut result: Option<Vec<i32>> = None;
        for (c, &x) in coatoms.iter().enumerate().filter(|&(_, &x)| m.leq(y, x)) {
            let xy = m.get(x, y);
            if xy == y {
                return Err(Error::Precondition("dense element encountered".into()));
            }
            let mut v = vec_of(m, coatoms, memo, xy)?;
            v[c] -= 1;
            match &result {
                None => result = Some(v),
                Some(r) if *r == v => {}
                Some(_) => return Err(Error::Precondition("coordinates depend on the chosen coatom".into())),
            }
        }
        let v = result.expect("every element below the unit lies under a coatom");
        memo[y] = Some(v.clone());
        Ok(v)
    }
    (0..n).map(|y| vec_of(m, &coatoms, &mut memo, y)).collect()
}

/// The Young diagram of a finite regular L-algebra without dense
/// elements besides the unit.
pub fn lalgebra_to_young(m: &MulTable) -> Result<YoungDiagram> {
    let coords = young_coordinates(m)?;
    let dim = coords[0].len();
    let d = YoungDiagram::new(dim, coords).map_err(|e| Error::Precondition(format!("image is not a diagram: {e}")))?;
    if d.len() != m.size() {
        return Err(Error::Precondition("coordinates are not injective".into()));
    }
    Ok(d)
}

/// The lexicographically least sorted point list over all coordinate
/// permutations.
pub fn young_canonical(d: &YoungDiagram) -> YoungDiagram {
    all_perms(d.dim)
        .map(|g| d.permuted(g.images()))
        .min()
        .expect("at least the identity")
}

/// One canonical diagram per conjugacy class with `p` points, sorted.
pub fn enumerate_young(p: usize) -> Result<Vec<YoungDiagram>> {
    if p == 0 {
        return Err(Error::Argument("a diagram has at least one point".into()));
    }
    let mut level = vec![YoungDiagram::point()];
    for _ in 1..p {
        let mut next = BTreeSet::new();
        for d in &level {
            for v in d.addable() {
                next.insert(young_canonical(&d.with_point(v)));
            }
        }
        level = next.into_iter().collect();
    }
    Ok(level)
}
