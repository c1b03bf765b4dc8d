//! Enumeration of L-algebras up to isomorphism by constraint search.
//!
//! The search space is split into independent [`SearchCase`]s by an
//! isomorphism invariant of the natural order below the unit:
//!
//! * the antichain is split further by its separating 3-approximate
//!   semilattice ([`Mode::Discrete`]),
//! * the diamond by its [`RMatrix`] ([`Mode::Diamond`]),
//! * every other poset is a case of its own ([`Mode::Poset`]).
//!
//! Inside a case, tables are required to be lex-leaders under the symmetry
//! group of the splitting structure, so each isomorphism class appears
//! exactly once overall.
//!
//! ```
//! use lalgebra::search::enumerate_general;
//! assert_eq!(enumerate_general(4).count(), 44);
//! ```

mod model;
mod solver;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

pub use solver::Solutions;

use crate::algebra::MulTable;
use crate::class::AlgebraClass;
use crate::closure::{enumerate_3approx, ClosureMap};
use crate::error::{Error, Result};
use crate::perm::{all_perms, Perm};
use crate::poset::{box_order, enumerate_posets, format_posets, parse_posets, PosetMatrix};
use crate::rmatrix::{enumerate_rmatrices, RMatrix};

/// The sequence of free cells `(i, j)`, `i ≠ j`, both below the unit, in
/// which the solver branches and lex-leader constraints compare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellOrder {
    square: bool,
    cells: Vec<(usize, usize)>,
}

impl CellOrder {
    pub fn row_major(n: usize) -> Self {
        let k = n.saturating_sub(1);
        let cells = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        CellOrder { square: false, cells }
    }

    /// `(0,1), (1,0), (0,2), (1,2), (2,1), (2,0), …`: each new row and
    /// column is completed before the next element is touched.
    pub fn square(n: usize) -> Self {
        let cells = box_order(n.saturating_sub(1)).into_iter().filter(|(i, j)| i != j).collect();
        CellOrder { square: true, cells }
    }

    /// Row-major up to size 7, square from size 8 on.
    pub fn default_for(n: usize) -> Self {
        if n >= 8 {
            CellOrder::square(n)
        } else {
            CellOrder::row_major(n)
        }
    }

    pub fn is_square(&self) -> bool {
        self.square
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }
}

/// What is fixed about the natural order of the tables a case searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// No splitting; lex-least over the whole symmetric group.
    General,
    /// Natural order below the unit equals the poset.
    Poset(PosetMatrix),
    /// Discrete, with the given 3-approximate semilattice.
    Discrete(ClosureMap),
    /// Diamond order, with the given meet pattern of middle elements.
    Diamond(RMatrix),
}

impl Mode {
    pub fn tag(&self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Poset(_) => "poset",
            Mode::Discrete(_) => "discrete",
            Mode::Diamond(_) => "diamond",
        }
    }
}

/// One independent unit of search work.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchCase {
    pub n: usize,
    pub mode: Mode,
    pub hilbert: bool,
    pub symmetry_group: Vec<Perm>,
    pub cell_order: CellOrder,
}

impl SearchCase {
    pub fn general(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("table size must be at least 1".into()));
        }
        if n > 16 {
            return Err(Error::Argument("table size must be at most 16".into()));
        }
        Ok(SearchCase {
            n,
            mode: Mode::General,
            hilbert: false,
            symmetry_group: all_perms(n - 1).collect(),
            cell_order: CellOrder::default_for(n),
        })
    }

    /// Tables of size `k + 1` whose order below the unit is `p`.
    pub fn poset(p: PosetMatrix) -> Result<Self> {
        if !p.is_partial_order() {
            return Err(Error::Argument("not a partial order".into()));
        }
        let n = p.size() + 1;
        if n > 16 {
            return Err(Error::Argument("table size must be at most 16".into()));
        }
        Ok(SearchCase {
            n,
            hilbert: false,
            symmetry_group: p.automorphisms(),
            cell_order: CellOrder::default_for(n),
            mode: Mode::Poset(p),
        })
    }

    pub fn discrete(s: ClosureMap) -> Result<Self> {
        if !(s.verify() && s.is_discrete()) {
            return Err(Error::Argument("not a discrete separating closure map".into()));
        }
        let n = s.size() + 1;
        Ok(SearchCase {
            n,
            hilbert: false,
            symmetry_group: s.stabilizer(),
            cell_order: CellOrder::default_for(n),
            mode: Mode::Discrete(s),
        })
    }

    /// Tables of size `m + 2` on the diamond with `m` middle elements.
    pub fn diamond(r: RMatrix) -> Result<Self> {
        let m = r.size();
        if m < 2 {
            return Err(Error::Argument("diamond search needs at least two middle elements".into()));
        }
        let n = m + 2;
        let symmetry_group = r
            .stabilizer()
            .into_iter()
            .map(|g| {
                let mut images = g.images().to_vec();
                images.push(m as u8);
                Perm::from_images(images).expect("extension by a fixed point")
            })
            .collect();
        Ok(SearchCase {
            n,
            hilbert: false,
            symmetry_group,
            cell_order: CellOrder::default_for(n),
            mode: Mode::Diamond(r),
        })
    }

    pub fn with_hilbert(mut self, hilbert: bool) -> Self {
        self.hilbert = hilbert;
        self
    }

    pub fn with_order(mut self, order: CellOrder) -> Self {
        assert_eq!(
            order.cells.len(),
            (self.n - 1) * self.n.saturating_sub(2),
            "order does not fit the case"
        );
        self.cell_order = order;
        self
    }

    /// Lazily enumerates the case.
    pub fn solutions(&self) -> Solutions {
        Solutions::new(model::build(self))
    }

    /// Whether `m` satisfies the case's structural constraints: the right
    /// natural order, the splitting structure, and the Hilbert identity if
    /// requested. Symmetry breaking is not checked.
    pub fn admits(&self, m: &MulTable) -> bool {
        if m.size() != self.n || !m.is_l_algebra() || (self.hilbert && !m.is_hilbert()) {
            return false;
        }
        let k = self.n - 1;
        match &self.mode {
            Mode::General => true,
            Mode::Poset(p) => m.natural_order() == *p,
            Mode::Discrete(s) => {
                m.is_discrete()
                    && (0..k).all(|a| {
                        (0..k).all(|b| {
                            (0..k).all(|c| {
                                (0..k).all(|y| m.wedge_dot(&[a, b, c], y).unwrap() == k || !s.s(a, b, c, y))
                                    && (0..k).all(|y| m.wedge_dot(&[a, b, c], y).unwrap() != k || s.s(a, b, c, y))
                            })
                        })
                    })
            }
            Mode::Diamond(r) => {
                let mid = r.size();
                m.natural_order() == PosetMatrix::diamond(k)
                    && (0..mid).all(|i| {
                        (0..mid).filter(|&j| j != i).all(|j| {
                            let all = (0..mid).all(|l| m.get(m.get(i, j), m.get(i, l)) == k);
                            all == r.get(i, j)
                        })
                    })
            }
        }
    }

    /// True when `m ≤ m^g` in the case's cell order for every symmetry.
    pub fn is_lex_leader(&self, m: &MulTable) -> bool {
        self.symmetry_group.iter().all(|g| {
            let img = m.apply_perm(g);
            let key = |t: &MulTable| -> Vec<usize> { self.cell_order.cells.iter().map(|&(i, j)| t.get(i, j)).collect() };
            key(m) <= key(&img)
        })
    }

    /// The job-file block for this case.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "case {} {} {} {}\n",
            self.mode.tag(),
            self.n,
            if self.hilbert { "hilbert" } else { "all" },
            if self.cell_order.square { "square" } else { "rows" }
        );
        match &self.mode {
            Mode::General => {}
            Mode::Poset(p) => out.push_str(&format_posets(std::slice::from_ref(p))),
            Mode::Discrete(s) => out.push_str(&s.to_text()),
            Mode::Diamond(r) => {
                out.push_str(&r.to_line());
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for SearchCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses a job file of `case` blocks, as written by [`format_cases`].
pub fn parse_cases(text: &str) -> Result<Vec<SearchCase>> {
    let mut blocks: Vec<(usize, &str, Vec<&str>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with("case ") {
            blocks.push((ln + 1, line, Vec::new()));
        } else if let Some(b) = blocks.last_mut() {
            b.2.push(line);
        } else {
            return Err(Error::Parse {
                line: ln + 1,
                msg: "expected a case header".into(),
            });
        }
    }
    blocks
        .into_iter()
        .map(|(ln, header, body)| {
            let bad = |msg: String| Error::Parse { line: ln, msg };
            let f: Vec<&str> = header.split_whitespace().collect();
            let [_, tag, n, class, order] = f[..] else {
                return Err(bad(format!("malformed case header {header:?}")));
            };
            let n: usize = n.parse().map_err(|_| bad(format!("bad size {n:?}")))?;
            let hilbert = match class {
                "hilbert" => true,
                "all" => false,
                _ => return Err(bad(format!("unknown class {class:?}"))),
            };
            let payload = body.join("\n");
            let wrap = |e: Error| bad(e.to_string());
            let case = match tag {
                "general" => SearchCase::general(n).map_err(wrap)?,
                "poset" => {
                    let ps = parse_posets(&payload).map_err(wrap)?;
                    let [p] = <[PosetMatrix; 1]>::try_from(ps).map_err(|_| bad("expected one poset".into()))?;
                    SearchCase::poset(p).map_err(wrap)?
                }
                "discrete" => SearchCase::discrete(ClosureMap::from_text(&payload).map_err(wrap)?).map_err(wrap)?,
                "diamond" => SearchCase::diamond(RMatrix::from_line(payload.trim()).map_err(wrap)?).map_err(wrap)?,
                _ => return Err(bad(format!("unknown mode {tag:?}"))),
            };
            if case.n != n {
                return Err(bad(format!("payload has size {} but header says {n}", case.n)));
            }
            let order = match order {
                "square" => CellOrder::square(n),
                "rows" => CellOrder::row_major(n),
                _ => return Err(bad(format!("unknown cell order {order:?}"))),
            };
            Ok(case.with_hilbert(hilbert).with_order(order))
        })
        .collect()
}

pub fn format_cases(cases: &[SearchCase]) -> String {
    cases.iter().map(SearchCase::to_text).collect()
}

/// How the search space is covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// One case over the whole symmetric group.
    General,
    /// Split by natural order and splitting structures.
    Split,
}

/// The split of size-`n` tables into discrete cases, diamond cases and
/// the remaining posets, in that order.
pub fn split_cases(n: usize, hilbert: bool) -> Result<Vec<SearchCase>> {
    if n <= 1 {
        return Ok(vec![SearchCase::general(n)?.with_hilbert(hilbert)]);
    }
    let mut cases = discrete_cases(n)?;
    cases.extend(diamond_cases(n)?);
    let k = n - 1;
    for p in enumerate_posets(k)? {
        if p.is_antichain() || (k >= 3 && p.is_diamond()) {
            continue;
        }
        cases.push(SearchCase::poset(p)?);
    }
    Ok(cases.into_iter().map(|c| c.with_hilbert(hilbert)).collect())
}

fn discrete_cases(n: usize) -> Result<Vec<SearchCase>> {
    if n <= 1 {
        return Ok(vec![SearchCase::general(n)?]);
    }
    enumerate_3approx(n - 1)?.into_iter().map(SearchCase::discrete).collect()
}

fn diamond_cases(n: usize) -> Result<Vec<SearchCase>> {
    if n < 4 {
        return Ok(Vec::new());
    }
    enumerate_rmatrices(n - 2)?.into_iter().map(SearchCase::diamond).collect()
}

/// The cases whose union is the class, and the filter still to apply to
/// their output.
pub fn class_cases(n: usize, class: AlgebraClass, strategy: Strategy) -> Result<(Vec<SearchCase>, Option<AlgebraClass>)> {
    let hilbert = class == AlgebraClass::Hilbert;
    if strategy == Strategy::General {
        let filter = match class {
            AlgebraClass::All | AlgebraClass::Hilbert => None,
            c => Some(c),
        };
        return Ok((vec![SearchCase::general(n)?.with_hilbert(hilbert)], filter));
    }
    Ok(match class {
        AlgebraClass::All | AlgebraClass::Hilbert => (split_cases(n, hilbert)?, None),
        AlgebraClass::Discrete => (discrete_cases(n)?, None),
        AlgebraClass::Linear if n >= 2 => (vec![SearchCase::poset(PosetMatrix::chain(n - 1))?], None),
        AlgebraClass::Linear => (vec![SearchCase::general(n)?], None),
        c @ (AlgebraClass::Semiregular | AlgebraClass::Regular) => (split_cases(n, false)?, Some(c)),
    })
}

/// All size-`n` L-algebras up to isomorphism, each the row-major lex-least
/// member of its class, in increasing order.
pub fn enumerate_general(n: usize) -> Solutions {
    SearchCase::general(n)
        .expect("size must be in 1..=16")
        .with_order(CellOrder::row_major(n))
        .solutions()
}

/// L-algebras of size `n` whose natural order below the unit is `p`.
pub fn enumerate_on_poset(p: &PosetMatrix, n: usize) -> Result<Solutions> {
    if p.size() + 1 != n {
        return Err(Error::Argument(format!(
            "poset of size {} does not fit tables of size {n}",
            p.size()
        )));
    }
    Ok(SearchCase::poset(p.clone())?.solutions())
}

/// Discrete L-algebras of size `n`, case by case.
pub fn enumerate_discrete(n: usize) -> Result<impl Iterator<Item = MulTable>> {
    Ok(discrete_cases(n)?.into_iter().flat_map(|c| c.solutions()))
}

/// L-algebras of size `n` on the diamond, case by case.
pub fn enumerate_diamond(n: usize) -> Result<impl Iterator<Item = MulTable>> {
    if n < 4 {
        return Err(Error::Argument("the diamond needs at least two middle elements (n ≥ 4)".into()));
    }
    Ok(diamond_cases(n)?.into_iter().flat_map(|c| c.solutions()))
}

/// All classes in `class` of size `n`, single-threaded.
pub fn enumerate_class(n: usize, class: AlgebraClass) -> Result<impl Iterator<Item = MulTable>> {
    let (cases, filter) = class_cases(n, class, Strategy::Split)?;
    Ok(cases
        .into_iter()
        .flat_map(|c| c.solutions())
        .filter(move |m| filter.is_none_or(|f| f.contains(m))))
}

/// Solves the cases on `jobs` worker threads and hands each case's tables
/// to `sink` in case order, so the output does not depend on `jobs`.
pub fn run_cases<F>(cases: &[SearchCase], filter: Option<AlgebraClass>, jobs: usize, sink: F) -> Result<()>
where
    F: FnMut(usize, Vec<MulTable>) -> Result<()>,
{
    run_cases_with(
        cases,
        jobs,
        |case| case.solutions().filter(|m| filter.is_none_or(|f| f.contains(m))).collect(),
        sink,
    )
}

/// Like [`run_cases`], but only the number of tables per case is kept.
pub fn count_cases<F>(cases: &[SearchCase], filter: Option<AlgebraClass>, jobs: usize, sink: F) -> Result<()>
where
    F: FnMut(usize, u64) -> Result<()>,
{
    run_cases_with(
        cases,
        jobs,
        |case| case.solutions().filter(|m| filter.is_none_or(|f| f.contains(m))).count() as u64,
        sink,
    )
}

fn run_cases_with<T, W, F>(cases: &[SearchCase], jobs: usize, work: W, mut sink: F) -> Result<()>
where
    T: Send,
    W: Fn(&SearchCase) -> T + Sync,
    F: FnMut(usize, T) -> Result<()>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Argument(format!("cannot start worker pool: {e}")))?;
    let (tx, rx) = mpsc::channel::<(usize, T)>();
    let stop = AtomicBool::new(false);
    std::thread::scope(|scope| {
        let (work, stop) = (&work, &stop);
        scope.spawn(move || {
            use rayon::prelude::*;
            pool.install(|| {
                cases.par_iter().enumerate().for_each_with(tx, |tx, (i, case)| {
                    if !stop.load(Ordering::Relaxed) {
                        // the receiver only hangs up after an error
                        let _ = tx.send((i, work(case)));
                    }
                })
            })
        });
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, out) in rx {
            pending.insert(i, out);
            while let Some(out) = pending.remove(&next) {
                if let Err(e) = sink(next, out) {
                    stop.store(true, Ordering::Relaxed);
                    return Err(e);
                }
                next += 1;
            }
        }
        Ok(())
    })
}
