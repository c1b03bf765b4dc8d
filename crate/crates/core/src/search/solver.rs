//! Finite-domain propagation engine over multiplication tables.
//!
//! Cells hold bitmask domains over `0..n`. Constraints are stated over terms
//! built from constants and table lookups `M[a][b]`, where `a` and `b` are
//! terms themselves. A term whose indices are known but whose cell is not
//! yet fixed is *open*; one whose indices are still unknown is *blocked* on
//! the first undetermined cell it reaches. Each constraint watches at most
//! two cells and is re-examined only when one of those changes.
//!
//! Symmetry is broken by lex-leader constraints `M ≤ M^g`, compared in the
//! model's cell order and propagated incrementally.

use std::collections::HashMap;

use crate::algebra::MulTable;
use crate::perm::Perm;

pub(crate) type TermId = u32;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Term {
    Elem(u8),
    Mul(TermId, TermId),
}

#[derive(Clone, Debug)]
pub(crate) enum Constraint {
    Eq(TermId, TermId),
    IsUnit(TermId),
    NotUnit(TermId),
    AnyNotUnit(Vec<TermId>),
}

/// A constraint model: domains, constraints, the cell order and the
/// symmetries to break.
#[derive(Clone, Debug)]
pub(crate) struct Model {
    pub n: usize,
    pub terms: Vec<Term>,
    pub constraints: Vec<Constraint>,
    pub domains: Vec<u16>,
    /// Cells compared by the lex-leader constraints, in order. Every cell
    /// whose initial domain is not a singleton must appear.
    pub order: Vec<u16>,
    pub symmetries: Vec<Perm>,
    interned: HashMap<(u8, TermId, TermId), TermId>,
}

impl Model {
    pub fn new(n: usize) -> Self {
        assert!((1..=16).contains(&n), "table size out of range");
        let unit = n - 1;
        let mut domains = vec![(1u16 << n) - 1; n * n];
        for i in 0..n {
            domains[unit * n + i] = 1 << i;
            domains[i * n + unit] = 1 << unit;
            domains[i * n + i] = 1 << unit;
        }
        Model {
            n,
            terms: Vec::new(),
            constraints: Vec::new(),
            domains,
            order: Vec::new(),
            symmetries: Vec::new(),
            interned: HashMap::new(),
        }
    }

    pub fn unit(&self) -> usize {
        self.n - 1
    }

    pub fn elem(&mut self, v: usize) -> TermId {
        self.intern(0, v as TermId, 0, Term::Elem(v as u8))
    }

    pub fn mul(&mut self, a: TermId, b: TermId) -> TermId {
        self.intern(1, a, b, Term::Mul(a, b))
    }

    /// The lookup `M[i][j]` for constants `i`, `j`.
    pub fn cell(&mut self, i: usize, j: usize) -> TermId {
        let (a, b) = (self.elem(i), self.elem(j));
        self.mul(a, b)
    }

    fn intern(&mut self, tag: u8, a: TermId, b: TermId, t: Term) -> TermId {
        let next = self.terms.len() as TermId;
        let id = *self.interned.entry((tag, a, b)).or_insert(next);
        if id == next {
            self.terms.push(t);
        }
        id
    }

    pub fn restrict(&mut self, i: usize, j: usize, mask: u16) {
        self.domains[i * self.n + j] &= mask;
    }

    pub fn add(&mut self, c: Constraint) {
        self.constraints.push(c);
    }
}

#[derive(Clone, Copy)]
enum Ev {
    Val(u8),
    Open(u16),
    Blocked(u16),
}

enum Outcome {
    Entailed,
    Fail,
    Watch([u16; 2]),
}

enum Undo {
    Dom(u16, u16),
    WatchSet(u32, [u16; 2]),
    WatchPush(u16),
    Lex(u32, u32),
}

const NONE: u16 = u16::MAX;
const ENTAILED: [u16; 2] = [NONE - 1, NONE - 1];
const DONE: u32 = u32::MAX;

struct LexSym {
    /// Image cell `g(c)` for each position of the order.
    image: Vec<u16>,
    /// `g⁻¹` on values.
    inv: Vec<u8>,
}

pub(crate) struct Engine {
    n: usize,
    unit: u8,
    terms: Vec<Term>,
    constraints: Vec<Constraint>,
    dom: Vec<u16>,
    watches: Vec<Vec<u32>>,
    wset: Vec<[u16; 2]>,
    trail: Vec<Undo>,
    queue: Vec<u16>,
    queued: Vec<bool>,
    order: Vec<u16>,
    lex: Vec<LexSym>,
    lex_pos: Vec<u32>,
}

impl Engine {
    pub fn new(model: Model) -> Self {
        let n = model.n;
        let cells = n * n;
        let order = model.order.clone();
        let lex: Vec<LexSym> = model
            .symmetries
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| {
                let inv = g.inverse();
                LexSym {
                    image: order
                        .iter()
                        .map(|&c| {
                            let (i, j) = (c as usize / n, c as usize % n);
                            (g.apply(i) * n + g.apply(j)) as u16
                        })
                        .collect(),
                    inv: (0..n).map(|v| inv.apply(v) as u8).collect(),
                }
            })
            .collect();
        let nc = model.constraints.len();
        Engine {
            n,
            unit: (n - 1) as u8,
            terms: model.terms,
            constraints: model.constraints,
            dom: model.domains,
            watches: vec![Vec::new(); cells],
            wset: vec![[NONE, NONE]; nc],
            trail: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; cells],
            order,
            lex_pos: vec![0; lex.len()],
            lex,
        }
    }

    fn eval(&self, t: TermId) -> Ev {
        match self.terms[t as usize] {
            Term::Elem(v) => Ev::Val(v),
            Term::Mul(a, b) => {
                let va = match self.eval(a) {
                    Ev::Val(v) => v,
                    Ev::Open(c) | Ev::Blocked(c) => return Ev::Blocked(c),
                };
                let vb = match self.eval(b) {
                    Ev::Val(v) => v,
                    Ev::Open(c) | Ev::Blocked(c) => return Ev::Blocked(c),
                };
                let cell = va as usize * self.n + vb as usize;
                let d = self.dom[cell];
                if d & (d - 1) == 0 {
                    Ev::Val(d.trailing_zeros() as u8)
                } else {
                    Ev::Open(cell as u16)
                }
            }
        }
    }

    fn narrow(&mut self, cell: u16, mask: u16) -> bool {
        let old = self.dom[cell as usize];
        let new = old & mask;
        if new == old {
            return true;
        }
        if new == 0 {
            return false;
        }
        self.trail.push(Undo::Dom(cell, old));
        self.dom[cell as usize] = new;
        if !self.queued[cell as usize] {
            self.queued[cell as usize] = true;
            self.queue.push(cell);
        }
        true
    }

    fn fixed(&self, cell: u16) -> bool {
        let d = self.dom[cell as usize];
        d & (d - 1) == 0
    }

    fn examine(&mut self, cid: usize) -> Outcome {
        let unit_bit = 1u16 << self.unit;
        match self.constraints[cid] {
            Constraint::IsUnit(t) => match self.eval(t) {
                Ev::Val(v) if v == self.unit => Outcome::Entailed,
                Ev::Val(_) => Outcome::Fail,
                Ev::Open(c) => self.narrow_entail(c, unit_bit),
                Ev::Blocked(c) => Outcome::Watch([c, NONE]),
            },
            Constraint::NotUnit(t) => match self.eval(t) {
                Ev::Val(v) if v == self.unit => Outcome::Fail,
                Ev::Val(_) => Outcome::Entailed,
                Ev::Open(c) => self.narrow_entail(c, !unit_bit),
                Ev::Blocked(c) => Outcome::Watch([c, NONE]),
            },
            Constraint::Eq(a, b) => match (self.eval(a), self.eval(b)) {
                (Ev::Val(x), Ev::Val(y)) => {
                    if x == y {
                        Outcome::Entailed
                    } else {
                        Outcome::Fail
                    }
                }
                (Ev::Val(v), Ev::Open(c)) | (Ev::Open(c), Ev::Val(v)) => self.narrow_entail(c, 1 << v),
                (Ev::Open(c1), Ev::Open(c2)) => {
                    if c1 == c2 {
                        return Outcome::Entailed;
                    }
                    let m = self.dom[c1 as usize] & self.dom[c2 as usize];
                    if !self.narrow(c1, m) || !self.narrow(c2, m) {
                        return Outcome::Fail;
                    }
                    if self.fixed(c1) {
                        Outcome::Entailed
                    } else {
                        Outcome::Watch([c1, c2])
                    }
                }
                (Ev::Blocked(c), _) | (_, Ev::Blocked(c)) => Outcome::Watch([c, NONE]),
            },
            Constraint::AnyNotUnit(ref ts) => {
                let mut pending = [NONE, NONE];
                let mut count = 0;
                let mut last_open = None;
                for &t in ts {
                    let cell = match self.eval(t) {
                        Ev::Val(v) if v == self.unit => continue,
                        Ev::Val(_) => return Outcome::Entailed,
                        Ev::Open(c) => {
                            if self.dom[c as usize] & unit_bit == 0 {
                                return Outcome::Entailed;
                            }
                            last_open = Some(c);
                            c
                        }
                        Ev::Blocked(c) => {
                            last_open = None;
                            c
                        }
                    };
                    count += 1;
                    if pending[0] == NONE {
                        pending[0] = cell;
                    } else if pending[1] == NONE && pending[0] != cell {
                        pending[1] = cell;
                    }
                }
                match (count, last_open) {
                    (0, _) => Outcome::Fail,
                    (1, Some(c)) => self.narrow_entail(c, !unit_bit),
                    _ => Outcome::Watch(pending),
                }
            }
        }
    }

    fn narrow_entail(&mut self, cell: u16, mask: u16) -> Outcome {
        if self.narrow(cell, mask) {
            Outcome::Entailed
        } else {
            Outcome::Fail
        }
    }

    fn set_watch(&mut self, cid: usize, w: [u16; 2]) {
        let old = self.wset[cid];
        if old == w {
            return;
        }
        self.trail.push(Undo::WatchSet(cid as u32, old));
        self.wset[cid] = w;
        for c in w {
            if c < NONE - 1 && !old.contains(&c) {
                self.watches[c as usize].push(cid as u32);
                self.trail.push(Undo::WatchPush(c));
            }
        }
    }

    fn run_constraint(&mut self, cid: usize) -> bool {
        match self.examine(cid) {
            Outcome::Fail => false,
            Outcome::Entailed => {
                self.set_watch(cid, ENTAILED);
                true
            }
            Outcome::Watch(w) => {
                self.set_watch(cid, w);
                true
            }
        }
    }

    fn clear_queue(&mut self) {
        for c in self.queue.drain(..) {
            self.queued[c as usize] = false;
        }
    }

    /// Examines every constraint once, then propagates to a fixpoint.
    pub fn propagate_root(&mut self) -> bool {
        for cid in 0..self.constraints.len() {
            if !self.run_constraint(cid) {
                self.clear_queue();
                return false;
            }
        }
        self.propagate()
    }

    pub fn propagate(&mut self) -> bool {
        loop {
            while let Some(c) = self.queue.pop() {
                self.queued[c as usize] = false;
                let mut idx = 0;
                while idx < self.watches[c as usize].len() {
                    let cid = self.watches[c as usize][idx] as usize;
                    idx += 1;
                    if self.wset[cid].contains(&c) && !self.run_constraint(cid) {
                        self.clear_queue();
                        return false;
                    }
                }
            }
            if !self.lex_pass() {
                self.clear_queue();
                return false;
            }
            if self.queue.is_empty() {
                return true;
            }
        }
    }

    fn lex_pass(&mut self) -> bool {
        for s in 0..self.lex.len() {
            let start = self.lex_pos[s];
            if start == DONE {
                continue;
            }
            let mut p = start as usize;
            let result = loop {
                if p == self.order.len() {
                    break p as u32;
                }
                let c1 = self.order[p];
                let c2 = self.lex[s].image[p];
                let x = self.dom[c1 as usize];
                if c1 == c2 {
                    // v ≤ g⁻¹(v) on one cell
                    let inv = &self.lex[s].inv;
                    let allowed = bits(x).filter(|&v| inv[v] as usize >= v).fold(0u16, |m, v| m | 1 << v);
                    let strict = bits(allowed).all(|v| (inv[v] as usize) > v);
                    if !self.narrow(c1, allowed) {
                        return false;
                    }
                    if strict {
                        break DONE;
                    }
                    if self.fixed(c1) {
                        p += 1;
                        continue;
                    }
                    break p as u32;
                }
                let inv = &self.lex[s].inv;
                let y = self.dom[c2 as usize];
                let (xmin, xmax) = (x.trailing_zeros() as usize, 15 - x.leading_zeros() as usize);
                let (ymin, ymax) = bits(y).fold((usize::MAX, 0), |(lo, hi), w| {
                    let v = inv[w] as usize;
                    (lo.min(v), hi.max(v))
                });
                if xmin > ymax {
                    return false;
                }
                if xmax < ymin {
                    break DONE;
                }
                if xmin == xmax && ymin == ymax {
                    p += 1;
                    continue;
                }
                let keep_y = bits(y).filter(|&w| inv[w] as usize >= xmin).fold(0u16, |m, w| m | 1 << w);
                let keep_x = (1u16 << (ymax + 1)) - 1;
                if !self.narrow(c1, keep_x) || !self.narrow(c2, keep_y) {
                    return false;
                }
                break p as u32;
            };
            if result != start {
                self.trail.push(Undo::Lex(s as u32, start));
                self.lex_pos[s] = result;
            }
        }
        true
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail entry") {
                Undo::Dom(c, old) => self.dom[c as usize] = old,
                Undo::WatchSet(cid, old) => self.wset[cid as usize] = old,
                Undo::WatchPush(c) => {
                    self.watches[c as usize].pop();
                }
                Undo::Lex(s, old) => self.lex_pos[s as usize] = old,
            }
        }
    }

    pub fn assign(&mut self, cell: u16, v: usize) -> bool {
        self.narrow(cell, 1 << v)
    }

    pub fn domain(&self, cell: u16) -> u16 {
        self.dom[cell as usize]
    }

    pub fn order(&self) -> &[u16] {
        &self.order
    }

    pub fn table(&self) -> MulTable {
        let entries = self.dom.iter().map(|d| d.trailing_zeros() as u8).collect();
        MulTable::new(self.n, entries).expect("solver tables are well-shaped")
    }
}

fn bits(mask: u16) -> impl Iterator<Item = usize> {
    (0..16).filter(move |&v| mask >> v & 1 == 1)
}

struct Frame {
    cell: u16,
    remaining: u16,
    mark: usize,
    pos: usize,
}

enum State {
    Start,
    Descend(usize),
    Next,
    Done,
}

/// Depth-first enumeration of all solutions, in increasing lexicographic
/// order along the model's cell order. Pull-based: nothing is searched
/// until the next solution is requested.
pub struct Solutions {
    engine: Engine,
    stack: Vec<Frame>,
    state: State,
    nodes: u64,
    node_limit: Option<u64>,
    truncated: bool,
}

impl Solutions {
    pub(crate) fn new(model: Model) -> Self {
        Solutions {
            engine: Engine::new(model),
            stack: Vec::new(),
            state: State::Start,
            nodes: 0,
            node_limit: None,
            truncated: false,
        }
    }

    /// Stops the search after `limit` branching decisions.
    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    /// Branching decisions made so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// True if the node limit cut the search short.
    pub fn truncated(&self) -> bool {
        self.truncated
    }
}

impl Iterator for Solutions {
    type Item = MulTable;

    fn next(&mut self) -> Option<MulTable> {
        loop {
            match self.state {
                State::Done => return None,
                State::Start => {
                    self.state = if self.engine.propagate_root() {
                        State::Descend(0)
                    } else {
                        State::Done
                    };
                }
                State::Descend(pos) => {
                    let order = self.engine.order();
                    match (pos..order.len()).find(|&p| !self.engine.fixed(order[p])) {
                        None => {
                            self.state = State::Next;
                            let table = self.engine.table();
                            debug_assert!(table.verify().valid(), "solver produced an invalid table");
                            return Some(table);
                        }
                        Some(p) => {
                            let cell = order[p];
                            self.stack.push(Frame {
                                cell,
                                remaining: self.engine.domain(cell),
                                mark: self.engine.mark(),
                                pos: p,
                            });
                            self.state = State::Next;
                        }
                    }
                }
                State::Next => {
                    let Some(top) = self.stack.last_mut() else {
                        self.state = State::Done;
                        return None;
                    };
                    let (cell, mark, pos) = (top.cell, top.mark, top.pos);
                    if top.remaining == 0 {
                        self.stack.pop();
                        self.engine.undo_to(mark);
                        continue;
                    }
                    let v = top.remaining.trailing_zeros() as usize;
                    top.remaining &= top.remaining - 1;
                    self.engine.undo_to(mark);
                    if self.node_limit.is_some_and(|l| self.nodes >= l) {
                        self.truncated = true;
                        self.state = State::Done;
                        return None;
                    }
                    self.nodes += 1;
                    if self.engine.assign(cell, v) && self.engine.propagate() {
                        self.state = State::Descend(pos);
                    }
                }
            }
        }
    }
}
