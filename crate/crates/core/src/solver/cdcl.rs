//! Conflict-driven clause learning with two watched literals, first-UIP
//! learning, VSIDS branching, phase saving and Luby restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Deadline, SolverResult};
use crate::kb::Lit;

// Internal literal: 2 * var + (1 if negative).
type ILit = u32;

fn ilit(l: Lit) -> ILit {
    (l.unsigned_abs() << 1) | (l < 0) as u32
}

fn var(l: ILit) -> usize {
    (l >> 1) as usize
}

fn neg(l: ILit) -> ILit {
    l ^ 1
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

struct Clause {
    lits: Vec<ILit>,
    learnt: bool,
    lbd: u32,
    deleted: bool,
}

/// Max-heap of variables keyed by activity.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap {
            heap: Vec::new(),
            pos: vec![None; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.up(i, act);
        }
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let p = (i - 1) / 2;
            if act[self.heap[p]] >= act[v] {
                break;
            }
            self.heap[i] = self.heap[p];
            self.pos[self.heap[i]] = Some(i);
            i = p;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c = if r < self.heap.len() && act[self.heap[r]] > act[self.heap[l]] {
                r
            } else {
                l
            };
            if act[self.heap[c]] <= act[v] {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i]] = Some(i);
            i = c;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

fn luby(mut i: u64) -> u64 {
    // i-th element (0-based) of 1 1 2 1 1 2 4 ...
    let (mut size, mut seq) = (1u64, 0u32);
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

/// A single-shot CDCL solver.
pub struct CdclSolver {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<usize>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<ILit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    unsat: bool,
    /// Drop half of the long learnt clauses when their number grows.
    pub reduce_learnts: bool,
    /// Conflicts before the first restart; later intervals follow Luby.
    pub restart_base: u64,
    conflicts: u64,
}

impl CdclSolver {
    /// A solver over variables `1..=num_vars`. `seed` perturbs initial
    /// branching activities.
    pub fn new(num_vars: u32, seed: u64) -> Self {
        let n = num_vars as usize + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let activity: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 1e-5).collect();
        let mut heap = VarHeap::new(n);
        for v in 1..n {
            heap.insert(v, &activity);
        }
        CdclSolver {
            num_vars: num_vars as usize,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            heap,
            polarity: vec![false; n],
            seen: vec![false; n],
            unsat: false,
            reduce_learnts: true,
            restart_base: 100,
            conflicts: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Conflicts seen by the last [`CdclSolver::solve`].
    pub fn conflicts(&self) -> u64 {
        self.conflicts
    }

    fn value(&self, l: ILit) -> i8 {
        let a = self.assigns[var(l)];
        if l & 1 == 1 {
            -a
        } else {
            a
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: ILit, reason: Option<usize>) {
        let v = var(l);
        self.assigns[v] = if l & 1 == 1 { FALSE } else { TRUE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Add an input clause. Returns `false` once the formula is known unsat.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if self.unsat {
            return false;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let mut c: Vec<ILit> = Vec::with_capacity(lits.len());
        for &l in lits {
            assert!(l != 0 && l.unsigned_abs() as usize <= self.num_vars, "literal {l} out of range");
            let il = ilit(l);
            if c.contains(&neg(il)) || self.value(il) == TRUE {
                return true;
            }
            if !c.contains(&il) && self.value(il) != FALSE {
                c.push(il);
            }
        }
        match c.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
                !self.unsat
            }
            _ => {
                self.attach(c, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<ILit>, learnt: bool, lbd: u32) -> usize {
        let ci = self.clauses.len();
        self.watches[lits[0] as usize].push(ci);
        self.watches[lits[1] as usize].push(ci);
        self.clauses.push(Clause {
            lits,
            learnt,
            lbd,
            deleted: false,
        });
        ci
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[ci].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[ci].lits[0];
                if self.value(first) == TRUE {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[ci].lits[k];
                    if self.value(l) != FALSE {
                        self.clauses[ci].lits.swap(1, k);
                        self.watches[l as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            ws.truncate(j);
            let slot = &mut self.watches[false_lit as usize];
            ws.append(slot);
            *slot = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v, &self.activity);
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<ILit>, u32) {
        let mut learnt: Vec<ILit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<ILit> = None;
        let mut idx = self.trail.len();
        let dl = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[var(lit)].expect("implied literal has a reason");
        }
        learnt[0] = neg(p.expect("conflict at positive level"));

        // drop literals implied by other literals of the clause
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                i == 0
                    || match self.reason[var(l)] {
                        None => true,
                        Some(r) => self.clauses[r].lits[1..].iter().any(|&q| {
                            !self.seen[var(q)] && self.level[var(q)] > 0
                        }),
                    }
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut learnt: Vec<ILit> = learnt
            .into_iter()
            .zip(keep)
            .filter_map(|(l, k)| k.then_some(l))
            .collect();

        let bt = if learnt.len() == 1 {
            0
        } else {
            let (mi, _) = learnt[1..]
                .iter()
                .enumerate()
                .max_by_key(|(_, &l)| self.level[var(l)])
                .expect("non-empty");
            learnt.swap(1, mi + 1);
            self.level[var(learnt[1])]
        };
        (learnt, bt)
    }

    fn lbd(&self, lits: &[ILit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|&l| self.level[var(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.polarity[v] = l & 1 == 0;
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<ILit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(((v as u32) << 1) | (!self.polarity[v]) as u32);
            }
        }
        None
    }

    fn reduce_db(&mut self) {
        let mut cand: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                c.learnt && !c.deleted && c.lits.len() > 2
            })
            .collect();
        cand.sort_by_key(|&i| std::cmp::Reverse(self.clauses[i].lbd));
        for &i in &cand[..cand.len() / 2] {
            let c = &mut self.clauses[i];
            c.deleted = true;
            c.lits = Vec::new();
        }
        for w in self.watches.iter_mut() {
            w.retain(|&ci| !self.clauses[ci].deleted);
        }
    }

    /// Run the search until a model, a refutation or the deadline.
    pub fn solve(&mut self, deadline: &Deadline) -> SolverResult {
        if self.unsat {
            return SolverResult::Unsat;
        }
        if self.propagate().is_some() {
            self.unsat = true;
            return SolverResult::Unsat;
        }
        let mut restarts = 0u64;
        let mut max_learnts = (self.clauses.len() / 3).max(2000);
        let mut learnts = 0usize;
        let mut steps = 0u64;
        loop {
            let budget = self.restart_base * luby(restarts);
            let mut local = 0u64;
            loop {
                steps += 1;
                if steps % 256 == 0 && deadline.expired() {
                    self.cancel_until(0);
                    return SolverResult::Timeout(deadline.elapsed());
                }
                if let Some(confl) = self.propagate() {
                    self.conflicts += 1;
                    local += 1;
                    if self.decision_level() == 0 {
                        self.unsat = true;
                        return SolverResult::Unsat;
                    }
                    let (learnt, bt) = self.analyze(confl);
                    self.cancel_until(bt);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], None);
                    } else {
                        let lbd = self.lbd(&learnt);
                        let first = learnt[0];
                        let ci = self.attach(learnt, true, lbd);
                        learnts += 1;
                        self.enqueue(first, Some(ci));
                    }
                    self.var_inc /= 0.95;
                    continue;
                }
                if local >= budget {
                    break;
                }
                match self.pick_branch() {
                    None => {
                        let mut model = vec![false; self.num_vars + 1];
                        for (v, m) in model.iter_mut().enumerate().skip(1) {
                            *m = self.assigns[v] == TRUE;
                        }
                        self.cancel_until(0);
                        return SolverResult::Sat(model);
                    }
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
            restarts += 1;
            self.cancel_until(0);
            if self.reduce_learnts && learnts > max_learnts {
                self.reduce_db();
                learnts /= 2;
                max_learnts += max_learnts / 10;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: u32, clauses: &[&[Lit]]) -> SolverResult {
        let mut s = CdclSolver::new(n, 0);
        for c in clauses {
            s.add_clause(c);
        }
        s.solve(&Deadline::none())
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn trivial_cases() {
        assert!(run(1, &[&[1]]).is_sat());
        assert_eq!(run(1, &[&[1], &[-1]]), SolverResult::Unsat);
        assert!(run(0, &[]).is_sat());
        assert_eq!(run(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]), SolverResult::Unsat);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 4 pigeons, 3 holes; var p*3+h+1
        let mut s = CdclSolver::new(12, 3);
        for p in 0..4 {
            let c: Vec<Lit> = (0..3).map(|h| p * 3 + h + 1).collect();
            s.add_clause(&c);
        }
        for h in 0..3 {
            for p in 0..4 {
                for q in p + 1..4 {
                    s.add_clause(&[-(p * 3 + h + 1), -(q * 3 + h + 1)]);
                }
            }
        }
        assert_eq!(s.solve(&Deadline::none()), SolverResult::Unsat);
    }

    #[test]
    fn model_satisfies_clauses() {
        let cls: Vec<Vec<Lit>> = vec![vec![1, 2, 3], vec![-1, -2], vec![-2, -3], vec![-1, -3], vec![2, 4], vec![-4, 1]];
        let mut s = CdclSolver::new(4, 9);
        for c in &cls {
            s.add_clause(c);
        }
        match s.solve(&Deadline::none()) {
            SolverResult::Sat(m) => {
                for c in &cls {
                    assert!(c.iter().any(|&l| m[l.unsigned_abs() as usize] == (l > 0)));
                }
            }
            other => panic!("{other:?}"),
        }
    }
}
