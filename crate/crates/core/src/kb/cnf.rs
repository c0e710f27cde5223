//! Clause sets over integer literals, the semantic variable naming used by
//! the encoders, and the Tseitin transformation.

use std::collections::HashMap;
use std::fmt;

use super::{Formula, Site, Tv3};

/// Solver variable, numbered from 1.
pub type Var = u32;
/// DIMACS-style literal: `v` or `-v`.
pub type Lit = i32;

/// Semantic name of a solver variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarName {
    /// A plain atom of the knowledge base.
    Atom(String),
    /// `X_t`, `X_f`, `X_b` for atom `X`.
    AtomTri(String, Tv3),
    /// Valuation of a subformula site under one truth value.
    SubVal(Site, Tv3),
    /// `X^l`, the `l`-th occurrence of `X`.
    OccVar(String, usize),
    /// `t_{X,l}`: occurrence forgotten as verum.
    ForgetTop(String, usize),
    /// `f_{X,l}`: occurrence forgotten as falsum.
    ForgetBot(String, usize),
    /// `p_{A,i}`: formula `A` assigned to block `i`.
    Block(usize, usize),
    /// Copy of an atom for a block or a formula index.
    CopyAtom(String, usize),
    /// `X_o`, the atom in the optimal interpretation.
    OptAtom(String),
    /// `inv_{X,i}`: copy `i` disagrees with the optimal interpretation on `X`.
    Inv(String, usize),
    /// `hit_A` for formula index `A`.
    Hit(usize),
    /// Auxiliary variable introduced by Tseitin or a cardinality encoding.
    Aux(u32),
}

impl VarName {
    pub fn is_aux(&self) -> bool {
        matches!(self, VarName::Aux(_))
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::Atom(x) => write!(f, "{x}"),
            VarName::AtomTri(x, t) => write!(f, "{x}_{t}"),
            VarName::SubVal(s, t) => write!(f, "v[{s}]_{t}"),
            VarName::OccVar(x, l) => write!(f, "{x}^{l}"),
            VarName::ForgetTop(x, l) => write!(f, "t_{x},{l}"),
            VarName::ForgetBot(x, l) => write!(f, "f_{x},{l}"),
            VarName::Block(a, i) => write!(f, "p_{a},{i}"),
            VarName::CopyAtom(x, i) => write!(f, "{x}_{i}"),
            VarName::OptAtom(x) => write!(f, "{x}_o"),
            VarName::Inv(x, i) => write!(f, "inv_{x},{i}"),
            VarName::Hit(a) => write!(f, "hit_{a}"),
            VarName::Aux(n) => write!(f, "aux{n}"),
        }
    }
}

/// Bijection between semantic names and solver variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarMap {
    names: Vec<VarName>,
    ids: HashMap<VarName, Var>,
    aux: u32,
}

impl VarMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The variable for `name`, allocated on first use.
    pub fn var(&mut self, name: VarName) -> Var {
        if let Some(&v) = self.ids.get(&name) {
            return v;
        }
        self.names.push(name.clone());
        let v = self.names.len() as Var;
        self.ids.insert(name, v);
        v
    }

    pub fn fresh_aux(&mut self) -> Var {
        self.aux += 1;
        self.var(VarName::Aux(self.aux))
    }

    pub fn get(&self, name: &VarName) -> Option<Var> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, v: Var) -> Option<&VarName> {
        self.names.get((v as usize).checked_sub(1)?)
    }

    pub fn len(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of non-auxiliary variables.
    pub fn base_count(&self) -> usize {
        self.names.iter().filter(|n| !n.is_aux()).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &VarName)> {
        self.names.iter().enumerate().map(|(i, n)| (i as Var + 1, n))
    }
}

/// A clause set together with the names of its variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfInstance {
    pub clauses: Vec<Vec<Lit>>,
    pub var_map: VarMap,
}

impl CnfInstance {
    pub fn new(var_map: VarMap) -> Self {
        CnfInstance {
            clauses: Vec::new(),
            var_map,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.var_map.len()
    }

    /// Add a clause, dropping repeated literals. Tautologies are skipped.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        let mut clause: Vec<Lit> = Vec::new();
        for l in lits {
            debug_assert!(l != 0 && l.unsigned_abs() <= self.num_vars());
            if clause.contains(&-l) {
                return;
            }
            if !clause.contains(&l) {
                clause.push(l);
            }
        }
        debug_assert!(!clause.is_empty(), "empty clause");
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Vec<Lit>>) {
        for c in clauses {
            self.add_clause(c);
        }
    }

    /// Whether `model` (indexed by variable, slot 0 unused) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| model.get(l.unsigned_abs() as usize).copied() == Some(l > 0))
        })
    }

    /// Force unsatisfiability through a fresh auxiliary.
    pub fn add_contradiction(&mut self) {
        let a = self.var_map.fresh_aux() as Lit;
        self.clauses.push(vec![a]);
        self.clauses.push(vec![-a]);
    }
}

/// Boolean expression over solver literals, the input of [`Tseitin`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lit(Lit),
    Const(bool),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(v: Var) -> Self {
        Expr::Lit(v as Lit)
    }

    pub fn neg(v: Var) -> Self {
        Expr::Lit(-(v as Lit))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(es: impl IntoIterator<Item = Expr>) -> Self {
        Expr::And(es.into_iter().collect())
    }

    pub fn or(es: impl IntoIterator<Item = Expr>) -> Self {
        Expr::Or(es.into_iter().collect())
    }

    pub fn iff(a: Expr, b: Expr) -> Self {
        Expr::Iff(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Expr, b: Expr) -> Self {
        Expr::Or(vec![Expr::not(a), b])
    }

    /// Translate a formula, mapping each atom through `atom`.
    pub fn from_formula(f: &Formula, atom: &mut impl FnMut(&str) -> Expr) -> Self {
        match f {
            Formula::Atom(a) => atom(a),
            Formula::Top => Expr::Const(true),
            Formula::Bottom => Expr::Const(false),
            Formula::Not(a) => Expr::not(Expr::from_formula(a, atom)),
            Formula::And(a, b) => {
                Expr::And(vec![Expr::from_formula(a, atom), Expr::from_formula(b, atom)])
            }
            Formula::Or(a, b) => {
                Expr::Or(vec![Expr::from_formula(a, atom), Expr::from_formula(b, atom)])
            }
            Formula::Implies(a, b) => {
                Expr::implies(Expr::from_formula(a, atom), Expr::from_formula(b, atom))
            }
            Formula::Iff(a, b) => Expr::iff(Expr::from_formula(a, atom), Expr::from_formula(b, atom)),
        }
    }

    /// Propagate constants and flatten nested conjunctions and disjunctions.
    /// The result is a constant or contains no constants.
    pub fn simplify(self) -> Expr {
        match self {
            Expr::Lit(_) | Expr::Const(_) => self,
            Expr::Not(a) => match a.simplify() {
                Expr::Const(c) => Expr::Const(!c),
                Expr::Lit(l) => Expr::Lit(-l),
                Expr::Not(x) => *x,
                x => Expr::not(x),
            },
            Expr::And(cs) => Self::simplify_nary(cs, true),
            Expr::Or(cs) => Self::simplify_nary(cs, false),
            Expr::Iff(a, b) => match (a.simplify(), b.simplify()) {
                (Expr::Const(c), x) | (x, Expr::Const(c)) => {
                    if c {
                        x
                    } else {
                        Expr::not(x).simplify()
                    }
                }
                (a, b) => Expr::iff(a, b),
            },
        }
    }

    fn simplify_nary(cs: Vec<Expr>, conj: bool) -> Expr {
        let mut out = Vec::with_capacity(cs.len());
        for c in cs {
            match c.simplify() {
                Expr::Const(v) if v == conj => {}
                Expr::Const(v) => return Expr::Const(v),
                Expr::And(inner) if conj => out.extend(inner),
                Expr::Or(inner) if !conj => out.extend(inner),
                x => out.push(x),
            }
        }
        match out.len() {
            0 => Expr::Const(conj),
            1 => out.pop().unwrap(),
            _ if conj => Expr::And(out),
            _ => Expr::Or(out),
        }
    }

    /// Classical value under `model` (indexed by variable).
    pub fn eval(&self, model: &[bool]) -> bool {
        match self {
            Expr::Lit(l) => model[l.unsigned_abs() as usize] == (*l > 0),
            Expr::Const(c) => *c,
            Expr::Not(a) => !a.eval(model),
            Expr::And(cs) => cs.iter().all(|c| c.eval(model)),
            Expr::Or(cs) => cs.iter().any(|c| c.eval(model)),
            Expr::Iff(a, b) => a.eval(model) == b.eval(model),
        }
    }
}

/// Tseitin transformation into a [`CnfInstance`].
///
/// Every non-literal subexpression gets an auxiliary variable defined by a
/// full biconditional; asserted expressions add their root literal as a unit.
pub struct Tseitin<'a> {
    cnf: &'a mut CnfInstance,
}

impl<'a> Tseitin<'a> {
    pub fn new(cnf: &'a mut CnfInstance) -> Self {
        Tseitin { cnf }
    }

    /// Require `e` to hold.
    pub fn assert(&mut self, e: &Expr) {
        match e.clone().simplify() {
            Expr::Const(true) => {}
            Expr::Const(false) => self.cnf.add_contradiction(),
            Expr::And(cs) => {
                for c in &cs {
                    self.assert(c);
                }
            }
            Expr::Or(cs) => {
                let lits: Vec<Lit> = cs.iter().map(|c| self.define(c)).collect();
                self.cnf.add_clause(lits);
            }
            other => {
                let l = self.define(&other);
                self.cnf.add_clause([l]);
            }
        }
    }

    /// Require `a <-> e`. Top-level conjunctions and disjunctions are
    /// defined directly on `a` without an extra auxiliary.
    pub fn equate(&mut self, a: Lit, e: &Expr) {
        match e.clone().simplify() {
            Expr::Const(true) => self.cnf.add_clause([a]),
            Expr::Const(false) => self.cnf.add_clause([-a]),
            Expr::And(cs) => {
                let lits: Vec<Lit> = cs.iter().map(|c| self.define(c)).collect();
                for &l in &lits {
                    self.cnf.add_clause([-a, l]);
                }
                self.cnf.add_clause(std::iter::once(a).chain(lits.iter().map(|l| -l)));
            }
            Expr::Or(cs) => {
                let lits: Vec<Lit> = cs.iter().map(|c| self.define(c)).collect();
                for &l in &lits {
                    self.cnf.add_clause([a, -l]);
                }
                self.cnf.add_clause(std::iter::once(-a).chain(lits.iter().copied()));
            }
            other => {
                let l = self.define(&other);
                self.cnf.add_clause([-a, l]);
                self.cnf.add_clause([a, -l]);
            }
        }
    }

    /// A literal equivalent to `e`, which must be constant-free.
    pub fn define(&mut self, e: &Expr) -> Lit {
        match e {
            Expr::Lit(l) => *l,
            Expr::Const(_) => panic!("constants must be simplified away before definition"),
            Expr::Not(a) => -self.define(a),
            Expr::And(cs) | Expr::Or(cs) if cs.len() == 1 => self.define(&cs[0]),
            Expr::And(cs) => {
                let lits: Vec<Lit> = cs.iter().map(|c| self.define(c)).collect();
                let a = self.cnf.var_map.fresh_aux() as Lit;
                for &l in &lits {
                    self.cnf.add_clause([-a, l]);
                }
                self.cnf.add_clause(std::iter::once(a).chain(lits.iter().map(|l| -l)));
                a
            }
            Expr::Or(cs) => {
                let lits: Vec<Lit> = cs.iter().map(|c| self.define(c)).collect();
                let a = self.cnf.var_map.fresh_aux() as Lit;
                for &l in &lits {
                    self.cnf.add_clause([a, -l]);
                }
                self.cnf.add_clause(std::iter::once(-a).chain(lits.iter().copied()));
                a
            }
            Expr::Iff(x, y) => {
                let (x, y) = (self.define(x), self.define(y));
                let a = self.cnf.var_map.fresh_aux() as Lit;
                self.cnf.add_clause([-a, -x, y]);
                self.cnf.add_clause([-a, x, -y]);
                self.cnf.add_clause([a, x, y]);
                self.cnf.add_clause([a, -x, -y]);
                a
            }
        }
    }
}

/// Equisatisfiable CNF of a single formula; atoms become [`VarName::Atom`].
pub fn tseitin(f: &Formula) -> CnfInstance {
    let mut cnf = CnfInstance::default();
    let mut expr_atoms = |a: &str| Expr::var(cnf.var_map.var(VarName::Atom(a.to_string())));
    let e = Expr::from_formula(f, &mut expr_atoms);
    Tseitin::new(&mut cnf).assert(&e);
    cnf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_formula;

    #[test]
    fn single_atom_is_one_unit_clause() {
        let cnf = tseitin(&parse_formula("x").unwrap());
        assert_eq!(cnf.clauses, vec![vec![1]]);
        assert_eq!(cnf.num_vars(), 1);
    }

    #[test]
    fn tautologies_and_duplicates_are_normalised() {
        let mut cnf = CnfInstance::default();
        let a = cnf.var_map.var(VarName::Atom("a".into())) as Lit;
        let b = cnf.var_map.var(VarName::Atom("b".into())) as Lit;
        cnf.add_clause([a, -a, b]);
        cnf.add_clause([a, b, a]);
        assert_eq!(cnf.clauses, vec![vec![a, b]]);
    }

    #[test]
    fn simplify_propagates_constants() {
        let e = Expr::and([Expr::var(1), Expr::or([Expr::Const(true), Expr::var(2)])]);
        assert_eq!(e.simplify(), Expr::var(1));
        let e = Expr::iff(Expr::Const(false), Expr::var(3));
        assert_eq!(e.simplify(), Expr::neg(3));
    }

    #[test]
    fn var_map_is_a_bijection() {
        let mut m = VarMap::new();
        let a = m.var(VarName::Atom("a".into()));
        let b = m.fresh_aux();
        assert_eq!(m.var(VarName::Atom("a".into())), a);
        assert_eq!(m.name(b), Some(&VarName::Aux(1)));
        assert_eq!(m.base_count(), 1);
        assert_eq!(m.name(0), None);
    }
}
