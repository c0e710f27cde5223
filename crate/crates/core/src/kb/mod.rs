//! Propositional formulas, knowledge bases, and the syntactic machinery
//! (signatures, subformula sites, labelled atom occurrences) the encoders
//! and oracles are built on.

mod cnf;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

pub use cnf::{tseitin, CnfInstance, Expr, Lit, Tseitin, Var, VarMap, VarName};
pub use parse::{parse_formula, parse_kb};

/// Truth values of the three-valued semantics: true, false, both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tv3 {
    T,
    F,
    B,
}

impl Tv3 {
    pub const ALL: [Tv3; 3] = [Tv3::T, Tv3::F, Tv3::B];
}

impl fmt::Display for Tv3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tv3::T => "t",
            Tv3::F => "f",
            Tv3::B => "b",
        })
    }
}

/// Default signature cap for [`enumerate_models`].
pub const DEFAULT_MODEL_CAP: usize = 20;

/// A propositional formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Child formulas from left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => vec![],
            Formula::Not(a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Atoms of the formula, sorted and deduplicated.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            out.insert(a);
        });
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Formula::Atom(a) => f(a),
            _ => {
                for c in self.children() {
                    c.visit_atoms(f);
                }
            }
        }
    }

    /// Number of occurrences of `atom`.
    pub fn count_occurrences(&self, atom: &str) -> usize {
        let mut n = 0;
        self.visit_atoms(&mut |a| {
            if a == atom {
                n += 1;
            }
        });
        n
    }

    /// Number of atom leaves.
    pub fn leaf_count(&self) -> usize {
        let mut n = 0;
        self.visit_atoms(&mut |_| n += 1);
        n
    }

    /// The subformula at `path`, where `l` selects the first child and `r`
    /// the second.
    pub fn at(&self, path: &str) -> Option<&Formula> {
        let mut cur = self;
        for step in path.chars() {
            let children = cur.children();
            cur = match step {
                'l' => children.first().copied()?,
                'r' => children.get(1).copied()?,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replace the subformula at `path` with `with`.
    pub fn replace_at(&self, path: &str, with: &Formula) -> Option<Formula> {
        let Some(step) = path.chars().next() else {
            return Some(with.clone());
        };
        let rest = &path[1..];
        let rebuilt = match (self, step) {
            (Formula::Not(a), 'l') => Formula::not(a.replace_at(rest, with)?),
            (Formula::And(a, b), 'l') => Formula::and(a.replace_at(rest, with)?, (**b).clone()),
            (Formula::And(a, b), 'r') => Formula::and((**a).clone(), b.replace_at(rest, with)?),
            (Formula::Or(a, b), 'l') => Formula::or(a.replace_at(rest, with)?, (**b).clone()),
            (Formula::Or(a, b), 'r') => Formula::or((**a).clone(), b.replace_at(rest, with)?),
            (Formula::Implies(a, b), 'l') => {
                Formula::implies(a.replace_at(rest, with)?, (**b).clone())
            }
            (Formula::Implies(a, b), 'r') => {
                Formula::implies((**a).clone(), b.replace_at(rest, with)?)
            }
            (Formula::Iff(a, b), 'l') => Formula::iff(a.replace_at(rest, with)?, (**b).clone()),
            (Formula::Iff(a, b), 'r') => Formula::iff((**a).clone(), b.replace_at(rest, with)?),
            _ => return None,
        };
        Some(rebuilt)
    }

    /// Whether the formula only uses `!`, `&&`, `||`, atoms and constants.
    pub fn is_reduced(&self) -> bool {
        match self {
            Formula::Implies(..) | Formula::Iff(..) => false,
            _ => self.children().iter().all(|c| c.is_reduced()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::Atom(_) | Formula::Top | Formula::Bottom => 6,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        let p = self.precedence();
        let binary = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
            // binary operators associate to the right
            child(f, a, a.precedence() <= p)?;
            write!(f, " {op} ")?;
            child(f, b, b.precedence() < p)
        };
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Top => f.write_str("+"),
            Formula::Bottom => f.write_str("-"),
            Formula::Not(a) => {
                f.write_str("!")?;
                child(f, a, a.precedence() < p)
            }
            Formula::And(a, b) => binary(f, a, "&&", b),
            Formula::Or(a, b) => binary(f, a, "||", b),
            Formula::Implies(a, b) => binary(f, a, "=>", b),
            Formula::Iff(a, b) => binary(f, a, "<=>", b),
        }
    }
}

/// Rewrite `=>` and `<=>` into `!`, `&&`, `||`.
///
/// `a => b` becomes `!a || b` and `a <=> b` becomes `(!a || b) && (!b || a)`.
/// Both rewrites keep two- and three-valued truth values.
pub fn reduce_connectives(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bottom => f.clone(),
        Formula::Not(a) => Formula::not(reduce_connectives(a)),
        Formula::And(a, b) => Formula::and(reduce_connectives(a), reduce_connectives(b)),
        Formula::Or(a, b) => Formula::or(reduce_connectives(a), reduce_connectives(b)),
        Formula::Implies(a, b) => {
            Formula::or(Formula::not(reduce_connectives(a)), reduce_connectives(b))
        }
        Formula::Iff(a, b) => {
            let (a, b) = (reduce_connectives(a), reduce_connectives(b));
            Formula::and(
                Formula::or(Formula::not(a.clone()), b.clone()),
                Formula::or(Formula::not(b), a),
            )
        }
    }
}

/// Eliminate `+` and `-` below the root.
///
/// The result is either a constant or free of constants. Folding keeps
/// two- and three-valued truth values (`+` is t, `-` is f).
pub fn fold_constants(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Atom(_) | Top | Bottom => f.clone(),
        Not(a) => match fold_constants(a) {
            Top => Bottom,
            Bottom => Top,
            a => Formula::not(a),
        },
        And(a, b) => match (fold_constants(a), fold_constants(b)) {
            (Bottom, _) | (_, Bottom) => Bottom,
            (Top, x) | (x, Top) => x,
            (a, b) => Formula::and(a, b),
        },
        Or(a, b) => match (fold_constants(a), fold_constants(b)) {
            (Top, _) | (_, Top) => Top,
            (Bottom, x) | (x, Bottom) => x,
            (a, b) => Formula::or(a, b),
        },
        Implies(a, b) => match (fold_constants(a), fold_constants(b)) {
            (Bottom, _) | (_, Top) => Top,
            (Top, x) => x,
            (x, Bottom) => Formula::not(x),
            (a, b) => Formula::implies(a, b),
        },
        Iff(a, b) => match (fold_constants(a), fold_constants(b)) {
            (Top, x) | (x, Top) => x,
            (Bottom, x) | (x, Bottom) => fold_constants(&Formula::not(x)),
            (a, b) => Formula::iff(a, b),
        },
    }
}

/// Position of a subformula: formula index plus a path of `l`/`r` steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub formula: usize,
    pub path: String,
}

impl Site {
    pub fn root(formula: usize) -> Self {
        Site {
            formula,
            path: String::new(),
        }
    }

    pub fn child(&self, step: char) -> Self {
        let mut path = self.path.clone();
        path.push(step);
        Site {
            formula: self.formula,
            path,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.formula)
        } else {
            write!(f, "{}.{}", self.formula, self.path)
        }
    }
}

/// The `label`-th occurrence of `atom`, counted over the whole knowledge base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomOccurrence {
    pub atom: String,
    pub label: usize,
    pub site: Site,
}

/// An ordered sequence of formulas. Duplicates are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KnowledgeBase {
    formulas: Vec<Formula>,
}

impl KnowledgeBase {
    pub fn new(formulas: Vec<Formula>) -> Self {
        KnowledgeBase { formulas }
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.formulas.iter()
    }

    pub fn push(&mut self, f: Formula) {
        self.formulas.push(f);
    }

    /// Atoms occurring in the knowledge base, in lexicographic order.
    pub fn signature(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        for f in &self.formulas {
            set.extend(f.atoms());
        }
        set.into_iter().map(str::to_string).collect()
    }

    /// Every subformula site in formula order, each formula in preorder.
    pub fn subformula_sites(&self) -> Vec<(Site, &Formula)> {
        fn walk<'a>(f: &'a Formula, site: Site, out: &mut Vec<(Site, &'a Formula)>) {
            let children = f.children();
            out.push((site.clone(), f));
            for (c, step) in children.into_iter().zip(['l', 'r']) {
                walk(c, site.child(step), out);
            }
        }
        let mut out = Vec::new();
        for (i, f) in self.formulas.iter().enumerate() {
            walk(f, Site::root(i), &mut out);
        }
        out
    }

    /// Labelled atom occurrences in formula order, left to right.
    pub fn occurrences(&self) -> Vec<AtomOccurrence> {
        let mut next: BTreeMap<&str, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for (site, f) in self.subformula_sites() {
            if let Formula::Atom(a) = f {
                let label = next.entry(a.as_str()).or_insert(0);
                *label += 1;
                out.push(AtomOccurrence {
                    atom: a.clone(),
                    label: *label,
                    site,
                });
            }
        }
        out
    }

    /// Total number of atom occurrences.
    pub fn occurrence_count(&self) -> usize {
        self.formulas.iter().map(Formula::leaf_count).sum()
    }

    pub fn count_occurrences(&self, atom: &str) -> usize {
        self.formulas.iter().map(|f| f.count_occurrences(atom)).sum()
    }

    /// The knowledge base every encoder works on: connectives reduced to
    /// `!`, `&&`, `||` and constants folded away below formula roots.
    pub fn prepared(&self) -> KnowledgeBase {
        KnowledgeBase::new(
            self.formulas
                .iter()
                .map(|f| fold_constants(&reduce_connectives(f)))
                .collect(),
        )
    }

    /// Whether some formula folds to `-`.
    pub fn has_contradiction_constant(&self) -> bool {
        self.formulas
            .iter()
            .any(|f| fold_constants(f) == Formula::Bottom)
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for formula in &self.formulas {
            writeln!(f, "{formula}")?;
        }
        Ok(())
    }
}

impl FromIterator<Formula> for KnowledgeBase {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        KnowledgeBase::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a KnowledgeBase {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.formulas.iter()
    }
}

/// A two-valued interpretation over a declared signature.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation {
    values: BTreeMap<String, bool>,
}

impl Interpretation {
    pub fn new(values: BTreeMap<String, bool>) -> Self {
        Interpretation { values }
    }

    /// Bit `i` of `bits` is the value of `signature[i]`.
    pub fn from_bits(signature: &[String], bits: u64) -> Self {
        Interpretation {
            values: signature
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), bits >> i & 1 == 1))
                .collect(),
        }
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.values.get(atom).copied()
    }

    pub fn set(&mut self, atom: impl Into<String>, value: bool) {
        self.values.insert(atom.into(), value);
    }

    pub fn signature(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Atoms mapped to true.
    pub fn true_atoms(&self) -> Vec<&str> {
        self.iter().filter(|(_, v)| *v).map(|(a, _)| a).collect()
    }
}

/// Classical truth value of `f` under `w`.
pub fn eval2(f: &Formula, w: &Interpretation) -> Result<bool> {
    Ok(match f {
        Formula::Atom(a) => w.get(a).ok_or_else(|| Error::UndeclaredAtom(a.clone()))?,
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(a) => !eval2(a, w)?,
        Formula::And(a, b) => eval2(a, w)? && eval2(b, w)?,
        Formula::Or(a, b) => eval2(a, w)? || eval2(b, w)?,
        Formula::Implies(a, b) => !eval2(a, w)? || eval2(b, w)?,
        Formula::Iff(a, b) => eval2(a, w)? == eval2(b, w)?,
    })
}

/// All models of `kb` over its signature.
pub fn enumerate_models(kb: &KnowledgeBase, cap: usize) -> Result<Vec<Interpretation>> {
    let sig = kb.signature();
    if sig.len() > cap.min(63) {
        return Err(Error::CapExceeded {
            what: "signature size",
            cap,
            got: sig.len(),
        });
    }
    let compiled: Vec<IndexedFormula> = kb
        .iter()
        .map(|f| IndexedFormula::compile(f, &sig))
        .collect();
    Ok((0..1u64 << sig.len())
        .filter(|&bits| compiled.iter().all(|f| f.eval_bits(bits)))
        .map(|bits| Interpretation::from_bits(&sig, bits))
        .collect())
}

/// A formula whose atoms are replaced by signature indices, for fast
/// repeated evaluation over bit-packed interpretations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexedFormula {
    Atom(usize),
    Const(bool),
    Not(Box<IndexedFormula>),
    And(Box<IndexedFormula>, Box<IndexedFormula>),
    Or(Box<IndexedFormula>, Box<IndexedFormula>),
    Implies(Box<IndexedFormula>, Box<IndexedFormula>),
    Iff(Box<IndexedFormula>, Box<IndexedFormula>),
}

impl IndexedFormula {
    /// Compile `f` against `signature`, which must contain all its atoms.
    ///
    /// # Panics
    /// If an atom of `f` is missing from `signature`.
    pub fn compile(f: &Formula, signature: &[String]) -> Self {
        let b = |x: &Formula| Box::new(IndexedFormula::compile(x, signature));
        match f {
            Formula::Atom(a) => IndexedFormula::Atom(
                signature
                    .iter()
                    .position(|s| s == a)
                    .unwrap_or_else(|| panic!("atom `{a}` missing from signature")),
            ),
            Formula::Top => IndexedFormula::Const(true),
            Formula::Bottom => IndexedFormula::Const(false),
            Formula::Not(a) => IndexedFormula::Not(b(a)),
            Formula::And(x, y) => IndexedFormula::And(b(x), b(y)),
            Formula::Or(x, y) => IndexedFormula::Or(b(x), b(y)),
            Formula::Implies(x, y) => IndexedFormula::Implies(b(x), b(y)),
            Formula::Iff(x, y) => IndexedFormula::Iff(b(x), b(y)),
        }
    }

    /// Classical value where bit `i` of `bits` is the value of atom `i`.
    pub fn eval_bits(&self, bits: u64) -> bool {
        match self {
            IndexedFormula::Atom(i) => bits >> i & 1 == 1,
            IndexedFormula::Const(c) => *c,
            IndexedFormula::Not(a) => !a.eval_bits(bits),
            IndexedFormula::And(a, b) => a.eval_bits(bits) && b.eval_bits(bits),
            IndexedFormula::Or(a, b) => a.eval_bits(bits) || b.eval_bits(bits),
            IndexedFormula::Implies(a, b) => !a.eval_bits(bits) || b.eval_bits(bits),
            IndexedFormula::Iff(a, b) => a.eval_bits(bits) == b.eval_bits(bits),
        }
    }

    /// Whether some assignment over `n` atoms satisfies the formula.
    pub fn satisfiable(&self, n: usize) -> bool {
        (0..1u64 << n).any(|bits| self.eval_bits(bits))
    }
}
