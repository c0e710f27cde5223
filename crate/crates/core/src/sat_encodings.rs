//! Decision encodings "is the measure at most `u`?" as CNF, one per measure.
//!
//! Every encoder works on the prepared knowledge base and records which
//! group of constraints each clause came from.

use std::ops::Range;

use crate::cardinality::CardinalityMethod;
use crate::kb::{CnfInstance, Expr, Formula, KnowledgeBase, Lit, Site, Tseitin, Tv3, VarName};
use crate::measure::Measure;
use crate::solver::MaxSatInstance;

/// A contiguous run of clauses produced by one constraint group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseGroup {
    pub tag: &'static str,
    pub range: Range<usize>,
}

/// CNF for one bound together with clause provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatEncoding {
    pub measure: Measure,
    pub bound: u64,
    pub cnf: CnfInstance,
    pub provenance: Vec<ClauseGroup>,
}

impl SatEncoding {
    /// Number of named (non-auxiliary) variables.
    pub fn base_signature(&self) -> usize {
        self.cnf.var_map.base_count()
    }

    /// Clauses whose group carries `tag`.
    pub fn clauses_tagged(&self, tag: &str) -> Vec<&Vec<Lit>> {
        self.provenance
            .iter()
            .filter(|g| g.tag == tag)
            .flat_map(|g| &self.cnf.clauses[g.range.clone()])
            .collect()
    }

    /// Distinct tags in order of first appearance.
    pub fn tags(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for g in &self.provenance {
            if !out.contains(&g.tag) {
                out.push(g.tag);
            }
        }
        out
    }

    /// Model value of a named variable, `None` if the name is unused.
    pub fn value_of(&self, model: &[bool], name: &VarName) -> Option<bool> {
        self.cnf
            .var_map
            .get(name)
            .map(|v| model[v as usize])
    }
}

#[derive(Default)]
struct Builder {
    cnf: CnfInstance,
    provenance: Vec<ClauseGroup>,
}

impl Builder {
    fn var(&mut self, name: VarName) -> Lit {
        self.cnf.var_map.var(name) as Lit
    }

    fn group(&mut self, tag: &'static str, f: impl FnOnce(&mut CnfInstance)) {
        let start = self.cnf.clauses.len();
        f(&mut self.cnf);
        let end = self.cnf.clauses.len();
        if start == end {
            return;
        }
        match self.provenance.last_mut() {
            Some(g) if g.tag == tag && g.range.end == start => g.range.end = end,
            _ => self.provenance.push(ClauseGroup {
                tag,
                range: start..end,
            }),
        }
    }

    fn assert(&mut self, tag: &'static str, e: &Expr) {
        self.group(tag, |cnf| Tseitin::new(cnf).assert(e));
    }

    fn equate(&mut self, tag: &'static str, a: Lit, e: &Expr) {
        self.group(tag, |cnf| Tseitin::new(cnf).equate(a, e));
    }

    fn at_most(&mut self, card: CardinalityMethod, k: u64, lits: &[Lit]) {
        let k = usize::try_from(k).unwrap_or(usize::MAX);
        self.group("at-most", |cnf| {
            let cls = card.at_most(k, lits, &mut cnf.var_map);
            cnf.extend(cls);
        });
    }

    fn finish(self, measure: Measure, bound: u64) -> SatEncoding {
        SatEncoding {
            measure,
            bound,
            cnf: self.cnf,
            provenance: self.provenance,
        }
    }
}

fn lit(l: Lit) -> Expr {
    Expr::Lit(l)
}

/// Encoding of `measure <= u` with the sequential counter.
pub fn encode(measure: Measure, kb: &KnowledgeBase, u: u64) -> SatEncoding {
    encode_with(measure, kb, u, CardinalityMethod::default())
}

/// Encoding of `measure <= u`; for the hitting-set measure `u` is the
/// number of blocks.
pub fn encode_with(
    measure: Measure,
    kb: &KnowledgeBase,
    u: u64,
    card: CardinalityMethod,
) -> SatEncoding {
    match measure {
        Measure::Contension => encode_contension(kb, u, card),
        Measure::Forgetting => encode_forgetting(kb, u, card),
        Measure::HittingSet => encode_hs(kb, u),
        Measure::MaxDistance => encode_distance(kb, u, card, false),
        Measure::SumDistance => encode_distance(kb, u, card, true),
        Measure::HitDistance => encode_hit(kb, u, card),
    }
}

// Three-valued semantics of every subformula site, without the bound.
fn contension_core(kb: &KnowledgeBase) -> Builder {
    let mut b = Builder::default();
    let sig = kb.signature();
    for x in &sig {
        let [t, f, bb] = Tv3::ALL.map(|v| b.var(VarName::AtomTri(x.clone(), v)));
        b.group("exactly-one", |cnf| {
            cnf.add_clause([t, f, bb]);
            cnf.add_clause([-t, -f]);
            cnf.add_clause([-t, -bb]);
            cnf.add_clause([-f, -bb]);
        });
    }
    let sites = kb.subformula_sites();
    let val = |b: &mut Builder, s: &Site| Tv3::ALL.map(|v| b.var(VarName::SubVal(s.clone(), v)));
    for (site, f) in &sites {
        let [vt, vf, vb] = val(&mut b, site);
        match f {
            Formula::Atom(x) => {
                for (v, tv) in [(vt, Tv3::T), (vf, Tv3::F), (vb, Tv3::B)] {
                    let a = b.var(VarName::AtomTri(x.clone(), tv));
                    b.equate("atom-value", v, &lit(a));
                }
            }
            Formula::Top | Formula::Bottom => {
                let top = matches!(f, Formula::Top);
                b.group("constant", |cnf| {
                    cnf.add_clause([if top { vt } else { -vt }]);
                    cnf.add_clause([if top { -vf } else { vf }]);
                    cnf.add_clause([-vb]);
                });
            }
            Formula::Not(_) => {
                let [ct, cf, cb] = val(&mut b, &site.child('l'));
                b.equate("negation", vt, &lit(cf));
                b.equate("negation", vf, &lit(ct));
                b.equate("negation", vb, &lit(cb));
            }
            Formula::And(..) | Formula::Or(..) => {
                let [lt, lf, lb] = val(&mut b, &site.child('l'));
                let [rt, rf, rb] = val(&mut b, &site.child('r'));
                let is_and = matches!(f, Formula::And(..));
                let both = |x: Lit, y: Lit| Expr::and([lit(x), lit(y)]);
                // b with the other side b or the neutral value for the connective
                let (nl, nr) = if is_and { (lt, rt) } else { (lf, rf) };
                let mixed = Expr::or([both(lb, rb), both(lb, nr), both(nl, rb)]);
                if is_and {
                    b.equate("conjunction", vt, &both(lt, rt));
                    b.equate("conjunction", vf, &Expr::or([lit(lf), lit(rf)]));
                    b.equate("conjunction", vb, &mixed);
                } else {
                    b.equate("disjunction", vt, &Expr::or([lit(lt), lit(rt)]));
                    b.equate("disjunction", vf, &both(lf, rf));
                    b.equate("disjunction", vb, &mixed);
                }
            }
            Formula::Implies(..) | Formula::Iff(..) => unreachable!("prepared formulas are reduced"),
        }
    }
    for (site, _) in sites.iter().filter(|(s, _)| s.path.is_empty()) {
        let [vt, _, vb] = val(&mut b, site);
        b.group("formula-satisfied", |cnf| cnf.add_clause([vt, vb]));
    }
    b
}

fn conflict_lits(b: &mut Builder, kb: &KnowledgeBase) -> Vec<Lit> {
    kb.signature()
        .into_iter()
        .map(|x| b.var(VarName::AtomTri(x, Tv3::B)))
        .collect()
}

/// At most `u` atoms take the value b in some three-valued model.
pub fn encode_contension(kb: &KnowledgeBase, u: u64, card: CardinalityMethod) -> SatEncoding {
    let kb = kb.prepared();
    let mut b = contension_core(&kb);
    let xb = conflict_lits(&mut b, &kb);
    b.at_most(card, u, &xb);
    b.finish(Measure::Contension, u)
}

/// Three-valued models as hard clauses, each `X_b` false as a soft unit.
pub fn maxsat_contension(kb: &KnowledgeBase) -> MaxSatInstance {
    let kb = kb.prepared();
    let mut b = contension_core(&kb);
    let xb = conflict_lits(&mut b, &kb);
    MaxSatInstance {
        hard: b.cnf,
        soft: xb.into_iter().map(|l| -l).collect(),
    }
}

/// Forgetting at most `u` occurrences makes the knowledge base satisfiable.
pub fn encode_forgetting(kb: &KnowledgeBase, u: u64, card: CardinalityMethod) -> SatEncoding {
    let kb = kb.prepared();
    let mut b = Builder::default();
    let occs = kb.occurrences();
    let mut toggles = Vec::with_capacity(2 * occs.len());
    let mut leaf = std::collections::HashMap::new();
    for o in &occs {
        let x = b.var(VarName::OccVar(o.atom.clone(), o.label));
        let t = b.var(VarName::ForgetTop(o.atom.clone(), o.label));
        let f = b.var(VarName::ForgetBot(o.atom.clone(), o.label));
        toggles.extend([t, f]);
        leaf.insert(o.site.clone(), Expr::and([Expr::or([lit(t), lit(x)]), lit(-f)]));
    }
    fn translate(f: &Formula, site: Site, leaf: &std::collections::HashMap<Site, Expr>) -> Expr {
        match f {
            Formula::Atom(_) => leaf[&site].clone(),
            Formula::Top => Expr::Const(true),
            Formula::Bottom => Expr::Const(false),
            Formula::Not(a) => Expr::not(translate(a, site.child('l'), leaf)),
            Formula::And(x, y) => Expr::and([
                translate(x, site.child('l'), leaf),
                translate(y, site.child('r'), leaf),
            ]),
            Formula::Or(x, y) => Expr::or([
                translate(x, site.child('l'), leaf),
                translate(y, site.child('r'), leaf),
            ]),
            Formula::Implies(..) | Formula::Iff(..) => unreachable!("prepared formulas are reduced"),
        }
    }
    for (i, f) in kb.iter().enumerate() {
        let e = translate(f, Site::root(i), &leaf);
        b.assert("formula", &e);
    }
    for o in &occs {
        let t = b.var(VarName::ForgetTop(o.atom.clone(), o.label));
        let f = b.var(VarName::ForgetBot(o.atom.clone(), o.label));
        b.group("forget-exclusive", |cnf| cnf.add_clause([-t, -f]));
    }
    // unforgotten occurrences of one atom share its value
    for o in occs.iter().filter(|o| o.label > 1) {
        let first = b.var(VarName::OccVar(o.atom.clone(), 1));
        let x = b.var(VarName::OccVar(o.atom.clone(), o.label));
        b.equate("occurrence-link", x, &lit(first));
    }
    b.at_most(card, u, &toggles);
    b.finish(Measure::Forgetting, u)
}

/// The formulas can be split into `blocks` satisfiable groups.
pub fn encode_hs(kb: &KnowledgeBase, blocks: u64) -> SatEncoding {
    let kb = kb.prepared();
    let mut b = Builder::default();
    let sig = kb.signature();
    let blocks = blocks as usize;
    for i in 1..=blocks {
        for x in &sig {
            b.var(VarName::CopyAtom(x.clone(), i));
        }
    }
    for (a, _) in kb.iter().enumerate() {
        for i in 1..=blocks {
            b.var(VarName::Block(a, i));
        }
    }
    for (a, f) in kb.iter().enumerate() {
        for i in 1..=blocks {
            let p = b.var(VarName::Block(a, i));
            let body = Expr::from_formula(f, &mut |x| {
                lit(b.cnf.var_map.var(VarName::CopyAtom(x.to_string(), i)) as Lit)
            });
            b.assert("block-implies", &Expr::or([lit(-p), body]));
        }
    }
    for a in 0..kb.len() {
        let ps: Vec<Lit> = (1..=blocks).map(|i| b.var(VarName::Block(a, i))).collect();
        b.group("block-cover", |cnf| {
            if ps.is_empty() {
                cnf.add_contradiction();
            } else {
                cnf.add_clause(ps);
            }
        });
    }
    b.finish(Measure::HittingSet, blocks as u64)
}

fn encode_distance(kb: &KnowledgeBase, u: u64, card: CardinalityMethod, sum: bool) -> SatEncoding {
    let kb = kb.prepared();
    let mut b = Builder::default();
    let sig = kb.signature();
    for x in &sig {
        b.var(VarName::OptAtom(x.clone()));
    }
    for i in 0..kb.len() {
        for x in &sig {
            b.var(VarName::CopyAtom(x.clone(), i));
            b.var(VarName::Inv(x.clone(), i));
        }
    }
    for (i, f) in kb.iter().enumerate() {
        let e = Expr::from_formula(f, &mut |x| {
            lit(b.cnf.var_map.var(VarName::CopyAtom(x.to_string(), i)) as Lit)
        });
        b.assert("formula-copy", &e);
    }
    let mut all_inv = Vec::new();
    for i in 0..kb.len() {
        let mut inv_i = Vec::with_capacity(sig.len());
        for x in &sig {
            let xi = b.var(VarName::CopyAtom(x.clone(), i));
            let xo = b.var(VarName::OptAtom(x.clone()));
            let inv = b.var(VarName::Inv(x.clone(), i));
            b.group("deviation", |cnf| {
                cnf.add_clause([-xi, xo, inv]);
                cnf.add_clause([xi, -xo, inv]);
            });
            inv_i.push(inv);
        }
        if sum {
            all_inv.extend(inv_i);
        } else {
            b.at_most(card, u, &inv_i);
        }
    }
    if sum {
        b.at_most(card, u, &all_inv);
    }
    b.finish(if sum { Measure::SumDistance } else { Measure::MaxDistance }, u)
}

fn encode_hit(kb: &KnowledgeBase, u: u64, card: CardinalityMethod) -> SatEncoding {
    let kb = kb.prepared();
    let mut b = Builder::default();
    for x in kb.signature() {
        b.var(VarName::Atom(x));
    }
    let hits: Vec<Lit> = (0..kb.len()).map(|i| b.var(VarName::Hit(i))).collect();
    for (i, f) in kb.iter().enumerate() {
        let e = Expr::from_formula(f, &mut |x| {
            lit(b.cnf.var_map.var(VarName::Atom(x.to_string())) as Lit)
        });
        b.assert("formula-or-hit", &Expr::or([e, lit(hits[i])]));
    }
    b.at_most(card, u, &hits);
    b.finish(Measure::HitDistance, u)
}

/// Encoding of `max-distance <= u`.
pub fn encode_max_distance(kb: &KnowledgeBase, u: u64, card: CardinalityMethod) -> SatEncoding {
    encode_distance(kb, u, card, false)
}

/// Encoding of `sum-distance <= u`.
pub fn encode_sum_distance(kb: &KnowledgeBase, u: u64, card: CardinalityMethod) -> SatEncoding {
    encode_distance(kb, u, card, true)
}

/// Encoding of `hit-distance <= u`.
pub fn encode_hit_distance(kb: &KnowledgeBase, u: u64, card: CardinalityMethod) -> SatEncoding {
    encode_hit(kb, u, card)
}
