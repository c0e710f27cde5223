//! Brute-force computation of the six measures straight from their
//! definitions, plus the naive baseline procedures in [`naive`].
//!
//! Oracles are exponential by design and guard their inputs with caps.
//! All of them work on [`KnowledgeBase::prepared`], the same input every
//! other method sees.

pub mod naive;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kb::{Formula, IndexedFormula, Interpretation, KnowledgeBase, Tv3, AtomOccurrence};
use crate::measure::{InconsistencyValue, Measure};

/// Signature cap of [`contension_oracle`].
pub const CONTENSION_ATOM_CAP: usize = 12;
/// Occurrence cap of [`forgetting_oracle`].
pub const FORGETTING_OCC_CAP: usize = 12;
/// Signature cap of [`hs_oracle`].
pub const HS_ATOM_CAP: usize = 10;
/// Formula cap of [`hs_oracle`].
pub const HS_FORMULA_CAP: usize = 8;
/// Signature cap of [`distance_oracle`].
pub const DISTANCE_ATOM_CAP: usize = 10;

fn cap(what: &'static str, cap: usize, got: usize) -> Result<()> {
    if got > cap {
        Err(Error::CapExceeded { what, cap, got })
    } else {
        Ok(())
    }
}

/// Negation in the three-valued semantics.
pub fn not3(a: Tv3) -> Tv3 {
    match a {
        Tv3::T => Tv3::F,
        Tv3::F => Tv3::T,
        Tv3::B => Tv3::B,
    }
}

fn rank(a: Tv3) -> u8 {
    match a {
        Tv3::F => 0,
        Tv3::B => 1,
        Tv3::T => 2,
    }
}

/// Conjunction: minimum under f < b < t.
pub fn and3(a: Tv3, b: Tv3) -> Tv3 {
    if rank(a) <= rank(b) {
        a
    } else {
        b
    }
}

/// Disjunction: maximum under f < b < t.
pub fn or3(a: Tv3, b: Tv3) -> Tv3 {
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

/// An assignment of t, f or b to each atom of a signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThreeValuedInterpretation {
    values: BTreeMap<String, Tv3>,
}

impl ThreeValuedInterpretation {
    pub fn new(values: BTreeMap<String, Tv3>) -> Self {
        ThreeValuedInterpretation { values }
    }

    pub fn get(&self, atom: &str) -> Option<Tv3> {
        self.values.get(atom).copied()
    }

    pub fn set(&mut self, atom: impl Into<String>, v: Tv3) {
        self.values.insert(atom.into(), v);
    }

    /// Atoms mapped to b.
    pub fn conflictbase(&self) -> Vec<&str> {
        self.values
            .iter()
            .filter(|(_, v)| **v == Tv3::B)
            .map(|(a, _)| a.as_str())
            .collect()
    }
}

/// Three-valued value of a formula over `!`, `&&`, `||`.
pub fn eval3(f: &Formula, w: &ThreeValuedInterpretation) -> Result<Tv3> {
    Ok(match f {
        Formula::Atom(a) => w.get(a).ok_or_else(|| Error::UndeclaredAtom(a.clone()))?,
        Formula::Top => Tv3::T,
        Formula::Bottom => Tv3::F,
        Formula::Not(a) => not3(eval3(a, w)?),
        Formula::And(a, b) => and3(eval3(a, w)?, eval3(b, w)?),
        Formula::Or(a, b) => or3(eval3(a, w)?, eval3(b, w)?),
        Formula::Implies(..) => return Err(Error::Unreduced("=>")),
        Formula::Iff(..) => return Err(Error::Unreduced("<=>")),
    })
}

fn eval3_ix(f: &IndexedFormula, vals: &[Tv3]) -> Tv3 {
    match f {
        IndexedFormula::Atom(i) => vals[*i],
        IndexedFormula::Const(c) => {
            if *c {
                Tv3::T
            } else {
                Tv3::F
            }
        }
        IndexedFormula::Not(a) => not3(eval3_ix(a, vals)),
        IndexedFormula::And(a, b) => and3(eval3_ix(a, vals), eval3_ix(b, vals)),
        IndexedFormula::Or(a, b) => or3(eval3_ix(a, vals), eval3_ix(b, vals)),
        IndexedFormula::Implies(..) | IndexedFormula::Iff(..) => {
            unreachable!("prepared formulas are reduced")
        }
    }
}

fn compile(kb: &KnowledgeBase, sig: &[String]) -> Vec<IndexedFormula> {
    kb.iter().map(|f| IndexedFormula::compile(f, sig)).collect()
}

/// Minimum number of b atoms over all three-valued models.
pub fn contension_oracle(kb: &KnowledgeBase) -> Result<InconsistencyValue> {
    let kb = kb.prepared();
    let sig = kb.signature();
    cap("signature size", CONTENSION_ATOM_CAP, sig.len())?;
    let formulas = compile(&kb, &sig);
    let n = sig.len();
    let mut vals = vec![Tv3::T; n];
    let mut best: Option<u64> = None;
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        for v in vals.iter_mut() {
            *v = Tv3::ALL[c % 3];
            c /= 3;
        }
        if formulas.iter().all(|f| eval3_ix(f, &vals) != Tv3::F) {
            let b = vals.iter().filter(|v| **v == Tv3::B).count() as u64;
            best = Some(best.map_or(b, |x| x.min(b)));
        }
    }
    best.map(InconsistencyValue::Finite)
        .ok_or(Error::Undefined(Measure::Contension))
}

/// How an occurrence is forgotten.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForgetMode {
    Top,
    Bottom,
    Both,
}

/// Forget the occurrence `occ` inside `f`; `occ.site.path` is relative to `f`.
///
/// `Both` yields `(f | occ -> +) || (f | occ -> -)`. No simplification.
pub fn forget(f: &Formula, occ: &AtomOccurrence, mode: ForgetMode) -> Result<Formula> {
    let path = &occ.site.path;
    match f.at(path) {
        Some(Formula::Atom(a)) if *a == occ.atom => {}
        _ => return Err(Error::InvalidSite(path.clone())),
    }
    let sub = |c: &Formula| f.replace_at(path, c).expect("site checked above");
    Ok(match mode {
        ForgetMode::Top => sub(&Formula::Top),
        ForgetMode::Bottom => sub(&Formula::Bottom),
        ForgetMode::Both => Formula::or(sub(&Formula::Top), sub(&Formula::Bottom)),
    })
}

fn substitute_atom(f: &Formula, name: &str, with: &Formula) -> Formula {
    match f {
        Formula::Atom(a) if a == name => with.clone(),
        Formula::Atom(_) | Formula::Top | Formula::Bottom => f.clone(),
        Formula::Not(a) => Formula::not(substitute_atom(a, name, with)),
        Formula::And(a, b) => {
            Formula::and(substitute_atom(a, name, with), substitute_atom(b, name, with))
        }
        Formula::Or(a, b) => {
            Formula::or(substitute_atom(a, name, with), substitute_atom(b, name, with))
        }
        Formula::Implies(a, b) => {
            Formula::implies(substitute_atom(a, name, with), substitute_atom(b, name, with))
        }
        Formula::Iff(a, b) => {
            Formula::iff(substitute_atom(a, name, with), substitute_atom(b, name, with))
        }
    }
}

// Placeholder atom names cannot be produced by the parser, so they never
// collide with knowledge-base atoms.
fn placeholder(i: usize) -> String {
    format!("#occ{i}")
}

/// Smallest number of occurrences whose forgetting makes the knowledge
/// base satisfiable.
///
/// Each chosen occurrence is tagged, then forgotten by the disjunction of
/// its two substitutions, one occurrence after another.
pub fn forgetting_oracle(kb: &KnowledgeBase) -> Result<InconsistencyValue> {
    let kb = kb.prepared();
    if kb.has_contradiction_constant() {
        return Err(Error::Undefined(Measure::Forgetting));
    }
    let occs = kb.occurrences();
    cap("occurrence count", FORGETTING_OCC_CAP, occs.len())?;
    let sig = kb.signature();
    for k in 0..=occs.len() {
        for chosen in combinations(occs.len(), k) {
            let mut tagged: Vec<Formula> = kb.formulas().to_vec();
            for &i in &chosen {
                let o = &occs[i];
                let f = &mut tagged[o.site.formula];
                *f = f
                    .replace_at(&o.site.path, &Formula::Atom(placeholder(i)))
                    .expect("occurrence sites are valid");
            }
            for &i in &chosen {
                let name = placeholder(i);
                for f in tagged.iter_mut() {
                    if f.count_occurrences(&name) > 0 {
                        *f = Formula::or(
                            substitute_atom(f, &name, &Formula::Top),
                            substitute_atom(f, &name, &Formula::Bottom),
                        );
                    }
                }
            }
            let compiled: Vec<IndexedFormula> =
                tagged.iter().map(|f| IndexedFormula::compile(f, &sig)).collect();
            if (0..1u64 << sig.len()).any(|w| compiled.iter().all(|f| f.eval_bits(w))) {
                return Ok(InconsistencyValue::Finite(k as u64));
            }
        }
    }
    Err(Error::Undefined(Measure::Forgetting))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = {
            let mut c = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        cur = next;
        Some(out)
    })
}

/// For each interpretation over `sig`, the bitmask of formulas it satisfies.
fn satisfied_sets(formulas: &[IndexedFormula], n_atoms: usize) -> Vec<u32> {
    (0..1u64 << n_atoms)
        .map(|w| {
            formulas
                .iter()
                .enumerate()
                .filter(|(_, f)| f.eval_bits(w))
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect()
}

/// Smallest hitting set of interpretations, minus one.
pub fn hs_oracle(kb: &KnowledgeBase) -> Result<InconsistencyValue> {
    let kb = kb.prepared();
    if kb.is_empty() {
        return Ok(InconsistencyValue::Finite(0));
    }
    let sig = kb.signature();
    cap("signature size", HS_ATOM_CAP, sig.len())?;
    cap("formula count", HS_FORMULA_CAP, kb.len())?;
    let sets = satisfied_sets(&compile(&kb, &sig), sig.len());
    let full = (1u32 << kb.len()) - 1;
    // cover[m]: fewest interpretations jointly satisfying every formula in m
    let mut cover = vec![u32::MAX; full as usize + 1];
    cover[0] = 0;
    for m in 1..=full {
        let low = m & m.wrapping_neg();
        let mut best = u32::MAX;
        for &s in &sets {
            if s & low != 0 {
                let rest = cover[(m & !s) as usize];
                if rest != u32::MAX {
                    best = best.min(rest + 1);
                }
            }
        }
        cover[m as usize] = best;
    }
    Ok(match cover[full as usize] {
        u32::MAX => InconsistencyValue::Infinity,
        c => InconsistencyValue::Finite(c as u64 - 1),
    })
}

/// Dalal distance: number of atoms on which two interpretations differ.
pub fn dalal(a: &Interpretation, b: &Interpretation) -> Result<u64> {
    if !a.signature().eq(b.signature()) {
        return Err(Error::SignatureMismatch);
    }
    Ok(a.iter().zip(b.iter()).filter(|(x, y)| x.1 != y.1).count() as u64)
}

/// Distance from a set of interpretations to `w`; `None` for the empty set.
pub fn dalal_to_set(set: &[Interpretation], w: &Interpretation) -> Result<Option<u64>> {
    let mut best = None;
    for m in set {
        let d = dalal(m, w)?;
        best = Some(best.map_or(d, |b: u64| b.min(d)));
    }
    Ok(best)
}

/// Aggregation used by the three distance-based measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceKind {
    Max,
    Sum,
    Hit,
}

/// Sweep all interpretations and minimise the aggregated distances to the
/// model sets of the formulas.
pub fn distance_oracle(kb: &KnowledgeBase, kind: DistanceKind) -> Result<InconsistencyValue> {
    let kb = kb.prepared();
    let sig = kb.signature();
    cap("signature size", DISTANCE_ATOM_CAP, sig.len())?;
    let formulas = compile(&kb, &sig);
    let worlds = 1u64 << sig.len();
    let models: Vec<Vec<u64>> = formulas
        .iter()
        .map(|f| (0..worlds).filter(|&w| f.eval_bits(w)).collect())
        .collect();
    let mut best = InconsistencyValue::Infinity;
    for w in 0..worlds {
        let mut dists = models
            .iter()
            .map(|ms| ms.iter().map(|m| (m ^ w).count_ones() as u64).min());
        let value = match kind {
            DistanceKind::Max => dists
                .map(|d| d.map(InconsistencyValue::Finite).unwrap_or(InconsistencyValue::Infinity))
                .max()
                .unwrap_or(InconsistencyValue::Finite(0)),
            DistanceKind::Sum => dists
                .try_fold(0u64, |acc, d| d.map(|d| acc + d))
                .map_or(InconsistencyValue::Infinity, InconsistencyValue::Finite),
            DistanceKind::Hit => {
                InconsistencyValue::Finite(dists.filter(|d| *d != Some(0)).count() as u64)
            }
        };
        best = best.min(value);
    }
    Ok(best)
}

/// Ground-truth value of `measure` on `kb`.
pub fn oracle(measure: Measure, kb: &KnowledgeBase) -> Result<InconsistencyValue> {
    match measure {
        Measure::Contension => contension_oracle(kb),
        Measure::Forgetting => forgetting_oracle(kb),
        Measure::HittingSet => hs_oracle(kb),
        Measure::MaxDistance => distance_oracle(kb, DistanceKind::Max),
        Measure::SumDistance => distance_oracle(kb, DistanceKind::Sum),
        Measure::HitDistance => distance_oracle(kb, DistanceKind::Hit),
    }
}

/// Forgetting value by sweeping interpretations instead of occurrence sets.
///
/// Under a fixed interpretation the formulas are independent, and the
/// cheapest way to make one true follows from a recursion over its syntax
/// tree. Used to cross-check [`forgetting_oracle`] beyond its cap.
pub fn forgetting_by_worlds(kb: &KnowledgeBase) -> Result<InconsistencyValue> {
    fn cost(f: &IndexedFormula, w: u64) -> Option<(u64, u64)> {
        // (cost to make f true, cost to make f false)
        Some(match f {
            IndexedFormula::Atom(i) => {
                if w >> i & 1 == 1 {
                    (0, 1)
                } else {
                    (1, 0)
                }
            }
            IndexedFormula::Const(true) => (0, u64::MAX),
            IndexedFormula::Const(false) => (u64::MAX, 0),
            IndexedFormula::Not(a) => {
                let (t, f) = cost(a, w)?;
                (f, t)
            }
            IndexedFormula::And(a, b) => {
                let (ta, fa) = cost(a, w)?;
                let (tb, fb) = cost(b, w)?;
                (ta.saturating_add(tb), fa.min(fb))
            }
            IndexedFormula::Or(a, b) => {
                let (ta, fa) = cost(a, w)?;
                let (tb, fb) = cost(b, w)?;
                (ta.min(tb), fa.saturating_add(fb))
            }
            IndexedFormula::Implies(..) | IndexedFormula::Iff(..) => return None,
        })
    }
    let kb = kb.prepared();
    let sig = kb.signature();
    cap("signature size", DISTANCE_ATOM_CAP, sig.len())?;
    let formulas = compile(&kb, &sig);
    let mut best = u64::MAX;
    for w in 0..1u64 << sig.len() {
        let mut total = 0u64;
        for f in &formulas {
            let (t, _) = cost(f, w).expect("prepared formulas are reduced");
            total = total.saturating_add(t);
        }
        best = best.min(total);
    }
    if best == u64::MAX {
        Err(Error::Undefined(Measure::Forgetting))
    } else {
        Ok(InconsistencyValue::Finite(best))
    }
}
