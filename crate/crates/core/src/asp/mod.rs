//! Answer set programs for the six measures, and a bridge to an external
//! clingo-compatible solver.
//!
//! Constants: atom `x` becomes `a_x` (lowercased, with a numeric suffix if
//! two atoms collide), formula `i` becomes `f_i` and its subformula at path
//! `p` becomes `f_i_p`.

pub mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::kb::{Formula, KnowledgeBase, Site};
use crate::measure::{InconsistencyValue, Measure};
use crate::solver::external::run_until;
use crate::solver::Deadline;

/// Environment variable naming an ASP solver binary.
pub const ASP_SOLVER_ENV: &str = "INCMETER_ASP_SOLVER";

/// What an ASP constant stands for.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    Atom(String),
    Site(Site),
}

/// Instance facts plus the static rules of one measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspProgram {
    pub measure: Measure,
    pub facts: Vec<String>,
    pub static_rules: Vec<String>,
    /// Constant to the atom or formula site it names.
    pub symbols: BTreeMap<String, Symbol>,
}

impl AspProgram {
    /// Facts, then static rules, one per line.
    pub fn text(&self) -> String {
        let mut out = self.facts_text();
        out.push_str(&self.static_text());
        out
    }

    pub fn facts_text(&self) -> String {
        lines(&self.facts)
    }

    pub fn static_text(&self) -> String {
        lines(&self.static_rules)
    }

    /// Constant naming `atom`, if it occurs.
    pub fn atom_constant(&self, atom: &str) -> Option<&str> {
        self.symbols.iter().find_map(|(c, s)| match s {
            Symbol::Atom(a) if a == atom => Some(c.as_str()),
            _ => None,
        })
    }
}

fn lines(rules: &[String]) -> String {
    let mut out = String::new();
    for r in rules {
        out.push_str(r);
        out.push('\n');
    }
    out
}

/// Static rule text of `measure`, as in every emitted program.
pub fn static_text(measure: Measure) -> String {
    let mut out = String::new();
    for r in rules::static_rules(measure) {
        out.push_str(r);
        out.push('\n');
    }
    out
}

fn site_constant(site: &Site) -> String {
    if site.path.is_empty() {
        format!("f_{}", site.formula)
    } else {
        format!("f_{}_{}", site.formula, site.path)
    }
}

fn atom_constants(signature: &[String]) -> BTreeMap<String, String> {
    let mut taken = BTreeSet::new();
    let mut out = BTreeMap::new();
    for a in signature {
        let base = format!("a_{}", a.to_lowercase());
        let mut name = base.clone();
        let mut n = 1;
        while !taken.insert(name.clone()) {
            name = format!("{base}_{n}");
            n += 1;
        }
        out.insert(a.clone(), name);
    }
    out
}

/// The program whose optimal answer sets give `measure` on `kb`.
///
/// `kb` is prepared first; sites in the symbol table refer to the prepared
/// knowledge base.
pub fn emit_asp(measure: Measure, kb: &KnowledgeBase) -> AspProgram {
    use Measure::*;
    let kb = kb.prepared();
    let n = kb.len();
    let atoms = atom_constants(&kb.signature());
    let mut symbols: BTreeMap<String, Symbol> = atoms
        .iter()
        .map(|(a, c)| (c.clone(), Symbol::Atom(a.clone())))
        .collect();

    let indexed = matches!(measure, MaxDistance | SumDistance);
    let per_interpretation = matches!(measure, HittingSet | MaxDistance | SumDistance);

    let mut members = Vec::new();
    let mut atom_facts = Vec::new();
    let mut conj = Vec::new();
    let mut disj = Vec::new();
    let mut neg = Vec::new();
    let mut leaves = Vec::new();
    let mut constants = Vec::new();

    for i in 0..n {
        let c = site_constant(&Site::root(i));
        members.push(if indexed {
            format!("kbMember({c},{i}).")
        } else {
            format!("kbMember({c}).")
        });
    }
    if measure != Forgetting {
        atom_facts.extend(atoms.values().map(|c| format!("atom({c}).")));
    }

    let mut labels: BTreeMap<&str, usize> = BTreeMap::new();
    for (site, f) in kb.subformula_sites() {
        let me = site_constant(&site);
        symbols.insert(me.clone(), Symbol::Site(site.clone()));
        let child = |step| site_constant(&site.child(step));
        match f {
            Formula::And(..) => conj.push(format!("conjunction({me},{},{}).", child('l'), child('r'))),
            Formula::Or(..) => disj.push(format!("disjunction({me},{},{}).", child('l'), child('r'))),
            Formula::Not(_) => neg.push(format!("negation({me},{}).", child('l'))),
            Formula::Atom(a) => {
                let ac = &atoms[a];
                if measure == Forgetting {
                    let l = labels.entry(a.as_str()).or_insert(0);
                    *l += 1;
                    leaves.push(format!("formulaIsAtomOcc({me},{ac},{l})."));
                } else {
                    leaves.push(format!("formulaIsAtom({me},{ac})."));
                }
            }
            Formula::Top | Formula::Bottom => {
                let tv = if *f == Formula::Top { 't' } else { 'f' };
                constants.push(if per_interpretation {
                    format!("truthValueInt({me},I,{tv}) :- interpretation(I).")
                } else {
                    format!("truthValue({me},{tv}).")
                });
            }
            Formula::Implies(..) | Formula::Iff(..) => unreachable!("prepared knowledge base"),
        }
    }

    let mut facts = members;
    facts.extend(atom_facts);
    match measure {
        HittingSet => facts.push(format!("interpretation(1..{n}).")),
        MaxDistance | SumDistance => facts.push(format!("interpretation(0..{n}).")),
        _ => {}
    }
    for group in [conj, disj, neg, leaves, constants] {
        facts.extend(group);
    }
    match measure {
        HittingSet => facts.push(format!("1{{interpretationActive(I) : interpretation(I)}}{n}.")),
        MaxDistance => facts.push(format!(
            "dMax(X) :- X = #max{{Y : d(I,{n},Y), interpretation(I)}}, X >= 0."
        )),
        SumDistance => facts.push(format!(
            "dSum(X) :- X = #sum{{Y,I : d(I,{n},Y), interpretation(I)}}, X >= 0."
        )),
        _ => {}
    }

    AspProgram {
        measure,
        facts,
        static_rules: rules::static_rules(measure).iter().map(|s| s.to_string()).collect(),
        symbols,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnswerStatus {
    Optimal,
    Unsatisfiable,
    Timeout,
}

/// The last answer set a solver reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerSetReport {
    pub status: AnswerStatus,
    pub shown_atoms: BTreeSet<String>,
    /// First priority level of the last `Optimization:` line.
    pub optimization_cost: Option<i64>,
}

impl AnswerSetReport {
    fn timeout() -> Self {
        AnswerSetReport {
            status: AnswerStatus::Timeout,
            shown_atoms: BTreeSet::new(),
            optimization_cost: None,
        }
    }
}

/// Parse clingo-style output.
pub fn parse_answer_output(text: &str) -> Result<AnswerSetReport> {
    let mut answer: Option<BTreeSet<String>> = None;
    let mut cost = None;
    let mut status = None;
    let mut interrupted = false;
    let mut lines = text.lines().map(str::trim);
    while let Some(line) = lines.next() {
        if line.starts_with("Answer:") {
            let model = lines
                .next()
                .ok_or_else(|| Error::MalformedOutput("answer line without a model".into()))?;
            answer = Some(model.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = line.strip_prefix("Optimization:") {
            let first = rest
                .split_whitespace()
                .next()
                .ok_or_else(|| Error::MalformedOutput(format!("empty optimization line `{line}`")))?;
            cost = Some(
                first
                    .parse::<i64>()
                    .map_err(|_| Error::MalformedOutput(format!("bad optimization value `{first}`")))?,
            );
        } else if line == "OPTIMUM FOUND" {
            status = Some(AnswerStatus::Optimal);
        } else if line == "UNSATISFIABLE" {
            status = Some(AnswerStatus::Unsatisfiable);
        } else if line == "SATISFIABLE" {
            // Without an objective every model is optimal; with one it is
            // unproven.
            status = Some(if cost.is_some() {
                AnswerStatus::Timeout
            } else {
                AnswerStatus::Optimal
            });
        } else if line == "UNKNOWN" {
            status = Some(AnswerStatus::Timeout);
        } else if line.starts_with("INTERRUPTED") {
            interrupted = true;
        }
    }
    let mut status = status.ok_or_else(|| Error::MalformedOutput("no result line in solver output".into()))?;
    if interrupted && status == AnswerStatus::Optimal && cost.is_some() {
        status = AnswerStatus::Timeout;
    }
    if status == AnswerStatus::Optimal && answer.is_none() {
        return Err(Error::MalformedOutput("optimum reported without an answer set".into()));
    }
    Ok(AnswerSetReport {
        status,
        shown_atoms: answer.unwrap_or_default(),
        optimization_cost: cost,
    })
}

/// Split a ground atom `p(a,b)` into its predicate and arguments.
fn split_atom(atom: &str) -> (&str, Vec<&str>) {
    match atom.find('(') {
        Some(i) if atom.ends_with(')') => (&atom[..i], atom[i + 1..atom.len() - 1].split(',').collect()),
        _ => (atom, Vec::new()),
    }
}

fn value_in(measure: Measure, shown: &BTreeSet<String>) -> Result<u64> {
    let parsed: Vec<(&str, Vec<&str>)> = shown.iter().map(|a| split_atom(a)).collect();
    let count = |pred: &str, keep: &dyn Fn(&[&str]) -> bool| {
        parsed.iter().filter(|(p, args)| *p == pred && keep(args)).count() as u64
    };
    let argument = |pred: &str| -> Result<u64> {
        parsed
            .iter()
            .find(|(p, args)| *p == pred && args.len() == 1)
            .and_then(|(_, args)| args[0].parse().ok())
            .ok_or_else(|| Error::MalformedOutput(format!("answer set has no {pred}/1 atom")))
    };
    Ok(match measure {
        Measure::Contension => {
            let atoms: BTreeSet<&str> = parsed
                .iter()
                .filter(|(p, args)| *p == "atom" && args.len() == 1)
                .map(|(_, args)| args[0])
                .collect();
            count("truthValue", &|a| a.len() == 2 && a[1] == "b" && atoms.contains(a[0]))
        }
        Measure::Forgetting => count("atomOccForgotten", &|a| a.len() == 2),
        Measure::HittingSet => count("interpretationActive", &|a| a.len() == 1)
            .checked_sub(1)
            .ok_or_else(|| Error::MalformedOutput("answer set activates no interpretation".into()))?,
        Measure::MaxDistance => argument("dMax")?,
        Measure::SumDistance => argument("dSum")?,
        Measure::HitDistance => count("truthValueKbMember", &|a| a.len() == 2 && a[1] == "f"),
    })
}

/// Read the measure value off an optimal answer set.
///
/// # Errors
/// Unsatisfiability where the measure cannot be infinite means the program
/// was wrong and yields [`Error::Backend`]; a timeout yields
/// [`Error::Timeout`] carrying the best value seen as upper bound.
pub fn extract_value(measure: Measure, report: &AnswerSetReport) -> Result<InconsistencyValue> {
    match report.status {
        AnswerStatus::Optimal => value_in(measure, &report.shown_atoms).map(InconsistencyValue::Finite),
        AnswerStatus::Unsatisfiable if measure.infinity_possible() => Ok(InconsistencyValue::Infinity),
        AnswerStatus::Unsatisfiable => Err(Error::Backend(format!(
            "the {measure} program has no answer set"
        ))),
        AnswerStatus::Timeout => Err(Error::Timeout {
            elapsed: Duration::ZERO,
            lower: 0,
            upper: if report.shown_atoms.is_empty() {
                None
            } else {
                value_in(measure, &report.shown_atoms).ok()
            },
        }),
    }
}

/// An external ASP solver invoked as `path args... program.lp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspSolver {
    pub path: PathBuf,
    pub args: Vec<String>,
}

impl AspSolver {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        AspSolver {
            path: path.into(),
            args: vec!["--quiet=1".into()],
        }
    }

    /// `explicit`, else the binary named by [`ASP_SOLVER_ENV`].
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Ok(AspSolver::new(p));
        }
        match std::env::var_os(ASP_SOLVER_ENV) {
            Some(p) if !p.is_empty() => Ok(AspSolver::new(p)),
            _ => Err(Error::BackendUnavailable(format!(
                "no ASP solver configured; set {ASP_SOLVER_ENV}"
            ))),
        }
    }

    /// Run the solver on `program` until `deadline`.
    pub fn run(&self, program: &AspProgram, deadline: &Deadline) -> Result<AnswerSetReport> {
        let mut file = tempfile::Builder::new().suffix(".lp").tempfile()?;
        file.write_all(program.text().as_bytes())?;
        file.flush()?;
        let mut cmd = Command::new(&self.path);
        cmd.args(&self.args).arg(file.path());
        let Some(out) = run_until(&mut cmd, deadline)? else {
            return Ok(AnswerSetReport::timeout());
        };
        parse_answer_output(&out.stdout).map_err(|e| {
            let err = out.stderr.trim();
            if err.is_empty() {
                e
            } else {
                let mut msg = String::new();
                let _ = write!(msg, "{} exited with {}: {err}", self.path.display(), out.status);
                Error::Backend(msg)
            }
        })
    }

    /// Compute `measure` from `program`.
    pub fn solve(&self, program: &AspProgram, measure: Measure, deadline: &Deadline) -> Result<InconsistencyValue> {
        let report = self.run(program, deadline)?;
        extract_value(measure, &report).map_err(|e| match e {
            Error::Timeout { lower, upper, .. } => Error::Timeout {
                elapsed: deadline.elapsed(),
                lower,
                upper,
            },
            e => e,
        })
    }
}

/// Run `solver` on `program`.
pub fn solve_asp(program: &AspProgram, solver: &AspSolver, deadline: &Deadline) -> Result<AnswerSetReport> {
    solver.run(program, deadline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_kb;

    fn k7() -> KnowledgeBase {
        parse_kb("x && y\nx || y\n!x").unwrap()
    }

    fn report(atoms: &[&str]) -> AnswerSetReport {
        AnswerSetReport {
            status: AnswerStatus::Optimal,
            shown_atoms: atoms.iter().map(|s| s.to_string()).collect(),
            optimization_cost: Some(1),
        }
    }

    #[test]
    fn contension_facts_for_k7() {
        let p = emit_asp(Measure::Contension, &k7());
        assert_eq!(
            p.facts,
            [
                "kbMember(f_0).",
                "kbMember(f_1).",
                "kbMember(f_2).",
                "atom(a_x).",
                "atom(a_y).",
                "conjunction(f_0,f_0_l,f_0_r).",
                "disjunction(f_1,f_1_l,f_1_r).",
                "negation(f_2,f_2_l).",
                "formulaIsAtom(f_0_l,a_x).",
                "formulaIsAtom(f_0_r,a_y).",
                "formulaIsAtom(f_1_l,a_x).",
                "formulaIsAtom(f_1_r,a_y).",
                "formulaIsAtom(f_2_l,a_x).",
            ]
        );
    }

    #[test]
    fn parameterized_facts() {
        let hs = emit_asp(Measure::HittingSet, &k7()).text();
        assert!(hs.contains("interpretation(1..3).\n"));
        assert!(hs.contains("1{interpretationActive(I) : interpretation(I)}3.\n"));
        let dmax = emit_asp(Measure::MaxDistance, &k7()).text();
        assert!(dmax.contains("interpretation(0..3).\n"));
        assert!(dmax.contains("kbMember(f_2,2).\n"));
        assert!(dmax.contains("dMax(X) :- X = #max{Y : d(I,3,Y), interpretation(I)}, X >= 0.\n"));
        let f = emit_asp(Measure::Forgetting, &k7());
        assert!(f.facts.contains(&"formulaIsAtomOcc(f_2_l,a_x,3).".to_string()));
        assert!(!f.text().contains("atom(a_x)."));
    }

    #[test]
    fn constants_are_injective_and_well_formed() {
        let kb = parse_kb("X && x\n!(x_1 || X)\nx_1 => +").unwrap();
        let p = emit_asp(Measure::Contension, &kb);
        for c in p.symbols.keys() {
            let mut chars = c.chars();
            assert!(chars.next().unwrap().is_ascii_lowercase());
            assert!(chars.all(|ch| ch.is_ascii_alphanumeric() || ch == '_'));
        }
        let atoms: BTreeSet<_> = ["X", "x", "x_1"].iter().map(|a| p.atom_constant(a).unwrap()).collect();
        assert_eq!(atoms.len(), 3);
    }

    #[test]
    fn constant_roots() {
        let kb = parse_kb("x && !x\n+").unwrap();
        assert!(emit_asp(Measure::Contension, &kb).facts.contains(&"truthValue(f_1,t).".to_string()));
        assert!(emit_asp(Measure::HittingSet, &kb)
            .facts
            .contains(&"truthValueInt(f_1,I,t) :- interpretation(I).".to_string()));
    }

    #[test]
    fn values_from_reports() {
        let r = report(&["atom(a_x)", "atom(a_y)", "truthValue(a_y,b)", "truthValue(f_0,b)"]);
        assert_eq!(extract_value(Measure::Contension, &r).unwrap(), 1u64.into());
        let r = report(&["interpretationActive(1)", "interpretationActive(2)"]);
        assert_eq!(extract_value(Measure::HittingSet, &r).unwrap(), 1u64.into());
        let r = report(&["dSum(1)", "d(0,3,1)"]);
        assert_eq!(extract_value(Measure::SumDistance, &r).unwrap(), 1u64.into());
        let r = report(&["truthValueKbMember(f_2,f)", "truthValueKbMember(f_0,t)"]);
        assert_eq!(extract_value(Measure::HitDistance, &r).unwrap(), 1u64.into());
        let r = report(&["atomOccForgotten(a_x,2)"]);
        assert_eq!(extract_value(Measure::Forgetting, &r).unwrap(), 1u64.into());
    }

    #[test]
    fn unsatisfiable_reports() {
        let r = AnswerSetReport {
            status: AnswerStatus::Unsatisfiable,
            shown_atoms: BTreeSet::new(),
            optimization_cost: None,
        };
        assert_eq!(extract_value(Measure::HittingSet, &r).unwrap(), InconsistencyValue::Infinity);
        assert!(matches!(extract_value(Measure::Contension, &r), Err(Error::Backend(_))));
    }

    #[test]
    fn parse_clingo_output() {
        let out = "clingo version 5.8.2\nReading from p.lp\nSolving...\nAnswer: 2\natom(a_x) truthValue(a_x,b)\nOptimization: 1\nOPTIMUM FOUND\n\nModels       : 2\n";
        let r = parse_answer_output(out).unwrap();
        assert_eq!(r.status, AnswerStatus::Optimal);
        assert_eq!(r.optimization_cost, Some(1));
        assert!(r.shown_atoms.contains("truthValue(a_x,b)"));
        let r = parse_answer_output("Solving...\nUNSATISFIABLE\n").unwrap();
        assert_eq!(r.status, AnswerStatus::Unsatisfiable);
        let r = parse_answer_output("Answer: 1\ndMax(2)\nOptimization: 2\nSATISFIABLE\nINTERRUPTED  : 1\n").unwrap();
        assert_eq!(r.status, AnswerStatus::Timeout);
        assert!(matches!(
            extract_value(Measure::MaxDistance, &r),
            Err(Error::Timeout { upper: Some(2), .. })
        ));
        assert!(parse_answer_output("garbage").is_err());
    }

    #[test]
    fn missing_backend_is_reported() {
        let s = AspSolver::new("/nonexistent/clingo");
        let p = emit_asp(Measure::Contension, &k7());
        assert!(matches!(s.run(&p, &Deadline::none()), Err(Error::BackendUnavailable(_))));
    }
}
