use std::collections::BTreeSet;
use std::path::PathBuf;

use incmeter_core::asp::{Symbol, ASP_SOLVER_ENV};
use incmeter_core::bench::generate_corpus;
use incmeter_core::{
    emit_asp, oracle, parse_kb, AnswerStatus, AspSolver, Deadline, Formula, InconsistencyValue, Measure, SrsParams,
};

fn solver() -> Option<AspSolver> {
    match std::env::var_os(ASP_SOLVER_ENV) {
        Some(p) if !p.is_empty() => Some(AspSolver::new(PathBuf::from(p))),
        _ => {
            eprintln!("{ASP_SOLVER_ENV} not set; skipping live ASP checks");
            None
        }
    }
}

#[test]
fn symbol_table_names_every_atom_and_site() {
    let kb = parse_kb("X && y\nx || !y\n(x => Y) <=> -\n").unwrap();
    let prepared = kb.prepared();
    for m in Measure::ALL {
        let p = emit_asp(m, &kb);
        let atoms: BTreeSet<String> = p
            .symbols
            .values()
            .filter_map(|s| match s {
                Symbol::Atom(a) => Some(a.clone()),
                Symbol::Site(_) => None,
            })
            .collect();
        assert_eq!(atoms, prepared.signature().into_iter().collect());
        for (constant, s) in &p.symbols {
            assert!(constant.chars().next().unwrap().is_ascii_lowercase(), "{constant}");
            if let Symbol::Site(site) = s {
                assert!(prepared.formulas()[site.formula].at(&site.path).is_some(), "{constant}");
            }
        }
        let x = p.atom_constant("x").unwrap();
        let upper = p.atom_constant("X").unwrap();
        assert_ne!(x, upper);
        assert_eq!(p.symbols[x], Symbol::Atom("x".into()));
    }
}

#[test]
fn program_text_is_deterministic() {
    let kb = parse_kb("a && b\n!a || c\n!c\n").unwrap();
    for m in Measure::ALL {
        assert_eq!(emit_asp(m, &kb).text(), emit_asp(m, &kb.clone()).text());
    }
}

#[test]
fn contension_answer_set_has_one_both_atom() {
    let Some(solver) = solver() else { return };
    let kb = parse_kb("x && y\n!y\n").unwrap();
    let program = emit_asp(Measure::Contension, &kb);
    let report = solver.run(&program, &Deadline::none()).unwrap();
    assert_eq!(report.status, AnswerStatus::Optimal);
    let y = program.atom_constant("y").unwrap();
    let both: Vec<_> = report
        .shown_atoms
        .iter()
        .filter(|a| a.starts_with("truthValue(a_") && a.ends_with(",b)"))
        .collect();
    assert_eq!(both, vec![&format!("truthValue({y},b)")]);
}

#[test]
fn hitting_set_of_a_contradiction_is_unsatisfiable() {
    let Some(solver) = solver() else { return };
    let kb = parse_kb("x && !x\ny\nz\n").unwrap();
    let program = emit_asp(Measure::HittingSet, &kb);
    let report = solver.run(&program, &Deadline::none()).unwrap();
    assert_eq!(report.status, AnswerStatus::Unsatisfiable);
    assert_eq!(
        solver.solve(&program, Measure::HittingSet, &Deadline::none()).unwrap(),
        InconsistencyValue::Infinity
    );
}

#[test]
fn live_values_match_the_oracle() {
    let Some(solver) = solver() else { return };
    let params = SrsParams {
        min_formulas: 2,
        max_formulas: 5,
        seed: 11,
        ..Default::default()
    };
    for entry in generate_corpus(&params, 15).unwrap() {
        let kb = entry.kb;
        if kb.prepared().occurrence_count() > 12 {
            continue;
        }
        for m in Measure::ALL {
            let expected = oracle(m, &kb);
            let got = solver.solve(&emit_asp(m, &kb), m, &Deadline::none());
            match expected {
                Ok(v) => assert_eq!(got.unwrap(), v, "{} on {}", m, entry.id),
                Err(_) => assert!(got.is_err() || kb.has_contradiction_constant()),
            }
        }
    }
    let with_bottom = incmeter_core::KnowledgeBase::new(vec![Formula::atom("a"), Formula::Bottom]);
    assert_eq!(
        solver.solve(&emit_asp(Measure::SumDistance, &with_bottom), Measure::SumDistance, &Deadline::none()).unwrap(),
        InconsistencyValue::Infinity
    );
}
