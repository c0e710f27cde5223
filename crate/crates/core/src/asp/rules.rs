//! Static rule blocks, one rule per line, shared by every knowledge base.

use crate::measure::Measure;

pub const CONTENSION: &[&str] = &[
    "tv(t;f;b).",
    "1{truthValue(A,T) : tv(T)}1 :- atom(A).",
    "truthValue(F,t) :- conjunction(F,G,H), truthValue(G,t), truthValue(H,t).",
    "truthValue(F,f) :- conjunction(F,G,H), 1{truthValue(G,f); truthValue(H,f)}.",
    "truthValue(F,b) :- conjunction(F,_,_), not truthValue(F,t), not truthValue(F,f).",
    "truthValue(F,f) :- disjunction(F,G,H), truthValue(G,f), truthValue(H,f).",
    "truthValue(F,t) :- disjunction(F,G,H), 1{truthValue(G,t); truthValue(H,t)}.",
    "truthValue(F,b) :- disjunction(F,_,_), not truthValue(F,t), not truthValue(F,f).",
    "truthValue(F,t) :- negation(F,G), truthValue(G,f).",
    "truthValue(F,f) :- negation(F,G), truthValue(G,t).",
    "truthValue(F,b) :- negation(F,G), truthValue(G,b).",
    "truthValue(F,T) :- formulaIsAtom(F,G), truthValue(G,T), tv(T).",
    ":- truthValue(F,f), kbMember(F).",
    "#minimize{1,A : truthValue(A,b), atom(A)}.",
];

pub const FORGETTING: &[&str] = &[
    "tv(t;f).",
    "atv(t;f;ftop;fbot).",
    "atomOcc(A,L) :- formulaIsAtomOcc(_,A,L).",
    "atom(A) :- atomOcc(A,_).",
    "1{truthValue(A,T) : tv(T)}1 :- atom(A).",
    "truthValue(F,t) :- conjunction(F,G,H), truthValue(G,t), truthValue(H,t).",
    "truthValue(F,f) :- conjunction(F,_,_), not truthValue(F,t).",
    "truthValue(F,f) :- disjunction(F,G,H), truthValue(G,f), truthValue(H,f).",
    "truthValue(F,t) :- disjunction(F,_,_), not truthValue(F,f).",
    "truthValue(F,t) :- negation(F,G), truthValue(G,f).",
    "truthValue(F,f) :- negation(F,G), truthValue(G,t).",
    "truthValue(F,t) :- formulaIsAtomOcc(F,A,L), atomTruthValue(A,L,t).",
    "truthValue(F,t) :- formulaIsAtomOcc(F,A,L), atomTruthValue(A,L,ftop).",
    "truthValue(F,f) :- formulaIsAtomOcc(F,A,L), atomTruthValue(A,L,f).",
    "truthValue(F,f) :- formulaIsAtomOcc(F,A,L), atomTruthValue(A,L,fbot).",
    "atomTruthValue(A,L,ftop) :- atomOcc(A,L), not atomTruthValue(A,L,t), not atomTruthValue(A,L,f), not atomTruthValue(A,L,fbot).",
    "atomTruthValue(A,L,fbot) :- atomOcc(A,L), not atomTruthValue(A,L,t), not atomTruthValue(A,L,f), not atomTruthValue(A,L,ftop).",
    "atomTruthValue(A,L,t) :- atomOcc(A,L), truthValue(A,t), not atomTruthValue(A,L,f), not atomTruthValue(A,L,ftop), not atomTruthValue(A,L,fbot).",
    "atomTruthValue(A,L,f) :- atomOcc(A,L), truthValue(A,f), not atomTruthValue(A,L,t), not atomTruthValue(A,L,ftop), not atomTruthValue(A,L,fbot).",
    ":- truthValue(F,f), kbMember(F).",
    "atomOccForgotten(A,L) :- atomTruthValue(A,L,ftop).",
    "atomOccForgotten(A,L) :- atomTruthValue(A,L,fbot).",
    "#minimize{1,A,L : atomOccForgotten(A,L)}.",
];

pub const HITTING_SET: &[&str] = &[
    "tv(t;f).",
    "1{truthValueInt(A,I,T) : tv(T)}1 :- atom(A), interpretation(I).",
    "truthValueInt(F,I,t) :- conjunction(F,G,H), interpretation(I), truthValueInt(G,I,t), truthValueInt(H,I,t).",
    "truthValueInt(F,I,f) :- conjunction(F,_,_), interpretation(I), not truthValueInt(F,I,t).",
    "truthValueInt(F,I,f) :- disjunction(F,G,H), interpretation(I), truthValueInt(G,I,f), truthValueInt(H,I,f).",
    "truthValueInt(F,I,t) :- disjunction(F,_,_), interpretation(I), not truthValueInt(F,I,f).",
    "truthValueInt(F,I,t) :- negation(F,G), truthValueInt(G,I,f).",
    "truthValueInt(F,I,f) :- negation(F,G), truthValueInt(G,I,t).",
    "truthValueInt(F,I,T) :- formulaIsAtom(F,G), truthValueInt(G,I,T), interpretation(I), tv(T).",
    "truthValue(F,t) :- truthValueInt(F,I,t), kbMember(F), interpretation(I), interpretationActive(I).",
    "truthValue(F,f) :- kbMember(F), not truthValue(F,t).",
    ":- truthValue(F,f), kbMember(F).",
    "#minimize{1,I : interpretationActive(I)}.",
];

pub const MAX_DISTANCE: &[&str] = &[
    "tv(t;f).",
    "1{truthValueInt(A,I,T) : tv(T)}1 :- atom(A), interpretation(I).",
    "truthValueInt(F,I,t) :- conjunction(F,G,H), interpretation(I), truthValueInt(G,I,t), truthValueInt(H,I,t).",
    "truthValueInt(F,I,f) :- conjunction(F,_,_), interpretation(I), not truthValueInt(F,I,t).",
    "truthValueInt(F,I,f) :- disjunction(F,G,H), interpretation(I), truthValueInt(G,I,f), truthValueInt(H,I,f).",
    "truthValueInt(F,I,t) :- disjunction(F,_,_), interpretation(I), not truthValueInt(F,I,f).",
    "truthValueInt(F,I,t) :- negation(F,G), truthValueInt(G,I,f).",
    "truthValueInt(F,I,f) :- negation(F,G), truthValueInt(G,I,t).",
    "truthValueInt(F,I,T) :- formulaIsAtom(F,G), truthValueInt(G,I,T), interpretation(I), tv(T).",
    "truthValueInt(F,L,I,T) :- kbMember(F,L), interpretation(I), tv(T), truthValueInt(F,I,T).",
    ":- truthValueInt(F,L,I,f), kbMember(F,L), interpretation(I), L == I.",
    "diff(A,I,J) :- atom(A), interpretation(I), interpretation(J), truthValueInt(A,I,T), truthValueInt(A,J,U), T != U.",
    "d(I,J,X) :- interpretation(I), interpretation(J), X = #count{A : diff(A,I,J), atom(A)}.",
    "#minimize{X : dMax(X)}.",
];

pub const SUM_DISTANCE: &[&str] = &[
    "tv(t;f).",
    "1{truthValueInt(A,I,T) : tv(T)}1 :- atom(A), interpretation(I).",
    "truthValueInt(F,I,t) :- conjunction(F,G,H), interpretation(I), truthValueInt(G,I,t), truthValueInt(H,I,t).",
    "truthValueInt(F,I,f) :- conjunction(F,_,_), interpretation(I), not truthValueInt(F,I,t).",
    "truthValueInt(F,I,f) :- disjunction(F,G,H), interpretation(I), truthValueInt(G,I,f), truthValueInt(H,I,f).",
    "truthValueInt(F,I,t) :- disjunction(F,_,_), interpretation(I), not truthValueInt(F,I,f).",
    "truthValueInt(F,I,t) :- negation(F,G), truthValueInt(G,I,f).",
    "truthValueInt(F,I,f) :- negation(F,G), truthValueInt(G,I,t).",
    "truthValueInt(F,I,T) :- formulaIsAtom(F,G), truthValueInt(G,I,T), interpretation(I), tv(T).",
    "truthValueInt(F,L,I,T) :- kbMember(F,L), interpretation(I), tv(T), truthValueInt(F,I,T).",
    ":- truthValueInt(F,L,I,f), kbMember(F,L), interpretation(I), L == I.",
    "diff(A,I,J) :- atom(A), interpretation(I), interpretation(J), truthValueInt(A,I,T), truthValueInt(A,J,U), T != U.",
    "d(I,J,X) :- interpretation(I), interpretation(J), X = #count{A : diff(A,I,J), atom(A)}.",
    "#minimize{X : dSum(X)}.",
];

pub const HIT_DISTANCE: &[&str] = &[
    "tv(t;f).",
    "1{truthValue(A,T) : tv(T)}1 :- atom(A).",
    "truthValue(F,t) :- conjunction(F,G,H), truthValue(G,t), truthValue(H,t).",
    "truthValue(F,f) :- conjunction(F,_,_), not truthValue(F,t).",
    "truthValue(F,f) :- disjunction(F,G,H), truthValue(G,f), truthValue(H,f).",
    "truthValue(F,t) :- disjunction(F,_,_), not truthValue(F,f).",
    "truthValue(F,t) :- negation(F,G), truthValue(G,f).",
    "truthValue(F,f) :- negation(F,G), truthValue(G,t).",
    "truthValue(F,T) :- formulaIsAtom(F,G), truthValue(G,T), tv(T).",
    "truthValueKbMember(F,T) :- kbMember(F), tv(T), truthValue(F,T).",
    "#minimize{1,F : truthValueKbMember(F,f)}.",
];

/// The static block for `measure`.
pub fn static_rules(measure: Measure) -> &'static [&'static str] {
    match measure {
        Measure::Contension => CONTENSION,
        Measure::Forgetting => FORGETTING,
        Measure::HittingSet => HITTING_SET,
        Measure::MaxDistance => MAX_DISTANCE,
        Measure::SumDistance => SUM_DISTANCE,
        Measure::HitDistance => HIT_DISTANCE,
    }
}
