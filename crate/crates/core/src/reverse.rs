//! Formulas describing accepting runs of an automaton.
//!
//! A run is encoded by one set `Y_q` per state: position `p` lies in `Y_q`
//! iff the run is in state `q` before reading symbol `p`. The emitted formula
//! states that the sets partition the positions, that position 0 is in the
//! initial state's set, that consecutive positions follow an edge, and that the
//! run satisfies the acceptance condition.
//!
//! Co-Büchi machines give a formula of the existential fragment over `(∈, s)`
//! whose language is exactly that of the machine. Büchi machines need
//! "infinitely often", which is expressed with `<`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::{Acceptance, Cube, OmegaAutomaton};
use crate::error::{Error, Result};
use crate::formula::{Formula, FreshNames, Term};

/// Which atoms an emitted formula uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaSignature {
    /// Membership and successor only; compilable.
    Successor,
    /// Uses `<`.
    Order,
}

impl core::fmt::Display for FormulaSignature {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            FormulaSignature::Successor => "successor-signature",
            FormulaSignature::Order => "order-signature",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emitted {
    pub formula: Formula,
    pub signature: FormulaSignature,
    /// `(state, set variable)` in binder order; the initial state comes first.
    pub states: Vec<(usize, String)>,
}

struct Names {
    states: Vec<String>,
    order: Vec<usize>,
    fresh: FreshNames,
}

fn check_input(a: &OmegaAutomaton, kind: Acceptance) -> Result<Names> {
    a.require_acceptance(kind)?;
    let sig = a.signature();
    if sig.fo_count() > 0 {
        return Err(Error::InvalidSignature(format!(
            "expected set variables only, found `{}`",
            sig.fo_vars().join(", ")
        )));
    }
    let mut fresh = FreshNames::avoiding(sig.so_vars().iter().cloned());
    for x in ["x", "y"] {
        fresh.reserve(x);
    }
    let n = a.num_states();
    let order: Vec<usize> = core::iter::once(a.initial())
        .chain((0..n).filter(|&q| q != a.initial()))
        .collect();
    let mut states = alloc::vec![String::new(); n];
    for &q in &order {
        states[q] = fresh.fresh("Y");
    }
    Ok(Names { states, order, fresh })
}

fn conj(parts: Vec<Formula>) -> Formula {
    Formula::conjunction(parts).expect("nonempty conjunction")
}

fn disj(parts: Vec<Formula>) -> Formula {
    Formula::disjunction(parts).expect("nonempty disjunction")
}

/// `forall x. x in Y & x notin Y`
fn falsity(y: &str) -> Formula {
    Formula::forall_fo(
        "x",
        Formula::and(Formula::atom_in("x", 0, y), Formula::atom_notin("x", 0, y)),
    )
}

/// `forall x. OR_q (x in Y_q & AND_{q' != q} x notin Y_q')`
fn partition(names: &Names) -> Formula {
    let occupied = |q: usize| {
        let mut parts = alloc::vec![Formula::atom_in("x", 0, names.states[q].clone())];
        parts.extend(
            names
                .order
                .iter()
                .filter(|&&r| r != q)
                .map(|&r| Formula::atom_notin("x", 0, names.states[r].clone())),
        );
        conj(parts)
    };
    Formula::forall_fo("x", disj(names.order.iter().map(|&q| occupied(q)).collect()))
}

/// `exists x. x in Z & (forall y. s y notin Z) & x in Y_init`, with `Z` bound
/// by the caller.
fn zero(names: &Names, a: &OmegaAutomaton, z: &str) -> Formula {
    Formula::exists_fo(
        "x",
        conj(alloc::vec![
            Formula::atom_in("x", 0, z),
            Formula::forall_fo("y", Formula::atom_notin("y", 1, z)),
            Formula::atom_in("x", 0, names.states[a.initial()].clone()),
        ]),
    )
}

fn cube_literals(a: &OmegaAutomaton, c: Cube, out: &mut Vec<Formula>) {
    let sig = a.signature();
    for t in 0..a.width() {
        if let Some(bit) = c.get(t) {
            let set = sig.name_of(t).expect("track in range");
            out.push(if bit {
                Formula::atom_in("x", 0, set)
            } else {
                Formula::atom_notin("x", 0, set)
            });
        }
    }
}

/// `forall x. OR_{(i, c, j)} (x in Y_i & c(x) & s x in Y_j)`
fn transitions(names: &Names, a: &OmegaAutomaton) -> Formula {
    let mut steps = Vec::new();
    for &i in &names.order {
        for &(c, j) in a.out_edges(i) {
            let mut parts = alloc::vec![Formula::atom_in("x", 0, names.states[i].clone())];
            cube_literals(a, c, &mut parts);
            parts.push(Formula::atom_in("x", 1, names.states[j].clone()));
            steps.push(conj(parts));
        }
    }
    if steps.is_empty() {
        return falsity(&names.states[a.initial()]);
    }
    Formula::forall_fo("x", disj(steps))
}

/// Body of `finite(X)` with its witness `W` bound by the caller:
/// `W` is closed under successor, disjoint from `X`, and nonempty.
fn finite_body(x_set: &str, w: &str) -> Formula {
    conj(alloc::vec![
        Formula::forall_fo(
            "x",
            Formula::implies(Formula::atom_in("x", 0, w), Formula::atom_in("x", 1, w))
        ),
        Formula::forall_fo(
            "x",
            Formula::implies(Formula::atom_in("x", 0, w), Formula::atom_notin("x", 0, x_set))
        ),
        Formula::exists_fo("x", Formula::atom_in("x", 0, w)),
    ])
}

/// `forall x. exists y. x < y & y in Y`
fn infinite(y_set: &str) -> Formula {
    Formula::forall_fo(
        "x",
        Formula::exists_fo(
            "y",
            Formula::and(
                Formula::Less(Term::var("x"), Term::var("y")),
                Formula::atom_in("y", 0, y_set),
            ),
        ),
    )
}

fn close(binders: Vec<String>, matrix: Formula) -> Formula {
    binders.into_iter().rev().fold(matrix, |f, x| Formula::exists_so(x, f))
}

/// Formula in the existential fragment over `(∈, s)` with the language of a
/// co-Büchi automaton over set tracks:
///
/// ```text
/// exists Y_1 … Y_n. exists Z. exists W_q … .
///     partition & zero & transitions & AND_{q ∉ F} finite(Y_q)
/// ```
///
/// where `finite(Y_q)` says some successor-closed nonempty `W_q` avoids
/// `Y_q`. Every second-order binder is in the leading block.
pub fn cobuchi_to_formula(a: &OmegaAutomaton) -> Result<Emitted> {
    let mut names = check_input(a, Acceptance::CoBuchi)?;
    let z = names.fresh.fresh("Z");
    let mut parts = alloc::vec![partition(&names), zero(&names, a, &z), transitions(&names, a)];
    let mut binders: Vec<String> = names.order.iter().map(|&q| names.states[q].clone()).collect();
    binders.push(z);
    for &q in &names.order {
        if !a.is_accepting(q) {
            let w = names.fresh.fresh("W");
            parts.push(finite_body(&names.states[q], &w));
            binders.push(w);
        }
    }
    Ok(Emitted {
        formula: close(binders, conj(parts)),
        signature: FormulaSignature::Successor,
        states: names.order.iter().map(|&q| (q, names.states[q].clone())).collect(),
    })
}

/// Formula over `(∈, s, <)` with the language of a Büchi automaton over set
/// tracks: the same run encoding, with `OR_{q ∈ F} infinite(Y_q)`.
pub fn buchi_to_formula(a: &OmegaAutomaton) -> Result<Emitted> {
    let mut names = check_input(a, Acceptance::Buchi)?;
    let z = names.fresh.fresh("Z");
    let accepting = Formula::disjunction(
        names
            .order
            .iter()
            .filter(|&&q| a.is_accepting(q))
            .map(|&q| infinite(&names.states[q])),
    )
    .unwrap_or_else(|| falsity(&names.states[a.initial()]));
    let parts = alloc::vec![
        partition(&names),
        zero(&names, a, &z),
        transitions(&names, a),
        accepting
    ];
    let mut binders: Vec<String> = names.order.iter().map(|&q| names.states[q].clone()).collect();
    binders.push(z);
    Ok(Emitted {
        formula: close(binders, conj(parts)),
        signature: FormulaSignature::Order,
        states: names.order.iter().map(|&q| (q, names.states[q].clone())).collect(),
    })
}

/// Dispatches on the acceptance kind.
pub fn automaton_to_formula(a: &OmegaAutomaton) -> Result<Emitted> {
    match a.acceptance() {
        Acceptance::CoBuchi => cobuchi_to_formula(a),
        Acceptance::Buchi => buchi_to_formula(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::testing::*;
    use crate::automaton::{accepts_lasso, equivalent};
    use crate::compiler::compile_with_signature;
    use crate::formula::{
        check_existential_shape, normalize_for_compilation, parse_formula, to_nnf, uniquify, TrackSignature,
    };
    use crate::oracle::{eval_exists_so, Assignment, OracleConfig};

    fn round_trip(a: &OmegaAutomaton) -> OmegaAutomaton {
        let f = cobuchi_to_formula(a).unwrap().formula;
        compile_with_signature(&f, a.signature()).unwrap()
    }

    #[test]
    fn shape_and_binders() {
        let a = eventually_always_one(Acceptance::CoBuchi);
        let e = cobuchi_to_formula(&a).unwrap();
        assert!(check_existential_shape(&e.formula));
        assert_eq!(e.signature, FormulaSignature::Successor);
        let non_final = (0..a.num_states()).filter(|&q| !a.is_accepting(q)).count();
        assert_eq!(e.formula.split_so_prefix().0.len(), a.num_states() + 1 + non_final);
        assert_eq!(e.states[0], (a.initial(), "Y_1".into()));
        assert!(!e.formula.contains_order());
    }

    #[test]
    fn emitted_formulas_reparse() {
        let mut r = rng(41);
        for i in 0..40 {
            let kind = if i % 2 == 0 {
                Acceptance::Buchi
            } else {
                Acceptance::CoBuchi
            };
            let a = random_automaton(&mut r, 3, 2, kind);
            let f = automaton_to_formula(&a).unwrap().formula;
            assert_eq!(parse_formula(&f.render()).unwrap(), f);
        }
    }

    #[test]
    fn transition_clauses_normalize_to_unit_shift_literals() {
        let a = eventually_always_one(Acceptance::CoBuchi);
        let e = cobuchi_to_formula(&a).unwrap();
        let n = normalize_for_compilation(&to_nnf(&uniquify(&e.formula))).unwrap();
        let mut clauses = 0;
        n.visit(&mut |g| {
            if let Formula::ForallFo(x, body) = g {
                clauses += 1;
                body.visit(&mut |h| {
                    if let Formula::In(t, _) = h {
                        assert_eq!(&t.var, x);
                        assert!(t.shift <= 1);
                    }
                    assert!(!matches!(h, Formula::ExistsFo(..) | Formula::ForallFo(..)));
                });
            }
        });
        assert!(clauses > 0);
    }

    #[test]
    fn round_trip_is_exact() {
        let a = eventually_always_one(Acceptance::CoBuchi);
        assert_eq!(equivalent(&round_trip(&a), &a).unwrap(), None);
        let mut r = rng(42);
        for _ in 0..15 {
            let a = random_automaton(&mut r, 2, 1, Acceptance::CoBuchi);
            assert_eq!(equivalent(&round_trip(&a), &a).unwrap(), None);
        }
        let none = OmegaAutomaton::reject_all(sig(1), Acceptance::CoBuchi);
        assert_eq!(equivalent(&round_trip(&none), &none).unwrap(), None);
    }

    #[test]
    fn rejects_bad_input() {
        let a = eventually_always_one(Acceptance::CoBuchi);
        assert!(matches!(buchi_to_formula(&a), Err(Error::WrongAcceptance { .. })));
        let fo = OmegaAutomaton::accept_all(TrackSignature::from_names(&["x"], &[]), Acceptance::CoBuchi);
        assert!(matches!(cobuchi_to_formula(&fo), Err(Error::InvalidSignature(_))));
    }

    #[test]
    fn buchi_formula_bounded_witnesses() {
        // infinitely many 1s
        let mut a = OmegaAutomaton::new(Acceptance::Buchi, sig(1), 2, 0).unwrap();
        for q in 0..2 {
            a.add_edge(q, Cube::literal(0, true), 1).unwrap();
            a.add_edge(q, Cube::literal(0, false), 0).unwrap();
        }
        a.set_accepting(1, true).unwrap();
        let e = buchi_to_formula(&a).unwrap();
        assert_eq!(e.signature, FormulaSignature::Order);
        assert!(check_existential_shape(&e.formula) && e.formula.contains_order());
        let cfg = OracleConfig::default();
        let none = Assignment::new();
        let yes: crate::word::LassoWord = "; 1".parse().unwrap();
        let no: crate::word::LassoWord = "1 ; 0".parse().unwrap();
        assert!(accepts_lasso(&a, &yes).unwrap());
        assert!(eval_exists_so(&e.formula, &yes, a.signature(), &none, &cfg).unwrap());
        assert!(!accepts_lasso(&a, &no).unwrap());
        assert!(!eval_exists_so(&e.formula, &no, a.signature(), &none, &cfg).unwrap());
    }
}
