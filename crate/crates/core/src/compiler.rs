//! Compilation of existential S1S formulas over `(∈, s)` into co-Büchi
//! automata.
//!
//! Every sub-automaton is built over the signature of the variables in scope
//! at that point, so conjunction and disjunction combine machines without
//! re-indexing tracks. Quantifiers extend the signature with the bound
//! variable and project its track away afterwards.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{
    explore, intersect, miyano_hayashi, project_track, refine, union, Acceptance, Cube, OmegaAutomaton,
};
use crate::error::{Error, Result};
use crate::formula::{
    check_existential_shape, normalize_for_compilation, normalize_for_deterministic, to_nnf, uniquify, Formula, Term,
    TrackSignature,
};

/// A literal `s^shift x ∈ set` (or `∉` when not positive) of a universal
/// clause over `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseLiteral {
    pub shift: u32,
    pub set: String,
    pub positive: bool,
}

/// Deterministic complete co-Büchi automaton accepting the words in which
/// every first-order track of `sig` carries exactly one 1.
///
/// The state records which first-order tracks have already shown their 1; a
/// second 1 on any track leads to a single rejecting sink.
pub fn valid_model_automaton(sig: &TrackSignature) -> OmegaAutomaton {
    let n = sig.fo_count();
    let all = crate::automaton::cube_mask(n);
    let mut out = explore(
        Acceptance::CoBuchi,
        sig.clone(),
        Some(0u64),
        |s| *s == Some(all),
        |s| {
            let Some(seen) = *s else {
                return vec![(Cube::TOP, None)];
            };
            let mut out = Vec::new();
            let zeros = Cube::new(seen, 0);
            let unseen = all & !seen;
            // every subset of the unseen tracks may show its 1 now
            let mut subset = 0u64;
            loop {
                out.push((
                    Cube::new(all, subset).intersect(zeros).expect("disjoint from seen"),
                    Some(seen | subset),
                ));
                if subset == unseen {
                    break;
                }
                subset = (subset.wrapping_sub(unseen)) & unseen;
            }
            let mut clean = Cube::TOP;
            for t in (0..n).filter(|t| seen >> t & 1 == 1) {
                out.push((clean.with(t, true), None));
                clean = clean.with(t, false);
            }
            out
        },
    );
    out.simplify_edges();
    out
}

fn track(env: &TrackSignature, name: &str) -> Result<usize> {
    env.track_of(name).ok_or_else(|| Error::UnmappedVariable(name.into()))
}

/// The bare literal automaton for `s^k x ∈ X` (or `∉`), before completion and
/// validity intersection.
///
/// For `k ≥ 1` it has `k + 3` states: a chain `q_0 … q_k` that waits for the 1
/// on `x`'s track and then counts `k` symbols, an accepting sink and a dead
/// sink. The chain's last step branches on `X`'s track. For a negative literal
/// the dead sink is the accepting one. For `k = 0` there are two states.
pub fn literal_automaton(term: &Term, set: &str, positive: bool, env: &TrackSignature) -> Result<OmegaAutomaton> {
    let x = track(env, &term.var)?;
    let set_track = track(env, set)?;
    if !env.is_fo_track(x) || env.is_fo_track(set_track) {
        return Err(Error::UnmappedVariable(format!("{term} in {set}")));
    }
    let k = term.shift as usize;
    if k == 0 {
        let mut a = OmegaAutomaton::new(Acceptance::CoBuchi, env.clone(), 2, 0)?;
        a.add_edge(0, Cube::literal(x, false), 0)?;
        a.add_edge(0, Cube::literal(x, true).with(set_track, positive), 1)?;
        a.add_edge(1, Cube::TOP, 1)?;
        a.set_accepting(1, true)?;
        return Ok(a);
    }
    let (accept, dead) = (k + 1, k + 2);
    let mut a = OmegaAutomaton::new(Acceptance::CoBuchi, env.clone(), k + 3, 0)?;
    a.add_edge(0, Cube::literal(x, false), 0)?;
    a.add_edge(0, Cube::literal(x, true), 1)?;
    for l in 1..k {
        a.add_edge(l, Cube::TOP, l + 1)?;
    }
    a.add_edge(k, Cube::literal(set_track, true), accept)?;
    a.add_edge(k, Cube::literal(set_track, false), dead)?;
    a.add_edge(accept, Cube::TOP, accept)?;
    a.add_edge(dead, Cube::TOP, dead)?;
    a.set_accepting(if positive { accept } else { dead }, true)?;
    Ok(a)
}

/// The literal automaton completed with a rejecting sink and intersected with
/// the valid-model automaton of `env`.
pub fn compile_literal(term: &Term, set: &str, positive: bool, env: &TrackSignature) -> Result<OmegaAutomaton> {
    let raw = literal_automaton(term, set, positive, env)?.complete();
    intersect(&raw, &valid_model_automaton(env))
}

/// Per-shift view of a clause: for each shift `0..=K`, disjoint cubes on which
/// some literal of that shift holds, and the cube on which none does.
struct ShiftTable {
    satisfied: Vec<Vec<Cube>>,
    unsatisfied: Vec<Option<Cube>>,
}

impl ShiftTable {
    fn new(literals: &[ClauseLiteral], env: &TrackSignature) -> Result<(ShiftTable, usize)> {
        let top = literals.iter().map(|l| l.shift as usize).max().unwrap_or(0);
        let mut satisfied = vec![Vec::new(); top + 1];
        let mut unsatisfied = vec![Some(Cube::TOP); top + 1];
        let mut negated: Vec<Vec<Cube>> = vec![Vec::new(); top + 1];
        for l in literals {
            let t = track(env, &l.set)?;
            if env.is_fo_track(t) {
                return Err(Error::UnmappedVariable(l.set.clone()));
            }
            let k = l.shift as usize;
            let holds = Cube::literal(t, l.positive);
            let fails = Cube::literal(t, !l.positive);
            let fresh = negated[k].iter().try_fold(holds, |c, n| c.intersect(*n));
            satisfied[k].extend(fresh);
            negated[k].push(fails);
            unsatisfied[k] = unsatisfied[k].and_then(|c| c.intersect(fails));
        }
        Ok((ShiftTable { satisfied, unsatisfied }, top))
    }
}

/// The residue automata of a universal clause with maximal shift `K ≥ 1`.
///
/// Automaton `s` checks the positions `p ≡ s (mod K)`. Its states are
/// `P(c)` for `c < K` (no pending position; the next checked position is `c`
/// symbols ahead), `U(u)` for `1 ≤ u ≤ K` (the pending position `p` is not yet
/// satisfied and the next symbol is `p + u`) and a rejecting sink. State ids:
/// `P(c) = c`, `U(u) = K + u - 1`, sink `= 2K`. Returns an empty list when
/// `K = 0`.
pub fn residue_automata(literals: &[ClauseLiteral], env: &TrackSignature) -> Result<Vec<OmegaAutomaton>> {
    let (table, k) = ShiftTable::new(literals, env)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let p = |c: usize| c;
    let u = |u: usize| k + u - 1;
    let dead = 2 * k;
    // edges of P(0) on the symbol at the pending position itself
    let start: Vec<(Cube, usize)> = table.satisfied[0]
        .iter()
        .map(|&c| (c, p(k - 1)))
        .chain(table.unsatisfied[0].map(|c| (c, u(1))))
        .collect();
    (0..k)
        .map(|s| {
            let mut a = OmegaAutomaton::new(Acceptance::CoBuchi, env.clone(), 2 * k + 1, p(s))?;
            for q in 0..2 * k {
                a.set_accepting(q, true)?;
            }
            for c in 1..k {
                a.add_edge(p(c), Cube::TOP, p(c - 1))?;
            }
            for &(c, t) in &start {
                a.add_edge(p(0), c, t)?;
            }
            for v in 1..k {
                for &c in &table.satisfied[v] {
                    a.add_edge(u(v), c, p(k - v - 1))?;
                }
                if let Some(c) = table.unsatisfied[v] {
                    a.add_edge(u(v), c, u(v + 1))?;
                }
            }
            for &c in &table.satisfied[k] {
                for &(d, t) in &start {
                    if let Some(e) = c.intersect(d) {
                        a.add_edge(u(k), e, t)?;
                    }
                }
            }
            if let Some(c) = table.unsatisfied[k] {
                a.add_edge(u(k), c, dead)?;
            }
            a.add_edge(dead, Cube::TOP, dead)?;
            Ok(a)
        })
        .collect()
}

/// Deterministic complete co-Büchi automaton for `forall x. l_1 | … | l_r`:
/// the product of the residue automata, or a per-symbol checker when every
/// literal has shift 0.
pub fn compile_forall_clause(var: &str, literals: &[ClauseLiteral], env: &TrackSignature) -> Result<OmegaAutomaton> {
    if literals.is_empty() {
        return Err(Error::NotInFragment(format!("empty universal clause over `{var}`")));
    }
    let residues = residue_automata(literals, env)?;
    if residues.is_empty() {
        let (table, _) = ShiftTable::new(literals, env)?;
        let mut a = OmegaAutomaton::new(Acceptance::CoBuchi, env.clone(), 2, 0)?;
        for &c in &table.satisfied[0] {
            a.add_edge(0, c, 0)?;
        }
        if let Some(c) = table.unsatisfied[0] {
            a.add_edge(0, c, 1)?;
        }
        a.add_edge(1, Cube::TOP, 1)?;
        a.set_accepting(0, true)?;
        a.simplify_edges();
        return Ok(a.reachable_part());
    }
    Ok(product(&residues))
}

/// On-the-fly product of co-Büchi automata, accepting where every component
/// accepts.
fn product(parts: &[OmegaAutomaton]) -> OmegaAutomaton {
    explore(
        Acceptance::CoBuchi,
        parts[0].signature().clone(),
        parts.iter().map(|a| a.initial()).collect::<Vec<_>>(),
        |qs| qs.iter().zip(parts).all(|(&q, a)| a.is_accepting(q)),
        |qs| {
            let mut moves: Vec<(Cube, Vec<usize>)> = vec![(Cube::TOP, Vec::new())];
            for (&q, a) in qs.iter().zip(parts) {
                let mut next = Vec::new();
                for (c, ts) in &moves {
                    for &(d, t) in a.out_edges(q) {
                        if let Some(e) = c.intersect(d) {
                            let mut ts = ts.clone();
                            ts.push(t);
                            next.push((e, ts));
                        }
                    }
                }
                moves = next;
            }
            moves
        },
    )
}

/// Splits the scope of a universal quantifier over `x` into clause literals.
fn clause_literals(x: &str, body: &Formula, out: &mut Vec<ClauseLiteral>) -> Result<()> {
    match body {
        Formula::Or(a, b) => {
            clause_literals(x, a, out)?;
            clause_literals(x, b, out)
        }
        Formula::In(t, set) if t.var == x => {
            out.push(ClauseLiteral {
                shift: t.shift,
                set: set.clone(),
                positive: true,
            });
            Ok(())
        }
        Formula::Not(g) => match &**g {
            Formula::In(t, set) if t.var == x => {
                out.push(ClauseLiteral {
                    shift: t.shift,
                    set: set.clone(),
                    positive: false,
                });
                Ok(())
            }
            _ => Err(Error::NotInFragment(format!("`{body}` in the scope of `forall {x}`"))),
        },
        _ => Err(Error::NotInFragment(format!("`{body}` in the scope of `forall {x}`"))),
    }
}

/// Extends `env` with a bound variable; its track index is returned.
fn bind(env: &TrackSignature, v: &str) -> Result<(TrackSignature, usize)> {
    let inner = env.with_var(v)?;
    let t = inner.track_of(v).expect("just added");
    Ok((inner, t))
}

fn compile_in(f: &Formula, env: &TrackSignature) -> Result<OmegaAutomaton> {
    Ok(match f {
        Formula::In(t, set) => compile_literal(t, set, true, env)?,
        Formula::Not(g) => match &**g {
            Formula::In(t, set) => compile_literal(t, set, false, env)?,
            _ => return Err(Error::NotInFragment(format!("negation of `{g}`"))),
        },
        Formula::Less(..) => return Err(Error::NotInFragment(format!("order atom `{f}`"))),
        Formula::And(a, b) => intersect(&compile_in(a, env)?, &compile_in(b, env)?)?.trim(),
        Formula::Or(a, b) => union(&compile_in(a, env)?, &compile_in(b, env)?)?.trim(),
        Formula::ExistsFo(v, g) | Formula::ExistsSo(v, g) => {
            let (inner, t) = bind(env, v)?;
            project_track(&compile_in(g, &inner)?, t)?.trim()
        }
        Formula::ForallFo(x, body) => {
            let mut literals = Vec::new();
            clause_literals(x, body, &mut literals)?;
            let clause = compile_forall_clause(x, &literals, env)?;
            intersect(&clause, &valid_model_automaton(env))?
        }
        Formula::ForallSo(v, _) => return Err(Error::NotInFragment(format!("universal second-order `{v}`"))),
    })
}

/// Brings a formula into the compilable shape: unique binder names, negation
/// normal form and normalized universal scopes.
pub fn prepare(f: &Formula) -> Result<Formula> {
    if f.contains_order() {
        return Err(Error::NotInFragment("order atoms are not compilable".into()));
    }
    let g = normalize_for_compilation(&to_nnf(&uniquify(f)))?;
    if !check_existential_shape(&g) {
        return Err(Error::NotInFragment(
            "second-order quantifiers must form an existential prefix".into(),
        ));
    }
    Ok(g)
}

/// Compiles `f` over the signature of its free variables in first-occurrence
/// order.
pub fn compile(f: &Formula) -> Result<OmegaAutomaton> {
    compile_with_signature(f, &TrackSignature::of_formula(f))
}

/// Compiles `f` over `sig`, which must contain every free variable of `f`.
/// First-order tracks of `sig` not free in `f` are still required to carry
/// exactly one 1.
pub fn compile_with_signature(f: &Formula, sig: &TrackSignature) -> Result<OmegaAutomaton> {
    check_covers(f, sig)?;
    let g = prepare(f)?;
    let a = compile_in(&g, sig)?;
    let a = intersect(&a, &valid_model_automaton(sig))?.trim();
    Ok(a)
}

fn check_covers(f: &Formula, sig: &TrackSignature) -> Result<()> {
    let (fo, so) = f.free_variables();
    for name in fo.iter() {
        if !sig.fo_vars().contains(name) {
            return Err(Error::UnmappedVariable(name.clone()));
        }
    }
    for name in so.iter() {
        if !sig.so_vars().contains(name) {
            return Err(Error::UnmappedVariable(name.clone()));
        }
    }
    Ok(())
}

/// Deterministic machine for `exists x. l_1 & … & l_r` with every literal over
/// `x`: the state is the set of offsets `d ∈ 1..=K` of candidate positions
/// `i - d` whose literals have held so far; a candidate that survives all
/// shifts leads to an accepting sink.
fn exists_window(literals: &[ClauseLiteral], env: &TrackSignature) -> Result<OmegaAutomaton> {
    let k = literals.iter().map(|l| l.shift as usize).max().unwrap_or(0);
    let mut by_shift: Vec<Vec<Cube>> = vec![Vec::new(); k + 1];
    for l in literals {
        let t = track(env, &l.set)?;
        if env.is_fo_track(t) {
            return Err(Error::UnmappedVariable(l.set.clone()));
        }
        by_shift[l.shift as usize].push(Cube::literal(t, l.positive));
    }
    let all: Vec<Cube> = by_shift.iter().flatten().copied().collect();
    let mut a = explore(
        Acceptance::CoBuchi,
        env.clone(),
        Some(0u64),
        |s| s.is_none(),
        |s| {
            let Some(alive) = *s else {
                return vec![(Cube::TOP, None)];
            };
            refine(&all, Cube::TOP)
                .into_iter()
                .map(|piece| {
                    let holds = |d: usize| by_shift[d].iter().all(|c| c.contains(piece));
                    let mut next = 0u64;
                    let mut done = false;
                    // offset 0 is the candidate starting at this very symbol
                    for d in (0..=k).filter(|&d| d == 0 || alive >> d & 1 == 1) {
                        if !holds(d) {
                            continue;
                        }
                        if d == k {
                            done = true;
                        } else {
                            next |= 1 << (d + 1);
                        }
                    }
                    (piece, (!done).then_some(next))
                })
                .collect()
        },
    );
    a.simplify_edges();
    Ok(a)
}

fn exists_literals(x: &str, body: &Formula, out: &mut Vec<ClauseLiteral>) -> Result<()> {
    match body {
        Formula::And(a, b) => {
            exists_literals(x, a, out)?;
            exists_literals(x, b, out)
        }
        _ => {
            let mut one = Vec::new();
            clause_literals(x, body, &mut one)
                .map_err(|_| Error::NormalizationFailure(format!("exists {x}. {body}")))?;
            out.extend(one);
            Ok(())
        }
    }
}

fn deterministic_in(f: &Formula, env: &TrackSignature) -> Result<OmegaAutomaton> {
    Ok(match f {
        Formula::And(a, b) => intersect(&deterministic_in(a, env)?, &deterministic_in(b, env)?)?,
        Formula::Or(a, b) => miyano_hayashi(&union(&deterministic_in(a, env)?, &deterministic_in(b, env)?)?)?,
        Formula::ExistsFo(x, body) => {
            let mut literals = Vec::new();
            exists_literals(x, body, &mut literals)?;
            intersect(&exists_window(&literals, env)?, &valid_model_automaton(env))?
        }
        Formula::ExistsSo(v, _) | Formula::ForallSo(v, _) => {
            return Err(Error::NotInFragment(format!("second-order quantifier over `{v}`")))
        }
        _ => compile_in(f, env)?,
    })
}

/// Deterministic compilation of a first-order formula (free second-order
/// variables allowed, no second-order quantifiers). Existential scopes are
/// miniscoped to literal conjunctions; disjunction re-determinizes.
pub fn compile_fo_deterministic(f: &Formula) -> Result<OmegaAutomaton> {
    compile_fo_deterministic_with_signature(f, &TrackSignature::of_formula(f))
}

pub fn compile_fo_deterministic_with_signature(f: &Formula, sig: &TrackSignature) -> Result<OmegaAutomaton> {
    check_covers(f, sig)?;
    if f.contains_so_quantifier() {
        return Err(Error::NotInFragment(
            "second-order quantifiers are not first-order".into(),
        ));
    }
    if f.contains_order() {
        return Err(Error::NotInFragment("order atoms are not compilable".into()));
    }
    let g = normalize_for_deterministic(&to_nnf(&uniquify(f)))?;
    let a = intersect(&deterministic_in(&g, sig)?, &valid_model_automaton(sig))?;
    debug_assert!(a.is_deterministic() && a.is_complete());
    Ok(a)
}
