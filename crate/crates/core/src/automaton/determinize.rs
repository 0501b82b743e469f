use alloc::vec;
use alloc::vec::Vec;

use super::{accepts_lasso, explore, intersect, is_empty, refine, Acceptance, Cube, OmegaAutomaton};
use crate::error::{Error, Result};
use crate::word::LassoWord;

/// Breakpoint (Miyano–Hayashi) determinization of a co-Büchi automaton.
///
/// States are pairs `(S, O)`: `S` is the subset of states reachable on the
/// input read so far and `O ⊆ S ∩ F` are the runs that have stayed inside `F`
/// since the last breakpoint. When `O` empties the breakpoint is passed and
/// `O` restarts from `S ∩ F`. The input is accepted iff breakpoints occur
/// finitely often, so the accepting states are those with `O ≠ ∅`.
pub fn miyano_hayashi(a: &OmegaAutomaton) -> Result<OmegaAutomaton> {
    a.require_acceptance(Acceptance::CoBuchi)?;
    let a = a.trim();
    let init = vec![a.initial()];
    let init_o = if a.is_accepting(a.initial()) {
        init.clone()
    } else {
        Vec::new()
    };
    let mut out = explore(
        Acceptance::CoBuchi,
        a.signature().clone(),
        (init, init_o),
        |(_, o)| !o.is_empty(),
        |(s, o)| {
            let cubes: Vec<Cube> = s.iter().flat_map(|&q| a.out_edges(q).iter().map(|&(c, _)| c)).collect();
            refine(&cubes, Cube::TOP)
                .into_iter()
                .map(|piece| {
                    let image = |from: &[usize]| {
                        let mut to: Vec<usize> = from
                            .iter()
                            .flat_map(|&q| a.out_edges(q))
                            .filter(|(c, _)| c.contains(piece))
                            .map(|&(_, t)| t)
                            .collect();
                        to.sort_unstable();
                        to.dedup();
                        to
                    };
                    let s2 = image(s);
                    let o2: Vec<usize> = if o.is_empty() { s2.clone() } else { image(o) };
                    let o2 = o2.into_iter().filter(|&q| a.is_accepting(q)).collect();
                    (piece, (s2, o2))
                })
                .collect()
        },
    );
    out.simplify_edges();
    Ok(out)
}

/// Complement of a deterministic complete automaton: the same transitions
/// with the acceptance kind flipped and `F` replaced by `Q ∖ F`.
pub fn complement_deterministic(a: &OmegaAutomaton) -> Result<OmegaAutomaton> {
    a.require_deterministic_complete()?;
    let mut out = a.clone().with_acceptance(a.acceptance().dual());
    for f in &mut out.accepting {
        *f = !*f;
    }
    Ok(out)
}

/// Büchi automaton for the language of a co-Büchi automaton: a free copy of
/// `a` plus a copy restricted to `F` (all accepting) that runs can jump into
/// once and never leave.
pub fn ncw_to_nbw(a: &OmegaAutomaton) -> Result<OmegaAutomaton> {
    a.require_acceptance(Acceptance::CoBuchi)?;
    let n = a.num_states();
    let mut copy = vec![usize::MAX; n];
    let mut next = n;
    for q in a.accepting_states() {
        copy[q] = next;
        next += 1;
    }
    let mut out = OmegaAutomaton::new(Acceptance::Buchi, a.signature().clone(), next, a.initial())?;
    for q in 0..n {
        for &(c, t) in a.out_edges(q) {
            out.edges[q].push((c, t));
            if a.is_accepting(t) {
                out.edges[q].push((c, copy[t]));
                if a.is_accepting(q) {
                    out.edges[copy[q]].push((c, copy[t]));
                }
            }
        }
        if a.is_accepting(q) {
            out.accepting[copy[q]] = true;
        }
    }
    Ok(out.reachable_part())
}

/// Büchi automaton for the complement of `b`. Co-Büchi machines are
/// determinized first; Büchi machines must already be deterministic and
/// complete.
fn complement_as_nbw(b: &OmegaAutomaton) -> Result<OmegaAutomaton> {
    match b.acceptance() {
        Acceptance::CoBuchi => complement_deterministic(&miyano_hayashi(b)?),
        Acceptance::Buchi => ncw_to_nbw(&complement_deterministic(b)?),
    }
}

/// `None` if `L(a) ⊆ L(b)`, otherwise a lasso in `L(a) ∖ L(b)`.
///
/// `b` must be co-Büchi, or a deterministic complete Büchi automaton. The
/// witness is checked against both automata before it is returned.
pub fn contains(a: &OmegaAutomaton, b: &OmegaAutomaton) -> Result<Option<LassoWord>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    let product = intersect(&a.trim(), &complement_as_nbw(b)?)?;
    let Some(w) = is_empty(&product) else {
        return Ok(None);
    };
    assert!(
        accepts_lasso(a, &w)? && !accepts_lasso(b, &w)?,
        "containment witness {w} failed verification"
    );
    Ok(Some(w))
}

/// `None` if the languages are equal, otherwise a lasso in exactly one.
pub fn equivalent(a: &OmegaAutomaton, b: &OmegaAutomaton) -> Result<Option<LassoWord>> {
    if let Some(w) = contains(a, b)? {
        return Ok(Some(w));
    }
    contains(b, a)
}
