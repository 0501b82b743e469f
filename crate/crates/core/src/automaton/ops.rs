use alloc::vec::Vec;

use super::{explore, ncw_to_nbw, Acceptance, Cube, OmegaAutomaton};
use crate::error::{Error, Result};
use crate::formula::TrackSignature;
use crate::word::LassoWord;

fn same_signature(a: &OmegaAutomaton, b: &OmegaAutomaton) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

/// Product automaton accepting `L(a) ∩ L(b)`.
///
/// Two co-Büchi operands give a co-Büchi product with `F = Fa × Fb`; otherwise
/// co-Büchi operands are first converted and the two-phase Büchi product is
/// built.
pub fn intersect(a: &OmegaAutomaton, b: &OmegaAutomaton) -> Result<OmegaAutomaton> {
    same_signature(a, b)?;
    match (a.acceptance(), b.acceptance()) {
        (Acceptance::CoBuchi, Acceptance::CoBuchi) => Ok(explore(
            Acceptance::CoBuchi,
            a.signature().clone(),
            (a.initial(), b.initial()),
            |&(p, q)| a.is_accepting(p) && b.is_accepting(q),
            |&(p, q)| {
                let mut out = Vec::new();
                for &(c, p2) in a.out_edges(p) {
                    for &(d, q2) in b.out_edges(q) {
                        if let Some(e) = c.intersect(d) {
                            out.push((e, (p2, q2)));
                        }
                    }
                }
                out
            },
        )),
        (Acceptance::CoBuchi, _) => intersect(&ncw_to_nbw(a)?, b),
        (_, Acceptance::CoBuchi) => intersect(a, &ncw_to_nbw(b)?),
        (Acceptance::Buchi, Acceptance::Buchi) => Ok(explore(
            Acceptance::Buchi,
            a.signature().clone(),
            (a.initial(), b.initial(), false),
            |&(p, _, phase)| !phase && a.is_accepting(p),
            |&(p, q, phase)| {
                // phase false: waiting for Fa; phase true: waiting for Fb
                let next = if phase { !b.is_accepting(q) } else { a.is_accepting(p) };
                let mut out = Vec::new();
                for &(c, p2) in a.out_edges(p) {
                    for &(d, q2) in b.out_edges(q) {
                        if let Some(e) = c.intersect(d) {
                            out.push((e, (p2, q2, next)));
                        }
                    }
                }
                out
            },
        )),
    }
}

/// Intersection of a nonempty list of automata, folded left to right.
pub fn intersect_all(parts: &[OmegaAutomaton]) -> Result<OmegaAutomaton> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::InvalidAutomaton("empty intersection".into()))?;
    rest.iter().try_fold(first.clone(), |acc, b| intersect(&acc, b))
}

/// Disjoint union under a fresh, non-accepting initial state that copies the
/// outgoing edges of both initial states.
pub fn union(a: &OmegaAutomaton, b: &OmegaAutomaton) -> Result<OmegaAutomaton> {
    same_signature(a, b)?;
    a.require_acceptance(b.acceptance())?;
    let (na, nb) = (a.num_states(), b.num_states());
    let mut out = OmegaAutomaton::new(a.acceptance(), a.signature().clone(), 1 + na + nb, 0)?;
    for (m, offset) in [(a, 1), (b, 1 + na)] {
        for q in 0..m.num_states() {
            out.accepting[offset + q] = m.is_accepting(q);
            out.edges[offset + q] = m.out_edges(q).iter().map(|&(c, t)| (c, offset + t)).collect();
        }
        let init: Vec<(Cube, usize)> = out.edges[offset + m.initial()].clone();
        out.edges[0].extend(init);
    }
    Ok(out.reachable_part())
}

/// Existential projection: deletes `track` from every edge label and from the
/// signature.
pub fn project_track(a: &OmegaAutomaton, track: usize) -> Result<OmegaAutomaton> {
    if track >= a.width() {
        return Err(Error::TrackOutOfRange {
            track,
            width: a.width(),
        });
    }
    let mut out = a.clone();
    out.signature = a.signature().without_track(track);
    for edges in &mut out.edges {
        for (c, _) in edges.iter_mut() {
            *c = c.drop_track(track);
        }
    }
    out.simplify_edges();
    Ok(out)
}

/// Deterministic co-Büchi automaton over `signature` accepting exactly the
/// words whose track `tracks[i]` equals track `i` of `w`, other tracks free.
pub fn word_automaton(signature: TrackSignature, w: &LassoWord, tracks: &[usize]) -> Result<OmegaAutomaton> {
    if tracks.len() != w.width() {
        return Err(Error::WidthMismatch {
            expected: tracks.len(),
            found: w.width(),
        });
    }
    if let Some(&t) = tracks.iter().find(|&&t| t >= signature.width()) {
        return Err(Error::TrackOutOfRange {
            track: t,
            width: signature.width(),
        });
    }
    let mut out = OmegaAutomaton::new(Acceptance::CoBuchi, signature, w.len(), 0)?;
    for p in 0..w.len() {
        let sym = w.symbol_at(p);
        let cube = tracks
            .iter()
            .enumerate()
            .fold(Cube::TOP, |c, (i, &t)| c.with(t, sym.bit(i)));
        out.accepting[p] = true;
        out.edges[p].push((cube, w.next_phase(p)));
    }
    Ok(out)
}
