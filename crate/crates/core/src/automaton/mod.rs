//! Büchi and co-Büchi automata over bit-vector alphabets.
//!
//! Edges carry [`Cube`] labels, so an edge stands for every symbol agreeing
//! with its non-`*` tracks. States are dense integers; every construction in
//! this module returns an automaton pruned to its reachable part.

mod cube;
mod determinize;
pub(crate) mod graph;
mod membership;
mod ops;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub(crate) use cube::mask as cube_mask;
pub use cube::{complement as complement_cubes, disjoint_union, merge as merge_cubes, refine, Cube};
pub use determinize::{complement_deterministic, contains, equivalent, miyano_hayashi, ncw_to_nbw};
pub use membership::{accepts_lasso, is_empty};
pub use ops::{intersect, intersect_all, project_track, union, word_automaton};

use crate::error::{Error, Result};
use crate::formula::TrackSignature;
use crate::word::MAX_WIDTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Acceptance {
    /// Some accepting state is visited infinitely often.
    Buchi,
    /// Non-accepting states are visited only finitely often.
    CoBuchi,
}

impl Acceptance {
    pub fn dual(self) -> Acceptance {
        match self {
            Acceptance::Buchi => Acceptance::CoBuchi,
            Acceptance::CoBuchi => Acceptance::Buchi,
        }
    }
}

impl fmt::Display for Acceptance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Acceptance::Buchi => "buchi",
            Acceptance::CoBuchi => "cobuchi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub cube: Cube,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaAutomaton {
    acceptance: Acceptance,
    signature: TrackSignature,
    initial: usize,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Cube, usize)>>,
}

impl OmegaAutomaton {
    /// An automaton with `states` states and no edges or accepting states.
    pub fn new(acceptance: Acceptance, signature: TrackSignature, states: usize, initial: usize) -> Result<Self> {
        if signature.width() > MAX_WIDTH {
            return Err(Error::InvalidAutomaton(format!(
                "{} tracks exceed the maximum of {MAX_WIDTH}",
                signature.width()
            )));
        }
        if initial >= states {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range for {states} states"
            )));
        }
        Ok(OmegaAutomaton {
            acceptance,
            signature,
            initial,
            accepting: vec![false; states],
            edges: vec![Vec::new(); states],
        })
    }

    /// One state with a `*` self-loop, accepting every word.
    pub fn accept_all(signature: TrackSignature, acceptance: Acceptance) -> Self {
        let mut a = OmegaAutomaton::new(acceptance, signature, 1, 0).expect("valid");
        a.accepting[0] = true;
        a.edges[0].push((Cube::TOP, 0));
        a
    }

    /// One non-accepting state with a `*` self-loop.
    pub fn reject_all(signature: TrackSignature, acceptance: Acceptance) -> Self {
        let mut a = OmegaAutomaton::accept_all(signature, acceptance);
        a.accepting[0] = false;
        a
    }

    pub fn set_accepting(&mut self, state: usize, accepting: bool) -> Result<()> {
        self.check_state(state)?;
        self.accepting[state] = accepting;
        Ok(())
    }

    pub fn add_edge(&mut self, source: usize, cube: Cube, target: usize) -> Result<()> {
        self.check_state(source)?;
        self.check_state(target)?;
        if cube.care() & !cube::mask(self.width()) != 0 {
            return Err(Error::InvalidAutomaton(format!(
                "edge label constrains tracks beyond width {}",
                self.width()
            )));
        }
        self.edges[source].push((cube, target));
        Ok(())
    }

    fn check_state(&self, state: usize) -> Result<()> {
        if state >= self.num_states() {
            return Err(Error::InvalidAutomaton(format!(
                "state {state} out of range for {} states",
                self.num_states()
            )));
        }
        Ok(())
    }

    pub fn acceptance(&self) -> Acceptance {
        self.acceptance
    }

    pub fn signature(&self) -> &TrackSignature {
        &self.signature
    }

    pub fn width(&self) -> usize {
        self.signature.width()
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn out_edges(&self, state: usize) -> &[(Cube, usize)] {
        &self.edges[state]
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(source, out)| out.iter().map(move |&(cube, target)| Edge { source, cube, target }))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Same automaton over a signature of equal width (tracks renamed).
    pub fn with_signature(mut self, signature: TrackSignature) -> Result<Self> {
        if signature.width() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                found: signature.width(),
            });
        }
        self.signature = signature;
        Ok(self)
    }

    /// Same transition structure read under the other acceptance condition.
    pub fn with_acceptance(mut self, acceptance: Acceptance) -> Self {
        self.acceptance = acceptance;
        self
    }

    pub(crate) fn successor_lists(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|out| {
                let mut s: Vec<usize> = out.iter().map(|&(_, t)| t).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    /// Every state has pairwise disjoint outgoing cubes.
    pub fn is_deterministic(&self) -> bool {
        self.edges.iter().all(|out| {
            out.iter()
                .enumerate()
                .all(|(i, (a, _))| out[i + 1..].iter().all(|(b, _)| !a.intersects(*b)))
        })
    }

    /// Every state has an outgoing edge for every symbol.
    pub fn is_complete(&self) -> bool {
        let width = self.width();
        self.edges.iter().all(|out| {
            let cubes: Vec<Cube> = out.iter().map(|&(c, _)| c).collect();
            let covered: u128 = disjoint_union(&cubes).iter().map(|c| c.size(width)).sum();
            covered == 1u128 << width
        })
    }

    /// Adds a non-accepting sink receiving every symbol a state has no edge
    /// for. Returns the automaton unchanged when it is already complete.
    pub fn complete(&self) -> OmegaAutomaton {
        let gaps: Vec<Vec<Cube>> = self
            .edges
            .iter()
            .map(|out| complement_cubes(&out.iter().map(|&(c, _)| c).collect::<Vec<_>>()))
            .collect();
        if gaps.iter().all(Vec::is_empty) {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.num_states();
        out.accepting.push(false);
        out.edges.push(vec![(Cube::TOP, sink)]);
        for (q, gap) in gaps.into_iter().enumerate() {
            out.edges[q].extend(gap.into_iter().map(|c| (c, sink)));
        }
        out
    }

    /// Fails unless the automaton is deterministic and complete.
    pub fn require_deterministic_complete(&self) -> Result<()> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic("deterministic"));
        }
        if !self.is_complete() {
            return Err(Error::NotDeterministic("complete"));
        }
        Ok(())
    }

    pub fn require_acceptance(&self, expected: Acceptance) -> Result<()> {
        if self.acceptance != expected {
            return Err(Error::WrongAcceptance {
                expected,
                found: self.acceptance,
            });
        }
        Ok(())
    }

    /// Keeps the states for which `keep` holds, renumbered in breadth-first
    /// order from the initial state; edges into dropped states are removed.
    /// The initial state must be kept.
    fn restrict(&self, keep: &[bool]) -> OmegaAutomaton {
        debug_assert!(keep[self.initial]);
        let mut id = vec![usize::MAX; self.num_states()];
        let mut order = vec![self.initial];
        id[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            for &(_, t) in &self.edges[order[i]] {
                if keep[t] && id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                }
            }
            i += 1;
        }
        let mut out = OmegaAutomaton::new(self.acceptance, self.signature.clone(), order.len(), 0).expect("valid");
        for (new, &old) in order.iter().enumerate() {
            out.accepting[new] = self.accepting[old];
            out.edges[new] = self.edges[old]
                .iter()
                .filter(|&&(_, t)| keep[t])
                .map(|&(c, t)| (c, id[t]))
                .collect();
        }
        out
    }

    /// Drops unreachable states.
    pub fn reachable_part(&self) -> OmegaAutomaton {
        self.restrict(&vec![true; self.num_states()])
    }

    /// States from which some accepting run can start. The language is
    /// unchanged when all other states are removed.
    fn productive(&self) -> Vec<bool> {
        let adj = self.successor_lists();
        let reach = graph::reachable(&adj, [self.initial]);
        let mut good = vec![false; self.num_states()];
        match self.acceptance {
            Acceptance::CoBuchi => {
                let inner: Vec<Vec<usize>> = adj
                    .iter()
                    .enumerate()
                    .map(|(q, s)| {
                        if self.accepting[q] {
                            s.iter().copied().filter(|&t| self.accepting[t]).collect()
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                let roots = (0..self.num_states()).filter(|&q| reach[q] && self.accepting[q]);
                for comp in graph::sccs(&inner, roots) {
                    if graph::is_nontrivial(&inner, &comp) {
                        comp.iter().for_each(|&q| good[q] = true);
                    }
                }
            }
            Acceptance::Buchi => {
                for comp in graph::sccs(&adj, [self.initial]) {
                    if graph::is_nontrivial(&adj, &comp) && comp.iter().any(|&q| self.accepting[q]) {
                        comp.iter().for_each(|&q| good[q] = true);
                    }
                }
            }
        }
        let rev = graph::reverse(&adj);
        let roots: Vec<usize> = (0..self.num_states()).filter(|&q| good[q]).collect();
        graph::reachable(&rev, roots)
    }

    /// Removes states that are unreachable or cannot lie on an accepting run.
    /// An empty language yields a single rejecting state without edges. Does
    /// not preserve completeness.
    pub fn trim(&self) -> OmegaAutomaton {
        let keep = self.productive();
        if !keep[self.initial] {
            return OmegaAutomaton::new(self.acceptance, self.signature.clone(), 1, 0).expect("valid");
        }
        self.restrict(&keep)
    }

    /// Merges edges that share source and target into as few cubes as the
    /// pairwise merge finds.
    pub fn simplify_edges(&mut self) {
        for out in &mut self.edges {
            *out = merge_by_target(core::mem::take(out));
        }
    }
}

fn merge_by_target(edges: Vec<(Cube, usize)>) -> Vec<(Cube, usize)> {
    let mut groups: BTreeMap<usize, Vec<Cube>> = BTreeMap::new();
    let mut order = Vec::new();
    for (c, t) in edges {
        let g = groups.entry(t).or_default();
        if g.is_empty() {
            order.push(t);
        }
        g.push(c);
    }
    let mut out = Vec::new();
    for t in order {
        let mut cubes = groups.remove(&t).unwrap();
        merge_cubes(&mut cubes);
        out.extend(cubes.into_iter().map(|c| (c, t)));
    }
    out
}

/// Breadth-first construction of the reachable part of an implicitly given
/// automaton whose states are values of `S`.
pub(crate) fn explore<S: Ord + Clone>(
    acceptance: Acceptance,
    signature: TrackSignature,
    initial: S,
    mut accepting: impl FnMut(&S) -> bool,
    mut successors: impl FnMut(&S) -> Vec<(Cube, S)>,
) -> OmegaAutomaton {
    let mut ids: BTreeMap<S, usize> = BTreeMap::new();
    let mut states = vec![initial.clone()];
    ids.insert(initial, 0);
    let mut flags = Vec::new();
    let mut edges = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i].clone();
        flags.push(accepting(&s));
        let mut out = Vec::new();
        for (c, t) in successors(&s) {
            let id = *ids.entry(t.clone()).or_insert_with(|| {
                states.push(t);
                states.len() - 1
            });
            out.push((c, id));
        }
        edges.push(merge_by_target(out));
        i += 1;
    }
    OmegaAutomaton {
        acceptance,
        signature,
        initial: 0,
        accepting: flags,
        edges,
    }
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;

    #[test]
    fn construction_is_validated() {
        assert!(OmegaAutomaton::new(Acceptance::Buchi, sig(1), 1, 1).is_err());
        let mut a = OmegaAutomaton::new(Acceptance::Buchi, sig(1), 2, 0).unwrap();
        assert!(a.add_edge(0, Cube::TOP, 2).is_err());
        assert!(a.add_edge(0, Cube::literal(1, true), 1).is_err());
        assert!(a.set_accepting(5, true).is_err());
    }

    #[test]
    fn determinism_and_completeness() {
        let ea = eventually_always_one(Acceptance::CoBuchi);
        assert!(!ea.is_deterministic());
        assert!(!ea.is_complete());
        let always = always_one();
        assert!(always.is_deterministic() && !always.is_complete());
        let done = always.complete();
        assert!(done.is_deterministic() && done.is_complete());
        assert_eq!(done.num_states(), 2);
        assert!(!done.is_accepting(1));
        assert!(OmegaAutomaton::accept_all(sig(0), Acceptance::Buchi).is_complete());
    }

    #[test]
    fn reachable_part_drops_dead_states() {
        let mut a = OmegaAutomaton::new(Acceptance::CoBuchi, sig(1), 3, 0).unwrap();
        a.add_edge(0, Cube::TOP, 2).unwrap();
        a.add_edge(2, Cube::TOP, 2).unwrap();
        a.add_edge(1, Cube::TOP, 0).unwrap();
        let r = a.reachable_part();
        assert_eq!(r.num_states(), 2);
        assert_eq!(r.out_edges(0), &[(Cube::TOP, 1)]);
    }

    #[test]
    fn trim_keeps_language_states_only() {
        let mut a = eventually_always_one(Acceptance::CoBuchi);
        a.set_accepting(1, false).unwrap();
        let t = a.trim();
        assert_eq!(t.num_states(), 1);
        assert_eq!(t.edge_count(), 0);
        assert_eq!(eventually_always_one(Acceptance::CoBuchi).trim().num_states(), 2);
    }
}
