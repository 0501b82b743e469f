use alloc::vec;
use alloc::vec::Vec;

use super::{graph, Acceptance, Cube, OmegaAutomaton};
use crate::error::{Error, Result};
use crate::word::LassoWord;

/// Whether some run of `a` over `w` is accepting.
///
/// Works on the product of `a` with the positions of `w`, where the position
/// after the last loop symbol wraps back to the loop start.
pub fn accepts_lasso(a: &OmegaAutomaton, w: &LassoWord) -> Result<bool> {
    if a.width() != w.width() {
        return Err(Error::WidthMismatch {
            expected: a.width(),
            found: w.width(),
        });
    }
    let len = w.len();
    let node = |q: usize, p: usize| q * len + p;
    let mut adj = vec![Vec::new(); a.num_states() * len];
    let mut seen = vec![false; adj.len()];
    let start = node(a.initial(), 0);
    seen[start] = true;
    let mut todo = vec![(a.initial(), 0)];
    while let Some((q, p)) = todo.pop() {
        let sym = w.symbol_at(p);
        let np = w.next_phase(p);
        let mut succ = Vec::new();
        for &(c, t) in a.out_edges(q) {
            if c.matches(sym) {
                let n = node(t, np);
                succ.push(n);
                if !seen[n] {
                    seen[n] = true;
                    todo.push((t, np));
                }
            }
        }
        adj[node(q, p)] = succ;
    }
    let in_f = |n: usize| a.is_accepting(n / len);
    Ok(match a.acceptance() {
        Acceptance::CoBuchi => {
            let inner: Vec<Vec<usize>> = adj
                .iter()
                .enumerate()
                .map(|(n, s)| {
                    if in_f(n) {
                        s.iter().copied().filter(|&m| in_f(m)).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let roots = (0..adj.len()).filter(|&n| seen[n] && in_f(n));
            graph::sccs(&inner, roots)
                .iter()
                .any(|c| graph::is_nontrivial(&inner, c))
        }
        Acceptance::Buchi => graph::sccs(&adj, [start])
            .iter()
            .any(|c| graph::is_nontrivial(&adj, c) && c.iter().any(|&n| in_f(n))),
    })
}

/// A lasso accepted by `a`, or `None` if the language is empty. Unconstrained
/// tracks of the witness are 0 and the witness is canonical.
pub fn is_empty(a: &OmegaAutomaton) -> Option<LassoWord> {
    let adj = a.successor_lists();
    let reach = graph::reachable(&adj, [a.initial()]);
    let (anchor, inside) = match a.acceptance() {
        Acceptance::CoBuchi => {
            let inner: Vec<Vec<usize>> = adj
                .iter()
                .enumerate()
                .map(|(q, s)| {
                    if a.is_accepting(q) {
                        s.iter().copied().filter(|&t| a.is_accepting(t)).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let roots = (0..a.num_states()).filter(|&q| reach[q] && a.is_accepting(q));
            let comp = graph::sccs(&inner, roots)
                .into_iter()
                .filter(|c| graph::is_nontrivial(&inner, c))
                .min_by_key(|c| c.iter().min().copied())?;
            (*comp.iter().min().unwrap(), comp)
        }
        Acceptance::Buchi => {
            let comp = graph::sccs(&adj, [a.initial()])
                .into_iter()
                .filter(|c| graph::is_nontrivial(&adj, c) && c.iter().any(|&q| a.is_accepting(q)))
                .min_by_key(|c| c.iter().min().copied())?;
            (comp.iter().copied().filter(|&q| a.is_accepting(q)).min().unwrap(), comp)
        }
    };
    let mut member = vec![false; a.num_states()];
    inside.iter().for_each(|&q| member[q] = true);
    let prefix = if anchor == a.initial() {
        Vec::new()
    } else {
        path(a, a.initial(), anchor, &|_| true).expect("anchor is reachable")
    };
    let cycle = path(a, anchor, anchor, &|q| member[q]).expect("anchor lies on a cycle");
    let inst = |cs: Vec<Cube>| cs.into_iter().map(Cube::instantiate).collect();
    let w = LassoWord::new(a.width(), inst(prefix), inst(cycle))
        .expect("nonempty loop")
        .canonicalize();
    debug_assert!(accepts_lasso(a, &w).unwrap());
    Some(w)
}

/// Labels of a shortest path of at least one edge from `from` to `to`
/// through states satisfying `allowed`. For co-Büchi cycles `allowed` keeps
/// the path inside accepting states, since the component is F-only.
fn path(a: &OmegaAutomaton, from: usize, to: usize, allowed: &dyn Fn(usize) -> bool) -> Option<Vec<Cube>> {
    let mut parent: Vec<Option<(usize, Cube)>> = vec![None; a.num_states()];
    let mut queue = alloc::collections::VecDeque::from([from]);
    let walk = |parent: &[Option<(usize, Cube)>], mut q: usize, last: Cube| {
        let mut labels = vec![last];
        while q != from {
            let (p, c) = parent[q].unwrap();
            labels.push(c);
            q = p;
        }
        labels.reverse();
        labels
    };
    while let Some(q) = queue.pop_front() {
        for &(c, t) in a.out_edges(q) {
            if !allowed(t) {
                continue;
            }
            if t == to {
                return Some(walk(&parent, q, c));
            }
            if t != from && parent[t].is_none() {
                parent[t] = Some((q, c));
                queue.push_back(t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    fn w(s: &str) -> LassoWord {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_one_state_machines() {
        let all = OmegaAutomaton::accept_all(sig(2), Acceptance::CoBuchi);
        let none = OmegaAutomaton::reject_all(sig(2), Acceptance::CoBuchi);
        for s in ["; 00", "10 11 ; 01 00", "; 11 10"] {
            assert!(accepts_lasso(&all, &w(s)).unwrap());
            assert!(!accepts_lasso(&none, &w(s)).unwrap());
        }
        assert!(accepts_lasso(&all, &w("; 0")).is_err());
    }

    #[test]
    fn eventually_always_one_membership() {
        let a = eventually_always_one(Acceptance::CoBuchi);
        assert!(accepts_lasso(&a, &w("; 1")).unwrap());
        assert!(!accepts_lasso(&a, &w("1 ; 0")).unwrap());
        assert!(accepts_lasso(&a, &w("0 0 1 ; 1 1")).unwrap());
        assert!(!accepts_lasso(&a, &w("; 1 0")).unwrap());
        let b = eventually_always_one(Acceptance::Buchi);
        assert!(accepts_lasso(&b, &w("0 ; 1")).unwrap());
        assert!(!accepts_lasso(&b, &w("; 1 0")).unwrap());
    }

    #[test]
    fn emptiness_witnesses() {
        assert_eq!(is_empty(&OmegaAutomaton::reject_all(sig(1), Acceptance::CoBuchi)), None);
        let a = eventually_always_one(Acceptance::CoBuchi);
        let wit = is_empty(&a).unwrap();
        assert!(accepts_lasso(&a, &wit).unwrap());
        assert_eq!(wit, w("; 1"));

        let mut b = OmegaAutomaton::new(Acceptance::Buchi, sig(1), 2, 0).unwrap();
        b.add_edge(0, Cube::TOP, 0).unwrap();
        b.add_edge(1, Cube::TOP, 1).unwrap();
        b.set_accepting(1, true).unwrap();
        assert_eq!(is_empty(&b), None);
    }

    #[test]
    fn width_zero_witness() {
        let a = OmegaAutomaton::accept_all(sig(0), Acceptance::Buchi);
        assert_eq!(is_empty(&a).unwrap().to_string(), "; -");
    }

    #[test]
    fn emptiness_agrees_with_exhaustive_membership() {
        let mut r = rng(7);
        let words = crate::word::enumerate_lassos(1, 4);
        for i in 0..200 {
            let kind = if i % 2 == 0 {
                Acceptance::Buchi
            } else {
                Acceptance::CoBuchi
            };
            let a = random_automaton(&mut r, 3, 1, kind);
            match is_empty(&a) {
                Some(wit) => assert!(accepts_lasso(&a, &wit).unwrap()),
                None => assert!(words.iter().all(|x| !accepts_lasso(&a, x).unwrap())),
            }
        }
    }
}
