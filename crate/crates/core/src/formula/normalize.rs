//! Negation normal form and the quantifier-scope normal forms the compiler
//! relies on.
//!
//! [`normalize_for_compilation`] reshapes every universal first-order
//! quantifier so that its scope is a disjunction of literals over the bound
//! variable alone; [`normalize_for_deterministic`] additionally reshapes every
//! existential first-order quantifier so that its scope is a conjunction of
//! such literals. Both apply a fixed set of rewrite rules (distribution through
//! clausal forms and pulling out subformulas in which the bound variable is not
//! free) and report [`Error::NormalizationFailure`] when the rules do not
//! suffice.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::Formula;
use crate::error::{Error, Result};

/// Pushes negations down to atoms, dualizing connectives and quantifiers.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::In(..) | Formula::Less(..) => {
            if negate {
                Formula::negate(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(g) => nnf(g, !negate),
        Formula::And(a, b) if negate => Formula::or(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => Formula::and(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) if negate => Formula::and(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) => Formula::or(nnf(a, false), nnf(b, false)),
        Formula::ExistsFo(v, g) if negate => Formula::forall_fo(v.clone(), nnf(g, true)),
        Formula::ExistsFo(v, g) => Formula::exists_fo(v.clone(), nnf(g, false)),
        Formula::ForallFo(v, g) if negate => Formula::exists_fo(v.clone(), nnf(g, true)),
        Formula::ForallFo(v, g) => Formula::forall_fo(v.clone(), nnf(g, false)),
        Formula::ExistsSo(v, g) if negate => Formula::forall_so(v.clone(), nnf(g, true)),
        Formula::ExistsSo(v, g) => Formula::exists_so(v.clone(), nnf(g, false)),
        Formula::ForallSo(v, g) if negate => Formula::exists_so(v.clone(), nnf(g, true)),
        Formula::ForallSo(v, g) => Formula::forall_so(v.clone(), nnf(g, false)),
    }
}

/// Rewrites every `forall x. φ` into a conjunction of `ψ | forall x. (l_1 | … | l_k)`
/// where the `l_i` are membership literals over `x` and `x` is not free in `ψ`.
///
/// Expects NNF input. Fails when a universal scope contains a quantified
/// subformula in which the universally bound variable is free.
pub fn normalize_for_compilation(f: &Formula) -> Result<Formula> {
    normalize(f, false)
}

/// Like [`normalize_for_compilation`], and additionally rewrites every
/// `exists x. φ` into a disjunction of `ψ & exists x. (l_1 & … & l_k)`.
pub fn normalize_for_deterministic(f: &Formula) -> Result<Formula> {
    normalize(f, true)
}

fn normalize(f: &Formula, existential: bool) -> Result<Formula> {
    Ok(match f {
        Formula::In(..) | Formula::Less(..) => f.clone(),
        Formula::Not(g) if g.is_literal() => f.clone(),
        Formula::Not(_) => {
            return Err(Error::NormalizationFailure(format!(
                "{f} (negation above a non-atomic formula)"
            )))
        }
        Formula::And(a, b) => Formula::and(normalize(a, existential)?, normalize(b, existential)?),
        Formula::Or(a, b) => Formula::or(normalize(a, existential)?, normalize(b, existential)?),
        Formula::ForallFo(x, body) => {
            let body = normalize(body, existential)?;
            let clauses = simplify(clausal(&body, Shape::Cnf));
            let parts = clauses
                .into_iter()
                .map(|clause| scope_block(x, clause, Shape::Cnf))
                .collect::<Result<Vec<_>>>()?;
            Formula::conjunction(parts).expect("clausal form is never empty")
        }
        Formula::ExistsFo(x, body) if existential => {
            let body = normalize(body, existential)?;
            let terms = simplify(clausal(&body, Shape::Dnf));
            let parts = terms
                .into_iter()
                .map(|term| scope_block(x, term, Shape::Dnf))
                .collect::<Result<Vec<_>>>()?;
            Formula::disjunction(parts).expect("clausal form is never empty")
        }
        Formula::ExistsFo(v, g) => Formula::exists_fo(v.clone(), normalize(g, existential)?),
        Formula::ExistsSo(v, g) => Formula::exists_so(v.clone(), normalize(g, existential)?),
        Formula::ForallSo(v, g) => Formula::forall_so(v.clone(), normalize(g, existential)?),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// Conjunction of disjunctions.
    Cnf,
    /// Disjunction of conjunctions.
    Dnf,
}

/// Flattens the boolean skeleton of `f`; any non-boolean node is a unit.
fn clausal(f: &Formula, shape: Shape) -> Vec<Vec<Formula>> {
    match (f, shape) {
        (Formula::And(a, b), Shape::Cnf) | (Formula::Or(a, b), Shape::Dnf) => {
            let mut out = clausal(a, shape);
            out.extend(clausal(b, shape));
            out
        }
        (Formula::Or(a, b), Shape::Cnf) | (Formula::And(a, b), Shape::Dnf) => {
            let left = clausal(a, shape);
            let right = clausal(b, shape);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        _ => vec![vec![f.clone()]],
    }
}

fn complementary(a: &Formula, b: &Formula) -> bool {
    match (a, b) {
        (Formula::Not(g), other) | (other, Formula::Not(g)) => **g == *other,
        _ => false,
    }
}

/// Deduplicates units, drops trivial blocks (a clause containing a literal and
/// its negation, or a term likewise) unless every block is trivial, and
/// removes blocks subsumed by a smaller one.
fn simplify(blocks: Vec<Vec<Formula>>) -> Vec<Vec<Formula>> {
    let mut deduped: Vec<Vec<Formula>> = blocks
        .into_iter()
        .map(|b| {
            let mut out: Vec<Formula> = Vec::with_capacity(b.len());
            for u in b {
                if !out.contains(&u) {
                    out.push(u);
                }
            }
            out
        })
        .collect();
    let trivial = |b: &Vec<Formula>| {
        b.iter()
            .enumerate()
            .any(|(i, u)| b[i + 1..].iter().any(|v| complementary(u, v)))
    };
    if deduped.iter().any(|b| !trivial(b)) {
        deduped.retain(|b| !trivial(b));
    } else {
        deduped.truncate(1);
    }
    let mut kept: Vec<Vec<Formula>> = Vec::new();
    for (i, b) in deduped.iter().enumerate() {
        let subsumed = deduped.iter().enumerate().any(|(j, other)| {
            j != i
                && other.iter().all(|u| b.contains(u))
                && (other.len() < b.len() || (other.len() == b.len() && j < i))
        });
        if !subsumed {
            kept.push(b.clone());
        }
    }
    kept
}

/// Builds `R | forall x. L` (CNF block) or `R & exists x. L` (DNF block).
fn scope_block(x: &str, block: Vec<Formula>, shape: Shape) -> Result<Formula> {
    let mut bound = Vec::new();
    let mut rest = Vec::new();
    for unit in block {
        if !unit.is_free(x) {
            rest.push(unit);
        } else if matches!(literal_atom(&unit), Some(Formula::In(..))) {
            bound.push(unit);
        } else {
            return Err(Error::NormalizationFailure(format!("{unit}")));
        }
    }
    type Join = fn(Formula, Formula) -> Formula;
    type Bind = fn(&str, Formula) -> Formula;
    let (join, quantify): (Join, Bind) = match shape {
        Shape::Cnf => (Formula::or, |x, f| Formula::ForallFo(x.into(), Box::new(f))),
        Shape::Dnf => (Formula::and, |x, f| Formula::ExistsFo(x.into(), Box::new(f))),
    };
    if !bound.is_empty() {
        let scope = bound.into_iter().reduce(join).expect("non-empty");
        rest.push(quantify(x, scope));
    }
    Ok(rest.into_iter().reduce(join).expect("block is never empty"))
}

fn literal_atom(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::In(..) | Formula::Less(..) => Some(f),
        Formula::Not(g) if g.is_literal() => Some(g),
        _ => None,
    }
}

/// The syntactic post-condition of [`normalize_for_compilation`]: every
/// universal first-order scope is a disjunction of membership literals over
/// the bound variable only.
pub fn is_forall_normalized(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| {
        if let Formula::ForallFo(x, body) = g {
            ok &= literal_block_over(body, x, Shape::Cnf);
        }
    });
    ok
}

/// Every existential first-order scope is a conjunction of membership literals
/// over the bound variable only.
pub fn is_exists_normalized(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| {
        if let Formula::ExistsFo(x, body) = g {
            ok &= literal_block_over(body, x, Shape::Dnf);
        }
    });
    ok
}

fn literal_block_over(f: &Formula, x: &str, shape: Shape) -> bool {
    match (f, shape) {
        (Formula::Or(a, b), Shape::Cnf) | (Formula::And(a, b), Shape::Dnf) => {
            literal_block_over(a, x, shape) && literal_block_over(b, x, shape)
        }
        _ => match literal_atom(f) {
            Some(Formula::In(t, _)) => t.var == x,
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn de_morgan() {
        assert_eq!(to_nnf(&p("!(x in X & y in Y)")), p("x notin X | y notin Y"));
    }

    #[test]
    fn quantifier_duality() {
        assert_eq!(to_nnf(&p("!exists x. x in X")), p("forall x. x notin X"));
        assert_eq!(to_nnf(&p("!forall X. x in X")), p("exists X. x notin X"));
    }

    #[test]
    fn double_negation() {
        assert_eq!(to_nnf(&p("!!x in X")), p("x in X"));
        assert_eq!(to_nnf(&p("!!!(x < y)")), p("!(x < y)"));
    }

    #[test]
    fn forall_distributes_over_and() {
        assert_eq!(
            normalize_for_compilation(&p("forall x. x in X & x in Y")).unwrap(),
            p("(forall x. x in X) & (forall x. x in Y)")
        );
    }

    #[test]
    fn forall_pulls_out_free_disjunct() {
        assert_eq!(
            normalize_for_compilation(&p("forall x. y in Z | x in X")).unwrap(),
            p("y in Z | (forall x. x in X)")
        );
    }

    #[test]
    fn forall_over_exists_with_bound_variable_fails() {
        let err = normalize_for_compilation(&p("forall x. exists y. x in X | y in X")).unwrap_err();
        assert_eq!(err, Error::NormalizationFailure("exists y. x in X | y in X".into()));
    }

    #[test]
    fn deterministic_normalizer_miniscopes_exists() {
        let f = normalize_for_deterministic(&p("forall x. exists y. x in X | y in X")).unwrap();
        assert_eq!(f, p("(exists y. y in X) | (forall x. x in X)"));
        assert!(is_forall_normalized(&f) && is_exists_normalized(&f));
    }

    #[test]
    fn existential_distribution_over_or() {
        let f = normalize_for_deterministic(&p("exists x. x in X & y in Y | s x notin X")).unwrap();
        assert_eq!(f, p("y in Y & (exists x. x in X) | (exists x. s x notin X)"));
    }

    #[test]
    fn tautological_clause_kept_when_alone() {
        let f = normalize_for_compilation(&p("forall x. x in X | x notin X")).unwrap();
        assert_eq!(f, p("forall x. x in X | x notin X"));
    }

    #[test]
    fn subsumed_clauses_dropped() {
        let f = normalize_for_compilation(&p("forall x. x in X & (x in X | s x in Y)")).unwrap();
        assert_eq!(f, p("forall x. x in X"));
    }

    #[test]
    fn postcondition_holds() {
        let f = normalize_for_compilation(&p("forall x. (x in X & s x in Y) | (y in Y & s s x notin X)")).unwrap();
        assert!(is_forall_normalized(&f), "{f}");
    }
}
