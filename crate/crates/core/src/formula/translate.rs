//! Translations between the order signature `(∈, <)` and the successor
//! signature `(∈, s)`.
//!
//! Both are purely syntactic. Neither output is in general inside the
//! compilable fragment: eliminating `<` introduces universal second-order
//! quantifiers, and eliminating successors introduces `<` atoms.

use alloc::format;
use alloc::string::String;

use super::{Formula, FreshNames, Term};
use crate::error::{Error, Result};

/// Replaces every `x < y` by
/// `forall X. (forall z. (s z in X -> z in X)) -> (y in X -> s x in X)`:
/// `y` lies in every predecessor-closed set that contains `x + 1`.
pub fn order_to_successor(f: &Formula) -> Result<Formula> {
    let mut fresh = FreshNames::avoiding(f.all_names());
    replace_order(f, &mut fresh)
}

fn replace_order(f: &Formula, fresh: &mut FreshNames) -> Result<Formula> {
    Ok(match f {
        Formula::In(..) => f.clone(),
        Formula::Less(a, b) => {
            for t in [a, b] {
                if t.shift != 0 {
                    return Err(Error::UnsupportedTerm(format!("{t}")));
                }
            }
            let set = fresh.fresh("X");
            let z = fresh.fresh("z");
            let closed = Formula::forall_fo(
                z.clone(),
                Formula::implies(
                    Formula::atom_in(z.clone(), 1, set.clone()),
                    Formula::atom_in(z, 0, set.clone()),
                ),
            );
            let below = Formula::implies(
                Formula::atom_in(b.var.clone(), 0, set.clone()),
                Formula::atom_in(a.var.clone(), 1, set.clone()),
            );
            Formula::forall_so(set, Formula::implies(closed, below))
        }
        Formula::Not(g) => Formula::negate(replace_order(g, fresh)?),
        Formula::And(a, b) => Formula::and(replace_order(a, fresh)?, replace_order(b, fresh)?),
        Formula::Or(a, b) => Formula::or(replace_order(a, fresh)?, replace_order(b, fresh)?),
        Formula::ExistsFo(v, g) => Formula::exists_fo(v.clone(), replace_order(g, fresh)?),
        Formula::ForallFo(v, g) => Formula::forall_fo(v.clone(), replace_order(g, fresh)?),
        Formula::ExistsSo(v, g) => Formula::exists_so(v.clone(), replace_order(g, fresh)?),
        Formula::ForallSo(v, g) => Formula::forall_so(v.clone(), replace_order(g, fresh)?),
    })
}

/// Replaces every atom mentioning a shifted term `s t` by
/// `exists x. succ(t, x) & atom[x / s t]`, one successor step at a time, where
/// `succ(t, x) = (forall y. t < y -> x < y | x = y) & t < x` and `x = y`
/// abbreviates `!(x < y) & !(y < x)`. The result uses only bare variables.
pub fn successor_to_order(f: &Formula) -> Formula {
    let mut fresh = FreshNames::avoiding(f.all_names());
    replace_successor(f, &mut fresh)
}

fn succ(pred: &str, next: &str, fresh: &mut FreshNames) -> Formula {
    let y = fresh.fresh("y");
    let lt = |a: &str, b: &str| Formula::Less(Term::var(a), Term::var(b));
    let eq = Formula::and(Formula::negate(lt(next, &y)), Formula::negate(lt(&y, next)));
    let least = Formula::forall_fo(y.clone(), Formula::implies(lt(pred, &y), Formula::or(lt(next, &y), eq)));
    Formula::and(least, lt(pred, next))
}

/// Introduces a chain of successor variables for `term`, then hands the bare
/// variable that denotes it to `atom`.
fn unshift(term: &Term, fresh: &mut FreshNames, atom: &mut dyn FnMut(String, &mut FreshNames) -> Formula) -> Formula {
    if term.shift == 0 {
        return atom(term.var.clone(), fresh);
    }
    let base = Term::new(term.var.clone(), term.shift - 1);
    unshift(&base, fresh, &mut |var: String, fresh: &mut FreshNames| {
        let next = fresh.fresh(&term.var);
        let constraint = succ(&var, &next, fresh);
        let inner = atom(next.clone(), fresh);
        Formula::exists_fo(next, Formula::and(constraint, inner))
    })
}

fn replace_successor(f: &Formula, fresh: &mut FreshNames) -> Formula {
    match f {
        Formula::In(t, set) => unshift(t, fresh, &mut |v, _| Formula::In(Term::var(v), set.clone())),
        Formula::Less(a, b) => unshift(a, fresh, &mut |va, fresh| {
            unshift(b, fresh, &mut |vb, _| {
                Formula::Less(Term::var(va.clone()), Term::var(vb))
            })
        }),
        Formula::Not(g) => Formula::negate(replace_successor(g, fresh)),
        Formula::And(a, b) => {
            let a = replace_successor(a, fresh);
            Formula::and(a, replace_successor(b, fresh))
        }
        Formula::Or(a, b) => {
            let a = replace_successor(a, fresh);
            Formula::or(a, replace_successor(b, fresh))
        }
        Formula::ExistsFo(v, g) => Formula::exists_fo(v.clone(), replace_successor(g, fresh)),
        Formula::ForallFo(v, g) => Formula::forall_fo(v.clone(), replace_successor(g, fresh)),
        Formula::ExistsSo(v, g) => Formula::exists_so(v.clone(), replace_successor(g, fresh)),
        Formula::ForallSo(v, g) => Formula::forall_so(v.clone(), replace_successor(g, fresh)),
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
    fn order_atom_shape() {
        let got = order_to_successor(&p("x < y")).unwrap();
        assert_eq!(
            got,
            p("forall X_1. !(forall z_1. s z_1 notin X_1 | z_1 in X_1) | (y notin X_1 | s x in X_1)")
        );
    }

    #[test]
    fn order_free_formula_unchanged() {
        let f = p("forall x. s x in X | exists Y. x notin Y");
        assert_eq!(order_to_successor(&f).unwrap(), f);
        assert_eq!(successor_to_order(&p("x in X & y < x")), p("x in X & y < x"));
    }

    #[test]
    fn shifted_order_atom_rejected() {
        assert!(matches!(
            order_to_successor(&p("s x < y")),
            Err(Error::UnsupportedTerm(_))
        ));
    }

    #[test]
    fn successor_atom_shape() {
        let got = successor_to_order(&p("s x in X"));
        assert_eq!(
            got,
            p("exists x_1. ((forall y_1. !(x < y_1) | (x_1 < y_1 | !(x_1 < y_1) & !(y_1 < x_1))) & x < x_1) & x_1 in X")
        );
        assert_eq!(successor_to_order(&p("s s x in X & s y < z")).max_shift(), 0);
    }
}
