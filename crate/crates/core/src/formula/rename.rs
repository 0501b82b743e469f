use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Formula, Term};

/// Generator of names of the form `base_N` that avoid a set of taken names.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    taken: BTreeSet<String>,
    next: BTreeMap<String, usize>,
}

impl FreshNames {
    pub fn avoiding(taken: impl IntoIterator<Item = String>) -> Self {
        FreshNames {
            taken: taken.into_iter().collect(),
            next: BTreeMap::new(),
        }
    }

    pub fn reserve(&mut self, name: &str) {
        self.taken.insert(name.into());
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let counter = self.next.entry(base.into()).or_insert(1);
        loop {
            let candidate = format!("{base}_{counter}");
            *counter += 1;
            if self.taken.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}

/// Alpha-renames binders so that no name is bound twice and no bound name
/// shadows a free one. Names that are already unique are kept; every binder
/// of a clashing name gets `name_N` in pre-order traversal order.
pub fn uniquify(f: &Formula) -> Formula {
    let (free_fo, free_so) = f.free_variables();
    let mut binders: BTreeMap<String, usize> = BTreeMap::new();
    f.visit(&mut |g| match g {
        Formula::ExistsFo(v, _) | Formula::ForallFo(v, _) | Formula::ExistsSo(v, _) | Formula::ForallSo(v, _) => {
            *binders.entry(v.clone()).or_default() += 1
        }
        _ => {}
    });
    let clashing: BTreeSet<String> = binders
        .into_iter()
        .filter(|(name, count)| *count > 1 || free_fo.contains(name) || free_so.contains(name))
        .map(|(name, _)| name)
        .collect();
    let mut fresh = FreshNames::avoiding(f.all_names());
    let mut scope = Vec::new();
    rename(f, &clashing, &mut fresh, &mut scope)
}

fn lookup<'a>(scope: &'a [(String, String)], name: &'a str) -> &'a str {
    scope
        .iter()
        .rev()
        .find(|(from, _)| from == name)
        .map_or(name, |(_, to)| to.as_str())
}

fn rename(
    f: &Formula,
    clashing: &BTreeSet<String>,
    fresh: &mut FreshNames,
    scope: &mut Vec<(String, String)>,
) -> Formula {
    let term = |t: &Term, scope: &[(String, String)]| Term::new(lookup(scope, &t.var), t.shift);
    match f {
        Formula::In(t, set) => Formula::In(term(t, scope), lookup(scope, set).into()),
        Formula::Less(a, b) => Formula::Less(term(a, scope), term(b, scope)),
        Formula::Not(g) => Formula::negate(rename(g, clashing, fresh, scope)),
        Formula::And(a, b) => {
            let a = rename(a, clashing, fresh, scope);
            Formula::and(a, rename(b, clashing, fresh, scope))
        }
        Formula::Or(a, b) => {
            let a = rename(a, clashing, fresh, scope);
            Formula::or(a, rename(b, clashing, fresh, scope))
        }
        Formula::ExistsFo(v, g) | Formula::ForallFo(v, g) | Formula::ExistsSo(v, g) | Formula::ForallSo(v, g) => {
            let new = if clashing.contains(v) {
                fresh.fresh(v)
            } else {
                v.clone()
            };
            scope.push((v.clone(), new.clone()));
            let body = rename(g, clashing, fresh, scope);
            scope.pop();
            match f {
                Formula::ExistsFo(..) => Formula::exists_fo(new, body),
                Formula::ForallFo(..) => Formula::forall_fo(new, body),
                Formula::ExistsSo(..) => Formula::exists_so(new, body),
                _ => Formula::forall_so(new, body),
            }
        }
    }
}

/// True if no name is bound twice and no bound name is also free.
pub fn is_uniquified(f: &Formula) -> bool {
    let (fo, so) = f.free_variables();
    let mut seen = BTreeSet::new();
    let mut ok = true;
    f.visit(&mut |g| match g {
        Formula::ExistsFo(v, _) | Formula::ForallFo(v, _) | Formula::ExistsSo(v, _) | Formula::ForallSo(v, _) => {
            ok &= seen.insert(v.clone()) && !fo.contains(v) && !so.contains(v);
        }
        _ => {}
    });
    ok
}
