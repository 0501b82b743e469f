//! Abstract syntax of S1S formulas over successor-shifted terms.
//!
//! First-order variables start with a lowercase letter and second-order
//! variables with an uppercase letter; no declarations are needed.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

mod normalize;
mod parse;
mod rename;
mod translate;

pub use normalize::{
    is_exists_normalized, is_forall_normalized, normalize_for_compilation, normalize_for_deterministic, to_nnf,
};
pub use parse::parse_formula;
pub use rename::{is_uniquified, uniquify, FreshNames};
pub use translate::{order_to_successor, successor_to_order};

/// `s^shift var`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub var: String,
    pub shift: u32,
}

impl Term {
    pub fn new(var: impl Into<String>, shift: u32) -> Self {
        Term { var: var.into(), shift }
    }

    pub fn var(var: impl Into<String>) -> Self {
        Term::new(var, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.shift {
            f.write_str("s ")?;
        }
        f.write_str(&self.var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// `t in X`
    In(Term, String),
    /// `t < t`
    Less(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ExistsFo(String, Box<Formula>),
    ForallFo(String, Box<Formula>),
    ExistsSo(String, Box<Formula>),
    ForallSo(String, Box<Formula>),
}

/// Returns true for names following the first-order (leading lowercase) convention.
pub fn is_first_order_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

/// Returns true for names following the second-order (leading uppercase) convention.
pub fn is_second_order_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl Formula {
    pub fn atom_in(var: impl Into<String>, shift: u32, set: impl Into<String>) -> Self {
        Formula::In(Term::new(var, shift), set.into())
    }

    pub fn atom_notin(var: impl Into<String>, shift: u32, set: impl Into<String>) -> Self {
        Formula::negate(Formula::atom_in(var, shift, set))
    }

    pub fn less(left: Term, right: Term) -> Self {
        Formula::Less(left, right)
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a -> b`, encoded as `!a | b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::negate(a), b)
    }

    pub fn exists_fo(var: impl Into<String>, body: Formula) -> Self {
        Formula::ExistsFo(var.into(), Box::new(body))
    }

    pub fn forall_fo(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForallFo(var.into(), Box::new(body))
    }

    pub fn exists_so(var: impl Into<String>, body: Formula) -> Self {
        Formula::ExistsSo(var.into(), Box::new(body))
    }

    pub fn forall_so(var: impl Into<String>, body: Formula) -> Self {
        Formula::ForallSo(var.into(), Box::new(body))
    }

    /// Left-nested conjunction of a non-empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction of a non-empty list.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Free first-order and second-order variables.
    pub fn free_variables(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let (fo, so) = self.free_variables_ordered();
        (fo.into_iter().collect(), so.into_iter().collect())
    }

    /// Free variables in order of first occurrence (left to right).
    pub fn free_variables_ordered(&self) -> (Vec<String>, Vec<String>) {
        let mut fo = Vec::new();
        let mut so = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut fo, &mut so);
        (fo, so)
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, fo: &mut Vec<String>, so: &mut Vec<String>) {
        let note = |name: &str, out: &mut Vec<String>, bound: &Vec<&str>| {
            if !bound.contains(&name) && !out.iter().any(|n| n == name) {
                out.push(name.to_string());
            }
        };
        match self {
            Formula::In(t, set) => {
                note(&t.var, fo, bound);
                note(set, so, bound);
            }
            Formula::Less(a, b) => {
                note(&a.var, fo, bound);
                note(&b.var, fo, bound);
            }
            Formula::Not(g) => g.collect_free(bound, fo, so),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, fo, so);
                b.collect_free(bound, fo, so);
            }
            Formula::ExistsFo(v, g) | Formula::ForallFo(v, g) | Formula::ExistsSo(v, g) | Formula::ForallSo(v, g) => {
                bound.push(v);
                g.collect_free(bound, fo, so);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, name: &str) -> bool {
        let (fo, so) = self.free_variables_ordered();
        fo.iter().chain(so.iter()).any(|n| n == name)
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::In(t, set) => {
                out.insert(t.var.clone());
                out.insert(set.clone());
            }
            Formula::Less(a, b) => {
                out.insert(a.var.clone());
                out.insert(b.var.clone());
            }
            Formula::ExistsFo(v, _) | Formula::ForallFo(v, _) | Formula::ExistsSo(v, _) | Formula::ForallSo(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::In(..) | Formula::Less(..) => {}
            Formula::Not(g)
            | Formula::ExistsFo(_, g)
            | Formula::ForallFo(_, g)
            | Formula::ExistsSo(_, g)
            | Formula::ForallSo(_, g) => g.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn contains_order(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Less(..)));
        found
    }

    pub fn contains_so_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::ExistsSo(..) | Formula::ForallSo(..)));
        found
    }

    pub fn fo_quantifier_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(f, Formula::ExistsFo(..) | Formula::ForallFo(..)) {
                n += 1
            }
        });
        n
    }

    /// Largest successor shift used by any term.
    pub fn max_shift(&self) -> u32 {
        let mut k = 0;
        self.visit(&mut |f| match f {
            Formula::In(t, _) => k = k.max(t.shift),
            Formula::Less(a, b) => k = k.max(a.shift).max(b.shift),
            _ => {}
        });
        k
    }

    /// True for `t in X` and `!(t in X)`.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::In(..) | Formula::Less(..) => true,
            Formula::Not(g) => matches!(**g, Formula::In(..) | Formula::Less(..)),
            _ => false,
        }
    }

    /// Whether the formula is in negation normal form.
    pub fn is_nnf(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if let Formula::Not(g) = f {
                ok &= matches!(**g, Formula::In(..) | Formula::Less(..));
            }
        });
        ok
    }

    /// Splits a leading block of `ExistsSo` binders from the matrix.
    pub fn split_so_prefix(&self) -> (Vec<&str>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::ExistsSo(v, body) = cur {
            vars.push(v.as_str());
            cur = body;
        }
        (vars, cur)
    }

    /// Replaces free occurrences of first-order `from` by `to` (which must not be captured).
    pub fn rename_free_fo(&self, from: &str, to: &str) -> Formula {
        let ren = |t: &Term| {
            if t.var == from {
                Term::new(to, t.shift)
            } else {
                t.clone()
            }
        };
        match self {
            Formula::In(t, set) => Formula::In(ren(t), set.clone()),
            Formula::Less(a, b) => Formula::Less(ren(a), ren(b)),
            Formula::Not(g) => Formula::negate(g.rename_free_fo(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free_fo(from, to), b.rename_free_fo(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free_fo(from, to), b.rename_free_fo(from, to)),
            Formula::ExistsFo(v, _) | Formula::ForallFo(v, _) if v == from => self.clone(),
            Formula::ExistsFo(v, g) => Formula::exists_fo(v.clone(), g.rename_free_fo(from, to)),
            Formula::ForallFo(v, g) => Formula::forall_fo(v.clone(), g.rename_free_fo(from, to)),
            Formula::ExistsSo(v, g) => Formula::exists_so(v.clone(), g.rename_free_fo(from, to)),
            Formula::ForallSo(v, g) => Formula::forall_so(v.clone(), g.rename_free_fo(from, to)),
        }
    }

    /// Textual rendering in the concrete syntax accepted by [`parse_formula`].
    pub fn render(&self) -> String {
        format!("{self}")
    }
}

/// True iff `f` is a (possibly empty) block of `ExistsSo` binders over a matrix
/// free of second-order quantifiers.
pub fn check_existential_shape(f: &Formula) -> bool {
    let (_, matrix) = f.split_so_prefix();
    !matrix.contains_so_quantifier()
}

// Rendering precedence: larger binds tighter.
const PREC_QUANT: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_ATOM: u8 = 4;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::In(..) | Formula::Less(..) => PREC_ATOM,
        Formula::Not(g) if matches!(**g, Formula::In(..)) => PREC_ATOM,
        Formula::Not(_) => PREC_NOT,
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        _ => PREC_QUANT,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula, needs_parens: bool) -> fmt::Result {
    if needs_parens {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::In(t, set) => write!(f, "{t} in {set}"),
            Formula::Less(a, b) => write!(f, "{a} < {b}"),
            Formula::Not(g) => match &**g {
                Formula::In(t, set) => write!(f, "{t} notin {set}"),
                _ => {
                    f.write_str("!")?;
                    write_operand(f, g, precedence(g) < PREC_NOT)
                }
            },
            Formula::And(a, b) => {
                write_operand(f, a, precedence(a) < PREC_AND)?;
                f.write_str(" & ")?;
                write_operand(f, b, precedence(b) <= PREC_AND)
            }
            Formula::Or(a, b) => {
                write_operand(f, a, precedence(a) < PREC_OR)?;
                f.write_str(" | ")?;
                write_operand(f, b, precedence(b) <= PREC_OR)
            }
            Formula::ExistsFo(v, g) | Formula::ExistsSo(v, g) => write!(f, "exists {v}. {g}"),
            Formula::ForallFo(v, g) | Formula::ForallSo(v, g) => write!(f, "forall {v}. {g}"),
        }
    }
}

/// Ordered assignment of variables to bit-tracks: first-order variables occupy
/// tracks `0..n`, the `j`-th second-order variable occupies track `n + j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TrackSignature {
    fo: Vec<String>,
    so: Vec<String>,
}

impl TrackSignature {
    pub fn new(fo: Vec<String>, so: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in &fo {
            if !is_first_order_name(name) {
                return Err(Error::InvalidSignature(format!("`{name}` is not a first-order name")));
            }
        }
        for name in &so {
            if !is_second_order_name(name) {
                return Err(Error::InvalidSignature(format!("`{name}` is not a second-order name")));
            }
        }
        for name in fo.iter().chain(so.iter()) {
            if !seen.insert(name) {
                return Err(Error::InvalidSignature(format!("duplicate name `{name}`")));
            }
        }
        Ok(TrackSignature { fo, so })
    }

    /// Convenience constructor from string slices; panics on invalid input.
    pub fn from_names(fo: &[&str], so: &[&str]) -> Self {
        TrackSignature::new(
            fo.iter().map(|s| s.to_string()).collect(),
            so.iter().map(|s| s.to_string()).collect(),
        )
        .expect("valid signature")
    }

    /// Signature of the free variables in first-occurrence order.
    pub fn of_formula(f: &Formula) -> Self {
        let (fo, so) = f.free_variables_ordered();
        TrackSignature { fo, so }
    }

    pub fn fo_vars(&self) -> &[String] {
        &self.fo
    }

    pub fn so_vars(&self) -> &[String] {
        &self.so
    }

    pub fn fo_count(&self) -> usize {
        self.fo.len()
    }

    pub fn so_count(&self) -> usize {
        self.so.len()
    }

    pub fn width(&self) -> usize {
        self.fo.len() + self.so.len()
    }

    pub fn track_of(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.fo.iter().position(|n| n == name) {
            return Some(i);
        }
        self.so.iter().position(|n| n == name).map(|j| self.fo.len() + j)
    }

    pub fn name_of(&self, track: usize) -> Option<&str> {
        if track < self.fo.len() {
            Some(&self.fo[track])
        } else {
            self.so.get(track - self.fo.len()).map(String::as_str)
        }
    }

    pub fn is_fo_track(&self, track: usize) -> bool {
        track < self.fo.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.track_of(name).is_some()
    }

    /// Appends a variable (to the first-order or second-order block by case).
    pub fn with_var(&self, name: &str) -> Result<Self> {
        let mut fo = self.fo.clone();
        let mut so = self.so.clone();
        if is_first_order_name(name) {
            fo.push(name.to_string());
        } else {
            so.push(name.to_string());
        }
        TrackSignature::new(fo, so)
    }

    /// Drops one track, shifting the tracks above it down by one.
    pub fn without_track(&self, track: usize) -> Self {
        let mut out = self.clone();
        if track < out.fo.len() {
            out.fo.remove(track);
        } else {
            out.so.remove(track - self.fo.len());
        }
        out
    }

    /// True if every variable of `self` occurs in `other`.
    pub fn is_subset_of(&self, other: &TrackSignature) -> bool {
        self.fo.iter().all(|n| other.fo.contains(n)) && self.so.iter().all(|n| other.so.contains(n))
    }
}

impl fmt::Display for TrackSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in &self.fo {
            if !first {
                f.write_str(" ")?;
            }
            f.write_str(n)?;
            first = false;
        }
        f.write_str(if first { "|" } else { " |" })?;
        for n in &self.so {
            write!(f, " {n}")?;
        }
        Ok(())
    }
}
