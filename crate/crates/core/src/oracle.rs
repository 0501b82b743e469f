//! Brute-force semantics of S1S on lasso words.
//!
//! The evaluator never consults an automaton. First-order quantifiers range
//! over a finite window of positions. For formulas without `<` and without
//! second-order quantifiers the window `[0, |u| + |v|)` is exact: every atom
//! mentions one variable, and the membership profile of a position `p ≥ |u|`
//! depends only on `(p - |u|) mod |v|`. Formulas with `<` get a window that
//! grows with the quantifier depth, so an inner variable can always be placed
//! at least one full period after every outer one.
//!
//! Second-order quantifiers are either enumerated over a bounded class of
//! lasso-shaped sets, which is one-sided, or handed to a caller-supplied hook.
//! [`close_existential`] is such a hook's building block: it asks the compiler
//! for a witness and confirms it with the evaluator.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::OmegaAutomaton;
use crate::automaton::{intersect, is_empty, word_automaton};
use crate::compiler::compile_with_signature;
use crate::error::{Error, Result};
use crate::formula::{to_nnf, Formula, TrackSignature};
use crate::word::{lcm, LassoWord, Symbol};

/// Values of free first-order variables.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Extra prefix length `P` of candidate second-order witnesses.
    pub so_prefix_bound: usize,
    /// Candidate witness loops have length `M · |v|`.
    pub so_period_mult: usize,
    /// Multiplies the loop-length part of every first-order window.
    pub fo_window_mult: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            so_prefix_bound: 2,
            so_period_mult: 2,
            fo_window_mult: 1,
        }
    }
}

/// Sets presented as lassos with exactly this prefix and loop length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoClass {
    pub prefix_len: usize,
    pub loop_len: usize,
}

impl SoClass {
    /// The class searched by [`eval_exists_so`] for a word of shape `(u, v)`.
    pub fn relative_to(w: &LassoWord, cfg: &OracleConfig) -> SoClass {
        let w = w.canonicalize();
        SoClass {
            prefix_len: w.prefix().len() + cfg.so_prefix_bound,
            loop_len: w.cycle().len() * cfg.so_period_mult.max(1),
        }
    }

    pub fn size(&self) -> u128 {
        1u128 << (self.prefix_len + self.loop_len)
    }

    /// The `i`-th set of the class, bit `j` of `i` giving position `j`.
    pub fn member(&self, i: u64) -> LassoWord {
        let bit = |j: usize| Symbol(i >> j & 1);
        LassoWord::new(
            1,
            (0..self.prefix_len).map(bit).collect(),
            (self.prefix_len..self.prefix_len + self.loop_len).map(bit).collect(),
        )
        .expect("nonempty loop")
    }
}

/// A word read as a structure: named sets and named positions.
#[derive(Debug, Clone)]
pub struct Interpretation {
    word: LassoWord,
    sig: TrackSignature,
    fo: Vec<(String, usize)>,
    sets: Vec<(String, LassoWord)>,
}

impl Interpretation {
    /// Second-order variables of `sig` denote tracks of `w`; first-order
    /// values come from `asg` (first-order tracks of `w` are not consulted).
    pub fn new(w: &LassoWord, sig: &TrackSignature, asg: &Assignment) -> Result<Self> {
        if w.width() != sig.width() {
            return Err(Error::WidthMismatch {
                expected: sig.width(),
                found: w.width(),
            });
        }
        Ok(Interpretation {
            word: w.canonicalize(),
            sig: sig.clone(),
            fo: asg.iter().map(|(k, &v)| (k.clone(), v)).collect(),
            sets: Vec::new(),
        })
    }

    /// Reads a valid model: first-order values are the positions of the 1s
    /// on the first-order tracks.
    pub fn of_model(w: &LassoWord, sig: &TrackSignature) -> Result<Self> {
        let positions = w
            .fo_positions(sig)?
            .ok_or_else(|| Error::InvalidLasso(format!("`{w}` is not a valid model over `{sig}`")))?;
        let asg = sig.fo_vars().iter().cloned().zip(positions).collect();
        Interpretation::new(w, sig, &asg)
    }

    pub fn position(&self, x: &str) -> Result<usize> {
        self.fo
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|&(_, p)| p)
            .ok_or_else(|| Error::UnboundVariable(x.into()))
    }

    pub fn member(&self, set: &str, p: usize) -> Result<bool> {
        if let Some((_, s)) = self.sets.iter().rev().find(|(n, _)| n == set) {
            return Ok(s.symbol_at(p).bit(0));
        }
        match self.sig.track_of(set) {
            Some(t) if !self.sig.is_fo_track(t) => Ok(self.word.symbol_at(p).bit(t)),
            _ => Err(Error::UnmappedVariable(set.into())),
        }
    }

    /// Prefix length and loop length of a common presentation of the word
    /// and every bound set.
    pub fn shape(&self) -> (usize, usize) {
        self.sets
            .iter()
            .fold((self.word.prefix().len(), self.word.cycle().len()), |(u, v), (_, s)| {
                (u.max(s.prefix().len()), lcm(v, s.cycle().len()))
            })
    }

    fn max_position(&self) -> Option<usize> {
        self.fo.iter().map(|&(_, p)| p).max()
    }

    /// Encodes the current values of the named variables as a valid model
    /// over the signature `(fo | so)`.
    pub fn encode(&self, fo: &[String], so: &[String]) -> Result<(TrackSignature, LassoWord)> {
        let sig = TrackSignature::new(fo.to_vec(), so.to_vec())?;
        let positions = fo.iter().map(|x| self.position(x)).collect::<Result<Vec<_>>>()?;
        let (u, v) = self.shape();
        let prefix_len = positions.iter().map(|p| p + 1).fold(u, usize::max);
        let at = |p: usize| -> Result<Symbol> {
            let mut bits = 0u64;
            for (i, &q) in positions.iter().enumerate() {
                bits |= ((q == p) as u64) << i;
            }
            for (j, set) in so.iter().enumerate() {
                bits |= (self.member(set, p)? as u64) << (fo.len() + j);
            }
            Ok(Symbol(bits))
        };
        let prefix = (0..prefix_len).map(at).collect::<Result<Vec<_>>>()?;
        let cycle = (prefix_len..prefix_len + v).map(at).collect::<Result<Vec<_>>>()?;
        Ok((sig.clone(), LassoWord::new(sig.width(), prefix, cycle)?))
    }
}

/// Callback deciding a second-order quantifier node under an interpretation.
pub type SoHook<'a> = dyn FnMut(&Formula, &Interpretation) -> Result<bool> + 'a;

enum SoMode<'a, 'b> {
    Forbidden,
    Bounded(SoClass),
    Hook(&'a mut SoHook<'b>),
}

struct Evaluator<'a, 'b> {
    cfg: OracleConfig,
    /// Depth-dependent windows (formula uses `<` or second-order quantifiers).
    order: bool,
    so: SoMode<'a, 'b>,
}

impl Evaluator<'_, '_> {
    fn window(&self, it: &Interpretation, depth: usize) -> usize {
        let (u, v) = it.shape();
        let v = v * self.cfg.fo_window_mult.max(1);
        if self.order {
            let base = it.max_position().map_or(u, |p| u.max(p + 1));
            base + (depth + 2) * v
        } else {
            u + v
        }
    }

    fn eval(&mut self, f: &Formula, it: &mut Interpretation, depth: usize) -> Result<bool> {
        Ok(match f {
            Formula::In(t, set) => it.member(set, it.position(&t.var)? + t.shift as usize)?,
            Formula::Less(a, b) => {
                let (l, r) = (
                    it.position(&a.var)? + a.shift as usize,
                    it.position(&b.var)? + b.shift as usize,
                );
                l < r
            }
            Formula::Not(g) => !self.eval(g, it, depth)?,
            Formula::And(a, b) => self.eval(a, it, depth)? && self.eval(b, it, depth)?,
            Formula::Or(a, b) => self.eval(a, it, depth)? || self.eval(b, it, depth)?,
            Formula::ExistsFo(x, g) | Formula::ForallFo(x, g) => {
                let universal = matches!(f, Formula::ForallFo(..));
                let window = self.window(it, depth);
                let mut result = universal;
                for p in 0..window {
                    it.fo.push((x.clone(), p));
                    let r = self.eval(g, it, depth + 1);
                    it.fo.pop();
                    if r? != universal {
                        result = !universal;
                        break;
                    }
                }
                result
            }
            Formula::ExistsSo(x, g) | Formula::ForallSo(x, g) => {
                let universal = matches!(f, Formula::ForallSo(..));
                match &mut self.so {
                    SoMode::Forbidden => return Err(Error::SecondOrderQuantifier(x.clone())),
                    SoMode::Hook(hook) => hook(f, it)?,
                    SoMode::Bounded(class) => {
                        let class = *class;
                        let mut result = universal;
                        for i in 0..class.size() as u64 {
                            it.sets.push((x.clone(), class.member(i)));
                            let r = self.eval(g, it, depth);
                            it.sets.pop();
                            if r? != universal {
                                result = !universal;
                                break;
                            }
                        }
                        result
                    }
                }
            }
        })
    }
}

fn run(f: &Formula, it: &mut Interpretation, cfg: &OracleConfig, so: SoMode<'_, '_>) -> Result<bool> {
    // A leading block of set binders is decided before any position is
    // chosen, so it does not force depth-dependent windows.
    let matrix = f.split_so_prefix().1;
    let mut ev = Evaluator {
        cfg: *cfg,
        order: matrix.contains_order() || matrix.contains_so_quantifier(),
        so,
    };
    ev.eval(f, it, 0)
}

/// Truth of a formula without second-order quantifiers.
pub fn eval_fo(f: &Formula, w: &LassoWord, sig: &TrackSignature, asg: &Assignment, cfg: &OracleConfig) -> Result<bool> {
    run(f, &mut Interpretation::new(w, sig, asg)?, cfg, SoMode::Forbidden)
}

/// [`eval_fo`] on a valid model, first-order values read from its tracks.
pub fn eval_model(f: &Formula, w: &LassoWord, sig: &TrackSignature, cfg: &OracleConfig) -> Result<bool> {
    run(f, &mut Interpretation::of_model(w, sig)?, cfg, SoMode::Forbidden)
}

/// Truth of `exists X_1 … X_k. φ` with `φ` free of second-order quantifiers,
/// searching witnesses in [`SoClass::relative_to`]. `true` is always correct;
/// `false` only means that no witness lies in the searched class.
pub fn eval_exists_so(
    f: &Formula,
    w: &LassoWord,
    sig: &TrackSignature,
    asg: &Assignment,
    cfg: &OracleConfig,
) -> Result<bool> {
    if let Some(x) = first_so_binder(f.split_so_prefix().1) {
        return Err(Error::SecondOrderQuantifier(x));
    }
    eval_bounded(f, w, sig, asg, cfg, SoClass::relative_to(w, cfg))
}

/// Like [`eval_exists_so`] on a valid model.
pub fn eval_exists_so_model(f: &Formula, w: &LassoWord, sig: &TrackSignature, cfg: &OracleConfig) -> Result<bool> {
    let it = Interpretation::of_model(w, sig)?;
    let asg = it.fo.iter().cloned().collect();
    eval_exists_so(f, w, sig, &asg, cfg)
}

fn first_so_binder(f: &Formula) -> Option<String> {
    let mut found = None;
    f.visit(&mut |g| {
        if let Formula::ExistsSo(x, _) | Formula::ForallSo(x, _) = g {
            found.get_or_insert_with(|| x.clone());
        }
    });
    found
}

/// Full S1S evaluation with every second-order quantifier ranging over
/// `class` only.
pub fn eval_bounded(
    f: &Formula,
    w: &LassoWord,
    sig: &TrackSignature,
    asg: &Assignment,
    cfg: &OracleConfig,
    class: SoClass,
) -> Result<bool> {
    run(f, &mut Interpretation::new(w, sig, asg)?, cfg, SoMode::Bounded(class))
}

/// Full S1S evaluation in which every second-order quantifier node is
/// decided by `hook`.
pub fn eval_with_hook(
    f: &Formula,
    w: &LassoWord,
    sig: &TrackSignature,
    asg: &Assignment,
    cfg: &OracleConfig,
    hook: &mut SoHook<'_>,
) -> Result<bool> {
    run(f, &mut Interpretation::new(w, sig, asg)?, cfg, SoMode::Hook(hook))
}

/// Result of asking the compiler for second-order witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    /// Witness sets (one track per bound set, in binder order) that the
    /// evaluator confirmed on the matrix.
    Confirmed(LassoWord),
    /// The compiled automaton rejects: no witness exists.
    NoWitness,
    /// The automaton produced a witness the evaluator did not confirm.
    Unconfirmed(LassoWord),
}

/// Decides `exists X_1 … X_k. φ` (first-order `φ`) through the compiler and
/// confirms witnesses with [`eval_fo`]. Compiled matrices are cached per
/// formula, so one closer can serve many interpretations.
#[derive(Debug)]
pub struct Closer {
    cfg: OracleConfig,
    cache: Vec<(Formula, OmegaAutomaton)>,
    memo: BTreeMap<(usize, LassoWord), Closure>,
    /// Witnesses the automaton produced but the evaluator rejected.
    pub unresolved: Vec<String>,
}

impl Closer {
    pub fn new(cfg: OracleConfig) -> Self {
        Closer {
            cfg,
            cache: Vec::new(),
            memo: BTreeMap::new(),
            unresolved: Vec::new(),
        }
    }

    pub fn close(&mut self, f: &Formula, it: &Interpretation) -> Result<Closure> {
        let (binders, matrix) = f.split_so_prefix();
        let (fo, so) = f.free_variables_ordered();
        let (sig, w) = it.encode(&fo, &so)?;
        let mut ext = sig.clone();
        for x in &binders {
            if ext.contains(x) {
                return Err(Error::InvalidSignature(format!(
                    "bound set `{x}` shadows a free variable"
                )));
            }
            ext = ext.with_var(x)?;
        }
        let index = match self.cache.iter().position(|(g, _)| g == f) {
            Some(i) => i,
            None => {
                self.cache.push((f.clone(), compile_with_signature(matrix, &ext)?));
                self.cache.len() - 1
            }
        };
        let key = (index, w.canonicalize());
        if let Some(known) = self.memo.get(&key) {
            return Ok(known.clone());
        }
        let result = self.close_uncached(index, &binders, matrix, &fo, &sig, &ext, &w, it)?;
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    #[allow(clippy::too_many_arguments)]
    fn close_uncached(
        &self,
        index: usize,
        binders: &[&str],
        matrix: &Formula,
        fo: &[String],
        sig: &TrackSignature,
        ext: &TrackSignature,
        w: &LassoWord,
        it: &Interpretation,
    ) -> Result<Closure> {
        let a = &self.cache[index].1;
        let pinned = word_automaton(ext.clone(), w, &(0..sig.width()).collect::<Vec<_>>())?;
        let Some(witness) = is_empty(&intersect(a, &pinned)?) else {
            return Ok(Closure::NoWitness);
        };
        let sets = witness.map_symbols(binders.len(), |s| Symbol(s.0 >> sig.width()));
        let asg: Assignment = fo
            .iter()
            .map(|x| Ok((x.clone(), it.position(x)?)))
            .collect::<Result<_>>()?;
        Ok(if eval_fo(matrix, &witness, ext, &asg, &self.cfg)? {
            Closure::Confirmed(sets)
        } else {
            Closure::Unconfirmed(sets)
        })
    }

    /// Hook for [`eval_with_hook`]: `exists X. ψ` directly, `forall X. ψ` as
    /// `!exists X. !ψ`. Unconfirmed witnesses are recorded in
    /// [`Closer::unresolved`] and treated as absent.
    pub fn decide(&mut self, q: &Formula, it: &Interpretation) -> Result<bool> {
        let (target, universal) = match q {
            Formula::ExistsSo(..) => (q.clone(), false),
            Formula::ForallSo(x, body) => (
                Formula::exists_so(x.clone(), to_nnf(&Formula::negate((**body).clone()))),
                true,
            ),
            _ => return Err(Error::InvalidSignature("not a second-order quantifier".into())),
        };
        let found = match self.close(&target, it)? {
            Closure::Confirmed(_) => true,
            Closure::NoWitness => false,
            Closure::Unconfirmed(w) => {
                self.unresolved.push(format!("{target} with witness {w}"));
                false
            }
        };
        Ok(found != universal)
    }
}

/// One-off [`Closer::close`].
pub fn close_existential(f: &Formula, it: &Interpretation, cfg: &OracleConfig) -> Result<Closure> {
    Closer::new(*cfg).close(f, it)
}

impl core::fmt::Display for Closure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Closure::Confirmed(w) => write!(f, "confirmed {w}"),
            Closure::NoWitness => f.write_str("no witness"),
            Closure::Unconfirmed(w) => write!(f, "unconfirmed {w}"),
        }
    }
}
