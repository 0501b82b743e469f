//! Ultimately periodic words `u·v^ω` over bit-vector alphabets, used as the
//! finite presentation of models.
//!
//! Track `i` of a symbol is bit `i`. A word over a [`TrackSignature`] encodes
//! a model: first-order tracks are characteristic words of singletons and
//! second-order tracks are characteristic words of sets.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::TrackSignature;

/// Maximum number of tracks a symbol can carry.
pub const MAX_WIDTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Symbol(pub u64);

impl Symbol {
    pub fn bit(self, track: usize) -> bool {
        self.0 >> track & 1 == 1
    }

    pub fn with_bit(self, track: usize, value: bool) -> Symbol {
        if value {
            Symbol(self.0 | 1 << track)
        } else {
            Symbol(self.0 & !(1 << track))
        }
    }

    /// Removes `track`, moving higher tracks down by one.
    pub fn drop_track(self, track: usize) -> Symbol {
        let low = self.0 & ((1u64 << track) - 1);
        let high = if track + 1 >= 64 { 0 } else { self.0 >> (track + 1) };
        Symbol(low | high << track)
    }

    /// Inserts `value` at `track`, moving tracks at and above it up by one.
    pub fn insert_track(self, track: usize, value: bool) -> Symbol {
        let low = self.0 & ((1u64 << track) - 1);
        let high = (self.0 >> track) << (track + 1);
        Symbol(low | high | (value as u64) << track)
    }

    pub fn render(self, width: usize) -> String {
        if width == 0 {
            return String::from("-");
        }
        (0..width).map(|t| if self.bit(t) { '1' } else { '0' }).collect()
    }
}

/// The ω-word `prefix · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    width: usize,
    prefix: Vec<Symbol>,
    cycle: Vec<Symbol>,
}

impl LassoWord {
    pub fn new(width: usize, prefix: Vec<Symbol>, cycle: Vec<Symbol>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidLasso("the loop must be non-empty".into()));
        }
        if width > MAX_WIDTH {
            return Err(Error::InvalidLasso(format!("width {width} exceeds {MAX_WIDTH}")));
        }
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        if prefix.iter().chain(&cycle).any(|s| s.0 & !mask != 0) {
            return Err(Error::InvalidLasso(format!("symbol wider than {width} tracks")));
        }
        Ok(LassoWord { width, prefix, cycle })
    }

    /// Builds a word from bit-strings such as `["10", "01"]`.
    pub fn from_bits(prefix: &[&str], cycle: &[&str]) -> Result<Self> {
        let width = prefix.iter().chain(cycle).map(|s| s.len()).next().unwrap_or(0);
        let parse = |s: &&str| parse_symbol(s, width);
        let prefix = prefix.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let cycle = cycle.iter().map(parse).collect::<Result<Vec<_>>>()?;
        LassoWord::new(width, prefix, cycle)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Symbol] {
        &self.cycle
    }

    /// `|u| + |v|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbol_at(&self, p: usize) -> Symbol {
        if p < self.prefix.len() {
            self.prefix[p]
        } else {
            self.cycle[(p - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Position reached after `p` in the product of this word with an
    /// automaton: `p + 1`, wrapping from the end of the loop to its start.
    pub fn next_phase(&self, p: usize) -> usize {
        if p + 1 < self.len() {
            p + 1
        } else {
            self.prefix.len()
        }
    }

    /// Shortest presentation: primitive loop, then the prefix rolled back into
    /// the loop as far as possible. Equal ω-words have equal canonical forms.
    pub fn canonicalize(&self) -> LassoWord {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|d| n.is_multiple_of(*d) && (0..n).all(|i| self.cycle[i] == self.cycle[i % d]))
            .unwrap_or(n);
        let mut cycle: Vec<Symbol> = self.cycle[..period].to_vec();
        let mut prefix = self.prefix.clone();
        while let (Some(&p), Some(&c)) = (prefix.last(), cycle.last()) {
            if p != c {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        LassoWord {
            width: self.width,
            prefix,
            cycle,
        }
    }

    /// Same ω-word presented with exactly `prefix_len ≥ |u|` prefix symbols
    /// and a loop of `loop_len` symbols, where `|v|` divides `loop_len`.
    pub fn unrolled(&self, prefix_len: usize, loop_len: usize) -> LassoWord {
        debug_assert!(prefix_len >= self.prefix.len() && loop_len.is_multiple_of(self.cycle.len()));
        LassoWord {
            width: self.width,
            prefix: (0..prefix_len).map(|p| self.symbol_at(p)).collect(),
            cycle: (prefix_len..prefix_len + loop_len).map(|p| self.symbol_at(p)).collect(),
        }
    }

    fn check_width(&self, sig: &TrackSignature) -> Result<()> {
        if sig.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: sig.width(),
                found: self.width,
            });
        }
        Ok(())
    }

    /// True iff every first-order track carries exactly one 1, necessarily in
    /// the prefix.
    pub fn is_valid_model(&self, sig: &TrackSignature) -> Result<bool> {
        self.check_width(sig)?;
        Ok((0..sig.fo_count())
            .all(|t| self.cycle.iter().all(|s| !s.bit(t)) && self.prefix.iter().filter(|s| s.bit(t)).count() == 1))
    }

    /// The positions encoded on the first-order tracks of a valid model.
    pub fn fo_positions(&self, sig: &TrackSignature) -> Result<Option<Vec<usize>>> {
        if !self.is_valid_model(sig)? {
            return Ok(None);
        }
        Ok(Some(
            (0..sig.fo_count())
                .map(|t| self.prefix.iter().position(|s| s.bit(t)).expect("valid model"))
                .collect(),
        ))
    }

    pub fn map_symbols(&self, width: usize, f: impl Fn(Symbol) -> Symbol) -> LassoWord {
        LassoWord {
            width,
            prefix: self.prefix.iter().map(|&s| f(s)).collect(),
            cycle: self.cycle.iter().map(|&s| f(s)).collect(),
        }
    }

    pub fn drop_track(&self, track: usize) -> LassoWord {
        self.map_symbols(self.width - 1, |s| s.drop_track(track))
    }

    /// The single track `track` as a width-1 word.
    pub fn track(&self, track: usize) -> LassoWord {
        self.map_symbols(1, |s| Symbol(s.bit(track) as u64))
    }

    /// Places the tracks of `other` above the tracks of `self`. The two words
    /// are first brought to a common presentation.
    pub fn zip(&self, other: &LassoWord) -> LassoWord {
        let prefix_len = self.prefix.len().max(other.prefix.len());
        let loop_len = lcm(self.cycle.len(), other.cycle.len());
        let at = |p: usize| Symbol(self.symbol_at(p).0 | other.symbol_at(p).0 << self.width);
        LassoWord {
            width: self.width + other.width,
            prefix: (0..prefix_len).map(at).collect(),
            cycle: (prefix_len..prefix_len + loop_len).map(at).collect(),
        }
    }

    /// Encodes first-order positions and second-order tracks as a model over
    /// `sig`: `sets` is a word of width `sig.so_count()`.
    pub fn encode_model(sig: &TrackSignature, positions: &[usize], sets: &LassoWord) -> Result<LassoWord> {
        if positions.len() != sig.fo_count() || sets.width != sig.so_count() {
            return Err(Error::WidthMismatch {
                expected: sig.width(),
                found: positions.len() + sets.width,
            });
        }
        let n = positions.len();
        let prefix_len = sets
            .prefix
            .len()
            .max(positions.iter().map(|p| p + 1).max().unwrap_or(0));
        let at = |p: usize| {
            let fo = positions
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &q)| acc | ((q == p) as u64) << i);
            Symbol(fo | sets.symbol_at(p).0 << n)
        };
        LassoWord::new(
            sig.width(),
            (0..prefix_len).map(at).collect(),
            (prefix_len..prefix_len + sets.cycle.len()).map(at).collect(),
        )
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn parse_symbol(s: &str, width: usize) -> Result<Symbol> {
    if s == "-" && width == 0 {
        return Ok(Symbol(0));
    }
    if s.len() != width {
        return Err(Error::InvalidLasso(format!(
            "symbol `{s}` has {} tracks, expected {width}",
            s.len()
        )));
    }
    s.chars().enumerate().try_fold(Symbol(0), |acc, (t, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc.with_bit(t, true)),
        _ => Err(Error::InvalidLasso(format!("bad bit `{c}` in `{s}`"))),
    })
}

/// Text format: bit-strings separated by spaces, prefix and loop separated by
/// `;` (for example `10 01 ; 00 01`). Width-0 symbols are written `-`.
impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.prefix {
            write!(f, "{} ", s.render(self.width))?;
        }
        f.write_str(";")?;
        for s in &self.cycle {
            write!(f, " {}", s.render(self.width))?;
        }
        Ok(())
    }
}

impl FromStr for LassoWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (u, v) = text
            .split_once(';')
            .ok_or_else(|| Error::InvalidLasso("missing `;` between prefix and loop".into()))?;
        let u: Vec<&str> = u.split_whitespace().collect();
        let v: Vec<&str> = v.split_whitespace().collect();
        let width = match u.iter().chain(&v).next() {
            Some(&"-") => 0,
            Some(s) => s.len(),
            None => return Err(Error::InvalidLasso("the loop must be non-empty".into())),
        };
        let prefix = u.iter().map(|s| parse_symbol(s, width)).collect::<Result<Vec<_>>>()?;
        let cycle = v.iter().map(|s| parse_symbol(s, width)).collect::<Result<Vec<_>>>()?;
        LassoWord::new(width, prefix, cycle)
    }
}

/// Every presentation `(u, v)` with `1 ≤ |u| + |v| ≤ max_len` and `|v| ≥ 1`
/// over `width` tracks. Distinct presentations may denote the same ω-word.
pub fn enumerate_lassos(width: usize, max_len: usize) -> Vec<LassoWord> {
    let alphabet = 1u64 << width;
    let mut out = Vec::new();
    for total in 1..=max_len {
        let count = alphabet.pow(total as u32);
        for prefix_len in 0..total {
            for code in 0..count {
                let mut c = code;
                let symbols: Vec<Symbol> = (0..total)
                    .map(|_| {
                        let s = Symbol(c % alphabet);
                        c /= alphabet;
                        s
                    })
                    .collect();
                out.push(LassoWord {
                    width,
                    prefix: symbols[..prefix_len].to_vec(),
                    cycle: symbols[prefix_len..].to_vec(),
                });
            }
        }
    }
    out
}

/// Valid models over `sig` among [`enumerate_lassos`]`(sig.width(), max_len)`.
pub fn enumerate_models(sig: &TrackSignature, max_len: usize) -> Vec<LassoWord> {
    enumerate_lassos(sig.width(), max_len)
        .into_iter()
        .filter(|w| w.is_valid_model(sig).unwrap_or(false))
        .collect()
}
