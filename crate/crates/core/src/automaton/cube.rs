use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::word::Symbol;

/// A partial assignment of tracks: each track is `0`, `1` or `*`.
///
/// `care` marks constrained tracks; `value` holds their bits and is always a
/// subset of `care`, so every cube is satisfiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cube {
    care: u64,
    value: u64,
}

impl Cube {
    /// The cube matching every symbol.
    pub const TOP: Cube = Cube { care: 0, value: 0 };

    pub fn new(care: u64, value: u64) -> Cube {
        Cube {
            care,
            value: value & care,
        }
    }

    pub fn literal(track: usize, value: bool) -> Cube {
        Cube::TOP.with(track, value)
    }

    /// The cube fixing every track of `width` to the bits of `symbol`.
    pub fn point(symbol: Symbol, width: usize) -> Cube {
        Cube::new(mask(width), symbol.0)
    }

    pub fn care(self) -> u64 {
        self.care
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn get(self, track: usize) -> Option<bool> {
        (self.care >> track & 1 == 1).then_some(self.value >> track & 1 == 1)
    }

    pub fn with(self, track: usize, value: bool) -> Cube {
        let bit = 1u64 << track;
        Cube {
            care: self.care | bit,
            value: if value { self.value | bit } else { self.value & !bit },
        }
    }

    pub fn without(self, track: usize) -> Cube {
        let bit = !(1u64 << track);
        Cube {
            care: self.care & bit,
            value: self.value & bit,
        }
    }

    pub fn matches(self, symbol: Symbol) -> bool {
        symbol.0 & self.care == self.value
    }

    pub fn intersect(self, other: Cube) -> Option<Cube> {
        let shared = self.care & other.care;
        (self.value & shared == other.value & shared).then_some(Cube {
            care: self.care | other.care,
            value: self.value | other.value,
        })
    }

    pub fn intersects(self, other: Cube) -> bool {
        self.intersect(other).is_some()
    }

    /// True if every symbol matching `other` matches `self`.
    pub fn contains(self, other: Cube) -> bool {
        self.care & other.care == self.care && other.value & self.care == self.value
    }

    /// Deletes `track`, moving higher tracks down by one.
    pub fn drop_track(self, track: usize) -> Cube {
        Cube {
            care: Symbol(self.care).drop_track(track).0,
            value: Symbol(self.value).drop_track(track).0,
        }
    }

    /// Inserts an unconstrained track at `track`.
    pub fn insert_track(self, track: usize) -> Cube {
        Cube {
            care: Symbol(self.care).insert_track(track, false).0,
            value: Symbol(self.value).insert_track(track, false).0,
        }
    }

    /// Places `other`'s tracks above the first `width` tracks of `self`.
    pub fn concat(self, width: usize, other: Cube) -> Cube {
        Cube {
            care: self.care | other.care << width,
            value: self.value | other.value << width,
        }
    }

    /// The matching symbol with every `*` set to 0.
    pub fn instantiate(self) -> Symbol {
        Symbol(self.value)
    }

    /// Number of symbols over `width` tracks matched by the cube.
    pub fn size(self, width: usize) -> u128 {
        1u128 << (width - self.care.count_ones() as usize)
    }

    pub fn render(self, width: usize) -> String {
        if width == 0 {
            return String::from("-");
        }
        (0..width)
            .map(|t| match self.get(t) {
                None => '*',
                Some(true) => '1',
                Some(false) => '0',
            })
            .collect()
    }

    pub fn parse(text: &str, width: usize) -> Result<Cube> {
        if width == 0 && text == "-" {
            return Ok(Cube::TOP);
        }
        if text.len() != width {
            return Err(Error::InvalidAutomaton(format!(
                "cube `{text}` has {} tracks, expected {width}",
                text.len()
            )));
        }
        text.chars().enumerate().try_fold(Cube::TOP, |c, (t, ch)| match ch {
            '*' => Ok(c),
            '0' => Ok(c.with(t, false)),
            '1' => Ok(c.with(t, true)),
            _ => Err(Error::InvalidAutomaton(format!(
                "bad cube character `{ch}` in `{text}`"
            ))),
        })
    }
}

pub(crate) fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Splits `region` into disjoint cubes such that each of `cubes` either
/// contains or is disjoint from every piece. Pieces not covered by any cube
/// are included, so the pieces always cover `region` exactly.
pub fn refine(cubes: &[Cube], region: Cube) -> Vec<Cube> {
    let mut out = Vec::new();
    let live: Vec<Cube> = cubes.iter().copied().filter(|c| c.intersects(region)).collect();
    split(&live, region, &mut out);
    out
}

fn split(cubes: &[Cube], region: Cube, out: &mut Vec<Cube>) {
    let Some(pivot) = cubes.iter().find(|c| !c.contains(region)) else {
        out.push(region);
        return;
    };
    let free = pivot.care & !region.care;
    let track = free.trailing_zeros() as usize;
    for value in [false, true] {
        let half = region.with(track, value);
        let live: Vec<Cube> = cubes.iter().copied().filter(|c| c.intersects(half)).collect();
        split(&live, half, out);
    }
}

/// Disjoint cubes covering exactly the symbols matched by none of `cubes`.
pub fn complement(cubes: &[Cube]) -> Vec<Cube> {
    refine(cubes, Cube::TOP)
        .into_iter()
        .filter(|piece| !cubes.iter().any(|c| c.contains(*piece)))
        .collect()
}

/// Disjoint cubes covering the union of `cubes`.
pub fn disjoint_union(cubes: &[Cube]) -> Vec<Cube> {
    refine(cubes, Cube::TOP)
        .into_iter()
        .filter(|piece| cubes.iter().any(|c| c.contains(*piece)))
        .collect()
}

/// Merges cubes pairwise while the union stays a cube, and drops cubes
/// contained in others. The union of the list is unchanged.
pub fn merge(cubes: &mut Vec<Cube>) {
    loop {
        let mut changed = false;
        'scan: for i in 0..cubes.len() {
            for j in 0..cubes.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (cubes[i], cubes[j]);
                if a.contains(b) {
                    cubes.remove(j);
                    changed = true;
                    break 'scan;
                }
                let diff = a.value ^ b.value;
                if a.care == b.care && diff.count_ones() == 1 {
                    cubes[i] = a.without(diff.trailing_zeros() as usize);
                    cubes.remove(j);
                    changed = true;
                    break 'scan;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Cube {
        Cube::parse(s, s.len()).unwrap()
    }

    fn symbols(width: usize) -> impl Iterator<Item = Symbol> {
        (0..1u64 << width).map(Symbol)
    }

    #[test]
    fn matching_and_intersection() {
        assert!(c("1*").matches(Symbol(0b01)));
        assert!(!c("1*").matches(Symbol(0b10)));
        assert_eq!(c("1*").intersect(c("*0")), Some(c("10")));
        assert_eq!(c("1*").intersect(c("0*")), None);
        assert!(c("1*").contains(c("10")) && !c("10").contains(c("1*")));
    }

    #[test]
    fn track_surgery() {
        assert_eq!(c("1*0").drop_track(1), c("10"));
        assert_eq!(c("10").insert_track(1), c("1*0"));
        assert_eq!(c("1*").render(2), "1*");
        assert_eq!(Cube::TOP.render(0), "-");
    }

    #[test]
    fn refinement_pieces_are_disjoint_and_cover() {
        let cubes = [c("1**"), c("*0*"), c("**1"), c("01*")];
        let pieces = refine(&cubes, Cube::TOP);
        for s in symbols(3) {
            assert_eq!(pieces.iter().filter(|p| p.matches(s)).count(), 1);
        }
        for p in &pieces {
            for q in &cubes {
                assert!(q.contains(*p) || !q.intersects(*p));
            }
        }
    }

    #[test]
    fn complement_and_union() {
        let cubes = [c("1*"), c("*1")];
        let comp = complement(&cubes);
        for s in symbols(2) {
            let inside = cubes.iter().any(|q| q.matches(s));
            assert_eq!(comp.iter().any(|q| q.matches(s)), !inside);
            assert_eq!(
                disjoint_union(&cubes).iter().filter(|q| q.matches(s)).count(),
                inside as usize
            );
        }
    }

    #[test]
    fn merging_preserves_union() {
        let mut cubes = vec![c("10"), c("11"), c("0*"), c("00")];
        merge(&mut cubes);
        assert_eq!(cubes, vec![Cube::TOP]);
        let mut cubes = vec![c("10"), c("11"), c("01")];
        merge(&mut cubes);
        assert_eq!(cubes.len(), 2);
    }
}
