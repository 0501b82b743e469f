//! Line-oriented automaton files.
//!
//! ```text
//! # eventually always 1
//! acceptance: cobuchi
//! tracks: | X
//! states: 2
//! initial: 0
//! accepting: 1
//! 0 * 0
//! 0 1 1
//! 1 1 1
//! ```
//!
//! Header keys may come in any order but precede the edges. `tracks` lists
//! first-order names, a bar, then second-order names; cubes are strings over
//! `{0,1,*}` in that track order (`-` for a machine without tracks).

use std::fmt::Write as _;

use s1s_core::{Acceptance, Cube, OmegaAutomaton, TrackSignature};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct Header {
    acceptance: Option<Acceptance>,
    tracks: Option<TrackSignature>,
    states: Option<usize>,
    initial: Option<usize>,
    accepting: Option<Vec<usize>>,
}

fn number(text: &str, line: usize) -> Result<usize, FormatError> {
    text.parse()
        .map_err(|_| err(line, format!("expected a state number, found `{text}`")))
}

pub fn parse_automaton(text: &str) -> Result<OmegaAutomaton, FormatError> {
    let mut header = Header::default();
    let mut machine: Option<OmegaAutomaton> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            if machine.is_some() {
                return Err(err(line, format!("header `{key}` after the first edge")));
            }
            let value = value.trim();
            match key.trim() {
                "acceptance" => {
                    header.acceptance = Some(match value {
                        "buchi" => Acceptance::Buchi,
                        "cobuchi" => Acceptance::CoBuchi,
                        other => return Err(err(line, format!("unknown acceptance `{other}`"))),
                    })
                }
                "tracks" => {
                    let (fo, so) = value
                        .split_once('|')
                        .ok_or_else(|| err(line, "tracks need a `|` between first- and second-order names"))?;
                    let names = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();
                    header.tracks =
                        Some(TrackSignature::new(names(fo), names(so)).map_err(|e| err(line, e.to_string()))?);
                }
                "states" => header.states = Some(number(value, line)?),
                "initial" => header.initial = Some(number(value, line)?),
                "accepting" => {
                    header.accepting = Some(
                        value
                            .split_whitespace()
                            .map(|q| number(q, line))
                            .collect::<Result<_, _>>()?,
                    )
                }
                other => return Err(err(line, format!("unknown header `{other}`"))),
            }
            continue;
        }
        if machine.is_none() {
            machine = Some(build(&header, line)?);
        }
        let a = machine.as_mut().expect("just built");
        let parts: Vec<&str> = content.split_whitespace().collect();
        let [src, cube, dst] = parts[..] else {
            return Err(err(line, "an edge is `source cube target`"));
        };
        let cube = Cube::parse(cube, a.width()).map_err(|e| err(line, e.to_string()))?;
        a.add_edge(number(src, line)?, cube, number(dst, line)?)
            .map_err(|e| err(line, e.to_string()))?;
    }
    match machine {
        Some(a) => Ok(a),
        None => build(&header, last.max(1)),
    }
}

fn build(header: &Header, line: usize) -> Result<OmegaAutomaton, FormatError> {
    let missing = |key: &str| err(line, format!("missing header `{key}`"));
    let acceptance = header.acceptance.ok_or_else(|| missing("acceptance"))?;
    let tracks = header.tracks.clone().ok_or_else(|| missing("tracks"))?;
    let states = header.states.ok_or_else(|| missing("states"))?;
    let initial = header.initial.ok_or_else(|| missing("initial"))?;
    let mut a = OmegaAutomaton::new(acceptance, tracks, states, initial).map_err(|e| err(line, e.to_string()))?;
    for &q in header.accepting.as_deref().unwrap_or(&[]) {
        a.set_accepting(q, true).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(a)
}

pub fn write_automaton(a: &OmegaAutomaton) -> String {
    let sig = a.signature();
    let mut out = String::new();
    let _ = writeln!(out, "acceptance: {}", a.acceptance());
    let _ = writeln!(out, "tracks: {sig}");
    let _ = writeln!(out, "states: {}", a.num_states());
    let _ = writeln!(out, "initial: {}", a.initial());
    let accepting: Vec<String> = a.accepting_states().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "accepting: {}", accepting.join(" "));
    for e in a.edges() {
        let _ = writeln!(out, "{} {} {}", e.source, e.cube.render(a.width()), e.target);
    }
    out.lines().map(|l| format!("{}\n", l.trim_end())).collect()
}

/// Graphviz rendering: accepting states doubly circled, cubes on edges.
pub fn to_dot(a: &OmegaAutomaton) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
    let _ = writeln!(out, "  label=\"{} over {}\";", a.acceptance(), a.signature());
    out.push_str("  init [shape=point];\n");
    for q in 0..a.num_states() {
        let shape = if a.is_accepting(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  q{q} [shape={shape}, label=\"{q}\"];");
    }
    let _ = writeln!(out, "  init -> q{};", a.initial());
    for e in a.edges() {
        let _ = writeln!(
            out,
            "  q{} -> q{} [label=\"{}\"];",
            e.source,
            e.target,
            e.cube.render(a.width())
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EV_ALWAYS_ONE: &str = "\
# eventually always 1
acceptance: cobuchi
tracks: | X
states: 2
initial: 0
accepting: 1
0 * 0
0 1 1
1 1 1
";

    #[test]
    fn round_trip() {
        let a = parse_automaton(EV_ALWAYS_ONE).unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.edge_count(), 3);
        assert!(a.is_accepting(1) && !a.is_accepting(0));
        let text = write_automaton(&a);
        assert_eq!(parse_automaton(&text).unwrap(), a);
        assert_eq!(write_automaton(&parse_automaton(&text).unwrap()), text);
    }

    #[test]
    fn width_zero_and_first_order_tracks() {
        let a = parse_automaton("acceptance: buchi\ntracks: |\nstates: 1\ninitial: 0\naccepting: 0\n0 - 0\n").unwrap();
        assert_eq!(a.width(), 0);
        assert_eq!(parse_automaton(&write_automaton(&a)).unwrap(), a);
        let b = parse_automaton("acceptance: cobuchi\ntracks: x | X Y\nstates: 1\ninitial: 0\n0 1*0 0\n").unwrap();
        assert_eq!(b.signature().fo_vars(), ["x"]);
        assert_eq!(parse_automaton(&write_automaton(&b)).unwrap(), b);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = EV_ALWAYS_ONE.replace("0 1 1", "0 12 1");
        assert_eq!(parse_automaton(&bad).unwrap_err().line, 8);
        let bad = EV_ALWAYS_ONE.replace("1 1 1", "1 1 7");
        assert_eq!(parse_automaton(&bad).unwrap_err().line, 9);
        let missing = EV_ALWAYS_ONE.replace("states: 2\n", "");
        assert!(parse_automaton(&missing).unwrap_err().message.contains("states"));
        let late = format!("{EV_ALWAYS_ONE}initial: 1\n");
        assert_eq!(parse_automaton(&late).unwrap_err().line, 10);
    }

    #[test]
    fn dot_marks_accepting_states() {
        let dot = to_dot(&parse_automaton(EV_ALWAYS_ONE).unwrap());
        assert!(dot.contains("q1 [shape=doublecircle"));
        assert!(dot.contains("q0 [shape=circle"));
        assert!(dot.contains("q0 -> q1 [label=\"1\"]"));
    }
}
