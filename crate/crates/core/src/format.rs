//! Plain-text instance files.
//!
//! ```text
//! # comment
//! mixed n=1 d=1
//! hrep
//! 1 0 <= 1
//! -1/2 0 <= 0
//! ```
//!
//! or a `vrep` body of `v …` (point) and `r …` (ray) lines. Objective files
//! hold one affine piece `c_1 … c_{n+d} | c0` per line.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::concmin::PiecewiseAffineConcave;
use crate::error::{Error, Result};
use crate::hull::Triangulation;
use crate::polyrep::{HRep, MixedSpace, Polyhedron, VRep};
use crate::rat::{parse_rat, Rat, RatVec};

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, split into tokens.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content.char_indices().chain([(content.len(), ' ')]) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &content[s..pos],
                            line: i + 1,
                            column: content[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(tokens)
        })
        .collect()
}

fn rational(tok: Token) -> Result<Rat> {
    parse_rat(tok.text).map_err(|msg| parse_error(tok.line, tok.column, msg))
}

fn rationals(tokens: &[Token], expected: usize, line: usize, column: usize) -> Result<RatVec> {
    if tokens.len() != expected {
        return Err(parse_error(
            line,
            column,
            format!("expected {expected} numbers, found {}", tokens.len()),
        ));
    }
    tokens.iter().map(|&t| rational(t)).collect()
}

fn header_value(tok: Token, key: &str) -> Result<usize> {
    let value = tok
        .text
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| parse_error(tok.line, tok.column, format!("expected {key}=<count>")))?;
    value
        .parse()
        .map_err(|_| parse_error(tok.line, tok.column + key.len() + 1, "invalid count"))
}

fn parse_header(lines: &[Vec<Token>]) -> Result<MixedSpace> {
    let header = lines.first().ok_or_else(|| parse_error(1, 1, "missing header"))?;
    let first = header[0];
    if first.text != "mixed" || header.len() != 3 {
        return Err(parse_error(first.line, first.column, "expected `mixed n=<count> d=<count>`"));
    }
    let n = header_value(header[1], "n")?;
    let d = header_value(header[2], "d")?;
    MixedSpace::new(n, d).map_err(|e| parse_error(first.line, first.column, e.to_string()))
}

/// Parses an instance file into an H- or V-description.
pub fn parse_instance(text: &str) -> Result<Polyhedron> {
    let lines = tokenize(text);
    let space = parse_header(&lines)?;
    let dim = space.dim();
    let kind = lines
        .get(1)
        .map(|l| l[0])
        .ok_or_else(|| parse_error(text.lines().count() + 1, 1, "missing `hrep` or `vrep`"))?;
    if lines[1].len() != 1 {
        return Err(parse_error(lines[1][1].line, lines[1][1].column, "unexpected token"));
    }
    let body = &lines[2..];
    match kind.text {
        "hrep" => {
            let mut rows = Vec::with_capacity(body.len());
            for line in body {
                let lead = line[0];
                let Some(split) = line.iter().position(|t| t.text == "<=") else {
                    return Err(parse_error(lead.line, lead.column, "expected `<=`"));
                };
                let a = rationals(&line[..split], dim, lead.line, lead.column)?;
                let after = &line[split + 1..];
                let op = line[split];
                if after.len() != 1 {
                    return Err(parse_error(op.line, op.column, "expected one right-hand side after `<=`"));
                }
                rows.push((a, rational(after[0])?));
            }
            Ok(Polyhedron::H(HRep::from_rows(space, rows)?))
        }
        "vrep" => {
            let mut points = Vec::new();
            let mut rays = Vec::new();
            for line in body {
                let lead = line[0];
                let target = match lead.text {
                    "v" => &mut points,
                    "r" => &mut rays,
                    _ => return Err(parse_error(lead.line, lead.column, "expected `v` or `r`")),
                };
                target.push(rationals(&line[1..], dim, lead.line, lead.column)?);
            }
            if points.is_empty() {
                return Err(parse_error(kind.line, kind.column, "vrep needs at least one point"));
            }
            let v = VRep::new(space, points, rays)
                .map_err(|e| parse_error(kind.line, kind.column, e.to_string()))?;
            Ok(Polyhedron::V(v))
        }
        _ => Err(parse_error(kind.line, kind.column, "expected `hrep` or `vrep`")),
    }
}

fn join(values: &[Rat]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn header(space: MixedSpace) -> String {
    format!("mixed n={} d={}\n", space.n, space.d)
}

/// Canonical text: rows (or points, then rays) sorted and deduplicated.
pub fn print_instance(p: &Polyhedron) -> String {
    let mut out = header(p.space());
    match p {
        Polyhedron::H(h) => {
            out.push_str("hrep\n");
            let mut rows: Vec<(RatVec, Rat)> = h.rows().map(|(a, b)| (a.to_vec(), b.clone())).collect();
            rows.sort();
            rows.dedup();
            for (a, b) in rows {
                let _ = writeln!(out, "{} <= {}", join(&a), b);
            }
        }
        Polyhedron::V(v) => {
            out.push_str("vrep\n");
            for p in &v.points {
                let _ = writeln!(out, "v {}", join(p));
            }
            for r in &v.rays {
                let _ = writeln!(out, "r {}", join(r));
            }
        }
    }
    out
}

/// Parses `c_1 … c_dim | c0` lines.
pub fn parse_objective(text: &str, dim: usize) -> Result<PiecewiseAffineConcave> {
    let mut pieces = Vec::new();
    for line in tokenize(text) {
        let lead = line[0];
        let Some(split) = line.iter().position(|t| t.text == "|") else {
            return Err(parse_error(lead.line, lead.column, "expected `|`"));
        };
        let c = rationals(&line[..split], dim, lead.line, lead.column)?;
        let bar = line[split];
        let rest = &line[split + 1..];
        if rest.len() != 1 {
            return Err(parse_error(bar.line, bar.column, "expected one constant after `|`"));
        }
        pieces.push((c, rational(rest[0])?));
    }
    if pieces.is_empty() {
        return Err(parse_error(1, 1, "objective needs at least one piece"));
    }
    PiecewiseAffineConcave::new(pieces)
}

pub fn print_objective(f: &PiecewiseAffineConcave) -> String {
    f.pieces
        .iter()
        .map(|(c, c0)| format!("{} | {}\n", join(c), c0))
        .collect()
}

/// Ray list with a header, as written by `reduce`.
pub fn print_rays(space: MixedSpace, rays: &[RatVec]) -> String {
    let mut out = header(space);
    out.push_str("rays\n");
    for r in rays {
        let _ = writeln!(out, "r {}", join(r));
    }
    out
}

/// `value@(z_1, …, z_k)`.
pub fn print_solution(point: &[Rat], value: &Rat) -> String {
    let coords: Vec<String> = point.iter().map(ToString::to_string).collect();
    format!("{value}@({})", coords.join(", "))
}

/// One `cell i j k …` line per cell, indices into the canonical point list.
pub fn print_triangulation(t: &Triangulation) -> String {
    t.cells
        .iter()
        .map(|c| {
            let idx: Vec<String> = c.iter().map(ToString::to_string).collect();
            format!("cell {}\n", idx.join(" "))
        })
        .collect()
}

/// Summary appended to hull output as comment lines.
#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub vertices: usize,
    pub t: Option<BigInt>,
    pub bound_hrep: Option<Rat>,
    pub bound_vrep: Option<Rat>,
    pub method: String,
    pub millis: u128,
}

fn or_dash<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

pub fn print_stats(s: &Stats) -> String {
    format!(
        "# vertices: {}\n# t: {}\n# bound_hrep: {}\n# bound_vrep: {}\n# method: {}\n# millis: {}\n",
        s.vertices,
        or_dash(&s.t),
        or_dash(&s.bound_hrep),
        or_dash(&s.bound_vrep),
        s.method,
        s.millis
    )
}
