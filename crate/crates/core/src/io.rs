//! Line-oriented text formats for relations, colorings, state functions
//! and plain sets. `#` starts a comment anywhere; blank lines are
//! ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::bounds::{Provenance, StateFunction};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ramsey::Coloring;
use crate::relation::FiniteRelation;

fn content_lines(src: &str) -> impl Iterator<Item = &str> {
    src.lines()
        .map(|l| match l.find('#') {
            Some(i) => &l[..i],
            None => l,
        })
        .map(str::trim)
        .filter(|l| !l.is_empty())
}

fn parse_u64(tok: &str, what: &str) -> Result<u64> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("bad {what}: {tok}")))
}

/// Relation file: a `domain: n0 n1 ...` header, then one `x y` edge per
/// line meaning x R y.
pub fn parse_relation(src: &str, cfg: &RunConfig) -> Result<FiniteRelation> {
    let mut domain: Option<Vec<u64>> = None;
    let mut edges = Vec::new();
    for line in content_lines(src) {
        if let Some(rest) = line.strip_prefix("domain:") {
            let mut states = Vec::new();
            for tok in rest.split_whitespace() {
                states.push(parse_u64(tok, "state")?);
            }
            domain = Some(states);
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse(format!("expected 'x y', got: {line}")));
        }
        edges.push((parse_u64(toks[0], "state")?, parse_u64(toks[1], "state")?));
    }
    let domain = domain.ok_or_else(|| Error::Parse("missing 'domain:' header".into()))?;
    FiniteRelation::with_config(domain, edges, cfg)
}

pub fn render_relation(r: &FiniteRelation) -> String {
    let mut out = String::from("domain:");
    for v in r.domain() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    for (x, y) in r.edges() {
        writeln!(out, "{x} {y}").unwrap();
    }
    out
}

pub fn read_relation(path: impl AsRef<Path>, cfg: &RunConfig) -> Result<FiniteRelation> {
    parse_relation(&std::fs::read_to_string(path)?, cfg)
}

pub fn write_relation(path: impl AsRef<Path>, r: &FiniteRelation) -> Result<()> {
    Ok(std::fs::write(path, render_relation(r))?)
}

/// Coloring file: `vertices: ...` and `colors: k` headers, then one
/// `x y c` line per pair; totality is validated on load.
pub fn parse_coloring(src: &str) -> Result<Coloring> {
    let mut vertices: Option<Vec<u64>> = None;
    let mut colors: Option<u32> = None;
    let mut map: BTreeMap<(u64, u64), u32> = BTreeMap::new();
    for line in content_lines(src) {
        if let Some(rest) = line.strip_prefix("vertices:") {
            let mut vs = Vec::new();
            for tok in rest.split_whitespace() {
                vs.push(parse_u64(tok, "vertex")?);
            }
            vertices = Some(vs);
            continue;
        }
        if let Some(rest) = line.strip_prefix("colors:") {
            colors = Some(parse_u64(rest.trim(), "color count")? as u32);
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse(format!("expected 'x y c', got: {line}")));
        }
        let x = parse_u64(toks[0], "vertex")?;
        let y = parse_u64(toks[1], "vertex")?;
        let c = parse_u64(toks[2], "color")? as u32;
        map.insert((x, y), c);
    }
    let vertices = vertices.ok_or_else(|| Error::Parse("missing 'vertices:' header".into()))?;
    let colors = colors.ok_or_else(|| Error::Parse("missing 'colors:' header".into()))?;
    Coloring::new(vertices, colors, map)
}

pub fn read_coloring(path: impl AsRef<Path>) -> Result<Coloring> {
    parse_coloring(&std::fs::read_to_string(path)?)
}

pub fn render_coloring(c: &Coloring) -> String {
    let mut out = String::from("vertices:");
    for v in c.vertices() {
        write!(out, " {v}").unwrap();
    }
    writeln!(out, "\ncolors: {}", c.colors()).unwrap();
    for ((x, y), col) in c.pairs() {
        writeln!(out, "{x} {y} {col}").unwrap();
    }
    out
}

/// State-function file: one `x value` line per state.
pub fn parse_state_function(src: &str) -> Result<StateFunction> {
    let mut table = BTreeMap::new();
    for line in content_lines(src) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse(format!("expected 'x value', got: {line}")));
        }
        table.insert(parse_u64(toks[0], "state")?, parse_u64(toks[1], "value")?);
    }
    Ok(StateFunction::new(table, Provenance::UserSupplied))
}

pub fn read_state_function(path: impl AsRef<Path>) -> Result<StateFunction> {
    parse_state_function(&std::fs::read_to_string(path)?)
}

/// Set file: whitespace-separated naturals.
pub fn parse_set(src: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for line in content_lines(src) {
        for tok in line.split_whitespace() {
            out.push(parse_u64(tok, "element")?);
        }
    }
    Ok(out)
}

pub fn read_set(path: impl AsRef<Path>) -> Result<Vec<u64>> {
    parse_set(&std::fs::read_to_string(path)?)
}
