//! Text formats: the simplicial complex format (SCX), weighted graphs,
//! vertex-function files, and surface certificates.

use std::collections::BTreeSet;
use std::fmt;

use spectra_core::cheeger::{GraphFunction, WeightedGraph};
use spectra_core::homology::Bar;
use spectra_core::significance::{SurfaceCertificate, SurfaceClass};
use spectra_core::symcx::{SymmetricComplex, VertexId};
use spectra_core::value::Value;

#[derive(Debug)]
pub struct ParseError {
    pub line: Option<usize>,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {}: {}", n, self.msg),
            None => write!(f, "{}", self.msg),
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line: Some(line),
        msg: msg.into(),
    }
}

fn err_global(msg: impl Into<String>) -> ParseError {
    ParseError {
        line: None,
        msg: msg.into(),
    }
}

/// Strips a trailing comment and splits into fields.
fn fields(line: &str) -> Vec<&str> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    body.split_whitespace().collect()
}

fn parse_id(tok: &str, n: usize) -> Result<u32, ParseError> {
    tok.parse::<u32>()
        .map_err(|_| err(n, format!("bad vertex id '{}'", tok)))
}

fn parse_value(tok: &str, n: usize) -> Result<Value, ParseError> {
    Value::parse(tok).map_err(|e| err(n, format!("bad value '{}': {}", tok, e)))
}

/// Parses the SCX format: `dim D`, `v <id> <value>`, `s <id>...` for a
/// maximal simplex, `w <id> <id> <0|1>` for the cocycle on an edge.
pub fn parse_scx(text: &str) -> Result<SymmetricComplex, ParseError> {
    let mut declared_dim: Option<(usize, usize)> = None;
    let mut vertices: Vec<(VertexId, Value)> = Vec::new();
    let mut seen_vertices: BTreeSet<VertexId> = BTreeSet::new();
    let mut maximal: Vec<(Vec<VertexId>, usize)> = Vec::new();
    let mut seen_simplices: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut cocycle: Vec<((VertexId, VertexId), bool, usize)> = Vec::new();
    let mut seen_edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let f = fields(raw);
        if f.is_empty() {
            continue;
        }
        match f[0] {
            "dim" => {
                if f.len() != 2 {
                    return Err(err(n, "dim takes one argument"));
                }
                if declared_dim.is_some() {
                    return Err(err(n, "duplicate dim declaration"));
                }
                let d: usize = f[1]
                    .parse()
                    .map_err(|_| err(n, format!("bad dimension '{}'", f[1])))?;
                declared_dim = Some((d, n));
            }
            "v" => {
                if f.len() != 3 {
                    return Err(err(n, "v takes an id and a value"));
                }
                let id = parse_id(f[1], n)?;
                if !seen_vertices.insert(id) {
                    return Err(err(n, format!("duplicate vertex {}", id)));
                }
                vertices.push((id, parse_value(f[2], n)?));
            }
            "s" => {
                if f.len() < 2 {
                    return Err(err(n, "s takes at least one vertex id"));
                }
                let mut verts = Vec::with_capacity(f.len() - 1);
                for tok in &f[1..] {
                    verts.push(parse_id(tok, n)?);
                }
                let mut key = verts.clone();
                key.sort_unstable();
                if key.windows(2).any(|w| w[0] == w[1]) {
                    return Err(err(n, "repeated vertex in simplex"));
                }
                if !seen_simplices.insert(key) {
                    return Err(err(n, "duplicate simplex declaration"));
                }
                maximal.push((verts, n));
            }
            "w" => {
                if f.len() != 4 {
                    return Err(err(n, "w takes two vertex ids and a bit"));
                }
                let a = parse_id(f[1], n)?;
                let b = parse_id(f[2], n)?;
                let bit = match f[3] {
                    "0" => false,
                    "1" => true,
                    other => return Err(err(n, format!("bad cocycle bit '{}'", other))),
                };
                let key = (a.min(b), a.max(b));
                if !seen_edges.insert(key) {
                    return Err(err(n, format!("duplicate cocycle entry on ({}, {})", a, b)));
                }
                cocycle.push((key, bit, n));
            }
            other => return Err(err(n, format!("unknown directive '{}'", other))),
        }
    }

    if vertices.is_empty() {
        return Err(err_global("no vertices"));
    }
    for (verts, n) in &maximal {
        for v in verts {
            if !seen_vertices.contains(v) {
                return Err(err(*n, format!("unknown vertex {}", v)));
            }
        }
    }
    for ((a, b), _, n) in &cocycle {
        if !seen_vertices.contains(a) || !seen_vertices.contains(b) {
            return Err(err(*n, format!("unknown vertex in cocycle entry ({}, {})", a, b)));
        }
    }

    let simplex_lists: Vec<Vec<VertexId>> = maximal.iter().map(|(v, _)| v.clone()).collect();
    let probe = SymmetricComplex::from_maximal(vertices.clone(), &simplex_lists, &[])
        .map_err(|e| err_global(e.to_string()))?;
    for ((a, b), _, n) in &cocycle {
        if probe.find_simplex(&[*a, *b]).is_none() {
            return Err(err(*n, format!("cocycle value on non-edge ({}, {})", a, b)));
        }
    }
    if let Some((d, n)) = declared_dim {
        if d != probe.dimension() {
            return Err(err(
                n,
                format!("declared dimension {} but simplices reach {}", d, probe.dimension()),
            ));
        }
    }

    let odd: Vec<(VertexId, VertexId)> = cocycle
        .iter()
        .filter(|(_, bit, _)| *bit)
        .map(|(e, _, _)| *e)
        .collect();
    SymmetricComplex::from_maximal(vertices, &simplex_lists, &odd)
        .map_err(|e| err_global(e.to_string()))
}

/// Renders a complex back to SCX; deterministic and round-trip safe.
pub fn write_scx(c: &SymmetricComplex) -> String {
    let mut out = String::new();
    out.push_str(&format!("dim {}\n", c.dimension()));
    for (id, value) in c.vertex_ids().iter().zip(c.vertex_values()) {
        out.push_str(&format!("v {} {}\n", id, value));
    }
    let mut maximal: Vec<Vec<VertexId>> = c
        .maximal_simplices()
        .iter()
        .map(|&s| c.external_verts(s))
        .collect();
    maximal.sort();
    for verts in maximal {
        out.push('s');
        for v in verts {
            out.push_str(&format!(" {}", v));
        }
        out.push('\n');
    }
    let mut odd: Vec<Vec<VertexId>> = c.odd_edges().map(|e| c.external_verts(e)).collect();
    odd.sort();
    for e in odd {
        out.push_str(&format!("w {} {} 1\n", e[0], e[1]));
    }
    out
}

/// Parses the weighted graph format: `n <count>`, `m <v> <measure>`,
/// `e <u> <v> <weight>`.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut count: Option<usize> = None;
    let mut measures: Vec<Option<Value>> = Vec::new();
    let mut edges: Vec<(u32, u32, Value)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let f = fields(raw);
        if f.is_empty() {
            continue;
        }
        match f[0] {
            "n" => {
                if f.len() != 2 {
                    return Err(err(n, "n takes one argument"));
                }
                if count.is_some() {
                    return Err(err(n, "duplicate n declaration"));
                }
                let c: usize = f[1]
                    .parse()
                    .map_err(|_| err(n, format!("bad vertex count '{}'", f[1])))?;
                count = Some(c);
                measures = vec![None; c];
            }
            "m" => {
                if f.len() != 3 {
                    return Err(err(n, "m takes a vertex and a measure"));
                }
                if count.is_none() {
                    return Err(err(n, "m before n"));
                }
                let v = parse_id(f[1], n)? as usize;
                if v >= measures.len() {
                    return Err(err(n, format!("vertex {} out of range", v)));
                }
                if measures[v].is_some() {
                    return Err(err(n, format!("duplicate measure for vertex {}", v)));
                }
                measures[v] = Some(parse_value(f[2], n)?);
            }
            "e" => {
                if f.len() != 4 {
                    return Err(err(n, "e takes two vertices and a weight"));
                }
                let u = parse_id(f[1], n)?;
                let v = parse_id(f[2], n)?;
                edges.push((u, v, parse_value(f[3], n)?));
            }
            other => return Err(err(n, format!("unknown directive '{}'", other))),
        }
    }

    if count.is_none() {
        return Err(err_global("missing n declaration"));
    }
    let mut resolved = Vec::with_capacity(measures.len());
    for (v, m) in measures.into_iter().enumerate() {
        match m {
            Some(m) => resolved.push(m),
            None => return Err(err_global(format!("missing measure for vertex {}", v))),
        }
    }
    WeightedGraph::new(resolved, edges).map_err(|e| err_global(e.to_string()))
}

/// Parses a vertex function file: one `v <id> <value>` line per vertex.
pub fn parse_function(text: &str, g: &WeightedGraph) -> Result<GraphFunction, ParseError> {
    let mut values: Vec<Option<Value>> = vec![None; g.vertex_count()];
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let f = fields(raw);
        if f.is_empty() {
            continue;
        }
        if f[0] != "v" || f.len() != 3 {
            return Err(err(n, "expected 'v <id> <value>'"));
        }
        let v = parse_id(f[1], n)? as usize;
        if v >= values.len() {
            return Err(err(n, format!("vertex {} out of range", v)));
        }
        if values[v].is_some() {
            return Err(err(n, format!("duplicate value for vertex {}", v)));
        }
        values[v] = Some(parse_value(f[2], n)?);
    }
    let mut resolved = Vec::with_capacity(values.len());
    for (v, m) in values.into_iter().enumerate() {
        match m {
            Some(m) => resolved.push(m),
            None => return Err(err_global(format!("missing value for vertex {}", v))),
        }
    }
    GraphFunction::new(g, resolved).map_err(|e| err_global(e.to_string()))
}

/// Parses a surface certificate: `level`, `chi`, `orientable`,
/// `essential` headers plus `s <id>...` lines naming the witness
/// simplices (faces implied) in the parent complex.
pub fn parse_certificate(
    text: &str,
    c: &SymmetricComplex,
) -> Result<SurfaceCertificate, ParseError> {
    let mut level: Option<Value> = None;
    let mut chi: Option<i64> = None;
    let mut orientable: Option<bool> = None;
    let mut essential: Option<bool> = None;
    let mut seeds = Vec::new();

    let parse_bit = |tok: &str, n: usize| -> Result<bool, ParseError> {
        match tok {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(err(n, format!("expected 0 or 1, got '{}'", other))),
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let f = fields(raw);
        if f.is_empty() {
            continue;
        }
        match f[0] {
            "level" if f.len() == 2 => {
                if level.is_some() {
                    return Err(err(n, "duplicate level header"));
                }
                level = Some(parse_value(f[1], n)?);
            }
            "chi" if f.len() == 2 => {
                if chi.is_some() {
                    return Err(err(n, "duplicate chi header"));
                }
                chi = Some(
                    f[1].parse()
                        .map_err(|_| err(n, format!("bad chi '{}'", f[1])))?,
                );
            }
            "orientable" if f.len() == 2 => {
                if orientable.is_some() {
                    return Err(err(n, "duplicate orientable header"));
                }
                orientable = Some(parse_bit(f[1], n)?);
            }
            "essential" if f.len() == 2 => {
                if essential.is_some() {
                    return Err(err(n, "duplicate essential header"));
                }
                essential = Some(parse_bit(f[1], n)?);
            }
            "s" if f.len() >= 2 => {
                let mut verts = Vec::with_capacity(f.len() - 1);
                for tok in &f[1..] {
                    verts.push(parse_id(tok, n)?);
                }
                match c.find_simplex(&verts) {
                    Some(id) => seeds.push(id),
                    None => return Err(err(n, format!("simplex {:?} not in the complex", verts))),
                }
            }
            other => return Err(err(n, format!("unknown directive '{}'", other))),
        }
    }

    let level = level.ok_or_else(|| err_global("missing level header"))?;
    let chi = chi.ok_or_else(|| err_global("missing chi header"))?;
    let orientable = orientable.ok_or_else(|| err_global("missing orientable header"))?;
    let essential = essential.ok_or_else(|| err_global("missing essential header"))?;
    if seeds.is_empty() {
        return Err(err_global("certificate names no simplices"));
    }
    Ok(SurfaceCertificate {
        witness: c.face_closure(&seeds),
        level,
        claimed_class: SurfaceClass::new(chi, orientable),
        claims_essential: essential,
    })
}

pub fn write_certificate(c: &SymmetricComplex, cert: &SurfaceCertificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("level {}\n", cert.level));
    out.push_str(&format!("chi {}\n", cert.claimed_class.euler_characteristic));
    out.push_str(&format!(
        "orientable {}\n",
        if cert.claimed_class.orientable { 1 } else { 0 }
    ));
    out.push_str(&format!(
        "essential {}\n",
        if cert.claims_essential { 1 } else { 0 }
    ));
    // only the top-dimensional simplices; faces are implied
    let top = cert
        .witness
        .members
        .iter()
        .map(|&s| c.simplex(s).dim())
        .max()
        .unwrap_or(0);
    let mut lines: Vec<Vec<VertexId>> = cert
        .witness
        .members
        .iter()
        .filter(|&&s| c.simplex(s).dim() == top)
        .map(|&s| c.external_verts(s))
        .collect();
    lines.sort();
    for verts in lines {
        out.push('s');
        for v in verts {
            out.push_str(&format!(" {}", v));
        }
        out.push('\n');
    }
    out
}

/// One line per bar, `p birth death`, `inf` for essential bars.
pub fn write_bars(bars: &[Bar]) -> String {
    let mut out = String::new();
    for b in bars {
        match &b.death {
            Some(d) => out.push_str(&format!("{} {} {}\n", b.dim, b.birth, d)),
            None => out.push_str(&format!("{} {} inf\n", b.dim, b.birth)),
        }
    }
    out
}
