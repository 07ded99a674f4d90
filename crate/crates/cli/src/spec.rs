//! Chart specification documents.
//!
//! ```text
//! name = p1
//!
//! [variables]
//! x
//!
//! [charts]
//! U0
//! U1
//!
//! [overlaps]
//! # target coordinates as functions of the source coordinates
//! U0 -> U1 : 1/x
//!
//! [bundle]
//! kind = general
//! U0 = 1, 0; 0, 1
//! U1 = x, 0; 1, x
//!
//! [triples]
//! U0 U1 U0
//! ```
//!
//! The first chart is the base; every other chart must be reached from it
//! through overlaps. Bundle kinds are `tangent`, `cotangent` and `general`;
//! general bundles give one invertible odd matrix per chart, rows separated
//! by `;`, with entries in the base variables. Lines starting with `#` are
//! comments.

use std::collections::BTreeMap;

use chiral_core::charts::{BundleSpec, Chart, ChartSystem};
use chiral_core::kernel::{jacobian, parse_with_names};
use chiral_core::{Error, RatFunc, RatMatrix};

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Overlap {
    pub from: String,
    pub to: String,
    pub change: Vec<RatFunc>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartSpec {
    pub name: String,
    pub system: ChartSystem,
    pub overlaps: Vec<Overlap>,
    pub bundle: BundleSpec,
    pub triples: Vec<[usize; 3]>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Header,
    Variables,
    Charts,
    Overlaps,
    Bundle,
    Triples,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
    /// Byte offset of `text` within the original line.
    col: usize,
}

fn syntax(line: &Line, offset: usize, msg: impl Into<String>) -> CliError {
    CliError::Syntax {
        line: line.no,
        col: line.col + offset + 1,
        msg: msg.into(),
    }
}

fn expr(line: &Line, offset: usize, text: &str, names: &[String]) -> Result<RatFunc, CliError> {
    let lead = text.len() - text.trim_start().len();
    parse_with_names(text.trim(), names).map_err(|e| match e {
        Error::Parse { pos, msg } if msg.starts_with("undeclared variable") => CliError::UndeclaredVariable {
            line: line.no,
            col: line.col + offset + lead + pos + 1,
            msg,
        },
        Error::Parse { pos, msg } => syntax(line, offset + lead + pos, msg),
        e => CliError::Core(e),
    })
}

/// Comma-separated expressions starting at `offset` within the line.
fn expr_list(line: &Line, offset: usize, names: &[String]) -> Result<Vec<RatFunc>, CliError> {
    let mut out = Vec::new();
    let mut start = offset;
    for piece in line.text[offset..].split(',') {
        out.push(expr(line, start, piece, names)?);
        start += piece.len() + 1;
    }
    Ok(out)
}

fn ident_ok(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '-')
}

struct Builder {
    name: Option<String>,
    vars: Vec<String>,
    charts: Vec<String>,
    overlaps: Vec<(usize, Overlap)>,
    kind: Option<(usize, String)>,
    matrices: BTreeMap<String, (usize, RatMatrix)>,
    triples: Vec<(usize, [String; 3])>,
}

pub fn parse_chart_spec(text: &str) -> Result<ChartSpec, CliError> {
    let mut b = Builder {
        name: None,
        vars: Vec::new(),
        charts: Vec::new(),
        overlaps: Vec::new(),
        kind: None,
        matrices: BTreeMap::new(),
        triples: Vec::new(),
    };
    let mut section = Section::Header;
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let line = Line {
            no: i + 1,
            text: trimmed,
            col: body.len() - body.trim_start().len(),
        };
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[variables]" => Section::Variables,
                "[charts]" => Section::Charts,
                "[overlaps]" => Section::Overlaps,
                "[bundle]" => Section::Bundle,
                "[triples]" => Section::Triples,
                _ => return Err(syntax(&line, 0, format!("unknown section {trimmed}"))),
            };
            continue;
        }
        match section {
            Section::Header => {
                let (k, v) = key_value(&line)?;
                if k != "name" {
                    return Err(syntax(&line, 0, format!("unknown header key '{k}'")));
                }
                b.name = Some(v.to_string());
            }
            Section::Variables => {
                for v in trimmed.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                    if !ident_ok(v) || v.contains('-') {
                        return Err(syntax(&line, 0, format!("bad variable name '{v}'")));
                    }
                    if b.vars.iter().any(|w| w == v) {
                        return Err(syntax(&line, 0, format!("variable '{v}' declared twice")));
                    }
                    b.vars.push(v.to_string());
                }
            }
            Section::Charts => {
                if !ident_ok(trimmed) {
                    return Err(syntax(&line, 0, format!("bad chart name '{trimmed}'")));
                }
                if b.charts.iter().any(|c| c == trimmed) {
                    return Err(syntax(&line, 0, format!("chart '{trimmed}' declared twice")));
                }
                b.charts.push(trimmed.to_string());
            }
            Section::Overlaps => {
                let colon = trimmed
                    .find(':')
                    .ok_or_else(|| syntax(&line, 0, "expected 'FROM -> TO : expressions'"))?;
                let head = &trimmed[..colon];
                let (from, to) = head
                    .split_once("->")
                    .ok_or_else(|| syntax(&line, 0, "expected 'FROM -> TO'"))?;
                let (from, to) = (from.trim(), to.trim());
                for c in [from, to] {
                    if !b.charts.iter().any(|x| x == c) {
                        return Err(syntax(&line, 0, format!("undeclared chart '{c}'")));
                    }
                }
                let change = expr_list(&line, colon + 1, &b.vars)?;
                if change.len() != b.vars.len() {
                    return Err(syntax(
                        &line,
                        colon + 1,
                        format!("expected {} expressions, found {}", b.vars.len(), change.len()),
                    ));
                }
                b.overlaps.push((
                    line.no,
                    Overlap {
                        from: from.to_string(),
                        to: to.to_string(),
                        change,
                    },
                ));
            }
            Section::Bundle => {
                let (k, v) = key_value(&line)?;
                if k == "kind" {
                    b.kind = Some((line.no, v.to_string()));
                    continue;
                }
                if !b.charts.iter().any(|c| c == k) {
                    return Err(syntax(&line, 0, format!("undeclared chart '{k}'")));
                }
                let eq = trimmed.find('=').expect("key_value found '='");
                let mut rows = Vec::new();
                let mut start = eq + 1;
                for row in trimmed[eq + 1..].split(';') {
                    let sub = Line {
                        no: line.no,
                        text: &trimmed[..start + row.len()],
                        col: line.col,
                    };
                    rows.push(expr_list(&sub, start, &b.vars)?);
                    start += row.len() + 1;
                }
                let m = RatMatrix::from_rows(b.vars.len(), rows)
                    .map_err(|e| syntax(&line, eq + 1, format!("bad matrix: {e}")))?;
                b.matrices.insert(k.to_string(), (line.no, m));
            }
            Section::Triples => {
                let names: Vec<&str> = trimmed.split_whitespace().collect();
                if names.len() != 3 {
                    return Err(syntax(&line, 0, "a triple names three charts"));
                }
                b.triples.push((line.no, [names[0].into(), names[1].into(), names[2].into()]));
            }
        }
    }
    b.finish()
}

fn key_value<'a>(line: &Line<'a>) -> Result<(&'a str, &'a str), CliError> {
    let (k, v) = line
        .text
        .split_once('=')
        .ok_or_else(|| syntax(line, 0, "expected 'key = value'"))?;
    Ok((k.trim(), v.trim()))
}

impl Builder {
    fn finish(self) -> Result<ChartSpec, CliError> {
        let n = self.vars.len();
        if n == 0 {
            return Err(CliError::Invalid("no variables declared".into()));
        }
        if self.charts.is_empty() {
            return Err(CliError::Invalid("no charts declared".into()));
        }
        for (line, o) in &self.overlaps {
            let det_ok = jacobian(&o.change).and_then(|j| j.invert()).is_ok();
            if !det_ok {
                return Err(CliError::SingularJacobian {
                    line: *line,
                    overlap: format!("{} -> {}", o.from, o.to),
                });
            }
        }
        // coordinates of each chart in the base variables
        let mut coords: BTreeMap<&str, Vec<RatFunc>> = BTreeMap::new();
        coords.insert(&self.charts[0], (0..n).map(|i| RatFunc::var(n, i)).collect());
        loop {
            let mut progress = false;
            for (line, o) in &self.overlaps {
                let Some(src) = coords.get(o.from.as_str()) else { continue };
                let composed: Vec<RatFunc> = o
                    .change
                    .iter()
                    .map(|e| e.compose(src))
                    .collect::<chiral_core::Result<_>>()?;
                match coords.get(o.to.as_str()) {
                    Some(existing) if *existing != composed => {
                        return Err(CliError::Invalid(format!(
                            "line {line}: overlap {} -> {} disagrees with the other overlaps",
                            o.from, o.to
                        )))
                    }
                    Some(_) => {}
                    None => {
                        coords.insert(&o.to, composed);
                        progress = true;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        let charts = self
            .charts
            .iter()
            .map(|c| {
                coords
                    .get(c.as_str())
                    .map(|v| Chart {
                        name: c.clone(),
                        coords: v.clone(),
                    })
                    .ok_or_else(|| CliError::Invalid(format!("chart {c} is not reached from {}", self.charts[0])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let system = ChartSystem {
            name: self.name.clone().unwrap_or_else(|| "unnamed".into()),
            vars: self.vars.clone(),
            charts,
        };
        system.validate().map_err(|e| match e {
            Error::Invalid(msg) if msg.contains("singular") => CliError::Invalid(msg),
            e => CliError::Core(e),
        })?;
        let (kline, kind) = self
            .kind
            .clone()
            .ok_or_else(|| CliError::Invalid("bundle kind missing".into()))?;
        let bundle = match kind.as_str() {
            "tangent" => BundleSpec::tangent(),
            "cotangent" => BundleSpec::cotangent(),
            "general" => {
                let mut ms = Vec::new();
                for c in &self.charts {
                    let (line, m) = self
                        .matrices
                        .get(c)
                        .ok_or_else(|| CliError::Invalid(format!("no odd matrix for chart {c}")))?;
                    if m.rows() != m.cols() || (!ms.is_empty() && m.rows() != RatMatrix::rows(&ms[0])) {
                        return Err(CliError::Invalid(format!("line {line}: odd matrices must be square of one size")));
                    }
                    if m.invert().is_err() {
                        return Err(CliError::Invalid(format!("line {line}: odd matrix for {c} is singular")));
                    }
                    ms.push(m.clone());
                }
                BundleSpec::general(ms)
            }
            other => {
                return Err(CliError::UnknownBundleKind {
                    line: kline,
                    kind: other.to_string(),
                })
            }
        };
        let index = |c: &str| self.charts.iter().position(|x| x == c);
        let triples = self
            .triples
            .iter()
            .map(|(line, t)| {
                let mut out = [0; 3];
                for (k, c) in t.iter().enumerate() {
                    out[k] = index(c).ok_or_else(|| CliError::Invalid(format!("line {line}: undeclared chart '{c}'")))?;
                }
                Ok(out)
            })
            .collect::<Result<_, CliError>>()?;
        Ok(ChartSpec {
            name: system.name.clone(),
            system,
            overlaps: self.overlaps.into_iter().map(|(_, o)| o).collect(),
            bundle,
            triples,
        })
    }
}

impl ChartSpec {
    /// A spec from an in-code chart system, with overlaps from the base chart.
    pub fn from_system(system: ChartSystem, bundle: BundleSpec) -> Self {
        let base = system.charts[0].name.clone();
        let overlaps = system.charts[1..]
            .iter()
            .map(|c| Overlap {
                from: base.clone(),
                to: c.name.clone(),
                change: c.coords.clone(),
            })
            .collect();
        ChartSpec {
            name: system.name.clone(),
            system,
            overlaps,
            bundle,
            triples: Vec::new(),
        }
    }

    /// Built-in documents: `p1` (two charts) and `p2` (three charts), tangent.
    pub fn builtin_text(name: &str) -> Option<&'static str> {
        match name {
            "p1" => Some(P1),
            "p2" => Some(P2),
            _ => None,
        }
    }

    /// Render as a document that parses back to the same spec.
    pub fn to_text(&self) -> String {
        let vars = &self.system.vars;
        let show = |f: &RatFunc| f.to_string_with(vars);
        let mut s = format!("name = {}\n\n[variables]\n{}\n\n[charts]\n", self.name, vars.join(" "));
        for c in &self.system.charts {
            s += &format!("{}\n", c.name);
        }
        s += "\n[overlaps]\n";
        for o in &self.overlaps {
            let exprs: Vec<String> = o.change.iter().map(show).collect();
            s += &format!("{} -> {} : {}\n", o.from, o.to, exprs.join(", "));
        }
        s += &format!("\n[bundle]\nkind = {}\n", self.bundle.name());
        if let chiral_core::charts::BundleKind::General(ms) = &self.bundle.kind {
            for (c, m) in self.system.charts.iter().zip(ms) {
                let rows: Vec<String> = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| show(m.get(i, j))).collect::<Vec<_>>().join(", "))
                    .collect();
                s += &format!("{} = {}\n", c.name, rows.join("; "));
            }
        }
        if !self.triples.is_empty() {
            s += "\n[triples]\n";
            for t in &self.triples {
                let names: Vec<&str> = t.iter().map(|&k| self.system.charts[k].name.as_str()).collect();
                s += &format!("{}\n", names.join(" "));
            }
        }
        s
    }
}

const P1: &str = "\
name = p1

[variables]
x

[charts]
U0
U1

[overlaps]
U0 -> U1 : 1/x

[bundle]
kind = tangent
";

const P2: &str = "\
name = p2

[variables]
x y

[charts]
U0
U1
U2

[overlaps]
U0 -> U1 : 1/x, y/x
U0 -> U2 : x/y, 1/y

[bundle]
kind = tangent

[triples]
U0 U1 U2
";
