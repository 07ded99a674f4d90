//! The `genus` command: inputs, two-path evaluation and rendering.
//!
//! Input files list one fixed point per line as comma-separated cotangent
//! eigenvalues (`2, 3` or `1/2, 3/2`); `#` starts a comment.

use std::fmt::Write as _;

use num_traits::Signed;
use serde::Serialize;

use chiral_core::genus::{genus_trace, FixedPointDatum, GenusInput};
use chiral_core::{Error, Rational, UQSeries};

use crate::CliError;

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::Invalid(format!("'{}' is not a rational number", s.trim())))
}

pub fn parse_lambdas(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

pub fn parse_genus_input(text: &str, order: usize) -> Result<GenusInput, CliError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let eig = parse_lambdas(line).map_err(|e| CliError::Invalid(format!("line {}: {e}", i + 1)))?;
        points.push(FixedPointDatum::new(eig)?);
    }
    Ok(GenusInput::new(points, order)?)
}

/// Built-in example, with optional eigenvalues at the first fixed point.
pub fn example_input(name: &str, lambdas: Option<&[Rational]>, order: usize) -> Result<GenusInput, CliError> {
    let expected = match name {
        "p1" => 1,
        "p2" => 2,
        _ => return Err(CliError::Invalid(format!("unknown example '{name}' (expected p1 or p2)"))),
    };
    match lambdas {
        None => Ok(GenusInput::builtin(name, order).expect("known example")?),
        Some(l) if l.len() == expected => Ok(GenusInput::projective(l, order)?),
        Some(l) => Err(CliError::Invalid(format!(
            "example {name} takes {expected} eigenvalue(s), got {}",
            l.len()
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusRow {
    pub q: usize,
    pub u: i64,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusResult {
    pub fixed_points: usize,
    pub dim: usize,
    pub qmax: usize,
    /// `None` when the two evaluation paths disagree.
    pub series: Option<Vec<GenusRow>>,
    pub at_y_one: Option<Vec<String>>,
    pub two_paths_agree: bool,
    pub detail: Option<String>,
}

fn monomial(c: &Rational, u: i64, q: usize) -> String {
    format!("{} * u^{} * q^{}", c, u, q)
}

pub fn evaluate(input: &GenusInput) -> Result<GenusResult, CliError> {
    let base = GenusResult {
        fixed_points: input.points.len(),
        dim: input.dim,
        qmax: input.order,
        series: None,
        at_y_one: None,
        two_paths_agree: false,
        detail: None,
    };
    match genus_trace(input) {
        Ok(t) => Ok(GenusResult {
            series: Some(rows(&t)),
            at_y_one: Some(t.eval_u(&Rational::from_integer(1.into())).iter().map(ToString::to_string).collect()),
            two_paths_agree: true,
            ..base
        }),
        Err(Error::Consistency(msg)) => Ok(GenusResult {
            detail: Some(msg),
            ..base
        }),
        Err(e) => Err(e.into()),
    }
}

fn rows(t: &UQSeries) -> Vec<GenusRow> {
    t.table()
        .into_iter()
        .map(|(q, u, c)| GenusRow { q, u, coeff: c.to_string() })
        .collect()
}

pub fn render_text(r: &GenusResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} fixed point(s), dimension {}, through q^{}; y = u^2",
        r.fixed_points, r.dim, r.qmax
    );
    if let Some(rows) = &r.series {
        let _ = writeln!(s, "T(y,q) =");
        for row in rows {
            let c = parse_rational(&row.coeff).expect("rendered rational");
            let sign = if c.is_negative() { "-" } else { "+" };
            let _ = writeln!(s, "  {sign} {}", monomial(&c.abs(), row.u, row.q));
        }
    }
    if let Some(v) = &r.at_y_one {
        let _ = writeln!(s, "T(1,q) coefficients by q-degree: [{}]", v.join(", "));
    }
    let _ = writeln!(
        s,
        "two-path comparison (fixed-point sum vs theta quotients): {}",
        if r.two_paths_agree { "pass" } else { "FAIL" }
    );
    if let Some(d) = &r.detail {
        let _ = writeln!(s, "  {d}");
    }
    s
}

pub fn render_machine(r: &GenusResult) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("genus result serializes");
    s.push('\n');
    s
}
