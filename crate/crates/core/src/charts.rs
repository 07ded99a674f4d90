//! Chart systems and bundle choices that produce families of frames.

use crate::algebroid::Frame;
use crate::error::{Error, Result};
use crate::kernel::{jacobian_of_map, parse_with_names, RatFunc, RatMatrix};
use crate::superalg::Ambient;

/// A coordinate chart given by its coordinates as functions of the base
/// chart's variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub name: String,
    pub coords: Vec<RatFunc>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartSystem {
    pub name: String,
    pub vars: Vec<String>,
    pub charts: Vec<Chart>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BundleKind {
    /// `A = g`.
    Tangent,
    /// `A = (g^{-1})^t`.
    Cotangent,
    /// One odd matrix per chart, relative to the base chart's odd basis.
    General(Vec<RatMatrix>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleSpec {
    pub kind: BundleKind,
}

impl BundleSpec {
    pub fn tangent() -> Self {
        BundleSpec {
            kind: BundleKind::Tangent,
        }
    }

    pub fn cotangent() -> Self {
        BundleSpec {
            kind: BundleKind::Cotangent,
        }
    }

    pub fn general(odd: Vec<RatMatrix>) -> Self {
        BundleSpec {
            kind: BundleKind::General(odd),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            BundleKind::Tangent => "tangent",
            BundleKind::Cotangent => "cotangent",
            BundleKind::General(_) => "general",
        }
    }

    /// Odd rank on a system with `n` even variables.
    pub fn rank(&self, n: usize) -> usize {
        match &self.kind {
            BundleKind::General(m) => m.first().map(RatMatrix::rows).unwrap_or(0),
            _ => n,
        }
    }

    /// The dual bundle, with transpose-inverse odd matrices.
    pub fn dual(&self) -> Result<BundleSpec> {
        Ok(match &self.kind {
            BundleKind::Tangent => Self::cotangent(),
            BundleKind::Cotangent => Self::tangent(),
            BundleKind::General(ms) => Self::general(
                ms.iter()
                    .map(|m| Ok(m.invert()?.transpose()))
                    .collect::<Result<_>>()?,
            ),
        })
    }
}

impl ChartSystem {
    /// Build from textual coordinate expressions in the variables `vars`.
    pub fn from_text(name: &str, vars: &[&str], charts: &[(&str, &[&str])]) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let charts = charts
            .iter()
            .map(|(cname, exprs)| {
                Ok(Chart {
                    name: cname.to_string(),
                    coords: exprs
                        .iter()
                        .map(|e| parse_with_names(e, &names))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        let sys = ChartSystem {
            name: name.to_string(),
            vars: names,
            charts,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// `x ↦ 1/x` plus two further coordinates on the affine chart.
    pub fn projective_line() -> Self {
        Self::from_text(
            "p1",
            &["x"],
            &[
                ("U0", &["x"]),
                ("U1", &["1/x"]),
                ("U0-moebius", &["x/(x + 1)"]),
                ("U0-quadratic", &["x^2 + x"]),
            ],
        )
        .expect("built-in chart system")
    }

    /// The three standard charts of the plane plus a sheared copy of the first.
    pub fn projective_plane() -> Self {
        Self::from_text(
            "p2",
            &["x", "y"],
            &[
                ("U0", &["x", "y"]),
                ("U1", &["1/x", "y/x"]),
                ("U2", &["x/y", "1/y"]),
                ("U0-sheared", &["x", "y + x^2"]),
            ],
        )
        .expect("built-in chart system")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "p1" => Some(Self::projective_line()),
            "p2" => Some(Self::projective_plane()),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.charts.is_empty() {
            return Err(Error::Invalid("chart system has no charts".into()));
        }
        for c in &self.charts {
            if c.coords.len() != self.dim() {
                return Err(Error::Shape(format!(
                    "chart {} has {} coordinates for {} variables",
                    c.name,
                    c.coords.len(),
                    self.dim()
                )));
            }
            jacobian_of_map(&c.coords).map_err(|e| match e {
                Error::NonInvertible => {
                    Error::Invalid(format!("chart {} has a singular Jacobian", c.name))
                }
                e => e,
            })?;
        }
        Ok(())
    }

    /// Frame matrix of chart `k` relative to the coordinate fields.
    pub fn even_matrix(&self, k: usize) -> Result<RatMatrix> {
        jacobian_of_map(&self.charts[k].coords)
    }

    pub fn frame(&self, k: usize, bundle: &BundleSpec) -> Result<Frame> {
        let n = self.dim();
        let g = self.even_matrix(k)?;
        let odd = match &bundle.kind {
            BundleKind::Tangent => g.clone(),
            BundleKind::Cotangent => g.invert()?.transpose(),
            BundleKind::General(ms) => ms
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("no odd matrix for chart {k}")))?,
        };
        let m = odd.rows();
        Frame::new(
            self.charts[k].name.clone(),
            Ambient::new(n, m),
            g,
            odd,
            true,
        )
    }

    pub fn frames(&self, bundle: &BundleSpec) -> Result<Vec<Frame>> {
        (0..self.charts.len()).map(|k| self.frame(k, bundle)).collect()
    }
}
