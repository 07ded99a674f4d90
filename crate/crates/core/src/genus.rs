//! Characters, theta quotients and the equivariant elliptic genus through a
//! fixed `q`-order. Series live in `u` with `y = u^2`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Rational, UQSeries};

/// The monomial `c · u^u · q^q` substituted for the formal variable of a
/// symmetric or exterior power.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub coeff: Rational,
    pub u: i64,
    pub q: usize,
}

impl Weight {
    pub fn new(coeff: i64, u: i64, q: usize) -> Self {
        Weight {
            coeff: Rational::from_integer(coeff.into()),
            u,
            q,
        }
    }

    fn series(&self, lambda: &Rational, order: usize) -> UQSeries {
        UQSeries::monomial(order, lambda * &self.coeff, self.u, self.q)
    }
}

/// `Π (1 - λ_i x)^{-1}` through `q^order`.
pub fn char_sym(eigenvalues: &[Rational], x: &Weight, order: usize) -> Result<UQSeries> {
    if x.q == 0 && !eigenvalues.is_empty() {
        return Err(Error::NonconvergentTruncation(
            "symmetric powers need a positive q-exponent".into(),
        ));
    }
    let mut acc = UQSeries::one(order);
    for l in eigenvalues {
        let t = x.series(l, order);
        let mut geo = UQSeries::one(order);
        let mut p = UQSeries::one(order);
        for _ in 0..order / x.q {
            p = &p * &t;
            geo = &geo + &p;
        }
        acc = &acc * &geo;
    }
    Ok(acc)
}

/// `Π (1 + λ_i x)`.
pub fn char_ext(eigenvalues: &[Rational], x: &Weight, order: usize) -> UQSeries {
    eigenvalues.iter().fold(UQSeries::one(order), |acc, l| {
        &acc * &(&UQSeries::one(order) + &x.series(l, order))
    })
}

fn check_simple(lambda: &Rational) -> Result<()> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::SimplicityViolation(format!(
            "eigenvalue {lambda} is not allowed at a simple fixed point"
        )));
    }
    Ok(())
}

/// Cotangent eigenvalues at a nondegenerate fixed point.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointDatum {
    eigenvalues: Vec<Rational>,
}

impl FixedPointDatum {
    pub fn new(eigenvalues: Vec<Rational>) -> Result<Self> {
        eigenvalues.iter().try_for_each(check_simple)?;
        Ok(FixedPointDatum { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[Rational] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn inverses(&self) -> Vec<Rational> {
        self.eigenvalues.iter().map(Rational::recip).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenusInput {
    pub dim: usize,
    pub points: Vec<FixedPointDatum>,
    pub order: usize,
}

impl GenusInput {
    pub fn new(points: Vec<FixedPointDatum>, order: usize) -> Result<Self> {
        let dim = points
            .first()
            .ok_or_else(|| Error::Invalid("no fixed points".into()))?
            .dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::Invalid("fixed points of different dimensions".into()));
        }
        Ok(GenusInput { dim, points, order })
    }

    /// Diagonal torus element `t` on projective `n`-space: at the `k`-th
    /// coordinate point the cotangent eigenvalues are `t_k / t_j`, `j ≠ k`.
    pub fn from_torus_weights(weights: &[Rational], order: usize) -> Result<Self> {
        if weights.len() < 2 || weights.iter().any(Zero::is_zero) {
            return Err(Error::Invalid("need at least two nonzero torus weights".into()));
        }
        let points = (0..weights.len())
            .map(|k| {
                FixedPointDatum::new(
                    (0..weights.len())
                        .filter(|&j| j != k)
                        .map(|j| &weights[k] / &weights[j])
                        .collect(),
                )
            })
            .collect::<Result<_>>()?;
        Self::new(points, order)
    }

    /// Projective space whose first fixed point has cotangent eigenvalues
    /// `lambdas`, i.e. torus weights `(1, 1/λ_1, ..., 1/λ_n)`.
    pub fn projective(lambdas: &[Rational], order: usize) -> Result<Self> {
        lambdas.iter().try_for_each(check_simple)?;
        let mut w = vec![Rational::one()];
        w.extend(lambdas.iter().map(Rational::recip));
        Self::from_torus_weights(&w, order)
    }

    /// `p1` with `λ = 2` and `p2` with `(2, 3)`.
    pub fn builtin(name: &str, order: usize) -> Option<Result<Self>> {
        let r = |v: i64| Rational::from_integer(v.into());
        match name {
            "p1" => Some(Self::projective(&[r(2)], order)),
            "p2" => Some(Self::projective(&[r(2), r(3)], order)),
            _ => None,
        }
    }
}

/// Normalized quotient `θ(λy, q) / θ(λ, q)` for one or more eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaQuotient {
    pub eigenvalues: Vec<Rational>,
    pub series: UQSeries,
}

impl ThetaQuotient {
    /// Product over eigenvalues, the quotient attached to `diag(λ_i)`.
    pub fn of_eigenvalues(eigenvalues: &[Rational], order: usize) -> Result<Self> {
        let mut series = UQSeries::one(order);
        for l in eigenvalues {
            series = &series * &theta_series(l, order)?.series;
        }
        Ok(ThetaQuotient {
            eigenvalues: eigenvalues.to_vec(),
            series,
        })
    }
}

fn product_factor(order: usize, c: &Rational, u: i64) -> UQSeries {
    // Π_{n ≥ 1} (1 - c u^u q^n)
    (1..=order).fold(UQSeries::one(order), |acc, n| {
        &acc * &(&UQSeries::one(order) - &UQSeries::monomial(order, c.clone(), u, n))
    })
}

/// `(u - u^{-1}) Π (1 - q^n)(1 - u^2 q^n)(1 - u^{-2} q^n)`, the theta
/// function without its `i^{-1} q^{1/8}` prefactor.
pub fn plain_theta(order: usize) -> UQSeries {
    let one = Rational::one();
    let head = &UQSeries::monomial(order, one.clone(), 1, 0) - &UQSeries::monomial(order, one.clone(), -1, 0);
    [0, 2, -2]
        .iter()
        .fold(head, |acc, &u| &acc * &product_factor(order, &one, u))
}

/// `θ(λy, q) / θ(λ, q)` with the half-integral prefactors cancelled:
/// `(λu - u^{-1})/(λ - 1) · Π (1 - λu²qⁿ)(1 - λ⁻¹u⁻²qⁿ) / Π (1 - λqⁿ)(1 - λ⁻¹qⁿ)`.
pub fn theta_series(lambda: &Rational, order: usize) -> Result<ThetaQuotient> {
    check_simple(lambda)?;
    let inv = lambda.recip();
    let scale = (lambda - Rational::one()).recip();
    let head = &UQSeries::monomial(order, lambda * &scale, 1, 0)
        - &UQSeries::monomial(order, scale.clone(), -1, 0);
    let num = &product_factor(order, lambda, 2) * &product_factor(order, &inv, -2);
    let den = &product_factor(order, lambda, 0) * &product_factor(order, &inv, 0);
    let series = &(&head * &num) * &den.invert()?;
    Ok(ThetaQuotient {
        eigenvalues: vec![lambda.clone()],
        series,
    })
}

/// The Lefschetz term of one fixed point, read off the bigraded character
/// at `y → -y` and divided by `det(1 - g_x)`, times `y^{-d/2}`.
pub fn local_contribution(fp: &FixedPointDatum, order: usize) -> Result<UQSeries> {
    let cot = fp.eigenvalues();
    let tan = fp.inverses();
    let mut acc = char_ext(cot, &Weight::new(-1, 2, 0), order);
    for n in 1..=order {
        acc = &acc * &char_sym(&tan, &Weight::new(1, 0, n), order)?;
        acc = &acc * &char_sym(cot, &Weight::new(1, 0, n), order)?;
        acc = &acc * &char_ext(&tan, &Weight::new(-1, -2, n), order);
        acc = &acc * &char_ext(cot, &Weight::new(-1, 2, n), order);
    }
    let det = cot
        .iter()
        .fold(Rational::one(), |acc, l| acc * (Rational::one() - l));
    Ok(acc.scale(&det.recip()).shift_u(-(fp.dim() as i64)))
}

/// `T(y, q)` as a sum of local contributions, checked against the sum of
/// theta quotients.
pub fn genus_trace(input: &GenusInput) -> Result<UQSeries> {
    let n = input.order;
    let mut local = UQSeries::zero(n);
    let mut theta = UQSeries::zero(n);
    for p in &input.points {
        local = &local + &local_contribution(p, n)?;
        theta = &theta + &ThetaQuotient::of_eigenvalues(p.eigenvalues(), n)?.series;
    }
    if local != theta {
        let diff = &local - &theta;
        return Err(Error::Consistency(format!(
            "fixed-point sum and theta sum differ by {diff}"
        )));
    }
    Ok(local)
}

/// Bigraded counts keyed by `(weight, charge)`.
pub type CountTable = BTreeMap<(usize, i64), u64>;

pub const PBW_MAX_DIM: usize = 2;
pub const PBW_MAX_WEIGHT: usize = 4;

/// Generator of the associated graded: weight, charge, odd.
#[derive(Clone, Copy, Debug)]
struct Gen {
    weight: usize,
    charge: i64,
    odd: bool,
}

fn pbw_generators(d: usize, cap: usize) -> Vec<Gen> {
    let mut g = Vec::new();
    for _ in 0..d {
        // φ
        g.push(Gen { weight: 0, charge: 1, odd: true });
    }
    for n in 1..=cap {
        for _ in 0..d {
            // τ, ω, ψ, ρ in weight n
            g.push(Gen { weight: n, charge: 0, odd: false });
            g.push(Gen { weight: n, charge: 0, odd: false });
            g.push(Gen { weight: n, charge: -1, odd: true });
            g.push(Gen { weight: n, charge: 1, odd: true });
        }
    }
    g
}

fn enumerate(gens: &[Gen], cap: usize, weight: usize, charge: i64, out: &mut CountTable) {
    let Some((g, rest)) = gens.split_first() else {
        *out.entry((weight, charge)).or_insert(0) += 1;
        return;
    };
    let max_mult = if g.odd {
        1
    } else {
        (cap - weight) / g.weight
    };
    for k in 0..=max_mult {
        let w = weight + k * g.weight;
        if w > cap {
            break;
        }
        enumerate(rest, cap, w, charge + k as i64 * g.charge, out);
    }
}

/// Count PBW monomials on a rank-`d` chart by weight and charge, up to `cap`.
pub fn pbw_count(d: usize, cap: usize) -> Result<CountTable> {
    if d > PBW_MAX_DIM || cap > PBW_MAX_WEIGHT {
        return Err(Error::Invalid(format!(
            "enumeration cap exceeded: dimension {d} (max {PBW_MAX_DIM}), weight {cap} (max {PBW_MAX_WEIGHT})"
        )));
    }
    let mut out = CountTable::new();
    enumerate(&pbw_generators(d, cap), cap, 0, 0, &mut out);
    Ok(out)
}

/// The bigraded character with every bundle replaced by a trivial one of
/// rank `d`, as a series in `u = y^{1/2}`.
pub fn pbw_character(d: usize, order: usize) -> Result<UQSeries> {
    let ones = vec![Rational::one(); d];
    let mut acc = char_ext(&ones, &Weight::new(1, 2, 0), order);
    for n in 1..=order {
        let s = char_sym(&ones, &Weight::new(1, 0, n), order)?;
        acc = &acc * &(&s * &s);
        acc = &acc * &char_ext(&ones, &Weight::new(1, -2, n), order);
        acc = &acc * &char_ext(&ones, &Weight::new(1, 2, n), order);
    }
    Ok(acc)
}

/// Counts laid out as a series: charge `c` at weight `n` is `u^{2c} q^n`.
pub fn count_series(table: &CountTable, order: usize) -> UQSeries {
    let mut s = UQSeries::zero(order);
    for (&(w, c), &k) in table {
        if w <= order {
            s.add_coeff(2 * c, w, Rational::from_integer(k.into()));
        }
    }
    s
}
