//! Superforms stored by their values on tuples of basis fields.
//!
//! A form of degree `k ≥ 1` is an `A`-polylinear map from `(k-1)`-tuples of
//! vector fields to covectors; degree 0 is a scalar.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

use super::scalar::{owned_ops, Ambient, SuperScalar};
use super::vector::{SuperCovector, SuperVector};

pub const MAX_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyForm {
    amb: Ambient,
    degree: usize,
    scalar: SuperScalar,
    table: BTreeMap<Vec<usize>, SuperCovector>,
}

/// All tuples of basis indices of the given length.
pub fn basis_tuples(amb: Ambient, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..amb.rank()).map(move |k| {
                    let mut t = t.clone();
                    t.push(k);
                    t
                })
            })
            .collect();
    }
    out
}

impl PolyForm {
    pub fn zero(amb: Ambient, degree: usize) -> Self {
        PolyForm {
            amb,
            degree,
            scalar: SuperScalar::zero(amb),
            table: BTreeMap::new(),
        }
    }

    pub fn from_scalar(a: SuperScalar) -> Self {
        let mut f = Self::zero(a.ambient(), 0);
        f.scalar = a;
        f
    }

    pub fn from_covector(eta: SuperCovector) -> Self {
        let mut f = Self::zero(eta.ambient(), 1);
        if !eta.is_zero() {
            f.table.insert(Vec::new(), eta);
        }
        f
    }

    /// Build a form of degree `≥ 1` from its values on basis tuples.
    pub fn from_basis_fn(
        amb: Ambient,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Result<SuperCovector>,
    ) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(degree));
        }
        let mut form = Self::zero(amb, degree);
        for t in basis_tuples(amb, degree - 1) {
            let v = f(&t)?;
            if !v.is_zero() {
                form.table.insert(t, v);
            }
        }
        Ok(form)
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.table.is_empty()
    }

    pub fn as_scalar(&self) -> Option<&SuperScalar> {
        (self.degree == 0).then_some(&self.scalar)
    }

    pub fn as_covector(&self) -> Option<SuperCovector> {
        (self.degree == 1).then(|| self.value(&[]))
    }

    pub fn value(&self, tuple: &[usize]) -> SuperCovector {
        self.table
            .get(tuple)
            .cloned()
            .unwrap_or_else(|| SuperCovector::zero(self.amb))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &SuperCovector)> {
        self.table.iter()
    }

    fn tuple_parity(&self, tuple: &[usize]) -> u8 {
        tuple.iter().map(|&k| self.amb.basis_parity(k)).sum::<u8>() % 2
    }

    /// Component of parity `p` as a map.
    pub fn part(&self, p: u8) -> Self {
        if self.degree == 0 {
            return Self::from_scalar(self.scalar.part(p));
        }
        let mut out = Self::zero(self.amb, self.degree);
        for (t, v) in &self.table {
            let w = v.part((p + self.tuple_parity(t)) % 2);
            if !w.is_zero() {
                out.table.insert(t.clone(), w);
            }
        }
        out
    }

    pub fn homogeneous_parts(&self) -> Vec<(u8, Self)> {
        [0u8, 1]
            .into_iter()
            .map(|p| (p, self.part(p)))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    pub fn parity(&self) -> Option<u8> {
        match self.homogeneous_parts().as_slice() {
            [] => Some(0),
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    /// Evaluate on arbitrary vector fields by polylinear extension, pulling
    /// each coefficient to the left past `h` and the earlier basis fields.
    pub fn eval(&self, args: &[SuperVector]) -> Result<SuperCovector> {
        if self.degree == 0 || args.len() + 1 != self.degree {
            return Err(Error::Shape(format!(
                "degree {} form evaluated on {} arguments",
                self.degree,
                args.len()
            )));
        }
        let mut acc = SuperCovector::zero(self.amb);
        for (ph, h) in self.homogeneous_parts() {
            for (t, v) in &h.table {
                let mut coeff = SuperScalar::one(self.amb);
                let mut passed = ph;
                for (x, &k) in args.iter().zip(t) {
                    let c = x.comp(k);
                    if c.is_zero() {
                        coeff = SuperScalar::zero(self.amb);
                        break;
                    }
                    coeff = &coeff * &c.involution_pow(passed);
                    passed = (passed + self.amb.basis_parity(k)) % 2;
                }
                if !coeff.is_zero() {
                    acc = &acc + &v.left_mul(&coeff);
                }
            }
        }
        Ok(acc)
    }

    /// `⟨X_1, h(X_2, …, X_k)⟩`, the associated `k`-linear function.
    pub fn eval_full(&self, args: &[SuperVector]) -> Result<SuperScalar> {
        if self.degree == 0 {
            return if args.is_empty() {
                Ok(self.scalar.clone())
            } else {
                Err(Error::Shape("degree 0 form takes no arguments".into()))
            };
        }
        let (first, rest) = args
            .split_first()
            .ok_or_else(|| Error::Shape("missing arguments".into()))?;
        Ok(first.pair(&self.eval(rest)?))
    }

    /// Graded skew symmetry on basis tuples of `h(τ_1, …, τ_k)`, i.e. of
    /// `⟨τ_1, h(τ_2, …)⟩` with the sign of moving `τ_1` past `h`.
    pub fn is_graded_skew(&self) -> bool {
        if self.degree < 2 {
            return true;
        }
        self.homogeneous_parts().iter().all(|(ph, h)| {
            let full = |t: &[usize]| -> SuperScalar {
                let p0 = self.amb.basis_parity(t[0]);
                let v = h.value(&t[1..]).comp(t[0]).involution_pow(p0);
                if p0 * ph == 1 {
                    -v
                } else {
                    v
                }
            };
            basis_tuples(self.amb, self.degree).iter().all(|t| {
                let base = full(t);
                (0..t.len() - 1).all(|i| {
                    let mut s = t.clone();
                    s.swap(i, i + 1);
                    let odd_pair =
                        self.amb.basis_parity(t[i]) * self.amb.basis_parity(t[i + 1]) == 1;
                    full(&s) == if odd_pair { base.clone() } else { -&base }
                })
            })
        })
    }

    /// No odd directions, no `ρ` components and coefficients free of `φ`:
    /// the form lies in the even de Rham subcomplex.
    pub fn is_purely_even(&self) -> bool {
        let n = self.amb.n;
        if self.degree == 0 {
            return self.scalar.terms().all(|(mask, _)| mask == 0);
        }
        self.table.iter().all(|(t, v)| {
            t.iter().all(|&k| k < n)
                && v.comps()
                    .iter()
                    .enumerate()
                    .all(|(k, c)| c.is_zero() || (k < n && c.terms().all(|(mask, _)| mask == 0)))
        })
    }

    pub fn left_mul(&self, f: &SuperScalar) -> Self {
        let mut out = Self::zero(self.amb, self.degree);
        out.scalar = f * &self.scalar;
        for (t, v) in &self.table {
            let w = v.left_mul(f);
            if !w.is_zero() {
                out.table.insert(t.clone(), w);
            }
        }
        out
    }

    fn combine(
        &self,
        other: &PolyForm,
        f: impl Fn(&SuperCovector, &SuperCovector) -> SuperCovector,
    ) -> Self {
        assert_eq!(self.degree, other.degree, "form degrees differ");
        let mut out = Self::zero(self.amb, self.degree);
        let zero = SuperCovector::zero(self.amb);
        let keys: std::collections::BTreeSet<&Vec<usize>> =
            self.table.keys().chain(other.table.keys()).collect();
        for k in keys {
            let v = f(
                self.table.get(k).unwrap_or(&zero),
                other.table.get(k).unwrap_or(&zero),
            );
            if !v.is_zero() {
                out.table.insert(k.clone(), v);
            }
        }
        out
    }
}

impl Add for &PolyForm {
    type Output = PolyForm;
    fn add(self, rhs: &PolyForm) -> PolyForm {
        let mut out = self.combine(rhs, |a, b| a + b);
        out.scalar = &self.scalar + &rhs.scalar;
        out
    }
}

impl Sub for &PolyForm {
    type Output = PolyForm;
    fn sub(self, rhs: &PolyForm) -> PolyForm {
        let mut out = self.combine(rhs, |a, b| a - b);
        out.scalar = &self.scalar - &rhs.scalar;
        out
    }
}

impl Neg for &PolyForm {
    type Output = PolyForm;
    fn neg(self) -> PolyForm {
        self.left_mul(&-SuperScalar::one(self.amb))
    }
}

owned_ops!(PolyForm);

/// Contraction `⟨τ, h⟩(τ_1, …) = (-1)^{p(τ)p(h)} h(τ, τ_1, …)`.
pub fn pair_contract(v: &SuperVector, h: &PolyForm) -> Result<PolyForm> {
    let amb = h.amb;
    match h.degree {
        0 => Err(Error::DegreeOutOfRange(0)),
        1 => Ok(PolyForm::from_scalar(v.pair(&h.value(&[])))),
        k => {
            let mut out = PolyForm::zero(amb, k - 1);
            for (ph, hp) in h.homogeneous_parts() {
                for (pv, vp) in v.homogeneous_parts() {
                    let part = PolyForm::from_basis_fn(amb, k - 1, |t| {
                        let mut args = vec![vp.clone()];
                        args.extend(t.iter().map(|&j| SuperVector::basis(amb, j)));
                        let w = hp.eval(&args)?;
                        Ok(if ph * pv == 1 { -w } else { w })
                    })?;
                    out = &out + &part;
                }
            }
            Ok(out)
        }
    }
}

/// Action of a homogeneous vector field on forms.
pub fn lie_action(v: &SuperVector, h: &PolyForm) -> Result<PolyForm> {
    let pv = v.homogeneous_parity()?;
    let amb = h.amb;
    match h.degree {
        0 => Ok(PolyForm::from_scalar(v.apply(&h.scalar))),
        1 => Ok(PolyForm::from_covector(v.act_on_covector(&h.value(&[])))),
        k => {
            let mut out = PolyForm::zero(amb, k);
            for (ph, hp) in h.homogeneous_parts() {
                out = &out + &lie_action_part(v, pv, ph, &hp)?;
            }
            Ok(out)
        }
    }
}

fn lie_action_part(v: &SuperVector, pv: u8, ph: u8, h: &PolyForm) -> Result<PolyForm> {
    let amb = h.amb;
    PolyForm::from_basis_fn(amb, h.degree, |t| {
        let mut acc = v.act_on_covector(&h.value(t));
        let mut passed = ph;
        for j in 0..t.len() {
            let mut args: Vec<SuperVector> =
                t.iter().map(|&l| SuperVector::basis(amb, l)).collect();
            args[j] = v.bracket(&args[j]);
            if !args[j].is_zero() {
                let w = h.eval(&args)?;
                acc = if pv * passed == 1 {
                    &acc + &w
                } else {
                    &acc - &w
                };
            }
            passed = (passed + amb.basis_parity(t[j])) % 2;
        }
        Ok(acc)
    })
}

/// Lie-algebra differential of a covector-valued multilinear map `h` of
/// parity `h_parity`, at homogeneous arguments. Each `τ_j(h(…))` term carries
/// the extra sign `(-1)^{p(τ_j)p(h)}` of moving `τ_j` past `h`.
pub fn d_lie(
    taus: &[SuperVector],
    h_parity: u8,
    h: &dyn Fn(&[SuperVector]) -> Result<SuperCovector>,
) -> Result<SuperCovector> {
    let amb = taus
        .first()
        .map(SuperVector::ambient)
        .ok_or_else(|| Error::Shape("d_Lie needs at least one argument".into()))?;
    let p: Vec<u8> = taus
        .iter()
        .map(SuperVector::homogeneous_parity)
        .collect::<Result<_>>()?;
    let mut acc = SuperCovector::zero(amb);
    for j in 0..taus.len() {
        let before: u8 = p[..j].iter().sum();
        let sign = (j as u8 + p[j] * (before + h_parity)) % 2;
        let rest: Vec<SuperVector> = taus
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, t)| t.clone())
            .collect();
        let term = taus[j].act_on_covector(&h(&rest)?);
        acc = if sign == 1 {
            &acc - &term
        } else {
            &acc + &term
        };
    }
    for j in 0..taus.len() {
        for l in j + 1..taus.len() {
            let br = taus[j].bracket(&taus[l]);
            if br.is_zero() {
                continue;
            }
            let before_j: u8 = p[..j].iter().sum();
            let before_l: u8 = p[..l].iter().sum::<u8>() - p[j];
            let sign = ((j + l) as u8 + p[j] * before_j + p[l] * before_l) % 2;
            let mut args = vec![br];
            args.extend(
                taus.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j && *i != l)
                    .map(|(_, t)| t.clone()),
            );
            let term = h(&args)?;
            acc = if sign == 1 {
                &acc - &term
            } else {
                &acc + &term
            };
        }
    }
    Ok(acc)
}

/// De Rham-Chevalley differential; `d a = -∂a` in degree 0.
pub fn de_rham_d(h: &PolyForm) -> Result<PolyForm> {
    let amb = h.amb;
    if h.degree >= MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(h.degree + 1));
    }
    if h.degree == 0 {
        return Ok(PolyForm::from_covector(-SuperCovector::differential(
            &h.scalar,
        )));
    }
    let mut out = PolyForm::zero(amb, h.degree + 1);
    for (ph, hp) in h.homogeneous_parts() {
        let part = PolyForm::from_basis_fn(amb, h.degree + 1, |t| {
            let taus: Vec<SuperVector> = t.iter().map(|&k| SuperVector::basis(amb, k)).collect();
            let lie = d_lie(&taus, ph, &|args: &[SuperVector]| hp.eval(args))?;
            let inner = taus[0].pair(&hp.eval(&taus[1..])?);
            let corr = SuperCovector::differential(&inner);
            Ok(if ph * amb.basis_parity(t[0]) == 1 {
                &lie + &corr
            } else {
                &lie - &corr
            })
        })?;
        out = &out + &part;
    }
    Ok(out)
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "{}", self.scalar);
        }
        if self.table.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .table
            .iter()
            .map(|(t, v)| {
                let args: Vec<String> = t
                    .iter()
                    .map(|&k| {
                        if k < self.amb.n {
                            format!("tau{}", k + 1)
                        } else {
                            format!("psi{}", k - self.amb.n + 1)
                        }
                    })
                    .collect();
                format!("h({}) = {}", args.join(", "), v)
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RatFunc;

    fn amb1() -> Ambient {
        Ambient::new(1, 1)
    }

    #[test]
    fn d_of_coordinate() {
        let x = SuperScalar::coord(amb1(), 0);
        let d = de_rham_d(&PolyForm::from_scalar(x)).unwrap();
        assert_eq!(d.as_covector().unwrap(), -SuperCovector::omega(amb1(), 0));
    }

    #[test]
    fn d_squared_on_product() {
        let a = Ambient::new(2, 0);
        let f = &SuperScalar::coord(a, 0) * &SuperScalar::coord(a, 1);
        let dd = de_rham_d(&de_rham_d(&PolyForm::from_scalar(f)).unwrap()).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn d_of_x_omega_at_tau() {
        let x = SuperScalar::coord(amb1(), 0);
        let h = PolyForm::from_covector(SuperCovector::omega(amb1(), 0).left_mul(&x));
        let d = de_rham_d(&h).unwrap();
        assert!(d.value(&[0]).is_zero());
    }

    #[test]
    fn pairing_examples() {
        let a = Ambient::new(2, 1);
        let w = PolyForm::from_covector(SuperCovector::omega(a, 1));
        assert!(pair_contract(&SuperVector::tau(a, 1), &w)
            .unwrap()
            .as_scalar()
            .unwrap()
            .is_one());
        assert!(pair_contract(&SuperVector::psi(a, 0), &w)
            .unwrap()
            .as_scalar()
            .unwrap()
            .is_zero());
        assert_eq!(
            pair_contract(
                &SuperVector::tau(a, 0),
                &PolyForm::from_scalar(SuperScalar::one(a))
            ),
            Err(Error::DegreeOutOfRange(0))
        );
    }

    #[test]
    fn odd_contraction_sign() {
        // h(ψ1) = φ1 ω1 is an even form; with an odd form (h(ψ1) = ω1) the
        // contraction by ψ1 flips sign.
        let a = amb1();
        let odd = PolyForm::from_basis_fn(a, 2, |t| {
            Ok(if t == [1] {
                SuperCovector::omega(a, 0)
            } else {
                SuperCovector::zero(a)
            })
        })
        .unwrap();
        assert_eq!(odd.parity(), Some(1));
        let c = pair_contract(&SuperVector::psi(a, 0), &odd).unwrap();
        assert_eq!(c.as_covector().unwrap(), -SuperCovector::omega(a, 0));
    }

    #[test]
    fn lie_action_examples() {
        let a = amb1();
        let w = PolyForm::from_covector(SuperCovector::omega(a, 0));
        assert!(lie_action(&SuperVector::tau(a, 0), &w).unwrap().is_zero());
        let xw =
            PolyForm::from_covector(SuperCovector::omega(a, 0).left_mul(&SuperScalar::coord(a, 0)));
        assert_eq!(lie_action(&SuperVector::tau(a, 0), &xw).unwrap(), w);
        assert!(lie_action(&SuperVector::tau(a, 0), &PolyForm::zero(a, 2))
            .unwrap()
            .is_zero());
        let mixed = &SuperVector::tau(a, 0) + &SuperVector::psi(a, 0);
        assert_eq!(lie_action(&mixed, &w), Err(Error::Inhomogeneous));
    }

    #[test]
    fn exact_two_form_is_skew() {
        let a = Ambient::new(2, 1);
        let x = RatFunc::var(2, 0);
        let eta = &SuperCovector::omega(a, 1).left_mul(&SuperScalar::from_rf(a, &x * &x))
            + &SuperCovector::rho(a, 0).left_mul(&SuperScalar::coord(a, 1));
        let d = de_rham_d(&PolyForm::from_covector(eta)).unwrap();
        assert!(d.is_graded_skew());
        assert!(de_rham_d(&d).unwrap().is_zero());
    }
}
