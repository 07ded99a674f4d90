use std::fmt;

use crate::error::{Error, Result};

use super::ratfunc::RatFunc;

/// Dense matrix of rational functions, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<RatFunc>,
}

impl RatMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            nvars,
            entries: vec![RatFunc::zero(nvars); rows * cols],
        }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(nvars, n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|e| e.nvars() != nvars) {
            return Err(Error::Shape("matrix entries over different rings".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            nvars,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(nvars: usize, diag: Vec<RatFunc>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(nvars, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nvars, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RatFunc::zero(self.nvars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RatMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &RatMatrix,
        f: impl Fn(&RatFunc, &RatFunc) -> RatFunc,
    ) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("matrix sizes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries,
        })
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<Self> {
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Entrywise partial derivative.
    pub fn partial(&self, i: usize) -> Result<Self> {
        self.try_map(|e| e.partial(i))
    }

    pub fn trace(&self) -> RatFunc {
        let mut acc = RatFunc::zero(self.nvars);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn determinant(&self) -> Result<RatFunc> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = RatFunc::one(self.nvars);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(RatFunc::zero(self.nvars));
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.recip()?;
            for r in col + 1..n {
                let f = m.get(r, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c) - &(&f * m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Gauss-Jordan inverse over the field of rational functions.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(self.nvars, n);
        for col in 0..n {
            let p = (col..n)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| {
                    m.get(r, col).numer().num_terms() + m.get(r, col).denom().num_terms()
                })
                .ok_or(Error::NonInvertible)?;
            m.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pinv = m.get(col, col).recip()?;
            for c in 0..n {
                m.set(col, c, m.get(col, c) * &pinv);
                inv.set(col, c, inv.get(col, c) * &pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = m.get(r, c) - &(&f * m.get(col, c));
                    m.set(r, c, v);
                    let w = inv.get(r, c) - &(&f * inv.get(col, c));
                    inv.set(r, c, w);
                }
            }
        }
        Ok(inv)
    }

    /// Substitute rational functions for the variables in every entry.
    pub fn compose(&self, subs: &[RatFunc]) -> Result<Self> {
        let nvars = subs.first().map(RatFunc::nvars).unwrap_or(self.nvars);
        let entries = self
            .entries
            .iter()
            .map(|e| e.compose(subs))
            .collect::<Result<_>>()?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars,
            entries,
        })
    }
}

/// Matrix `J[i][j] = ∂F_i/∂x_j` of a coordinate map `x ↦ F(x)`.
pub fn jacobian(map: &[RatFunc]) -> Result<RatMatrix> {
    let n = map.len();
    let nvars = map.first().map(RatFunc::nvars).unwrap_or(0);
    let mut j = RatMatrix::zeros(nvars, n, nvars);
    for (i, f) in map.iter().enumerate() {
        for v in 0..nvars {
            j.set(i, v, f.partial(v)?);
        }
    }
    Ok(j)
}

/// Frame-change matrix for new coordinates `x' = F(x)`.
///
/// Returns `g` with `∂/∂x'_i = Σ_j g[i][j] ∂/∂x_j`, written in the old
/// coordinates; this is the inverse transpose of the Jacobian of `F`.
pub fn jacobian_of_map(new_in_old: &[RatFunc]) -> Result<RatMatrix> {
    let j = jacobian(new_in_old)?;
    if !j.is_square() {
        return Err(Error::Shape("coordinate change must be square".into()));
    }
    if j.determinant()?.is_zero() {
        return Err(Error::NonInvertible);
    }
    Ok(j.invert()?.transpose())
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> RatFunc {
        RatFunc::var(2, i)
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::from_int(2, n)
    }

    #[test]
    fn unipotent_inverse() {
        let m = RatMatrix::from_rows(2, vec![vec![c(1), x(0)], vec![c(0), c(1)]]).unwrap();
        let expected = RatMatrix::from_rows(2, vec![vec![c(1), -x(0)], vec![c(0), c(1)]]).unwrap();
        assert_eq!(m.invert().unwrap(), expected);
        assert!(m.mul(&expected).unwrap().is_identity());
        assert!(RatMatrix::identity(2, 3).invert().unwrap().is_identity());
    }

    #[test]
    fn singular_rejected() {
        let m = RatMatrix::from_rows(2, vec![vec![x(0), x(0)], vec![c(1), c(1)]]).unwrap();
        assert_eq!(m.invert(), Err(Error::NonInvertible));
        assert!(m.determinant().unwrap().is_zero());
    }

    #[test]
    fn rational_inverse_round_trip() {
        let m = RatMatrix::from_rows(
            2,
            vec![
                vec![&x(0) + &c(1), x(1)],
                vec![x(0).recip().unwrap(), &x(1) - &c(2)],
            ],
        )
        .unwrap();
        let inv = m.invert().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn chain_rule_matrices() {
        let one = RatFunc::var(1, 0);
        assert!(jacobian_of_map(std::slice::from_ref(&one)).unwrap().is_identity());
        let g = jacobian_of_map(&[one.scale(&super::super::poly::rational_from(2, 1))]).unwrap();
        assert_eq!(
            g.get(0, 0),
            &RatFunc::constant(1, super::super::poly::rational_from(1, 2))
        );
        let g = jacobian_of_map(&[one.recip().unwrap()]).unwrap();
        assert_eq!(g.get(0, 0), &-one.pow(2).unwrap());
    }

    #[test]
    fn singular_change_rejected() {
        let f = vec![&x(0) + &x(1), &(&x(0) + &x(1)) * &c(2)];
        assert_eq!(jacobian_of_map(&f), Err(Error::NonInvertible));
    }
}
