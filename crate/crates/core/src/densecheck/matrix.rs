use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use super::field::{Cyc, CycField};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Square matrix over a cyclotomic field, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    field: Arc<CycField>,
    dim: usize,
    data: Vec<Cyc>,
}

impl ExactMatrix {
    pub fn zeros(field: Arc<CycField>, dim: usize) -> Self {
        let z = field.zero();
        ExactMatrix { data: vec![z; dim * dim], field, dim }
    }

    pub fn identity(field: Arc<CycField>, dim: usize) -> Self {
        let mut m = ExactMatrix::zeros(field, dim);
        for i in 0..dim {
            m.data[i * dim + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: Arc<CycField>, rows: Vec<Vec<Cyc>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("matrix must be square and nonempty".into()));
        }
        if rows.iter().flatten().any(|c| c.0.len() != field.degree()) {
            return Err(Error::InvalidParameter("entry lies in a different field".into()));
        }
        Ok(ExactMatrix { field, dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_rationals(rows: &[Vec<Rational>]) -> Result<Self> {
        let field = Arc::new(CycField::rationals());
        let cyc = rows
            .iter()
            .map(|r| r.iter().map(|v| field.from_rational(v.clone())).collect())
            .collect();
        ExactMatrix::from_rows(field, cyc)
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        let q: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        ExactMatrix::from_rationals(&q)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyc) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Cyc>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Rational entries, when every entry lies in the prime field.
    pub fn to_rationals(&self) -> Option<Vec<Vec<Rational>>> {
        self.data
            .chunks(self.dim)
            .map(|r| {
                r.iter()
                    .map(|c| c.0[1..].iter().all(Zero::is_zero).then(|| c.0[0].clone()))
                    .collect()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyc::is_zero)
    }

    fn check(&self, other: &ExactMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::InvalidParameter(format!("dimension {} vs {}", self.dim, other.dim)));
        }
        if self.field.order() != other.field.order() {
            return Err(Error::InvalidParameter("matrices over different fields".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(ExactMatrix { field: self.field.clone(), dim: self.dim, data })
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Ok(ExactMatrix { field: self.field.clone(), dim: self.dim, data })
    }

    /// Product skipping zero entries on both sides; the matrices here are mostly sparse.
    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check(other)?;
        let d = self.dim;
        let f = &self.field;
        let nz_right: Vec<Vec<usize>> = (0..d)
            .map(|k| (0..d).filter(|&j| !other.get(k, j).is_zero()).collect())
            .collect();
        let mut out = ExactMatrix::zeros(f.clone(), d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in &nz_right[k] {
                    let p = f.mul(a, other.get(k, j));
                    let cell = &mut out.data[i * d + j];
                    *cell = f.add(cell, &p);
                }
            }
        }
        Ok(out)
    }

    pub fn sub_scalar(&self, lambda: &Cyc) -> ExactMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            let v = self.field.sub(self.get(i, i), lambda);
            m.set(i, i, v);
        }
        m
    }

    pub fn kron(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        let field = Arc::new(self.field.join(&other.field));
        let a = self.lift_to(&field);
        let b = other.lift_to(&field);
        let (n, m) = (a.dim, b.dim);
        let mut out = ExactMatrix::zeros(field.clone(), n * m);
        for i in 0..n {
            for j in 0..n {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        let y = b.get(k, l);
                        if !y.is_zero() {
                            out.set(i * m + k, j * m + l, field.mul(x, y));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn lift_to(&self, field: &Arc<CycField>) -> ExactMatrix {
        if field.order() == self.field.order() {
            return self.clone();
        }
        ExactMatrix {
            field: field.clone(),
            dim: self.dim,
            data: self.data.iter().map(|c| field.lift(&self.field, c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut rs = RowSpace::new(self.field.clone(), self.dim);
        for row in self.data.chunks(self.dim) {
            rs.insert(row.to_vec());
        }
        rs.rank()
    }

    pub fn to_float(&self) -> FloatMatrix {
        FloatMatrix {
            dim: self.dim,
            data: self.data.iter().map(|c| self.field.to_complex(c)).collect(),
        }
    }
}

/// Row space kept in reduced row-echelon form; rows are inserted one at a time.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: Arc<CycField>,
    width: usize,
    /// `(pivot column, row)` sorted by pivot; each row has 1 at its pivot and 0 at other pivots.
    rows: Vec<(usize, Vec<Cyc>)>,
}

impl RowSpace {
    pub fn new(field: Arc<CycField>, width: usize) -> Self {
        RowSpace { field, width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, &[Cyc])> {
        self.rows.iter().map(|(p, r)| (*p, r.as_slice()))
    }

    /// Returns true if the row was independent of those already present.
    pub fn insert(&mut self, mut row: Vec<Cyc>) -> bool {
        debug_assert_eq!(row.len(), self.width);
        let f = &self.field;
        if row.iter().all(Cyc::is_zero) {
            return false;
        }
        for (p, r) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let c = row[*p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        let Some(p) = row.iter().position(|c| !c.is_zero()) else { return false };
        let inv = f.inv(&row[p]).expect("nonzero pivot");
        for x in row.iter_mut().skip(p) {
            if !x.is_zero() {
                *x = f.mul(x, &inv);
            }
        }
        for (_, r) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, row));
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloatMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl FloatMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("matrix must be square and nonempty".into()));
        }
        Ok(FloatMatrix { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        FloatMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &FloatMatrix) -> Result<FloatMatrix> {
        if self.dim != other.dim {
            return Err(Error::InvalidParameter(format!("dimension {} vs {}", self.dim, other.dim)));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(FloatMatrix { dim: self.dim, data })
    }

    pub fn mul(&self, other: &FloatMatrix) -> Result<FloatMatrix> {
        if self.dim != other.dim {
            return Err(Error::InvalidParameter(format!("dimension {} vs {}", self.dim, other.dim)));
        }
        let d = self.dim;
        let mut out = vec![Complex64::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Ok(FloatMatrix { dim: d, data: out })
    }

    pub fn sub_scalar(&self, lambda: Complex64) -> FloatMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] -= lambda;
        }
        m
    }

    pub fn kron(&self, other: &FloatMatrix) -> FloatMatrix {
        let (n, m) = (self.dim, other.dim);
        let mut data = vec![Complex64::zero(); n * n * m * m];
        for i in 0..n {
            for j in 0..n {
                let x = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * n * m + j * m + l] = x * other.get(k, l);
                    }
                }
            }
        }
        FloatMatrix { dim: n * m, data }
    }

    /// Rank by full-pivoting elimination. `ambiguous` is set when a pivot lands within
    /// four orders of magnitude of the threshold on either side.
    pub fn rank_with_tol(&self, tol: f64) -> FloatRank {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut rank = 0;
        let mut ambiguous = false;
        let mut row_of: Vec<usize> = (0..d).collect();
        let mut col_of: Vec<usize> = (0..d).collect();
        while rank < d {
            let mut best = (0.0f64, rank, rank);
            for (ri, &r) in row_of.iter().enumerate().skip(rank) {
                for (ci, &c) in col_of.iter().enumerate().skip(rank) {
                    let v = a[r * d + c].norm();
                    if v > best.0 {
                        best = (v, ri, ci);
                    }
                }
            }
            let (mag, ri, ci) = best;
            if mag <= tol {
                if mag > tol * 1e-4 {
                    ambiguous = true;
                }
                break;
            }
            if mag < tol * 1e4 {
                ambiguous = true;
            }
            row_of.swap(rank, ri);
            col_of.swap(rank, ci);
            let (pr, pc) = (row_of[rank], col_of[rank]);
            let piv = a[pr * d + pc];
            for &r in &row_of[rank + 1..] {
                let f = a[r * d + pc] / piv;
                if f == Complex64::zero() {
                    continue;
                }
                for &c in &col_of[rank..] {
                    let v = a[pr * d + c];
                    a[r * d + c] -= f * v;
                }
            }
            rank += 1;
        }
        FloatRank { rank, ambiguous }
    }

    pub fn default_tol(&self) -> f64 {
        1e-8 * self.norm().max(1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FloatRank {
    pub rank: usize,
    pub ambiguous: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rank_and_product() {
        let a = ExactMatrix::from_ints(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(a.rank(), 1);
        let b = ExactMatrix::from_ints(&[vec![0, 1], vec![1, 0]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, ExactMatrix::from_ints(&[vec![2, 1], vec![4, 2]]).unwrap());
        assert_eq!(b.mul(&b).unwrap(), ExactMatrix::identity(b.field().clone(), 2));
        let k = a.kron(&b).unwrap();
        assert_eq!(k.dim(), 4);
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn float_rank() {
        let m = FloatMatrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
        .unwrap();
        let r = m.rank_with_tol(m.default_tol());
        assert_eq!(r, FloatRank { rank: 1, ambiguous: false });
        let mut near = m.clone();
        near.set(1, 1, Complex64::new(1.0 + 1e-9, 0.0));
        assert!(near.rank_with_tol(near.default_tol()).ambiguous);
        assert_eq!(FloatMatrix::identity(3).rank_with_tol(1e-8).rank, 3);
    }

    #[test]
    fn row_space_rref() {
        let f = Arc::new(CycField::rationals());
        let q = |v: i64| f.from_rational(Rational::from_integer(v.into()));
        let mut rs = RowSpace::new(f.clone(), 3);
        assert!(rs.insert(vec![q(0), q(2), q(4)]));
        assert!(rs.insert(vec![q(1), q(1), q(1)]));
        assert!(!rs.insert(vec![q(2), q(4), q(6)]));
        let piv: Vec<usize> = rs.pivots().map(|(p, _)| p).collect();
        assert_eq!(piv, vec![0, 1]);
        let (_, r0) = rs.pivots().next().unwrap();
        assert_eq!(r0, &[q(1), q(0), q(-1)]);
    }
}
