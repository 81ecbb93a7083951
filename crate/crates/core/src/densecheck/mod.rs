//! Explicit-matrix oracle: realize spectra as literal Jordan forms, take Kronecker
//! products, read Jordan structure back off rank sequences, and stabilize
//! almost-representations of finite groups.
//!
//! The exact backend works over a cyclotomic field; free generators are realized
//! as distinct primes, which keeps every eigenvalue exact and multiplicatively
//! independent.

mod field;
mod matrix;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use field::{Cyc, CycField};
pub use matrix::{ExactMatrix, FloatMatrix, FloatRank, RowSpace};

use crate::abelian::GroupElement;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::groups::MultTable;
use crate::jordan::JordanSpectrum;

pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Float,
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DenseMatrix {
    Float(FloatMatrix),
    Exact(ExactMatrix),
}

impl DenseMatrix {
    pub fn dim(&self) -> usize {
        match self {
            DenseMatrix::Float(m) => m.dim(),
            DenseMatrix::Exact(m) => m.dim(),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            DenseMatrix::Float(_) => Backend::Float,
            DenseMatrix::Exact(_) => Backend::Exact,
        }
    }

    pub fn to_float(&self) -> FloatMatrix {
        match self {
            DenseMatrix::Float(m) => m.clone(),
            DenseMatrix::Exact(m) => m.to_float(),
        }
    }
}

/// Values assigned to the free generators; defaults to the primes 2, 3, 5, ...
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment(pub Vec<Rational>);

impl Assignment {
    pub fn primes(count: usize) -> Self {
        let mut primes = Vec::with_capacity(count);
        let mut k = 2u64;
        while primes.len() < count {
            if primes.iter().all(|&p: &u64| !k.is_multiple_of(p)) {
                primes.push(k);
            }
            k += 1;
        }
        Assignment(primes.into_iter().map(|p| Rational::from_integer(p.into())).collect())
    }

    fn free_value(&self, free: &[i64]) -> Result<Rational> {
        if free.len() > self.0.len() {
            return Err(Error::InvalidParameter(format!(
                "assignment covers {} free generators, element has {}",
                self.0.len(),
                free.len()
            )));
        }
        let mut v = Rational::one();
        for (e, base) in free.iter().zip(&self.0) {
            if base.is_zero() {
                return Err(Error::InvalidParameter("free generators must map to nonzero values".into()));
            }
            let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
            v = if *e >= 0 { v * p } else { v / p };
        }
        Ok(v)
    }

    pub fn exact_value(&self, field: &CycField, g: &GroupElement) -> Result<Cyc> {
        let den = g.torsion.denom();
        if !field.order().is_multiple_of(den) {
            return Err(Error::UnsupportedDomain(format!(
                "root of unity of order {den} is not in the cyclotomic field of order {}",
                field.order()
            )));
        }
        let k = g.torsion.numer() * (field.order() / den);
        Ok(field.scale(&field.zeta_pow(k), &self.free_value(&g.free)?))
    }

    pub fn complex_value(&self, g: &GroupElement) -> Result<Complex64> {
        let r = exact::to_f64(&self.free_value(&g.free)?);
        let t = g.torsion.numer() as f64 / g.torsion.denom() as f64;
        Ok(Complex64::from_polar(r, std::f64::consts::TAU * t))
    }
}

fn field_for(a: &JordanSpectrum) -> CycField {
    let n = a
        .eigenvalues()
        .iter()
        .fold(1u64, |acc, g| acc.lcm(&g.torsion.denom()));
    CycField::new(n)
}

/// Block-diagonal matrix of literal Jordan blocks, blocks in canonical order.
pub fn realize(
    a: &JordanSpectrum,
    backend: Backend,
    assignment: Option<&Assignment>,
    cap: usize,
) -> Result<DenseMatrix> {
    let dim = a
        .dimension()
        .to_usize()
        .filter(|&d| d <= cap)
        .ok_or_else(|| Error::DenseCap {
            dim: a.dimension().to_usize().unwrap_or(usize::MAX),
            cap,
        })?;
    let default = Assignment::primes(a.free_rank());
    let asg = assignment.unwrap_or(&default);
    let eigen = a.eigenvalues();
    match backend {
        Backend::Exact => {
            let field = Arc::new(field_for(a));
            let values: Vec<Cyc> = eigen.iter().map(|g| asg.exact_value(&field, g)).collect::<Result<_>>()?;
            for i in 0..values.len() {
                for j in i + 1..values.len() {
                    if values[i] == values[j] {
                        return Err(Error::UnsupportedDomain(format!(
                            "assignment identifies eigenvalues {:?} and {:?}",
                            eigen[i], eigen[j]
                        )));
                    }
                }
            }
            let mut m = ExactMatrix::zeros(field.clone(), dim);
            let mut at = 0;
            for (block, mult) in a.blocks() {
                let idx = eigen.iter().position(|g| *g == block.eigenvalue).expect("eigenvalue listed");
                for _ in 0..mult.to_usize().expect("bounded by dimension") {
                    let s = block.size as usize;
                    for i in 0..s {
                        m.set(at + i, at + i, values[idx].clone());
                        if i + 1 < s {
                            m.set(at + i, at + i + 1, field.one());
                        }
                    }
                    at += s;
                }
            }
            Ok(DenseMatrix::Exact(m))
        }
        Backend::Float => {
            let values: Vec<Complex64> = eigen.iter().map(|g| asg.complex_value(g)).collect::<Result<_>>()?;
            for i in 0..values.len() {
                for j in i + 1..values.len() {
                    if (values[i] - values[j]).norm() < 1e-9 {
                        return Err(Error::UnsupportedDomain(format!(
                            "assignment nearly identifies eigenvalues {:?} and {:?}",
                            eigen[i], eigen[j]
                        )));
                    }
                }
            }
            let mut m = FloatMatrix::from_rows(vec![vec![Complex64::zero(); dim]; dim])?;
            let mut at = 0;
            for (block, mult) in a.blocks() {
                let idx = eigen.iter().position(|g| *g == block.eigenvalue).expect("eigenvalue listed");
                for _ in 0..mult.to_usize().expect("bounded by dimension") {
                    let s = block.size as usize;
                    for i in 0..s {
                        m.set(at + i, at + i, values[idx]);
                        if i + 1 < s {
                            m.set(at + i, at + i + 1, Complex64::new(1.0, 0.0));
                        }
                    }
                    at += s;
                }
            }
            Ok(DenseMatrix::Float(m))
        }
    }
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix, cap: usize) -> Result<DenseMatrix> {
    let dim = a.dim().saturating_mul(b.dim());
    if dim > cap {
        return Err(Error::DenseCap { dim, cap });
    }
    Ok(match (a, b) {
        (DenseMatrix::Exact(x), DenseMatrix::Exact(y)) => DenseMatrix::Exact(x.kron(y)?),
        _ => DenseMatrix::Float(a.to_float().kron(&b.to_float())),
    })
}

/// Rank; the exact backend ignores `tol`. The float default is `1e-8 * ||m||_F`.
pub fn numeric_rank(m: &DenseMatrix, tol: Option<f64>) -> usize {
    match m {
        DenseMatrix::Exact(x) => x.rank(),
        DenseMatrix::Float(x) => x.rank_with_tol(tol.unwrap_or_else(|| x.default_tol())).rank,
    }
}

/// Normalized rank distance `rank(a - b) / d`.
pub fn rho(a: &ExactMatrix, b: &ExactMatrix) -> Result<Rational> {
    Ok(exact::ratio(a.sub(b)?.rank() as i64, a.dim() as i64))
}

/// Jordan blocks at `lambda` (size -> count) from the sequence `rank((M - lambda)^j)`.
pub fn jordan_structure(
    m: &DenseMatrix,
    lambda: &GroupElement,
    assignment: Option<&Assignment>,
) -> Result<BTreeMap<u64, u64>> {
    let default = Assignment::primes(lambda.free_rank());
    let asg = assignment.unwrap_or(&default);
    let d = m.dim();
    let mut ranks = vec![d];
    match m {
        DenseMatrix::Exact(x) => {
            let n = x.sub_scalar(&asg.exact_value(x.field(), lambda)?);
            let mut p = n.clone();
            loop {
                let r = p.rank();
                let prev = *ranks.last().unwrap();
                ranks.push(r);
                if r == prev || r == 0 {
                    break;
                }
                p = p.mul(&n)?;
            }
        }
        DenseMatrix::Float(x) => {
            let n = x.sub_scalar(asg.complex_value(lambda)?);
            let tol = x.default_tol();
            let mut p = n.clone();
            loop {
                let fr = p.rank_with_tol(tol);
                if fr.ambiguous {
                    return Err(Error::IllConditioned(format!(
                        "rank of power {} of M - lambda is near the threshold",
                        ranks.len()
                    )));
                }
                let prev = *ranks.last().unwrap();
                if fr.rank > prev {
                    return Err(Error::IllConditioned("rank sequence increased".into()));
                }
                ranks.push(fr.rank);
                if fr.rank == prev || fr.rank == 0 {
                    break;
                }
                p = p.mul(&n)?;
            }
        }
    }
    // at_least[j] = r_{j-1} - r_j counts blocks of size >= j
    let last = *ranks.last().unwrap();
    ranks.push(last);
    let mut out = BTreeMap::new();
    for j in 1..ranks.len() - 1 {
        let ge_j = ranks[j - 1] - ranks[j];
        let ge_next = ranks[j] - ranks[j + 1];
        if ge_j > ge_next {
            out.insert(j as u64, (ge_j - ge_next) as u64);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizeReport {
    pub psi: Vec<ExactMatrix>,
    /// `max_{g,h} rho(phi(g) phi(h), phi(gh))`.
    pub epsilon: Rational,
    pub invariant_dim: usize,
    pub distances: Vec<Rational>,
    /// `|G|^2 epsilon`.
    pub bound: Rational,
}

/// Replaces an almost-representation by an exact one that agrees with it on
/// `W = {v : phi(g) phi(h) v = phi(gh) v for all g, h}` and is the identity on a complement.
pub fn stabilize(phi: &[ExactMatrix], table: &MultTable) -> Result<StabilizeReport> {
    let n = table.order();
    if phi.len() != n {
        return Err(Error::InvalidParameter(format!("{} matrices for a group of order {n}", phi.len())));
    }
    let d = phi[0].dim();
    let field = phi[0].field().clone();
    for (g, m) in phi.iter().enumerate() {
        if m.dim() != d || m.field().order() != field.order() {
            return Err(Error::InvalidParameter(format!("matrix {g} has a different shape or field")));
        }
        if m.rank() != d {
            return Err(Error::NonInvertible(format!("phi({g}) is singular")));
        }
    }
    let mut worst = 0usize;
    let mut space = RowSpace::new(field.clone(), d);
    for g in 0..n {
        for h in 0..n {
            let defect = phi[g].mul(&phi[h])?.sub(&phi[table.mul(g, h)])?;
            if defect.is_zero() {
                continue;
            }
            let mut local = RowSpace::new(field.clone(), d);
            for row in defect.rows() {
                local.insert(row.clone());
                space.insert(row);
            }
            worst = worst.max(local.rank());
        }
    }
    let epsilon = exact::ratio(worst as i64, d as i64);

    // projection onto the pivot-coordinate complement along W
    let mut p_c = ExactMatrix::zeros(field.clone(), d);
    for (p, row) in space.pivots() {
        for (j, v) in row.iter().enumerate() {
            p_c.set(p, j, v.clone());
        }
    }
    let p_w = ExactMatrix::identity(field.clone(), d).sub(&p_c)?;
    let psi: Vec<ExactMatrix> = phi
        .iter()
        .map(|m| m.mul(&p_w).and_then(|x| x.add(&p_c)))
        .collect::<Result<_>>()?;

    for g in 0..n {
        for h in 0..n {
            if psi[g].mul(&psi[h])? != psi[table.mul(g, h)] {
                return Err(Error::BoundViolation(format!("psi({g}) psi({h}) != psi({g}{h})")));
            }
        }
    }
    let bound = &epsilon * Rational::from_integer(BigInt::from(n * n));
    let distances: Vec<Rational> = phi.iter().zip(&psi).map(|(a, b)| rho(a, b)).collect::<Result<_>>()?;
    if let Some((g, dist)) = distances.iter().enumerate().find(|(_, x)| **x > bound) {
        return Err(Error::BoundViolation(format!(
            "rho(phi({g}), psi({g})) = {} exceeds |G|^2 eps = {}",
            exact::fmt_rational(dist),
            exact::fmt_rational(&bound)
        )));
    }
    Ok(StabilizeReport {
        psi,
        epsilon,
        invariant_dim: d - space.rank(),
        distances,
        bound,
    })
}

/// Input file for stabilization: rational matrices indexed like the multiplication table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizeInput {
    pub mult_table: crate::groups::MultTableJson,
    pub matrices: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StabilizeJson {
    pub epsilon: String,
    pub bound: String,
    pub invariant_dim: usize,
    pub distances: Vec<String>,
    pub psi: Vec<Vec<Vec<String>>>,
}

impl StabilizeReport {
    pub fn to_json(&self) -> StabilizeJson {
        StabilizeJson {
            epsilon: exact::fmt_rational(&self.epsilon),
            bound: exact::fmt_rational(&self.bound),
            invariant_dim: self.invariant_dim,
            distances: self.distances.iter().map(exact::fmt_rational).collect(),
            psi: self
                .psi
                .iter()
                .map(|m| {
                    m.to_rationals()
                        .expect("rational input gives rational output")
                        .iter()
                        .map(|r| r.iter().map(exact::fmt_rational).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

impl StabilizeInput {
    pub fn parse(&self) -> Result<(Vec<ExactMatrix>, MultTable)> {
        let table = MultTable::from_json(&self.mult_table)?;
        let mats = self
            .matrices
            .iter()
            .map(|m| {
                let rows: Vec<Vec<Rational>> = m
                    .iter()
                    .map(|r| r.iter().map(|s| exact::parse_rational(s)).collect::<Result<_>>())
                    .collect::<Result<_>>()?;
                ExactMatrix::from_rationals(&rows)
            })
            .collect::<Result<_>>()?;
        Ok((mats, table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Torsion;

    fn one() -> GroupElement {
        GroupElement::identity(0)
    }

    #[test]
    fn realize_examples() {
        let j = JordanSpectrum::jordan_block(one(), 2).unwrap();
        let DenseMatrix::Exact(m) = realize(&j, Backend::Exact, None, DEFAULT_DENSE_CAP).unwrap() else {
            panic!()
        };
        assert_eq!(m, ExactMatrix::from_ints(&[vec![1, 1], vec![0, 1]]).unwrap());
        let d = JordanSpectrum::from_blocks(0, [(one(), 1, 1), (GroupElement::root_of_unity(1, 2, 0).unwrap(), 1, 1)])
            .unwrap();
        let DenseMatrix::Exact(m) = realize(&d, Backend::Exact, None, DEFAULT_DENSE_CAP).unwrap() else {
            panic!()
        };
        assert_eq!(m.to_rationals().unwrap()[1][1], exact::ratio(-1, 1));
        let w = JordanSpectrum::jordan_block(GroupElement::root_of_unity(1, 3, 0).unwrap(), 1).unwrap();
        let f = realize(&w, Backend::Float, None, 16).unwrap().to_float();
        assert!((f.get(0, 0) - Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0)).norm() < 1e-12);
        let big = JordanSpectrum::identity(0, 5000).unwrap();
        assert!(matches!(realize(&big, Backend::Float, None, DEFAULT_DENSE_CAP), Err(Error::DenseCap { .. })));
    }

    #[test]
    fn rank_examples() {
        let j3 = realize(&JordanSpectrum::jordan_block(one(), 3).unwrap(), Backend::Exact, None, 64).unwrap();
        let DenseMatrix::Exact(m) = &j3 else { panic!() };
        let id = ExactMatrix::identity(m.field().clone(), 3);
        assert_eq!(m.sub(&id).unwrap().rank(), 2);
        let zero = DenseMatrix::Exact(ExactMatrix::zeros(m.field().clone(), 3));
        assert_eq!(numeric_rank(&zero, None), 0);
        let j2 = realize(&JordanSpectrum::jordan_block(one(), 2).unwrap(), Backend::Exact, None, 64).unwrap();
        let sq = kron(&j2, &j2, 64).unwrap();
        let DenseMatrix::Exact(s) = &sq else { panic!() };
        let diff = s.sub(&ExactMatrix::identity(s.field().clone(), 4)).unwrap();
        assert_eq!(diff.rank(), 2);
    }

    #[test]
    fn jordan_structure_examples() {
        let j2 = JordanSpectrum::jordan_block(one(), 2).unwrap();
        for backend in [Backend::Exact, Backend::Float] {
            let m = realize(&j2, backend, None, 64).unwrap();
            let sq = kron(&m, &m, 64).unwrap();
            assert_eq!(jordan_structure(&sq, &one(), None).unwrap(), BTreeMap::from([(3, 1), (1, 1)]));
        }
        let neg = JordanSpectrum::jordan_block(GroupElement::root_of_unity(1, 2, 0).unwrap(), 2).unwrap();
        let DenseMatrix::Exact(m) = realize(&neg, Backend::Exact, None, 64).unwrap() else { panic!() };
        let sq = DenseMatrix::Exact(m.mul(&m).unwrap());
        assert_eq!(jordan_structure(&sq, &one(), None).unwrap(), BTreeMap::from([(2, 1)]));
        let diag = JordanSpectrum::identity(0, 4).unwrap();
        let m = realize(&diag, Backend::Exact, None, 64).unwrap();
        assert_eq!(jordan_structure(&m, &one(), None).unwrap(), BTreeMap::from([(1, 4)]));
    }

    #[test]
    fn free_generators_realized_as_primes() {
        let x = GroupElement::generator(0, 1);
        let a = JordanSpectrum::from_blocks(1, [(x.clone(), 2, 1), (GroupElement::identity(1), 1, 1)]).unwrap();
        let m = realize(&a, Backend::Exact, None, 64).unwrap();
        let sq = kron(&m, &m, 64).unwrap();
        let expect = a.tensor(&a).unwrap();
        for ev in expect.eigenvalues() {
            let got = jordan_structure(&sq, &ev, None).unwrap();
            let want: BTreeMap<u64, u64> =
                expect.blocks_at(&ev).into_iter().map(|(s, c)| (s, c.to_u64().unwrap())).collect();
            assert_eq!(got, want, "eigenvalue {ev:?}");
        }
        let t = GroupElement { torsion: Torsion::new(1, 5).unwrap(), free: vec![0] };
        assert!(jordan_structure(&m, &t, None).is_err());
    }

    #[test]
    fn stabilize_exact_rep_is_fixed() {
        let z2 = MultTable::cyclic(2).unwrap();
        let phi = vec![
            ExactMatrix::from_ints(&[vec![1, 0], vec![0, 1]]).unwrap(),
            ExactMatrix::from_ints(&[vec![0, 1], vec![1, 0]]).unwrap(),
        ];
        let r = stabilize(&phi, &z2).unwrap();
        assert_eq!(r.psi, phi);
        assert!(r.epsilon.is_zero());
        assert_eq!(r.invariant_dim, 2);
    }

    #[test]
    fn stabilize_repairs_corruption() {
        let z2 = MultTable::cyclic(2).unwrap();
        let d = 8;
        let id = ExactMatrix::from_ints(&(0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect::<Vec<_>>())
            .unwrap();
        let mut rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| -((i == j) as i64)).collect()).collect();
        rows[0][0] = 2;
        rows[0][1] = 1;
        rows[1][0] = 1;
        rows[1][1] = 1;
        let phi = vec![id, ExactMatrix::from_ints(&rows).unwrap()];
        let r = stabilize(&phi, &z2).unwrap();
        assert!(r.epsilon > Rational::zero());
        assert!(r.distances.iter().all(|x| *x <= r.bound));
        assert!(r.invariant_dim < d);
        let s = stabilize(&[phi[0].clone(), ExactMatrix::from_ints(&vec![vec![0; d]; d]).unwrap()], &z2);
        assert!(matches!(s, Err(Error::NonInvertible(_))));
    }
}
