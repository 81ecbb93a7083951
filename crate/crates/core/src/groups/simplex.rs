//! Dense two-phase simplex over exact rationals, Bland's pivoting rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

/// `maximize c.x` subject to `a_ub x <= b_ub`, `a_eq x = b_eq`, `x >= 0`.
pub fn maximize(
    c: &[Rational],
    a_ub: &[Vec<Rational>],
    b_ub: &[Rational],
    a_eq: &[Vec<Rational>],
    b_eq: &[Rational],
) -> Result<LpSolution> {
    let n = c.len();
    if a_ub.len() != b_ub.len() || a_eq.len() != b_eq.len() {
        return Err(Error::InvalidParameter("constraint/rhs length mismatch".into()));
    }
    if a_ub.iter().chain(a_eq).any(|row| row.len() != n) {
        return Err(Error::InvalidParameter("constraint width differs from objective".into()));
    }

    // Column layout: originals | slack/surplus (one per ub row) | artificials.
    let m = a_ub.len() + a_eq.len();
    let n_slack = a_ub.len();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut needs_artificial = Vec::with_capacity(m);
    for (i, (row, b)) in a_ub.iter().zip(b_ub).enumerate() {
        let flip = b.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.resize(n + n_slack, Rational::zero());
        r[n + i] = if flip { -Rational::one() } else { Rational::one() };
        rows.push(r);
        rhs.push(b.abs());
        needs_artificial.push(flip);
    }
    for (row, b) in a_eq.iter().zip(b_eq) {
        let flip = b.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.resize(n + n_slack, Rational::zero());
        rows.push(r);
        rhs.push(b.abs());
        needs_artificial.push(true);
    }
    let n_art = needs_artificial.iter().filter(|&&a| a).count();
    let width = n + n_slack + n_art;
    let mut basis = Vec::with_capacity(m);
    let mut next_art = n + n_slack;
    for (i, r) in rows.iter_mut().enumerate() {
        r.resize(width, Rational::zero());
        if needs_artificial[i] {
            r[next_art] = Rational::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(n + i);
        }
    }
    let mut t = Tableau { rows, rhs, basis, width, allowed: vec![true; width] };

    if n_art > 0 {
        let phase1: Vec<Rational> = (0..width)
            .map(|j| if j >= n + n_slack { -Rational::one() } else { Rational::zero() })
            .collect();
        let v = t.optimize(&phase1)?;
        if !v.is_zero() {
            return Err(Error::InvalidParameter("linear program is infeasible".into()));
        }
        t.evict_artificials(n + n_slack);
        for j in n + n_slack..width {
            t.allowed[j] = false;
        }
    }
    let mut full = c.to_vec();
    full.resize(width, Rational::zero());
    let value = t.optimize(&full)?;
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs[i].clone();
        }
    }
    Ok(LpSolution { value, x })
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
    allowed: Vec<bool>,
}

impl Tableau {
    fn reduced_costs(&self, c: &[Rational]) -> Vec<Rational> {
        let mut red = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    red[j] -= &c[b] * v;
                }
            }
        }
        red
    }

    fn optimize(&mut self, c: &[Rational]) -> Result<Rational> {
        let mut red = self.reduced_costs(c);
        loop {
            let entering = (0..self.width).find(|&j| self.allowed[j] && red[j].is_positive());
            let Some(e) = entering else { break };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (l, _) = leave.ok_or_else(|| Error::InvalidParameter("linear program is unbounded".into()))?;
            self.pivot(l, e);
            let f = red[e].clone();
            for (j, v) in self.rows[l].iter().enumerate() {
                if !v.is_zero() {
                    red[j] -= &f * v;
                }
            }
        }
        Ok(self
            .basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &c[b] * v)
            .fold(Rational::zero(), |a, b| a + b))
    }

    fn pivot(&mut self, l: usize, e: usize) {
        let p = self.rows[l][e].clone();
        for v in self.rows[l].iter_mut() {
            *v /= &p;
        }
        self.rhs[l] /= &p;
        let prow = self.rows[l].clone();
        let prhs = self.rhs[l].clone();
        for i in 0..self.rows.len() {
            if i == l || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[l] = e;
    }

    /// After a zero-cost phase one, pivots remaining artificial basics out or drops their rows.
    fn evict_artificials(&mut self, first_art: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < first_art {
                i += 1;
                continue;
            }
            match (0..first_art).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
