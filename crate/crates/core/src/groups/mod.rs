//! Finite groups: kernel dimensions from character tables, the exact LP for the
//! optimal separation constant over the complex numbers, and regular-representation
//! ranks in positive characteristic.

mod mult;
pub mod simplex;
mod table;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use mult::{MultTable, MultTableJson, MAX_ORDER};
pub use table::{
    alternating4, builtin, dihedral8, quaternion8, symmetric3, symmetric4, table_for_abelian, CharJson, Character,
    CharacterTable, ClassInfo, TableJson, ValueJson,
};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

const KERNEL_TOL: f64 = 1e-6;

/// `K[i][j] = dim ker(psi_j(g_i) - Id)` over nontrivial classes `i` and nontrivial irreducibles `j`
/// (both shifted down by one relative to the table).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KMatrix {
    pub rows: Vec<Vec<u64>>,
    pub dims: Vec<u64>,
}

pub fn kernel_dims(t: &CharacterTable) -> Result<KMatrix> {
    let c = t.class_count();
    let dims: Vec<u64> = t.chars()[1..].iter().map(|ch| ch.dim).collect();
    let mut rows = Vec::with_capacity(c.saturating_sub(1));
    for i in 1..c {
        let cl = &t.classes()[i];
        let mut row = Vec::with_capacity(c - 1);
        for j in 1..c {
            let k = match t.integral_values() {
                Some(vals) => {
                    let s: BigInt = cl.power_map.iter().map(|&p| &vals[j][p]).sum();
                    let (q, r) = s.div_rem(&BigInt::from(cl.order));
                    if !r.is_zero() || q.is_negative() {
                        return Err(Error::TableInconsistency(format!(
                            "kernel dimension for class {i}, character {j} is {s}/{}",
                            cl.order
                        )));
                    }
                    q.to_u64().unwrap_or(u64::MAX)
                }
                None => {
                    let s: Complex64 = cl.power_map.iter().map(|&p| t.chars()[j].values[p]).sum();
                    let v = s / cl.order as f64;
                    let r = v.re.round();
                    if (v - Complex64::new(r, 0.0)).norm() > KERNEL_TOL || r < 0.0 {
                        return Err(Error::TableInconsistency(format!(
                            "kernel dimension for class {i}, character {j} is {v}, not a nonnegative integer"
                        )));
                    }
                    r as u64
                }
            };
            if k > dims[j - 1] {
                return Err(Error::TableInconsistency(format!(
                    "kernel dimension {k} exceeds character degree {} (class {i}, character {j})",
                    dims[j - 1]
                )));
            }
            row.push(k);
        }
        rows.push(row);
    }
    Ok(KMatrix { rows, dims })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KappaResult {
    pub kappa: Rational,
    /// Table character index -> multiplicity; the trivial character never appears.
    pub witness: BTreeMap<usize, BigUint>,
    pub witness_dim: BigUint,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct KappaJson {
    pub kappa: String,
    pub witness: BTreeMap<usize, String>,
    pub witness_dim: String,
}

impl KappaResult {
    pub fn to_json(&self) -> KappaJson {
        KappaJson {
            kappa: exact::fmt_rational(&self.kappa),
            witness: self.witness.iter().map(|(k, v)| (*k, v.to_string())).collect(),
            witness_dim: self.witness_dim.to_string(),
        }
    }

    /// `min_i (1 - sum_j w_j K_ij / dim w)` recomputed from the witness.
    pub fn achieved(&self, k: &KMatrix) -> Rational {
        let dim = exact::from_uint(&self.witness_dim);
        k.rows
            .iter()
            .map(|row| {
                let fixed: BigUint = self
                    .witness
                    .iter()
                    .map(|(&j, w)| w * BigUint::from(row[j - 1]))
                    .sum();
                Rational::one() - exact::from_uint(&fixed) / &dim
            })
            .min()
            .unwrap_or_else(Rational::one)
    }
}

/// Maximizes `beta` over `x >= 0`, `sum x_j dim_j = 1`, `K x <= 1 - beta`.
pub fn kappa_complex(t: &CharacterTable) -> Result<KappaResult> {
    if t.order() == 1 {
        // minimum over an empty set of classes
        return Ok(KappaResult {
            kappa: Rational::one(),
            witness: BTreeMap::new(),
            witness_dim: BigUint::zero(),
        });
    }
    let k = kernel_dims(t)?;
    let nvar = k.dims.len();
    let q = |v: u64| Rational::from_integer(BigInt::from(v));
    // variables: x_1..x_nvar, beta
    let mut c = vec![Rational::zero(); nvar + 1];
    c[nvar] = Rational::one();
    let a_ub: Vec<Vec<Rational>> = k
        .rows
        .iter()
        .map(|row| {
            let mut r: Vec<Rational> = row.iter().map(|&v| q(v)).collect();
            r.push(Rational::one());
            r
        })
        .collect();
    let b_ub = vec![Rational::one(); a_ub.len()];
    let mut eq: Vec<Rational> = k.dims.iter().map(|&d| q(d)).collect();
    eq.push(Rational::zero());
    let sol = simplex::maximize(&c, &a_ub, &b_ub, &[eq], &[Rational::one()])?;

    let x = &sol.x[..nvar];
    let scale = exact::common_denominator(x);
    let mut witness = BTreeMap::new();
    for (j, v) in x.iter().enumerate() {
        if !v.is_zero() {
            let w = (v * Rational::from_integer(scale.clone())).to_integer();
            witness.insert(j + 1, w.to_biguint().expect("nonnegative vertex"));
        }
    }
    let witness_dim = witness.iter().map(|(&j, w)| w * BigUint::from(k.dims[j - 1])).sum();
    let result = KappaResult { kappa: sol.value, witness, witness_dim };
    if result.achieved(&k) != result.kappa {
        return Err(Error::NumericalInstability(format!(
            "witness achieves {} but LP optimum is {}",
            result.achieved(&k),
            result.kappa
        )));
    }
    Ok(result)
}

/// `2^(n-1) / (2^n - 1)`.
pub fn kappa_z2n_closed_form(n: u32) -> Result<Rational> {
    if n == 0 || n > 62 {
        return Err(Error::InvalidParameter(format!("n must lie in 1..=62, got {n}")));
    }
    Ok(exact::ratio(1i64 << (n - 1), (1i64 << n) - 1))
}

pub fn is_fixed_point_free(t: &CharacterTable) -> Result<bool> {
    Ok(kappa_complex(t)?.kappa.is_one())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModpResult {
    pub kappa: Rational,
    /// Nonidentity element attaining the minimum (smallest index).
    pub minimizer: usize,
    /// `rank(psi(g) - Id)` over the prime field for each element.
    pub ranks: Vec<u64>,
    pub warning: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ModpJson {
    pub kappa: String,
    pub minimizer: usize,
    pub ranks: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl ModpResult {
    pub fn to_json(&self) -> ModpJson {
        ModpJson {
            kappa: exact::fmt_rational(&self.kappa),
            minimizer: self.minimizer,
            ranks: self.ranks.clone(),
            warning: self.warning.clone(),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Rank over the field with `p` elements; entries are reduced in place.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let inv = |a: u64| -> u64 {
        // Fermat: a^(p-2)
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc as u128 * base as u128 % p as u128) as u64;
            }
            base = (base as u128 * base as u128 % p as u128) as u64;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let f = inv(m[rank][col]);
        for v in m[rank].iter_mut() {
            *v = (*v as u128 * f as u128 % p as u128) as u64;
        }
        let prow = m[rank].clone();
        for r in 0..rows {
            if r == rank || m[r][col].is_multiple_of(p) {
                continue;
            }
            let g = m[r][col] % p;
            for (v, &pv) in m[r].iter_mut().zip(&prow) {
                let sub = (g as u128 * pv as u128 % p as u128) as u64;
                *v = (*v % p + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank as u64
}

/// `min_{g != e} rank(psi(g) - Id) / |G|` for the left regular representation over `F_p`.
pub fn kappa_modp_regular(g: &MultTable, p: u64) -> Result<ModpResult> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    let n = g.order();
    if !(n as u64).is_multiple_of(p) {
        return Err(Error::InvalidParameter(format!("{p} does not divide |G| = {n}")));
    }
    let smallest = (2..=n as u64).find(|&d| (n as u64).is_multiple_of(d)).unwrap_or(p);
    let warning = (smallest != p).then(|| {
        format!("{p} is not the smallest prime divisor of |G| = {n} (that is {smallest}); value is still computed")
    });
    let mut ranks = vec![0u64; n];
    for x in 1..n {
        // (psi(x) f)(h) = f(xh): row h has a 1 in column xh
        let mut m = vec![vec![0u64; n]; n];
        for h in 0..n {
            m[h][g.mul(x, h)] += 1;
            m[h][h] += p - 1;
        }
        let r = rank_mod_p(m, p);
        let cycles = (n / g.element_order(x)) as u64;
        if r != n as u64 - cycles {
            return Err(Error::NumericalInstability(format!(
                "rank {r} of psi({x}) - Id disagrees with cycle count {cycles}"
            )));
        }
        ranks[x] = r;
    }
    if n == 1 {
        return Ok(ModpResult { kappa: Rational::one(), minimizer: 0, ranks, warning });
    }
    let (minimizer, &best) = ranks
        .iter()
        .enumerate()
        .skip(1)
        .min_by_key(|&(i, r)| (*r, i))
        .expect("nontrivial group");
    Ok(ModpResult {
        kappa: exact::ratio(best as i64, n as i64),
        minimizer,
        ranks,
        warning,
    })
}
