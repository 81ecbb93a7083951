//! Jordan spectra: a matrix up to similarity, stored as a multiset of
//! `(eigenvalue, block size)` pairs with big-integer multiplicities.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{GroupElement, SpectralMeasure, Torsion};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Default limit on the number of distinct `(eigenvalue, size)` pairs.
pub const DEFAULT_BLOCK_CAP: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Block {
    pub eigenvalue: GroupElement,
    pub size: u64,
}

impl Block {
    pub fn new(eigenvalue: GroupElement, size: u64) -> Self {
        Block { eigenvalue, size }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JordanSpectrum {
    free_rank: usize,
    blocks: BTreeMap<Block, BigUint>,
}

impl JordanSpectrum {
    pub fn new(
        free_rank: usize,
        blocks: impl IntoIterator<Item = (Block, BigUint)>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Block, BigUint> = BTreeMap::new();
        for (b, mult) in blocks {
            if b.eigenvalue.free_rank() != free_rank {
                return Err(Error::RankMismatch {
                    left: free_rank,
                    right: b.eigenvalue.free_rank(),
                });
            }
            if b.size == 0 {
                return Err(Error::InvalidSpectrum("block size must be positive".into()));
            }
            if mult.is_zero() {
                continue;
            }
            *merged.entry(b).or_insert_with(BigUint::zero) += mult;
        }
        if merged.is_empty() {
            return Err(Error::InvalidSpectrum("spectrum has dimension 0".into()));
        }
        Ok(JordanSpectrum {
            free_rank,
            blocks: merged,
        })
    }

    /// Convenience constructor from `(eigenvalue, size, multiplicity)` triples.
    pub fn from_blocks(
        free_rank: usize,
        blocks: impl IntoIterator<Item = (GroupElement, u64, u64)>,
    ) -> Result<Self> {
        Self::new(
            free_rank,
            blocks
                .into_iter()
                .map(|(e, s, m)| (Block::new(e, s), BigUint::from(m))),
        )
    }

    /// A single block `J(eigenvalue, size)`.
    pub fn jordan_block(eigenvalue: GroupElement, size: u64) -> Result<Self> {
        let s = eigenvalue.free_rank();
        Self::from_blocks(s, [(eigenvalue, size, 1)])
    }

    pub fn identity(free_rank: usize, dim: u64) -> Result<Self> {
        Self::from_blocks(free_rank, [(GroupElement::identity(free_rank), 1, dim)])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn blocks(&self) -> &BTreeMap<Block, BigUint> {
        &self.blocks
    }

    pub fn distinct_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn multiplicity(&self, eigenvalue: &GroupElement, size: u64) -> BigUint {
        self.blocks
            .get(&Block::new(eigenvalue.clone(), size))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn dimension(&self) -> BigUint {
        self.blocks.iter().map(|(b, m)| m * b.size).sum()
    }

    pub fn block_count(&self) -> BigUint {
        self.blocks.values().sum()
    }

    /// Multiplicity of each block size, summed over eigenvalues.
    pub fn size_marginal(&self) -> BTreeMap<u64, BigUint> {
        let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (b, m) in &self.blocks {
            *out.entry(b.size).or_insert_with(BigUint::zero) += m;
        }
        out
    }

    /// Blocks with the given eigenvalue as a size -> multiplicity map.
    pub fn blocks_at(&self, eigenvalue: &GroupElement) -> BTreeMap<u64, BigUint> {
        self.blocks
            .iter()
            .filter(|(b, _)| &b.eigenvalue == eigenvalue)
            .map(|(b, m)| (b.size, m.clone()))
            .collect()
    }

    pub fn eigenvalues(&self) -> Vec<GroupElement> {
        let mut v: Vec<GroupElement> = self.blocks.keys().map(|b| b.eigenvalue.clone()).collect();
        v.dedup();
        v
    }

    pub fn stats(&self) -> SpectrumStats {
        let dimension = self.dimension();
        let mut unipotent_dim = BigUint::zero();
        let mut unipotent_blocks = BigUint::zero();
        let mut blocks = BigUint::zero();
        let mut order_profile: BTreeMap<u64, BigUint> = BTreeMap::new();
        let mut infinite = BigUint::zero();
        for (b, m) in &self.blocks {
            let weighted = m * b.size;
            blocks += m;
            if b.eigenvalue.is_identity() {
                unipotent_dim += &weighted;
                unipotent_blocks += m;
            }
            match b.eigenvalue.order() {
                Some(o) => *order_profile.entry(o).or_insert_with(BigUint::zero) += weighted,
                None => infinite += weighted,
            }
        }
        let frac = |n: &BigUint| exact::uint_ratio(n, &dimension);
        let j1 = frac(&unipotent_blocks);
        SpectrumStats {
            m1: frac(&unipotent_dim),
            j: frac(&blocks),
            rho_id: Rational::one() - &j1,
            j1,
            order_profile,
            infinite_order: infinite,
            dimension,
        }
    }

    /// Kronecker product, block pair by block pair via the Clebsch-Gordan rule.
    pub fn tensor(&self, other: &JordanSpectrum) -> Result<JordanSpectrum> {
        self.tensor_capped(other, DEFAULT_BLOCK_CAP)
    }

    pub fn tensor_capped(&self, other: &JordanSpectrum, cap: usize) -> Result<JordanSpectrum> {
        if self.free_rank != other.free_rank {
            return Err(Error::RankMismatch {
                left: self.free_rank,
                right: other.free_rank,
            });
        }
        // J(a,s) (x) J(b,t) has blocks of sizes |s-t|+1, |s-t|+3, ..., s+t-1, one
        // each; record +c at the first size and -c two past the last, then take
        // running sums along each parity class.
        let mut diffs: HashMap<GroupElement, Vec<BigInt>> = HashMap::new();
        for (a, ma) in &self.blocks {
            for (b, mb) in &other.blocks {
                let ev = a.eigenvalue.checked_add(&b.eigenvalue)?;
                let c = BigInt::from(ma * mb);
                let lo = a.size.abs_diff(b.size) + 1;
                let hi = a.size + b.size - 1;
                let row = diffs.entry(ev).or_default();
                let need = (hi + 3) as usize;
                if row.len() < need {
                    row.resize(need, BigInt::zero());
                }
                row[lo as usize] += &c;
                row[(hi + 2) as usize] -= &c;
            }
        }
        let mut out: BTreeMap<Block, BigUint> = BTreeMap::new();
        for (ev, row) in diffs {
            for parity in 0..2 {
                let mut acc = BigInt::zero();
                let mut size = parity;
                while size < row.len() {
                    acc += &row[size];
                    if acc.is_positive() {
                        out.insert(
                            Block::new(ev.clone(), size as u64),
                            acc.to_biguint().expect("positive"),
                        );
                        if out.len() > cap {
                            return Err(Error::BlowupCap {
                                count: out.len(),
                                cap,
                            });
                        }
                    }
                    size += 2;
                }
            }
        }
        Ok(JordanSpectrum {
            free_rank: self.free_rank,
            blocks: out,
        })
    }

    /// `A_1 = A`, `A_m = A_{m-1} (x) A_{m-1}`.
    pub fn tensor_square_iterate(&self, m: u32) -> Result<JordanSpectrum> {
        self.tensor_square_iterate_capped(m, DEFAULT_BLOCK_CAP)
    }

    pub fn tensor_square_iterate_capped(&self, m: u32, cap: usize) -> Result<JordanSpectrum> {
        if m == 0 {
            return Err(Error::InvalidParameter("iterate index starts at 1".into()));
        }
        let mut a = self.clone();
        for _ in 1..m {
            a = a.tensor_capped(&a, cap)?;
        }
        Ok(a)
    }

    /// `A (+) B`.
    pub fn direct_sum(&self, other: &JordanSpectrum) -> Result<JordanSpectrum> {
        if self.free_rank != other.free_rank {
            return Err(Error::RankMismatch {
                left: self.free_rank,
                right: other.free_rank,
            });
        }
        let mut blocks = self.blocks.clone();
        for (b, m) in &other.blocks {
            *blocks.entry(b.clone()).or_insert_with(BigUint::zero) += m;
        }
        Ok(JordanSpectrum {
            free_rank: self.free_rank,
            blocks,
        })
    }

    /// `n` copies of `A` in direct sum.
    pub fn direct_sum_power(&self, n: u64) -> Result<JordanSpectrum> {
        if n == 0 {
            return Err(Error::InvalidParameter("number of summands must be positive".into()));
        }
        Ok(JordanSpectrum {
            free_rank: self.free_rank,
            blocks: self.blocks.iter().map(|(b, m)| (b.clone(), m * n)).collect(),
        })
    }

    /// `A (+) Id_m`.
    pub fn add_identity(&self, m: &BigUint) -> JordanSpectrum {
        let mut blocks = self.blocks.clone();
        if !m.is_zero() {
            *blocks
                .entry(Block::new(GroupElement::identity(self.free_rank), 1))
                .or_insert_with(BigUint::zero) += m;
        }
        JordanSpectrum {
            free_rank: self.free_rank,
            blocks,
        }
    }

    /// Jordan form of `A^k`. For an invertible block, `J(a, s)^k` is similar to `J(a^k, s)`.
    pub fn matrix_power(&self, k: u64) -> Result<JordanSpectrum> {
        if k == 0 {
            return Err(Error::InvalidParameter("matrix power exponent must be positive".into()));
        }
        let mut blocks: BTreeMap<Block, BigUint> = BTreeMap::new();
        for (b, m) in &self.blocks {
            let key = Block::new(b.eigenvalue.scale(k)?, b.size);
            *blocks.entry(key).or_insert_with(BigUint::zero) += m;
        }
        Ok(JordanSpectrum {
            free_rank: self.free_rank,
            blocks,
        })
    }

    /// `m_1(A^k)` for an arbitrarily large exponent, without forming the power.
    pub fn m1_of_power(&self, k: &BigUint) -> Rational {
        let mut fixed = BigUint::zero();
        for (b, m) in &self.blocks {
            let ev = &b.eigenvalue;
            if ev.free.iter().all(|&e| e == 0) && (k % ev.torsion.denom()).is_zero() {
                fixed += m * b.size;
            }
        }
        exact::uint_ratio(&fixed, &self.dimension())
    }

    /// Uniform measure on the eigenvalues counted with algebraic multiplicity.
    pub fn spectral_measure(&self) -> SpectralMeasure {
        let d = self.dimension();
        let mut atoms: BTreeMap<GroupElement, BigUint> = BTreeMap::new();
        for (b, m) in &self.blocks {
            *atoms.entry(b.eigenvalue.clone()).or_insert_with(BigUint::zero) += m * b.size;
        }
        SpectralMeasure::from_parts_unchecked(
            self.free_rank,
            atoms
                .into_iter()
                .map(|(e, w)| (e, exact::uint_ratio(&w, &d)))
                .collect(),
        )
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            free_rank: self.free_rank,
            blocks: self
                .blocks
                .iter()
                .map(|(b, m)| BlockJson {
                    torsion: exact::fmt_rational(&b.eigenvalue.torsion.to_rational()),
                    free: b.eigenvalue.free.clone(),
                    size: b.size,
                    mult: m.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &SpectrumJson) -> Result<Self> {
        let mut blocks = Vec::with_capacity(json.blocks.len());
        for b in &json.blocks {
            let torsion = Torsion::from_rational(&exact::parse_rational(&b.torsion)?)?;
            blocks.push((
                Block::new(GroupElement::new(torsion, b.free.clone()), b.size),
                exact::parse_biguint(&b.mult)?,
            ));
        }
        Self::new(json.free_rank, blocks)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

/// `{"free_rank": s, "blocks": [{"torsion": "p/q", "free": [..], "size": n, "mult": "..."}]}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpectrumJson {
    pub free_rank: usize,
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlockJson {
    pub torsion: String,
    pub free: Vec<i64>,
    pub size: u64,
    pub mult: String,
}

/// Normalized rank-fraction statistics of a spectrum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectrumStats {
    pub dimension: BigUint,
    /// Fraction of eigenvalues equal to 1.
    pub m1: Rational,
    /// Number of Jordan blocks over the dimension.
    pub j: Rational,
    /// Number of blocks with eigenvalue 1 over the dimension.
    pub j1: Rational,
    /// Normalized rank of `A - Id`.
    pub rho_id: Rational,
    order_profile: BTreeMap<u64, BigUint>,
    infinite_order: BigUint,
}

impl SpectrumStats {
    /// Fraction of eigenvalues (with algebraic multiplicity) of finite order at most `r`.
    pub fn m_le_r(&self, r: u64) -> Rational {
        let s: BigUint = self.order_profile.range(..=r).map(|(_, w)| w).sum();
        exact::uint_ratio(&s, &self.dimension)
    }

    /// `rho(A, Id) >= max(1 - m1, 1 - j)`.
    pub fn satisfies_basic_bound(&self) -> bool {
        let one = Rational::one();
        self.rho_id >= &one - &self.m1 && self.rho_id >= &one - &self.j
    }

    pub fn to_json(&self) -> StatsJson {
        StatsJson {
            dimension: self.dimension.to_string(),
            m1: exact::fmt_rational(&self.m1),
            j: exact::fmt_rational(&self.j),
            j1: exact::fmt_rational(&self.j1),
            rho_id: exact::fmt_rational(&self.rho_id),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StatsJson {
    pub dimension: String,
    pub m1: String,
    pub j: String,
    pub j1: String,
    pub rho_id: String,
}

/// Log2 of a big integer, for reporting sizes.
pub fn log2(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 52 {
        return n.to_f64().unwrap_or(0.0).log2();
    }
    let top = (n >> (bits - 52)).to_f64().unwrap_or(1.0);
    top.log2() + (bits - 52) as f64
}

pub fn pow_big(base: &BigUint, exp: u64) -> BigUint {
    let mut out = BigUint::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            out *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    out
}
