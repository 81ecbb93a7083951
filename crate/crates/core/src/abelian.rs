//! Exact arithmetic on the group `(Q/Z) x Z^s` and on finitely supported
//! probability measures over it.
//!
//! Eigenvalues are never handled as complex numbers here. An element stores
//! the angle of its root-of-unity part as a reduced fraction and the exponents
//! of its free part over `s` abstract, multiplicatively independent
//! generators, so every identity between eigenvalues is decided exactly.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Element of `Q/Z`, kept as `num/den` with `0 <= num < den` and `gcd(num, den) = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Torsion {
    den: u64,
    num: u64,
}

impl Torsion {
    pub const ZERO: Torsion = Torsion { den: 1, num: 0 };

    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("torsion denominator is zero".into()));
        }
        let num = (num as i128).rem_euclid(den as i128) as u64;
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: u64, den: u64) -> Self {
        let g = num.gcd(&den);
        Torsion {
            num: num / g,
            den: den / g,
        }
    }

    pub fn from_rational(r: &Rational) -> Result<Self> {
        let den = r
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("torsion denominator of {r} exceeds 64 bits")))?;
        let num = r.numer().mod_floor(r.denom());
        let num = num.to_u64().expect("residue is below the denominator");
        Ok(Self::reduced(num, den))
    }

    pub fn to_rational(self) -> Rational {
        exact::ratio(self.num as i64, self.den as i64)
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Order in `Q/Z`.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn checked_add(self, other: Torsion) -> Option<Torsion> {
        let den = exact::lcm_u64(self.den, other.den)?;
        let a = self.num as u128 * (den / self.den) as u128;
        let b = other.num as u128 * (den / other.den) as u128;
        Some(Self::reduced(((a + b) % den as u128) as u64, den))
    }

    pub fn neg(self) -> Torsion {
        if self.num == 0 {
            self
        } else {
            Torsion {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    pub fn scale(self, k: u64) -> Torsion {
        let num = (self.num as u128 * (k % self.den) as u128 % self.den as u128) as u64;
        Self::reduced(num, self.den)
    }

    /// Residue class in `Z_n`; requires `den | n`.
    pub fn residue(self, n: u64) -> u64 {
        debug_assert_eq!(n % self.den, 0);
        self.num * (n / self.den)
    }
}

impl fmt::Display for Torsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Element `(torsion, free)` of `(Q/Z) x Z^s`, written additively.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement {
    pub torsion: Torsion,
    pub free: Vec<i64>,
}

impl GroupElement {
    pub fn new(torsion: Torsion, free: Vec<i64>) -> Self {
        GroupElement { torsion, free }
    }

    pub fn identity(free_rank: usize) -> Self {
        GroupElement {
            torsion: Torsion::ZERO,
            free: vec![0; free_rank],
        }
    }

    pub fn root_of_unity(num: i64, den: u64, free_rank: usize) -> Result<Self> {
        Ok(GroupElement {
            torsion: Torsion::new(num, den)?,
            free: vec![0; free_rank],
        })
    }

    /// The `index`-th free generator.
    pub fn generator(index: usize, free_rank: usize) -> Self {
        let mut free = vec![0; free_rank];
        free[index] = 1;
        GroupElement {
            torsion: Torsion::ZERO,
            free,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn is_identity(&self) -> bool {
        self.torsion.is_zero() && self.free.iter().all(|&e| e == 0)
    }

    pub fn checked_add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.free.len() != other.free.len() {
            return Err(Error::RankMismatch {
                left: self.free.len(),
                right: other.free.len(),
            });
        }
        let torsion = self
            .torsion
            .checked_add(other.torsion)
            .ok_or_else(|| Error::Overflow("torsion denominator exceeds 64 bits".into()))?;
        let free = self
            .free
            .iter()
            .zip(&other.free)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Overflow("free exponent exceeds 64 bits".into()))?;
        Ok(GroupElement { torsion, free })
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement {
            torsion: self.torsion.neg(),
            free: self.free.iter().map(|e| -e).collect(),
        }
    }

    /// `k`-fold sum, i.e. the `k`-th power of the eigenvalue.
    pub fn scale(&self, k: u64) -> Result<GroupElement> {
        let kk = i64::try_from(k).ok();
        let free = self
            .free
            .iter()
            .map(|&e| if e == 0 { Some(0) } else { kk.and_then(|k| e.checked_mul(k)) })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Overflow(format!("free exponent times {k} exceeds 64 bits")))?;
        Ok(GroupElement {
            torsion: self.torsion.scale(k),
            free,
        })
    }

    /// Group order, `None` for elements of infinite order.
    pub fn order(&self) -> Option<u64> {
        if self.free.iter().any(|&e| e != 0) {
            None
        } else {
            Some(self.torsion.order())
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {:?})", self.torsion, self.free)
    }
}

fn check_rank(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::RankMismatch { left, right })
    } else {
        Ok(())
    }
}

/// Finitely supported probability measure with exact rational weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralMeasure {
    free_rank: usize,
    atoms: BTreeMap<GroupElement, Rational>,
}

impl SpectralMeasure {
    /// Builds a measure, merging repeated atoms. Weights must be positive and sum to one.
    pub fn new(
        free_rank: usize,
        atoms: impl IntoIterator<Item = (GroupElement, Rational)>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<GroupElement, Rational> = BTreeMap::new();
        for (el, w) in atoms {
            check_rank(free_rank, el.free_rank())?;
            if !w.is_positive() {
                return Err(Error::InvalidMeasure(format!("weight {w} at {el} is not positive")));
            }
            *merged.entry(el).or_insert_with(Rational::zero) += w;
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(SpectralMeasure {
            free_rank,
            atoms: merged,
        })
    }

    pub(crate) fn from_parts_unchecked(
        free_rank: usize,
        atoms: BTreeMap<GroupElement, Rational>,
    ) -> Self {
        SpectralMeasure { free_rank, atoms }
    }

    pub fn dirac(el: GroupElement) -> Self {
        let free_rank = el.free_rank();
        SpectralMeasure {
            free_rank,
            atoms: BTreeMap::from([(el, Rational::one())]),
        }
    }

    pub fn identity(free_rank: usize) -> Self {
        Self::dirac(GroupElement::identity(free_rank))
    }

    /// Uniform measure on the given (distinct or not) elements, counted with repetition.
    pub fn uniform(free_rank: usize, elements: &[GroupElement]) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        let w = exact::ratio(1, elements.len() as i64);
        Self::new(free_rank, elements.iter().map(|e| (e.clone(), w.clone())))
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn atoms(&self) -> &BTreeMap<GroupElement, Rational> {
        &self.atoms
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn weight(&self, el: &GroupElement) -> Rational {
        self.atoms.get(el).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn convolve(&self, other: &SpectralMeasure) -> Result<SpectralMeasure> {
        check_rank(self.free_rank, other.free_rank)?;
        let mut out: BTreeMap<GroupElement, Rational> = BTreeMap::new();
        for (x, wx) in &self.atoms {
            for (y, wy) in &other.atoms {
                let z = x.checked_add(y)?;
                let w = wx * wy;
                match out.get_mut(&z) {
                    Some(acc) => *acc += w,
                    None => {
                        out.insert(z, w);
                    }
                }
            }
        }
        Ok(SpectralMeasure {
            free_rank: self.free_rank,
            atoms: out,
        })
    }

    /// `k`-fold convolution by binary exponentiation; `k = 0` gives the point mass at the identity.
    pub fn convolution_power(&self, k: u64) -> Result<SpectralMeasure> {
        let mut result = SpectralMeasure::identity(self.free_rank);
        if k == 0 {
            return Ok(result);
        }
        let mut base = self.clone();
        let mut k = k;
        let mut first = true;
        loop {
            if k & 1 == 1 {
                result = if first {
                    base.clone()
                } else {
                    result.convolve(&base)?
                };
                first = false;
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.convolve(&base)?;
        }
        Ok(result)
    }

    pub fn mass_at_identity(&self) -> Rational {
        self.weight(&GroupElement::identity(self.free_rank))
    }

    /// Mass of the elements of finite order at most `r`.
    pub fn mass_order_at_most(&self, r: u64) -> Rational {
        self.atoms
            .iter()
            .filter(|(el, _)| matches!(el.order(), Some(o) if o <= r))
            .map(|(_, w)| w)
            .sum()
    }

    /// Image under `x -> -x`.
    pub fn reflect(&self) -> SpectralMeasure {
        SpectralMeasure {
            free_rank: self.free_rank,
            atoms: self.atoms.iter().map(|(x, w)| (x.neg(), w.clone())).collect(),
        }
    }

    /// Push-forward onto the torsion factor, realized as `Z_N` with `N` the lcm of
    /// the torsion orders in the support.
    pub fn torsion_pushforward(&self) -> Result<CyclicMeasure> {
        let mut n = 1u64;
        for el in self.atoms.keys() {
            n = exact::lcm_u64(n, el.torsion.denom())
                .ok_or_else(|| Error::Overflow("torsion modulus exceeds 64 bits".into()))?;
        }
        let mut weights: BTreeMap<u64, Rational> = BTreeMap::new();
        for (el, w) in &self.atoms {
            *weights.entry(el.torsion.residue(n)).or_insert_with(Rational::zero) += w;
        }
        Ok(CyclicMeasure { modulus: n, weights })
    }

    /// Push-forward onto the free factor `Z^s`.
    pub fn free_pushforward(&self) -> SpectralMeasure {
        let mut atoms: BTreeMap<GroupElement, Rational> = BTreeMap::new();
        for (el, w) in &self.atoms {
            let key = GroupElement::new(Torsion::ZERO, el.free.clone());
            *atoms.entry(key).or_insert_with(Rational::zero) += w;
        }
        SpectralMeasure {
            free_rank: self.free_rank,
            atoms,
        }
    }

    /// Whether the torsion parts of the support generate the whole torsion factor.
    pub fn is_torsion_generating(&self) -> Result<bool> {
        Ok(self.torsion_pushforward()?.generates())
    }

    /// `Q(X, lambda)`: largest mass in a closed window of width `lambda`.
    /// Defined only for measures living on `Z` (rank one, or rank zero) with trivial torsion.
    pub fn concentration_function(&self, lambda: &Rational) -> Result<Rational> {
        if self.free_rank > 1 {
            return Err(Error::UnsupportedDomain(format!(
                "concentration function needs free rank <= 1, got {}",
                self.free_rank
            )));
        }
        if lambda.is_negative() {
            return Err(Error::InvalidParameter("window width must be nonnegative".into()));
        }
        let mut points: Vec<(i64, &Rational)> = Vec::with_capacity(self.atoms.len());
        for (el, w) in &self.atoms {
            if !el.torsion.is_zero() {
                return Err(Error::UnsupportedDomain(format!(
                    "atom {el} has nonzero torsion and does not embed in R"
                )));
            }
            points.push((el.free.first().copied().unwrap_or(0), w));
        }
        points.sort_by_key(|p| p.0);
        let mut best = Rational::zero();
        let mut window = Rational::zero();
        let mut hi = 0;
        for lo in 0..points.len() {
            if hi < lo {
                hi = lo;
                window = Rational::zero();
            }
            let right = Rational::from_integer(points[lo].0.into()) + lambda;
            while hi < points.len() && Rational::from_integer(points[hi].0.into()) <= right {
                window += points[hi].1;
                hi += 1;
            }
            if window > best {
                best = window.clone();
            }
            window -= points[lo].1;
        }
        Ok(best)
    }

    pub fn to_json(&self) -> MeasureJson {
        MeasureJson {
            free_rank: self.free_rank,
            atoms: self
                .atoms
                .iter()
                .map(|(el, w)| AtomJson {
                    torsion: exact::fmt_rational(&el.torsion.to_rational()),
                    free: el.free.clone(),
                    weight: exact::fmt_rational(w),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        let mut atoms = Vec::with_capacity(json.atoms.len());
        for a in &json.atoms {
            let torsion = Torsion::from_rational(&exact::parse_rational(&a.torsion)?)?;
            atoms.push((GroupElement::new(torsion, a.free.clone()), exact::parse_rational(&a.weight)?));
        }
        Self::new(json.free_rank, atoms)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

/// `{"free_rank": s, "atoms": [{"torsion": "p/q", "free": [..], "weight": "a/b"}]}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MeasureJson {
    pub free_rank: usize,
    pub atoms: Vec<AtomJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AtomJson {
    pub torsion: String,
    pub free: Vec<i64>,
    pub weight: String,
}

/// Probability measure on `Z_N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicMeasure {
    modulus: u64,
    weights: BTreeMap<u64, Rational>,
}

impl CyclicMeasure {
    pub fn new(modulus: u64, weights: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        let mut merged: BTreeMap<u64, Rational> = BTreeMap::new();
        for (a, w) in weights {
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!("negative weight {w}")));
            }
            if w.is_zero() {
                continue;
            }
            *merged.entry(a % modulus).or_insert_with(Rational::zero) += w;
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(CyclicMeasure {
            modulus,
            weights: merged,
        })
    }

    pub fn uniform(modulus: u64) -> Result<Self> {
        let w = exact::ratio(1, modulus as i64);
        Self::new(modulus, (0..modulus).map(|a| (a, w.clone())))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn weights(&self) -> &BTreeMap<u64, Rational> {
        &self.weights
    }

    pub fn weight(&self, a: u64) -> Rational {
        self.weights
            .get(&(a % self.modulus))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// True when the support generates `Z_N`.
    pub fn generates(&self) -> bool {
        self.weights
            .keys()
            .fold(self.modulus, |g, &a| g.gcd(&a))
            == 1
    }

    /// `sum_a c(a) e^{2 pi i a t / N}`; `t` is taken mod `N`.
    pub fn fourier(&self, t: u64) -> Complex64 {
        let n = self.modulus;
        let t = t % n;
        if t == 0 {
            return Complex64::new(1.0, 0.0);
        }
        self.weights
            .iter()
            .map(|(&a, w)| {
                let phase = ((a as u128 * t as u128) % n as u128) as f64 / n as f64;
                Complex64::from_polar(exact::to_f64(w), 2.0 * PI * phase)
            })
            .sum()
    }

    /// `(1/N) sum_t fourier(t)^n`, the probability that the `n`-step walk sits at 0.
    pub fn return_probability_fourier(&self, n: u64) -> Result<f64> {
        let modulus = self.modulus;
        let steps = i32::try_from(n)
            .map_err(|_| Error::InvalidParameter(format!("step count {n} too large")))?;
        let sum: Complex64 = (0..modulus).map(|t| self.fourier(t).powi(steps)).sum();
        let value = sum / modulus as f64;
        if value.im.abs() > 1e-9 {
            return Err(Error::NumericalInstability(format!(
                "imaginary residue {} in Fourier return probability",
                value.im
            )));
        }
        Ok(value.re)
    }

    pub fn convolve(&self, other: &CyclicMeasure) -> Result<CyclicMeasure> {
        if self.modulus != other.modulus {
            return Err(Error::InvalidParameter(format!(
                "moduli differ: {} vs {}",
                self.modulus, other.modulus
            )));
        }
        let n = self.modulus;
        let mut out: BTreeMap<u64, Rational> = BTreeMap::new();
        for (a, wa) in &self.weights {
            for (b, wb) in &other.weights {
                let c = ((*a as u128 + *b as u128) % n as u128) as u64;
                *out.entry(c).or_insert_with(Rational::zero) += wa * wb;
            }
        }
        Ok(CyclicMeasure {
            modulus: n,
            weights: out,
        })
    }

    pub fn convolution_power(&self, k: u64) -> Result<CyclicMeasure> {
        let mut result = CyclicMeasure::new(self.modulus, [(0, Rational::one())])?;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.convolve(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.convolve(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact return probability via convolution.
    pub fn return_probability_exact(&self, n: u64) -> Result<Rational> {
        Ok(self.convolution_power(n)?.weight(0))
    }
}

/// Which form of the random-walk return bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundVariant {
    /// All three hypotheses hold; the leading term is `1/r`.
    OrderBounded,
    /// Only the mass and torsion-generation hypotheses; `r` is replaced by 2.
    Unconditional,
}

/// `(1 + e^{-n beta / 4}) / r + 2 c2 / sqrt(n beta)`.
pub fn nonconcentration_bound(
    beta: f64,
    r: u64,
    n: u64,
    c2: f64,
    variant: BoundVariant,
) -> Result<f64> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1/2), got {beta}")));
    }
    if r == 0 || n == 0 {
        return Err(Error::InvalidParameter("r and n must be positive".into()));
    }
    if !(c2 > 0.0 && c2.is_finite()) {
        return Err(Error::InvalidParameter(format!("constant must be positive, got {c2}")));
    }
    let lead = match variant {
        BoundVariant::OrderBounded => r as f64,
        BoundVariant::Unconditional => 2.0,
    };
    let nb = n as f64 * beta;
    Ok((1.0 + (-nb / 4.0).exp()) / lead + 2.0 * c2 / nb.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn x(k: i64) -> GroupElement {
        GroupElement::new(Torsion::ZERO, vec![k])
    }

    fn tor(n: i64, d: u64) -> GroupElement {
        GroupElement::root_of_unity(n, d, 0).unwrap()
    }

    fn half_half_z() -> SpectralMeasure {
        SpectralMeasure::new(1, [(x(0), ratio(1, 2)), (x(1), ratio(1, 2))]).unwrap()
    }

    #[test]
    fn torsion_is_reduced() {
        let t = Torsion::new(-3, 6).unwrap();
        assert_eq!((t.numer(), t.denom()), (1, 2));
        assert_eq!(Torsion::new(4, 4).unwrap(), Torsion::ZERO);
        assert!(Torsion::new(1, 0).is_err());
        let s = Torsion::new(1, 3).unwrap().checked_add(Torsion::new(1, 6).unwrap()).unwrap();
        assert_eq!((s.numer(), s.denom()), (1, 2));
        assert_eq!(Torsion::new(1, 3).unwrap().scale(3), Torsion::ZERO);
    }

    #[test]
    fn convolve_with_identity() {
        let mu = half_half_z();
        assert_eq!(SpectralMeasure::identity(1).convolve(&mu).unwrap(), mu);
    }

    #[test]
    fn uniform_z2_is_idempotent() {
        let u = SpectralMeasure::uniform(0, &[tor(0, 1), tor(1, 2)]).unwrap();
        assert_eq!(u.convolve(&u).unwrap(), u);
        for k in 1..6 {
            assert_eq!(u.convolution_power(k).unwrap(), u);
        }
    }

    #[test]
    fn binomial_square_and_fourth_power() {
        let mu = half_half_z();
        let sq = mu.convolve(&mu).unwrap();
        assert_eq!(sq.weight(&x(0)), ratio(1, 4));
        assert_eq!(sq.weight(&x(1)), ratio(1, 2));
        assert_eq!(sq.weight(&x(2)), ratio(1, 4));
        let p4 = mu.convolution_power(4).unwrap();
        assert_eq!(p4.mass_at_identity(), ratio(1, 16));
        assert_eq!(mu.convolution_power(1).unwrap(), mu);
        assert_eq!(mu.convolution_power(0).unwrap(), SpectralMeasure::identity(1));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = SpectralMeasure::identity(1);
        let b = SpectralMeasure::identity(2);
        assert!(matches!(a.convolve(&b), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn invalid_weights_rejected() {
        assert!(SpectralMeasure::new(0, [(tor(0, 1), ratio(1, 2))]).is_err());
        assert!(SpectralMeasure::new(0, [(tor(0, 1), ratio(3, 2)), (tor(1, 2), ratio(-1, 2))]).is_err());
    }

    #[test]
    fn identity_mass() {
        assert_eq!(SpectralMeasure::identity(0).mass_at_identity(), ratio(1, 1));
        let m = SpectralMeasure::new(0, [(tor(0, 1), ratio(1, 2)), (tor(1, 2), ratio(1, 2))]).unwrap();
        assert_eq!(m.mass_at_identity(), ratio(1, 2));
        assert_eq!(m.convolution_power(2).unwrap().mass_at_identity(), ratio(1, 2));
    }

    #[test]
    fn order_bounded_mass() {
        assert_eq!(SpectralMeasure::identity(0).mass_order_at_most(1), ratio(1, 1));
        assert_eq!(half_half_z().mass_order_at_most(10), ratio(1, 2));
        let m = SpectralMeasure::uniform(0, &[tor(0, 1), tor(1, 2), tor(1, 3)]).unwrap();
        assert_eq!(m.mass_order_at_most(2), ratio(2, 3));
    }

    #[test]
    fn pushforward_examples() {
        let c = SpectralMeasure::identity(0).torsion_pushforward().unwrap();
        assert_eq!(c.modulus(), 1);
        assert_eq!(c.weight(0), ratio(1, 1));

        let a = GroupElement::root_of_unity(1, 2, 1).unwrap();
        let b = GroupElement::new(Torsion::new(1, 3).unwrap(), vec![1]);
        let m = SpectralMeasure::new(1, [(a, ratio(1, 2)), (b, ratio(1, 2))]).unwrap();
        let c = m.torsion_pushforward().unwrap();
        assert_eq!(c.modulus(), 6);
        assert_eq!(c.weight(3), ratio(1, 2));
        assert_eq!(c.weight(2), ratio(1, 2));
        assert!(c.generates());

        let u = SpectralMeasure::uniform(0, &[tor(0, 1), tor(1, 4), tor(1, 2), tor(3, 4)]).unwrap();
        let c = u.torsion_pushforward().unwrap();
        assert_eq!(c, CyclicMeasure::uniform(4).unwrap());

        let not_gen = SpectralMeasure::uniform(0, &[tor(0, 1), tor(1, 2), tor(1, 3)])
            .unwrap()
            .torsion_pushforward()
            .unwrap();
        assert!(not_gen.generates());
        let sub = CyclicMeasure::new(6, [(0, ratio(1, 2)), (2, ratio(1, 2))]).unwrap();
        assert!(!sub.generates());
    }

    #[test]
    fn fourier_examples() {
        let u3 = CyclicMeasure::uniform(3).unwrap();
        assert_eq!(u3.fourier(0), Complex64::new(1.0, 0.0));
        assert!(u3.fourier(1).norm() < 1e-15);
        let d = CyclicMeasure::new(5, [(1, ratio(1, 1))]).unwrap();
        let z = d.fourier(2);
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((z.arg() - 2.0 * PI * 2.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn return_probability_examples() {
        let u3 = CyclicMeasure::uniform(3).unwrap();
        for n in 1..8 {
            assert!((u3.return_probability_fourier(n).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        }
        let d = CyclicMeasure::new(2, [(1, ratio(1, 1))]).unwrap();
        assert!((d.return_probability_fourier(2).unwrap() - 1.0).abs() < 1e-12);
        let h = CyclicMeasure::new(2, [(0, ratio(1, 2)), (1, ratio(1, 2))]).unwrap();
        assert_eq!(h.return_probability_exact(3).unwrap(), ratio(1, 2));
        assert!((h.return_probability_fourier(3).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn concentration_examples() {
        assert_eq!(
            SpectralMeasure::identity(1).concentration_function(&ratio(5, 1)).unwrap(),
            ratio(1, 1)
        );
        assert_eq!(half_half_z().concentration_function(&ratio(0, 1)).unwrap(), ratio(1, 2));
        let m = SpectralMeasure::uniform(1, &[x(0), x(1), x(2), x(5)]).unwrap();
        assert_eq!(m.concentration_function(&ratio(2, 1)).unwrap(), ratio(3, 4));
        let t = SpectralMeasure::uniform(1, &[x(0), GroupElement::root_of_unity(1, 2, 1).unwrap()]).unwrap();
        assert!(matches!(
            t.concentration_function(&ratio(1, 1)),
            Err(Error::UnsupportedDomain(_))
        ));
    }

    #[test]
    fn bound_formula_shape() {
        let v = |n| nonconcentration_bound(0.2, 2, n, 1.0, BoundVariant::OrderBounded).unwrap();
        let mut prev = f64::INFINITY;
        for n in [1u64, 10, 100, 1_000, 10_000, 1_000_000] {
            assert!(v(n) < prev);
            prev = v(n);
        }
        for n in [1u64, 7, 1_000, 1 << 40] {
            assert!(nonconcentration_bound(0.3, 1, n, 1.0, BoundVariant::OrderBounded).unwrap() >= 1.0);
        }
        let direct = (1.0 + (-(1e4f64) * 0.21 / 4.0).exp()) / 3.0 + 2.0 / (1e4f64 * 0.21).sqrt();
        let got = nonconcentration_bound(0.21, 3, 10_000, 1.0, BoundVariant::OrderBounded).unwrap();
        assert!((got - direct).abs() < 1e-15);
        assert!(nonconcentration_bound(0.5, 3, 1, 1.0, BoundVariant::OrderBounded).is_err());
        assert!(nonconcentration_bound(0.2, 3, 1, 0.0, BoundVariant::OrderBounded).is_err());
        let u = nonconcentration_bound(0.2, 9, 50, 1.0, BoundVariant::Unconditional).unwrap();
        let o = nonconcentration_bound(0.2, 2, 50, 1.0, BoundVariant::OrderBounded).unwrap();
        assert_eq!(u, o);
    }

    #[test]
    fn json_round_trip() {
        let a = GroupElement::new(Torsion::new(1, 3).unwrap(), vec![2]);
        let m = SpectralMeasure::new(1, [(a, ratio(1, 3)), (x(0), ratio(2, 3))]).unwrap();
        let s = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(SpectralMeasure::from_json_str(&s).unwrap(), m);
    }
}
