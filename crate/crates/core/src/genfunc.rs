//! Generating functions in the basis `T_n(x) = x^{n-1} + x^{n-3} + ... + x^{1-n}`.
//!
//! A spectrum's block sizes are encoded as `sum a_n T_n`; tensor products of
//! spectra become products here, and at `x = e^{i theta}` each `T_n` becomes
//! `sin(n theta) / sin(theta)`. Everything that only depends on block sizes
//! (the Jordan-block fraction, the integral bound) is computed from this
//! encoding, which forgets eigenvalues and is therefore much smaller.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::jordan::{JordanSpectrum, DEFAULT_BLOCK_CAP};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TPolynomial {
    coeffs: BTreeMap<u64, BigUint>,
}

impl TPolynomial {
    pub fn new(coeffs: impl IntoIterator<Item = (u64, BigUint)>) -> Result<Self> {
        let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (n, a) in coeffs {
            if n == 0 {
                return Err(Error::InvalidParameter("T_0 is not part of the basis".into()));
            }
            if !a.is_zero() {
                *out.entry(n).or_insert_with(BigUint::zero) += a;
            }
        }
        Ok(TPolynomial { coeffs: out })
    }

    pub fn from_pairs(coeffs: &[(u64, u64)]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&(n, a)| (n, BigUint::from(a))))
    }

    /// Coefficient of `T_n` is the number of size-`n` blocks, over all eigenvalues.
    pub fn from_spectrum(a: &JordanSpectrum) -> Self {
        TPolynomial {
            coeffs: a.size_marginal(),
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<u64, BigUint> {
        &self.coeffs
    }

    pub fn coeff(&self, n: u64) -> BigUint {
        self.coeffs.get(&n).cloned().unwrap_or_else(BigUint::zero)
    }

    /// `sum n a_n`, the dimension of the originating spectrum.
    pub fn weighted_degree(&self) -> BigUint {
        self.coeffs.iter().map(|(n, a)| a * *n).sum()
    }

    pub fn block_count(&self) -> BigUint {
        self.coeffs.values().sum()
    }

    pub fn t_multiply(&self, other: &TPolynomial) -> TPolynomial {
        self.t_multiply_capped(other, usize::MAX)
            .expect("uncapped multiplication cannot fail")
    }

    /// Bilinear extension of `T_s T_t = sum_{i=1}^{min(s,t)} T_{s+t+1-2i}`.
    pub fn t_multiply_capped(&self, other: &TPolynomial, cap: usize) -> Result<TPolynomial> {
        let top = match (self.coeffs.keys().last(), other.coeffs.keys().last()) {
            (Some(s), Some(t)) => s + t + 2,
            _ => return Ok(TPolynomial { coeffs: BTreeMap::new() }),
        };
        let mut diff = vec![BigInt::zero(); top as usize + 1];
        for (s, a) in &self.coeffs {
            for (t, b) in &other.coeffs {
                let c = BigInt::from(a * b);
                diff[(s.abs_diff(*t) + 1) as usize] += &c;
                diff[(s + t + 1) as usize] -= &c;
            }
        }
        let mut coeffs = BTreeMap::new();
        for parity in 0..2usize {
            let mut acc = BigInt::zero();
            for n in (parity..diff.len()).step_by(2) {
                acc += &diff[n];
                if acc.is_positive() {
                    coeffs.insert(n as u64, acc.to_biguint().expect("positive"));
                    if coeffs.len() > cap {
                        return Err(Error::BlowupCap {
                            count: coeffs.len(),
                            cap,
                        });
                    }
                }
            }
        }
        Ok(TPolynomial { coeffs })
    }

    /// `p^(2^k)` by `k` squarings.
    pub fn t_power(&self, k: u32) -> Result<TPolynomial> {
        self.t_power_capped(k, DEFAULT_BLOCK_CAP)
    }

    pub fn t_power_capped(&self, k: u32, cap: usize) -> Result<TPolynomial> {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.t_multiply_capped(&p, cap)?;
        }
        Ok(p)
    }

    /// `P(theta) = (1/d) sum a_n sin(n theta)/sin(theta)`, continuous at multiples of pi.
    pub fn evaluate_p(&self, theta: f64) -> f64 {
        let d = self.weighted_degree();
        if d.is_zero() {
            return 0.0;
        }
        let weights: Vec<(u64, f64)> = self
            .coeffs
            .iter()
            .map(|(n, a)| (*n, exact::to_f64(&exact::uint_ratio(a, &d))))
            .collect();
        let max_n = weights.last().map(|w| w.0).unwrap_or(1);
        let c = theta.cos();
        let s = theta.sin();
        let mut total = 0.0;
        if s == 0.0 {
            // limit of sin(n theta)/sin(theta) is n (c)^(n+1) with c = +-1
            for (n, w) in weights {
                let sign = if c < 0.0 && n % 2 == 0 { -1.0 } else { 1.0 };
                total += w * n as f64 * sign;
            }
            return total;
        }
        let mut it = weights.into_iter().peekable();
        // U_{n-1}(cos theta) = sin(n theta)/sin(theta)
        let (mut prev, mut cur) = (0.0f64, 1.0f64);
        for n in 1..=max_n {
            if let Some(&(m, w)) = it.peek() {
                if m == n {
                    total += w * cur;
                    it.next();
                }
            } else {
                break;
            }
            let next = 2.0 * c * cur - prev;
            prev = cur;
            cur = next;
        }
        total
    }

    /// Fraction `(sum_{n odd} a_n) / d`.
    pub fn odd_block_fraction(&self) -> Rational {
        let odd: BigUint = self
            .coeffs
            .iter()
            .filter(|(n, _)| *n % 2 == 1)
            .map(|(_, a)| a)
            .sum();
        exact::uint_ratio(&odd, &self.weighted_degree())
    }

    /// Jordan-block fraction `(sum a_n) / d`.
    pub fn block_fraction(&self) -> Rational {
        exact::uint_ratio(&self.block_count(), &self.weighted_degree())
    }

    /// Fraction of blocks of size at least 2, `(sum_{n >= 2} a_n) / d`.
    pub fn nontrivial_block_fraction(&self) -> Rational {
        let big: BigUint = self.coeffs.range(2..).map(|(_, a)| a).sum();
        exact::uint_ratio(&big, &self.weighted_degree())
    }

    /// Grid estimate of the measure of `{theta in [0, 2pi) : |P(theta)| > 1 - gap * eps}`
    /// with `gap` the nontrivial block fraction.
    pub fn excluded_measure(&self, eps: f64, grid: usize) -> f64 {
        let gap = exact::to_f64(&self.nontrivial_block_fraction());
        let threshold = 1.0 - gap * eps;
        let step = 2.0 * PI / grid as f64;
        let hits = (0..grid)
            .filter(|&i| self.evaluate_p(i as f64 * step).abs() > threshold)
            .count();
        hits as f64 * step
    }
}

/// `U_{n-1}(cos theta)`, i.e. `sin(n theta)/sin(theta)` extended continuously; odd in `n`.
pub fn sine_ratio(n: i64, theta: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n < 0 {
        return -sine_ratio(-n, theta);
    }
    let c = theta.cos();
    let (mut prev, mut cur) = (0.0f64, 1.0f64);
    for _ in 1..n {
        let next = 2.0 * c * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `I_n(a, b) = int_a^b sin(n t)/sin(t) dt` through the two-step recursion
/// `(n+1)(I_{n+2} - I_n) = 2(sin((n+1)b) - sin((n+1)a))`, from `I_0 = 0`, `I_1 = b - a`.
pub fn integral_in(n: i64, a: f64, b: f64) -> f64 {
    if n < 0 {
        return -integral_in(-n, a, b);
    }
    let (mut k, mut value) = if n % 2 == 0 { (0i64, 0.0) } else { (1i64, b - a) };
    while k < n {
        let m = (k + 1) as f64;
        value += 2.0 * ((m * b).sin() - (m * a).sin()) / m;
        k += 2;
    }
    value
}

/// Adaptive Simpson quadrature of the same integral, for cross-checking the recursion.
pub fn quadrature_in(n: i64, a: f64, b: f64, tol: f64) -> f64 {
    let f = |t: f64| sine_ratio(n, t);
    // split the interval first so oscillatory integrands are not accepted too early
    let pieces = (2 * n.unsigned_abs() as usize).max(8);
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = lo + h;
            let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let s = h / 6.0 * (flo + 4.0 * fmid + fhi);
            simpson(&f, lo, hi, flo, fmid, fhi, s, tol / pieces as f64, 48)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Checks `|sin(n theta)/sin(theta)| <= n - eps`, valid when `|cos theta| <= 1 - eps/2`.
pub fn sine_ratio_check(n: i64, eps: f64, theta: f64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 2], got {eps}")));
    }
    if theta.cos().abs() > 1.0 - eps / 2.0 + 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "|cos theta| = {} exceeds 1 - eps/2",
            theta.cos().abs()
        )));
    }
    Ok(sine_ratio(n, theta).abs() <= n as f64 - eps + 1e-12)
}

/// Outcome of the integral bound on the Jordan-block fraction of the `2^k`-th tensor power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanBound {
    pub k: u32,
    /// `(1/3) int_0^{2pi} P^{2^k}` divided by pi.
    pub pi_coeff: Rational,
    /// Jordan-block fraction of the `2^k`-th tensor power.
    pub j: Rational,
    /// Whether `j <= pi_coeff * pi`; `None` only if the pi enclosure is too coarse.
    pub holds: Option<bool>,
}

impl JordanBound {
    pub fn to_json(&self) -> JordanBoundJson {
        JordanBoundJson {
            k: self.k,
            bound: PiMultiple {
                pi_coeff: exact::fmt_rational(&self.pi_coeff),
            },
            bound_approx: exact::to_f64(&self.pi_coeff) * PI,
            j: exact::fmt_rational(&self.j),
            holds: self.holds,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PiMultiple {
    pub pi_coeff: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct JordanBoundJson {
    pub k: u32,
    pub bound: PiMultiple,
    pub bound_approx: f64,
    pub j: String,
    pub holds: Option<bool>,
}

/// Exact value of `(1/3) int_0^{2pi} P_1^{2^k}` as a multiple of pi, compared with
/// the Jordan-block fraction of the `2^k`-th tensor power.
///
/// Only size-`n` blocks with `n` odd contribute (each integrates to `2pi`), so the
/// bound is `(2/3) * odd_fraction * pi`. For `k >= 1` the integrand is a square and
/// the inequality must hold; a failure there is reported as an error. For `k = 0`
/// the value is returned as is.
pub fn jordan_bound_exact(a: &JordanSpectrum, k: u32) -> Result<JordanBound> {
    jordan_bound_exact_capped(a, k, DEFAULT_BLOCK_CAP)
}

pub fn jordan_bound_exact_capped(a: &JordanSpectrum, k: u32, cap: usize) -> Result<JordanBound> {
    let p = TPolynomial::from_spectrum(a).t_power_capped(k, cap)?;
    jordan_bound_from_power(&p, k)
}

/// Same as [`jordan_bound_exact`] for an already computed `P_1^{2^k}`.
pub fn jordan_bound_from_power(p: &TPolynomial, k: u32) -> Result<JordanBound> {
    let pi_coeff = exact::ratio(2, 3) * p.odd_block_fraction();
    let j = p.block_fraction();
    let holds = exact::le_multiple_of_pi(&j, &pi_coeff);
    if k >= 1 && holds == Some(false) {
        return Err(Error::BoundViolation(format!(
            "j = {} exceeds ({}) pi at k = {k}",
            j, pi_coeff
        )));
    }
    Ok(JordanBound {
        k,
        pi_coeff,
        j,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::GroupElement;
    use crate::exact::ratio;

    fn tp(pairs: &[(u64, u64)]) -> TPolynomial {
        TPolynomial::from_pairs(pairs).unwrap()
    }

    fn one() -> GroupElement {
        GroupElement::identity(0)
    }

    #[test]
    fn from_spectrum_examples() {
        let m = GroupElement::root_of_unity(1, 2, 0).unwrap();
        let a = JordanSpectrum::from_blocks(0, [(one(), 2, 1), (m, 2, 1)]).unwrap();
        assert_eq!(TPolynomial::from_spectrum(&a), tp(&[(2, 2)]));
        let id = JordanSpectrum::identity(0, 7).unwrap();
        assert_eq!(TPolynomial::from_spectrum(&id), tp(&[(1, 7)]));
        let b = JordanSpectrum::from_blocks(0, [(one(), 3, 1), (one(), 1, 1)]).unwrap();
        assert_eq!(TPolynomial::from_spectrum(&b), tp(&[(3, 1), (1, 1)]));
    }

    #[test]
    fn linearization_examples() {
        assert_eq!(tp(&[(2, 1)]).t_multiply(&tp(&[(2, 1)])), tp(&[(3, 1), (1, 1)]));
        assert_eq!(tp(&[(2, 1)]).t_multiply(&tp(&[(3, 1)])), tp(&[(4, 1), (2, 1)]));
        for n in 1..12 {
            assert_eq!(tp(&[(1, 1)]).t_multiply(&tp(&[(n, 1)])), tp(&[(n, 1)]));
        }
    }

    #[test]
    fn power_examples() {
        let p = tp(&[(2, 1)]);
        assert_eq!(p.t_power(0).unwrap(), p);
        assert_eq!(p.t_power(1).unwrap(), tp(&[(3, 1), (1, 1)]));
        assert_eq!(p.t_power(2).unwrap(), tp(&[(5, 1), (3, 3), (1, 2)]));
        assert_eq!(p.t_power(3).unwrap().weighted_degree(), BigUint::from(256u32));
    }

    #[test]
    fn evaluate_examples() {
        let p = tp(&[(3, 2), (2, 1), (1, 4)]);
        assert!((p.evaluate_p(0.0) - 1.0).abs() < 1e-15);
        let id = tp(&[(1, 9)]);
        for t in [0.0, 0.3, 1.0, PI, 4.0] {
            assert!((id.evaluate_p(t) - 1.0).abs() < 1e-15);
        }
        assert!(tp(&[(2, 1)]).evaluate_p(PI / 2.0).abs() < 1e-15);
        // at theta = pi, sin(n t)/sin t -> n (-1)^(n+1)
        assert!((tp(&[(2, 1)]).evaluate_p(PI) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn integral_examples() {
        assert!((integral_in(1, 0.0, 2.0 * PI) - 2.0 * PI).abs() < 1e-14);
        assert!(integral_in(2, 0.0, 2.0 * PI).abs() < 1e-14);
        assert!((integral_in(3, PI / 2.0, 1.5 * PI) - PI).abs() < 1e-14);
        assert_eq!(integral_in(0, 0.3, 2.0), 0.0);
        assert_eq!(integral_in(-3, 0.3, 2.0), -integral_in(3, 0.3, 2.0));
        for n in [-7i64, -2, 1, 2, 5, 10, 33] {
            let q = quadrature_in(n, 0.2, 2.9, 1e-12);
            assert!((integral_in(n, 0.2, 2.9) - q).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn even_integrals_on_middle_interval() {
        // I_2(pi/2, 3pi/2) = int 2 cos = -4; even-n values stay at or below -8/3
        assert!((integral_in(2, PI / 2.0, 1.5 * PI) + 4.0).abs() < 1e-14);
        assert!((quadrature_in(2, PI / 2.0, 1.5 * PI, 1e-12) + 4.0).abs() < 1e-9);
        assert!((integral_in(4, PI / 2.0, 1.5 * PI) + 8.0 / 3.0).abs() < 1e-14);
        for n in (2..=200).step_by(2) {
            let v = integral_in(n, PI / 2.0, 1.5 * PI);
            assert!(v <= -8.0 / 3.0 + 1e-12, "n = {n}: {v}");
            assert!(v >= -4.0 - 1e-12, "n = {n}: {v}");
        }
        for n in (1..=51).step_by(2) {
            assert!((integral_in(n, PI / 2.0, 1.5 * PI) - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn sine_ratio_examples() {
        assert!(sine_ratio_check(2, 2.0, PI / 2.0).unwrap());
        assert!(sine_ratio_check(3, 2.0, PI / 2.0).unwrap());
        assert!(sine_ratio_check(3, 1.0, 0.0).is_err());
        assert!(sine_ratio_check(1, 1.0, 1.0).is_err());
        assert!((sine_ratio(4, 0.0) - 4.0).abs() < 1e-15);
        assert!((sine_ratio(4, PI) + 4.0).abs() < 1e-12);
    }

    #[test]
    fn integral_bound_examples() {
        let id = JordanSpectrum::identity(0, 3).unwrap();
        let b = jordan_bound_exact(&id, 2).unwrap();
        assert_eq!(b.pi_coeff, ratio(2, 3));
        assert_eq!(b.j, ratio(1, 1));
        assert_eq!(b.holds, Some(true));

        let j2 = JordanSpectrum::jordan_block(one(), 2).unwrap();
        let b1 = jordan_bound_exact(&j2, 1).unwrap();
        assert_eq!((b1.pi_coeff.clone(), b1.j.clone()), (ratio(1, 3), ratio(1, 2)));
        assert_eq!(b1.holds, Some(true));
        let b2 = jordan_bound_exact(&j2, 2).unwrap();
        assert_eq!((b2.pi_coeff.clone(), b2.j.clone()), (ratio(1, 4), ratio(3, 8)));
        assert_eq!(b2.holds, Some(true));

        // k = 0 integrates P_1 itself, which can be negative; not a valid bound
        let b0 = jordan_bound_exact(&j2, 0).unwrap();
        assert_eq!(b0.holds, Some(false));
    }

    #[test]
    fn cap_applies_to_powers() {
        assert!(matches!(
            tp(&[(2, 1), (7, 1)]).t_power_capped(5, 10),
            Err(Error::BlowupCap { .. })
        ));
    }
}
