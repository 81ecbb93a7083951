//! Cyclotomic field `Q(zeta_n)` with elements stored as coefficient vectors modulo `Phi_n`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::Rational;

/// Element of a [`CycField`]: coefficients of `1, zeta, ..., zeta^(deg-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyc(pub(crate) Vec<Rational>);

impl Cyc {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycField {
    n: u64,
    /// Monic `Phi_n`, low degree first.
    modulus: Vec<Rational>,
}

type Poly = Vec<Rational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Quotient and remainder; `b` must be nonzero after trimming.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = &r[top] / lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[top - db + j] -= &c * bj;
            }
        }
        q[top - db] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn cyclotomic(n: u64) -> Poly {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut p = vec![Rational::zero(); n as usize + 1];
    p[0] = -Rational::one();
    p[n as usize] = Rational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divmod(&p, &cyclotomic(d)).0;
        }
    }
    p
}

impl CycField {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "cyclotomic order must be positive");
        CycField { n, modulus: cyclotomic(n) }
    }

    pub fn rationals() -> Self {
        CycField::new(1)
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut p: Poly) -> Cyc {
        let d = self.degree();
        for i in (d..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut p[i]);
            for j in 0..d {
                p[i - d + j] -= &c * &self.modulus[j];
            }
        }
        p.resize(d, Rational::zero());
        Cyc(p)
    }

    pub fn zero(&self) -> Cyc {
        Cyc(vec![Rational::zero(); self.degree()])
    }

    pub fn one(&self) -> Cyc {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, r: Rational) -> Cyc {
        let mut v = vec![Rational::zero(); self.degree()];
        v[0] = r;
        Cyc(v)
    }

    /// `zeta_n^k`.
    pub fn zeta_pow(&self, k: u64) -> Cyc {
        let k = (k % self.n) as usize;
        let mut p = vec![Rational::zero(); k + 1];
        p[k] = Rational::one();
        self.reduce(p)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        Cyc(a.0.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        if self.degree() == 1 {
            return Cyc(vec![&a.0[0] * &b.0[0]]);
        }
        self.reduce(poly_mul(&a.0, &b.0))
    }

    pub fn scale(&self, a: &Cyc, r: &Rational) -> Cyc {
        Cyc(a.0.iter().map(|x| x * r).collect())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_n`.
    pub fn inv(&self, a: &Cyc) -> Option<Cyc> {
        if a.is_zero() {
            return None;
        }
        if self.degree() == 1 {
            return Some(Cyc(vec![Rational::one() / &a.0[0]]));
        }
        let (mut r0, mut r1) = (self.modulus.clone(), a.0.clone());
        trim(&mut r1);
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let qs = poly_mul(&q, &s1);
            let len = s0.len().max(qs.len());
            let mut s2 = vec![Rational::zero(); len];
            for (i, v) in s0.iter().enumerate() {
                s2[i] += v;
            }
            for (i, v) in qs.iter().enumerate() {
                s2[i] -= v;
            }
            trim(&mut s2);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Phi_n is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = Rational::one() / &r0[0];
        Some(self.reduce(s0.iter().map(|v| v * &c).collect()))
    }

    /// Image of an element of `Q(zeta_m)`, `m | n`, under `zeta_m -> zeta_n^(n/m)`.
    pub fn lift(&self, from: &CycField, a: &Cyc) -> Cyc {
        assert!(self.n.is_multiple_of(from.n), "field of order {} does not embed in order {}", from.n, self.n);
        if from.n == self.n {
            return a.clone();
        }
        let step = (self.n / from.n) as usize;
        let mut p = vec![Rational::zero(); step * a.0.len().max(1)];
        for (k, c) in a.0.iter().enumerate() {
            p[k * step] = c.clone();
        }
        self.reduce(p)
    }

    /// Smallest field containing both.
    pub fn join(&self, other: &CycField) -> CycField {
        if self.n == other.n {
            return self.clone();
        }
        CycField::new(self.n.lcm(&other.n))
    }

    /// Complex value of an element (for display and float cross-checks).
    pub fn to_complex(&self, a: &Cyc) -> num_complex::Complex64 {
        let w = std::f64::consts::TAU / self.n as f64;
        a.0.iter()
            .enumerate()
            .map(|(k, c)| num_complex::Complex64::from_polar(crate::exact::to_f64(c), w * k as f64))
            .sum()
    }
}
