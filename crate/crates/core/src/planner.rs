//! Effective iteration counts and the amplification driver.
//!
//! The thresholds here are the explicit choices made in the existence
//! proofs: how many tensor squarings bring the Jordan-block fraction below a
//! target, how many tensor factors push the eigenvalue-1 mass down to `1/r`,
//! and how small the starting multiplicativity defect must be. The driver
//! runs the squaring on a concrete spectrum and records observed values next
//! to the planned ones.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{nonconcentration_bound, BoundVariant};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::genfunc::{jordan_bound_from_power, TPolynomial};
use crate::jordan::{log2, JordanSpectrum, SpectrumStats, DEFAULT_BLOCK_CAP};

/// Lower bound on the defect after replacing `g` by `g^{r!}` in the second case.
pub const BETA: f64 = 0.21;
/// Jordan-block fraction separating the two cases.
pub const CASE_SPLIT_NUM: i64 = 99;
pub const CASE_SPLIT_DEN: i64 = 100;
/// `gamma` used for the first case (`j < 0.99` means `j <= 1 - 0.01`).
pub const CASE1_GAMMA: f64 = 0.01;
/// Defect of the starting map after identity padding.
pub const START_DEFECT: f64 = 0.23;
/// Relative margin keeping `tau` strictly below `(1/2)(gamma/(1-gamma))^2`.
pub const TAU_MARGIN: f64 = 1e-6;

/// Quantities fixed in the Jordan-block decay argument for a given `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayConstants {
    pub gamma: f64,
    pub t: f64,
    pub tau: f64,
    pub eps: f64,
}

impl DecayConstants {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        let t = 1.0 / (1.0 - gamma);
        let ratio = gamma / (1.0 - gamma);
        let tau = 0.5 * ratio * ratio * (1.0 - TAU_MARGIN);
        let eps = 1.0 / (256.0 * (t + tau) * (t + tau));
        Ok(DecayConstants { gamma, t, tau, eps })
    }
}

/// Smallest `m >= 1` with `2 pi (1 - eps/t^2)^(2^m) < 1 / (2 (t + tau))`.
pub fn n0_gamma(gamma: f64) -> Result<u64> {
    let c = DecayConstants::new(gamma)?;
    let log_base = (-c.eps / (c.t * c.t)).ln_1p();
    let rhs = -(2.0 * (c.t + c.tau)).ln();
    for m in 1..=4096u64 {
        let lhs = (2.0 * PI).ln() + (m as f64).exp2() * log_base;
        if lhs < rhs {
            return Ok(m);
        }
    }
    Err(Error::Overflow(format!("no squaring count found for gamma = {gamma}")))
}

/// `k * N0(gamma)` with `k = ceil(1/(eta tau)) + 1`.
pub fn n_gamma_eta(gamma: f64, eta: f64) -> Result<u64> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    let c = DecayConstants::new(gamma)?;
    let inv = (1.0 / (eta * c.tau)).ceil();
    if !(inv < 9.0e18) {
        return Err(Error::Overflow(format!("1/(eta tau) = {inv} exceeds 64 bits")));
    }
    let k = inv as u64 + 1;
    k.checked_mul(n0_gamma(gamma)?)
        .ok_or_else(|| Error::Overflow("N(gamma, eta) exceeds 64 bits".into()))
}

/// Smallest `n` with `nonconcentration_bound(beta, r, n, c2) <= 1/r + eta`
/// (`1/2 + eta` for the unconditional variant). Targets at or above 1 are met by `n = 1`,
/// since the eigenvalue-1 fraction never exceeds 1.
pub fn m_beta_r_eta(beta: f64, r: u64, eta: f64, c2: f64, variant: BoundVariant) -> Result<u64> {
    if !(beta > 0.0 && beta <= 0.5) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1/2], got {beta}")));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("r must be positive".into()));
    }
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    let lead = match variant {
        BoundVariant::OrderBounded => 1.0 / r as f64,
        BoundVariant::Unconditional => 0.5,
    };
    let target = lead + eta;
    if target >= 1.0 {
        return Ok(1);
    }
    // the bound formula is defined for beta < 1/2 only; beta = 1/2 is evaluated at the limit
    let beta_eval = if beta >= 0.5 { 0.5 - f64::EPSILON } else { beta };
    let bound = |n: u64| nonconcentration_bound(beta_eval, r, n, c2, variant);
    let mut hi = 1u64;
    while bound(hi)? > target {
        hi = hi
            .checked_mul(2)
            .filter(|&h| h < (1 << 62))
            .ok_or_else(|| Error::Overflow("tensor count exceeds 2^62".into()))?;
    }
    let mut lo = hi / 2; // bound(lo) > target, or lo = 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanParams {
    /// Target: `rho(A, Id) >= 1 - epsilon` after amplification.
    pub epsilon: Rational,
    /// Target multiplicativity defect of the amplified map.
    pub delta: Rational,
    /// The unspecified absolute constant in the random-walk return bound.
    pub c2: f64,
    pub beta: f64,
    pub block_cap: usize,
    /// Largest number of squarings the trace will attempt.
    pub max_iters: u32,
}

impl PlanParams {
    pub fn new(epsilon: Rational, delta: Rational) -> Self {
        PlanParams {
            epsilon,
            delta,
            c2: 1.0,
            beta: BETA,
            block_cap: DEFAULT_BLOCK_CAP,
            max_iters: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_positive() && self.epsilon < Rational::one()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !self.delta.is_positive() {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {}", self.delta)));
        }
        if !(self.c2 > 0.0 && self.c2.is_finite()) {
            return Err(Error::InvalidParameter(format!("c2 must be positive, got {}", self.c2)));
        }
        if !(self.beta > 0.0 && self.beta < 0.5) {
            return Err(Error::InvalidParameter(format!("beta must lie in (0, 1/2), got {}", self.beta)));
        }
        if self.block_cap == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter("caps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    /// `floor(2/epsilon) + 1`.
    pub r: u64,
    pub r_factorial: BigUint,
    /// Tensor count after which the eigenvalue-1 mass is below `2/r`.
    pub m_highpower: u64,
    /// Squaring count after which the Jordan-block fraction is below `epsilon`.
    pub n_jordan: u64,
    pub n: u64,
    /// `min(1/(100 r!), delta / 2^n)`.
    pub delta0: Rational,
    pub c2: f64,
    pub beta: f64,
}

impl Plan {
    /// Exact `p/q`, or `delta * 2^-N` when spelling out `2^N` would be unwieldy.
    pub fn delta0_string(&self) -> String {
        if self.delta0.denom().bits() <= 256 {
            return exact::fmt_rational(&self.delta0);
        }
        let scaled = &self.delta0 * Rational::from_integer(BigInt::one() << self.n as usize);
        if scaled.denom().bits() <= 256 {
            format!("{} * 2^-{}", exact::fmt_rational(&scaled), self.n)
        } else {
            exact::fmt_rational(&self.delta0)
        }
    }

    pub fn to_json(&self) -> PlanJson {
        PlanJson {
            r: self.r,
            r_factorial: self.r_factorial.to_string(),
            m_highpower: self.m_highpower,
            n_jordan: self.n_jordan,
            n: self.n,
            delta0: self.delta0_string(),
            delta0_log2: log2_rational(&self.delta0),
            c2: self.c2,
            beta: self.beta,
            tau_margin: TAU_MARGIN,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PlanJson {
    pub r: u64,
    pub r_factorial: String,
    pub m_highpower: u64,
    pub n_jordan: u64,
    pub n: u64,
    pub delta0: String,
    pub delta0_log2: f64,
    pub c2: f64,
    pub beta: f64,
    pub tau_margin: f64,
}

fn log2_rational(r: &Rational) -> f64 {
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2(n) - log2(d)
}

pub fn plan(params: &PlanParams) -> Result<Plan> {
    params.validate()?;
    let two_over = Rational::from_integer(BigInt::from(2)) / &params.epsilon;
    let r = two_over
        .floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Overflow("r exceeds 64 bits".into()))?
        + 1;
    let r_factorial = exact::factorial(r);
    let m_highpower = m_beta_r_eta(params.beta, r, 1.0 / r as f64, params.c2, BoundVariant::OrderBounded)?;
    let n_jordan = n_gamma_eta(CASE1_GAMMA, exact::to_f64(&params.epsilon))?;
    let n = m_highpower.max(n_jordan);
    let first = BigRational::new(BigInt::one(), BigInt::from(&r_factorial * 100u32));
    let shift = usize::try_from(n).map_err(|_| Error::Overflow("2^N too large".into()))?;
    let second = &params.delta / Rational::from_integer(BigInt::one() << shift);
    let delta0 = if first < second { first } else { second };
    Ok(Plan {
        r,
        r_factorial,
        m_highpower,
        n_jordan,
        n,
        delta0,
        c2: params.c2,
        beta: params.beta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    /// Jordan-block fraction below the split: squaring drives it to zero.
    FewBlocks,
    /// Nearly diagonalizable: the random walk on eigenvalues does the work.
    NearlyDiagonal,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::FewBlocks => 1,
            Case::NearlyDiagonal => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IterationRecord {
    /// Index in `A_1 = A, A_m = A_{m-1} (x) A_{m-1}`.
    pub m: u32,
    pub dimension_log2: f64,
    pub distinct_blocks: usize,
    pub m1: String,
    pub j: String,
    pub j1: String,
    pub rho_id: String,
    /// Integral bound on `j`, as a multiple of pi (from the second iterate on).
    pub integral_bound: Option<String>,
    #[serde(skip)]
    pub stats: Option<SpectrumStatsSnapshot>,
}

/// Exact values kept alongside the string fields for programmatic checks.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumStatsSnapshot {
    pub m1: Rational,
    pub j: Rational,
    pub j1: Rational,
    pub rho_id: Rational,
}

impl From<&SpectrumStats> for SpectrumStatsSnapshot {
    fn from(s: &SpectrumStats) -> Self {
        SpectrumStatsSnapshot {
            m1: s.m1.clone(),
            j: s.j.clone(),
            j1: s.j1.clone(),
            rho_id: s.rho_id.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Depends on the configured value of an unspecified absolute constant; never fatal.
    pub constant_dependent: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PowerAnalysis {
    pub r: u64,
    /// Fraction of eigenvalues of order at most `r`.
    pub m_le_r: String,
    /// Eigenvalue-1 fraction of `A^{r!}`.
    pub m1_of_power: String,
    pub mass_hypothesis: bool,
    pub order_hypothesis: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AmplifyReport {
    pub case: u8,
    pub plan: PlanJson,
    pub initial: crate::jordan::StatsJson,
    pub power_analysis: Option<PowerAnalysis>,
    pub iterations: Vec<IterationRecord>,
    /// First `m` with `j(A_m) < epsilon`, if observed.
    pub jordan_crossing: Option<u32>,
    pub checks: Vec<Check>,
    pub completed: bool,
    pub stop_reason: String,
}

impl AmplifyReport {
    /// True when a constant-free assertion failed.
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| !c.passed && !c.constant_dependent)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "case {}  r = {}  N = {}  (jordan {}, highpower {})  delta0 ~ 2^{:.1}",
            self.case,
            self.plan.r,
            self.plan.n,
            self.plan.n_jordan,
            self.plan.m_highpower,
            self.plan.delta0_log2
        );
        let _ = writeln!(
            out,
            "{:>3}  {:>12}  {:>8}  {:>14}  {:>14}  {:>14}  {:>14}  {:>12}",
            "m", "log2(dim)", "blocks", "m1", "j", "j1", "rho(A,Id)", "bound/pi"
        );
        for it in &self.iterations {
            let _ = writeln!(
                out,
                "{:>3}  {:>12.3}  {:>8}  {:>14}  {:>14}  {:>14}  {:>14}  {:>12}",
                it.m,
                it.dimension_log2,
                it.distinct_blocks,
                abbreviate(&it.m1),
                abbreviate(&it.j),
                abbreviate(&it.j1),
                abbreviate(&it.rho_id),
                it.integral_bound.as_deref().map(abbreviate).unwrap_or_else(|| "-".into()),
            );
        }
        for c in &self.checks {
            let tag = match (c.passed, c.constant_dependent) {
                (true, _) => "ok",
                (false, true) => "advisory",
                (false, false) => "FAIL",
            };
            let _ = writeln!(out, "[{tag}] {}: {}", c.name, c.detail);
        }
        let _ = writeln!(out, "completed: {}  ({})", self.completed, self.stop_reason);
        out
    }
}

fn abbreviate(s: &str) -> String {
    if s.len() <= 14 {
        return s.to_string();
    }
    match exact::parse_rational(s) {
        Ok(r) => format!("{:.8}", exact::to_f64(&r)),
        Err(_) => s.chars().take(14).collect(),
    }
}

fn half_half(x: &Rational) -> bool {
    let split = exact::ratio(CASE_SPLIT_NUM, CASE_SPLIT_DEN);
    x < &split
}

/// Classifies `a`, squares it up to the planned horizon (or the caps), and checks
/// every constant-free inequality along the way.
pub fn amplify_trace(a: &JordanSpectrum, params: &PlanParams) -> Result<AmplifyReport> {
    let plan = plan(params)?;
    let initial = a.stats();
    let case = if half_half(&initial.j) {
        Case::FewBlocks
    } else {
        Case::NearlyDiagonal
    };
    let one = Rational::one();
    let beta = exact::from_f64(params.beta)?;
    let mut checks = Vec::new();

    let power_analysis = match case {
        Case::FewBlocks => None,
        Case::NearlyDiagonal => {
            let m_le_r = initial.m_le_r(plan.r);
            let m1_pow = a.m1_of_power(&plan.r_factorial);
            checks.push(Check {
                name: "order-bounded mass below power fixed mass".into(),
                passed: m_le_r <= m1_pow,
                constant_dependent: false,
                detail: format!("m^<=r = {} <= m1(A^r!) = {}", exact::fmt_rational(&m_le_r), exact::fmt_rational(&m1_pow)),
            });
            Some(PowerAnalysis {
                r: plan.r,
                mass_hypothesis: initial.m1 >= beta && initial.m1 <= &one - &beta,
                order_hypothesis: m1_pow <= &one - &beta,
                m_le_r: exact::fmt_rational(&m_le_r),
                m1_of_power: exact::fmt_rational(&m1_pow),
            })
        }
    };
    let hypotheses_hold = power_analysis
        .as_ref()
        .map(|p| p.mass_hypothesis && p.order_hypothesis)
        .unwrap_or(false);

    let horizon = plan.n.min(params.max_iters as u64) as u32;
    let mut iterations = Vec::new();
    let mut current = a.clone();
    let mut stop_reason = if (params.max_iters as u64) < plan.n {
        format!("iteration limit {} reached before planned horizon {}", params.max_iters, plan.n)
    } else {
        format!("planned horizon {} reached", plan.n)
    };
    let mut reached = 0u32;
    let mut crossing = None;
    for m in 1..=horizon {
        if m > 1 {
            match current.tensor_capped(&current, params.block_cap) {
                Ok(next) => current = next,
                Err(Error::BlowupCap { count, cap }) => {
                    stop_reason = format!("blowup cap {cap} exceeded at m = {m} ({count} blocks)");
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        reached = m;
        let st = current.stats();
        if crossing.is_none() && st.j < params.epsilon {
            crossing = Some(m);
        }
        if !st.satisfies_basic_bound() {
            checks.push(Check {
                name: format!("basic bound at m = {m}"),
                passed: false,
                constant_dependent: false,
                detail: "rho(A, Id) < max(1 - m1, 1 - j)".into(),
            });
        }
        let integral_bound = if m >= 2 {
            let p = TPolynomial::from_spectrum(&current);
            match jordan_bound_from_power(&p, m - 1) {
                Ok(b) => Some(exact::fmt_rational(&b.pi_coeff)),
                Err(e) => {
                    checks.push(Check {
                        name: format!("integral bound at m = {m}"),
                        passed: false,
                        constant_dependent: false,
                        detail: e.to_string(),
                    });
                    None
                }
            }
        } else {
            None
        };
        if case == Case::NearlyDiagonal && hypotheses_hold && m >= 2 {
            let tensors = 1u64 << (m - 1).min(62);
            let b = nonconcentration_bound(params.beta, plan.r, tensors, params.c2, BoundVariant::OrderBounded)?;
            let passed = exact::to_f64(&st.m1) <= b;
            if !passed {
                checks.push(Check {
                    name: format!("return bound at m = {m}"),
                    passed,
                    constant_dependent: true,
                    detail: format!("m1 = {} > {b} with C'' = {}", exact::fmt_rational(&st.m1), params.c2),
                });
            }
        }
        iterations.push(IterationRecord {
            m,
            dimension_log2: log2(&st.dimension),
            distinct_blocks: current.distinct_blocks(),
            m1: exact::fmt_rational(&st.m1),
            j: exact::fmt_rational(&st.j),
            j1: exact::fmt_rational(&st.j1),
            rho_id: exact::fmt_rational(&st.rho_id),
            integral_bound,
            stats: Some((&st).into()),
        });
    }

    if case == Case::FewBlocks {
        let passed = crossing.map(|c| c as u64 <= plan.n_jordan).unwrap_or(true);
        checks.push(Check {
            name: "jordan decay within planned squarings".into(),
            passed,
            constant_dependent: false,
            detail: match crossing {
                Some(c) => format!("j < epsilon first at m = {c}, planned N(0.01, eps) = {}", plan.n_jordan),
                None => format!("no crossing within {reached} iterates; planned {}", plan.n_jordan),
            },
        });
    }
    let completed = reached as u64 >= plan.n;
    if completed {
        let last = iterations.last().and_then(|r| r.stats.as_ref()).expect("nonempty trace");
        let passed = last.rho_id >= &one - &params.epsilon;
        checks.push(Check {
            name: "final defect".into(),
            passed,
            constant_dependent: case == Case::NearlyDiagonal,
            detail: format!("rho(A_N, Id) = {} vs 1 - eps", exact::fmt_rational(&last.rho_id)),
        });
    }

    Ok(AmplifyReport {
        case: case.number(),
        plan: plan.to_json(),
        initial: initial.to_json(),
        power_analysis,
        iterations,
        jordan_crossing: crossing,
        checks,
        completed,
        stop_reason,
    })
}

/// Observed first squaring index with `j(A_m) < eta` against the planned `N(gamma, eta)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayCheck {
    pub first_crossing: Option<u32>,
    pub planned: u64,
    pub iterations_run: u32,
    pub valid: bool,
}

pub fn jordan_decay_check(
    a: &JordanSpectrum,
    gamma: f64,
    eta: f64,
    max_iters: u32,
    cap: usize,
) -> Result<DecayCheck> {
    let limit = exact::to_f64(&(Rational::one() - exact::from_f64(gamma)?));
    let mut p = TPolynomial::from_spectrum(a);
    if exact::to_f64(&p.block_fraction()) > limit + 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "j(A) exceeds 1 - gamma = {limit}"
        )));
    }
    let planned = n_gamma_eta(gamma, eta)?;
    let eta_exact = exact::from_f64(eta)?;
    let mut first = None;
    let mut run = 0;
    for m in 1..=max_iters {
        if m > 1 {
            p = match p.t_multiply_capped(&p, cap) {
                Ok(q) => q,
                Err(Error::BlowupCap { .. }) => break,
                Err(e) => return Err(e),
            };
        }
        run = m;
        if p.block_fraction() < eta_exact {
            first = Some(m);
            break;
        }
    }
    Ok(DecayCheck {
        first_crossing: first,
        planned,
        iterations_run: run,
        valid: first.map(|f| f as u64 <= planned).unwrap_or(true),
    })
}
