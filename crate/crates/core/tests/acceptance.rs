//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use common::{q, random_spectrum, Shape};
use linsofic::abelian::{CyclicMeasure, GroupElement, SpectralMeasure};
use linsofic::densecheck::{self, Assignment, Backend, ExactMatrix};
use linsofic::exact::{self, Rational};
use linsofic::genfunc::{self, TPolynomial};
use linsofic::groups::{self, MultTable};
use linsofic::jordan::{JordanSpectrum, DEFAULT_BLOCK_CAP};
use linsofic::planner;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}"))?;
    Ok(out)
}

fn c1_z2n_lp() -> Outcome {
    let mut worst = Duration::ZERO;
    for n in 2..=6u32 {
        let factors = vec![2u64; n as usize];
        let start = Instant::now();
        let t = groups::table_for_abelian(&factors).map_err(err)?;
        let r = groups::kappa_complex(&t).map_err(err)?;
        let took = start.elapsed();
        worst = worst.max(took);
        let expect = q(1 << (n - 1), (1 << n) - 1);
        ensure(r.kappa == expect, || format!("Z2^{n}: {} != {expect}", r.kappa))?;
        ensure(groups::kappa_z2n_closed_form(n).map_err(err)? == expect, || {
            format!("closed form disagrees at n = {n}")
        })?;
        let k = groups::kernel_dims(&t).map_err(err)?;
        ensure(r.achieved(&k) == r.kappa, || format!("witness for Z2^{n} does not attain kappa"))?;
        ensure(took < Duration::from_secs(1), || format!("Z2^{n} took {took:?}"))?;
    }
    Ok(format!("n = 2..6 exact, slowest {worst:?}"))
}

fn c2_modp() -> Outcome {
    let cases: Vec<(&str, MultTable, u64)> = vec![
        ("Z2", MultTable::cyclic(2).map_err(err)?, 2),
        ("Z3", MultTable::cyclic(3).map_err(err)?, 3),
        ("Z5", MultTable::cyclic(5).map_err(err)?, 5),
        (
            "Z2xZ2",
            MultTable::cyclic(2).and_then(|z| z.direct_product(&z)).map_err(err)?,
            2,
        ),
        ("S3", MultTable::symmetric(3).map_err(err)?, 2),
    ];
    for (name, g, p) in cases {
        let r = timed(Duration::from_secs(1), name, || groups::kappa_modp_regular(&g, p))?
            .map_err(err)?;
        let expect = Rational::one() - q(1, p as i64);
        ensure(r.kappa == expect, || format!("{name}: {} != {expect}", r.kappa))?;
        ensure(r.warning.is_none(), || format!("{name}: unexpected warning"))?;
    }
    Ok("1 - 1/p on Z2, Z3, Z5, Z2xZ2, S3".into())
}

fn c3_cyclic() -> Outcome {
    for n in 2..=12u64 {
        let t = groups::table_for_abelian(&[n]).map_err(err)?;
        let r = groups::kappa_complex(&t).map_err(err)?;
        ensure(r.kappa.is_one(), || format!("Z{n}: kappa = {}", r.kappa))?;
        ensure(groups::is_fixed_point_free(&t).map_err(err)?, || format!("Z{n} not fixed-point-free"))?;
    }
    Ok("kappa(Z_n) = 1 for n = 2..12".into())
}

fn c4_homomorphism() -> Outcome {
    let mut rng = common::rng(4);
    let shape = Shape { max_dim: 20, max_torsion: 6, max_size: 6, free: true };
    for i in 0..200 {
        let a = random_spectrum(&mut rng, shape);
        let mut b = random_spectrum(&mut rng, shape);
        if b.free_rank() != a.free_rank() {
            b = JordanSpectrum::from_blocks(
                a.free_rank(),
                b.blocks().iter().map(|(blk, m)| {
                    let mut e = blk.eigenvalue.clone();
                    e.free.resize(a.free_rank(), 0);
                    (e, blk.size, m.to_u64().unwrap())
                }),
            )
            .map_err(err)?;
        }
        let lhs = TPolynomial::from_spectrum(&a.tensor(&b).map_err(err)?);
        let rhs = TPolynomial::from_spectrum(&a).t_multiply(&TPolynomial::from_spectrum(&b));
        ensure(lhs == rhs, || format!("pair {i} differs"))?;
    }
    Ok("200 random pairs, dim <= 20".into())
}

fn fixtures_small() -> Vec<JordanSpectrum> {
    let e = |n: i64, d: u64, f: Option<i64>| {
        GroupElement::new(
            linsofic::abelian::Torsion::new(n, d).unwrap(),
            f.into_iter().collect(),
        )
    };
    let mut out = vec![
        JordanSpectrum::jordan_block(e(0, 1, None), 2).unwrap(),
        JordanSpectrum::jordan_block(e(1, 2, None), 3).unwrap(),
        JordanSpectrum::from_blocks(0, [(e(1, 4, None), 2, 1), (e(0, 1, None), 1, 1)]).unwrap(),
        JordanSpectrum::from_blocks(1, [(e(0, 1, Some(1)), 2, 1), (e(1, 3, Some(0)), 1, 2)]).unwrap(),
        JordanSpectrum::jordan_block(e(2, 3, Some(-1)), 3).unwrap(),
        JordanSpectrum::identity(0, 4).unwrap(),
    ];
    let mut rng = common::rng(5);
    let shape = Shape { max_dim: 6, max_torsion: 4, max_size: 4, free: true };
    while out.len() < 60 {
        out.push(random_spectrum(&mut rng, shape));
    }
    out
}

fn c5_oracle() -> Outcome {
    let fixtures = fixtures_small();
    for (i, a) in fixtures.iter().enumerate() {
        let asg = Assignment::primes(a.free_rank());
        let m = densecheck::realize(a, Backend::Exact, Some(&asg), 64).map_err(err)?;
        let k = densecheck::kron(&m, &m, 64).map_err(err)?;
        let t = a.tensor(a).map_err(err)?;
        let mut seen = 0u64;
        for lambda in t.eigenvalues() {
            let dense = densecheck::jordan_structure(&k, &lambda, Some(&asg)).map_err(err)?;
            let want: std::collections::BTreeMap<u64, u64> = t
                .blocks_at(&lambda)
                .into_iter()
                .map(|(s, c)| (s, c.to_u64().unwrap()))
                .collect();
            ensure(dense == want, || format!("fixture {i} at {lambda}: dense {dense:?} vs {want:?}"))?;
            seen += dense.iter().map(|(s, c)| s * c).sum::<u64>();
        }
        ensure(seen == k.dim() as u64, || format!("fixture {i}: eigenvalues cover {seen} of {}", k.dim()))?;
    }
    Ok(format!("{} fixtures, exact backend", fixtures.len()))
}

fn c6_cross_module() -> Outcome {
    let mut rng = common::rng(6);
    let shape = Shape { max_dim: 4, max_torsion: 4, max_size: 3, free: true };
    for i in 0..100 {
        let a = random_spectrum(&mut rng, shape);
        let xi = a.spectral_measure();
        for m in 1..=6u32 {
            let am = a.tensor_square_iterate(m).map_err(err)?;
            let m1 = am.stats().m1;
            let conv = xi.convolution_power(1 << (m - 1)).map_err(err)?.mass_at_identity();
            ensure(m1 == conv, || format!("spectrum {i}, m = {m}: {m1} vs {conv}"))?;
        }
    }
    Ok("100 spectra, m = 1..6".into())
}

fn c7_integrals() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a, b) in [(0.0, 2.0 * PI), (PI / 2.0, 3.0 * PI / 2.0)] {
        for n in -50..=50i64 {
            let d = (genfunc::integral_in(n, a, b) - genfunc::quadrature_in(n, a, b, 1e-12)).abs();
            worst = worst.max(d);
            ensure(d <= 1e-9, || format!("I_{n}({a}, {b}) off by {d:e}"))?;
        }
    }
    for n in 0..=50i64 {
        let v = genfunc::integral_in(n, 0.0, 2.0 * PI);
        let want = if n % 2 == 1 { 2.0 * PI } else { 0.0 };
        ensure((v - want).abs() <= 1e-12, || format!("parity I_{n}(0, 2pi) = {v}"))?;
    }
    Ok(format!("|n| <= 50 on both intervals, max deviation {worst:.1e}"))
}

fn c8_jordan_fraction() -> Outcome {
    let fixtures = fixtures_small();
    let mut decay_runs = 0;
    for (i, a) in fixtures.iter().enumerate() {
        for k in 1..=5u32 {
            let b = genfunc::jordan_bound_exact(a, k).map_err(|e| format!("fixture {i}, k = {k}: {e}"))?;
            ensure(b.holds == Some(true), || format!("fixture {i}, k = {k}: undecided"))?;
        }
        let j = exact::to_f64(&a.stats().j);
        for gamma in [0.25, 0.5] {
            if j > 1.0 - gamma {
                continue;
            }
            for eta in [0.5, 0.25] {
                let c = planner::jordan_decay_check(a, gamma, eta, 10, DEFAULT_BLOCK_CAP).map_err(err)?;
                ensure(c.valid, || {
                    format!("fixture {i}: first crossing {:?} > planned {}", c.first_crossing, c.planned)
                })?;
                decay_runs += 1;
            }
        }
    }
    Ok(format!("{} fixtures, k = 1..5; {decay_runs} decay checks", fixtures.len()))
}

fn c9_nonconcentration() -> Outcome {
    const N: u64 = 1 << 14;
    // nu^(n)(0) = 2^-n, so nu^(n)(0) sqrt(n) <= 1 iff n <= 4^n
    let mut four = BigUint::one();
    // central binomial C(n, floor(n/2)) bounds every atom; need C^2 n <= 4^n
    let mut central = BigUint::one();
    for n in 1..=N {
        let k = (n - 1) / 2;
        central = if (n - 1) % 2 == 0 {
            central * n / (n - k)
        } else {
            central * n / (k + 1)
        };
        four <<= 2;
        ensure(BigUint::from(n) <= four, || format!("return mass bound fails at n = {n}"))?;
        ensure(&central * &central * n <= four, || format!("max atom bound fails at n = {n}"))?;
    }
    let nu = SpectralMeasure::new(
        1,
        [
            (GroupElement::identity(1), q(1, 2)),
            (GroupElement::generator(0, 1), q(1, 2)),
        ],
    )
    .map_err(err)?;
    for n in [1u64, 2, 3, 10, 64, 255] {
        let p = nu.convolution_power(n).map_err(err)?;
        let mut binom = BigUint::one();
        for k in 0..=n {
            let w = p.weight(&GroupElement::new(linsofic::abelian::Torsion::ZERO, vec![k as i64]));
            let want = exact::uint_ratio(&binom, &(BigUint::one() << n));
            ensure(w == want, || format!("n = {n}, atom {k}: {w} vs {want}"))?;
            binom = binom * (n - k) / (k + 1);
        }
        ensure(p.mass_at_identity() == exact::uint_ratio(&BigUint::one(), &(BigUint::one() << n)), || {
            format!("return mass at n = {n}")
        })?;
    }
    Ok(format!("n <= {N}: return mass and max atom times sqrt(n) <= 1"))
}

fn c10_fourier() -> Outcome {
    let mut rng = common::rng(10);
    let mut worst: f64 = 0.0;
    for modulus in 1..=64u64 {
        for _ in 0..3 {
            let support: Vec<u64> = (0..rng.gen_range(1..=modulus.min(6)))
                .map(|_| rng.gen_range(0..modulus))
                .collect();
            let raw: Vec<i64> = support.iter().map(|_| rng.gen_range(1..=9)).collect();
            let total: i64 = raw.iter().sum();
            let mu = CyclicMeasure::new(modulus, support.iter().zip(&raw).map(|(&a, &w)| (a, q(w, total))))
                .map_err(err)?;
            let mut power = CyclicMeasure::new(modulus, [(0, Rational::one())]).map_err(err)?;
            for n in 0..=20u64 {
                let f = mu.return_probability_fourier(n).map_err(err)?;
                let e = exact::to_f64(&power.weight(0));
                power = power.convolve(&mu).map_err(err)?;
                let d = (f - e).abs();
                worst = worst.max(d);
                ensure(d <= 1e-9, || format!("N = {modulus}, n = {n}: {f} vs {e}"))?;
            }
        }
    }
    Ok(format!("N <= 64, n <= 20, max deviation {worst:.1e}"))
}

fn c11_stabilize() -> Outcome {
    let mut rng = common::rng(11);
    let groups = [
        ("Z2", MultTable::cyclic(2).map_err(err)?, [30usize, 20]),
        ("Z3", MultTable::cyclic(3).map_err(err)?, [20, 15]),
        ("S3", MultTable::symmetric(3).map_err(err)?, [10, 8]),
    ];
    let limit = q(1, 20);
    let mut done = 0;
    let mut worst = Rational::zero();
    let mut attempt = 0;
    while done < 20 {
        let (name, g, copies) = &groups[attempt % 3];
        let copies = copies[(attempt / 3) % 2];
        attempt += 1;
        let base = common::block_regular(g, copies);
        let mut phi: Vec<ExactMatrix> = base
            .iter()
            .map(|m| ExactMatrix::from_ints(m))
            .collect::<linsofic::Result<_>>()
            .map_err(err)?;
        let victims = rng.gen_range(1..=2usize.min(g.order() - 1));
        for _ in 0..victims {
            let x = rng.gen_range(1..g.order());
            phi[x] = common::corrupt(&mut rng, &base[x], 2);
        }
        let r = densecheck::stabilize(&phi, g).map_err(err)?;
        if r.epsilon > limit || r.epsilon.is_zero() {
            continue;
        }
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = r.psi[x].mul(&r.psi[y]).map_err(err)?;
                ensure(lhs == r.psi[g.mul(x, y)], || format!("{name}: psi not a homomorphism"))?;
            }
        }
        for (x, d) in r.distances.iter().enumerate() {
            ensure(d <= &r.bound, || format!("{name}: rho at {x} = {d} exceeds {}", r.bound))?;
            let recomputed = densecheck::rho(&phi[x], &r.psi[x]).map_err(err)?;
            ensure(&recomputed == d, || format!("{name}: reported distance {d} vs {recomputed}"))?;
            if d > &worst {
                worst = d.clone();
            }
        }
        done += 1;
    }
    Ok(format!("20 corrupted representations, dim <= 60, max distance {worst}"))
}

fn c12_excluded_measure() -> Outcome {
    let mut rng = common::rng(12);
    let shape = Shape { max_dim: 20, max_torsion: 6, max_size: 6, free: true };
    let grid = 1usize << 16;
    let mut slack = f64::INFINITY;
    for i in 0..50 {
        let p = TPolynomial::from_spectrum(&random_spectrum(&mut rng, shape));
        for eps in [0.01, 0.1, 0.5] {
            let mu = p.excluded_measure(eps, grid);
            let bound = 8.0 * f64::sqrt(eps) + 2.0 * PI / grid as f64;
            slack = slack.min(bound - mu);
            ensure(mu <= bound, || format!("spectrum {i}, eps = {eps}: {mu} > {bound}"))?;
        }
    }
    Ok(format!("50 spectra, eps in {{0.01, 0.1, 0.5}}, min slack {slack:.3}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("kappa LP on Z2^n", c1_z2n_lp),
        ("mod-p regular representation", c2_modp),
        ("cyclic groups", c3_cyclic),
        ("generating-function homomorphism", c4_homomorphism),
        ("dense oracle equivalence", c5_oracle),
        ("m1 vs convolution power", c6_cross_module),
        ("trigonometric integrals", c7_integrals),
        ("Jordan-fraction bound", c8_jordan_fraction),
        ("non-concentration shape", c9_nonconcentration),
        ("Fourier identity", c10_fourier),
        ("stabilization", c11_stabilize),
        ("excluded measure", c12_excluded_measure),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} — {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} — {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
