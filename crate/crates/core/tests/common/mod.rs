#![allow(dead_code)]

use std::path::PathBuf;

use linsofic::abelian::{GroupElement, Torsion};
use linsofic::densecheck::ExactMatrix;
use linsofic::exact::Rational;
use linsofic::groups::MultTable;
use linsofic::jordan::JordanSpectrum;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_dim: u64,
    pub max_torsion: u64,
    pub max_size: u64,
    pub free: bool,
}

pub fn random_element(rng: &mut ChaCha8Rng, shape: Shape, free_rank: usize) -> GroupElement {
    let den = rng.gen_range(1..=shape.max_torsion);
    let num = rng.gen_range(0..den) as i64;
    let free = (0..free_rank).map(|_| rng.gen_range(-2..=2)).collect();
    GroupElement::new(Torsion::new(num, den).unwrap(), free)
}

/// Random spectrum of dimension between 1 and `max_dim`.
pub fn random_spectrum(rng: &mut ChaCha8Rng, shape: Shape) -> JordanSpectrum {
    let free_rank = if shape.free && rng.gen_bool(0.5) { 1 } else { 0 };
    let target = rng.gen_range(1..=shape.max_dim);
    let mut dim = 0;
    let mut blocks = Vec::new();
    while dim < target {
        let size = rng.gen_range(1..=shape.max_size.min(target - dim));
        let mult = if dim + 2 * size <= target && rng.gen_bool(0.3) { 2 } else { 1 };
        blocks.push((random_element(rng, shape, free_rank), size, mult));
        dim += size * mult;
    }
    JordanSpectrum::from_blocks(free_rank, blocks).unwrap()
}

/// Left regular representation: `L(g) e_h = e_{gh}`.
pub fn regular_rep(g: &MultTable, x: usize) -> Vec<Vec<i64>> {
    let n = g.order();
    let mut m = vec![vec![0; n]; n];
    for h in 0..n {
        m[g.mul(x, h)][h] = 1;
    }
    m
}

/// `copies` diagonal copies of the regular representation.
pub fn block_regular(g: &MultTable, copies: usize) -> Vec<Vec<Vec<i64>>> {
    let n = g.order();
    (0..n)
        .map(|x| {
            let r = regular_rep(g, x);
            let d = n * copies;
            let mut m = vec![vec![0; d]; d];
            for c in 0..copies {
                for i in 0..n {
                    for j in 0..n {
                        m[c * n + i][c * n + j] = r[i][j];
                    }
                }
            }
            m
        })
        .collect()
}

/// Adds a random rank-one integer perturbation supported on a few coordinates,
/// retrying until the result stays invertible.
pub fn corrupt(rng: &mut ChaCha8Rng, m: &[Vec<i64>], support: usize) -> ExactMatrix {
    let d = m.len();
    loop {
        let rows: Vec<usize> = (0..support).map(|_| rng.gen_range(0..d)).collect();
        let cols: Vec<usize> = (0..support).map(|_| rng.gen_range(0..d)).collect();
        let u: Vec<i64> = (0..support).map(|_| rng.gen_range(-2..=2)).collect();
        let v: Vec<i64> = (0..support).map(|_| rng.gen_range(-2..=2)).collect();
        let mut out = m.to_vec();
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[i][j] += u[a] * v[b];
            }
        }
        if out == m {
            continue;
        }
        let e = ExactMatrix::from_ints(&out).unwrap();
        if e.rank() == d {
            return e;
        }
    }
}

pub fn q(n: i64, d: i64) -> Rational {
    linsofic::exact::ratio(n, d)
}
