use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group accepted; associativity is checked in cubic time.
pub const MAX_ORDER: usize = 512;

/// Cayley table with element 0 the identity: `table[a][b] = a * b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTable {
    table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultTableJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidGroup(msg.into())
}

impl MultTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(bad("empty table"));
        }
        if n > MAX_ORDER {
            return Err(bad(format!("order {n} exceeds limit {MAX_ORDER}")));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(bad(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(bad(format!("row {a} is not a permutation of 0..{n}")));
                }
            }
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(bad("element 0 is not the identity"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(MultTable { table })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.table[a].iter().position(|&x| x == 0).expect("rows are permutations")
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.table[x][g];
            k += 1;
        }
        k
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(bad("cyclic group of order 0"));
        }
        MultTable::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    /// `(a, b)` is numbered `a * |H| + b`.
    pub fn direct_product(&self, other: &MultTable) -> Result<Self> {
        let (n, m) = (self.order(), other.order());
        if n * m > MAX_ORDER {
            return Err(bad(format!("order {} exceeds limit {MAX_ORDER}", n * m)));
        }
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        MultTable::new(table)
    }

    /// Group generated by permutations of `0..degree`, elements in breadth-first order.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(bad(format!("{g:?} is not a permutation of degree {degree}")));
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..degree).map(|i| p[q[i]]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut i = 0;
        while i < elements.len() {
            for g in generators {
                let next = compose(&elements[i], g);
                if !index.contains_key(&next) {
                    if elements.len() == MAX_ORDER {
                        return Err(bad(format!("generated group exceeds {MAX_ORDER} elements")));
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            i += 1;
        }
        let table = elements
            .iter()
            .map(|p| elements.iter().map(|q| index[&compose(p, q)]).collect())
            .collect();
        MultTable::new(table)
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        if n < 2 {
            return MultTable::cyclic(1);
        }
        let transposition: Vec<usize> = (0..n).map(|i| if i < 2 { 1 - i } else { i }).collect();
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        MultTable::from_permutations(n, &[transposition, cycle])
    }

    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(bad("dihedral group needs n >= 3"));
        }
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        MultTable::from_permutations(n, &[rot, refl])
    }

    pub fn quaternion() -> Result<Self> {
        // left multiplication by i and j on {1, i, j, k, -1, -i, -j, -k}
        let i = vec![1, 4, 3, 6, 5, 0, 7, 2];
        let j = vec![2, 7, 4, 1, 6, 3, 0, 5];
        MultTable::from_permutations(8, &[i, j])
    }

    pub fn to_json(&self) -> MultTableJson {
        MultTableJson { order: self.order(), table: self.table.clone() }
    }

    pub fn from_json(json: &MultTableJson) -> Result<Self> {
        if json.order != json.table.len() {
            return Err(bad(format!("order {} but {} rows", json.order, json.table.len())));
        }
        MultTable::new(json.table.clone())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: MultTableJson = serde_json::from_str(s)?;
        MultTable::from_json(&json)
    }
}
