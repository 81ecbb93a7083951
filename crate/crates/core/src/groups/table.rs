use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-8;
const INTEGRAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub size: u64,
    pub order: u64,
    /// `power_map[k]` is the class of `g^k`, for `k` in `0..order`.
    pub power_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub dim: u64,
    pub values: Vec<Complex64>,
}

/// Validated character table; class 0 is the identity and character 0 is trivial.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    name: Option<String>,
    classes: Vec<ClassInfo>,
    chars: Vec<Character>,
    order: u64,
    /// Present when every value is a rational (hence integer) character value.
    integral: Option<Vec<Vec<BigInt>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Pair([f64; 2]),
    Real(f64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharJson {
    pub dim: u64,
    pub values: Vec<ValueJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub classes: Vec<ClassInfo>,
    pub chars: Vec<CharJson>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::TableInconsistency(msg.into())
}

impl CharacterTable {
    pub fn new(classes: Vec<ClassInfo>, chars: Vec<Character>) -> Result<Self> {
        let c = classes.len();
        if c == 0 {
            return Err(bad("no classes"));
        }
        if chars.len() != c {
            return Err(bad(format!("{} characters for {c} classes", chars.len())));
        }
        let id = &classes[0];
        if id.size != 1 || id.order != 1 || id.power_map != [0] {
            return Err(bad("class 0 must be the identity (size 1, order 1, power map [0])"));
        }
        let mut order = 0u64;
        for (i, cl) in classes.iter().enumerate() {
            if cl.size == 0 || cl.order == 0 {
                return Err(bad(format!("class {i}: size and order must be positive")));
            }
            order = order.checked_add(cl.size).ok_or_else(|| bad("group order overflows"))?;
            if cl.power_map.len() as u64 != cl.order {
                return Err(bad(format!("class {i}: power map has {} entries, order {}", cl.power_map.len(), cl.order)));
            }
            if cl.power_map[0] != 0 || (cl.order > 1 && cl.power_map[1] != i) {
                return Err(bad(format!("class {i}: power map must start at identity then itself")));
            }
            for (k, &pk) in cl.power_map.iter().enumerate() {
                if pk >= c {
                    return Err(bad(format!("class {i}: power map entry {pk} out of range")));
                }
                let expect = cl.order / cl.order.gcd(&(k as u64));
                if classes[pk].order != expect {
                    return Err(bad(format!("class {i}: g^{k} lies in class {pk} of order {}, expected {expect}", classes[pk].order)));
                }
            }
        }
        for (i, cl) in classes.iter().enumerate() {
            if !order.is_multiple_of(cl.size) || !order.is_multiple_of(cl.order) {
                return Err(bad(format!("class {i}: size/order must divide |G| = {order}")));
            }
        }
        let mut sum_sq = 0u128;
        for (j, ch) in chars.iter().enumerate() {
            if ch.values.len() != c {
                return Err(bad(format!("character {j}: {} values for {c} classes", ch.values.len())));
            }
            if (ch.values[0] - Complex64::new(ch.dim as f64, 0.0)).norm() > ORTHO_TOL {
                return Err(bad(format!("character {j}: value at identity differs from dim {}", ch.dim)));
            }
            sum_sq += (ch.dim as u128) * (ch.dim as u128);
        }
        if sum_sq != order as u128 {
            return Err(bad(format!("sum of squared dimensions {sum_sq} != |G| = {order}")));
        }
        if chars[0].values.iter().any(|v| (v - Complex64::new(1.0, 0.0)).norm() > ORTHO_TOL) {
            return Err(bad("character 0 must be trivial"));
        }
        // column orthogonality: sum_chi chi(g_a) conj(chi(g_b)) = delta_ab |G| / |class a|
        for a in 0..c {
            for b in a..c {
                let s: Complex64 = chars.iter().map(|ch| ch.values[a] * ch.values[b].conj()).sum();
                let expect = if a == b { order as f64 / classes[a].size as f64 } else { 0.0 };
                let scale = expect.max(1.0);
                if (s - Complex64::new(expect, 0.0)).norm() > ORTHO_TOL * scale {
                    return Err(bad(format!("column orthogonality fails for classes {a}, {b}: {s}")));
                }
            }
        }
        let integral = chars
            .iter()
            .map(|ch| {
                ch.values
                    .iter()
                    .map(|v| {
                        let r = v.re.round();
                        (v.im.abs() <= INTEGRAL_TOL && (v.re - r).abs() <= INTEGRAL_TOL).then(|| BigInt::from(r as i64))
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>();
        Ok(CharacterTable { name: None, classes, chars, order, integral })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn chars(&self) -> &[Character] {
        &self.chars
    }

    pub fn is_integral(&self) -> bool {
        self.integral.is_some()
    }

    pub(crate) fn integral_values(&self) -> Option<&Vec<Vec<BigInt>>> {
        self.integral.as_ref()
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            name: self.name.clone(),
            classes: self.classes.clone(),
            chars: self
                .chars
                .iter()
                .map(|ch| CharJson {
                    dim: ch.dim,
                    values: ch.values.iter().map(|v| ValueJson::Pair([v.re, v.im])).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &TableJson) -> Result<Self> {
        let chars = json
            .chars
            .iter()
            .map(|ch| Character {
                dim: ch.dim,
                values: ch
                    .values
                    .iter()
                    .map(|v| match *v {
                        ValueJson::Pair([re, im]) => Complex64::new(re, im),
                        ValueJson::Real(re) => Complex64::new(re, 0.0),
                    })
                    .collect(),
            })
            .collect();
        let t = CharacterTable::new(json.classes.clone(), chars)?;
        Ok(match &json.name {
            Some(n) => t.with_name(n.clone()),
            None => t,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: TableJson = serde_json::from_str(s)?;
        CharacterTable::from_json(&json)
    }
}

fn int_table(classes: &[(u64, u64, &[usize])], values: &[&[i64]]) -> CharacterTable {
    let classes = classes
        .iter()
        .map(|&(size, order, pm)| ClassInfo { size, order, power_map: pm.to_vec() })
        .collect();
    let chars = values
        .iter()
        .map(|row| Character {
            dim: row[0] as u64,
            values: row.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect(),
        })
        .collect();
    CharacterTable::new(classes, chars).expect("builtin table is valid")
}

/// Characters of a finite abelian group given by its cyclic factors.
/// Elements (and characters) are indexed in mixed radix, first factor fastest.
pub fn table_for_abelian(factors: &[u64]) -> Result<CharacterTable> {
    if factors.is_empty() {
        return Err(Error::InvalidParameter("need at least one cyclic factor".into()));
    }
    if factors.iter().any(|&n| n < 2) {
        return Err(Error::InvalidParameter("cyclic factors must be at least 2".into()));
    }
    let order = factors
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n))
        .filter(|&n| n <= 4096)
        .ok_or_else(|| Error::InvalidParameter("abelian group order limited to 4096".into()))?;
    let digits = |mut x: u64| -> Vec<u64> {
        factors
            .iter()
            .map(|&n| {
                let d = x % n;
                x /= n;
                d
            })
            .collect()
    };
    let index = |d: &[u64]| -> usize {
        d.iter()
            .zip(factors)
            .rev()
            .fold(0u64, |acc, (&v, &n)| acc * n + v) as usize
    };
    let elements: Vec<Vec<u64>> = (0..order).map(digits).collect();
    let classes = elements
        .iter()
        .map(|a| {
            let ord = a
                .iter()
                .zip(factors)
                .fold(1u64, |acc, (&v, &n)| acc.lcm(&(n / n.gcd(&v))));
            let power_map = (0..ord)
                .map(|k| {
                    let p: Vec<u64> = a.iter().zip(factors).map(|(&v, &n)| (v * k) % n).collect();
                    index(&p)
                })
                .collect();
            ClassInfo { size: 1, order: ord, power_map }
        })
        .collect();
    let lcm = factors.iter().fold(1u64, |acc, n| acc.lcm(n));
    let chars = elements
        .iter()
        .map(|b| Character {
            dim: 1,
            values: elements
                .iter()
                .map(|a| {
                    // phase as a multiple of 1/lcm keeps the exact cases (+-1) exact
                    let num = a
                        .iter()
                        .zip(b)
                        .zip(factors)
                        .fold(0u64, |acc, ((&x, &y), &n)| (acc + x * y * (lcm / n)) % lcm);
                    root_of_unity(num, lcm)
                })
                .collect(),
        })
        .collect();
    let name = factors.iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join("x");
    Ok(CharacterTable::new(classes, chars)?.with_name(name))
}

fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let g = num.gcd(&den);
    match (num / g, den / g) {
        (0, _) => Complex64::new(1.0, 0.0),
        (1, 2) => Complex64::new(-1.0, 0.0),
        (1, 4) => Complex64::new(0.0, 1.0),
        (3, 4) => Complex64::new(0.0, -1.0),
        (n, d) => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * n as f64 / d as f64),
    }
}

pub fn symmetric3() -> CharacterTable {
    int_table(
        &[(1, 1, &[0]), (3, 2, &[0, 1]), (2, 3, &[0, 2, 2])],
        &[&[1, 1, 1], &[1, -1, 1], &[2, 0, -1]],
    )
    .with_name("S3")
}

pub fn quaternion8() -> CharacterTable {
    int_table(
        &[
            (1, 1, &[0]),
            (1, 2, &[0, 1]),
            (2, 4, &[0, 2, 1, 2]),
            (2, 4, &[0, 3, 1, 3]),
            (2, 4, &[0, 4, 1, 4]),
        ],
        &[
            &[1, 1, 1, 1, 1],
            &[1, 1, 1, -1, -1],
            &[1, 1, -1, 1, -1],
            &[1, 1, -1, -1, 1],
            &[2, -2, 0, 0, 0],
        ],
    )
    .with_name("Q8")
}

pub fn dihedral8() -> CharacterTable {
    int_table(
        &[
            (1, 1, &[0]),
            (1, 2, &[0, 1]),
            (2, 4, &[0, 2, 1, 2]),
            (2, 2, &[0, 3]),
            (2, 2, &[0, 4]),
        ],
        &[
            &[1, 1, 1, 1, 1],
            &[1, 1, 1, -1, -1],
            &[1, 1, -1, 1, -1],
            &[1, 1, -1, -1, 1],
            &[2, -2, 0, 0, 0],
        ],
    )
    .with_name("D4")
}

pub fn alternating4() -> CharacterTable {
    let w = root_of_unity(1, 3);
    let one = Complex64::new(1.0, 0.0);
    let classes = vec![
        ClassInfo { size: 1, order: 1, power_map: vec![0] },
        ClassInfo { size: 3, order: 2, power_map: vec![0, 1] },
        ClassInfo { size: 4, order: 3, power_map: vec![0, 2, 3] },
        ClassInfo { size: 4, order: 3, power_map: vec![0, 3, 2] },
    ];
    let c = |v: [Complex64; 4], dim| Character { dim, values: v.to_vec() };
    let chars = vec![
        c([one; 4], 1),
        c([one, one, w, w * w], 1),
        c([one, one, w * w, w], 1),
        c([Complex64::new(3.0, 0.0), -one, 0.0 * one, 0.0 * one], 3),
    ];
    CharacterTable::new(classes, chars).expect("builtin table is valid").with_name("A4")
}

pub fn symmetric4() -> CharacterTable {
    int_table(
        &[
            (1, 1, &[0]),
            (6, 2, &[0, 1]),
            (3, 2, &[0, 2]),
            (8, 3, &[0, 3, 3]),
            (6, 4, &[0, 4, 2, 4]),
        ],
        &[
            &[1, 1, 1, 1, 1],
            &[1, -1, 1, 1, -1],
            &[2, 0, 2, -1, 0],
            &[3, 1, -1, 0, -1],
            &[3, -1, -1, 0, 1],
        ],
    )
    .with_name("S4")
}

/// Built-in tables by name (`S3`, `Q8`, `D4`, `A4`, `S4`, or `Z<n>`).
pub fn builtin(name: &str) -> Result<CharacterTable> {
    match name.to_ascii_uppercase().as_str() {
        "S3" => Ok(symmetric3()),
        "Q8" => Ok(quaternion8()),
        "D4" | "D8" => Ok(dihedral8()),
        "A4" => Ok(alternating4()),
        "S4" => Ok(symmetric4()),
        other => match other.strip_prefix('Z').and_then(|n| n.parse::<u64>().ok()) {
            Some(n) => table_for_abelian(&[n]),
            None => Err(Error::InvalidParameter(format!("unknown builtin group {name:?}"))),
        },
    }
}
