//! Frobenius-Perron dimensions, the pointed part and its group.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::ring::FusionRing;

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 100_000;
const INTEGRAL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionData {
    /// Numeric dimensions (exact values when `exact` is set).
    pub dims: Vec<f64>,
    /// Exact integer dimensions, present iff the ring is integral.
    pub exact: Option<Vec<u64>>,
    pub fpdim_total: f64,
    pub fpdim_total_exact: Option<u64>,
    pub is_integral: bool,
    pub invertibles: Vec<usize>,
    /// Product table of the invertibles, indexing into `invertibles`.
    pub pointed_group: Vec<Vec<usize>>,
}

impl DimensionData {
    /// Integer dimensions; panics if the ring is not integral.
    pub fn integer_dims(&self) -> &[u64] {
        self.exact.as_deref().expect("ring is not integral")
    }
}

/// Basis elements `x` with `x·x* = 1`.
pub fn invertibles(ring: &FusionRing) -> Vec<usize> {
    let r = ring.rank();
    (0..r)
        .filter(|&x| {
            let p = ring.product(x, ring.dual(x));
            p[0] == 1 && p[1..].iter().all(|&v| v == 0)
        })
        .collect()
}

fn sum_matrix(ring: &FusionRing) -> IntMatrix {
    let r = ring.rank();
    let mut m = IntMatrix::zeros(r);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                m[(k, j)] += i64::from(ring.c(i, j, k));
            }
        }
    }
    m
}

fn perron_vector(m: &IntMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..POWER_MAX_ITER {
        let mut w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)] as f64 * v[j]).sum())
            .collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let delta = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = w;
        if delta < POWER_TOL {
            return Ok(v);
        }
    }
    Err(Error::Numerical(format!(
        "power iteration did not converge in {POWER_MAX_ITER} steps"
    )))
}

pub fn fp_dimensions(ring: &FusionRing) -> Result<DimensionData> {
    let r = ring.rank();
    let m = sum_matrix(ring);
    if (0..r).any(|i| (0..r).any(|j| m[(i, j)] <= 0)) {
        return Err(Error::Precondition(
            "sum of multiplication matrices is not strictly positive".into(),
        ));
    }
    let v = perron_vector(&m)?;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let dims: Vec<f64> = (0..r)
        .map(|i| {
            let mut num = 0.0;
            for j in 0..r {
                for k in 0..r {
                    num += v[k] * f64::from(ring.c(i, j, k)) * v[j];
                }
            }
            num / vv
        })
        .collect();

    let exact = if dims.iter().all(|d| (d - d.round()).abs() < INTEGRAL_TOL) {
        let cand: Vec<u64> = dims.iter().map(|d| d.round() as u64).collect();
        certify_integral(ring, &cand).then_some(cand)
    } else {
        None
    };
    let dims = match &exact {
        Some(e) => e.iter().map(|&x| x as f64).collect(),
        None => dims,
    };
    let fpdim_total_exact = exact.as_ref().map(|e| e.iter().map(|x| x * x).sum());
    let fpdim_total = dims.iter().map(|x| x * x).sum();
    let inv = invertibles(ring);
    let pointed_group = group_table(ring, &inv);
    Ok(DimensionData {
        is_integral: exact.is_some(),
        dims,
        exact,
        fpdim_total,
        fpdim_total_exact,
        invertibles: inv,
        pointed_group,
    })
}

/// Checks `Σ_k c_ij^k d_k = d_i d_j` for all `i, j` in exact arithmetic.
pub fn certify_integral(ring: &FusionRing, d: &[u64]) -> bool {
    let r = ring.rank();
    if d.len() != r || d[0] != 1 || d.iter().any(|&x| x == 0) {
        return false;
    }
    (0..r).all(|i| {
        (0..r).all(|j| {
            let lhs: u128 = (0..r)
                .map(|k| u128::from(ring.c(i, j, k)) * u128::from(d[k]))
                .sum();
            lhs == u128::from(d[i]) * u128::from(d[j])
        })
    })
}

fn group_table(ring: &FusionRing, inv: &[usize]) -> Vec<Vec<usize>> {
    let pos: BTreeMap<usize, usize> = inv.iter().enumerate().map(|(a, &g)| (g, a)).collect();
    inv.iter()
        .map(|&g| {
            inv.iter()
                .map(|&h| {
                    let k = ring
                        .product(g, h)
                        .iter()
                        .position(|&v| v == 1)
                        .expect("product of invertibles is a basis element");
                    pos[&k]
                })
                .collect()
        })
        .collect()
}

/// Isomorphism data for a small finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfo {
    pub order: usize,
    pub exponent: usize,
    pub abelian: bool,
    /// Invariant factors `n_1 | n_2 | ...` for abelian groups of order ≤ 64.
    pub invariant_factors: Option<Vec<usize>>,
}

impl GroupInfo {
    pub fn is_cyclic_of_order(&self, n: usize) -> bool {
        self.order == n && self.invariant_factors.as_deref() == Some(&[n][..])
            || (n == 1 && self.order == 1)
    }
}

impl fmt::Display for GroupInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.invariant_factors {
            Some(v) if v.is_empty() => write!(f, "trivial"),
            Some(v) => {
                let parts: Vec<String> = v.iter().map(|n| format!("C{n}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            None => write!(
                f,
                "order {}, exponent {}{}",
                self.order,
                self.exponent,
                if self.abelian { "" } else { ", nonabelian" }
            ),
        }
    }
}

/// Identifies a group from its Cayley table (identity at index 0).
pub fn identify_group(table: &[Vec<usize>]) -> GroupInfo {
    let n = table.len();
    let orders: Vec<usize> = (0..n)
        .map(|g| {
            let mut x = g;
            let mut k = 1;
            while x != 0 {
                x = table[x][g];
                k += 1;
            }
            k
        })
        .collect();
    let exponent = orders.iter().fold(1, |a, &b| num_integer::lcm(a, b));
    let abelian = (0..n).all(|a| (0..n).all(|b| table[a][b] == table[b][a]));
    let invariant_factors = if abelian && n <= 64 {
        let stats = order_statistics(&orders);
        abelian_types(n)
            .into_iter()
            .find(|t| order_statistics(&abelian_orders(t)) == stats)
    } else {
        None
    };
    GroupInfo {
        order: n,
        exponent,
        abelian,
        invariant_factors,
    }
}

fn order_statistics(orders: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &o in orders {
        *m.entry(o).or_insert(0) += 1;
    }
    m
}

/// Element orders of `C_{n_1} × ... × C_{n_k}`.
fn abelian_orders(factors: &[usize]) -> Vec<usize> {
    let mut out = vec![1usize];
    for &m in factors {
        let mut next = Vec::with_capacity(out.len() * m);
        for &o in &out {
            for a in 0..m {
                let oa = m / num_integer::gcd(a, m);
                next.push(num_integer::lcm(o, oa));
            }
        }
        out = next;
    }
    out
}

/// All invariant-factor sequences of abelian groups of order `n`.
fn abelian_types(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![]];
    }
    // Factor n, take a partition of each exponent, and combine the prime
    // power cyclic factors into invariant factors.
    let mut primes = Vec::new();
    let mut m = n;
    let mut q = 2;
    while m > 1 {
        let mut e = 0;
        while m % q == 0 {
            m /= q;
            e += 1;
        }
        if e > 0 {
            primes.push((q, e));
        }
        q += 1;
    }
    let mut types: Vec<Vec<usize>> = vec![vec![]];
    for (q, e) in primes {
        let mut next = Vec::new();
        for t in &types {
            for part in partitions(e, e) {
                // part is nonincreasing; align from the largest factor down
                let len = t.len().max(part.len());
                let mut merged = vec![1usize; len];
                for (idx, v) in t.iter().rev().enumerate() {
                    merged[len - 1 - idx] *= v;
                }
                for (idx, &pe) in part.iter().enumerate() {
                    merged[len - 1 - idx] *= q.pow(pe as u32);
                }
                next.push(merged);
            }
        }
        types = next;
    }
    types
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The pointed part as a fusion subring plus the identified group.
#[derive(Clone, Debug)]
pub struct PointedPart {
    pub basis: Vec<usize>,
    pub ring: FusionRing,
    pub group: GroupInfo,
}

pub fn pointed_part(ring: &FusionRing) -> PointedPart {
    let basis = invertibles(ring);
    let sub = ring
        .subring(&basis)
        .expect("invertibles span a subring");
    let group = identify_group(&group_table(ring, &basis));
    PointedPart {
        basis,
        ring: sub,
        group,
    }
}

/// Invertibles `g` with `g·x = x`, i.e. `c_{g,x}^x = 1`.
pub fn stabilizer(ring: &FusionRing, x: usize) -> Vec<usize> {
    invertibles(ring)
        .into_iter()
        .filter(|&g| ring.c(g, x, x) == 1)
        .collect()
}

/// The same subgroup read off `x·x*`: invertibles with `c_{x,x*}^g = 1`.
pub fn stabilizer_via_dual(ring: &FusionRing, x: usize) -> Vec<usize> {
    let xs = ring.dual(x);
    invertibles(ring)
        .into_iter()
        .filter(|&g| ring.c(x, xs, g) == 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn abelian_type_counts() {
        // number of abelian groups of order n
        for (n, count) in [(1, 1), (4, 2), (8, 3), (12, 2), (16, 5), (32, 7), (36, 4), (64, 11)] {
            assert_eq!(abelian_types(n).len(), count, "order {n}");
        }
        assert!(abelian_types(12).contains(&vec![2, 6]));
        assert!(abelian_types(12).contains(&vec![12]));
    }

    #[test]
    fn identifies_cyclic_and_klein() {
        assert_eq!(identify_group(&cyclic(6)).invariant_factors, Some(vec![6]));
        let klein: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let info = identify_group(&klein);
        assert_eq!(info.invariant_factors, Some(vec![2, 2]));
        assert_eq!(info.exponent, 2);
        assert_eq!(info.to_string(), "C2xC2");
    }

    #[test]
    fn identifies_s3_as_nonabelian() {
        // S3 as permutations of 3 points, composed as tables
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        let info = identify_group(&table);
        assert!(!info.abelian);
        assert_eq!(info.exponent, 6);
        assert_eq!(info.invariant_factors, None);
    }
}
