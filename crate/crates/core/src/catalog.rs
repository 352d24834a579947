//! Concrete rings: group rings, the small character rings, and the examples
//! used throughout the test suite.
//!
//! Displayed fusion matrices are transcribed with the orientation
//! `(N_x)_{k,j} = c_{xj}^k`, i.e. column `j` is the product `x·b_j`. Each
//! builtin is assembled from the transcribed matrices, checked against its
//! expected Frobenius-Perron dimensions and validated on construction.

use crate::dimension::certify_integral;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::ring::{validate, Coeff, FusionRing};

/// Names accepted by [`builtin`]. The D5 family is written `D5family(a,±)`.
pub const BUILTIN_NAMES: &[&str] = &[
    "trivial", "Fib", "oddex", "ZC2", "ZC3", "ZC5", "ZC7", "ZC2x2", "ZC2x2x2", "R_C7xC3",
    "R_C13xC3", "R_C11xC5", "S2", "S4",
];

/// Builds `ZG` from a Cayley table with the identity at index 0.
pub fn group_ring(table: &[Vec<usize>]) -> Result<FusionRing> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty table".into()));
    }
    for (a, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAGroup(format!("row {a} has length {}", row.len())));
        }
        let mut seen = vec![false; n];
        for &v in row {
            if v >= n || seen[v] {
                return Err(Error::NotAGroup(format!("row {a} is not a permutation")));
            }
            seen[v] = true;
        }
    }
    for b in 0..n {
        let mut seen = vec![false; n];
        for row in table {
            if seen[row[b]] {
                return Err(Error::NotAGroup(format!("column {b} is not a permutation")));
            }
            seen[row[b]] = true;
        }
    }
    if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
        return Err(Error::NotAGroup("index 0 is not the identity".into()));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    let inverse: Vec<usize> = (0..n)
        .map(|a| (0..n).find(|&b| table[a][b] == 0).expect("latin square"))
        .collect();
    let mut flat = vec![0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            flat[(a * n + b) * n + table[a][b]] = 1;
        }
    }
    FusionRing::from_flat(n, flat, inverse)
}

pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// `C_2^k` with elements encoded as bit vectors.
pub fn elementary_two_table(k: u32) -> Vec<Vec<usize>> {
    let n = 1usize << k;
    (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect()
}

/// Incremental assembly of a structure-constant tensor from partial data.
struct Assembly {
    rank: usize,
    duality: Vec<usize>,
    entries: Vec<Option<Coeff>>,
    conflict: Option<String>,
}

impl Assembly {
    fn new(duality: Vec<usize>) -> Self {
        let rank = duality.len();
        let mut a = Self {
            rank,
            duality,
            entries: vec![None; rank * rank * rank],
            conflict: None,
        };
        for j in 0..rank {
            for k in 0..rank {
                let v = Coeff::from(j == k);
                a.set(0, j, k, v);
                a.set(j, 0, k, v);
            }
        }
        a
    }

    fn set(&mut self, i: usize, j: usize, k: usize, v: Coeff) {
        let slot = &mut self.entries[(i * self.rank + j) * self.rank + k];
        match *slot {
            Some(old) if old != v => {
                self.conflict
                    .get_or_insert(format!("conflict at c[{i}][{j}][{k}]: {old} vs {v}"));
            }
            _ => *slot = Some(v),
        }
    }

    fn get(&self, i: usize, j: usize, k: usize) -> Option<Coeff> {
        self.entries[(i * self.rank + j) * self.rank + k]
    }

    /// Group structure on the indices `0..table.len()`.
    fn group(&mut self, table: &[Vec<usize>]) {
        let m = table.len();
        for a in 0..m {
            for b in 0..m {
                for k in 0..self.rank {
                    self.set(a, b, k, Coeff::from(table[a][b] == k));
                }
            }
        }
    }

    /// Invertibles `0..m` fix every other basis element on both sides.
    fn trivial_action(&mut self, m: usize) {
        for g in 0..m {
            for x in m..self.rank {
                for k in 0..self.rank {
                    let v = Coeff::from(k == x);
                    self.set(g, x, k, v);
                    self.set(x, g, k, v);
                }
            }
        }
    }

    /// Multiplication matrix of `b_i`, plus its transpose for `b_{i*}`.
    fn rule<R: AsRef<[Coeff]>>(&mut self, i: usize, rows: &[R]) {
        assert_eq!(rows.len(), self.rank, "rule for {i} has wrong size");
        let d = self.duality[i];
        for (k, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), self.rank);
            for (j, &v) in row.iter().enumerate() {
                self.set(i, j, k, v);
                self.set(d, k, j, v);
            }
        }
    }

    /// Transports all known entries along a basis automorphism.
    fn transport(&mut self, perm: &[usize]) {
        let r = self.rank;
        for _ in 0..r {
            for i in 0..r {
                for j in 0..r {
                    for k in 0..r {
                        if let Some(v) = self.get(i, j, k) {
                            self.set(perm[i], perm[j], perm[k], v);
                        }
                    }
                }
            }
        }
    }

    fn commute(&mut self) {
        let r = self.rank;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if let Some(v) = self.get(i, j, k) {
                        self.set(j, i, k, v);
                    }
                }
            }
        }
    }

    fn finish(self, name: &str, dims: &[u64], labels: &[&str]) -> Result<FusionRing> {
        let r = self.rank;
        if let Some(c) = self.conflict {
            return Err(Error::Shape(format!("{name}: {c}")));
        }
        if let Some(pos) = self.entries.iter().position(Option::is_none) {
            return Err(Error::Shape(format!(
                "{name}: entry c[{}][{}][{}] was not determined",
                pos / (r * r),
                (pos / r) % r,
                pos % r
            )));
        }
        let flat = self.entries.into_iter().map(Option::unwrap).collect();
        let mut ring = FusionRing::from_flat(r, flat, self.duality)?.with_name(name);
        if !labels.is_empty() {
            ring = ring.with_labels(labels.iter().map(|s| s.to_string()).collect())?;
        }
        if !certify_integral(&ring, dims) {
            return Err(Error::Invalid(vec![format!(
                "{name}: dimensions {dims:?} do not satisfy the row sums"
            )]));
        }
        check_valid(ring)
    }
}

fn check_valid(ring: FusionRing) -> Result<FusionRing> {
    let rep = validate(&ring);
    if rep.is_valid() {
        Ok(ring)
    } else {
        Err(Error::Invalid(rep.failures().map(|c| c.name.clone()).collect()))
    }
}

fn named_group_ring(name: &str, table: &[Vec<usize>]) -> Result<FusionRing> {
    Ok(group_ring(table)?.with_name(name))
}

pub fn trivial() -> FusionRing {
    FusionRing::new(vec![vec![vec![1]]], vec![0])
        .expect("shape")
        .with_name("trivial")
}

/// The rank-2 ring with `x² = 1 + x`.
pub fn fib() -> FusionRing {
    let r = FusionRing::new(
        vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
        vec![0, 1],
    )
    .expect("shape")
    .with_name("Fib");
    check_valid(r).expect("Fib is valid")
}

/// Commutative rank-4 ring with all basis elements self-dual and dims 1,1,2,3.
pub fn oddex() -> Result<FusionRing> {
    let mut a = Assembly::new(vec![0, 1, 2, 3]);
    a.rule(1, &[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    a.rule(2, &[[0, 0, 1, 0], [0, 0, 1, 0], [1, 1, 1, 0], [0, 0, 0, 2]]);
    a.rule(3, &[[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 2], [1, 1, 2, 1]]);
    a.finish("oddex", &[1, 1, 2, 3], &[])
}

/// The four displayed matrices of [`oddex`], in basis order.
pub fn oddex_matrices() -> [IntMatrix; 4] {
    [
        IntMatrix::identity(4),
        IntMatrix::from_rows(&[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        IntMatrix::from_rows(&[[0, 0, 1, 0], [0, 0, 1, 0], [1, 1, 1, 0], [0, 0, 0, 2]]),
        IntMatrix::from_rows(&[[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 2], [1, 1, 2, 1]]),
    ]
}

/// Character ring of `C7 ⋊ C3`: basis `1, g, g², x, x*`.
pub fn r_c7xc3() -> Result<FusionRing> {
    let mut a = Assembly::new(vec![0, 2, 1, 4, 3]);
    a.group(&cyclic_table(3));
    a.trivial_action(3);
    a.rule(3, &r_c7xc3_x_rows());
    a.finish("R_C7xC3", &[1, 1, 1, 3, 3], &["1", "g", "g2", "x", "x*"])
}

pub fn r_c7xc3_x_rows() -> [[Coeff; 5]; 5] {
    [
        [0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1],
        [1, 1, 1, 1, 1],
        [0, 0, 0, 2, 1],
    ]
}

/// Character ring of `C13 ⋊ C3`: basis `1, g, g², x, x*, y, y*`.
pub fn r_c13xc3() -> Result<FusionRing> {
    let mut a = Assembly::new(vec![0, 2, 1, 4, 3, 6, 5]);
    a.group(&cyclic_table(3));
    a.trivial_action(3);
    let [x, y] = r_c13xc3_rows();
    a.rule(3, &x);
    a.rule(5, &y);
    a.finish(
        "R_C13xC3",
        &[1, 1, 1, 3, 3, 3, 3],
        &["1", "g", "g2", "x", "x*", "y", "y*"],
    )
}

/// Multiplication matrices of `x` and `y` in [`r_c13xc3`].
///
/// Frequently quoted versions of the `y` matrix have its `x` and `x*` rows
/// exchanged; that variant is inconsistent with the `x` matrix under every
/// relabeling, so the rows here follow the group's character ring.
pub fn r_c13xc3_rows() -> [[[Coeff; 7]; 7]; 2] {
    [
        [
            [0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0, 0],
            [1, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 2, 0, 1, 0],
            [0, 0, 0, 0, 1, 1, 1],
            [0, 0, 0, 1, 1, 0, 1],
        ],
        [
            [0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 1, 0, 1, 1],
            [0, 0, 0, 1, 1, 0, 1],
            [1, 1, 1, 1, 1, 0, 0],
            [0, 0, 0, 0, 1, 2, 0],
        ],
    ]
}

/// Character ring of `C11 ⋊ C5`: basis `1, g, g², g³, g⁴, x, x*`.
pub fn r_c11xc5() -> Result<FusionRing> {
    let mut a = Assembly::new(vec![0, 4, 3, 2, 1, 6, 5]);
    a.group(&cyclic_table(5));
    a.trivial_action(5);
    a.rule(5, &r_c11xc5_x_rows());
    a.finish(
        "R_C11xC5",
        &[1, 1, 1, 1, 1, 5, 5],
        &["1", "g", "g2", "g3", "g4", "x", "x*"],
    )
}

pub fn r_c11xc5_x_rows() -> [[Coeff; 7]; 7] {
    [
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1],
        [1, 1, 1, 1, 1, 2, 2],
        [0, 0, 0, 0, 0, 3, 2],
    ]
}

/// Self-dual rings with pointed part `C2×C2` and an order-3 symmetry
/// rotating both the invertibles and the three noninvertibles.
fn s_ring(name: &str, d: u64, x_rows: [[Coeff; 7]; 7]) -> Result<FusionRing> {
    let mut a = Assembly::new((0..7).collect());
    a.group(&elementary_two_table(2));
    a.trivial_action(4);
    a.rule(4, &x_rows);
    // g1 → g2 → g3 and x → φx → φ²x
    a.transport(&[0, 2, 3, 1, 5, 6, 4]);
    a.commute();
    a.finish(
        name,
        &[1, 1, 1, 1, d, d, d],
        &["1", "g1", "g2", "g3", "x", "phi(x)", "phi2(x)"],
    )
}

pub fn s2_x_rows() -> [[Coeff; 7]; 7] {
    [
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [1, 1, 1, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 2],
        [0, 0, 0, 0, 0, 2, 0],
    ]
}

pub fn s4_x_rows() -> [[Coeff; 7]; 7] {
    [
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [1, 1, 1, 1, 0, 1, 2],
        [0, 0, 0, 0, 1, 2, 1],
        [0, 0, 0, 0, 2, 1, 1],
    ]
}

pub fn s2() -> Result<FusionRing> {
    s_ring("S2", 2, s2_x_rows())
}

pub fn s4() -> Result<FusionRing> {
    s_ring("S4", 4, s4_x_rows())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Rank-4 commutative self-dual family; `a ± 1` must be nonnegative.
pub fn d5_family(a: u32, sign: Sign) -> Result<FusionRing> {
    let b = match sign {
        Sign::Plus => a + 1,
        Sign::Minus => a.checked_sub(1).ok_or_else(|| {
            Error::Precondition("D5family needs a - 1 >= 0 for the minus sign".into())
        })?,
    };
    let mut asm = Assembly::new(vec![0, 1, 2, 3]);
    asm.rule(1, &[[0, 1, 0, 0], [1, a, b, b], [0, b, b, a], [0, b, a, a]]);
    asm.rule(2, &[[0, 0, 1, 0], [0, b, b, a], [1, b, a, b], [0, a, b, a]]);
    asm.rule(3, &[[0, 0, 0, 1], [0, b, a, a], [0, a, b, a], [1, a, a, a]]);
    let name = format!("D5family({a},{})", sign.as_char());
    if let Some(c) = asm.conflict {
        return Err(Error::Shape(format!("{name}: {c}")));
    }
    if asm.entries.iter().any(Option::is_none) {
        return Err(Error::Shape(format!("{name}: incomplete table")));
    }
    let flat = asm.entries.into_iter().map(Option::unwrap).collect();
    check_valid(FusionRing::from_flat(4, flat, asm.duality)?.with_name(name))
}

/// The 8×8 fusion matrix of a basis element that does not commute with its
/// dual (from an extended Haagerup fusion ring).
pub fn ehaag_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 1, 1, 0, 0, 0],
        [0, 0, 1, 1, 1, 1, 0, 1],
        [0, 1, 0, 1, 1, 1, 1, 0],
        [0, 0, 1, 1, 1, 1, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 1, 0, 0],
    ])
}

/// The two displayed matrices for `x` and `y` of the rank-7 dimension type
/// `1,1,1,3,3,7,7` with basis `1, g, g², x, x*, y, y*`.
pub fn f119_rows() -> [[[Coeff; 7]; 7]; 2] {
    [
        [
            [0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0, 0],
            [1, 1, 1, 1, 1, 0, 0],
            [0, 0, 0, 2, 1, 0, 0],
            [0, 0, 0, 0, 0, 3, 0],
            [0, 0, 0, 0, 0, 0, 3],
        ],
        [
            [0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 0, 0, 3],
            [0, 0, 0, 0, 0, 0, 3],
            [1, 1, 1, 3, 3, 2, 2],
            [0, 0, 0, 0, 0, 5, 2],
        ],
    ]
}

/// The rank-7 tensor assembled from [`f119_rows`], their transposes and the
/// invertibles acting trivially.
pub fn f119_tensor() -> FusionRing {
    let mut a = Assembly::new(vec![0, 2, 1, 4, 3, 6, 5]);
    a.group(&cyclic_table(3));
    a.trivial_action(3);
    let [x, y] = f119_rows();
    a.rule(3, &x);
    a.rule(5, &y);
    let flat = a.entries.into_iter().map(|v| v.expect("fully determined")).collect();
    FusionRing::from_flat(7, flat, a.duality)
        .expect("shape")
        .with_name("F119")
        .with_labels(
            ["1", "g", "g2", "x", "x*", "y", "y*"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
        .expect("labels")
}

/// Looks up a builtin by name.
pub fn builtin(name: &str) -> Result<FusionRing> {
    let cyc = |n: usize, label: &str| named_group_ring(label, &cyclic_table(n));
    match name {
        "trivial" => Ok(trivial()),
        "Fib" => Ok(fib()),
        "oddex" => oddex(),
        "ZC2" => cyc(2, "ZC2"),
        "ZC3" => cyc(3, "ZC3"),
        "ZC5" => cyc(5, "ZC5"),
        "ZC7" => cyc(7, "ZC7"),
        "ZC2x2" => named_group_ring("ZC2x2", &elementary_two_table(2)),
        "ZC2x2x2" => named_group_ring("ZC2x2x2", &elementary_two_table(3)),
        "R_C7xC3" => r_c7xc3(),
        "R_C13xC3" => r_c13xc3(),
        "R_C11xC5" => r_c11xc5(),
        "S2" => s2(),
        "S4" => s4(),
        other => parse_d5(other).ok_or_else(|| Error::UnknownBuiltin(other.to_string()))?,
    }
}

fn parse_d5(name: &str) -> Option<Result<FusionRing>> {
    let inner = name.strip_prefix("D5family(")?.strip_suffix(')')?;
    let (a, s) = inner.split_once(',')?;
    let a: u32 = a.trim().parse().ok()?;
    let sign = match s.trim() {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        _ => return None,
    };
    Some(d5_family(a, sign))
}

/// One row of the classification table: a ring with a fixed-point-free
/// automorphism of prime order and integer formal codegrees.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub name: &'static str,
    pub rank: usize,
    pub primes: &'static [usize],
    pub fpdim: u64,
    pub dims: &'static [u64],
}

/// The expected rings of rank below 9.
pub const SMALL_RANK_TABLE: &[TableRow] = &[
    TableRow { name: "ZC3", rank: 3, primes: &[2], fpdim: 3, dims: &[1, 1, 1] },
    TableRow { name: "ZC2x2", rank: 4, primes: &[3], fpdim: 4, dims: &[1, 1, 1, 1] },
    TableRow { name: "ZC5", rank: 5, primes: &[2], fpdim: 5, dims: &[1, 1, 1, 1, 1] },
    TableRow { name: "R_C7xC3", rank: 5, primes: &[2], fpdim: 21, dims: &[1, 1, 1, 3, 3] },
    TableRow { name: "ZC7", rank: 7, primes: &[2, 3], fpdim: 7, dims: &[1, 1, 1, 1, 1, 1, 1] },
    TableRow { name: "S2", rank: 7, primes: &[3], fpdim: 16, dims: &[1, 1, 1, 1, 2, 2, 2] },
    TableRow { name: "R_C13xC3", rank: 7, primes: &[2], fpdim: 39, dims: &[1, 1, 1, 3, 3, 3, 3] },
    TableRow { name: "S4", rank: 7, primes: &[3], fpdim: 52, dims: &[1, 1, 1, 1, 4, 4, 4] },
    TableRow { name: "R_C11xC5", rank: 7, primes: &[2], fpdim: 55, dims: &[1, 1, 1, 1, 1, 5, 5] },
    TableRow { name: "ZC2x2x2", rank: 8, primes: &[7], fpdim: 8, dims: &[1, 1, 1, 1, 1, 1, 1, 1] },
];

/// Every builtin ring (the D5 family at `a = 0, +` and `a = 1, -`).
pub fn all_builtins() -> Vec<FusionRing> {
    let mut v: Vec<FusionRing> = BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).expect("builtins are valid"))
        .collect();
    v.push(d5_family(0, Sign::Plus).expect("valid"));
    v.push(d5_family(1, Sign::Minus).expect("valid"));
    v
}
