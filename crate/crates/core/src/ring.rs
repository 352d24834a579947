//! The fusion ring data model and its axiom checks.
//!
//! A ring of rank `r` is stored as a dense `r×r×r` tensor of structure
//! constants `c[i][j][k]`, the multiplicity of `b_k` in `b_i·b_j`, together
//! with the duality involution `i ↦ i*`. Index 0 is always the unit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::IntMatrix;

/// Structure constants are stored as 32-bit unsigned integers.
pub type Coeff = u32;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FusionRing {
    rank: usize,
    table: Vec<Coeff>,
    duality: Vec<usize>,
    labels: Option<Vec<String>>,
    name: Option<String>,
}

impl FusionRing {
    /// Builds a ring from a nested `table[i][j][k]` tensor.
    ///
    /// Only the shape is checked here; the fusion axioms are checked by
    /// [`validate`]. A malformed shape or an out-of-range duality is a
    /// structural error.
    pub fn new(table: Vec<Vec<Vec<Coeff>>>, duality: Vec<usize>) -> Result<Self, Error> {
        let rank = table.len();
        if rank == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        let mut flat = Vec::with_capacity(rank * rank * rank);
        for (i, plane) in table.iter().enumerate() {
            if plane.len() != rank {
                return Err(Error::Shape(format!(
                    "table[{i}] has {} rows, expected {rank}",
                    plane.len()
                )));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != rank {
                    return Err(Error::Shape(format!(
                        "table[{i}][{j}] has {} entries, expected {rank}",
                        row.len()
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        Self::from_flat(rank, flat, duality)
    }

    /// Builds a ring from a flat tensor indexed by `(i*rank + j)*rank + k`.
    pub fn from_flat(rank: usize, table: Vec<Coeff>, duality: Vec<usize>) -> Result<Self, Error> {
        if rank == 0 {
            return Err(Error::Shape("rank must be positive".into()));
        }
        if table.len() != rank * rank * rank {
            return Err(Error::Shape(format!(
                "table has {} entries, expected {}",
                table.len(),
                rank * rank * rank
            )));
        }
        if duality.len() != rank {
            return Err(Error::Shape(format!(
                "duality has length {}, expected {rank}",
                duality.len()
            )));
        }
        if let Some(&bad) = duality.iter().find(|&&d| d >= rank) {
            return Err(Error::Shape(format!(
                "duality entry {bad} out of range for rank {rank}"
            )));
        }
        Ok(Self {
            rank,
            table,
            duality,
            labels: None,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, Error> {
        if labels.len() != self.rank {
            return Err(Error::Shape(format!(
                "{} labels for rank {}",
                labels.len(),
                self.rank
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("b{i}"),
        }
    }

    pub fn duality(&self) -> &[usize] {
        &self.duality
    }

    pub fn dual(&self, i: usize) -> usize {
        self.duality[i]
    }

    /// `c_{ij}^k`.
    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> Coeff {
        self.table[(i * self.rank + j) * self.rank + k]
    }

    pub fn flat_table(&self) -> &[Coeff] {
        &self.table
    }

    pub fn nested_table(&self) -> Vec<Vec<Vec<Coeff>>> {
        let r = self.rank;
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.c(i, j, k)).collect()).collect())
            .collect()
    }

    /// Coordinates of `b_i·b_j` in the basis.
    pub fn product(&self, i: usize, j: usize) -> &[Coeff] {
        let start = (i * self.rank + j) * self.rank;
        &self.table[start..start + self.rank]
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank;
        (0..r).all(|i| (0..r).all(|j| self.product(i, j) == self.product(j, i)))
    }

    pub fn is_self_dual(&self, i: usize) -> bool {
        self.duality[i] == i
    }

    /// Left multiplication by `b_i`: `(N_i)_{k,j} = c_{ij}^k`, so column `j`
    /// holds the coordinates of `b_i·b_j`.
    pub fn multiplication_matrix(&self, i: usize) -> Result<IntMatrix, Error> {
        if i >= self.rank {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            });
        }
        let r = self.rank;
        let mut m = IntMatrix::zeros(r);
        for j in 0..r {
            for k in 0..r {
                m[(k, j)] = i64::from(self.c(i, j, k));
            }
        }
        Ok(m)
    }

    pub fn multiplication_matrices(&self) -> Vec<IntMatrix> {
        (0..self.rank)
            .map(|i| self.multiplication_matrix(i).expect("index in range"))
            .collect()
    }

    /// Relabels the basis: the new basis element `a` is the old `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, Error> {
        let r = self.rank;
        if perm.len() != r {
            return Err(Error::Shape("permutation length differs from rank".into()));
        }
        let mut inv = vec![usize::MAX; r];
        for (a, &old) in perm.iter().enumerate() {
            if old >= r || inv[old] != usize::MAX {
                return Err(Error::Shape("not a permutation".into()));
            }
            inv[old] = a;
        }
        let mut table = vec![0; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    table[(a * r + b) * r + c] = self.c(perm[a], perm[b], perm[c]);
                }
            }
        }
        let duality = (0..r).map(|a| inv[self.duality[perm[a]]]).collect();
        let mut out = Self::from_flat(r, table, duality)?;
        out.name = self.name.clone();
        out.labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&old| l[old].clone()).collect());
        Ok(out)
    }

    /// The sub-ring spanned by `basis` (which must contain 0 and be closed).
    /// Returns `None` if the span is not closed under products and duality.
    pub fn subring(&self, basis: &[usize]) -> Option<Self> {
        let r = self.rank;
        let m = basis.len();
        let mut pos = vec![usize::MAX; r];
        for (a, &b) in basis.iter().enumerate() {
            pos[b] = a;
        }
        if basis.first() != Some(&0) {
            return None;
        }
        let mut table = vec![0; m * m * m];
        for (a, &i) in basis.iter().enumerate() {
            if pos[self.duality[i]] == usize::MAX {
                return None;
            }
            for (b, &j) in basis.iter().enumerate() {
                for k in 0..r {
                    let v = self.c(i, j, k);
                    if v == 0 {
                        continue;
                    }
                    if pos[k] == usize::MAX {
                        return None;
                    }
                    table[(a * m + b) * m + pos[k]] = v;
                }
            }
        }
        let duality = basis.iter().map(|&i| pos[self.duality[i]]).collect();
        let mut out = Self::from_flat(m, table, duality).ok()?;
        out.labels = self
            .labels
            .as_ref()
            .map(|l| basis.iter().map(|&i| l[i].clone()).collect());
        Some(out)
    }
}

impl fmt::Debug for FusionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionRing")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("duality", &self.duality)
            .finish_non_exhaustive()
    }
}

/// One named axiom check with the first counterexample found, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            match &c.witness {
                Some(w) => writeln!(f, "{verdict:>4}  {:<26} witness {w:?}", c.name)?,
                None => writeln!(f, "{verdict:>4}  {}", c.name)?,
            }
        }
        write!(f, "{}", if self.is_valid() { "VALID" } else { "INVALID" })
    }
}

pub const CHECK_UNIT: &str = "unit";
pub const CHECK_DUALITY_INVOLUTION: &str = "duality-involution";
pub const CHECK_UNIT_COEFFICIENT: &str = "unit-coefficient";
pub const CHECK_CYCLIC: &str = "cyclic-invariance";
pub const CHECK_ASSOCIATIVITY: &str = "associativity";
pub const CHECK_ANTIAUTOMORPHISM: &str = "duality-antiautomorphism";

fn check(name: &str, witness: Option<Vec<usize>>) -> Check {
    Check {
        name: name.to_string(),
        passed: witness.is_none(),
        witness,
    }
}

/// First quadruple `(i, j, k, l)` where `(b_i b_j) b_k` and `b_i (b_j b_k)`
/// disagree in the coefficient of `b_l`.
pub fn associativity_witness(ring: &FusionRing) -> Option<[usize; 4]> {
    let r = ring.rank();
    for i in 0..r {
        for j in 0..r {
            let ij = ring.product(i, j);
            for k in 0..r {
                let jk = ring.product(j, k);
                for l in 0..r {
                    let mut lhs: u128 = 0;
                    let mut rhs: u128 = 0;
                    for m in 0..r {
                        lhs += u128::from(ij[m]) * u128::from(ring.c(m, k, l));
                        rhs += u128::from(jk[m]) * u128::from(ring.c(i, m, l));
                    }
                    if lhs != rhs {
                        return Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    None
}

/// Runs every axiom check; does not stop at the first failure.
pub fn validate(ring: &FusionRing) -> ValidationReport {
    let r = ring.rank();
    let d = ring.duality();

    let unit = (|| {
        for j in 0..r {
            for k in 0..r {
                let delta = Coeff::from(j == k);
                if ring.c(0, j, k) != delta {
                    return Some(vec![0, j, k]);
                }
                if ring.c(j, 0, k) != delta {
                    return Some(vec![j, 0, k]);
                }
            }
        }
        None
    })();

    let involution = if d[0] != 0 {
        Some(vec![0])
    } else {
        (0..r).find(|&i| d[d[i]] != i).map(|i| vec![i])
    };

    let unit_coeff = (|| {
        for i in 0..r {
            for j in 0..r {
                if ring.c(i, j, 0) != Coeff::from(j == d[i]) {
                    return Some(vec![i, j, 0]);
                }
            }
        }
        None
    })();

    let cyclic = (|| {
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let a = ring.c(i, j, d[k]);
                    let b = ring.c(j, k, d[i]);
                    let c = ring.c(k, i, d[j]);
                    if a != b || b != c {
                        return Some(vec![i, j, k]);
                    }
                }
            }
        }
        None
    })();

    let anti = (|| {
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if ring.c(i, j, k) != ring.c(d[j], d[i], d[k]) {
                        return Some(vec![i, j, k]);
                    }
                }
            }
        }
        None
    })();

    let assoc = associativity_witness(ring).map(|w| w.to_vec());

    ValidationReport {
        checks: vec![
            check(CHECK_UNIT, unit),
            check(CHECK_DUALITY_INVOLUTION, involution),
            check(CHECK_UNIT_COEFFICIENT, unit_coeff),
            check(CHECK_CYCLIC, cyclic),
            check(CHECK_ASSOCIATIVITY, assoc),
            check(CHECK_ANTIAUTOMORPHISM, anti),
        ],
    }
}

/// Returns the ring if it validates, otherwise the list of failed checks.
pub fn validated(ring: FusionRing) -> Result<FusionRing, Error> {
    let report = validate(&ring);
    if report.is_valid() {
        Ok(ring)
    } else {
        Err(Error::Invalid(
            report.failures().map(|c| c.name.clone()).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial() -> FusionRing {
        FusionRing::new(vec![vec![vec![1]]], vec![0]).unwrap()
    }

    fn fib() -> FusionRing {
        FusionRing::new(
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
            vec![0, 1],
        )
        .unwrap()
    }

    #[test]
    fn trivial_ring_is_valid() {
        let r = trivial();
        assert!(validate(&r).is_valid());
        assert_eq!(r.multiplication_matrix(0).unwrap(), IntMatrix::identity(1));
    }

    #[test]
    fn shape_errors_are_structural() {
        assert!(matches!(
            FusionRing::new(vec![vec![vec![1, 0]]], vec![0]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            FusionRing::from_flat(2, vec![0; 8], vec![0, 2, 1]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            FusionRing::from_flat(2, vec![0; 8], vec![0, 2]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(FusionRing::new(vec![], vec![]), Err(Error::Shape(_))));
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            trivial().multiplication_matrix(1),
            Err(Error::IndexOutOfRange { index: 1, rank: 1 })
        ));
    }

    #[test]
    fn broken_unit_coefficient_is_reported() {
        let mut t = fib().nested_table();
        t[1][1][0] = 0;
        let r = FusionRing::new(t, vec![0, 1]).unwrap();
        let rep = validate(&r);
        assert!(!rep.is_valid());
        let c = rep.check(CHECK_UNIT_COEFFICIENT).unwrap();
        assert_eq!(c.witness, Some(vec![1, 1, 0]));
        // every check is still present
        assert_eq!(rep.checks.len(), 6);
    }

    #[test]
    fn non_involutive_duality() {
        let r = FusionRing::from_flat(2, vec![1, 0, 0, 1, 0, 1, 1, 1], vec![1, 0]).unwrap();
        let rep = validate(&r);
        assert!(!rep.check(CHECK_DUALITY_INVOLUTION).unwrap().passed);
    }

    #[test]
    fn relabel_roundtrip() {
        let r = fib();
        let same = r.relabel(&[0, 1]).unwrap();
        assert_eq!(r, same);
        assert!(r.relabel(&[0, 0]).is_err());
    }

    #[test]
    fn subring_closure() {
        let r = fib();
        assert!(r.subring(&[0]).is_some());
        assert!(r.subring(&[0, 1]).is_some());
    }
}
