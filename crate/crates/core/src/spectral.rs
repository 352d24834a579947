//! Formal codegrees (exact) and character tables (numeric).

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::poly::Poly;
use crate::ring::FusionRing;

/// Seed for the random linear combination used by [`character_table`].
pub const DEFAULT_SEED: u64 = 0x00f0_5e0f_0f0f_2023;
pub const SEED_ENV: &str = "FUSION_FORGE_SEED";

const GAP_TOL: f64 = 1e-6;
const MAX_ATTEMPTS: u64 = 10;
const RESIDUAL_TOL: f64 = 1e-8;

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs().iter().map(BigInt::to_string).collect();
        v.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodegreeProfile {
    /// `det(tI - N_α)`, ascending coefficients.
    pub charpoly: Poly,
    /// Integer roots with multiplicities, ascending.
    pub integer_roots: Vec<(u64, usize)>,
    /// What is left after removing the integer roots.
    pub residual: Poly,
    pub all_integer: bool,
}

impl CodegreeProfile {
    pub fn multiplicity(&self, f: u64) -> usize {
        self.integer_roots
            .iter()
            .find(|&&(g, _)| g == f)
            .map_or(0, |&(_, m)| m)
    }

    /// Codegrees as a map value → multiplicity.
    pub fn as_map(&self) -> BTreeMap<u64, usize> {
        self.integer_roots.iter().copied().collect()
    }

    /// Codegrees listed with repetition, descending.
    pub fn expanded(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .integer_roots
            .iter()
            .flat_map(|&(f, m)| std::iter::repeat_n(f, m))
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn distinct(&self) -> usize {
        self.integer_roots.len()
    }
}

/// Matrix of multiplication by `α = Σ_b b·b*`.
pub fn alpha_matrix(ring: &FusionRing) -> IntMatrix {
    let r = ring.rank();
    let mut acc = IntMatrix::zeros(r);
    for n in ring.multiplication_matrices() {
        acc = &acc + &(&n * &n.transpose());
    }
    acc
}

pub fn codegrees(ring: &FusionRing) -> CodegreeProfile {
    let a = alpha_matrix(ring);
    let charpoly = Poly::charpoly(&a);
    // Every eigenvalue is bounded by the largest row sum of the nonnegative
    // matrix N_α.
    let bound = a
        .rows()
        .iter()
        .map(|r| r.iter().sum::<i64>())
        .max()
        .unwrap_or(0)
        .max(1) as u64;
    let (roots, residual) = charpoly.integer_roots(bound);
    let all_integer = residual.degree() == 0;
    CodegreeProfile {
        integer_roots: roots
            .into_iter()
            .map(|(f, m)| (u64::try_from(f).expect("codegrees are positive"), m))
            .collect(),
        charpoly,
        residual,
        all_integer,
    }
}

/// Checks `Σ mult(f)/f = 1` exactly, valid for commutative rings where every
/// irreducible representation is one-dimensional.
pub fn check_global_constraint(profile: &CodegreeProfile, rank: usize) -> Result<bool> {
    if !profile.all_integer {
        return Err(Error::Precondition(
            "codegree profile has non-integer roots".into(),
        ));
    }
    let count: usize = profile.integer_roots.iter().map(|&(_, m)| m).sum();
    if count != rank {
        return Ok(false);
    }
    let sum = profile
        .integer_roots
        .iter()
        .fold(BigRational::zero(), |acc, &(f, m)| {
            acc + BigRational::new(BigInt::from(m), BigInt::from(f))
        });
    Ok(sum.is_one())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterTable {
    /// `rows[c][j] = χ_c(b_j)`; row 0 is the Frobenius-Perron character.
    #[serde(serialize_with = "serialize_rows")]
    pub rows: Vec<Vec<Complex64>>,
    /// `Σ_x |χ(x)|²` per row.
    pub codegrees: Vec<f64>,
    /// Seed that produced the table, after any rerolls.
    pub seed: u64,
}

fn serialize_rows<S: Serializer>(
    rows: &[Vec<Complex64>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<[f64; 2]>> = rows
        .iter()
        .map(|r| r.iter().map(|z| [round_sig(z.re), round_sig(z.im)]).collect())
        .collect();
    v.serialize(s)
}

/// Rounds to 12 significant digits; tiny values become 0.
pub fn round_sig(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

impl CharacterTable {
    /// Largest `|Σ_x χ(x)·ψ(x*)|` over distinct rows.
    pub fn orthogonality_defect(&self, ring: &FusionRing) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, ra) in self.rows.iter().enumerate() {
            for rb in &self.rows[a + 1..] {
                let s: Complex64 = (0..ring.rank()).map(|x| ra[x] * rb[ring.dual(x)]).sum();
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// Largest `|χ(b_i)χ(b_j) - Σ_k c_ij^k χ(b_k)|`.
    pub fn homomorphism_defect(&self, ring: &FusionRing) -> f64 {
        max_residual(ring, &self.rows)
    }
}

fn max_residual(ring: &FusionRing, rows: &[Vec<Complex64>]) -> f64 {
    let r = ring.rank();
    let mut worst: f64 = 0.0;
    for row in rows {
        for i in 0..r {
            for j in 0..r {
                let lhs = row[i] * row[j];
                let rhs: Complex64 = (0..r)
                    .map(|k| row[k] * f64::from(ring.c(i, j, k)))
                    .sum();
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    worst
}

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Character table with the seed from the environment (or the default).
pub fn character_table(ring: &FusionRing) -> Result<CharacterTable> {
    character_table_with_seed(ring, seed_from_env())
}

pub fn character_table_with_seed(ring: &FusionRing, seed: u64) -> Result<CharacterTable> {
    if !ring.is_commutative() {
        return Err(Error::Precondition(
            "character tables are only computed for commutative rings".into(),
        ));
    }
    let r = ring.rank();
    let mats: Vec<DMatrix<f64>> = ring
        .multiplication_matrices()
        .iter()
        .map(|m| DMatrix::from_fn(r, r, |a, b| m[(a, b)] as f64))
        .collect();
    for attempt in 0..MAX_ATTEMPTS {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut a = DMatrix::<f64>::zeros(r, r);
        for m in &mats {
            a += m * rng.gen::<f64>();
        }
        let eig = a.clone().complex_eigenvalues();
        let gap = min_gap(eig.as_slice()).min(1.0);
        if gap < GAP_TOL {
            continue;
        }
        let start = DVector::<Complex64>::from_fn(r, |_, _| Complex64::new(rng.gen(), rng.gen()));
        let Some(rows) = rows_from_eigenvalues(ring, &a, eig.as_slice(), gap, &start) else {
            continue;
        };
        if max_residual(ring, &rows) > RESIDUAL_TOL {
            continue;
        }
        return Ok(finish(ring, rows, s));
    }
    Err(Error::Numerical(format!(
        "no separating combination found in {MAX_ATTEMPTS} attempts"
    )))
}

fn min_gap(ev: &[Complex<f64>]) -> f64 {
    let mut g = f64::INFINITY;
    for (a, x) in ev.iter().enumerate() {
        for y in &ev[a + 1..] {
            g = g.min((x - y).norm());
        }
    }
    g
}

/// Recovers each character from an eigenvector `u` of the combination, where
/// `u_k = χ(b_{k*})`.
fn rows_from_eigenvalues(
    ring: &FusionRing,
    a: &DMatrix<f64>,
    eig: &[Complex<f64>],
    gap: f64,
    start: &DVector<Complex64>,
) -> Option<Vec<Vec<Complex64>>> {
    let r = ring.rank();
    let ac: DMatrix<Complex64> = a.map(|x| Complex64::new(x, 0.0));
    let mut rows = Vec::with_capacity(r);
    for &lambda in eig {
        let shift = lambda + Complex64::new(gap * 1e-7, gap * 1e-7);
        let b = &ac - DMatrix::<Complex64>::identity(r, r) * shift;
        let lu = b.lu();
        let mut u = start.clone();
        for _ in 0..3 {
            u = lu.solve(&u)?;
            let n = u.norm();
            if !n.is_finite() || n == 0.0 {
                return None;
            }
            u /= Complex64::new(n, 0.0);
        }
        let u0 = u[0];
        if u0.norm() < 1e-12 {
            return None;
        }
        let u = u / u0;
        rows.push((0..r).map(|j| u[ring.dual(j)]).collect());
    }
    Some(rows)
}

fn finish(ring: &FusionRing, rows: Vec<Vec<Complex64>>, seed: u64) -> CharacterTable {
    let r = ring.rank();
    let codeg = |row: &[Complex64]| -> f64 { row.iter().map(|z| z.norm_sqr()).sum() };
    let is_fp = |row: &[Complex64]| row.iter().all(|z| z.im.abs() < 1e-9 && z.re > 1e-9);
    let mut rows: Vec<(bool, f64, Vec<Complex64>)> = rows
        .into_iter()
        .map(|row| {
            let row: Vec<Complex64> = row
                .into_iter()
                .map(|z| {
                    // clean negligible parts so that sorting is stable
                    Complex64::new(
                        if z.re.abs() < 1e-12 { 0.0 } else { z.re },
                        if z.im.abs() < 1e-12 { 0.0 } else { z.im },
                    )
                })
                .collect();
            (is_fp(&row), codeg(&row), row)
        })
        .collect();
    rows.sort_by(|x, y| {
        y.0.cmp(&x.0)
            .then_with(|| cmp_rounded(y.1, x.1))
            .then_with(|| {
                for j in 0..r {
                    let o = cmp_rounded(x.2[j].re, y.2[j].re)
                        .then_with(|| cmp_rounded(x.2[j].im, y.2[j].im));
                    if o.is_ne() {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
    });
    CharacterTable {
        codegrees: rows.iter().map(|x| x.1).collect(),
        rows: rows.into_iter().map(|x| x.2).collect(),
        seed,
    }
}

fn cmp_rounded(a: f64, b: f64) -> std::cmp::Ordering {
    let q = |x: f64| (x * 1e8).round().to_i64().unwrap_or(0);
    q(a).cmp(&q(b))
}
