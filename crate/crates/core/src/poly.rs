//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Coefficients in ascending order: `coeffs[i]` multiplies `t^i`.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::new(vec![BigInt::one()])
    }

    /// `t - r`.
    pub fn linear(r: i64) -> Self {
        Self::from_i64(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Exact division by `t - r`, or `None` if `r` is not a root.
    pub fn deflate(&self, r: i64) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let r = BigInt::from(r);
        let n = self.degree();
        let mut q = vec![BigInt::zero(); n];
        let mut acc = BigInt::zero();
        for i in (0..=n).rev() {
            acc = acc * &r + &self.coeffs[i];
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        acc.is_zero().then(|| Self::new(q))
    }

    /// Integer roots with multiplicity, searched in `[-bound, bound]` among
    /// divisors of the lowest nonzero coefficient. Returns the roots in
    /// increasing order and the deflated residual.
    pub fn integer_roots(&self, bound: u64) -> (Vec<(i64, usize)>, Poly) {
        let mut rest = self.clone();
        let mut roots = Vec::new();
        if rest.is_zero() {
            return (roots, rest);
        }
        let mut zero_mult = 0;
        while rest.coeffs.first().is_some_and(Zero::is_zero) {
            rest.coeffs.remove(0);
            zero_mult += 1;
        }
        let c0 = rest.coeffs[0].clone();
        let bound = i64::try_from(bound).unwrap_or(i64::MAX);
        let mut cands: Vec<i64> = Vec::new();
        for t in 1..=bound {
            if (&c0 % BigInt::from(t)).is_zero() {
                cands.push(-t);
                cands.push(t);
            }
        }
        cands.sort_unstable();
        for t in cands {
            let mut m = 0;
            while let Some(q) = rest.deflate(t) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                roots.push((t, m));
            }
        }
        if zero_mult > 0 {
            roots.push((0, zero_mult));
            roots.sort_unstable();
        }
        (roots, rest)
    }

    /// Characteristic polynomial `det(tI - A)` via the fraction-free
    /// Faddeev-LeVerrier recurrence.
    pub fn charpoly(a: &IntMatrix) -> Self {
        let n = a.dim();
        let big: Vec<BigInt> = a.rows().into_iter().flatten().map(BigInt::from).collect();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = vec![BigInt::zero(); n * n];
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I
            let mut next = mat_mul(&big, &m, n);
            for i in 0..n {
                next[i * n + i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = mat_mul(&big, &m, n);
            let tr: BigInt = (0..n).map(|i| &am[i * n + i]).sum();
            let kk = BigInt::from(k);
            debug_assert!((&tr % &kk).is_zero());
            coeffs[n - k] = -(tr / kk);
        }
        Self::new(coeffs)
    }
}

fn mat_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j] += x * y;
                }
            }
        }
    }
    out
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}
