//! Candidate enumeration for the classification search.
//!
//! A commutative ring with integer codegrees and a fixed-point-free
//! automorphism of prime order `p` has its non-principal codegrees in
//! `n = (rank - 1) / p` orbits of size `p`, so
//! `1/(pF) + Σ 1/f_j = 1/p`. The sieve enumerates these Egyptian-fraction
//! solutions, pairs them with dimension types `F = 1 + p Σ d_j²`, and runs
//! dimension/codegree arguments that rule candidates out before any table
//! search.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symmetry::is_prime;

pub const MAX_RANK: usize = 12;

/// Rank of the largest sub-multiset for which the sub-rank rule is backed by
/// a completed classification.
pub const SUB_RANK_CERTIFIED: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// At most three distinct dimensions force a nontrivial pointed part.
    Gcdlem,
    /// Trivially acting invertibles give `|G|` as a codegree of multiplicity
    /// exactly `|G| - 1`.
    Formlem,
    /// `d² = |G_x| + (noninvertible part)` for each noninvertible dimension.
    FormlemVariant,
    /// No ring has exactly two distinct codegrees with `F` simple.
    TwoCodegrees,
    /// Dimension prefixes closed under products must be feasible themselves.
    SubRank,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::Gcdlem,
        Rule::Formlem,
        Rule::FormlemVariant,
        Rule::TwoCodegrees,
        Rule::SubRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Gcdlem => "gcdlem",
            Rule::Formlem => "formlem",
            Rule::FormlemVariant => "formlem-variant",
            Rule::TwoCodegrees => "two-codegrees",
            Rule::SubRank => "sub-rank",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RuleFlags {
    pub gcdlem: bool,
    pub formlem: bool,
    pub formlem_variant: bool,
    pub two_codegrees: bool,
    pub sub_rank: bool,
}

impl Default for RuleFlags {
    fn default() -> Self {
        Self::all()
    }
}

impl RuleFlags {
    pub fn all() -> Self {
        Self {
            gcdlem: true,
            formlem: true,
            formlem_variant: true,
            two_codegrees: true,
            sub_rank: true,
        }
    }

    pub fn none() -> Self {
        Self {
            gcdlem: false,
            formlem: false,
            formlem_variant: false,
            two_codegrees: false,
            sub_rank: false,
        }
    }

    pub fn enabled(&self, rule: Rule) -> bool {
        match rule {
            Rule::Gcdlem => self.gcdlem,
            Rule::Formlem => self.formlem,
            Rule::FormlemVariant => self.formlem_variant,
            Rule::TwoCodegrees => self.two_codegrees,
            Rule::SubRank => self.sub_rank,
        }
    }

    pub fn set(&mut self, rule: Rule, on: bool) {
        let slot = match rule {
            Rule::Gcdlem => &mut self.gcdlem,
            Rule::Formlem => &mut self.formlem,
            Rule::FormlemVariant => &mut self.formlem_variant,
            Rule::TwoCodegrees => &mut self.two_codegrees,
            Rule::SubRank => &mut self.sub_rank,
        };
        *slot = on;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SearchSpec {
    pub rank: usize,
    pub prime: usize,
    pub orbits: usize,
    pub flags: RuleFlags,
}

impl SearchSpec {
    pub fn new(rank: usize, prime: usize) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Precondition(format!("{prime} is not prime")));
        }
        if rank < 2 || (rank - 1) % prime != 0 {
            return Err(Error::Precondition(format!(
                "prime {prime} does not divide rank - 1 = {}",
                rank.saturating_sub(1)
            )));
        }
        if rank > MAX_RANK {
            return Err(Error::Unsupported(format!(
                "rank {rank} exceeds the supported maximum {MAX_RANK}"
            )));
        }
        Ok(Self {
            rank,
            prime,
            orbits: (rank - 1) / prime,
            flags: RuleFlags::all(),
        })
    }

    pub fn with_flags(mut self, flags: RuleFlags) -> Self {
        self.flags = flags;
        self
    }

    /// Primes `p` with `p | rank - 1`.
    pub fn primes_for_rank(rank: usize) -> Vec<usize> {
        (2..rank).filter(|&p| is_prime(p) && (rank - 1) % p == 0).collect()
    }
}

/// A codegree list `[F; f_1 >= ... >= f_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CodegreeList {
    pub fpdim: u64,
    pub codegrees: Vec<u64>,
}

impl CodegreeList {
    /// Checks `1/(pF) + Σ 1/f_j = 1/p` exactly.
    pub fn satisfies(&self, p: usize) -> bool {
        let p = BigInt::from(p);
        let mut sum = BigRational::new(BigInt::one(), &p * BigInt::from(self.fpdim));
        for &f in &self.codegrees {
            sum += BigRational::new(BigInt::one(), BigInt::from(f));
        }
        sum == BigRational::new(BigInt::one(), p)
    }

    /// Multiplicity of `f` among all codegrees, the orbit codegrees counted
    /// `p` times and `F` once more.
    pub fn multiplicity(&self, f: u64, p: usize) -> usize {
        usize::from(self.fpdim == f) + p * self.codegrees.iter().filter(|&&g| g == f).count()
    }
}

impl fmt::Display for CodegreeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.fpdim)?;
        for g in &self.codegrees {
            write!(f, ",{g}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub rule: Rule,
    pub fired: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Keep,
    Prune(Rule),
}

impl Verdict {
    pub fn is_keep(self) -> bool {
        self == Verdict::Keep
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Keep => f.write_str("KEEP"),
            Verdict::Prune(r) => write!(f, "PRUNE({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub prime: usize,
    pub list: CodegreeList,
    /// One dimension per orbit, nondecreasing.
    pub dims: Vec<u64>,
    pub prune_trace: Vec<TraceEntry>,
}

impl Candidate {
    pub fn new(prime: usize, list: CodegreeList, mut dims: Vec<u64>) -> Self {
        dims.sort_unstable();
        Self {
            prime,
            list,
            dims,
            prune_trace: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        1 + self.prime * self.dims.len()
    }

    pub fn fpdim(&self) -> u64 {
        self.list.fpdim
    }

    /// Dimensions of the whole basis: the unit, then each orbit dimension
    /// repeated `p` times.
    pub fn basis_dims(&self) -> Vec<u64> {
        let mut out = vec![1];
        for &d in &self.dims {
            out.extend(std::iter::repeat_n(d, self.prime));
        }
        out
    }

    /// The verdict recorded by the last [`apply_pruning`] run.
    pub fn verdict(&self) -> Verdict {
        self.prune_trace
            .iter()
            .find(|e| e.fired)
            .map_or(Verdict::Keep, |e| Verdict::Prune(e.rule))
    }

    pub fn satisfies_invariants(&self) -> bool {
        let p = self.prime as u64;
        let sq: u64 = self.dims.iter().map(|d| d * d).sum();
        self.list.satisfies(self.prime)
            && self.list.fpdim == 1 + p * sq
            && self.list.codegrees.iter().all(|&f| f <= self.list.fpdim)
            && self.dims.len() == self.list.codegrees.len()
    }
}

/// `A_{n+1}` for `A_1 = p`, `A_{j+1} = A_j (A_j + 1)`; it bounds `pF` and
/// every `f_j`.
pub fn sylvester_bound(p: usize, n: usize) -> BigInt {
    let mut a = BigInt::from(p);
    for _ in 0..n {
        a = &a * (&a + 1u32);
    }
    a
}

/// All codegree lists for the spec, sorted by `F` descending, then the
/// codegrees descending.
pub fn enumerate_codegree_lists(spec: &SearchSpec) -> Vec<CodegreeList> {
    let p = spec.prime;
    // An order-2 fixed-point-free automorphism forces odd codegrees.
    let odd = p == 2;
    let mut raw: Vec<(Vec<u64>, u64)> = Vec::new();
    let fast = sylvester_bound(p, spec.orbits).to_u128().and_then(|bound| {
        let mut prefix = Vec::with_capacity(spec.orbits);
        let mut found = Vec::new();
        small::unit_fractions(
            spec.orbits,
            p as u128 + 1,
            (1, p as u128),
            bound,
            odd,
            &mut prefix,
            &mut found,
        )?;
        Some(found)
    });
    match fast {
        Some(found) => raw = found,
        None => {
            let bound = sylvester_bound(p, spec.orbits);
            let target = BigRational::new(BigInt::one(), BigInt::from(p));
            let mut prefix = Vec::with_capacity(spec.orbits);
            unit_fractions(
                spec.orbits,
                &BigInt::from(p + 1),
                &target,
                &bound,
                odd,
                &mut prefix,
                &mut |fs, last| {
                    let fs = fs.iter().map(|f| f.to_u64().unwrap()).collect();
                    raw.push((fs, last.to_u64().expect("bounded by the Sylvester number")));
                },
            );
        }
    }
    let mut out = Vec::new();
    for (fs, pf) in raw {
        let pp = p as u64;
        if pf % pp != 0 {
            continue;
        }
        let fpdim = pf / pp;
        if fpdim % pp != 1 % pp || fs.iter().any(|&f| f > fpdim) || (odd && fpdim % 2 == 0) {
            continue;
        }
        let mut codegrees = fs;
        codegrees.reverse();
        let list = CodegreeList { fpdim, codegrees };
        assert!(list.satisfies(p));
        out.push(list);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Writes `rem` as `Σ_{i<k} 1/x_i + 1/y` with `min <= x_1 <= ... <= x_k < y`
/// and every denominator at most `bound`.
fn unit_fractions(
    k: usize,
    min: &BigInt,
    rem: &BigRational,
    bound: &BigInt,
    odd: bool,
    prefix: &mut Vec<BigInt>,
    emit: &mut dyn FnMut(&[BigInt], &BigInt),
) {
    if k == 0 {
        if rem.numer().is_one() && rem.denom() <= bound {
            let y = rem.denom().clone();
            if prefix.last().is_none_or(|x| *x < y) {
                emit(prefix, &y);
            }
        }
        return;
    }
    // 1/x < rem and (k + 1)/x >= rem.
    let lo = (rem.denom() / rem.numer()) + 1;
    let lo = if &lo < min { min.clone() } else { lo };
    let hi = (BigInt::from(k + 1) * rem.denom()) / rem.numer();
    let hi = if &hi > bound { bound.clone() } else { hi };
    let mut x = lo;
    while x <= hi {
        if !(odd && x.is_even()) {
            let next = rem - BigRational::new(BigInt::one(), x.clone());
            if next.is_positive() {
                prefix.push(x.clone());
                unit_fractions(k - 1, &x, &next, bound, odd, prefix, emit);
                prefix.pop();
            }
        }
        x += 1;
    }
}

/// The same search in machine integers; `None` on overflow.
mod small {
    use num_integer::Integer;

    pub(super) fn unit_fractions(
        k: usize,
        min: u128,
        (a, b): (u128, u128),
        bound: u128,
        odd: bool,
        prefix: &mut Vec<u64>,
        out: &mut Vec<(Vec<u64>, u64)>,
    ) -> Option<()> {
        let lo = (b / a + 1).max(min);
        let hi = (b.checked_mul(k as u128 + 1)? / a).min(bound);
        for x in lo..=hi {
            if odd && x % 2 == 0 {
                continue;
            }
            // rem - 1/x = (a x - b) / (b x)
            let num = a.checked_mul(x)? - b;
            let den = b.checked_mul(x)?;
            if k == 1 {
                if den % num == 0 {
                    let y = den / num;
                    if y > x && y <= bound {
                        prefix.push(u64::try_from(x).ok()?);
                        out.push((prefix.clone(), u64::try_from(y).ok()?));
                        prefix.pop();
                    }
                }
                continue;
            }
            let g = num.gcd(&den);
            prefix.push(u64::try_from(x).ok()?);
            unit_fractions(k - 1, x, (num / g, den / g), bound, odd, prefix, out)?;
            prefix.pop();
        }
        Some(())
    }
}

/// Nondecreasing `d_1..d_n >= 1` with `F = 1 + p Σ d_j²`.
pub fn enumerate_dim_types(fpdim: u64, p: usize, n: usize) -> Vec<Vec<u64>> {
    let p = p as u64;
    let mut out = Vec::new();
    if fpdim == 0 || (fpdim - 1) % p != 0 {
        return out;
    }
    let target = (fpdim - 1) / p;
    if n == 0 {
        return if target == 0 { vec![vec![]] } else { out };
    }
    let mut cur = Vec::with_capacity(n);
    squares(target, n, 1, &mut cur, &mut out);
    out
}

fn squares(rem: u64, k: usize, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if k == 1 {
        let d = rem.isqrt();
        if d >= min && d * d == rem {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    let mut d = min;
    while d * d * k as u64 <= rem {
        cur.push(d);
        squares(rem - d * d, k - 1, d, cur, out);
        cur.pop();
        d += 1;
    }
}

/// Runs every enabled rule, records each in `prune_trace`, and returns the
/// first that fired.
pub fn apply_pruning(candidate: &mut Candidate, spec: &SearchSpec) -> Verdict {
    candidate.prune_trace.clear();
    for rule in Rule::ALL {
        if !spec.flags.enabled(rule) {
            continue;
        }
        let (fired, note) = match rule {
            Rule::Gcdlem => (gcdlem_fires(&candidate.dims), None),
            Rule::Formlem => (formlem_fires(candidate), None),
            Rule::FormlemVariant => (
                variant_fires(&candidate.dims, candidate.prime),
                None,
            ),
            Rule::TwoCodegrees => (two_codegrees_fires(candidate), None),
            Rule::SubRank => sub_rank_fires(&candidate.dims, candidate.prime),
        };
        candidate.prune_trace.push(TraceEntry { rule, fired, note });
    }
    candidate.verdict()
}

/// Size of the pointed part forced by the dimension type.
fn pointed_order(dims: &[u64], p: usize) -> u64 {
    1 + (p * dims.iter().filter(|&&d| d == 1).count()) as u64
}

/// Basis dimensions above 1, with the number of basis elements of each.
fn noninvertible_classes(dims: &[u64], p: usize) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for &d in dims.iter().filter(|&&d| d > 1) {
        match out.last_mut() {
            Some((e, m)) if *e == d => *m += p as u64,
            _ => out.push((d, p as u64)),
        }
    }
    out
}

/// The invertibles must act trivially when their number is coprime to the
/// size of every noninvertible dimension class.
fn trivial_action_certified(dims: &[u64], p: usize) -> bool {
    let g = pointed_order(dims, p);
    noninvertible_classes(dims, p)
        .iter()
        .all(|&(_, size)| g.gcd(&size) == 1)
}

fn gcdlem_fires(dims: &[u64]) -> bool {
    let distinct: BTreeSet<u64> = dims.iter().copied().collect();
    !dims.is_empty() && !distinct.contains(&1) && distinct.len() <= 2
}

fn formlem_fires(c: &Candidate) -> bool {
    let g = pointed_order(&c.dims, c.prime);
    if g == 1 || c.dims.iter().all(|&d| d == 1) || !trivial_action_certified(&c.dims, c.prime) {
        return false;
    }
    c.list.multiplicity(g, c.prime) != (g - 1) as usize
}

fn variant_fires(dims: &[u64], p: usize) -> bool {
    let g = pointed_order(dims, p);
    let classes = noninvertible_classes(dims, p);
    let gens: Vec<u64> = classes.iter().map(|&(d, _)| d).collect();
    let stabilizers: Vec<u64> = if trivial_action_certified(dims, p) {
        vec![g]
    } else {
        (1..=g).filter(|s| g % s == 0).collect()
    };
    classes.iter().any(|&(d, _)| {
        !stabilizers
            .iter()
            .any(|&s| d * d >= s && representable(d * d - s, &gens))
    })
}

/// Whether `n` is a nonnegative integer combination of `gens` (ascending).
fn representable(n: u64, gens: &[u64]) -> bool {
    match gens.split_last() {
        None => n == 0,
        Some((&g, [])) => n % g == 0,
        Some((&g, rest)) => {
            let common = rest.iter().fold(g, |a, &b| a.gcd(&b));
            n % common == 0 && (0..=n / g).any(|t| representable(n - t * g, rest))
        }
    }
}

fn two_codegrees_fires(c: &Candidate) -> bool {
    let mut distinct: BTreeSet<u64> = c.list.codegrees.iter().copied().collect();
    distinct.insert(c.list.fpdim);
    distinct.len() == 2 && c.list.multiplicity(c.list.fpdim, c.prime) == 1
}

/// Each proper prefix `e_1 < ... < e_t` of the distinct orbit dimensions with
/// `e_t² < e_{t+1}` spans a subring; it must pass the dimension-only rules.
fn sub_rank_fires(dims: &[u64], p: usize) -> (bool, Option<String>) {
    let distinct: Vec<u64> = dims.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    for t in 1..distinct.len() {
        let top = distinct[t - 1];
        if top * top >= distinct[t] {
            continue;
        }
        let sub: Vec<u64> = dims.iter().copied().filter(|&d| d <= top).collect();
        if gcdlem_fires(&sub) || variant_fires(&sub, p) {
            let rank = 1 + p * sub.len();
            let mut note = format!("infeasible subring of rank {rank} with dims {sub:?}");
            if rank > SUB_RANK_CERTIFIED {
                note.push_str("; completeness unverified at this sub-rank");
            }
            return (true, Some(note));
        }
    }
    (false, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveOutput {
    pub lists: Vec<CodegreeList>,
    /// Codegree lists with no dimension type.
    pub no_dim_type: Vec<CodegreeList>,
    /// Every (list, dimension type) pairing with its verdict recorded.
    pub candidates: Vec<Candidate>,
}

impl SieveOutput {
    pub fn kept(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.verdict().is_keep())
    }
}

pub fn sieve(spec: &SearchSpec) -> SieveOutput {
    let lists = enumerate_codegree_lists(spec);
    let mut no_dim_type = Vec::new();
    let mut candidates = Vec::new();
    for list in &lists {
        let types = enumerate_dim_types(list.fpdim, spec.prime, spec.orbits);
        if types.is_empty() {
            no_dim_type.push(list.clone());
        }
        for dims in types {
            let mut c = Candidate::new(spec.prime, list.clone(), dims);
            debug_assert!(c.satisfies_invariants());
            apply_pruning(&mut c, spec);
            candidates.push(c);
        }
    }
    SieveOutput {
        lists,
        no_dim_type,
        candidates,
    }
}
