//! Realizes sieve candidates as concrete structure-constant tables.
//!
//! The basis is laid out as the unit followed by the orbits of the
//! automorphism, each a block of `p` consecutive indices, in nondecreasing
//! dimension. The automorphism is the cyclic shift inside every block. For
//! each admissible duality the unknown structure constants are grouped into
//! classes closed under the symmetries every solution must have
//! (commutativity, cyclic invariance, duality and the shift), and a
//! backtracking search over the classes is driven by interval propagation on
//! the dimension equations and, optionally, the associativity equations.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_integer::{Integer, Roots};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dimension::certify_integral;
use crate::document::RingDocument;
use crate::error::{Error, Result};
use crate::ring::{validate, Coeff, FusionRing, CHECK_ASSOCIATIVITY};
use crate::sieve::{Candidate, SearchSpec};
use crate::spectral::codegrees;
use crate::symmetry::{block_shift, is_structure_map, MapKind};

/// Below this rank every ring with a fixed-point-free automorphism of prime
/// order is commutative, so the search is restricted to commutative tables.
pub const NONCOMMUTATIVE_MIN_RANK: usize = 11;

/// Largest rank accepted by [`canonical_form`].
pub const CANONICAL_MAX_RANK: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssociativityMode {
    /// Associativity equations take part in propagation.
    Incremental,
    /// Only the dimension equations propagate; associativity is scanned at
    /// the leaves.
    LeafOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleterOptions {
    pub mode: AssociativityMode,
    /// Restrict to commutative tables. Forced on below
    /// [`NONCOMMUTATIVE_MIN_RANK`].
    pub commutative: bool,
    /// Keep every leaf table (before any gate) in [`Completion::leaf_tables`].
    pub record_leaves: bool,
    /// Abandon the search after this many nodes.
    pub node_limit: Option<u64>,
}

impl Default for CompleterOptions {
    fn default() -> Self {
        Self {
            mode: AssociativityMode::Incremental,
            commutative: true,
            record_leaves: false,
            node_limit: None,
        }
    }
}

/// Why a fully assigned table was not returned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "stage", rename_all = "kebab-case")]
pub enum RejectStage {
    Associativity { witness: [usize; 4] },
    Validation { failed: Vec<String> },
    Dimensions,
    Automorphism,
    Codegrees { found: Vec<(u64, usize)>, all_integer: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub duality: Vec<usize>,
    #[serde(flatten)]
    pub stage: RejectStage,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Completion {
    /// Canonical forms, sorted by table.
    pub rings: Vec<FusionRing>,
    pub duality_candidates: usize,
    pub nodes: u64,
    pub leaves: u64,
    /// Propagation failures on associativity equations.
    pub associativity_prunes: u64,
    pub rejections: Vec<Rejection>,
    /// Completions whose canonical form was already produced under another
    /// duality.
    pub collisions: usize,
    #[serde(skip)]
    pub leaf_tables: Vec<FusionRing>,
    pub truncated: bool,
}

/// Basis dimensions and the cyclic shift for a candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub rank: usize,
    pub prime: usize,
    pub dims: Vec<u64>,
    pub shift: Vec<usize>,
}

impl Layout {
    pub fn of(candidate: &Candidate) -> Self {
        let rank = candidate.rank();
        Self {
            rank,
            prime: candidate.prime,
            dims: candidate.basis_dims(),
            shift: block_shift(rank, candidate.prime),
        }
    }

    fn orbit_start(&self, j: usize) -> usize {
        1 + j * self.prime
    }
}

pub fn default_commutative(rank: usize) -> bool {
    rank < NONCOMMUTATIVE_MIN_RANK
}

/// Dualities compatible with the layout, one per class under relabelings
/// that preserve dimensions and commute with the shift.
pub fn duality_candidates(candidate: &Candidate) -> Vec<Vec<usize>> {
    duality_candidates_with(candidate, default_commutative(candidate.rank()))
}

pub fn duality_candidates_with(candidate: &Candidate, commutative: bool) -> Vec<Vec<usize>> {
    let layout = Layout::of(candidate);
    let p = layout.prime;
    // A fixed-point-free involution of a commutative ring is the duality.
    let forced = commutative && p == 2;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (j, &d) in candidate.dims.iter().enumerate() {
        match classes.last_mut() {
            Some(c) if candidate.dims[c[0]] == d => c.push(j),
            _ => classes.push(vec![j]),
        }
    }
    // Per class: (number of paired orbits, number of self-paired orbits whose
    // elements are swapped).
    let per_class: Vec<Vec<(usize, usize)>> = classes
        .iter()
        .map(|c| {
            let m = c.len();
            if forced {
                return vec![(0, m)];
            }
            let mut opts = Vec::new();
            for pairs in 0..=m / 2 {
                let rest = m - 2 * pairs;
                let swaps = if p == 2 { rest } else { 0 };
                for s in 0..=swaps {
                    opts.push((pairs, s));
                }
            }
            opts
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0; classes.len()];
    loop {
        let mut dual: Vec<usize> = (0..layout.rank).collect();
        for (ci, c) in classes.iter().enumerate() {
            let (pairs, swaps) = per_class[ci][choice[ci]];
            for t in 0..pairs {
                let (a, b) = (layout.orbit_start(c[2 * t]), layout.orbit_start(c[2 * t + 1]));
                for s in 0..p {
                    dual[a + s] = b + s;
                    dual[b + s] = a + s;
                }
            }
            for &j in &c[2 * pairs..2 * pairs + swaps] {
                let a = layout.orbit_start(j);
                dual[a] = a + 1;
                dual[a + 1] = a;
            }
        }
        out.push(dual);
        let mut idx = 0;
        loop {
            if idx == choice.len() {
                return out;
            }
            choice[idx] += 1;
            if choice[idx] < per_class[idx].len() {
                break;
            }
            choice[idx] = 0;
            idx += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Entry {
    Const(i64),
    Var(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Mono {
    Lin(usize),
    Quad(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Row,
    Assoc,
}

#[derive(Clone, Debug)]
struct Equation {
    /// `Σ coef·mono + constant = 0`.
    terms: Vec<(i64, Mono)>,
    constant: i64,
    origin: Origin,
}

type Domains = Vec<(i64, i64)>;

struct Problem {
    rank: usize,
    entries: Vec<Entry>,
    upper: Vec<i64>,
    eqs: Vec<Equation>,
    watch: Vec<Vec<usize>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            let next = self.0[y];
            self.0[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as the root: roots are then the
            // lexicographically first triple of each class.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn entry_bound(dims: &[u64], i: usize, j: usize, k: usize) -> i64 {
    let (di, dj, dk) = (dims[i], dims[j], dims[k]);
    // A product with an invertible is a single basis element.
    if di == 1 {
        return i64::from(dk == dj);
    }
    if dj == 1 {
        return i64::from(dk == di);
    }
    ((di * dj) / dk) as i64
}

impl Problem {
    /// `None` when the symmetry classes already contradict the unit axioms.
    fn build(layout: &Layout, dual: &[usize], commutative: bool, mode: AssociativityMode) -> Option<Self> {
        let r = layout.rank;
        let idx = |i: usize, j: usize, k: usize| (i * r + j) * r + k;
        let phi = &layout.shift;
        let mut uf = UnionFind((0..r * r * r).collect());
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let t = idx(i, j, k);
                    uf.union(t, idx(j, dual[k], dual[i]));
                    uf.union(t, idx(dual[j], dual[i], dual[k]));
                    uf.union(t, idx(phi[i], phi[j], phi[k]));
                    if commutative {
                        uf.union(t, idx(j, i, k));
                    }
                }
            }
        }
        let fixed = |i: usize, j: usize, k: usize| -> Option<i64> {
            if i == 0 {
                Some(i64::from(j == k))
            } else if j == 0 {
                Some(i64::from(i == k))
            } else if k == 0 {
                Some(i64::from(j == dual[i]))
            } else {
                None
            }
        };
        let mut value: BTreeMap<usize, i64> = BTreeMap::new();
        let mut bound: BTreeMap<usize, i64> = BTreeMap::new();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let root = uf.find(idx(i, j, k));
                    if let Some(v) = fixed(i, j, k) {
                        if *value.entry(root).or_insert(v) != v {
                            return None;
                        }
                    }
                    let b = entry_bound(&layout.dims, i, j, k);
                    let e = bound.entry(root).or_insert(b);
                    *e = (*e).min(b);
                }
            }
        }
        let mut var_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut upper = Vec::new();
        let mut entries = Vec::with_capacity(r * r * r);
        for t in 0..r * r * r {
            let root = uf.find(t);
            let e = match value.get(&root) {
                Some(&v) => {
                    if v > bound[&root] {
                        return None;
                    }
                    Entry::Const(v)
                }
                None => {
                    let id = *var_of.entry(root).or_insert_with(|| {
                        upper.push(bound[&root]);
                        upper.len() - 1
                    });
                    Entry::Var(id)
                }
            };
            entries.push(e);
        }

        let mut problem = Problem {
            rank: r,
            entries,
            upper,
            eqs: Vec::new(),
            watch: Vec::new(),
        };
        let mut seen = HashSet::new();
        let d: Vec<i64> = layout.dims.iter().map(|&x| x as i64).collect();
        for i in 1..r {
            for j in 1..r {
                let mut acc = Accumulator::default();
                acc.constant -= d[i] * d[j];
                for (k, &dk) in d.iter().enumerate() {
                    acc.add_entry(dk, problem.entry(i, j, k));
                }
                if !problem.push(acc, Origin::Row, &mut seen) {
                    return None;
                }
            }
        }
        if mode == AssociativityMode::Incremental {
            for i in 1..r {
                for j in 1..r {
                    for k in 1..r {
                        for l in 1..r {
                            let mut acc = Accumulator::default();
                            for m in 0..r {
                                acc.add_product(1, problem.entry(i, j, m), problem.entry(m, k, l));
                                acc.add_product(-1, problem.entry(j, k, m), problem.entry(i, m, l));
                            }
                            if !problem.push(acc, Origin::Assoc, &mut seen) {
                                return None;
                            }
                        }
                    }
                }
            }
        }
        problem.watch = vec![Vec::new(); problem.upper.len()];
        for (e, eq) in problem.eqs.iter().enumerate() {
            let vars: BTreeSet<usize> = eq
                .terms
                .iter()
                .flat_map(|&(_, m)| match m {
                    Mono::Lin(v) => vec![v],
                    Mono::Quad(v, w) => vec![v, w],
                })
                .collect();
            for v in vars {
                problem.watch[v].push(e);
            }
        }
        Some(problem)
    }

    fn entry(&self, i: usize, j: usize, k: usize) -> Entry {
        let r = self.rank;
        self.entries[(i * r + j) * r + k]
    }

    /// Adds a normalized equation; `false` if it is a false constant identity.
    fn push(&mut self, acc: Accumulator, origin: Origin, seen: &mut HashSet<(Vec<(i64, Mono)>, i64)>) -> bool {
        let mut terms: Vec<(i64, Mono)> = acc
            .terms
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (c, m))
            .collect();
        let mut constant = acc.constant;
        if terms.is_empty() {
            return constant == 0;
        }
        if terms[0].0 < 0 {
            terms.iter_mut().for_each(|t| t.0 = -t.0);
            constant = -constant;
        }
        if seen.insert((terms.clone(), constant)) {
            self.eqs.push(Equation {
                terms,
                constant,
                origin,
            });
        }
        true
    }

    /// Tightens domains to a fixpoint; `Err` carries the violated equation.
    fn propagate(&self, dom: &mut Domains, start: &[usize]) -> std::result::Result<(), usize> {
        let mut queued = vec![false; self.eqs.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &e in start {
            if !queued[e] {
                queued[e] = true;
                queue.push_back(e);
            }
        }
        let mut changed = Vec::new();
        while let Some(e) = queue.pop_front() {
            queued[e] = false;
            changed.clear();
            if !revise(&self.eqs[e], dom, &mut changed) {
                return Err(e);
            }
            for &v in &changed {
                for &f in &self.watch[v] {
                    if !queued[f] {
                        queued[f] = true;
                        queue.push_back(f);
                    }
                }
            }
        }
        Ok(())
    }

    fn table(&self, dom: &Domains) -> Vec<Coeff> {
        self.entries
            .iter()
            .map(|e| match *e {
                Entry::Const(c) => c as Coeff,
                Entry::Var(v) => dom[v].0 as Coeff,
            })
            .collect()
    }
}

#[derive(Default)]
struct Accumulator {
    terms: BTreeMap<Mono, i64>,
    constant: i64,
}

impl Accumulator {
    fn add_entry(&mut self, coef: i64, e: Entry) {
        match e {
            Entry::Const(c) => self.constant += coef * c,
            Entry::Var(v) => *self.terms.entry(Mono::Lin(v)).or_default() += coef,
        }
    }

    fn add_product(&mut self, coef: i64, a: Entry, b: Entry) {
        match (a, b) {
            (Entry::Const(x), e) | (e, Entry::Const(x)) => self.add_entry(coef * x, e),
            (Entry::Var(v), Entry::Var(w)) => {
                let m = Mono::Quad(v.min(w), v.max(w));
                *self.terms.entry(m).or_default() += coef;
            }
        }
    }
}

fn mono_range(m: Mono, dom: &Domains) -> (i64, i64) {
    match m {
        Mono::Lin(v) => dom[v],
        Mono::Quad(v, w) => (dom[v].0 * dom[w].0, dom[v].1 * dom[w].1),
    }
}

fn term_range(c: i64, m: Mono, dom: &Domains) -> (i64, i64) {
    let (lo, hi) = mono_range(m, dom);
    if c >= 0 {
        (c * lo, c * hi)
    } else {
        (c * hi, c * lo)
    }
}

fn ceil_sqrt(x: i64) -> i64 {
    if x <= 0 {
        return 0;
    }
    let s = x.sqrt();
    if s * s == x {
        s
    } else {
        s + 1
    }
}

/// Bounds-consistency step for one equation. Returns `false` on
/// infeasibility.
fn revise(eq: &Equation, dom: &mut Domains, changed: &mut Vec<usize>) -> bool {
    let ranges: Vec<(i64, i64)> = eq.terms.iter().map(|&(c, m)| term_range(c, m, dom)).collect();
    let smin: i64 = eq.constant + ranges.iter().map(|r| r.0).sum::<i64>();
    let smax: i64 = eq.constant + ranges.iter().map(|r| r.1).sum::<i64>();
    if smin > 0 || smax < 0 {
        return false;
    }
    for (t, &(c, m)) in eq.terms.iter().enumerate() {
        let rest_min = smin - ranges[t].0;
        let rest_max = smax - ranges[t].1;
        // c·m ∈ [-rest_max, -rest_min]
        let (mlo, mhi) = if c > 0 {
            (Integer::div_ceil(&-rest_max, &c), Integer::div_floor(&-rest_min, &c))
        } else {
            let a = -c;
            (Integer::div_ceil(&rest_min, &a), Integer::div_floor(&rest_max, &a))
        };
        let mlo = mlo.max(0);
        if mlo > mhi {
            return false;
        }
        let mut tighten = |v: usize, lo: i64, hi: i64, dom: &mut Domains| -> bool {
            let (a, b) = dom[v];
            let (na, nb) = (a.max(lo), b.min(hi));
            if na > nb {
                return false;
            }
            if (na, nb) != (a, b) {
                dom[v] = (na, nb);
                changed.push(v);
            }
            true
        };
        let ok = match m {
            Mono::Lin(v) => tighten(v, mlo, mhi, dom),
            Mono::Quad(v, w) if v == w => tighten(v, ceil_sqrt(mlo), mhi.sqrt(), dom),
            Mono::Quad(v, w) => {
                let mut ok = true;
                for (x, y) in [(v, w), (w, v)] {
                    let (ylo, yhi) = dom[y];
                    let hi = if ylo > 0 { Integer::div_floor(&mhi, &ylo) } else { i64::MAX };
                    let lo = if yhi > 0 { Integer::div_ceil(&mlo, &yhi) } else { 0 };
                    if yhi == 0 && mlo > 0 {
                        ok = false;
                    }
                    ok = ok && tighten(x, lo, hi, dom);
                }
                ok
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

struct Search<'a> {
    problem: &'a Problem,
    layout: &'a Layout,
    dual: &'a [usize],
    expected: BTreeMap<u64, usize>,
    options: &'a CompleterOptions,
    out: &'a mut Completion,
    found: &'a mut BTreeMap<Vec<Coeff>, FusionRing>,
    mine: BTreeSet<Vec<Coeff>>,
}

impl Search<'_> {
    fn run(&mut self, dom: Domains) -> Result<()> {
        self.out.nodes += 1;
        if self.options.node_limit.is_some_and(|n| self.out.nodes > n) {
            self.out.truncated = true;
            return Ok(());
        }
        let pick = dom
            .iter()
            .enumerate()
            .filter(|(_, &(lo, hi))| lo < hi)
            .min_by_key(|&(v, &(lo, hi))| (hi - lo, v))
            .map(|(v, _)| v);
        let Some(v) = pick else {
            return self.leaf(&dom);
        };
        let (lo, hi) = dom[v];
        for val in lo..=hi {
            let mut next = dom.clone();
            next[v] = (val, val);
            match self.problem.propagate(&mut next, &self.problem.watch[v]) {
                Ok(()) => self.run(next)?,
                Err(e) => {
                    if self.problem.eqs[e].origin == Origin::Assoc {
                        self.out.associativity_prunes += 1;
                    }
                }
            }
            if self.out.truncated {
                break;
            }
        }
        Ok(())
    }

    fn reject(&mut self, stage: RejectStage) {
        self.out.rejections.push(Rejection {
            duality: self.dual.to_vec(),
            stage,
        });
    }

    fn leaf(&mut self, dom: &Domains) -> Result<()> {
        self.out.leaves += 1;
        let ring = FusionRing::from_flat(self.layout.rank, self.problem.table(dom), self.dual.to_vec())?;
        if self.options.record_leaves {
            self.out.leaf_tables.push(ring.clone());
        }
        let report = validate(&ring);
        if !report.is_valid() {
            let stage = match report.check(CHECK_ASSOCIATIVITY) {
                Some(c) if !c.passed && report.failures().count() == 1 => {
                    let w = c.witness.clone().unwrap_or_default();
                    RejectStage::Associativity {
                        witness: [w[0], w[1], w[2], w[3]],
                    }
                }
                _ => RejectStage::Validation {
                    failed: report.failures().map(|c| c.name.clone()).collect(),
                },
            };
            self.reject(stage);
            return Ok(());
        }
        if !certify_integral(&ring, &self.layout.dims) {
            self.reject(RejectStage::Dimensions);
            return Ok(());
        }
        if !is_structure_map(&ring, &self.layout.shift, MapKind::Automorphism) {
            self.reject(RejectStage::Automorphism);
            return Ok(());
        }
        let profile = codegrees(&ring);
        if !profile.all_integer || profile.as_map() != self.expected {
            self.reject(RejectStage::Codegrees {
                found: profile.integer_roots.clone(),
                all_integer: profile.all_integer,
            });
            return Ok(());
        }
        let canon = canonical_form(&ring, &self.layout.dims)?;
        let key = canon.flat_table().to_vec();
        if self.found.contains_key(&key) {
            if !self.mine.contains(&key) {
                self.out.collisions += 1;
                self.mine.insert(key);
            }
        } else {
            self.mine.insert(key.clone());
            self.found.insert(key, canon);
        }
        Ok(())
    }
}

/// Expected codegree multiplicities: `F` once, each listed codegree `p`
/// times.
pub fn expected_codegrees(candidate: &Candidate) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    *m.entry(candidate.list.fpdim).or_insert(0) += 1;
    for &f in &candidate.list.codegrees {
        *m.entry(f).or_insert(0) += candidate.prime;
    }
    m
}

/// All completions of a candidate, as canonical forms.
pub fn complete(candidate: &Candidate, spec: &SearchSpec) -> Result<Vec<FusionRing>> {
    Ok(complete_with(candidate, spec, &CompleterOptions::default())?.rings)
}

pub fn complete_with(candidate: &Candidate, spec: &SearchSpec, options: &CompleterOptions) -> Result<Completion> {
    if candidate.prime != spec.prime || candidate.rank() != spec.rank {
        return Err(Error::Precondition(format!(
            "candidate of rank {} and prime {} does not match the search (rank {}, prime {})",
            candidate.rank(),
            candidate.prime,
            spec.rank,
            spec.prime
        )));
    }
    if !candidate.satisfies_invariants() {
        return Err(Error::Precondition(format!(
            "inconsistent candidate {} with dims {:?}",
            candidate.list, candidate.dims
        )));
    }
    let commutative = options.commutative || default_commutative(spec.rank);
    let layout = Layout::of(candidate);
    let expected = expected_codegrees(candidate);
    let duals = duality_candidates_with(candidate, commutative);
    let mut out = Completion {
        duality_candidates: duals.len(),
        ..Completion::default()
    };
    let mut found = BTreeMap::new();
    for dual in &duals {
        let Some(problem) = Problem::build(&layout, dual, commutative, options.mode) else {
            continue;
        };
        let mut dom: Domains = problem.upper.iter().map(|&u| (0, u)).collect();
        let all: Vec<usize> = (0..problem.eqs.len()).collect();
        if let Err(e) = problem.propagate(&mut dom, &all) {
            if problem.eqs[e].origin == Origin::Assoc {
                out.associativity_prunes += 1;
            }
            continue;
        }
        let mut search = Search {
            problem: &problem,
            layout: &layout,
            dual,
            expected: expected.clone(),
            options,
            out: &mut out,
            found: &mut found,
            mine: BTreeSet::new(),
        };
        search.run(dom)?;
        if out.truncated {
            break;
        }
    }
    out.rings = found.into_values().collect();
    Ok(out)
}

/// Lexicographically least relabeling over permutations that fix the unit
/// and preserve `dims`; the basis is first sorted by dimension.
pub fn canonical_form(ring: &FusionRing, dims: &[u64]) -> Result<FusionRing> {
    let r = ring.rank();
    if r > CANONICAL_MAX_RANK {
        return Err(Error::Unsupported(format!(
            "canonical form limited to rank {CANONICAL_MAX_RANK}, got {r}"
        )));
    }
    if dims.len() != r || dims[0] != 1 {
        return Err(Error::Shape("dimension vector does not fit the ring".into()));
    }
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &d) in dims.iter().enumerate().skip(1) {
        classes.entry(d).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();
    let mut perm = vec![0; r];
    let mut best: Option<Vec<usize>> = None;
    let mut pos = 1;
    let offsets: Vec<usize> = classes
        .iter()
        .map(|c| {
            let o = pos;
            pos += c.len();
            o
        })
        .collect();
    permute_classes(ring, &classes, &offsets, 0, &mut perm, &mut best);
    let best = best.expect("at least the identity ordering");
    ring.relabel(&best)
}

fn permute_classes(
    ring: &FusionRing,
    classes: &[Vec<usize>],
    offsets: &[usize],
    c: usize,
    perm: &mut Vec<usize>,
    best: &mut Option<Vec<usize>>,
) {
    if c == classes.len() {
        if best.as_ref().is_none_or(|b| less(ring, perm, b)) {
            *best = Some(perm.clone());
        }
        return;
    }
    let mut items = classes[c].clone();
    heap_permutations(&mut items, &mut |order| {
        perm[offsets[c]..offsets[c] + order.len()].copy_from_slice(order);
        permute_classes(ring, classes, offsets, c + 1, perm, best);
    });
}

fn heap_permutations(items: &mut [usize], f: &mut dyn FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Whether relabeling by `a` gives a lexicographically smaller table than `b`.
fn less(ring: &FusionRing, a: &[usize], b: &[usize]) -> bool {
    let r = ring.rank();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let x = ring.c(a[i], a[j], a[k]);
                let y = ring.c(b[i], b[j], b[k]);
                if x != y {
                    return x < y;
                }
            }
        }
    }
    false
}

/// SHA-256 of the ring's interchange document without its name.
pub fn table_hash(ring: &FusionRing) -> String {
    let mut doc = RingDocument::from_ring(ring);
    doc.name = None;
    doc.labels = None;
    let text = doc.to_json_string();
    hex::encode(Sha256::digest(text.as_bytes()))
}
