//! Classification runs: sieve every (rank, prime), complete the surviving
//! candidates, merge the results across primes and name them against the
//! catalog.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::catalog::{self, SMALL_RANK_TABLE};
use crate::completer::{canonical_form, complete_with, table_hash, CompleterOptions, Rejection};
use crate::dimension::fp_dimensions;
use crate::error::{Error, Result};
use crate::ring::{Coeff, FusionRing};
use crate::sieve::{sieve, Candidate, CodegreeList, RuleFlags, SearchSpec, TraceEntry, Verdict};
use crate::spectral::codegrees;

pub const SCHEMA: &str = "fusion-forge/1";

/// What happened to one candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    NoDimType,
    Pruned,
    NoCompletion,
    Completed,
    Truncated,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateOutcome {
    pub rank: usize,
    pub prime: usize,
    #[serde(rename = "F")]
    pub fpdim: u64,
    pub codegrees: Vec<u64>,
    pub dims: Option<Vec<u64>>,
    pub stage: Stage,
    pub pruned: Option<String>,
    pub prune_trace: Vec<TraceEntry>,
    pub completions: usize,
    /// Table hashes of the completions.
    pub hashes: Vec<String>,
    pub nodes: u64,
    pub rejections: Vec<Rejection>,
    pub collisions: usize,
    #[serde(skip)]
    pub rings: Vec<FusionRing>,
    /// Milliseconds; excluded from byte-stable reports.
    pub wall_ms: f64,
}

/// One unit of work: a sieve candidate, or a codegree list without any
/// dimension type.
#[derive(Clone, Debug)]
pub enum Job {
    Candidate(SearchSpec, Candidate),
    NoDimType(SearchSpec, CodegreeList),
}

/// The jobs for one rank, over the given primes (all admissible primes when
/// `None`).
pub fn plan(rank: usize, primes: Option<&[usize]>, flags: RuleFlags) -> Result<Vec<Job>> {
    let all = SearchSpec::primes_for_rank(rank);
    let primes: Vec<usize> = match primes {
        Some(ps) => {
            for &p in ps {
                if !all.contains(&p) {
                    return Err(Error::Precondition(format!(
                        "prime {p} does not divide rank - 1 = {}",
                        rank.saturating_sub(1)
                    )));
                }
            }
            ps.to_vec()
        }
        None => all,
    };
    let mut jobs = Vec::new();
    for p in primes {
        let spec = SearchSpec::new(rank, p)?.with_flags(flags);
        let out = sieve(&spec);
        jobs.extend(out.no_dim_type.into_iter().map(|l| Job::NoDimType(spec, l)));
        jobs.extend(out.candidates.into_iter().map(|c| Job::Candidate(spec, c)));
    }
    Ok(jobs)
}

pub fn run_job(job: &Job, options: &CompleterOptions) -> Result<CandidateOutcome> {
    let start = Instant::now();
    let (spec, c) = match job {
        Job::NoDimType(spec, list) => {
            return Ok(CandidateOutcome {
                rank: spec.rank,
                prime: spec.prime,
                fpdim: list.fpdim,
                codegrees: list.codegrees.clone(),
                dims: None,
                stage: Stage::NoDimType,
                pruned: None,
                prune_trace: Vec::new(),
                completions: 0,
                hashes: Vec::new(),
                nodes: 0,
                rejections: Vec::new(),
                collisions: 0,
                rings: Vec::new(),
                wall_ms: 0.0,
            })
        }
        Job::Candidate(spec, c) => (spec, c),
    };
    let mut outcome = CandidateOutcome {
        rank: spec.rank,
        prime: spec.prime,
        fpdim: c.list.fpdim,
        codegrees: c.list.codegrees.clone(),
        dims: Some(c.dims.clone()),
        stage: Stage::Pruned,
        pruned: None,
        prune_trace: c.prune_trace.clone(),
        completions: 0,
        hashes: Vec::new(),
        nodes: 0,
        rejections: Vec::new(),
        collisions: 0,
        rings: Vec::new(),
        wall_ms: 0.0,
    };
    if let Verdict::Prune(rule) = c.verdict() {
        outcome.pruned = Some(rule.name().to_string());
        return Ok(outcome);
    }
    let done = complete_with(c, spec, options)?;
    outcome.stage = if done.truncated {
        Stage::Truncated
    } else if done.rings.is_empty() {
        Stage::NoCompletion
    } else {
        Stage::Completed
    };
    outcome.completions = done.rings.len();
    outcome.hashes = done.rings.iter().map(table_hash).collect();
    outcome.nodes = done.nodes;
    outcome.rejections = done.rejections;
    outcome.collisions = done.collisions;
    outcome.rings = done.rings;
    outcome.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(outcome)
}

/// A ring found by the search, merged over primes.
#[derive(Clone, Debug, Serialize)]
pub struct FoundRing {
    pub name: String,
    /// Whether the name comes from the catalog.
    pub catalogued: bool,
    pub hash: String,
    pub rank: usize,
    pub primes: Vec<usize>,
    /// Orbit counts of the automorphism, unit orbit included, per prime.
    pub orbits: Vec<usize>,
    #[serde(rename = "F")]
    pub fpdim: u64,
    pub dims: Vec<u64>,
    pub codegrees: Vec<(u64, usize)>,
    #[serde(skip)]
    pub ring: FusionRing,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub schema: &'static str,
    pub ranks: Vec<usize>,
    pub candidates: Vec<CandidateOutcome>,
    pub rings: Vec<FoundRing>,
}

/// Canonical tables of the catalog rings that can appear as search results.
fn known_rings() -> Result<BTreeMap<Vec<Coeff>, String>> {
    let mut named: Vec<FusionRing> = SMALL_RANK_TABLE
        .iter()
        .map(|row| catalog::builtin(row.name))
        .collect::<Result<_>>()?;
    named.push(catalog::f119_tensor());
    let mut out = BTreeMap::new();
    for ring in named {
        let dims = fp_dimensions(&ring)?;
        let canon = canonical_form(&ring, dims.integer_dims())?;
        let name = ring.name().unwrap_or("unnamed").to_string();
        out.insert(canon.flat_table().to_vec(), name);
    }
    Ok(out)
}

/// Merges per-candidate outcomes into a deterministic report.
pub fn merge(ranks: Vec<usize>, mut candidates: Vec<CandidateOutcome>) -> Result<SearchOutcome> {
    candidates.sort_by(|a, b| {
        (a.rank, a.prime, std::cmp::Reverse(a.fpdim), &b.codegrees, &a.dims).cmp(&(
            b.rank,
            b.prime,
            std::cmp::Reverse(b.fpdim),
            &a.codegrees,
            &b.dims,
        ))
    });
    let known = known_rings()?;
    let mut by_table: BTreeMap<(usize, Vec<Coeff>), FoundRing> = BTreeMap::new();
    for c in &candidates {
        for ring in &c.rings {
            let key = (ring.rank(), ring.flat_table().to_vec());
            let orbits = 1 + (c.rank - 1) / c.prime;
            if let Some(found) = by_table.get_mut(&key) {
                if !found.primes.contains(&c.prime) {
                    found.primes.push(c.prime);
                    found.orbits.push(orbits);
                }
                continue;
            }
            let hash = table_hash(ring);
            let (name, catalogued) = match known.get(ring.flat_table()) {
                Some(n) => (n.clone(), true),
                None => (format!("F{}", c.fpdim), false),
            };
            let dims = fp_dimensions(ring)?.integer_dims().to_vec();
            let mut cods = codegrees(ring).integer_roots;
            cods.reverse();
            by_table.insert(
                key,
                FoundRing {
                    name: name.clone(),
                    catalogued,
                    hash,
                    rank: c.rank,
                    primes: vec![c.prime],
                    orbits: vec![orbits],
                    fpdim: c.fpdim,
                    dims,
                    codegrees: cods,
                    ring: ring.clone().with_name(name),
                },
            );
        }
    }
    let mut rings: Vec<FoundRing> = by_table.into_values().collect();
    for r in &mut rings {
        let mut pairs: Vec<(usize, usize)> = r.primes.iter().copied().zip(r.orbits.iter().copied()).collect();
        pairs.sort_unstable();
        r.primes = pairs.iter().map(|p| p.0).collect();
        r.orbits = pairs.iter().map(|p| p.1).collect();
    }
    rings.sort_by(|a, b| (a.rank, a.fpdim, &a.hash).cmp(&(b.rank, b.fpdim, &b.hash)));
    Ok(SearchOutcome {
        schema: SCHEMA,
        ranks,
        candidates,
        rings,
    })
}

/// Sequential search over ranks `lo..=hi`.
pub fn search(ranks: std::ops::RangeInclusive<usize>, primes: Option<&[usize]>, options: &CompleterOptions) -> Result<SearchOutcome> {
    let mut outcomes = Vec::new();
    let ranks: Vec<usize> = ranks.collect();
    for &rank in &ranks {
        for job in plan(rank, primes, RuleFlags::all())? {
            outcomes.push(run_job(&job, options)?);
        }
    }
    merge(ranks, outcomes)
}

/// One printed row of the classification table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FigureRow {
    pub rank: usize,
    pub ring: Option<String>,
    pub hash: Option<String>,
    pub primes: Vec<usize>,
    pub orbits: Vec<usize>,
    #[serde(rename = "F")]
    pub fpdim: Option<u64>,
    pub dims: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Figure {
    pub schema: &'static str,
    pub rows: Vec<FigureRow>,
    pub ring_count: usize,
    /// Differences from the expected table, empty on an exact match.
    pub discrepancies: Vec<String>,
}

pub fn figure(outcome: &SearchOutcome) -> Figure {
    let mut rows = Vec::new();
    for &rank in &outcome.ranks {
        let found: Vec<&FoundRing> = outcome.rings.iter().filter(|r| r.rank == rank).collect();
        if found.is_empty() {
            rows.push(FigureRow {
                rank,
                ring: None,
                hash: None,
                primes: Vec::new(),
                orbits: Vec::new(),
                fpdim: None,
                dims: Vec::new(),
            });
        }
        for r in found {
            rows.push(FigureRow {
                rank,
                ring: Some(r.name.clone()),
                hash: Some(r.hash[..12].to_string()),
                primes: r.primes.clone(),
                orbits: r.orbits.clone(),
                fpdim: Some(r.fpdim),
                dims: r.dims.clone(),
            });
        }
    }
    let discrepancies = compare_with_table(outcome);
    Figure {
        schema: SCHEMA,
        ring_count: outcome.rings.len(),
        rows,
        discrepancies,
    }
}

/// Compares found rings with the expected small-rank table on rank, primes,
/// orbits, `F` and dims, restricted to the searched ranks.
pub fn compare_with_table(outcome: &SearchOutcome) -> Vec<String> {
    let key = |rank: usize, primes: &[usize], fpdim: u64, dims: &[u64]| {
        let orbits: Vec<usize> = primes.iter().map(|p| 1 + (rank - 1) / p).collect();
        (rank, primes.to_vec(), orbits, fpdim, dims.to_vec())
    };
    let mut expected: Vec<_> = SMALL_RANK_TABLE
        .iter()
        .filter(|r| outcome.ranks.contains(&r.rank))
        .map(|r| (key(r.rank, r.primes, r.fpdim, r.dims), r.name))
        .collect();
    let mut out = Vec::new();
    for f in &outcome.rings {
        let k = key(f.rank, &f.primes, f.fpdim, &f.dims);
        if f.orbits != k.2 {
            out.push(format!("{}: orbit counts {:?} inconsistent with rank", f.name, f.orbits));
        }
        match expected.iter().position(|(e, _)| *e == k) {
            Some(i) => {
                expected.remove(i);
            }
            None => out.push(format!(
                "unexpected ring {} (rank {}, primes {:?}, F = {}, dims {:?})",
                f.name, f.rank, f.primes, f.fpdim, f.dims
            )),
        }
    }
    for (_, name) in expected {
        out.push(format!("missing ring {name}"));
    }
    out
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Fixed-width text rendering, stable across runs.
pub fn render_figure(fig: &Figure) -> String {
    let header = ["rank", "ring", "hash", "prime", "orbits", "FPdim", "basis FPdims"];
    let body: Vec<[String; 7]> = fig
        .rows
        .iter()
        .map(|r| {
            let dash = || "-".to_string();
            [
                r.rank.to_string(),
                r.ring.clone().unwrap_or_else(dash),
                r.hash.clone().unwrap_or_else(dash),
                if r.primes.is_empty() { dash() } else { join(&r.primes) },
                if r.orbits.is_empty() { dash() } else { join(&r.orbits) },
                r.fpdim.map_or_else(dash, |f| f.to_string()),
                if r.dims.is_empty() { dash() } else { join(&r.dims) },
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &body {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&header.map(str::to_string), &mut out);
    let total: usize = width.iter().sum::<usize>() + 2 * (width.len() - 1);
    let _ = writeln!(out, "{}", "-".repeat(total));
    for row in &body {
        line(row, &mut out);
    }
    let _ = writeln!(out, "{} rings", fig.ring_count);
    for d in &fig.discrepancies {
        let _ = writeln!(out, "note: {d}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_five_search() {
        let out = search(5..=5, None, &CompleterOptions::default()).unwrap();
        let names: Vec<&str> = out.rings.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["ZC5", "R_C7xC3"]);
        assert!(compare_with_table(&out).is_empty());
        let fig = figure(&out);
        let text = render_figure(&fig);
        assert!(text.contains("R_C7xC3"));
        assert_eq!(text, render_figure(&figure(&search(5..=5, None, &CompleterOptions::default()).unwrap())));
    }

    #[test]
    fn merged_primes() {
        let out = search(7..=7, None, &CompleterOptions::default()).unwrap();
        let z7 = out.rings.iter().find(|r| r.name == "ZC7").unwrap();
        assert_eq!(z7.primes, [2, 3]);
        assert_eq!(z7.orbits, [4, 3]);
    }

    #[test]
    fn empty_ranks_render_dashes() {
        let out = search(1..=2, None, &CompleterOptions::default()).unwrap();
        let fig = figure(&out);
        assert_eq!(fig.rows.len(), 2);
        assert!(fig.rows.iter().all(|r| r.ring.is_none()));
    }
}
