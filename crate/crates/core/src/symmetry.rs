//! Basis-permuting automorphisms, fixed-point-free maps of prime order, and
//! the conformance checks such maps imply.

use std::fmt;

use serde::Serialize;

use crate::dimension::{fp_dimensions, pointed_part};
use crate::error::{Error, Result};
use crate::ring::FusionRing;
use crate::spectral::{character_table, codegrees};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Automorphism,
    Antiautomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisMap {
    pub perm: Vec<usize>,
    pub kind: MapKind,
    pub order: usize,
    pub fixed_points: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

impl BasisMap {
    pub fn new(perm: Vec<usize>, kind: MapKind) -> Self {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut orbit = vec![s];
            seen[s] = true;
            let mut x = perm[s];
            while x != s {
                seen[x] = true;
                orbit.push(x);
                x = perm[x];
            }
            orbits.push(orbit);
        }
        let order = orbits
            .iter()
            .fold(1, |acc, o| num_integer::lcm(acc, o.len()));
        let fixed_points = (0..n).filter(|&i| perm[i] == i).collect();
        Self {
            perm,
            kind,
            order,
            fixed_points,
            orbits,
        }
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.fixed_points == [0]
    }

    pub fn compose(&self, other: &Self) -> Vec<usize> {
        other.perm.iter().map(|&i| self.perm[i]).collect()
    }
}

impl fmt::Display for BasisMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<String> = self
            .orbits
            .iter()
            .filter(|o| o.len() > 1)
            .map(|o| {
                let s: Vec<String> = o.iter().map(usize::to_string).collect();
                format!("({})", s.join(" "))
            })
            .collect();
        if cycles.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", cycles.join(""))
        }
    }
}

/// Checks that `perm` is a unital (anti)automorphism of the ring.
pub fn is_structure_map(ring: &FusionRing, perm: &[usize], kind: MapKind) -> bool {
    let r = ring.rank();
    if perm.len() != r || perm[0] != 0 {
        return false;
    }
    let mut seen = vec![false; r];
    for &p in perm {
        if p >= r || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    (0..r).all(|i| {
        (0..r).all(|j| {
            (0..r).all(|k| {
                let img = match kind {
                    MapKind::Automorphism => ring.c(perm[i], perm[j], perm[k]),
                    MapKind::Antiautomorphism => ring.c(perm[j], perm[i], perm[k]),
                };
                img == ring.c(i, j, k)
            })
        })
    })
}

/// Every (anti)automorphism of the ring, in lexicographic order of the
/// permutation arrays.
pub fn structure_maps(ring: &FusionRing, kind: MapKind) -> Vec<BasisMap> {
    let r = ring.rank();
    let dims = fp_dimensions(ring).map(|d| d.dims).unwrap_or_else(|_| vec![1.0; r]);
    // Cheap invariants that any basis map must preserve.
    let signature: Vec<(i64, bool, u32)> = (0..r)
        .map(|i| {
            (
                (dims[i] * 1e6).round() as i64,
                ring.is_self_dual(i),
                (0..r).map(|k| ring.c(i, i, k)).sum(),
            )
        })
        .collect();
    let mut order: Vec<usize> = (1..r).collect();
    order.sort_by_key(|&i| (signature[i].0, i));
    let mut perm = vec![usize::MAX; r];
    perm[0] = 0;
    let mut used = vec![false; r];
    used[0] = true;
    let mut assigned = vec![0usize];
    let mut out = Vec::new();
    dfs(ring, kind, &signature, &order, 0, &mut perm, &mut used, &mut assigned, &mut out);
    out.sort();
    out.into_iter().map(|p| BasisMap::new(p, kind)).collect()
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    ring: &FusionRing,
    kind: MapKind,
    sig: &[(i64, bool, u32)],
    order: &[usize],
    depth: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    assigned: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == order.len() {
        out.push(perm.clone());
        return;
    }
    let i = order[depth];
    let r = ring.rank();
    for t in 1..r {
        if used[t] || sig[t] != sig[i] {
            continue;
        }
        perm[i] = t;
        let di = ring.dual(i);
        if perm[di] != usize::MAX && perm[di] != ring.dual(t) {
            perm[i] = usize::MAX;
            continue;
        }
        assigned.push(i);
        if consistent_with(ring, kind, perm, assigned, i) {
            used[t] = true;
            dfs(ring, kind, sig, order, depth + 1, perm, used, assigned, out);
            used[t] = false;
        }
        assigned.pop();
        perm[i] = usize::MAX;
    }
}

/// Checks every structure constant among assigned indices involving `new`.
fn consistent_with(ring: &FusionRing, kind: MapKind, perm: &[usize], assigned: &[usize], new: usize) -> bool {
    for &a in assigned {
        for &b in assigned {
            for &c in assigned {
                if a != new && b != new && c != new {
                    continue;
                }
                let img = match kind {
                    MapKind::Automorphism => ring.c(perm[a], perm[b], perm[c]),
                    MapKind::Antiautomorphism => ring.c(perm[b], perm[a], perm[c]),
                };
                if img != ring.c(a, b, c) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn automorphism_group(ring: &FusionRing) -> Vec<BasisMap> {
    structure_maps(ring, MapKind::Automorphism)
}

pub fn antiautomorphisms(ring: &FusionRing) -> Vec<BasisMap> {
    structure_maps(ring, MapKind::Antiautomorphism)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Fixed-point-free automorphisms of prime order, with that prime.
pub fn fixed_point_free(ring: &FusionRing) -> Vec<(BasisMap, usize)> {
    fixed_point_free_in(automorphism_group(ring))
}

pub fn fixed_point_free_in(group: Vec<BasisMap>) -> Vec<(BasisMap, usize)> {
    group
        .into_iter()
        .filter(|m| is_prime(m.order) && m.is_fixed_point_free())
        .map(|m| {
            let p = m.order;
            debug_assert!(m.orbits.iter().skip(1).all(|o| o.len() == p));
            (m, p)
        })
        .collect()
}

/// The shift `x_{j,t} ↦ x_{j,t+1 mod p}` on a basis laid out as the unit
/// followed by consecutive blocks of size `p`.
pub fn block_shift(rank: usize, p: usize) -> Vec<usize> {
    let mut perm = vec![0; rank];
    for i in 1..rank {
        let b = (i - 1) / p;
        let t = (i - 1) % p;
        perm[i] = 1 + b * p + (t + 1) % p;
    }
    perm
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to this input.
    Skip,
    /// Reported without an expected value.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConformanceReport {
    pub prime: usize,
    pub checks: Vec<SuiteCheck>,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&SuiteCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ConformanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let s = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
                Status::Info => "info",
            };
            writeln!(f, "{s:>4}  {:<28} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

const CHAR_TOL: f64 = 1e-6;

/// Runs every consequence of having a fixed-point-free automorphism of prime
/// order that can be checked on a concrete ring.
pub fn conformance_suite(ring: &FusionRing, map: &BasisMap) -> Result<ConformanceReport> {
    let r = ring.rank();
    let p = map.order;
    if map.kind != MapKind::Automorphism
        || !is_structure_map(ring, &map.perm, MapKind::Automorphism)
    {
        return Err(Error::Precondition("map is not an automorphism".into()));
    }
    if !is_prime(p) || !map.is_fixed_point_free() {
        return Err(Error::Precondition(
            "map is not fixed-point-free of prime order".into(),
        ));
    }
    let phi = &map.perm;
    let mut checks = Vec::new();
    let mut push = |name, ok: bool, detail: String| {
        checks.push(SuiteCheck {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        })
    };

    let dims = fp_dimensions(ring)?;
    let f_total = dims.fpdim_total_exact;
    push(
        "integral-dimension",
        matches!(f_total, Some(f) if f % p as u64 == 1),
        match f_total {
            Some(f) => format!("FPdim {f}, {f} mod {p} = {}", f % p as u64),
            None => format!("non-integral, FPdim ≈ {:.6}", dims.fpdim_total),
        },
    );
    push(
        "rank-congruence",
        r % p == 1 % p,
        format!("rank {r} mod {p} = {}", r % p),
    );
    push(
        "dimension-preserved",
        (0..r).all(|i| (dims.dims[i] - dims.dims[phi[i]]).abs() < 1e-9),
        String::new(),
    );

    let prof = codegrees(ring);
    let pairing = match f_total {
        Some(f) => {
            let mut ok = prof.multiplicity(f) >= 1;
            for &(g, m) in &prof.integer_roots {
                let m = if g == f { m - 1 } else { m };
                ok &= m % p == 0;
            }
            ok &= prof.residual.degree() % p == 0;
            ok
        }
        None => false,
    };
    push(
        "codegree-orbit-pairing",
        pairing,
        format!("{:?}", prof.integer_roots),
    );

    let commutative = ring.is_commutative();
    let table = if commutative {
        Some(character_table(ring)?)
    } else {
        None
    };
    let mut fp_unique = Status::Skip;
    let mut orbit_codeg = Status::Skip;
    let mut nonreal = Status::Skip;
    let mut detail = String::from("noncommutative");
    if let Some(t) = &table {
        let close = |a: &[num_complex::Complex64], b: &[num_complex::Complex64]| {
            a.iter().zip(b).all(|(x, y)| (x - y).norm() < CHAR_TOL)
        };
        let composed: Vec<Vec<_>> = t
            .rows
            .iter()
            .map(|row| (0..r).map(|j| row[phi[j]]).collect())
            .collect();
        let fixed: Vec<usize> = (0..t.rows.len())
            .filter(|&c| close(&t.rows[c], &composed[c]))
            .collect();
        fp_unique = status(fixed == [0]);
        detail = format!("fixed characters {fixed:?}");
        let ok = composed.iter().enumerate().all(|(c, row)| {
            t.rows
                .iter()
                .position(|other| close(other, row))
                .is_some_and(|d| (t.codegrees[c] - t.codegrees[d]).abs() < CHAR_TOL)
        });
        orbit_codeg = status(ok);
        if p == 2 {
            nonreal = status(
                t.rows
                    .iter()
                    .skip(1)
                    .all(|row| row.iter().any(|z| z.im.abs() > CHAR_TOL)),
            );
        }
    }
    checks.push(SuiteCheck {
        name: "unique-fixed-character",
        status: fp_unique,
        detail,
    });
    checks.push(SuiteCheck {
        name: "character-orbit-codegrees",
        status: orbit_codeg,
        detail: String::new(),
    });

    if p == 2 {
        let is_dual = (0..r).all(|i| phi[i] == ring.dual(i));
        checks.push(SuiteCheck {
            name: "involution-is-duality",
            status: if commutative { status(is_dual) } else { Status::Info },
            detail: format!("φ = * : {is_dual}"),
        });
        let mats = ring.multiplication_matrices();
        let bad: Vec<usize> = (1..r)
            .filter(|&x| {
                mats[x].commutes_with(&mats[phi[x]]) && phi[x] != ring.dual(x)
            })
            .collect();
        checks.push(SuiteCheck {
            name: "commuting-pairs-dual",
            status: status(bad.is_empty()),
            detail: if bad.is_empty() {
                String::new()
            } else {
                format!("violations at {bad:?}")
            },
        });
        let odd = prof.integer_roots.iter().all(|&(f, _)| f % 2 == 1);
        checks.push(SuiteCheck {
            name: "odd-codegrees",
            status: status(odd),
            detail: String::new(),
        });
        let pt = pointed_part(ring);
        for (q, name) in [(3u64, "codegree-3-pointed-c3"), (5, "codegree-5-pointed-c5")] {
            let st = if !commutative {
                Status::Skip
            } else if prof.multiplicity(q) == 0 {
                Status::Skip
            } else {
                status(pt.group.is_cyclic_of_order(q as usize))
            };
            checks.push(SuiteCheck {
                name,
                status: st,
                detail: format!("pointed part {}", pt.group),
            });
        }
        checks.push(SuiteCheck {
            name: "nonreal-characters",
            status: nonreal,
            detail: String::new(),
        });
    }

    Ok(ConformanceReport { prime: p, checks })
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}
