//! Reference implementations used as test oracles. Everything here is written
//! straight from the definitions and shares no code with the library beyond
//! the `FusionRing` container.

#![allow(dead_code)]

use std::collections::BTreeSet;

use fusion_forge::sieve::{sieve, Candidate, SearchSpec};
use fusion_forge::{Coeff, FusionRing};

pub type Table = Vec<Vec<Vec<i64>>>;

pub fn nested(ring: &FusionRing) -> Table {
    let r = ring.rank();
    (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|k| ring.c(i, j, k) as i64).collect()).collect())
        .collect()
}

/// Fusion ring axioms checked literally on a nested table `t[i][j][k] = c_{ij}^k`.
pub fn is_fusion_ring(t: &Table, dual: &[usize]) -> bool {
    let r = t.len();
    if r == 0 || dual.len() != r || dual[0] != 0 {
        return false;
    }
    if (0..r).any(|i| dual[i] >= r || dual[dual[i]] != i) {
        return false;
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let c = t[i][j][k];
                if c < 0 {
                    return false;
                }
                let delta = i64::from(j == k);
                if t[0][j][k] != delta || t[j][0][k] != delta {
                    return false;
                }
                if k == 0 && c != i64::from(j == dual[i]) {
                    return false;
                }
                // Frobenius reciprocity and the duality anti-automorphism.
                if c != t[dual[i]][k][j] || c != t[dual[j]][dual[i]][dual[k]] {
                    return false;
                }
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for l in 0..r {
                    let left: i64 = (0..r).map(|m| t[i][j][m] * t[m][k][l]).sum();
                    let right: i64 = (0..r).map(|m| t[j][k][m] * t[i][m][l]).sum();
                    if left != right {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Bareiss fraction-free determinant.
pub fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_of(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(p, rank);
        for i in rank + 1..rows {
            let f = a[i][c];
            let g = a[rank][c];
            for j in 0..cols {
                a[i][j] = a[i][j] * g - a[rank][j] * f;
            }
            let d = a[i].iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
            if d > 1 {
                a[i].iter_mut().for_each(|x| *x /= d);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Matrix of multiplication by `Σ_b b·b*`, i.e. `Σ_i N_i N_{i*}`.
pub fn alpha(t: &Table, dual: &[usize]) -> Vec<Vec<i128>> {
    let r = t.len();
    let mut out = vec![vec![0i128; r]; r];
    for i in 0..r {
        let di = dual[i];
        // (N_i)_{k,j} = t[i][j][k]
        for k in 0..r {
            for j in 0..r {
                out[k][j] += (0..r).map(|m| (t[i][m][k] * t[di][j][m]) as i128).sum::<i128>();
            }
        }
    }
    out
}

/// Integer eigenvalues of a diagonalizable integer matrix with their
/// multiplicities (via nullities), searched in `1..=bound`.
pub fn integer_eigenvalues(a: &[Vec<i128>], bound: i128) -> Vec<(i128, usize)> {
    let n = a.len();
    let mut out = Vec::new();
    for m in 1..=bound {
        let shifted: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| a[i][j] - if i == j { m } else { 0 }).collect())
            .collect();
        let null = n - rank_of(shifted);
        if null > 0 {
            out.push((m, null));
        }
    }
    out
}

/// Frobenius-Perron dimensions by power iteration: `d` is the positive
/// common eigenvector of the maps `L_i: v ↦ (Σ_k c_{ij}^k v_k)_j`, scaled so
/// the unit has dimension 1.
pub fn fp_dims_numeric(ring: &FusionRing) -> Vec<f64> {
    let r = ring.rank();
    let mut v = vec![1.0f64; r];
    for _ in 0..5000 {
        let mut w = vec![0.0; r];
        for i in 0..r {
            for j in 0..r {
                w[j] += (0..r).map(|k| ring.c(i, j, k) as f64 * v[k]).sum::<f64>();
            }
        }
        let s = w[0];
        v = w.iter().map(|x| x / s).collect();
    }
    v
}

pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Isomorphism key: least (table, duality) over relabelings that fix the
/// unit and preserve `dims`, with new index `a` taken from old `perm[a]`.
pub fn iso_key(t: &Table, dual: &[usize], dims: &[u64]) -> (Vec<i64>, Vec<usize>) {
    let r = t.len();
    let mut order: Vec<usize> = (1..r).collect();
    order.sort_by_key(|&i| dims[i]);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if dims[g[0]] == dims[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut perms: Vec<Vec<usize>> = vec![vec![0]];
    for g in &groups {
        let choices = permutations(g);
        perms = perms
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut q = p.clone();
                    q.extend(c);
                    q
                })
            })
            .collect();
    }
    let mut inv = vec![0; r];
    perms
        .into_iter()
        .map(|perm| {
            for (a, &o) in perm.iter().enumerate() {
                inv[o] = a;
            }
            let mut flat = Vec::with_capacity(r * r * r);
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        flat.push(t[perm[a]][perm[b]][perm[c]]);
                    }
                }
            }
            let d: Vec<usize> = (0..r).map(|a| inv[dual[perm[a]]]).collect();
            (flat, d)
        })
        .min()
        .expect("at least the identity")
}

pub fn ring_key(ring: &FusionRing, dims: &[u64]) -> (Vec<i64>, Vec<usize>) {
    iso_key(&nested(ring), ring.duality(), dims)
}

pub fn to_ring(t: &Table, dual: &[usize]) -> FusionRing {
    let r = t.len();
    let flat: Vec<Coeff> = t.iter().flatten().flatten().map(|&c| c as Coeff).collect();
    FusionRing::from_flat(r, flat, dual.to_vec()).expect("well formed")
}

/// Largest denominator in a decomposition of 1 into `n` unit fractions
/// (2, 6, 42, 1806, ...).
pub fn unit_fraction_bound(n: usize) -> u64 {
    let mut s = 2u64; // Sylvester: 2, 3, 7, 43, 1807
    for _ in 1..n {
        s = s * (s - 1) + 1;
    }
    s - 1
}

fn involutions(r: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, cur: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let r = cur.len();
        if i == r {
            out.push(cur.iter().map(|x| x.unwrap()).collect());
            return;
        }
        if cur[i].is_some() {
            return go(i + 1, cur, out);
        }
        cur[i] = Some(i);
        go(i + 1, cur, out);
        for j in i + 1..r {
            if cur[j].is_none() {
                cur[i] = Some(j);
                cur[j] = Some(i);
                go(i + 1, cur, out);
                cur[j] = None;
            }
        }
        cur[i] = None;
    }
    let mut out = Vec::new();
    let mut cur = vec![None; r];
    cur[0] = Some(0);
    go(1, &mut cur, &mut out);
    out
}

fn nondecreasing(n: usize, max_sq: u64) -> Vec<Vec<u64>> {
    fn go(n: usize, lo: u64, budget: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        let mut d = lo;
        while d * d * n as u64 <= budget {
            cur.push(d);
            go(n - 1, d, budget - d * d, cur, out);
            cur.pop();
            d += 1;
        }
    }
    let mut out = Vec::new();
    go(n, 1, max_sq, &mut Vec::new(), &mut out);
    out
}

/// Every commutative fusion ring of the given rank whose basis is the unit
/// plus `(rank-1)/p` blocks of size `p` permuted cyclically by an
/// automorphism, with all formal codegrees integral, up to isomorphism.
///
/// Bounds: with integral codegrees, `1 = Σ 1/f` over `rank` codegrees, so
/// the largest one, `FPdim(R) = 1 + p Σ d²`, is at most the extremal
/// unit-fraction denominator for `rank` terms. Structure constants satisfy
/// `c_{ij}^k d_k ≤ d_i d_j`.
pub fn brute_force(rank: usize, p: usize) -> BTreeSet<(Vec<i64>, Vec<usize>)> {
    let n = (rank - 1) / p;
    assert_eq!(n * p + 1, rank);
    let f_max = unit_fraction_bound(rank);
    let shift: Vec<usize> = (0..rank)
        .map(|i| if i == 0 { 0 } else { 1 + (i - 1) / p * p + ((i - 1) % p + 1) % p })
        .collect();
    let mut found = BTreeSet::new();
    for orbit_dims in nondecreasing(n, (f_max - 1) / p as u64) {
        let mut dims = vec![1u64];
        for &d in &orbit_dims {
            dims.extend(std::iter::repeat(d).take(p));
        }
        let fpdim: u64 = dims.iter().map(|d| d * d).sum();
        for dual in involutions(rank) {
            if (0..rank).any(|i| dims[dual[i]] != dims[i] || dual[shift[i]] != shift[dual[i]]) {
                continue;
            }
            enumerate_tables(&dims, &dual, &shift, &mut |t| {
                if !is_fusion_ring(t, &dual) {
                    return;
                }
                let eig = integer_eigenvalues(&alpha(t, &dual), fpdim as i128);
                if eig.iter().map(|e| e.1).sum::<usize>() != rank {
                    return;
                }
                found.insert(iso_key(t, &dual, &dims));
            });
        }
    }
    found
}

fn enumerate_tables(dims: &[u64], dual: &[usize], shift: &[usize], visit: &mut dyn FnMut(&Table)) {
    let r = dims.len();
    let idx = |i: usize, j: usize, k: usize| (i * r + j) * r + k;
    // Orbit representatives of the free triples under the symmetries every
    // solution must have.
    let mut class = vec![usize::MAX; r * r * r];
    let mut classes: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for i in 1..r {
        for j in 1..r {
            for k in 1..r {
                if class[idx(i, j, k)] != usize::MAX {
                    continue;
                }
                let id = classes.len();
                let mut members = vec![(i, j, k)];
                class[idx(i, j, k)] = id;
                let mut q = 0;
                while q < members.len() {
                    let (a, b, c) = members[q];
                    q += 1;
                    for m in [
                        (b, a, c),
                        (b, dual[c], dual[a]),
                        (dual[b], dual[a], dual[c]),
                        (shift[a], shift[b], shift[c]),
                    ] {
                        if class[idx(m.0, m.1, m.2)] == usize::MAX {
                            class[idx(m.0, m.1, m.2)] = id;
                            members.push(m);
                        }
                    }
                }
                classes.push(members);
            }
        }
    }
    let upper: Vec<i64> = classes
        .iter()
        .map(|m| m.iter().map(|&(i, j, k)| (dims[i] * dims[j] / dims[k]) as i64).min().unwrap())
        .collect();
    let mut t: Table = vec![vec![vec![0; r]; r]; r];
    for j in 0..r {
        t[0][j][j] = 1;
        t[j][0][j] = 1;
    }
    for i in 1..r {
        t[i][dual[i]][0] = 1;
    }
    let mut assigned = vec![false; r * r * r];
    for i in 0..r {
        for j in 0..r {
            assigned[idx(i, j, 0)] = true;
            assigned[idx(0, i, j)] = true;
            assigned[idx(i, 0, j)] = true;
        }
    }
    let feasible = |t: &Table, assigned: &[bool]| {
        for i in 1..r {
            for j in 1..r {
                let target = (dims[i] * dims[j]) as i64;
                let mut lo = 0i64;
                let mut hi = 0i64;
                for k in 0..r {
                    let d = dims[k] as i64;
                    if assigned[idx(i, j, k)] {
                        lo += t[i][j][k] * d;
                        hi += t[i][j][k] * d;
                    } else {
                        hi += upper[class[idx(i, j, k)]] * d;
                    }
                }
                if lo > target || hi < target {
                    return false;
                }
            }
        }
        true
    };
    fn go(
        c: usize,
        classes: &[Vec<(usize, usize, usize)>],
        upper: &[i64],
        t: &mut Table,
        assigned: &mut Vec<bool>,
        feasible: &dyn Fn(&Table, &[bool]) -> bool,
        idx: &dyn Fn(usize, usize, usize) -> usize,
        visit: &mut dyn FnMut(&Table),
    ) {
        if c == classes.len() {
            visit(t);
            return;
        }
        for v in 0..=upper[c] {
            for &(i, j, k) in &classes[c] {
                t[i][j][k] = v;
                assigned[idx(i, j, k)] = true;
            }
            if feasible(t, assigned) {
                go(c + 1, classes, upper, t, assigned, feasible, idx, visit);
            }
        }
        for &(i, j, k) in &classes[c] {
            t[i][j][k] = 0;
            assigned[idx(i, j, k)] = false;
        }
    }
    go(0, &classes, &upper, &mut t, &mut assigned, &feasible, &idx, visit);
}

/// The sieve candidate of a search with the given `F` and dims.
pub fn candidate(rank: usize, p: usize, fpdim: u64, dims: &[u64]) -> (SearchSpec, Candidate) {
    let spec = SearchSpec::new(rank, p).unwrap();
    let c = sieve(&spec)
        .candidates
        .into_iter()
        .find(|c| c.list.fpdim == fpdim && c.dims == dims)
        .unwrap_or_else(|| panic!("no candidate F = {fpdim}, dims {dims:?}"));
    (spec, c)
}
