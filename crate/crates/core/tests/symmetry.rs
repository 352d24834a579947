mod common;

use std::collections::BTreeSet;

use fusion_forge::catalog::{self, all_builtins};
use fusion_forge::symmetry::{
    antiautomorphisms, automorphism_group, conformance_suite, fixed_point_free, is_structure_map,
    MapKind, Status,
};
use fusion_forge::FusionRing;

fn brute_force_maps(ring: &FusionRing, anti: bool) -> BTreeSet<Vec<usize>> {
    let r = ring.rank();
    let rest: Vec<usize> = (1..r).collect();
    common::permutations(&rest)
        .into_iter()
        .map(|p| {
            let mut q = vec![0];
            q.extend(p);
            q
        })
        .filter(|p| {
            (0..r).all(|i| {
                (0..r).all(|j| {
                    (0..r).all(|k| {
                        let image = if anti { ring.c(p[j], p[i], p[k]) } else { ring.c(p[i], p[j], p[k]) };
                        image == ring.c(i, j, k)
                    })
                })
            })
        })
        .collect()
}

#[test]
fn automorphism_groups_match_brute_force() {
    for ring in all_builtins() {
        let ours: BTreeSet<Vec<usize>> = automorphism_group(&ring).into_iter().map(|m| m.perm).collect();
        assert_eq!(ours, brute_force_maps(&ring, false), "{:?}", ring.name());
        let anti: BTreeSet<Vec<usize>> = antiautomorphisms(&ring).into_iter().map(|m| m.perm).collect();
        assert_eq!(anti, brute_force_maps(&ring, true), "{:?}", ring.name());
    }
}

#[test]
fn klein_four_has_the_full_symmetric_group() {
    let ring = catalog::builtin("ZC2x2").unwrap();
    assert_eq!(automorphism_group(&ring).len(), 6);
    let fpf = fixed_point_free(&ring);
    assert_eq!(fpf.len(), 2);
    assert!(fpf.iter().all(|(m, p)| *p == 3 && m.order == 3));
}

#[test]
fn oddex_has_no_symmetry() {
    let ring = catalog::oddex().unwrap();
    assert_eq!(automorphism_group(&ring).len(), 1);
    assert!(fixed_point_free(&ring).is_empty());
}

#[test]
fn seven_element_cyclic_group_has_both_primes() {
    let ring = catalog::builtin("ZC7").unwrap();
    let primes: BTreeSet<usize> = fixed_point_free(&ring).into_iter().map(|(_, p)| p).collect();
    assert_eq!(primes, BTreeSet::from([2, 3]));
}

#[test]
fn conformance_suite_passes_on_builtins() {
    for ring in all_builtins() {
        for (map, p) in fixed_point_free(&ring) {
            let report = conformance_suite(&ring, &map).unwrap();
            assert_eq!(report.prime, p);
            assert!(report.passed(), "{:?} under {map}:\n{report}", ring.name());
            assert_eq!(report.get("integral-dimension").unwrap().status, Status::Pass);
        }
    }
}

#[test]
fn conformance_suite_rejects_non_automorphisms() {
    let ring = catalog::oddex().unwrap();
    let shift = fusion_forge::symmetry::BasisMap::new(vec![0, 2, 3, 1], MapKind::Automorphism);
    assert!(conformance_suite(&ring, &shift).is_err());
}

#[test]
fn figure_rings_have_their_automorphism() {
    for (name, p) in [("ZC3", 2), ("ZC5", 2), ("R_C7xC3", 2), ("S2", 3), ("S4", 3), ("R_C11xC5", 2), ("R_C13xC3", 2)] {
        let ring = catalog::builtin(name).unwrap();
        let fpf = fixed_point_free(&ring);
        assert!(fpf.iter().any(|(_, q)| *q == p), "{name}");
        assert!(fpf.iter().all(|(m, _)| is_structure_map(&ring, &m.perm, MapKind::Automorphism)));
    }
}

/// A fixed-point-free involution sends every element it commutes with
/// (as multiplication matrices) to its dual.
#[test]
fn commuting_involution_pairs_are_dual() {
    let mut rings = all_builtins();
    rings.push(catalog::f119_tensor());
    for ring in rings {
        let mats = ring.multiplication_matrices();
        for (map, p) in fixed_point_free(&ring) {
            if p != 2 {
                continue;
            }
            for x in 1..ring.rank() {
                if mats[x].commutes_with(&mats[map.perm[x]]) {
                    assert_eq!(map.perm[x], ring.dual(x), "{:?}", ring.name());
                }
            }
        }
    }
}
