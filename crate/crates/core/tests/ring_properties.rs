mod common;

use fusion_forge::catalog::{self, all_builtins};
use fusion_forge::completer::canonical_form;
use fusion_forge::dimension::fp_dimensions;
use fusion_forge::document;
use fusion_forge::{validate, Coeff, FusionRing, IntMatrix};
use proptest::prelude::*;

fn oddex_from_matrices() -> FusionRing {
    // N_i rows as printed: (N_i)_{k,j} = c_{ij}^k.
    let mats = [
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        [[0, 0, 1, 0], [0, 0, 1, 0], [1, 1, 1, 0], [0, 0, 0, 2]],
        [[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 2], [1, 1, 2, 1]],
    ];
    let mut flat = vec![0; 64];
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                flat[(i * 4 + j) * 4 + k] = mats[i][k][j];
            }
        }
    }
    FusionRing::from_flat(4, flat, vec![0, 1, 2, 3]).unwrap()
}

#[test]
fn oddex_is_a_commutative_fusion_ring() {
    let ring = oddex_from_matrices();
    let report = validate(&ring);
    assert!(report.is_valid(), "{report}");
    assert!(ring.is_commutative());
    assert_eq!(ring.flat_table(), catalog::oddex().unwrap().flat_table());
    let dims = fp_dimensions(&ring).unwrap();
    assert_eq!(dims.exact.as_deref(), Some(&[1, 1, 2, 3][..]));
    assert_eq!(dims.fpdim_total_exact, Some(15));
}

/// Every ±1 change of a single entry breaks an axiom, except at
/// `c_{33}^3`: that triple is its own symmetry class, and `x² = 1 + g + 2y + m·x`
/// is a (non-integral) fusion ring for every `m`.
#[test]
fn single_entry_mutations_of_oddex() {
    let ring = catalog::oddex().unwrap();
    let base = ring.flat_table().to_vec();
    let mut survivors = Vec::new();
    let mut tried = 0;
    for pos in 0..base.len() {
        for delta in [-1i64, 1] {
            let v = base[pos] as i64 + delta;
            if v < 0 {
                continue;
            }
            let mut t = base.clone();
            t[pos] = v as Coeff;
            let mutated = FusionRing::from_flat(4, t, ring.duality().to_vec()).unwrap();
            let ours = validate(&mutated).is_valid();
            assert_eq!(ours, common::is_fusion_ring(&common::nested(&mutated), mutated.duality()));
            if ours {
                assert!(!fp_dimensions(&mutated).unwrap().is_integral);
                survivors.push((pos, delta));
            }
            tried += 1;
        }
    }
    assert!(tried > 64);
    assert_eq!(survivors, [(63, -1), (63, 1)]);
}

#[test]
fn regular_representation_identity() {
    for ring in all_builtins() {
        let r = ring.rank();
        let mats = ring.multiplication_matrices();
        assert_eq!(mats[0], IntMatrix::identity(r));
        for i in 0..r {
            assert_eq!(mats[ring.dual(i)], mats[i].transpose(), "{:?} N_{i}*", ring.name());
            assert_eq!((&mats[i] * &mats[ring.dual(i)])[(0, 0)], 1);
            for j in 0..r {
                let mut rhs = IntMatrix::zeros(r);
                for k in 0..r {
                    rhs = &rhs + &mats[k].scale(ring.c(i, j, k) as i64);
                }
                assert_eq!(&mats[i] * &mats[j], rhs, "{:?} N_{i} N_{j}", ring.name());
            }
        }
    }
}

#[test]
fn builtins_pass_the_literal_axiom_check() {
    for ring in all_builtins() {
        assert!(common::is_fusion_ring(&common::nested(&ring), ring.duality()), "{:?}", ring.name());
    }
}

#[test]
fn documents_round_trip() {
    for ring in all_builtins() {
        let text = document::emit(&ring);
        assert_eq!(document::parse(&text).unwrap(), ring);
    }
}

fn builtin_index() -> impl Strategy<Value = usize> {
    0..all_builtins().len()
}

/// A permutation of `0..r` fixing 0, driven by a seed.
fn perm_from(seed: &[usize], r: usize) -> Vec<usize> {
    let mut rest: Vec<usize> = (1..r).collect();
    let mut perm = vec![0];
    for &s in seed.iter().take(r - 1) {
        perm.push(rest.remove(s % rest.len()));
    }
    perm
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_preserves_validity_and_canonical_form(
        idx in builtin_index(),
        seed in prop::collection::vec(0usize..64, 8),
    ) {
        let ring = all_builtins().swap_remove(idx);
        let r = ring.rank();
        let perm = perm_from(&seed, r);
        let moved = ring.relabel(&perm).unwrap();
        prop_assert!(validate(&moved).is_valid());
        prop_assert_eq!(common::is_fusion_ring(&common::nested(&moved), moved.duality()), true);
        let dims = fp_dimensions(&ring).unwrap();
        if let Some(d) = dims.exact.clone() {
            if r <= 9 {
                let moved_dims: Vec<u64> = perm.iter().map(|&o| d[o]).collect();
                let a = canonical_form(&ring, &d).unwrap();
                let b = canonical_form(&moved, &moved_dims).unwrap();
                prop_assert_eq!(a.flat_table(), b.flat_table());
                prop_assert_eq!(common::ring_key(&ring, &d), common::ring_key(&moved, &moved_dims));
            }
        }
    }

    #[test]
    fn validator_agrees_with_literal_axioms(
        r in 1usize..4,
        entries in prop::collection::vec(0u32..3, 27),
        dual_seed in 0usize..4,
    ) {
        let dual = match (r, dual_seed % 2) {
            (3, 1) => vec![0, 2, 1],
            _ => (0..r).collect(),
        };
        let mut t: Vec<Coeff> = entries[..r * r * r].to_vec();
        // Force the unit row and column so that the search space is not
        // dominated by trivially broken tables.
        for j in 0..r {
            for k in 0..r {
                let d = Coeff::from(j == k);
                t[j * r + k] = d;
                t[(j * r) * r + k] = d;
            }
        }
        let ring = FusionRing::from_flat(r, t, dual.clone()).unwrap();
        let ours = validate(&ring).is_valid();
        let literal = common::is_fusion_ring(&common::nested(&ring), &dual);
        prop_assert_eq!(ours, literal);
    }
}
