mod common;

use std::collections::BTreeMap;

use fusion_forge::catalog::{self, all_builtins, Sign};
use fusion_forge::dimension::{fp_dimensions, invertibles};
use fusion_forge::poly::Poly;
use fusion_forge::spectral::{alpha_matrix, character_table, character_table_with_seed, codegrees};
use fusion_forge::IntMatrix;
use num_bigint::BigInt;

fn profile(name: &str) -> BTreeMap<u64, usize> {
    codegrees(&catalog::builtin(name).unwrap()).as_map()
}

#[test]
fn codegrees_of_named_rings() {
    assert_eq!(profile("R_C7xC3"), BTreeMap::from([(21, 1), (7, 2), (3, 2)]));
    assert_eq!(profile("S2"), BTreeMap::from([(16, 4), (4, 3)]));
    assert_eq!(profile("S4"), BTreeMap::from([(52, 1), (13, 3), (4, 3)]));
    assert_eq!(profile("R_C13xC3"), BTreeMap::from([(39, 1), (13, 4), (3, 2)]));
    assert_eq!(profile("R_C11xC5"), BTreeMap::from([(55, 1), (11, 2), (5, 4)]));
    assert_eq!(profile("oddex"), BTreeMap::from([(15, 1), (10, 1), (3, 1), (2, 1)]));
}

/// `(t-5)²(t² - (27a² ± 24a + 12)t + 45a² ± 40a + 20)`, ascending.
fn d5_expected(a: i64, s: i64) -> Poly {
    let quad = Poly::from_i64(&[45 * a * a + s * 40 * a + 20, -(27 * a * a + s * 24 * a + 12), 1]);
    let lin = Poly::from_i64(&[-5, 1]);
    &(&lin * &lin) * &quad
}

/// The family's multiplication matrices with `b = a ± 1` allowed negative.
fn d5_signed_alpha(a: i64, b: i64) -> IntMatrix {
    let rules = [
        [[0, 1, 0, 0], [1, a, b, b], [0, b, b, a], [0, b, a, a]],
        [[0, 0, 1, 0], [0, b, b, a], [1, b, a, b], [0, a, b, a]],
        [[0, 0, 0, 1], [0, b, a, a], [0, a, b, a], [1, a, a, a]],
    ];
    let mut acc = IntMatrix::identity(4);
    for rule in rules {
        // rule[j][k] = c_{ij}^k, so N_i has rows rule^T; the family is
        // self-dual, so N_i N_{i*} = N_i N_iᵀ.
        let n = IntMatrix::from_rows(&rule).transpose();
        acc = &acc + &(&n * &n.transpose());
    }
    acc
}

#[test]
fn d5_family_characteristic_polynomials() {
    for a in 0..4i64 {
        for (sign, s) in [(Sign::Plus, 1), (Sign::Minus, -1)] {
            let expected = d5_expected(a, s);
            match catalog::d5_family(a as u32, sign) {
                Ok(ring) => {
                    assert_eq!(codegrees(&ring).charpoly, expected, "a = {a}, sign {s}");
                    assert_eq!(alpha_matrix(&ring), d5_signed_alpha(a, a + s));
                }
                Err(_) => {
                    assert_eq!((a, s), (0, -1));
                    assert_eq!(Poly::charpoly(&d5_signed_alpha(a, a + s)), expected);
                }
            }
        }
    }
}

#[test]
fn d5_integer_codegrees_only_at_zero_plus() {
    for a in 0..4u32 {
        for sign in [Sign::Plus, Sign::Minus] {
            if let Ok(ring) = catalog::d5_family(a, sign) {
                assert_eq!(codegrees(&ring).all_integer, a == 0 && sign == Sign::Plus, "a = {a} {sign:?}");
            }
        }
    }
}

#[test]
fn charpoly_agrees_with_determinants() {
    for ring in all_builtins() {
        let a = alpha_matrix(&ring);
        let cp = codegrees(&ring).charpoly;
        let r = ring.rank() as i64;
        for t in -2..r + 3 {
            let m: Vec<Vec<i128>> = (0..ring.rank())
                .map(|i| (0..ring.rank()).map(|j| i128::from(i == j) * t as i128 - a[(i, j)] as i128).collect())
                .collect();
            assert_eq!(cp.eval(&BigInt::from(t)), BigInt::from(common::det(m)), "{:?} at {t}", ring.name());
        }
    }
}

#[test]
fn integer_roots_agree_with_nullities() {
    for ring in all_builtins().into_iter().filter(|r| r.is_commutative()) {
        let prof = codegrees(&ring);
        let a = common::alpha(&common::nested(&ring), ring.duality());
        let bound = a.iter().map(|r| r.iter().sum::<i128>()).max().unwrap();
        let oracle: Vec<(u64, usize)> = common::integer_eigenvalues(&a, bound)
            .into_iter()
            .map(|(m, k)| (m as u64, k))
            .collect();
        assert_eq!(prof.integer_roots, oracle, "{:?}", ring.name());
    }
}

#[test]
fn character_rows_reproduce_codegrees() {
    for ring in all_builtins().into_iter().filter(|r| r.is_commutative()) {
        let table = character_table(&ring).unwrap();
        assert!(table.orthogonality_defect(&ring) < 1e-6, "{:?}", ring.name());
        assert!(table.homomorphism_defect(&ring) < 1e-6, "{:?}", ring.name());
        let prof = codegrees(&ring);
        let mut from_rows: BTreeMap<u64, usize> = BTreeMap::new();
        for (c, row) in table.rows.iter().enumerate() {
            let f: f64 = (0..ring.rank()).map(|x| (row[x] * row[ring.dual(x)]).re).sum();
            assert!((f - table.codegrees[c]).abs() < 1e-6);
            if prof.all_integer {
                let n = f.round();
                assert!((f - n).abs() < 1e-6, "{:?}: {f}", ring.name());
                *from_rows.entry(n as u64).or_default() += 1;
            }
        }
        if prof.all_integer {
            assert_eq!(from_rows, prof.as_map(), "{:?}", ring.name());
        }
    }
}

#[test]
fn oddex_characters_are_real() {
    let ring = catalog::oddex().unwrap();
    let table = character_table(&ring).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.rows.iter().flatten().all(|z| z.im.abs() < 1e-9));
}

#[test]
fn seed_changes_nothing_exact() {
    let ring = catalog::builtin("R_C13xC3").unwrap();
    let a = character_table_with_seed(&ring, 1).unwrap();
    let b = character_table_with_seed(&ring, 99).unwrap();
    for (x, y) in a.codegrees.iter().zip(&b.codegrees) {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn dimensions_are_characters() {
    for ring in all_builtins() {
        let dims = fp_dimensions(&ring).unwrap();
        let numeric = common::fp_dims_numeric(&ring);
        for (a, b) in dims.dims.iter().zip(&numeric) {
            assert!((a - b).abs() < 1e-8, "{:?}", ring.name());
        }
        let r = ring.rank();
        for i in 0..r {
            for j in 0..r {
                let s: f64 = (0..r).map(|k| ring.c(i, j, k) as f64 * dims.dims[k]).sum();
                assert!((s - dims.dims[i] * dims.dims[j]).abs() < 1e-8);
                if let Some(d) = &dims.exact {
                    let s: u64 = (0..r).map(|k| ring.c(i, j, k) as u64 * d[k]).sum();
                    assert_eq!(s, d[i] * d[j]);
                }
            }
        }
        assert_eq!(invertibles(&ring), (0..r).filter(|&i| (dims.dims[i] - 1.0).abs() < 1e-9).collect::<Vec<_>>());
    }
}

#[test]
fn even_dimension_forces_a_self_dual_element() {
    for ring in all_builtins() {
        let dims = fp_dimensions(&ring).unwrap();
        let Some(d) = dims.exact else { continue };
        if d.iter().any(|x| x * x % 2 == 0) {
            assert!((1..ring.rank()).any(|i| ring.is_self_dual(i)), "{:?}", ring.name());
        }
        let all_paired = (1..ring.rank()).all(|i| !ring.is_self_dual(i));
        if ring.is_commutative() && all_paired {
            assert_eq!(dims.fpdim_total_exact.unwrap() % 2, 1, "{:?}", ring.name());
        }
    }
}
