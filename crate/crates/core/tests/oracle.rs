mod common;

use std::collections::BTreeSet;

use fusion_forge::completer::complete;
use fusion_forge::dimension::fp_dimensions;
use fusion_forge::sieve::{sieve, RuleFlags, SearchSpec};

use common::{brute_force, ring_key};

fn searched(rank: usize, p: usize, flags: RuleFlags) -> BTreeSet<(Vec<i64>, Vec<usize>)> {
    let spec = SearchSpec::new(rank, p).unwrap().with_flags(flags);
    let mut out = BTreeSet::new();
    for c in sieve(&spec).kept() {
        for ring in complete(c, &spec).unwrap() {
            let dims = fp_dimensions(&ring).unwrap().integer_dims().to_vec();
            out.insert(ring_key(&ring, &dims));
        }
    }
    out
}

#[test]
fn unit_fraction_bounds() {
    assert_eq!(common::unit_fraction_bound(3), 6);
    assert_eq!(common::unit_fraction_bound(4), 42);
    assert_eq!(common::unit_fraction_bound(5), 1806);
}

#[test]
fn rank_three_and_four_match_brute_force() {
    for (rank, p) in [(3, 2), (4, 3)] {
        let brute = brute_force(rank, p);
        assert_eq!(brute.len(), 1, "rank {rank}");
        assert_eq!(searched(rank, p, RuleFlags::all()), brute, "rank {rank}");
    }
}

#[test]
fn rank_five_matches_brute_force() {
    let brute = brute_force(5, 2);
    assert_eq!(brute.len(), 2);
    assert_eq!(searched(5, 2, RuleFlags::all()), brute);
    assert_eq!(searched(5, 2, RuleFlags::none()), brute);
}
