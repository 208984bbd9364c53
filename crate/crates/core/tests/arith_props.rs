use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;
use radmach::arith::{bernoulli, dedekind_sum, dedekind_sum_direct, partition_count};
use radmach::json::to_canonical_string;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (2i64..5000).prop_flat_map(|c| (1..c, Just(c))).prop_filter("coprime", |(d, c)| d.gcd(c) == 1)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #[test]
    fn dedekind_reciprocity((d, c) in coprime_pair()) {
        let lhs = dedekind_sum(d, c).unwrap() + dedekind_sum(c, d).unwrap();
        let rhs = q(-1, 4) + (q(d, c) + q(c, d) + q(1, c * d)) / BigRational::from_integer(12.into());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dedekind_antisymmetry((d, c) in coprime_pair()) {
        prop_assert_eq!(dedekind_sum(c - d, c).unwrap(), -dedekind_sum(d, c).unwrap());
    }

    #[test]
    fn six_c_times_dedekind_is_integral((d, c) in coprime_pair()) {
        let v = dedekind_sum(d, c).unwrap() * BigRational::from_integer((6 * c).into());
        prop_assert!(v.is_integer());
    }

    #[test]
    fn fast_dedekind_matches_definition((d, c) in (2i64..300).prop_flat_map(|c| (1..c, Just(c))).prop_filter("coprime", |(d, c)| d.gcd(c) == 1)) {
        prop_assert_eq!(dedekind_sum(d, c).unwrap(), dedekind_sum_direct(d, c).unwrap());
    }

    #[test]
    fn odd_bernoulli_numbers_vanish(k in 1usize..60) {
        prop_assert!(bernoulli(2 * k + 1).is_zero());
    }

    #[test]
    fn canonical_json_round_trips(xs in prop::collection::vec(any::<f64>(), 0..20), n in any::<i64>(), s in ".{0,12}") {
        let v = serde_json::json!({"xs": xs.iter().map(|x| radmach::json::float(*x)).collect::<Vec<_>>(), "n": n, "s": s});
        let once = to_canonical_string(&v);
        let twice = to_canonical_string(&serde_json::from_str(&once).unwrap());
        prop_assert_eq!(once, twice);
    }
}

/// Partitions of `n` into parts at most `m`, by enumeration.
fn count_parts(n: u64, m: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=m.min(n)).map(|k| count_parts(n - k, k)).sum()
}

#[test]
fn partition_count_matches_enumeration() {
    for n in 0..=40u64 {
        assert_eq!(partition_count(n).unwrap(), BigUint::from(count_parts(n, n)), "n = {n}");
    }
    assert!(BigUint::one() == partition_count(1).unwrap());
}
