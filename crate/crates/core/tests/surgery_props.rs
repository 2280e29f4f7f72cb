use bandforge::surgery::{
    amphicheiral_pair_distance, double_branched_cover, lens_equivalent, lens_mirror,
    slope_distance, LensSpace, Slope,
};
use bandforge::tangle::{mirror_two_bridge, normalize_two_bridge};
use num_integer::Integer;
use proptest::prelude::*;

fn lens_spaces(p: i64) -> Vec<LensSpace> {
    (1..p)
        .filter(|q| q.gcd(&p) == 1)
        .map(|q| LensSpace::new(p, q).unwrap())
        .collect()
}

#[test]
fn lens_equivalence_is_an_equivalence_relation() {
    for p in 2..=60 {
        let all = lens_spaces(p);
        for oriented in [true, false] {
            let rel = |a: &LensSpace, b: &LensSpace| lens_equivalent(a, b, oriented);
            for a in &all {
                assert!(rel(a, a));
                for b in &all {
                    assert_eq!(rel(a, b), rel(b, a));
                    if !rel(a, b) {
                        continue;
                    }
                    for c in &all {
                        if rel(b, c) {
                            assert!(rel(a, c), "{a} {b} {c} oriented={oriented}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unoriented_equivalence_identifies_mirrors() {
    for p in 2..=60 {
        for a in lens_spaces(p) {
            assert!(lens_equivalent(&a, &lens_mirror(&a), false));
            assert_eq!(lens_mirror(&lens_mirror(&a)), a);
        }
    }
}

#[test]
fn cover_commutes_with_mirror() {
    for p in 2..=40 {
        for q in (1..p).filter(|q| q.gcd(&p) == 1) {
            let k = normalize_two_bridge(p, q).unwrap();
            assert_eq!(
                double_branched_cover(&mirror_two_bridge(&k)),
                lens_mirror(&double_branched_cover(&k))
            );
        }
    }
}

fn slope() -> impl Strategy<Value = Slope> {
    (-500i64..500, 0i64..500)
        .prop_filter("primitive", |(p, q)| p.gcd(q) == 1)
        .prop_map(|(p, q)| Slope::new(p, q).unwrap())
}

proptest! {
    #[test]
    fn slope_distance_is_symmetric(a in slope(), b in slope()) {
        prop_assert_eq!(slope_distance(&a, &b), slope_distance(&b, &a));
        prop_assert_eq!(slope_distance(&a, &a), 0);
    }

    #[test]
    fn slope_text_round_trip(a in slope()) {
        prop_assert_eq!(a.to_string().parse::<Slope>().unwrap(), a);
    }

    #[test]
    fn amphicheiral_distance_is_twice_pq(a in slope()) {
        if a.p() != 0 && a.q() != 0 {
            prop_assert_eq!(amphicheiral_pair_distance(&a).unwrap(), 2 * (a.p() * a.q()).unsigned_abs());
        } else {
            prop_assert!(amphicheiral_pair_distance(&a).is_err());
        }
    }
}
