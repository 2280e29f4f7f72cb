use bandforge::sweep::{antisymmetric_palindromes, palindrome_sweep, ExecMode, PALINDROME_VALUES};
use bandforge::tangle::{
    conway_expand, eval_conway, mirror_two_bridge, normalize_two_bridge, signature_two_bridge,
    two_bridge_equivalent, ConwayForm, TwoBridge,
};
use num_integer::Integer;
use proptest::prelude::*;

/// `sigma(S(p, q)) = -sum_{i=1}^{p-1} (-1)^floor(iq/p)` with `q` odd.
fn floor_sum_signature(p: i64, q: i64) -> i64 {
    let q = if q % 2 == 0 { q - p } else { q };
    -(1..p)
        .map(|i| if (i * q).div_euclid(p) % 2 == 0 { 1 } else { -1 })
        .sum::<i64>()
}

fn knot() -> impl Strategy<Value = TwoBridge> {
    (1i64..60, 1i64..120).prop_filter_map("coprime", |(h, q)| {
        let p = 2 * h + 1;
        (q % p != 0 && p.gcd(&q) == 1).then(|| normalize_two_bridge(p, q).unwrap())
    })
}

fn link_or_knot() -> impl Strategy<Value = (i64, i64)> {
    (2i64..400, 1i64..400).prop_filter("coprime", |(p, q)| q % p != 0 && p.gcd(q) == 1)
}

fn mod_inverse(q: i64, p: i64) -> i64 {
    let e = q.extended_gcd(&p);
    e.x.rem_euclid(p)
}

proptest! {
    #[test]
    fn conway_round_trip((p, q) in link_or_knot()) {
        let cf = conway_expand(p, q).unwrap();
        let back = TwoBridge::from_fraction(&eval_conway(&cf)).unwrap();
        prop_assert!(two_bridge_equivalent(&back, &normalize_two_bridge(p, q).unwrap()));
    }

    #[test]
    fn conway_form_text_round_trip(v in proptest::collection::vec(prop_oneof![-9i64..=-1, 1i64..=9], 1..8)) {
        let cf = ConwayForm::new(v).unwrap();
        prop_assert_eq!(cf.to_string().parse::<ConwayForm>().unwrap(), cf);
    }

    #[test]
    fn mirror_is_an_involution_and_negates_signature(k in knot()) {
        let m = mirror_two_bridge(&k);
        prop_assert_eq!(mirror_two_bridge(&m), k);
        let s = signature_two_bridge(&k).unwrap().get();
        prop_assert_eq!(signature_two_bridge(&m).unwrap().get(), -s);
    }

    #[test]
    fn signature_matches_floor_sum(k in knot()) {
        prop_assert_eq!(signature_two_bridge(&k).unwrap().get(), floor_sum_signature(k.p(), k.q()));
    }

    #[test]
    fn signature_invariant_under_inverse(k in knot()) {
        let inv = normalize_two_bridge(k.p(), mod_inverse(k.q(), k.p())).unwrap();
        prop_assert_eq!(signature_two_bridge(&inv).unwrap(), signature_two_bridge(&k).unwrap());
    }

    #[test]
    fn changing_one_entry_by_two_moves_signature_by_at_most_two(
        v in proptest::collection::vec(prop_oneof![-6i64..=-1, 1i64..=6], 1..7),
        idx in any::<prop::sample::Index>(),
        up in any::<bool>(),
    ) {
        // A +-2 change of one Conway entry is a crossing change.
        let i = idx.index(v.len());
        let mut w = v.clone();
        w[i] += if up { 2 } else { -2 };
        prop_assume!(w[i] != 0);
        let a = TwoBridge::from_fraction(&eval_conway(&ConwayForm::new(v).unwrap()));
        let b = TwoBridge::from_fraction(&eval_conway(&ConwayForm::new(w).unwrap()));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assume!(a.is_knot() && b.is_knot());
            let sa = signature_two_bridge(&a).unwrap().get();
            let sb = signature_two_bridge(&b).unwrap().get();
            prop_assert!((sa - sb).abs() <= 2, "{a} {sa} vs {b} {sb}");
        }
    }
}

#[test]
fn floor_sum_oracle_anchors() {
    assert_eq!(floor_sum_signature(5, 1), -4);
    assert_eq!(floor_sum_signature(5, 4), 4);
    assert_eq!(floor_sum_signature(3, 1), -2);
}

#[test]
fn palindrome_law_exhaustive() {
    let forms = antisymmetric_palindromes(4, &PALINDROME_VALUES);
    assert_eq!(forms.len(), 2 * (1 + 8 + 64 + 512 + 4096));
    let summary = palindrome_sweep(ExecMode::Sequential, &forms);
    assert!(summary.all_pass(), "{summary:?}");
}
