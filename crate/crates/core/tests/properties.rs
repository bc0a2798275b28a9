use std::collections::BTreeMap;

use num_bigint::BigUint;
use permx_core::avoidance::merge_count_upper_check;
use permx_core::bounds::{binomial, fox_rhs, lemma22_rhs, marcus_tardos_bound, parse_rational};
use permx_core::extremal::{exfn_exact, fpts_exact, gpts_exact, DEFAULT_BUDGET};
use permx_core::oracle;
use permx_core::schedule::{bulk_constants, check_names, FloorMode};
use permx_core::*;
use proptest::prelude::*;

fn p(text: &str) -> Permutation {
    text.parse().unwrap()
}

fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

#[test]
fn symmetry_classes_share_counts() {
    let config = SearchConfig::default();
    for k in 1..=4 {
        for pi in Permutation::all(k) {
            for n in 0..=7 {
                let c = count_avoiders(&pi, n, &config).unwrap();
                for q in [pi.reverse(), pi.complement(), pi.inverse()] {
                    assert_eq!(count_avoiders(&q, n, &config).unwrap(), c, "{pi} {q} n={n}");
                }
            }
        }
    }
}

#[test]
fn trivial_counts() {
    let config = SearchConfig::default();
    for n in 1..=9 {
        assert_eq!(count_avoiders(&p("12"), n, &config).unwrap(), BigUint::from(1u32));
    }
    assert_eq!(count_avoiders(&p("1"), 3, &config).unwrap(), BigUint::from(0u32));
    let est = sw_estimate_sequence(&p("123"), 5, &config).unwrap();
    assert!((est[4].value - 42f64.powf(0.2)).abs() < 1e-9 * est[4].value);
    assert!(sw_estimate_sequence(&p("12"), 5, &config).unwrap().iter().all(|e| e.value == 1.0));
}

#[test]
fn merge_count_small_cases() {
    let config = SearchConfig::default();
    for n in 1..=5 {
        let r = merge_count_upper_check(&p("1"), &p("1"), n, &config).unwrap();
        assert_eq!(r.lhs, BigUint::from(0u32));
    }
    let r = merge_count_upper_check(&p("123"), &p("123"), 3, &config).unwrap();
    assert_eq!(r.lhs, BigUint::from(6u32));
    // brute force over every permutation and colouring
    for n in 1..=6 {
        let r = merge_count_upper_check(&p("12"), &p("21"), n, &config).unwrap();
        let brute = Permutation::all(n)
            .filter(|h| oracle::merge_member_naive(h, &p("12"), &p("21")))
            .count();
        assert_eq!(r.lhs, BigUint::from(brute));
        assert!(r.pass);
    }
}

#[test]
fn jv_inclusion_small_sums() {
    let config = SearchConfig::default();
    let r = verify_jv_inclusion(&p("12"), &p("1"), &p("1"), 5, &config).unwrap();
    assert!(r.pass);
    assert_eq!(r.avoided, p("1234"));
    let r = verify_jv_inclusion(&p("1"), &p("1"), &p("1"), 1, &config).unwrap();
    assert!(r.pass && r.checked == 1);
}

#[test]
fn tiling_inequality_on_small_products() {
    let i2 = PermutationMatrix::identity(2);
    let table: BTreeMap<u64, u64> = (1..=6u64)
        .map(|m| (m, exfn_exact(&i2, m as usize, DEFAULT_BUDGET).unwrap().value as u64))
        .collect();
    for t in 1..=6u64 {
        for n in 1..=6 / t {
            for s in 2..=t {
                let f = fpts_exact(&i2, t as usize, s as usize, 100, DEFAULT_BUDGET).unwrap();
                let g = gpts_exact(&i2, t as usize, s as usize, 100, DEFAULT_BUDGET).unwrap();
                let rhs = fox_rhs(
                    &table,
                    t,
                    s,
                    f.value.finite().unwrap() as u64,
                    g.value.finite().unwrap() as u64,
                    n,
                )
                .unwrap();
                assert!(BigUint::from(table[&(t * n)]) <= rhs, "t={t} s={s} n={n}");
            }
        }
    }
}

#[test]
fn extremal_values_stay_below_marcus_tardos() {
    for k in 2..=3 {
        for pi in Permutation::all(k) {
            let pm = to_matrix(&pi);
            for n in 1..=5 {
                let r = exfn_exact(&pm, n, DEFAULT_BUDGET).unwrap();
                assert!(r.proven_optimal);
                assert!(BigUint::from(r.value) <= marcus_tardos_bound(k as u64) * n);
            }
        }
    }
}

#[test]
fn rotation_symmetric_patterns_have_equal_f_and_g() {
    for pi in (1..=3).flat_map(Permutation::all) {
        let pm = to_matrix(&pi);
        if pm.rotate90() != pm {
            continue;
        }
        for t in 1..=4 {
            for s in 1..=t {
                let f = fpts_exact(&pm, t, s, 50, DEFAULT_BUDGET).unwrap().value;
                let g = gpts_exact(&pm, t, s, 50, DEFAULT_BUDGET).unwrap().value;
                assert_eq!(f, g);
            }
        }
    }
}

#[test]
fn recursive_bound_denominator_turns_nonpositive() {
    let x = parse_rational("3/5").unwrap();
    let f = parse_rational("1").unwrap();
    let mut hit = false;
    for i in 1..100 {
        let y = parse_rational(&format!("{i}/100")).unwrap();
        if let Err(Error::DenominatorNonpositive(_)) = lemma22_rhs(2, 1, 2, 8, 6, &x, &y, &f) {
            hit = true;
            for j in i..100 {
                let y = parse_rational(&format!("{j}/100")).unwrap();
                assert!(lemma22_rhs(2, 1, 2, 8, 6, &x, &y, &f).is_err());
            }
            break;
        }
    }
    assert!(hit);
}

/// Which side conditions hold at large `k`: everything except `t_i >= s_i`
/// (which breaks at the end of the bulk steps) and, for `c = 2`, the strict
/// `x_b > 1/c`.
#[test]
fn large_parameter_certification_profile() {
    for a in [1.0, 2.0, 3.0] {
        for c in [2u32, 3, 4] {
            for k in [1_000_000u64, 1_000_000_000, 1_000_000_000_000] {
                let params = BoundParams::new(k, a, c).unwrap();
                let report = certify_schedule(&build_schedule(&params, FloorMode::Off));
                for name in check_names::CONSTRAINTS {
                    let check = report.check(name).unwrap();
                    let expected = match *name {
                        check_names::T_AT_LEAST_S => false,
                        check_names::X_B_ABOVE_INV_C => c > 2,
                        _ => true,
                    };
                    assert_eq!(check.holds, expected, "{name} k={k} a={a} c={c}: {check:?}");
                }
            }
        }
    }
}

#[test]
fn schedule_step_count_example() {
    let s = build_schedule(&BoundParams::new(100, 2.0, 2).unwrap(), FloorMode::Off);
    assert_eq!(s.r_a, 160);
    assert_eq!(bulk_constants(2), (0.5, 0.734375));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schedule_identities(k in 2u64..10_000_000, a in 0.5f64..3.0, c in 2u32..6) {
        let params = BoundParams::new(k, a, c).unwrap();
        let s = build_schedule(&params, FloorMode::Off);
        let bk = 2.0 * c as f64 * (k as f64).powf(a);
        let last = s.states.last().unwrap();
        prop_assert!((last.t / bk - 1.0).abs() < 1e-9);
        prop_assert!((last.s / bk - 1.0).abs() < 1e-9);
        prop_assert!((2.0 * s.states[0].log2_s - s.states[0].log2_t).abs() < 1e-9);
        let report = certify_schedule(&s);
        let names: std::collections::BTreeSet<_> = report.checks.iter().map(|c| c.name.clone()).collect();
        prop_assert_eq!(names.len(), report.checks.len());
        prop_assert!(report.check(check_names::BULK_RATIOS).unwrap().holds);
    }

    #[test]
    fn inflation_round_trips(skel in arb_perm(4), blocks in proptest::collection::vec(arb_perm(3), 4)) {
        let blocks = blocks[..skel.len()].to_vec();
        let inflated = inflate(&skel, &blocks).unwrap();
        let found = blockable_decompositions(&inflated, skel.len()).unwrap();
        prop_assert!(found.iter().any(|d| d.skeleton == skel && d.blocks == blocks));
    }

    #[test]
    fn sums_contain_their_summands(a in arb_perm(4), b in arb_perm(4)) {
        let sum = a.direct_sum(&b).unwrap();
        let skew = a.skew_sum(&b).unwrap();
        prop_assert!(contains(&sum, &a).unwrap() && contains(&sum, &b).unwrap());
        prop_assert!(contains(&skew, &a).unwrap() && contains(&skew, &b).unwrap());
        prop_assert_eq!(binomial(sum.len() as u64, a.len() as u64) >= BigUint::from(1u32), true);
    }

    #[test]
    fn deleting_an_entry_keeps_merge_membership(host in arb_perm(7), pos in 0usize..7) {
        let config = SearchConfig::default();
        let q = MergeQuery::new(host.clone(), p("123"), p("21")).unwrap();
        if merge_member(&q, &config).unwrap().is_some() && pos < host.len() {
            let smaller = MergeQuery::new(host.delete_position(pos), p("123"), p("21")).unwrap();
            prop_assert!(merge_member(&smaller, &config).unwrap().is_some());
        }
    }

    #[test]
    fn matrix_and_permutation_containment_agree(host in arb_perm(6), pat in arb_perm(3)) {
        let direct = contains(&host, &pat).unwrap();
        let via = matrix_contains(to_matrix(&host).matrix(), to_matrix(&pat).matrix()).unwrap();
        prop_assert_eq!(direct, via);
    }
}
