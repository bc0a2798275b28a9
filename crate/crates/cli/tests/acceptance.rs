//! Exit criteria, one line per criterion. Runs without the libtest harness so
//! the lines are always printed; the process fails if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use permx_core::bounds::{
    binomial, fox_rhs, lemma21_bound, lemma22_rhs, marcus_tardos_bound, parse_rational,
    theorem12_exponent, theorem24_alpha,
};
use permx_core::extremal::{exfn_exact, fpts_exact, gpts_exact, DEFAULT_BUDGET};
use permx_core::oracle::{count_avoiders_naive, exfn_enumerate};
use permx_core::schedule::{build_schedule, certify_schedule, check_names, BoundParams, FloorMode};
use permx_core::{
    blockable_decompositions, check_lemma22, contains, count_avoiders, inflate, to_matrix,
    verify_jv_inclusion, FptsValue, Permutation, PermutationMatrix, SearchConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn p(text: &str) -> Permutation {
    text.parse().unwrap()
}

fn rat(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn catalan() -> Outcome {
    let config = SearchConfig::default();
    let mut bad = Vec::new();
    for pattern in Permutation::all(3) {
        for n in 0..=10u64 {
            let got = count_avoiders(&pattern, n as usize, &config).map_err(|e| e.to_string())?;
            if got != binomial(2 * n, n) / BigUint::from(n + 1) {
                bad.push(format!("{pattern} n={n} got {got}"));
            }
        }
    }
    check(bad.is_empty(), format!("6 patterns x n=0..10; mismatches {bad:?}"))
}

fn ground_truth() -> Outcome {
    let a = contains(&p("42153"), &p("312")).unwrap();
    let b = contains(&p("42153"), &p("123")).unwrap();
    check(a && !b, format!("42153 contains 312: {a}, contains 123: {b}"))
}

fn naive_counts() -> Outcome {
    let config = SearchConfig::default();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for k in 1..=4 {
        for pattern in Permutation::all(k) {
            for n in 0..=7 {
                let fast = count_avoiders(&pattern, n, &config).map_err(|e| e.to_string())?;
                pairs += 1;
                if fast != BigUint::from(count_avoiders_naive(&pattern, n)) {
                    bad.push(format!("{pattern} n={n}"));
                }
            }
        }
    }
    check(bad.is_empty(), format!("{pairs} (pattern, n) pairs; mismatches {bad:?}"))
}

fn identity_extremal() -> Result<Vec<(usize, usize)>, String> {
    let i2 = PermutationMatrix::identity(2);
    let mut values = Vec::new();
    for n in 2..=4 {
        let r = exfn_exact(&i2, n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let brute = exfn_enumerate(&i2, n);
        if !r.proven_optimal || r.value != 2 * n - 1 || r.value != brute {
            return Err(format!("n={n}: exact {} enumerated {brute}", r.value));
        }
        values.push((n, r.value));
    }
    Ok(values)
}

fn extremal() -> Outcome {
    identity_extremal().map(|v| format!("ex(n) for n=2..4: {v:?}, equal to 2n-1 and to enumeration"))
}

fn marcus_tardos() -> Outcome {
    let values = identity_extremal()?;
    let coefficient = marcus_tardos_bound(2);
    let ok = values.iter().all(|&(n, v)| BigUint::from(v) <= &coefficient * n);
    check(ok, format!("coefficient {coefficient}; values {values:?}"))
}

fn lemma21() -> Outcome {
    let i2 = PermutationMatrix::identity(2);
    let mut rows = Vec::new();
    let mut ok = true;
    for t in 3..=5usize {
        for s in 3..=t {
            let f = fpts_exact(&i2, t, s, usize::MAX, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let bound = lemma21_bound(2, 1, t as u64, s as u64).map_err(|e| e.to_string())?;
            let holds = matches!(f.value, FptsValue::Finite(v) if rat(v) <= bound);
            ok &= holds;
            rows.push(format!("f({t},{s})={}<={bound}", f.value));
        }
    }
    check(ok, rows.join(" "))
}

fn lemma22() -> Outcome {
    let pattern = to_matrix(&p("12"));
    let xs = ["3/5", "3/4", "9/10"];
    let ys = ["1/10", "1/5", "3/10", "2/5", "1/2", "3/5", "7/10", "4/5", "9/10"];
    let (mut compared, mut vacuous, mut skipped) = (0, 0, 0);
    let mut bad = Vec::new();
    for t in 1..=5usize {
        for s in 1..=t {
            for x in xs {
                for y in ys {
                    let (x, y) = (parse_rational(x).unwrap(), parse_rational(y).unwrap());
                    let report = match check_lemma22(&pattern, 1, 2, t, s, &x, &y, DEFAULT_BUDGET) {
                        Ok(r) => r,
                        Err(permx_core::Error::DenominatorNonpositive(_)) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => return Err(e.to_string()),
                    };
                    if report.vacuous {
                        vacuous += 1;
                        continue;
                    }
                    let lhs = report.lhs.finite().ok_or("unbounded left side")?;
                    let f_sub = report.f_sub.finite().unwrap();
                    let rhs = lemma22_rhs(2, 1, 2, t as u64, s as u64, &x, &y, &rat(f_sub))
                        .map_err(|e| e.to_string())?;
                    compared += 1;
                    if rat(lhs) > rhs {
                        bad.push(format!("t={t} s={s} x={x} y={y}: {lhs} > {rhs}"));
                    }
                }
            }
        }
    }
    check(
        bad.is_empty() && compared > 0,
        format!("{compared} compared, {vacuous} with unbounded recursive term, {skipped} outside the valid range; violations {bad:?}"),
    )
}

fn fox() -> Outcome {
    let i2 = PermutationMatrix::identity(2);
    let table: BTreeMap<u64, u64> = (1..=6u64)
        .map(|m| (m, exfn_exact(&i2, m as usize, DEFAULT_BUDGET).unwrap().value as u64))
        .collect();
    let mut rows = Vec::new();
    let mut ok = true;
    for (t, s, n) in [(2u64, 2u64, 2u64), (3, 3, 2)] {
        let f = fpts_exact(&i2, t as usize, s as usize, usize::MAX, DEFAULT_BUDGET).unwrap();
        let g = gpts_exact(&i2, t as usize, s as usize, usize::MAX, DEFAULT_BUDGET).unwrap();
        let (f, g) = (f.value.finite().unwrap() as u64, g.value.finite().unwrap() as u64);
        let rhs = fox_rhs(&table, t, s, f, g, n).map_err(|e| e.to_string())?;
        let lhs = table[&(t * n)];
        ok &= BigUint::from(lhs) <= rhs;
        rows.push(format!("(t,s,n)=({t},{s},{n}): ex({})={lhs} <= {rhs}", t * n));
    }
    check(ok, rows.join("; "))
}

fn schedule() -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for a in [1.0, 2.0] {
        for c in [2, 3] {
            let params = BoundParams::new(1_000_000, a, c).unwrap();
            let report = certify_schedule(&build_schedule(&params, FloorMode::Off));
            let failing: Vec<String> = check_names::CONSTRAINTS
                .iter()
                .filter_map(|name| {
                    let c = report.check(name).expect("every constraint is reported");
                    (!c.holds).then(|| match c.step {
                        Some(step) => format!("{name} (lhs {:.4e} vs {:.4e} at step {step})", c.lhs, c.rhs),
                        None => format!("{name} (lhs {:.4e} vs {:.4e})", c.lhs, c.rhs),
                    })
                })
                .collect();
            ok &= failing.is_empty();
            if !failing.is_empty() {
                rows.push(format!("a={a} c={c} R_A={}: {}", report.r_a, failing.join(", ")));
            }
        }
    }
    check(ok, if rows.is_empty() { "all constraints hold".into() } else { rows.join(" | ") })
}

fn exponents() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let a = rng.gen_range(0.01..10.0);
        let c = rng.gen_range(2.0..50.0);
        let alpha = theorem24_alpha(a, c);
        worst = worst.max((theorem12_exponent(a, c) - 2.0 * alpha).abs() / alpha);
    }
    let alpha = theorem24_alpha(1.0, 2.0);
    check(
        worst <= 1e-12 && (alpha - 122.7226).abs() <= 1e-3,
        format!("max relative gap {worst:.2e} over 1000 draws; alpha(1,2) = {alpha:.6}"),
    )
}

fn merges() -> Outcome {
    let config = SearchConfig::default();
    let small: Vec<Permutation> = (1..=2).flat_map(Permutation::all).collect();
    let mut checked = 0;
    let mut bad = Vec::new();
    for a in &small {
        for b in &small {
            for c in &small {
                for n in 0..=7 {
                    let r = verify_jv_inclusion(a, b, c, n, &config).map_err(|e| e.to_string())?;
                    checked += r.checked;
                    if !r.pass {
                        bad.push(format!("{a},{b},{c} n={n}: {:?}", r.counterexample));
                    }
                }
            }
        }
    }
    check(bad.is_empty(), format!("{checked} permutations over 27 triples; failures {bad:?}"))
}

fn round_trip() -> Outcome {
    let blocks = vec![p("1"), p("132"), p("321"), p("12")];
    let inflated = inflate(&p("2413"), &blocks).unwrap();
    let recovered = blockable_decompositions(&inflated, 4)
        .unwrap()
        .iter()
        .any(|d| d.skeleton == p("2413") && d.blocks == blocks);
    check(
        inflated == p("479832156") && recovered,
        format!("inflation = {inflated}, decomposition recovered: {recovered}"),
    )
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_permx"))
            .args(["selftest", "--format", "json"])
            .env_remove("PERMX_BUDGET")
            .output()
            .expect("permx runs")
    };
    let (first, second) = (run(), run());
    if first.stdout.is_empty() {
        return Err(format!("no output: {}", String::from_utf8_lossy(&first.stderr)));
    }
    check(
        first.stdout == second.stdout,
        format!("two selftest runs, {} and {} bytes", first.stdout.len(), second.stdout.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 13] = [
        ("catalan agreement", 10, catalan),
        ("containment ground truth", 1, ground_truth),
        ("naive-oracle equivalence", 60, naive_counts),
        ("extremal oracle", 60, extremal),
        ("Marcus-Tardos consistency", 60, marcus_tardos),
        ("linear row-count bound", 120, lemma21),
        ("recursive row-count bound", 300, lemma22),
        ("tiling inequality", 60, fox),
        ("schedule certification", 1, schedule),
        ("exponent identities", 1, exponents),
        ("merge inclusion", 300, merges),
        ("inflation round trip", 1, round_trip),
        ("determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (verdict, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit} s limit")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {verdict} [{:.3} s] {name}: {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
