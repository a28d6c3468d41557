//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run
//! with `cargo test -p subgap --test acceptance -- --nocapture` to see them.

use std::time::{Duration, Instant};

use subgap::field::{primes_in, PrimeField};
use subgap::report::SweepReport;
use subgap::setops::{rep_profile, sum_of_elements, sumset, translate, ResidueSet};
use subgap::structure::{binary_gap_peel, generate_gap};
use subgap::verifier::{self, Guards};

fn verdict(id: &str, what: &str, ok: bool, detail: String) {
    println!("{id} [{}] {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} failed: {detail}");
}

fn violations(r: &SweepReport) -> String {
    let shown: Vec<String> = r
        .violations
        .iter()
        .take(5)
        .map(|v| match (v.p, v.k) {
            (Some(p), Some(k)) => format!("p={p} k={k}: {}", v.message),
            _ => v.message.clone(),
        })
        .collect();
    format!(
        "{} entries, {} violations {}",
        r.entries.len(),
        r.violations.len(),
        shown.join("; ")
    )
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(f)
}

fn pairs_in_range(p_lo: u64, p_hi: u64, keep: impl Fn(u64, u64) -> bool) -> usize {
    primes_in(p_lo.max(3), p_hi)
        .into_iter()
        .map(|p| {
            let f = PrimeField::new(p).unwrap();
            f.divisors().into_iter().filter(|&k| keep(p, k)).count()
        })
        .sum()
}

#[test]
fn ac01_theorem_sweep() {
    let started = Instant::now();
    let r = single_threaded(|| verifier::theorem_sweep(499));
    let elapsed = started.elapsed();
    let expected_units = pairs_in_range(3, 499, |_, _| true);
    let ok = r.passed()
        && r.entries.len() == expected_units
        && r.entries.iter().all(|e| e["agrees"] == true)
        && elapsed < Duration::from_secs(10);
    verdict(
        "AC01",
        "A_k is a GAP iff t in {2,4,p-1}, all p <= 499",
        ok,
        format!("{} in {:.2?} single-threaded", violations(&r), elapsed),
    );
}

#[test]
fn ac02_order_four_construction() {
    let r = verifier::order_four_sweep(499);
    let want = primes_in(5, 499).into_iter().filter(|p| p % 4 == 1).count();
    let ok = r.passed()
        && r.entries.len() == want
        && r.entries.iter().all(|e| e["explicit_ok"] == true && e["peel_ok"] == true);
    verdict(
        "AC02",
        "order-4 subgroup is a proper 2-dim GAP, p = 1 mod 4, p <= 499",
        ok,
        format!("{} (expected {want} primes)", violations(&r)),
    );
}

#[test]
fn ac03_direct_sum_decompositions() {
    let r = verifier::hp_direct_sum_sweep(43, &Guards::default()).unwrap();
    let want = pairs_in_range(3, 43, |p, k| k > 1 && (p - 1) / k <= 24);
    let found: u64 = r
        .entries
        .iter()
        .map(|e| e["decompositions"].as_u64().unwrap())
        .sum();
    let ok = r.passed() && r.entries.len() == want;
    verdict(
        "AC03",
        "every 2-decomposition of A_k (p <= 43, k > 1, t <= 24) is direct",
        ok,
        format!("{}, {found} decompositions enumerated", violations(&r)),
    );
}

#[test]
fn ac04_leave_one_out_inequality() {
    let r = verifier::gmr_sweep(20_241_015, 1000, 101).unwrap();
    let ns_ok = r
        .entries
        .iter()
        .all(|e| matches!(e["n"].as_u64(), Some(3 | 4)) && e["p"].as_u64().unwrap() <= 101);
    let ok = r.passed() && r.entries.len() == 1000 && ns_ok;
    verdict(
        "AC04",
        "|S|^(n-1) <= prod |S_hat_i| on 1000 seeded triples/quadruples",
        ok,
        violations(&r),
    );
}

#[test]
fn ac05_quadratic_residues_small_parts() {
    let r = verifier::chen_yan_sweep(7, 199, &Guards::default()).unwrap();
    let want = primes_in(7, 199).len();
    let ok = r.passed()
        && r.entries.len() == want
        && r.entries.iter().all(|e| e["decompositions"] == 0);
    verdict(
        "AC05",
        "no R = U + V with 2 <= |U| <= 4, 5 < p <= 199",
        ok,
        violations(&r),
    );
}

#[test]
fn ac06_lemma52_witness() {
    let theorem = verifier::theorem_sweep(499);
    let gaps = theorem
        .entries
        .iter()
        .filter(|e| e["is_gap"] == true && e["k"].as_u64().unwrap() > 1)
        .count();
    let r = verifier::lemma52_sweep(499);
    let ok = r.passed()
        && r.entries.len() == gaps
        && r.entries.iter().all(|e| {
            let c = e["c"].as_u64().unwrap();
            c != 0 && 2 * e["r_c"].as_u64().unwrap() >= e["t"].as_u64().unwrap()
        });
    verdict(
        "AC06",
        "c = 2a + sum d_i is -d_n != 0 with r(c) >= t/2 for every GAP subgroup, k > 1",
        ok,
        format!("{} ({gaps} GAP subgroups)", violations(&r)),
    );
}

#[test]
fn ac07_direct_computation_small_t() {
    let g = Guards::default();
    let t8 = verifier::rc_sweep(8, 6560, 1, &g).unwrap();
    let t16 = verifier::rc_sweep(16, 100_000, 1, &g).unwrap();
    let t32 = verifier::rc_sweep(32, 100_000, 1, &g).unwrap();
    let coverage_ok = t8.params["coverage"] == "full"
        && t16.params["coverage"] == "partial"
        && t32.params["coverage"] == "partial";
    // informational: the same sweeps restricted to k > 2
    let scoped: Vec<SweepReport> = [(8, 6560), (16, 100_000), (32, 100_000)]
        .into_iter()
        .map(|(t, p)| verifier::rc_sweep(t, p, 3, &g).unwrap())
        .collect();
    println!(
        "AC07 note: restricted to k > 2 the sweeps report {} violations over {} primes",
        scoped.iter().map(|r| r.violations.len()).sum::<usize>(),
        scoped.iter().map(|r| r.entries.len()).sum::<usize>(),
    );
    let ok = coverage_ok && t8.passed() && t16.passed() && t32.passed();
    verdict(
        "AC07",
        "max nonzero r(c) < t/2 for t = 8 (p < 6561, full) and t = 16, 32 (p <= 1e5, partial)",
        ok,
        format!(
            "t=8: {} | t=16: {} | t=32: {}",
            violations(&t8),
            violations(&t16),
            violations(&t32)
        ),
    );
}

#[test]
fn ac08_doubling() {
    let started = Instant::now();
    let t4 = verifier::doubling_sweep(4, 82, 2000).unwrap();
    let t8 = verifier::doubling_sweep(8, 6562, 8000).unwrap();
    let elapsed = started.elapsed();
    let count = |t: u64, lo: u64, hi: u64| {
        primes_in(lo, hi).into_iter().filter(|p| (p - 1) % t == 0).count()
    };
    let ok = t4.passed()
        && t8.passed()
        && t4.entries.len() == count(4, 82, 2000)
        && t8.entries.len() == count(8, 6562, 8000)
        && t4.entries.iter().all(|e| e["sumset_size"] == 9)
        && t8.entries.iter().all(|e| e["sumset_size"] == 33)
        && elapsed < Duration::from_secs(30);
    verdict(
        "AC08",
        "|A+A| = t^2/2 + 1 (9 for t=4 on (81,2000], 33 for t=8 on (6561,8000])",
        ok,
        format!("t=4: {} | t=8: {} in {:.2?}", violations(&t4), violations(&t8), elapsed),
    );
}

#[test]
fn ac09_hasse_weil_and_correspondence() {
    let r = verifier::hasse_weil_sweep(101, 10, &Guards::default()).unwrap();
    let want = pairs_in_range(3, 101, |_, k| k <= 10);
    let sharp = r
        .entries
        .iter()
        .filter(|e| e["k"].as_u64().unwrap() <= 2)
        .all(|e| {
            let p = e["p"].as_u64().unwrap();
            e["min_n"] == p + 1 && e["max_n"] == p + 1
        });
    let ok = r.passed() && r.entries.len() == want && sharp;
    verdict(
        "AC09",
        "(N-(p+1))^2 <= 4g^2 p and affine count = k^2 r(c), p <= 101, k <= 10",
        ok,
        format!("{}; k in {{1,2}} gives N = p+1: {sharp}", violations(&r)),
    );
}

#[test]
fn ac10_small_subgroup_bound() {
    let r = verifier::mattarei_sweep(500);
    let want = pairs_in_range(3, 500, |p, k| {
        let t = (p - 1) / k;
        k >= 4 && 4 * t <= k * k * k
    });
    let ok = r.passed() && r.entries.len() == want;
    verdict(
        "AC10",
        "4 (max r)^3 <= 27 t^2 for p <= 500, k >= 4, 4t <= k^3",
        ok,
        violations(&r),
    );
}

#[test]
fn ac11_large_power_of_two_subgroups() {
    let r = verifier::lemma55_spotcheck(1000);
    let t64 = r.entries.iter().filter(|e| e["t"] == 64).count();
    let ok = r.passed()
        && t64 >= 3
        && r
            .entries
            .iter()
            .all(|e| e["peel_found"] == false && e["max_r"].as_u64() < e["half_t"].as_u64());
    let cases: Vec<String> = r
        .entries
        .iter()
        .map(|e| format!("({},{},{})", e["p"], e["k"], e["t"]))
        .collect();
    verdict(
        "AC11",
        "peel fails and max r < t/2 for k > 2, t = 2^n >= 64",
        ok,
        format!("{} [{}]", violations(&r), cases.join(" ")),
    );
}

#[test]
fn ac12_oracle_equivalence() {
    let r = verifier::oracle_cross_check(61, &Guards::default()).unwrap();
    let want = pairs_in_range(3, 61, |_, _| true);
    let ok = r.passed() && r.entries.len() == want;
    verdict(
        "AC12",
        "classify_subgroup matches the brute-force oracle for p <= 61",
        ok,
        violations(&r),
    );
}

/// Pairwise sumset, independent of the bit-vector kernel.
fn sumset_by_pairs(a: &ResidueSet, b: &ResidueSet) -> ResidueSet {
    let p = a.field().p();
    let sums: Vec<u64> = a.iter().flat_map(|x| b.iter().map(move |y| (x + y) % p)).collect();
    ResidueSet::from_elements(a.field(), sums)
}

#[test]
fn ac13_structural_properties() {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for p in primes_in(3, 101) {
        let f = PrimeField::new(p).unwrap();
        let subgroups: Vec<_> = f.divisors().into_iter().map(|k| (k, f.subgroup(k).unwrap())).collect();
        for (k, a) in &subgroups {
            let t = a.len() as u64;
            checked += 1;
            // dual sumset implementations, against every subgroup and a translate
            for (_, b) in &subgroups {
                if sumset(a, b).unwrap() != sumset_by_pairs(a, b) {
                    failures.push(format!("sumset p={p} k={k}"));
                }
            }
            let shifted = translate(a, 1 + p / 3);
            if sumset(a, &shifted).unwrap() != sumset_by_pairs(a, &shifted) {
                failures.push(format!("shifted sumset p={p} k={k}"));
            }
            if rep_profile(a).counts().iter().sum::<u64>() != t * t {
                failures.push(format!("rep mass p={p} k={k}"));
            }
            if t >= 2 && sum_of_elements(a) != 0 {
                failures.push(format!("zero sum p={p} k={k}"));
            }
            if t.is_power_of_two() {
                let peel = binary_gap_peel(a).unwrap();
                if let Some(g) = &peel {
                    if generate_gap(g, &f).unwrap() != (a.clone(), true) {
                        failures.push(format!("round trip p={p} k={k}"));
                    }
                }
                for x in [1, 2, p / 2, p - 1] {
                    let moved = translate(a, x);
                    let q = binary_gap_peel(&moved).unwrap();
                    if q.is_some() != peel.is_some() {
                        failures.push(format!("translation p={p} k={k} x={x}"));
                    }
                    if let Some(g) = q {
                        if generate_gap(&g, &f).unwrap().0 != moved {
                            failures.push(format!("translated round trip p={p} k={k} x={x}"));
                        }
                    }
                }
            }
        }
    }
    verdict(
        "AC13",
        "sumset dual agreement, rep mass t^2, zero sum, peel round trip, translation invariance",
        failures.is_empty(),
        format!("{checked} subgroups with p <= 101, failures: {failures:?}"),
    );
}
