//! Verification suites. Each sweep splits into independent `(p, k)` work
//! units evaluated in parallel and merged in ascending `(p, k)` order, so a
//! report does not depend on the thread count.

use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curves::{fermat_point_count, hasse_weil_check, k_squared_correspondence, mattarei_check};
use crate::error::{Error, Result};
use crate::field::{checked_pow, primes_in, PrimeField, SubgroupSpec};
use crate::report::{Entry, SweepReport, Violation};
use crate::setops::{rep_profile, sumset, ResidueSet};
use crate::structure::{
    binary_gap_peel, cofactor_decompositions, gap_oracle, gap_to_pairs, generate_gap, gmr_check,
    is_arithmetic_progression, lemma52_witness, GapDescription,
};

/// Upper limits on sweep ranges. Requests beyond a limit are rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Exhaustive 2-decomposition enumeration (`2^t` subsets, `t <= 24`).
    pub hp_p_max: u64,
    /// Small-part decomposition search over the quadratic residues.
    pub chen_yan_p_max: u64,
    /// Brute-force GAP oracle.
    pub oracle_p_max: u64,
    /// Representation-function sweeps.
    pub rc_p_max: u64,
    /// Projective point counting, `O(p)` per curve and `p^2` curves per prime.
    pub hasse_weil_p_max: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            hp_p_max: 43,
            chen_yan_p_max: 199,
            oracle_p_max: 101,
            rc_p_max: 10_000_000,
            hasse_weil_p_max: 2000,
        }
    }
}

fn guard(what: &str, requested: u64, limit: u64) -> Result<()> {
    if requested > limit {
        return Err(Error::CostGuard(format!(
            "{what}: p_max = {requested} exceeds the limit {limit}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    /// `k = 1`: `Z_p^*` recognized as an arithmetic progression.
    ApDirect,
    /// `t = 1`: a single point is not a GAP.
    Singleton,
    PowerOfTwoFilter,
    BinaryPeel,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ApDirect => "AP_DIRECT",
            Method::Singleton => "SINGLETON",
            Method::PowerOfTwoFilter => "POWER_OF_TWO_FILTER",
            Method::BinaryPeel => "BINARY_PEEL",
            Method::Oracle => "ORACLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapVerdict {
    pub p: u64,
    pub k: u64,
    pub t: u64,
    pub is_gap: bool,
    pub witness: Option<GapDescription>,
    /// `t ∈ {2, 4, p - 1}`.
    pub expected: bool,
    pub agrees: bool,
    pub method: Method,
}

impl GapVerdict {
    fn entry(&self) -> Entry {
        obj(json!({
            "p": self.p,
            "k": self.k,
            "t": self.t,
            "is_gap": self.is_gap,
            "expected": self.expected,
            "agrees": self.agrees,
            "method": self.method.to_string(),
            "witness": self.witness.as_ref().map(ToString::to_string).unwrap_or_default(),
        }))
    }
}

fn obj(v: Value) -> Entry {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("entries are objects"),
    }
}

/// Decides whether `A_k` is a generalized arithmetic progression.
pub fn classify_subgroup(field: &PrimeField, k: u64) -> Result<GapVerdict> {
    let spec = SubgroupSpec::new(field.clone(), k)?;
    let (p, t) = (field.p(), spec.t());
    let a = spec.elements();
    let (witness, method) = if k == 1 {
        let w = is_arithmetic_progression(&a).and_then(|ap| {
            GapDescription::new(field, ap.a, vec![ap.d], vec![ap.len]).ok()
        });
        (w, Method::ApDirect)
    } else if t == 1 {
        (None, Method::Singleton)
    } else if !t.is_power_of_two() {
        (None, Method::PowerOfTwoFilter)
    } else {
        (binary_gap_peel(&a)?, Method::BinaryPeel)
    };
    let is_gap = witness.is_some();
    let expected = t == 2 || t == 4 || t == p - 1;
    Ok(GapVerdict {
        p,
        k,
        t,
        is_gap,
        witness,
        expected,
        agrees: is_gap == expected,
        method,
    })
}

fn prime_fields(p_min: u64, p_max: u64) -> Vec<PrimeField> {
    primes_in(p_min.max(3), p_max)
        .into_iter()
        .map(|p| PrimeField::new(p).expect("prime"))
        .collect()
}

/// Every `(p, k)` with `3 <= p <= p_max` and `k | p - 1`.
fn work_units(p_min: u64, p_max: u64) -> Vec<(PrimeField, u64)> {
    prime_fields(p_min, p_max)
        .into_iter()
        .flat_map(|f| f.divisors().into_iter().map(move |k| (f.clone(), k)))
        .collect()
}

/// Runs `unit` over work items in parallel and folds entries and violations
/// in input order.
fn run_units<T, F>(report: &mut SweepReport, items: Vec<T>, unit: F)
where
    T: Send + Sync,
    F: Fn(&T) -> (Vec<Entry>, Vec<Violation>) + Send + Sync,
{
    let results: Vec<_> = items.par_iter().map(unit).collect();
    for (entries, violations) in results {
        report.entries.extend(entries);
        report.violations.extend(violations);
    }
}

/// Witness regenerates `A_k` exactly.
fn check_witness(v: &GapVerdict, field: &PrimeField, a: &ResidueSet) -> Option<Violation> {
    let w = v.witness.as_ref()?;
    match generate_gap(w, field) {
        Ok((s, _)) if &s == a => None,
        Ok((s, _)) => Some(Violation::at(v.p, v.k, format!("witness {w} generates {{{s}}}"))),
        Err(e) => Some(Violation::at(v.p, v.k, format!("witness {w} invalid: {e}"))),
    }
}

/// Classifies every subgroup for primes up to `p_max`.
pub fn theorem_sweep(p_max: u64) -> SweepReport {
    let started = Instant::now();
    let mut report = SweepReport::new(
        "theorem",
        &["p", "k", "t", "is_gap", "expected", "agrees", "method", "witness"],
    )
    .param("p_max", p_max);
    run_units(&mut report, work_units(3, p_max), |(f, k)| {
        let v = classify_subgroup(f, *k).expect("k divides p - 1");
        let mut violations = Vec::new();
        if !v.agrees {
            violations.push(Violation::at(
                v.p,
                v.k,
                format!("is_gap = {} but expected {}", v.is_gap, v.expected),
            ));
        }
        violations.extend(check_witness(&v, f, &f.subgroup(*k).expect("valid")));
        (vec![v.entry()], violations)
    });
    report.record_phase("classify", started);
    report
}

/// The order-4 subgroup `{±1, ±ω}` for every `p ≡ 1 (mod 4)`: both the
/// explicit form `-1 + x_1(1 - ω) + x_2(1 + ω)` and the peeled witness must
/// regenerate it as a proper 2-dimensional GAP.
pub fn order_four_sweep(p_max: u64) -> SweepReport {
    let started = Instant::now();
    let mut report = SweepReport::new(
        "order4",
        &["p", "k", "t", "omega", "explicit_ok", "peel_witness", "peel_ok"],
    )
    .param("p_max", p_max);
    let fields: Vec<_> = prime_fields(5, p_max)
        .into_iter()
        .filter(|f| f.p() % 4 == 1)
        .collect();
    run_units(&mut report, fields, |f| {
        let (p, k) = (f.p(), (f.p() - 1) / 4);
        let a = f.subgroup(k).expect("4 | p - 1");
        let omega = f.pow(f.primitive_root(), k);
        let mut violations = Vec::new();
        let explicit = GapDescription::new(
            f,
            p - 1,
            vec![f.sub(1, omega), f.add(1, omega)],
            vec![2, 2],
        )
        .and_then(|g| generate_gap(&g, f));
        let explicit_ok = matches!(&explicit, Ok((s, true)) if s == &a);
        if !explicit_ok {
            violations.push(Violation::at(p, k, "explicit {±1, ±ω} form does not regenerate A_k"));
        }
        let peel = binary_gap_peel(&a).expect("|A_k| = 4");
        let peel_ok = peel.as_ref().is_some_and(|g| {
            g.dimension() == 2
                && g.proper
                && matches!(generate_gap(g, f), Ok((s, true)) if s == a)
        });
        if !peel_ok {
            violations.push(Violation::at(p, k, "peel found no proper 2-dimensional witness"));
        }
        let entry = obj(json!({
            "p": p, "k": k, "t": 4, "omega": omega,
            "explicit_ok": explicit_ok,
            "peel_witness": peel.map(|g| g.to_string()).unwrap_or_default(),
            "peel_ok": peel_ok,
        }));
        (vec![entry], violations)
    });
    report.record_phase("order4", started);
    report
}

/// For every proper subgroup classified as a GAP, builds the pair
/// decomposition from the witness and checks the sum `c = -d_n` is
/// represented at least `t/2` times.
pub fn lemma52_sweep(p_max: u64) -> SweepReport {
    let started = Instant::now();
    let mut report =
        SweepReport::new("lemma52", &["p", "k", "t", "c", "r_c", "half_t"]).param("p_max", p_max);
    run_units(&mut report, work_units(3, p_max), |(f, k)| {
        let v = classify_subgroup(f, *k).expect("valid");
        let (Some(w), true) = (&v.witness, *k > 1) else {
            return (vec![], vec![]);
        };
        let checked = gap_to_pairs(w, f).and_then(|d| lemma52_witness(&d));
        match checked {
            Ok(lw) => {
                let e = obj(json!({
                    "p": v.p, "k": v.k, "t": v.t, "c": lw.c, "r_c": lw.r_c, "half_t": v.t / 2,
                }));
                (vec![e], vec![])
            }
            Err(e) => (vec![], vec![Violation::at(v.p, v.k, e.to_string())]),
        }
    });
    report.record_phase("lemma52", started);
    report
}

/// Compares `classify_subgroup` with the brute-force oracle (dimension up
/// to 4, volume up to `2t`, which contains the proper search at volume `t`).
pub fn oracle_cross_check(p_max: u64, guards: &Guards) -> Result<SweepReport> {
    guard("oracle", p_max, guards.oracle_p_max.min(crate::structure::ORACLE_MAX_P))?;
    let started = Instant::now();
    let mut report = SweepReport::new(
        "oracle",
        &["p", "k", "t", "classified", "oracle", "oracle_witness", "agrees"],
    )
    .param("p_max", p_max)
    .param("dim_max", 4)
    .param("product_cap", "2t");
    run_units(&mut report, work_units(3, p_max), |(f, k)| {
        let v = classify_subgroup(f, *k).expect("valid");
        let a = f.subgroup(*k).expect("valid");
        let oracle = gap_oracle(&a, 4, 2 * v.t).expect("within guards");
        let found = oracle.witness.is_some();
        let mut violations = Vec::new();
        if found != v.is_gap {
            violations.push(Violation::at(
                v.p,
                v.k,
                format!("classify says {} but oracle says {}", v.is_gap, found),
            ));
        }
        if let Some(w) = &oracle.witness {
            if !matches!(generate_gap(w, f), Ok((s, _)) if s == a) {
                violations.push(Violation::at(v.p, v.k, "oracle witness does not regenerate"));
            }
        }
        let e = obj(json!({
            "p": v.p, "k": v.k, "t": v.t,
            "classified": v.is_gap,
            "oracle": found,
            "oracle_witness": oracle.witness.map(|w| w.to_string()).unwrap_or_default(),
            "agrees": found == v.is_gap,
        }));
        (vec![e], violations)
    });
    report.record_phase("oracle", started);
    Ok(report)
}

/// For `t ∈ {8, 16, 32}` and every prime `p < 3^t` (capped at `p_max`) with
/// `t | p - 1` and `k = (p - 1)/t >= k_min`: the largest nonzero `r(c)` over
/// `A_k` is below `t/2`.
///
/// With `k_min = 1` every such prime is checked, which includes `p = 17`
/// where the bound fails (`k = 2` for `t = 8`, `k = 1` for `t = 16`). The
/// bound is only claimed for `k > 2`; pass `k_min = 3` for that range.
pub fn rc_sweep(t: u64, p_max: u64, k_min: u64, guards: &Guards) -> Result<SweepReport> {
    if ![8, 16, 32].contains(&t) {
        return Err(Error::InvalidParameter(format!("t must be 8, 16 or 32 (got {t})")));
    }
    let full_limit = checked_pow(3, t).expect("3^32 fits in u64") - 1;
    let limit = p_max.min(full_limit);
    guard("rc", limit, guards.rc_p_max)?;
    let started = Instant::now();
    let coverage = if limit == full_limit { "full" } else { "partial" };
    let mut report = SweepReport::new("rc", &["p", "k", "t", "max_c", "max_r", "half_t"])
        .param("t", t)
        .param("p_max", p_max)
        .param("p_limit", limit)
        .param("full_range_limit", full_limit)
        .param("coverage", coverage)
        .param("k_min", k_min);
    let primes: Vec<u64> = (k_min.max(1)..)
        .map(|j| j * t + 1)
        .take_while(|&p| p <= limit)
        .filter(|&p| crate::field::is_prime(p))
        .collect();
    run_units(&mut report, primes, |&p| {
        let f = PrimeField::new(p).expect("prime");
        let k = (p - 1) / t;
        let (c, r) = rep_profile(&f.subgroup(k).expect("t | p - 1")).max_nonzero();
        let e = obj(json!({"p": p, "k": k, "t": t, "max_c": c, "max_r": r, "half_t": t / 2}));
        let v = if 2 * r >= t {
            vec![Violation::at(p, k, format!("r({c}) = {r} >= t/2"))]
        } else {
            vec![]
        };
        (vec![e], v)
    });
    report.record_phase("rc", started);
    Ok(report)
}

/// `|A_k + A_k| = t^2/2 + 1` for every prime `p ∈ [p_min, p_max]` with
/// `t | p - 1`, where the range must lie above `3^t`.
pub fn doubling_sweep(t: u64, p_min: u64, p_max: u64) -> Result<SweepReport> {
    if t < 2 || t % 2 != 0 {
        return Err(Error::InvalidParameter(format!("t must be even (got {t})")));
    }
    let threshold = checked_pow(3, t)
        .ok_or_else(|| Error::InvalidParameter(format!("3^{t} exceeds 64 bits")))?;
    if p_min <= threshold {
        return Err(Error::InvalidParameter(format!(
            "range below 3^t: p_min = {p_min} <= 3^{t} = {threshold}"
        )));
    }
    let started = Instant::now();
    let expected = t * t / 2 + 1;
    let mut report = SweepReport::new(
        "doubling",
        &["p", "k", "t", "sumset_size", "expected", "ratio"],
    )
    .param("t", t)
    .param("p_min", p_min)
    .param("p_max", p_max);
    let primes: Vec<u64> = primes_in(p_min, p_max)
        .into_iter()
        .filter(|p| (p - 1) % t == 0)
        .collect();
    run_units(&mut report, primes, |&p| {
        let f = PrimeField::new(p).expect("prime");
        let k = (p - 1) / t;
        let a = f.subgroup(k).expect("t | p - 1");
        let size = sumset(&a, &a).expect("same field").len() as u64;
        let e = obj(json!({
            "p": p, "k": k, "t": t, "sumset_size": size, "expected": expected,
            "ratio": format!("{size}/{t}"),
        }));
        let v = if size != expected {
            vec![Violation::at(p, k, format!("|A+A| = {size}, expected {expected}"))]
        } else {
            vec![]
        };
        (vec![e], v)
    });
    report.record_phase("doubling", started);
    Ok(report)
}

/// Largest part size searched by [`chen_yan_check`].
pub const CHEN_YAN_PART_MAX: usize = 4;

fn chen_yan_unit(f: &PrimeField) -> (Vec<Entry>, Vec<Violation>) {
    let p = f.p();
    let r = f.subgroup(2).expect("2 | p - 1");
    let found: Vec<_> = cofactor_decompositions(&r, Some(CHEN_YAN_PART_MAX))
        .expect("bounded")
        .collect();
    let violations = found
        .iter()
        .map(|d| {
            Violation::at(
                p,
                2,
                format!("R = {{{}}} + {{{}}}", d.parts()[0], d.parts()[1]),
            )
        })
        .collect();
    let e = obj(json!({
        "p": p, "k": 2, "t": r.len(), "part_max": CHEN_YAN_PART_MAX, "decompositions": found.len(),
    }));
    (vec![e], violations)
}

/// Searches for `R = U + V` with `2 <= |U| <= 4` over the quadratic
/// residues `R` mod `p`.
pub fn chen_yan_check(p: u64) -> Result<SweepReport> {
    let f = PrimeField::new(p)?;
    if p <= 3 {
        return Err(Error::InvalidParameter(format!("p must exceed 3 (got {p})")));
    }
    let started = Instant::now();
    let mut report = SweepReport::new("chen-yan", &["p", "k", "t", "part_max", "decompositions"])
        .param("p_min", p)
        .param("p_max", p);
    run_units(&mut report, vec![f], chen_yan_unit);
    report.record_phase("chen-yan", started);
    Ok(report)
}

pub fn chen_yan_sweep(p_min: u64, p_max: u64, guards: &Guards) -> Result<SweepReport> {
    guard("chen-yan", p_max, guards.chen_yan_p_max)?;
    let started = Instant::now();
    let mut report = SweepReport::new("chen-yan", &["p", "k", "t", "part_max", "decompositions"])
        .param("p_min", p_min)
        .param("p_max", p_max);
    run_units(&mut report, prime_fields(p_min.max(5), p_max), chen_yan_unit);
    report.record_phase("chen-yan", started);
    Ok(report)
}

/// Largest subgroup order enumerated by [`hp_direct_sum_sweep`].
pub const HP_T_MAX: u64 = 24;

/// Enumerates every normalized 2-decomposition of every `A_k` (`k > 1`,
/// `t <= 24`, `p <= p_max`) and checks each one is a direct sum.
pub fn hp_direct_sum_sweep(p_max: u64, guards: &Guards) -> Result<SweepReport> {
    guard("hp", p_max, guards.hp_p_max)?;
    let started = Instant::now();
    let mut report = SweepReport::new(
        "hp",
        &["p", "k", "t", "decompositions", "direct", "non_direct"],
    )
    .param("p_max", p_max)
    .param("t_max", HP_T_MAX);
    let units: Vec<_> = work_units(3, p_max)
        .into_iter()
        .filter(|(f, k)| *k > 1 && (f.p() - 1) / k <= HP_T_MAX)
        .collect();
    run_units(&mut report, units, |(f, k)| {
        let a = f.subgroup(*k).expect("valid");
        let mut direct = 0u64;
        let mut violations = Vec::new();
        for d in cofactor_decompositions(&a, None).expect("t <= 24") {
            if d.is_direct() {
                direct += 1;
            } else {
                violations.push(Violation::at(
                    f.p(),
                    *k,
                    format!(
                        "{{{}}} + {{{}}} is not direct ({} x {} vs {})",
                        d.parts()[0],
                        d.parts()[1],
                        d.parts()[0].len(),
                        d.parts()[1].len(),
                        a.len()
                    ),
                ));
            }
        }
        let e = obj(json!({
            "p": f.p(), "k": k, "t": a.len(),
            "decompositions": direct + violations.len() as u64,
            "direct": direct,
            "non_direct": violations.len(),
        }));
        (vec![e], violations)
    });
    report.record_phase("hp", started);
    Ok(report)
}

/// Largest set drawn by [`gmr_sweep`].
pub const GMR_SET_MAX: usize = 6;

/// Seeded random triples and quadruples of nonempty sets over primes
/// `p <= p_max`, each checked against `|S|^(n-1) <= prod |Ŝ_i|`.
pub fn gmr_sweep(seed: u64, trials: usize, p_max: u64) -> Result<SweepReport> {
    let primes = primes_in(3, p_max);
    if primes.is_empty() {
        return Err(Error::InvalidParameter(format!("no odd prime <= {p_max}")));
    }
    let started = Instant::now();
    let mut report = SweepReport::new(
        "gmr",
        &["trial", "p", "n", "sizes", "total", "leave_one_out", "holds"],
    )
    .param("seed", seed)
    .param("trials", trials)
    .param("p_max", p_max);
    // draw every case up front so results do not depend on scheduling
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(usize, Vec<ResidueSet>)> = (0..trials)
        .map(|trial| {
            let p = *primes.choose(&mut rng).expect("nonempty");
            let f = PrimeField::new(p).expect("prime");
            let n = rng.gen_range(3..=4);
            let parts = (0..n)
                .map(|_| {
                    let size = rng.gen_range(1..=GMR_SET_MAX.min(p as usize));
                    let xs: Vec<u64> = (0..size).map(|_| rng.gen_range(0..p)).collect();
                    ResidueSet::from_elements(&f, xs)
                })
                .collect();
            (trial, parts)
        })
        .collect();
    run_units(&mut report, cases, |(trial, parts)| {
        let o = gmr_check(parts).expect("n >= 3, nonempty");
        let p = parts[0].field().p();
        let sizes: Vec<usize> = parts.iter().map(ResidueSet::len).collect();
        let e = obj(json!({
            "trial": trial, "p": p, "n": parts.len(), "sizes": sizes,
            "total": o.total, "leave_one_out": o.leave_one_out, "holds": o.holds,
        }));
        let v = if o.holds {
            vec![]
        } else {
            vec![Violation::general(format!("trial {trial} over Z_{p} violates the bound"))]
        };
        (vec![e], v)
    });
    report.record_phase("gmr", started);
    Ok(report)
}

/// Point counts for every `c != 0` on `x^k + y^k = c z^k`, all `p <= p_max`
/// and `k | p - 1` with `k <= k_max`: Hasse-Weil, the `k^2`-to-1
/// correspondence with `r(c)`, `N = p + 1` for `k <= 2`, and invariance of
/// `N(c)` along cosets of `A_k`.
pub fn hasse_weil_sweep(p_max: u64, k_max: u64, guards: &Guards) -> Result<SweepReport> {
    guard("hasse-weil", p_max, guards.hasse_weil_p_max)?;
    let started = Instant::now();
    let mut report = SweepReport::new(
        "hasse-weil",
        &[
            "p", "k", "t", "genus", "curves", "min_n", "max_n", "max_dev_sq", "bound_sq",
            "hasse_weil_ok", "correspondence_ok",
        ],
    )
    .param("p_max", p_max)
    .param("k_max", k_max);
    let units: Vec<_> = work_units(3, p_max)
        .into_iter()
        .filter(|(_, k)| *k <= k_max)
        .collect();
    run_units(&mut report, units, |(f, k)| {
        let (p, k) = (f.p(), *k);
        let spec = SubgroupSpec::new(f.clone(), k).expect("valid");
        let profile = rep_profile(&spec.elements());
        let coset_step = f.pow(f.primitive_root(), k);
        let mut violations = Vec::new();
        let (mut min_n, mut max_n, mut max_dev_sq) = (u64::MAX, 0u64, 0u128);
        let (mut hw_ok, mut corr_ok) = (true, true);
        for c in 1..p {
            let cc = fermat_point_count(f, k, c).expect("c != 0");
            min_n = min_n.min(cc.n_projective);
            max_n = max_n.max(cc.n_projective);
            let dev = cc.n_projective.abs_diff(p + 1) as u128;
            max_dev_sq = max_dev_sq.max(dev * dev);
            if !hasse_weil_check(&cc) {
                hw_ok = false;
                violations.push(Violation::at(p, k, format!("N({c}) = {} breaks Hasse-Weil", cc.n_projective)));
            }
            if !k_squared_correspondence(&cc, &profile) {
                corr_ok = false;
                violations.push(Violation::at(
                    p,
                    k,
                    format!("affine count {} != k^2 r({c}) = {}", cc.n_affine_nonzero, k * k * profile.r(c)),
                ));
            }
            if k <= 2 && cc.n_projective != p + 1 {
                violations.push(Violation::at(p, k, format!("genus 0 but N({c}) = {}", cc.n_projective)));
            }
            let moved = fermat_point_count(f, k, f.mul(c, coset_step)).expect("c != 0");
            if moved.n_projective != cc.n_projective {
                violations.push(Violation::at(p, k, format!("N({c}) differs along its coset")));
            }
        }
        let g = crate::curves::genus(k) as u128;
        let e = obj(json!({
            "p": p, "k": k, "t": spec.t(), "genus": g as u64, "curves": p - 1,
            "min_n": min_n, "max_n": max_n,
            "max_dev_sq": max_dev_sq as u64, "bound_sq": (4 * g * g * p as u128) as u64,
            "hasse_weil_ok": hw_ok, "correspondence_ok": corr_ok,
        }));
        (vec![e], violations)
    });
    report.record_phase("hasse-weil", started);
    Ok(report)
}

/// `4 r^3 <= 27 t^2` for every `p <= p_max`, `k >= 4`, `4t <= k^3`.
pub fn mattarei_sweep(p_max: u64) -> SweepReport {
    let started = Instant::now();
    let mut report = SweepReport::new(
        "mattarei",
        &["p", "k", "t", "max_c", "max_r", "lhs", "rhs", "holds"],
    )
    .param("p_max", p_max);
    let units: Vec<_> = work_units(3, p_max)
        .into_iter()
        .filter(|(f, k)| {
            let t = (f.p() - 1) / k;
            *k >= 4 && 4 * t as u128 <= (*k as u128).pow(3)
        })
        .collect();
    run_units(&mut report, units, |(f, k)| {
        let m = mattarei_check(f, *k).expect("hypothesis filtered");
        let lhs = 4 * m.max_r.pow(3);
        let rhs = 27 * m.t * m.t;
        let e = obj(json!({
            "p": f.p(), "k": k, "t": m.t, "max_c": m.max_c, "max_r": m.max_r,
            "lhs": lhs, "rhs": rhs, "holds": m.holds,
        }));
        let v = if m.holds {
            vec![]
        } else {
            vec![Violation::at(f.p(), *k, format!("4 r^3 = {lhs} > 27 t^2 = {rhs}"))]
        };
        (vec![e], v)
    });
    report.record_phase("mattarei", started);
    report
}

/// Subgroups with `k > 2` and `t = 2^n >= 64`: the peel must fail and the
/// largest nonzero `r(c)` must stay below `t/2`.
pub fn lemma55_spotcheck(p_max: u64) -> SweepReport {
    let started = Instant::now();
    let mut report = SweepReport::new(
        "lemma55",
        &["p", "k", "t", "peel_found", "max_c", "max_r", "half_t"],
    )
    .param("p_max", p_max);
    let units: Vec<_> = work_units(3, p_max)
        .into_iter()
        .filter(|(f, k)| {
            let t = (f.p() - 1) / k;
            *k > 2 && t >= 64 && t.is_power_of_two()
        })
        .collect();
    run_units(&mut report, units, |(f, k)| {
        let a = f.subgroup(*k).expect("valid");
        let t = a.len() as u64;
        let peel = binary_gap_peel(&a).expect("power of two");
        let (c, r) = rep_profile(&a).max_nonzero();
        let mut v = Vec::new();
        if let Some(g) = &peel {
            v.push(Violation::at(f.p(), *k, format!("peel found {g}")));
        }
        if 2 * r >= t {
            v.push(Violation::at(f.p(), *k, format!("r({c}) = {r} >= t/2")));
        }
        let e = obj(json!({
            "p": f.p(), "k": k, "t": t, "peel_found": peel.is_some(),
            "max_c": c, "max_r": r, "half_t": t / 2,
        }));
        (vec![e], v)
    });
    report.record_phase("lemma55", started);
    report
}

/// Runs every suite at its default parameters and summarizes one entry per
/// suite.
pub fn run_all(seed: u64, guards: &Guards) -> Result<(SweepReport, Vec<SweepReport>)> {
    let started = Instant::now();
    let reports = vec![
        theorem_sweep(499),
        order_four_sweep(499),
        lemma52_sweep(499),
        oracle_cross_check(61, guards)?,
        hp_direct_sum_sweep(43, guards)?,
        gmr_sweep(seed, 1000, 101)?,
        chen_yan_sweep(7, 199, guards)?,
        rc_sweep(8, 6560, 1, guards)?,
        rc_sweep(16, 100_000, 1, guards)?,
        rc_sweep(32, 100_000, 1, guards)?,
        doubling_sweep(4, 82, 2000)?,
        doubling_sweep(8, 6562, 8000)?,
        hasse_weil_sweep(101, 10, guards)?,
        mattarei_sweep(500),
        lemma55_spotcheck(1000),
    ];
    let mut summary = SweepReport::new("all", &["suite", "params", "entries", "violations", "passed"])
        .param("seed", seed);
    for r in &reports {
        let params: Vec<String> = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", crate::report::csv_cell(v)))
            .collect();
        summary.entries.push(obj(json!({
            "suite": r.suite,
            "params": params.join(" "),
            "entries": r.entries.len(),
            "violations": r.violations.len(),
            "passed": r.passed(),
        })));
        summary.violations.extend(r.violations.iter().map(|v| Violation {
            message: format!("[{}] {}", r.suite, v.message),
            ..v.clone()
        }));
        summary.timing.extend(r.timing.iter().cloned());
    }
    summary.record_phase("all", started);
    Ok((summary, reports))
}
