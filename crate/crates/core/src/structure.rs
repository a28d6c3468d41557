//! Additive structure: generalized arithmetic progressions, decompositions
//! into sumsets, and direct-sum bookkeeping.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{as_subgroup, PrimeField};
use crate::setops::{rep_profile, sum_all, sumset, translate, ResidueSet};

/// `a + d_1[0, L_1 - 1] + ... + d_n[0, L_n - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapDescription {
    pub a: u64,
    pub diffs: Vec<u64>,
    pub lengths: Vec<u64>,
    /// Whether the generated set has exactly `prod L_i` elements.
    pub proper: bool,
}

impl GapDescription {
    /// Validates the description and fills in `proper` by generating it.
    pub fn new(field: &PrimeField, a: u64, diffs: Vec<u64>, lengths: Vec<u64>) -> Result<Self> {
        let mut desc = GapDescription {
            a: field.reduce(a),
            diffs: diffs.into_iter().map(|d| field.reduce(d)).collect(),
            lengths,
            proper: false,
        };
        let (_, proper) = generate_gap(&desc, field)?;
        desc.proper = proper;
        Ok(desc)
    }

    pub fn dimension(&self) -> usize {
        self.diffs.len()
    }

    /// `prod L_i`, saturating.
    pub fn volume(&self) -> u64 {
        self.lengths.iter().fold(1u64, |acc, &l| acc.saturating_mul(l))
    }

    fn validate(&self) -> Result<()> {
        if self.diffs.is_empty() {
            return Err(Error::InvalidGap("dimension must be at least 1".into()));
        }
        if self.diffs.len() != self.lengths.len() {
            return Err(Error::InvalidGap(format!(
                "{} differences but {} lengths",
                self.diffs.len(),
                self.lengths.len()
            )));
        }
        if let Some(l) = self.lengths.iter().find(|&&l| l < 2) {
            return Err(Error::InvalidGap(format!("length {l} < 2")));
        }
        Ok(())
    }
}

impl fmt::Display for GapDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a)?;
        for (d, l) in self.diffs.iter().zip(&self.lengths) {
            write!(f, " + {}[0,{}]", d, l - 1)?;
        }
        Ok(())
    }
}

/// The progression `{0, d, ..., (len - 1) d}`.
fn progression(field: &PrimeField, start: u64, d: u64, len: u64) -> ResidueSet {
    let mut x = start;
    let mut xs = Vec::with_capacity(len.min(field.p()) as usize);
    for _ in 0..len.min(field.p()) {
        xs.push(x);
        x = field.add(x, d);
    }
    ResidueSet::from_elements(field, xs)
}

/// Generates the set described by `desc`; the flag reports properness.
pub fn generate_gap(desc: &GapDescription, field: &PrimeField) -> Result<(ResidueSet, bool)> {
    desc.validate()?;
    let mut acc = ResidueSet::from_elements(field, [desc.a]);
    for (&d, &l) in desc.diffs.iter().zip(&desc.lengths) {
        if field.reduce(d) == 0 {
            return Err(Error::InvalidGap("difference must be nonzero".into()));
        }
        acc = sumset(&acc, &progression(field, 0, d, l))?;
    }
    let proper = acc.len() as u64 == desc.volume();
    Ok((acc, proper))
}

/// An ordered list of parts, each with at least two elements, together with
/// their sumset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    parts: Vec<ResidueSet>,
    target: ResidueSet,
}

impl Decomposition {
    pub fn new(parts: Vec<ResidueSet>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidDecomposition("no parts".into()));
        };
        if let Some(small) = parts.iter().find(|s| s.len() < 2) {
            return Err(Error::InvalidDecomposition(format!(
                "part {{{small}}} has fewer than 2 elements"
            )));
        }
        let field = first.field().clone();
        let target = sum_all(&field, &parts)?;
        Ok(Decomposition { parts, target })
    }

    /// Like [`new`](Self::new) but also checks the sumset equals `target`.
    pub fn with_target(parts: Vec<ResidueSet>, target: &ResidueSet) -> Result<Self> {
        let d = Self::new(parts)?;
        if &d.target != target {
            return Err(Error::InvalidDecomposition(format!(
                "parts sum to {{{}}}, not {{{}}}",
                d.target, target
            )));
        }
        Ok(d)
    }

    pub fn parts(&self) -> &[ResidueSet] {
        &self.parts
    }

    pub fn target(&self) -> &ResidueSet {
        &self.target
    }

    pub fn part_product(&self) -> BigUint {
        self.parts.iter().map(|s| BigUint::from(s.len())).product()
    }

    /// Direct sum: `|target| = prod |part_i|`.
    pub fn is_direct(&self) -> bool {
        self.part_product() == BigUint::from(self.target.len())
    }
}

pub fn is_direct(d: &Decomposition) -> bool {
    d.is_direct()
}

/// `{a, a + d} + (L - 2){0, d}`: an L-term progression as a sum of `L - 1`
/// pairs.
pub fn ap_to_pairs(a: u64, d: u64, len: u64, field: &PrimeField) -> Result<Decomposition> {
    let p = field.p();
    if field.reduce(d) == 0 {
        return Err(Error::ZeroResidue(p));
    }
    if len < 2 {
        return Err(Error::InvalidGap(format!("length {len} < 2")));
    }
    if len >= p {
        return Err(Error::InvalidGap(format!(
            "length {len} wraps around Z_{p}"
        )));
    }
    let a = field.reduce(a);
    let d = field.reduce(d);
    let mut parts = vec![ResidueSet::from_elements(field, [a, field.add(a, d)])];
    let step = ResidueSet::from_elements(field, [0, d]);
    parts.extend(std::iter::repeat(step).take(len as usize - 2));
    Decomposition::with_target(parts, &progression(field, a, d, len))
}

/// `(a, d, len)` with `S = {a, a + d, ..., a + (len - 1)d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApWitness {
    pub a: u64,
    pub d: u64,
    pub len: u64,
}

/// Finds `(a, d)` with `S` an arithmetic progression. Starts are tried in
/// ascending order, and for each start the differences `s - a` in ascending
/// order of `s`. A singleton is reported as a length-1 progression with
/// `d = 1`.
pub fn is_arithmetic_progression(s: &ResidueSet) -> Option<ApWitness> {
    let f = s.field();
    let n = s.len() as u64;
    match n {
        0 => return None,
        1 => {
            return Some(ApWitness {
                a: s.elements()[0],
                d: 1,
                len: 1,
            })
        }
        _ => {}
    }
    for a in s.iter() {
        for t in s.iter() {
            if t == a {
                continue;
            }
            let d = f.sub(t, a);
            // a must start the run unless S is all of Z_p
            if n < f.p() && s.contains(f.sub(a, d)) {
                continue;
            }
            let mut x = a;
            let mut run = 0;
            while run < n && s.contains(x) {
                run += 1;
                x = f.add(x, d);
            }
            if run == n {
                return Some(ApWitness { a, d, len: n });
            }
        }
    }
    None
}

const PEEL_CACHE_LIMIT: usize = 1 << 16;

/// Peels an all-2 proper GAP off `S`: finds `d` with `S = T + {0, d}` a
/// disjoint union and recurses on `T`.
///
/// Returns `Ok(None)` when no such structure exists, including for a
/// singleton. Errors when `|S|` is not a power of two.
pub fn binary_gap_peel(s: &ResidueSet) -> Result<Option<GapDescription>> {
    let n = s.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if n == 1 {
        return Ok(None);
    }
    let mut peeler = Peeler::default();
    Ok(peeler.peel(s).map(|(a, diffs)| {
        let lengths = vec![2; diffs.len()];
        GapDescription {
            a,
            diffs,
            lengths,
            proper: true,
        }
    }))
}

#[derive(Default)]
struct Peeler {
    // keyed on the set translated so its least element is 0
    memo: HashMap<Vec<u64>, Option<(u64, Vec<u64>)>>,
}

impl Peeler {
    fn peel(&mut self, s: &ResidueSet) -> Option<(u64, Vec<u64>)> {
        let f = s.field();
        let shift = s.min()?;
        let normal = translate(s, f.neg(shift));
        let key = normal.elements().to_vec();
        let found = match self.memo.get(&key) {
            Some(hit) => hit.clone(),
            None => {
                let res = self.peel_normalized(&normal);
                if self.memo.len() < PEEL_CACHE_LIMIT {
                    self.memo.insert(key, res.clone());
                }
                res
            }
        };
        found.map(|(a, diffs)| (f.add(a, shift), diffs))
    }

    fn peel_normalized(&mut self, s: &ResidueSet) -> Option<(u64, Vec<u64>)> {
        let f = s.field();
        let xs = s.elements();
        if xs.len() == 2 {
            return Some((xs[0], vec![f.sub(xs[1], xs[0])]));
        }
        for d in difference_set(s) {
            let Some(half) = chain_split(s, d) else {
                continue;
            };
            if let Some((a, mut rest)) = self.peel(&half) {
                rest.insert(0, d);
                return Some((a, rest));
            }
        }
        None
    }
}

/// Nonzero differences `x - y` over `S`, ascending.
fn difference_set(s: &ResidueSet) -> Vec<u64> {
    let f = s.field();
    let mut seen = vec![false; f.p() as usize];
    for x in s.iter() {
        for y in s.iter() {
            seen[f.sub(x, y) as usize] = true;
        }
    }
    (1..f.p()).filter(|&d| seen[d as usize]).collect()
}

/// Splits `S = T ⊔ (T + d)` if possible. Walks maximal chains
/// `x, x + d, x + 2d, ...` inside `S`; the split exists iff every chain has
/// even length, and `T` takes every other element from each chain head.
fn chain_split(s: &ResidueSet, d: u64) -> Option<ResidueSet> {
    let f = s.field();
    let mut half = Vec::with_capacity(s.len() / 2);
    let mut covered = 0usize;
    for head in s.iter() {
        if s.contains(f.sub(head, d)) {
            continue;
        }
        let mut x = head;
        let mut len = 0usize;
        while s.contains(x) {
            if len % 2 == 0 {
                half.push(x);
            }
            len += 1;
            x = f.add(x, d);
        }
        if len % 2 == 1 {
            return None;
        }
        covered += len;
    }
    // a chain without a head would be a full cycle of Z_p, impossible for |S| < p
    (covered == s.len()).then(|| ResidueSet::from_elements(f, half))
}

/// Outcome of the brute-force GAP search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub witness: Option<GapDescription>,
    /// Largest `prod L_i` explored; non-proper GAPs with a larger volume
    /// were not searched.
    pub product_cap: u64,
    pub dim_max: usize,
}

/// Largest prime accepted by [`gap_oracle`].
pub const ORACLE_MAX_P: u64 = 101;
/// Largest dimension accepted by [`gap_oracle`].
pub const ORACLE_MAX_DIM: usize = 6;

/// Exhaustive search for `(a, d_i, L_i)` with `n <= dim_max` and
/// `prod L_i <= product_cap` generating exactly `S`.
///
/// Dimensions are tried in increasing order. Within a dimension the search
/// enumerates `a`, then each `(d_i, L_i)` in turn, discarding a partial
/// choice as soon as the partial progression leaves `S` (adding a dimension
/// never removes points, so such a prefix cannot be completed).
pub fn gap_oracle(s: &ResidueSet, dim_max: usize, product_cap: u64) -> Result<OracleResult> {
    let p = s.field().p();
    if p > ORACLE_MAX_P {
        return Err(Error::CostGuard(format!("oracle needs p <= {ORACLE_MAX_P} (got {p})")));
    }
    if dim_max > ORACLE_MAX_DIM {
        return Err(Error::CostGuard(format!(
            "oracle needs dim_max <= {ORACLE_MAX_DIM} (got {dim_max})"
        )));
    }
    if product_cap > 2 * p {
        return Err(Error::CostGuard(format!(
            "oracle needs product_cap <= 2p = {} (got {product_cap})",
            2 * p
        )));
    }
    let mut witness = None;
    if s.len() >= 2 {
        for dim in 1..=dim_max {
            let mut search = OracleSearch {
                target: s,
                dim,
                cap: product_cap,
                a: 0,
                diffs: Vec::new(),
                lengths: Vec::new(),
            };
            if let Some(w) = search.run() {
                witness = Some(w);
                break;
            }
        }
    }
    Ok(OracleResult {
        witness,
        product_cap,
        dim_max,
    })
}

struct OracleSearch<'a> {
    target: &'a ResidueSet,
    dim: usize,
    cap: u64,
    a: u64,
    diffs: Vec<u64>,
    lengths: Vec<u64>,
}

impl OracleSearch<'_> {
    fn run(&mut self) -> Option<GapDescription> {
        for a in self.target.iter() {
            self.a = a;
            if let Some(w) = self.extend(&[a], 1) {
                return Some(w);
            }
        }
        None
    }

    /// `points` holds the distinct elements of the partial progression.
    fn extend(&mut self, points: &[u64], volume: u64) -> Option<GapDescription> {
        if self.diffs.len() == self.dim {
            return (points.len() == self.target.len()).then(|| GapDescription {
                a: self.a,
                diffs: self.diffs.clone(),
                lengths: self.lengths.clone(),
                proper: points.len() as u64 == volume,
            });
        }
        let f = self.target.field().clone();
        let mut seen = vec![false; f.p() as usize];
        for d in 1..f.p() {
            let mut layer = points.to_vec();
            let mut union = points.to_vec();
            for &x in points {
                seen[x as usize] = true;
            }
            let mut len = 1u64;
            while volume.saturating_mul(len + 1) <= self.cap {
                for x in layer.iter_mut() {
                    *x = f.add(*x, d);
                }
                if !layer.iter().all(|&y| self.target.contains(y)) {
                    break;
                }
                for &y in &layer {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        union.push(y);
                    }
                }
                len += 1;
                self.diffs.push(d);
                self.lengths.push(len);
                let hit = self.extend(&union, volume * len);
                self.diffs.pop();
                self.lengths.pop();
                if hit.is_some() {
                    return hit;
                }
            }
            for &y in &union {
                seen[y as usize] = false;
            }
        }
        None
    }
}

/// Largest target enumerated without a part-size bound.
pub const COFACTOR_MAX_TARGET: usize = 24;

/// Enumerates the 2-decompositions `B = S + T` with `|S|, |T| >= 2`,
/// normalized so that `0 ∈ T` (hence `S ⊆ B`). For each `S` the emitted `T`
/// is the maximal cofactor `∩_{s ∈ S} (B - s)`.
///
/// Subsets are walked depth-first in index order; a branch is cut once its
/// cofactor drops below two elements, since cofactors only shrink as `S`
/// grows.
pub fn cofactor_decompositions(
    b: &ResidueSet,
    max_part_size: Option<usize>,
) -> Result<CofactorDecompositions> {
    if max_part_size.is_none() && b.len() > COFACTOR_MAX_TARGET {
        return Err(Error::CostGuard(format!(
            "unbounded enumeration needs |B| <= {COFACTOR_MAX_TARGET} (got {})",
            b.len()
        )));
    }
    let p = b.field().p();
    let shifted = b
        .iter()
        .map(|e| translate(b, p - e).bits().to_vec())
        .collect();
    Ok(CofactorDecompositions {
        target: b.clone(),
        shifted,
        max_size: max_part_size.unwrap_or(b.len()),
        stack: Vec::new(),
        cursor: 0,
    })
}

pub struct CofactorDecompositions {
    target: ResidueSet,
    // B - e for each e in B
    shifted: Vec<Vec<u64>>,
    max_size: usize,
    stack: Vec<(usize, Vec<u64>)>,
    cursor: usize,
}

impl CofactorDecompositions {
    fn emit(&self) -> Option<Decomposition> {
        let f = self.target.field();
        let cofactor = &self.stack.last()?.1;
        let t_len: usize = cofactor.iter().map(|w| w.count_ones() as usize).sum();
        if self.stack.len() * t_len < self.target.len() {
            return None;
        }
        let t = ResidueSet::from_bits(f, cofactor.clone());
        let s = ResidueSet::from_elements(
            f,
            self.stack.iter().map(|(i, _)| self.target.elements()[*i]),
        );
        let sum = sumset(&s, &t).ok()?;
        (sum.len() == self.target.len()).then(|| Decomposition {
            parts: vec![s, t],
            target: self.target.clone(),
        })
    }
}

impl Iterator for CofactorDecompositions {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        let n = self.target.len();
        loop {
            if self.cursor < n && self.stack.len() < self.max_size {
                let i = self.cursor;
                self.cursor += 1;
                let cofactor: Vec<u64> = match self.stack.last() {
                    Some((_, parent)) => parent
                        .iter()
                        .zip(&self.shifted[i])
                        .map(|(x, y)| x & y)
                        .collect(),
                    None => self.shifted[i].clone(),
                };
                if cofactor.iter().map(|w| w.count_ones()).sum::<u32>() < 2 {
                    continue;
                }
                self.stack.push((i, cofactor));
                if self.stack.len() >= 2 {
                    if let Some(d) = self.emit() {
                        return Some(d);
                    }
                }
            } else {
                let (i, _) = self.stack.pop()?;
                self.cursor = i + 1;
            }
        }
    }
}

/// Sizes entering the leave-one-out sumset inequality
/// `|S|^(n-1) <= prod |Ŝ_i|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmrOutcome {
    pub total: usize,
    pub leave_one_out: Vec<usize>,
    pub holds: bool,
}

pub fn gmr_check(parts: &[ResidueSet]) -> Result<GmrOutcome> {
    let n = parts.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 sets (got {n})")));
    }
    if parts.iter().any(ResidueSet::is_empty) {
        return Err(Error::EmptySet);
    }
    let field = parts[0].field().clone();
    let total = sum_all(&field, parts)?.len();
    let leave_one_out = (0..n)
        .map(|i| {
            let rest = parts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, s)| s);
            sum_all(&field, rest).map(|s| s.len())
        })
        .collect::<Result<Vec<_>>>()?;
    let lhs = BigUint::from(total).pow(n as u32 - 1);
    let rhs: BigUint = leave_one_out.iter().map(|&x| BigUint::from(x)).product();
    Ok(GmrOutcome {
        total,
        leave_one_out,
        holds: lhs <= rhs,
    })
}

/// The nonzero sum `c` represented at least `t/2` times when a subgroup is
/// a direct sum of pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lemma52Witness {
    pub c: u64,
    pub r_c: u64,
    pub a: u64,
    pub last_diff: u64,
}

/// Normalizes the parts to `{0, d_i}` (all but the last) and `{a, a + d_n}`,
/// then evaluates `c = 2a + sum_{i<n} d_i` against the target's
/// representation function.
pub fn lemma52_witness(d: &Decomposition) -> Result<Lemma52Witness> {
    let target = d.target();
    let f = target.field();
    let spec = as_subgroup(target).ok_or_else(|| {
        Error::Hypothesis(format!("{{{target}}} is not a multiplicative subgroup"))
    })?;
    if spec.k() == 1 {
        return Err(Error::Hypothesis("subgroup must be proper (k > 1)".into()));
    }
    if d.parts().iter().any(|s| s.len() != 2) {
        return Err(Error::Hypothesis("every part must have exactly 2 elements".into()));
    }
    if !d.is_direct() {
        return Err(Error::Hypothesis("decomposition is not a direct sum".into()));
    }
    let (last, init) = d.parts().split_last().expect("nonempty");
    let mut shift = 0u64;
    let mut diff_sum = 0u64;
    for part in init {
        let [u, v] = [part.elements()[0], part.elements()[1]];
        shift = f.add(shift, u);
        diff_sum = f.add(diff_sum, f.sub(v, u));
    }
    let a = f.add(last.elements()[0], shift);
    let last_diff = f.sub(last.elements()[1], last.elements()[0]);
    let c = f.add(f.add(a, a), diff_sum);
    if c != f.neg(last_diff) || c == 0 {
        return Err(Error::Violation(format!(
            "c = {c} but -d_n = {} (p = {})",
            f.neg(last_diff),
            f.p()
        )));
    }
    let r_c = rep_profile(target).r(c);
    if 2 * r_c < spec.t() {
        return Err(Error::Violation(format!(
            "r({c}) = {r_c} < t/2 = {}/2 (p = {})",
            spec.t(),
            f.p()
        )));
    }
    Ok(Lemma52Witness {
        c,
        r_c,
        a,
        last_diff,
    })
}

/// Turns an all-2 GAP into its pair decomposition: `{0, d_i}` for all but
/// the last difference, then `{a, a + d_n}`.
pub fn gap_to_pairs(desc: &GapDescription, field: &PrimeField) -> Result<Decomposition> {
    desc.validate()?;
    if desc.lengths.iter().any(|&l| l != 2) {
        return Err(Error::InvalidGap("all lengths must be 2".into()));
    }
    let (&last, init) = desc.diffs.split_last().expect("validated");
    let mut parts: Vec<ResidueSet> = init
        .iter()
        .map(|&d| ResidueSet::from_elements(field, [0, d]))
        .collect();
    parts.push(ResidueSet::from_elements(field, [desc.a, field.add(desc.a, last)]));
    Decomposition::new(parts)
}
