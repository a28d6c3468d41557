//! Point counts on the projective Fermat curves `x^k + y^k = c z^k` over
//! Z_p, with the Hasse-Weil and small-subgroup bounds checked in exact
//! integer arithmetic.

use crate::error::{Error, Result};
use crate::field::{PrimeField, SubgroupSpec};
use crate::setops::{rep_profile, RepProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCount {
    pub field: PrimeField,
    pub k: u64,
    pub c: u64,
    /// Projective points `N(c)`.
    pub n_projective: u64,
    /// Affine points with `xy != 0` on the chart `z = 1`.
    pub n_affine_nonzero: u64,
    pub genus: u64,
}

/// `#{x in Z_p : x^k = v}` for every `v`.
fn power_histogram(field: &PrimeField, k: u64) -> Vec<u64> {
    let mut hist = vec![0u64; field.p() as usize];
    for x in 0..field.p() {
        hist[field.pow(x, k) as usize] += 1;
    }
    hist
}

pub fn genus(k: u64) -> u64 {
    if k < 3 {
        0
    } else {
        (k - 1) * (k - 2) / 2
    }
}

/// Counts points chart by chart: `z = 1` over all `(x, y)`, then `z = 0`
/// normalized to `x = 1`, where `y^k = -1`. (`z = 0, x = 0` forces `y = 0`.)
pub fn fermat_point_count(field: &PrimeField, k: u64, c: u64) -> Result<CurveCount> {
    let spec = SubgroupSpec::new(field.clone(), k)?;
    let c = field.reduce(c);
    if c == 0 {
        return Err(Error::ZeroResidue(field.p()));
    }
    let hist = power_histogram(field, spec.k());
    let mut affine = 0u64;
    let mut affine_nonzero = 0u64;
    for (u, &hu) in hist.iter().enumerate() {
        if hu == 0 {
            continue;
        }
        let v = field.sub(c, u as u64);
        let hv = hist[v as usize];
        affine += hu * hv;
        // x^k = 0 only for x = 0
        if u != 0 && v != 0 {
            affine_nonzero += hu * hv;
        }
    }
    let at_infinity = hist[field.neg(1) as usize];
    Ok(CurveCount {
        field: field.clone(),
        k,
        c,
        n_projective: affine + at_infinity,
        n_affine_nonzero: affine_nonzero,
        genus: genus(k),
    })
}

/// `(N - (p + 1))^2 <= 4 g^2 p`.
pub fn hasse_weil_check(count: &CurveCount) -> bool {
    let p = count.field.p() as i128;
    let dev = count.n_projective as i128 - (p + 1);
    let g = count.genus as i128;
    dev * dev <= 4 * g * g * p
}

/// `n_affine_nonzero = k^2 r(c)`, which gives `r(c) <= N(c) / k^2`.
pub fn k_squared_correspondence(count: &CurveCount, profile: &RepProfile) -> bool {
    let r = profile.r(count.c);
    let k2 = count.k * count.k;
    count.n_affine_nonzero == k2 * r && k2 * r <= count.n_projective
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MattareiOutcome {
    pub t: u64,
    pub max_c: u64,
    pub max_r: u64,
    /// `4 r^3 <= 27 t^2`.
    pub holds: bool,
}

/// Checks `r(c) <= 3 * 2^(-2/3) * t^(2/3)` for every nonzero `c`, cubed to
/// `4 r^3 <= 27 t^2`. Requires `k >= 4` and `4t <= k^3`.
pub fn mattarei_check(field: &PrimeField, k: u64) -> Result<MattareiOutcome> {
    let spec = SubgroupSpec::new(field.clone(), k)?;
    let t = spec.t();
    if k < 4 {
        return Err(Error::Hypothesis(format!("k = {k} < 4")));
    }
    if 4 * t as u128 > (k as u128).pow(3) {
        return Err(Error::Hypothesis(format!("4t = {} > k^3 = {}", 4 * t, k.pow(3))));
    }
    let (max_c, max_r) = rep_profile(&spec.elements()).max_nonzero();
    let holds = 4 * (max_r as u128).pow(3) <= 27 * (t as u128).pow(2);
    Ok(MattareiOutcome {
        t,
        max_c,
        max_r,
        holds,
    })
}
