//! Prime-field arithmetic: primality, factorization of `p - 1`, element
//! orders, primitive roots and the subgroups of k-th power residues.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::setops::ResidueSet;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Witness bases that make Miller-Rabin deterministic for every `n < 2^64`.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test, exact on the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factors of `n` with multiplicity, ascending. Trial division.
pub fn factorize(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    while n % 2 == 0 {
        out.push(2);
        n /= 2;
    }
    let mut q = 3u64;
    while q.saturating_mul(q) <= n {
        while n % q == 0 {
            out.push(q);
            n /= q;
        }
        q += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Integer power with overflow detection.
pub fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

/// The field Z_p for an odd prime `p`, together with the factorization of
/// `p - 1`. Cloning is cheap.
#[derive(Clone)]
pub struct PrimeField {
    p: u64,
    factors: Arc<[u64]>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenPrime(p));
        }
        Ok(PrimeField {
            p,
            factors: factorize(p - 1).into(),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Prime factors of `p - 1` with multiplicity.
    pub fn p_minus_1_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn distinct_factors(&self) -> Vec<u64> {
        let mut f = self.factors.to_vec();
        f.dedup();
        f
    }

    /// Every positive divisor of `p - 1`, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        let mut i = 0;
        while i < self.factors.len() {
            let q = self.factors[i];
            let mut mult = 0;
            while i < self.factors.len() && self.factors[i] == q {
                mult += 1;
                i += 1;
            }
            let existing = divs.len();
            let mut pw = 1u64;
            for _ in 0..mult {
                pw *= q;
                for j in 0..existing {
                    divs.push(divs[j] * pw);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        sub_mod(0, a, self.p)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    #[inline]
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// Multiplicative order of `x`, found by stripping prime factors of
    /// `p - 1` from the exponent while `x^e = 1` still holds.
    pub fn element_order(&self, x: u64) -> Result<u64> {
        let x = self.reduce(x);
        if x == 0 {
            return Err(Error::ZeroResidue(self.p));
        }
        let mut order = self.p - 1;
        for q in self.distinct_factors() {
            while order % q == 0 && self.pow(x, order / q) == 1 {
                order /= q;
            }
        }
        Ok(order)
    }

    /// Smallest generator of Z_p^*.
    pub fn primitive_root(&self) -> u64 {
        if self.p == 3 {
            return 2;
        }
        let n = self.p - 1;
        let qs = self.distinct_factors();
        (2..self.p)
            .find(|&g| qs.iter().all(|&q| self.pow(g, n / q) != 1))
            .expect("every prime field has a generator")
    }

    /// The subgroup `A_k = {x^k : x in Z_p^*}` of order `(p - 1) / k`.
    pub fn subgroup(&self, k: u64) -> Result<ResidueSet> {
        let spec = SubgroupSpec::new(self.clone(), k)?;
        Ok(spec.elements())
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl std::hash::Hash for PrimeField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.p)
    }
}

pub fn is_prime_field(p: u64) -> bool {
    p >= 3 && is_prime(p)
}

/// Identifies `A_k`, the subgroup of k-th powers, with its order `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    field: PrimeField,
    k: u64,
    t: u64,
}

impl SubgroupSpec {
    pub fn new(field: PrimeField, k: u64) -> Result<Self> {
        let n = field.p() - 1;
        if k == 0 || n % k != 0 {
            return Err(Error::NotDivisor { k, p_minus_1: n });
        }
        Ok(SubgroupSpec { t: n / k, field, k })
    }

    /// The subgroup of order `t`, when `t | p - 1`.
    pub fn with_order(field: PrimeField, t: u64) -> Result<Self> {
        let n = field.p() - 1;
        if t == 0 || n % t != 0 {
            return Err(Error::InvalidParameter(format!(
                "no subgroup of order {t} in Z_{}^*",
                field.p()
            )));
        }
        Self::new(field, n / t)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// The elements of `A_k`, built as `{g^(k i) : 0 <= i < t}` from the
    /// smallest primitive root `g`.
    pub fn elements(&self) -> ResidueSet {
        let set = self.elements_from_generator();
        debug_assert_eq!(set.len() as u64, self.t);
        set
    }

    /// Enumerates `x^k` for every unit `x`. `O(p log k)`.
    pub fn elements_by_powers(&self) -> ResidueSet {
        let f = &self.field;
        ResidueSet::from_iter_unchecked(f, (1..f.p()).map(|x| f.pow(x, self.k)))
    }

    pub fn elements_from_generator(&self) -> ResidueSet {
        let f = &self.field;
        let h = f.pow(f.primitive_root(), self.k);
        let mut acc = 1u64;
        let mut powers = Vec::with_capacity(self.t as usize);
        for _ in 0..self.t {
            powers.push(acc);
            acc = f.mul(acc, h);
        }
        ResidueSet::from_iter_unchecked(f, powers)
    }
}

/// Recognizes a multiplicative subgroup of Z_p^*: returns its spec when
/// `set` is exactly `A_k` for some `k`.
pub fn as_subgroup(set: &ResidueSet) -> Option<SubgroupSpec> {
    let t = set.len() as u64;
    let spec = SubgroupSpec::with_order(set.field().clone(), t).ok()?;
    // Z_p^* is cyclic, so the subgroup of a given order is unique.
    if set.elements().iter().all(|&x| x != 0 && set.field().pow(x, t) == 1) {
        Some(spec)
    } else {
        None
    }
}
