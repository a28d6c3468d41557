//! Set arithmetic over Z_p.
//!
//! A [`ResidueSet`] keeps two views of the same subset: a bit vector of
//! length `p` used by the sumset kernel, and the sorted element list used for
//! iteration. Sumsets are computed as an OR of cyclic rotations of one bit
//! vector, one rotation per element of the other set.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::PrimeField;

const WORD: usize = 64;

#[derive(Clone)]
pub struct ResidueSet {
    field: PrimeField,
    bits: Vec<u64>,
    elements: Vec<u64>,
}

fn words_for(p: u64) -> usize {
    (p as usize).div_ceil(WORD)
}

impl ResidueSet {
    pub fn empty(field: &PrimeField) -> Self {
        ResidueSet {
            field: field.clone(),
            bits: vec![0; words_for(field.p())],
            elements: Vec::new(),
        }
    }

    /// Builds a set from arbitrary integers, reducing each modulo `p`.
    pub fn from_elements<I: IntoIterator<Item = u64>>(field: &PrimeField, items: I) -> Self {
        let p = field.p();
        Self::from_iter_unchecked(field, items.into_iter().map(|x| x % p))
    }

    /// Same as [`from_elements`](Self::from_elements) for already reduced input.
    pub(crate) fn from_iter_unchecked<I: IntoIterator<Item = u64>>(
        field: &PrimeField,
        items: I,
    ) -> Self {
        let mut bits = vec![0u64; words_for(field.p())];
        for x in items {
            debug_assert!(x < field.p());
            bits[x as usize / WORD] |= 1 << (x as usize % WORD);
        }
        Self::from_bits(field, bits)
    }

    pub(crate) fn from_bits(field: &PrimeField, bits: Vec<u64>) -> Self {
        let mut elements = Vec::with_capacity(bits.iter().map(|w| w.count_ones() as usize).sum());
        for (i, &w) in bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                elements.push((i * WORD + b) as u64);
                w &= w - 1;
            }
        }
        let set = ResidueSet {
            field: field.clone(),
            bits,
            elements,
        };
        set.debug_check();
        set
    }

    /// The whole field `{0, 1, ..., p - 1}`.
    pub fn full(field: &PrimeField) -> Self {
        Self::from_iter_unchecked(field, 0..field.p())
    }

    fn debug_check(&self) {
        if cfg!(debug_assertions) {
            let p = self.field.p();
            assert!(self.elements.iter().all(|&x| x < p));
            assert!(self.elements.windows(2).all(|w| w[0] < w[1]));
            let n: usize = self.bits.iter().map(|w| w.count_ones() as usize).sum();
            assert_eq!(n, self.elements.len());
            assert!(self.elements.iter().all(|&x| self.contains(x)));
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        x < self.field.p() && (self.bits[x as usize / WORD] >> (x as usize % WORD)) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, u64>> {
        self.elements.iter().copied()
    }

    pub(crate) fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.field == other.field && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_field(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(Self::from_bits(&self.field, bits))
    }

    fn same_field(&self, other: &ResidueSet) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(())
    }

    /// Space-separated ascending residues.
    pub fn to_list_string(&self) -> String {
        let parts: Vec<String> = self.elements.iter().map(u64::to_string).collect();
        parts.join(" ")
    }
}

impl PartialEq for ResidueSet {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.bits == other.bits
    }
}

impl Eq for ResidueSet {}

impl std::hash::Hash for ResidueSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p().hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} mod {}", self.to_list_string(), self.field.p())
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_list_string())
    }
}

// dst |= src << shift, bits pushed past the last word are dropped.
fn shl_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / WORD;
    let bs = shift % WORD;
    let n = dst.len();
    for j in ws..n {
        let i = j - ws;
        let mut v = src[i] << bs;
        if bs > 0 && i > 0 {
            v |= src[i - 1] >> (WORD - bs);
        }
        dst[j] |= v;
    }
}

// dst |= src >> shift.
fn shr_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / WORD;
    let bs = shift % WORD;
    let n = dst.len();
    for j in 0..n.saturating_sub(ws) {
        let i = j + ws;
        let mut v = src[i] >> bs;
        if bs > 0 && i + 1 < n {
            v |= src[i + 1] << (WORD - bs);
        }
        dst[j] |= v;
    }
}

fn mask_tail(bits: &mut [u64], p: u64) {
    let rem = p as usize % WORD;
    if rem != 0 {
        if let Some(last) = bits.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// ORs the set `src + shift (mod p)` into `dst`. Leaves garbage above bit
/// `p - 1` which the caller masks.
fn rotate_or(dst: &mut [u64], src: &[u64], shift: u64, p: u64) {
    if shift == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= s;
        }
        return;
    }
    shl_or(dst, src, shift as usize);
    shr_or(dst, src, (p - shift) as usize);
}

/// `A + B = {a + b mod p}`.
pub fn sumset(a: &ResidueSet, b: &ResidueSet) -> Result<ResidueSet> {
    a.same_field(b)?;
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let p = a.field.p();
    let mut bits = vec![0u64; large.bits.len()];
    for s in small.iter() {
        rotate_or(&mut bits, &large.bits, s, p);
    }
    mask_tail(&mut bits, p);
    Ok(ResidueSet::from_bits(&a.field, bits))
}

/// Sumset of a list of sets; the empty list gives `{0}`.
pub fn sum_all<'a, I>(field: &PrimeField, sets: I) -> Result<ResidueSet>
where
    I: IntoIterator<Item = &'a ResidueSet>,
{
    let mut acc = ResidueSet::from_iter_unchecked(field, [0]);
    for s in sets {
        acc = sumset(&acc, s)?;
    }
    Ok(acc)
}

/// The l-fold sumset `lA`.
pub fn iterated_sumset(a: &ResidueSet, l: u64) -> Result<ResidueSet> {
    if l < 1 {
        return Err(Error::InvalidParameter(format!("fold count must be >= 1 (got {l})")));
    }
    let mut acc = a.clone();
    for _ in 1..l {
        acc = sumset(&acc, a)?;
    }
    Ok(acc)
}

pub fn translate(a: &ResidueSet, x: u64) -> ResidueSet {
    let p = a.field.p();
    let mut bits = vec![0u64; a.bits.len()];
    rotate_or(&mut bits, &a.bits, x % p, p);
    mask_tail(&mut bits, p);
    ResidueSet::from_bits(&a.field, bits)
}

pub fn dilate(a: &ResidueSet, x: u64) -> Result<ResidueSet> {
    let f = &a.field;
    let x = f.reduce(x);
    if x == 0 {
        return Err(Error::ZeroResidue(f.p()));
    }
    Ok(ResidueSet::from_iter_unchecked(f, a.iter().map(|e| f.mul(e, x))))
}

/// The representation function `r(c) = #{(x, y) in A x A : x + y = c}`
/// over ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepProfile {
    field: PrimeField,
    counts: Vec<u64>,
    source_size: usize,
}

impl RepProfile {
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn r(&self, c: u64) -> u64 {
        self.counts[(c % self.field.p()) as usize]
    }

    /// Maximizing nonzero `c` with its count, smallest `c` on ties.
    pub fn max_nonzero(&self) -> (u64, u64) {
        let mut best = (1u64, self.counts[1]);
        for (c, &n) in self.counts.iter().enumerate().skip(2) {
            if n > best.1 {
                best = (c as u64, n);
            }
        }
        best
    }
}

pub fn rep_profile(a: &ResidueSet) -> RepProfile {
    let f = &a.field;
    let mut counts = vec![0u64; f.p() as usize];
    for x in a.iter() {
        for y in a.iter() {
            counts[f.add(x, y) as usize] += 1;
        }
    }
    RepProfile {
        field: f.clone(),
        counts,
        source_size: a.len(),
    }
}

pub fn max_rep_nonzero(a: &ResidueSet) -> (u64, u64) {
    rep_profile(a).max_nonzero()
}

/// `|A + A| / |A|` kept as an unreduced integer pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoublingRatio {
    pub numerator: u64,
    pub denominator: u64,
}

impl DoublingRatio {
    /// Exact comparison against `num / den`.
    pub fn equals(&self, num: u64, den: u64) -> bool {
        self.numerator as u128 * den as u128 == num as u128 * self.denominator as u128
    }
}

impl fmt::Display for DoublingRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

pub fn doubling_ratio(a: &ResidueSet) -> Result<DoublingRatio> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(DoublingRatio {
        numerator: sumset(a, a)?.len() as u64,
        denominator: a.len() as u64,
    })
}

pub fn sum_of_elements(a: &ResidueSet) -> u64 {
    let f = &a.field;
    a.iter().fold(0, |acc, x| f.add(acc, x))
}
