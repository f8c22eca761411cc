//! k-wise independent bits and bounded-alphabet symbols from short seeds.
//!
//! A family over `n` variables with independence `k` is a uniformly random
//! polynomial of degree `k - 1` over GF(2^m), `m = max(1, ceil(log2 n))`.
//! Variable `j` is the polynomial evaluated at the field point `j`; any `k`
//! distinct points see jointly uniform values because the Vandermonde map
//! from coefficients to values is a bijection. The seed is the `k·m`
//! coefficient bits.
//!
//! This is the plain polynomial construction rather than a BCH-code based one;
//! seeds are `k·m` bits instead of roughly `(k/2)·log n`, which is the same
//! order and all the testers rely on is the independence contract.

mod field;

pub use field::Gf2m;

use crate::error::{input, Error, Result};
use rand::RngCore;
use serde::Serialize;
use std::fmt;

/// Maximum number of rejection rounds before falling back to reduction mod `A`.
pub const REJECTION_ROUNDS: u64 = 40;

/// Width `m` of the field used for `n` variables.
pub fn field_width(n: u64) -> u32 {
    ceil_log2(n).max(1)
}

pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// A bit string, bit `i` stored at bit `i % 8` of byte `i / 8`.
///
/// The hex form lists bytes in order, two digits per byte, so bit 0 is the
/// least significant bit of the first byte.
#[derive(Clone, PartialEq, Eq)]
pub struct Seed {
    bytes: Vec<u8>,
    len: usize,
}

impl Seed {
    pub fn zeros(len: usize) -> Self {
        Self {
            bytes: vec![0; len.div_ceil(8)],
            len,
        }
    }

    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut s = Self::zeros(len);
        rng.fill_bytes(&mut s.bytes);
        s.clear_padding();
        s
    }

    /// Parses `len` bits from hex. The string must have exactly
    /// `2·ceil(len/8)` digits and all padding bits must be zero.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let hex = hex.trim();
        let hex = hex.strip_prefix("0x").unwrap_or(hex);
        let want = 2 * len.div_ceil(8);
        if hex.len() != want {
            return input(format!(
                "seed of {len} bits needs {want} hex digits, got {}",
                hex.len()
            ));
        }
        let bytes = (0..want)
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("seed hex: {e}")))?;
        let mut s = Self { bytes, len };
        let raw = s.bytes.clone();
        s.clear_padding();
        if s.bytes != raw {
            return input("seed hex has non-zero padding bits");
        }
        Ok(s)
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.bytes[i / 8] >> (i % 8)) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.bytes[i / 8] |= 1 << (i % 8);
        } else {
            self.bytes[i / 8] &= !(1 << (i % 8));
        }
    }

    /// Seed whose `width`-bit little-endian chunks are `words`.
    pub fn from_words(words: &[u64], width: u32) -> Self {
        let mut s = Self::zeros(words.len() * width as usize);
        for (c, &w) in words.iter().enumerate() {
            for b in 0..width as usize {
                s.set_bit(c * width as usize + b, (w >> b) & 1 == 1);
            }
        }
        s
    }

    fn word(&self, index: usize, width: u32) -> u64 {
        (0..width as usize).fold(0, |acc, b| {
            acc | (self.bit(index * width as usize + b) as u64) << b
        })
    }

    fn clear_padding(&mut self) {
        if !self.len.is_multiple_of(8) {
            let last = self.bytes.len() - 1;
            self.bytes[last] &= (1u8 << (self.len % 8)) - 1;
        }
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seed({} bits, {})", self.len, self.to_hex())
    }
}

/// Serializable description of a family, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyDescriptor {
    pub n: u64,
    pub k: usize,
    pub field_width: u32,
    pub modulus_hex: String,
    pub seed_bits: usize,
    pub seed_hex: String,
}

#[derive(Debug, Clone)]
pub struct KWiseFamily {
    n: u64,
    field: Gf2m,
    /// `coeffs[i]` multiplies `x^i`.
    coeffs: Vec<u64>,
    seed: Seed,
}

impl KWiseFamily {
    /// Seed length in bits for `n` variables and independence `k`.
    pub fn seed_len(n: u64, k: usize) -> usize {
        k * field_width(n) as usize
    }

    pub fn build(n: u64, k: usize, seed: &Seed) -> Result<Self> {
        if n == 0 {
            return input("a family needs at least one variable");
        }
        if k == 0 {
            return input("independence k must be at least 1");
        }
        if k as u64 > n {
            return input(format!("independence k = {k} exceeds n = {n}"));
        }
        let m = field_width(n);
        if m > field::MAX_WIDTH {
            return input(format!("n = {n} needs a field wider than 64 bits"));
        }
        let expected = k * m as usize;
        if seed.len() != expected {
            return input(format!(
                "seed has {} bits, expected k·m = {k}·{m} = {expected}",
                seed.len()
            ));
        }
        let coeffs = (0..k).map(|c| seed.word(c, m)).collect();
        Ok(Self {
            n,
            field: Gf2m::new(m),
            coeffs,
            seed: seed.clone(),
        })
    }

    pub fn random<R: RngCore + ?Sized>(n: u64, k: usize, rng: &mut R) -> Result<Self> {
        let seed = Seed::random(Self::seed_len(n, k), rng);
        Self::build(n, k, &seed)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> Gf2m {
        self.field
    }

    pub fn field_width(&self) -> u32 {
        self.field.width()
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor {
            n: self.n,
            k: self.k(),
            field_width: self.field_width(),
            modulus_hex: format!("{:x}", self.field.modulus()),
            seed_bits: self.seed.len(),
            seed_hex: self.seed.to_hex(),
        }
    }

    fn check(&self, j: u64) -> Result<()> {
        if j >= self.n {
            return input(format!("variable {j} out of range for n = {}", self.n));
        }
        Ok(())
    }

    /// Full field value of variable `j`.
    pub fn eval_element(&self, j: u64) -> Result<u64> {
        self.check(j)?;
        Ok(self.element(j))
    }

    #[inline]
    fn element(&self, j: u64) -> u64 {
        self.field.eval_poly(&self.coeffs, j)
    }

    pub fn eval_bit(&self, j: u64) -> Result<bool> {
        self.check(j)?;
        Ok(self.element(j) & 1 == 1)
    }

    /// Number of field elements consumed per symbol over `alphabet` values.
    pub fn elements_per_symbol(&self, alphabet: u64) -> usize {
        elements_per_symbol(alphabet, self.field_width())
    }

    /// How many distinct symbols over `alphabet` this family can produce.
    pub fn symbol_capacity(&self, alphabet: u64) -> u64 {
        if alphabet < 2 {
            return 0;
        }
        self.n / self.elements_per_symbol(alphabet) as u64
    }

    /// Symbol `j` in `[0, alphabet)`, read from the bits of elements
    /// `j·r .. j·r + r`. Power-of-two alphabets use the first `log2 A` bits
    /// directly; others use rejection over `ceil(log2 A)`-bit words, at most
    /// `REJECTION_ROUNDS` times, then the last word mod `A`.
    pub fn eval_symbol(&self, j: u64, alphabet: u64) -> Result<u64> {
        if alphabet < 2 {
            return input("alphabet must have at least 2 symbols");
        }
        let r = self.elements_per_symbol(alphabet) as u64;
        let cap = self.n / r;
        if j >= cap {
            return input(format!(
                "symbol {j} out of range: family of {} variables holds {cap} symbols over {alphabet}",
                self.n
            ));
        }
        let m = self.field_width();
        let base = j * r;
        let mut next = 0u64;
        let mut words = BitWords::new(m, ceil_log2(alphabet), || {
            let e = self.element(base + next);
            next += 1;
            e
        });
        Ok(if alphabet.is_power_of_two() {
            words.next_word()
        } else {
            rejection_sample(std::iter::from_fn(|| Some(words.next_word())), alphabet).0
        })
    }
}

/// Field elements consumed per symbol: `ceil(w/m)` for power-of-two
/// alphabets, enough for `REJECTION_ROUNDS` words otherwise.
pub fn elements_per_symbol(alphabet: u64, m: u32) -> usize {
    let w = ceil_log2(alphabet) as u64;
    let bits = if alphabet.is_power_of_two() {
        w
    } else {
        REJECTION_ROUNDS * w
    };
    bits.div_ceil(m as u64) as usize
}

/// Draws words until one is below `alphabet`, for at most `REJECTION_ROUNDS`
/// rounds; otherwise reduces the last word. Returns `(value, rounds_used)`.
pub fn rejection_sample(mut words: impl Iterator<Item = u64>, alphabet: u64) -> (u64, u64) {
    let mut last = 0;
    for round in 1..=REJECTION_ROUNDS {
        match words.next() {
            Some(w) if w < alphabet => return (w, round),
            Some(w) => last = w,
            None => return (last % alphabet, round - 1),
        }
    }
    (last % alphabet, REJECTION_ROUNDS)
}

/// Cuts a stream of `m`-bit elements into `w`-bit words, LSB first.
struct BitWords<F> {
    m: u32,
    w: u32,
    buf: u128,
    have: u32,
    source: F,
}

impl<F: FnMut() -> u64> BitWords<F> {
    fn new(m: u32, w: u32, source: F) -> Self {
        Self {
            m,
            w,
            buf: 0,
            have: 0,
            source,
        }
    }

    fn next_word(&mut self) -> u64 {
        while self.have < self.w {
            self.buf |= ((self.source)() as u128) << self.have;
            self.have += self.m;
        }
        let word = (self.buf & ((1u128 << self.w) - 1)) as u64;
        self.buf >>= self.w;
        self.have -= self.w;
        word
    }
}

/// Sizing of a family that must supply `n_symbols` symbols over `alphabet`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymbolLayout {
    pub n_symbols: u64,
    pub alphabet: u64,
    /// Variables of the family.
    pub n_elements: u64,
    pub field_width: u32,
    /// Field elements per symbol.
    pub elements_per_symbol: usize,
}

impl SymbolLayout {
    /// Smallest number of variables such that the resulting field width
    /// leaves room for `n_symbols` symbols.
    pub fn new(n_symbols: u64, alphabet: u64) -> Result<Self> {
        if alphabet < 2 || n_symbols == 0 {
            return input("symbol layout needs alphabet >= 2 and at least one symbol");
        }
        let r_max = elements_per_symbol(alphabet, field_width(n_symbols));
        for r in 1..=r_max {
            let n_elements = n_symbols
                .checked_mul(r as u64)
                .ok_or_else(|| Error::Input("symbol layout overflows u64".into()))?;
            let m = field_width(n_elements);
            let need = elements_per_symbol(alphabet, m);
            if need <= r {
                return Ok(Self {
                    n_symbols,
                    alphabet,
                    n_elements,
                    field_width: m,
                    elements_per_symbol: need,
                });
            }
        }
        unreachable!("r_max is always feasible")
    }
}

/// Exhaustive check that every subset of exactly `subset_size` variables
/// (and hence every smaller one) is jointly uniform over all seeds, both as
/// field values and as low bits.
///
/// Enumerates all `2^(k·m)` seeds, so requires `n <= 12`, `k <= 4`.
pub fn verify_kwise_exhaustive(n: u64, k: usize, subset_size: usize) -> Result<bool> {
    if n > 12 || k > 4 {
        return Err(Error::Cap {
            what: "exhaustive k-wise check (n <= 12, k <= 4)",
            value: (n as usize).max(k),
            cap: 12,
        });
    }
    if subset_size == 0 || subset_size as u64 > n {
        return input(format!("subset size {subset_size} must be in 1..={n}"));
    }
    let probe = KWiseFamily::build(n, k, &Seed::zeros(KWiseFamily::seed_len(n, k)))?;
    let m = probe.field_width();
    let q = 1u64 << m;
    let n_seeds = q.pow(k as u32);
    // values[seed][j]
    let mut values = Vec::with_capacity(n_seeds as usize);
    let mut coeffs = vec![0u64; k];
    for s in 0..n_seeds {
        let mut rest = s;
        for c in coeffs.iter_mut() {
            *c = rest % q;
            rest /= q;
        }
        let fam = KWiseFamily::build(n, k, &Seed::from_words(&coeffs, m))?;
        values.push((0..n).map(|j| fam.element(j)).collect::<Vec<_>>());
    }
    let mut ok = true;
    for_each_subset(n as usize, subset_size, |subset| {
        if !ok {
            return;
        }
        ok = jointly_uniform(&values, subset, m, n_seeds) && jointly_uniform(&values, subset, 1, n_seeds);
    });
    Ok(ok)
}

/// Whether the low `bits` bits of the variables in `subset` are jointly uniform.
fn jointly_uniform(values: &[Vec<u64>], subset: &[usize], bits: u32, n_seeds: u64) -> bool {
    let outcomes = 1u64 << (bits as usize * subset.len());
    if !n_seeds.is_multiple_of(outcomes) {
        return false;
    }
    let mask = (1u64 << bits) - 1;
    let mut hist = vec![0u64; outcomes as usize];
    for row in values {
        let idx = subset
            .iter()
            .fold(0u64, |acc, &j| (acc << bits) | (row[j] & mask));
        hist[idx as usize] += 1;
    }
    let expect = n_seeds / outcomes;
    hist.iter().all(|&c| c == expect)
}

fn for_each_subset(n: usize, size: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..size).rev().find(|&p| idx[p] != p + n - size) else {
            return;
        };
        idx[pos] += 1;
        for p in pos + 1..size {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use proptest::prelude::*;

    fn fam(n: u64, k: usize, words: &[u64]) -> KWiseFamily {
        let m = field_width(n);
        let mut w = words.to_vec();
        w.resize(k, 0);
        KWiseFamily::build(n, k, &Seed::from_words(&w, m)).unwrap()
    }

    #[test]
    fn zero_seed_gives_zero_bits() {
        let f = fam(100, 5, &[]);
        assert!((0..100).all(|j| !f.eval_bit(j).unwrap()));
    }

    #[test]
    fn odd_constant_gives_one_bits() {
        let f = fam(100, 5, &[3]);
        assert!((0..100).all(|j| f.eval_bit(j).unwrap()));
    }

    #[test]
    fn evaluation_is_deterministic() {
        let mut rng = substream(1, 0);
        let f = KWiseFamily::random(1000, 17, &mut rng).unwrap();
        let g = KWiseFamily::build(1000, 17, f.seed()).unwrap();
        for j in [0, 1, 500, 999] {
            assert_eq!(f.eval_bit(j).unwrap(), f.eval_bit(j).unwrap());
            assert_eq!(f.eval_element(j).unwrap(), g.eval_element(j).unwrap());
        }
    }

    #[test]
    fn build_errors() {
        assert!(KWiseFamily::build(4, 5, &Seed::zeros(10)).is_err());
        assert!(KWiseFamily::build(8, 2, &Seed::zeros(5)).is_err());
        assert!(KWiseFamily::build(8, 2, &Seed::zeros(6)).is_ok());
        let f = fam(8, 2, &[]);
        assert!(f.eval_bit(8).is_err());
        assert!(f.eval_symbol(0, 1).is_err());
    }

    #[test]
    fn hex_round_trip_and_padding() {
        let mut rng = substream(2, 0);
        let s = Seed::random(21, &mut rng);
        assert_eq!(Seed::from_hex(&s.to_hex(), 21).unwrap(), s);
        assert!(Seed::from_hex("ffffff", 21).is_err());
        assert!(Seed::from_hex("ff", 21).is_err());
        assert!(Seed::from_hex("zz0000", 21).is_err());
        assert!(Seed::from_hex("0x1f0000", 21).unwrap().bit(4));
    }

    #[test]
    fn exhaustive_examples() {
        assert!(verify_kwise_exhaustive(7, 3, 3).unwrap());
        assert!(!verify_kwise_exhaustive(7, 3, 4).unwrap());
        assert!(verify_kwise_exhaustive(2, 2, 2).unwrap());
        assert!(verify_kwise_exhaustive(8, 2, 2).unwrap());
        assert!(verify_kwise_exhaustive(4, 4, 4).unwrap());
        assert!(verify_kwise_exhaustive(13, 2, 2).is_err());
    }

    #[test]
    fn k1_marginals_uniform_but_pairs_correlated() {
        assert!(verify_kwise_exhaustive(8, 1, 1).unwrap());
        assert!(!verify_kwise_exhaustive(8, 1, 2).unwrap());
    }

    #[test]
    fn four_bits_all_outcomes_equal() {
        // independent count of joint bit patterns of 4 variables with k = 4
        let mut hist = [0u32; 16];
        for s in 0u64..(1 << 8) {
            let words: Vec<u64> = (0..4).map(|c| (s >> (2 * c)) & 3).collect();
            let f = fam(4, 4, &words);
            let idx = (0..4).fold(0, |a, j| (a << 1) | f.eval_bit(j).unwrap() as usize);
            hist[idx] += 1;
        }
        assert!(hist.iter().all(|&c| c == 16), "{hist:?}");
    }

    #[test]
    fn power_of_two_alphabet_takes_low_bits() {
        let mut rng = substream(3, 0);
        let f = KWiseFamily::random(64, 8, &mut rng).unwrap();
        assert_eq!(f.elements_per_symbol(8), 1);
        for j in 0..64 {
            assert_eq!(f.eval_symbol(j, 8).unwrap(), f.eval_element(j).unwrap() & 7);
            assert_eq!(f.eval_symbol(j, 2).unwrap(), f.eval_bit(j).unwrap() as u64);
        }
    }

    #[test]
    fn six_of_eight_words_accepted() {
        let accepted = (0..8u64).filter(|&w| rejection_sample([w, 0].into_iter(), 6).1 == 1).count();
        assert_eq!(accepted, 6);
        assert_eq!(rejection_sample([7, 6, 5].into_iter(), 6), (5, 3));
        assert_eq!(rejection_sample(std::iter::repeat(7), 6), (1, REJECTION_ROUNDS));
    }

    #[test]
    fn symbol_bits_come_from_consecutive_elements() {
        let mut rng = substream(4, 0);
        let f = KWiseFamily::random(1 << 10, 6, &mut rng).unwrap();
        let r = f.elements_per_symbol(6) as u64;
        assert_eq!(r, 12); // 40 words of 3 bits over 10-bit elements
        for j in 0..f.symbol_capacity(6) {
            let mut stream = Vec::new();
            for e in j * r..(j + 1) * r {
                let v = f.eval_element(e).unwrap();
                stream.extend((0..10).map(|b| (v >> b) & 1));
            }
            let words = stream.chunks(3).filter(|c| c.len() == 3).map(|c| c[0] | c[1] << 1 | c[2] << 2);
            assert_eq!(f.eval_symbol(j, 6).unwrap(), rejection_sample(words, 6).0);
        }
    }

    #[test]
    fn symbol_frequencies_near_uniform() {
        let mut rng = substream(5, 0);
        let f = KWiseFamily::random(1 << 16, 64, &mut rng).unwrap();
        let cap = f.symbol_capacity(6);
        let mut hist = [0f64; 6];
        for j in 0..cap {
            hist[f.eval_symbol(j, 6).unwrap() as usize] += 1.0;
        }
        let p = 1.0 / 6.0;
        let sd = (cap as f64 * p * (1.0 - p)).sqrt();
        for c in hist {
            assert!((c - cap as f64 * p).abs() < 4.0 * sd, "{hist:?}");
        }
    }

    #[test]
    fn layout_holds_requested_symbols() {
        for &(ns, a) in &[(1u64, 2u64), (100, 6), (6400 * 400, 6), (1000, 8), (3, 10)] {
            let lay = SymbolLayout::new(ns, a).unwrap();
            assert_eq!(lay.field_width, field_width(lay.n_elements));
            assert_eq!(lay.elements_per_symbol, elements_per_symbol(a, lay.field_width));
            assert!(lay.n_elements / lay.elements_per_symbol as u64 >= ns);
        }
    }

    proptest! {
        #[test]
        fn seed_is_short(n in 1u64..1_000_000, k in 1usize..200) {
            prop_assume!(k as u64 <= n);
            prop_assert!(KWiseFamily::seed_len(n, k) as u64 <= 2 * k as u64 * ceil_log2(n + 1) as u64);
        }

        #[test]
        fn eval_depends_only_on_seed(n in 1u64..5000, k in 1usize..20, s in any::<u64>(), j in any::<u64>()) {
            prop_assume!(k as u64 <= n);
            let mut rng = substream(s, 0);
            let a = KWiseFamily::random(n, k, &mut rng).unwrap();
            let b = KWiseFamily::build(n, k, &Seed::from_hex(&a.seed().to_hex(), a.seed().len()).unwrap()).unwrap();
            let j = j % n;
            prop_assert_eq!(a.eval_element(j).unwrap(), b.eval_element(j).unwrap());
            prop_assert!(a.eval_element(j).unwrap() < 1u64 << a.field_width());
        }
    }
}
