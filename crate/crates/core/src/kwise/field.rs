//! Arithmetic in GF(2^m), 1 <= m <= 64.
//!
//! Elements are the low `m` bits of a `u64`, read as polynomials over GF(2).
//! The modulus for each width is the irreducible polynomial of degree `m`
//! with the smallest integer encoding; the table is computed once and is the
//! same on every platform, so evaluations are bit-exact across runs.

use std::sync::OnceLock;

pub const MAX_WIDTH: u32 = 64;

/// Widths up to this use log/antilog tables for multiplication.
pub const TABLE_WIDTH: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2m {
    width: u32,
    mask: u64,
    /// Modulus without its leading `x^m` term.
    low: u64,
    tables: Option<&'static Tables>,
}

#[derive(Debug, PartialEq, Eq)]
struct Tables {
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`, so log sums need no reduction.
    exp: Vec<u32>,
}

impl Gf2m {
    pub fn new(width: u32) -> Self {
        assert!((1..=MAX_WIDTH).contains(&width), "field width {width} out of range");
        let low = irreducible_table()[width as usize];
        let mut f = Self {
            width,
            mask: mask(width),
            low,
            tables: None,
        };
        if width <= TABLE_WIDTH {
            f.tables = Some(tables_for(&f));
        }
        f
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn order(&self) -> u128 {
        1u128 << self.width
    }

    /// Modulus including the leading term.
    pub fn modulus(&self) -> u128 {
        (1u128 << self.width) | self.low as u128
    }

    #[inline]
    fn times_x(&self, a: u64) -> u64 {
        let carry = (a >> (self.width - 1)) & 1;
        let shifted = (a << 1) & self.mask;
        shifted ^ (self.low & carry.wrapping_neg())
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64
                }
            }
            None => self.mul_shift(a, b),
        }
    }

    /// Shift-and-add product; loops over the bits of `b`.
    #[inline]
    pub fn mul_shift(&self, mut a: u64, mut b: u64) -> u64 {
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a = self.times_x(a);
        }
        acc
    }

    /// Horner evaluation of `coeffs[0] + coeffs[1] x + ...` at `x`.
    #[inline]
    pub fn eval_poly(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}

fn tables_for(f: &Gf2m) -> &'static Tables {
    static CACHE: [OnceLock<Tables>; TABLE_WIDTH as usize + 1] = [const { OnceLock::new() }; TABLE_WIDTH as usize + 1];
    CACHE[f.width as usize].get_or_init(|| {
        let q = 1usize << f.width;
        let order = q - 1;
        let mut exp = vec![0u32; 2 * order.max(1)];
        // smallest generator of the multiplicative group
        (1..q as u64)
            .find(|&g| {
                let mut a = 1u64;
                for i in 0..order {
                    exp[i] = a as u32;
                    a = f.mul_shift(a, g);
                    if a == 1 && i + 1 < order {
                        return false;
                    }
                }
                a == 1
            })
            .expect("GF(2^m)* is cyclic");
        let mut log = vec![0u32; q];
        for i in 0..order {
            log[exp[i] as usize] = i as u32;
            exp[i + order] = exp[i];
        }
        Tables { log, exp }
    })
}

fn mask(width: u32) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn irreducible_table() -> &'static [u64; 65] {
    static TABLE: OnceLock<[u64; 65]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u64; 65];
        for m in 1..=64u32 {
            t[m as usize] = (0u64..)
                .find(|&low| is_irreducible(m, low))
                .expect("an irreducible polynomial exists for every degree");
        }
        t
    })
}

/// Rabin's test for `x^m + low` over GF(2): irreducible iff
/// `x^(2^m) = x (mod f)` and `gcd(x^(2^(m/p)) - x, f) = 1` for each prime
/// `p | m`.
fn is_irreducible(m: u32, low: u64) -> bool {
    if m == 1 {
        return true;
    }
    if low & 1 == 0 {
        return false; // divisible by x
    }
    let f = Gf2m {
        width: m,
        mask: mask(m),
        low,
        tables: None,
    };
    let x = 2u64;
    let frob = |times: u32| {
        let mut a = x;
        for _ in 0..times {
            a = f.mul(a, a);
        }
        a
    };
    if frob(m) != x {
        return false;
    }
    let modulus = (1u128 << m) | low as u128;
    prime_factors(m)
        .into_iter()
        .all(|p| poly_gcd((frob(m / p) ^ x) as u128, modulus) == 1)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn degree(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

fn poly_mod(mut a: u128, b: u128) -> u128 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}
