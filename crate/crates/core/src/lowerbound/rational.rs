//! Exact rational functions in `(M, l)` whose denominator is a product of
//! linear factors `(M - o*l)` with `o` odd. The denominator stays factored so
//! multiplicities can be read off directly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial in `(M, l)`: `(exp_M, exp_l) -> coefficient`, no zero entries.
pub type Poly = BTreeMap<(u32, u32), BigRational>;

#[derive(Debug, Clone)]
pub struct BivariateRational {
    numerator: Poly,
    /// odd multiplier `o` -> multiplicity of `(M - o*l)`
    denominator: BTreeMap<u32, u32>,
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&(am, al), ac) in a {
        for (&(bm, bl), bc) in b {
            let e = out.entry((am + bm, al + bl)).or_insert_with(BigRational::zero);
            *e += ac * bc;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add_into(acc: &mut Poly, b: &Poly) {
    for (k, c) in b {
        let e = acc.entry(*k).or_insert_with(BigRational::zero);
        *e += c;
    }
    acc.retain(|_, c| !c.is_zero());
}

/// `(M - o*l)`
fn linear_factor(o: u32) -> Poly {
    let mut p = Poly::new();
    p.insert((1, 0), BigRational::one());
    p.insert((0, 1), BigRational::from_integer(BigInt::from(-(o as i64))));
    p
}

fn pow_big(base: &BigRational, e: u32) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

impl BivariateRational {
    pub fn zero() -> Self {
        Self {
            numerator: Poly::new(),
            denominator: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0, 0)
    }

    /// `coef * M^m * l^e`
    pub fn monomial(coef: BigRational, m: u32, e: u32) -> Self {
        let mut numerator = Poly::new();
        if !coef.is_zero() {
            numerator.insert((m, e), coef);
        }
        Self {
            numerator,
            denominator: BTreeMap::new(),
        }
    }

    pub fn from_integer(c: i64) -> Self {
        Self::monomial(BigRational::from_integer(c.into()), 0, 0)
    }

    /// `1 / prod (M - o*l)^mult`
    pub fn reciprocal_of(factors: &BTreeMap<u32, u32>) -> Self {
        let mut r = Self::one();
        r.denominator = factors.clone();
        r.denominator.retain(|_, m| *m > 0);
        r
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<u32, u32> {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Total degree of the numerator (0 for the zero function).
    pub fn numerator_degree(&self) -> u32 {
        self.numerator.keys().map(|(m, l)| m + l).max().unwrap_or(0)
    }

    pub fn denominator_degree(&self) -> u32 {
        self.denominator.values().sum()
    }

    /// Smallest power of `l` among numerator terms.
    pub fn min_l_power(&self) -> Option<u32> {
        self.numerator.keys().map(|&(_, l)| l).min()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut denominator = self.denominator.clone();
        for (o, m) in &other.denominator {
            *denominator.entry(*o).or_insert(0) += m;
        }
        let numerator = poly_mul(&self.numerator, &other.numerator);
        if numerator.is_empty() {
            return Self::zero();
        }
        Self {
            numerator,
            denominator,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for v in out.numerator.values_mut() {
            *v *= c;
        }
        out
    }

    /// Numerator re-expressed over the larger denominator `target`.
    fn lifted(&self, target: &BTreeMap<u32, u32>) -> Poly {
        let mut num = self.numerator.clone();
        for (o, &m) in target {
            let have = self.denominator.get(o).copied().unwrap_or(0);
            let f = linear_factor(*o);
            for _ in have..m {
                num = poly_mul(&num, &f);
            }
        }
        num
    }

    fn lcm_denominator(&self, other: &Self) -> BTreeMap<u32, u32> {
        let mut d = self.denominator.clone();
        for (o, m) in &other.denominator {
            let e = d.entry(*o).or_insert(0);
            *e = (*e).max(*m);
        }
        d
    }

    /// Sum over the least common denominator.
    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let d = self.lcm_denominator(other);
        let mut num = self.lifted(&d);
        poly_add_into(&mut num, &other.lifted(&d));
        if num.is_empty() {
            return Self::zero();
        }
        Self {
            numerator: num,
            denominator: d,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Multiply by `l^e`.
    pub fn mul_l_pow(&self, e: u32) -> Self {
        let mut out = self.clone();
        out.numerator = out
            .numerator
            .into_iter()
            .map(|((m, l), c)| ((m, l + e), c))
            .collect();
        out
    }

    /// Exact division by `l^e`; `None` if some numerator term has a smaller
    /// power of `l`.
    pub fn div_l_pow(&self, e: u32) -> Option<Self> {
        if self.numerator.keys().any(|&(_, l)| l < e) {
            return None;
        }
        let mut out = self.clone();
        out.numerator = out
            .numerator
            .into_iter()
            .map(|((m, l), c)| ((m, l - e), c))
            .collect();
        Some(out)
    }

    /// Numerator and denominator lifted to a shared denominator; used for
    /// equality, which must ignore uncancelled common factors.
    pub fn equals(&self, other: &Self) -> bool {
        let d = self.lcm_denominator(other);
        self.lifted(&d) == other.lifted(&d)
    }

    pub fn eval(&self, m: &BigRational, l: &BigRational) -> Result<BigRational> {
        let mut den = BigRational::one();
        for (&o, &mult) in &self.denominator {
            let f = m - l * BigRational::from_integer(BigInt::from(o));
            if f.is_zero() {
                return Err(Error::DivisionByZero(format!("factor (M - {o}l) vanishes")));
            }
            den *= pow_big(&f, mult);
        }
        let mut num = BigRational::zero();
        for (&(em, el), c) in &self.numerator {
            num += c * pow_big(m, em) * pow_big(l, el);
        }
        Ok(num / den)
    }

    pub fn eval_int(&self, m: i64, l: i64) -> Result<BigRational> {
        self.eval(
            &BigRational::from_integer(m.into()),
            &BigRational::from_integer(l.into()),
        )
    }

    pub fn eval_f64(&self, m: i64, l: i64) -> Result<f64> {
        use num_traits::ToPrimitive;
        let v = self.eval_int(m, l)?;
        Ok(v.to_f64().unwrap_or(f64::NAN))
    }

    /// Denominator rendered as `(M-1l)^2 (M-3l)^1`, or `1`.
    pub fn render_denominator(&self) -> String {
        if self.denominator.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .denominator
            .iter()
            .map(|(o, m)| format!("(M-{o}l)^{m}"))
            .collect();
        parts.join(" ")
    }

    pub fn render_numerator(&self) -> String {
        if self.numerator.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (&(em, el), c)) in self.numerator.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() || (em == 0 && el == 0) {
                factors.push(abs.to_string());
            }
            for (name, e) in [("M", em), ("l", el)] {
                match e {
                    0 => {}
                    1 => factors.push(name.into()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for BivariateRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.render_numerator(), self.render_denominator())
    }
}
