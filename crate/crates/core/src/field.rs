//! Coefficient domains: prime fields with word-sized moduli and the rationals.
//!
//! Algorithms elsewhere in the crate are written against [`Field`], a
//! context object that owns whatever the elements need (the modulus for
//! `F_p`, nothing for `Q`). Elements themselves are plain values.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Field operations, provided by a context value.
pub trait Field {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Canonical residue in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field `F_p` with `3 <= p < 2^31`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    /// Distinct prime factors of `p - 1`, ascending.
    group_factors: Vec<u64>,
}

pub const MAX_MODULUS: u64 = 1 << 31;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self {
            p,
            group_factors: prime_factors(p - 1),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    pub fn element(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u64)
    }

    /// Wraps an already-canonical residue.
    pub fn element_checked(&self, v: u64) -> Result<FieldElement> {
        if v < self.p {
            Ok(FieldElement(v))
        } else {
            Err(Error::Format(format!("{v} is not a residue modulo {}", self.p)))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let mut ord = self.p - 1;
        for &q in &self.group_factors {
            while ord % q == 0 && self.pow(&a, ord / q).0 == 1 {
                ord /= q;
            }
        }
        Some(ord)
    }

    /// Smallest generator of the multiplicative group.
    pub fn generator(&self) -> FieldElement {
        (2..self.p)
            .map(FieldElement)
            .find(|&g| {
                self.group_factors
                    .iter()
                    .all(|&q| self.pow(&g, (self.p - 1) / q).0 != 1)
            })
            // p = 3: 2 is a generator, the range is never empty
            .expect("F_p^* is cyclic")
    }

    /// An element of multiplicative order exactly `m`.
    ///
    /// Takes the smallest generator `g` and returns `g^((p-1)/m)`, so the
    /// result is a deterministic function of `(p, m)`.
    pub fn find_primitive_root_of_unity(&self, m: u64) -> Result<FieldElement> {
        if m == 0 || (self.p - 1) % m != 0 {
            return Err(Error::Parameter(format!(
                "m = {m} does not divide p - 1 = {}",
                self.p - 1
            )));
        }
        let g = self.generator();
        Ok(self.pow(&g, (self.p - 1) / m))
    }

    /// Table of the cyclic group generated by `alpha`, which must have order `m`.
    pub fn discrete_log_table(&self, alpha: FieldElement, m: u64) -> Result<DiscreteLogTable> {
        if m == 0 {
            return Err(Error::Parameter("m must be positive".into()));
        }
        let mut powers = Vec::with_capacity(m as usize);
        let mut log = HashMap::with_capacity(m as usize);
        let mut x = self.one();
        for e in 0..m {
            if log.insert(x.0, e).is_some() {
                return Err(Error::DuplicateLog(x.0, m));
            }
            powers.push(x);
            x = self.mul(&x, &alpha);
        }
        if x.0 != 1 {
            return Err(Error::Parameter(format!(
                "alpha = {} does not have order {m}",
                alpha.0
            )));
        }
        Ok(DiscreteLogTable {
            alpha,
            powers,
            log,
        })
    }
}

impl Field for PrimeField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.p { s - self.p } else { s })
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.p - b.0
        })
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0 * b.0 % self.p)
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    fn from_i64(&self, v: i64) -> FieldElement {
        self.element(v)
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0 == 0
    }
}

/// Powers `alpha^0 .. alpha^(m-1)` and the inverse map `alpha^e -> e`.
#[derive(Clone, Debug)]
pub struct DiscreteLogTable {
    alpha: FieldElement,
    powers: Vec<FieldElement>,
    log: HashMap<u64, u64>,
}

impl DiscreteLogTable {
    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// Order of `alpha`.
    pub fn order(&self) -> u64 {
        self.powers.len() as u64
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// `alpha^e` for any `e`, reduced modulo the order.
    pub fn power(&self, e: u64) -> FieldElement {
        self.powers[(e % self.order()) as usize]
    }

    /// `alpha^e` for a possibly negative exponent.
    pub fn power_signed(&self, e: i64) -> FieldElement {
        self.power(e.rem_euclid(self.order() as i64) as u64)
    }

    pub fn log(&self, x: FieldElement) -> Option<u64> {
        self.log.get(&x.0).copied()
    }

    pub fn powers(&self) -> &[FieldElement] {
        &self.powers
    }
}

/// The field of rationals; a zero-sized context.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn one(&self) -> Rational {
        Rational::one()
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn neg(&self, a: &Rational) -> Rational {
        -a
    }

    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// Formats a rational as `"num/den"`, always with an explicit denominator.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("cannot parse rational {s:?}"));
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse().map_err(|_| bad())?),
    };
    debug_assert!(q.denom().is_positive());
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    /// Order by brute force: smallest d >= 1 with a^d = 1.
    fn naive_order(p: u64, a: u64) -> u64 {
        let mut x = a % p;
        let mut d = 1;
        while x != 1 {
            x = x * a % p;
            d += 1;
        }
        d
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15, 1 << 31, 2147483659] {
            assert_eq!(PrimeField::new(p), Err(Error::NotPrime(p)));
        }
        assert!(PrimeField::new(2147483647).is_ok());
    }

    #[test]
    fn primitive_root_mod_13() {
        let f = PrimeField::new(13).unwrap();
        let a = f.find_primitive_root_of_unity(12).unwrap();
        assert_eq!(a.value(), 2);
        for d in divisors(12) {
            let x = f.pow(&a, d).value();
            assert_eq!(x == 1, d == 12, "2^{d} mod 13 = {x}");
        }
        assert_eq!(f.find_primitive_root_of_unity(1).unwrap().value(), 1);
        assert!(matches!(
            f.find_primitive_root_of_unity(5),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn primitive_roots_mod_97() {
        let f = PrimeField::new(97).unwrap();
        for m in divisors(96) {
            let a = f.find_primitive_root_of_unity(m).unwrap();
            assert_eq!(naive_order(97, a.value()), m);
            assert_eq!(f.order(a), Some(m));
        }
        let a = f.find_primitive_root_of_unity(96).unwrap();
        assert_ne!(f.pow(&a, 48).value(), 1);
        assert_ne!(f.pow(&a, 32).value(), 1);
    }

    #[test]
    fn log_table_mod_13() {
        let f = PrimeField::new(13).unwrap();
        let t = f.discrete_log_table(f.element(2), 12).unwrap();
        assert_eq!(t.log(f.element(8)), Some(3));
        assert_eq!(t.log(f.element(1)), Some(0));
        assert_eq!(t.len(), 12);
        let keys: std::collections::HashSet<_> = t.powers().iter().collect();
        assert_eq!(keys.len(), 12);
        for e in 0..12 {
            assert_eq!(t.log(t.power(e)), Some(e));
        }
        assert_eq!(t.log(f.zero()), None);
    }

    #[test]
    fn log_table_rejects_small_order() {
        let f = PrimeField::new(13).unwrap();
        // 3 has order 3 mod 13
        assert_eq!(
            f.discrete_log_table(f.element(3), 12).unwrap_err(),
            Error::DuplicateLog(1, 12)
        );
        // 2 has order 12, not 6
        assert!(f.discrete_log_table(f.element(2), 6).is_err());
    }

    #[test]
    fn rational_strings() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(rational_to_string(&q), "-3/2");
        assert_eq!(rational_to_string(&parse_rational("5").unwrap()), "5/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..1_000_003, b in 0u64..1_000_003, c in 0u64..1_000_003) {
            let f = PrimeField::new(1_000_003).unwrap();
            let (a, b, c) = (f.element(a as i64), f.element(b as i64), f.element(c as i64));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
            prop_assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
            if a.value() != 0 {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
        }

        #[test]
        fn root_of_unity_has_exact_order(idx in 0usize..12) {
            let f = PrimeField::new(2_147_483_647).unwrap();
            // p - 1 = 2 * 3^2 * 7 * 11 * 31 * 151 * 331
            let ms = [1u64, 2, 3, 6, 9, 14, 22, 62, 151, 331, 2 * 3 * 7 * 11, 2_147_483_646];
            let m = ms[idx];
            let a = f.find_primitive_root_of_unity(m).unwrap();
            prop_assert_eq!(f.pow(&a, m), f.one());
            for q in prime_factors(m) {
                prop_assert_ne!(f.pow(&a, m / q), f.one());
            }
        }
    }
}
