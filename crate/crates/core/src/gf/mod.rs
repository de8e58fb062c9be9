//! Exact arithmetic in GF(p^k).
//!
//! Elements are dense indices in `[0, q)`: the coefficient vector of the
//! representing polynomial read in base `p`, constant term first. Index 0 is
//! zero and index 1 is one. Every operation is a table lookup; tables are
//! built once per field and the field is immutable afterwards, so a
//! `FieldSpec` can be shared freely between threads (usually behind an `Arc`).

pub mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_ORDER: u32 = 512;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_raw(i: usize) -> Self {
        FieldElement(i as u16)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field GF(q), q = p^k, with precomputed operation tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over GF(p), constant term first. `[0, 1]` (i.e. `x`) for k = 1.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [p={}, k={}, modulus={:?}]", self.q, self.p, self.k, self.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` with `p` prime, or returns `None`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, k))
}

impl FieldSpec {
    /// GF(q) with the lexicographically least irreducible modulus.
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) =
            prime_power(q).ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
        if k == 1 {
            Self::prime(p)
        } else {
            Self::with_modulus(p, find_irreducible(p, k)?)
        }
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if p > MAX_ORDER {
            return Err(Error::Unsupported(format!("field order {p} exceeds {MAX_ORDER}")));
        }
        let q = p as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u16;
                mul[a * q + b] = ((a * b) % q) as u16;
            }
        }
        Ok(Self::from_tables(p, 1, vec![0, 1], add, mul))
    }

    /// GF(p^k) defined by a monic degree-k modulus (constant term first).
    /// The modulus is checked for irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let k = modulus.len().checked_sub(1).filter(|&k| k >= 1).ok_or_else(|| {
            Error::Validation("modulus must have degree at least 1".into())
        })? as u32;
        if k == 1 {
            return Self::prime(p);
        }
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Validation(format!("modulus {modulus:?} is not monic over GF({p})")));
        }
        let base = Self::prime(p)?;
        let f: Vec<FieldElement> = modulus.iter().map(|&c| base.from_int(c as i64)).collect();
        if !poly::is_irreducible(&base, &f) {
            return Err(Error::Domain(format!("modulus {modulus:?} is reducible over GF({p})")));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::Unsupported(format!("field order {p}^{k} exceeds {MAX_ORDER}")))?;
        let qs = q as usize;
        let digits = |mut i: usize| -> Vec<FieldElement> {
            (0..k)
                .map(|_| {
                    let d = i % p as usize;
                    i /= p as usize;
                    FieldElement::from_raw(d)
                })
                .collect()
        };
        let pack = |v: &[FieldElement]| -> usize {
            v.iter().rev().fold(0usize, |acc, c| acc * p as usize + c.index())
        };
        let coeffs: Vec<Vec<FieldElement>> = (0..qs).map(digits).collect();
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<FieldElement> = coeffs[a]
                    .iter()
                    .zip(&coeffs[b])
                    .map(|(&x, &y)| base.add(x, y))
                    .collect();
                add[a * qs + b] = pack(&s) as u16;
                let prod = poly::rem(&base, &poly::mul(&base, &coeffs[a], &coeffs[b]), &f);
                let mut padded = prod;
                padded.resize(k as usize, FieldElement::ZERO);
                mul[a * qs + b] = pack(&padded) as u16;
            }
        }
        Ok(Self::from_tables(p, k, modulus, add, mul))
    }

    fn from_tables(p: u32, k: u32, modulus: Vec<u32>, add: Vec<u16>, mul: Vec<u16>) -> Self {
        let q = p.pow(k);
        let qs = q as usize;
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        FieldSpec { p, k, q, modulus, add, mul, neg, inv }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    #[inline]
    pub fn order(&self) -> usize {
        self.q as usize
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q as usize).map(FieldElement::from_raw)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q as usize).map(FieldElement::from_raw)
    }

    pub fn element(&self, index: usize) -> Result<FieldElement> {
        if index < self.q as usize {
            Ok(FieldElement::from_raw(index))
        } else {
            Err(Error::Domain(format!("index {index} outside GF({})", self.q)))
        }
    }

    /// The image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement::from_raw(n.rem_euclid(self.p as i64) as usize)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.index() * self.q as usize + b.index()])
    }
    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.index() * self.q as usize + b.index()])
    }
    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }
    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::Domain("inverse of zero".into()))
        } else {
            Ok(FieldElement(self.inv[a.index()]))
        }
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        FieldElement(self.inv[a.index()])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p as u64)
    }

    /// Euler's criterion. Zero is rejected: it is neither a square nor a
    /// nonsquare in the sense used throughout the crate. In characteristic 2
    /// every element is a square.
    pub fn is_square(&self, a: FieldElement) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::Domain("is_square of zero".into()));
        }
        if !self.is_odd() {
            return Ok(true);
        }
        Ok(self.pow(a, ((self.q - 1) / 2) as u64) == FieldElement::ONE)
    }

    /// Least-index nonsquare. Requires q odd.
    pub fn find_nonsquare(&self) -> Result<FieldElement> {
        if !self.is_odd() {
            return Err(Error::Domain("no nonsquares in characteristic 2".into()));
        }
        self.nonzero()
            .find(|&a| !self.is_square(a).unwrap())
            .ok_or_else(|| Error::Internal("odd field without a nonsquare".into()))
    }

    /// A generator of the multiplicative group (least index).
    pub fn primitive_element(&self) -> FieldElement {
        let n = (self.q - 1) as u64;
        let primes: Vec<u64> = (2..=n).filter(|d| n.is_multiple_of(*d) && is_prime(*d as u32)).collect();
        self.nonzero()
            .find(|&a| primes.iter().all(|&r| self.pow(a, n / r) != FieldElement::ONE))
            .unwrap_or(FieldElement::ONE)
    }
}

/// Counts from [`FieldSpec::check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub q: u32,
    pub pairs_checked: u64,
    pub triples_checked: u64,
    /// Whether every triple was checked (q <= `EXHAUSTIVE_AXIOM_ORDER`).
    pub exhaustive: bool,
}

/// Largest order for which associativity and distributivity are checked on
/// all triples.
pub const EXHAUSTIVE_AXIOM_ORDER: u32 = 64;

impl FieldSpec {
    /// Checks the field axioms on the tables. Commutativity, identities and
    /// inverses are checked on every element or pair. Associativity and
    /// distributivity are checked on every triple up to
    /// `EXHAUSTIVE_AXIOM_ORDER`, and otherwise on triples whose first
    /// entry is 0, 1, the primitive element or x.
    pub fn check_axioms(&self) -> Result<AxiomReport> {
        let bad = |what: &str, args: &[FieldElement]| {
            Err(Error::cert("field-axiom", format!("{what} fails at {args:?} in GF({})", self.q)))
        };
        let (zero, one) = (FieldElement::ZERO, FieldElement::ONE);
        for a in self.elements() {
            if self.add(a, zero) != a || self.mul(a, one) != a {
                return bad("identity", &[a]);
            }
            if self.add(a, self.neg(a)) != zero {
                return bad("additive inverse", &[a]);
            }
            if !a.is_zero() && self.mul(a, self.inv(a)?) != one {
                return bad("multiplicative inverse", &[a]);
            }
        }
        let mut pairs = 0u64;
        for a in self.elements() {
            for b in self.elements() {
                pairs += 1;
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad("commutativity", &[a, b]);
                }
                if !a.is_zero() && !b.is_zero() && self.mul(a, b).is_zero() {
                    return bad("no zero divisors", &[a, b]);
                }
            }
        }
        let exhaustive = self.q <= EXHAUSTIVE_AXIOM_ORDER;
        let firsts: Vec<FieldElement> = if exhaustive {
            self.elements().collect()
        } else {
            let mut v = vec![zero, one, self.primitive_element()];
            if self.k > 1 {
                v.push(FieldElement(self.p as u16));
            }
            v.dedup();
            v
        };
        let mut triples = 0u64;
        for &a in &firsts {
            for b in self.elements() {
                for c in self.elements() {
                    triples += 1;
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return bad("associativity", &[a, b, c]);
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return bad("distributivity", &[a, b, c]);
                    }
                }
            }
        }
        Ok(AxiomReport { q: self.q, pairs_checked: pairs, triples_checked: triples, exhaustive })
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldSpecRepr { p: self.p, k: self.k, modulus: self.modulus.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FieldSpecRepr::deserialize(d)?;
        if r.modulus.len() != r.k as usize + 1 {
            return Err(serde::de::Error::custom("modulus length does not match k"));
        }
        FieldSpec::with_modulus(r.p, r.modulus).map_err(serde::de::Error::custom)
    }
}

/// Lexicographically least monic irreducible polynomial of degree `k` over
/// GF(p), constant term first. Order compares the non-leading coefficients
/// from the highest degree down.
pub fn find_irreducible(p: u32, k: u32) -> Result<Vec<u32>> {
    if k < 2 {
        return Err(Error::Domain("find_irreducible needs degree >= 2".into()));
    }
    let base = FieldSpec::prime(p)?;
    let f = poly::find_irreducible_over(&base, k as usize)?;
    Ok(f.iter().map(|c| c.index() as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf3_products() {
        let f = FieldSpec::new(3).unwrap();
        assert_eq!(f.mul(f.from_int(2), f.from_int(2)), FieldElement::ONE);
        for a in f.elements() {
            assert_eq!(f.mul(a, FieldElement::ONE), a);
        }
    }

    #[test]
    fn gf9_x_squared() {
        let f = FieldSpec::new(9).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x has coefficient vector (0, 1) -> index 3.
        let x = f.element(3).unwrap();
        assert_eq!(f.mul(x, x), f.from_int(2));
    }

    #[test]
    fn squares_and_nonsquares() {
        let f3 = FieldSpec::new(3).unwrap();
        assert!(f3.is_square(FieldElement::ONE).unwrap());
        assert!(!f3.is_square(f3.from_int(2)).unwrap());
        let f7 = FieldSpec::new(7).unwrap();
        assert!(f7.is_square(f7.from_int(2)).unwrap());
        assert_eq!(f3.find_nonsquare().unwrap(), f3.from_int(2));
        assert_eq!(FieldSpec::new(5).unwrap().find_nonsquare().unwrap().index(), 2);
        assert_eq!(f7.find_nonsquare().unwrap().index(), 3);
        assert!(f3.is_square(FieldElement::ZERO).is_err());
    }

    #[test]
    fn axioms_hold() {
        for q in [2, 3, 4, 5, 7, 8, 9, 25, 27, 49, 67, 81, 128] {
            let r = FieldSpec::new(q).unwrap().check_axioms().unwrap();
            assert_eq!(r.exhaustive, q <= EXHAUSTIVE_AXIOM_ORDER);
        }
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = FieldSpec::new(5).unwrap();
        assert!(matches!(f.inv(FieldElement::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn lex_least_irreducibles() {
        assert_eq!(find_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(find_irreducible(5, 2).unwrap(), vec![2, 0, 1]);
        assert_eq!(find_irreducible(3, 3).unwrap(), vec![1, 2, 0, 1]);
    }

    #[test]
    fn rejects_non_prime_powers_and_reducible_moduli() {
        assert!(FieldSpec::new(6).is_err());
        assert!(FieldSpec::new(1).is_err());
        // x^2 + 2 = (x+1)(x+2) over GF(3)
        assert!(FieldSpec::with_modulus(3, vec![2, 0, 1]).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let f = FieldSpec::new(25).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"p":5,"k":2,"modulus":[2,0,1]}"#);
        let g: FieldSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn primitive_element_generates() {
        for q in [3, 4, 5, 7, 8, 9, 25, 27, 49] {
            let f = FieldSpec::new(q).unwrap();
            let g = f.primitive_element();
            let mut seen = std::collections::HashSet::new();
            let mut x = FieldElement::ONE;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len(), (q - 1) as usize, "q={q}");
        }
    }
}
