//! Dense univariate polynomials over a `FieldSpec`, constant term first.
//! The zero polynomial is the empty vector.

use super::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

pub type Poly = Vec<FieldElement>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(f: &[FieldElement]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

pub fn add(fs: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let n = a.len().max(b.len());
    let get = |v: &[FieldElement], i: usize| v.get(i).copied().unwrap_or_default();
    trim((0..n).map(|i| fs.add(get(a, i), get(b, i))).collect())
}

pub fn sub(fs: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let n = a.len().max(b.len());
    let get = |v: &[FieldElement], i: usize| v.get(i).copied().unwrap_or_default();
    trim((0..n).map(|i| fs.sub(get(a, i), get(b, i))).collect())
}

pub fn mul(fs: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fs.add(out[i + j], fs.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder. Panics if `d` is zero.
pub fn divrem(fs: &FieldSpec, a: &[FieldElement], d: &[FieldElement]) -> (Poly, Poly) {
    let dd = degree(d).expect("division by the zero polynomial");
    let lead_inv = fs.inv_nz(d[dd]);
    let mut r: Poly = trim(a.to_vec());
    let mut quot = vec![FieldElement::ZERO; r.len().saturating_sub(dd).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < dd {
            break;
        }
        let c = fs.mul(r[dr], lead_inv);
        let shift = dr - dd;
        quot[shift] = c;
        for (i, &di) in d[..=dd].iter().enumerate() {
            r[shift + i] = fs.sub(r[shift + i], fs.mul(c, di));
        }
        r = trim(r);
    }
    (trim(quot), r)
}

pub fn rem(fs: &FieldSpec, a: &[FieldElement], d: &[FieldElement]) -> Poly {
    divrem(fs, a, d).1
}

pub fn monic(fs: &FieldSpec, f: &[FieldElement]) -> Poly {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let c = fs.inv_nz(f[d]);
            f[..=d].iter().map(|&x| fs.mul(x, c)).collect()
        }
    }
}

pub fn gcd(fs: &FieldSpec, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(fs, &a, &b);
        a = b;
        b = r;
    }
    monic(fs, &a)
}

/// `base^e mod m`.
pub fn powmod(fs: &FieldSpec, base: &[FieldElement], mut e: u64, m: &[FieldElement]) -> Poly {
    let mut acc: Poly = rem(fs, &[FieldElement::ONE], m);
    let mut b = rem(fs, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(fs, &mul(fs, &acc, &b), m);
        }
        b = rem(fs, &mul(fs, &b, &b), m);
        e >>= 1;
    }
    acc
}

pub fn eval(fs: &FieldSpec, f: &[FieldElement], x: FieldElement) -> FieldElement {
    f.iter().rev().fold(FieldElement::ZERO, |acc, &c| fs.add(fs.mul(acc, x), c))
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree `k` is irreducible over GF(Q) iff
/// `x^(Q^k) = x mod f` and `gcd(x^(Q^(k/r)) - x, f) = 1` for every prime `r | k`.
pub fn is_irreducible(fs: &FieldSpec, f: &[FieldElement]) -> bool {
    let Some(k) = degree(f) else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let f = monic(fs, f);
    let x: Poly = vec![FieldElement::ZERO, FieldElement::ONE];
    let qq = fs.q() as u64;
    // frob[i] = x^(Q^i) mod f
    let mut frob = vec![rem(fs, &x, &f)];
    for i in 1..=k {
        let next = powmod(fs, &frob[i - 1], qq, &f);
        frob.push(next);
    }
    if sub(fs, &frob[k], &rem(fs, &x, &f)).iter().any(|c| !c.is_zero()) {
        return false;
    }
    prime_divisors(k).into_iter().all(|r| {
        let h = sub(fs, &frob[k / r], &x);
        let g = gcd(fs, &h, &f);
        degree(&g) == Some(0)
    })
}

/// Least monic irreducible of degree `k` over `fs`, comparing the
/// non-leading coefficients from degree `k-1` down to 0.
pub fn find_irreducible_over(fs: &FieldSpec, k: usize) -> Result<Poly> {
    if k == 0 {
        return Err(Error::Domain("degree 0".into()));
    }
    let q = fs.order();
    let total = q
        .checked_pow(k as u32)
        .ok_or_else(|| Error::Unsupported(format!("search space GF({q})^{k} too large")))?;
    for n in 0..total {
        let mut f = Vec::with_capacity(k + 1);
        let mut m = n;
        for _ in 0..k {
            f.push(FieldElement::from_raw(m % q));
            m /= q;
        }
        f.push(FieldElement::ONE);
        if is_irreducible(fs, &f) {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!("no irreducible of degree {k} over GF({q})")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(fs: &FieldSpec, c: &[i64]) -> Poly {
        trim(c.iter().map(|&x| fs.from_int(x)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let fs = FieldSpec::new(5).unwrap();
        let a = p(&fs, &[1, 2, 3, 4, 1]);
        let d = p(&fs, &[2, 0, 1]);
        let (qt, r) = divrem(&fs, &a, &d);
        assert!(degree(&r).is_none_or(|x| x < 2));
        assert_eq!(add(&fs, &mul(&fs, &qt, &d), &r), a);
    }

    #[test]
    fn irreducibility_by_root_count() {
        // A quadratic or cubic is irreducible iff it has no root.
        let fs = FieldSpec::new(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                let f = p(&fs, &[b, a, 0, 1]);
                let has_root = fs.elements().any(|x| eval(&fs, &f, x).is_zero());
                assert_eq!(is_irreducible(&fs, &f), !has_root, "x^3+{a}x+{b}");
            }
        }
    }

    #[test]
    fn quartic_product_of_quadratics_is_reducible() {
        let fs = FieldSpec::new(3).unwrap();
        let g = p(&fs, &[1, 0, 1]);
        let h = p(&fs, &[2, 1, 1]);
        assert!(is_irreducible(&fs, &g));
        assert!(is_irreducible(&fs, &h));
        assert!(!is_irreducible(&fs, &mul(&fs, &g, &h)));
    }

    #[test]
    fn irreducible_over_extension() {
        let fs = FieldSpec::new(9).unwrap();
        let f = find_irreducible_over(&fs, 2).unwrap();
        assert!(fs.elements().all(|x| !eval(&fs, &f, x).is_zero()));
    }
}
