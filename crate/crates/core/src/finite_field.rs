//! Arithmetic in finite fields `F_q`, `q = p^n`.
//!
//! Elements are coefficient vectors over `Z_p` with respect to the power
//! basis `1, x, ..., x^{n-1}` of a monic irreducible modulus. Every element
//! also has a canonical index `sum c_i p^i`, which fixes the enumeration
//! order used throughout the crate: index 0 is zero, index 1 is one.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FieldSpec::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const MAX_DEGREE: usize = 20;

/// Least monic irreducible polynomials (coefficients low to high, leading
/// one included) for every prime power `q = p^n <= 2^12` with `n >= 2`.
/// "Least" compares the non-leading coefficients as the integer
/// `sum c_i p^i`, the same rule as element indices.
#[rustfmt::skip]
static DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (3, 7, &[2, 0, 1, 0, 0, 0, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (5, 3, &[1, 1, 0, 1]),
    (5, 4, &[2, 0, 0, 0, 1]),
    (5, 5, &[1, 4, 0, 0, 0, 1]),
    (7, 2, &[1, 0, 1]),
    (7, 3, &[2, 0, 0, 1]),
    (7, 4, &[1, 1, 0, 0, 1]),
    (11, 2, &[1, 0, 1]),
    (11, 3, &[4, 1, 0, 1]),
    (13, 2, &[2, 0, 1]),
    (13, 3, &[2, 0, 0, 1]),
    (17, 2, &[3, 0, 1]),
    (19, 2, &[1, 0, 1]),
    (23, 2, &[1, 0, 1]),
    (29, 2, &[2, 0, 1]),
    (31, 2, &[1, 0, 1]),
    (37, 2, &[2, 0, 1]),
    (41, 2, &[3, 0, 1]),
    (43, 2, &[1, 0, 1]),
    (47, 2, &[1, 0, 1]),
    (53, 2, &[2, 0, 1]),
    (59, 2, &[1, 0, 1]),
    (61, 2, &[2, 0, 1]),
];

/// Trial-division primality test; inputs here never exceed `2^20`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Factor `n` into `(prime, exponent)` pairs, ascending by prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            let mut e = 0;
            while n.is_multiple_of(k) {
                n /= k;
                e += 1;
            }
            out.push((k, e));
        }
        k += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, n)` when `q = p^n` for a prime `p` and `n >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// Dense polynomials over `Z_p`, coefficients low to high.
mod poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        // p is prime, so a^(p-2) is the inverse.
        let mut base = a % p;
        let mut exp = p - 2;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc
    }

    /// Remainder of `a` divided by `b` (`b` nonzero, trimmed).
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        while r.len() > db {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ai * bj) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            exp >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let len = a.len().max(b.len());
        let mut out: Vec<u64> = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }
}

/// Rabin's irreducibility test over `F_p`. `coeffs` run low to high; the
/// polynomial need not be monic. Constants and zero are not irreducible.
pub fn is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let p = p as u64;
    let mut f: Vec<u64> = coeffs.iter().map(|&c| c as u64 % p).collect();
    poly::trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let n = (f.len() - 1) as u64;
    if n == 1 {
        return true;
    }
    let x = [0u64, 1];
    // x^(p^k) mod f, built by repeated p-th powers.
    let frob = |k: u64| {
        let mut y = poly::rem(&x, &f, p);
        for _ in 0..k {
            y = poly::pow_mod(&y, p, &f, p);
        }
        y
    };
    if !poly::sub(&frob(n), &x, p).is_empty() {
        return false;
    }
    for (r, _) in factorize(n) {
        let h = poly::sub(&frob(n / r), &x, p);
        if poly::gcd(&f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Least monic irreducible of degree `n` over `F_p`, by canonical rank of
/// the non-leading coefficients.
pub fn least_irreducible(p: u32, n: u32) -> Option<Vec<u32>> {
    let count = (p as u64).checked_pow(n)?;
    (0..count).find_map(|rank| {
        let mut c = digits(rank, p as u64, n as usize);
        c.push(1);
        is_irreducible(p, &c).then_some(c)
    })
}

fn digits(mut v: u64, base: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((v % base) as u32);
        v /= base;
    }
    out
}

/// Default modulus for `F_{p^n}`: the shipped table for `q <= 2^12`, the
/// same least-irreducible rule beyond it, and `x` for prime fields.
pub fn default_modulus(p: u32, n: u32) -> Option<Vec<u32>> {
    if n == 1 {
        return Some(vec![0, 1]);
    }
    DEFAULT_MODULI
        .iter()
        .find(|(tp, tn, _)| *tp == p && *tn == n)
        .map(|(_, _, m)| m.to_vec())
        .or_else(|| least_irreducible(p, n))
}

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `tr(x^i)` for `i < n`; the trace is the dot product with this form.
    trace_form: Vec<u32>,
}

impl FieldInner {
    fn add_idx(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        if self.n == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn neg_idx(&self, a: u32) -> u32 {
        let p = self.p;
        if self.n == 1 {
            return (p - a) % p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.n == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let n = self.n as usize;
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        unpack(a, p, &mut x[..n]);
        unpack(b, p, &mut y[..n]);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        let m = &self.modulus;
        // Monic modulus: x^n = -(m_0 + ... + m_{n-1} x^{n-1}).
        for top in (n..2 * n - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &mi) in m[..n].iter().enumerate() {
                let k = top - n + i;
                prod[k] = (prod[k] + (p - c) * mi as u64) % p;
            }
        }
        pack(&prod[..n], p)
    }

    fn pow_idx(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            k >>= 1;
        }
        acc
    }
}

/// A validated finite field `F_{p^n}`. Cheap to clone; clones share storage.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.0.p)
            .field("n", &self.0.n)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

/// Build `F_{p^n}`; see [`FieldSpec::new`].
pub fn make_field(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<FieldSpec> {
    FieldSpec::new(p, n, modulus)
}

impl FieldSpec {
    /// Validates `p`, `n` and the modulus. For `n = 1` the modulus must be
    /// degree one if given and is normalized to `x`; prime fields use `Z_p`
    /// arithmetic directly.
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 || n as usize > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(format!("n = {n}")));
        }
        let q = (p as u64)
            .checked_pow(n)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::DegreeOutOfRange(format!("{p}^{n} exceeds 2^20")))?;
        let modulus = match modulus {
            Some(m) => {
                let mut m: Vec<u32> = m.to_vec();
                while m.last() == Some(&0) {
                    m.pop();
                }
                if m.len() != n as usize + 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::DegreeOutOfRange(format!(
                        "modulus {m:?} is not a degree-{n} polynomial over Z_{p}"
                    )));
                }
                if m[n as usize] != 1 {
                    return Err(Error::NotIrreducible { p, modulus: m });
                }
                if n == 1 {
                    vec![0, 1]
                } else if is_irreducible(p, &m) {
                    m
                } else {
                    return Err(Error::NotIrreducible { p, modulus: m });
                }
            }
            None => default_modulus(p, n).ok_or_else(|| {
                Error::DegreeOutOfRange(format!("no irreducible of degree {n} over F_{p}"))
            })?,
        };
        let mut inner = FieldInner {
            p,
            n,
            q: q as u32,
            modulus,
            trace_form: Vec::new(),
        };
        inner.trace_form = (0..n)
            .map(|i| {
                let xi = (p as u64).pow(i) as u32;
                trace_by_definition_idx(&inner, xi)
            })
            .collect();
        Ok(FieldSpec(Arc::new(inner)))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.n
    }

    /// Field order `q`.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, low to high, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.from_index(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_index(1)
    }

    /// The element with canonical index `idx`. Panics if `idx >= q`.
    pub fn from_index(&self, idx: u32) -> FieldElement {
        assert!(
            idx < self.0.q,
            "index {idx} out of range for F_{}",
            self.0.q
        );
        FieldElement {
            spec: self.clone(),
            index: idx,
        }
    }

    /// Element from power-basis coordinates; entries are reduced mod `p`.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.0.n as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a degree-{} field",
                coeffs.len(),
                self.0.n
            )));
        }
        let p = self.0.p;
        let idx = coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c % p);
        Ok(self.from_index(idx))
    }

    /// All `q` elements in canonical order.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |i| self.from_index(i))
    }

    pub fn coeffs_of(&self, idx: u32) -> Vec<u32> {
        digits(idx as u64, self.0.p as u64, self.0.n as usize)
    }

    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        self.0.add_idx(a, b)
    }

    pub fn neg_idx(&self, a: u32) -> u32 {
        self.0.neg_idx(a)
    }

    pub fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.0.add_idx(a, self.0.neg_idx(b))
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.0.mul_idx(a, b)
    }

    pub fn pow_idx(&self, a: u32, k: u64) -> u32 {
        self.0.pow_idx(a, k)
    }

    /// Absolute trace of the element with index `a`, as an integer in `[0, p)`.
    pub fn trace_idx(&self, a: u32) -> u32 {
        let p = self.0.p;
        if self.0.n == 1 {
            return a;
        }
        let mut a = a;
        let mut acc = 0u64;
        for &t in &self.0.trace_form {
            acc += (a % p) as u64 * t as u64;
            a /= p;
        }
        (acc % p as u64) as u32
    }
}

fn unpack(mut v: u32, p: u64, out: &mut [u64]) {
    for slot in out.iter_mut() {
        *slot = v as u64 % p;
        v = (v as u64 / p) as u32;
    }
}

fn pack(c: &[u64], p: u64) -> u32 {
    c.iter().rev().fold(0u64, |acc, &x| acc * p + x) as u32
}

/// `sum_k y^(p^k)` via explicit Frobenius powers; used to build the trace
/// form and as the reference definition in tests.
fn trace_by_definition_idx(inner: &FieldInner, y: u32) -> u32 {
    let mut acc = 0;
    let mut term = y;
    for _ in 0..inner.n {
        acc = inner.add_idx(acc, term);
        term = inner.pow_idx(term, inner.p as u64);
    }
    assert!(acc < inner.p, "trace left the prime field");
    acc
}

/// An element of a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    index: u32,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Canonical index `sum c_i p^i`.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.spec.coeffs_of(self.index)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self
            .spec
            .from_index(self.spec.add_idx(self.index, other.index)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self
            .spec
            .from_index(self.spec.sub_idx(self.index, other.index)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self
            .spec
            .from_index(self.spec.mul_idx(self.index, other.index)))
    }

    pub fn neg(&self) -> Self {
        self.spec.from_index(self.spec.neg_idx(self.index))
    }

    pub fn pow(&self, k: u64) -> Self {
        self.spec.from_index(self.spec.pow_idx(self.index, k))
    }

    /// Absolute trace to `F_p`, reported in `[0, p)`.
    pub fn trace(&self) -> u32 {
        self.spec.trace_idx(self.index)
    }

    /// Trace computed literally as `x + x^p + ... + x^{p^{n-1}}`.
    pub fn trace_by_definition(&self) -> u32 {
        trace_by_definition_idx(&self.spec.0, self.index)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial notation in the generator `x`, e.g. `2x^2+x+1`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            return write!(f, "0");
        }
        let c = self.coeffs();
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let coeff = if ci == 1 && i > 0 {
                String::new()
            } else {
                ci.to_string()
            };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force root search; only conclusive for degree <= 3.
    fn has_root(p: u32, c: &[u32]) -> bool {
        (0..p as u64).any(|x| {
            c.iter()
                .rev()
                .fold(0u64, |acc, &ci| (acc * x + ci as u64) % p as u64)
                == 0
        })
    }

    #[test]
    fn make_field_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        assert_eq!(f3.order(), 3);
        assert_eq!(f3.modulus(), &[0, 1]);
        let f9 = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f9.order(), 9);
        assert_eq!(
            make_field(3, 2, Some(&[2, 0, 1])),
            Err(Error::NotIrreducible {
                p: 3,
                modulus: vec![2, 0, 1]
            })
        );
        assert_eq!(make_field(4, 1, None), Err(Error::NotPrime(4)));
        assert!(matches!(
            make_field(2, 21, None),
            Err(Error::DegreeOutOfRange(_))
        ));
        assert!(matches!(
            make_field(3, 13, None),
            Err(Error::DegreeOutOfRange(_))
        ));
        assert!(matches!(
            make_field(2, 0, None),
            Err(Error::DegreeOutOfRange(_))
        ));
    }

    #[test]
    fn irreducibility_matches_root_search_for_small_degree() {
        for p in [2u32, 3, 5, 7] {
            for deg in 2..=3u32 {
                for rank in 0..(p as u64).pow(deg) {
                    let mut c = digits(rank, p as u64, deg as usize);
                    c.push(1);
                    assert_eq!(is_irreducible(p, &c), !has_root(p, &c), "p={p} {c:?}");
                }
            }
        }
        assert!(is_irreducible(3, &[1, 0, 1]));
        assert!(!is_irreducible(3, &[2, 0, 1]));
        assert!(is_irreducible(7, &[1, 1]));
        // (x^2+x+1)^2 over F_2 has no root but is reducible.
        assert!(!is_irreducible(2, &[1, 0, 1, 0, 1]));
        assert!(!is_irreducible(5, &[3]));
    }

    #[test]
    fn shipped_moduli_are_least_irreducibles() {
        for &(p, n, m) in DEFAULT_MODULI {
            assert!((p as u64).pow(n) <= 1 << 12);
            assert_eq!(least_irreducible(p, n).as_deref(), Some(m), "p={p} n={n}");
        }
        let expected = (2..=64u64)
            .filter(|&p| is_prime(p))
            .flat_map(|p| {
                (2..=12u32).filter(move |&n| p.checked_pow(n).is_some_and(|q| q <= 1 << 12))
            })
            .count();
        assert_eq!(DEFAULT_MODULI.len(), expected);
    }

    #[test]
    fn enumerate_order() {
        let f3 = make_field(3, 1, None).unwrap();
        let idx: Vec<u32> = f3.enumerate().map(|e| e.coeffs()[0]).collect();
        assert_eq!(idx, vec![0, 1, 2]);
        let f4 = make_field(2, 2, None).unwrap();
        let c: Vec<Vec<u32>> = f4.enumerate().map(|e| e.coeffs()).collect();
        assert_eq!(c, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let f9 = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        let all: Vec<FieldElement> = f9.enumerate().collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], f9.zero());
        assert_eq!(all[1], f9.one());
    }

    #[test]
    fn f9_arithmetic_examples() {
        let f9 = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        let x = f9.element(&[0, 1]).unwrap();
        assert_eq!(x.mul(&x).unwrap().coeffs(), vec![2, 0]);
        assert_eq!(x.trace(), 0);
        assert_eq!(x.trace_by_definition(), 0);
        assert_eq!(x.to_string(), "x");
        for e in f9.enumerate() {
            assert_eq!(e.mul(&f9.one()).unwrap(), e);
            assert!(e.add(&e.neg()).unwrap().is_zero());
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        let b = make_field(3, 2, Some(&[2, 2, 1])).unwrap();
        let c = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(a.one().add(&b.one()), Err(Error::SpecMismatch));
        assert!(a.one().mul(&c.one()).is_ok());
    }

    #[test]
    fn prime_field_trace_is_identity() {
        let f7 = make_field(7, 1, None).unwrap();
        for e in f7.enumerate() {
            assert_eq!(e.trace(), e.index());
        }
    }

    fn small_fields() -> Vec<FieldSpec> {
        [
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 1),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 1),
            (5, 2),
            (7, 1),
            (7, 2),
            (11, 1),
        ]
        .iter()
        .map(|&(p, n)| make_field(p, n, None).unwrap())
        .collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add_idx(a, 0), a);
                assert_eq!(f.mul_idx(a, 1), a);
                assert_eq!(f.add_idx(a, f.neg_idx(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul_idx(a, f.pow_idx(a, q as u64 - 2)), 1, "{f:?} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.add_idx(a, b), f.add_idx(b, a));
                    assert_eq!(f.mul_idx(a, b), f.mul_idx(b, a));
                }
            }
            // Triple checks on a stride keep this quadratic-ish for q = 81.
            let step = if q > 27 { 7 } else { 1 };
            for a in (0..q).step_by(step) {
                for b in 0..q {
                    for c in (0..q).step_by(step) {
                        assert_eq!(f.mul_idx(f.mul_idx(a, b), c), f.mul_idx(a, f.mul_idx(b, c)));
                        assert_eq!(f.add_idx(f.add_idx(a, b), c), f.add_idx(a, f.add_idx(b, c)));
                        assert_eq!(
                            f.mul_idx(a, f.add_idx(b, c)),
                            f.add_idx(f.mul_idx(a, b), f.mul_idx(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn trace_properties_exhaustive() {
        for f in small_fields() {
            let (p, q) = (f.characteristic(), f.order());
            let mut fiber = vec![0u32; p as usize];
            for a in 0..q {
                let e = f.from_index(a);
                let t = e.trace();
                assert_eq!(t, e.trace_by_definition());
                assert_eq!(f.trace_idx(f.pow_idx(a, p as u64)), t);
                fiber[t as usize] += 1;
                for b in 0..q {
                    assert_eq!(f.trace_idx(f.add_idx(a, b)), (t + f.trace_idx(b)) % p);
                }
            }
            assert!(fiber.iter().all(|&c| c == q / p), "{f:?} {fiber:?}");
        }
    }

    #[test]
    fn helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert!(is_prime(1_048_573));
    }
}
