//! The Galois ring `GR(4,n) = Z_4[x]/<h(x)>` for a monic basic primitive
//! `h` of degree `n`.
//!
//! Elements are coefficient vectors over `Z_4` in the power basis of
//! `xi = x + <h>`, indexed canonically by `sum c_i 4^i`. The Teichmuller set
//! is kept in the order `[0, 1, xi, xi^2, ..., xi^{2^n-2}]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};

pub const MAX_RING_DEGREE: u32 = 12;

/// Least valid modulus for each degree (coefficients low to high), where
/// "least" ranks the non-leading coefficients as `sum c_i 4^i`. Each entry
/// is the lift of a primitive binary polynomial whose root has order
/// `2^n - 1` in the ring.
#[rustfmt::skip]
static DEFAULT_RING_MODULI: [&[u8]; 12] = [
    &[3, 1],
    &[1, 1, 1],
    &[3, 1, 2, 1],
    &[1, 3, 2, 0, 1],
    &[3, 2, 3, 0, 0, 1],
    &[1, 3, 0, 2, 0, 0, 1],
    &[3, 1, 0, 0, 2, 0, 0, 1],
    &[1, 2, 1, 3, 0, 1, 0, 0, 1],
    &[3, 0, 2, 0, 3, 0, 0, 0, 0, 1],
    &[1, 0, 0, 3, 0, 2, 0, 0, 0, 0, 1],
    &[3, 2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[1, 0, 2, 3, 1, 2, 2, 3, 2, 0, 0, 0, 1],
];

/// Multiplicative order of `x` modulo `f` over `F_2`, if `x` is a unit and
/// its order is at most `limit`.
fn order_of_x_mod2(f: &[u8], limit: u64) -> Option<u64> {
    let n = f.len() - 1;
    if f[0] & 1 == 0 {
        return None;
    }
    let mut cur = vec![0u8; n];
    // x itself (degree 1 reduces only when n == 1).
    if n == 1 {
        cur[0] = f[0] & 1;
    } else {
        cur[1] = 1;
    }
    let one = {
        let mut v = vec![0u8; n];
        v[0] = 1;
        v
    };
    for k in 1..=limit {
        if cur == one {
            return Some(k);
        }
        // multiply by x
        let carry = cur[n - 1];
        for i in (1..n).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if carry == 1 {
            for i in 0..n {
                cur[i] ^= f[i] & 1;
            }
        }
    }
    None
}

/// True when `f` (binary coefficients, low to high, monic) is primitive.
pub fn is_primitive_mod2(f: &[u8]) -> bool {
    let n = f.len() - 1;
    n >= 1 && order_of_x_mod2(f, (1u64 << n) - 1) == Some((1u64 << n) - 1)
}

/// Lift a binary polynomial to the unique monic `h` over `Z_4` whose root
/// satisfies `xi^{2^n-1} = 1`, via `h(x^2) = (-1)^n (e(x)^2 - o(x)^2)` with
/// `e`, `o` the even and odd parts.
pub fn teichmuller_lift(f2: &[u8]) -> Vec<u8> {
    let n = f2.len() - 1;
    let even: Vec<i64> = f2
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { 0 })
        .collect();
    let odd: Vec<i64> = f2
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 1 { c as i64 } else { 0 })
        .collect();
    let square = |a: &[i64]| {
        let mut out = vec![0i64; 2 * n + 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in a.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let e2 = square(&even);
    let o2 = square(&odd);
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    (0..=n)
        .map(|k| (sign * (e2[2 * k] - o2[2 * k])).rem_euclid(4) as u8)
        .collect()
}

fn rank4(c: &[u8]) -> u64 {
    c.iter().rev().fold(0u64, |acc, &x| acc * 4 + x as u64)
}

/// Least valid modulus of degree `n`, found by lifting every primitive
/// binary polynomial.
pub fn least_basic_primitive(n: u32) -> Option<Vec<u8>> {
    let n = n as usize;
    (0u64..1 << n)
        .map(|bits| {
            let mut f: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
            f.push(1);
            f
        })
        .filter(|f| is_primitive_mod2(f))
        .map(|f| teichmuller_lift(&f))
        .min_by_key(|h| rank4(&h[..n]))
}

struct RingInner {
    n: u32,
    modulus: Vec<u8>,
    teichmuller: Vec<u32>,
    teich_pos: HashMap<u32, u32>,
    /// `tr(xi^i)` for `i < n`.
    trace_form: Vec<u8>,
}

impl RingInner {
    fn size(&self) -> u32 {
        1 << (2 * self.n)
    }

    fn add_idx(&self, a: u32, b: u32) -> u32 {
        let mut out = 0;
        for i in 0..self.n {
            let s = 2 * i;
            out |= ((((a >> s) & 3) + ((b >> s) & 3)) & 3) << s;
        }
        out
    }

    fn neg_idx(&self, a: u32) -> u32 {
        let mut out = 0;
        for i in 0..self.n {
            let s = 2 * i;
            out |= ((4 - ((a >> s) & 3)) & 3) << s;
        }
        out
    }

    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        let n = self.n as usize;
        let mut prod = [0u32; 2 * MAX_RING_DEGREE as usize];
        for i in 0..n {
            let x = (a >> (2 * i)) & 3;
            if x == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] += x * ((b >> (2 * j)) & 3);
            }
        }
        for top in (n..2 * n - 1).rev() {
            let c = prod[top] & 3;
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..n {
                prod[top - n + i] += (4 - c) * self.modulus[i] as u32;
            }
        }
        (0..n).fold(0, |acc, i| acc | ((prod[i] & 3) << (2 * i)))
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

    /// `(a, b)` with `r = a + 2b`, `a, b` Teichmuller. Uses `(a+2b)^2 = a^2`,
    /// so `a = r^{2^n}`.
    fn decompose_idx(&self, r: u32) -> (u32, u32) {
        let q = 1u64 << self.n;
        let a = self.pow_idx(r, q);
        let c = self.add_idx(r, self.neg_idx(a));
        // c is 2*b'; halve coordinatewise, then project b' onto T.
        let mut half = 0;
        for i in 0..self.n {
            let ci = (c >> (2 * i)) & 3;
            debug_assert!(ci.is_multiple_of(2));
            half |= (ci >> 1) << (2 * i);
        }
        (a, self.pow_idx(half, q))
    }

    fn xi_idx(&self) -> u32 {
        if self.n == 1 {
            self.neg_idx(self.modulus[0] as u32)
        } else {
            1 << 2
        }
    }

    fn double_idx(&self, a: u32) -> u32 {
        self.add_idx(a, a)
    }

    fn frobenius_idx(&self, r: u32) -> u32 {
        let (a, b) = self.decompose_idx(r);
        self.add_idx(self.mul_idx(a, a), self.double_idx(self.mul_idx(b, b)))
    }

    fn trace_by_definition_idx(&self, r: u32) -> u8 {
        let mut acc = 0;
        let mut term = r;
        for _ in 0..self.n {
            acc = self.add_idx(acc, term);
            term = self.frobenius_idx(term);
        }
        assert!(acc < 4, "ring trace left Z_4");
        acc as u8
    }
}

/// A validated Galois ring `GR(4,n)`. Cheap to clone.
#[derive(Clone)]
pub struct RingSpec(Arc<RingInner>);

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n == other.0.n && self.0.modulus == other.0.modulus)
    }
}

impl Eq for RingSpec {}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingSpec")
            .field("n", &self.0.n)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

/// Build `GR(4,n)`; see [`RingSpec::new`].
pub fn make_ring(n: u32, modulus: Option<&[u8]>) -> Result<RingSpec> {
    RingSpec::new(n, modulus)
}

impl RingSpec {
    /// Checks that the modulus reduces to a primitive polynomial mod 2 and
    /// that its root has order `2^n - 1`, then builds the Teichmuller set.
    pub fn new(n: u32, modulus: Option<&[u8]>) -> Result<Self> {
        if n == 0 || n > MAX_RING_DEGREE {
            return Err(Error::DegreeOutOfRange(format!(
                "GR(4,{n}) needs 1 <= n <= 12"
            )));
        }
        let modulus: Vec<u8> = match modulus {
            Some(m) => m.to_vec(),
            None => DEFAULT_RING_MODULI[n as usize - 1].to_vec(),
        };
        if modulus.len() != n as usize + 1 || modulus.iter().any(|&c| c > 3) {
            return Err(Error::DegreeOutOfRange(format!(
                "modulus {modulus:?} is not a degree-{n} polynomial over Z_4"
            )));
        }
        let reduced: Vec<u8> = modulus.iter().map(|c| c & 1).collect();
        if modulus[n as usize] != 1 || !is_primitive_mod2(&reduced) {
            return Err(Error::NotBasicPrimitive(modulus));
        }
        let mut inner = RingInner {
            n,
            modulus,
            teichmuller: Vec::new(),
            teich_pos: HashMap::new(),
            trace_form: Vec::new(),
        };
        let expected = (1u64 << n) - 1;
        let xi = inner.xi_idx();
        let mut t = vec![0u32];
        let mut cur = 1u32;
        for _ in 0..expected {
            t.push(cur);
            cur = inner.mul_idx(cur, xi);
        }
        if cur != 1 {
            let mut order = 1;
            let mut c = xi;
            while c != 1 && order < 4 * expected + 4 {
                c = inner.mul_idx(c, xi);
                order += 1;
            }
            return Err(Error::NotTeichmullerLift {
                modulus: inner.modulus,
                order,
                expected,
            });
        }
        inner.teich_pos = t.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        if inner.teich_pos.len() != t.len() {
            return Err(Error::NotTeichmullerLift {
                modulus: inner.modulus,
                order: 0,
                expected,
            });
        }
        inner.teichmuller = t;
        inner.trace_form = (0..n)
            .map(|i| inner.trace_by_definition_idx(inner.pow_idx(xi, i as u64)))
            .collect();
        Ok(RingSpec(Arc::new(inner)))
    }

    pub fn degree(&self) -> u32 {
        self.0.n
    }

    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    /// Number of ring elements, `4^n`.
    pub fn size(&self) -> u32 {
        self.0.size()
    }

    pub fn from_index(&self, idx: u32) -> RingElement {
        assert!(
            idx < self.size(),
            "index {idx} out of range for GR(4,{})",
            self.0.n
        );
        RingElement {
            spec: self.clone(),
            index: idx,
        }
    }

    /// Element from coordinates over `Z_4` (reduced mod 4).
    pub fn element(&self, coeffs: &[u8]) -> Result<RingElement> {
        if coeffs.len() > self.0.n as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for GR(4,{})",
                coeffs.len(),
                self.0.n
            )));
        }
        let idx = coeffs
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &c)| acc | (((c & 3) as u32) << (2 * i)));
        Ok(self.from_index(idx))
    }

    pub fn zero(&self) -> RingElement {
        self.from_index(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_index(1)
    }

    /// `xi = x + <h>`; for `n = 1` this is `-h_0` in `Z_4`.
    pub fn xi(&self) -> RingElement {
        self.from_index(self.0.xi_idx())
    }

    /// All `4^n` elements in canonical order.
    pub fn enumerate(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    /// Teichmuller indices in canonical order `[0, 1, xi, ..., xi^{2^n-2}]`.
    pub fn teichmuller_indices(&self) -> &[u32] {
        &self.0.teichmuller
    }

    /// Position of an element in the canonical Teichmuller order, if it is a
    /// Teichmuller element.
    pub fn teichmuller_position(&self, idx: u32) -> Option<usize> {
        self.0.teich_pos.get(&idx).map(|&p| p as usize)
    }

    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        self.0.add_idx(a, b)
    }

    pub fn neg_idx(&self, a: u32) -> u32 {
        self.0.neg_idx(a)
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.0.mul_idx(a, b)
    }

    pub fn decompose_idx(&self, r: u32) -> (u32, u32) {
        self.0.decompose_idx(r)
    }

    /// Trace of element `r` through the precomputed `Z_4`-linear form.
    pub fn trace_idx(&self, r: u32) -> u8 {
        let acc: u32 = self
            .0
            .trace_form
            .iter()
            .enumerate()
            .map(|(i, &t)| ((r >> (2 * i)) & 3) * t as u32)
            .sum();
        (acc & 3) as u8
    }

    /// `Gamma(r) = sum_{x in T} i^{tr(rx)}` for element index `r`.
    pub fn gamma_idx(&self, r: u32) -> CyclotomicInt {
        let mut counts = [0i64; 4];
        for &x in &self.0.teichmuller {
            counts[self.trace_idx(self.0.mul_idx(r, x)) as usize] += 1;
        }
        CyclotomicInt::from_exponent_counts(4, &counts).expect("at most 4096 terms")
    }
}

/// The Teichmuller set of a ring, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeichmullerSet {
    elements: Vec<RingElement>,
}

impl TeichmullerSet {
    pub fn elements(&self) -> &[RingElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, r: &RingElement) -> bool {
        r.spec.teichmuller_position(r.index).is_some()
    }
}

pub fn teichmuller(spec: &RingSpec) -> TeichmullerSet {
    TeichmullerSet {
        elements: spec
            .0
            .teichmuller
            .iter()
            .map(|&i| spec.from_index(i))
            .collect(),
    }
}

/// An element of `GR(4,n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    spec: RingSpec,
    index: u32,
}

impl RingElement {
    fn with_index(&self, index: u32) -> Self {
        RingElement {
            spec: self.spec.clone(),
            index,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn coeffs(&self) -> Vec<u8> {
        (0..self.spec.0.n)
            .map(|i| ((self.index >> (2 * i)) & 3) as u8)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_index(self.spec.0.add_idx(self.index, other.index)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_index(
            self.spec
                .0
                .add_idx(self.index, self.spec.0.neg_idx(other.index)),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.with_index(self.spec.0.mul_idx(self.index, other.index)))
    }

    pub fn neg(&self) -> Self {
        self.with_index(self.spec.0.neg_idx(self.index))
    }

    pub fn pow(&self, k: u64) -> Self {
        self.with_index(self.spec.0.pow_idx(self.index, k))
    }

    /// The unique `(a, b)`, both Teichmuller, with `self = a + 2b`.
    pub fn two_adic_decompose(&self) -> (RingElement, RingElement) {
        let (a, b) = self.spec.0.decompose_idx(self.index);
        (self.with_index(a), self.with_index(b))
    }

    /// Units are exactly the elements whose Teichmuller part `a` is nonzero.
    pub fn is_unit(&self) -> bool {
        self.spec.0.decompose_idx(self.index).0 != 0
    }

    /// `sigma(a + 2b) = a^2 + 2b^2`.
    pub fn frobenius(&self) -> Self {
        self.with_index(self.spec.0.frobenius_idx(self.index))
    }

    /// Ring trace to `Z_4`, in `[0, 4)`.
    pub fn trace(&self) -> u8 {
        self.spec.trace_idx(self.index)
    }

    /// Trace as the literal Frobenius orbit sum.
    pub fn trace_by_definition(&self) -> u8 {
        self.spec.0.trace_by_definition_idx(self.index)
    }

    /// `Gamma(self)` as an exact Gaussian integer (order-4 cyclotomic).
    pub fn gamma_sum(&self) -> CyclotomicInt {
        self.spec.gamma_idx(self.index)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial notation in `xi`, e.g. `3xi+3`.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coeff = if c == 1 && i > 0 {
                    String::new()
                } else {
                    c.to_string()
                };
                match i {
                    0 => coeff,
                    1 => format!("{coeff}xi"),
                    _ => format!("{coeff}xi^{i}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn ring(n: u32) -> RingSpec {
        make_ring(n, None).unwrap()
    }

    #[test]
    fn make_ring_examples() {
        let r2 = make_ring(2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(r2.size(), 16);
        let r1 = ring(1);
        assert_eq!(r1.size(), 4);
        assert_eq!(r1.xi(), r1.one());
        assert_eq!(
            make_ring(2, Some(&[1, 0, 1])).unwrap_err(),
            Error::NotBasicPrimitive(vec![1, 0, 1])
        );
        assert!(matches!(
            make_ring(2, Some(&[1, 3, 1])),
            Err(Error::NotTeichmullerLift { .. })
        ));
        assert!(matches!(
            make_ring(1, Some(&[1, 1])),
            Err(Error::NotTeichmullerLift {
                order: 2,
                expected: 1,
                ..
            })
        ));
        assert!(matches!(
            make_ring(13, None),
            Err(Error::DegreeOutOfRange(_))
        ));
        assert!(matches!(
            make_ring(0, None),
            Err(Error::DegreeOutOfRange(_))
        ));
        assert!(matches!(
            make_ring(2, Some(&[1, 1])),
            Err(Error::DegreeOutOfRange(_))
        ));
    }

    #[test]
    fn shipped_moduli_match_search() {
        for n in 1..=12u32 {
            let m = DEFAULT_RING_MODULI[n as usize - 1];
            assert_eq!(least_basic_primitive(n).as_deref(), Some(m), "n={n}");
            assert!(make_ring(n, Some(m)).is_ok());
        }
    }

    #[test]
    fn shipped_moduli_are_least_valid_lifts() {
        // Independent route: try every monic Z_4 polynomial in rank order.
        for n in 1..=5u32 {
            let first = (0u64..4u64.pow(n)).find_map(|rank| {
                let mut c: Vec<u8> = (0..n).map(|i| ((rank >> (2 * i)) & 3) as u8).collect();
                c.push(1);
                make_ring(n, Some(&c)).ok().map(|_| c)
            });
            assert_eq!(
                first.as_deref(),
                Some(DEFAULT_RING_MODULI[n as usize - 1]),
                "n={n}"
            );
        }
    }

    #[test]
    fn teichmuller_examples() {
        let r2 = ring(2);
        let t = teichmuller(&r2);
        let shown: Vec<String> = t.elements().iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, vec!["0", "1", "xi", "3xi+3"]);
        let xi = r2.xi();
        assert_eq!(xi.pow(2), r2.element(&[3, 3]).unwrap());
        assert_eq!(xi.pow(3), r2.one());
        let t1 = teichmuller(&ring(1));
        assert_eq!(t1.elements(), &[ring(1).zero(), ring(1).one()]);
        for n in 1..=8 {
            let t = teichmuller(&ring(n));
            assert_eq!(t.len(), 1 << n);
            let distinct: HashSet<u32> = t.elements().iter().map(|e| e.index()).collect();
            assert_eq!(distinct.len(), 1 << n);
        }
    }

    #[test]
    fn decompose_examples() {
        let r2 = ring(2);
        let (a, b) = r2.zero().two_adic_decompose();
        assert!(a.is_zero() && b.is_zero());
        let (a, b) = r2.element(&[2]).unwrap().two_adic_decompose();
        assert_eq!((a, b), (r2.zero(), r2.one()));
        let (a, b) = r2.element(&[3, 2]).unwrap().two_adic_decompose();
        assert_eq!((a, b), (r2.one(), r2.element(&[3, 3]).unwrap()));
    }

    #[test]
    fn decomposition_is_a_bijection() {
        for n in 1..=6 {
            let r = ring(n);
            let t = r.teichmuller_indices();
            let mut seen = vec![false; r.size() as usize];
            for &a in t {
                for &b in t {
                    let v = r.add_idx(a, r.add_idx(b, b));
                    assert!(!seen[v as usize], "n={n}: a+2b repeats");
                    seen[v as usize] = true;
                    assert_eq!(r.decompose_idx(v), (a, b));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for n in 1..=3 {
            let r = ring(n);
            let s = r.size();
            for a in 0..s {
                assert_eq!(r.mul_idx(a, 1), a);
                assert_eq!(r.add_idx(a, r.neg_idx(a)), 0);
                for b in 0..s {
                    assert_eq!(r.mul_idx(a, b), r.mul_idx(b, a));
                    for c in 0..s {
                        assert_eq!(r.mul_idx(r.mul_idx(a, b), c), r.mul_idx(a, r.mul_idx(b, c)));
                        assert_eq!(
                            r.mul_idx(a, r.add_idx(b, c)),
                            r.add_idx(r.mul_idx(a, b), r.mul_idx(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_properties() {
        for n in 1..=4 {
            let r = ring(n);
            for e in r.enumerate() {
                let mut x = e.clone();
                for _ in 0..n {
                    x = x.frobenius();
                }
                assert_eq!(x, e, "sigma^n must be the identity");
            }
            for c in 0..4u8 {
                let k = r.element(&[c]).unwrap();
                assert_eq!(k.frobenius(), k);
            }
            assert_eq!(r.xi().frobenius(), r.xi().pow(2));
        }
        for n in 1..=3 {
            let r = ring(n);
            for x in r.enumerate() {
                for y in r.enumerate() {
                    let (fx, fy) = (x.frobenius(), y.frobenius());
                    assert_eq!(x.add(&y).unwrap().frobenius(), fx.add(&fy).unwrap());
                    assert_eq!(x.mul(&y).unwrap().frobenius(), fx.mul(&fy).unwrap());
                }
            }
        }
    }

    #[test]
    fn trace_properties() {
        let r2 = ring(2);
        assert_eq!(r2.element(&[3, 2]).unwrap().trace(), 0);
        // Independent check of the closed form tr(a+2b) = a + 2b + a^2 + 2b^2.
        for e in r2.enumerate() {
            let (a, b) = e.two_adic_decompose();
            let closed = e
                .add(&a.mul(&a).unwrap())
                .unwrap()
                .add(&b.mul(&b).unwrap().add(&b.mul(&b).unwrap()).unwrap())
                .unwrap();
            assert_eq!(closed.coeffs()[1], 0);
            assert_eq!(closed.coeffs()[0], e.trace());
        }
        let r1 = ring(1);
        for e in r1.enumerate() {
            assert_eq!(e.trace() as u32, e.index());
        }
        for n in 1..=5 {
            let r = ring(n);
            assert_eq!(r.zero().trace(), 0);
            for e in r.enumerate() {
                assert_eq!(e.trace(), e.trace_by_definition());
                assert_eq!(e.frobenius().trace(), e.trace());
            }
        }
        for n in 1..=3 {
            let r = ring(n);
            for x in 0..r.size() {
                for y in 0..r.size() {
                    assert_eq!(
                        r.trace_idx(r.add_idx(x, y)),
                        (r.trace_idx(x) + r.trace_idx(y)) % 4
                    );
                }
                for c in 0..4u32 {
                    assert_eq!(
                        r.trace_idx(r.mul_idx(x, c)) as u32,
                        (r.trace_idx(x) as u32 * c) % 4
                    );
                }
            }
        }
    }

    #[test]
    fn units_have_nonzero_teichmuller_part() {
        for n in 1..=4 {
            let r = ring(n);
            for x in 0..r.size() {
                let invertible = (0..r.size()).any(|y| r.mul_idx(x, y) == 1);
                assert_eq!(invertible, r.from_index(x).is_unit(), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let r1 = ring(1);
        assert_eq!(r1.zero().gamma_sum(), CyclotomicInt::from_integer(4, 2));
        assert!(r1.element(&[2]).unwrap().gamma_sum().is_zero());
        let g1 = r1.one().gamma_sum();
        assert_eq!(g1.coeffs(), &[1, 1]);
        assert_eq!(g1.norm_squared().unwrap().as_rational_integer(), Some(2));
        let r3 = ring(3);
        assert_eq!(r3.zero().gamma_sum().as_rational_integer(), Some(8));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = ring(2);
        let b = ring(3);
        assert_eq!(a.one().add(&b.one()).unwrap_err(), Error::SpecMismatch);
    }
}
