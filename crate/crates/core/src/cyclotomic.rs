//! Exact arithmetic in `Z[w_m]`, the integer combinations of `m`-th roots
//! of unity.
//!
//! Values are kept reduced modulo the cyclotomic polynomial `Phi_m`, so the
//! coefficient vector (length `phi(m)`) is canonical and equality of values
//! is equality of representations. Coefficients are `i128` with checked
//! arithmetic; overflow surfaces as [`Error::Overflow`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest order for which `Phi_m` is computed.
pub const MAX_ORDER: u64 = 1 << 16;

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Exact quotient of `num` by the monic polynomial `den`.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for k in (0..q.len()).rev() {
        let c = r[k + dn];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[k + i] -= c * d;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "division was not exact");
    q
}

fn phi(m: u64) -> Arc<Vec<i64>> {
    assert!(
        (1..=MAX_ORDER).contains(&m),
        "cyclotomic order {m} out of range"
    );
    if let Some(p) = phi_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    // Largest divisors first keeps the running dividend short.
    let mut divisors: Vec<u64> = (1..m).filter(|d| m.is_multiple_of(*d)).collect();
    divisors.reverse();
    for d in divisors {
        num = exact_div(&num, &phi(d));
    }
    let out = Arc::new(num);
    phi_cache().lock().unwrap().insert(m, out.clone());
    out
}

/// Coefficients of `Phi_m`, low to high. Panics if `m` is 0 or above
/// [`MAX_ORDER`].
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    phi(m).as_ref().clone()
}

/// Reduction modulo a fixed `Phi_m`, for loops that reuse scratch buffers.
#[derive(Clone, Debug)]
pub struct CyclotomicRing {
    order: u64,
    phi: Arc<Vec<i64>>,
}

impl CyclotomicRing {
    pub fn new(m: u64) -> Self {
        CyclotomicRing {
            order: m,
            phi: phi(m),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `phi(m)`, the length of a canonical coefficient vector.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Reduce `raw` (entry `k` multiplies `w^k`) modulo `Phi_m` in place.
    /// Afterwards `raw[..degree]` is canonical and the tail is zero.
    pub fn reduce_in_place(&self, raw: &mut [i128]) -> Result<()> {
        let deg = self.degree();
        for top in (deg..raw.len()).rev() {
            let c = raw[top];
            if c == 0 {
                continue;
            }
            raw[top] = 0;
            for (i, &pi) in self.phi[..deg].iter().enumerate() {
                if pi != 0 {
                    let k = top - deg + i;
                    let t = c.checked_mul(pi as i128).ok_or(Error::Overflow)?;
                    raw[k] = raw[k].checked_sub(t).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(())
    }

    pub fn element(&self, mut raw: Vec<i128>) -> Result<CyclotomicInt> {
        self.reduce_in_place(&mut raw)?;
        raw.resize(self.degree(), 0);
        Ok(CyclotomicInt {
            order: self.order,
            coeffs: raw,
        })
    }
}

fn reduce(m: u64, mut raw: Vec<i128>) -> Result<Vec<i128>> {
    let ring = CyclotomicRing::new(m);
    ring.reduce_in_place(&mut raw)?;
    raw.resize(ring.degree(), 0);
    Ok(raw)
}

/// An element of `Z[w_m]` in canonical form.
#[derive(Clone)]
pub struct CyclotomicInt {
    order: u64,
    coeffs: Vec<i128>,
}

/// `w_m^k` for any integer `k`.
pub fn root_of_unity(m: u64, k: i64) -> CyclotomicInt {
    CyclotomicInt::root_of_unity(m, k)
}

impl CyclotomicInt {
    pub fn zero(m: u64) -> Self {
        Self::from_integer(m, 0)
    }

    pub fn from_integer(m: u64, v: i128) -> Self {
        let deg = phi(m).len() - 1;
        let mut coeffs = vec![0; deg];
        coeffs[0] = v;
        CyclotomicInt { order: m, coeffs }
    }

    pub fn root_of_unity(m: u64, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut raw = vec![0i128; e + 1];
        raw[e] = 1;
        let coeffs = reduce(m, raw).expect("single root cannot overflow");
        CyclotomicInt { order: m, coeffs }
    }

    /// `sum_k counts[k] w^k` for a raw vector of any length; exponents wrap
    /// modulo `m`.
    pub fn from_exponent_counts(m: u64, counts: &[i64]) -> Result<Self> {
        let mut raw = vec![0i128; m as usize];
        for (k, &c) in counts.iter().enumerate() {
            let slot = &mut raw[k % m as usize];
            *slot = slot.checked_add(c as i128).ok_or(Error::Overflow)?;
        }
        Ok(CyclotomicInt {
            order: m,
            coeffs: reduce(m, raw)?,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical coefficients of `1, w, ..., w^{phi(m)-1}`.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Re-express in `Z[w_n]` where `m` divides `n`.
    pub fn embed(&self, n: u64) -> Result<Self> {
        if n == self.order {
            return Ok(self.clone());
        }
        if !n.is_multiple_of(self.order) {
            return Err(Error::MixedRootOrders(self.order, n));
        }
        let scale = (n / self.order) as usize;
        let mut raw = vec![0i128; (self.coeffs.len().max(1) - 1) * scale + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            raw[k * scale] = c;
        }
        Ok(CyclotomicInt {
            order: n,
            coeffs: reduce(n, raw)?,
        })
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        if self.order == other.order {
            return Ok((self.clone(), other.clone()));
        }
        let l = self.order.lcm(&other.order);
        Ok((self.embed(l)?, other.embed(l)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(CyclotomicInt {
            order: a.order,
            coeffs,
        })
    }

    pub fn neg(&self) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| x.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(CyclotomicInt {
            order: self.order,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let mut raw = vec![0i128; 2 * a.coeffs.len()];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                let t = x.checked_mul(y).ok_or(Error::Overflow)?;
                raw[i + j] = raw[i + j].checked_add(t).ok_or(Error::Overflow)?;
            }
        }
        Ok(CyclotomicInt {
            order: a.order,
            coeffs: reduce(a.order, raw)?,
        })
    }

    /// Complex conjugation, `w^k -> w^{-k}`.
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut raw = vec![0i128; m];
        for (k, &c) in self.coeffs.iter().enumerate() {
            raw[(m - k) % m] = c;
        }
        CyclotomicInt {
            order: self.order,
            coeffs: reduce(self.order, raw).expect("conjugation preserves magnitudes"),
        }
    }

    /// `z * conj(z)`.
    pub fn norm_squared(&self) -> Result<Self> {
        self.mul(&self.conj())
    }

    /// The rational integer this value equals, if it is one.
    pub fn as_rational_integer(&self) -> Option<i128> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coeffs[0])
    }

    pub fn approximate(&self) -> Complex64 {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * k as f64 / m))
            .sum()
    }
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        match self.common(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for CyclotomicInt {}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                _ => format!("{c}*w{}^{k}", self.order),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn totient(m: u64) -> usize {
        (1..=m).filter(|k| k.gcd(&m) == 1).count()
    }

    /// `Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}`, independent of the
    /// division route used by the module.
    fn phi_by_mobius(m: u64) -> Vec<i64> {
        fn mobius(n: u64) -> i64 {
            let f = crate::finite_field::factorize(n);
            if f.iter().any(|&(_, e)| e > 1) {
                0
            } else if f.len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        let mut num = vec![1i64];
        let mut dens = Vec::new();
        for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
            match mobius(m / d) {
                1 => {
                    let mut next = vec![0i64; num.len() + d as usize];
                    for (i, &c) in num.iter().enumerate() {
                        next[i + d as usize] += c;
                        next[i] -= c;
                    }
                    num = next;
                }
                -1 => dens.push(d),
                _ => {}
            }
        }
        for d in dens {
            let mut den = vec![0i64; d as usize + 1];
            den[0] = -1;
            den[d as usize] = 1;
            num = exact_div(&num, &den);
        }
        num
    }

    #[test]
    fn known_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(7), vec![1; 7]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for m in [30u64, 105, 210, 360, 1001] {
            assert_eq!(cyclotomic_polynomial(m), phi_by_mobius(m), "m={m}");
        }
    }

    #[test]
    fn phi_degree_is_totient() {
        for m in 1..=1000u64 {
            assert_eq!(cyclotomic_polynomial(m).len() - 1, totient(m), "m={m}");
        }
    }

    #[test]
    fn roots_and_products() {
        let i = root_of_unity(4, 1);
        assert!((i.approximate() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(i.mul(&i).unwrap(), CyclotomicInt::from_integer(4, -1));
        assert_eq!(root_of_unity(5, 0), CyclotomicInt::from_integer(5, 1));
        let w3sq = root_of_unity(3, 2);
        assert_eq!(w3sq.coeffs(), &[-1, -1]);
        assert_eq!(root_of_unity(3, 1).conj(), w3sq);
        assert_eq!(root_of_unity(3, -1), w3sq);
        let w3 = root_of_unity(3, 1).approximate();
        assert!((w3 - Complex64::new(-0.5, 0.75f64.sqrt())).norm() < 1e-12);
        for p in [2u64, 3, 5, 7, 11] {
            let s = CyclotomicInt::from_exponent_counts(p, &vec![1; p as usize]).unwrap();
            assert!(s.is_zero(), "p={p}");
        }
    }

    #[test]
    fn norms() {
        let z = CyclotomicInt::from_integer(4, 1)
            .add(&root_of_unity(4, 1))
            .unwrap();
        assert_eq!(z.norm_squared().unwrap().as_rational_integer(), Some(2));
        assert_eq!(
            CyclotomicInt::zero(9)
                .norm_squared()
                .unwrap()
                .as_rational_integer(),
            Some(0)
        );
        // Quadratic Gauss sum over F_5.
        let mut counts = vec![0i64; 5];
        for x in 0..5 {
            counts[(x * x) % 5] += 1;
        }
        let g = CyclotomicInt::from_exponent_counts(5, &counts).unwrap();
        assert_eq!(g.as_rational_integer(), None);
        assert_eq!(g.norm_squared().unwrap().as_rational_integer(), Some(5));
        // Weil sum over F_7 with p(x) = x^2 + x.
        let mut counts = vec![0i64; 7];
        for x in 0..7 {
            counts[(x * x + x) % 7] += 1;
        }
        let s = CyclotomicInt::from_exponent_counts(7, &counts).unwrap();
        assert_eq!(s.norm_squared().unwrap().as_rational_integer(), Some(7));
        assert_eq!(root_of_unity(3, 1).as_rational_integer(), None);
    }

    #[test]
    fn mixed_orders_embed_into_lcm() {
        let i = root_of_unity(4, 1);
        let w3 = root_of_unity(3, 1);
        let prod = i.mul(&w3).unwrap();
        assert_eq!(prod.order(), 12);
        assert_eq!(prod, root_of_unity(12, 3 + 4));
        assert_eq!(
            CyclotomicInt::from_integer(3, 1),
            CyclotomicInt::from_integer(4, 1)
        );
        assert!(matches!(w3.embed(4), Err(Error::MixedRootOrders(3, 4))));
    }

    #[test]
    fn overflow_is_signaled() {
        let big = CyclotomicInt::from_integer(4, i128::MAX / 2);
        assert_eq!(big.mul(&big).unwrap_err(), Error::Overflow);
        assert_eq!(
            big.add(&big).unwrap().add(&big).unwrap_err(),
            Error::Overflow
        );
    }

    fn arb(m: u64) -> impl Strategy<Value = CyclotomicInt> {
        prop::collection::vec(-100i64..=100, m as usize)
            .prop_map(move |c| CyclotomicInt::from_exponent_counts(m, &c).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (CyclotomicInt, CyclotomicInt)> {
        (1u64..=60).prop_flat_map(|m| (arb(m), arb(m)))
    }

    proptest! {
        #[test]
        fn canonical_equality_matches_value((z, w) in arb_pair()) {
            let close = (z.approximate() - w.approximate()).norm() < 1e-9;
            prop_assert_eq!(close, z == w);
            let z2 = CyclotomicInt::from_exponent_counts(z.order(), &z.coeffs().iter().map(|&c| c as i64).collect::<Vec<_>>()).unwrap();
            prop_assert!((z2.approximate() - z.approximate()).norm() < 1e-9);
            prop_assert_eq!(z2, z);
        }

        #[test]
        fn multiplication_is_homomorphic((z, w) in arb_pair()) {
            let exact = z.mul(&w).unwrap().approximate();
            let float = z.approximate() * w.approximate();
            prop_assert!((exact - float).norm() < 1e-9 * (1.0 + float.norm()));
            let sum = z.add(&w).unwrap().approximate();
            prop_assert!((sum - z.approximate() - w.approximate()).norm() < 1e-9);
        }

        #[test]
        fn norm_squared_is_real((z, _w) in arb_pair()) {
            let n = z.norm_squared().unwrap();
            prop_assert_eq!(n.conj(), n.clone());
            let a = n.approximate();
            prop_assert!(a.im.abs() < 1e-9 * (1.0 + a.re.abs()));
            prop_assert!((a.re - z.approximate().norm_sqr()).abs() < 1e-9 * (1.0 + a.re));
        }
    }
}
