//! Families of mutually unbiased bases built from finite fields and Galois
//! rings, plus the tensor-product combination across coprime dimensions.
//!
//! Every non-standard basis is flat: vector `u` has entries
//! `w_m^{e[u][x]} / sqrt(d)`, so a basis is stored as its integer exponent
//! matrix and the normalization stays implicit.

mod json;

use num_integer::Integer;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::finite_field::{prime_power, FieldSpec};
use crate::galois_ring::RingSpec;

pub use json::{export_family, import_family};

/// A basis of `C^d`: either the standard basis or a flat basis given by a
/// `d x d` exponent matrix over `Z_m` (row = vector, column = coordinate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentBasis {
    dimension: usize,
    root_order: u64,
    standard: bool,
    label: String,
    exponents: Vec<u32>,
}

impl ExponentBasis {
    pub fn standard(dimension: usize) -> Self {
        ExponentBasis {
            dimension,
            root_order: 1,
            standard: true,
            label: "standard".into(),
            exponents: Vec::new(),
        }
    }

    /// A flat basis from row-major exponents. Entries must lie in `[0, m)`.
    pub fn flat(
        dimension: usize,
        root_order: u64,
        label: impl Into<String>,
        exponents: Vec<u32>,
    ) -> Result<Self> {
        if root_order == 0 {
            return Err(Error::SchemaViolation("root order must be positive".into()));
        }
        if exponents.len() != dimension * dimension {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for a {dimension}x{dimension} basis",
                exponents.len()
            )));
        }
        if let Some(&e) = exponents.iter().find(|&&e| e as u64 >= root_order) {
            return Err(Error::ExponentOutOfRange {
                value: e as i64,
                root_order,
            });
        }
        Ok(ExponentBasis {
            dimension,
            root_order,
            standard: false,
            label: label.into(),
            exponents,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn root_order(&self) -> u64 {
        self.root_order
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Exponents of vector `u`. Empty for the standard basis.
    pub fn row(&self, u: usize) -> &[u32] {
        if self.standard {
            return &[];
        }
        &self.exponents[u * self.dimension..(u + 1) * self.dimension]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.exponents.chunks(self.dimension.max(1))
    }

    /// Re-express exponents over `Z_n` for a multiple `n` of the root order.
    pub fn embed(&self, n: u64) -> Result<Self> {
        if self.standard || n == self.root_order {
            return Ok(self.clone());
        }
        if !n.is_multiple_of(self.root_order) {
            return Err(Error::MixedRootOrders(self.root_order, n));
        }
        let scale = (n / self.root_order) as u32;
        Ok(ExponentBasis {
            root_order: n,
            exponents: self.exponents.iter().map(|&e| e * scale).collect(),
            ..self.clone()
        })
    }
}

/// An ordered family of bases of `C^d` with provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    dimension: usize,
    root_order: u64,
    construction: String,
    parameters: Map<String, Value>,
    bases: Vec<ExponentBasis>,
}

impl MubFamily {
    /// Checks the family invariants: shared dimension and root order, at
    /// most one standard basis, at most `d + 1` bases.
    pub fn new(
        dimension: usize,
        root_order: u64,
        construction: impl Into<String>,
        parameters: Map<String, Value>,
        bases: Vec<ExponentBasis>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::SchemaViolation("dimension must be positive".into()));
        }
        if root_order == 0 {
            return Err(Error::SchemaViolation("root order must be positive".into()));
        }
        for b in &bases {
            if b.dimension != dimension {
                return Err(Error::DimensionMismatch(format!(
                    "basis '{}' has dimension {}, family has {dimension}",
                    b.label, b.dimension
                )));
            }
            if !b.standard && b.root_order != root_order {
                return Err(Error::MixedRootOrders(b.root_order, root_order));
            }
        }
        if bases.iter().filter(|b| b.standard).count() > 1 {
            return Err(Error::SchemaViolation(
                "more than one standard basis".into(),
            ));
        }
        if bases.len() > dimension + 1 {
            return Err(Error::SchemaViolation(format!(
                "{} bases exceed the bound d+1 = {}",
                bases.len(),
                dimension + 1
            )));
        }
        let bases = bases
            .into_iter()
            .map(|b| {
                if b.standard {
                    ExponentBasis { root_order, ..b }
                } else {
                    b
                }
            })
            .collect();
        Ok(MubFamily {
            dimension,
            root_order,
            construction: construction.into(),
            parameters,
            bases,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn root_order(&self) -> u64 {
        self.root_order
    }

    pub fn construction(&self) -> &str {
        &self.construction
    }

    pub fn parameters(&self) -> &Map<String, Value> {
        &self.parameters
    }

    pub fn bases(&self) -> &[ExponentBasis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn standard_index(&self) -> Option<usize> {
        self.bases.iter().position(|b| b.standard)
    }

    /// The family without basis `i`, same metadata otherwise.
    pub fn without_basis(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.bases.remove(i);
        out
    }
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn field_params(spec: &FieldSpec) -> Map<String, Value> {
    params(&[
        ("p", json!(spec.characteristic())),
        ("n", json!(spec.degree())),
        ("modulus", json!(spec.modulus())),
    ])
}

pub fn standard_basis(d: usize) -> ExponentBasis {
    ExponentBasis::standard(d)
}

/// The standard basis together with `B_a = { v_{a,b} }`, where `v_{a,b}` has
/// exponent `tr(a x^2 + b x)` at coordinate `x`. Requires odd `p`.
pub fn wootters_fields(spec: &FieldSpec) -> Result<MubFamily> {
    let p = spec.characteristic();
    if p == 2 {
        return Err(Error::EvenCharacteristic(p));
    }
    let q = spec.order() as usize;
    let squares: Vec<u32> = (0..q as u32).map(|x| spec.mul_idx(x, x)).collect();
    let linear = linear_trace_table(spec);
    let mut bases = vec![standard_basis(q)];
    for a in 0..q as u32 {
        let quad: Vec<u32> = squares
            .iter()
            .map(|&s| spec.trace_idx(spec.mul_idx(a, s)))
            .collect();
        let mut exps = Vec::with_capacity(q * q);
        for b in 0..q {
            for x in 0..q {
                exps.push((quad[x] + linear[b * q + x]) % p);
            }
        }
        let label = format!("a={}", spec.from_index(a));
        bases.push(ExponentBasis::flat(q, p as u64, label, exps)?);
    }
    MubFamily::new(q, p as u64, "wootters-fields", field_params(spec), bases)
}

/// `tr(b x)` for all `b, x`, row-major in `b`.
fn linear_trace_table(spec: &FieldSpec) -> Vec<u32> {
    let q = spec.order();
    (0..q)
        .flat_map(|b| (0..q).map(move |x| (b, x)))
        .map(|(b, x)| spec.trace_idx(spec.mul_idx(b, x)))
        .collect()
}

/// The standard basis together with `B_alpha = { b_{lambda,alpha} }`, where
/// `b_{lambda,alpha}` has exponent `tr((k+alpha)^3 + lambda (k+alpha))` at
/// coordinate `k`. Requires `p >= 5`; in characteristic 2 and 3 the cubic
/// terms do not cancel into a quadratic and the bases are not unbiased.
pub fn alltop(spec: &FieldSpec) -> Result<MubFamily> {
    let p = spec.characteristic();
    if p < 5 {
        return Err(Error::CharacteristicTooSmall(p));
    }
    alltop_unguarded(spec)
}

/// Alltop exponents without the characteristic guard.
#[doc(hidden)]
pub fn alltop_unguarded(spec: &FieldSpec) -> Result<MubFamily> {
    let p = spec.characteristic();
    let q = spec.order() as usize;
    let cubes: Vec<u32> = (0..q as u32)
        .map(|y| spec.trace_idx(spec.pow_idx(y, 3)))
        .collect();
    let linear = linear_trace_table(spec);
    let mut bases = vec![standard_basis(q)];
    for alpha in 0..q as u32 {
        let shifted: Vec<usize> = (0..q as u32)
            .map(|k| spec.add_idx(k, alpha) as usize)
            .collect();
        let mut exps = Vec::with_capacity(q * q);
        for lambda in 0..q {
            for &y in &shifted {
                exps.push((cubes[y] + linear[lambda * q + y]) % p);
            }
        }
        let label = format!("alpha={}", spec.from_index(alpha));
        bases.push(ExponentBasis::flat(q, p as u64, label, exps)?);
    }
    MubFamily::new(q, p as u64, "alltop", field_params(spec), bases)
}

/// The standard basis together with `M_a = { v_{a,b} : b in T }` for each
/// Teichmuller `a`, where `v_{a,b}` has exponent `tr((a + 2b) x)` over `Z_4`
/// at coordinate `x in T`.
pub fn galois_ring_mubs(spec: &RingSpec) -> Result<MubFamily> {
    let t = spec.teichmuller_indices();
    let d = t.len();
    let mut bases = vec![standard_basis(d)];
    for &a in t {
        let mut exps = Vec::with_capacity(d * d);
        for &b in t {
            let r = spec.add_idx(a, spec.add_idx(b, b));
            exps.extend(t.iter().map(|&x| spec.trace_idx(spec.mul_idx(r, x)) as u32));
        }
        let label = format!("a={}", spec.from_index(a));
        bases.push(ExponentBasis::flat(d, 4, label, exps)?);
    }
    let parameters = params(&[
        ("n", json!(spec.degree())),
        ("modulus", json!(spec.modulus())),
    ]);
    MubFamily::new(d, 4, "galois-ring", parameters, bases)
}

/// Best known extremal family in prime-power dimension `q`: the
/// Galois-ring family for powers of two, the Wootters-Fields family
/// otherwise (default moduli).
pub fn prime_power_family(q: u64) -> Result<MubFamily> {
    let (p, n) = prime_power(q)
        .ok_or_else(|| Error::DimensionMismatch(format!("{q} is not a prime power")))?;
    if p == 2 {
        galois_ring_mubs(&RingSpec::new(n, None)?)
    } else {
        wootters_fields(&FieldSpec::new(p as u32, n, None)?)
    }
}

fn tensor_pair(a: &ExponentBasis, b: &ExponentBasis, order: u64) -> Result<ExponentBasis> {
    let label = format!("{} (x) {}", a.label, b.label);
    let d = a.dimension * b.dimension;
    match (a.standard, b.standard) {
        (true, true) => Ok(ExponentBasis::standard(d).with_label(label)),
        (false, false) => {
            let (ea, eb) = (a.embed(order)?, b.embed(order)?);
            let (da, db) = (a.dimension, b.dimension);
            let mut exps = vec![0u32; d * d];
            for ua in 0..da {
                for ub in 0..db {
                    let row = (ua * db + ub) * d;
                    for xa in 0..da {
                        let e1 = ea.exponents[ua * da + xa] as u64;
                        for xb in 0..db {
                            let e2 = eb.exponents[ub * db + xb] as u64;
                            exps[row + xa * db + xb] = ((e1 + e2) % order) as u32;
                        }
                    }
                }
            }
            ExponentBasis::flat(d, order, label, exps)
        }
        _ => Err(Error::UnrepresentableTensor(0)),
    }
}

/// Tensor the `k`-th bases of all families for `k < min |family|`, after
/// moving each family's standard basis (if any) to index 0. Vector and
/// coordinate indices are mixed-radix with the first family most
/// significant; exponents are embedded into the lcm of the root orders.
pub fn macneish_tensor(families: &[MubFamily]) -> Result<MubFamily> {
    let (first, rest) = families.split_first().ok_or(Error::EmptyInput)?;
    if rest.is_empty() {
        return Ok(first.clone());
    }
    let count = families.iter().map(MubFamily::len).min().unwrap_or(0);
    let aligned: Vec<Vec<&ExponentBasis>> = families
        .iter()
        .map(|f| {
            let mut v: Vec<&ExponentBasis> = f.bases.iter().collect();
            if let Some(s) = f.standard_index() {
                let std = v.remove(s);
                v.insert(0, std);
            }
            v
        })
        .collect();
    let order = families.iter().fold(1u64, |acc, f| acc.lcm(&f.root_order));
    let dimension: usize = families.iter().map(|f| f.dimension).product();
    let mut bases = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = aligned[0][k].clone();
        for f in &aligned[1..] {
            acc = tensor_pair(&acc, f[k], order).map_err(|e| match e {
                Error::UnrepresentableTensor(_) => Error::UnrepresentableTensor(k),
                other => other,
            })?;
        }
        bases.push(acc);
    }
    let parameters = params(&[
        (
            "factors",
            Value::Array(families.iter().map(|f| json!(f.dimension)).collect()),
        ),
        (
            "inputs",
            Value::Array(families.iter().map(|f| json!(f.construction)).collect()),
        ),
    ]);
    MubFamily::new(dimension, order, "macneish", parameters, bases)
}
