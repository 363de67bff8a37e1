//! Certification of families and the finite exponential-sum oracles.
//!
//! Exact mode evaluates every inner product `S = sum_x w^{e'(x) - e(x)}` in
//! `Z[w_m]` and demands `S = 0` (distinct vectors of one basis), `S = d`
//! (a vector with itself), or `S * conj(S) = d` (vectors of different
//! bases). Float mode compares `|<b, b'>|^2` against `0`, `1` and `1/d`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{ExponentBasis, MubFamily};
use crate::cyclotomic::{CyclotomicInt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::galois_ring::RingSpec;

/// Default tolerance for float verification.
pub const DEFAULT_FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    SameBasisOrthonormal,
    Unbiased,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Evidence {
    /// First offending vector pair with the exact inner product `S` and
    /// `|S|^2`, both as canonical coefficient vectors over `Z[w_m]`.
    Exact {
        vector_i: usize,
        vector_j: usize,
        inner_product: Vec<i128>,
        norm_squared: Vec<i128>,
    },
    /// Flat basis against the standard basis: every entry has `|.|^2 = 1/d`.
    Structural,
    Float {
        max_deviation: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub kind: VerdictKind,
    pub evidence: Option<Evidence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    CertifiedExtremal,
    CertifiedMubFamily,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::CertifiedExtremal => "certified-extremal",
            Status::CertifiedMubFamily => "certified-mub-family",
            Status::Failed => "failed",
        }
    }

    pub fn is_certified(self) -> bool {
        self != Status::Failed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Float { tolerance: f64 },
}

/// Outcome of verifying a family. Verdicts cover `i <= j`, sorted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub dimension: usize,
    pub family_size: usize,
    pub construction: String,
    pub mode: Mode,
    pub status: Status,
    pub violations: usize,
    pub verdicts: Vec<PairVerdict>,
}

impl VerificationReport {
    fn assemble(
        dimension: usize,
        family_size: usize,
        construction: &str,
        mode: Mode,
        verdicts: Vec<PairVerdict>,
    ) -> Self {
        let violations = verdicts
            .iter()
            .filter(|v| v.kind == VerdictKind::Violation)
            .count();
        let status = if violations > 0 {
            Status::Failed
        } else if family_size == dimension + 1 {
            Status::CertifiedExtremal
        } else {
            Status::CertifiedMubFamily
        };
        VerificationReport {
            dimension,
            family_size,
            construction: construction.to_string(),
            mode,
            status,
            violations,
            verdicts,
        }
    }

    /// Verdict for an unordered pair.
    pub fn verdict(&self, i: usize, j: usize) -> Option<&PairVerdict> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.verdicts.iter().find(|v| v.i == i && v.j == j)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string(&value).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect()
}

/// Scratch state for exact inner products over one root order.
struct ExactChecker {
    ring: CyclotomicRing,
    m: usize,
    d: i128,
    counts: Vec<i128>,
    norm: Vec<i128>,
}

impl ExactChecker {
    fn new(m: u64, d: usize) -> Self {
        ExactChecker {
            ring: CyclotomicRing::new(m),
            m: m as usize,
            d: d as i128,
            counts: vec![0; m as usize],
            norm: vec![0; m as usize],
        }
    }

    /// Fill `counts` with the raw form of `S = sum_x w^{f(x) - e(x)}`.
    fn inner(&mut self, e: &[u32], f: &[u32]) {
        self.counts.iter_mut().for_each(|c| *c = 0);
        let m = self.m as u32;
        for (&a, &b) in e.iter().zip(f) {
            let k = b + m - a;
            let k = if k >= m { k - m } else { k };
            self.counts[k as usize] += 1;
        }
    }

    /// `S` reduced, written into `norm` as scratch; true if it equals `target`.
    fn inner_equals(&mut self, target: i128) -> Result<bool> {
        self.norm.copy_from_slice(&self.counts);
        self.ring.reduce_in_place(&mut self.norm)?;
        Ok(self.norm[0] == target && self.norm[1..].iter().all(|&c| c == 0))
    }

    /// `|S|^2` from the raw counts (autocorrelation), reduced; true if it
    /// equals `d`.
    fn norm_is_d(&mut self) -> Result<bool> {
        let m = self.m;
        for j in 0..m {
            let mut acc = 0i128;
            for k in 0..m {
                let ck = self.counts[k];
                if ck != 0 {
                    acc += ck * self.counts[(k + j) % m];
                }
            }
            self.norm[j] = acc;
        }
        self.ring.reduce_in_place(&mut self.norm)?;
        Ok(self.norm[0] == self.d && self.norm[1..].iter().all(|&c| c == 0))
    }

    fn evidence(&self, u: usize, v: usize) -> Result<Evidence> {
        let s = self.ring.element(self.counts.clone())?;
        Ok(Evidence::Exact {
            vector_i: u,
            vector_j: v,
            inner_product: s.coeffs().to_vec(),
            norm_squared: s.norm_squared()?.coeffs().to_vec(),
        })
    }
}

fn exact_pair(
    a: &ExponentBasis,
    b: &ExponentBasis,
    i: usize,
    j: usize,
    m: u64,
) -> Result<PairVerdict> {
    let d = a.dimension();
    let verdict = |kind, evidence| PairVerdict {
        i,
        j,
        kind,
        evidence,
    };
    if a.is_standard() || b.is_standard() {
        return Ok(if i == j {
            verdict(VerdictKind::SameBasisOrthonormal, None)
        } else {
            verdict(VerdictKind::Unbiased, Some(Evidence::Structural))
        });
    }
    let mut chk = ExactChecker::new(m, d);
    if i == j {
        for u in 0..d {
            for v in u..d {
                chk.inner(a.row(u), a.row(v));
                let target = if u == v { d as i128 } else { 0 };
                if !chk.inner_equals(target)? {
                    return Ok(verdict(VerdictKind::Violation, Some(chk.evidence(u, v)?)));
                }
            }
        }
        Ok(verdict(VerdictKind::SameBasisOrthonormal, None))
    } else {
        for u in 0..d {
            for v in 0..d {
                chk.inner(a.row(u), b.row(v));
                if !chk.norm_is_d()? {
                    return Ok(verdict(VerdictKind::Violation, Some(chk.evidence(u, v)?)));
                }
            }
        }
        Ok(verdict(VerdictKind::Unbiased, None))
    }
}

/// Exact certification in `Z[w_m]`.
pub fn verify_exact(f: &MubFamily) -> Result<VerificationReport> {
    let m = f.root_order();
    if let Some(b) = f
        .bases()
        .iter()
        .find(|b| !b.is_standard() && b.root_order() != m)
    {
        return Err(Error::MixedRootOrders(b.root_order(), m));
    }
    let bases = f.bases();
    let verdicts = pairs(bases.len())
        .into_par_iter()
        .map(|(i, j)| exact_pair(&bases[i], &bases[j], i, j, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::assemble(
        f.dimension(),
        f.len(),
        f.construction(),
        Mode::Exact,
        verdicts,
    ))
}

/// Columns are the basis vectors, normalized.
pub fn basis_matrix(b: &ExponentBasis) -> DMatrix<Complex64> {
    let d = b.dimension();
    if b.is_standard() {
        return DMatrix::identity(d, d);
    }
    let m = b.root_order() as f64;
    let scale = 1.0 / (d as f64).sqrt();
    DMatrix::from_fn(d, d, |x, u| {
        Complex64::from_polar(scale, std::f64::consts::TAU * b.row(u)[x] as f64 / m)
    })
}

/// Float verification of arbitrary bases given as `d x d` matrices whose
/// columns are the basis vectors.
pub fn verify_float_matrices(
    matrices: &[DMatrix<Complex64>],
    construction: &str,
    tol: f64,
) -> Result<VerificationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let d = matrices.first().map_or(0, |m| m.nrows());
    if let Some(bad) = matrices.iter().find(|m| m.nrows() != d || m.ncols() != d) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} basis in a family of dimension {d}",
            bad.nrows(),
            bad.ncols()
        )));
    }
    let inv_d = 1.0 / d.max(1) as f64;
    let verdicts = pairs(matrices.len())
        .into_par_iter()
        .map(|(i, j)| {
            let g = matrices[i].adjoint() * &matrices[j];
            let mut dev = 0.0f64;
            for u in 0..d {
                for v in 0..d {
                    let expected = if i == j {
                        if u == v {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        inv_d
                    };
                    dev = dev.max((g[(u, v)].norm_sqr() - expected).abs());
                }
            }
            let kind = if dev > tol {
                VerdictKind::Violation
            } else if i == j {
                VerdictKind::SameBasisOrthonormal
            } else {
                VerdictKind::Unbiased
            };
            PairVerdict {
                i,
                j,
                kind,
                evidence: Some(Evidence::Float { max_deviation: dev }),
            }
        })
        .collect();
    Ok(VerificationReport::assemble(
        d,
        matrices.len(),
        construction,
        Mode::Float { tolerance: tol },
        verdicts,
    ))
}

/// Float verification of an exponent family.
pub fn verify_float(f: &MubFamily, tol: f64) -> Result<VerificationReport> {
    let mats: Vec<_> = f.bases().iter().map(basis_matrix).collect();
    let mut report = verify_float_matrices(&mats, f.construction(), tol)?;
    report.dimension = f.dimension();
    Ok(report)
}

/// True iff the family is exactly certified and has `d + 1` bases.
pub fn extremality_check(f: &MubFamily) -> bool {
    f.len() == f.dimension() + 1
        && verify_exact(f).is_ok_and(|r| r.status == Status::CertifiedExtremal)
}

fn check_odd(spec: &FieldSpec) -> Result<()> {
    match spec.characteristic() {
        2 => Err(Error::EvenCharacteristic(2)),
        _ => Ok(()),
    }
}

/// `|sum_x w_p^{tr(a2 x^2 + a1 x + a0)}|^2` computed exactly; coefficients
/// are canonical element indices.
pub fn weil_sum_oracle(spec: &FieldSpec, a2: u32, a1: u32, a0: u32) -> Result<i128> {
    check_odd(spec)?;
    if a2 == 0 {
        return Err(Error::DegenerateQuadratic);
    }
    let p = spec.characteristic();
    let mut counts = vec![0i64; p as usize];
    for x in 0..spec.order() {
        let v = spec.add_idx(
            spec.mul_idx(a2, spec.mul_idx(x, x)),
            spec.add_idx(spec.mul_idx(a1, x), a0),
        );
        counts[spec.trace_idx(v) as usize] += 1;
    }
    let s = CyclotomicInt::from_exponent_counts(p as u64, &counts)?;
    s.norm_squared()?
        .as_rational_integer()
        .ok_or_else(|| Error::InvalidConfig("|S|^2 is not a rational integer".into()))
}

/// Result of checking every admissible quadratic over a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeilSummary {
    pub q: u32,
    pub checked: u64,
    pub all_equal_q: bool,
    /// `(a2, a1, a0, |S|^2)` for quadratics with `|S|^2 != q`, capped at 16.
    pub failures: Vec<(u32, u32, u32, i128)>,
}

/// Largest field swept exhaustively by [`weil_sweep`].
pub const MAX_WEIL_SWEEP_ORDER: u32 = 1024;

/// Evaluate the Weil sum of every quadratic with `a2 != 0` exactly.
pub fn weil_sweep(spec: &FieldSpec) -> Result<WeilSummary> {
    check_odd(spec)?;
    let q = spec.order();
    if q > MAX_WEIL_SWEEP_ORDER {
        return Err(Error::InvalidConfig(format!(
            "sweep limited to q <= {MAX_WEIL_SWEEP_ORDER}"
        )));
    }
    let p = spec.characteristic();
    let qs = q as usize;
    let linear: Vec<u32> = (0..q)
        .flat_map(|a| (0..q).map(move |x| (a, x)))
        .map(|(a, x)| spec.trace_idx(spec.mul_idx(a, x)))
        .collect();
    let squares: Vec<u32> = (0..q).map(|x| spec.mul_idx(x, x)).collect();
    let constant: Vec<u32> = (0..q).map(|a| spec.trace_idx(a)).collect();
    let mut chk = ExactChecker::new(p as u64, qs);
    let mut summary = WeilSummary {
        q,
        checked: 0,
        all_equal_q: true,
        failures: Vec::new(),
    };
    let mut exps = vec![0u32; qs];
    let zeros = vec![0u32; qs];
    for a2 in 1..q {
        let quad: Vec<u32> = squares
            .iter()
            .map(|&s| linear[a2 as usize * qs + s as usize])
            .collect();
        for a1 in 0..q {
            let lin = &linear[a1 as usize * qs..(a1 as usize + 1) * qs];
            for a0 in 0..q {
                let c = constant[a0 as usize];
                for x in 0..qs {
                    exps[x] = (quad[x] + lin[x] + c) % p;
                }
                chk.inner(&zeros, &exps);
                summary.checked += 1;
                if !chk.norm_is_d()? {
                    summary.all_equal_q = false;
                    if summary.failures.len() < 16 {
                        summary.failures.push((a2, a1, a0, chk.norm[0]));
                    }
                }
            }
        }
    }
    Ok(summary)
}

/// The three cases of the Gamma-sum magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaCase {
    /// `r = 0`, `|Gamma|^2 = 4^n`.
    Zero,
    /// `r in 2T, r != 0`, `Gamma = 0`.
    TwiceTeichmuller,
    /// `r` a unit, `|Gamma|^2 = 2^n`.
    Unit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaRow {
    pub element: String,
    /// `Gamma(r)` as `[re, im]`.
    pub gamma: [i128; 2],
    pub norm_squared: i128,
    pub case: GammaCase,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaTable {
    pub n: u32,
    pub rows: Vec<GammaRow>,
    /// Row counts for zero / twice-Teichmuller / unit cases.
    pub case_counts: [u64; 3],
    pub all_match: bool,
}

/// Largest degree accepted by [`gamma_oracle`].
pub const MAX_GAMMA_DEGREE: u32 = 6;

/// Evaluate `Gamma(r)` for every `r` in `GR(4,n)`, classify by 2-adic
/// structure, and compare the exact `|Gamma|^2` with the predicted value.
pub fn gamma_oracle(spec: &RingSpec) -> Result<GammaTable> {
    let n = spec.degree();
    if n > MAX_GAMMA_DEGREE {
        return Err(Error::DegreeOutOfRange(format!(
            "gamma oracle needs n <= {MAX_GAMMA_DEGREE}"
        )));
    }
    let mut case_counts = [0u64; 3];
    let rows = (0..spec.size())
        .map(|r| {
            let g = spec.gamma_idx(r);
            let norm = g.norm_squared()?.as_rational_integer().ok_or_else(|| {
                Error::InvalidConfig("|Gamma|^2 is not a rational integer".into())
            })?;
            let (a, _) = spec.decompose_idx(r);
            let (case, expected) = if r == 0 {
                (GammaCase::Zero, 1i128 << (2 * n))
            } else if a == 0 {
                (GammaCase::TwiceTeichmuller, 0)
            } else {
                (GammaCase::Unit, 1i128 << n)
            };
            case_counts[case as usize] += 1;
            Ok(GammaRow {
                element: spec.from_index(r).to_string(),
                gamma: [g.coeffs()[0], g.coeffs()[1]],
                norm_squared: norm,
                case,
                matches: norm == expected,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_match = rows.iter().all(|r| r.matches);
    Ok(GammaTable {
        n,
        rows,
        case_counts,
        all_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        alltop_unguarded, galois_ring_mubs, prime_power_family, wootters_fields,
    };
    use crate::finite_field::make_field;
    use crate::galois_ring::make_ring;
    use serde_json::Map;

    #[test]
    fn small_families_certify() {
        let f3 = wootters_fields(&make_field(3, 1, None).unwrap()).unwrap();
        let r = verify_exact(&f3).unwrap();
        assert_eq!(r.status, Status::CertifiedExtremal);
        assert_eq!(r.verdicts.len(), 10);
        assert_eq!(r.verdict(2, 1), r.verdict(1, 2));
        let f4 = galois_ring_mubs(&make_ring(2, None).unwrap()).unwrap();
        assert_eq!(verify_exact(&f4).unwrap().status, Status::CertifiedExtremal);
        assert!(extremality_check(&f4));
    }

    #[test]
    fn all_ones_basis_is_a_violation() {
        let ones = ExponentBasis::flat(3, 1, "ones", vec![0; 9]).unwrap();
        let f = MubFamily::new(
            3,
            1,
            "test",
            Map::new(),
            vec![ExponentBasis::standard(3), ones],
        )
        .unwrap();
        let r = verify_exact(&f).unwrap();
        assert_eq!(r.status, Status::Failed);
        let v = r.verdict(1, 1).unwrap();
        assert_eq!(v.kind, VerdictKind::Violation);
        assert!(matches!(
            v.evidence,
            Some(Evidence::Exact {
                vector_i: 0,
                vector_j: 1,
                ..
            })
        ));
        assert_eq!(r.verdict(0, 1).unwrap().kind, VerdictKind::Unbiased);
        assert_eq!(
            verify_float(&f, 1e-9).unwrap().verdict(1, 1).unwrap().kind,
            VerdictKind::Violation
        );
    }

    #[test]
    fn duplicated_basis_is_a_violation() {
        let f3 = wootters_fields(&make_field(3, 1, None).unwrap()).unwrap();
        let b = f3.bases()[2].clone();
        let dup = MubFamily::new(3, 3, "dup", Map::new(), vec![b.clone(), b]).unwrap();
        for r in [
            verify_exact(&dup).unwrap(),
            verify_float(&dup, 1e-9).unwrap(),
        ] {
            assert_eq!(r.status, Status::Failed);
            assert_eq!(r.verdict(0, 1).unwrap().kind, VerdictKind::Violation);
            assert_eq!(
                r.verdict(0, 0).unwrap().kind,
                VerdictKind::SameBasisOrthonormal
            );
        }
        if let Some(Evidence::Exact { norm_squared, .. }) =
            &verify_exact(&dup).unwrap().verdict(0, 1).unwrap().evidence
        {
            assert_eq!(norm_squared, &vec![9, 0]);
        } else {
            panic!("missing exact evidence");
        }
    }

    #[test]
    fn qubit_float_family() {
        let f = prime_power_family(2).unwrap();
        let r = verify_float(&f, 1e-9).unwrap();
        assert_eq!(r.status, Status::CertifiedExtremal);
        assert_eq!(r.family_size, 3);
        for v in &r.verdicts {
            let Some(Evidence::Float { max_deviation }) = v.evidence else {
                panic!()
            };
            assert!(max_deviation < 1e-12);
        }
    }

    #[test]
    fn float_rejects_bad_tolerance() {
        let f = prime_power_family(2).unwrap();
        assert!(verify_float(&f, 0.0).is_err());
        assert!(verify_float(&f, f64::NAN).is_err());
    }

    #[test]
    fn alltop_in_characteristic_three_fails() {
        let f = alltop_unguarded(&make_field(3, 1, None).unwrap()).unwrap();
        assert_eq!(verify_exact(&f).unwrap().status, Status::Failed);
    }

    #[test]
    fn weil_examples() {
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(weil_sum_oracle(&f5, 1, 0, 0).unwrap(), 5);
        let f7 = make_field(7, 1, None).unwrap();
        assert_eq!(
            weil_sum_oracle(&f7, 0, 1, 1).unwrap_err(),
            Error::DegenerateQuadratic
        );
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(
            weil_sum_oracle(&f4, 1, 0, 0).unwrap_err(),
            Error::EvenCharacteristic(2)
        );
        let s = weil_sweep(&f5).unwrap();
        assert_eq!((s.checked, s.all_equal_q), (100, true));
        let f9 = make_field(3, 2, None).unwrap();
        let s9 = weil_sweep(&f9).unwrap();
        assert_eq!((s9.checked, s9.all_equal_q), (9 * 8 * 9, true));
        // Spot-check the sweep against the direct oracle.
        for (a2, a1, a0) in [(1, 0, 0), (5, 3, 7), (8, 8, 8)] {
            assert_eq!(weil_sum_oracle(&f9, a2, a1, a0).unwrap(), 9);
        }
    }

    #[test]
    fn gamma_small_tables() {
        let t1 = gamma_oracle(&make_ring(1, None).unwrap()).unwrap();
        assert_eq!(t1.rows[0].gamma, [2, 0]);
        assert_eq!(t1.rows[2].gamma, [0, 0]);
        assert_eq!(t1.rows[1].gamma, [1, 1]);
        assert_eq!(t1.rows[1].norm_squared, 2);
        let t2 = gamma_oracle(&make_ring(2, None).unwrap()).unwrap();
        assert_eq!(t2.rows.len(), 16);
        assert_eq!(t2.case_counts, [1, 3, 12]);
        assert!(t2.all_match);
        assert!(gamma_oracle(&make_ring(7, None).unwrap()).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let f = prime_power_family(9).unwrap();
        let a = verify_exact(&f).unwrap().to_json();
        let b = verify_exact(&f).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"status\":\"certified-extremal\""));
    }
}
