//! Numerical search for families of mutually unbiased bases.
//!
//! Bases are `d x d` unitaries whose columns are the basis vectors. The
//! objective is
//!
//! ```text
//! f = sum_{k < l} sum_{u,v} (|G_uv|^2 - 1/d)^2,   G = A_k^H A_l
//! ```
//!
//! and is minimized by alternating descent: each free basis takes a
//! gradient step and is projected back to the unitary group through its
//! polar factor. Restarts begin from Haar-random unitaries drawn from a
//! ChaCha stream keyed by `(seed, restart)`, so results do not depend on
//! scheduling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::constructions::MubFamily;
use crate::error::{Error, Result};
use crate::verifier::{basis_matrix, verify_float_matrices, Status};

/// A family is reported as converged when the objective drops below this.
pub const SUCCESS_THRESHOLD: f64 = 1e-12;

/// Tolerance on `A^H A - I` accepted for a unitary basis.
pub const UNITARY_TOLERANCE: f64 = 1e-8;

type CMatrix = DMatrix<Complex64>;

/// A `d x d` unitary; columns are the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryBasis {
    matrix: CMatrix,
}

impl UnitaryBasis {
    /// Wrap a matrix after checking it is square and unitary.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "basis matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let basis = UnitaryBasis { matrix };
        let dev = basis.gram_deviation();
        if dev.is_nan() || dev > UNITARY_TOLERANCE {
            return Err(Error::InvalidConfig(format!(
                "matrix is not unitary (deviation {dev:e})"
            )));
        }
        Ok(basis)
    }

    /// Haar-distributed unitary: QR of a complex Gaussian matrix with the
    /// phases of `R`'s diagonal folded into `Q`.
    pub fn haar<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let z = CMatrix::from_fn(d, d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        });
        let qr = z.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..d {
            let rjj = r[(j, j)];
            let phase = if rjj.norm() > 0.0 {
                rjj / rjj.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            q.column_mut(j).apply(|z| *z *= phase);
        }
        UnitaryBasis { matrix: q }
    }

    /// Nearest unitary to `m` in Frobenius norm (`U V^H` from its SVD).
    pub fn polar(m: &CMatrix) -> Self {
        let svd = m.clone().svd(true, true);
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^H");
        UnitaryBasis { matrix: u * v_t }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Largest entry of `|A^H A - I|`.
    pub fn gram_deviation(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        let d = g.nrows();
        let mut dev = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        dev
    }
}

fn pair_objective(a: &CMatrix, b: &CMatrix) -> f64 {
    let inv_d = 1.0 / a.nrows() as f64;
    let g = a.adjoint() * b;
    g.iter().map(|z| (z.norm_sqr() - inv_d).powi(2)).sum()
}

/// Objective over raw matrices; no unitarity check.
pub fn objective_of_matrices(mats: &[CMatrix]) -> f64 {
    let mut total = 0.0;
    for k in 0..mats.len() {
        for l in k + 1..mats.len() {
            total += pair_objective(&mats[k], &mats[l]);
        }
    }
    total
}

fn check_dimensions(mats: &[&CMatrix]) -> Result<usize> {
    let d = mats.first().map_or(0, |m| m.nrows());
    match mats.iter().find(|m| m.nrows() != d || m.ncols() != d) {
        Some(m) => Err(Error::DimensionMismatch(format!(
            "{}x{} basis among bases of dimension {d}",
            m.nrows(),
            m.ncols()
        ))),
        None => Ok(d),
    }
}

/// Sum over basis pairs and vector pairs of `(|<b, b'>|^2 - 1/d)^2`.
pub fn objective(bases: &[UnitaryBasis]) -> Result<f64> {
    let refs: Vec<&CMatrix> = bases.iter().map(|b| &b.matrix).collect();
    check_dimensions(&refs)?;
    let mats: Vec<CMatrix> = bases.iter().map(|b| b.matrix.clone()).collect();
    Ok(objective_of_matrices(&mats))
}

/// Wirtinger gradient `df / d conj(A_k)` of the objective with respect to
/// basis `k`. The gradient in real coordinates `(Re, Im)` is twice the
/// real and imaginary parts of this matrix.
pub fn objective_gradient(mats: &[CMatrix], k: usize) -> CMatrix {
    let a = &mats[k];
    let d = a.nrows();
    let inv_d = 1.0 / d as f64;
    let mut grad = CMatrix::zeros(d, d);
    for (l, b) in mats.iter().enumerate() {
        if l == k {
            continue;
        }
        // (G^H)_vu = conj(G_uv); weight it by 2 (|G_uv|^2 - 1/d).
        let mut gh = b.adjoint() * a;
        for z in gh.iter_mut() {
            *z *= 2.0 * (z.norm_sqr() - inv_d);
        }
        grad += b * gh;
    }
    grad
}

/// Geometric step decay: step at iteration `i` is
/// `max(initial * decay^i, minimum)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepSchedule {
    pub initial: f64,
    pub decay: f64,
    pub minimum: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule {
            initial: 0.5,
            decay: 0.999,
            minimum: 0.05,
        }
    }
}

impl StepSchedule {
    pub fn step(&self, iteration: usize) -> f64 {
        (self.initial * self.decay.powi(iteration as i32)).max(self.minimum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub dimension: usize,
    pub target: usize,
    /// Frozen bases the search extends.
    pub prefix: Option<MubFamily>,
    pub restarts: usize,
    pub max_iterations: usize,
    pub schedule: StepSchedule,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(dimension: usize, target: usize, seed: u64) -> Self {
        SearchConfig {
            dimension,
            target,
            prefix: None,
            restarts: 20,
            max_iterations: 2000,
            schedule: StepSchedule::default(),
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidConfig("dimension must be positive".into()));
        }
        if self.target > self.dimension + 1 {
            return Err(Error::InvalidTarget {
                target: self.target,
                bound: self.dimension + 1,
            });
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        let s = &self.schedule;
        if !(s.initial > 0.0 && s.minimum > 0.0 && s.decay > 0.0 && s.decay <= 1.0) {
            return Err(Error::InvalidConfig(
                "step schedule needs positive steps and decay in (0, 1]".into(),
            ));
        }
        if let Some(p) = &self.prefix {
            if p.dimension() != self.dimension {
                return Err(Error::DimensionMismatch(format!(
                    "prefix has dimension {}, search dimension {}",
                    p.dimension(),
                    self.dimension
                )));
            }
            if p.len() > self.target {
                return Err(Error::InvalidConfig(format!(
                    "prefix has {} bases, more than the target {}",
                    p.len(),
                    self.target
                )));
            }
        }
        Ok(())
    }
}

/// Largest deviation of `|<b, b'>|^2` from `1/d` for one basis pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDeviation {
    pub i: usize,
    pub j: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub config: SearchConfig,
    /// Prefix bases first, then the searched ones.
    pub bases: Vec<CMatrix>,
    pub objective: f64,
    pub converged: bool,
    pub pair_deviations: Vec<PairDeviation>,
    /// Restart that produced the reported family.
    pub best_restart: usize,
    pub iterations: usize,
    /// Best-so-far objective after each iteration of the winning restart,
    /// starting with the initial value.
    pub trajectory: Vec<f64>,
}

struct Complex2(Complex64);

impl Serialize for Complex2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.0.re)?;
        seq.serialize_element(&self.0.im)?;
        seq.end()
    }
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    dimension: usize,
    target: usize,
    restarts: usize,
    max_iterations: usize,
    schedule: &'a StepSchedule,
    seed: u64,
    prefix_bases: usize,
    prefix_construction: Option<&'a str>,
}

impl Serialize for SearchResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let c = &self.config;
        let echo = ConfigEcho {
            dimension: c.dimension,
            target: c.target,
            restarts: c.restarts,
            max_iterations: c.max_iterations,
            schedule: &c.schedule,
            seed: c.seed,
            prefix_bases: c.prefix.as_ref().map_or(0, MubFamily::len),
            prefix_construction: c.prefix.as_ref().map(MubFamily::construction),
        };
        // Each basis is a list of vectors, each vector a list of [re, im].
        let bases: Vec<Vec<Vec<Complex2>>> = self
            .bases
            .iter()
            .map(|m| {
                m.column_iter()
                    .map(|col| col.iter().map(|&z| Complex2(z)).collect())
                    .collect()
            })
            .collect();
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("bases", &bases)?;
        map.serialize_entry("best_restart", &self.best_restart)?;
        map.serialize_entry("config", &echo)?;
        map.serialize_entry("converged", &self.converged)?;
        map.serialize_entry("iterations", &self.iterations)?;
        map.serialize_entry("objective", &self.objective)?;
        map.serialize_entry("pair_deviations", &self.pair_deviations)?;
        map.serialize_entry("seed", &c.seed)?;
        map.serialize_entry("trajectory", &self.trajectory)?;
        map.end()
    }
}

impl SearchResult {
    /// Compact JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("search results serialize");
        let mut s = serde_json::to_string(&value).expect("search results serialize");
        s.push('\n');
        s
    }

    /// Float verification of the reported family.
    pub fn verify(&self, tol: f64) -> Result<Status> {
        Ok(verify_float_matrices(&self.bases, "search", tol)?.status)
    }
}

fn pair_deviations(mats: &[CMatrix]) -> Vec<PairDeviation> {
    let mut out = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let inv_d = 1.0 / mats[i].nrows() as f64;
            let g = mats[i].adjoint() * &mats[j];
            let max_deviation = g
                .iter()
                .map(|z| (z.norm_sqr() - inv_d).abs())
                .fold(0.0, f64::max);
            out.push(PairDeviation {
                i,
                j,
                max_deviation,
            });
        }
    }
    out
}

struct RestartOutcome {
    mats: Vec<CMatrix>,
    objective: f64,
    iterations: usize,
    trajectory: Vec<f64>,
}

fn run_restart(config: &SearchConfig, prefix: &[CMatrix], restart: usize) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let d = config.dimension;
    let mut mats: Vec<CMatrix> = prefix.to_vec();
    for _ in prefix.len()..config.target {
        mats.push(UnitaryBasis::haar(d, &mut rng).into_matrix());
    }
    let mut best = objective_of_matrices(&mats);
    let mut best_mats = mats.clone();
    let mut trajectory = vec![best];
    let mut iterations = 0;
    while iterations < config.max_iterations
        && best >= SUCCESS_THRESHOLD
        && mats.len() > prefix.len()
    {
        let step = config.schedule.step(iterations);
        for k in prefix.len()..mats.len() {
            let grad = objective_gradient(&mats, k);
            mats[k] =
                UnitaryBasis::polar(&(&mats[k] - grad * Complex64::new(step, 0.0))).into_matrix();
        }
        iterations += 1;
        let value = objective_of_matrices(&mats);
        if value < best {
            best = value;
            best_mats.clone_from(&mats);
        }
        trajectory.push(best);
    }
    RestartOutcome {
        mats: best_mats,
        objective: best,
        iterations,
        trajectory,
    }
}

/// Multi-start alternating descent. Deterministic for a fixed config.
pub fn search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let prefix: Vec<CMatrix> = config
        .prefix
        .as_ref()
        .map(|f| f.bases().iter().map(basis_matrix).collect())
        .unwrap_or_default();
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, &prefix, r))
        .collect();
    // Minimum objective; the earliest restart wins ties.
    let (best_restart, best) = outcomes
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1.objective < a.1.objective { b } else { a })
        .expect("at least one restart");
    Ok(SearchResult {
        config: config.clone(),
        pair_deviations: pair_deviations(&best.mats),
        converged: best.objective < SUCCESS_THRESHOLD,
        objective: best.objective,
        bases: best.mats,
        best_restart,
        iterations: best.iterations,
        trajectory: best.trajectory,
    })
}

/// Search for `extra` bases unbiased to every basis of `f` and to each other.
pub fn extend_family(f: &MubFamily, extra: usize, config: &SearchConfig) -> Result<SearchResult> {
    let prefix_status = verify_float_matrices(
        &f.bases().iter().map(basis_matrix).collect::<Vec<_>>(),
        f.construction(),
        1e-6,
    )?
    .status;
    if !prefix_status.is_certified() {
        return Err(Error::InvalidConfig(
            "prefix family is not unbiased at tolerance 1e-6".into(),
        ));
    }
    let config = SearchConfig {
        dimension: f.dimension(),
        target: f.len() + extra,
        prefix: Some(f.clone()),
        ..config.clone()
    };
    search(&config)
}
