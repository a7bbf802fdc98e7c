//! Seeded instance generation, bound certification against the Jacobi
//! oracle, and the condition-number scan of a single eigenvector coordinate.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bounds::{
    eigvec_bound_rank1, eigvec_bound_rankm, report_eigenvalues_rank1, report_eigenvalues_rankm, report_eigvecs,
    BoundEntry, BoundKind, BoundParams, BoundReport, BOUND_SLACK,
};
use crate::error::{Error, Result};
use crate::rankone::rankone_full;
use crate::symmat::{build_perturbed, jacobi_eig, PerturbationSet, Spectrum};

/// Scan points with a condition number `lambda_1 / lambda_d` below this are
/// left out of the slope fit.
pub const ASYMPTOTIC_GATE: f64 = 1e2;

/// Secular and Jacobi eigenvalues must agree to this relative tolerance
/// during certification.
pub const CROSSCHECK_TOL: f64 = 1e-9;

/// How the perturbation vectors of an instance are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Recipe {
    /// Standard Gaussian entries from a polar transform over ChaCha8 streams.
    Gaussian,
    /// Vectors given verbatim.
    Fixed(Vec<Vec<f64>>),
}

impl Recipe {
    pub fn tag(&self) -> &'static str {
        match self {
            Recipe::Gaussian => "gaussian-polar",
            Recipe::Fixed(_) => "fixed",
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub spectrum: Spectrum,
    pub perts: PerturbationSet,
    pub seed: u64,
    pub recipe: Recipe,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn m(&self) -> usize {
        self.perts.len()
    }

    pub fn lambda1(&self) -> f64 {
        self.spectrum.largest()
    }

    /// Rebuilds the instance from its seed and recipe.
    pub fn regenerate(&self) -> Result<Self> {
        gen_instance_with(self.dim(), self.m(), self.lambda1(), self.seed, self.recipe.clone())
    }

    /// Hash of the bit patterns of the perturbation vectors.
    pub fn vector_digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for v in self.perts.vectors() {
            for x in v {
                x.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }
}

/// `lambda_j = lambda_1^((d - j) / (d - 1))` for one-based `j`, so the
/// spectrum is evenly spaced in log scale from `lambda_1` down to 1.
pub fn log_spaced_spectrum(d: usize, lambda1: f64) -> Result<Spectrum> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2 leaves no ratio to scan")));
    }
    if !(lambda1 >= 1.0 && lambda1.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda_1 = {lambda1} must be at least 1")));
    }
    let top = lambda1.log10();
    let lambdas = (0..d)
        .map(|j| {
            let e = top * (d - 1 - j) as f64 / (d - 1) as f64;
            if j == 0 {
                lambda1
            } else {
                10f64.powf(e)
            }
        })
        .collect();
    Spectrum::new(lambdas)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the stream for vector `k` of a `(d, m)` instance.
fn stream_seed(seed: u64, d: usize, m: usize, k: usize) -> u64 {
    let key = ((d as u64) << 40) ^ ((m as u64) << 20) ^ k as u64;
    splitmix64(seed ^ splitmix64(key))
}

/// Marsaglia's polar method.
struct PolarNormal<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> PolarNormal<R> {
    fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    fn sample(&mut self) -> f64 {
        if let Some(x) = self.spare.take() {
            return x;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// `m` standard Gaussian vectors of length `d`. Vector `k` depends only on
/// `(seed, d, m, k)`.
pub fn gaussian_vectors(d: usize, m: usize, seed: u64) -> Vec<Vec<f64>> {
    (0..m)
        .map(|k| {
            let mut g = PolarNormal::new(ChaCha8Rng::seed_from_u64(stream_seed(seed, d, m, k)));
            (0..d).map(|_| g.sample()).collect()
        })
        .collect()
}

/// A log-spaced spectrum from `lambda1` to 1 with `m` Gaussian vectors. The
/// vectors do not depend on `lambda1`.
pub fn gen_instance(d: usize, m: usize, lambda1: f64, seed: u64) -> Result<Instance> {
    gen_instance_with(d, m, lambda1, seed, Recipe::Gaussian)
}

/// Like [`gen_instance`] with an explicit recipe. For [`Recipe::Fixed`] the
/// vector count `m` must match the given vectors.
pub fn gen_instance_with(d: usize, m: usize, lambda1: f64, seed: u64, recipe: Recipe) -> Result<Instance> {
    let spectrum = log_spaced_spectrum(d, lambda1)?;
    let vectors = match &recipe {
        Recipe::Gaussian => gaussian_vectors(d, m, seed),
        Recipe::Fixed(vs) => {
            if vs.len() != m {
                return Err(Error::InvalidArgument(format!("fixed recipe has {} vectors, expected {m}", vs.len())));
            }
            vs.clone()
        }
    };
    let perts = PerturbationSet::new(d, vectors)?;
    Ok(Instance { spectrum, perts, seed, recipe })
}

/// Agreement between the secular solver and the Jacobi oracle on a rank-one
/// instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    /// `max_i |nu_i^sec - nu_i^jac| / nu_i^jac`.
    pub value_rel_diff: f64,
    pub orthonormality: f64,
}

impl CrossCheck {
    pub fn passes(&self) -> bool {
        self.value_rel_diff <= CROSSCHECK_TOL && self.orthonormality <= CROSSCHECK_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub seed: u64,
    pub d: usize,
    pub m: usize,
    pub lambda1: f64,
    pub reports: Vec<BoundReport>,
    pub crosscheck: Option<CrossCheck>,
    pub pass: bool,
}

impl Certification {
    pub fn report(&self, kind: BoundKind) -> Option<&BoundReport> {
        self.reports.iter().find(|r| r.kind == kind)
    }
}

/// Evaluates every applicable bound of `instance` against the Jacobi oracle.
///
/// Bounds are multiplied by `scale` before comparison; anything below 1
/// should make a sound checker fail.
pub fn certify(instance: &Instance, scale: f64) -> Result<Certification> {
    certify_inner(instance, scale).map_err(|e| Error::Instance { seed: instance.seed, source: Box::new(e) })
}

fn certify_inner(instance: &Instance, scale: f64) -> Result<Certification> {
    let spectrum = &instance.spectrum;
    let perts = &instance.perts;
    let p = BoundParams::from_perturbations(perts);
    let a = build_perturbed(spectrum, perts)?;
    let oracle = jacobi_eig(&a)?;

    let mut reports = vec![report_eigenvalues_rankm(spectrum, &p, oracle.values(), scale)?];
    let mut crosscheck = None;
    if perts.len() == 1 {
        let v = &perts.vectors()[0];
        match report_eigenvalues_rank1(spectrum, v, oracle.values(), scale) {
            Some(r) => reports.push(r),
            None => reports.push(BoundReport {
                kind: BoundKind::EigenvalueRank1,
                entries: Vec::new(),
                pass: true,
                notes: vec!["skipped: spectrum not strict or v has a zero entry".into()],
            }),
        }
        reports.push(report_eigvecs(BoundKind::EigvecRank1, spectrum, &p, oracle.vectors(), scale));
        reports.push(report_eigvecs(BoundKind::EigvecRank1Refined, spectrum, &p, oracle.vectors(), scale));

        let secular = rankone_full(spectrum, v)?;
        let value_rel_diff =
            secular.values().iter().zip(oracle.values()).map(|(s, o)| (s - o).abs() / o.abs()).fold(0.0, f64::max);
        crosscheck = Some(CrossCheck { value_rel_diff, orthonormality: secular.orthonormality_residual() });
    }
    reports.push(report_eigvecs(BoundKind::EigvecRankM, spectrum, &p, oracle.vectors(), scale));

    let pass = reports.iter().all(|r| r.pass) && crosscheck.is_none_or(|c| c.passes());
    Ok(Certification {
        seed: instance.seed,
        d: spectrum.dim(),
        m: perts.len(),
        lambda1: spectrum.largest(),
        reports,
        crosscheck,
        pass,
    })
}

/// Parameter grid of a certification sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dims: Vec<usize>,
    pub ms: Vec<usize>,
    pub lambda1s: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl Default for Grid {
    /// 5 dimensions x 5 ranks x 5 condition numbers x 5 seeds.
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 5, 10, 20],
            ms: vec![0, 1, 2, 3, 5],
            lambda1s: vec![1.0, 1e2, 1e4, 1e6, 1e8],
            seeds: (1..=5).collect(),
        }
    }
}

impl Grid {
    pub fn len(&self) -> usize {
        self.dims.len() * self.ms.len() * self.lambda1s.len() * self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Instances in a fixed order: seed, then d, m, lambda_1.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        let mut out = Vec::with_capacity(self.len());
        for &seed in &self.seeds {
            for &d in &self.dims {
                for &m in &self.ms {
                    for &l in &self.lambda1s {
                        out.push(gen_instance(d, m, l, seed)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Smallest normalized slack seen for one bound kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstSlack {
    /// `slack / scale`, where a check fails below `-BOUND_SLACK`.
    pub normalized: f64,
    pub entry: BoundEntry,
    pub seed: u64,
    pub d: usize,
    pub m: usize,
    pub lambda1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub certifications: Vec<Certification>,
    pub worst: BTreeMap<BoundKind, WorstSlack>,
}

impl SweepSummary {
    pub fn instances(&self) -> usize {
        self.certifications.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Certification> {
        self.certifications.iter().filter(|c| !c.pass)
    }
}

fn normalized_slack(e: &BoundEntry) -> f64 {
    e.slack / (e.tolerance / BOUND_SLACK)
}

/// Certifies every instance of `grid`. Runs in parallel when the `parallel`
/// feature is on; results keep the grid order either way.
pub fn run_sweep(grid: &Grid, scale: f64) -> Result<SweepSummary> {
    let instances = grid.instances()?;
    #[cfg(feature = "parallel")]
    let certifications = instances.par_iter().map(|i| certify(i, scale)).collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let certifications = instances.iter().map(|i| certify(i, scale)).collect::<Result<Vec<_>>>()?;

    let mut worst: BTreeMap<BoundKind, WorstSlack> = BTreeMap::new();
    for c in &certifications {
        for r in &c.reports {
            let Some(e) = r.worst() else { continue };
            let candidate = WorstSlack {
                normalized: normalized_slack(e),
                entry: *e,
                seed: c.seed,
                d: c.d,
                m: c.m,
                lambda1: c.lambda1,
            };
            worst
                .entry(r.kind)
                .and_modify(|w| {
                    if candidate.normalized < w.normalized {
                        *w = candidate;
                    }
                })
                .or_insert(candidate);
        }
    }
    Ok(SweepSummary { certifications, worst })
}

/// Which coordinate of the top eigenvector a scan follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Second,
    Last,
    /// One-based index.
    Index(usize),
}

impl Coordinate {
    /// One-based coordinate for dimension `d`.
    pub fn resolve(self, d: usize) -> Result<usize> {
        let j = match self {
            Coordinate::Second => 2,
            Coordinate::Last => d,
            Coordinate::Index(j) => j,
        };
        if j == 0 || j > d {
            return Err(Error::IndexOutOfRange { index: j, dim: d });
        }
        Ok(j)
    }
}

/// One point of a scan: `|[e_1]_j|` of the perturbed matrix at one
/// `lambda_1`, with `lambda_d = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub d: usize,
    pub m: usize,
    /// One-based coordinate index.
    pub j: usize,
    pub lambda1: f64,
    /// `lambda_1 / lambda_j`.
    pub ratio: f64,
    pub observed: f64,
    pub bound_rankm: f64,
    /// Only for `m = 1`.
    pub bound_rank1: Option<f64>,
    pub seed: u64,
}

/// Follows `|[e_1]_j|` across `lambda1_grid` with one fixed set of
/// perturbation vectors.
pub fn scan(
    d: usize,
    m: usize,
    coordinate: Coordinate,
    lambda1_grid: &[f64],
    seed: u64,
    recipe: &Recipe,
) -> Result<Vec<ScanRecord>> {
    let j = coordinate.resolve(d)?;
    if let Some(w) = lambda1_grid.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(format!("grid is not ascending at {} > {}", w[0], w[1])));
    }
    let points = lambda1_grid.iter().map(|&l| {
        let instance = gen_instance_with(d, m, l, seed, recipe.clone())?;
        scan_point(&instance, j)
    });
    points.collect()
}

fn scan_point(instance: &Instance, j: usize) -> Result<ScanRecord> {
    let spectrum = &instance.spectrum;
    let p = BoundParams::from_perturbations(&instance.perts);
    let a = build_perturbed(spectrum, &instance.perts)?;
    let oracle = jacobi_eig(&a).map_err(|e| Error::Instance { seed: instance.seed, source: Box::new(e) })?;
    let jj = j - 1;
    Ok(ScanRecord {
        d: instance.dim(),
        m: instance.m(),
        j,
        lambda1: instance.lambda1(),
        ratio: spectrum.largest() / spectrum.get(jj),
        observed: oracle.vector(0)[jj].abs(),
        bound_rankm: eigvec_bound_rankm(spectrum, &p, 0, jj),
        bound_rank1: (instance.m() == 1).then(|| eigvec_bound_rank1(spectrum, &p, 0, jj)),
        seed: instance.seed,
    })
}

/// Least-squares line through `(ln ratio, ln observed)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub count: usize,
}

/// Fits the log-log slope over records whose condition number
/// `lambda_1` (with `lambda_d = 1`) is at least [`ASYMPTOTIC_GATE`] and
/// whose observed coordinate is nonzero.
pub fn fit_slope(records: &[ScanRecord]) -> Result<SlopeFit> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.lambda1 >= ASYMPTOTIC_GATE && r.observed > 0.0 && r.ratio > 0.0)
        .map(|r| (r.ratio.ln(), r.observed.ln()))
        .collect();
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientPoints { found: n });
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all gated points share one ratio".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(SlopeFit { slope, intercept, residual_rms: (sse / nf).sqrt(), count: n })
}

/// `count` points from `10^from` to `10^to`, evenly spaced in log scale.
pub fn log_grid(from_exp: f64, to_exp: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![10f64.powf(from_exp)],
        _ => (0..count).map(|k| 10f64.powf(from_exp + (to_exp - from_exp) * k as f64 / (count - 1) as f64)).collect(),
    }
}
