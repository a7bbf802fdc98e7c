//! Eigenpairs of a rank-one update `D + z z^T` of a positive diagonal matrix.
//!
//! Eigenvalues are the roots of the secular equation
//! `f(nu) = 1 + sum_j z_j^2 / (lambda_j - nu)`, one per interval between
//! consecutive poles. Eigenvectors follow from the Bunch-Nielsen-Sorensen
//! formula `e_i ~ (z_j / (lambda_j - nu_i))_j`.
//!
//! Degenerate inputs are deflated first. A coordinate with a negligible
//! `z_j` keeps its eigenvalue `lambda_j` and its canonical eigenvector. A run
//! of colliding `lambda`s is rotated so that all of its update weight sits on
//! the first coordinate of the run; the others then deflate. What remains has
//! distinct poles and nonzero weights, so every root is simple and bracketed.
//!
//! Each root is stored as an offset `tau` from its nearest pole. Differences
//! `lambda_j - nu` are then formed as `(lambda_j - lambda_origin) - tau`,
//! which keeps them accurate when `nu` sits very close to a pole.

use crate::error::{Error, Result};
use crate::symmat::{apply_sign_convention, norm2, EigenDecomposition, Spectrum, SymmetricMatrix};

/// Relative threshold for both deflation tests: `|z_j| <= tol * |z|` and
/// `lambda_j - lambda_{j+1} <= tol * lambda_1`.
pub const DEFLATION_TOL: f64 = 1e-12;
pub const ROOT_REL_TOL: f64 = 1e-14;
pub const ROOT_MAX_ITER: usize = 200;
/// Bisection hands over to Newton once the bracket is this fraction of its
/// initial width.
const NEWTON_SWITCH: f64 = 1e-3;
/// Tolerance on `f` at the finite end of the first bracket.
const BRACKET_SLACK: f64 = 1e-10;

/// `D + z z^T` with `D = diag(spectrum)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneUpdate {
    spectrum: Spectrum,
    z: Vec<f64>,
}

impl RankOneUpdate {
    pub fn new(spectrum: Spectrum, z: Vec<f64>) -> Result<Self> {
        if z.len() != spectrum.dim() {
            return Err(Error::DimensionMismatch { index: 0, len: z.len(), expected: spectrum.dim() });
        }
        Ok(Self { spectrum, z })
    }

    /// The update `D + sqrt(D) v v^T sqrt(D)`, i.e. `z = sqrt(D) v`.
    pub fn from_scaled(spectrum: Spectrum, v: &[f64]) -> Result<Self> {
        if v.len() != spectrum.dim() {
            return Err(Error::DimensionMismatch { index: 0, len: v.len(), expected: spectrum.dim() });
        }
        let z = spectrum.lambdas().iter().zip(v).map(|(l, x)| l.sqrt() * x).collect();
        Self::new(spectrum, z)
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn matrix(&self) -> SymmetricMatrix {
        let d = self.dim();
        let mut a = SymmetricMatrix::zeros(d);
        for i in 0..d {
            for j in i..d {
                let mut x = self.z[i] * self.z[j];
                if i == j {
                    x += self.spectrum.get(i);
                }
                a.set(i, j, x);
            }
        }
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Source {
    Deflated { coord: usize },
    Root { origin: usize, tau: f64 },
}

/// Plane rotation that moved all of `z[zeroed]` onto `z[keep]`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Givens {
    keep: usize,
    zeroed: usize,
    c: f64,
    s: f64,
}

/// Eigenvalues of a [`RankOneUpdate`], descending, with the bookkeeping
/// needed to evaluate eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularSolution {
    values: Vec<f64>,
    deflated: Vec<bool>,
    normalizers: Vec<Option<f64>>,
    sources: Vec<Source>,
    /// `z` after the collision rotations.
    z: Vec<f64>,
    rotations: Vec<Givens>,
    active: Vec<usize>,
}

impl SecularSolution {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `true` where the eigenvalue is an unchanged `lambda_j`.
    pub fn deflated(&self) -> &[bool] {
        &self.deflated
    }

    /// `C_i = 1 / |(z_j / (lambda_j - nu_i))_j|` for every root, `None` for
    /// deflated indices.
    pub fn normalizers(&self) -> &[Option<f64>] {
        &self.normalizers
    }

    /// Coordinates that took part in the secular equation.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    /// `|f(nu_i)|` and the scale `sum_j z_j^2 / |lambda_j - nu_i|` it should
    /// be compared against. `None` for deflated indices.
    pub fn residual(&self, u: &RankOneUpdate, i: usize) -> Option<(f64, f64)> {
        match self.sources[i] {
            Source::Deflated { .. } => None,
            Source::Root { origin, tau } => {
                let lambda = u.spectrum().lambdas();
                let mut f = 1.0;
                let mut scale = 1.0;
                for &j in &self.active {
                    let term = self.z[j].powi(2) / ((lambda[j] - lambda[origin]) - tau);
                    f += term;
                    scale += term.abs();
                }
                Some((f.abs(), scale))
            }
        }
    }
}

/// Shifted secular function `g(tau) = f(lambda_origin + tau)` and its
/// derivative.
fn secular_at(lambda: &[f64], z: &[f64], active: &[usize], origin: usize, tau: f64) -> (f64, f64) {
    let mut f = 1.0;
    let mut df = 0.0;
    for &j in active {
        let delta = (lambda[j] - lambda[origin]) - tau;
        let q = z[j] / delta;
        f += z[j] * q;
        df += q * q;
    }
    (f, df)
}

/// Finds the root of the increasing function `g` in `(lo, hi)` given
/// `g(lo) < 0 <= g(hi)`.
fn solve_bracket(lambda: &[f64], z: &[f64], active: &[usize], origin: usize, mut lo: f64, mut hi: f64) -> f64 {
    let initial = hi - lo;
    let mut x = 0.5 * (lo + hi);
    let mut newton: Option<f64> = None;
    for _ in 0..ROOT_MAX_ITER {
        let candidate = match newton {
            Some(n) if hi - lo < NEWTON_SWITCH * initial && n > lo && n < hi => n,
            _ => 0.5 * (lo + hi),
        };
        if candidate <= lo || candidate >= hi {
            break;
        }
        x = candidate;
        let (g, dg) = secular_at(lambda, z, active, origin, x);
        if g == 0.0 {
            return x;
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        newton = (dg > 0.0 && dg.is_finite()).then(|| x - g / dg);
        if hi - lo <= ROOT_REL_TOL * lo.abs().max(hi.abs()) {
            break;
        }
    }
    x
}

/// Solves for all eigenvalues of `u`, deflating first.
pub fn secular_eigenvalues(u: &RankOneUpdate) -> Result<SecularSolution> {
    let lambda = u.spectrum().lambdas();
    let d = u.dim();
    let mut z = u.z().to_vec();
    let mut rotations = Vec::new();

    let collide = DEFLATION_TOL * u.spectrum().largest();
    let mut head = 0;
    for j in 1..d {
        if lambda[j - 1] - lambda[j] > collide {
            head = j;
            continue;
        }
        if z[j] == 0.0 {
            continue;
        }
        let r = z[head].hypot(z[j]);
        let g = Givens { keep: head, zeroed: j, c: z[head] / r, s: z[j] / r };
        z[head] = r;
        z[j] = 0.0;
        rotations.push(g);
    }

    let znorm = norm2(&z);
    let is_deflated: Vec<bool> = z.iter().map(|x| x.abs() <= DEFLATION_TOL * znorm).collect();
    let active: Vec<usize> = (0..d).filter(|&j| !is_deflated[j]).collect();

    let mut entries: Vec<(f64, Source)> =
        (0..d).filter(|&j| is_deflated[j]).map(|j| (lambda[j], Source::Deflated { coord: j })).collect();

    let weight: f64 = active.iter().map(|&j| z[j].powi(2)).sum();
    for (r, &k) in active.iter().enumerate() {
        let (origin, lo, hi) = if r == 0 {
            let (g_hi, _) = secular_at(lambda, &z, &active, k, weight);
            if g_hi < -BRACKET_SLACK {
                let (g_lo, _) = secular_at(lambda, &z, &active, k, weight * f64::EPSILON);
                return Err(Error::BracketFailure {
                    lower: lambda[k],
                    upper: lambda[k] + weight,
                    f_lower: g_lo,
                    f_upper: g_hi,
                });
            }
            (k, 0.0, weight)
        } else {
            let prev = active[r - 1];
            let gap = lambda[prev] - lambda[k];
            let (g_mid, _) = secular_at(lambda, &z, &active, k, 0.5 * gap);
            if g_mid >= 0.0 {
                (k, 0.0, 0.5 * gap)
            } else {
                (prev, -0.5 * gap, 0.0)
            }
        };
        let tau = solve_bracket(lambda, &z, &active, origin, lo, hi);
        entries.push((lambda[origin] + tau, Source::Root { origin, tau }));
    }

    entries.sort_by(|a, b| b.0.total_cmp(&a.0));
    let values = entries.iter().map(|e| e.0).collect();
    let sources: Vec<Source> = entries.iter().map(|e| e.1).collect();
    let deflated = sources.iter().map(|s| matches!(s, Source::Deflated { .. })).collect();
    let normalizers = sources
        .iter()
        .map(|s| match *s {
            Source::Deflated { .. } => None,
            Source::Root { origin, tau } => Some(norm2(&bns_raw(lambda, &z, &active, origin, tau)).recip()),
        })
        .collect();

    Ok(SecularSolution { values, deflated, normalizers, sources, z, rotations, active })
}

fn bns_raw(lambda: &[f64], z: &[f64], active: &[usize], origin: usize, tau: f64) -> Vec<f64> {
    let mut e = vec![0.0; lambda.len()];
    for &j in active {
        e[j] = z[j] / ((lambda[j] - lambda[origin]) - tau);
    }
    e
}

/// Unit eigenvector for the `i`-th largest eigenvalue of `u`.
///
/// Roots use `C_i z_j / (lambda_j - nu_i)`; deflated indices return the
/// canonical vector of their coordinate. Both are mapped back through the
/// collision rotations, so a deflated vector inside a colliding run is a
/// unit vector of that run's eigenspace rather than a canonical one.
pub fn bns_eigenvector(u: &RankOneUpdate, s: &SecularSolution, i: usize) -> Result<Vec<f64>> {
    let d = u.dim();
    if i >= d {
        return Err(Error::IndexOutOfRange { index: i, dim: d });
    }
    let lambda = u.spectrum().lambdas();
    let mut e = match s.sources[i] {
        Source::Deflated { coord } => {
            let mut e = vec![0.0; d];
            e[coord] = 1.0;
            e
        }
        Source::Root { origin, tau } => {
            let nu = lambda[origin] + tau;
            for &j in &s.active {
                if ((lambda[j] - lambda[origin]) - tau).abs() <= ROOT_REL_TOL * nu.abs() {
                    return Err(Error::UndeflatedPole { index: i, pole: j });
                }
            }
            let mut e = bns_raw(lambda, &s.z, &s.active, origin, tau);
            let c = norm2(&e).recip();
            e.iter_mut().for_each(|x| *x *= c);
            e
        }
    };
    for g in s.rotations.iter().rev() {
        let (yk, yz) = (e[g.keep], e[g.zeroed]);
        e[g.keep] = g.c * yk - g.s * yz;
        e[g.zeroed] = g.s * yk + g.c * yz;
    }
    apply_sign_convention(&mut e);
    Ok(e)
}

/// Full eigendecomposition of `D + sqrt(D) v v^T sqrt(D)` through the
/// secular equation.
pub fn rankone_full(spectrum: &Spectrum, v: &[f64]) -> Result<EigenDecomposition> {
    let u = RankOneUpdate::from_scaled(spectrum.clone(), v)?;
    let s = secular_eigenvalues(&u)?;
    let pairs = (0..u.dim()).map(|i| Ok((s.values()[i], bns_eigenvector(&u, &s, i)?))).collect::<Result<Vec<_>>>()?;
    Ok(EigenDecomposition::from_pairs(pairs))
}
