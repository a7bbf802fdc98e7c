//! Dense symmetric matrices, the perturbed matrix
//! `D + sqrt(D) (sum_k v_k v_k^T) sqrt(D)`, and a cyclic Jacobi eigensolver
//! that serves as the reference oracle for everything else in the crate.

use crate::error::{Error, Result};

/// Sign threshold: the first component above this magnitude is made positive.
pub const SIGN_THRESHOLD: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-13;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Sweeps performed after [`JACOBI_TOL`] is met, unless a sweep finds nothing
/// left to rotate. Graded matrices need these for small eigenvalues to be
/// accurate relative to themselves rather than to the largest one.
const POLISH_SWEEPS: usize = 2;

/// Eigenvalues of the base matrix, strictly positive and sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    lambdas: Vec<f64>,
}

impl Spectrum {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for (index, &value) in lambdas.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveEigenvalue { index, value });
            }
        }
        for (index, w) in lambdas.windows(2).enumerate() {
            if w[0] < w[1] {
                return Err(Error::NotDescending { index, prev: w[0], next: w[1] });
            }
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.lambdas[i]
    }

    pub fn largest(&self) -> f64 {
        self.lambdas[0]
    }

    /// Multiplies every eigenvalue by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.lambdas.iter().map(|l| l * c).collect())
    }

    /// True when no two consecutive eigenvalues are equal.
    pub fn is_strict(&self) -> bool {
        self.lambdas.windows(2).all(|w| w[0] > w[1])
    }
}

/// The `m` perturbation vectors together with the bound parameter
/// `V = max(d^(-1/2), max_k |v_k|_inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSet {
    dim: usize,
    vectors: Vec<Vec<f64>>,
    max_inf_norm: f64,
    v_bound: f64,
}

impl PerturbationSet {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptySpectrum);
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { index, len: v.len(), expected: dim });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("perturbation vector {index} has a non-finite entry")));
            }
        }
        let max_inf_norm = vectors.iter().map(|v| inf_norm(v)).fold(0.0, f64::max);
        let v_bound = max_inf_norm.max((dim as f64).sqrt().recip());
        Ok(Self { dim, vectors, max_inf_norm, v_bound })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of rank-one terms `m`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// `max_k |v_k|_inf` without the `d^(-1/2)` floor.
    pub fn max_inf_norm(&self) -> f64 {
        self.max_inf_norm
    }

    /// The floored bound parameter `V`.
    pub fn v_bound(&self) -> f64 {
        self.v_bound
    }

    /// The first `k` vectors.
    pub fn prefix(&self, k: usize) -> Self {
        Self::new(self.dim, self.vectors[..k.min(self.len())].to_vec()).expect("prefix of a valid set is valid")
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    // hypot-style accumulation avoids overflow for the large entries of
    // sqrt(D) v at condition numbers near 1e16.
    let scale = inf_norm(a);
    if scale == 0.0 {
        return 0.0;
    }
    scale * a.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

/// Dense symmetric `d x d` matrix, stored row-major with both triangles kept
/// identical on every write.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Builds from rows; the input must be exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { index: i, len: row.len(), expected: dim });
            }
            for (j, &x) in row.iter().enumerate() {
                if rows[j][i] != x {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
                m.data[i * dim + j] = x;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Writes `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.dim + j] = x;
        self.data[j * self.dim + i] = x;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    sum += self.get(i, j).powi(2);
                }
            }
        }
        sum.sqrt()
    }

    /// `w^T A w / w^T w`.
    pub fn rayleigh_quotient(&self, w: &[f64]) -> f64 {
        let aw = self.mul_vec(w);
        dot(w, &aw) / dot(w, w)
    }

    pub fn mul_vec(&self, w: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| dot(self.row(i), w)).collect()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        let diff: Vec<f64> = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        norm2(&diff)
    }
}

/// Descending eigenvalues paired with an orthonormal eigenvector basis.
///
/// `vectors()[k]` is the unit eigenvector for `values()[k]`. Each vector is
/// oriented so that its first component with magnitude above
/// [`SIGN_THRESHOLD`] is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    /// Sorts the pairs descending by eigenvalue and applies the sign
    /// convention. Vectors are taken as given; they are not re-normalized.
    pub fn from_pairs(mut pairs: Vec<(f64, Vec<f64>)>) -> Self {
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (values, vectors) = pairs
            .into_iter()
            .map(|(v, mut e)| {
                apply_sign_convention(&mut e);
                (v, e)
            })
            .unzip();
        Self { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }

    /// `max_{i,j} |<e_i, e_j> - delta_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }

    /// `sum_k nu_k e_k e_k^T`.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let d = self.dim();
        let mut m = SymmetricMatrix::zeros(d);
        for i in 0..d {
            for j in i..d {
                let x = self.values.iter().zip(&self.vectors).map(|(nu, e)| nu * e[i] * e[j]).sum();
                m.set(i, j, x);
            }
        }
        m
    }
}

pub fn apply_sign_convention(e: &mut [f64]) {
    if let Some(first) = e.iter().find(|x| x.abs() > SIGN_THRESHOLD) {
        if *first < 0.0 {
            e.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Assembles `D + sqrt(D) (sum_k v_k v_k^T) sqrt(D)` with `D = diag(spectrum)`.
pub fn build_perturbed(spectrum: &Spectrum, perts: &PerturbationSet) -> Result<SymmetricMatrix> {
    let d = spectrum.dim();
    if perts.dim() != d {
        return Err(Error::DimensionMismatch { index: 0, len: perts.dim(), expected: d });
    }
    let roots: Vec<f64> = spectrum.lambdas().iter().map(|l| l.sqrt()).collect();
    let mut a = SymmetricMatrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let outer: f64 = perts.vectors().iter().map(|v| v[i] * v[j]).sum();
            let mut x = roots[i] * roots[j] * outer;
            if i == j {
                x += spectrum.get(i);
            }
            a.set(i, j, x);
        }
    }
    Ok(a)
}

/// Cyclic Jacobi diagonalization.
///
/// Rotations are skipped for entries already negligible relative to
/// `sqrt(|a_pp a_qq|)`. Iteration ends when a sweep has nothing left to
/// rotate, or [`POLISH_SWEEPS`] sweeps after the off-diagonal norm drops
/// below [`JACOBI_TOL`] times the norm of `a`.
pub fn jacobi_eig(a: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = SymmetricMatrix::identity(n).data;
    let norm = a.frobenius_norm();
    let mut polish = 0;
    let mut converged = norm == 0.0 || n < 2;

    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: m.off_diagonal_norm() });
        }
        sweeps += 1;
        let mut rotations = 0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m.get(p, q);
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                if apq.abs() <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() || apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                rotations += 1;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = (t * t + 1.0).sqrt().recip();
                let s = t * c;
                m.data[p * n + p] = app - t * apq;
                m.data[q * n + q] = aqq + t * apq;
                m.set(p, q, 0.0);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = m.get(r, p);
                    let arq = m.get(r, q);
                    m.set(r, p, c * arp - s * arq);
                    m.set(r, q, s * arp + c * arq);
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
        if rotations == 0 {
            converged = true;
        } else if m.off_diagonal_norm() <= JACOBI_TOL * norm {
            polish += 1;
            converged = polish > POLISH_SWEEPS;
        }
    }

    let pairs = (0..n).map(|k| (m.get(k, k), (0..n).map(|r| v[r * n + k]).collect())).collect();
    Ok(EigenDecomposition::from_pairs(pairs))
}

/// Rotates a general symmetric positive definite `b` into its eigenbasis.
///
/// Returns the spectrum of `b`, the vectors `P^T v_k`, and the decomposition
/// `b = P diag(spectrum) P^T` whose basis maps diagonal-coordinate results
/// back to the original frame.
pub fn general_to_diagonal(
    b: &SymmetricMatrix,
    perts: &PerturbationSet,
) -> Result<(Spectrum, PerturbationSet, EigenDecomposition)> {
    if perts.dim() != b.dim() {
        return Err(Error::DimensionMismatch { index: 0, len: perts.dim(), expected: b.dim() });
    }
    let eig = jacobi_eig(b)?;
    if let Some((index, &value)) = eig.values().iter().enumerate().find(|(_, &x)| x <= 0.0) {
        return Err(Error::NotPositiveDefinite { index, value });
    }
    let spectrum = Spectrum::new(eig.values().to_vec())?;
    let rotated = perts.vectors().iter().map(|v| eig.vectors().iter().map(|e| dot(e, v)).collect()).collect();
    let perts = PerturbationSet::new(b.dim(), rotated)?;
    Ok((spectrum, perts, eig))
}
