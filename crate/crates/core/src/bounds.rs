//! Eigenvalue and eigenvector bounds for `A = D + sqrt(D) (sum_k v_k v_k^T) sqrt(D)`,
//! computed from the spectrum of `D` and the perturbation vectors only.
//!
//! Indices are zero-based throughout; a one-based count `d - i + 1` of the
//! trailing indices `i..d` is `d - i` here.

use std::fmt;

use crate::error::{Error, Result};
use crate::symmat::{inf_norm, PerturbationSet, Spectrum};

/// A check passes while `bound - observed >= -BOUND_SLACK * scale`.
pub const BOUND_SLACK: f64 = 1e-9;

/// `C_m` above this is reported as infinite.
pub const CM_OVERFLOW: f64 = 1e300;

/// Dimension, number of rank-one terms, and the two norms of the
/// perturbation that the bounds depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    d: usize,
    m: usize,
    v_bound: f64,
    max_inf_norm: f64,
}

impl BoundParams {
    /// `v_bound` must be at least `d^(-1/2)`. The raw infinity norm is
    /// taken equal to `v_bound`.
    pub fn new(d: usize, m: usize, v_bound: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptySpectrum);
        }
        let floor = (d as f64).sqrt().recip();
        if !v_bound.is_finite() || v_bound < floor * (1.0 - 4.0 * f64::EPSILON) {
            return Err(Error::InvalidArgument(format!("bound parameter V = {v_bound} is below 1/sqrt(d) = {floor}")));
        }
        Ok(Self { d, m, v_bound, max_inf_norm: v_bound })
    }

    pub fn from_perturbations(perts: &PerturbationSet) -> Self {
        Self { d: perts.dim(), m: perts.len(), v_bound: perts.v_bound(), max_inf_norm: perts.max_inf_norm() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `V = max(d^(-1/2), max_k |v_k|_inf)`.
    pub fn v_bound(&self) -> f64 {
        self.v_bound
    }

    /// `max_k |v_k|_inf`, unfloored.
    pub fn max_inf_norm(&self) -> f64 {
        self.max_inf_norm
    }
}

/// `sqrt(min(a, b) / max(a, b))`.
pub fn alpha(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha needs positive arguments, got ({a}, {b})")));
    }
    Ok((a.min(b) / a.max(b)).sqrt())
}

fn ratio_alpha(spectrum: &Spectrum, i: usize, j: usize) -> f64 {
    alpha(spectrum.get(i), spectrum.get(j)).expect("spectrum entries are positive")
}

fn check_index(spectrum: &Spectrum, i: usize) -> Result<()> {
    if i >= spectrum.dim() {
        return Err(Error::IndexOutOfRange { index: i, dim: spectrum.dim() });
    }
    Ok(())
}

/// `[lambda_i, lambda_i (1 + m d max_k |v_k|_inf^2)]`.
pub fn eigenvalue_bound_rankm(spectrum: &Spectrum, p: &BoundParams, i: usize) -> Result<(f64, f64)> {
    check_index(spectrum, i)?;
    let l = spectrum.get(i);
    let growth = p.m as f64 * p.d as f64 * p.max_inf_norm.powi(2);
    Ok((l, l * (1.0 + growth)))
}

/// Smallest maximizer of `|v_j|` over `j >= i` subject to
/// `lambda_j >= lambda_i (1 - sqrt(lambda_j / lambda_i) (d - i) |v|_inf |v_j|)`.
///
/// `j = i` always satisfies the constraint, so the result exists. Requires a
/// strictly descending spectrum and a `v` without zero entries.
pub fn j_index(spectrum: &Spectrum, v: &[f64], i: usize) -> Result<usize> {
    check_index(spectrum, i)?;
    let d = spectrum.dim();
    if v.len() != d {
        return Err(Error::DimensionMismatch { index: 0, len: v.len(), expected: d });
    }
    if let Some(index) = v.iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroEntry { index });
    }
    if let Some(index) = spectrum.lambdas().windows(2).position(|w| w[0] <= w[1]) {
        return Err(Error::NonStrictSpectrum { index });
    }
    let vinf = inf_norm(v);
    let tail = (d - i) as f64;
    let li = spectrum.get(i);
    let mut best = i;
    for j in i + 1..d {
        let lj = spectrum.get(j);
        let feasible = lj >= li * (1.0 - (lj / li).sqrt() * tail * vinf * v[j].abs());
        if feasible && v[j].abs() > v[best].abs() {
            best = j;
        }
    }
    Ok(best)
}

/// `lambda_i (1 + (d - i) |v|_inf |v_{j_i}|)` for a single rank-one term.
pub fn eigenvalue_bound_rank1(spectrum: &Spectrum, v: &[f64], i: usize) -> Result<f64> {
    let j = j_index(spectrum, v, i)?;
    let tail = (spectrum.dim() - i) as f64;
    Ok(spectrum.get(i) * (1.0 + tail * inf_norm(v) * v[j].abs()))
}

/// `max(2 (1 - rho)^(-1/2), 2 w / rho)`.
pub fn psi(rho: f64, w: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument(format!("rho = {rho} is outside (0, 1)")));
    }
    Ok((2.0 / (1.0 - rho).sqrt()).max(2.0 * w / rho))
}

/// Infimum of [`psi`] over `rho` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiInf {
    pub value: f64,
    /// The crossing point of the two branches, where the infimum is attained.
    pub rho: f64,
}

/// The two branches of `psi` cross where `rho^2 = w^2 (1 - rho)`, at
/// `rho* = 2w / (w + sqrt(w^2 + 4))`, giving `psi = w + sqrt(w^2 + 4)`.
pub fn psi_inf(w: f64) -> PsiInf {
    let root = (w * w + 4.0).sqrt();
    PsiInf { value: w + root, rho: 2.0 * w / (w + root) }
}

/// `min(1, 5 d^2 V^4 alpha(lambda_i, lambda_j))`, valid for `m = 1`.
pub fn eigvec_bound_rank1(spectrum: &Spectrum, p: &BoundParams, i: usize, j: usize) -> f64 {
    let d = p.d as f64;
    (5.0 * d * d * p.v_bound.powi(4) * ratio_alpha(spectrum, i, j)).min(1.0)
}

/// The sharper rank-one eigenvector bound
/// `W psi_inf(W) sqrt(r) / (1 - (1 + W) r)` with `W = (d - i) V^2` and
/// `r = min / max` of the two eigenvalues.
///
/// Applies only when `max > (1 + d V^2) min`; elsewhere, and wherever the
/// formula exceeds it, the result is the trivial bound 1.
pub fn eigvec_bound_rank1_refined(spectrum: &Spectrum, p: &BoundParams, i: usize, j: usize) -> f64 {
    if !refined_applies(spectrum, p, i, j) {
        return 1.0;
    }
    let (li, lj) = (spectrum.get(i), spectrum.get(j));
    let r = li.min(lj) / li.max(lj);
    let w = (p.d - i) as f64 * p.v_bound.powi(2);
    (w * psi_inf(w).value * r.sqrt() / (1.0 - (1.0 + w) * r)).min(1.0)
}

/// Whether `(i, j)` lies in the regime `max > (1 + d V^2) min`.
pub fn refined_applies(spectrum: &Spectrum, p: &BoundParams, i: usize, j: usize) -> bool {
    let (li, lj) = (spectrum.get(i), spectrum.get(j));
    li.max(lj) > (1.0 + p.d as f64 * p.v_bound.powi(2)) * li.min(lj)
}

/// `C_0 = 1`, `C_{k+1} = 5 d^7 V^4 C_k^5 sqrt(1 + d k V^2)`.
///
/// Returns `f64::INFINITY` once the value passes [`CM_OVERFLOW`].
pub fn cm_constant(p: &BoundParams) -> f64 {
    let d = p.d as f64;
    let v2 = p.v_bound * p.v_bound;
    let step = 5.0 * d.powi(7) * v2 * v2;
    let mut c = 1.0f64;
    for k in 0..p.m {
        c = step * c.powi(5) * (1.0 + d * k as f64 * v2).sqrt();
        if c.is_nan() || c > CM_OVERFLOW {
            return f64::INFINITY;
        }
    }
    c
}

/// `min(1, C_m alpha(lambda_i, lambda_j))`.
pub fn eigvec_bound_rankm(spectrum: &Spectrum, p: &BoundParams, i: usize, j: usize) -> f64 {
    (cm_constant(p) * ratio_alpha(spectrum, i, j)).min(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    EigenvalueRank1,
    EigenvalueRankM,
    EigvecRank1,
    EigvecRank1Refined,
    EigvecRankM,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::EigenvalueRank1,
        BoundKind::EigenvalueRankM,
        BoundKind::EigvecRank1,
        BoundKind::EigvecRank1Refined,
        BoundKind::EigvecRankM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::EigenvalueRank1 => "eigenvalue-rank1",
            BoundKind::EigenvalueRankM => "eigenvalue-rankm",
            BoundKind::EigvecRank1 => "eigvec-rank1",
            BoundKind::EigvecRank1Refined => "eigvec-rank1-refined",
            BoundKind::EigvecRankM => "eigvec-rankm",
        }
    }

    pub fn is_eigenvalue(self) -> bool {
        matches!(self, BoundKind::EigenvalueRank1 | BoundKind::EigenvalueRankM)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One checked inequality. For eigenvalue kinds `i == j` and `observed` is
/// `nu_i`; for eigenvector kinds `observed` is `|[e_i]_j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEntry {
    pub i: usize,
    pub j: usize,
    pub observed: f64,
    pub bound: f64,
    /// Lower end of an eigenvalue interval.
    pub lower: Option<f64>,
    /// `bound - observed`, or the smaller margin of an interval.
    pub slack: f64,
    pub tolerance: f64,
}

impl BoundEntry {
    pub fn passes(&self) -> bool {
        self.slack >= -self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub entries: Vec<BoundEntry>,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(kind: BoundKind, entries: Vec<BoundEntry>) -> Self {
        let pass = entries.iter().all(BoundEntry::passes);
        Self { kind, entries, pass, notes: Vec::new() }
    }

    pub fn worst(&self) -> Option<&BoundEntry> {
        self.entries.iter().min_by(|a, b| (a.slack + a.tolerance).total_cmp(&(b.slack + b.tolerance)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| !e.passes())
    }
}

fn eigenvalue_entry(i: usize, nu: f64, lower: f64, upper: f64, lambda: f64) -> BoundEntry {
    BoundEntry {
        i,
        j: i,
        observed: nu,
        bound: upper,
        lower: Some(lower),
        slack: (upper - nu).min(nu - lower),
        tolerance: BOUND_SLACK * lambda,
    }
}

/// Checks `values` against [`eigenvalue_bound_rankm`], with the upper ends
/// multiplied by `scale`.
pub fn report_eigenvalues_rankm(
    spectrum: &Spectrum,
    p: &BoundParams,
    values: &[f64],
    scale: f64,
) -> Result<BoundReport> {
    let entries = values
        .iter()
        .enumerate()
        .map(|(i, &nu)| {
            let (lo, hi) = eigenvalue_bound_rankm(spectrum, p, i)?;
            Ok(eigenvalue_entry(i, nu, lo, hi * scale, spectrum.get(i)))
        })
        .collect::<Result<_>>()?;
    Ok(BoundReport::new(BoundKind::EigenvalueRankM, entries))
}

/// Checks `values` against [`eigenvalue_bound_rank1`]. Returns `None` when
/// the bound's hypotheses (strict spectrum, no zero entry) do not hold.
pub fn report_eigenvalues_rank1(spectrum: &Spectrum, v: &[f64], values: &[f64], scale: f64) -> Option<BoundReport> {
    let p = BoundParams {
        d: spectrum.dim(),
        m: 1,
        v_bound: inf_norm(v).max((spectrum.dim() as f64).sqrt().recip()),
        max_inf_norm: inf_norm(v),
    };
    let mut tighter = 0;
    let mut entries = Vec::with_capacity(values.len());
    for (i, &nu) in values.iter().enumerate() {
        let bound = eigenvalue_bound_rank1(spectrum, v, i).ok()?;
        let (_, coarse) = eigenvalue_bound_rankm(spectrum, &p, i).ok()?;
        if bound < coarse {
            tighter += 1;
        }
        entries.push(eigenvalue_entry(i, nu, spectrum.get(i), bound * scale, spectrum.get(i)));
    }
    let mut report = BoundReport::new(BoundKind::EigenvalueRank1, entries);
    report.notes.push(format!("tighter than the rank-m interval at {tighter} of {} indices", values.len()));
    Some(report)
}

/// Checks `|[e_i]_j|` for every pair, `vectors[i]` being the unit
/// eigenvector of the `i`-th largest eigenvalue in diagonal coordinates.
pub fn report_eigvecs(
    kind: BoundKind,
    spectrum: &Spectrum,
    p: &BoundParams,
    vectors: &[Vec<f64>],
    scale: f64,
) -> BoundReport {
    let bound_fn: fn(&Spectrum, &BoundParams, usize, usize) -> f64 = match kind {
        BoundKind::EigvecRank1 => eigvec_bound_rank1,
        BoundKind::EigvecRank1Refined => eigvec_bound_rank1_refined,
        BoundKind::EigvecRankM => eigvec_bound_rankm,
        _ => panic!("{kind} is not an eigenvector bound"),
    };
    let d = spectrum.dim();
    let mut entries = Vec::with_capacity(d * d);
    for (i, e) in vectors.iter().enumerate() {
        for (j, x) in e.iter().enumerate() {
            let bound = bound_fn(spectrum, p, i, j) * scale;
            let observed = x.abs();
            entries.push(BoundEntry {
                i,
                j,
                observed,
                bound,
                lower: None,
                slack: bound - observed,
                tolerance: BOUND_SLACK * bound.max(1.0),
            });
        }
    }
    let mut report = BoundReport::new(kind, entries);
    if kind == BoundKind::EigvecRankM && cm_constant(p).is_infinite() {
        report.notes.push(format!("C_{} exceeds {CM_OVERFLOW:e}; bound is vacuous", p.m));
    }
    if kind == BoundKind::EigvecRank1Refined {
        let applicable = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| refined_applies(spectrum, p, i, j))
            .count();
        report.notes.push(format!("sharper formula applies to {applicable} of {} pairs", d * d));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(l: &[f64]) -> Spectrum {
        Spectrum::new(l.to_vec()).unwrap()
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(3.7, 3.7).unwrap(), 1.0);
        assert_eq!(alpha(100.0, 1.0).unwrap(), 0.1);
        assert_eq!(alpha(1.0, 100.0).unwrap(), 0.1);
        assert!(alpha(0.0, 1.0).is_err());
        assert!(alpha(1.0, -2.0).is_err());
    }

    #[test]
    fn params_floor() {
        assert!(BoundParams::new(4, 1, 0.49).is_err());
        assert!(BoundParams::new(4, 1, 0.5).is_ok());
        assert!(BoundParams::new(3, 1, 3f64.sqrt().recip()).is_ok());
    }

    #[test]
    fn eigenvalue_interval() {
        let s = spec(&[100.0, 1.0]);
        let p = BoundParams::new(2, 0, 1.0).unwrap();
        assert_eq!(eigenvalue_bound_rankm(&s, &p, 0).unwrap(), (100.0, 100.0));
        let p = BoundParams::new(2, 1, 1.0).unwrap();
        assert_eq!(eigenvalue_bound_rankm(&s, &p, 0).unwrap(), (100.0, 300.0));
        assert!(eigenvalue_bound_rankm(&s, &p, 2).is_err());
    }

    #[test]
    fn j_index_cases() {
        let s = spec(&[100.0, 1.0]);
        assert_eq!(j_index(&s, &[1.0, 1.0], 0).unwrap(), 0);
        assert_eq!(j_index(&s, &[1.0, 1.0], 1).unwrap(), 1);
        let eps = 1e-6;
        let s = spec(&[1.0, 1.0 - eps, 1.0 - 2.0 * eps]);
        assert_eq!(j_index(&s, &[0.1, 0.2, 0.3], 0).unwrap(), 2);
        // ties go to the smallest index
        assert_eq!(j_index(&s, &[0.3, 0.3, 0.3], 0).unwrap(), 0);
    }

    #[test]
    fn j_index_errors() {
        let s = spec(&[3.0, 2.0, 1.0]);
        assert_eq!(j_index(&s, &[1.0, 0.0, 1.0], 0), Err(Error::ZeroEntry { index: 1 }));
        let s = spec(&[3.0, 2.0, 2.0]);
        assert_eq!(j_index(&s, &[1.0, 1.0, 1.0], 0), Err(Error::NonStrictSpectrum { index: 1 }));
    }

    #[test]
    fn rank1_eigenvalue_bound() {
        let s = spec(&[100.0, 1.0]);
        assert_eq!(eigenvalue_bound_rank1(&s, &[1.0, 1.0], 0).unwrap(), 300.0);
        // at the last index only j = d remains: lambda_d (1 + |v|_inf |v_d|)
        let s = spec(&[50.0, 7.0, 1.0]);
        let v = [0.2, -0.5, 0.8];
        assert_eq!(eigenvalue_bound_rank1(&s, &v, 2).unwrap(), 1.0 + 0.8 * 0.8);
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(0.5, 1.0).unwrap(), 4.0);
        assert!((psi(0.5, 0.1).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!(psi(0.0, 1.0).is_err());
        assert!(psi(1.0, 1.0).is_err());
        let rho = (5f64.sqrt() - 1.0) / 2.0;
        assert!((psi(rho, 1.0).unwrap() - 3.236068).abs() < 1e-6);
    }

    #[test]
    fn psi_inf_closed_form() {
        let r = psi_inf(1.0);
        assert!((r.rho - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!((r.value - 2.0 / r.rho).abs() < 1e-14);
        assert!((r.value - 3.236068).abs() < 1e-6);
        let r = psi_inf(2.0);
        assert!((r.rho - (8f64.sqrt() - 2.0)).abs() < 1e-15);
        assert!((r.value - 4.828427).abs() < 1e-6);
        assert!((psi_inf(1e-12).value - 2.0).abs() < 1e-11);
        assert!(psi_inf(2.0).value > psi_inf(1.0).value);
    }

    #[test]
    fn psi_inf_is_the_minimum() {
        for &w in &[0.05, 0.3, 1.0, 2.5, 10.0] {
            let best = psi_inf(w);
            let at_cross = psi(best.rho, w).unwrap();
            assert!((at_cross - best.value).abs() < 1e-12 * best.value);
            for k in 1..1000 {
                let rho = k as f64 / 1000.0;
                assert!(psi(rho, w).unwrap() >= best.value * (1.0 - 1e-14));
            }
        }
    }

    #[test]
    fn rank1_eigvec_bound() {
        let p = BoundParams::new(2, 1, 1.0).unwrap();
        let s = spec(&[1e6, 1.0]);
        assert!((eigvec_bound_rank1(&s, &p, 0, 1) - 0.02).abs() < 1e-15);
        assert_eq!(eigvec_bound_rank1(&s, &p, 0, 0), 1.0);
        let s = spec(&[1e4, 1.0]);
        assert!((eigvec_bound_rank1(&s, &p, 0, 1) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn refined_values() {
        let p = BoundParams::new(2, 1, 1.0).unwrap();
        let s = spec(&[1e6, 1.0]);
        let b = eigvec_bound_rank1_refined(&s, &p, 0, 1);
        let expected = 2.0 * (2.0 + 8f64.sqrt()) / (1.0 - 3e-6) * 1e-3;
        assert!((b - expected).abs() < 1e-15);
        assert!((b - 0.009657).abs() < 1e-6);
        // boundary: max / min = 1 + d V^2 exactly
        let s = spec(&[3.0, 1.0]);
        assert!(!refined_applies(&s, &p, 0, 1));
        assert_eq!(eigvec_bound_rank1_refined(&s, &p, 0, 1), 1.0);
        // just inside the regime the formula exceeds 1 and is capped
        let s = spec(&[3.0001, 1.0]);
        assert!(refined_applies(&s, &p, 0, 1));
        assert_eq!(eigvec_bound_rank1_refined(&s, &p, 0, 1), 1.0);
    }

    #[test]
    fn cm_recursion() {
        assert_eq!(cm_constant(&BoundParams::new(2, 0, 1.0).unwrap()), 1.0);
        assert_eq!(cm_constant(&BoundParams::new(2, 1, 1.0).unwrap()), 640.0);
        // 5 * 128 * 640^5 * sqrt(3) = 640^6 sqrt(3) = 68719476736 * 10^6 * sqrt(3)
        let c2 = cm_constant(&BoundParams::new(2, 2, 1.0).unwrap());
        let exact = 68_719_476_736e6 * 3f64.sqrt();
        assert!((c2 - exact).abs() <= 4.0 * f64::EPSILON * exact);
        assert!((c2 / 1.19e17 - 1.0).abs() < 1e-2);
        assert_eq!(cm_constant(&BoundParams::new(20, 5, 2.0).unwrap()), f64::INFINITY);
    }

    #[test]
    fn rankm_eigvec_bound() {
        let s = spec(&[1e8, 1.0]);
        let p = BoundParams::new(2, 1, 1.0).unwrap();
        assert!((eigvec_bound_rankm(&s, &p, 0, 1) - 0.064).abs() < 1e-15);
        let p0 = BoundParams::new(2, 0, 1.0).unwrap();
        assert_eq!(eigvec_bound_rankm(&s, &p0, 0, 0), 1.0);
        assert_eq!(eigvec_bound_rankm(&s, &p0, 1, 0), 1e-4);
        let p = BoundParams::new(20, 5, 2.0).unwrap();
        assert_eq!(eigvec_bound_rankm(&s, &p, 0, 1), 1.0);
    }

    #[test]
    fn report_scaling_flags_violations() {
        let s = spec(&[4.0, 1.0]);
        let p = BoundParams::new(2, 0, 1.0).unwrap();
        let basis = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let r = report_eigvecs(BoundKind::EigvecRankM, &s, &p, &basis, 1.0);
        assert!(r.pass);
        let r = report_eigvecs(BoundKind::EigvecRankM, &s, &p, &basis, 0.9);
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 2);
        let r = report_eigenvalues_rankm(&s, &p, &[4.0, 1.0], 0.9).unwrap();
        assert!(!r.pass);
        let r = report_eigenvalues_rankm(&s, &p, &[4.0, 1.0], 1.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.worst().unwrap().slack, 0.0);
    }

    #[test]
    fn rank1_report_requires_hypotheses() {
        let s = spec(&[2.0, 2.0]);
        assert!(report_eigenvalues_rank1(&s, &[1.0, 1.0], &[6.0, 2.0], 1.0).is_none());
        let s = spec(&[2.0, 1.0]);
        assert!(report_eigenvalues_rank1(&s, &[1.0, 0.0], &[4.0, 1.0], 1.0).is_none());
        // [[4, sqrt 2], [sqrt 2, 2]] has eigenvalues 3 +- sqrt 3
        let r3 = 3f64.sqrt();
        let r = report_eigenvalues_rank1(&s, &[1.0, 1.0], &[3.0 + r3, 3.0 - r3], 1.0).unwrap();
        assert!(r.pass);
    }
}
