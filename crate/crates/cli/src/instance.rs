//! Instance files.
//!
//! A TOML document with these keys:
//!
//! ```toml
//! dim = 2                      # dimension d
//! lambdas = [100.0, 1.0]       # eigenvalues of the base matrix, positive and descending
//! vectors = [[1.0, 1.0]]       # m perturbation vectors of length d (may be empty or omitted)
//! seed = 0                     # optional
//! recipe = "fixed"             # optional free-form tag
//! ```
//!
//! Integers are accepted wherever a real is expected. Violations are
//! reported with the line they occur on.

use std::fmt::Write as _;
use std::ops::Range;
use std::path::Path;

use rankm_core::harness::{Instance, Recipe};
use rankm_core::{PerturbationSet, Spectrum};
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    dim: Spanned<usize>,
    lambdas: Spanned<Vec<Spanned<Real>>>,
    #[serde(default)]
    vectors: Option<Spanned<Vec<Spanned<Vec<Real>>>>>,
    seed: Option<u64>,
    recipe: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Real {
    Float(f64),
    Int(i64),
}

impl Real {
    fn value(self) -> f64 {
        match self {
            Real::Float(x) => x,
            Real::Int(n) => n as f64,
        }
    }
}

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub spectrum: Spectrum,
    pub perts: PerturbationSet,
    pub seed: Option<u64>,
    pub recipe: Option<String>,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let raw: RawInstance = toml::from_str(text).map_err(|e| InstanceError::Invalid {
            line: e.span().map_or(1, |s| line_of(text, s)),
            message: e.message().trim().to_string(),
        })?;
        let invalid =
            |span: Range<usize>, message: String| InstanceError::Invalid { line: line_of(text, span), message };

        let dim = *raw.dim.get_ref();
        if dim == 0 {
            return Err(invalid(raw.dim.span(), "dim must be at least 1".into()));
        }
        let lambdas_span = raw.lambdas.span();
        let lambdas = raw.lambdas.into_inner();
        if lambdas.len() != dim {
            return Err(invalid(lambdas_span, format!("lambdas has {} entries, dim is {dim}", lambdas.len())));
        }
        for (i, l) in lambdas.iter().enumerate() {
            let x = l.get_ref().value();
            if !(x > 0.0 && x.is_finite()) {
                return Err(invalid(l.span(), format!("lambdas[{i}] = {x} is not a positive finite number")));
            }
        }
        for (i, w) in lambdas.windows(2).enumerate() {
            let (a, b) = (w[0].get_ref().value(), w[1].get_ref().value());
            if a < b {
                return Err(invalid(
                    w[1].span(),
                    format!("lambdas must be descending: lambdas[{i}] = {a} < lambdas[{}] = {b}", i + 1),
                ));
            }
        }
        let spectrum = Spectrum::new(lambdas.iter().map(|l| l.get_ref().value()).collect())
            .map_err(|e| invalid(lambdas_span.clone(), e.to_string()))?;

        let mut vectors = Vec::new();
        if let Some(vs) = raw.vectors {
            for (k, v) in vs.into_inner().into_iter().enumerate() {
                let span = v.span();
                let v: Vec<f64> = v.into_inner().into_iter().map(Real::value).collect();
                if v.len() != dim {
                    return Err(invalid(span, format!("vectors[{k}] has {} entries, dim is {dim}", v.len())));
                }
                if let Some(j) = v.iter().position(|x| !x.is_finite()) {
                    return Err(invalid(span, format!("vectors[{k}][{j}] is not finite")));
                }
                vectors.push(v);
            }
        }
        let perts = PerturbationSet::new(dim, vectors).expect("lengths checked above");
        Ok(Self { spectrum, perts, seed: raw.seed, recipe: raw.recipe })
    }

    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InstanceError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn from_instance(instance: &Instance) -> Self {
        Self {
            spectrum: instance.spectrum.clone(),
            perts: instance.perts.clone(),
            seed: Some(instance.seed),
            recipe: Some(instance.recipe.tag().to_string()),
        }
    }

    pub fn into_instance(self) -> Instance {
        let recipe = Recipe::Fixed(self.perts.vectors().to_vec());
        Instance { spectrum: self.spectrum, perts: self.perts, seed: self.seed.unwrap_or(0), recipe }
    }

    /// Serializes with 17 significant digits, which round-trips every `f64`.
    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim = {}", self.spectrum.dim());
        let _ = writeln!(out, "lambdas = [{}]", join(self.spectrum.lambdas(), exact));
        if self.perts.is_empty() {
            let _ = writeln!(out, "vectors = []");
        } else {
            let _ = writeln!(out, "vectors = [");
            for v in self.perts.vectors() {
                let _ = writeln!(out, "  [{}],", join(v, exact));
            }
            let _ = writeln!(out, "]");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed = {seed}");
        }
        if let Some(recipe) = &self.recipe {
            let _ = writeln!(out, "recipe = {recipe:?}");
        }
        out
    }
}

fn exact(x: f64) -> String {
    // `{:?}` prints the shortest representation that parses back exactly
    format!("{x:?}")
}

pub(crate) fn join(xs: &[f64], f: impl Fn(f64) -> String) -> String {
    xs.iter().map(|&x| f(x)).collect::<Vec<_>>().join(", ")
}
