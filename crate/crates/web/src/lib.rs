//! Browser bindings. Each exported function has a plain Rust twin so the
//! logic is testable without a JS host.

use rankm_core::bounds::{cm_constant, psi_inf, BoundParams};
use rankm_core::harness::{certify, fit_slope, gen_instance, log_grid, scan, Coordinate, Recipe};
use rankm_core::BoundKind;
use wasm_bindgen::prelude::*;

/// One scan curve as parallel columns.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    lambda1: Vec<f64>,
    ratio: Vec<f64>,
    observed: Vec<f64>,
    bound: Vec<f64>,
    slope: f64,
    rms: f64,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn lambda1(&self) -> Vec<f64> {
        self.lambda1.clone()
    }

    /// `lambda_1 / lambda_j`.
    #[wasm_bindgen(getter)]
    pub fn ratio(&self) -> Vec<f64> {
        self.ratio.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn observed(&self) -> Vec<f64> {
        self.observed.clone()
    }

    /// Tightest applicable upper bound at each point.
    #[wasm_bindgen(getter)]
    pub fn bound(&self) -> Vec<f64> {
        self.bound.clone()
    }

    /// Fitted log-log slope, NaN when too few points qualify.
    #[wasm_bindgen(getter)]
    pub fn slope(&self) -> f64 {
        self.slope
    }

    #[wasm_bindgen(getter)]
    pub fn rms(&self) -> f64 {
        self.rms
    }
}

pub fn scan_curve_native(
    d: usize,
    m: usize,
    last: bool,
    from_exp: f64,
    to_exp: f64,
    count: usize,
    seed: u64,
) -> Result<Curve, String> {
    let coordinate = if last { Coordinate::Last } else { Coordinate::Second };
    let grid = log_grid(from_exp, to_exp, count);
    let records = scan(d, m, coordinate, &grid, seed, &Recipe::Gaussian).map_err(|e| e.to_string())?;
    let fit = fit_slope(&records).ok();
    Ok(Curve {
        lambda1: records.iter().map(|r| r.lambda1).collect(),
        ratio: records.iter().map(|r| r.ratio).collect(),
        observed: records.iter().map(|r| r.observed).collect(),
        bound: records.iter().map(|r| r.bound_rank1.map_or(r.bound_rankm, |b| b.min(r.bound_rankm))).collect(),
        slope: fit.map_or(f64::NAN, |f| f.slope),
        rms: fit.map_or(f64::NAN, |f| f.residual_rms),
    })
}

/// Follows `|[e_1]_j|` (j = 2 or j = d) over `count` log-spaced values of
/// `lambda_1` between `10^from_exp` and `10^to_exp`.
#[wasm_bindgen]
pub fn scan_curve(
    d: usize,
    m: usize,
    last: bool,
    from_exp: f64,
    to_exp: f64,
    count: usize,
    seed: u64,
) -> Result<Curve, JsError> {
    scan_curve_native(d, m, last, from_exp, to_exp, count, seed).map_err(|e| JsError::new(&e))
}

pub fn bounds_table_native(d: usize, m: usize, lambda1: f64, seed: u64) -> Result<String, String> {
    let instance = gen_instance(d, m, lambda1, seed).map_err(|e| e.to_string())?;
    let cert = certify(&instance, 1.0).map_err(|e| e.to_string())?;
    let mut out = String::from("bound,i,j,observed,bound_value,slack,pass\n");
    for kind in BoundKind::ALL {
        let Some(report) = cert.report(kind) else { continue };
        for e in &report.entries {
            out.push_str(&format!(
                "{},{},{},{:.6e},{:.6e},{:.3e},{}\n",
                kind.name(),
                e.i + 1,
                e.j + 1,
                e.observed,
                e.bound,
                e.slack,
                e.passes()
            ));
        }
    }
    Ok(out)
}

/// CSV of every bound check on the generated instance `(d, m, lambda_1, seed)`.
#[wasm_bindgen]
pub fn bounds_table(d: usize, m: usize, lambda1: f64, seed: u64) -> Result<String, JsError> {
    bounds_table_native(d, m, lambda1, seed).map_err(|e| JsError::new(&e))
}

/// `[C_m, psi_inf(W), rho*(W)]` for dimension `d`, rank `m`, entry bound `v`
/// and the top eigenvector's weight `W = d v^2`.
#[wasm_bindgen]
pub fn constants(d: usize, m: usize, v: f64) -> Result<Vec<f64>, JsError> {
    let p = BoundParams::new(d, m, v).map_err(|e| JsError::new(&e.to_string()))?;
    let w = d as f64 * v * v;
    let psi = psi_inf(w);
    Ok(vec![cm_constant(&p), psi.value, psi.rho])
}
