//! Comb-family experiments: how much torsion mass concentrates on the
//! shrinking superlevel sets `{d >= 1/(2n)}` as the teeth multiply.

use crate::constants::{BESSEL_J0_SQ, HARDY_CONST_SIMPLY_CONNECTED, TORSION_EIG_PRODUCT_BOUND};
use crate::elliptic::{self, SolveError};
use crate::functionals::distance_norms_on_grid;
use crate::geometry::{self, CombParams, GeometryError, SlitDomain};
use crate::grid::{CellMask, GridDomain, ScalarField};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("invalid sweep config: {0}")]
    BadConfig(String),
}

/// Configuration of a comb sweep. Grid spacing per row is `h = 1/(n*q)`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub alpha: f64,
    pub c: f64,
    pub n_list: Vec<u32>,
    pub q: u32,
    pub tol: f64,
}

impl SweepConfig {
    pub fn new(alpha: f64, c: f64, n_list: Vec<u32>, q: u32, tol: f64) -> Result<Self, SweepError> {
        if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SweepError::BadConfig("n_list must be ascending and nonempty".into()));
        }
        if n_list.iter().any(|&n| n < 4) {
            return Err(SweepError::BadConfig("all n must be >= 4".into()));
        }
        if q < 8 {
            return Err(SweepError::BadConfig(format!("q must be >= 8, got {q}")));
        }
        CombParams::new(alpha, c, n_list[0])?;
        Ok(SweepConfig { alpha, c, n_list, q, tol })
    }
}

/// One comb of the sweep: efficiency, its two-sided bound, and the mass
/// fraction carried by `A_n = {d >= 1/(2n)}`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub eps: f64,
    pub h: f64,
    pub phi: f64,
    /// `∫_{A_n} v / ‖v‖₁` with both integrals over cell centers.
    pub ratio: f64,
    /// `|A_n|` from the cell mask.
    pub mask_measure: f64,
    pub lower_e40: f64,
    pub upper_e40: f64,
    pub bracket_pass: bool,
    /// Limit value `c³/(1+c³)` attached when `alpha = 2/3`.
    pub kappa_target: Option<f64>,
    /// True when `n < n_min(alpha, c)`, where the bounds are not guaranteed.
    pub pre_asymptotic: bool,
    /// Distance-mass fraction `∫_{A_n} d² / ∫_Ω d²` (used by trend checks).
    pub dist_mass_fraction: f64,
}

/// Fraction of the field's cell-quadrature mass carried by the masked cells.
///
/// Numerator and denominator use the same cell-center quadrature, so the full
/// mask gives exactly 1.
pub fn localisation_ratio(grid: &GridDomain, field: &ScalarField, mask: &CellMask) -> f64 {
    let mut masked = 0.0;
    let mut total = 0.0;
    for (cell, &on) in grid.cells().iter().zip(mask.flags()) {
        let v = grid.cell_value(field, cell);
        total += v;
        if on {
            masked += v;
        }
    }
    if total == 0.0 {
        return 0.0;
    }
    masked / total
}

/// Runs the full pipeline for each `n` in the config: build the comb, solve,
/// evaluate the efficiency bracket, and measure the `A_n` mass ratio.
///
/// Any solver failure aborts the sweep; no partial results are returned.
pub fn comb_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    let kappa_target = if (cfg.alpha - 2.0 / 3.0).abs() < 1e-12 {
        Some(cfg.c.powi(3) / (1.0 + cfg.c.powi(3)))
    } else {
        None
    };
    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let params = CombParams::new(cfg.alpha, cfg.c, n)?;
        let dom = SlitDomain::comb(params)?;
        let h = 1.0 / (n as f64 * cfg.q as f64);
        let grid = dom.rasterize(h)?;
        let (v, _) = elliptic::solve_torsion(&grid, cfg.tol)?;
        let norms = elliptic::field_norms(&grid, &v)?;
        let phi = norms.l1 / (grid.area * norms.linf);
        let eta = 0.5 / n as f64;
        let mask = geometry::superlevel_mask(&grid, eta);
        let ratio = localisation_ratio(&grid, &v, &mask);
        let (lower_e40, upper_e40) = comb_efficiency_bounds(cfg.alpha, cfg.c, n);
        let (d2_total, _) = distance_norms_on_grid(&grid);
        let d2_masked: f64 = grid
            .cells()
            .iter()
            .zip(mask.flags())
            .filter(|(_, &on)| on)
            .map(|(c, _)| c.dist * c.dist)
            .sum::<f64>()
            * h
            * h;
        rows.push(SweepRow {
            n,
            eps: params.eps(),
            h,
            phi,
            ratio,
            mask_measure: mask.measure(),
            lower_e40,
            upper_e40,
            bracket_pass: lower_e40 <= phi && phi <= upper_e40,
            kappa_target,
            pre_asymptotic: !params.is_asymptotic(),
            dist_mass_fraction: d2_masked / d2_total,
        });
    }
    Ok(rows)
}

/// Two-sided efficiency bound for the comb in terms of
/// `x = c·n^(-alpha) + c^(-2)·n^(2alpha-2)`:
/// `x/(3072·𝔠) <= Φ <= (64·j₀²/3)·x`, with the surrogate for `𝔠`.
pub fn comb_efficiency_bounds(alpha: f64, c: f64, n: u32) -> (f64, f64) {
    let nf = n as f64;
    let x = c * nf.powf(-alpha) + nf.powf(2.0 * alpha - 2.0) / (c * c);
    (x / (3072.0 * TORSION_EIG_PRODUCT_BOUND), 64.0 * BESSEL_J0_SQ / 3.0 * x)
}

/// One row of the near-boundary/deep-interior mass split certificate.
#[derive(Debug, Clone, Serialize)]
pub struct MassRow {
    pub eta: f64,
    /// `∫_{d<eta} v / ∫_{d>=eta} v` from the solved field.
    pub lhs: f64,
    /// `2m·c_H·eta²·|Ω| / ∫_{d>=eta} d²` plus its square root, from exact
    /// distance quadrature.
    pub rhs: f64,
    /// False when `{d >= eta}` carries no mass and the ratio is undefined.
    pub applicable: bool,
    pub pass: bool,
}

/// Evaluates both sides of the mass-split bound for each `eta`: the torsion
/// mass within distance `eta` of the boundary is controlled by the distance
/// mass far from it.
pub fn mass_decomposition(grid: &GridDomain, field: &ScalarField, eta_list: &[f64]) -> Vec<MassRow> {
    let hh = grid.h * grid.h;
    eta_list
        .iter()
        .map(|&eta| {
            let mut v_near = 0.0;
            let mut v_far = 0.0;
            let mut d2_far = 0.0;
            for cell in grid.cells() {
                let v = grid.cell_value(field, cell);
                if cell.dist >= eta {
                    v_far += v;
                    d2_far += cell.dist * cell.dist;
                } else {
                    v_near += v;
                }
            }
            v_near *= hh;
            v_far *= hh;
            d2_far *= hh;
            if v_far <= 0.0 || d2_far <= 0.0 {
                return MassRow { eta, lhs: f64::NAN, rhs: f64::NAN, applicable: false, pass: false };
            }
            let lhs = v_near / v_far;
            let base = 4.0 * HARDY_CONST_SIMPLY_CONNECTED * eta * eta * grid.area / d2_far;
            let rhs = base + base.sqrt();
            MassRow { eta, lhs, rhs, applicable: true, pass: lhs <= rhs }
        })
        .collect()
}
