//! Scalar functionals of a domain: torsion efficiency (mean-to-max ratio),
//! the analogous ratio for the squared boundary distance, the bracket
//! certificate tying the two together, and discrete Hardy quotients.

use crate::constants::{BESSEL_J0_SQ, TORSION_EIG_PRODUCT_BOUND};
use crate::elliptic::{self, SolveError};
use crate::geometry::{GeometryError, Point, SlitDomain};
use crate::grid::{GridDomain, ScalarField};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("Hardy quotient needs a nonzero test function")]
    ZeroDenominator,
}

/// Dimensionality of the plane; the functional constants below are specific
/// to planar domains.
const DIM: f64 = 2.0;

/// Torsion efficiency `Φ = ‖v‖₁ / (|Ω|·‖v‖_∞)` of a domain, solved at
/// spacing `h`.
pub fn efficiency(dom: &SlitDomain, h: f64, tol: f64) -> Result<f64, FunctionalError> {
    let grid = dom.rasterize(h)?;
    let (v, _) = elliptic::solve_torsion(&grid, tol)?;
    let norms = elliptic::field_norms(&grid, &v)?;
    Ok(norms.l1 / (grid.area * norms.linf))
}

/// Efficiency of the squared distance function,
/// `D = ‖d²‖₁ / (|Ω|·‖d²‖_∞)`, from exact geometric distances sampled at
/// `resolution` cell centers per unit length (midpoint quadrature); the sup
/// comes from the inradius estimate on the same lattice.
pub fn distance_efficiency(dom: &SlitDomain, resolution: u32) -> f64 {
    let res = resolution.max(1) as f64;
    let step = 1.0 / res;
    let (lo, hi) = dom.bounding_box();
    let nx = ((hi.x - lo.x) * res).ceil() as usize;
    let ny = ((hi.y - lo.y) * res).ceil() as usize;
    let mut l1 = 0.0;
    let mut sup = 0.0f64;
    for j in 0..ny {
        let y = lo.y + (j as f64 + 0.5) * step;
        for i in 0..nx {
            let x = lo.x + (i as f64 + 0.5) * step;
            let d = dom.distance_to_boundary(Point::new(x, y));
            l1 += d * d;
            sup = sup.max(d);
        }
    }
    l1 *= step * step;
    l1 / (dom.area() * sup * sup)
}

/// Constants entering the efficiency bracket, echoed in reports.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantsUsed {
    pub c_hardy: f64,
    pub frak_c_surrogate: f64,
    pub bessel_j0_sq: f64,
}

/// Two-sided certificate comparing the torsion efficiency with the
/// distance-squared efficiency.
#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyReport {
    pub label: String,
    pub phi: f64,
    pub dee: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass_lower: bool,
    pub pass_upper: bool,
    pub pass: bool,
    pub h: f64,
    pub constants_used: ConstantsUsed,
}

/// Checks `(2m·𝔠·c_H)⁻¹·D ≤ Φ ≤ c_H·j₀²·D` for a planar domain whose Hardy
/// constant is `c_hardy` (16 for any proper simply connected subset of the
/// plane).
///
/// The unknown sharp constant `𝔠 = sup λ₁‖v‖_∞` is replaced by its proven
/// upper surrogate `4 + 6·ln 2`, which only weakens the lower bound and keeps
/// the certificate sound.
pub fn efficiency_bracket_report(
    dom: &SlitDomain,
    c_hardy: f64,
    h: f64,
    tol: f64,
) -> Result<EfficiencyReport, FunctionalError> {
    let phi = efficiency(dom, h, tol)?;
    let resolution = (1.0 / h).round() as u32;
    let dee = distance_efficiency(dom, resolution);
    let lower = dee / (2.0 * DIM * TORSION_EIG_PRODUCT_BOUND * c_hardy);
    let upper = c_hardy * BESSEL_J0_SQ * dee;
    let pass_lower = lower <= phi;
    let pass_upper = phi <= upper;
    Ok(EfficiencyReport {
        label: dom.label().to_string(),
        phi,
        dee,
        lower,
        upper,
        pass_lower,
        pass_upper,
        pass: pass_lower && pass_upper,
        h,
        constants_used: ConstantsUsed {
            c_hardy,
            frak_c_surrogate: TORSION_EIG_PRODUCT_BOUND,
            bessel_j0_sq: BESSEL_J0_SQ,
        },
    })
}

/// Discrete Hardy quotient `‖∇_h w‖₂² / Σ h²·w²/d²` with exact node
/// distances.
///
/// The gradient is edge-based and includes edges from interior nodes to
/// Dirichlet neighbours (where `w = 0`); dropping those edges would
/// spuriously lower the quotient below the `H¹₀` form it discretizes.
pub fn hardy_quotient(grid: &GridDomain, w: &ScalarField) -> Result<f64, FunctionalError> {
    if w.len() != grid.num_interior() {
        return Err(FunctionalError::Solve(SolveError::GridMismatch {
            field: w.len(),
            grid: grid.num_interior(),
        }));
    }
    // numerator: h²·Σ_edges ((w_a - w_b)/h)² = Σ_edges (w_a - w_b)²,
    // each lattice edge with at least one interior endpoint counted once
    let mut num = 0.0;
    let value_at = |i: usize, j: usize| -> f64 {
        grid.interior_id(i, j).map_or(0.0, |k| w.values[k])
    };
    for k in 0..grid.num_interior() {
        let (i, j) = grid.interior_coords(k);
        let wk = w.values[k];
        // east and north edges from this node
        let de = wk - value_at(i + 1, j);
        let dn = wk - value_at(i, j + 1);
        num += de * de + dn * dn;
        // west/south edges only when that neighbour is not interior
        // (otherwise the neighbour's own east/north pass counts them)
        if grid.interior_id(i - 1, j).is_none() {
            num += wk * wk;
        }
        if grid.interior_id(i, j - 1).is_none() {
            num += wk * wk;
        }
    }
    let hh = grid.h * grid.h;
    let d = grid.node_distances();
    let mut den = 0.0;
    for k in 0..grid.num_interior() {
        let wk = w.values[k];
        den += wk * wk / (d[k] * d[k]);
    }
    den *= hh;
    if den == 0.0 {
        return Err(FunctionalError::ZeroDenominator);
    }
    Ok(num / den)
}

/// Distance quadrature over grid cells: `(‖d²‖₁, ‖d‖_∞)` with the sup taken
/// over cell centers.
pub fn distance_norms_on_grid(grid: &GridDomain) -> (f64, f64) {
    let hh = grid.h * grid.h;
    let mut l1 = 0.0;
    let mut sup = 0.0f64;
    for c in grid.cells() {
        l1 += c.dist * c.dist;
        sup = sup.max(c.dist);
    }
    (hh * l1, sup)
}
