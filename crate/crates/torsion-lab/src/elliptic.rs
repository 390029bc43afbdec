//! Discrete Dirichlet Laplacian on a [`GridDomain`]: matrix-free 5-point
//! stencil, conjugate-gradient torsion solve `-Δv = 1`, and the principal
//! eigenvalue by inverse power iteration.
//!
//! All reductions run over fixed-size chunks that are summed in a fixed
//! order, so results are bit-identical across runs and thread counts.

use crate::grid::{GridDomain, ScalarField, NO_NODE};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("field has {field} values but grid has {grid} interior nodes")]
    GridMismatch { field: usize, grid: usize },
    #[error("grid has no interior nodes")]
    EmptyInterior,
    #[error("tolerance must lie in (0, 1e-6], got {0}")]
    BadTolerance(f64),
    #[error(
        "conjugate gradients did not converge: {iterations} iterations, relative residual {relative_residual:.3e}"
    )]
    NonConvergence { iterations: usize, relative_residual: f64 },
    #[error(
        "inverse power iteration did not converge: {iterations} outer iterations, drift {drift:.3e}"
    )]
    EigenNonConvergence { iterations: usize, drift: f64 },
}

/// Convergence data for a torsion solve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveStats {
    pub iterations: usize,
    /// True residual `‖1 + Δ_h v‖ / ‖1‖` recomputed after the solve.
    pub relative_residual: f64,
    /// Discrete Dirichlet energy `½‖∇v‖² − ∫v`.
    pub energy: f64,
}

/// Principal Dirichlet eigenpair.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda1: f64,
    /// Eigenfunction normalized to `‖φ‖₂ = 1` in the grid inner product.
    pub field: ScalarField,
    /// `‖(-Δ_h)φ − λφ‖₂` in the grid norm.
    pub residual: f64,
    pub iterations: usize,
}

/// Discrete norms of a field: `l1 = h²Σ|v|`, `linf = max|v|`,
/// `l2sq = h²Σv²`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Norms {
    pub l1: f64,
    pub linf: f64,
    pub l2sq: f64,
}

const CHUNK: usize = 1 << 14;

/// Dot product with a deterministic reduction order.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| x * y).sum::<f64>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

fn sum(a: &[f64]) -> f64 {
    a.par_chunks(CHUNK)
        .map(|c| c.iter().sum::<f64>())
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// `out = (4·f − Σ neighbours) / h²` over interior nodes; Dirichlet and
/// exterior neighbours contribute 0.
fn apply_neg_laplacian(grid: &GridDomain, f: &[f64], out: &mut [f64]) {
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let table = grid.neighbor_table();
    out.par_chunks_mut(CHUNK)
        .zip(table.par_chunks(CHUNK))
        .zip(f.par_chunks(CHUNK))
        .for_each(|((o, nb), fc)| {
            for k in 0..o.len() {
                let [w, e, s, n] = nb[k];
                let mut acc = 4.0 * fc[k];
                if w != NO_NODE {
                    acc -= f[w as usize];
                }
                if e != NO_NODE {
                    acc -= f[e as usize];
                }
                if s != NO_NODE {
                    acc -= f[s as usize];
                }
                if n != NO_NODE {
                    acc -= f[n as usize];
                }
                o[k] = acc * inv_h2;
            }
        });
}

fn check_field(grid: &GridDomain, f: &ScalarField) -> Result<(), SolveError> {
    if f.len() != grid.num_interior() {
        return Err(SolveError::GridMismatch { field: f.len(), grid: grid.num_interior() });
    }
    Ok(())
}

/// Applies the negative discrete Laplacian `(-Δ_h f)` to a field.
pub fn apply_laplacian(grid: &GridDomain, f: &ScalarField) -> Result<ScalarField, SolveError> {
    check_field(grid, f)?;
    let mut out = vec![0.0; f.len()];
    apply_neg_laplacian(grid, &f.values, &mut out);
    Ok(ScalarField { values: out })
}

/// Conjugate gradients for `(-Δ_h) x = b`, starting from `x0`.
///
/// Returns the iteration count; the caller recomputes the true residual.
fn conjugate_gradient(
    grid: &GridDomain,
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<usize, SolveError> {
    let n = b.len();
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let mut r = vec![0.0; n];
    let mut q = vec![0.0; n];
    apply_neg_laplacian(grid, x, &mut q);
    r.par_chunks_mut(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .zip(q.par_chunks(CHUNK))
        .for_each(|((rc, bc), qc)| {
            for k in 0..rc.len() {
                rc[k] = bc[k] - qc[k];
            }
        });
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let target = rel_tol * b_norm;
    let mut iter = 0;
    while rs.sqrt() > target {
        if iter >= max_iter {
            return Err(SolveError::NonConvergence {
                iterations: iter,
                relative_residual: rs.sqrt() / b_norm,
            });
        }
        apply_neg_laplacian(grid, &p, &mut q);
        let alpha = rs / dot(&p, &q);
        x.par_chunks_mut(CHUNK).zip(p.par_chunks(CHUNK)).for_each(|(xc, pc)| {
            for k in 0..xc.len() {
                xc[k] += alpha * pc[k];
            }
        });
        r.par_chunks_mut(CHUNK).zip(q.par_chunks(CHUNK)).for_each(|(rc, qc)| {
            for k in 0..rc.len() {
                rc[k] -= alpha * qc[k];
            }
        });
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs;
        p.par_chunks_mut(CHUNK).zip(r.par_chunks(CHUNK)).for_each(|(pc, rc)| {
            for k in 0..pc.len() {
                pc[k] = rc[k] + beta * pc[k];
            }
        });
        rs = rs_new;
        iter += 1;
    }
    Ok(iter)
}

fn iteration_cap(n: usize) -> usize {
    (50.0 * (n as f64).sqrt()).ceil() as usize + 100
}

/// Solves the torsion problem `-Δ_h v = 1` with zero Dirichlet data.
///
/// Fails loudly if conjugate gradients stall before reaching the requested
/// relative residual. The returned field is non-negative for any converged
/// solve (discrete maximum principle); this is verified by the test suite,
/// not clamped.
pub fn solve_torsion(grid: &GridDomain, tol: f64) -> Result<(ScalarField, SolveStats), SolveError> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(SolveError::BadTolerance(tol));
    }
    let n = grid.num_interior();
    if n == 0 {
        return Err(SolveError::EmptyInterior);
    }
    let b = vec![1.0; n];
    let mut x = vec![0.0; n];
    let iterations = conjugate_gradient(grid, &b, &mut x, tol, iteration_cap(n))?;

    let mut q = vec![0.0; n];
    apply_neg_laplacian(grid, &x, &mut q);
    let mut res_sq = 0.0;
    for k in 0..n {
        let r = 1.0 - q[k];
        res_sq += r * r;
    }
    let relative_residual = res_sq.sqrt() / (n as f64).sqrt();
    let hh = grid.h * grid.h;
    let energy = hh * (0.5 * dot(&x, &q) - sum(&x));
    let field = ScalarField { values: x };
    debug_assert!(field.all_finite());
    Ok((field, SolveStats { iterations, relative_residual, energy }))
}

/// Principal Dirichlet eigenvalue by inverse power iteration, seeded with the
/// torsion solution (positive and boundary-compatible).
///
/// Each outer step is a conjugate-gradient solve; iteration stops when
/// successive Rayleigh quotients drift by less than `tol * lambda`. The
/// reported value is the discrete-operator eigenvalue; continuum comparisons
/// should state `h` rather than extrapolate.
pub fn principal_eigenvalue(grid: &GridDomain, tol: f64) -> Result<EigenResult, SolveError> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(SolveError::BadTolerance(tol));
    }
    let n = grid.num_interior();
    if n == 0 {
        return Err(SolveError::EmptyInterior);
    }
    let hh = grid.h * grid.h;
    let (seed, _) = solve_torsion(grid, tol.min(1e-8))?;
    let mut x = seed.values;
    normalize(&mut x, hh);

    let mut q = vec![0.0; n];
    apply_neg_laplacian(grid, &x, &mut q);
    let mut lambda = dot(&x, &q) / dot(&x, &x);
    let cap = iteration_cap(n);
    let inner_tol = 1e-8;
    let max_outer = 200;
    let mut drift = f64::INFINITY;
    for outer in 1..=max_outer {
        // warm start: y ≈ x/λ is already close to the solve target
        let mut y: Vec<f64> = x.iter().map(|v| v / lambda).collect();
        conjugate_gradient(grid, &x, &mut y, inner_tol, cap)?;
        normalize(&mut y, hh);
        x = y;
        apply_neg_laplacian(grid, &x, &mut q);
        let lambda_new = dot(&x, &q) / dot(&x, &x);
        drift = (lambda_new - lambda).abs();
        lambda = lambda_new;
        if drift < tol * lambda {
            let mut res_sq = 0.0;
            for k in 0..n {
                let r = q[k] - lambda * x[k];
                res_sq += r * r;
            }
            let residual = (hh * res_sq).sqrt();
            let field = ScalarField { values: x };
            return Ok(EigenResult { lambda1: lambda, field, residual, iterations: outer });
        }
    }
    Err(SolveError::EigenNonConvergence { iterations: max_outer, drift })
}

fn normalize(x: &mut [f64], hh: f64) {
    let norm = (hh * dot(x, x)).sqrt();
    if norm > 0.0 {
        let inv = 1.0 / norm;
        x.iter_mut().for_each(|v| *v *= inv);
    }
}

/// Discrete `L¹`, `L∞`, and squared `L²` norms of a field.
pub fn field_norms(grid: &GridDomain, f: &ScalarField) -> Result<Norms, SolveError> {
    check_field(grid, f)?;
    let hh = grid.h * grid.h;
    let mut l1 = 0.0;
    let mut linf: f64 = 0.0;
    let mut l2 = 0.0;
    for &v in &f.values {
        l1 += v.abs();
        linf = linf.max(v.abs());
        l2 += v * v;
    }
    Ok(Norms { l1: hh * l1, linf, l2sq: hh * l2 })
}
