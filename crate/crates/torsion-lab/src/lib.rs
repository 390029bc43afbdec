//! Numerical laboratory for torsion functions on planar slit domains.
//!
//! The crate builds polygon-with-slit geometries (unit squares, rectangles,
//! regular-polygon disks, and comb domains: a unit square minus `n-1` vertical
//! teeth), solves the Dirichlet problem `-Δv = 1` and the principal eigenvalue
//! on rasterized grids, and evaluates the scalar functionals that control how
//! strongly the solution concentrates: efficiency (mean-to-max ratio), the
//! analogous ratio for the squared boundary distance, Hardy quotients, and
//! localisation ratios along shrinking superlevel sets of the distance
//! function. A stochastic module cross-validates the elliptic results with
//! walk-on-spheres estimates, exact first-passage-time sampling, and
//! eigenfunction survival series.
//!
//! Every inequality the crate checks is emitted as a named certificate with
//! both sides evaluated numerically; see the `experiment` module and the
//! `verify-all` subcommand of the bundled binary.
//!
//! Entry points:
//! - [`geometry::SlitDomain`] — exact planar geometry and rasterization
//! - [`elliptic::solve_torsion`], [`elliptic::principal_eigenvalue`]
//! - [`functionals::efficiency`], [`functionals::distance_efficiency`],
//!   [`functionals::hardy_quotient`]
//! - [`localisation::comb_sweep`] — comb-family experiments
//! - [`stochastic`] — Monte Carlo and closed-form probabilistic checks
//! - [`experiment::run`] — batch front-end used by the CLI

pub mod constants;
pub mod elliptic;
pub mod experiment;
pub mod functionals;
pub mod geometry;
pub mod grid;
pub mod localisation;
pub mod stochastic;

pub use geometry::{CombParams, Point, Segment, SlitDomain};
pub use grid::{GridDomain, ScalarField};
