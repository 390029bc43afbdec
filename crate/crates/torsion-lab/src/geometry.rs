//! Exact planar geometry: polygon-with-slit domains, boundary distance,
//! inradius, rasterization onto Dirichlet grids, and distance superlevel
//! masks.
//!
//! Slits are zero-width closed segments removed from the open polygon. All
//! distance and measure quantities are computed from the exact geometry;
//! rasterization thickens slits to one-node-wide Dirichlet lines only for the
//! discrete solvers.

use crate::grid::{Cell, CellMask, GridDomain, NodeClass};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for "point lies on a boundary feature" tests and for
/// grid/slit alignment checks, in length units.
pub const ALIGN_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("outer polygon must have at least 3 vertices")]
    TooFewVertices,
    #[error("outer polygon must be counterclockwise with positive area")]
    NotCounterclockwise,
    #[error("outer polygon is self-intersecting")]
    SelfIntersecting,
    #[error("slit {0} is degenerate (zero length)")]
    DegenerateSlit(usize),
    #[error("slit {0} leaves the closure of the outer polygon")]
    SlitOutsideDomain(usize),
    #[error("comb teeth of length 1 - eps require eps < 1, got eps = {0}")]
    TeethTooLong(f64),
    #[error("spacing {h} does not divide the bounding box side {side} (within {ALIGN_TOL})")]
    SpacingMismatch { h: f64, side: f64 },
    #[error("slit {index} does not lie on a grid line for spacing {h}; refusing to rasterize")]
    SlitMisaligned { index: usize, h: f64 },
    #[error("slit {0} is not axis-aligned; rasterization requires axis-aligned slits")]
    SlitNotAxisAligned(usize),
    #[error("invalid comb parameters: {0}")]
    BadCombParams(String),
}

/// Planar point in length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from(t: (f64, f64)) -> Self {
        Point { x: t.0, y: t.1 }
    }
}

impl From<Point> for (f64, f64) {
    fn from(p: Point) -> Self {
        (p.x, p.y)
    }
}

/// Closed line segment between two points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(Point, Point)", into = "(Point, Point)")]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn len(&self) -> f64 {
        self.a.dist(self.b)
    }

    fn is_vertical(&self) -> bool {
        (self.a.x - self.b.x).abs() <= ALIGN_TOL
    }

    fn is_horizontal(&self) -> bool {
        (self.a.y - self.b.y).abs() <= ALIGN_TOL
    }
}

impl From<(Point, Point)> for Segment {
    fn from(t: (Point, Point)) -> Self {
        Segment { a: t.0, b: t.1 }
    }
}

impl From<Segment> for (Point, Point) {
    fn from(s: Segment) -> Self {
        (s.a, s.b)
    }
}

/// Squared distance from `p` to the closed segment `a`-`b`.
#[inline]
pub fn point_segment_dist_sq(p: Point, a: Point, b: Point) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let px = p.x - a.x;
    let py = p.y - a.y;
    let len_sq = dx * dx + dy * dy;
    let mut t = if len_sq > 0.0 { (px * dx + py * dy) / len_sq } else { 0.0 };
    t = t.clamp(0.0, 1.0);
    let ex = px - t * dx;
    let ey = py - t * dy;
    ex * ex + ey * ey
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// True if open interiors of the two segments cross (shared endpoints or
/// touching does not count).
fn segments_properly_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 > 0.0 && d2 < 0.0 || d1 < 0.0 && d2 > 0.0)
        && (d3 > 0.0 && d4 < 0.0 || d3 < 0.0 && d4 > 0.0)
}

/// Even-odd crossing test. Only reliable for points that are not on the
/// polygon boundary; callers screen those out first via a distance test.
fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// Comb family parameters: teeth shrink as `eps = c * n^(-alpha)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CombParams {
    pub alpha: f64,
    pub c: f64,
    pub n: u32,
}

impl CombParams {
    pub fn new(alpha: f64, c: f64, n: u32) -> Result<Self, GeometryError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GeometryError::BadCombParams(format!(
                "alpha must be in (0,1), got {alpha}"
            )));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(GeometryError::BadCombParams(format!("c must be positive, got {c}")));
        }
        if n < 1 {
            return Err(GeometryError::BadCombParams("n must be >= 1".into()));
        }
        Ok(CombParams { alpha, c, n })
    }

    /// Tooth shortfall `eps = c * n^(-alpha)`; teeth have length `1 - eps`.
    pub fn eps(&self) -> f64 {
        self.c * (self.n as f64).powf(-self.alpha)
    }

    /// Smallest `n` with `n^alpha >= 2c` and `c * n^(1-alpha) >= 2`; the comb
    /// bounds below are only asserted from this index on. Always `>= 4`.
    pub fn n_min(&self) -> u32 {
        let a = (2.0 * self.c).powf(1.0 / self.alpha);
        let b = (2.0 / self.c).powf(1.0 / (1.0 - self.alpha));
        let mut n = (a.max(b).floor() as i64 - 2).max(1) as u64;
        let holds = |n: u64| {
            let nf = n as f64;
            nf.powf(self.alpha) >= 2.0 * self.c && self.c * nf.powf(1.0 - self.alpha) >= 2.0
        };
        while !holds(n) {
            n += 1;
        }
        debug_assert!(n >= 4);
        n as u32
    }

    /// True when `n >= n_min`, i.e. the asymptotic bounds apply.
    pub fn is_asymptotic(&self) -> bool {
        self.n >= self.n_min()
    }
}

/// Planar polygon with zero-width slit segments removed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlitDomain {
    outer: Vec<Point>,
    #[serde(default)]
    slits: Vec<Segment>,
    #[serde(default)]
    label: String,
}

impl SlitDomain {
    /// Validates the polygon (simple, counterclockwise, positive area) and
    /// checks that every slit stays within its closure.
    pub fn new(
        outer: Vec<Point>,
        slits: Vec<Segment>,
        label: impl Into<String>,
    ) -> Result<Self, GeometryError> {
        if outer.len() < 3 {
            return Err(GeometryError::TooFewVertices);
        }
        let signed = signed_area(&outer);
        if signed <= 0.0 {
            return Err(GeometryError::NotCounterclockwise);
        }
        let n = outer.len();
        for i in 0..n {
            for j in (i + 1)..n {
                // skip adjacent edges (they share an endpoint)
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a1, a2) = (outer[i], outer[(i + 1) % n]);
                let (b1, b2) = (outer[j], outer[(j + 1) % n]);
                if segments_properly_intersect(a1, a2, b1, b2) {
                    return Err(GeometryError::SelfIntersecting);
                }
            }
        }
        let dom = SlitDomain { outer, slits: Vec::new(), label: label.into() };
        let mut dom = dom;
        for (k, s) in slits.iter().enumerate() {
            if s.len() <= 0.0 {
                return Err(GeometryError::DegenerateSlit(k));
            }
            for &p in &[s.a, s.b] {
                let on_boundary = dom.outer_dist_sq(p) <= ALIGN_TOL * ALIGN_TOL;
                if !on_boundary && !point_in_polygon(&dom.outer, p) {
                    return Err(GeometryError::SlitOutsideDomain(k));
                }
            }
            let n = dom.outer.len();
            for i in 0..n {
                if segments_properly_intersect(s.a, s.b, dom.outer[i], dom.outer[(i + 1) % n]) {
                    return Err(GeometryError::SlitOutsideDomain(k));
                }
            }
        }
        dom.slits = slits;
        Ok(dom)
    }

    pub fn unit_square() -> Self {
        SlitDomain::rectangle(1.0, 1.0, "unit-square").expect("unit square is valid")
    }

    /// Axis-aligned rectangle `(0, width) x (0, height)`.
    pub fn rectangle(width: f64, height: f64, label: &str) -> Result<Self, GeometryError> {
        SlitDomain::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(width, 0.0),
                Point::new(width, height),
                Point::new(0.0, height),
            ],
            Vec::new(),
            label,
        )
    }

    /// Regular polygon approximation of the disk, centered at the origin.
    /// The vertex count should be divisible by 4 so the bounding box is
    /// exactly `[-r, r]^2`.
    pub fn regular_polygon(sides: u32, circumradius: f64) -> Result<Self, GeometryError> {
        let n = sides.max(3) as usize;
        let outer = (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Point::new(circumradius * th.cos(), circumradius * th.sin())
            })
            .collect();
        SlitDomain::new(outer, Vec::new(), format!("regular-{sides}-gon"))
    }

    /// Unit square minus `n - 1` vertical teeth of length `1 - eps` rooted at
    /// the bottom edge, at abscissae `k/n`.
    ///
    /// Emits a warning (not an error) when `n` is below the asymptotic
    /// threshold `n_min`, since the comb bounds are not guaranteed there.
    pub fn comb(params: CombParams) -> Result<Self, GeometryError> {
        let eps = params.eps();
        if eps >= 1.0 {
            return Err(GeometryError::TeethTooLong(eps));
        }
        if !params.is_asymptotic() {
            log::warn!(
                "comb n = {} is below n_min = {}; asymptotic bounds not guaranteed",
                params.n,
                params.n_min()
            );
        }
        let n = params.n as usize;
        let slits = (1..n)
            .map(|k| {
                let x = k as f64 / n as f64;
                Segment::new(Point::new(x, 0.0), Point::new(x, 1.0 - eps))
            })
            .collect();
        let label = format!("comb-n{}-alpha{}-c{}", params.n, params.alpha, params.c);
        let mut dom = SlitDomain::unit_square();
        dom.slits = slits;
        dom.label = label;
        Ok(dom)
    }

    /// Copy of the domain with extra slits appended (validated).
    pub fn with_extra_slits(&self, extra: &[Segment]) -> Result<Self, GeometryError> {
        let mut slits = self.slits.clone();
        slits.extend_from_slice(extra);
        SlitDomain::new(self.outer.clone(), slits, self.label.clone())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn slits(&self) -> &[Segment] {
        &self.slits
    }

    /// Exact area of the open set. Slits have measure zero, so this is the
    /// polygon area.
    pub fn area(&self) -> f64 {
        signed_area(&self.outer)
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.outer {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    fn outer_dist_sq(&self, p: Point) -> f64 {
        let n = self.outer.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let d = point_segment_dist_sq(p, self.outer[i], self.outer[(i + 1) % n]);
            if d < best {
                best = d;
            }
        }
        best
    }

    /// True if `p` lies in the open set (strictly inside the polygon and not
    /// on a slit).
    pub fn contains(&self, p: Point) -> bool {
        self.distance_to_boundary(p) > 0.0
    }

    /// Euclidean distance from `p` to the nearest boundary feature (outer
    /// edges and slits). Returns 0 for points outside the domain or on the
    /// boundary.
    ///
    /// Exhaustive minimization over the segment list; segment counts stay in
    /// the hundreds, so no spatial index is used.
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        let mut best = self.outer_dist_sq(p);
        if best > 0.0 && !point_in_polygon(&self.outer, p) {
            return 0.0;
        }
        for s in &self.slits {
            let d = point_segment_dist_sq(p, s.a, s.b);
            if d < best {
                best = d;
            }
        }
        best.sqrt()
    }

    /// Lattice maximum of the boundary distance over cell centers at
    /// `resolution` samples per unit length.
    ///
    /// The true inradius lies in `[value, value + tol]` where `tol` is half
    /// the lattice cell diagonal (the distance function is 1-Lipschitz).
    pub fn inradius(&self, resolution: u32) -> Inradius {
        let res = resolution.max(1) as f64;
        let step = 1.0 / res;
        let (lo, hi) = self.bounding_box();
        let nx = ((hi.x - lo.x) * res).ceil() as usize;
        let ny = ((hi.y - lo.y) * res).ceil() as usize;
        let value = (0..ny)
            .into_par_iter()
            .map(|j| {
                let y = lo.y + (j as f64 + 0.5) * step;
                let mut row_best = 0.0f64;
                for i in 0..nx {
                    let x = lo.x + (i as f64 + 0.5) * step;
                    let d = self.distance_to_boundary(Point::new(x, y));
                    if d > row_best {
                        row_best = d;
                    }
                }
                row_best
            })
            .reduce(|| 0.0, f64::max);
        Inradius { value, tol: step * std::f64::consts::FRAC_1_SQRT_2 }
    }

    /// Rasterizes the domain onto a square lattice of spacing `h`.
    ///
    /// Nodes strictly inside and off every slit become interior unknowns;
    /// nodes on the outer boundary or on a slit (tip included) are Dirichlet;
    /// the rest are exterior. Slits must be axis-aligned and lie exactly on
    /// grid lines, otherwise the discrete domain would leak across them and
    /// the rasterization is refused.
    pub fn rasterize(&self, h: f64) -> Result<GridDomain, GeometryError> {
        let (lo, hi) = self.bounding_box();
        let nx = Self::side_steps(hi.x - lo.x, h)? + 1;
        let ny = Self::side_steps(hi.y - lo.y, h)? + 1;

        for (k, s) in self.slits.iter().enumerate() {
            if s.is_vertical() {
                let rel = (s.a.x - lo.x) / h;
                if (rel - rel.round()).abs() * h > ALIGN_TOL {
                    return Err(GeometryError::SlitMisaligned { index: k, h });
                }
            } else if s.is_horizontal() {
                let rel = (s.a.y - lo.y) / h;
                if (rel - rel.round()).abs() * h > ALIGN_TOL {
                    return Err(GeometryError::SlitMisaligned { index: k, h });
                }
            } else {
                return Err(GeometryError::SlitNotAxisAligned(k));
            }
        }

        let node = |i: usize, j: usize| {
            Point::new(lo.x + i as f64 * h, lo.y + j as f64 * h)
        };
        let on_tol_sq = ALIGN_TOL * ALIGN_TOL;

        // classify nodes row by row
        let rows: Vec<Vec<(NodeClass, f64)>> = (0..ny)
            .into_par_iter()
            .map(|j| {
                let mut row = Vec::with_capacity(nx);
                for i in 0..nx {
                    let p = node(i, j);
                    let d_out = self.outer_dist_sq(p);
                    if d_out <= on_tol_sq {
                        row.push((NodeClass::Dirichlet, 0.0));
                        continue;
                    }
                    if !point_in_polygon(&self.outer, p) {
                        row.push((NodeClass::Exterior, 0.0));
                        continue;
                    }
                    let mut best = d_out;
                    for s in &self.slits {
                        let d = point_segment_dist_sq(p, s.a, s.b);
                        if d < best {
                            best = d;
                        }
                    }
                    if best <= on_tol_sq {
                        row.push((NodeClass::Dirichlet, 0.0));
                    } else {
                        row.push((NodeClass::Interior, best.sqrt()));
                    }
                }
                row
            })
            .collect();

        let mut class = Vec::with_capacity(nx * ny);
        let mut node_dist_all = Vec::with_capacity(nx * ny);
        for row in rows {
            for (c, d) in row {
                class.push(c);
                node_dist_all.push(d);
            }
        }

        let mut interior_index = vec![u32::MAX; nx * ny];
        let mut interior_nodes = Vec::new();
        let mut node_dist = Vec::new();
        for (id, c) in class.iter().enumerate() {
            if *c == NodeClass::Interior {
                let i = id % nx;
                let j = id / nx;
                // the lattice hull is never interior for domains inside it
                debug_assert!(i > 0 && i + 1 < nx && j > 0 && j + 1 < ny);
                interior_index[id] = interior_nodes.len() as u32;
                interior_nodes.push(id as u32);
                node_dist.push(node_dist_all[id]);
            }
        }

        // stencil neighbour table: west, east, south, north
        let neighbors: Vec<[u32; 4]> = interior_nodes
            .par_iter()
            .map(|&id| {
                let id = id as usize;
                [
                    interior_index[id - 1],
                    interior_index[id + 1],
                    interior_index[id - nx],
                    interior_index[id + nx],
                ]
            })
            .collect();

        // cell centers with exact distances; cells on slits cannot occur
        // (centers are offset h/2 from grid lines)
        let cell_rows: Vec<Vec<Cell>> = (0..ny - 1)
            .into_par_iter()
            .map(|j| {
                let mut row = Vec::new();
                for i in 0..nx - 1 {
                    let c = Point::new(
                        lo.x + (i as f64 + 0.5) * h,
                        lo.y + (j as f64 + 0.5) * h,
                    );
                    let d = self.distance_to_boundary(c);
                    if d > 0.0 {
                        row.push(Cell { ix: i as u32, iy: j as u32, dist: d });
                    }
                }
                row
            })
            .collect();
        let cells: Vec<Cell> = cell_rows.into_iter().flatten().collect();

        Ok(GridDomain {
            h,
            nx,
            ny,
            origin: lo,
            area: self.area(),
            label: self.label.clone(),
            class,
            interior_index,
            interior_nodes,
            node_dist,
            neighbors,
            cells,
        })
    }

    fn side_steps(side: f64, h: f64) -> Result<usize, GeometryError> {
        if !(h > 0.0) || side <= 0.0 {
            return Err(GeometryError::SpacingMismatch { h, side });
        }
        let steps = side / h;
        let rounded = steps.round();
        if (steps - rounded).abs() * h > ALIGN_TOL || rounded < 1.0 {
            return Err(GeometryError::SpacingMismatch { h, side });
        }
        Ok(rounded as usize)
    }
}

/// Lattice estimate of the inradius with its one-sided error bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Inradius {
    /// Sampled maximum of the distance function (underestimates).
    pub value: f64,
    /// Half the sample-cell diagonal; the true inradius is at most
    /// `value + tol`.
    pub tol: f64,
}

fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

/// Mask of grid cells whose centers sit at distance `>= eta` from the
/// boundary. The mask measure is `count * h^2`.
pub fn superlevel_mask(grid: &GridDomain, eta: f64) -> CellMask {
    let flags: Vec<bool> = grid.cells().iter().map(|c| c.dist >= eta).collect();
    let count = flags.iter().filter(|&&f| f).count();
    CellMask { flags, count, measure: count as f64 * grid.h * grid.h }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comb(alpha: f64, c: f64, n: u32) -> SlitDomain {
        SlitDomain::comb(CombParams::new(alpha, c, n).unwrap()).unwrap()
    }

    #[test]
    fn unit_square_basics() {
        let sq = SlitDomain::unit_square();
        assert_eq!(sq.area(), 1.0);
        assert_eq!(sq.distance_to_boundary(Point::new(0.5, 0.5)), 0.5);
        assert_eq!(sq.distance_to_boundary(Point::new(0.0, 0.5)), 0.0);
        assert_eq!(sq.distance_to_boundary(Point::new(-0.2, 0.5)), 0.0);
        assert_eq!(sq.distance_to_boundary(Point::new(1.3, 0.5)), 0.0);
    }

    #[test]
    fn comb_structure_matches_parameters() {
        // fixed eps = 1/16 at n = 16: alpha with c = 1 gives eps = 16^-alpha
        let params = CombParams::new(1.0_f64, 1.0, 16).map(|_| ()).unwrap_err();
        let _ = params; // alpha = 1 rejected
        let dom = comb(2.0 / 3.0, 1.0, 16);
        // eps = 16^(-2/3) is not 1/16; build the figure-style comb directly
        let eps = 1.0 / 16.0;
        let slits: Vec<Segment> = (1..16)
            .map(|k| {
                Segment::new(
                    Point::new(k as f64 / 16.0, 0.0),
                    Point::new(k as f64 / 16.0, 1.0 - eps),
                )
            })
            .collect();
        let fig = SlitDomain::new(SlitDomain::unit_square().outer.clone(), slits, "fig").unwrap();
        assert_eq!(fig.slits().len(), 15);
        for s in fig.slits() {
            assert!((s.len() - 15.0 / 16.0).abs() < 1e-15);
        }
        assert_eq!(dom.slits().len(), 15);
    }

    #[test]
    fn comb_n1_is_unit_square() {
        let dom = comb(0.5, 0.5, 1);
        assert!(dom.slits().is_empty());
        assert_eq!(dom.area(), 1.0);
    }

    #[test]
    fn comb_rejects_teeth_leaving_square() {
        // eps = 2 * 1^0 = 2 >= 1
        let err = SlitDomain::comb(CombParams::new(0.5, 2.0, 1).unwrap()).unwrap_err();
        assert!(matches!(err, GeometryError::TeethTooLong(_)));
    }

    #[test]
    fn n_min_by_direct_enumeration() {
        // oracle: scan n upward explicitly
        let enumerate = |alpha: f64, c: f64| -> u32 {
            (1..).find(|&n| {
                let nf = n as f64;
                nf.powf(alpha) >= 2.0 * c && c * nf.powf(1.0 - alpha) >= 2.0
            }).unwrap()
        };
        for &(alpha, c) in &[(2.0 / 3.0, 1.0), (1.0 / 3.0, 1.0), (5.0 / 6.0, 1.0), (2.0 / 3.0, 2.0), (0.4, 0.7)] {
            let p = CombParams::new(alpha, c, 8).unwrap();
            assert_eq!(p.n_min(), enumerate(alpha, c), "alpha={alpha} c={c}");
            assert!(p.n_min() >= 4);
        }
        assert_eq!(CombParams::new(2.0 / 3.0, 1.0, 8).unwrap().n_min(), 8);
    }

    #[test]
    fn comb_distance_upper_bound_below_teeth() {
        // below the tooth tips the distance is at most 1/(2n)
        let n = 16u32;
        let dom = comb(2.0 / 3.0, 1.0, n);
        let eps = CombParams::new(2.0 / 3.0, 1.0, n).unwrap().eps();
        let mut rng_state = 88172645463325252u64;
        let mut rng = move || {
            // xorshift, plenty for test point scatter
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let x = rng();
            let y = rng() * (1.0 - eps);
            let d = dom.distance_to_boundary(Point::new(x, y));
            assert!(d <= 0.5 / n as f64 + 1e-12, "d={d} at ({x},{y})");
        }
    }

    #[test]
    fn comb_distance_at_probe_point_matches_brute_force() {
        // comb with teeth at k/16 and eps = 1/16, probed above a tooth tip
        let eps = 1.0 / 16.0;
        let slits: Vec<Segment> = (1..16)
            .map(|k| {
                Segment::new(
                    Point::new(k as f64 / 16.0, 0.0),
                    Point::new(k as f64 / 16.0, 1.0 - eps),
                )
            })
            .collect();
        let dom =
            SlitDomain::new(SlitDomain::unit_square().outer.clone(), slits.clone(), "probe").unwrap();
        let p = Point::new(0.5, 1.0 - 1.0 / 32.0);
        // brute force over the full segment list
        let mut best = f64::INFINITY;
        let sq = SlitDomain::unit_square();
        for i in 0..4 {
            let a = sq.outer[i];
            let b = sq.outer[(i + 1) % 4];
            best = best.min(point_segment_dist_sq(p, a, b));
        }
        for s in &slits {
            best = best.min(point_segment_dist_sq(p, s.a, s.b));
        }
        let expect = best.sqrt();
        assert!((dom.distance_to_boundary(p) - expect).abs() < 1e-15);
        assert!((expect - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn inradius_unit_square() {
        let ir = SlitDomain::unit_square().inradius(128);
        assert!(ir.value <= 0.5 + 1e-12);
        assert!(ir.value + ir.tol >= 0.5);
    }

    #[test]
    fn inradius_regular_polygon_matches_apothem() {
        let disk = SlitDomain::regular_polygon(256, 1.0).unwrap();
        let apothem = (std::f64::consts::PI / 256.0).cos();
        let ir = disk.inradius(256);
        assert!(ir.value <= apothem + 1e-12);
        assert!(ir.value + ir.tol >= apothem, "value={} tol={}", ir.value, ir.tol);
    }

    #[test]
    fn inradius_comb_within_bracket() {
        for &(alpha, c, n) in &[(2.0 / 3.0, 1.0, 16u32), (1.0 / 3.0, 1.0, 8), (2.0 / 3.0, 2.0, 8)] {
            let p = CombParams::new(alpha, c, n).unwrap();
            assert!(p.is_asymptotic());
            let eps = p.eps();
            let dom = SlitDomain::comb(p).unwrap();
            let ir = dom.inradius(512);
            assert!(ir.value + ir.tol >= 0.5 * eps, "lower bracket: {} vs {}", ir.value, eps);
            assert!(ir.value <= eps + ir.tol, "upper bracket: {} vs {}", ir.value, eps);
            // sharper closed form: the widest ball sits in the top strip and
            // can dip between two tooth tips
            let exact = 0.5 * eps + 1.0 / (8.0 * (n as f64).powi(2) * eps);
            assert!((ir.value - exact).abs() <= ir.tol, "{} vs {}", ir.value, exact);
        }
    }

    #[test]
    fn distance_is_one_lipschitz_on_segments() {
        let dom = comb(2.0 / 3.0, 1.0, 8);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let p = Point::new(next(), next());
            let q = Point::new(next(), next());
            let dp = dom.distance_to_boundary(p);
            let dq = dom.distance_to_boundary(q);
            assert!((dp - dq).abs() <= p.dist(q) + 1e-12);
        }
    }

    #[test]
    fn slit_insertion_never_increases_distance() {
        let base = SlitDomain::unit_square();
        let extra = Segment::new(Point::new(0.5, 0.0), Point::new(0.5, 0.7));
        let cut = base.with_extra_slits(&[extra]).unwrap();
        let mut state = 1234567u64;
        let mut next = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let p = Point::new(next(), next());
            assert!(cut.distance_to_boundary(p) <= base.distance_to_boundary(p) + 1e-15);
        }
    }

    #[test]
    fn slit_outside_polygon_rejected() {
        let bad = Segment::new(Point::new(0.5, 0.5), Point::new(1.5, 0.5));
        let err = SlitDomain::unit_square().with_extra_slits(&[bad]).unwrap_err();
        assert!(matches!(err, GeometryError::SlitOutsideDomain(_)));
    }

    #[test]
    fn rasterize_unit_square_interior_count() {
        let grid = SlitDomain::unit_square().rasterize(0.25).unwrap();
        assert_eq!(grid.num_interior(), 9);
        assert_eq!(grid.nx, 5);
        assert_eq!(grid.ny, 5);
    }

    #[test]
    fn rasterize_marks_slit_nodes_dirichlet() {
        // comb n = 4 with eps = 1/4: teeth at x in {1/4, 1/2, 3/4} up to y = 3/4
        let slits: Vec<Segment> = (1..4)
            .map(|k| {
                Segment::new(Point::new(k as f64 / 4.0, 0.0), Point::new(k as f64 / 4.0, 0.75))
            })
            .collect();
        let dom = SlitDomain::new(SlitDomain::unit_square().outer.clone(), slits, "c4").unwrap();
        let grid = dom.rasterize(0.125).unwrap();
        for k in 1..4usize {
            let i = k * 2; // x = k/4 at node index k/4 / (1/8)
            for j in 0..=6usize {
                assert_eq!(grid.node_class(i, j), NodeClass::Dirichlet, "i={i} j={j}");
            }
            // above the tip the nodes are interior again
            assert_eq!(grid.node_class(i, 7), NodeClass::Interior);
        }
    }

    #[test]
    fn rasterize_interior_count_cross_checked_by_scanline() {
        let n = 16u32;
        let dom = comb(2.0 / 3.0, 1.0, n);
        let h = 1.0 / 256.0;
        let grid = dom.rasterize(h).unwrap();
        // independent scanline count: nodes strictly inside, off teeth
        let eps = CombParams::new(2.0 / 3.0, 1.0, n).unwrap().eps();
        let m = 256usize;
        let mut count = 0usize;
        for j in 1..m {
            for i in 1..m {
                let x = i as f64 * h;
                let y = j as f64 * h;
                let on_tooth = (1..n as usize).any(|k| {
                    (x - k as f64 / n as f64).abs() <= 1e-12 && y <= 1.0 - eps + 1e-12
                });
                if !on_tooth {
                    count += 1;
                }
            }
        }
        assert_eq!(grid.num_interior(), count);
    }

    #[test]
    fn rasterize_rejects_misaligned_teeth() {
        let dom = comb(2.0 / 3.0, 1.0, 12);
        // 1/32 is not a multiple of 1/12
        let err = dom.rasterize(1.0 / 32.0).unwrap_err();
        assert!(matches!(err, GeometryError::SlitMisaligned { .. }));
        assert!(dom.rasterize(1.0 / 48.0).is_ok());
    }

    #[test]
    fn rasterize_rejects_bad_spacing() {
        let err = SlitDomain::unit_square().rasterize(0.3).unwrap_err();
        assert!(matches!(err, GeometryError::SpacingMismatch { .. }));
    }

    #[test]
    fn cell_measure_of_comb_approaches_area() {
        let dom = comb(2.0 / 3.0, 1.0, 8);
        for &h in &[1.0 / 32.0, 1.0 / 64.0] {
            let grid = dom.rasterize(h).unwrap();
            let measure = grid.cells().len() as f64 * h * h;
            assert!((measure - 1.0).abs() <= 2.0 * h, "h={h} measure={measure}");
        }
    }

    #[test]
    fn superlevel_mask_empty_above_inradius() {
        let grid = SlitDomain::unit_square().rasterize(1.0 / 32.0).unwrap();
        let mask = superlevel_mask(&grid, 0.6);
        assert_eq!(mask.count(), 0);
        assert_eq!(mask.measure(), 0.0);
    }

    #[test]
    fn superlevel_mask_unit_square_quarter() {
        // {d >= 1/4} is the centered square of side 1/2
        let grid = SlitDomain::unit_square().rasterize(1.0 / 64.0).unwrap();
        let mask = superlevel_mask(&grid, 0.25);
        assert!((mask.measure() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn superlevel_mask_comb_measure_bounded_by_eps() {
        let n = 16u32;
        let p = CombParams::new(2.0 / 3.0, 1.0, n).unwrap();
        let dom = SlitDomain::comb(p).unwrap();
        let h = 1.0 / (16.0 * n as f64);
        let grid = dom.rasterize(h).unwrap();
        let mask = superlevel_mask(&grid, 0.5 / n as f64);
        assert!(mask.measure() <= p.eps() + 2.0 * h, "{} vs {}", mask.measure(), p.eps());
    }

    #[test]
    fn domain_json_round_trip() {
        let dom = comb(2.0 / 3.0, 1.0, 4);
        let json = serde_json::to_string(&dom).unwrap();
        assert!(json.contains("\"outer\":[[0.0,0.0]"));
        let back: SlitDomain = serde_json::from_str(&json).unwrap();
        assert_eq!(back.outer(), dom.outer());
        assert_eq!(back.slits().len(), dom.slits().len());
    }
}
