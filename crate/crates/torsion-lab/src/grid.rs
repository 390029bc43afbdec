//! Rasterized domains: node classification, interior numbering, cell-center
//! data, and scalar fields over interior nodes.

use crate::geometry::Point;
use serde::Serialize;

/// Per-node tag after rasterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    /// Unknown of the discrete Dirichlet problem.
    Interior,
    /// Boundary node carrying the value 0 (outer boundary or slit).
    Dirichlet,
    /// Lattice node outside the domain closure.
    Exterior,
}

/// Grid cell with its center's exact distance to the boundary.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub ix: u32,
    pub iy: u32,
    pub dist: f64,
}

/// Square lattice over the domain's bounding box.
///
/// Row-major node storage, flat id `j * nx + i`. Every interior node has its
/// four lattice neighbours inside the lattice (the hull ring is never
/// interior), so the 5-point stencil needs no bounds checks.
#[derive(Debug, Clone)]
pub struct GridDomain {
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub origin: Point,
    /// Exact area of the continuum domain (slits have measure zero).
    pub area: f64,
    pub label: String,
    pub(crate) class: Vec<NodeClass>,
    pub(crate) interior_index: Vec<u32>,
    pub(crate) interior_nodes: Vec<u32>,
    pub(crate) node_dist: Vec<f64>,
    pub(crate) neighbors: Vec<[u32; 4]>,
    pub(crate) cells: Vec<Cell>,
}

pub(crate) const NO_NODE: u32 = u32::MAX;

impl GridDomain {
    pub fn num_interior(&self) -> usize {
        self.interior_nodes.len()
    }

    pub fn node_class(&self, i: usize, j: usize) -> NodeClass {
        self.class[j * self.nx + i]
    }

    /// Dense interior index of node `(i, j)`, if it is interior.
    pub fn interior_id(&self, i: usize, j: usize) -> Option<usize> {
        match self.interior_index[j * self.nx + i] {
            NO_NODE => None,
            k => Some(k as usize),
        }
    }

    /// Lattice coordinates of interior unknown `k`.
    pub fn interior_coords(&self, k: usize) -> (usize, usize) {
        let id = self.interior_nodes[k] as usize;
        (id % self.nx, id / self.nx)
    }

    pub fn node_point(&self, i: usize, j: usize) -> Point {
        Point::new(self.origin.x + i as f64 * self.h, self.origin.y + j as f64 * self.h)
    }

    /// Exact boundary distances at interior nodes, indexed like field values.
    pub fn node_distances(&self) -> &[f64] {
        &self.node_dist
    }

    pub(crate) fn neighbor_table(&self) -> &[[u32; 4]] {
        &self.neighbors
    }

    /// Cells whose centers lie in the open domain.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_center(&self, cell: &Cell) -> Point {
        Point::new(
            self.origin.x + (cell.ix as f64 + 0.5) * self.h,
            self.origin.y + (cell.iy as f64 + 0.5) * self.h,
        )
    }

    /// Field value at a cell center: average of the four corner nodes, with
    /// Dirichlet and exterior corners contributing 0. Slit-aligned grids keep
    /// this one-sided, so no mass smears across a slit.
    pub fn cell_value(&self, f: &ScalarField, cell: &Cell) -> f64 {
        let i = cell.ix as usize;
        let j = cell.iy as usize;
        let mut acc = 0.0;
        for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            if let Some(k) = self.interior_id(i + di, j + dj) {
                acc += f.values[k];
            }
        }
        0.25 * acc
    }

    /// Midpoint-rule integral of the field over all in-domain cells.
    pub fn integrate_cells(&self, f: &ScalarField) -> f64 {
        let hh = self.h * self.h;
        self.cells.iter().map(|c| self.cell_value(f, c)).sum::<f64>() * hh
    }

    /// Bilinear interpolation of the field at an arbitrary point, taking the
    /// value 0 at non-interior corner nodes. Returns `None` outside the
    /// lattice.
    pub fn interpolate(&self, f: &ScalarField, p: Point) -> Option<f64> {
        let fx = (p.x - self.origin.x) / self.h;
        let fy = (p.y - self.origin.y) / self.h;
        if fx < 0.0 || fy < 0.0 || fx > (self.nx - 1) as f64 || fy > (self.ny - 1) as f64 {
            return None;
        }
        let i = (fx.floor() as usize).min(self.nx - 2);
        let j = (fy.floor() as usize).min(self.ny - 2);
        let tx = fx - i as f64;
        let ty = fy - j as f64;
        let at = |di: usize, dj: usize| -> f64 {
            self.interior_id(i + di, j + dj).map_or(0.0, |k| f.values[k])
        };
        let v00 = at(0, 0);
        let v10 = at(1, 0);
        let v01 = at(0, 1);
        let v11 = at(1, 1);
        Some((1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11))
    }
}

/// Real values on the interior nodes of a grid; Dirichlet nodes are
/// implicitly 0.
#[derive(Debug, Clone, Serialize)]
pub struct ScalarField {
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &GridDomain) -> Self {
        ScalarField { values: vec![0.0; grid.num_interior()] }
    }

    pub fn constant(grid: &GridDomain, v: f64) -> Self {
        ScalarField { values: vec![v; grid.num_interior()] }
    }

    /// Field sampled from a function of the node position.
    pub fn from_fn(grid: &GridDomain, f: impl Fn(Point) -> f64) -> Self {
        let values = (0..grid.num_interior())
            .map(|k| {
                let (i, j) = grid.interior_coords(k);
                f(grid.node_point(i, j))
            })
            .collect();
        ScalarField { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Boolean mask over the in-domain cells of a grid.
#[derive(Debug, Clone)]
pub struct CellMask {
    pub(crate) flags: Vec<bool>,
    pub(crate) count: usize,
    pub(crate) measure: f64,
}

impl CellMask {
    /// Mask selecting every in-domain cell.
    pub fn full(grid: &GridDomain) -> Self {
        let n = grid.cells().len();
        CellMask { flags: vec![true; n], count: n, measure: n as f64 * grid.h * grid.h }
    }

    /// Mask selecting nothing.
    pub fn empty(grid: &GridDomain) -> Self {
        CellMask { flags: vec![false; grid.cells().len()], count: 0, measure: 0.0 }
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Lebesgue measure of the masked cells, `count * h^2`.
    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}
