//! Rectangular lattice storage and grid specifications.

use thiserror::Error;

use crate::minkowski::MinkowskiVec3;
use crate::weierstrass::SurfaceCase;

/// Default singularity-exclusion radius on the Gauss-map denominator.
pub const DEFAULT_GUARD: f64 = 1e-3;

/// Fixed lower bound on `|m(w')|` below which a point is masked; nu blows
/// up quadratically as the denominator shrinks, so residual checks near the
/// singular set are meaningless.
pub const WPRIME_GUARD: f64 = 1e-12;

/// Dense row-major 2-d array; index `(ix, iy)` is stored at `iy*nx + ix`,
/// matching the serialized layout (y-rows outer, x fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2<T> {
    nx: usize,
    ny: usize,
    data: Vec<T>,
}

impl<T: Clone> Grid2<T> {
    pub fn filled(nx: usize, ny: usize, value: T) -> Self {
        Self {
            nx,
            ny,
            data: vec![value; nx * ny],
        }
    }

    pub fn from_vec(nx: usize, ny: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == nx * ny).then_some(Self { nx, ny, data })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn get(&self, ix: usize, iy: usize) -> &T {
        &self.data[iy * self.nx + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, value: T) {
        self.data[iy * self.nx + ix] = value;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("domain bounds must be finite with x0 < x1 and y0 < y1")]
    BadBounds,
    #[error("grid needs at least 2 nodes per axis")]
    TooFewNodes,
    #[error("guard must be finite and nonnegative")]
    BadGuard,
    #[error("base point must coincide with a lattice node inside the domain")]
    BaseOffLattice,
}

/// Description of the rectangular lattice, the anchoring of the surface,
/// and the masking guard.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub base_x: f64,
    pub base_y: f64,
    pub base_value: MinkowskiVec3,
    pub guard: f64,
}

impl GridSpec {
    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / (self.ny - 1) as f64
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.x0 + ix as f64 * self.dx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y0 + iy as f64 * self.dy()
    }

    /// Validates the spec and returns the lattice indices of the base node.
    pub fn validate(&self) -> Result<(usize, usize), GridError> {
        for v in [self.x0, self.x1, self.y0, self.y1, self.base_x, self.base_y] {
            if !v.is_finite() {
                return Err(GridError::BadBounds);
            }
        }
        if self.x0 >= self.x1 || self.y0 >= self.y1 {
            return Err(GridError::BadBounds);
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(GridError::TooFewNodes);
        }
        if !self.guard.is_finite() || self.guard < 0.0 {
            return Err(GridError::BadGuard);
        }
        let ib = ((self.base_x - self.x0) / self.dx()).round();
        let jb = ((self.base_y - self.y0) / self.dy()).round();
        if ib < 0.0 || jb < 0.0 || ib >= self.nx as f64 || jb >= self.ny as f64 {
            return Err(GridError::BaseOffLattice);
        }
        let (ib, jb) = (ib as usize, jb as usize);
        let tol_x = 1e-9 * (1.0 + self.base_x.abs());
        let tol_y = 1e-9 * (1.0 + self.base_y.abs());
        if (self.x(ib) - self.base_x).abs() > tol_x || (self.y(jb) - self.base_y).abs() > tol_y {
            return Err(GridError::BaseOffLattice);
        }
        Ok((ib, jb))
    }
}

/// A generated (or reconstructed) surface on a lattice, together with the
/// pointwise curvature and Gauss-map fields and the validity mask.
#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    pub spec: GridSpec,
    pub case: SurfaceCase,
    pub expr_text: String,
    pub points: Grid2<MinkowskiVec3>,
    pub valid: Grid2<bool>,
    pub nu: Grid2<f64>,
    pub gauss: Grid2<MinkowskiVec3>,
}

impl SurfaceGrid {
    pub fn valid_count(&self) -> usize {
        self.valid.data().iter().filter(|v| **v).count()
    }
}
