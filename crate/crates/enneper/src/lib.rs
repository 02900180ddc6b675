//! Synthesis and numerical verification of minimal time-like and maximal
//! space-like surfaces in Minkowski 3-space.
//!
//! A surface is generated from a holomorphic function `w(z)` — holomorphic
//! in the Gauss plane (time-like case) or in the Lorentz plane of
//! split-complex numbers (space-like case) — through the canonical
//! representation in which the parameters are principal and the metric is
//! determined by the single normal-curvature function nu. The verification
//! side recomputes every differential-geometric identity those parameters
//! are supposed to satisfy (fundamental forms, Gauss-map properties, the
//! natural PDE of nu, and the Bonnet compatibility conditions) by central
//! finite differences and reports residuals against tolerances.

pub mod algebra;
pub mod builder;
pub mod cli;
pub mod expr;
pub mod grid;
pub mod io;
pub mod minkowski;
pub mod verify;
pub mod weierstrass;

pub use algebra::{AlgebraKind, TwoComponentNumber};
pub use expr::{parse, ExprNode, Jet};
pub use grid::{GridSpec, SurfaceGrid};
pub use minkowski::MinkowskiVec3;
pub use weierstrass::SurfaceCase;
