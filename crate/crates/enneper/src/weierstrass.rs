//! Pointwise closed-form machinery of the canonical representation: the
//! phi-vector built from (w, w'), the stereographic Gauss maps onto the unit
//! spheres of Minkowski 3-space, and the normal-curvature function nu.

use thiserror::Error;

use crate::algebra::{AlgebraKind, SingularDivisor, TwoComponentNumber};
use crate::expr::Jet;
use crate::minkowski::MinkowskiVec3;

/// Which of the two surface families is being generated. Each family is
/// wedded to one algebra: the generating function lives in the Gauss plane
/// for time-like minimal surfaces and in the Lorentz plane for space-like
/// maximal ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceCase {
    TimelikeMinimal,
    SpacelikeMaximal,
}

impl SurfaceCase {
    pub fn algebra(self) -> AlgebraKind {
        match self {
            SurfaceCase::TimelikeMinimal => AlgebraKind::Circular,
            SurfaceCase::SpacelikeMaximal => AlgebraKind::Hyperbolic,
        }
    }

    /// Target of `<l,l>` for the unit normal: -1 (time-like sphere) or +1.
    pub fn gauss_square(self) -> f64 {
        match self {
            SurfaceCase::TimelikeMinimal => -1.0,
            SurfaceCase::SpacelikeMaximal => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceCase::TimelikeMinimal => "timelike",
            SurfaceCase::SpacelikeMaximal => "spacelike",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "timelike" => Some(SurfaceCase::TimelikeMinimal),
            "spacelike" => Some(SurfaceCase::SpacelikeMaximal),
            _ => None,
        }
    }
}

/// Why a grid point cannot carry surface data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("w' is not invertible: {0}")]
    SingularDivisor(#[from] SingularDivisor),
    /// The stereographic denominator vanishes (or falls below the guard).
    #[error("singular Gauss-map denominator")]
    SingularDenominator,
    /// Space-like case with `u_x^2 - u_y^2 <= 0`: nu would not be positive.
    #[error("non-positive normal curvature")]
    NonPositiveCurvature,
    #[error("non-finite value at the point")]
    NonFinite,
}

/// The per-coordinate derivative triple of the representation; component k
/// packages `(z_k)_x - i (z_k)_y` (time-like) or `(z_k)_x + j (z_k)_y`
/// (space-like).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiVector {
    pub phi1: TwoComponentNumber,
    pub phi2: TwoComponentNumber,
    pub phi3: TwoComponentNumber,
}

impl PhiVector {
    /// `phi1^2 + phi2^2 - phi3^2` in the algebra; identically zero for
    /// vectors produced by [`phi`].
    pub fn null_defect(&self) -> TwoComponentNumber {
        self.phi1 * self.phi1 + self.phi2 * self.phi2 - self.phi3 * self.phi3
    }

    /// Euclidean size of the component pairs, for scaling tolerances.
    pub fn sq_size(&self) -> f64 {
        let s = |c: TwoComponentNumber| c.re * c.re + c.im * c.im;
        s(self.phi1) + s(self.phi2) + s(self.phi3)
    }
}

/// The phi-vector of the canonical representation at one point.
///
/// Time-like: `phi = ((w^2+1)/(2w'), -i(w^2-1)/(2w'), -w/w')`;
/// space-like: `phi = (-w/w', (w^2-1)/(2w'), j(w^2+1)/(2w'))`.
pub fn phi(case: SurfaceCase, jet: &Jet) -> Result<PhiVector, PointError> {
    let kind = case.algebra();
    debug_assert_eq!(jet.value.kind, kind);
    let w = jet.value;
    let wp = jet.deriv;
    let one = TwoComponentNumber::one(kind);
    let unit = TwoComponentNumber::unit(kind);
    let w2 = w * w;
    let two_wp = wp.scale(2.0);
    let half_sum = (w2 + one).div(two_wp)?; // (w^2+1)/(2w')
    let half_diff = (w2 - one).div(two_wp)?; // (w^2-1)/(2w')
    let slope = w.div(wp)?; // w/w'
    let v = match case {
        SurfaceCase::TimelikeMinimal => PhiVector {
            phi1: half_sum,
            phi2: -(unit * half_diff),
            phi3: -slope,
        },
        SurfaceCase::SpacelikeMaximal => PhiVector {
            phi1: -slope,
            phi2: half_diff,
            phi3: unit * half_sum,
        },
    };
    if v.phi1.is_finite() && v.phi2.is_finite() && v.phi3.is_finite() {
        Ok(v)
    } else {
        Err(PointError::NonFinite)
    }
}

/// Partial derivatives of the surface point read off the phi-vector:
/// `(z_k)_x = Re phi_k` in both cases, `(z_k)_y = -Im phi_k` (time-like)
/// or `+Im phi_k` (space-like).
pub fn surface_derivatives(case: SurfaceCase, phi: &PhiVector) -> (MinkowskiVec3, MinkowskiVec3) {
    let dzdx = MinkowskiVec3::new(phi.phi1.re, phi.phi2.re, phi.phi3.re);
    let sign = match case {
        SurfaceCase::TimelikeMinimal => -1.0,
        SurfaceCase::SpacelikeMaximal => 1.0,
    };
    let dzdy = MinkowskiVec3::new(sign * phi.phi1.im, sign * phi.phi2.im, sign * phi.phi3.im);
    (dzdx, dzdy)
}

/// Stereographic denominator: `u^2 + v^2 - 1` (time-like) or
/// `u^2 - v^2 + 1` (space-like), with `w = u + eps v`.
pub fn gauss_denominator(case: SurfaceCase, w: TwoComponentNumber) -> f64 {
    let (u, v) = (w.re, w.im);
    match case {
        SurfaceCase::TimelikeMinimal => u * u + v * v - 1.0,
        SurfaceCase::SpacelikeMaximal => u * u - v * v + 1.0,
    }
}

/// The Gauss map of the represented surface: the image of `w` on the unit
/// time-like sphere `xi^2 + eta^2 - zeta^2 = -1` (time-like case) or the
/// unit space-like sphere `= +1` (space-like case).
pub fn gauss_map(case: SurfaceCase, w: TwoComponentNumber) -> Result<MinkowskiVec3, PointError> {
    let (u, v) = (w.re, w.im);
    let d = gauss_denominator(case, w);
    if d == 0.0 || !d.is_finite() {
        return Err(PointError::SingularDenominator);
    }
    let l = match case {
        SurfaceCase::TimelikeMinimal => {
            MinkowskiVec3::new(2.0 * u / d, 2.0 * v / d, -(u * u + v * v + 1.0) / d)
        }
        SurfaceCase::SpacelikeMaximal => {
            MinkowskiVec3::new((u * u - v * v - 1.0) / d, 2.0 * u / d, 2.0 * v / d)
        }
    };
    if l.is_finite() {
        Ok(l)
    } else {
        Err(PointError::NonFinite)
    }
}

/// The normal-curvature function nu at a point, computed from the jet:
/// `nu = 4 (u_x^2 + u_y^2) / (u^2 + v^2 - 1)^2` (time-like) or
/// `nu = 4 (u_x^2 - u_y^2) / (u^2 - v^2 + 1)^2` (space-like).
///
/// Both numerators equal `4 m(w')` since `w' = u_x - i u_y` resp.
/// `u_x + j u_y`. Equals `4 mu` for the quantity mu of the representation
/// conditions.
pub fn normal_curvature(case: SurfaceCase, jet: &Jet) -> Result<f64, PointError> {
    let d = gauss_denominator(case, jet.value);
    if d == 0.0 || !d.is_finite() {
        return Err(PointError::SingularDenominator);
    }
    let m = jet.deriv.squared_modulus();
    match case {
        SurfaceCase::TimelikeMinimal => {
            if m == 0.0 {
                return Err(PointError::SingularDivisor(SingularDivisor::Zero));
            }
        }
        SurfaceCase::SpacelikeMaximal => {
            if m <= 0.0 {
                return Err(PointError::NonPositiveCurvature);
            }
        }
    }
    let nu = 4.0 * m / (d * d);
    if nu.is_finite() {
        Ok(nu)
    } else {
        Err(PointError::NonFinite)
    }
}
