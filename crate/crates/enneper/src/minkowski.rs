//! Real 3-vectors under the indefinite inner product of signature (+,+,-).

/// Causal character of a vector with respect to the ambient inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalCharacter {
    /// `<v,v> > 0`
    Spacelike,
    /// `<v,v> < 0`
    Timelike,
    /// `<v,v> = 0`
    Null,
}

/// A point or vector of Minkowski 3-space; the third coordinate is the
/// time-like one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkowskiVec3 {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

// plain methods instead of operator impls: every use site mixes adds with
// scales and inner products, where method chains read uniformly
#[allow(clippy::should_implement_trait)]
impl MinkowskiVec3 {
    pub const ZERO: Self = Self {
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
    };

    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    /// `<a,b> = a1 b1 + a2 b2 - a3 b3`.
    pub fn inner(self, rhs: Self) -> f64 {
        self.c1 * rhs.c1 + self.c2 * rhs.c2 - self.c3 * rhs.c3
    }

    /// The vector `c` with `<c,v> = det(a,b,v)` for every `v`.
    pub fn cross(self, rhs: Self) -> Self {
        Self::new(
            self.c2 * rhs.c3 - self.c3 * rhs.c2,
            self.c3 * rhs.c1 - self.c1 * rhs.c3,
            -(self.c1 * rhs.c2 - self.c2 * rhs.c1),
        )
    }

    pub fn causal_character(self) -> CausalCharacter {
        let q = self.inner(self);
        if q > 0.0 {
            CausalCharacter::Spacelike
        } else if q < 0.0 {
            CausalCharacter::Timelike
        } else {
            CausalCharacter::Null
        }
    }

    pub fn add(self, rhs: Self) -> Self {
        Self::new(self.c1 + rhs.c1, self.c2 + rhs.c2, self.c3 + rhs.c3)
    }

    pub fn sub(self, rhs: Self) -> Self {
        Self::new(self.c1 - rhs.c1, self.c2 - rhs.c2, self.c3 - rhs.c3)
    }

    pub fn scale(self, t: f64) -> Self {
        Self::new(self.c1 * t, self.c2 * t, self.c3 * t)
    }

    pub fn is_finite(self) -> bool {
        self.c1.is_finite() && self.c2.is_finite() && self.c3.is_finite()
    }

    /// Euclidean norm of the coordinate triple; used for error reporting,
    /// not for geometry.
    pub fn coord_norm(self) -> f64 {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3).sqrt()
    }

    pub fn max_abs_component(self) -> f64 {
        self.c1.abs().max(self.c2.abs()).max(self.c3.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn det(a: MinkowskiVec3, b: MinkowskiVec3, v: MinkowskiVec3) -> f64 {
        a.c1 * (b.c2 * v.c3 - b.c3 * v.c2) - a.c2 * (b.c1 * v.c3 - b.c3 * v.c1)
            + a.c3 * (b.c1 * v.c2 - b.c2 * v.c1)
    }

    #[test]
    fn inner_product_signature() {
        assert_eq!(
            MinkowskiVec3::new(1.0, 0.0, 0.0).inner(MinkowskiVec3::new(1.0, 0.0, 0.0)),
            1.0
        );
        assert_eq!(
            MinkowskiVec3::new(0.0, 0.0, 1.0).inner(MinkowskiVec3::new(0.0, 0.0, 1.0)),
            -1.0
        );
        // point of the unit time-like sphere: (4/3, 0, -5/3)
        let p = MinkowskiVec3::new(4.0 / 3.0, 0.0, -5.0 / 3.0);
        assert!((p.inner(p) - (16.0 / 9.0 - 25.0 / 9.0)).abs() < 1e-15);
        assert!((p.inner(p) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn cross_basis_and_parallel_cases() {
        let e1 = MinkowskiVec3::new(1.0, 0.0, 0.0);
        let e2 = MinkowskiVec3::new(0.0, 1.0, 0.0);
        assert_eq!(e1.cross(e2), MinkowskiVec3::new(0.0, 0.0, -1.0));
        assert_eq!(e1.cross(e1), MinkowskiVec3::ZERO);
    }

    #[test]
    fn cross_is_inner_orthogonal_and_matches_determinant() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..1000 {
            let mut pick = || {
                MinkowskiVec3::new(
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                )
            };
            let (a, b, v) = (pick(), pick(), pick());
            let c = a.cross(b);
            let scale = 1.0 + a.coord_norm() * b.coord_norm();
            assert!(c.inner(a).abs() <= 1e-12 * scale);
            assert!(c.inner(b).abs() <= 1e-12 * scale);
            assert!((c.inner(v) - det(a, b, v)).abs() <= 1e-12 * scale * (1.0 + v.coord_norm()));
        }
    }

    #[test]
    fn causal_character_is_scale_invariant() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..500 {
            let v = MinkowskiVec3::new(
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
            );
            let t = rng.random_range(1e-3..1e3);
            assert_eq!(v.causal_character(), v.scale(t).causal_character());
        }
        assert_eq!(
            MinkowskiVec3::new(1.0, 0.0, 1.0).causal_character(),
            CausalCharacter::Null
        );
    }
}
