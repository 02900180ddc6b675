//! Scalar arithmetic for the two commutative two-dimensional algebras.
//!
//! Both algebras consist of numbers `a + eps*b` with real components; they
//! differ only in the square of the unit: `eps^2 = -1` (circular, the Gauss
//! plane) or `eps^2 = +1` (hyperbolic, the Lorentz plane). The hyperbolic
//! algebra has zero divisors on the lines `|re| == |im|`, which is why
//! division is fallible.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Which two-dimensional algebra a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `eps^2 = -1`; ordinary complex numbers.
    Circular,
    /// `eps^2 = +1`; split-complex numbers over the Lorentz plane.
    Hyperbolic,
}

impl AlgebraKind {
    /// The sign `s` in `eps^2 = s`.
    pub fn unit_square(self) -> f64 {
        match self {
            AlgebraKind::Circular => -1.0,
            AlgebraKind::Hyperbolic => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::Circular => "circular",
            AlgebraKind::Hyperbolic => "hyperbolic",
        }
    }
}

/// Why a division could not be carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SingularDivisor {
    #[error("division by zero")]
    Zero,
    /// Hyperbolic only: the divisor is a nonzero element of a null line.
    #[error("division by a nonzero zero divisor (|re| = |im| in the hyperbolic algebra)")]
    ZeroDivisor,
}

/// A value `re + eps*im` in one of the two algebras.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoComponentNumber {
    pub re: f64,
    pub im: f64,
    pub kind: AlgebraKind,
}

impl TwoComponentNumber {
    pub fn new(re: f64, im: f64, kind: AlgebraKind) -> Self {
        Self { re, im, kind }
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        Self::new(0.0, 0.0, kind)
    }

    pub fn one(kind: AlgebraKind) -> Self {
        Self::new(1.0, 0.0, kind)
    }

    /// The algebra unit `eps` (i or j).
    pub fn unit(kind: AlgebraKind) -> Self {
        Self::new(0.0, 1.0, kind)
    }

    pub fn from_re(re: f64, kind: AlgebraKind) -> Self {
        Self::new(re, 0.0, kind)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im, self.kind)
    }

    /// Squared modulus `m(z) = re^2 - s*im^2`.
    ///
    /// Positive definite in the circular algebra; indefinite in the
    /// hyperbolic one, vanishing exactly on the null lines.
    pub fn squared_modulus(self) -> f64 {
        self.re * self.re - self.kind.unit_square() * self.im * self.im
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(self, t: f64) -> Self {
        Self::new(self.re * t, self.im * t, self.kind)
    }

    /// Division; errors when the divisor has zero squared modulus (so no
    /// `std::ops::Div` impl, which could not be fallible).
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Self) -> Result<Self, SingularDivisor> {
        assert_eq!(self.kind, rhs.kind, "mixed algebra kinds");
        let m = rhs.squared_modulus();
        if m == 0.0 {
            return Err(if rhs.re == 0.0 && rhs.im == 0.0 {
                SingularDivisor::Zero
            } else {
                SingularDivisor::ZeroDivisor
            });
        }
        Ok((self * rhs.conj()).scale(1.0 / m))
    }

    /// Nonnegative integer power by repeated multiplication.
    pub fn pow_int(self, n: u32) -> Self {
        let mut acc = Self::one(self.kind);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// `exp` evaluated in the algebra.
    ///
    /// Circular: `e^x (cos y + eps sin y)`; hyperbolic:
    /// `e^x (cosh y + eps sinh y)`. Both agree with the power series.
    pub fn exp(self) -> Self {
        let ex = self.re.exp();
        match self.kind {
            AlgebraKind::Circular => Self::new(ex * self.im.cos(), ex * self.im.sin(), self.kind),
            AlgebraKind::Hyperbolic => {
                Self::new(ex * self.im.cosh(), ex * self.im.sinh(), self.kind)
            }
        }
    }

    pub fn sin(self) -> Self {
        let (x, y) = (self.re, self.im);
        match self.kind {
            AlgebraKind::Circular => Self::new(x.sin() * y.cosh(), x.cos() * y.sinh(), self.kind),
            AlgebraKind::Hyperbolic => Self::new(x.sin() * y.cos(), x.cos() * y.sin(), self.kind),
        }
    }

    pub fn cos(self) -> Self {
        let (x, y) = (self.re, self.im);
        match self.kind {
            AlgebraKind::Circular => Self::new(x.cos() * y.cosh(), -x.sin() * y.sinh(), self.kind),
            AlgebraKind::Hyperbolic => Self::new(x.cos() * y.cos(), -x.sin() * y.sin(), self.kind),
        }
    }

    pub fn sinh(self) -> Self {
        let (x, y) = (self.re, self.im);
        match self.kind {
            AlgebraKind::Circular => Self::new(x.sinh() * y.cos(), x.cosh() * y.sin(), self.kind),
            AlgebraKind::Hyperbolic => {
                Self::new(x.sinh() * y.cosh(), x.cosh() * y.sinh(), self.kind)
            }
        }
    }

    pub fn cosh(self) -> Self {
        let (x, y) = (self.re, self.im);
        match self.kind {
            AlgebraKind::Circular => Self::new(x.cosh() * y.cos(), x.sinh() * y.sin(), self.kind),
            AlgebraKind::Hyperbolic => {
                Self::new(x.cosh() * y.cosh(), x.sinh() * y.sinh(), self.kind)
            }
        }
    }
}

impl Add for TwoComponentNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "mixed algebra kinds");
        Self::new(self.re + rhs.re, self.im + rhs.im, self.kind)
    }
}

impl Sub for TwoComponentNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "mixed algebra kinds");
        Self::new(self.re - rhs.re, self.im - rhs.im, self.kind)
    }
}

impl Mul for TwoComponentNumber {
    type Output = Self;
    /// `(a + eps b)(c + eps d) = (ac + s bd) + eps (ad + bc)` with `s = eps^2`.
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.kind, rhs.kind, "mixed algebra kinds");
        let s = self.kind.unit_square();
        Self::new(
            self.re * rhs.re + s * self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
            self.kind,
        )
    }
}

impl Neg for TwoComponentNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im, self.kind)
    }
}

impl fmt::Display for TwoComponentNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.kind {
            AlgebraKind::Circular => "i",
            AlgebraKind::Hyperbolic => "j",
        };
        if self.im < 0.0 {
            write!(f, "{}-{}{}", self.re, -self.im, unit)
        } else {
            write!(f, "{}+{}{}", self.re, self.im, unit)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn n(re: f64, im: f64, kind: AlgebraKind) -> TwoComponentNumber {
        TwoComponentNumber::new(re, im, kind)
    }

    /// Truncated power-series evaluation; independent oracle for the
    /// closed-form elementary functions.
    fn series(coeff: impl Fn(u32) -> f64, z: TwoComponentNumber, terms: u32) -> TwoComponentNumber {
        let mut acc = TwoComponentNumber::zero(z.kind);
        let mut pow = TwoComponentNumber::one(z.kind);
        let mut fact = 1.0;
        for k in 0..terms {
            if k > 0 {
                fact *= k as f64;
                pow = pow * z;
            }
            acc = acc + pow.scale(coeff(k) / fact);
        }
        acc
    }

    fn exp_series(z: TwoComponentNumber) -> TwoComponentNumber {
        series(|_| 1.0, z, 30)
    }

    fn sin_series(z: TwoComponentNumber) -> TwoComponentNumber {
        series(
            |k| match k % 4 {
                1 => 1.0,
                3 => -1.0,
                _ => 0.0,
            },
            z,
            30,
        )
    }

    fn cos_series(z: TwoComponentNumber) -> TwoComponentNumber {
        series(
            |k| match k % 4 {
                0 => 1.0,
                2 => -1.0,
                _ => 0.0,
            },
            z,
            30,
        )
    }

    fn sinh_series(z: TwoComponentNumber) -> TwoComponentNumber {
        series(|k| if k % 2 == 1 { 1.0 } else { 0.0 }, z, 30)
    }

    fn cosh_series(z: TwoComponentNumber) -> TwoComponentNumber {
        series(|k| if k % 2 == 0 { 1.0 } else { 0.0 }, z, 30)
    }

    fn assert_close(a: TwoComponentNumber, b: TwoComponentNumber, tol: f64) {
        assert!(
            (a.re - b.re).abs() <= tol && (a.im - b.im).abs() <= tol,
            "{a} != {b} (tol {tol})"
        );
    }

    #[test]
    fn unit_squares() {
        let i = TwoComponentNumber::unit(AlgebraKind::Circular);
        assert_eq!(i * i, n(-1.0, 0.0, AlgebraKind::Circular));
        let j = TwoComponentNumber::unit(AlgebraKind::Hyperbolic);
        assert_eq!(j * j, n(1.0, 0.0, AlgebraKind::Hyperbolic));
    }

    #[test]
    fn hyperbolic_null_line_annihilates() {
        let a = n(1.0, 1.0, AlgebraKind::Hyperbolic);
        let b = n(1.0, -1.0, AlgebraKind::Hyperbolic);
        assert_eq!(a * b, TwoComponentNumber::zero(AlgebraKind::Hyperbolic));
    }

    #[test]
    fn division_cases() {
        // 1/(2i) = -i/2
        let q = TwoComponentNumber::one(AlgebraKind::Circular)
            .div(n(0.0, 2.0, AlgebraKind::Circular))
            .unwrap();
        assert_close(q, n(0.0, -0.5, AlgebraKind::Circular), 1e-15);

        // 1+j is a nonzero zero divisor
        let err = TwoComponentNumber::one(AlgebraKind::Hyperbolic)
            .div(n(1.0, 1.0, AlgebraKind::Hyperbolic))
            .unwrap_err();
        assert_eq!(err, SingularDivisor::ZeroDivisor);

        let err = TwoComponentNumber::one(AlgebraKind::Hyperbolic)
            .div(TwoComponentNumber::zero(AlgebraKind::Hyperbolic))
            .unwrap_err();
        assert_eq!(err, SingularDivisor::Zero);

        let q = n(2.0, 0.0, AlgebraKind::Hyperbolic)
            .div(n(2.0, 0.0, AlgebraKind::Hyperbolic))
            .unwrap();
        assert_eq!(q, TwoComponentNumber::one(AlgebraKind::Hyperbolic));
    }

    #[test]
    fn hyperbolic_exp_is_cosh_plus_sinh() {
        let z = TwoComponentNumber::unit(AlgebraKind::Hyperbolic);
        let e = z.exp();
        assert_close(
            e,
            n(1.0f64.cosh(), 1.0f64.sinh(), AlgebraKind::Hyperbolic),
            1e-12,
        );
        // frozen from the 30-term series oracle
        assert_close(
            e,
            n(
                1.5430806348152437,
                1.1752011936438014,
                AlgebraKind::Hyperbolic,
            ),
            1e-12,
        );
        assert_close(e, exp_series(z), 1e-12);
    }

    #[test]
    fn euler_identity_circular() {
        let z = n(0.0, std::f64::consts::PI, AlgebraKind::Circular);
        assert_close(z.exp(), n(-1.0, 0.0, AlgebraKind::Circular), 1e-12);
    }

    #[test]
    fn pow_int_hyperbolic_square() {
        let z = n(1.0, 1.0, AlgebraKind::Hyperbolic);
        assert_eq!(z.pow_int(2), n(2.0, 2.0, AlgebraKind::Hyperbolic));
        assert_eq!(
            z.pow_int(0),
            TwoComponentNumber::one(AlgebraKind::Hyperbolic)
        );
    }

    #[test]
    fn elementary_functions_match_power_series() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for kind in [AlgebraKind::Circular, AlgebraKind::Hyperbolic] {
            for _ in 0..200 {
                let z = n(
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    kind,
                );
                assert_close(z.exp(), exp_series(z), 1e-10);
                assert_close(z.sin(), sin_series(z), 1e-10);
                assert_close(z.cos(), cos_series(z), 1e-10);
                assert_close(z.sinh(), sinh_series(z), 1e-10);
                assert_close(z.cosh(), cosh_series(z), 1e-10);
            }
        }
    }

    #[test]
    fn ring_axioms_hold_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(42);
        for kind in [AlgebraKind::Circular, AlgebraKind::Hyperbolic] {
            for _ in 0..1000 {
                let mut pick = || {
                    n(
                        rng.random_range(-10.0..10.0),
                        rng.random_range(-10.0..10.0),
                        kind,
                    )
                };
                let (a, b, c) = (pick(), pick(), pick());
                let scale = 1.0
                    + a.squared_modulus().abs()
                    + b.squared_modulus().abs()
                    + c.squared_modulus().abs();
                let tol = 1e-12 * scale;
                assert_close(a * b, b * a, tol);
                assert_close((a * b) * c, a * (b * c), tol);
                assert_close(a * (b + c), a * b + a * c, tol);
                assert_close(a + b, b + a, tol);
                assert_close((a + b) + c, a + (b + c), tol);
            }
        }
    }

    #[test]
    fn div_inverts_mul_when_modulus_nonzero() {
        let mut rng = StdRng::seed_from_u64(7);
        for kind in [AlgebraKind::Circular, AlgebraKind::Hyperbolic] {
            let mut done = 0;
            while done < 1000 {
                let a = n(
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                    kind,
                );
                let b = n(
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                    kind,
                );
                if b.squared_modulus().abs() < 1e-3 {
                    continue;
                }
                let q = a.div(b).unwrap();
                let tol = 1e-12 * (1.0 + a.re.abs() + a.im.abs() + q.squared_modulus().abs());
                assert_close(q * b, a, tol);
                done += 1;
            }
        }
    }
}
