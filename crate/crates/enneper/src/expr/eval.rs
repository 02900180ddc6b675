//! Forward-mode evaluation: each tree walk carries the pair (w, dw/dz) so
//! the derivative is exact up to rounding, with no symbolic expansion.

use crate::algebra::{AlgebraKind, SingularDivisor, TwoComponentNumber};

use super::ast::{ExprNode, Func};

/// Value and first derivative of a generating function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: TwoComponentNumber,
    pub deriv: TwoComponentNumber,
}

impl Jet {
    /// The jet of the identity `w = z`.
    pub fn variable(z: TwoComponentNumber) -> Self {
        Jet {
            value: z,
            deriv: TwoComponentNumber::one(z.kind),
        }
    }

    pub fn constant(c: TwoComponentNumber) -> Self {
        Jet {
            value: c,
            deriv: TwoComponentNumber::zero(c.kind),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.deriv.is_finite()
    }

    fn add(self, rhs: Self) -> Self {
        Jet {
            value: self.value + rhs.value,
            deriv: self.deriv + rhs.deriv,
        }
    }

    fn sub(self, rhs: Self) -> Self {
        Jet {
            value: self.value - rhs.value,
            deriv: self.deriv - rhs.deriv,
        }
    }

    fn mul(self, rhs: Self) -> Self {
        Jet {
            value: self.value * rhs.value,
            deriv: self.value * rhs.deriv + self.deriv * rhs.value,
        }
    }

    fn div(self, rhs: Self) -> Result<Self, SingularDivisor> {
        let q = self.value.div(rhs.value)?;
        let d = (self.deriv - q * rhs.deriv).div(rhs.value)?;
        Ok(Jet { value: q, deriv: d })
    }

    fn neg(self) -> Self {
        Jet {
            value: -self.value,
            deriv: -self.deriv,
        }
    }

    /// Square-and-multiply so that huge exponents stay cheap.
    fn pow_int(self, n: u32) -> Self {
        let kind = self.value.kind;
        let mut acc = Jet::constant(TwoComponentNumber::one(kind));
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(base);
            }
        }
        acc
    }

    fn call(self, f: Func) -> Self {
        let v = self.value;
        let (value, dfdw) = match f {
            Func::Exp => (v.exp(), v.exp()),
            Func::Sin => (v.sin(), v.cos()),
            Func::Cos => (v.cos(), -v.sin()),
            Func::Sinh => (v.sinh(), v.cosh()),
            Func::Cosh => (v.cosh(), v.sinh()),
        };
        Jet {
            value,
            deriv: dfdw * self.deriv,
        }
    }
}

/// Evaluate `w` and `w' = dw/dz` at `z`. A singular division marks the
/// point invalid; the caller decides whether that is fatal.
pub fn eval_jet(ast: &ExprNode, z: TwoComponentNumber) -> Result<Jet, SingularDivisor> {
    Ok(match ast {
        ExprNode::Var => Jet::variable(z),
        ExprNode::Const { re, im } => Jet::constant(TwoComponentNumber::new(*re, *im, z.kind)),
        ExprNode::Add(a, b) => eval_jet(a, z)?.add(eval_jet(b, z)?),
        ExprNode::Sub(a, b) => eval_jet(a, z)?.sub(eval_jet(b, z)?),
        ExprNode::Mul(a, b) => eval_jet(a, z)?.mul(eval_jet(b, z)?),
        ExprNode::Div(a, b) => eval_jet(a, z)?.div(eval_jet(b, z)?)?,
        ExprNode::Neg(a) => eval_jet(a, z)?.neg(),
        ExprNode::PowInt(a, n) => eval_jet(a, z)?.pow_int(*n),
        ExprNode::Call(f, a) => eval_jet(a, z)?.call(*f),
    })
}

/// Cauchy-Riemann residual of the component pair of an arbitrary map
/// `(x, y) -> (u, v)`, by central differences with step `h`:
/// `max(|u_x - v_y|, |u_y - s*v_x|)` where `s = eps^2` of the algebra.
///
/// Holomorphy in the circular algebra is `u_x = v_y, u_y = -v_x`; in the
/// hyperbolic algebra it is `u_x = v_y, u_y = v_x`.
pub fn cauchy_riemann_residual_of<F, E>(f: F, s: f64, probe: (f64, f64), h: f64) -> Result<f64, E>
where
    F: Fn(f64, f64) -> Result<(f64, f64), E>,
{
    let (x, y) = probe;
    let (u_xp, v_xp) = f(x + h, y)?;
    let (u_xm, v_xm) = f(x - h, y)?;
    let (u_yp, v_yp) = f(x, y + h)?;
    let (u_ym, v_ym) = f(x, y - h)?;
    let u_x = (u_xp - u_xm) / (2.0 * h);
    let u_y = (u_yp - u_ym) / (2.0 * h);
    let v_x = (v_xp - v_xm) / (2.0 * h);
    let v_y = (v_yp - v_ym) / (2.0 * h);
    Ok((u_x - v_y).abs().max((u_y - s * v_x).abs()))
}

/// Cauchy-Riemann residual of an expression at a probe point.
pub fn cauchy_riemann_residual(
    ast: &ExprNode,
    kind: AlgebraKind,
    probe: (f64, f64),
    h: f64,
) -> Result<f64, SingularDivisor> {
    assert!(h > 0.0, "step must be positive");
    cauchy_riemann_residual_of(
        |x, y| {
            let w = eval_jet(ast, TwoComponentNumber::new(x, y, kind))?.value;
            Ok((w.re, w.im))
        },
        kind.unit_square(),
        probe,
        h,
    )
}
