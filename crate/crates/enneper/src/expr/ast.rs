use std::fmt;

/// An elementary function admitted in generating expressions. All of these
/// are entire, so evaluation never leaves the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }
}

/// Syntax tree of a generating function `w(z)`.
///
/// Constants are stored as a kind-agnostic component pair; the algebra unit
/// denoted by `eps` in source text binds to i or j only when the tree is
/// evaluated under a concrete [`crate::algebra::AlgebraKind`].
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Var,
    Const { re: f64, im: f64 },
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    Neg(Box<ExprNode>),
    PowInt(Box<ExprNode>, u32),
    Call(Func, Box<ExprNode>),
}

impl fmt::Display for ExprNode {
    /// Fully parenthesized canonical form; parser output printed this way
    /// reparses to an identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Var => write!(f, "z"),
            ExprNode::Const { re, im } => {
                if *im == 0.0 {
                    write!(f, "{re}")
                } else if *re == 0.0 {
                    write!(f, "{im}eps")
                } else {
                    write!(f, "({re} + {im}eps)")
                }
            }
            ExprNode::Add(a, b) => write!(f, "({a} + {b})"),
            ExprNode::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprNode::Mul(a, b) => write!(f, "({a} * {b})"),
            ExprNode::Div(a, b) => write!(f, "({a} / {b})"),
            ExprNode::Neg(a) => write!(f, "(-{a})"),
            ExprNode::PowInt(a, n) => write!(f, "({a}^{n})"),
            ExprNode::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
