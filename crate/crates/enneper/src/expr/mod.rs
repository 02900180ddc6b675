//! Generating-function expressions: parsing, printing, and evaluation with
//! exact first derivatives in either algebra.

mod ast;
mod eval;
mod parser;

pub use ast::{ExprNode, Func};
pub use eval::{cauchy_riemann_residual, cauchy_riemann_residual_of, eval_jet, Jet};
pub use parser::{parse, ParseError};
