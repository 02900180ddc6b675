//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := unary ('^' INT)?
//! unary  := '-'? atom
//! atom   := 'z' | NUMBER | NUMBER 'eps' | '(' expr ')' | FUNC '(' expr ')'
//! FUNC   := 'exp'|'sin'|'cos'|'sinh'|'cosh'
//! ```
//!
//! `eps` denotes the algebra unit (i or j, fixed at evaluation time). All
//! errors carry the byte offset of the offending input.

use thiserror::Error;

use super::ast::{ExprNode, Func};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("malformed numeric literal `{text}` at byte {offset}")]
    MalformedLiteral { offset: usize, text: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::MalformedLiteral { offset, .. } => *offset,
        }
    }
}

/// Nesting bound so that hostile inputs cannot overflow the stack,
/// here and in every later recursive walk of the tree.
const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Z,
    Eps,
    Func(Func),
    Number { value: f64, int: Option<u32> },
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(text: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.bytes.get(self.pos + k).copied()
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.pos += 1;
        }
        let start = self.pos;
        let c = match self.peek() {
            None => return Ok(None),
            Some(c) => c,
        };
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            self.pos += 1;
            return Ok(Some((start, tok)));
        }
        if c.is_ascii_digit() {
            return self.lex_number(start).map(Some);
        }
        if c.is_ascii_alphabetic() {
            while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
            let tok = match name {
                "z" => Tok::Z,
                "eps" => Tok::Eps,
                _ => match Func::from_name(name) {
                    Some(f) => Tok::Func(f),
                    None => {
                        return Err(ParseError::UnknownIdentifier {
                            offset: start,
                            name: name.to_owned(),
                        })
                    }
                },
            };
            return Ok(Some((start, tok)));
        }
        Err(ParseError::Syntax {
            offset: start,
            message: format!("unexpected character `{}`", c as char),
        })
    }

    fn lex_number(&mut self, start: usize) -> Result<(usize, Tok), ParseError> {
        let mut plain_digits = true;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            plain_digits = false;
            self.pos += 1;
            if !matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                let text = String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned();
                return Err(ParseError::MalformedLiteral {
                    offset: start,
                    text,
                });
            }
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        // An 'e' continues the literal only when it introduces a valid
        // exponent; otherwise it belongs to a following token ("2eps").
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let exp_digits_at = match self.peek_at(1) {
                Some(b'+' | b'-') => 2,
                _ => 1,
            };
            if matches!(self.peek_at(exp_digits_at), Some(b) if b.is_ascii_digit()) {
                plain_digits = false;
                self.pos += exp_digits_at;
                while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: f64 = text
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| ParseError::MalformedLiteral {
                offset: start,
                text: text.to_owned(),
            })?;
        let int = if plain_digits {
            text.parse::<u32>().ok()
        } else {
            None
        };
        Ok((start, Tok::Number { value, int }))
    }
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    cursor: usize,
    end_offset: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map_or(self.end_offset, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.cursor).map(|(_, t)| t.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self, depth: usize) -> Result<ExprNode, ParseError> {
        if depth > MAX_DEPTH {
            return self.syntax("expression nesting too deep");
        }
        let mut node = self.term(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    node = ExprNode::Add(Box::new(node), Box::new(self.term(depth + 1)?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    node = ExprNode::Sub(Box::new(node), Box::new(self.term(depth + 1)?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<ExprNode, ParseError> {
        if depth > MAX_DEPTH {
            return self.syntax("expression nesting too deep");
        }
        let mut node = self.factor(depth + 1)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    node = ExprNode::Mul(Box::new(node), Box::new(self.factor(depth + 1)?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    node = ExprNode::Div(Box::new(node), Box::new(self.factor(depth + 1)?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn factor(&mut self, depth: usize) -> Result<ExprNode, ParseError> {
        if depth > MAX_DEPTH {
            return self.syntax("expression nesting too deep");
        }
        let base = self.unary(depth + 1)?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let n = match self.peek() {
                Some(Tok::Number { int: Some(n), .. }) => *n,
                Some(Tok::Number { .. }) => {
                    return self.syntax("exponent must be a nonnegative integer")
                }
                _ => return self.syntax("expected integer exponent after `^`"),
            };
            self.bump();
            return Ok(ExprNode::PowInt(Box::new(base), n));
        }
        Ok(base)
    }

    fn unary(&mut self, depth: usize) -> Result<ExprNode, ParseError> {
        if depth > MAX_DEPTH {
            return self.syntax("expression nesting too deep");
        }
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(ExprNode::Neg(Box::new(self.atom(depth + 1)?)));
        }
        self.atom(depth + 1)
    }

    fn atom(&mut self, depth: usize) -> Result<ExprNode, ParseError> {
        if depth > MAX_DEPTH {
            return self.syntax("expression nesting too deep");
        }
        match self.peek() {
            Some(Tok::Z) => {
                self.bump();
                Ok(ExprNode::Var)
            }
            Some(Tok::Number { value, .. }) => {
                let value = *value;
                self.bump();
                if matches!(self.peek(), Some(Tok::Eps)) {
                    self.bump();
                    Ok(ExprNode::Const { re: 0.0, im: value })
                } else {
                    Ok(ExprNode::Const { re: value, im: 0.0 })
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr(depth + 1)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Tok::Func(f)) => {
                let f = *f;
                self.bump();
                if !matches!(self.peek(), Some(Tok::LParen)) {
                    return self.syntax("expected `(` after function name");
                }
                self.bump();
                let arg = self.expr(depth + 1)?;
                self.expect_rparen()?;
                Ok(ExprNode::Call(f, Box::new(arg)))
            }
            Some(_) => self.syntax("expected `z`, a number, `(` or a function"),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek(), Some(Tok::RParen)) {
            self.bump();
            Ok(())
        } else {
            self.syntax("expected `)`")
        }
    }
}

/// Parse an expression into its syntax tree. Never panics on any input.
pub fn parse(text: &str) -> Result<ExprNode, ParseError> {
    let tokens = Lexer::tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end_offset: text.len(),
    };
    let node = parser.expr(0)?;
    if parser.peek().is_some() {
        return parser.syntax("unexpected trailing input");
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enneper_generator_is_var() {
        assert_eq!(parse("z").unwrap(), ExprNode::Var);
    }

    #[test]
    fn structural_example() {
        let got = parse("(z^2 + 1)/2").unwrap();
        let want = ExprNode::Div(
            Box::new(ExprNode::Add(
                Box::new(ExprNode::PowInt(Box::new(ExprNode::Var), 2)),
                Box::new(ExprNode::Const { re: 1.0, im: 0.0 }),
            )),
            Box::new(ExprNode::Const { re: 2.0, im: 0.0 }),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn rejection_reports_byte_offset() {
        match parse("z + @").unwrap_err() {
            ParseError::Syntax { offset, .. } => assert_eq!(offset, 4),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn eps_literals_and_exponents() {
        assert_eq!(
            parse("0.5eps").unwrap(),
            ExprNode::Const { re: 0.0, im: 0.5 }
        );
        assert_eq!(
            parse("2e2").unwrap(),
            ExprNode::Const { re: 200.0, im: 0.0 }
        );
        assert_eq!(parse("2eps").unwrap(), ExprNode::Const { re: 0.0, im: 2.0 });
        // bare eps is not an atom
        assert!(parse("eps").is_err());
        assert!(matches!(
            parse("1."),
            Err(ParseError::MalformedLiteral { .. })
        ));
        assert!(matches!(
            parse("1e999"),
            Err(ParseError::MalformedLiteral { .. })
        ));
        assert!(matches!(
            parse("tan(z)"),
            Err(ParseError::UnknownIdentifier { offset: 0, .. })
        ));
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(parse("z^-2").is_err());
        assert!(parse("z^2.5").is_err());
        assert!(parse("z^4294967296").is_err()); // u32 overflow
    }

    #[test]
    fn unary_minus_binds_to_atom_before_power() {
        // factor := unary ('^' INT)?, so -z^2 is (-z)^2
        assert_eq!(
            parse("-z^2").unwrap(),
            ExprNode::PowInt(Box::new(ExprNode::Neg(Box::new(ExprNode::Var))), 2)
        );
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let deep = "(".repeat(5000) + "z" + &")".repeat(5000);
        assert!(matches!(parse(&deep), Err(ParseError::Syntax { .. })));
    }

    fn arb_tree() -> impl Strategy<Value = ExprNode> {
        // parser-producible trees: single-part nonnegative constants
        let leaf = prop_oneof![
            Just(ExprNode::Var),
            (0.0..100.0f64).prop_map(|re| ExprNode::Const { re, im: 0.0 }),
            (0.0..100.0f64).prop_map(|im| ExprNode::Const { re: 0.0, im }),
        ];
        leaf.prop_recursive(5, 64, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| ExprNode::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| ExprNode::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| ExprNode::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| ExprNode::Div(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| ExprNode::Neg(Box::new(a))),
                (inner.clone(), 0u32..9).prop_map(|(a, n)| ExprNode::PowInt(Box::new(a), n)),
                (
                    inner,
                    prop_oneof![
                        Just(Func::Exp),
                        Just(Func::Sin),
                        Just(Func::Cos),
                        Just(Func::Sinh),
                        Just(Func::Cosh)
                    ]
                )
                    .prop_map(|(a, f)| ExprNode::Call(f, Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(tree in arb_tree()) {
            let printed = tree.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(reparsed, tree);
        }

        #[test]
        fn parser_is_total_on_arbitrary_input(text in "\\PC{0,1024}") {
            let _ = parse(&text);
        }

        #[test]
        fn parser_is_total_on_grammar_like_input(
            text in "[z0-9eps+\\-*/^(). ]{0,256}"
        ) {
            let _ = parse(&text);
        }
    }
}
