//! Parsing and rendering of polynomial expressions.
//!
//! Grammar: variables `x` and `y`, integer and fraction literals (`3`,
//! `-2`, `1/2`), operators `+ - * ^` and parentheses. `^` takes a constant
//! non-negative integer exponent and binds tightest (right-associative);
//! unary minus binds below `^` and above `*`. Multiplication is always
//! explicit (`2*x`, never `2x`). Expressions are expanded to canonical
//! [`Poly`] form at parse time; no syntax tree is retained.

use crate::poly::{Monomial, Poly, PolyMap, Rational};
use num::{BigInt, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Default cap on a single `^` exponent, guarding against accidental
/// astronomically large expansions.
pub const DEFAULT_MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug)]
pub struct ParseOptions {
    /// Largest exponent accepted by `^`.
    pub max_exponent: u32,
    /// Maximum nesting depth of parentheses and unary minus.
    pub max_depth: u32,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_exponent: DEFAULT_MAX_EXPONENT,
            max_depth: 256,
        }
    }
}

/// Syntax or validation error with a 1-based source position.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    fn new(line: u32, col: u32, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Which component of a map failed to parse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapComponent {
    P,
    Q,
}

impl fmt::Display for MapComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapComponent::P => write!(f, "P"),
            MapComponent::Q => write!(f, "Q"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("component {component}: {source}")]
pub struct MapParseError {
    pub component: MapComponent,
    #[source]
    pub source: ParseError,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokenKind {
    Int(BigInt),
    VarX,
    VarY,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Int(n) => format!("integer '{n}'"),
            TokenKind::VarX => "'x'".into(),
            TokenKind::VarY => "'y'".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    line: u32,
    col: u32,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut u32, col: &mut u32| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match ch {
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let value: BigInt = digits.parse().expect("digit string");
                tokens.push(Token {
                    kind: TokenKind::Int(value),
                    line: tline,
                    col: tcol,
                });
            }
            _ => {
                let kind = match ch {
                    'x' => TokenKind::VarX,
                    'y' => TokenKind::VarY,
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '^' => TokenKind::Caret,
                    '/' => TokenKind::Slash,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    other => {
                        return Err(ParseError::new(
                            tline,
                            tcol,
                            format!("unexpected character '{other}'"),
                        ))
                    }
                };
                chars.next();
                bump(ch, &mut line, &mut col);
                tokens.push(Token {
                    kind,
                    line: tline,
                    col: tcol,
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    opts: &'a ParseOptions,
    end_line: u32,
    end_col: u32,
}

// Binding powers: '+''-' at 1, '*' at 3, '^' at 7 (right-associative),
// unary minus operand parsed at 6 so '-x^2' reads as '-(x^2)'.
const BP_ADD: (u8, u8) = (1, 2);
const BP_MUL: (u8, u8) = (3, 4);
const BP_POW: (u8, u8) = (7, 7);
const BP_NEG: u8 = 6;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(t.line, t.col, message),
            None => ParseError::new(self.end_line, self.end_col, message),
        }
    }

    fn expr(&mut self, min_bp: u8, depth: u32) -> Result<Poly, ParseError> {
        if depth > self.opts.max_depth {
            return Err(self.error_here("expression nesting too deep"));
        }
        let mut lhs = self.prefix(depth)?;
        loop {
            let (lbp, rbp, kind) = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => (BP_ADD.0, BP_ADD.1, TokenKind::Plus),
                Some(TokenKind::Minus) => (BP_ADD.0, BP_ADD.1, TokenKind::Minus),
                Some(TokenKind::Star) => (BP_MUL.0, BP_MUL.1, TokenKind::Star),
                Some(TokenKind::Caret) => (BP_POW.0, BP_POW.1, TokenKind::Caret),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            let op = self.advance().expect("peeked");
            if kind == TokenKind::Caret {
                let exponent = self.exponent(&op, depth)?;
                lhs = lhs.pow(exponent);
            } else {
                let rhs = self.expr(rbp, depth)?;
                lhs = match kind {
                    TokenKind::Plus => &lhs + &rhs,
                    TokenKind::Minus => &lhs - &rhs,
                    TokenKind::Star => &lhs * &rhs,
                    _ => unreachable!(),
                };
            }
        }
        Ok(lhs)
    }

    /// The right-hand side of `^` must reduce to a constant integer in
    /// `0..=max_exponent`.
    fn exponent(&mut self, caret: &Token, depth: u32) -> Result<u32, ParseError> {
        let rhs = self.expr(BP_POW.1, depth + 1)?;
        let value = rhs.constant_value().ok_or_else(|| {
            ParseError::new(caret.line, caret.col, "exponent must be a constant integer")
        })?;
        if !value.denom().is_one() {
            return Err(ParseError::new(
                caret.line,
                caret.col,
                format!("non-integer exponent {value}"),
            ));
        }
        if value.is_negative() {
            return Err(ParseError::new(
                caret.line,
                caret.col,
                format!("negative exponent {value}"),
            ));
        }
        let n = value.to_integer();
        if n > BigInt::from(self.opts.max_exponent) {
            return Err(ParseError::new(
                caret.line,
                caret.col,
                format!(
                    "exponent {n} exceeds the configured bound {}",
                    self.opts.max_exponent
                ),
            ));
        }
        Ok(u32::try_from(n).expect("bounded above"))
    }

    fn prefix(&mut self, depth: u32) -> Result<Poly, ParseError> {
        let token = match self.advance() {
            Some(t) => t,
            None => {
                return Err(ParseError::new(
                    self.end_line,
                    self.end_col,
                    "expected expression, found end of input",
                ))
            }
        };
        match token.kind {
            TokenKind::Int(n) => {
                // An integer directly followed by '/' is a fraction literal.
                if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Slash)) {
                    let slash = self.advance().expect("peeked");
                    match self.advance() {
                        Some(Token {
                            kind: TokenKind::Int(den),
                            ..
                        }) => {
                            if den.is_zero() {
                                return Err(ParseError::new(
                                    slash.line,
                                    slash.col,
                                    "zero denominator in fraction literal",
                                ));
                            }
                            Ok(Poly::constant(Rational::new(n, den)))
                        }
                        _ => Err(ParseError::new(
                            slash.line,
                            slash.col,
                            "expected integer denominator after '/'",
                        )),
                    }
                } else {
                    Ok(Poly::constant(Rational::from_integer(n)))
                }
            }
            TokenKind::VarX => Ok(Poly::x()),
            TokenKind::VarY => Ok(Poly::y()),
            TokenKind::Minus => {
                let operand = self.expr(BP_NEG, depth + 1)?;
                Ok(-operand)
            }
            TokenKind::LParen => {
                let inner = self.expr(0, depth + 1)?;
                match self.advance() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => Ok(inner),
                    Some(t) => Err(ParseError::new(
                        t.line,
                        t.col,
                        format!("expected ')', found {}", t.kind.describe()),
                    )),
                    None => Err(ParseError::new(
                        self.end_line,
                        self.end_col,
                        "expected ')', found end of input",
                    )),
                }
            }
            other => Err(ParseError::new(
                token.line,
                token.col,
                format!("expected expression, found {}", other.describe()),
            )),
        }
    }
}

/// Parse a polynomial expression into canonical form with default options.
pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    parse_poly_with_options(src, &ParseOptions::default())
}

pub fn parse_poly_with_options(src: &str, opts: &ParseOptions) -> Result<Poly, ParseError> {
    let tokens = lex(src)?;
    let (end_line, end_col) = tokens
        .last()
        .map(|t| (t.line, t.col + 1))
        .unwrap_or((1, 1));
    let mut parser = Parser {
        tokens,
        pos: 0,
        opts,
        end_line,
        end_col,
    };
    let poly = parser.expr(0, 0)?;
    if let Some(t) = parser.peek() {
        return Err(ParseError::new(
            t.line,
            t.col,
            format!("unexpected {}", t.kind.describe()),
        ));
    }
    Ok(poly)
}

/// Parse a map from its two component expressions, tagging errors with the
/// component that failed.
pub fn parse_map(src_p: &str, src_q: &str) -> Result<PolyMap, MapParseError> {
    parse_map_with_options(src_p, src_q, &ParseOptions::default())
}

pub fn parse_map_with_options(
    src_p: &str,
    src_q: &str,
    opts: &ParseOptions,
) -> Result<PolyMap, MapParseError> {
    let p = parse_poly_with_options(src_p, opts).map_err(|source| MapParseError {
        component: MapComponent::P,
        source,
    })?;
    let q = parse_poly_with_options(src_q, opts).map_err(|source| MapParseError {
        component: MapComponent::Q,
        source,
    })?;
    Ok(PolyMap::new(p, q))
}

fn format_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    match m.exp_x {
        0 => {}
        1 => parts.push("x".to_string()),
        e => parts.push(format!("x^{e}")),
    }
    match m.exp_y {
        0 => {}
        1 => parts.push("y".to_string()),
        e => parts.push(format!("y^{e}")),
    }
    parts.join("*")
}

/// Deterministic rendering in canonical graded order; output re-parses to
/// the same polynomial.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let abs = c.abs();
        let mono = format_monomial(m);
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    out
}

/// Render a one-variable polynomial given as an exponent-to-coefficient
/// map, e.g. `-u^2 + u^5` for `{2: -1, 5: 1}`.
pub fn format_univariate<'a, I>(coeffs: I, var: &str) -> String
where
    I: IntoIterator<Item = (&'a u32, &'a Rational)>,
{
    let poly = Poly::from_terms(
        coeffs
            .into_iter()
            .map(|(e, c)| (Monomial::new(*e, 0), c.clone())),
    );
    // The canonical formatter only ever emits 'x' for the first variable,
    // so a straight rename is safe.
    format_poly(&poly).replace('x', var)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(self))
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{frac, rat};
    use crate::testutil::arb_poly;
    use proptest::prelude::*;

    fn m(ex: u32, ey: u32) -> Monomial {
        Monomial::new(ex, ey)
    }

    #[test]
    fn parses_binomial_expansion() {
        let p = parse_poly("x + (x-y)^2").unwrap();
        let expected = Poly::from_terms([
            (m(1, 0), rat(1)),
            (m(2, 0), rat(1)),
            (m(1, 1), rat(-2)),
            (m(0, 2), rat(1)),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn parses_gap_set_example_polynomial() {
        let p = parse_poly("x^3 + y^3 + x^2*y^2 + y^7").unwrap();
        let expected = Poly::from_terms([
            (m(3, 0), rat(1)),
            (m(0, 3), rat(1)),
            (m(2, 2), rat(1)),
            (m(0, 7), rat(1)),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn rejects_double_operator_with_position() {
        let err = parse_poly("x + + y").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
        assert!(err.message.contains("expected expression"));
    }

    #[test]
    fn parses_shear_example_map() {
        let map = parse_map("3*x - 4*y + (x-y)^2", "-2*x + y + (x-y)^2").unwrap();
        let sq = Poly::from_terms([(m(2, 0), rat(1)), (m(1, 1), rat(-2)), (m(0, 2), rat(1))]);
        let p = &Poly::from_terms([(m(1, 0), rat(3)), (m(0, 1), rat(-4))]) + &sq;
        let q = &Poly::from_terms([(m(1, 0), rat(-2)), (m(0, 1), rat(1))]) + &sq;
        assert_eq!(map, PolyMap::new(p, q));
    }

    #[test]
    fn parses_identity_map() {
        assert_eq!(parse_map("x", "y").unwrap(), PolyMap::identity());
    }

    #[test]
    fn parses_degree_gap_example_map() {
        let map = parse_map("x - y^2 - y^5", "y").unwrap();
        let p = Poly::from_terms([(m(1, 0), rat(1)), (m(0, 2), rat(-1)), (m(0, 5), rat(-1))]);
        assert_eq!(map, PolyMap::new(p, Poly::y()));
    }

    #[test]
    fn map_errors_tag_the_failing_component() {
        let err = parse_map("x", "y +").unwrap_err();
        assert_eq!(err.component, MapComponent::Q);
        let err = parse_map("(x", "y").unwrap_err();
        assert_eq!(err.component, MapComponent::P);
    }

    #[test]
    fn formats_zero() {
        assert_eq!(format_poly(&Poly::zero()), "0");
    }

    #[test]
    fn formats_in_canonical_order() {
        let sq = Poly::from_terms([(m(0, 2), rat(1)), (m(2, 0), rat(1)), (m(1, 1), rat(-2))]);
        assert_eq!(format_poly(&sq), "x^2 - 2*x*y + y^2");
    }

    #[test]
    fn formats_fractional_coefficient() {
        assert_eq!(format_poly(&Poly::x().scale(&frac(1, 2))), "1/2*x");
    }

    #[test]
    fn unary_minus_binds_below_power() {
        // -x^2 is -(x^2), and 2^2 under a leading minus is -4.
        assert_eq!(
            parse_poly("-x^2").unwrap(),
            Poly::term(m(2, 0), rat(-1))
        );
        assert_eq!(parse_poly("-2^2").unwrap(), Poly::constant(rat(-4)));
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(parse_poly("x^2^3").unwrap(), Poly::term(m(8, 0), rat(1)));
    }

    #[test]
    fn rejects_negative_exponent() {
        let err = parse_poly("x^-1").unwrap_err();
        assert!(err.message.contains("negative exponent"), "{err}");
    }

    #[test]
    fn rejects_non_integer_exponent() {
        let err = parse_poly("x^(1/2)").unwrap_err();
        assert!(err.message.contains("non-integer exponent"), "{err}");
    }

    #[test]
    fn rejects_non_constant_exponent() {
        let err = parse_poly("x^y").unwrap_err();
        assert!(err.message.contains("constant"), "{err}");
    }

    #[test]
    fn rejects_exponent_beyond_bound() {
        let err = parse_poly("x^65").unwrap_err();
        assert!(err.message.contains("exceeds"), "{err}");
        let opts = ParseOptions {
            max_exponent: 70,
            ..Default::default()
        };
        assert!(parse_poly_with_options("x^65", &opts).is_ok());
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let err = parse_poly("2*x + 3y").unwrap_err();
        assert_eq!((err.line, err.col), (1, 8));
        assert!(err.message.contains("unexpected"), "{err}");
    }

    #[test]
    fn rejects_runaway_nesting() {
        let depth = 5_000;
        let src = format!("{}x{}", "(".repeat(depth), ")".repeat(depth));
        let err = parse_poly(&src).unwrap_err();
        assert!(err.message.contains("nesting"), "{err}");
    }

    #[test]
    fn fraction_literals_allow_spaces_but_not_parens() {
        assert_eq!(parse_poly("1 / 2").unwrap(), Poly::constant(frac(1, 2)));
        assert!(parse_poly("(1)/2").is_err());
        assert!(parse_poly("1/0").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_parse_of_format(p in arb_poly()) {
            let rendered = format_poly(&p);
            let reparsed = parse_poly(&rendered).expect("formatter output parses");
            prop_assert_eq!(reparsed, p);
        }

        #[test]
        fn parser_is_total_on_junk(src in "[xy0-9+*/^() \\t\\n-]{0,200}") {
            // Must return Ok or Err, never panic.
            let _ = parse_poly(&src);
        }

        #[test]
        fn parser_is_total_on_arbitrary_bytes(src in ".{0,120}") {
            let _ = parse_poly(&src);
        }
    }
}
