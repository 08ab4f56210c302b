//! A small language for universally quantified near-ring identities.
//!
//! ```text
//! identity := expr ("=" expr | "in Z")
//! expr     := term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := "0" | var | "-" factor | "d(" expr ")"
//!           | "[" expr "," expr "]" | "(" expr ("o" expr)? ")"
//! var      := "x" | "y" | "z"
//! ```
//!
//! `[a,b]` is the Lie product `ab - ba`, `(a o b)` the Jordan product
//! `ab + ba`. Subtraction `a - b` always means `a + (-b)`.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Element, NearRing};
use crate::derivation::DerivationMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Zero,
    Var(Var),
    D(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Lie(Box<Expr>, Box<Expr>),
    Jordan(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn collect_vars(&self, seen: &mut [bool; 3]) {
        match self {
            Expr::Zero => {}
            Expr::Var(v) => seen[v.index()] = true,
            Expr::D(e) | Expr::Neg(e) => e.collect_vars(seen),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Lie(a, b)
            | Expr::Jordan(a, b) => {
                a.collect_vars(seen);
                b.collect_vars(seen);
            }
        }
    }

    /// Printing precedence: 0 = sum, 1 = product, 2 = factor.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) => 1,
            _ => 2,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Zero => f.write_str("0"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::D(e) => write!(f, "d({e})"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.fmt_at(f, 2)
            }
            Expr::Add(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_at(f, 1)
            }
            Expr::Sub(a, b) => {
                a.fmt_at(f, 0)?;
                f.write_str(" - ")?;
                b.fmt_at(f, 1)
            }
            Expr::Mul(a, b) => {
                a.fmt_at(f, 1)?;
                f.write_str("*")?;
                b.fmt_at(f, 2)
            }
            Expr::Lie(a, b) => write!(f, "[{a},{b}]"),
            Expr::Jordan(a, b) => write!(f, "({a} o {b})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityKind {
    Equation { lhs: Expr, rhs: Expr },
    CenterMembership { expr: Expr },
}

/// A universally quantified statement over the variables it mentions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub kind: IdentityKind,
    /// Variables occurring in the identity, in x, y, z order.
    pub quantified_vars: Vec<Var>,
}

impl Identity {
    pub fn new(kind: IdentityKind) -> Self {
        let mut seen = [false; 3];
        match &kind {
            IdentityKind::Equation { lhs, rhs } => {
                lhs.collect_vars(&mut seen);
                rhs.collect_vars(&mut seen);
            }
            IdentityKind::CenterMembership { expr } => expr.collect_vars(&mut seen),
        }
        let quantified_vars = Var::ALL.into_iter().filter(|v| seen[v.index()]).collect();
        Self {
            kind,
            quantified_vars,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            IdentityKind::Equation { lhs, rhs } => write!(f, "{lhs} = {rhs}"),
            IdentityKind::CenterMembership { expr } => write!(f, "{expr} in Z"),
        }
    }
}

impl std::str::FromStr for Identity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
    #[error("unbalanced {0:?}")]
    Unbalanced(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
}

/// Parse failure with the character offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Zero,
    Var(Var),
    D,
    O,
    In,
    CenterZ,
    Plus,
    Minus,
    Star,
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Zero => "'0'".into(),
            Tok::Var(v) => format!("'{}'", v.name()),
            Tok::D => "'d'".into(),
            Tok::O => "'o'".into(),
            Tok::In => "'in'".into(),
            Tok::CenterZ => "'Z'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Eq => "'='".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "0" => Tok::Zero,
                    "x" => Tok::Var(Var::X),
                    "y" => Tok::Var(Var::Y),
                    "z" => Tok::Var(Var::Z),
                    "d" => Tok::D,
                    "o" => Tok::O,
                    "in" => Tok::In,
                    "Z" => Tok::CenterZ,
                    w if w.chars().all(|c| c.is_ascii_alphabetic()) => {
                        return Err(ParseError {
                            position: start,
                            kind: ParseErrorKind::UnboundVariable(word),
                        })
                    }
                    _ => {
                        return Err(ParseError {
                            position: start,
                            kind: ParseErrorKind::UnknownToken(word),
                        })
                    }
                };
                out.push((start, tok));
                continue;
            }
            other => {
                return Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::UnknownToken(other.to_string()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    /// Open delimiters with their positions, for unbalanced-bracket reports.
    open: Vec<(usize, char)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let found = self.peek();
        if *found == Tok::End {
            if let Some(&(position, c)) = self.open.last() {
                return ParseError {
                    position,
                    kind: ParseErrorKind::Unbalanced(c),
                };
            }
        }
        if matches!(found, Tok::RParen | Tok::RBracket) && self.open.is_empty() {
            let c = if *found == Tok::RParen { ')' } else { ']' };
            return ParseError {
                position: self.offset(),
                kind: ParseErrorKind::Unbalanced(c),
            };
        }
        ParseError {
            position: self.offset(),
            kind: ParseErrorKind::Unexpected {
                expected,
                found: found.describe(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn open(&mut self, c: char) {
        let at = self.offset();
        self.bump();
        self.open.push((at, c));
    }

    fn close(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        self.expect(tok, expected)?;
        self.open.pop();
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Expr::Zero)
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Expr::Var(v))
            }
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Tok::D => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.error("'(' after d"));
                }
                self.open('(');
                let inner = self.expr()?;
                self.close(Tok::RParen, "')'")?;
                Ok(Expr::D(Box::new(inner)))
            }
            Tok::LBracket => {
                self.open('[');
                let a = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.expr()?;
                self.close(Tok::RBracket, "']'")?;
                Ok(Expr::Lie(Box::new(a), Box::new(b)))
            }
            Tok::LParen => {
                self.open('(');
                let a = self.expr()?;
                let e = if *self.peek() == Tok::O {
                    self.bump();
                    let b = self.expr()?;
                    Expr::Jordan(Box::new(a), Box::new(b))
                } else {
                    a
                };
                self.close(Tok::RParen, "')' or 'o'")?;
                Ok(e)
            }
            _ => Err(self.error("expression")),
        }
    }
}

/// Parses `expr = expr` or `expr in Z`.
pub fn parse_identity(text: &str) -> Result<Identity, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        open: Vec::new(),
    };
    let lhs = p.expr()?;
    let kind = match p.peek() {
        Tok::Eq => {
            p.bump();
            let rhs = p.expr()?;
            IdentityKind::Equation { lhs, rhs }
        }
        Tok::In => {
            p.bump();
            p.expect(Tok::CenterZ, "'Z' after 'in'")?;
            IdentityKind::CenterMembership { expr: lhs }
        }
        _ => return Err(p.error("'=' or 'in Z'")),
    };
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(Identity::new(kind))
}

/// Parses a bare expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        open: Vec::new(),
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(e)
}

/// Variable bindings for evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Env([Option<Element>; 3]);

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, v: Var, value: Element) -> Self {
        self.0[v.index()] = Some(value);
        self
    }

    pub fn get(&self, v: Var) -> Option<Element> {
        self.0[v.index()]
    }

    /// Bound variables with their values, in x, y, z order.
    pub fn bindings(&self) -> Vec<(Var, Element)> {
        Var::ALL
            .into_iter()
            .filter_map(|v| self.get(v).map(|e| (v, e)))
            .collect()
    }
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bindings()
            .into_iter()
            .map(|(v, e)| format!("{}={e}", v.name()))
            .collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("unbound variable {}", .0.name())]
pub struct EvalError(pub Var);

pub fn eval_expr(n: &NearRing, d: &DerivationMap, env: &Env, e: &Expr) -> Result<Element, EvalError> {
    Ok(match e {
        Expr::Zero => 0,
        Expr::Var(v) => env.get(*v).ok_or(EvalError(*v))?,
        Expr::D(a) => d.apply(eval_expr(n, d, env, a)?),
        Expr::Neg(a) => n.neg(eval_expr(n, d, env, a)?),
        Expr::Add(a, b) => n.add(eval_expr(n, d, env, a)?, eval_expr(n, d, env, b)?),
        Expr::Sub(a, b) => n.sub(eval_expr(n, d, env, a)?, eval_expr(n, d, env, b)?),
        Expr::Mul(a, b) => n.mul(eval_expr(n, d, env, a)?, eval_expr(n, d, env, b)?),
        Expr::Lie(a, b) => n.lie(eval_expr(n, d, env, a)?, eval_expr(n, d, env, b)?),
        Expr::Jordan(a, b) => n.jordan(eval_expr(n, d, env, a)?, eval_expr(n, d, env, b)?),
    })
}

/// Checks `id` under every assignment of its variables. On failure returns
/// the first assignment (x slowest) that falsifies it.
pub fn holds_for_all(n: &NearRing, d: &DerivationMap, id: &Identity) -> Result<(), Env> {
    holds_for_all_with_center(n, d, id, &n.center_mask())
}

/// As [`holds_for_all`] with a precomputed center mask.
pub fn holds_for_all_with_center(
    n: &NearRing,
    d: &DerivationMap,
    id: &Identity,
    center: &[bool],
) -> Result<(), Env> {
    let order = n.order();
    let k = id.quantified_vars.len();
    let mut counter = vec![0; k];
    loop {
        let env = id
            .quantified_vars
            .iter()
            .zip(&counter)
            .fold(Env::new(), |env, (&v, &e)| env.bind(v, e));
        let ok = match &id.kind {
            IdentityKind::Equation { lhs, rhs } => {
                eval_expr(n, d, &env, lhs).expect("quantified")
                    == eval_expr(n, d, &env, rhs).expect("quantified")
            }
            IdentityKind::CenterMembership { expr } => {
                center[eval_expr(n, d, &env, expr).expect("quantified")]
            }
        };
        if !ok {
            return Err(env);
        }
        // odometer, last variable fastest
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            counter[i] += 1;
            if counter[i] < order {
                break;
            }
            counter[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn parses_equation() {
        let id = parse_identity("d(x*y) = d(x)*d(y)").unwrap();
        assert!(matches!(id.kind, IdentityKind::Equation { .. }));
        assert_eq!(id.quantified_vars, vec![Var::X, Var::Y]);
    }

    #[test]
    fn parses_center_membership() {
        let id = parse_identity("[d(x),y] in Z").unwrap();
        assert!(matches!(id.kind, IdentityKind::CenterMembership { .. }));
        assert_eq!(id.quantified_vars, vec![Var::X, Var::Y]);
    }

    #[test]
    fn error_positions() {
        let err = parse_identity("d(x**y)").unwrap_err();
        assert_eq!(err.position, 4);
        assert!(matches!(err.kind, ParseErrorKind::Unexpected { .. }));

        let err = parse_identity("d(w) = 0").unwrap_err();
        assert_eq!(err, ParseError {
            position: 2,
            kind: ParseErrorKind::UnboundVariable("w".into())
        });

        let err = parse_identity("[x,y = 0").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Unexpected { expected: "']'", found: "'='".into() });

        let err = parse_identity("d(x = 0").unwrap_err();
        assert_eq!(err.position, 4);

        let err = parse_identity("(x o y").unwrap_err();
        assert_eq!(err, ParseError { position: 0, kind: ParseErrorKind::Unbalanced('(') });

        let err = parse_identity("x) = 0").unwrap_err();
        assert_eq!(err, ParseError { position: 1, kind: ParseErrorKind::Unbalanced(')') });

        let err = parse_identity("x # y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownToken("#".into()));

        assert!(parse_identity("x o y = 0").is_err());
        assert!(parse_identity("x*y").is_err());
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x*y + z").unwrap();
        let x = Box::new(Expr::Var(Var::X));
        let y = Box::new(Expr::Var(Var::Y));
        let z = Box::new(Expr::Var(Var::Z));
        assert_eq!(
            e,
            Expr::Add(Box::new(Expr::Mul(Box::new(Expr::Neg(x)), y)), z)
        );
        assert_eq!(parse_expr("x - y - z").unwrap().to_string(), "x - y - z");
        assert_eq!(parse_expr("x - (y - z)").unwrap().to_string(), "x - (y - z)");
        assert_eq!(parse_expr("x*(y*z)").unwrap().to_string(), "x*(y*z)");
        assert_eq!(parse_expr("(x*y)*z").unwrap().to_string(), "x*y*z");
    }

    #[test]
    fn evaluation() {
        let z3 = fixtures::z3_ring();
        let zero3 = DerivationMap::zero(3);
        let env = Env::new().bind(Var::X, 1).bind(Var::Y, 2);
        assert_eq!(eval_expr(&z3, &zero3, &env, &parse_expr("[x,x]").unwrap()), Ok(0));
        assert_eq!(eval_expr(&z3, &zero3, &env, &parse_expr("(x o y)").unwrap()), Ok(1));

        let n = fixtures::z2_zero();
        let d = DerivationMap::new(vec![0, 1]);
        let env = Env::new().bind(Var::X, 1).bind(Var::Y, 1);
        assert_eq!(eval_expr(&n, &d, &env, &parse_expr("d(x*y)").unwrap()), Ok(0));

        let e = parse_expr("x + z").unwrap();
        assert_eq!(eval_expr(&n, &d, &env, &e), Err(EvalError(Var::Z)));
    }

    #[test]
    fn universal_checks() {
        let rule = parse_identity("d(x*y) = x*d(y) + d(x)*y").unwrap();
        for n in fixtures::all().into_iter().filter(|n| n.order() <= 4) {
            for d in crate::derivation::enumerate_mult_derivations(&n) {
                assert_eq!(holds_for_all(&n, &d, &rule), Ok(()));
            }
        }
        let hom = parse_identity("d(x*y) = d(x)*d(y)").unwrap();
        assert_eq!(holds_for_all(&fixtures::z2_zero(), &DerivationMap::new(vec![0, 1]), &hom), Ok(()));
        let comm = parse_identity("[d(x),x] = 0").unwrap();
        assert_eq!(holds_for_all(&fixtures::z2_field(), &DerivationMap::zero(2), &comm), Ok(()));

        let fails = parse_identity("x*y = y").unwrap();
        let err = holds_for_all(&fixtures::z3_ring(), &DerivationMap::zero(3), &fails).unwrap_err();
        assert_eq!(err, Env::new().bind(Var::X, 0).bind(Var::Y, 1));

        // closed identity: single evaluation
        let closed = parse_identity("0 in Z").unwrap();
        assert!(closed.quantified_vars.is_empty());
        assert!(holds_for_all(&fixtures::z2_rproj(), &DerivationMap::zero(2), &closed).is_err());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Zero),
            Just(Expr::Var(Var::X)),
            Just(Expr::Var(Var::Y)),
            Just(Expr::Var(Var::Z)),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            let pair = (inner.clone(), inner.clone()).prop_map(|(a, b)| (Box::new(a), Box::new(b)));
            prop_oneof![
                inner.clone().prop_map(|e| Expr::D(Box::new(e))),
                inner.prop_map(|e| Expr::Neg(Box::new(e))),
                pair.clone().prop_map(|(a, b)| Expr::Add(a, b)),
                pair.clone().prop_map(|(a, b)| Expr::Sub(a, b)),
                pair.clone().prop_map(|(a, b)| Expr::Mul(a, b)),
                pair.clone().prop_map(|(a, b)| Expr::Lie(a, b)),
                pair.prop_map(|(a, b)| Expr::Jordan(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(lhs in arb_expr(), rhs in arb_expr(), center in any::<bool>()) {
            let kind = if center {
                IdentityKind::CenterMembership { expr: lhs }
            } else {
                IdentityKind::Equation { lhs, rhs }
            };
            let id = Identity::new(kind);
            let printed = id.to_string();
            let reparsed = parse_identity(&printed).unwrap();
            prop_assert_eq!(&reparsed, &id);
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}
