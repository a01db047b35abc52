//! The set-expression language.
//!
//! ```text
//! expr  := union
//! union := diff ('|' diff)*
//! diff  := inter ('\' inter)*
//! inter := unary ('&' unary)*
//! unary := '~' unary | atom
//! atom  := 'N' | 'N1' | 'sigma' '(' int ')' | 'M' '(' int ')'
//!        | 'class' '(' int ',' int ')' | 'ap' '(' int ',' int ')'
//!        | '{' int (',' int)* '}' | '(' expr ')'
//! ```
//!
//! Precedence `~` > `&` > `\` > `|`, all binary operators left-associative,
//! whitespace insignificant. Atoms mirror the engine's objects: the whole
//! space, the space without 1, basic opens, multiple sets, residue classes,
//! arithmetic progressions and finite literals.

use std::fmt;

use coprime_topology::arith::gcd;
use coprime_topology::golomb::golomb_basic;
use coprime_topology::topology::sigma;
use coprime_topology::{EPSet, Result as EngineResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Universe,
    UniverseLessOne,
    Sigma(u64),
    Multiples(u64),
    Class { residue: u64, modulus: u64 },
    Progression { first: u64, step: u64 },
    Literal(Vec<u64>),
    Complement(Box<SetExpr>),
    Intersect(Box<SetExpr>, Box<SetExpr>),
    Difference(Box<SetExpr>, Box<SetExpr>),
    Union(Box<SetExpr>, Box<SetExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { offset: usize, expected: String },
    Semantic { offset: usize, message: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset, expected } => {
                write!(f, "syntax error at byte {offset}: expected {expected}")
            }
            ParseError::Semantic { offset, message } => {
                write!(f, "semantic error at byte {offset}: {message}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(u64),
    Pipe,
    Backslash,
    Amp,
    Tilde,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("'{s}'"),
            Token::Int(v) => format!("integer {v}"),
            Token::Pipe => "'|'".into(),
            Token::Backslash => "'\\'".into(),
            Token::Amp => "'&'".into(),
            Token::Tilde => "'~'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::LBrace => "'{'".into(),
            Token::RBrace => "'}'".into(),
            Token::Comma => "','".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'|' => {
                out.push((i, Token::Pipe));
                i += 1;
            }
            b'\\' => {
                out.push((i, Token::Backslash));
                i += 1;
            }
            b'&' => {
                out.push((i, Token::Amp));
                i += 1;
            }
            b'~' => {
                out.push((i, Token::Tilde));
                i += 1;
            }
            b'(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            b'{' => {
                out.push((i, Token::LBrace));
                i += 1;
            }
            b'}' => {
                out.push((i, Token::RBrace));
                i += 1;
            }
            b',' => {
                out.push((i, Token::Comma));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let value: u64 = digits.parse().map_err(|_| ParseError::Semantic {
                    offset: start,
                    message: format!("integer literal {digits} does not fit in 64 bits"),
                })?;
                out.push((start, Token::Int(value)));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: i,
                    expected: "an operator, atom, or whitespace".into(),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

const ATOM_EXPECTATION: &str = "one of 'N', 'N1', 'sigma', 'M', 'class', 'ap', '{', '(', '~'";

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Token, expected: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(t) if t == want => Ok(self.bump().unwrap().0),
            _ => Err(ParseError::Syntax {
                offset: self.offset(),
                expected: expected.into(),
            }),
        }
    }

    fn expect_int(&mut self) -> Result<(usize, u64), ParseError> {
        match self.peek() {
            Some(Token::Int(_)) => {
                let (off, Token::Int(v)) = self.bump().unwrap() else {
                    unreachable!()
                };
                Ok((off, v))
            }
            _ => Err(ParseError::Syntax {
                offset: self.offset(),
                expected: "an integer".into(),
            }),
        }
    }

    fn positive(&self, offset: usize, value: u64, what: &str) -> Result<u64, ParseError> {
        if value == 0 {
            return Err(ParseError::Semantic {
                offset,
                message: format!("{what} must be a positive integer"),
            });
        }
        Ok(value)
    }

    fn union(&mut self) -> Result<SetExpr, ParseError> {
        let mut node = self.diff()?;
        while matches!(self.peek(), Some(Token::Pipe)) {
            self.bump();
            node = SetExpr::Union(Box::new(node), Box::new(self.diff()?));
        }
        Ok(node)
    }

    fn diff(&mut self) -> Result<SetExpr, ParseError> {
        let mut node = self.inter()?;
        while matches!(self.peek(), Some(Token::Backslash)) {
            self.bump();
            node = SetExpr::Difference(Box::new(node), Box::new(self.inter()?));
        }
        Ok(node)
    }

    fn inter(&mut self) -> Result<SetExpr, ParseError> {
        let mut node = self.unary()?;
        while matches!(self.peek(), Some(Token::Amp)) {
            self.bump();
            node = SetExpr::Intersect(Box::new(node), Box::new(self.unary()?));
        }
        Ok(node)
    }

    fn unary(&mut self) -> Result<SetExpr, ParseError> {
        if matches!(self.peek(), Some(Token::Tilde)) {
            self.bump();
            return Ok(SetExpr::Complement(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SetExpr, ParseError> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                let (off, _) = self.bump().unwrap();
                match name.as_str() {
                    "N" => Ok(SetExpr::Universe),
                    "N1" => Ok(SetExpr::UniverseLessOne),
                    "sigma" => {
                        self.expect(&Token::LParen, "'(' after 'sigma'")?;
                        let (o, v) = self.expect_int()?;
                        let n = self.positive(o, v, "sigma argument")?;
                        self.expect(&Token::RParen, "')'")?;
                        Ok(SetExpr::Sigma(n))
                    }
                    "M" => {
                        self.expect(&Token::LParen, "'(' after 'M'")?;
                        let (o, v) = self.expect_int()?;
                        let n = self.positive(o, v, "M argument")?;
                        self.expect(&Token::RParen, "')'")?;
                        Ok(SetExpr::Multiples(n))
                    }
                    "class" => {
                        self.expect(&Token::LParen, "'(' after 'class'")?;
                        let (ao, a) = self.expect_int()?;
                        self.expect(&Token::Comma, "','")?;
                        let (mo, mv) = self.expect_int()?;
                        let m = self.positive(mo, mv, "class modulus")?;
                        self.expect(&Token::RParen, "')'")?;
                        if a >= m {
                            return Err(ParseError::Semantic {
                                offset: ao,
                                message: format!("residue {a} out of range for modulus {m}"),
                            });
                        }
                        Ok(SetExpr::Class {
                            residue: a,
                            modulus: m,
                        })
                    }
                    "ap" => {
                        self.expect(&Token::LParen, "'(' after 'ap'")?;
                        let (ao, av) = self.expect_int()?;
                        let a = self.positive(ao, av, "ap first term")?;
                        self.expect(&Token::Comma, "','")?;
                        let (bo, bv) = self.expect_int()?;
                        let b = self.positive(bo, bv, "ap step")?;
                        self.expect(&Token::RParen, "')'")?;
                        let g = gcd(a, b);
                        if g != 1 {
                            return Err(ParseError::Semantic {
                                offset: ao,
                                message: format!(
                                    "ap({a},{b}) requires gcd({a},{b}) = 1, but gcd = {g}"
                                ),
                            });
                        }
                        Ok(SetExpr::Progression { first: a, step: b })
                    }
                    _ => Err(ParseError::Syntax {
                        offset: off,
                        expected: ATOM_EXPECTATION.into(),
                    }),
                }
            }
            Some(Token::LBrace) => {
                self.bump();
                let mut elems = Vec::new();
                let (o, v) = self.expect_int()?;
                elems.push(self.positive(o, v, "set element")?);
                while matches!(self.peek(), Some(Token::Comma)) {
                    self.bump();
                    let (o, v) = self.expect_int()?;
                    elems.push(self.positive(o, v, "set element")?);
                }
                self.expect(&Token::RBrace, "',' or '}'")?;
                Ok(SetExpr::Literal(elems))
            }
            Some(Token::LParen) => {
                self.bump();
                let inner = self.union()?;
                self.expect(&Token::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(ParseError::Syntax {
                offset: self.offset(),
                expected: format!("{ATOM_EXPECTATION}, found {}", t.describe()),
            }),
            None => Err(ParseError::Syntax {
                offset: self.end,
                expected: ATOM_EXPECTATION.into(),
            }),
        }
    }
}

/// Parses one expression covering the whole input.
pub fn parse_expr(text: &str) -> Result<SetExpr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let expr = parser.union()?;
    if let Some(t) = parser.peek() {
        return Err(ParseError::Syntax {
            offset: parser.offset(),
            expected: format!("end of input, found {}", t.describe()),
        });
    }
    Ok(expr)
}

fn precedence(expr: &SetExpr) -> u8 {
    match expr {
        SetExpr::Union(..) => 0,
        SetExpr::Difference(..) => 1,
        SetExpr::Intersect(..) => 2,
        SetExpr::Complement(..) => 3,
        _ => 4,
    }
}

fn render_at(expr: &SetExpr, min_prec: u8, out: &mut String) {
    let prec = precedence(expr);
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match expr {
        SetExpr::Universe => out.push('N'),
        SetExpr::UniverseLessOne => out.push_str("N1"),
        SetExpr::Sigma(n) => out.push_str(&format!("sigma({n})")),
        SetExpr::Multiples(n) => out.push_str(&format!("M({n})")),
        SetExpr::Class { residue, modulus } => {
            out.push_str(&format!("class({residue},{modulus})"))
        }
        SetExpr::Progression { first, step } => out.push_str(&format!("ap({first},{step})")),
        SetExpr::Literal(elems) => {
            out.push('{');
            for (i, e) in elems.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&e.to_string());
            }
            out.push('}');
        }
        SetExpr::Complement(inner) => {
            out.push('~');
            render_at(inner, 3, out);
        }
        SetExpr::Intersect(a, b) => {
            render_at(a, 2, out);
            out.push_str(" & ");
            render_at(b, 3, out);
        }
        SetExpr::Difference(a, b) => {
            render_at(a, 1, out);
            out.push_str(" \\ ");
            render_at(b, 2, out);
        }
        SetExpr::Union(a, b) => {
            render_at(a, 0, out);
            out.push_str(" | ");
            render_at(b, 1, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Renders with the minimal parentheses that reparse to the same tree.
pub fn render(expr: &SetExpr) -> String {
    let mut out = String::new();
    render_at(expr, 0, &mut out);
    out
}

/// Evaluates to a canonical eventually periodic set.
pub fn eval(expr: &SetExpr) -> EngineResult<EPSet> {
    match expr {
        SetExpr::Universe => Ok(EPSet::universe()),
        SetExpr::UniverseLessOne => EPSet::new(1, [0], [], [1]),
        SetExpr::Sigma(n) => sigma(*n),
        SetExpr::Multiples(n) => EPSet::multiples(*n),
        SetExpr::Class { residue, modulus } => EPSet::periodic(*modulus, [*residue]),
        SetExpr::Progression { first, step } => golomb_basic(*first, *step),
        SetExpr::Literal(elems) => EPSet::finite(elems.iter().copied()),
        SetExpr::Complement(inner) => Ok(eval(inner)?.complement()),
        SetExpr::Intersect(a, b) => eval(a)?.intersect(&eval(b)?),
        SetExpr::Difference(a, b) => eval(a)?.difference(&eval(b)?),
        SetExpr::Union(a, b) => eval(a)?.union(&eval(b)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(t: &str) -> SetExpr {
        parse_expr(t).unwrap()
    }

    #[test]
    fn parses_structures() {
        assert_eq!(
            parse("sigma(12) & M(5)"),
            SetExpr::Intersect(
                Box::new(SetExpr::Sigma(12)),
                Box::new(SetExpr::Multiples(5))
            )
        );
        assert_eq!(
            parse("~M(2) \\ {1}"),
            SetExpr::Difference(
                Box::new(SetExpr::Complement(Box::new(SetExpr::Multiples(2)))),
                Box::new(SetExpr::Literal(vec![1]))
            )
        );
        assert_eq!(parse("N1"), SetExpr::UniverseLessOne);
        assert_eq!(
            parse("class(3,4)"),
            SetExpr::Class {
                residue: 3,
                modulus: 4
            }
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // ~ > & > \ > |
        assert_eq!(
            parse("N | N1 \\ M(2) & sigma(3)"),
            SetExpr::Union(
                Box::new(SetExpr::Universe),
                Box::new(SetExpr::Difference(
                    Box::new(SetExpr::UniverseLessOne),
                    Box::new(SetExpr::Intersect(
                        Box::new(SetExpr::Multiples(2)),
                        Box::new(SetExpr::Sigma(3))
                    ))
                ))
            )
        );
        // Left associativity of chains.
        assert_eq!(
            parse("M(2) \\ M(3) \\ M(5)"),
            SetExpr::Difference(
                Box::new(SetExpr::Difference(
                    Box::new(SetExpr::Multiples(2)),
                    Box::new(SetExpr::Multiples(3))
                )),
                Box::new(SetExpr::Multiples(5))
            )
        );
        assert_eq!(parse("~~N"), parse("~(~N)"));
        assert_eq!(parse("(M(2) | M(3)) & N1"), parse("(M(2)|M(3))&N1"));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_expr("sigma(12") {
            Err(ParseError::Syntax { offset, expected }) => {
                assert_eq!(offset, 8);
                assert!(expected.contains("')'"), "{expected}");
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("M(2) ^ M(3)") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("frob(3)") {
            Err(ParseError::Syntax { offset, expected }) => {
                assert_eq!(offset, 0);
                assert!(expected.contains("sigma"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("M(2) M(3)") {
            Err(ParseError::Syntax { offset, expected }) => {
                assert_eq!(offset, 5);
                assert!(expected.contains("end of input"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("{}").is_err());
    }

    #[test]
    fn semantic_errors_state_the_constraint() {
        match parse_expr("ap(2,4)") {
            Err(ParseError::Semantic { message, .. }) => {
                assert!(message.contains("gcd = 2"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_expr("class(4,4)") {
            Err(ParseError::Semantic { message, .. }) => {
                assert!(message.contains("out of range"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("sigma(0)").is_err());
        assert!(parse_expr("{0}").is_err());
        assert!(parse_expr("M(99999999999999999999)").is_err());
    }

    #[test]
    fn render_round_trips() {
        let corpus = [
            "N",
            "N1",
            "sigma(12) & M(5)",
            "~M(2) \\ {1}",
            "M(2) | M(3) | M(5)",
            "M(2) \\ (M(3) \\ M(5))",
            "~(M(2) | M(3))",
            "(N \\ {1,2,3}) & sigma(6)",
            "class(1,4) | ap(7,3)",
            "{4,9} | ~sigma(30) & N1",
            "~~N1 \\ ~M(7)",
        ];
        for text in corpus {
            let tree = parse(text);
            let rendered = render(&tree);
            assert_eq!(parse(&rendered), tree, "{text} -> {rendered}");
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval(&parse("N")).unwrap(), EPSet::universe());
        assert_eq!(
            eval(&parse("sigma(2) & sigma(3)")).unwrap(),
            eval(&parse("sigma(6)")).unwrap()
        );
        assert_eq!(
            eval(&parse("N \\ {1}")).unwrap(),
            eval(&parse("N1")).unwrap()
        );
        assert_eq!(
            eval(&parse("ap(7,3)")).unwrap(),
            EPSet::new(3, [1], [], [1, 4]).unwrap()
        );
        assert_eq!(
            eval(&parse("sigma(12) & M(5)")).unwrap(),
            EPSet::periodic(30, [5, 25]).unwrap()
        );
    }
}
