//! Arithmetic expressions in one variable `x`, used for interval maps.
//!
//! Grammar (whitespace is insignificant between tokens):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | '(' expr ')' | 'x' | rational
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! A rational literal is written without whitespace: `1/2` is the literal
//! one half, while `1 / 2` is a division of two integer literals. Both
//! evaluate to the same value; only the tree shape differs.

use std::fmt;

use num::{BigInt, ToPrimitive, Zero};

use crate::gcore::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Expression tree. Literals produced by the parser are never negative;
/// a leading minus becomes [`Expr::Neg`].
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var,
    Lit(Rational),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Var | Expr::Lit(_) => 4,
        }
    }

    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Var => x,
            Expr::Lit(r) => r.to_f64().unwrap_or(f64::NAN),
            Expr::Neg(e) => -e.eval_f64(x)?,
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval_f64(x)?, r.eval_f64(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Eval(format!("division by zero at x = {x}")));
                        }
                        a / b
                    }
                }
            }
        })
    }

    pub fn eval_rational(&self, x: &Rational) -> Result<Rational> {
        Ok(match self {
            Expr::Var => x.clone(),
            Expr::Lit(r) => r.clone(),
            Expr::Neg(e) => -e.eval_rational(x)?,
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval_rational(x)?, r.eval_rational(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.is_zero() {
                            return Err(Error::Eval(format!("division by zero at x = {x}")));
                        }
                        a / b
                    }
                }
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => f.write_str("x"),
            Expr::Lit(r) => write!(f, "{r}"),
            Expr::Neg(e) => {
                if e.precedence() < 3 {
                    write!(f, "-({e})")
                } else {
                    write!(f, "-{e}")
                }
            }
            Expr::Bin(op, l, r) => {
                let p = op.precedence();
                if l.precedence() < p {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, " {} ", op.symbol())?;
                // left associativity: an equal-precedence right child needs parens
                if r.precedence() <= p {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    X,
    Num(Rational),
    Op(char),
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_end = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'x' => {
                out.push((i, Tok::X));
                i += 1;
            }
            b'+' | b'-' | b'*' | b'/' => {
                out.push((i, Tok::Op(c as char)));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                let end = digits_end(i);
                let num: BigInt = src[start..end].parse().expect("ascii digits");
                if end + 1 < bytes.len() && bytes[end] == b'/' && bytes[end + 1].is_ascii_digit() {
                    let dend = digits_end(end + 1);
                    let den: BigInt = src[end + 1..dend].parse().expect("ascii digits");
                    if den.is_zero() {
                        return Err(Error::Parse {
                            pos: end + 1,
                            msg: "rational literal with zero denominator".into(),
                        });
                    }
                    out.push((start, Tok::Num(Rational::new(num, den))));
                    i = dend;
                } else {
                    out.push((start, Tok::Num(Rational::from_integer(num))));
                    i = end;
                }
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {ch:?}"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            lhs = Expr::bin(op, lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            lhs = Expr::bin(op, lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Expr::Lit(r))
            }
            Some(_) => self.err("expected '-', '(', 'x' or a number"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcore::scalar::rat;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn reference_map_formula() {
        let e = parse("x + 1/x - 1/2").unwrap();
        assert_eq!(
            e,
            Expr::bin(
                BinOp::Sub,
                Expr::bin(
                    BinOp::Add,
                    Expr::Var,
                    Expr::bin(BinOp::Div, Expr::Lit(rat(1, 1)), Expr::Var)
                ),
                Expr::Lit(rat(1, 2))
            )
        );
        assert_eq!(e.eval_f64(2.0).unwrap(), 2.0);
        assert_eq!(e.eval_rational(&rat(2, 1)).unwrap(), rat(2, 1));
        // 1.81 + 1/1.81 - 0.5
        assert_abs_diff_eq!(e.eval_f64(1.81).unwrap(), 1.862_486_187_845_303, epsilon = 1e-12);
    }

    #[test]
    fn identity_and_redundant_parens() {
        assert_eq!(parse("x").unwrap(), Expr::Var);
        assert_eq!(parse("((x))").unwrap(), parse("x").unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("2+3*4").unwrap().eval_rational(&rat(0, 1)).unwrap(), rat(14, 1));
        assert_eq!(parse("8-4-2").unwrap().eval_rational(&rat(0, 1)).unwrap(), rat(2, 1));
        assert_eq!(parse("8/4/2").unwrap().eval_rational(&rat(0, 1)).unwrap(), rat(1, 1));
        assert_eq!(parse("--x").unwrap().eval_f64(3.0).unwrap(), 3.0);
    }

    #[test]
    fn literal_versus_division() {
        assert_eq!(parse("1/2").unwrap(), Expr::Lit(rat(1, 2)));
        assert_eq!(
            parse("1 / 2").unwrap(),
            Expr::bin(BinOp::Div, Expr::Lit(rat(1, 1)), Expr::Lit(rat(2, 1)))
        );
        assert_eq!(parse("6/4").unwrap(), Expr::Lit(rat(3, 2)));
    }

    #[test]
    fn division_by_zero_is_an_eval_error() {
        let e = parse("1/x").unwrap();
        assert!(matches!(e.eval_f64(0.0), Err(Error::Eval(_))));
        assert!(matches!(e.eval_rational(&rat(0, 1)), Err(Error::Eval(_))));
        let z = parse("x - x").unwrap();
        assert_eq!(z.eval_f64(1.7).unwrap(), 0.0);
        assert_eq!(z.eval_rational(&rat(17, 10)).unwrap(), rat(0, 1));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse("1/0"),
            Err(Error::Parse { pos: 2, msg: "rational literal with zero denominator".into() })
        );
        assert!(matches!(parse("x +"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse("(x"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse("x y"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse("x ^ 2"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse("x)"), Err(Error::Parse { pos: 1, .. })));
    }

    #[test]
    fn exact_and_float_paths_agree_on_reference_maps() {
        let maps = ["x + 1/x - 1/2", "181/100", "x + 1/x - 1/3"];
        for src in maps {
            let e = parse(src).unwrap();
            for i in 0..64i64 {
                let x = rat(3, 2) + rat(i, 126);
                let exact = e.eval_rational(&x).unwrap().to_f64().unwrap();
                let float = e.eval_f64(x.to_f64().unwrap()).unwrap();
                assert_abs_diff_eq!(exact, float, epsilon = 1e-12);
            }
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Var),
            (0i64..50, 1i64..12).prop_map(|(n, d)| Expr::Lit(rat(n, d))),
        ];
        leaf.prop_recursive(6, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div)
                    ],
                    inner.clone(),
                    inner
                )
                    .prop_map(|(op, l, r)| Expr::bin(op, l, r)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn print_then_parse_is_identity(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse(&printed).unwrap(), e);
        }
    }
}
