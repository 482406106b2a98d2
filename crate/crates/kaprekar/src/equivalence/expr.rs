//! A small reader for affine expressions and constraint chains written over
//! `a, b, c, …` (the parameters `α¹, α², α³, …`).

use std::iter::Peekable;
use std::str::Chars;

use num_traits::{One, Zero};

use crate::affine::LinearConstraint;
use crate::{RatConstraint, RatExpr, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Var(usize),
    Op(char),
    Rel(&'static str),
}

fn lex(src: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut it: Peekable<Chars> = src.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' => {
                it.next();
            }
            '0'..='9' => {
                let mut v = 0i64;
                while let Some(d) = it.peek().and_then(|c| c.to_digit(10)) {
                    v = v * 10 + d as i64;
                    it.next();
                }
                out.push(Tok::Num(v));
            }
            'a'..='i' => {
                out.push(Tok::Var(c as usize - 'a' as usize));
                it.next();
            }
            '+' | '-' | '*' | '/' | '(' | ')' => {
                out.push(Tok::Op(c));
                it.next();
            }
            '<' | '>' => {
                it.next();
                let strict = it.peek() != Some(&'=');
                if !strict {
                    it.next();
                }
                out.push(Tok::Rel(match (c, strict) {
                    ('<', true) => "<",
                    ('<', false) => "<=",
                    ('>', true) => ">",
                    _ => ">=",
                }));
            }
            '=' => {
                out.push(Tok::Rel("="));
                it.next();
            }
            _ => panic!("unexpected character {c:?} in {src:?}"),
        }
    }
    out
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    h: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> RatExpr {
        let mut acc = self.term();
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term();
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        acc
    }

    fn term(&mut self) -> RatExpr {
        let mut acc = self.factor();
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.factor();
                    acc = mul(acc, rhs);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.factor();
                    assert!(
                        rhs.is_constant() && !rhs.constant.is_zero(),
                        "division by a non-constant"
                    );
                    acc = acc.scale(&(Rational::one() / rhs.constant));
                }
                // implicit product, as in `2a`
                Some(Tok::Var(_)) | Some(Tok::Op('(')) => {
                    let rhs = self.factor();
                    acc = mul(acc, rhs);
                }
                _ => return acc,
            }
        }
    }

    fn factor(&mut self) -> RatExpr {
        let t = self.peek().cloned();
        self.pos += 1;
        match t {
            Some(Tok::Num(v)) => RatExpr::constant(self.h, Rational::from(v)),
            Some(Tok::Var(s)) => {
                assert!(s < self.h, "parameter out of range");
                RatExpr::var(self.h, s)
            }
            Some(Tok::Op('-')) => -self.factor(),
            Some(Tok::Op('(')) => {
                let e = self.expr();
                assert_eq!(self.peek(), Some(&Tok::Op(')')), "unbalanced parentheses");
                self.pos += 1;
                e
            }
            other => panic!("unexpected token {other:?}"),
        }
    }
}

fn mul(x: RatExpr, y: RatExpr) -> RatExpr {
    if x.is_constant() {
        y.scale(&x.constant)
    } else {
        assert!(y.is_constant(), "product of two parameters is not affine");
        x.scale(&y.constant)
    }
}

/// Parses one affine expression over `h` parameters.
pub(crate) fn parse_expr(src: &str, h: usize) -> RatExpr {
    let toks = lex(src);
    let mut p = Parser { toks: &toks, pos: 0, h };
    let e = p.expr();
    assert_eq!(p.pos, toks.len(), "trailing input in {src:?}");
    e
}

/// Parses a comma separated list of expressions.
pub(crate) fn parse_map(src: &str, h: usize) -> Vec<RatExpr> {
    src.split(',').map(|s| parse_expr(s, h)).collect()
}

/// Parses comparison chains such as `a+b <= 10` or `a = b = c = 5`,
/// separated by commas. Strict comparisons use integrality of the
/// parameters: `x < y` becomes `y - x - 1 >= 0`.
pub(crate) fn parse_constraints(src: &str, h: usize) -> Vec<RatConstraint> {
    let mut out = Vec::new();
    for chain in src.split(',').filter(|s| !s.trim().is_empty()) {
        let toks = lex(chain);
        let mut sides = Vec::new();
        let mut rels = Vec::new();
        let mut start = 0;
        for (i, t) in toks.iter().enumerate() {
            if let Tok::Rel(r) = t {
                sides.push(&toks[start..i]);
                rels.push(*r);
                start = i + 1;
            }
        }
        sides.push(&toks[start..]);
        assert!(!rels.is_empty(), "constraint without relation: {chain:?}");
        let exprs: Vec<RatExpr> = sides
            .iter()
            .map(|s| {
                let mut p = Parser { toks: s, pos: 0, h };
                let e = p.expr();
                assert_eq!(p.pos, s.len(), "trailing input in {chain:?}");
                e
            })
            .collect();
        let one = RatExpr::constant(h, Rational::one());
        for (i, rel) in rels.iter().enumerate() {
            let (l, r) = (exprs[i].clone(), exprs[i + 1].clone());
            out.push(match *rel {
                "<=" => LinearConstraint::ge(r, l),
                ">=" => LinearConstraint::ge(l, r),
                "<" => LinearConstraint::ge(r, l + one.clone()),
                ">" => LinearConstraint::ge(l, r + one.clone()),
                _ => LinearConstraint::eq(l, r),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn expressions() {
        let e = parse_expr("21-2a-b", 3);
        assert_eq!(e.eval(&[r(7), r(2), r(0)]), r(5));
        let e = parse_expr("(a+b+1)/2", 3);
        assert_eq!(e.eval(&[r(8), r(5), r(0)]), r(7));
        let e = parse_expr("9-a/2", 3);
        assert_eq!(e.eval(&[r(6), r(3), r(0)]), r(6));
        let e = parse_expr("-a+2*b", 2);
        assert_eq!(e.eval(&[r(1), r(4)]), r(7));
    }

    #[test]
    fn chains() {
        let cs = parse_constraints("a = b = c = 5", 3);
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| c.holds(&[r(5), r(5), r(5)])));
        let cs = parse_constraints("a+b <= 10, a > b", 3);
        assert!(cs.iter().all(|c| c.holds(&[r(6), r(4), r(0)])));
        assert!(!cs[1].holds(&[r(5), r(5), r(0)]));
        let cs = parse_constraints("a-1 <= b <= a", 2);
        assert!(cs.iter().all(|c| c.holds(&[r(8), r(7)])));
        assert!(!cs.iter().all(|c| c.holds(&[r(8), r(6)])));
    }
}
