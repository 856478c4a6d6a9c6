use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(BigInt),
    Ident(String),
    /// `d[i,j;k,l]`
    Short(Vec<usize>, Vec<usize>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

fn parse_err(pos: usize, expected: &str) -> Error {
    Error::Parse {
        position: pos,
        expected: expected.into(),
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
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
            out.push(Token { tok, pos: start });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i]
                .parse()
                .map_err(|_| parse_err(start, "number"))?;
            out.push(Token {
                tok: Tok::Num(n),
                pos: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            if &src[start..i] == "d" && bytes.get(i) == Some(&b'[') {
                let close = src[i..].find(']').ok_or_else(|| parse_err(i, "`]`"))? + i;
                let body = &src[i + 1..close];
                let (qs, ps) = body.split_once(';').unwrap_or((body, ""));
                let list = |s: &str, at: usize| -> Result<Vec<usize>> {
                    s.split(',')
                        .map(str::trim)
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse::<usize>().map_err(|_| parse_err(at, "index list")))
                        .collect()
                };
                let tok = Tok::Short(list(qs, i + 1)?, list(ps, i + 1)?);
                out.push(Token { tok, pos: start });
                i = close + 1;
                continue;
            }
            if src[start..i].ends_with('_') && bytes.get(i) == Some(&b'{') {
                let close = src[i..].find('}').ok_or_else(|| parse_err(i, "`}`"))? + i;
                i = close + 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                pos: start,
            });
            continue;
        }
        return Err(parse_err(start, "term"));
    }
    out.push(Token {
        tok: Tok::End,
        pos: src.len(),
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Wedge, or a power when the right operand is an integer literal.
    Caret,
}

#[derive(Debug, Clone)]
pub(crate) enum Expr {
    Num(BigInt),
    Ident(String),
    Short(Vec<usize>, Vec<usize>),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub expr: Expr,
    pub pos: usize,
}

impl Node {
    pub fn idents(&self, out: &mut Vec<String>) {
        match &self.expr {
            Expr::Ident(s) => out.push(s.clone()),
            Expr::Neg(a) => a.idents(out),
            Expr::Bin(_, a, b) => {
                a.idents(out);
                b.idents(out);
            }
            Expr::Num(_) | Expr::Short(..) => {}
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut left = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(left),
            };
            let pos = self.bump().pos;
            let right = self.term()?;
            left = Node {
                expr: Expr::Bin(op, Box::new(left), Box::new(right)),
                pos,
            };
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(left),
            };
            let pos = self.bump().pos;
            let right = self.unary()?;
            left = Node {
                expr: Expr::Bin(op, Box::new(left), Box::new(right)),
                pos,
            };
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek().tok == Tok::Minus {
            let pos = self.bump().pos;
            let inner = self.unary()?;
            return Ok(Node {
                expr: Expr::Neg(Box::new(inner)),
                pos,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let mut left = self.atom()?;
        while self.peek().tok == Tok::Caret {
            let pos = self.bump().pos;
            let right = self.atom()?;
            left = Node {
                expr: Expr::Bin(BinOp::Caret, Box::new(left), Box::new(right)),
                pos,
            };
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<Node> {
        let t = self.bump();
        let expr = match t.tok {
            Tok::Num(n) => Expr::Num(n),
            Tok::Ident(s) => Expr::Ident(s),
            Tok::Short(q, p) => Expr::Short(q, p),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(parse_err(self.peek().pos, "`)`"));
                }
                self.bump();
                return Ok(inner);
            }
            _ => return Err(parse_err(t.pos, "term")),
        };
        Ok(Node { expr, pos: t.pos })
    }
}

pub(crate) fn parse(src: &str) -> Result<Node> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    if p.peek().tok == Tok::End {
        return Err(parse_err(0, "expression"));
    }
    let node = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(parse_err(p.peek().pos, "operator or end of input"));
    }
    Ok(node)
}

/// Splits `name_12` or `name_{1,2}` into its field name and indices.
pub(crate) fn split_indexed(s: &str) -> Option<(&str, Vec<usize>)> {
    let (head, tail) = match s.split_once('_') {
        Some(parts) => parts,
        None => return Some((s, Vec::new())),
    };
    if head.is_empty() || !head.chars().all(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    if let Some(inner) = tail.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let ix: Option<Vec<usize>> = inner.split(',').map(|t| t.trim().parse().ok()).collect();
        return ix.map(|ix| (head, ix));
    }
    if tail.is_empty() || !tail.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some((
        head,
        tail.chars().map(|c| c as usize - '0' as usize).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_shorthand() {
        let toks = lex("d[1,2;3] + d[;1]").unwrap();
        assert_eq!(toks[0].tok, Tok::Short(vec![1, 2], vec![3]));
        assert_eq!(toks[2].tok, Tok::Short(vec![], vec![1]));
    }

    #[test]
    fn reports_positions() {
        assert!(matches!(
            parse("dq1 + "),
            Err(Error::Parse { position: 6, .. })
        ));
        assert!(matches!(
            parse("(dq1"),
            Err(Error::Parse { position: 4, .. })
        ));
        assert!(matches!(
            parse("dq1 dq2"),
            Err(Error::Parse { position: 4, .. })
        ));
        assert!(matches!(
            parse("dq1 # 2"),
            Err(Error::Parse { position: 4, .. })
        ));
    }

    #[test]
    fn indexed_names() {
        assert_eq!(split_indexed("phi_12"), Some(("phi", vec![1, 2])));
        assert_eq!(split_indexed("psi"), Some(("psi", vec![])));
        assert_eq!(split_indexed("phi_{10,2}"), Some(("phi", vec![10, 2])));
        assert_eq!(split_indexed("phi_x"), None);
    }
}
