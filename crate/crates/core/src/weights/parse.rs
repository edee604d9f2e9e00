//! Weight expression grammar.
//!
//! ```text
//! expr    = [ "+" | "-" ] term { ( "+" | "-" ) term } ;
//! term    = factor { "*" factor } ;
//! factor  = primary [ "^" integer ] ;
//! primary = number | coord | modulus | "(" expr ")" ;
//! coord   = ( "x" | "y" ) [ "_" ] index ;
//! modulus = "|" "z" [ "_" ] index "|" "^" even-integer ;
//! index   = digit { digit } ;           (1-based complex coordinate)
//! number  = digits [ "." digits ] [ ( "e" | "E" ) [ "+" | "-" ] digits ] ;
//! ```
//!
//! `|z_j|^2k` expands to `(x_j^2 + y_j^2)^k`. Whitespace is ignored. The
//! identifiers `i`/`I` are rejected because weights must be real.

use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    X(usize),
    Y(usize),
    Modulus(usize, u32),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut node = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Node::Neg(Box::new(self.term()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            if self.eat(b'+') {
                node = Node::Add(Box::new(node), Box::new(self.term()?));
            } else if self.eat(b'-') {
                node = Node::Sub(Box::new(node), Box::new(self.term()?));
            } else {
                return Ok(node);
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut node = self.factor()?;
        while self.eat(b'*') {
            node = Node::Mul(Box::new(node), Box::new(self.factor()?));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<Node> {
        let start = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let base = self.primary()?;
        if self.eat(b'^') {
            let exp_pos = self.pos;
            let k = self.integer()?;
            if let Node::Modulus(j, 1) = base {
                if k % 2 != 0 {
                    return err(exp_pos, format!("odd shorthand exponent {k} on |z{j}|"));
                }
                return Ok(Node::Modulus(j, k));
            }
            return Ok(Node::Pow(Box::new(base), k));
        }
        if let Node::Modulus(j, _) = base {
            return err(
                start,
                format!("odd shorthand exponent 1 on |z{j}| (write |z{j}|^2k)"),
            );
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a non-negative integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<u32>()
            .or_else(|_| err(start, format!("integer {s} out of range")))
    }

    fn index(&mut self) -> Result<usize> {
        if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
        }
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            return err(start, "expected a coordinate index");
        }
        let j = self.integer()? as usize;
        if j == 0 {
            return err(start, "coordinate indices start at 1");
        }
        Ok(j)
    }

    fn number(&mut self) -> Result<Node> {
        let start = self.pos;
        let bytes = self.src;
        let mut i = self.pos;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let s = std::str::from_utf8(&bytes[start..i]).expect("ascii number");
        self.pos = i;
        s.parse::<f64>()
            .map(Node::Num)
            .or_else(|_| err(start, format!("malformed number '{s}'")))
    }

    fn primary(&mut self) -> Result<Node> {
        let pos = match self.peek() {
            Some(_) => self.pos,
            None => return err(self.pos, "unexpected end of expression"),
        };
        let c = self.src[pos];
        match c {
            b'0'..=b'9' | b'.' => self.number(),
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return err(self.pos, "expected ')'");
                }
                Ok(inner)
            }
            b'x' | b'y' => {
                self.pos += 1;
                let j = self.index()?;
                Ok(if c == b'x' { Node::X(j) } else { Node::Y(j) })
            }
            b'|' => {
                self.pos += 1;
                if self.peek() != Some(b'z') {
                    return err(self.pos, "expected 'z' after '|'");
                }
                self.pos += 1;
                let j = self.index()?;
                if !self.eat(b'|') {
                    return err(self.pos, "expected closing '|'");
                }
                Ok(Node::Modulus(j, 1))
            }
            b'i' | b'I' => err(
                pos,
                "non-real coefficient: weights must be real polynomials",
            ),
            other => err(pos, format!("unexpected character '{}'", other as char)),
        }
    }
}

fn max_index(node: &Node) -> usize {
    match node {
        Node::Num(_) => 0,
        Node::X(j) | Node::Y(j) | Node::Modulus(j, _) => *j,
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => max_index(a).max(max_index(b)),
        Node::Neg(a) | Node::Pow(a, _) => max_index(a),
    }
}

fn expand(node: &Node, nvars: usize) -> Polynomial {
    match node {
        Node::Num(c) => Polynomial::constant(nvars, *c),
        Node::X(j) => Polynomial::variable(nvars, 2 * (j - 1)),
        Node::Y(j) => Polynomial::variable(nvars, 2 * (j - 1) + 1),
        Node::Modulus(j, k) => {
            let x = Polynomial::variable(nvars, 2 * (j - 1));
            let y = Polynomial::variable(nvars, 2 * (j - 1) + 1);
            x.mul(&x).add(&y.mul(&y)).pow(k / 2)
        }
        Node::Add(a, b) => expand(a, nvars).add(&expand(b, nvars)),
        Node::Sub(a, b) => expand(a, nvars).sub(&expand(b, nvars)),
        Node::Mul(a, b) => expand(a, nvars).mul(&expand(b, nvars)),
        Node::Neg(a) => expand(a, nvars).scale(-1.0),
        Node::Pow(a, k) => expand(a, nvars).pow(*k),
    }
}

/// Parses an expression and expands it over `2n` real variables. With
/// `n = None` the dimension is the largest coordinate index used (at least 1).
pub(crate) fn parse_polynomial(text: &str, n: Option<usize>) -> Result<(usize, Polynomial)> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let node = p.expr()?;
    if p.peek().is_some() {
        return err(
            p.pos,
            format!("unexpected trailing input '{}'", &text[p.pos..]),
        );
    }
    let used = max_index(&node).max(1);
    let n = match n {
        Some(n) if n < used => {
            return Err(Error::InvalidArgument(format!(
                "expression uses coordinate {used} but n = {n}"
            )))
        }
        Some(n) => n,
        None => used,
    };
    Ok((n, expand(&node, 2 * n)))
}
