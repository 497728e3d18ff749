//! Boolean expressions over named inputs.
//!
//! Text syntax: `+` or `|` is OR, `*`, `&`, `.` or juxtaposition (`A (B+C)`, `A B`) is AND,
//! `^` is XOR, postfix `'` or prefix `!`/`~` is NOT, `0`/`1` are constants.
//! Identifiers are `[A-Za-z_][A-Za-z0-9_]*`, so `AB` is one input; write `A B` or `A*B`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Const(bool),
    Var(String),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Xor(Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn var(name: &str) -> Self {
        BoolExpr::Var(name.to_string())
    }

    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let tokens = lex(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected {:?} in `{text}`",
                p.tokens[p.pos]
            )));
        }
        Ok(e)
    }

    /// Input names in order of first appearance.
    pub fn inputs(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_inputs(&mut out);
        out
    }

    fn collect_inputs(&self, out: &mut Vec<String>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(v) => {
                if !out.iter().any(|x| x == v) {
                    out.push(v.clone());
                }
            }
            BoolExpr::Not(e) => e.collect_inputs(out),
            BoolExpr::And(xs) | BoolExpr::Or(xs) | BoolExpr::Xor(xs) => {
                for x in xs {
                    x.collect_inputs(out);
                }
            }
        }
    }

    pub fn eval_with<F: Fn(&str) -> bool + Copy>(&self, value: F) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(v) => value(v),
            BoolExpr::Not(e) => !e.eval_with(value),
            BoolExpr::And(xs) => xs.iter().all(|x| x.eval_with(value)),
            BoolExpr::Or(xs) => xs.iter().any(|x| x.eval_with(value)),
            BoolExpr::Xor(xs) => xs.iter().fold(false, |acc, x| acc ^ x.eval_with(value)),
        }
    }

    pub fn eval(&self, assignment: &BTreeMap<String, bool>) -> Result<bool> {
        for name in self.inputs() {
            if !assignment.contains_key(&name) {
                return Err(Error::input(format!("no value for input `{name}`")));
            }
        }
        Ok(self.eval_with(|n| assignment[n]))
    }

    /// Compiles against a fixed input order; bit `i` of the assignment word is input `i`.
    pub fn compile(&self, order: &[String]) -> Result<CompiledExpr> {
        let mut nodes = Vec::new();
        let root = compile_node(self, order, &mut nodes)?;
        Ok(CompiledExpr { nodes, root })
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(_) => 1,
            BoolExpr::Xor(_) => 2,
            BoolExpr::And(_) => 3,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone)]
enum CNode {
    Const(bool),
    Var(usize),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Xor(Vec<usize>),
}

/// Expression with inputs resolved to bit positions.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    nodes: Vec<CNode>,
    root: usize,
}

impl CompiledExpr {
    pub fn eval(&self, bits: u64) -> bool {
        self.eval_node(self.root, bits)
    }

    fn eval_node(&self, i: usize, bits: u64) -> bool {
        match &self.nodes[i] {
            CNode::Const(b) => *b,
            CNode::Var(k) => (bits >> k) & 1 == 1,
            CNode::Not(c) => !self.eval_node(*c, bits),
            CNode::And(cs) => cs.iter().all(|&c| self.eval_node(c, bits)),
            CNode::Or(cs) => cs.iter().any(|&c| self.eval_node(c, bits)),
            CNode::Xor(cs) => cs.iter().fold(false, |a, &c| a ^ self.eval_node(c, bits)),
        }
    }
}

fn compile_node(e: &BoolExpr, order: &[String], nodes: &mut Vec<CNode>) -> Result<usize> {
    let node = match e {
        BoolExpr::Const(b) => CNode::Const(*b),
        BoolExpr::Var(v) => {
            let k = order
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::input(format!("no value for input `{v}`")))?;
            CNode::Var(k)
        }
        BoolExpr::Not(c) => CNode::Not(compile_node(c, order, nodes)?),
        BoolExpr::And(xs) => CNode::And(compile_all(xs, order, nodes)?),
        BoolExpr::Or(xs) => CNode::Or(compile_all(xs, order, nodes)?),
        BoolExpr::Xor(xs) => CNode::Xor(compile_all(xs, order, nodes)?),
    };
    nodes.push(node);
    Ok(nodes.len() - 1)
}

fn compile_all(xs: &[BoolExpr], order: &[String], nodes: &mut Vec<CNode>) -> Result<Vec<usize>> {
    xs.iter().map(|x| compile_node(x, order, nodes)).collect()
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, xs: &[BoolExpr], sep: &str, prec: u8| {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                if x.precedence() <= prec {
                    write!(f, "({x})")?;
                } else {
                    write!(f, "{x}")?;
                }
            }
            Ok(())
        };
        match self {
            BoolExpr::Const(b) => write!(f, "{}", u8::from(*b)),
            BoolExpr::Var(v) => f.write_str(v),
            BoolExpr::Not(e) => match e.as_ref() {
                BoolExpr::Var(_) | BoolExpr::Const(_) | BoolExpr::Not(_) => write!(f, "{e}'"),
                _ => write!(f, "({e})'"),
            },
            BoolExpr::And(xs) => join(f, xs, "*", 3),
            BoolExpr::Or(xs) => join(f, xs, " + ", 1),
            BoolExpr::Xor(xs) => join(f, xs, " ^ ", 2),
        }
    }
}

impl FromStr for BoolExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoolExpr::parse(s)
    }
}

impl Serialize for BoolExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BoolExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => BoolExpr::parse(&s).map_err(serde::de::Error::custom),
            serde_json::Value::Bool(b) => Ok(BoolExpr::Const(b)),
            serde_json::Value::Number(n) if n.as_f64() == Some(0.0) => Ok(BoolExpr::Const(false)),
            serde_json::Value::Number(n) if n.as_f64() == Some(1.0) => Ok(BoolExpr::Const(true)),
            other => Err(serde::de::Error::custom(format!(
                "expected a boolean expression string, got {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Const(bool),
    Or,
    And,
    Xor,
    Not,
    Prime,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => {}
            '+' | '|' => out.push(Tok::Or),
            '*' | '&' | '.' | '·' => out.push(Tok::And),
            '^' | '⊕' => out.push(Tok::Xor),
            '!' | '~' | '¬' => out.push(Tok::Not),
            '\'' | '’' => out.push(Tok::Prime),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '0' => out.push(Tok::Const(false)),
            '1' => out.push(Tok::Const(true)),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..=i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{text}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn or(&mut self) -> Result<BoolExpr> {
        let mut xs = vec![self.xor()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            xs.push(self.xor()?);
        }
        Ok(flatten(xs, BoolExpr::Or))
    }

    fn xor(&mut self) -> Result<BoolExpr> {
        let mut xs = vec![self.and()?];
        while self.peek() == Some(&Tok::Xor) {
            self.pos += 1;
            xs.push(self.and()?);
        }
        Ok(flatten(xs, BoolExpr::Xor))
    }

    fn and(&mut self) -> Result<BoolExpr> {
        let mut xs = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(Tok::And) => {
                    self.pos += 1;
                    xs.push(self.unary()?);
                }
                Some(Tok::Ident(_)) | Some(Tok::Const(_)) | Some(Tok::LParen) | Some(Tok::Not) => {
                    xs.push(self.unary()?);
                }
                _ => break,
            }
        }
        Ok(flatten(xs, BoolExpr::And))
    }

    fn unary(&mut self) -> Result<BoolExpr> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(BoolExpr::not(self.unary()?));
        }
        let mut e = self.primary()?;
        while self.peek() == Some(&Tok::Prime) {
            self.pos += 1;
            e = BoolExpr::not(e);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<BoolExpr> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Ident(s)) => Ok(BoolExpr::Var(s)),
            Some(Tok::Const(b)) => Ok(BoolExpr::Const(b)),
            Some(Tok::LParen) => {
                let e = self.or()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

fn flatten(mut xs: Vec<BoolExpr>, make: fn(Vec<BoolExpr>) -> BoolExpr) -> BoolExpr {
    if xs.len() == 1 {
        return xs.pop().unwrap();
    }
    let probe = make(Vec::new());
    let mut flat = Vec::new();
    for x in xs {
        match (&probe, x) {
            (BoolExpr::And(_), BoolExpr::And(inner)) => flat.extend(inner),
            (BoolExpr::Or(_), BoolExpr::Or(inner)) => flat.extend(inner),
            (BoolExpr::Xor(_), BoolExpr::Xor(inner)) => flat.extend(inner),
            (_, x) => flat.push(x),
        }
    }
    make(flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn parses_book_forms() {
        let e = BoolExpr::parse("A(B' + C) + D + E'").unwrap();
        assert_eq!(e.inputs(), vec!["A", "B", "C", "D", "E"]);
        assert!(e.eval(&assign(&[("A", true),("B", false), ("C", false), ("D", false), ("E", true)])).unwrap());
        let f = BoolExpr::parse("A*B + A*B'*C + A'*B*C*D").unwrap();
        assert_eq!(f.to_string(), "A*B + A*B'*C + A'*B*C*D");
        assert_eq!(BoolExpr::parse("!(A+B)").unwrap(), BoolExpr::parse("(A+B)'").unwrap());
    }

    #[test]
    fn precedence_and_display_round_trip() {
        for text in ["A ^ B*C + D", "(A+B)*(C+D)'", "A'' + 1", "x1 & (y_2 | !z)"] {
            let e = BoolExpr::parse(text).unwrap();
            let again = BoolExpr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{text}");
        }
    }

    #[test]
    fn missing_input_is_an_error() {
        let e = BoolExpr::parse("A+B").unwrap();
        assert!(matches!(e.eval(&assign(&[("A", true)])), Err(Error::Input(_))));
        assert!(BoolExpr::parse("A+").is_err());
        assert!(BoolExpr::parse("A $ B").is_err());
    }
}
