//! Input grammar for quotient rings.
//!
//! One-line form:
//!
//! ```text
//! QQ[x,y,z] / (x*y^2, x*y*z, x^4 - y^3*z)
//! GF 2[u,v,w] / ideal(u^2, v*w)
//! ZZ/7[x] / ()
//! ```
//!
//! Sectioned form, one keyword per line, `#` starts a comment:
//!
//! ```text
//! FIELD QQ
//! VARS x, y, z
//! GENS
//!   x*y^2, x*y*z
//!   x^4 - y^3*z
//! ```

use num_bigint::BigInt;

use crate::analysis::{analyze, Analysis};
use crate::error::{Error, Result};
use crate::field::{CoefficientField, Field, PrimeField, Rationals};
use crate::invariants::ReductionConfig;
use crate::poly::{MonomialOrder, PolyRing, Polynomial, Ring};

/// A polynomial expression over named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn eval<F: Field>(&self, ring: &Ring<F>) -> Polynomial<F> {
        match self {
            Expr::Num(n) => Polynomial::constant(ring, ring.field().from_bigint(n)),
            Expr::Var(i) => Polynomial::var(ring, *i),
            Expr::Neg(a) => -a.eval(ring),
            Expr::Add(a, b) => a.eval(ring) + b.eval(ring),
            Expr::Sub(a, b) => a.eval(ring) - b.eval(ring),
            Expr::Mul(a, b) => a.eval(ring) * b.eval(ring),
            Expr::Pow(a, k) => a.eval(ring).pow(*k),
        }
    }
}

/// A parsed ring description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    pub field: CoefficientField,
    pub vars: Vec<String>,
    pub generators: Vec<Expr>,
}

impl InputSpec {
    pub fn build<F: Field>(&self, field: F) -> (Ring<F>, Vec<Polynomial<F>>) {
        let ring = PolyRing::new(field, self.vars.iter().cloned(), MonomialOrder::DegRevLex);
        let gens = self.generators.iter().map(|g| g.eval(&ring)).collect();
        (ring, gens)
    }

    /// Runs the classification pipeline over the declared field.
    pub fn analyze(&self, cfg: &ReductionConfig) -> Result<Analysis> {
        match self.field {
            CoefficientField::Rationals => {
                let (r, g) = self.build(Rationals);
                analyze(&r, &g, cfg)
            }
            CoefficientField::Prime(p) => {
                let (r, g) = self.build(PrimeField::new(u64::from(p))?);
                analyze(&r, &g, cfg)
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

struct Cursor {
    chars: Vec<char>,
    at: usize,
    origin: Pos,
}

impl Cursor {
    fn new(src: &str, origin: Pos) -> Self {
        Cursor {
            chars: src.chars().collect(),
            at: 0,
            origin,
        }
    }

    fn pos(&self) -> Pos {
        let mut p = self.origin;
        for &c in &self.chars[..self.at] {
            if c == '\n' {
                p.line += 1;
                p.column = 1;
            } else {
                p.column += 1;
            }
        }
        p
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let p = self.pos();
        Error::Parse {
            line: p.line,
            column: p.column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].is_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let message = match self.peek() {
                Some(found) => format!("expected `{c}`, found `{found}`"),
                None => format!("expected `{c}`, found end of input"),
            };
            Err(self.error(message))
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        let end = self.at + w.len();
        if end <= self.chars.len() && self.chars[self.at..end] == w[..] {
            let boundary = self.chars.get(end).is_none_or(|c| !c.is_alphanumeric() && *c != '_');
            if boundary {
                self.at = end;
                return true;
            }
        }
        false
    }

    fn identifier(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.at;
        if !self.chars.get(start).is_some_and(|c| c.is_alphabetic() || *c == '_') {
            return None;
        }
        while self
            .chars
            .get(self.at)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.at += 1;
        }
        Some(self.chars[start..self.at].iter().collect())
    }

    fn integer(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.at;
        while self.chars.get(self.at).is_some_and(char::is_ascii_digit) {
            self.at += 1;
        }
        (self.at > start).then(|| self.chars[start..self.at].iter().collect())
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn field(&mut self) -> Result<CoefficientField> {
        if self.eat_word("QQ") {
            return Ok(CoefficientField::Rationals);
        }
        let prime = if self.eat_word("GF") {
            true
        } else if self.eat_word("ZZ") {
            self.expect('/')?;
            true
        } else {
            false
        };
        if !prime {
            return Err(self.error("expected a field: QQ, GF p or ZZ/p"));
        }
        let digits = self.integer().ok_or_else(|| self.error("expected a characteristic"))?;
        let p: u64 = digits.parse().map_err(|_| self.error("characteristic is too large"))?;
        CoefficientField::prime(p)
    }

    fn variables(&mut self, close: Option<char>) -> Result<Vec<String>> {
        let mut vars: Vec<String> = Vec::new();
        if close.is_some_and(|c| self.eat(c)) {
            return Ok(vars);
        }
        loop {
            let name = self
                .identifier()
                .ok_or_else(|| self.error("expected a variable name"))?;
            if vars.contains(&name) {
                return Err(self.error(format!("variable `{name}` is declared twice")));
            }
            vars.push(name);
            if self.eat(',') {
                continue;
            }
            match close {
                Some(c) => {
                    self.expect(c)?;
                    break;
                }
                None if self.at_end() => break,
                None => return Err(self.error("expected `,` between variables")),
            }
        }
        Ok(vars)
    }

    fn expression(&mut self, vars: &[String]) -> Result<Expr> {
        let mut acc = self.term(vars)?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term(vars)?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term(vars)?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, vars: &[String]) -> Result<Expr> {
        let mut acc = self.unary(vars)?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary(vars)?));
            } else if self.peek().is_some_and(|c| c.is_alphanumeric() || c == '(') {
                // Juxtaposition such as `2x` or `x(y+z)`.
                acc = Expr::Mul(Box::new(acc), Box::new(self.power(vars)?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self, vars: &[String]) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary(vars)?)));
        }
        if self.eat('+') {
            return self.unary(vars);
        }
        self.power(vars)
    }

    fn power(&mut self, vars: &[String]) -> Result<Expr> {
        let base = self.atom(vars)?;
        if self.eat('^') {
            let digits = self
                .integer()
                .ok_or_else(|| self.error("expected a nonnegative integer exponent"))?;
            let k: u32 = digits.parse().map_err(|_| self.error("exponent is too large"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self, vars: &[String]) -> Result<Expr> {
        if self.eat('(') {
            let e = self.expression(vars)?;
            self.expect(')')?;
            return Ok(e);
        }
        if let Some(digits) = self.integer() {
            return Ok(Expr::Num(digits.parse().expect("digits")));
        }
        let before = self.at;
        if let Some(name) = self.identifier() {
            return match vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Expr::Var(i)),
                None => {
                    self.at = before;
                    Err(Error::UnknownVariable(name))
                }
            };
        }
        let message = match self.peek() {
            Some(c) => format!("unexpected `{c}`"),
            None => "unexpected end of input".to_string(),
        };
        Err(self.error(message))
    }

    fn generator_list(&mut self, vars: &[String], close: Option<char>) -> Result<Vec<Expr>> {
        let mut gens = Vec::new();
        if close.is_some_and(|c| self.eat(c)) {
            return Ok(gens);
        }
        if close.is_none() && self.at_end() {
            return Ok(gens);
        }
        loop {
            gens.push(self.expression(vars)?);
            if self.eat(',') {
                continue;
            }
            match close {
                Some(c) => {
                    self.expect(c)?;
                    return Ok(gens);
                }
                None if self.at_end() => return Ok(gens),
                None => return Err(self.error("expected `,` between generators")),
            }
        }
    }
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split_once('#').map_or(l, |(a, _)| a))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses the one-line form.
pub fn parse_line(text: &str) -> Result<InputSpec> {
    parse_line_at(text, 1)
}

fn parse_line_at(text: &str, line: usize) -> Result<InputSpec> {
    let mut cur = Cursor::new(text, Pos { line, column: 1 });
    let field = cur.field()?;
    cur.expect('[')?;
    let vars = cur.variables(Some(']'))?;
    let generators = if cur.eat('/') {
        cur.eat_word("ideal");
        cur.expect('(')?;
        cur.generator_list(&vars, Some(')'))?
    } else {
        Vec::new()
    };
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    Ok(InputSpec {
        field,
        vars,
        generators,
    })
}

/// Parses the sectioned form.
pub fn parse_sections(text: &str) -> Result<InputSpec> {
    let text = strip_comments(text);
    let mut field = None;
    let mut vars = None;
    let mut gens_at = None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim_start();
        let column = raw.len() - line.len() + 1;
        let origin = |skip: usize| Pos {
            line: k + 1,
            column: column + skip,
        };
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let key_len = key.len() + 1;
        let rest_str = rest;
        match key.trim_end_matches(':') {
            "" => {}
            "FIELD" => {
                let mut cur = Cursor::new(rest_str, origin(key_len));
                let f = cur.field()?;
                if !cur.at_end() {
                    return Err(cur.error("trailing input after field"));
                }
                field = Some(f);
            }
            "VARS" => {
                let mut cur = Cursor::new(rest_str, origin(key_len));
                vars = Some(cur.variables(None)?);
            }
            "GENS" => {
                gens_at = Some((k, key_len));
                break;
            }
            other => {
                return Err(Error::Parse {
                    line: k + 1,
                    column,
                    message: format!("expected FIELD, VARS or GENS, found `{other}`"),
                })
            }
        }
    }
    let missing = |what: &str| Error::Parse {
        line: text.lines().count().max(1),
        column: 1,
        message: format!("missing {what} section"),
    };
    let field = field.ok_or_else(|| missing("FIELD"))?;
    let vars = vars.ok_or_else(|| missing("VARS"))?;
    let (k, _) = gens_at.ok_or_else(|| missing("GENS"))?;
    // Everything after the GENS keyword, newlines acting as commas.
    let lines: Vec<&str> = text.lines().collect();
    let first = lines[k].trim_start();
    let indent = lines[k].len() - first.len();
    let after_key = first.find(char::is_whitespace).map_or(first.len(), |i| i);
    let mut body = String::new();
    body.push_str(&first[after_key..]);
    for l in &lines[k + 1..] {
        body.push('\n');
        body.push_str(l);
    }
    let joined = join_lines(&body);
    let mut cur = Cursor::new(
        &joined,
        Pos {
            line: k + 1,
            column: indent + after_key + 1,
        },
    );
    let generators = cur.generator_list(&vars, None)?;
    Ok(InputSpec {
        field,
        vars,
        generators,
    })
}

/// Turns line breaks between generators into commas, keeping positions.
fn join_lines(body: &str) -> String {
    let lines: Vec<&str> = body.split('\n').collect();
    let mut out = String::new();
    let mut pending = false;
    for (i, l) in lines.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let t = l.trim();
        if t.is_empty() {
            out.push_str(l);
            continue;
        }
        let continues = t.starts_with([',', '+', '-', '*', '^', ')']);
        if pending && !continues {
            // Replace the newline we just pushed by a comma-newline pair
            // without shifting columns on this line.
            out.pop();
            out.push(',');
            out.push('\n');
        }
        out.push_str(l);
        pending = !t.ends_with([',', '+', '-', '*', '^', '(']);
    }
    out
}

/// Accepts either form.
pub fn parse_input(text: &str) -> Result<InputSpec> {
    let stripped = strip_comments(text);
    let first = stripped.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first.starts_with("FIELD") {
        parse_sections(text)
    } else {
        let (offset, line) = stripped
            .lines()
            .enumerate()
            .find(|(_, l)| !l.trim().is_empty())
            .unwrap_or((0, ""));
        let rest_blank = stripped.lines().skip(offset + 1).all(|l| l.trim().is_empty());
        if !rest_blank {
            return Err(Error::Parse {
                line: offset + 2,
                column: 1,
                message: "a one-line ring description must fit on one line".into(),
            });
        }
        parse_line_at(line, offset + 1)
    }
}

/// One spec per nonblank, non-comment line.
pub fn parse_batch(text: &str) -> Vec<(usize, Result<InputSpec>)> {
    strip_comments(text)
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| (k + 1, parse_line_at(l, k + 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAGSHIP: &str = "QQ[x,y,z] / (x*y^2, x*y*z, y*z^2, x^4-y^3*z, x*z^3-y^4)";

    #[test]
    fn one_line_forms() {
        let s = parse_line(FLAGSHIP).unwrap();
        assert_eq!(s.field, CoefficientField::Rationals);
        assert_eq!(s.vars, ["x", "y", "z"]);
        assert_eq!(s.generators.len(), 5);
        let (_, g) = s.build(Rationals);
        assert_eq!(g[3].to_string(), "x^4 - y^3*z");

        let s = parse_line("GF 2[u,v,w,x,y,z] / ideal(x*y^2, x*y*z)").unwrap();
        assert_eq!(s.field, CoefficientField::Prime(2));
        let s = parse_line("ZZ/7[x] / ()").unwrap();
        assert_eq!(s.field, CoefficientField::Prime(7));
        assert!(s.generators.is_empty());
        let s = parse_line("QQ[x]").unwrap();
        assert!(s.generators.is_empty());
    }

    #[test]
    fn arithmetic() {
        let s = parse_line("QQ[x,y] / ((x+y)^2 - 2x*y, -x^2 + 3 y^2)").unwrap();
        let (_, g) = s.build(Rationals);
        assert_eq!(g[0].to_string(), "x^2 + y^2");
        assert_eq!(g[1].to_string(), "-x^2 + 3*y^2");
        let s = parse_line("GF 3[x] / (4*x^2)").unwrap();
        let (_, g) = s.build(PrimeField::new(3).unwrap());
        assert_eq!(g[0].to_string(), "x^2");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_line("QQ[x,y] / (x*y, x*)") {
            Err(Error::Parse { line: 1, column, .. }) => assert_eq!(column, 19),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_line("QQ[x] / (y)"), Err(Error::UnknownVariable("y".into())));
        assert_eq!(parse_line("GF 4[x] / (x)"), Err(Error::NonPrimeCharacteristic(4)));
        assert!(matches!(parse_line("RR[x]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_line("QQ[x,x]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn sectioned_form() {
        let text =
            "# flagship\nFIELD QQ\nVARS x, y, z\nGENS\n  x*y^2, x*y*z\n  y*z^2\n  x^4 -\n   y^3*z\n  x*z^3-y^4\n";
        let s = parse_input(text).unwrap();
        assert_eq!(s, parse_line(FLAGSHIP).unwrap());
        let bad = "FIELD QQ\nVARS x\nGENS\n  x^2\n  q\n";
        assert_eq!(parse_input(bad), Err(Error::UnknownVariable("q".into())));
        let bad = "FIELD QQ\nVARS x\nGENS\n  x^2 )\n";
        match parse_input(bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 7)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_input("FIELD QQ\nGENS x\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn batch_lines() {
        let parsed = parse_batch("QQ[x] / (x^2)\n\n# note\nQQ[x] / (y)\n");
        assert_eq!(parsed.len(), 2);
        assert!(parsed[0].1.is_ok());
        assert_eq!(parsed[1].0, 4);
        assert!(parsed[1].1.is_err());
    }
}
