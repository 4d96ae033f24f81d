//! Boolean formulas over `x1..xN` and their text and DIMACS readers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// Formula tree; `Var` indices are 0-based (displayed 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    /// Value under `x`, where variable `i` is bit `n-1-i` of `x`.
    pub fn eval(&self, x: u64, n: usize) -> bool {
        match self {
            Expr::Var(i) => x >> (n - 1 - i) & 1 == 1,
            Expr::Not(e) => !e.eval(x, n),
            Expr::And(a, b) => a.eval(x, n) && b.eval(x, n),
            Expr::Or(a, b) => a.eval(x, n) || b.eval(x, n),
        }
    }

    /// Number of operator nodes.
    pub fn op_count(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Not(e) => 1 + e.op_count(),
            Expr::And(a, b) | Expr::Or(a, b) => 1 + a.op_count() + b.op_count(),
        }
    }

    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Not(e) => 1 + e.size(),
            Expr::And(a, b) | Expr::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Not(e) => e.max_var(),
            Expr::And(a, b) | Expr::Or(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Rewrites `a ∨ b` as `¬(¬a ∧ ¬b)` and drops double negations.
    pub fn to_and_not(&self) -> Expr {
        match self {
            Expr::Var(i) => Expr::Var(*i),
            Expr::Not(e) => match e.to_and_not() {
                Expr::Not(inner) => *inner,
                other => Expr::not(other),
            },
            Expr::And(a, b) => Expr::and(a.to_and_not(), b.to_and_not()),
            Expr::Or(a, b) => {
                let na = Expr::not(a.to_and_not()).to_and_not();
                let nb = Expr::not(b.to_and_not()).to_and_not();
                Expr::not(Expr::and(na, nb))
            }
        }
    }

    pub fn has_or(&self) -> bool {
        match self {
            Expr::Var(_) => false,
            Expr::Not(e) => e.has_or(),
            Expr::And(a, b) => a.has_or() || b.has_or(),
            Expr::Or(..) => true,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Not(e) => {
                f.write_str("~")?;
                e.fmt_prec(f, 3)
            }
            Expr::And(a, b) => {
                if prec > 2 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 3)?;
                if prec > 2 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Expr::Or(a, b) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A formula together with its variable count `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolFormula {
    pub n: usize,
    pub expr: Expr,
}

impl BoolFormula {
    /// Panics if `expr` mentions a variable `>= n`.
    pub fn new(n: usize, expr: Expr) -> BoolFormula {
        assert!(
            expr.max_var().is_none_or(|m| m < n),
            "variable index out of range"
        );
        assert!(n >= 1, "formula needs at least one variable");
        BoolFormula { n, expr }
    }

    pub fn eval(&self, x: u64) -> bool {
        self.expr.eval(x, self.n)
    }

    pub fn to_and_not(&self) -> BoolFormula {
        BoolFormula {
            n: self.n,
            expr: self.expr.to_and_not(),
        }
    }

    /// `x1 ∧ ¬x1` over `n` variables.
    pub fn contradiction(n: usize) -> BoolFormula {
        BoolFormula::new(n, Expr::and(Expr::var(0), Expr::not(Expr::var(0))))
    }

    /// Conjunction of the literals fixing variable `i` to bit `n-1-i` of `x`;
    /// its unique solution is `x`.
    pub fn planted(n: usize, x: u64) -> BoolFormula {
        let lit = |i: usize| {
            if x >> (n - 1 - i) & 1 == 1 {
                Expr::var(i)
            } else {
                Expr::not(Expr::var(i))
            }
        };
        let expr = (1..n).fold(lit(0), |acc, i| Expr::and(acc, lit(i)));
        BoolFormula::new(n, expr)
    }
}

impl fmt::Display for BoolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(usize),
    Not,
    And,
    Or,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn err(&self, line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn next(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        loop {
            match self.chars.get(self.pos) {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let Some(c) = self.bump() else {
            return Ok((Tok::End, line, col));
        };
        let tok = match c {
            '~' | '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'x' | 'X' => {
                let mut digits = String::new();
                while let Some(d) = self.chars.get(self.pos).filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    self.bump();
                }
                let i: usize = digits
                    .parse()
                    .map_err(|_| self.err(line, col, "expected a variable index after 'x'"))?;
                if i == 0 {
                    return Err(self.err(line, col, "variables are numbered from x1"));
                }
                Tok::Var(i - 1)
            }
            other => return Err(self.err(line, col, format!("unexpected character {other:?}"))),
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    cur: (Tok, usize, usize),
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), ParseError> {
        self.cur = self.lex.next()?;
        Ok(())
    }

    fn or(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.and()?;
        while self.cur.0 == Tok::Or {
            self.advance()?;
            e = Expr::or(e, self.and()?);
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        while self.cur.0 == Tok::And {
            self.advance()?;
            e = Expr::and(e, self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let (tok, line, col) = self.cur.clone();
        match tok {
            Tok::Not => {
                self.advance()?;
                Ok(Expr::not(self.unary()?))
            }
            Tok::Var(i) => {
                self.advance()?;
                Ok(Expr::Var(i))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.or()?;
                if self.cur.0 != Tok::RParen {
                    return Err(self.lex.err(self.cur.1, self.cur.2, "expected ')'"));
                }
                self.advance()?;
                Ok(e)
            }
            Tok::End => Err(self.lex.err(line, col, "unexpected end of input")),
            other => Err(self.lex.err(line, col, format!("unexpected {other:?}"))),
        }
    }
}

/// Parses `x1..xN` with `~`, `&`, `|` and parentheses (`~` binds tightest,
/// then `&`, then `|`). `#` starts a comment. The variable count is the
/// largest index used.
pub fn parse_formula(text: &str) -> Result<BoolFormula, ParseError> {
    let expr = parse_expr(text)?;
    let n = expr.max_var().map_or(1, |m| m + 1);
    Ok(BoolFormula { n, expr })
}

/// As [`parse_formula`] with an explicit variable count.
pub fn parse_formula_with_vars(text: &str, n: usize) -> Result<BoolFormula, ParseError> {
    let expr = parse_expr(text)?;
    if let Some(m) = expr.max_var() {
        if m >= n {
            return Err(ParseError {
                line: 1,
                col: 1,
                msg: format!("x{} exceeds {n} variables", m + 1),
            });
        }
    }
    if n == 0 {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: "need at least one variable".into(),
        });
    }
    Ok(BoolFormula { n, expr })
}

fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lex: Lexer::new(text),
        cur: (Tok::End, 1, 1),
    };
    p.advance()?;
    let e = p.or()?;
    if p.cur.0 != Tok::End {
        return Err(p
            .lex
            .err(p.cur.1, p.cur.2, format!("unexpected {:?}", p.cur.0)));
    }
    Ok(e)
}

/// Reads DIMACS CNF into an AND of OR-clauses. An empty clause becomes
/// `x1 ∧ ¬x1`; a formula without clauses becomes `x1 ∨ ¬x1`.
pub fn parse_dimacs(text: &str) -> Result<BoolFormula, ParseError> {
    let err = |line: usize, msg: String| ParseError { line, col: 1, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut cur: Vec<i64> = Vec::new();
    let mut last_line = 0;
    'lines: for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err(line_no, "expected 'p cnf <vars> <clauses>'".into()));
            }
            let v = parts[2]
                .parse()
                .map_err(|_| err(line_no, "bad variable count".into()))?;
            let c = parts[3]
                .parse()
                .map_err(|_| err(line_no, "bad clause count".into()))?;
            header = Some((v, c));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(line_no, "clause before header".into()));
        };
        for tok in line.split_whitespace() {
            if tok == "%" {
                break 'lines;
            }
            let lit: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(err(
                        line_no,
                        format!("literal {lit} exceeds {vars} variables"),
                    ));
                }
                cur.push(lit);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(err(last_line.max(1), "missing 'p cnf' header".into()));
    };
    if !cur.is_empty() {
        clauses.push(cur);
    }
    if clauses.len() != count {
        return Err(err(
            last_line.max(1),
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    let n = vars.max(1);
    let lit = |l: i64| {
        let v = Expr::Var(l.unsigned_abs() as usize - 1);
        if l < 0 {
            Expr::not(v)
        } else {
            v
        }
    };
    let clause_expr = |c: &[i64]| -> Expr {
        if c.is_empty() {
            return Expr::and(Expr::var(0), Expr::not(Expr::var(0)));
        }
        c[1..]
            .iter()
            .fold(lit(c[0]), |acc, &l| Expr::or(acc, lit(l)))
    };
    let expr = match clauses.split_first() {
        None => Expr::or(Expr::var(0), Expr::not(Expr::var(0))),
        Some((first, rest)) => rest
            .iter()
            .fold(clause_expr(first), |acc, c| Expr::and(acc, clause_expr(c))),
    };
    Ok(BoolFormula { n, expr })
}
