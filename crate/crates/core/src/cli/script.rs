//! The session script format.
//!
//! ```text
//! ring S vars [X, Y] field fp(32003) relations [X*Y, X^2];
//! elem x = X + Y^2;
//! ideal I = [x, Y^3];
//! ideal M = maximal^2;
//! cmd samuel x mode=both;
//! ```
//!
//! Statements end with `;`. `#` and `//` start comments running to the end
//! of the line.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder, Ring};
use crate::poly::Polynomial;

/// Command names accepted after `cmd`.
pub const COMMANDS: &[&str] = &[
    "hilbert",
    "groebner",
    "degseq",
    "colength",
    "transfer",
    "samuel",
    "reduction",
    "spread",
    "min_reduction",
    "fc_check",
    "fc_sequence",
    "mixed",
    "mixed_fc",
    "rees",
    "rees_mult",
    "invariance",
];

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

fn parse_err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

impl FieldSpec {
    pub fn descriptor(&self) -> String {
        match self {
            FieldSpec::Prime(p) => format!("fp:{p}"),
            FieldSpec::Rationals => "qq".into(),
        }
    }

    /// Parses `fp:P`, `fp(P)` or `qq`.
    pub fn parse(text: &str) -> Option<FieldSpec> {
        let t = text.trim();
        if t == "qq" {
            return Some(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix("fp(").and_then(|r| r.strip_suffix(')')))?;
        digits.trim().parse().ok().map(FieldSpec::Prime)
    }
}

/// A polynomial expression; names are resolved against the ring variables
/// and earlier `elem` statements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(BigInt, BigInt),
    Name(String, Pos),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealExpr {
    Gens(Vec<Expr>),
    Maximal,
    /// `NAME^k` for a declared ideal, or `maximal^k`.
    Power(Option<String>, u32),
}

/// A command argument: a name or a bracketed list of names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Name(String),
    List(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub name: String,
    pub args: Vec<Arg>,
    pub options: BTreeMap<String, String>,
    /// Statement text with whitespace collapsed.
    pub echo: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub vars: Vec<String>,
    pub field: FieldSpec,
    pub relations: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Elem(String, Expr),
    Ideal(String, IdealExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionScript {
    pub ring: RingDecl,
    /// Element and ideal declarations in script order.
    pub decls: Vec<Decl>,
    pub commands: Vec<Command>,
}

/// Character stream over one statement with absolute positions.
struct Cursor {
    chars: Vec<(char, Pos)>,
    at: usize,
    end: Pos,
}

impl Cursor {
    fn new(chars: Vec<(char, Pos)>, end: Pos) -> Self {
        Cursor { chars, at: 0, end }
    }

    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].0.is_whitespace() {
            self.at += 1;
        }
    }

    fn pos(&mut self) -> Pos {
        self.skip_ws();
        self.chars.get(self.at).map_or(self.end, |c| c.1)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).map(|c| c.0)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
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
        let pos = self.pos();
        if self.eat(c) {
            Ok(())
        } else {
            Err(parse_err(pos, format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        let pos = self.pos();
        let mut s = String::new();
        while let Some((c, _)) = self.chars.get(self.at) {
            let ok = if s.is_empty() {
                c.is_alphabetic() || *c == '_'
            } else {
                c.is_alphanumeric() || *c == '_' || *c == '\''
            };
            if !ok {
                break;
            }
            s.push(*c);
            self.at += 1;
        }
        if s.is_empty() {
            Err(parse_err(pos, "expected a name"))
        } else {
            Ok((s, pos))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let (w, pos) = self.ident()?;
        if w == kw {
            Ok(())
        } else {
            Err(parse_err(pos, format!("expected '{kw}', found '{w}'")))
        }
    }

    fn integer(&mut self) -> Result<(BigInt, Pos)> {
        let pos = self.pos();
        let mut s = String::new();
        while let Some((c, _)) = self.chars.get(self.at) {
            if !c.is_ascii_digit() {
                break;
            }
            s.push(*c);
            self.at += 1;
        }
        s.parse::<BigInt>()
            .map(|v| (v, pos))
            .map_err(|_| parse_err(pos, "expected an integer"))
    }

    fn small_integer(&mut self) -> Result<u32> {
        let (v, pos) = self.integer()?;
        u32::try_from(v).map_err(|_| parse_err(pos, "exponent too large"))
    }

    /// Remaining characters of the statement.
    fn rest(&mut self) -> Vec<(char, Pos)> {
        self.skip_ws();
        let out = self.chars[self.at..].to_vec();
        self.at = self.chars.len();
        out
    }
}

struct Names {
    vars: Vec<String>,
    elems: HashSet<String>,
    ideals: HashSet<String>,
    ring: String,
}

impl Names {
    fn check_fresh(&self, name: &str, pos: Pos) -> Result<()> {
        if self.vars.iter().any(|v| v == name)
            || self.elems.contains(name)
            || self.ideals.contains(name)
            || self.ring == name
            || name == "maximal"
        {
            return Err(parse_err(pos, format!("name '{name}' is already in use")));
        }
        Ok(())
    }
}

fn expr(c: &mut Cursor, names: &Names) -> Result<Expr> {
    let mut lhs = if c.eat('-') {
        Expr::Neg(Box::new(term(c, names)?))
    } else {
        c.eat('+');
        term(c, names)?
    };
    loop {
        if c.eat('+') {
            lhs = Expr::Add(Box::new(lhs), Box::new(term(c, names)?));
        } else if c.eat('-') {
            lhs = Expr::Sub(Box::new(lhs), Box::new(term(c, names)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn term(c: &mut Cursor, names: &Names) -> Result<Expr> {
    let mut lhs = power(c, names)?;
    loop {
        if c.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(power(c, names)?));
        } else if c.peek() == Some('/') {
            let pos = c.pos();
            c.eat('/');
            let (den, dpos) = c.integer()?;
            if den.is_zero() {
                return Err(parse_err(dpos, "division by zero"));
            }
            match lhs {
                Expr::Const(n, d) => lhs = Expr::Const(n, d * den),
                _ => return Err(parse_err(pos, "only constants can be divided")),
            }
        } else {
            return Ok(lhs);
        }
    }
}

fn power(c: &mut Cursor, names: &Names) -> Result<Expr> {
    let base = atom(c, names)?;
    if c.eat('^') {
        let e = c.small_integer()?;
        Ok(Expr::Pow(Box::new(base), e))
    } else {
        Ok(base)
    }
}

fn atom(c: &mut Cursor, names: &Names) -> Result<Expr> {
    let pos = c.pos();
    match c.peek() {
        Some('(') => {
            c.eat('(');
            let e = expr(c, names)?;
            c.expect(')')?;
            Ok(e)
        }
        Some(ch) if ch.is_ascii_digit() => {
            let (v, _) = c.integer()?;
            Ok(Expr::Const(v, BigInt::one()))
        }
        Some(ch) if ch.is_alphabetic() || ch == '_' => {
            let (name, pos) = c.ident()?;
            if !names.vars.contains(&name) && !names.elems.contains(&name) {
                return Err(parse_err(pos, format!("unknown variable '{name}'")));
            }
            Ok(Expr::Name(name, pos))
        }
        Some(ch) => Err(parse_err(pos, format!("unexpected '{ch}'"))),
        None => Err(parse_err(pos, "unexpected end of statement")),
    }
}

fn expr_list(c: &mut Cursor, names: &Names) -> Result<Vec<Expr>> {
    c.expect('[')?;
    let mut out = Vec::new();
    if c.eat(']') {
        return Ok(out);
    }
    loop {
        out.push(expr(c, names)?);
        if c.eat(']') {
            return Ok(out);
        }
        c.expect(',')?;
    }
}

fn name_list(c: &mut Cursor) -> Result<Vec<(String, Pos)>> {
    c.expect('[')?;
    let mut out = Vec::new();
    if c.eat(']') {
        return Ok(out);
    }
    loop {
        out.push(c.ident()?);
        if c.eat(']') {
            return Ok(out);
        }
        c.expect(',')?;
    }
}

/// Splits the source into statements, stripping comments and keeping the
/// position of every character.
/// Characters of one statement, with the position of its first character.
type Statement = (Vec<(char, Pos)>, Pos);

fn statements(text: &str) -> Result<Vec<Statement>> {
    let mut out = Vec::new();
    let mut cur: Vec<(char, Pos)> = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let mut chars = line.char_indices().peekable();
        let mut col = 0;
        while let Some((_, ch)) = chars.next() {
            col += 1;
            let pos = Pos { line: li + 1, col };
            if ch == '#' || (ch == '/' && chars.peek().map(|c| c.1) == Some('/')) {
                break;
            }
            if ch == ';' {
                out.push((std::mem::take(&mut cur), pos));
            } else {
                cur.push((ch, pos));
            }
        }
        cur.push((
            '\n',
            Pos {
                line: li + 1,
                col: col + 1,
            },
        ));
    }
    if let Some((_, pos)) = cur.iter().find(|(c, _)| !c.is_whitespace()) {
        return Err(parse_err(*pos, "statement is missing its terminating ';'"));
    }
    Ok(out)
}

/// Parses a whole script, reporting the first error.
pub fn parse_script(text: &str) -> Result<SessionScript> {
    let mut ring: Option<RingDecl> = None;
    let mut names = Names {
        vars: Vec::new(),
        elems: HashSet::new(),
        ideals: HashSet::new(),
        ring: String::new(),
    };
    let mut decls = Vec::new();
    let mut commands = Vec::new();
    for (chars, end) in statements(text)? {
        let mut c = Cursor::new(chars, end);
        if c.at_end() {
            continue;
        }
        let start = c.pos();
        let (kw, kpos) = c.ident()?;
        match kw.as_str() {
            "ring" => {
                if ring.is_some() {
                    return Err(parse_err(kpos, "only one ring declaration is allowed"));
                }
                let (rname, _) = c.ident()?;
                c.keyword("vars")?;
                let vars = name_list(&mut c)?;
                let mut seen = HashSet::new();
                for (v, p) in &vars {
                    if !seen.insert(v.clone()) {
                        return Err(parse_err(*p, format!("variable '{v}' declared twice")));
                    }
                }
                if vars.is_empty() {
                    return Err(parse_err(kpos, "a ring needs at least one variable"));
                }
                names.vars = vars.into_iter().map(|v| v.0).collect();
                names.ring = rname.clone();
                c.keyword("field")?;
                let fpos = c.pos();
                let (fname, _) = c.ident()?;
                let field = match fname.as_str() {
                    "qq" => FieldSpec::Rationals,
                    "fp" => {
                        c.expect('(')?;
                        let (p, _) = c.integer()?;
                        c.expect(')')?;
                        let p = u64::try_from(p).map_err(|_| parse_err(fpos, "prime too large"))?;
                        FieldSpec::Prime(p)
                    }
                    other => return Err(parse_err(fpos, format!("unknown field '{other}'"))),
                };
                c.keyword("relations")?;
                let rel_pos = c.pos();
                let relations = expr_list(&mut c, &names)?;
                let qring = Ring::new(names.vars.clone(), MonomialOrder::DegRevLex);
                for (k, r) in relations.iter().enumerate() {
                    let p: Polynomial<BigRational> = eval(r, &qring, &|_| None)?;
                    if !p.is_homogeneous() {
                        return Err(parse_err(
                            rel_pos,
                            format!("relation {} is not homogeneous", k + 1),
                        ));
                    }
                }
                ring = Some(RingDecl {
                    name: rname,
                    vars: names.vars.clone(),
                    field,
                    relations,
                });
            }
            "elem" | "ideal" | "cmd" if ring.is_none() => {
                return Err(parse_err(kpos, "the ring must be declared first"));
            }
            "elem" => {
                let (name, npos) = c.ident()?;
                names.check_fresh(&name, npos)?;
                c.expect('=')?;
                let e = expr(&mut c, &names)?;
                names.elems.insert(name.clone());
                decls.push(Decl::Elem(name, e));
            }
            "ideal" => {
                let (name, npos) = c.ident()?;
                names.check_fresh(&name, npos)?;
                c.expect('=')?;
                let value = if c.peek() == Some('[') {
                    IdealExpr::Gens(expr_list(&mut c, &names)?)
                } else {
                    let (base, bpos) = c.ident()?;
                    let base = if base == "maximal" {
                        None
                    } else if names.ideals.contains(&base) {
                        Some(base)
                    } else {
                        return Err(parse_err(bpos, format!("unknown ideal '{base}'")));
                    };
                    if c.eat('^') {
                        IdealExpr::Power(base, c.small_integer()?)
                    } else if base.is_none() {
                        IdealExpr::Maximal
                    } else {
                        IdealExpr::Power(base, 1)
                    }
                };
                names.ideals.insert(name.clone());
                decls.push(Decl::Ideal(name, value));
            }
            "cmd" => {
                let (name, npos) = c.ident()?;
                if !COMMANDS.contains(&name.as_str()) {
                    return Err(parse_err(npos, format!("unknown command '{name}'")));
                }
                let mut args = Vec::new();
                let mut options = BTreeMap::new();
                let mut echo_parts = vec!["cmd".to_string(), name.clone()];
                for (item, ipos) in split_items(c.rest()) {
                    echo_parts.push(item.clone());
                    if let Some((k, v)) = item.split_once('=') {
                        if k.is_empty() || v.is_empty() {
                            return Err(parse_err(ipos, format!("malformed option '{item}'")));
                        }
                        if options.insert(k.to_string(), v.to_string()).is_some() {
                            return Err(parse_err(ipos, format!("option '{k}' given twice")));
                        }
                        continue;
                    }
                    if !options.is_empty() {
                        return Err(parse_err(ipos, "arguments must precede options"));
                    }
                    let arg = if let Some(inner) = item.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                        Arg::List(
                            inner
                                .split(',')
                                .map(|s| s.trim().to_string())
                                .filter(|s| !s.is_empty())
                                .collect(),
                        )
                    } else {
                        Arg::Name(item)
                    };
                    let refs: Vec<&String> = match &arg {
                        Arg::Name(n) => vec![n],
                        Arg::List(ns) => ns.iter().collect(),
                    };
                    for n in refs {
                        if !names.elems.contains(n) && !names.ideals.contains(n) && n != "maximal" {
                            return Err(parse_err(ipos, format!("unknown name '{n}'")));
                        }
                    }
                    args.push(arg);
                }
                commands.push(Command {
                    name,
                    args,
                    options,
                    echo: echo_parts.join(" "),
                    pos: start,
                });
            }
            other => return Err(parse_err(kpos, format!("unknown statement '{other}'"))),
        }
        if !c.at_end() {
            let pos = c.pos();
            return Err(parse_err(pos, "unexpected text before ';'"));
        }
    }
    let ring = ring.ok_or_else(|| parse_err(Pos { line: 1, col: 1 }, "no ring declaration"))?;
    Ok(SessionScript {
        ring,
        decls,
        commands,
    })
}

/// Whitespace-separated items, keeping bracketed lists together.
fn split_items(chars: Vec<(char, Pos)>) -> Vec<(String, Pos)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start: Option<Pos> = None;
    let mut depth = 0usize;
    for (ch, pos) in chars {
        if ch.is_whitespace() && depth == 0 {
            if let Some(s) = start.take() {
                out.push((std::mem::take(&mut cur), s));
            }
            continue;
        }
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if ch.is_whitespace() {
            continue;
        }
        start.get_or_insert(pos);
        cur.push(ch);
    }
    if let Some(s) = start {
        out.push((cur, s));
    }
    out
}

/// Evaluates `e` in `ring`; `lookup` resolves element names.
pub fn eval<F: Field>(
    e: &Expr,
    ring: &std::sync::Arc<Ring>,
    lookup: &dyn Fn(&str) -> Option<Polynomial<F>>,
) -> Result<Polynomial<F>> {
    Ok(match e {
        Expr::Const(n, d) => {
            let c = F::from_ratio(n, d).ok_or_else(|| {
                Error::Precondition(format!("denominator {d} vanishes in {}", F::descriptor()))
            })?;
            Polynomial::constant(ring, c)
        }
        Expr::Name(name, pos) => match ring.var_index(name) {
            Some(i) => Polynomial::term(ring, Monomial::var(ring.nvars(), i), F::one()),
            None => lookup(name).ok_or_else(|| parse_err(*pos, format!("unknown variable '{name}'")))?,
        },
        Expr::Add(a, b) => &eval(a, ring, lookup)? + &eval(b, ring, lookup)?,
        Expr::Sub(a, b) => &eval(a, ring, lookup)? - &eval(b, ring, lookup)?,
        Expr::Mul(a, b) => &eval(a, ring, lookup)? * &eval(b, ring, lookup)?,
        Expr::Neg(a) => -&eval(a, ring, lookup)?,
        Expr::Pow(a, k) => eval(a, ring, lookup)?.pow(*k),
    })
}
