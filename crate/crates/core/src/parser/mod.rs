//! Concrete ASCII syntax: lexer, recursive-descent parser for propositions,
//! terms and definition files, and the inverse pretty-printer.

mod lexer;
mod pretty;

pub use pretty::{pretty, pretty_prop};

use crate::syntax::{Fragment, Kind, Name, Prop, Scalar, Span, Term};
use lexer::{lex, Tok, Token};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Syntax,
    UndefinedName,
    RecursiveDefinition,
    DuplicateDefinition,
    FragmentMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, serde::Serialize)]
#[error("{}:{}: {message}", span.line, span.col_start)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct Definition {
    pub name: String,
    pub fragment: Fragment,
    pub prop: Prop,
    /// The body with earlier definitions expanded; always closed.
    pub term: Term,
    pub span: Span,
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    pub definitions: Vec<Definition>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.name == name)
    }

    /// Appends the definitions of `other`, which must not clash.
    pub fn extend(&mut self, other: Program) {
        self.definitions.extend(other.definitions);
    }
}

pub fn parse_term(text: &str, frag: Fragment) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, None)?;
    let t = p.term(frag)?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_prop(text: &str, frag: Fragment) -> Result<Prop, ParseError> {
    let mut p = Parser::new(text, None)?;
    let t = p.prop(frag)?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with(text, &Program::default())
}

/// Parses `text` with the definitions of `base` in scope for expansion. Only
/// the new definitions are returned.
pub fn parse_program_with(text: &str, base: &Program) -> Result<Program, ParseError> {
    let mut defs: HashMap<String, (Fragment, Term)> = base
        .definitions
        .iter()
        .map(|d| (d.name.clone(), (d.fragment, d.term.clone())))
        .collect();
    let mut p = Parser::new(text, None)?;
    let mut out = Program::default();
    while p.peek() != &Tok::Eof {
        let start = p.span();
        let frag = match p.ident()?.as_str() {
            "pure" => Fragment::Pure,
            "mixed" => Fragment::Mixed,
            other => {
                return Err(p.err_at(
                    start,
                    format!("expected `pure` or `mixed`, found `{other}`"),
                ))
            }
        };
        p.keyword("def")?;
        let name_span = p.span();
        let name = p.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(p.err_at(name_span, format!("`{name}` is a keyword")));
        }
        if defs.contains_key(&name) {
            return Err(ParseError {
                kind: ParseErrorKind::DuplicateDefinition,
                message: format!("`{name}` is already defined"),
                span: name_span,
            });
        }
        p.eat(Tok::Colon)?;
        let prop = p.prop(frag)?;
        p.eat(Tok::Eq)?;
        p.current = Some(name.clone());
        p.defs = Some(defs.clone());
        let term = p.term(frag)?;
        p.current = None;
        defs.insert(name.clone(), (frag, term.clone()));
        out.definitions.push(Definition {
            name,
            fragment: frag,
            prop,
            term,
            span: start,
        });
    }
    Ok(out)
}

const KEYWORDS: &[&str] = &[
    "pure", "mixed", "def", "let", "in", "case", "of", "inl", "inr", "proj1", "proj2", "abort",
    "B", "tau", "top", "qubit", "sqrt",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Definitions available for expansion; `Some` switches on strict
    /// scoping (every identifier must be bound or defined).
    defs: Option<HashMap<String, (Fragment, Term)>>,
    current: Option<String>,
    scope: Vec<Name>,
}

fn join(a: Span, b: Span) -> Span {
    Span {
        line: a.line,
        col_start: a.col_start,
        col_end: if a.line == b.line {
            b.col_end
        } else {
            a.col_end
        },
    }
}

impl Parser {
    fn new(
        text: &str,
        defs: Option<HashMap<String, (Fragment, Term)>>,
    ) -> Result<Self, ParseError> {
        let toks = lex(text).map_err(|(message, span)| ParseError {
            kind: ParseErrorKind::Syntax,
            message,
            span,
        })?;
        Ok(Parser {
            toks,
            pos: 0,
            defs,
            current: None,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, span: Span, message: String) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax,
            message,
            span,
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        self.err_at(
            self.span(),
            format!("expected {what}, found {}", self.peek()),
        )
    }

    fn eat(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn binder(&mut self) -> Result<Name, ParseError> {
        let sp = self.span();
        let x = self.ident()?;
        if KEYWORDS.contains(&x.as_str()) {
            return Err(self.err_at(sp, format!("`{x}` is a keyword")));
        }
        Ok(x.into())
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // ---- propositions ----

    fn prop(&mut self, frag: Fragment) -> Result<Prop, ParseError> {
        let a = self.prop_plus(frag)?;
        if *self.peek() == Tok::Lolli {
            self.bump();
            let b = self.prop(frag)?;
            return Ok(Prop::lolli(frag, a, b));
        }
        Ok(a)
    }

    fn prop_plus(&mut self, frag: Fragment) -> Result<Prop, ParseError> {
        let a = self.prop_with(frag)?;
        if *self.peek() == Tok::Plus {
            let sp = self.span();
            self.bump();
            if frag == Fragment::Pure {
                return Err(self.err_at(sp, "`+` is only available in mixed propositions".into()));
            }
            let b = self.prop_plus(frag)?;
            return Ok(Prop::plus(a, b));
        }
        Ok(a)
    }

    fn prop_with(&mut self, frag: Fragment) -> Result<Prop, ParseError> {
        let a = self.prop_tensor(frag)?;
        if *self.peek() == Tok::Amp {
            let sp = self.span();
            self.bump();
            if frag == Fragment::Mixed {
                return Err(self.err_at(sp, "`&` is only available in pure propositions".into()));
            }
            let b = self.prop_with(frag)?;
            return Ok(Prop::with(a, b));
        }
        Ok(a)
    }

    fn prop_tensor(&mut self, frag: Fragment) -> Result<Prop, ParseError> {
        let a = self.prop_atom(frag)?;
        if *self.peek() == Tok::Star {
            self.bump();
            let b = self.prop_tensor(frag)?;
            return Ok(Prop::tensor(frag, a, b));
        }
        Ok(a)
    }

    fn prop_atom(&mut self, frag: Fragment) -> Result<Prop, ParseError> {
        let sp = self.span();
        let only = |p: &Parser, f: Fragment, what: &str| -> Result<(), ParseError> {
            if frag == f {
                Ok(())
            } else {
                Err(p.err_at(
                    sp,
                    format!("`{what}` is only available in {f} propositions"),
                ))
            }
        };
        match self.peek().clone() {
            Tok::Num(1.0) => {
                self.bump();
                Ok(Prop::One(frag))
            }
            Tok::Num(0.0) => {
                only(self, Fragment::Mixed, "0")?;
                self.bump();
                Ok(Prop::Zero)
            }
            Tok::Ident(s) if s == "top" => {
                only(self, Fragment::Pure, "top")?;
                self.bump();
                Ok(Prop::Top)
            }
            Tok::Ident(s) if s == "qubit" => {
                only(self, Fragment::Pure, "qubit")?;
                self.bump();
                Ok(Prop::qubit())
            }
            Tok::Ident(s) if s == "B" => {
                only(self, Fragment::Mixed, "B")?;
                self.bump();
                self.eat(Tok::LParen)?;
                let p = self.prop(Fragment::Pure)?;
                self.eat(Tok::RParen)?;
                Ok(Prop::bang(p))
            }
            Tok::LParen => {
                self.bump();
                let p = self.prop(frag)?;
                self.eat(Tok::RParen)?;
                Ok(p)
            }
            _ => Err(self.unexpected("a proposition")),
        }
    }

    // ---- scalars ----

    fn scalar_expr(&mut self) -> Option<Scalar> {
        let mut acc = self.scalar_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Scalar(acc.0 + self.scalar_term()?.0);
                }
                Tok::Minus => {
                    self.bump();
                    acc = Scalar(acc.0 - self.scalar_term()?.0);
                }
                _ => return Some(acc),
            }
        }
    }

    fn scalar_term(&mut self) -> Option<Scalar> {
        let mut acc = self.scalar_factor()?;
        loop {
            match self.peek() {
                // `*` directly followed by `.`, `,`, `)` etc. is the unit term,
                // never a product
                Tok::Star if self.starts_scalar(1) => {
                    self.bump();
                    acc = Scalar(acc.0 * self.scalar_factor()?.0);
                }
                Tok::Slash => {
                    self.bump();
                    acc = Scalar(acc.0 / self.scalar_factor()?.0);
                }
                _ => return Some(acc),
            }
        }
    }

    fn starts_scalar(&self, k: usize) -> bool {
        match self.peek_at(k) {
            Tok::Num(_) | Tok::Imag(_) | Tok::Minus | Tok::LParen => true,
            Tok::Ident(s) => s == "sqrt",
            _ => false,
        }
    }

    fn scalar_factor(&mut self) -> Option<Scalar> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Some(Scalar(-self.scalar_factor()?.0))
            }
            Tok::Num(x) => {
                self.bump();
                Some(Scalar::real(x))
            }
            Tok::Imag(x) => {
                self.bump();
                Some(Scalar::new(0.0, x))
            }
            Tok::Ident(s) if s == "sqrt" => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return None;
                }
                self.bump();
                let v = self.scalar_expr()?;
                if *self.peek() != Tok::RParen {
                    return None;
                }
                self.bump();
                Some(Scalar(v.0.sqrt()))
            }
            Tok::LParen => {
                self.bump();
                let v = self.scalar_expr()?;
                if *self.peek() != Tok::RParen {
                    return None;
                }
                self.bump();
                Some(v)
            }
            _ => None,
        }
    }

    /// Tries `scalar .`; restores the position on failure.
    fn try_scale_prefix(&mut self) -> Option<(Scalar, Span)> {
        if !self.starts_scalar(0) {
            return None;
        }
        let save = self.pos;
        let sp = self.span();
        match self.scalar_expr() {
            Some(s) if *self.peek() == Tok::Dot => {
                self.bump();
                Some((s, sp))
            }
            _ => {
                self.pos = save;
                None
            }
        }
    }

    // ---- terms ----

    fn mk(&self, kind: Kind, frag: Fragment, start: Span) -> Term {
        Term::new(kind, frag).with_span(join(start, self.prev_span()))
    }

    fn term(&mut self, frag: Fragment) -> Result<Term, ParseError> {
        let start = self.span();
        let mut acc = self.scaled(frag)?;
        while *self.peek() == Tok::PlusPlus {
            self.bump();
            let b = self.scaled(frag)?;
            acc = self.mk(Kind::Sum(acc, b), frag, start);
        }
        Ok(acc)
    }

    fn scaled(&mut self, frag: Fragment) -> Result<Term, ParseError> {
        if let Some((s, sp)) = self.try_scale_prefix() {
            if frag == Fragment::Mixed && !s.is_valid_mixed() {
                return Err(self.err_at(
                    sp,
                    format!("mixed scalars must be non-negative reals, found {s}"),
                ));
            }
            let m = self.scaled(frag)?;
            return Ok(self.mk(Kind::Scale(s, m), frag, sp));
        }
        self.tensor(frag)
    }

    fn tensor(&mut self, frag: Fragment) -> Result<Term, ParseError> {
        let start = self.span();
        let a = self.app(frag)?;
        if *self.peek() == Tok::At {
            self.bump();
            let b = self.tensor(frag)?;
            return Ok(self.mk(Kind::Tensor(a, b), frag, start));
        }
        Ok(a)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !matches!(s.as_str(), "in" | "of" | "pure" | "mixed" | "def"),
            Tok::Star | Tok::TopIntro | Tok::LParen | Tok::Lt | Tok::Backslash => true,
            _ => false,
        }
    }

    fn app(&mut self, frag: Fragment) -> Result<Term, ParseError> {
        let start = self.span();
        let mut acc = self.atom(frag)?;
        while self.starts_atom() {
            let b = self.atom(frag)?;
            acc = self.mk(Kind::App(acc, b), frag, start);
        }
        Ok(acc)
    }

    fn with_bound<T>(
        &mut self,
        names: &[Name],
        f: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(self.scope.len() - names.len());
        r
    }

    fn only(&self, frag: Fragment, need: Fragment, what: &str, sp: Span) -> Result<(), ParseError> {
        if frag == need {
            Ok(())
        } else {
            Err(ParseError {
                kind: ParseErrorKind::FragmentMismatch,
                message: format!("{what} is only available in {need} terms"),
                span: sp,
            })
        }
    }

    fn paren_arg(&mut self, frag: Fragment) -> Result<Term, ParseError> {
        self.eat(Tok::LParen)?;
        let t = self.term(frag)?;
        self.eat(Tok::RParen)?;
        Ok(t)
    }

    fn atom(&mut self, frag: Fragment) -> Result<Term, ParseError> {
        use Fragment::*;
        let start = self.span();
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(self.mk(Kind::Star, frag, start))
            }
            Tok::TopIntro => {
                self.only(frag, Pure, "`<>`", start)?;
                self.bump();
                Ok(self.mk(Kind::Top, frag, start))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term(frag)?;
                self.eat(Tok::RParen)?;
                Ok(t)
            }
            Tok::Lt => {
                self.only(frag, Pure, "`<m, n>`", start)?;
                self.bump();
                let a = self.term(frag)?;
                self.eat(Tok::Comma)?;
                let b = self.term(frag)?;
                self.eat(Tok::Gt)?;
                Ok(self.mk(Kind::Pair(a, b), frag, start))
            }
            Tok::Backslash => {
                self.bump();
                let x = self.binder()?;
                self.eat(Tok::Dot)?;
                let body = self.with_bound(std::slice::from_ref(&x), |p| p.term(frag))?;
                Ok(self.mk(Kind::Lam(x, body), frag, start))
            }
            Tok::Ident(s) => match s.as_str() {
                "let" => {
                    self.bump();
                    if *self.peek() == Tok::Star {
                        self.bump();
                        self.eat(Tok::Eq)?;
                        let m = self.term(frag)?;
                        self.keyword("in")?;
                        let n = self.term(frag)?;
                        return Ok(self.mk(Kind::ElimOne(m, n), frag, start));
                    }
                    let x = self.binder()?;
                    self.eat(Tok::At)?;
                    let y = self.binder()?;
                    self.eat(Tok::Eq)?;
                    let m = self.term(frag)?;
                    self.keyword("in")?;
                    let n = self.with_bound(&[x.clone(), y.clone()], |p| p.term(frag))?;
                    Ok(self.mk(Kind::ElimTensor(m, x, y, n), frag, start))
                }
                "proj1" | "proj2" => {
                    self.only(frag, Pure, "`proj`", start)?;
                    let i = if s == "proj1" { 1 } else { 2 };
                    self.bump();
                    self.eat(Tok::LParen)?;
                    let m = self.term(frag)?;
                    self.eat(Tok::Comma)?;
                    let x = self.binder()?;
                    self.eat(Tok::Dot)?;
                    let n = self.with_bound(std::slice::from_ref(&x), |p| p.term(frag))?;
                    self.eat(Tok::RParen)?;
                    Ok(self.mk(Kind::ElimWith(i, m, x, n), frag, start))
                }
                "case" => {
                    self.only(frag, Mixed, "`case`", start)?;
                    self.bump();
                    let m = self.term(frag)?;
                    self.keyword("of")?;
                    self.eat(Tok::LBrace)?;
                    self.keyword("inl")?;
                    let x = self.binder()?;
                    self.eat(Tok::Arrow)?;
                    let n = self.with_bound(std::slice::from_ref(&x), |p| p.term(frag))?;
                    self.eat(Tok::Semi)?;
                    self.keyword("inr")?;
                    let y = self.binder()?;
                    self.eat(Tok::Arrow)?;
                    let o = self.with_bound(std::slice::from_ref(&y), |p| p.term(frag))?;
                    self.eat(Tok::RBrace)?;
                    Ok(self.mk(Kind::ElimPlus(m, x, n, y, o), frag, start))
                }
                "inl" | "inr" | "abort" | "tau" => {
                    self.only(frag, Mixed, &format!("`{s}`"), start)?;
                    self.bump();
                    let m = self.paren_arg(frag)?;
                    let kind = match s.as_str() {
                        "inl" => Kind::Inl(m),
                        "inr" => Kind::Inr(m),
                        "abort" => Kind::Abort(m),
                        _ => Kind::Tau(m),
                    };
                    Ok(self.mk(kind, frag, start))
                }
                "B" => {
                    self.only(frag, Mixed, "`B`", start)?;
                    self.bump();
                    // the argument of B is a closed pure term
                    let saved = std::mem::take(&mut self.scope);
                    let m = self.paren_arg(Pure);
                    self.scope = saved;
                    let m = m?;
                    Ok(self.mk(Kind::Bang(m), frag, start))
                }
                _ if KEYWORDS.contains(&s.as_str()) => Err(self.unexpected("a term")),
                _ => {
                    self.bump();
                    self.resolve(s, frag, start)
                }
            },
            _ => Err(self.unexpected("a term")),
        }
    }

    fn resolve(&mut self, s: String, frag: Fragment, sp: Span) -> Result<Term, ParseError> {
        if self.scope.iter().any(|n| **n == *s) {
            return Ok(self.mk(Kind::Var(s.into()), frag, sp));
        }
        let Some(defs) = &self.defs else {
            return Ok(self.mk(Kind::Var(s.into()), frag, sp));
        };
        if let Some((f, body)) = defs.get(&s) {
            if *f != frag {
                return Err(ParseError {
                    kind: ParseErrorKind::FragmentMismatch,
                    message: format!("definition `{s}` is {f} but is used in a {frag} term"),
                    span: sp,
                });
            }
            return Ok(body.clone());
        }
        if self.current.as_deref() == Some(s.as_str()) {
            return Err(ParseError {
                kind: ParseErrorKind::RecursiveDefinition,
                message: format!("definition `{s}` refers to itself"),
                span: sp,
            });
        }
        Err(ParseError {
            kind: ParseErrorKind::UndefinedName,
            message: format!("undefined name `{s}`"),
            span: sp,
        })
    }
}
