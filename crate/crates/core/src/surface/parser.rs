//! Recursive descent parser for `.itt` files.
//!
//! Precedence, loosest first: `fun`, `->` (right), `*` (right), application.

use std::rc::Rc;

use crate::level::Level;
use crate::span::Span;
use crate::term::Name;

use super::lexer::{lex, ParseError, Tok};
use super::syntax::{Decl, Expr, ExprKind};

type PResult<T> = Result<T, ParseError>;

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

pub fn parse_file(src: &str) -> PResult<Vec<Decl>> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

pub fn parse_expr(src: &str) -> PResult<Rc<Expr>> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.term()?;
    p.expect(&Tok::Eof)?;
    Ok(e)
}

struct Group {
    names: Vec<(Name, Span)>,
    ty: Rc<Expr>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<Span> {
        if self.peek() == t {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::new(format!("expected {wanted}, found {}", self.peek()), self.span())
    }

    fn ident(&mut self) -> PResult<(Name, Span)> {
        match self.peek().clone() {
            Tok::Ident(x) => Ok((x.as_str().into(), self.bump().1)),
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn binder_name(&mut self) -> PResult<(Name, Span)> {
        if self.peek() == &Tok::Underscore {
            return Ok(("_".into(), self.bump().1));
        }
        self.ident()
    }

    fn decl(&mut self) -> PResult<Decl> {
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Def => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(&Tok::Colon)?;
                let ty = self.term()?;
                self.expect(&Tok::ColonEq)?;
                let body = self.term()?;
                Ok(Decl::Def { name, ty, body, span: Span::new(start, self.prev_end()) })
            }
            Tok::Postulate => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(&Tok::Colon)?;
                let ty = self.term()?;
                Ok(Decl::Postulate { name, ty, span: Span::new(start, self.prev_end()) })
            }
            Tok::Import => {
                self.bump();
                match self.bump() {
                    (Tok::Str(path), sp) => Ok(Decl::Import { path, span: Span::new(start, sp.end) }),
                    (_, sp) => Err(ParseError::new("expected a quoted path after `import`", sp)),
                }
            }
            Tok::Pragma(text) => {
                let (_, sp) = self.bump();
                Ok(Decl::Pragma { text, span: sp })
            }
            _ => Err(self.unexpected("`def`, `postulate` or `import`")),
        }
    }

    fn term(&mut self) -> PResult<Rc<Expr>> {
        if self.peek() == &Tok::Fun {
            return self.lambda();
        }
        let lhs = self.sigma_level()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.term()?;
            let span = lhs.span.merge(rhs.span);
            return Ok(Expr::new(ExprKind::Pi("_".into(), lhs, rhs), span));
        }
        Ok(lhs)
    }

    fn lambda(&mut self) -> PResult<Rc<Expr>> {
        let start = self.expect(&Tok::Fun)?.start;
        let mut binders: Vec<(Name, Option<Rc<Expr>>)> = Vec::new();
        loop {
            match self.peek() {
                Tok::LParen => {
                    self.bump();
                    let mut names = vec![self.binder_name()?.0];
                    while self.peek() != &Tok::Colon {
                        names.push(self.binder_name()?.0);
                    }
                    self.bump();
                    let ty = self.term()?;
                    self.expect(&Tok::RParen)?;
                    binders.extend(names.into_iter().map(|n| (n, Some(ty.clone()))));
                }
                Tok::Ident(_) | Tok::Underscore => {
                    binders.push((self.binder_name()?.0, None));
                }
                Tok::FatArrow if !binders.is_empty() => break,
                _ => return Err(self.unexpected("a binder or `=>`")),
            }
        }
        self.expect(&Tok::FatArrow)?;
        let body = self.term()?;
        let span = Span::new(start, body.span.end);
        Ok(binders
            .into_iter()
            .rev()
            .fold(body, |acc, (n, ty)| Expr::new(ExprKind::Lam(n, ty, acc), span)))
    }

    /// Does the input at the cursor look like `( name+ :`?
    fn at_group(&self) -> bool {
        if self.peek() != &Tok::LParen {
            return false;
        }
        let mut k = 1;
        while matches!(self.peek_at(k), Tok::Ident(_) | Tok::Underscore) {
            k += 1;
        }
        k > 1 && self.peek_at(k) == &Tok::Colon
    }

    fn group(&mut self) -> PResult<Group> {
        self.expect(&Tok::LParen)?;
        let mut names = vec![self.binder_name()?];
        while self.peek() != &Tok::Colon {
            names.push(self.binder_name()?);
        }
        self.bump();
        let ty = self.term()?;
        self.expect(&Tok::RParen)?;
        Ok(Group { names, ty })
    }

    /// Binder groups followed by `->` or `*`, if that is what comes next.
    fn telescope(&mut self) -> PResult<Option<Rc<Expr>>> {
        if !self.at_group() {
            return Ok(None);
        }
        let save = self.pos;
        let mut groups = Vec::new();
        while self.at_group() {
            match self.group() {
                Ok(g) => groups.push(g),
                Err(e) => {
                    if groups.is_empty() {
                        self.pos = save;
                        return Ok(None);
                    }
                    return Err(e);
                }
            }
        }
        let sigma = match self.peek() {
            Tok::Arrow => false,
            Tok::Star => true,
            _ => {
                self.pos = save;
                return Ok(None);
            }
        };
        let start = self.toks[save].1.start;
        self.bump();
        let body = if sigma { self.sigma_level()? } else { self.term()? };
        let span = Span::new(start, body.span.end);
        let mut acc = body;
        for g in groups.into_iter().rev() {
            for (n, _) in g.names.into_iter().rev() {
                let kind = if sigma {
                    ExprKind::Sigma(n, g.ty.clone(), acc)
                } else {
                    ExprKind::Pi(n, g.ty.clone(), acc)
                };
                acc = Expr::new(kind, span);
            }
        }
        Ok(Some(acc))
    }

    fn sigma_level(&mut self) -> PResult<Rc<Expr>> {
        if let Some(t) = self.telescope()? {
            return Ok(t);
        }
        let lhs = self.app()?;
        if self.eat(&Tok::Star) {
            let rhs = self.sigma_level()?;
            let span = lhs.span.merge(rhs.span);
            return Ok(Expr::new(ExprKind::Sigma("_".into(), lhs, rhs), span));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_)
                | Tok::U
                | Tok::U0
                | Tok::U1
                | Tok::U2
                | Tok::Underscore
                | Tok::LParen
                | Tok::Fst
                | Tok::Snd
                | Tok::IdKw
                | Tok::Refl
                | Tok::J
        )
    }

    fn app(&mut self) -> PResult<Rc<Expr>> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            let span = f.span.merge(a.span);
            f = Expr::new(ExprKind::App(f, a), span);
        }
        Ok(f)
    }

    fn atoms<const N: usize>(&mut self) -> PResult<[Rc<Expr>; N]> {
        let mut v = Vec::with_capacity(N);
        for _ in 0..N {
            v.push(self.atom()?);
        }
        Ok(v.try_into().unwrap_or_else(|_| unreachable!()))
    }

    fn atom(&mut self) -> PResult<Rc<Expr>> {
        let (tok, sp) = (self.peek().clone(), self.span());
        let universe = |l| Ok(Expr::new(ExprKind::Universe(l), sp));
        match tok {
            Tok::Ident(x) => {
                self.bump();
                Ok(Expr::new(ExprKind::Var(x.as_str().into()), sp))
            }
            Tok::U => {
                self.bump();
                universe(Level::Imp)
            }
            Tok::U0 | Tok::U1 | Tok::U2 => {
                self.bump();
                let i = match tok {
                    Tok::U0 => 0,
                    Tok::U1 => 1,
                    _ => 2,
                };
                universe(Level::Pred(i))
            }
            Tok::Underscore => {
                self.bump();
                Ok(Expr::new(ExprKind::Hole, sp))
            }
            Tok::Fst | Tok::Snd => {
                self.bump();
                let a = self.atom()?;
                let span = sp.merge(a.span);
                let kind = if tok == Tok::Fst { ExprKind::Fst(a) } else { ExprKind::Snd(a) };
                Ok(Expr::new(kind, span))
            }
            Tok::IdKw => {
                self.bump();
                let [a, x, y] = self.atoms()?;
                let span = sp.merge(y.span);
                Ok(Expr::new(ExprKind::Id(a, x, y), span))
            }
            Tok::Refl => {
                self.bump();
                let [a, x] = self.atoms()?;
                let span = sp.merge(x.span);
                Ok(Expr::new(ExprKind::Refl(a, x), span))
            }
            Tok::J => {
                self.bump();
                let args: [Rc<Expr>; 6] = self.atoms()?;
                let span = sp.merge(args[5].span);
                Ok(Expr::new(ExprKind::J(Box::new(args)), span))
            }
            Tok::LParen => {
                self.bump();
                let e = self.term()?;
                let kind = match self.peek() {
                    Tok::Comma => {
                        self.bump();
                        let b = self.term()?;
                        ExprKind::Pair(e, b)
                    }
                    Tok::Colon => {
                        self.bump();
                        let t = self.term()?;
                        ExprKind::Ann(e, t)
                    }
                    _ => {
                        self.expect(&Tok::RParen)?;
                        return Ok(e);
                    }
                };
                let end = self.expect(&Tok::RParen)?.end;
                Ok(Expr::new(kind, Span::new(sp.start, end)))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}
