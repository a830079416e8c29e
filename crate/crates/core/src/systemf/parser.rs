//! Parser for `.sysf` files:
//!
//! ```text
//! file  := { "fdef" IDENT ":" type ":=" term }
//! type  := "forall" IDENT+ "." type | tatom [ "->" type ]
//! term  := "\" ( "(" IDENT ":" type ")" )+ "." term | "/\" IDENT+ "." term | app
//! app   := atom { atom | "[" type "]" }
//! ```

use std::rc::Rc;

use crate::span::Span;
use crate::surface::lexer::{is_ident_char, is_ident_start};
use crate::term::Name;

use super::syntax::{FDecl, FTerm, FTermKind, FType};
use super::FError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Fdef,
    Forall,
    Colon,
    ColonEq,
    Dot,
    Arrow,
    Lambda,
    TyLambda,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(x) => format!("identifier `{x}`"),
        Tok::Fdef => "`fdef`".into(),
        Tok::Forall => "`forall`".into(),
        Tok::Colon => "`:`".into(),
        Tok::ColonEq => "`:=`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Lambda => "`\\`".into(),
        Tok::TyLambda => "`/\\`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrack => "`[`".into(),
        Tok::RBrack => "`]`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, FError> {
    let mut out = Vec::new();
    let b = src.as_bytes();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().unwrap_or('\0');
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if src[i..].starts_with("--") {
            i = src[i..].find('\n').map_or(src.len(), |n| i + n);
            continue;
        }
        let start = i;
        if is_ident_start(c) {
            while i < src.len() && is_ident_char(b[i] as char) {
                i += 1;
            }
            let tok = match &src[start..i] {
                "fdef" => Tok::Fdef,
                "forall" => Tok::Forall,
                w => Tok::Ident(w.to_string()),
            };
            out.push((tok, Span::new(start, i)));
            continue;
        }
        let (tok, len) = match (c, b.get(i + 1).copied()) {
            (':', Some(b'=')) => (Tok::ColonEq, 2),
            ('-', Some(b'>')) => (Tok::Arrow, 2),
            ('/', Some(b'\\')) => (Tok::TyLambda, 2),
            ('\\', _) => (Tok::Lambda, 1),
            (':', _) => (Tok::Colon, 1),
            ('.', _) => (Tok::Dot, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            _ => return Err(FError::parse(format!("unexpected character {c:?}"), Span::new(i, i + c.len_utf8()))),
        };
        out.push((tok, Span::new(start, start + len)));
        i += len;
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}

struct P {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type R<T> = Result<T, FError>;

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Span {
        let s = self.span();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        s
    }

    fn expect(&mut self, t: Tok) -> R<Span> {
        if *self.peek() == t {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&describe(&t)))
        }
    }

    fn unexpected(&self, wanted: &str) -> FError {
        FError::parse(format!("expected {wanted}, found {}", describe(self.peek())), self.span())
    }

    fn ident(&mut self) -> R<(Name, Span)> {
        match self.peek().clone() {
            Tok::Ident(x) => Ok((x.as_str().into(), self.bump())),
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn decl(&mut self) -> R<FDecl> {
        let start = self.expect(Tok::Fdef)?.start;
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::ColonEq)?;
        let body = self.term()?;
        Ok(FDecl { name, ty, body: body.clone(), span: Span::new(start, body.span.end) })
    }

    fn ty(&mut self) -> R<Rc<FType>> {
        if *self.peek() == Tok::Forall {
            self.bump();
            let mut names = vec![self.ident()?.0];
            while *self.peek() != Tok::Dot {
                names.push(self.ident()?.0);
            }
            self.bump();
            let body = self.ty()?;
            return Ok(names.into_iter().rev().fold(body, |acc, x| Rc::new(FType::Forall(x, acc))));
        }
        let a = self.ty_atom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let b = self.ty()?;
            return Ok(FType::arrow(a, b));
        }
        Ok(a)
    }

    fn ty_atom(&mut self) -> R<Rc<FType>> {
        match self.peek() {
            Tok::Ident(_) => Ok(Rc::new(FType::Var(self.ident()?.0))),
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a type")),
        }
    }

    fn term(&mut self) -> R<Rc<FTerm>> {
        let start = self.span().start;
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let mut binders = Vec::new();
                loop {
                    self.expect(Tok::LParen)?;
                    let (x, _) = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let a = self.ty()?;
                    self.expect(Tok::RParen)?;
                    binders.push((x, a));
                    if *self.peek() == Tok::Dot {
                        break;
                    }
                }
                self.bump();
                let body = self.term()?;
                let span = Span::new(start, body.span.end);
                Ok(binders.into_iter().rev().fold(body, |acc, (x, a)| FTerm::new(FTermKind::Lam(x, a, acc), span)))
            }
            Tok::TyLambda => {
                self.bump();
                let mut names = vec![self.ident()?.0];
                while *self.peek() != Tok::Dot {
                    names.push(self.ident()?.0);
                }
                self.bump();
                let body = self.term()?;
                let span = Span::new(start, body.span.end);
                Ok(names.into_iter().rev().fold(body, |acc, x| FTerm::new(FTermKind::TyLam(x, acc), span)))
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> R<Rc<FTerm>> {
        let mut f = self.atom()?;
        loop {
            match self.peek() {
                Tok::Ident(_) | Tok::LParen => {
                    let a = self.atom()?;
                    let span = f.span.merge(a.span);
                    f = FTerm::new(FTermKind::App(f, a), span);
                }
                Tok::LBrack => {
                    self.bump();
                    let t = self.ty()?;
                    let end = self.expect(Tok::RBrack)?.end;
                    let span = Span::new(f.span.start, end);
                    f = FTerm::new(FTermKind::TyApp(f, t), span);
                }
                _ => return Ok(f),
            }
        }
    }

    fn atom(&mut self) -> R<Rc<FTerm>> {
        match self.peek() {
            Tok::Ident(_) => {
                let (x, sp) = self.ident()?;
                Ok(FTerm::new(FTermKind::Var(x), sp))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

pub fn parse_f(src: &str) -> Result<Vec<FDecl>, FError> {
    let mut p = P { toks: lex(src)?, pos: 0 };
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        out.push(p.decl()?);
    }
    Ok(out)
}

pub fn parse_f_type(src: &str) -> Result<Rc<FType>, FError> {
    let mut p = P { toks: lex(src)?, pos: 0 };
    let t = p.ty()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

pub fn parse_f_term(src: &str) -> Result<Rc<FTerm>, FError> {
    let mut p = P { toks: lex(src)?, pos: 0 };
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn church_two() {
        let ds = parse_f("fdef two : forall X. (X -> X) -> X -> X := /\\X. \\(f : X -> X). \\(x : X). f (f x)").unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].ty.to_string(), "forall X. (X -> X) -> X -> X");
    }

    #[test]
    fn forall_and_type_application() {
        assert!(matches!(parse_f_type("forall X. X").unwrap().as_ref(), FType::Forall(x, b) if &**x == "X" && matches!(b.as_ref(), FType::Var(_))));
        let t = parse_f_term("t [A] [B]").unwrap();
        let FTermKind::TyApp(inner, b) = &t.kind else { panic!() };
        assert!(matches!(b.as_ref(), FType::Var(x) if &**x == "B"));
        assert!(matches!(inner.kind, FTermKind::TyApp(..)));
    }

    #[test]
    fn parse_errors_have_spans() {
        let e = parse_f("fdef x : X := \\x. x").unwrap_err();
        assert!(e.is_parse());
        assert_eq!(e.span().start, 15);
    }
}
