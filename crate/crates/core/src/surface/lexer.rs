use std::fmt;

use thiserror::Error;

use crate::span::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Pragma(String),
    Def,
    Postulate,
    Import,
    Fun,
    Fst,
    Snd,
    IdKw,
    Refl,
    J,
    U,
    U0,
    U1,
    U2,
    Underscore,
    LParen,
    RParen,
    Comma,
    Colon,
    ColonEq,
    Arrow,
    FatArrow,
    Star,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::Str(s) => return write!(f, "string {s:?}"),
            Tok::Pragma(_) => "pragma",
            Tok::Def => "`def`",
            Tok::Postulate => "`postulate`",
            Tok::Import => "`import`",
            Tok::Fun => "`fun`",
            Tok::Fst => "`fst`",
            Tok::Snd => "`snd`",
            Tok::IdKw => "`Id`",
            Tok::Refl => "`refl`",
            Tok::J => "`J`",
            Tok::U => "`U`",
            Tok::U0 => "`U0`",
            Tok::U1 => "`U1`",
            Tok::U2 => "`U2`",
            Tok::Underscore => "`_`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::ColonEq => "`:=`",
            Tok::Arrow => "`->`",
            Tok::FatArrow => "`=>`",
            Tok::Star => "`*`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: Span) -> ParseError {
        ParseError { message: message.into(), span }
    }
}

pub const KEYWORDS: &[&str] =
    &["def", "postulate", "import", "fun", "fst", "snd", "Id", "refl", "J", "U", "U0", "U1", "U2"];

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "def" => Tok::Def,
        "postulate" => Tok::Postulate,
        "import" => Tok::Import,
        "fun" => Tok::Fun,
        "fst" => Tok::Fst,
        "snd" => Tok::Snd,
        "Id" => Tok::IdKw,
        "refl" => Tok::Refl,
        "J" => Tok::J,
        "U" => Tok::U,
        "U0" => Tok::U0,
        "U1" => Tok::U1,
        "U2" => Tok::U2,
        _ => return None,
    })
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut line_start = true;
    while i < src.len() {
        let c = src[i..].chars().next().unwrap_or('\0');
        if c == '\n' {
            line_start = true;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        if src[i..].starts_with("--") || (c == '#' && line_start) {
            let end = src[i..].find('\n').map_or(src.len(), |n| i + n);
            if c == '#' {
                out.push((Tok::Pragma(src[i + 1..end].trim().to_string()), Span::new(start, end)));
            }
            i = end;
            continue;
        }
        line_start = false;
        if is_ident_start(c) {
            while i < src.len() && is_ident_char(bytes[i] as char) {
                i += 1;
            }
            let word = &src[start..i];
            let tok = keyword(word).unwrap_or_else(|| Tok::Ident(word.to_string()));
            out.push((tok, Span::new(start, i)));
            continue;
        }
        if c == '"' {
            let rest = &src[i + 1..];
            let Some(n) = rest.find(['"', '\n']).filter(|&n| rest.as_bytes()[n] == b'"') else {
                return Err(ParseError::new("unterminated string", Span::new(start, src.len())));
            };
            out.push((Tok::Str(rest[..n].to_string()), Span::new(start, i + n + 2)));
            i += n + 2;
            continue;
        }
        let (tok, len) = match (c, bytes.get(i + 1).copied()) {
            (':', Some(b'=')) => (Tok::ColonEq, 2),
            ('-', Some(b'>')) => (Tok::Arrow, 2),
            ('=', Some(b'>')) => (Tok::FatArrow, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('*', _) => (Tok::Star, 1),
            ('_', _) if !bytes.get(i + 1).is_some_and(|b| is_ident_char(*b as char)) => (Tok::Underscore, 1),
            _ => {
                return Err(ParseError::new(
                    format!("unexpected character {c:?}"),
                    Span::new(start, start + c.len_utf8()),
                ))
            }
        };
        out.push((tok, Span::new(start, start + len)));
        i += len;
    }
    out.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(out)
}
