//! Shared tokenizer for formulas, clauses and sequents.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nom(String),
    Conom(String),
    Meta(String),
    Param(String),
    Hat(String),
    Check(String),
    LParen,
    RParen,
    Comma,
    Semi,
    And,
    Or,
    Leq,
    Implies,
    Turnstile,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Nom(s) => write!(f, "@{s}"),
            Tok::Conom(s) => write!(f, "%{s}"),
            Tok::Meta(s) => write!(f, "?{s}"),
            Tok::Param(s) => write!(f, "#{s}"),
            Tok::Hat(s) => write!(f, "^{s}"),
            Tok::Check(s) => write!(f, "!{s}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Semi => write!(f, ";"),
            Tok::And => write!(f, "&"),
            Tok::Or => write!(f, "|"),
            Tok::Leq => write!(f, "<="),
            Tok::Implies => write!(f, "=>"),
            Tok::Turnstile => write!(f, "|-"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

pub fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let word = |start: usize| -> (String, usize) {
        let mut j = start;
        while j < bytes.len() && ident_char(bytes[j]) {
            j += 1;
        }
        (bytes[start..j].iter().collect(), j)
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let two: String = bytes[i..(i + 2).min(bytes.len())].iter().collect();
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            ';' => {
                i += 1;
                Tok::Semi
            }
            '&' => {
                i += 1;
                Tok::And
            }
            '|' if two == "|-" => {
                i += 2;
                Tok::Turnstile
            }
            '|' => {
                i += 1;
                Tok::Or
            }
            '<' if two == "<=" => {
                i += 2;
                Tok::Leq
            }
            '=' if two == "=>" => {
                i += 2;
                Tok::Implies
            }
            '@' | '%' | '?' | '#' | '^' | '!' => {
                if i + 1 >= bytes.len() || !bytes[i + 1].is_ascii_alphanumeric() {
                    return Err(ParseError::new(pos, format!("expected identifier after `{c}`")));
                }
                let (w, j) = word(i + 1);
                i = j;
                match c {
                    '@' => Tok::Nom(w),
                    '%' => Tok::Conom(w),
                    '?' => Tok::Meta(w),
                    '#' => Tok::Param(w),
                    '^' => Tok::Hat(w),
                    _ => Tok::Check(w),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let (w, j) = word(i);
                i = j;
                Tok::Ident(w)
            }
            _ => return Err(ParseError::new(pos, format!("unexpected character `{c}`"))),
        };
        out.push((pos, tok));
    }
    Ok(out)
}

/// A cursor over a token stream.
pub struct Cursor {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Cursor, ParseError> {
        let toks = tokenize(text)?;
        Ok(Cursor {
            toks,
            pos: 0,
            end: text.chars().count(),
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    pub fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{t}`")))
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let msg = msg.into();
        match self.peek() {
            Some(t) => ParseError::new(self.offset(), format!("{msg}, found `{t}`")),
            None => ParseError::new(self.offset(), format!("{msg}, found end of input")),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let t: Vec<Tok> = tokenize("^dia(X) |- !box(@j) <= p | q => %m ; ?A #N1")
            .unwrap()
            .into_iter()
            .map(|(_, t)| t)
            .collect();
        assert_eq!(
            t,
            vec![
                Tok::Hat("dia".into()),
                Tok::LParen,
                Tok::Ident("X".into()),
                Tok::RParen,
                Tok::Turnstile,
                Tok::Check("box".into()),
                Tok::LParen,
                Tok::Nom("j".into()),
                Tok::RParen,
                Tok::Leq,
                Tok::Ident("p".into()),
                Tok::Or,
                Tok::Ident("q".into()),
                Tok::Implies,
                Tok::Conom("m".into()),
                Tok::Semi,
                Tok::Meta("A".into()),
                Tok::Param("N1".into()),
            ]
        );
    }

    #[test]
    fn bad_char_has_position() {
        let e = tokenize("p $ q").unwrap_err();
        assert_eq!(e.pos, 2);
    }
}
