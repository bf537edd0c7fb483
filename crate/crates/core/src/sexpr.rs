//! Minimal s-expression reader shared by the formula, proof and theory formats.
//!
//! Symbols are runs of non-delimiter characters, strings are double-quoted
//! with `\"` and `\\` escapes, and `;` starts a comment that runs to the end
//! of the line.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Symbol(String, Pos),
    Str(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Symbol(_, p) | Sexp::Str(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Sexp::Symbol(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v, _) => Some(v),
            _ => None,
        }
    }

    /// The head symbol of a non-empty list.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_symbol()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => Err(ParseError::new(start, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        None => return Err(ParseError::new(start, "unclosed '('")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(')') => Err(ParseError::new(start, "unexpected ')'")),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(ParseError::new(start, "unterminated string")),
                        Some('"') => return Ok(Sexp::Str(s, start)),
                        Some('\\') => match self.bump() {
                            Some(c @ ('"' | '\\')) => s.push(c),
                            Some('n') => s.push('\n'),
                            _ => return Err(ParseError::new(self.pos, "bad escape in string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Symbol(s, start))
            }
        }
    }
}

/// Reads every top-level expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    loop {
        r.skip_ws();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Reads exactly one expression.
pub fn read_one(text: &str) -> Result<Sexp, ParseError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(ParseError::new(Pos { line: 1, col: 1 }, "empty input")),
        _ => Err(ParseError::new(
            all[1].pos(),
            "trailing input after expression",
        )),
    }
}

/// Quotes `s` as a string literal readable by [`read_all`].
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
