//! Shared lexer for presentations, word syntax, Tietze scripts and rule files.

use std::fmt;

use thiserror::Error;

use crate::words::{CellId, SignedLetter};

/// 1-based position of a token in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn locate(text: &str, offset: usize, length: usize) -> SourceSpan {
        let offset = offset.min(text.len());
        let before = &text[..offset];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = text[line_start..offset].chars().count() + 1;
        SourceSpan { line, column, length: length.max(1) }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Star,
    Lt,
    Gt,
    Pipe,
    Comma,
    Eq,
    Colon,
    Assign,
    Prime,
    Caret,
    Arrow,
    LParen,
    RParen,
    Plus,
    Minus,
    At,
    Newline,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Int(n) => format!("`{n}`"),
            TokenKind::Newline => "end of line".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Star => "*",
            TokenKind::Lt => "<",
            TokenKind::Gt => ">",
            TokenKind::Pipe => "|",
            TokenKind::Comma => ",",
            TokenKind::Eq => "=",
            TokenKind::Colon => ":",
            TokenKind::Assign => ":=",
            TokenKind::Prime => "'",
            TokenKind::Caret => "^",
            TokenKind::Arrow => "->",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::At => "@",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub offset: usize,
    pub len: usize,
}

pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let err = |offset: usize, len: usize, message: String| SyntaxError {
        span: SourceSpan::locate(text, offset, len),
        message,
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = |kind| Token { kind, offset: start, len: 1 };
        match c {
            b'\n' => {
                tokens.push(single(TokenKind::Newline));
                i += 1;
            }
            b' ' | b'\t' | b'\r' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[start..i].to_string()),
                    offset: start,
                    len: i - start,
                });
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                tokens.push(int_token(text, start, i)?);
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push(Token { kind: TokenKind::Arrow, offset: start, len: 2 });
                    i += 2;
                } else if bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    tokens.push(int_token(text, start, i)?);
                } else {
                    tokens.push(single(TokenKind::Minus));
                    i += 1;
                }
            }
            b':' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    tokens.push(Token { kind: TokenKind::Assign, offset: start, len: 2 });
                    i += 2;
                } else {
                    tokens.push(single(TokenKind::Colon));
                    i += 1;
                }
            }
            _ => {
                let kind = match c {
                    b'*' => TokenKind::Star,
                    b'<' => TokenKind::Lt,
                    b'>' => TokenKind::Gt,
                    b'|' => TokenKind::Pipe,
                    b',' => TokenKind::Comma,
                    b'=' => TokenKind::Eq,
                    b'\'' => TokenKind::Prime,
                    b'^' => TokenKind::Caret,
                    b'(' => TokenKind::LParen,
                    b')' => TokenKind::RParen,
                    b'+' => TokenKind::Plus,
                    b'@' => TokenKind::At,
                    _ => {
                        let ch = text[i..].chars().next().unwrap_or('?');
                        return Err(err(i, ch.len_utf8(), format!("unexpected character `{ch}`")));
                    }
                };
                tokens.push(single(kind));
                i += 1;
            }
        }
    }
    Ok(tokens)
}

fn int_token(text: &str, start: usize, end: usize) -> Result<Token, SyntaxError> {
    let value = text[start..end].parse::<i64>().map_err(|_| SyntaxError {
        span: SourceSpan::locate(text, start, end - start),
        message: "integer out of range".to_string(),
    })?;
    Ok(Token { kind: TokenKind::Int(value), offset: start, len: end - start })
}

/// Upper bound on `|n|` in `x^n`, so a short input cannot request a huge word.
pub const MAX_EXPONENT: i64 = 1 << 16;

pub struct Cursor<'a> {
    text: &'a str,
    tokens: &'a [Token],
    pos: usize,
    stop_words: &'a [&'a str],
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str, tokens: &'a [Token]) -> Self {
        Cursor { text, tokens, pos: 0, stop_words: &[] }
    }

    /// Identifiers that end a word instead of being read as letters.
    pub fn with_stop_words(mut self, words: &'a [&'a str]) -> Self {
        self.stop_words = words;
        self
    }

    pub fn peek(&self) -> Option<&'a TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    pub fn peek_nth(&self, n: usize) -> Option<&'a TokenKind> {
        self.tokens.get(self.pos + n).map(|t| &t.kind)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn advance(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Span of the next token, or a zero-width span at end of input.
    pub fn span(&self) -> SourceSpan {
        match self.tokens.get(self.pos) {
            Some(t) => SourceSpan::locate(self.text, t.offset, t.len),
            None => SourceSpan::locate(self.text, self.text.len(), 1),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError { span: self.span(), message: message.into() }
    }

    pub fn unexpected(&self, wanted: &str) -> SyntaxError {
        match self.peek() {
            Some(k) => self.error(format!("expected {wanted}, found {}", k.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind) -> Result<(), SyntaxError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", kind.symbol())))
        }
    }

    pub fn eat_keyword(&mut self, keyword: &str) -> bool {
        if matches!(self.peek(), Some(TokenKind::Ident(s)) if s == keyword) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, keyword: &str) -> Result<(), SyntaxError> {
        if self.eat_keyword(keyword) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{keyword}`")))
        }
    }

    pub fn ident(&mut self) -> Result<(String, SourceSpan), SyntaxError> {
        let span = self.span();
        match self.peek() {
            Some(TokenKind::Ident(s)) => {
                self.pos += 1;
                Ok((s.clone(), span))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    /// Identifier or the reserved `*` 0-cell name.
    pub fn cell_name(&mut self) -> Result<(CellId, SourceSpan), SyntaxError> {
        let span = self.span();
        if self.eat(&TokenKind::Star) {
            return Ok((CellId::default_cell(), span));
        }
        let (name, span) = self.ident()?;
        Ok((CellId::new(name).expect("lexer identifiers are valid names"), span))
    }

    pub fn skip_newlines(&mut self) {
        while self.eat(&TokenKind::Newline) {}
    }

    pub fn expect_line_end(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() || self.eat(&TokenKind::Newline) {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    pub fn expect_end(&mut self) -> Result<(), SyntaxError> {
        self.skip_newlines();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// Parses word syntax up to the first token that cannot continue a word.
    pub fn word(&mut self) -> Result<Vec<SignedLetter>, SyntaxError> {
        self.word_spanned().map(|(letters, _)| letters)
    }

    /// Like [`Cursor::word`], also returning the span of each letter.
    pub fn word_spanned(&mut self) -> Result<(Vec<SignedLetter>, Vec<SourceSpan>), SyntaxError> {
        let mut letters = Vec::new();
        let mut spans = Vec::new();
        if self.peek() == Some(&TokenKind::Int(1)) {
            self.pos += 1;
            let continues = match self.peek() {
                Some(TokenKind::Ident(name)) => !self.stop_words.contains(&name.as_str()),
                Some(TokenKind::Int(_)) => true,
                _ => false,
            };
            if continues {
                return Err(self.error("`1` denotes the empty word and cannot be combined with other terms"));
            }
            return Ok((letters, spans));
        }
        while let Some(TokenKind::Ident(name)) = self.peek() {
            if self.stop_words.contains(&name.as_str()) {
                break;
            }
            let span = self.span();
            self.pos += 1;
            let gen = CellId::new(name.clone()).expect("lexer identifiers are valid names");
            let exponent = if self.eat(&TokenKind::Prime) {
                -1
            } else if self.eat(&TokenKind::Caret) {
                match self.peek() {
                    Some(TokenKind::Int(n)) if n.abs() <= MAX_EXPONENT => {
                        let n = *n;
                        self.pos += 1;
                        n
                    }
                    Some(TokenKind::Int(_)) => return Err(self.error("exponent too large")),
                    _ => return Err(self.unexpected("an integer exponent")),
                }
            } else {
                1
            };
            let letter = if exponent < 0 {
                SignedLetter::neg(gen)
            } else {
                SignedLetter::pos(gen)
            };
            for _ in 0..exponent.unsigned_abs() {
                letters.push(letter.clone());
                spans.push(span);
            }
        }
        if let Some(TokenKind::Int(_)) = self.peek() {
            return Err(self.error("numbers other than a lone `1` are not words"));
        }
        Ok((letters, spans))
    }
}
