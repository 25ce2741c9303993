//! Line-oriented text formats for models, instances and preference rules.
//!
//! Every format treats `#` as the start of a comment and ignores blank
//! lines. Feature indices are 1-based on disk and 0-based in memory; this
//! module is the only place that converts between the two.

mod instance;
mod model;
mod prefs;

use std::fmt;

pub use instance::parse_instance;
pub use model::{parse_fbdd_graph, parse_model, serialize_model};
pub use prefs::{parse_preferences, serialize_preferences};

use num_bigint::BigInt;
use thiserror::Error;

use crate::model::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateHeadLiteral,
    IndexOutOfRange,
    LengthMismatch,
}

/// A syntax error with a 1-based line and column into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
    /// What the parser was looking for, when that is a useful hint.
    pub expected: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if let Some(e) = &self.expected {
            write!(f, " (expected {e})")?;
        }
        Ok(())
    }
}

impl ParseError {
    pub(crate) fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            kind: ParseErrorKind::Syntax,
            message: message.into(),
            expected: None,
        }
    }

    pub(crate) fn expecting(mut self, what: impl Into<String>) -> Self {
        self.expected = Some(what.into());
        self
    }

    pub(crate) fn kind(mut self, kind: ParseErrorKind) -> Self {
        self.kind = kind;
        self
    }
}

pub(crate) type ParseResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl Token<'_> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.line, self.column, message)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
    /// Column just past the last character.
    pub end: usize,
}

impl<'a> Line<'a> {
    pub fn error_at_end(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.number, self.end, message)
    }

    /// The line's tokens after checking that there are exactly `count`
    /// arguments following the keyword.
    pub fn args(&self, count: usize, what: &str) -> ParseResult<&[Token<'a>]> {
        let args = &self.tokens[1..];
        match args.len().cmp(&count) {
            std::cmp::Ordering::Equal => Ok(args),
            std::cmp::Ordering::Greater => Err(args[count]
                .error(format!("unexpected token {:?}", args[count].text))
                .expecting(format!("{count} {what}"))),
            std::cmp::Ordering::Less => Err(self
                .error_at_end(format!("found {} {what}", args.len()))
                .expecting(format!("{count} {what}"))),
        }
    }
}

/// Splits `text` into non-blank lines of whitespace-separated tokens,
/// dropping `#` comments.
pub(crate) fn significant_lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.find('#').map_or(raw, |p| &raw[..p]);
        let mut tokens = Vec::new();
        let mut start: Option<(usize, usize)> = None;
        let mut column = 0;
        for (byte, ch) in content.char_indices() {
            column += 1;
            if ch.is_whitespace() {
                if let Some((b, c)) = start.take() {
                    tokens.push(Token { text: &content[b..byte], line: i + 1, column: c });
                }
            } else if start.is_none() {
                start = Some((byte, column));
            }
        }
        if let Some((b, c)) = start {
            tokens.push(Token { text: &content[b..], line: i + 1, column: c });
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens, end: column + 1 });
        }
    }
    out
}

/// Position just past the end of `text`.
pub(crate) fn end_position(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    match lines.last() {
        Some(last) => (lines.len(), last.chars().count() + 1),
        None => (1, 1),
    }
}

pub(crate) fn parse_usize(tok: &Token<'_>, what: &str) -> ParseResult<usize> {
    if tok.text.is_empty() || !tok.text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(tok.error(format!("invalid {what} {:?}", tok.text)).expecting("a non-negative integer"));
    }
    tok.text
        .parse()
        .map_err(|_| tok.error(format!("{what} {} is too large", tok.text)))
}

pub(crate) fn parse_bit(tok: &Token<'_>) -> ParseResult<bool> {
    match tok.text {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(tok.error(format!("invalid bit {other:?}")).expecting("0 or 1")),
    }
}

/// `p`, `-p` or `p/q` with decimal digits and `q > 0`.
pub(crate) fn parse_rational(tok: &Token<'_>) -> ParseResult<Rational> {
    let bad = || tok.error(format!("invalid rational {:?}", tok.text)).expecting("p, -p or p/q");
    let (negative, body) = match tok.text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok.text),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(bad());
    }
    let mut numer: BigInt = num.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let denom: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if denom == BigInt::from(0) {
        return Err(tok.error("zero denominator").expecting("q > 0"));
    }
    Ok(Rational::new(numer, denom))
}

pub(crate) fn parse_id<'a>(tok: &Token<'a>) -> ParseResult<&'a str> {
    if tok.text.chars().all(|c| c.is_ascii_alphanumeric()) {
        Ok(tok.text)
    } else {
        Err(tok.error(format!("invalid node id {:?}", tok.text)).expecting("an alphanumeric id"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(text: &str) -> Token<'_> {
        Token { text, line: 1, column: 1 }
    }

    #[test]
    fn rationals() {
        let r = |s| parse_rational(&tok(s));
        assert_eq!(r("3").unwrap(), Rational::from_integer(3.into()));
        assert_eq!(r("-4/6").unwrap(), Rational::new((-2).into(), 3.into()));
        assert_eq!(r("0/5").unwrap(), Rational::default());
        for bad in ["", "-", "1/", "/2", "1/-2", "+1", "1/0", "1.5", "--1", "1/2/3", "١"] {
            assert!(r(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn tokenizer_tracks_columns_and_comments() {
        let lines = significant_lines("# header\n\n  w  -2 2 # trailing\nb\t1\n");
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].number, 3);
        let cols: Vec<_> = lines[0].tokens.iter().map(|t| (t.text, t.column)).collect();
        assert_eq!(cols, [("w", 3), ("-2", 6), ("2", 9)]);
        assert_eq!(lines[1].tokens[1].column, 3);
    }

    #[test]
    fn unicode_columns_count_chars() {
        let lines = significant_lines("é x");
        assert_eq!(lines[0].tokens[1].column, 3);
    }
}
