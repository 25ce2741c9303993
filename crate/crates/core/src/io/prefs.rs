use super::{ParseError, ParseErrorKind, ParseResult};
use crate::preference::{Literal, PreferenceRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Lit(Literal),
    Gt,
    Arrow,
    Amp,
}

/// Tokens of one line with their 1-based columns; `#` ends the line.
fn lex(line: usize, text: &str, n: usize) -> ParseResult<Vec<(Sym, usize)>> {
    let chars: Vec<char> = text.chars().take_while(|&c| c != '#').collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let column = i + 1;
        let err = |col: usize, msg: String| ParseError::at(line, col, msg);
        match chars[i] {
            c if c.is_whitespace() => i += 1,
            '>' => {
                out.push((Sym::Gt, column));
                i += 1;
            }
            '&' => {
                out.push((Sym::Amp, column));
                i += 1;
            }
            '<' => {
                if chars.get(i + 1) != Some(&'-') {
                    return Err(err(column + 1, "incomplete arrow".into()).expecting("`<-`"));
                }
                out.push((Sym::Arrow, column));
                i += 2;
            }
            '!' | 'f' => {
                let positive = chars[i] == 'f';
                if !positive {
                    i += 1;
                }
                if chars.get(i) != Some(&'f') {
                    return Err(err(i + 1, "malformed literal".into()).expecting("`f<index>`"));
                }
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(err(i + 1, "missing feature index".into()).expecting("a feature index"));
                }
                let digits: String = chars[start..i].iter().collect();
                let index = digits.parse::<usize>().unwrap_or(usize::MAX);
                if index == 0 || index > n {
                    return Err(err(column, format!("feature index {digits} is outside 1..={n}"))
                        .kind(ParseErrorKind::IndexOutOfRange));
                }
                let literal = Literal { feature: index - 1, positive };
                out.push((Sym::Lit(literal), column));
            }
            other => {
                return Err(err(column, format!("unexpected character {other:?}"))
                    .expecting("a literal, `>`, `<-` or `&`"))
            }
        }
    }
    Ok(out)
}

/// One rule per non-blank line: `φ1 > … > φk` optionally followed by
/// `<- ψ1 & … & ψm`.
pub fn parse_preferences(text: &str, n: usize) -> ParseResult<Vec<PreferenceRule>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syms = lex(line, raw, n)?;
        if syms.is_empty() {
            continue;
        }
        let end = raw.chars().take_while(|&c| c != '#').count() + 1;
        let mut pos = 0;
        let literal = |pos: usize| -> ParseResult<(Literal, usize)> {
            match syms.get(pos) {
                Some(&(Sym::Lit(l), col)) => Ok((l, col)),
                Some(&(_, col)) => Err(ParseError::at(line, col, "unexpected operator").expecting("a literal")),
                None => Err(ParseError::at(line, end, "unexpected end of line").expecting("a literal")),
            }
        };
        let mut head: Vec<Literal> = Vec::new();
        loop {
            let (l, col) = literal(pos)?;
            if head.contains(&l) {
                return Err(ParseError::at(line, col, format!("head literal {l} occurs twice"))
                    .kind(ParseErrorKind::DuplicateHeadLiteral));
            }
            head.push(l);
            pos += 1;
            match syms.get(pos) {
                Some((Sym::Gt, _)) => pos += 1,
                _ => break,
            }
        }
        let mut body = Vec::new();
        if let Some((Sym::Arrow, _)) = syms.get(pos) {
            pos += 1;
            loop {
                body.push(literal(pos)?.0);
                pos += 1;
                match syms.get(pos) {
                    Some((Sym::Amp, _)) => pos += 1,
                    _ => break,
                }
            }
        }
        if let Some(&(_, col)) = syms.get(pos) {
            return Err(ParseError::at(line, col, "unexpected token").expecting("`>`, `<-`, `&` or end of line"));
        }
        rules.push(PreferenceRule::new(head, body).expect("head is non-empty and distinct"));
    }
    Ok(rules)
}

/// One rule per line, in the syntax accepted by [`parse_preferences`].
pub fn serialize_preferences(rules: &[PreferenceRule]) -> String {
    rules.iter().map(|r| format!("{r}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preference::is_linear;

    #[test]
    fn examples() {
        let rules = parse_preferences("!f2 > f1 <- !f3", 3).unwrap();
        assert_eq!(rules[0].head(), [Literal::neg(1), Literal::pos(0)]);
        assert_eq!(rules[0].body(), [Literal::neg(2)]);

        let rules = parse_preferences("f1 > f2", 2).unwrap();
        assert!(is_linear(&rules));

        let e = parse_preferences("f1 > f1", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateHeadLiteral);
        assert_eq!(e.column, 6);
    }

    #[test]
    fn compact_and_commented_forms() {
        let rules = parse_preferences("# prefs\n\nf1>!f2<-f3&!f4 # note\nf2\n", 4).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].to_string(), "f1 > !f2 <- f3 & !f4");
        assert!(!is_linear(&rules));
    }

    #[test]
    fn errors() {
        let kind = |t: &str| parse_preferences(t, 3).unwrap_err();
        assert_eq!(kind("f4").kind, ParseErrorKind::IndexOutOfRange);
        assert_eq!(kind("f0").kind, ParseErrorKind::IndexOutOfRange);
        assert_eq!(kind("f99999999999999999999999").kind, ParseErrorKind::IndexOutOfRange);
        let e = kind("f1 >");
        assert_eq!((e.line, e.column), (1, 5));
        let e = kind("f1\nf1 f2");
        assert_eq!((e.line, e.column), (2, 4));
        assert_eq!(kind("f1 <- ").column, 7);
        assert_eq!(kind("f1 < f2").column, 5);
        assert_eq!(kind("<- f1").column, 1);
        assert_eq!(kind("f1 > x").column, 6);
        assert_eq!(kind("!x").column, 2);
        assert_eq!(kind("f").column, 2);
    }

    #[test]
    fn body_literals_may_repeat() {
        assert_eq!(parse_preferences("f1 <- f2 & f2", 2).unwrap()[0].body().len(), 2);
    }
}
