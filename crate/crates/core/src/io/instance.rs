use super::{ParseError, ParseErrorKind, ParseResult};
use crate::instance::Instance;

/// Reads a bitstring, leftmost character first (`f1`). Surrounding
/// whitespace is ignored.
pub fn parse_instance(text: &str, n: usize) -> ParseResult<Instance> {
    let leading = text.chars().take_while(|c| c.is_whitespace()).count();
    let trimmed = text.trim();
    let mut bits = Vec::with_capacity(trimmed.len().min(n));
    for (i, ch) in trimmed.chars().enumerate() {
        match ch {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => {
                return Err(ParseError::at(1, leading + i + 1, format!("invalid bit {other:?}"))
                    .expecting("0 or 1"))
            }
        }
    }
    if bits.len() != n {
        return Err(ParseError::at(1, leading + bits.len() + 1, format!("instance has {} bits", bits.len()))
            .expecting(format!("{n} bits"))
            .kind(ParseErrorKind::LengthMismatch));
    }
    Ok(Instance::new(bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse_instance("011", 3).unwrap(), Instance::new(vec![false, true, true]));
        assert_eq!(parse_instance("000\n", 3).unwrap(), Instance::zeros(3));
        let e = parse_instance("01", 3).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::LengthMismatch);
        let e = parse_instance("0x1", 3).unwrap_err();
        assert_eq!((e.line, e.column), (1, 2));
    }
}
