//! S-expression reader. Produces [`Value`]s; `'x` reads as `(quote x)`,
//! `;` starts a line comment, and `nil` reads as the empty list.

use num_bigint::BigInt;

use crate::error::ParseError;
use crate::value::Value;

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader { src: text.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col, msg)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == b';' {
                while let Some(c) = self.bump() {
                    if c == b'\n' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn is_delim(c: u8) -> bool {
        c.is_ascii_whitespace() || matches!(c, b'(' | b')' | b'\'' | b';' | b'"')
    }

    fn read(&mut self) -> Result<Value, ParseError> {
        stacker::maybe_grow(32 * 1024, 1024 * 1024, || self.read_inner())
    }

    fn read_inner(&mut self) -> Result<Value, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b')') => Err(self.err("unexpected `)`")),
            Some(b'"') => self.read_string(),
            Some(b'\'') => {
                self.bump();
                let v = self.read()?;
                Ok(Value::list([Value::sym("quote"), v]))
            }
            Some(b'(') => {
                self.bump();
                self.read_list_tail()
            }
            Some(_) => self.read_atom(),
        }
    }

    /// Strings survive only as opaque symbols (quotes included in the name)
    /// so that ignored forms such as `include-book` can be read.
    fn read_string(&mut self) -> Result<Value, ParseError> {
        let (line, col) = (self.line, self.col);
        self.bump();
        let mut buf = vec![b'"'];
        loop {
            match self.bump() {
                None => return Err(ParseError::new(line, col, "unclosed string")),
                Some(b'"') => break,
                Some(b'\\') => match self.bump() {
                    Some(c) => buf.push(c),
                    None => return Err(ParseError::new(line, col, "unclosed string")),
                },
                Some(c) => buf.push(c),
            }
        }
        buf.push(b'"');
        let name = String::from_utf8(buf).map_err(|_| ParseError::new(line, col, "invalid UTF-8 in string"))?;
        Ok(Value::sym(&name))
    }

    fn read_list_tail(&mut self) -> Result<Value, ParseError> {
        let mut items = Vec::new();
        let mut tail = Value::Nil;
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(self.err("unclosed `(`")),
                Some(b')') => {
                    self.bump();
                    break;
                }
                Some(b'.') if self.dot_token() => {
                    if items.is_empty() {
                        return Err(self.err("`.` with no preceding element"));
                    }
                    self.bump();
                    tail = self.read()?;
                    self.skip_ws();
                    if self.bump() != Some(b')') {
                        return Err(self.err("expected `)` after dotted tail"));
                    }
                    break;
                }
                Some(_) => items.push(self.read()?),
            }
        }
        Ok(items.into_iter().rev().fold(tail, |acc, v| Value::cons(v, acc)))
    }

    fn dot_token(&self) -> bool {
        self.src.get(self.pos + 1).map_or(true, |&c| Self::is_delim(c))
    }

    fn read_atom(&mut self) -> Result<Value, ParseError> {
        let (line, col) = (self.line, self.col);
        let start = self.pos;
        while let Some(c) = self.peek() {
            if Self::is_delim(c) {
                break;
            }
            self.bump();
        }
        let tok = std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| ParseError::new(line, col, "invalid UTF-8 in token"))?;
        if tok.is_empty() {
            return Err(ParseError::new(line, col, "empty token"));
        }
        if is_integer(tok) {
            let i: BigInt = tok
                .parse()
                .map_err(|_| ParseError::new(line, col, format!("bad integer `{tok}`")))?;
            return Ok(Value::Int(i));
        }
        if tok == "." {
            return Err(ParseError::new(line, col, "stray `.`"));
        }
        Ok(Value::sym(tok))
    }
}

fn is_integer(tok: &str) -> bool {
    let digits = tok.strip_prefix(['-', '+']).unwrap_or(tok);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Reads every top-level form in `text`.
pub fn read_all(text: &str) -> Result<Vec<Value>, ParseError> {
    let mut r = Reader::new(text);
    let mut out = Vec::new();
    loop {
        r.skip_ws();
        if r.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Reads exactly one form.
pub fn read_one(text: &str) -> Result<Value, ParseError> {
    let mut r = Reader::new(text);
    let v = r.read()?;
    r.skip_ws();
    if r.peek().is_some() {
        return Err(r.err("trailing input after form"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quote_sugar() {
        assert_eq!(read_one("'x").unwrap(), read_one("(quote x)").unwrap());
    }

    #[test]
    fn dotted_pairs() {
        let v = read_one("((a . 1) (b . c))").unwrap();
        assert_eq!(v.to_string(), "((a . 1) (b . c))");
    }

    #[test]
    fn comments_and_negatives() {
        let v = read_all("; hi\n(f -3 +4) ; trailing\n x").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].to_string(), "(f -3 4)");
    }

    #[test]
    fn errors_carry_position() {
        let e = read_one("(f a\n  b").unwrap_err();
        assert!(e.msg.contains("unclosed"));
        let e = read_one("(f))").unwrap_err();
        assert_eq!((e.line, e.col), (1, 4));
        assert!(read_one("(. a)").is_err());
    }
}
