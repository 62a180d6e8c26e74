//! N-Triples reader and canonical writer. Blank nodes are not supported.

use super::{vocab, Graph, Iri, Literal, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn parse_ntriples(text: &str) -> Result<Graph, ParseError> {
    let mut triples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let mut cursor = Cursor {
            chars: line.chars().collect(),
            pos: 0,
            line: idx + 1,
        };
        if let Some(t) = cursor.statement()? {
            triples.push(t);
        }
    }
    Ok(triples.into_iter().collect())
}

/// Canonical form: one line per triple, sorted by the serialized
/// (subject, predicate, object) strings, each line newline-terminated.
pub fn serialize_ntriples(g: &Graph) -> String {
    let mut rows: Vec<(String, String, String)> = g
        .iter()
        .map(|t| {
            (
                write_iri(&t.subject),
                write_iri(&t.predicate),
                write_term(&t.object),
            )
        })
        .collect();
    rows.sort_unstable();
    let mut out = String::with_capacity(rows.len() * 96);
    for (s, p, o) in rows {
        out.push_str(&s);
        out.push(' ');
        out.push_str(&p);
        out.push(' ');
        out.push_str(&o);
        out.push_str(" .\n");
    }
    out
}

pub(crate) fn write_iri(iri: &Iri) -> String {
    format!("<{}>", iri.as_str())
}

pub(crate) fn write_term(term: &Term) -> String {
    match term {
        Term::Iri(iri) => write_iri(iri),
        Term::Literal(lit) => {
            let mut out = String::with_capacity(lit.lexical().len() + 2);
            out.push('"');
            for c in lit.lexical().chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\r' => out.push_str("\\r"),
                    _ => out.push(c),
                }
            }
            out.push('"');
            if let Some(lang) = lit.language() {
                out.push('@');
                out.push_str(lang);
            } else if *lit.datatype() != vocab::xsd::string() {
                out.push_str("^^");
                out.push_str(&write_iri(lit.datatype()));
            }
            out
        }
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(' ' | '\t' | '\r')) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn at_end_or_comment(&self) -> bool {
        matches!(self.peek(), None | Some('#'))
    }

    fn statement(&mut self) -> Result<Option<Triple>, ParseError> {
        self.skip_ws();
        if self.at_end_or_comment() {
            return Ok(None);
        }
        let subject = self.resource("subject")?;
        self.require_ws()?;
        let predicate = self.resource("predicate")?;
        self.require_ws()?;
        let object = self.object()?;
        self.skip_ws();
        if self.peek() != Some('.') {
            return Err(self.err("expected `.` terminating the triple"));
        }
        self.pos += 1;
        self.skip_ws();
        if !self.at_end_or_comment() {
            return Err(self.err("unexpected content after `.`"));
        }
        Ok(Some(Triple {
            subject,
            predicate,
            object,
        }))
    }

    fn require_ws(&mut self) -> Result<(), ParseError> {
        if self.skip_ws() {
            Ok(())
        } else {
            Err(self.err("expected whitespace"))
        }
    }

    fn resource(&mut self, role: &str) -> Result<Iri, ParseError> {
        match self.peek() {
            Some('<') => self.iri_ref(),
            Some('_') => Err(self.err(format!("blank node {role} not supported"))),
            Some(_) => Err(self.err(format!("expected IRI for {role}"))),
            None => Err(self.err(format!("missing {role}"))),
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('"') => Ok(Term::Literal(self.literal()?)),
            Some('_') => Err(self.err("blank node object not supported")),
            Some(_) => Err(self.err("expected IRI or literal object")),
            None => Err(self.err("missing object")),
        }
    }

    fn iri_ref(&mut self) -> Result<Iri, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut value = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err("unterminated IRI")),
                Some('>') => {
                    self.pos += 1;
                    break;
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some('u') => value.push(self.hex_escape(4)?),
                        Some('U') => value.push(self.hex_escape(8)?),
                        _ => return Err(self.err("invalid escape in IRI")),
                    }
                }
                Some(c) => {
                    value.push(c);
                    self.pos += 1;
                }
            }
        }
        Iri::new(&value).map_err(|e| ParseError {
            line: self.line,
            column: start + 1,
            message: e.to_string(),
        })
    }

    /// Reads `XXXX` after a `\u` (cursor on the `u`).
    fn hex_escape(&mut self, digits: usize) -> Result<char, ParseError> {
        self.pos += 1;
        if self.pos + digits > self.chars.len() {
            return Err(self.err("truncated unicode escape"));
        }
        let hex: String = self.chars[self.pos..self.pos + digits].iter().collect();
        let code = u32::from_str_radix(&hex, 16).map_err(|_| self.err("bad unicode escape"))?;
        let c = char::from_u32(code).ok_or_else(|| self.err("escape is not a scalar value"))?;
        self.pos += digits;
        Ok(c)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.pos += 1;
        let mut lexical = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err("unterminated string literal")),
                Some('"') => {
                    self.pos += 1;
                    break;
                }
                Some('\\') => {
                    self.pos += 1;
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => {
                            lexical.push(self.hex_escape(4)?);
                            continue;
                        }
                        Some('U') => {
                            lexical.push(self.hex_escape(8)?);
                            continue;
                        }
                        _ => return Err(self.err("invalid string escape")),
                    };
                    lexical.push(c);
                    self.pos += 1;
                }
                Some(c) => {
                    lexical.push(c);
                    self.pos += 1;
                }
            }
        }
        match self.peek() {
            Some('@') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.pos += 1;
                }
                if self.pos == start {
                    return Err(self.err("empty language tag"));
                }
                let tag: String = self.chars[start..self.pos].iter().collect();
                Ok(Literal::lang(lexical, tag))
            }
            Some('^') => {
                self.pos += 1;
                if self.peek() != Some('^') {
                    return Err(self.err("expected `^^`"));
                }
                self.pos += 1;
                if self.peek() != Some('<') {
                    return Err(self.err("expected datatype IRI"));
                }
                let dt = self.iri_ref()?;
                Ok(Literal::typed(lexical, dt))
            }
            _ => Ok(Literal::string(lexical)),
        }
    }
}
