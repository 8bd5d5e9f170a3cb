//! Turtle serialization and a parser for the subset this crate emits.
//!
//! The emitted subset: `@prefix` directives, one triple per line, IRIs as
//! prefixed names or `<...>` references, `_:label` blank nodes, and plain
//! or `^^`-typed string literals. No collections, no language tags, no
//! predicate lists. The parser additionally accepts the `a` keyword.

use super::{BlankNode, CountingWriter, Iri, Literal, RdfError, Term, TripleGraph};
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

pub(super) fn serialize<W: Write>(graph: &TripleGraph, sink: W) -> Result<u64, RdfError> {
    let mut w = CountingWriter::new(sink);
    for (prefix, iri) in graph.namespaces().iter() {
        writeln!(w, "@prefix {prefix}: <{iri}> .")?;
    }
    if !graph.is_empty() {
        writeln!(w)?;
    }
    for triple in graph.triples() {
        write_term(&mut w, graph, &triple.subject)?;
        w.write_all(b" ")?;
        write_term(&mut w, graph, &triple.predicate)?;
        w.write_all(b" ")?;
        write_term(&mut w, graph, &triple.object)?;
        w.write_all(b" .\n")?;
    }
    w.flush()?;
    Ok(w.count())
}

fn write_term<W: Write>(w: &mut W, graph: &TripleGraph, term: &Term) -> Result<(), RdfError> {
    match term {
        Term::Iri(iri) => write_iri(w, graph, iri),
        Term::Blank(b) => Ok(write!(w, "_:{}", b.label())?),
        Term::Literal(lit) => {
            write!(w, "\"{}\"", escape_literal(&lit.lexical))?;
            if let Some(dt) = &lit.datatype {
                w.write_all(b"^^")?;
                write_iri(w, graph, dt)?;
            }
            Ok(())
        }
    }
}

fn write_iri<W: Write>(w: &mut W, graph: &TripleGraph, iri: &Iri) -> Result<(), RdfError> {
    if let Some((prefix, local)) = graph.namespaces().split(iri.as_str()) {
        if is_safe_local(local) {
            write!(w, "{prefix}:{local}")?;
            return Ok(());
        }
    }
    write!(w, "<{}>", iri.as_str())?;
    Ok(())
}

// Conservative PN_LOCAL: alphanumeric/underscore/hyphen plus %HH escapes,
// non-empty, not starting or ending with '-'. Percent escapes stay verbatim
// in the expanded IRI, so emission and parsing agree byte for byte.
fn is_safe_local(local: &str) -> bool {
    if local.is_empty() || local.starts_with('-') || local.ends_with('-') {
        return false;
    }
    let bytes = local.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'%' => {
                if i + 2 >= bytes.len()
                    || !bytes[i + 1].is_ascii_hexdigit()
                    || !bytes[i + 2].is_ascii_hexdigit()
                {
                    return false;
                }
                i += 3;
            }
            b if b.is_ascii_alphanumeric() || b == b'_' || b == b'-' => i += 1,
            _ => return false,
        }
    }
    true
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Turtle syntax error with 1-based line and column.
#[derive(Debug, thiserror::Error)]
#[error("turtle syntax error at {line}:{column}: {message}")]
pub struct TurtleParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Parses the Turtle subset emitted by [`TripleGraph::serialize_turtle`].
///
/// Blank node labels are re-allocated as `b0`, `b1`, ... in order of first
/// appearance, so `parse_turtle(serialize_turtle(g))` equals `g` up to a
/// bijection of blank labels.
pub fn parse_turtle(input: &str) -> Result<TripleGraph, TurtleParseError> {
    Parser::new(input).parse()
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    input: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    PrefixDirective,
    IriRef(String),
    PrefixedName(String, String),
    BlankLabel(String),
    LiteralStr(String),
    DatatypeMarker,
    Dot,
    A,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Token::PrefixDirective => "@prefix",
            Token::IriRef(_) => "IRI",
            Token::PrefixedName(_, _) => "prefixed name",
            Token::BlankLabel(_) => "blank node",
            Token::LiteralStr(_) => "literal",
            Token::DatatypeMarker => "^^",
            Token::Dot => ".",
            Token::A => "a",
            Token::Eof => "end of input",
        };
        f.write_str(name)
    }
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            chars: input.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            input,
        }
    }

    fn error(&self, message: impl Into<String>) -> TurtleParseError {
        TurtleParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws_and_comments(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, TurtleParseError> {
        self.skip_ws_and_comments();
        let Some(c) = self.peek() else {
            return Ok(Token::Eof);
        };
        match c {
            '@' => {
                let word: String = self.take_while(|c| !c.is_whitespace());
                if word == "@prefix" {
                    Ok(Token::PrefixDirective)
                } else {
                    Err(self.error(format!("unsupported directive {word:?}")))
                }
            }
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some(c) if c.is_whitespace() => {
                            return Err(self.error("whitespace inside IRI reference"))
                        }
                        Some(c) => iri.push(c),
                        None => return Err(self.error("unterminated IRI reference")),
                    }
                }
                Ok(Token::IriRef(iri))
            }
            '_' => {
                self.bump();
                if self.bump() != Some(':') {
                    return Err(self.error("expected ':' after '_' in blank node label"));
                }
                let label: String = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if label.is_empty() {
                    return Err(self.error("empty blank node label"));
                }
                Ok(Token::BlankLabel(label))
            }
            '"' => {
                self.bump();
                let mut value = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.error("unterminated string literal")),
                        Some('"') => break,
                        Some('\n') => return Err(self.error("newline inside string literal")),
                        Some('\\') => match self.bump() {
                            Some('\\') => value.push('\\'),
                            Some('"') => value.push('"'),
                            Some('n') => value.push('\n'),
                            Some('r') => value.push('\r'),
                            Some('t') => value.push('\t'),
                            Some('u') => value.push(self.unicode_escape(4)?),
                            Some('U') => value.push(self.unicode_escape(8)?),
                            Some(other) => {
                                return Err(self.error(format!("invalid escape \\{other}")))
                            }
                            None => return Err(self.error("unterminated escape sequence")),
                        },
                        Some(c) => value.push(c),
                    }
                }
                Ok(Token::LiteralStr(value))
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.error("expected '^^'"));
                }
                Ok(Token::DatatypeMarker)
            }
            '.' => {
                self.bump();
                Ok(Token::Dot)
            }
            _ => {
                let word: String = self.take_while(|c| {
                    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '%' | ':')
                });
                if word.is_empty() {
                    return Err(self.error(format!("unexpected character {c:?}")));
                }
                if word == "a" {
                    return Ok(Token::A);
                }
                match word.split_once(':') {
                    Some((prefix, local)) => {
                        Ok(Token::PrefixedName(prefix.to_string(), local.to_string()))
                    }
                    None => Err(self.error(format!("unexpected token {word:?}"))),
                }
            }
        }
    }

    fn unicode_escape(&mut self, digits: usize) -> Result<char, TurtleParseError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let Some(c) = self.bump() else {
                return Err(self.error("unterminated unicode escape"));
            };
            let Some(d) = c.to_digit(16) else {
                return Err(self.error(format!("invalid hex digit {c:?} in unicode escape")));
            };
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| self.error(format!("invalid code point U+{value:04X}")))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    fn parse(mut self) -> Result<TripleGraph, TurtleParseError> {
        let mut graph = TripleGraph::new();
        let mut prefixes: BTreeMap<String, String> = graph
            .namespaces()
            .iter()
            .map(|(p, i)| (p.to_string(), i.to_string()))
            .collect();
        let mut blank_map: BTreeMap<String, BlankNode> = BTreeMap::new();
        loop {
            let token = self.next_token()?;
            match token {
                Token::Eof => break,
                Token::PrefixDirective => {
                    let name = self.next_token()?;
                    let Token::PrefixedName(prefix, local) = name else {
                        return Err(self.error(format!("expected prefix name, got {name}")));
                    };
                    if !local.is_empty() {
                        return Err(self.error("prefix declaration must end with ':'"));
                    }
                    let iri_tok = self.next_token()?;
                    let Token::IriRef(iri) = iri_tok else {
                        return Err(self.error(format!("expected IRI in @prefix, got {iri_tok}")));
                    };
                    self.expect_dot()?;
                    graph
                        .bind_prefix(&prefix, &iri)
                        .map_err(|e| self.error(e.to_string()))?;
                    prefixes.insert(prefix, iri);
                }
                other => {
                    let subject =
                        self.token_to_term(other, &prefixes, &mut graph, &mut blank_map)?;
                    let pred_tok = self.next_token()?;
                    let predicate =
                        self.token_to_term(pred_tok, &prefixes, &mut graph, &mut blank_map)?;
                    let obj_tok = self.next_token()?;
                    let object =
                        self.object_term(obj_tok, &prefixes, &mut graph, &mut blank_map)?;
                    self.expect_dot()?;
                    graph
                        .add(subject, predicate, object)
                        .map_err(|e| self.error(e.to_string()))?;
                }
            }
        }
        let _ = self.input;
        Ok(graph)
    }

    fn expect_dot(&mut self) -> Result<(), TurtleParseError> {
        let tok = self.next_token()?;
        if tok != Token::Dot {
            return Err(self.error(format!("expected '.', got {tok}")));
        }
        Ok(())
    }

    fn token_to_term(
        &self,
        token: Token,
        prefixes: &BTreeMap<String, String>,
        graph: &mut TripleGraph,
        blank_map: &mut BTreeMap<String, BlankNode>,
    ) -> Result<Term, TurtleParseError> {
        match token {
            Token::IriRef(iri) => Ok(Term::Iri(
                Iri::new(iri).map_err(|e| self.error(e.to_string()))?,
            )),
            Token::PrefixedName(prefix, local) => {
                let Some(ns) = prefixes.get(&prefix) else {
                    return Err(self.error(format!("undeclared prefix {prefix:?}")));
                };
                Ok(Term::Iri(
                    Iri::new(format!("{ns}{local}")).map_err(|e| self.error(e.to_string()))?,
                ))
            }
            Token::A => Ok(Term::Iri(Iri::known(super::vocab::RDF_TYPE))),
            Token::BlankLabel(label) => {
                let node = blank_map
                    .entry(label)
                    .or_insert_with(|| graph.new_blank_node())
                    .clone();
                Ok(Term::Blank(node))
            }
            other => Err(self.error(format!("expected a term, got {other}"))),
        }
    }

    fn object_term(
        &mut self,
        token: Token,
        prefixes: &BTreeMap<String, String>,
        graph: &mut TripleGraph,
        blank_map: &mut BTreeMap<String, BlankNode>,
    ) -> Result<Term, TurtleParseError> {
        if let Token::LiteralStr(value) = token {
            // Literal, optionally ^^datatype; the '.' terminator is left
            // for the caller. Peek by position so a plain literal followed
            // by '.' does not consume it.
            let save = (self.pos, self.line, self.column);
            let next = self.next_token()?;
            if next == Token::DatatypeMarker {
                let dt_tok = self.next_token()?;
                let dt = match self.token_to_term(dt_tok, prefixes, graph, blank_map)? {
                    Term::Iri(iri) => iri,
                    other => {
                        return Err(self.error(format!("datatype must be an IRI, got {other:?}")))
                    }
                };
                Ok(Term::Literal(Literal::typed(value, dt)))
            } else {
                (self.pos, self.line, self.column) = save;
                Ok(Term::Literal(Literal::plain(value)))
            }
        } else {
            self.token_to_term(token, prefixes, graph, blank_map)
        }
    }
}
