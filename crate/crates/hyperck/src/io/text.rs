//! The `.hg` text format and its JSON mirror.
//!
//! ```text
//! hypergraph T {              // line comments run to end of line
//!   vertices: v w;
//!   edge e: {w} -> {v w};
//!   partition w: e1 e2 | e3;  // optional, named after the split vertex
//!   citation: "Toeplitz";     // optional free-form tag
//! }
//! ```
//!
//! Identifiers are whitespace-separated tokens; `{ } ; : | "` are syntax and
//! `,` counts as whitespace, so `{v1, v2}` and `{v1 v2}` are the same.
//! Serialization emits the canonical form (everything sorted), so
//! `parse ∘ serialize` is the identity and `serialize ∘ parse` canonicalizes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::hypergraph::{EdgeId, Hypergraph, VertexId};
use crate::transform::Partition;

use super::{ParseError, SyntaxError};

/// A parsed hypergraph document: the hypergraph plus optional metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HgDocument {
    pub name: String,
    pub hypergraph: Hypergraph,
    pub citation: Option<String>,
    /// Declared edge partitions, keyed by the vertex they split.
    pub partitions: BTreeMap<VertexId, Partition>,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    source: Vec<String>,
    range: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonDocument {
    name: String,
    vertices: Vec<String>,
    edges: BTreeMap<String, JsonEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    citation: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    partitions: BTreeMap<String, Vec<Vec<String>>>,
}

/// Parses either the text format or, when the input starts with `{`, the
/// JSON mirror. The returned document always validates.
pub fn parse_hg(input: &str) -> Result<HgDocument, ParseError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        Parser::new(input).document()
    }
}

fn parse_json(input: &str) -> Result<HgDocument, ParseError> {
    let doc: JsonDocument = serde_json::from_str(input)?;
    let mut builder = Hypergraph::builder();
    for v in &doc.vertices {
        builder = builder.vertex(v);
    }
    for (e, ends) in &doc.edges {
        builder = builder.edge(
            e,
            ends.source.iter().map(String::as_str),
            ends.range.iter().map(String::as_str),
        );
    }
    let hypergraph = builder.build()?;
    let mut partitions = BTreeMap::new();
    for (v, blocks) in &doc.partitions {
        let partition = Partition(
            blocks
                .iter()
                .map(|b| b.iter().map(|e| EdgeId::new(e.clone())).collect())
                .collect(),
        );
        partitions.insert(VertexId::new(v.clone()), partition);
    }
    Ok(HgDocument {
        name: doc.name,
        hypergraph,
        citation: doc.citation,
        partitions,
    })
}

/// Canonical text form.
pub fn serialize_hg(doc: &HgDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("hypergraph {} {{\n", doc.name));
    let verts: Vec<&str> = doc
        .hypergraph
        .vertices()
        .iter()
        .map(VertexId::as_str)
        .collect();
    out.push_str(&format!("  vertices: {};\n", verts.join(" ")));
    for (e, ends) in doc.hypergraph.edges() {
        let s: Vec<&str> = ends.source.iter().map(VertexId::as_str).collect();
        let r: Vec<&str> = ends.range.iter().map(VertexId::as_str).collect();
        out.push_str(&format!(
            "  edge {e}: {{{}}} -> {{{}}};\n",
            s.join(" "),
            r.join(" ")
        ));
    }
    for (v, partition) in &doc.partitions {
        let blocks: Vec<String> = partition
            .0
            .iter()
            .map(|b| b.iter().map(EdgeId::as_str).collect::<Vec<_>>().join(" "))
            .collect();
        out.push_str(&format!("  partition {v}: {};\n", blocks.join(" | ")));
    }
    if let Some(citation) = &doc.citation {
        out.push_str(&format!("  citation: \"{citation}\";\n"));
    }
    out.push_str("}\n");
    out
}

/// The JSON mirror of the document.
pub fn serialize_hg_json(doc: &HgDocument) -> String {
    let json = JsonDocument {
        name: doc.name.clone(),
        vertices: doc
            .hypergraph
            .vertices()
            .iter()
            .map(|v| v.0.clone())
            .collect(),
        edges: doc
            .hypergraph
            .edges()
            .iter()
            .map(|(e, ends)| {
                (
                    e.0.clone(),
                    JsonEdge {
                        source: ends.source.iter().map(|v| v.0.clone()).collect(),
                        range: ends.range.iter().map(|v| v.0.clone()).collect(),
                    },
                )
            })
            .collect(),
        citation: doc.citation.clone(),
        partitions: doc
            .partitions
            .iter()
            .map(|(v, p)| {
                (
                    v.0.clone(),
                    p.0.iter()
                        .map(|b| b.iter().map(|e| e.0.clone()).collect())
                        .collect(),
                )
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("document serialization")
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _input: &'a str,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            chars: input.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            _input: input,
        }
    }

    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError {
            line: self.line,
            col: self.col,
            expected: expected.to_owned(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace, commas, and `//` comments.
    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() || c == ',' => {
                    self.bump();
                }
                Some('/') if self.chars.get(self.pos + 1) == Some(&'/') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn expect_char(&mut self, c: char) -> Result<(), SyntaxError> {
        self.skip_trivia();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn is_token_char(c: char) -> bool {
        !c.is_whitespace() && !crate::hypergraph::RESERVED_ID_CHARS.contains(&c)
    }

    fn token(&mut self, expected: &str) -> Result<String, SyntaxError> {
        self.skip_trivia();
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if Self::is_token_char(c) {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if word.is_empty() {
            Err(self.error(expected))
        } else {
            Ok(word)
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        let token = self.token(&format!("keyword '{kw}'"))?;
        if token == kw {
            Ok(())
        } else {
            Err(self.error(&format!("keyword '{kw}', found '{token}'")))
        }
    }

    /// Tokens until one of the stop characters (exclusive).
    fn token_list(&mut self, stops: &[char]) -> Result<Vec<String>, SyntaxError> {
        let mut tokens = Vec::new();
        loop {
            self.skip_trivia();
            match self.peek() {
                Some(c) if stops.contains(&c) => return Ok(tokens),
                Some(c) if Self::is_token_char(c) => tokens.push(self.token("identifier")?),
                _ => return Err(self.error("identifier or list terminator")),
            }
        }
    }

    fn quoted_or_token(&mut self) -> Result<String, SyntaxError> {
        self.skip_trivia();
        if self.peek() == Some('"') {
            self.bump();
            let mut text = String::new();
            loop {
                match self.bump() {
                    Some('"') => return Ok(text),
                    Some(c) => text.push(c),
                    None => return Err(self.error("closing '\"'")),
                }
            }
        } else {
            self.token("citation text")
        }
    }

    fn brace_set(&mut self) -> Result<Vec<String>, SyntaxError> {
        self.expect_char('{')?;
        let items = self.token_list(&['}'])?;
        self.expect_char('}')?;
        Ok(items)
    }

    fn arrow(&mut self) -> Result<(), SyntaxError> {
        self.skip_trivia();
        if self.peek() == Some('-') && self.chars.get(self.pos + 1) == Some(&'>') {
            self.bump();
            self.bump();
            Ok(())
        } else {
            Err(self.error("'->'"))
        }
    }

    fn document(&mut self) -> Result<HgDocument, ParseError> {
        self.keyword("hypergraph")?;
        let name = self.token("hypergraph name")?;
        self.expect_char('{')?;
        let mut builder = Hypergraph::builder();
        let mut citation = None;
        let mut raw_partitions: Vec<(String, Vec<Vec<String>>)> = Vec::new();
        loop {
            self.skip_trivia();
            if self.peek() == Some('}') {
                self.bump();
                break;
            }
            let stmt = self.token("'vertices', 'edge', 'partition', 'citation', or '}'")?;
            match stmt.as_str() {
                "vertices" => {
                    self.expect_char(':')?;
                    for v in self.token_list(&[';'])? {
                        builder = builder.vertex(&v);
                    }
                    self.expect_char(';')?;
                }
                "edge" => {
                    let id = self.token("edge identifier")?;
                    self.expect_char(':')?;
                    let source = self.brace_set()?;
                    self.arrow()?;
                    let range = self.brace_set()?;
                    self.expect_char(';')?;
                    builder = builder.edge(
                        &id,
                        source.iter().map(String::as_str),
                        range.iter().map(String::as_str),
                    );
                }
                "partition" => {
                    let vertex = self.token("vertex identifier")?;
                    self.expect_char(':')?;
                    let mut blocks = vec![self.token_list(&['|', ';'])?];
                    loop {
                        self.skip_trivia();
                        if self.peek() == Some('|') {
                            self.bump();
                            blocks.push(self.token_list(&['|', ';'])?);
                        } else {
                            break;
                        }
                    }
                    self.expect_char(';')?;
                    raw_partitions.push((vertex, blocks));
                }
                "citation" => {
                    self.expect_char(':')?;
                    citation = Some(self.quoted_or_token()?);
                    self.expect_char(';')?;
                }
                other => {
                    return Err(self
                        .error(&format!(
                            "'vertices', 'edge', 'partition', or 'citation', found '{other}'"
                        ))
                        .into())
                }
            }
        }
        let hypergraph = builder.build()?;
        let mut partitions = BTreeMap::new();
        for (vertex, blocks) in raw_partitions {
            if blocks.iter().any(Vec::is_empty) {
                return Err(ParseError::Partition(vertex, "empty block".into()));
            }
            let partition = Partition(
                blocks
                    .into_iter()
                    .map(|b| b.into_iter().map(EdgeId::new).collect())
                    .collect(),
            );
            partitions.insert(VertexId::new(vertex), partition);
        }
        Ok(HgDocument {
            name,
            hypergraph,
            citation,
            partitions,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::ValidationError;

    #[test]
    fn parses_toeplitz() {
        let doc = parse_hg("hypergraph T { vertices: v w; edge e: {w} -> {v w}; }").unwrap();
        assert_eq!(doc.name, "T");
        assert_eq!(doc.hypergraph.vertex_count(), 2);
        let ends = doc.hypergraph.edge(&EdgeId::new("e")).unwrap();
        assert_eq!(ends.source.len(), 1);
        assert_eq!(ends.range.len(), 2);
    }

    #[test]
    fn commas_and_comments_are_trivia() {
        let doc = parse_hg(
            "hypergraph X { // a comment\n  vertices: a, b;\n  edge e: {a, b} -> {a}; // tail\n}",
        )
        .unwrap();
        assert_eq!(doc.hypergraph.vertex_count(), 2);
    }

    #[test]
    fn empty_source_is_a_validation_error() {
        let err = parse_hg("hypergraph X { vertices: v; edge e: {} -> {v}; }").unwrap_err();
        match err {
            ParseError::Validation(ValidationError::EmptySource(e)) => {
                assert_eq!(e, EdgeId::new("e"))
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn stray_token_reports_position() {
        let err = parse_hg("hypergraph X { vertices: v; edge e {a} -> {v}; }").unwrap_err();
        match err {
            ParseError::Syntax(s) => {
                assert_eq!(s.line, 1);
                assert!(s.col > 1);
                assert!(s.expected.contains(':'));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_canonical() {
        let doc = parse_hg(
            "hypergraph M {\n vertices: b a;\n edge f: {b a} -> {a};\n edge e: {a} -> {b};\n partition a: f | e;\n citation: \"two shapes\";\n}",
        )
        .unwrap();
        let text = serialize_hg(&doc);
        let doc2 = parse_hg(&text).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(serialize_hg(&doc2), text);
    }

    #[test]
    fn json_mirror_round_trips() {
        let doc = parse_hg("hypergraph T { vertices: v w; edge e: {w} -> {v w}; }").unwrap();
        let json = serialize_hg_json(&doc);
        let doc2 = parse_hg(&json).unwrap();
        assert_eq!(doc, doc2);
    }
}
