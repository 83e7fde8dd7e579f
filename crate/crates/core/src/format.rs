//! Text format for hypergraph instances.
//!
//! The grammar: a document is a comma-separated list of atoms terminated by a
//! final `.`, where each atom is `name(v1,...,vn)`. A `%` starts a line
//! comment and whitespace is insignificant. Atoms may also appear bare as
//! `(v1,...,vn)`, in which case an edge name is generated.

use crate::hypergraph::Hypergraph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing final '.' terminator")]
    MissingTerminator,
    #[error("duplicate edge name '{0}'")]
    DuplicateEdgeName(String),
    #[error("edge '{0}' has no vertices")]
    EmptyEdge(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Skip whitespace and `%` line comments.
    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'%') => {
                    while let Some(c) = self.bump() {
                        if c == b'\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    /// A name token: a run of bytes that are not delimiters, whitespace or
    /// comment starts.
    fn take_name(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() || matches!(c, b'(' | b')' | b',' | b'.' | b'%') {
                break;
            }
            self.bump();
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}

pub fn parse_hyperbench(text: &str) -> Result<Hypergraph, ParseError> {
    let mut sc = Scanner::new(text);
    let mut edges: Vec<(String, Vec<String>)> = Vec::new();
    let mut names: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut auto = 0usize;

    sc.skip_trivia();
    if sc.peek().is_none() {
        return Err(ParseError::MissingTerminator);
    }

    loop {
        sc.skip_trivia();
        match sc.peek() {
            Some(b'.') => {
                sc.bump();
                break;
            }
            None => return Err(ParseError::MissingTerminator),
            _ => {}
        }

        // Atom: optional name, then the vertex list.
        let name = sc.take_name();
        sc.skip_trivia();
        if sc.peek() != Some(b'(') {
            return Err(sc.error("expected '(' to open a vertex list"));
        }
        sc.bump();
        let name = if name.is_empty() {
            loop {
                let candidate = format!("_e{auto}");
                auto += 1;
                if !names.contains(&candidate) {
                    break candidate;
                }
            }
        } else {
            name
        };
        if !names.insert(name.clone()) {
            return Err(ParseError::DuplicateEdgeName(name));
        }

        let mut verts: Vec<String> = Vec::new();
        loop {
            sc.skip_trivia();
            match sc.peek() {
                Some(b')') => {
                    sc.bump();
                    break;
                }
                None => return Err(sc.error("unterminated vertex list")),
                _ => {}
            }
            let v = sc.take_name();
            if v.is_empty() {
                return Err(sc.error("expected a vertex name"));
            }
            if !verts.contains(&v) {
                verts.push(v);
            }
            sc.skip_trivia();
            match sc.peek() {
                Some(b',') => {
                    sc.bump();
                }
                Some(b')') => {}
                None => return Err(sc.error("unterminated vertex list")),
                _ => return Err(sc.error("expected ',' or ')' in vertex list")),
            }
        }
        if verts.is_empty() {
            return Err(ParseError::EmptyEdge(name));
        }
        edges.push((name, verts));

        sc.skip_trivia();
        match sc.peek() {
            Some(b',') => {
                sc.bump();
            }
            Some(b'.') => {
                sc.bump();
                break;
            }
            None => return Err(ParseError::MissingTerminator),
            _ => return Err(sc.error("expected ',' or '.' after atom")),
        }
    }

    sc.skip_trivia();
    if sc.peek().is_some() {
        return Err(sc.error("unexpected content after final '.'"));
    }

    Ok(Hypergraph::from_named_edges("", &edges))
}

/// Emit the same grammar [`parse_hyperbench`] accepts: one atom per line,
/// comma separators, final `.`. Reparsing the output reconstructs the same
/// hypergraph, with identical vertex and edge ids.
pub fn serialize_hyperbench(h: &Hypergraph) -> String {
    if h.edge_count() == 0 {
        return ".\n".to_string();
    }
    let mut out = String::new();
    for e in 0..h.edge_count() {
        out.push_str(h.edge_name(e));
        out.push('(');
        for (i, v) in h.edge(e).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(h.vertex_name(v));
        }
        out.push(')');
        out.push_str(if e + 1 == h.edge_count() { ".\n" } else { ",\n" });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom() {
        let h = parse_hyperbench("e1(a,b).").unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_name(0), "e1");
    }

    #[test]
    fn triangle_multiline() {
        let h = parse_hyperbench("e1(a,b),\ne2(b,c),\ne3(c,a).").unwrap();
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.vertex_name(2), "c");
    }

    #[test]
    fn missing_terminator() {
        assert_eq!(parse_hyperbench("e1(a,b)"), Err(ParseError::MissingTerminator));
        assert_eq!(parse_hyperbench(""), Err(ParseError::MissingTerminator));
        assert_eq!(parse_hyperbench("  % only a comment\n"), Err(ParseError::MissingTerminator));
    }

    #[test]
    fn duplicate_edge_name() {
        assert_eq!(
            parse_hyperbench("e1(a,b), e1(b,c)."),
            Err(ParseError::DuplicateEdgeName("e1".into()))
        );
    }

    #[test]
    fn empty_edge() {
        assert_eq!(parse_hyperbench("e1()."), Err(ParseError::EmptyEdge("e1".into())));
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse_hyperbench("e1(a,b),\n)(.") {
            Err(ParseError::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_whitespace() {
        let h = parse_hyperbench("% header\n e1 ( a , b ) , % mid\n e2(b,c) .").unwrap();
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn bare_atoms_get_generated_names() {
        let h = parse_hyperbench("(a,b),(b,c).").unwrap();
        assert_eq!(h.edge_name(0), "_e0");
        assert_eq!(h.edge_name(1), "_e1");
    }

    #[test]
    fn generated_names_avoid_collisions() {
        let h = parse_hyperbench("_e0(a,b),(b,c).").unwrap();
        assert_eq!(h.edge_name(0), "_e0");
        assert_eq!(h.edge_name(1), "_e1");
    }

    #[test]
    fn duplicate_vertices_in_atom_collapse() {
        let h = parse_hyperbench("e1(a,a,b).").unwrap();
        assert_eq!(h.edge(0).len(), 2);
    }

    #[test]
    fn round_trip_preserves_ids() {
        let text = "r0(x,y,z),\nr1(y,w),\nr2(w,x).";
        let h = parse_hyperbench(text).unwrap();
        let h2 = parse_hyperbench(&serialize_hyperbench(&h)).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn trailing_garbage_rejected() {
        assert!(matches!(
            parse_hyperbench("e1(a,b). e2(c,d)."),
            Err(ParseError::Syntax { .. })
        ));
    }
}
