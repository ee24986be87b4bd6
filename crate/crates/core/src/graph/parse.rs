//! Text and JSON graph formats.
//!
//! Text statements are `vertex <id>` and `edge <id>: <src> -> <dst>`,
//! separated by newlines or `;`. A `#` starts a comment.

use serde::{Deserialize, Serialize};

use super::{valid_id, DirectedMultigraph};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Ident(&'a str),
    Colon,
    Arrow,
}

struct Lexed<'a> {
    token: Token<'a>,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, col, message: message.into() }
}

/// Splits one statement into tokens; columns are 1-based and refer to the
/// full line.
fn lex(text: &str, offset: usize, line: usize) -> Result<Vec<Lexed<'_>>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b':' {
            out.push(Lexed { token: Token::Colon, col: offset + i + 1 });
            i += 1;
        } else if c == b'-' && bytes.get(i + 1) == Some(&b'>') {
            out.push(Lexed { token: Token::Arrow, col: offset + i + 1 });
            i += 2;
        } else if c.is_ascii_alphanumeric() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Lexed { token: Token::Ident(&text[start..i]), col: offset + start + 1 });
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(syntax(line, offset + i + 1, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

pub fn parse_graph_text(text: &str) -> Result<DirectedMultigraph> {
    let mut g = DirectedMultigraph::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in content.split(';') {
            let tokens = lex(stmt, offset, line)?;
            let end_col = offset + stmt.trim_end().len() + 1;
            offset += stmt.len() + 1;
            if tokens.is_empty() {
                continue;
            }
            statement(&mut g, &tokens, line, end_col)?;
        }
    }
    Ok(g)
}

fn statement(g: &mut DirectedMultigraph, tokens: &[Lexed<'_>], line: usize, end_col: usize) -> Result<()> {
    let expect_ident = |i: usize, what: &str| -> Result<&str> {
        match tokens.get(i) {
            Some(Lexed { token: Token::Ident(s), .. }) => Ok(s),
            Some(t) => Err(syntax(line, t.col, format!("expected {what}"))),
            None => Err(syntax(line, end_col, format!("expected {what}, found end of statement"))),
        }
    };
    let expect = |i: usize, want: Token<'_>, what: &str| -> Result<()> {
        match tokens.get(i) {
            Some(t) if t.token == want => Ok(()),
            Some(t) => Err(syntax(line, t.col, format!("expected `{what}`"))),
            None => Err(syntax(line, end_col, format!("expected `{what}`, found end of statement"))),
        }
    };
    let finish = |n: usize| -> Result<()> {
        match tokens.get(n) {
            Some(t) => Err(syntax(line, t.col, "unexpected token after statement")),
            None => Ok(()),
        }
    };
    match expect_ident(0, "`vertex` or `edge`")? {
        "vertex" => {
            let id = expect_ident(1, "vertex id")?;
            finish(2)?;
            g.add_vertex(id)?;
        }
        "edge" => {
            let id = expect_ident(1, "edge id")?;
            expect(2, Token::Colon, ":")?;
            let src = expect_ident(3, "source vertex")?;
            expect(4, Token::Arrow, "->")?;
            let dst = expect_ident(5, "range vertex")?;
            finish(6)?;
            g.add_edge(id, src, dst)?;
        }
        _ => return Err(syntax(line, tokens[0].col, "expected `vertex` or `edge`")),
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    id: String,
    src: String,
    dst: String,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<String>,
    edges: Vec<JsonEdge>,
}

pub fn parse_graph_json(text: &str) -> Result<DirectedMultigraph> {
    let raw: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let mut g = DirectedMultigraph::new();
    for v in &raw.vertices {
        if !valid_id(v) {
            return Err(Error::Json(format!("invalid vertex id `{v}`")));
        }
        g.add_vertex(v)?;
    }
    for e in &raw.edges {
        if !valid_id(&e.id) {
            return Err(Error::Json(format!("invalid edge id `{}`", e.id)));
        }
        g.add_edge(&e.id, &e.src, &e.dst)?;
    }
    Ok(g)
}

/// Accepts either format; JSON is recognized by a leading `{`.
pub fn parse_graph(text: &str) -> Result<DirectedMultigraph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_graph_text(text)
    }
}

pub fn to_text(g: &DirectedMultigraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in g.edges() {
        out.push_str(&format!("edge {}: {} -> {}\n", e.id, g.vertex_id(e.source), g.vertex_id(e.range)));
    }
    out
}

pub fn to_json(g: &DirectedMultigraph) -> serde_json::Value {
    let raw = JsonGraph {
        vertices: g.vertices().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| JsonEdge {
                id: e.id.clone(),
                src: g.vertex_id(e.source).to_string(),
                dst: g.vertex_id(e.range).to_string(),
            })
            .collect(),
    };
    serde_json::to_value(raw).expect("graph serializes")
}
