//! Minimal Graphviz support: undirected `graph` output with quoted labels,
//! and a parser for the same subset.

use std::collections::HashMap;
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotNode {
    pub id: String,
    pub label: Option<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotGraph {
    pub name: String,
    pub nodes: Vec<DotNode>,
    /// Edges as indices into `nodes`.
    pub edges: Vec<(usize, usize)>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn is_bare_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn id_token(s: &str) -> String {
    if is_bare_id(s) {
        s.to_string()
    } else {
        quote(s)
    }
}

/// Writes `graph name { id [label="..."]; a -- b; }`.
pub fn write_graph(name: &str, nodes: &[(String, String)], edges: &[(String, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", id_token(name));
    for (id, label) in nodes {
        let _ = writeln!(out, "  {} [label={}];", id_token(id), quote(label));
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  {} -- {};", id_token(a), id_token(b));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Quoted(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Edge,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, DotError> {
    let mut toks = Vec::new();
    let mut line = 1;
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\n' => line += 1,
            c if c.is_whitespace() => {}
            '#' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            '/' if chars.peek() == Some(&'/') => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            '{' => toks.push((Tok::LBrace, line)),
            '}' => toks.push((Tok::RBrace, line)),
            '[' => toks.push((Tok::LBracket, line)),
            ']' => toks.push((Tok::RBracket, line)),
            '=' => toks.push((Tok::Eq, line)),
            ';' => toks.push((Tok::Semi, line)),
            ',' => toks.push((Tok::Comma, line)),
            '-' if chars.peek() == Some(&'-') => {
                chars.next();
                toks.push((Tok::Edge, line));
            }
            '-' if chars.peek() == Some(&'>') => {
                return Err(DotError {
                    line,
                    msg: "directed edges are not supported".into(),
                })
            }
            '"' => {
                let start = line;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => {
                            if let Some(e) = chars.next() {
                                s.push(e);
                            }
                        }
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => {
                            return Err(DotError {
                                line: start,
                                msg: "unterminated string".into(),
                            })
                        }
                    }
                }
                toks.push((Tok::Quoted(s), start));
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let mut s = String::from(c);
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '.' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Word(s), line));
            }
            other => {
                return Err(DotError {
                    line,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(toks)
}

/// Parses an undirected DOT graph with node statements, `label` attributes
/// and (possibly chained) `--` edges.
pub fn parse_graph(src: &str) -> Result<DotGraph, DotError> {
    let toks = tokenize(src)?;
    let mut pos = 0;
    let last_line = toks.last().map_or(1, |t| t.1);
    let err = |line: usize, msg: &str| DotError {
        line,
        msg: msg.to_string(),
    };

    let mut g = DotGraph::default();
    match toks.get(pos) {
        Some((Tok::Word(w), _)) if w == "strict" => pos += 1,
        _ => {}
    }
    match toks.get(pos) {
        Some((Tok::Word(w), _)) if w == "graph" => pos += 1,
        Some((Tok::Word(w), l)) if w == "digraph" => {
            return Err(err(*l, "digraph is not supported; use graph"))
        }
        Some((_, l)) => return Err(err(*l, "expected 'graph'")),
        None => return Err(err(1, "empty input")),
    }
    if let Some((Tok::Word(name) | Tok::Quoted(name), _)) = toks.get(pos) {
        g.name = name.clone();
        pos += 1;
    }
    match toks.get(pos) {
        Some((Tok::LBrace, _)) => pos += 1,
        Some((_, l)) => return Err(err(*l, "expected '{'")),
        None => return Err(err(last_line, "expected '{'")),
    }

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut node_index = |g: &mut DotGraph, id: &str, line: usize| -> usize {
        *index.entry(id.to_string()).or_insert_with(|| {
            g.nodes.push(DotNode {
                id: id.to_string(),
                label: None,
                line,
            });
            g.nodes.len() - 1
        })
    };

    loop {
        let (tok, line) = match toks.get(pos) {
            Some(t) => t.clone(),
            None => return Err(err(last_line, "missing '}'")),
        };
        match tok {
            Tok::RBrace => {
                pos += 1;
                break;
            }
            Tok::Semi => {
                pos += 1;
            }
            Tok::Word(ref w)
                if (w == "node" || w == "edge" || w == "graph")
                    && matches!(toks.get(pos + 1), Some((Tok::LBracket, _))) =>
            {
                // default attribute statements are accepted and ignored
                pos += 1;
                parse_attrs(&toks, &mut pos)?;
            }
            Tok::Word(id) | Tok::Quoted(id) => {
                pos += 1;
                let first = node_index(&mut g, &id, line);
                let mut chain = vec![first];
                while let Some((Tok::Edge, eline)) = toks.get(pos) {
                    pos += 1;
                    match toks.get(pos) {
                        Some((Tok::Word(next) | Tok::Quoted(next), l)) => {
                            chain.push(node_index(&mut g, next, *l));
                            pos += 1;
                        }
                        _ => return Err(err(*eline, "edge without target")),
                    }
                }
                let attrs = if let Some((Tok::LBracket, _)) = toks.get(pos) {
                    parse_attrs(&toks, &mut pos)?
                } else {
                    Vec::new()
                };
                if chain.len() == 1 {
                    let node = &mut g.nodes[first];
                    node.line = line;
                    for (k, v) in attrs {
                        if k == "label" {
                            node.label = Some(v);
                        }
                    }
                } else {
                    for w in chain.windows(2) {
                        g.edges.push((w[0], w[1]));
                    }
                }
            }
            _ => return Err(err(line, "unexpected token")),
        }
    }
    if let Some((_, l)) = toks.get(pos) {
        return Err(err(*l, "trailing input after '}'"));
    }
    Ok(g)
}

fn parse_attrs(toks: &[(Tok, usize)], pos: &mut usize) -> Result<Vec<(String, String)>, DotError> {
    let open_line = toks[*pos].1;
    *pos += 1;
    let mut out = Vec::new();
    loop {
        match toks.get(*pos) {
            Some((Tok::RBracket, _)) => {
                *pos += 1;
                return Ok(out);
            }
            Some((Tok::Comma | Tok::Semi, _)) => *pos += 1,
            Some((Tok::Word(k), l)) => {
                let key = k.clone();
                let line = *l;
                *pos += 1;
                if !matches!(toks.get(*pos), Some((Tok::Eq, _))) {
                    return Err(DotError {
                        line,
                        msg: format!("attribute {key} has no value"),
                    });
                }
                *pos += 1;
                match toks.get(*pos) {
                    Some((Tok::Word(v) | Tok::Quoted(v), _)) => {
                        out.push((key, v.clone()));
                        *pos += 1;
                    }
                    _ => {
                        return Err(DotError {
                            line,
                            msg: format!("attribute {key} has no value"),
                        })
                    }
                }
            }
            Some((_, l)) => {
                return Err(DotError {
                    line: *l,
                    msg: "malformed attribute list".into(),
                })
            }
            None => {
                return Err(DotError {
                    line: open_line,
                    msg: "unterminated attribute list".into(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let nodes = vec![
            ("0".to_string(), "-2 (1)".to_string()),
            ("1".to_string(), "say \"hi\"".to_string()),
        ];
        let edges = vec![("0".to_string(), "1".to_string())];
        let text = write_graph("T", &nodes, &edges);
        let g = parse_graph(&text).unwrap();
        assert_eq!(g.name, "T");
        assert_eq!(g.nodes[1].label.as_deref(), Some("say \"hi\""));
        assert_eq!(g.edges, vec![(0, 1)]);
    }

    #[test]
    fn chained_edges_and_comments() {
        let src = "graph {\n // c\n a -- b -- c;\n a [label=\"x\"]\n}";
        let g = parse_graph(src).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(g.nodes[0].label.as_deref(), Some("x"));
    }

    #[test]
    fn rejects_digraph() {
        assert_eq!(parse_graph("digraph { a -> b }").unwrap_err().line, 1);
        assert!(parse_graph("graph {\n a -> b\n}").is_err());
    }
}
