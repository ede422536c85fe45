//! Indentation-grammar parser: plan text to a generic key/value tree.
//!
//! The grammar is deliberately small and deterministic:
//!
//! - indentation is spaces only, stepping by exactly two per level;
//! - a map entry is `key: value`, `key:` (nested block follows), or a
//!   bare `key` followed by a nested block (used by top-level sections);
//! - a list entry starts with `- `; a list item whose text looks like
//!   `key: ...` opens a map item whose further fields sit two columns in;
//! - `key: |` starts a block scalar of the following deeper lines;
//! - scalars are single lines, interpreted by the schema layer (numbers,
//!   booleans, inline `{x: .., y: .., z: ..}` maps, inline `[a, b]`
//!   lists, or plain text).

use super::{Loc, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spanned<T> {
    pub value: T,
    pub loc: Loc,
}

impl<T> Spanned<T> {
    pub fn new(value: T, loc: Loc) -> Self {
        Self { value, loc }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Scalar(Spanned<String>),
    Map(Vec<(Spanned<String>, Node)>),
    List(Vec<Node>),
}

impl Node {
    pub fn loc(&self) -> Loc {
        match self {
            Node::Scalar(s) => s.loc,
            Node::Map(entries) => entries
                .first()
                .map(|(k, _)| k.loc)
                .unwrap_or(Loc { line: 1, col: 1 }),
            Node::List(items) => items
                .first()
                .map(Node::loc)
                .unwrap_or(Loc { line: 1, col: 1 }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Line<'a> {
    indent: usize,
    text: &'a str,
    line_no: usize,
}

impl Line<'_> {
    fn loc(&self) -> Loc {
        Loc { line: self.line_no, col: self.indent + 1 }
    }
}

pub(crate) fn parse_document(text: &str) -> Result<Node, ParseError> {
    let lines = lex_lines(text)?;
    if lines.is_empty() {
        return Err(ParseError::syntax(Loc { line: 1, col: 1 }, "empty plan document"));
    }
    let mut cursor = Cursor { lines, i: 0 };
    let doc = cursor.parse_value(0)?;
    if let Some(extra) = cursor.peek() {
        return Err(ParseError::syntax(extra.loc(), "unexpected content after document"));
    }
    match doc {
        Node::Map(_) => Ok(doc),
        other => Err(ParseError::syntax(
            other.loc(),
            "a plan document must consist of top-level sections",
        )),
    }
}

fn lex_lines(text: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut indent = 0;
        for ch in raw.chars() {
            match ch {
                ' ' => indent += 1,
                '\t' => {
                    return Err(ParseError::syntax(
                        Loc { line: line_no, col: indent + 1 },
                        "tabs are not allowed in indentation",
                    ))
                }
                _ => break,
            }
        }
        out.push(Line { indent, text: raw[indent..].trim_end(), line_no });
    }
    Ok(out)
}

/// `key` or `key:` or `key: rest` where key is an identifier.
fn split_key(text: &str) -> Option<(&str, Option<&str>)> {
    let mut chars = text.char_indices();
    match chars.next() {
        Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return None,
    }
    let mut end = text.len();
    for (i, c) in chars {
        if c.is_ascii_alphanumeric() || c == '_' {
            continue;
        }
        end = i;
        break;
    }
    let key = &text[..end];
    let rest = &text[end..];
    if rest.is_empty() {
        Some((key, None))
    } else if let Some(after) = rest.strip_prefix(':') {
        let after = after.trim();
        if after.is_empty() {
            Some((key, None))
        } else {
            Some((key, Some(after)))
        }
    } else {
        None
    }
}

fn has_colon(text: &str) -> bool {
    match split_key(text) {
        Some((key, _)) => text[key.len()..].starts_with(':'),
        None => false,
    }
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    i: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<Line<'a>> {
        self.lines.get(self.i).copied()
    }

    fn bump(&mut self) -> Line<'a> {
        let line = self.lines[self.i];
        self.i += 1;
        line
    }

    /// Parse the value block whose first line sits at `indent`.
    fn parse_value(&mut self, indent: usize) -> Result<Node, ParseError> {
        let first = self.peek().expect("parse_value called with a current line");
        debug_assert_eq!(first.indent, indent);
        if first.text == "-" || first.text.starts_with("- ") {
            self.parse_list(indent)
        } else if self.line_opens_map(first, indent) {
            self.parse_map(indent)
        } else {
            let line = self.bump();
            if let Some(next) = self.peek() {
                if next.indent > indent {
                    return Err(ParseError::syntax(
                        next.loc(),
                        "unexpected indentation under a scalar value",
                    ));
                }
                if next.indent == indent {
                    return Err(ParseError::syntax(
                        next.loc(),
                        "expected a single scalar value, `key: value`, or `- ` list items",
                    ));
                }
            }
            Ok(Node::Scalar(Spanned::new(line.text.to_string(), line.loc())))
        }
    }

    /// A line opens a map when it is `key: ...`, or a bare `key` whose
    /// next line is indented deeper (top-level section style).
    fn line_opens_map(&self, line: Line<'a>, indent: usize) -> bool {
        match split_key(line.text) {
            Some((_, Some(_))) => true,
            Some((_, None)) => {
                if has_colon(line.text) {
                    true
                } else {
                    // Bare identifier: a section header only if followed
                    // by a deeper block; otherwise it is a scalar value.
                    self.lines
                        .get(self.i + 1)
                        .map(|next| next.indent > indent)
                        .unwrap_or(false)
                }
            }
            None => false,
        }
    }

    fn parse_map(&mut self, indent: usize) -> Result<Node, ParseError> {
        let mut entries: Vec<(Spanned<String>, Node)> = Vec::new();
        while let Some(line) = self.peek() {
            if line.indent < indent {
                break;
            }
            if line.indent > indent {
                return Err(ParseError::syntax(line.loc(), "unexpected indentation"));
            }
            let Some((key, inline)) = split_key(line.text) else {
                return Err(ParseError::syntax(
                    line.loc(),
                    format!("expected `key: value`, got `{}`", line.text),
                ));
            };
            if entries.iter().any(|(k, _)| k.value == key) {
                return Err(ParseError::syntax(line.loc(), format!("duplicate key `{key}`")));
            }
            let key_span = Spanned::new(key.to_string(), line.loc());
            self.bump();
            let value = match inline {
                Some("|") => self.parse_block_scalar(indent, line.loc())?,
                Some(text) => Node::Scalar(Spanned::new(
                    text.to_string(),
                    Loc { line: line.line_no, col: line.indent + key.len() + 3 },
                )),
                None => {
                    let Some(next) = self.peek() else {
                        return Err(ParseError::syntax(
                            line.loc(),
                            format!("key `{key}` has no value"),
                        ));
                    };
                    if next.indent != indent + 2 {
                        return Err(ParseError::syntax(
                            next.loc(),
                            format!(
                                "content under `{key}` must be indented by exactly two spaces"
                            ),
                        ));
                    }
                    self.parse_value(indent + 2)?
                }
            };
            entries.push((key_span, value));
        }
        Ok(Node::Map(entries))
    }

    /// Block scalar: all following lines strictly deeper than the key,
    /// with `indent + 2` stripped, joined by newlines.
    fn parse_block_scalar(&mut self, indent: usize, key_loc: Loc) -> Result<Node, ParseError> {
        let base = indent + 2;
        let mut parts: Vec<String> = Vec::new();
        while let Some(line) = self.peek() {
            if line.indent <= indent {
                break;
            }
            if line.indent < base {
                return Err(ParseError::syntax(
                    line.loc(),
                    "block scalar lines must be indented by at least two spaces",
                ));
            }
            let extra = " ".repeat(line.indent - base);
            parts.push(format!("{extra}{}", line.text));
            self.bump();
        }
        if parts.is_empty() {
            return Err(ParseError::syntax(key_loc, "block scalar has no content"));
        }
        Ok(Node::Scalar(Spanned::new(parts.join("\n"), key_loc)))
    }

    fn parse_list(&mut self, indent: usize) -> Result<Node, ParseError> {
        let mut items = Vec::new();
        while let Some(line) = self.peek() {
            if line.indent < indent {
                break;
            }
            if line.indent > indent {
                return Err(ParseError::syntax(line.loc(), "unexpected indentation"));
            }
            if line.text != "-" && !line.text.starts_with("- ") {
                return Err(ParseError::syntax(
                    line.loc(),
                    "expected a `- ` list item",
                ));
            }
            items.push(self.parse_list_item(indent)?);
        }
        Ok(Node::List(items))
    }

    fn parse_list_item(&mut self, indent: usize) -> Result<Node, ParseError> {
        let line = self.bump();
        let head = line.text.strip_prefix('-').unwrap().trim_start();
        let head_loc = Loc { line: line.line_no, col: line.indent + 3 };
        if head.is_empty() {
            // `-` alone: the item's value is the following deeper block.
            let Some(next) = self.peek() else {
                return Err(ParseError::syntax(line.loc(), "empty list item"));
            };
            if next.indent != indent + 2 {
                return Err(ParseError::syntax(next.loc(), "unexpected indentation"));
            }
            return self.parse_value(indent + 2);
        }
        match split_key(head) {
            Some((key, inline)) if has_colon(head) => {
                // Map item: first entry on the dash line, further entries
                // two columns in.
                let item_indent = indent + 2;
                let mut entries: Vec<(Spanned<String>, Node)> = Vec::new();
                let key_span = Spanned::new(key.to_string(), head_loc);
                let value = match inline {
                    Some("|") => self.parse_block_scalar(item_indent, head_loc)?,
                    Some(text) => Node::Scalar(Spanned::new(text.to_string(), head_loc)),
                    None => {
                        let Some(next) = self.peek() else {
                            return Err(ParseError::syntax(
                                head_loc,
                                format!("key `{key}` has no value"),
                            ));
                        };
                        if next.indent != item_indent + 2 {
                            return Err(ParseError::syntax(
                                next.loc(),
                                format!(
                                    "content under `{key}` must be indented by exactly two spaces"
                                ),
                            ));
                        }
                        self.parse_value(item_indent + 2)?
                    }
                };
                entries.push((key_span, value));
                // Continuation fields at the item's indent.
                if let Some(next) = self.peek() {
                    if next.indent == item_indent {
                        let Node::Map(rest) = self.parse_map(item_indent)? else {
                            unreachable!("parse_map returns Map");
                        };
                        for (k, v) in rest {
                            if entries.iter().any(|(e, _)| e.value == k.value) {
                                return Err(ParseError::syntax(
                                    k.loc,
                                    format!("duplicate key `{}`", k.value),
                                ));
                            }
                            entries.push((k, v));
                        }
                    } else if next.indent > item_indent {
                        return Err(ParseError::syntax(next.loc(), "unexpected indentation"));
                    }
                }
                Ok(Node::Map(entries))
            }
            _ => {
                // Scalar item.
                if let Some(next) = self.peek() {
                    if next.indent > indent {
                        return Err(ParseError::syntax(
                            next.loc(),
                            "a plain list item cannot have nested content",
                        ));
                    }
                }
                Ok(Node::Scalar(Spanned::new(head.to_string(), head_loc)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(node: &Node) -> &str {
        match node {
            Node::Scalar(s) => &s.value,
            other => panic!("expected scalar, got {other:?}"),
        }
    }

    fn map_get<'n>(node: &'n Node, key: &str) -> &'n Node {
        match node {
            Node::Map(entries) => {
                &entries
                    .iter()
                    .find(|(k, _)| k.value == key)
                    .unwrap_or_else(|| panic!("missing key {key}"))
                    .1
            }
            other => panic!("expected map, got {other:?}"),
        }
    }

    #[test]
    fn sections_and_scalars() {
        let doc = parse_document("plan_type\n  scene\n\nrecording_mode\n  vsg_only\n").unwrap();
        assert_eq!(scalar(map_get(&doc, "plan_type")), "scene");
        assert_eq!(scalar(map_get(&doc, "recording_mode")), "vsg_only");
    }

    #[test]
    fn nested_maps_and_lists() {
        let text = "objects\n  - name: crate_box\n    construction:\n      kind: procedural\n      size: {x: 1, y: 1, z: 1}\n    fixed: false\n  - name: floor\n    fixed: true\n";
        let doc = parse_document(text).unwrap();
        let Node::List(items) = map_get(&doc, "objects") else {
            panic!("objects must be a list");
        };
        assert_eq!(items.len(), 2);
        assert_eq!(scalar(map_get(&items[0], "name")), "crate_box");
        let construction = map_get(&items[0], "construction");
        assert_eq!(scalar(map_get(construction, "kind")), "procedural");
        assert_eq!(scalar(map_get(construction, "size")), "{x: 1, y: 1, z: 1}");
        assert_eq!(scalar(map_get(&items[1], "fixed")), "true");
    }

    #[test]
    fn block_scalar_joins_lines() {
        let text = "implementation_steps\n  - description: |\n      build the scene\n      then review it\n    objects: [a]\n";
        let doc = parse_document(text).unwrap();
        let Node::List(items) = map_get(&doc, "implementation_steps") else {
            panic!();
        };
        assert_eq!(
            scalar(map_get(&items[0], "description")),
            "build the scene\nthen review it"
        );
    }

    #[test]
    fn rejects_tabs() {
        let err = parse_document("plan_type\n\tscene\n").unwrap_err();
        assert_eq!(err.loc.line, 2);
        assert!(err.to_string().contains("tab"));
    }

    #[test]
    fn rejects_odd_indentation() {
        let err = parse_document("simulation_parameters\n   time_step: 0.01\n").unwrap_err();
        assert_eq!(err.loc.line, 2);
    }

    #[test]
    fn rejects_duplicate_keys() {
        let err =
            parse_document("simulation_parameters\n  time_step: 1\n  time_step: 2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate key"));
        assert_eq!(err.loc.line, 3);
    }

    #[test]
    fn error_carries_line_and_column() {
        let err = parse_document("objects\n  - name: a\n      stray: 1\n").unwrap_err();
        assert_eq!(err.loc.line, 3);
        assert_eq!(err.loc.col, 7);
    }
}
