//! Call-site extraction from generated simulator scripts.
//!
//! The recognizer covers exactly the statement shapes the emitter
//! produces: imports, `from x import a, b`, assignments, and expression
//! statements built from constructor calls, function calls, and method
//! calls with positional and keyword arguments. Nested calls yield one
//! site each. It is a conservative recognizer, not a language front end:
//! anything outside the subset fails tokenization or surfaces later as
//! an unanalyzable finding, never as a silent pass.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}, col {col}: {message}")]
pub struct ExtractError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CallKind {
    Import,
    Construct,
    Call,
    MethodCall,
}

/// One syntactic call or import.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CallSite {
    pub line: usize,
    pub col: usize,
    pub kind: CallKind,
    /// Dotted name as written: `simapi.core.create_box`, or
    /// `receiver.method` for method calls.
    pub name: String,
    /// Receiver variable for method calls.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub receiver: Option<String>,
    pub arg_count: usize,
    pub keywords: Vec<String>,
}

/// Extraction result: sites in source order, plus the variable bindings
/// needed to resolve method receivers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Extraction {
    pub sites: Vec<CallSite>,
    /// `import a.b as c` aliases: alias -> full module path.
    pub aliases: Vec<(String, String)>,
    /// `var = <site index>` bindings, index into `sites`.
    pub assignments: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number,
    Str,
    Dot,
    Comma,
    Eq,
    LParen,
    RParen,
    Newline,
}

#[derive(Debug, Clone)]
struct Located {
    token: Token,
    line: usize,
    col: usize,
}

fn tokenize(source: &str) -> Result<Vec<Located>, ExtractError> {
    let mut out = Vec::new();
    for (line_idx, raw) in source.lines().enumerate() {
        let line = line_idx + 1;
        let mut chars = raw.char_indices().peekable();
        while let Some(&(byte, c)) = chars.peek() {
            let col = byte + 1;
            match c {
                ' ' | '\t' => {
                    chars.next();
                }
                '#' => break, // comment to end of line
                '(' => {
                    chars.next();
                    out.push(Located { token: Token::LParen, line, col });
                }
                ')' => {
                    chars.next();
                    out.push(Located { token: Token::RParen, line, col });
                }
                ',' => {
                    chars.next();
                    out.push(Located { token: Token::Comma, line, col });
                }
                '.' => {
                    chars.next();
                    out.push(Located { token: Token::Dot, line, col });
                }
                '=' => {
                    chars.next();
                    out.push(Located { token: Token::Eq, line, col });
                }
                '"' | '\'' => {
                    let quote = c;
                    chars.next();
                    let mut closed = false;
                    for (_, d) in chars.by_ref() {
                        if d == quote {
                            closed = true;
                            break;
                        }
                    }
                    if !closed {
                        return Err(ExtractError {
                            line,
                            col,
                            message: "unterminated string literal".into(),
                        });
                    }
                    out.push(Located { token: Token::Str, line, col });
                }
                c if c.is_ascii_digit() || c == '-' || c == '+' => {
                    chars.next();
                    while let Some(&(_, d)) = chars.peek() {
                        if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || d == '-'
                            || d == '+'
                        {
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(Located { token: Token::Number, line, col });
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = byte;
                    let mut end = byte + c.len_utf8();
                    chars.next();
                    while let Some(&(b, d)) = chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            end = b + d.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(Located {
                        token: Token::Ident(raw[start..end].to_string()),
                        line,
                        col,
                    });
                }
                other => {
                    return Err(ExtractError {
                        line,
                        col,
                        message: format!("unexpected character `{other}`"),
                    });
                }
            }
        }
        out.push(Located { token: Token::Newline, line, col: raw.len() + 1 });
    }
    Ok(out)
}

/// Extract every call site and import from a script in the emitted
/// subset.
pub fn extract_call_sites(source: &str) -> Result<Extraction, ExtractError> {
    let tokens = tokenize(source)?;
    let mut extraction = Extraction::default();
    let mut parser = Parser { tokens: &tokens, pos: 0 };
    while !parser.at_end() {
        if parser.eat_newline() {
            continue;
        }
        parser.statement(&mut extraction)?;
    }
    Ok(extraction)
}

struct Parser<'t> {
    tokens: &'t [Located],
    pos: usize,
}

impl<'t> Parser<'t> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Located> {
        self.tokens.get(self.pos)
    }

    fn peek_token(&self) -> Option<&'t Token> {
        self.peek().map(|l| &l.token)
    }

    fn bump(&mut self) -> &'t Located {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn eat_newline(&mut self) -> bool {
        if matches!(self.peek_token(), Some(Token::Newline)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, message: impl Into<String>) -> ExtractError {
        let (line, col) = self
            .peek()
            .map(|l| (l.line, l.col))
            .unwrap_or((self.tokens.last().map(|l| l.line).unwrap_or(1), 1));
        ExtractError { line, col, message: message.into() }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize), ExtractError> {
        match self.peek() {
            Some(Located { token: Token::Ident(name), line, col }) => {
                let out = (name.clone(), *line, *col);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    /// Dotted name starting at the current identifier.
    fn dotted_name(&mut self) -> Result<(String, usize, usize), ExtractError> {
        let (mut name, line, col) = self.expect_ident()?;
        while matches!(self.peek_token(), Some(Token::Dot)) {
            self.pos += 1;
            let (part, _, _) = self.expect_ident()?;
            name.push('.');
            name.push_str(&part);
        }
        Ok((name, line, col))
    }

    fn statement(&mut self, out: &mut Extraction) -> Result<(), ExtractError> {
        match self.peek_token() {
            Some(Token::Ident(word)) if word == "import" => self.import_statement(out),
            Some(Token::Ident(word)) if word == "from" => self.parse_from_import(out),
            Some(Token::Ident(_)) => self.expr_statement(out),
            _ => Err(self.error("expected a statement")),
        }
    }

    /// `import a.b [as c]`
    fn import_statement(&mut self, out: &mut Extraction) -> Result<(), ExtractError> {
        self.bump(); // import
        let (module, line, col) = self.dotted_name()?;
        out.sites.push(CallSite {
            line,
            col,
            kind: CallKind::Import,
            name: module.clone(),
            receiver: None,
            arg_count: 0,
            keywords: vec![],
        });
        if let Some(Token::Ident(word)) = self.peek_token() {
            if word == "as" {
                self.bump();
                let (alias, _, _) = self.expect_ident()?;
                out.aliases.push((alias, module));
            }
        }
        self.end_of_statement()
    }

    /// `from a.b import x, y`
    fn parse_from_import(&mut self, out: &mut Extraction) -> Result<(), ExtractError> {
        self.bump(); // from
        let (module, line, col) = self.dotted_name()?;
        match self.peek_token() {
            Some(Token::Ident(word)) if word == "import" => {
                self.bump();
            }
            _ => return Err(self.error("expected `import`")),
        }
        out.sites.push(CallSite {
            line,
            col,
            kind: CallKind::Import,
            name: module.clone(),
            receiver: None,
            arg_count: 0,
            keywords: vec![],
        });
        loop {
            let (name, name_line, name_col) = self.expect_ident()?;
            out.sites.push(CallSite {
                line: name_line,
                col: name_col,
                kind: CallKind::Import,
                name: format!("{module}.{name}"),
                receiver: None,
                arg_count: 0,
                keywords: vec![],
            });
            if matches!(self.peek_token(), Some(Token::Comma)) {
                self.bump();
            } else {
                break;
            }
        }
        self.end_of_statement()
    }

    /// `[var =] callable(args)` with arbitrary nesting inside args.
    fn expr_statement(&mut self, out: &mut Extraction) -> Result<(), ExtractError> {
        // Lookahead for `ident = ...` (assignment).
        let mut assigned: Option<String> = None;
        if let (Some(Token::Ident(name)), Some(Token::Eq)) = (
            self.peek_token(),
            self.tokens.get(self.pos + 1).map(|l| &l.token),
        ) {
            assigned = Some(name.clone());
            self.pos += 2;
        }
        let site_index = self.call_expression(out)?;
        if let (Some(var), Some(index)) = (assigned, site_index) {
            out.assignments.push((var, index));
        }
        self.end_of_statement()
    }

    /// A value expression: a call chain, literal, or bare name. Returns
    /// the site index when the expression's outermost form is a call.
    fn call_expression(&mut self, out: &mut Extraction) -> Result<Option<usize>, ExtractError> {
        match self.peek_token() {
            Some(Token::Number) | Some(Token::Str) => {
                self.bump();
                Ok(None)
            }
            Some(Token::Ident(_)) => {
                let (name, line, col) = self.dotted_name()?;
                if !matches!(self.peek_token(), Some(Token::LParen)) {
                    // Bare name (True/False/None/variable reference).
                    return Ok(None);
                }
                self.bump(); // (
                let mut arg_count = 0usize;
                let mut keywords = Vec::new();
                if !matches!(self.peek_token(), Some(Token::RParen)) {
                    loop {
                        // `ident = value` keyword argument lookahead.
                        if let (Some(Token::Ident(key)), Some(Token::Eq)) = (
                            self.peek_token(),
                            self.tokens.get(self.pos + 1).map(|l| &l.token),
                        ) {
                            let key = key.clone();
                            self.pos += 2;
                            self.call_expression(out)?;
                            keywords.push(key);
                        } else {
                            self.call_expression(out)?;
                            arg_count += 1;
                        }
                        match self.peek_token() {
                            Some(Token::Comma) => {
                                self.bump();
                            }
                            Some(Token::RParen) => break,
                            _ => return Err(self.error("expected `,` or `)` in arguments")),
                        }
                    }
                }
                match self.peek_token() {
                    Some(Token::RParen) => {
                        self.bump();
                    }
                    _ => return Err(self.error("expected `)`")),
                }
                let kind = classify_callee(&name);
                let receiver = match kind {
                    CallKind::MethodCall => {
                        Some(name.rsplit_once('.').map(|(r, _)| r.to_string()).unwrap_or_default())
                    }
                    _ => None,
                };
                out.sites.push(CallSite {
                    line,
                    col,
                    kind,
                    name,
                    receiver,
                    arg_count,
                    keywords,
                });
                Ok(Some(out.sites.len() - 1))
            }
            _ => Err(self.error("expected an expression")),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ExtractError> {
        match self.peek_token() {
            Some(Token::Newline) => {
                self.pos += 1;
                Ok(())
            }
            None => Ok(()),
            _ => Err(self.error("expected end of statement")),
        }
    }
}

/// Constructor calls are spelled with a capitalized final segment;
/// `a.b(...)` with a lowercase head is a method call when `a` is a plain
/// variable (resolved against imports during validation).
fn classify_callee(name: &str) -> CallKind {
    let last = name.rsplit('.').next().unwrap_or(name);
    let head_is_upper = last.chars().next().map(char::is_uppercase).unwrap_or(false);
    if head_is_upper {
        return CallKind::Construct;
    }
    if name.contains('.') {
        // Single-dot lowercase chains like `sys.set_gravity` are method
        // calls on a variable; deeper chains like `simapi.core.create_box`
        // are qualified function calls. The validator settles ambiguous
        // cases against the import table.
        let segments = name.split('.').count();
        if segments == 2 {
            CallKind::MethodCall
        } else {
            CallKind::Call
        }
    } else {
        CallKind::Call
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn import_yields_one_site() {
        let extraction = extract_call_sites("import simapi.core\n").unwrap();
        assert_eq!(extraction.sites.len(), 1);
        assert_eq!(extraction.sites[0].kind, CallKind::Import);
        assert_eq!(extraction.sites[0].name, "simapi.core");
    }

    #[test]
    fn construct_with_keyword() {
        // Hand-tokenized oracle: `a = Make(x, k=1)` is one construct site
        // with one positional argument and keyword set {k}.
        let extraction = extract_call_sites("a = Make(x, k=1)\n").unwrap();
        assert_eq!(extraction.sites.len(), 1);
        let site = &extraction.sites[0];
        assert_eq!(site.kind, CallKind::Construct);
        assert_eq!(site.name, "Make");
        assert_eq!(site.arg_count, 1);
        assert_eq!(site.keywords, vec!["k".to_string()]);
        assert_eq!(extraction.assignments, vec![("a".to_string(), 0)]);
    }

    #[test]
    fn nested_calls_produce_one_site_each() {
        let extraction = extract_call_sites("f(g(x))\n").unwrap();
        assert_eq!(extraction.sites.len(), 2);
        // Inner site is recorded first (arguments parse before the
        // enclosing call completes).
        assert_eq!(extraction.sites[0].name, "g");
        assert_eq!(extraction.sites[1].name, "f");
        assert_eq!(extraction.sites[1].arg_count, 1);
    }

    #[test]
    fn method_call_records_receiver() {
        let source = "sys = simapi.core.System()\nsys.set_gravity(0.0, 0.0, -9.81)\n";
        let extraction = extract_call_sites(source).unwrap();
        assert_eq!(extraction.sites.len(), 2);
        let method = &extraction.sites[1];
        assert_eq!(method.kind, CallKind::MethodCall);
        assert_eq!(method.receiver.as_deref(), Some("sys"));
        assert_eq!(method.arg_count, 3);
    }

    #[test]
    fn from_import_lists_each_name() {
        let extraction = extract_call_sites("from simapi.core import System, create_box\n").unwrap();
        let names: Vec<&str> = extraction.sites.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(
            names,
            vec!["simapi.core", "simapi.core.System", "simapi.core.create_box"]
        );
    }

    #[test]
    fn tokenizer_failure_carries_location() {
        let err = extract_call_sites("x = 1\nf(@)\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.col, 3);
    }

    #[test]
    fn comments_and_strings_are_ignored() {
        let source = "# build the scene\nbody = simapi.core.load_asset(sys, \"office\", \"desk.obj\")\n";
        let extraction = extract_call_sites(source).unwrap();
        assert_eq!(extraction.sites.len(), 1);
        assert_eq!(extraction.sites[0].arg_count, 3);
    }
}
