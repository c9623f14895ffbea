//! Canonical string representations of programs.
//!
//! Two formats exist. The plain form is the terminal strings of the tree
//! joined by single spaces (`lambda r : neg ( r )`). The tree form is one
//! node per line: rule nodes as `<id> {key=value, ...}` with children
//! indented one tab deeper, terminal nodes as `"text"   {}` (three spaces
//! before the empty map). Attribute keys are ordered lexicographically, so
//! serialization is byte-deterministic.
//!
//! Plain text can only fail to parse; tree text can only fail to decode.
//! The two error channels never mix.

use std::fmt;

use crate::generator::{recompute_attributes, AstNode};
use crate::grammar::{AttrValue, AttributeMap, Grammar, RhsItem};
use crate::l2::types::parse_type;
use crate::l2::{Builtin, Expr, L2Language, FALSE_LIT, TRUE_LIT};

/// Left-to-right terminal concatenation with single-space separation.
pub fn render_program(node: &AstNode) -> String {
    node.terminals().join(" ")
}

/// Serializes a tree into the canonical tab-indented format. With
/// `include_attributes` off every rule node carries an empty map (the
/// tree-without-attributes ablation).
pub fn serialize_tree(grammar: &Grammar, node: &AstNode, include_attributes: bool) -> String {
    let _ = grammar;
    let mut lines = Vec::new();
    fn walk(node: &AstNode, depth: usize, include: bool, lines: &mut Vec<String>) {
        let indent = "\t".repeat(depth);
        match node {
            AstNode::Terminal { text } => lines.push(format!("{indent}\"{text}\"   {{}}")),
            AstNode::Rule { rule, children, .. } => {
                let attrs = if include {
                    node.attributes().to_string()
                } else {
                    "{}".to_string()
                };
                lines.push(format!("{indent}{rule} {attrs}"));
                for child in children {
                    walk(child, depth + 1, include, lines);
                }
            }
        }
    }
    walk(node, 0, include_attributes, &mut lines);
    lines.join("\n")
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecodeErrorKind {
    EmptyInput,
    BadIndentation,
    MalformedNode,
    MalformedAttributes,
    TerminalWithChildren,
    MultipleRoots,
    UnknownRule(usize),
    ArityMismatch { rule: usize, expected: usize, found: usize },
    TerminalMismatch { expected: String, found: String },
    ClassMismatch { found: String },
    SymbolMismatch { expected: String },
    AttributeMismatch { stored: String, computed: String },
}

/// Decode failure with the 1-based line it was detected on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecodeError {
    pub line: usize,
    pub kind: DecodeErrorKind,
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            DecodeErrorKind::EmptyInput => write!(f, "empty tree text"),
            DecodeErrorKind::BadIndentation => write!(f, "bad indentation"),
            DecodeErrorKind::MalformedNode => write!(f, "malformed node line"),
            DecodeErrorKind::MalformedAttributes => write!(f, "malformed attribute map"),
            DecodeErrorKind::TerminalWithChildren => write!(f, "terminal node has children"),
            DecodeErrorKind::MultipleRoots => write!(f, "more than one root node"),
            DecodeErrorKind::UnknownRule(id) => write!(f, "unknown rule id {id}"),
            DecodeErrorKind::ArityMismatch { rule, expected, found } => {
                write!(f, "rule {rule} expects {expected} children, found {found}")
            }
            DecodeErrorKind::TerminalMismatch { expected, found } => {
                write!(f, "expected terminal \"{expected}\", found \"{found}\"")
            }
            DecodeErrorKind::ClassMismatch { found } => {
                write!(f, "terminal \"{found}\" is not admissible here")
            }
            DecodeErrorKind::SymbolMismatch { expected } => {
                write!(f, "child is not a {expected} node")
            }
            DecodeErrorKind::AttributeMismatch { stored, computed } => {
                write!(f, "stored attributes {stored} disagree with computed {computed}")
            }
        }
    }
}

impl std::error::Error for DecodeError {}

#[derive(Debug)]
enum RawPayload {
    Terminal(String),
    Rule { id: usize, attrs: AttributeMap },
}

#[derive(Debug)]
struct RawNode {
    line: usize,
    payload: RawPayload,
    children: Vec<RawNode>,
}

fn parse_attr_value(s: &str) -> AttrValue {
    match s {
        "true" => return AttrValue::Bool(true),
        "false" => return AttrValue::Bool(false),
        "undefined" => return AttrValue::Undefined,
        _ => {}
    }
    let digits = s.strip_prefix('-').unwrap_or(s);
    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
        if let Ok(n) = s.parse::<i64>() {
            return AttrValue::Int(n);
        }
    }
    if let Some(ty) = parse_type(s) {
        return AttrValue::Type(ty);
    }
    AttrValue::Str(s.to_string())
}

/// Splits `{k=v, k=v}` content at top-level commas (bracket-aware, since
/// function types contain commas of their own).
fn parse_attr_map(s: &str) -> Option<AttributeMap> {
    let inner = s.strip_prefix('{')?.strip_suffix('}')?.trim();
    let mut map = AttributeMap::new();
    if inner.is_empty() {
        return Some(map);
    }
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut pieces = Vec::new();
    for (i, b) in inner.bytes().enumerate() {
        match b {
            b'[' | b'(' => depth += 1,
            b']' | b')' => depth = depth.checked_sub(1)?,
            b',' if depth == 0 => {
                pieces.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&inner[start..]);
    for piece in pieces {
        let piece = piece.trim();
        let (key, value) = piece.split_once('=')?;
        let key = key.trim();
        if key.is_empty() {
            return None;
        }
        map.insert(key, parse_attr_value(value.trim()));
    }
    Some(map)
}

fn parse_line(line_no: usize, line: &str) -> Result<(usize, RawPayload), DecodeError> {
    let err = |kind| DecodeError { line: line_no, kind };
    let depth = line.bytes().take_while(|b| *b == b'\t').count();
    let rest = &line[depth..];
    if rest.starts_with(' ') {
        return Err(err(DecodeErrorKind::BadIndentation));
    }
    if let Some(after_quote) = rest.strip_prefix('"') {
        let Some(end) = after_quote.find('"') else {
            return Err(err(DecodeErrorKind::MalformedNode));
        };
        let text = &after_quote[..end];
        let tail = after_quote[end + 1..].trim();
        if tail != "{}" {
            return Err(err(DecodeErrorKind::MalformedAttributes));
        }
        return Ok((depth, RawPayload::Terminal(text.to_string())));
    }
    let digits_len = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
    if digits_len == 0 {
        return Err(err(DecodeErrorKind::MalformedNode));
    }
    let id: usize = rest[..digits_len].parse().map_err(|_| err(DecodeErrorKind::MalformedNode))?;
    let tail = rest[digits_len..].trim();
    let attrs = parse_attr_map(tail).ok_or_else(|| err(DecodeErrorKind::MalformedAttributes))?;
    Ok((depth, RawPayload::Rule { id, attrs }))
}

fn assemble(text: &str) -> Result<RawNode, DecodeError> {
    let mut root: Option<RawNode> = None;
    let mut stack: Vec<RawNode> = Vec::new();

    fn close_one(stack: &mut Vec<RawNode>, root: &mut Option<RawNode>) {
        let node = stack.pop().expect("close_one on nonempty stack");
        match stack.last_mut() {
            Some(parent) => parent.children.push(node),
            None => *root = Some(node),
        }
    }

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (depth, payload) = parse_line(line_no, line)?;
        if depth > stack.len() {
            return Err(DecodeError { line: line_no, kind: DecodeErrorKind::BadIndentation });
        }
        while stack.len() > depth {
            close_one(&mut stack, &mut root);
        }
        if stack.is_empty() && root.is_some() {
            return Err(DecodeError { line: line_no, kind: DecodeErrorKind::MultipleRoots });
        }
        if let Some(parent) = stack.last() {
            if matches!(parent.payload, RawPayload::Terminal(_)) {
                return Err(DecodeError {
                    line: line_no,
                    kind: DecodeErrorKind::TerminalWithChildren,
                });
            }
        }
        stack.push(RawNode { line: line_no, payload, children: Vec::new() });
    }
    while !stack.is_empty() {
        close_one(&mut stack, &mut root);
    }
    root.ok_or(DecodeError { line: 1, kind: DecodeErrorKind::EmptyInput })
}

fn build_node(grammar: &Grammar, raw: &RawNode) -> Result<AstNode, DecodeError> {
    match &raw.payload {
        RawPayload::Terminal(text) => {
            // Children under terminals are caught during assembly.
            Ok(AstNode::Terminal { text: text.clone() })
        }
        RawPayload::Rule { id, attrs } => {
            let rule = grammar
                .rule(*id)
                .ok_or(DecodeError { line: raw.line, kind: DecodeErrorKind::UnknownRule(*id) })?;
            if raw.children.len() != rule.rhs().len() {
                return Err(DecodeError {
                    line: raw.line,
                    kind: DecodeErrorKind::ArityMismatch {
                        rule: *id,
                        expected: rule.rhs().len(),
                        found: raw.children.len(),
                    },
                });
            }
            let mut children = Vec::with_capacity(raw.children.len());
            for (item, child_raw) in rule.rhs().iter().zip(&raw.children) {
                let child = build_node(grammar, child_raw)?;
                match (item, &child) {
                    (RhsItem::Terminal(expected), AstNode::Terminal { text }) => {
                        if text != expected {
                            return Err(DecodeError {
                                line: child_raw.line,
                                kind: DecodeErrorKind::TerminalMismatch {
                                    expected: expected.clone(),
                                    found: text.clone(),
                                },
                            });
                        }
                    }
                    (RhsItem::Class(class), AstNode::Terminal { text }) => {
                        if !grammar.class(*class).contains(text) {
                            return Err(DecodeError {
                                line: child_raw.line,
                                kind: DecodeErrorKind::ClassMismatch { found: text.clone() },
                            });
                        }
                    }
                    (RhsItem::Nonterminal(symbol), AstNode::Rule { rule: child_rule, .. }) => {
                        let child_lhs = grammar.rule(*child_rule).map(|r| r.lhs());
                        if child_lhs != Some(*symbol) {
                            return Err(DecodeError {
                                line: child_raw.line,
                                kind: DecodeErrorKind::SymbolMismatch {
                                    expected: grammar.symbol_name(*symbol).to_string(),
                                },
                            });
                        }
                    }
                    (RhsItem::Nonterminal(symbol), AstNode::Terminal { .. }) => {
                        return Err(DecodeError {
                            line: child_raw.line,
                            kind: DecodeErrorKind::SymbolMismatch {
                                expected: grammar.symbol_name(*symbol).to_string(),
                            },
                        });
                    }
                    (_, AstNode::Rule { .. }) => {
                        return Err(DecodeError {
                            line: child_raw.line,
                            kind: DecodeErrorKind::MalformedNode,
                        });
                    }
                }
                children.push(child);
            }
            Ok(AstNode::Rule {
                rule: *id,
                children,
                synthesized: attrs.clone(),
                inherited: AttributeMap::new(),
            })
        }
    }
}

fn check_stored_attributes(raw: &RawNode, node: &AstNode) -> Result<(), DecodeError> {
    if let (RawPayload::Rule { attrs, .. }, AstNode::Rule { children, .. }) =
        (&raw.payload, node)
    {
        let computed = node.attributes();
        if *attrs != computed {
            return Err(DecodeError {
                line: raw.line,
                kind: DecodeErrorKind::AttributeMismatch {
                    stored: attrs.to_string(),
                    computed: computed.to_string(),
                },
            });
        }
        for (child_raw, child) in raw.children.iter().zip(children) {
            check_stored_attributes(child_raw, child)?;
        }
    }
    Ok(())
}

/// Reconstructs a tree from its text form, validating rule ids, arities,
/// child kinds and indentation. Attributes are recomputed from the grammar;
/// stored values only feed the rules' declared choice keys. In strict mode
/// every stored map must equal the recomputed one.
pub fn deserialize_tree(
    grammar: &Grammar,
    text: &str,
    strict_attributes: bool,
) -> Result<AstNode, DecodeError> {
    let raw = assemble(text)?;
    let mut node = build_node(grammar, &raw)?;
    recompute_attributes(grammar, &mut node, AttributeMap::new());
    if strict_attributes {
        check_stored_attributes(&raw, &node)?;
    }
    Ok(node)
}

/// Parse failure with the byte offset it was detected at.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> ParseError {
        ParseError { pos, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Colon,
    Int(i64),
    Word(String),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' => i += 1,
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            b':' => {
                toks.push((i, Tok::Colon));
                i += 1;
            }
            b'-' | b'0'..=b'9' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &text[start..i];
                if text == "-" {
                    return Err(ParseError::new(start, "expected digits after `-`"));
                }
                let n = text
                    .parse::<i64>()
                    .map_err(|_| ParseError::new(start, "integer literal out of range"))?;
                toks.push((start, Tok::Int(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                toks.push((start, Tok::Word(text[start..i].to_string())));
            }
            other => {
                return Err(ParseError::new(i, format!("unexpected character `{}`", other as char)));
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t);
        self.at += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.advance() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::new(pos, format!("expected {what}"))),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.advance().cloned() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Word(w)) if w == TRUE_LIT => Ok(Expr::Bool(true)),
            Some(Tok::Word(w)) if w == FALSE_LIT => Ok(Expr::Bool(false)),
            Some(Tok::Word(w)) if w == "lambda" => self.parse_lambda_tail(),
            Some(Tok::Word(w)) => {
                if let Some(b) = Builtin::from_name(&w) {
                    self.parse_call_tail(pos, b)
                } else if is_var_name(&w) {
                    Ok(Expr::Var(w))
                } else {
                    Err(ParseError::new(pos, format!("unknown identifier `{w}`")))
                }
            }
            _ => Err(ParseError::new(pos, "expected an expression")),
        }
    }

    fn parse_lambda_tail(&mut self) -> Result<Expr, ParseError> {
        let mut params = Vec::new();
        loop {
            let pos = self.pos();
            match self.advance().cloned() {
                Some(Tok::Word(w)) if is_var_name(&w) => params.push((w, None)),
                _ => return Err(ParseError::new(pos, "expected a parameter name")),
            }
            let pos = self.pos();
            match self.advance() {
                Some(Tok::Comma) => continue,
                Some(Tok::Colon) => break,
                _ => return Err(ParseError::new(pos, "expected `,` or `:`")),
            }
        }
        let body = self.parse_expr()?;
        Ok(Expr::Lambda { params, body: Box::new(body) })
    }

    fn parse_call_tail(&mut self, call_pos: usize, b: Builtin) -> Result<Expr, ParseError> {
        self.expect(&Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        loop {
            args.push(self.parse_expr()?);
            let pos = self.pos();
            match self.advance() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                _ => return Err(ParseError::new(pos, "expected `,` or `)`")),
            }
        }
        if args.len() != b.arity() {
            return Err(ParseError::new(
                call_pos,
                format!("{} expects {} arguments, got {}", b.name(), b.arity(), args.len()),
            ));
        }
        Ok(Expr::Call(b, args))
    }
}

fn is_var_name(w: &str) -> bool {
    w.len() == 1 && w.as_bytes()[0].is_ascii_lowercase()
}

/// Parses L2 surface syntax into a semantic expression. Accepts both the
/// canonical spaced rendering and compact text like `max(map(f, x))`.
pub fn parse_program_text(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks: &toks, at: 0, end: text.len() };
    let expr = parser.parse_expr()?;
    if parser.at != toks.len() {
        return Err(ParseError::new(parser.pos(), "unexpected trailing input"));
    }
    Ok(expr)
}

/// Parses L2 surface syntax into a grammar tree. Attributes are computed
/// from the grammar; parameter types are left undefined (plain text does
/// not carry them).
pub fn parse_program(lang: &L2Language, text: &str) -> Result<AstNode, ParseError> {
    let expr = parse_program_text(text)?;
    Ok(lang.expr_to_ast(&expr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::l2::check::annotate_expr;

    fn lang() -> L2Language {
        L2Language::new()
    }

    /// `lambda r : neg ( r )` with inferred attributes, serialized.
    fn neg_tree_text(lang: &L2Language) -> String {
        let expr = parse_program_text("lambda r : neg ( r )").unwrap();
        let annotated = annotate_expr(&expr).unwrap();
        let tree = lang.expr_to_ast(&annotated);
        serialize_tree(lang.grammar(), &tree, true)
    }

    #[test]
    fn attributed_tree_matches_canonical_layout() {
        let lang = lang();
        let expected = concat!(
            "0 {0.type=bool, length=1, type=fun([bool], bool)}\n",
            "\t\"lambda\"   {}\n",
            "\t2 {0.type=bool, length=1, r_is_decl=true, r_typevar=bool}\n",
            "\t\t3 {type=bool, varname=r}\n",
            "\t\t\t\"r\"   {}\n",
            "\t\":\"   {}\n",
            "\t10 {r_is_decl=true, r_typevar=bool, type=bool}\n",
            "\t\t\"neg\"   {}\n",
            "\t\t\"(\"   {}\n",
            "\t\t6 {r_is_decl=true, r_typevar=bool, type=bool}\n",
            "\t\t\t7 {r_is_decl=true, r_typevar=bool, type=bool, varname=r}\n",
            "\t\t\t\t\"r\"   {}\n",
            "\t\t\")\"   {}",
        );
        assert_eq!(neg_tree_text(&lang), expected);
    }

    #[test]
    fn render_of_neg_tree() {
        let lang = lang();
        let tree = parse_program(&lang, "lambda r : neg(r)").unwrap();
        assert_eq!(render_program(&tree), "lambda r : neg ( r )");
    }

    #[test]
    fn render_single_literal() {
        let lang = lang();
        let tree = parse_program(&lang, "1").unwrap();
        assert_eq!(render_program(&tree), "1");
    }

    #[test]
    fn parse_accepts_compact_paper_programs() {
        let lang = lang();
        for text in [
            "lambda x : max(map(lambda l : max(l), x))",
            "lambda x : indexinto(x, minus(len(x), 1))",
        ] {
            let tree = parse_program(&lang, text).unwrap();
            let rendered = render_program(&tree);
            let reparsed = parse_program(&lang, &rendered).unwrap();
            assert!(tree.same_structure(&reparsed));
        }
    }

    #[test]
    fn canonical_text_round_trips_exactly() {
        let lang = lang();
        let canonical = "lambda x : indexinto ( x , minus ( len ( x ) , 1 ) )";
        let tree = parse_program(&lang, canonical).unwrap();
        assert_eq!(render_program(&tree), canonical);
    }

    #[test]
    fn truncated_and_malformed_programs_fail_to_parse() {
        let lang = lang();
        assert!(parse_program(&lang, "lambda x :").is_err());
        assert!(parse_program(&lang, "lambda x : plus(x 1)").is_err());
        assert!(parse_program(&lang, "lambda x : frob(x)").is_err());
        assert!(parse_program(&lang, "lambda x : len(x, x)").is_err());
        assert!(parse_program(&lang, "lambda x : x 1").is_err());
    }

    #[test]
    fn serialized_tree_round_trips_through_decode() {
        let lang = lang();
        let text = neg_tree_text(&lang);
        let decoded = deserialize_tree(lang.grammar(), &text, true).unwrap();
        assert_eq!(serialize_tree(lang.grammar(), &decoded, true), text);
    }

    #[test]
    fn decode_reports_unknown_rule() {
        let lang = lang();
        let err = deserialize_tree(lang.grammar(), "9999 {}", false).unwrap_err();
        assert_eq!(err.kind, DecodeErrorKind::UnknownRule(9999));
        assert_eq!(err.line, 1);
    }

    #[test]
    fn decode_reports_arity_mismatch() {
        let lang = lang();
        // The lambda rule wants four children.
        let text = "0 {}\n\t\"lambda\"   {}";
        let err = deserialize_tree(lang.grammar(), text, false).unwrap_err();
        assert!(matches!(err.kind, DecodeErrorKind::ArityMismatch { rule: 0, expected: 4, found: 1 }));
    }

    #[test]
    fn decode_reports_bad_indentation() {
        let lang = lang();
        let text = "4 {}\n\t\t\"1\"   {}";
        let err = deserialize_tree(lang.grammar(), text, false).unwrap_err();
        assert_eq!(err.kind, DecodeErrorKind::BadIndentation);
        assert_eq!(err.line, 2);
    }

    #[test]
    fn decode_reports_attribute_mismatch_only_in_strict_mode() {
        let lang = lang();
        let text = "4 {type=bool}\n\t\"1\"   {}";
        let err = deserialize_tree(lang.grammar(), text, true).unwrap_err();
        assert!(matches!(err.kind, DecodeErrorKind::AttributeMismatch { .. }));
        let node = deserialize_tree(lang.grammar(), text, false).unwrap();
        // Lenient decode recomputes the truth.
        assert_eq!(
            node.attributes().type_attr("type"),
            Some(&crate::l2::L2Type::Int)
        );
    }

    #[test]
    fn decode_validates_terminal_and_class_positions() {
        let lang = lang();
        let err = deserialize_tree(lang.grammar(), "4 {}\n\t\"zz\"   {}", false).unwrap_err();
        assert!(matches!(err.kind, DecodeErrorKind::ClassMismatch { .. }));

        let text = "0 {}\n\t\"lambada\"   {}\n\t2 {}\n\t\t3 {}\n\t\t\t\"r\"   {}\n\t\":\"   {}\n\t4 {}\n\t\t\"1\"   {}";
        let err = deserialize_tree(lang.grammar(), text, false).unwrap_err();
        assert!(matches!(err.kind, DecodeErrorKind::TerminalMismatch { .. }));
    }

    #[test]
    fn decode_rejects_multiple_roots_and_empty_input() {
        let lang = lang();
        let err = deserialize_tree(lang.grammar(), "4 {}\n\t\"1\"   {}\n4 {}", false).unwrap_err();
        assert_eq!(err.kind, DecodeErrorKind::MultipleRoots);
        let err = deserialize_tree(lang.grammar(), "", false).unwrap_err();
        assert_eq!(err.kind, DecodeErrorKind::EmptyInput);
    }

    #[test]
    fn attr_map_parsing_handles_nested_function_types() {
        let map = parse_attr_map("{type=fun([int, bool], [int]), length=2}").unwrap();
        assert_eq!(
            map.type_attr("type"),
            Some(&crate::l2::L2Type::fun(
                vec![crate::l2::L2Type::Int, crate::l2::L2Type::Bool],
                crate::l2::L2Type::list(crate::l2::L2Type::Int)
            ))
        );
        assert_eq!(map.int_attr("length"), Some(2));
    }
}
