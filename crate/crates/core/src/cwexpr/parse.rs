//! S-expression reader for clique-width expressions.
//!
//! ```text
//! expr := (node <name> <label>)
//!       | (union <expr> <expr>)
//!       | (join <label> <label> <expr>)
//!       | (rename <label> <label> <expr>)
//! file := expr | (k <int> expr)
//! ```
//! Whitespace is insignificant and `;` starts a line comment.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{CwExpression, ExprBuilder, Label, NodeId};
use crate::graph::is_valid_name;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedEof,
    UnexpectedToken(String),
    UnknownForm(String),
    BadLabel(String),
    BadName(String),
    DuplicateVertex(String),
    SameLabels { op: &'static str, label: Label },
    TrailingInput,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedEof => f.write_str("unexpected end of input"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected token `{t}`"),
            ParseErrorKind::UnknownForm(t) => write!(f, "unknown form `{t}`"),
            ParseErrorKind::BadLabel(t) => write!(f, "label must be a positive integer, got `{t}`"),
            ParseErrorKind::BadName(t) => write!(f, "invalid vertex name `{t}`"),
            ParseErrorKind::DuplicateVertex(t) => write!(f, "duplicate vertex `{t}`"),
            ParseErrorKind::SameLabels { op, label } => {
                write!(f, "{op} needs two distinct labels, got {label} twice")
            }
            ParseErrorKind::TrailingInput => f.write_str("trailing input after expression"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ExprParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' | ')' => {
                chars.next();
                let tok = if c == '(' { Tok::Open } else { Tok::Close };
                out.push(Token { tok, line, col });
                col += 1;
            }
            _ => {
                let start = col;
                let mut atom = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                    col += 1;
                }
                out.push(Token { tok: Tok::Atom(atom), line, col: start });
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    builder: ExprBuilder,
    names: BTreeSet<String>,
}

impl Parser {
    fn err_at(&self, t: &Token, kind: ParseErrorKind) -> ExprParseError {
        ExprParseError { line: t.line, col: t.col, kind }
    }

    fn next(&mut self) -> Result<Token, ExprParseError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(ExprParseError { line: self.end.0, col: self.end.1, kind: ParseErrorKind::UnexpectedEof }),
        }
    }

    fn peek_is_open_k(&self) -> bool {
        matches!(
            (self.toks.first(), self.toks.get(1)),
            (Some(Token { tok: Tok::Open, .. }), Some(Token { tok: Tok::Atom(a), .. })) if a == "k"
        )
    }

    fn expect(&mut self, want: Tok) -> Result<Token, ExprParseError> {
        let t = self.next()?;
        if t.tok != want {
            let shown = match &t.tok {
                Tok::Open => "(".to_string(),
                Tok::Close => ")".to_string(),
                Tok::Atom(a) => a.clone(),
            };
            return Err(self.err_at(&t, ParseErrorKind::UnexpectedToken(shown)));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<(Token, String), ExprParseError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Atom(a) => {
                let a = a.clone();
                Ok((t, a))
            }
            Tok::Open => Err(self.err_at(&t, ParseErrorKind::UnexpectedToken("(".into()))),
            Tok::Close => Err(self.err_at(&t, ParseErrorKind::UnexpectedToken(")".into()))),
        }
    }

    fn label(&mut self) -> Result<(Token, Label), ExprParseError> {
        let (t, a) = self.atom()?;
        match a.parse::<Label>() {
            Ok(l) if l >= 1 => Ok((t, l)),
            _ => Err(self.err_at(&t, ParseErrorKind::BadLabel(a))),
        }
    }

    fn label_pair(&mut self, op: &'static str) -> Result<(Label, Label), ExprParseError> {
        let (t, i) = self.label()?;
        let (_, j) = self.label()?;
        if i == j {
            return Err(self.err_at(&t, ParseErrorKind::SameLabels { op, label: i }));
        }
        Ok((i, j))
    }

    fn expr(&mut self) -> Result<NodeId, ExprParseError> {
        self.expect(Tok::Open)?;
        let (head_tok, head) = self.atom()?;
        let id = match head.as_str() {
            "node" => {
                let (nt, name) = self.atom()?;
                if !is_valid_name(&name) {
                    return Err(self.err_at(&nt, ParseErrorKind::BadName(name)));
                }
                if !self.names.insert(name.clone()) {
                    return Err(self.err_at(&nt, ParseErrorKind::DuplicateVertex(name)));
                }
                let (_, l) = self.label()?;
                self.builder.create(name, l)
            }
            "union" => {
                let l = self.expr()?;
                let r = self.expr()?;
                self.builder.union(l, r)
            }
            "join" => {
                let (i, j) = self.label_pair("join")?;
                let c = self.expr()?;
                self.builder.join(i, j, c)
            }
            "rename" => {
                let (i, j) = self.label_pair("rename")?;
                let c = self.expr()?;
                self.builder.rename(i, j, c)
            }
            _ => return Err(self.err_at(&head_tok, ParseErrorKind::UnknownForm(head))),
        };
        self.expect(Tok::Close)?;
        Ok(id)
    }
}

/// Parses an expression file. `k` is the largest label mentioned, or the
/// `(k n ...)` header value when that is larger.
pub fn parse_expression(text: &str) -> Result<CwExpression, ExprParseError> {
    let toks = tokenize(text);
    let end = {
        let lines: Vec<&str> = text.split('\n').collect();
        (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1)
    };
    let mut p = Parser { toks, pos: 0, end, builder: ExprBuilder::new(), names: BTreeSet::new() };

    let mut k_header = None;
    let with_header = p.peek_is_open_k();
    if with_header {
        p.expect(Tok::Open)?;
        p.atom()?;
        let (t, a) = p.atom()?;
        match a.parse::<u32>() {
            Ok(k) if k >= 1 => k_header = Some(k),
            _ => return Err(p.err_at(&t, ParseErrorKind::BadLabel(a))),
        }
    }
    p.expr()?;
    if with_header {
        p.expect(Tok::Close)?;
    }
    if let Some(t) = p.toks.get(p.pos).cloned() {
        return Err(p.err_at(&t, ParseErrorKind::TrailingInput));
    }
    let max_label = p.builder.max_label;
    let mut expr = p.builder.finish(None).expect("parser only builds well-formed trees");
    // A header below the largest label is kept as declared so that the
    // validator can report the out-of-range labels.
    if let Some(k) = k_header {
        expr.k = k;
    } else {
        expr.k = max_label;
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cwexpr::Node;

    #[test]
    fn parses_k2_and_p3() {
        let e = parse_expression("(join 1 2 (union (node a 1) (node b 2)))").unwrap();
        assert_eq!(e.k(), 2);
        assert_eq!(e.len(), 4);
        let e = parse_expression("(join 2 3 (union (join 1 2 (union (node a 1) (node b 2))) (node c 3)))").unwrap();
        assert_eq!(e.k(), 3);
        assert_eq!(e.vertex_names(), vec!["a", "b", "c"]);
    }

    #[test]
    fn join_with_equal_labels_rejected() {
        let err = parse_expression("(join 1 1 (node a 1))").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::SameLabels { op: "join", label: 1 });
        assert_eq!((err.line, err.col), (1, 7));
        let err = parse_expression("(rename 2 2 (node a 1))").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::SameLabels { op: "rename", .. }));
    }

    #[test]
    fn bad_labels_rejected() {
        for text in ["(node a 0)", "(node a -1)", "(node a x)", "(join 0 1 (node a 1))"] {
            let err = parse_expression(text).unwrap_err();
            assert!(matches!(err.kind, ParseErrorKind::BadLabel(_)), "{text}: {err}");
        }
    }

    #[test]
    fn duplicate_vertex_rejected() {
        let err = parse_expression("(union (node a 1) (node a 2))").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateVertex("a".into()));
        assert_eq!((err.line, err.col), (1, 25));
    }

    #[test]
    fn header_comments_and_whitespace() {
        let e = parse_expression("; a comment\n(k 5\n  (node a 1) ; trailing\n)\n").unwrap();
        assert_eq!(e.k(), 5);
        assert!(matches!(e.node(e.root()), Node::Create { .. }));
        // A header below the largest label keeps the declared value.
        let e = parse_expression("(k 1 (node a 3))").unwrap();
        assert_eq!(e.k(), 1);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_expression("(union (node a 1)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEof);
        let err = parse_expression("(node a 1) (node b 1)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TrailingInput);
        assert_eq!((err.line, err.col), (1, 12));
        let err = parse_expression("(\n  frob a 1)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownForm("frob".into()));
        assert_eq!((err.line, err.col), (2, 3));
        assert!(parse_expression("").is_err());
        assert!(parse_expression("(node a-b 1)").is_err());
    }
}
