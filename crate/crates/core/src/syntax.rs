//! Parsers for the three input languages and the canonical graph writer.
//!
//! * graphs: a line-based N-Triples subset, `<s> <p> <o> .` or
//!   `<s> <p> "literal" .`, with `#` comments;
//! * queries: `SELECT ?v* WHERE { patterns (FILTER NOT EXISTS { patterns })* }`;
//! * statements: `COMPLETE { patterns } [WHERE { patterns }]`, repeated.
//!
//! Blank nodes, typed or language-tagged literals and IRIs in the reserved
//! `urn:frozen:` / `urn:fresh:` namespaces are rejected everywhere.

use std::collections::BTreeSet;

use crate::completeness::{CompletenessStatement, StatementSet};
use crate::error::{Error, Result};
use crate::query::{Bgp, GraphPattern, Query, TriplePattern};
use crate::rdf::{is_reserved_iri, Graph, Term, Triple};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Term(Term),
    Word(String),
    Open,
    Close,
    Dot,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, first_line: usize) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: first_line,
        }
    }

    fn tokens(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        while let Some(t) = self.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<Token>> {
        loop {
            match self.chars.peek() {
                None => return Ok(None),
                Some('\n') => {
                    self.line += 1;
                    self.chars.next();
                }
                Some(c) if c.is_whitespace() => {
                    self.chars.next();
                }
                Some('#') => {
                    while matches!(self.chars.peek(), Some(c) if *c != '\n') {
                        self.chars.next();
                    }
                }
                Some(_) => break,
            }
        }
        let line = self.line;
        let c = self.chars.next().expect("peeked");
        let tok = match c {
            '{' => Tok::Open,
            '}' => Tok::Close,
            '.' => Tok::Dot,
            '<' => Tok::Term(self.iri()?),
            '"' => Tok::Term(self.literal()?),
            '?' | '$' => Tok::Term(self.variable(c)?),
            '_' if self.chars.peek() == Some(&':') => {
                self.chars.next();
                let label = self.name();
                return Err(Error::BlankNodeRejected {
                    line,
                    label: format!("_:{label}"),
                });
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = c.to_string();
                word.push_str(&self.name());
                Tok::Word(word)
            }
            other => return Err(Error::syntax(line, format!("unexpected character `{other}`"))),
        };
        Ok(Some(Token { tok, line }))
    }

    fn name(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s
    }

    fn variable(&mut self, sigil: char) -> Result<Term> {
        let name = self.name();
        if name.is_empty() || name.contains('-') {
            return Err(Error::syntax(self.line, format!("bad variable name `{sigil}{name}`")));
        }
        Ok(Term::Variable(name))
    }

    fn iri(&mut self) -> Result<Term> {
        let line = self.line;
        let mut s = String::new();
        loop {
            match self.chars.next() {
                Some('>') => break,
                Some(c) if c.is_whitespace() || "<\"{}|^`\\".contains(c) => {
                    return Err(Error::syntax(line, format!("character `{}` not allowed in IRI", c.escape_default())))
                }
                Some(c) => s.push(c),
                None => return Err(Error::syntax(line, "unterminated IRI")),
            }
        }
        if s.is_empty() {
            return Err(Error::syntax(line, "empty IRI"));
        }
        if is_reserved_iri(&s) {
            return Err(Error::ReservedNamespace { line, iri: s });
        }
        Ok(Term::Iri(s))
    }

    fn literal(&mut self) -> Result<Term> {
        let line = self.line;
        let mut s = String::new();
        loop {
            match self.chars.next() {
                Some('"') => break,
                Some('\\') => s.push(self.escape(line)?),
                Some('\n') | None => return Err(Error::syntax(line, "unterminated literal")),
                Some(c) => s.push(c),
            }
        }
        match self.chars.peek() {
            Some('@') => return Err(Error::syntax(line, "language-tagged literals are not supported")),
            Some('^') => return Err(Error::syntax(line, "typed literals are not supported")),
            _ => {}
        }
        if s.is_empty() {
            return Err(Error::syntax(line, "empty literals are not supported"));
        }
        Ok(Term::Literal(s))
    }

    fn escape(&mut self, line: usize) -> Result<char> {
        let c = self.chars.next().ok_or_else(|| Error::syntax(line, "unterminated escape"))?;
        Ok(match c {
            '\\' => '\\',
            '"' => '"',
            'n' => '\n',
            'r' => '\r',
            't' => '\t',
            'u' | 'U' => {
                let width = if c == 'u' { 4 } else { 8 };
                let hex: String = (0..width).filter_map(|_| self.chars.next()).collect();
                u32::from_str_radix(&hex, 16)
                    .ok()
                    .filter(|_| hex.len() == width)
                    .and_then(char::from_u32)
                    .ok_or_else(|| Error::syntax(line, format!("bad unicode escape `\\{c}{hex}`")))?
            }
            other => return Err(Error::syntax(line, format!("unknown escape `\\{other}`"))),
        })
    }
}

/// Parses the N-Triples subset.
pub fn parse_ntriples(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens = Lexer::new(line, line_no).tokens()?;
        if tokens.is_empty() {
            continue;
        }
        let terms: Vec<&Term> = tokens
            .iter()
            .take(3)
            .filter_map(|t| match &t.tok {
                Tok::Term(term) => Some(term),
                _ => None,
            })
            .collect();
        let well_shaped = tokens.len() == 4 && terms.len() == 3 && tokens[3].tok == Tok::Dot;
        if !well_shaped {
            return Err(Error::syntax(line_no, "expected `<subject> <predicate> <object> .`"));
        }
        if terms.iter().any(|t| t.is_variable()) {
            return Err(Error::syntax(line_no, "variables are not allowed in graph data"));
        }
        let triple = Triple::new(terms[0].clone(), terms[1].clone(), terms[2].clone())
            .map_err(|e| Error::syntax(line_no, e.to_string()))?;
        g.insert(triple);
    }
    Ok(g)
}

/// Writes a graph in canonical order, one triple per line.
pub fn serialize_ntriples(g: &Graph) -> String {
    g.iter().map(|t| format!("{t}\n")).collect()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let tokens = Lexer::new(text, 1).tokens()?;
        let last_line = tokens.last().map_or(1, |t| t.line);
        Ok(Parser {
            tokens,
            pos: 0,
            last_line,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn line(&self) -> usize {
        self.peek().map_or(self.last_line, |t| t.line)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Word(w), .. }) if w.eq_ignore_ascii_case(kw))
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        if self.is_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(kw))
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn unexpected(&self, expected: &str) -> Error {
        let found = match self.peek().map(|t| &t.tok) {
            None => "end of input".to_string(),
            Some(Tok::Term(t)) => format!("`{t}`"),
            Some(Tok::Word(w)) => format!("`{w}`"),
            Some(Tok::Open) => "`{`".into(),
            Some(Tok::Close) => "`}`".into(),
            Some(Tok::Dot) => "`.`".into(),
        };
        Error::syntax(self.line(), format!("expected {expected}, found {found}"))
    }

    fn term(&mut self) -> Option<Term> {
        match self.peek() {
            Some(Token { tok: Tok::Term(t), .. }) => {
                let t = t.clone();
                self.pos += 1;
                Some(t)
            }
            _ => None,
        }
    }

    /// `{ (pattern .?)* }`, returning the patterns and the opening line.
    fn block(&mut self, allow_filters: bool) -> Result<(Bgp, Vec<Bgp>, usize)> {
        let open_line = self.line();
        self.expect(Tok::Open, "`{`")?;
        let mut bgp = Bgp::new();
        let mut negatives = Vec::new();
        loop {
            if self.peek().is_some_and(|t| t.tok == Tok::Close) {
                self.pos += 1;
                return Ok((bgp, negatives, open_line));
            }
            if allow_filters && self.is_keyword("FILTER") {
                self.pos += 1;
                self.keyword("NOT")?;
                self.keyword("EXISTS")?;
                let (neg, _, line) = self.block(false)?;
                if neg.is_empty() {
                    return Err(Error::syntax(line, "FILTER NOT EXISTS block has no triple pattern"));
                }
                negatives.push(neg);
                continue;
            }
            let line = self.line();
            if self.peek().is_none_or(|t| !matches!(t.tok, Tok::Term(_))) {
                return Err(self.unexpected("a triple pattern or `}`"));
            }
            if !negatives.is_empty() {
                return Err(Error::syntax(
                    line,
                    "positive triple patterns must precede every FILTER NOT EXISTS",
                ));
            }
            bgp.insert(self.triple_pattern()?);
            if self.peek().is_some_and(|t| t.tok == Tok::Dot) {
                self.pos += 1;
            }
        }
    }

    fn triple_pattern(&mut self) -> Result<TriplePattern> {
        let line = self.line();
        let mut terms = Vec::with_capacity(3);
        for what in ["subject", "predicate", "object"] {
            match self.term() {
                Some(t) => terms.push(t),
                None => return Err(self.unexpected(what)),
            }
        }
        let o = terms.pop().expect("three terms");
        let p = terms.pop().expect("three terms");
        let s = terms.pop().expect("three terms");
        TriplePattern::new(s, p, o).map_err(|e| Error::syntax(line, e.to_string()))
    }
}

/// Parses a query of the form
/// `SELECT ?v* WHERE { patterns (FILTER NOT EXISTS { patterns })* }`.
pub fn parse_query(text: &str) -> Result<Query> {
    let mut p = Parser::new(text)?;
    p.keyword("SELECT")?;
    let mut distinguished = BTreeSet::new();
    while let Some(Token { tok: Tok::Term(Term::Variable(v)), .. }) = p.peek() {
        distinguished.insert(v.clone());
        p.pos += 1;
    }
    p.keyword("WHERE")?;
    let (positive, negatives, line) = p.block(true)?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    if positive.is_empty() {
        return Err(Error::syntax(line, "WHERE block has no positive triple pattern"));
    }
    let q = Query::new(distinguished, GraphPattern::new(positive, negatives));
    q.ensure_safe()?;
    Ok(q)
}

/// Parses a sequence of `COMPLETE { .. } [WHERE { .. }]` statements.
pub fn parse_statements(text: &str) -> Result<StatementSet> {
    parse_statement_list(text).map(|v| v.into_iter().collect())
}

/// Like [`parse_statements`] but keeps the written order and duplicates.
pub fn parse_statement_list(text: &str) -> Result<Vec<CompletenessStatement>> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_end() {
        p.keyword("COMPLETE")?;
        let (pattern, _, line) = p.block(false)?;
        if pattern.is_empty() {
            return Err(Error::EmptyPattern { line });
        }
        let condition = if p.is_keyword("WHERE") {
            p.pos += 1;
            p.block(false)?.0
        } else {
            Bgp::new()
        };
        out.push(CompletenessStatement::new(pattern, condition)?);
    }
    Ok(out)
}

/// Parses exactly one completeness statement.
pub fn parse_statement(text: &str) -> Result<CompletenessStatement> {
    let mut list = parse_statement_list(text)?;
    match list.len() {
        1 => Ok(list.pop().expect("one statement")),
        n => Err(Error::syntax(1, format!("expected exactly one COMPLETE statement, found {n}"))),
    }
}
