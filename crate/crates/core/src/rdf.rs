//! Terms, ground triples, graphs and solution mappings.
//!
//! Everything here has set semantics and a deterministic total order, so
//! graphs and answer sets serialize canonically.

use std::collections::{btree_map, btree_set, BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Namespace of the constants introduced by freezing a pattern.
pub const FROZEN_NAMESPACE: &str = "urn:frozen:";
/// Namespace of the synthetic constants injected by the bounded oracle.
pub const FRESH_NAMESPACE: &str = "urn:fresh:";

/// True if `iri` lies in one of the namespaces the tool reserves for itself.
pub fn is_reserved_iri(iri: &str) -> bool {
    iri.starts_with(FROZEN_NAMESPACE) || iri.starts_with(FRESH_NAMESPACE)
}

/// An IRI, a plain literal or a variable.
///
/// The derived order is lexicographic on (kind, lexical form) with
/// `Iri < Literal < Variable`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Literal(String),
    /// Variable name, without the leading `?`.
    Variable(String),
}

impl Term {
    /// Builds an IRI term. Panics on an empty string; use [`Term::try_iri`]
    /// for unchecked input.
    pub fn iri(iri: impl Into<String>) -> Self {
        Self::try_iri(iri).expect("IRI must be non-empty")
    }

    pub fn literal(value: impl Into<String>) -> Self {
        Self::try_literal(value).expect("literal must be non-empty")
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::try_var(name).expect("variable name must be non-empty")
    }

    pub fn try_iri(iri: impl Into<String>) -> Result<Self> {
        non_empty(iri.into(), "IRI").map(Term::Iri)
    }

    pub fn try_literal(value: impl Into<String>) -> Result<Self> {
        non_empty(value.into(), "literal").map(Term::Literal)
    }

    pub fn try_var(name: impl Into<String>) -> Result<Self> {
        non_empty(name.into(), "variable").map(Term::Variable)
    }

    pub fn lexical(&self) -> &str {
        match self {
            Term::Iri(s) | Term::Literal(s) | Term::Variable(s) => s,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Term::Iri(_) => "iri",
            Term::Literal(_) => "literal",
            Term::Variable(_) => "variable",
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_ground(&self) -> bool {
        !self.is_variable()
    }

    pub fn as_variable(&self) -> Option<&str> {
        match self {
            Term::Variable(v) => Some(v),
            _ => None,
        }
    }
}

fn non_empty(s: String, what: &'static str) -> Result<String> {
    if s.is_empty() {
        Err(Error::EmptyLexical(what))
    } else {
        Ok(s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Literal(lit) => write!(f, "\"{}\"", escape_literal(lit)),
            Term::Variable(v) => write!(f, "?{v}"),
        }
    }
}

/// Escapes a literal body for the N-Triples-style surface syntax.
pub fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

/// A ground triple: IRI subject, IRI predicate, IRI or literal object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self> {
        check_position("subject", &subject, false)?;
        check_position("predicate", &predicate, false)?;
        check_position("object", &object, true)?;
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

fn check_position(position: &'static str, term: &Term, literal_ok: bool) -> Result<()> {
    match term {
        Term::Iri(_) => Ok(()),
        Term::Literal(_) if literal_ok => Ok(()),
        other => Err(Error::BadPosition {
            position,
            found: other.kind_name(),
        }),
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A finite set of ground triples.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    triples: BTreeSet<Triple>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a triple; returns false if it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Triple> {
        self.triples.iter()
    }

    pub fn union(&self, other: &Graph) -> Graph {
        graph_union(self, other)
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        is_subgraph(self, other)
    }

    /// All IRIs and literals occurring in the graph.
    pub fn terms(&self) -> BTreeSet<Term> {
        self.triples
            .iter()
            .flat_map(|t| t.terms().into_iter().cloned())
            .collect()
    }

    /// Triples of `self` that are not in `other`.
    pub fn difference(&self, other: &Graph) -> Graph {
        self.triples.difference(&other.triples).cloned().collect()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
        }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter)
    }
}

impl IntoIterator for Graph {
    type Item = Triple;
    type IntoIter = btree_set::IntoIter<Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

pub fn graph_union(g1: &Graph, g2: &Graph) -> Graph {
    g1.triples.union(&g2.triples).cloned().collect()
}

pub fn is_subgraph(g1: &Graph, g2: &Graph) -> bool {
    g1.triples.is_subset(&g2.triples)
}

/// A finite map from variable names to ground terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionMapping {
    bindings: BTreeMap<String, Term>,
}

impl SolutionMapping {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `var` to `value`, replacing any previous binding.
    ///
    /// Returns an error if `value` is a variable.
    pub fn bind(&mut self, var: impl Into<String>, value: Term) -> Result<Option<Term>> {
        if value.is_variable() {
            return Err(Error::BadPosition {
                position: "binding",
                found: "variable",
            });
        }
        Ok(self.bindings.insert(var.into(), value))
    }

    /// Builder form of [`SolutionMapping::bind`]; panics on a variable value.
    pub fn with(mut self, var: impl Into<String>, value: Term) -> Self {
        self.bind(var, value).expect("bindings must be ground");
        self
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, String, Term> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.bindings.keys().cloned().collect()
    }

    /// True iff both mappings agree on every shared variable.
    pub fn is_compatible(&self, other: &SolutionMapping) -> bool {
        self.bindings
            .iter()
            .all(|(k, v)| other.bindings.get(k).is_none_or(|w| w == v))
    }

    pub fn restrict(&self, vars: &BTreeSet<String>) -> SolutionMapping {
        restrict(self, vars)
    }
}

pub fn restrict(mu: &SolutionMapping, vars: &BTreeSet<String>) -> SolutionMapping {
    SolutionMapping {
        bindings: mu
            .bindings
            .iter()
            .filter(|(k, _)| vars.contains(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
    }
}

impl fmt::Display for SolutionMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "?{k} -> {v}")?;
        }
        f.write_str("}")
    }
}
