//! Triple patterns, basic graph patterns and queries with `NOT EXISTS`.

use std::collections::{btree_set, BTreeSet};
use std::fmt;

use crate::completeness::freeze;
use crate::error::{Error, Result};
use crate::eval::{apply_mapping, eval_bgp};
use crate::rdf::{Term, Triple};

/// A triple whose positions may hold variables.
///
/// Patterns built through [`TriplePattern::new`] respect the RDF position
/// rules (no literal subject or predicate). Substituting a solution into a
/// pattern may still place a literal in subject position; such a pattern
/// simply matches no triple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub(crate) subject: Term,
    pub(crate) predicate: Term,
    pub(crate) object: Term,
}

impl TriplePattern {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self> {
        for (position, term) in [("subject", &subject), ("predicate", &predicate)] {
            if let Term::Literal(_) = term {
                return Err(Error::BadPosition {
                    position,
                    found: "literal",
                });
            }
        }
        Ok(TriplePattern {
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

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.terms().into_iter().filter_map(Term::as_variable)
    }

    /// The ground triple this pattern denotes, if it has no variables and
    /// its positions are well-formed.
    pub fn to_triple(&self) -> Option<Triple> {
        Triple::new(
            self.subject.clone(),
            self.predicate.clone(),
            self.object.clone(),
        )
        .ok()
    }
}

impl From<Triple> for TriplePattern {
    fn from(t: Triple) -> Self {
        let [s, p, o] = t.terms();
        TriplePattern {
            subject: s.clone(),
            predicate: p.clone(),
            object: o.clone(),
        }
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

/// A basic graph pattern: a set of triple patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bgp {
    patterns: BTreeSet<TriplePattern>,
}

impl Bgp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pattern: TriplePattern) -> bool {
        self.patterns.insert(pattern)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, TriplePattern> {
        self.patterns.iter()
    }

    pub fn contains(&self, pattern: &TriplePattern) -> bool {
        self.patterns.contains(pattern)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        vars_of(self)
    }

    pub fn union(&self, other: &Bgp) -> Bgp {
        self.patterns.union(&other.patterns).cloned().collect()
    }

    /// IRIs and literals occurring in the pattern.
    pub fn constants(&self) -> BTreeSet<Term> {
        self.patterns
            .iter()
            .flat_map(|p| p.terms().into_iter())
            .filter(|t| t.is_ground())
            .cloned()
            .collect()
    }
}

impl FromIterator<TriplePattern> for Bgp {
    fn from_iter<I: IntoIterator<Item = TriplePattern>>(iter: I) -> Self {
        Bgp {
            patterns: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Bgp {
    type Item = &'a TriplePattern;
    type IntoIter = btree_set::Iter<'a, TriplePattern>;

    fn into_iter(self) -> Self::IntoIter {
        self.patterns.iter()
    }
}

impl Bgp {
    fn fmt_patterns(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(" .")?;
            }
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Bgp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        self.fmt_patterns(f)?;
        f.write_str(" }")
    }
}

pub fn vars_of(p: &Bgp) -> BTreeSet<String> {
    p.patterns
        .iter()
        .flat_map(|tp| tp.vars().map(str::to_owned))
        .collect()
}

/// A positive BGP conjoined with zero or more `NOT EXISTS` BGPs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GraphPattern {
    pub positive: Bgp,
    /// Negated BGPs in the order they were written.
    pub negatives: Vec<Bgp>,
}

impl GraphPattern {
    pub fn new(positive: Bgp, negatives: Vec<Bgp>) -> Self {
        GraphPattern {
            positive,
            negatives,
        }
    }

    pub fn positive(positive: Bgp) -> Self {
        Self::new(positive, Vec::new())
    }

    pub fn is_positive(&self) -> bool {
        self.negatives.is_empty()
    }
}

impl fmt::Display for GraphPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        self.positive.fmt_patterns(f)?;
        for n in &self.negatives {
            write!(f, " FILTER NOT EXISTS {n}")?;
        }
        f.write_str(" }")
    }
}

/// A query `(W, P)`: distinguished variables over a graph pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub distinguished: BTreeSet<String>,
    pub pattern: GraphPattern,
}

impl Query {
    pub fn new(distinguished: BTreeSet<String>, pattern: GraphPattern) -> Self {
        Query {
            distinguished,
            pattern,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.pattern.is_positive()
    }

    pub fn is_safe(&self) -> bool {
        validate_safety(self)
    }

    /// Distinguished variables missing from the positive part.
    pub fn unsafe_variables(&self) -> Vec<String> {
        let pos = self.pattern.positive.vars();
        self.distinguished
            .iter()
            .filter(|v| !pos.contains(*v))
            .cloned()
            .collect()
    }

    pub(crate) fn ensure_safe(&self) -> Result<()> {
        let bad = self.unsafe_variables();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::UnsafeQuery(bad))
        }
    }

    /// IRIs and literals mentioned anywhere in the query.
    pub fn constants(&self) -> BTreeSet<Term> {
        let mut out = self.pattern.positive.constants();
        for n in &self.pattern.negatives {
            out.extend(n.constants());
        }
        out
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT")?;
        for v in &self.distinguished {
            write!(f, " ?{v}")?;
        }
        write!(f, " WHERE {}", self.pattern)
    }
}

/// True iff every distinguished variable occurs in the positive part.
pub fn validate_safety(q: &Query) -> bool {
    q.unsafe_variables().is_empty()
}

/// Sufficient test for consistency.
///
/// Freezes the positive part into a graph and checks that no negated BGP,
/// instantiated by the freezing substitution, matches it. `true` means the
/// frozen graph itself witnesses a non-empty answer; `false` only means the
/// query is possibly inconsistent.
pub fn check_consistency(q: &Query) -> bool {
    let frozen = freeze(&q.pattern.positive);
    let identity = frozen.mapping();
    q.pattern
        .negatives
        .iter()
        .all(|neg| eval_bgp(&apply_mapping(&identity, neg), &frozen.graph).is_empty())
}
