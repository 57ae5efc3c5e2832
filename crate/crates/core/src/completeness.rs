//! Completeness statements `Compl(P1 | P2)` and reasoning over them.
//!
//! A pair `(G, G')` with `G ⊆ G'` satisfies a statement when every
//! instantiation of `P1` that holds together with `P2` in `G'` is already
//! in `G`. Entailment between statements is decided by a containment test
//! on the frozen body of the target statement.

use std::collections::{btree_set, BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::eval::{apply_mapping, construct_unchecked};
use crate::query::{Bgp, GraphPattern};
use crate::rdf::{is_subgraph, Graph, SolutionMapping, Term, FROZEN_NAMESPACE};

/// `Compl(pattern | condition)`. An empty condition stands for `true`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompletenessStatement {
    pattern: Bgp,
    condition: Bgp,
}

impl CompletenessStatement {
    pub fn new(pattern: Bgp, condition: Bgp) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyStatementPattern);
        }
        Ok(CompletenessStatement { pattern, condition })
    }

    /// `Compl(pattern | true)`.
    pub fn unconditional(pattern: Bgp) -> Result<Self> {
        Self::new(pattern, Bgp::new())
    }

    pub fn pattern(&self) -> &Bgp {
        &self.pattern
    }

    pub fn condition(&self) -> &Bgp {
        &self.condition
    }

    /// `pattern ∪ condition`, the WHERE part of the associated CONSTRUCT.
    pub fn body(&self) -> Bgp {
        self.pattern.union(&self.condition)
    }

    pub fn construct_query(&self) -> ConstructQuery {
        construct_query_of(self)
    }

    pub fn constants(&self) -> BTreeSet<Term> {
        let mut out = self.pattern.constants();
        out.extend(self.condition.constants());
        out
    }
}

impl fmt::Display for CompletenessStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Compl({}", self.pattern)?;
        if self.condition.is_empty() {
            f.write_str(" | true)")
        } else {
            write!(f, " | {})", self.condition)
        }
    }
}

/// A set of completeness statements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StatementSet {
    statements: BTreeSet<CompletenessStatement>,
}

impl StatementSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: CompletenessStatement) -> bool {
        self.statements.insert(c)
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn contains(&self, c: &CompletenessStatement) -> bool {
        self.statements.contains(c)
    }

    pub fn iter(&self) -> btree_set::Iter<'_, CompletenessStatement> {
        self.statements.iter()
    }

    pub fn constants(&self) -> BTreeSet<Term> {
        self.statements.iter().flat_map(|c| c.constants()).collect()
    }
}

impl FromIterator<CompletenessStatement> for StatementSet {
    fn from_iter<I: IntoIterator<Item = CompletenessStatement>>(iter: I) -> Self {
        StatementSet {
            statements: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a StatementSet {
    type Item = &'a CompletenessStatement;
    type IntoIter = btree_set::Iter<'a, CompletenessStatement>;

    fn into_iter(self) -> Self::IntoIter {
        self.statements.iter()
    }
}

/// `CONSTRUCT template WHERE pattern`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructQuery {
    pub template: Bgp,
    pub pattern: GraphPattern,
}

impl ConstructQuery {
    /// Evaluates the query. The template of a statement's query is part of
    /// its WHERE clause, so every instantiation is ground.
    pub fn eval(&self, g: &Graph) -> Graph {
        construct_unchecked(&self.template, &self.pattern, g)
    }
}

pub fn construct_query_of(c: &CompletenessStatement) -> ConstructQuery {
    ConstructQuery {
        template: c.pattern.clone(),
        pattern: GraphPattern::positive(c.body()),
    }
}

/// `(g, g_prime) ⊨ c`.
pub fn satisfies_pair(g: &Graph, g_prime: &Graph, c: &CompletenessStatement) -> Result<bool> {
    if !is_subgraph(g, g_prime) {
        return Err(Error::NotAnInterpretation);
    }
    Ok(pair_satisfies(g, g_prime, c))
}

pub fn satisfies_pair_set(g: &Graph, g_prime: &Graph, cs: &StatementSet) -> Result<bool> {
    if !is_subgraph(g, g_prime) {
        return Err(Error::NotAnInterpretation);
    }
    Ok(cs.iter().all(|c| pair_satisfies(g, g_prime, c)))
}

fn pair_satisfies(g: &Graph, g_prime: &Graph, c: &CompletenessStatement) -> bool {
    is_subgraph(&construct_query_of(c).eval(g_prime), g)
}

/// A BGP with every variable replaced by a distinct reserved IRI.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrozenGraph {
    pub graph: Graph,
    pub frozen_map: BTreeMap<String, Term>,
}

impl FrozenGraph {
    /// The freezing substitution as a solution mapping.
    pub fn mapping(&self) -> SolutionMapping {
        self.frozen_map
            .iter()
            .fold(SolutionMapping::new(), |mu, (v, t)| mu.with(v.clone(), t.clone()))
    }
}

/// The IRI a variable is frozen to.
pub fn frozen_iri(var: &str) -> Term {
    Term::iri(format!("{FROZEN_NAMESPACE}{var}"))
}

pub fn freeze(p: &Bgp) -> FrozenGraph {
    let frozen_map: BTreeMap<String, Term> = p
        .vars()
        .into_iter()
        .map(|v| {
            let iri = frozen_iri(&v);
            (v, iri)
        })
        .collect();
    let mut frozen = FrozenGraph {
        graph: Graph::new(),
        frozen_map,
    };
    let mu = frozen.mapping();
    frozen.graph = apply_mapping(&mu, p)
        .iter()
        .filter_map(|tp| tp.to_triple())
        .collect();
    frozen
}

/// The union of every statement's CONSTRUCT result over `g`.
pub fn transfer(cs: &StatementSet, g: &Graph) -> Graph {
    cs.iter().flat_map(|c| construct_query_of(c).eval(g)).collect()
}

/// Evidence behind an entailment verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntailmentCheck {
    /// The frozen body of the target statement, used as upper graph.
    pub frozen: FrozenGraph,
    /// The transfer of the frozen graph: the least lower graph that makes
    /// the pair valid for the premises.
    pub transferred: Graph,
    /// What the target statement demands over the frozen graph.
    pub required: Graph,
    pub holds: bool,
}

impl EntailmentCheck {
    /// Required triples the premises fail to guarantee.
    pub fn missing(&self) -> Graph {
        self.required.difference(&self.transferred)
    }
}

/// Runs the frozen-pair containment test for `cs ⊨ c`.
pub fn check_entailment(cs: &StatementSet, c: &CompletenessStatement) -> EntailmentCheck {
    let frozen = freeze(&c.body());
    let transferred = transfer(cs, &frozen.graph);
    let required = construct_query_of(c).eval(&frozen.graph);
    let holds = is_subgraph(&required, &transferred);
    EntailmentCheck {
        frozen,
        transferred,
        required,
        holds,
    }
}

pub fn entails(cs: &StatementSet, c: &CompletenessStatement) -> bool {
    check_entailment(cs, c).holds
}

pub fn entails_all(cs: &StatementSet, targets: &StatementSet) -> bool {
    targets.iter().all(|c| entails(cs, c))
}
