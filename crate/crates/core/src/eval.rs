//! Evaluation of BGPs, `NOT EXISTS` patterns, queries and CONSTRUCT queries.
//!
//! BGPs are matched by a backtracking join that always extends the current
//! solution with the pattern having the most bound positions. Negated BGPs
//! are checked per solution after the positive part is matched.

use std::collections::{btree_set, BTreeSet};

use crate::error::{Error, Result};
use crate::query::{vars_of, Bgp, GraphPattern, Query, TriplePattern};
use crate::rdf::{restrict, Graph, SolutionMapping, Term, Triple};

/// A set of solutions, each restricted to `domain`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AnswerSet {
    domain: BTreeSet<String>,
    solutions: BTreeSet<SolutionMapping>,
}

impl AnswerSet {
    pub fn new(domain: BTreeSet<String>) -> Self {
        AnswerSet {
            domain,
            solutions: BTreeSet::new(),
        }
    }

    pub fn from_solutions(
        domain: BTreeSet<String>,
        solutions: impl IntoIterator<Item = SolutionMapping>,
    ) -> Self {
        let mut out = Self::new(domain);
        for s in solutions {
            out.insert(s);
        }
        out
    }

    /// Inserts a solution after restricting it to the domain.
    pub fn insert(&mut self, mu: SolutionMapping) -> bool {
        let mu = if mu.iter().all(|(k, _)| self.domain.contains(k)) {
            mu
        } else {
            restrict(&mu, &self.domain)
        };
        self.solutions.insert(mu)
    }

    pub fn domain(&self) -> &BTreeSet<String> {
        &self.domain
    }

    pub fn solutions(&self) -> &BTreeSet<SolutionMapping> {
        &self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, mu: &SolutionMapping) -> bool {
        self.solutions.contains(mu)
    }

    pub fn iter(&self) -> btree_set::Iter<'_, SolutionMapping> {
        self.solutions.iter()
    }

    pub fn is_subset(&self, other: &AnswerSet) -> bool {
        self.solutions.is_subset(&other.solutions)
    }

    pub fn intersection(&self, other: &AnswerSet) -> AnswerSet {
        AnswerSet {
            domain: self.domain.clone(),
            solutions: self
                .solutions
                .intersection(&other.solutions)
                .cloned()
                .collect(),
        }
    }

    pub fn union(&self, other: &AnswerSet) -> AnswerSet {
        AnswerSet {
            domain: self.domain.clone(),
            solutions: self.solutions.union(&other.solutions).cloned().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a AnswerSet {
    type Item = &'a SolutionMapping;
    type IntoIter = btree_set::Iter<'a, SolutionMapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.solutions.iter()
    }
}

/// All total mappings `mu` over `var(p)` with `mu(p) ⊆ g`.
pub fn eval_bgp(p: &Bgp, g: &Graph) -> AnswerSet {
    let mut out = AnswerSet::new(vars_of(p));
    let remaining: Vec<&TriplePattern> = p.iter().collect();
    join(remaining, SolutionMapping::new(), g, &mut |mu| {
        out.solutions.insert(mu);
    });
    out
}

fn join(
    mut remaining: Vec<&TriplePattern>,
    mu: SolutionMapping,
    g: &Graph,
    emit: &mut impl FnMut(SolutionMapping),
) {
    let Some(next) = most_bound(&remaining, &mu) else {
        emit(mu);
        return;
    };
    let pattern = remaining.swap_remove(next);
    for triple in g {
        if let Some(extended) = match_triple(pattern, triple, &mu) {
            join(remaining.clone(), extended, g, emit);
        }
    }
}

fn most_bound(remaining: &[&TriplePattern], mu: &SolutionMapping) -> Option<usize> {
    let bound = |tp: &TriplePattern| {
        tp.terms()
            .into_iter()
            .filter(|t| match t {
                Term::Variable(v) => mu.get(v).is_some(),
                _ => true,
            })
            .count()
    };
    // max_by_key keeps the last maximum; reverse so ties pick the first pattern
    remaining
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, tp)| bound(tp))
        .map(|(i, _)| i)
}

fn match_triple(
    pattern: &TriplePattern,
    triple: &Triple,
    mu: &SolutionMapping,
) -> Option<SolutionMapping> {
    let mut out = mu.clone();
    for (pt, tt) in pattern.terms().into_iter().zip(triple.terms()) {
        match pt {
            Term::Variable(v) => match out.get(v) {
                Some(bound) if bound != tt => return None,
                Some(_) => {}
                None => {
                    out.bind(v.clone(), tt.clone()).ok()?;
                }
            },
            constant if constant != tt => return None,
            _ => {}
        }
    }
    Some(out)
}

/// Replaces every variable bound in `mu`; unbound variables stay.
pub fn apply_mapping(mu: &SolutionMapping, p: &Bgp) -> Bgp {
    p.iter().map(|tp| apply_to_pattern(mu, tp)).collect()
}

pub(crate) fn apply_to_pattern(mu: &SolutionMapping, tp: &TriplePattern) -> TriplePattern {
    let sub = |t: &Term| match t {
        Term::Variable(v) => mu.get(v).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    };
    TriplePattern {
        subject: sub(&tp.subject),
        predicate: sub(&tp.predicate),
        object: sub(&tp.object),
    }
}

/// Solutions of the positive part whose instantiation of every negated BGP
/// has no match in `g`.
pub fn eval_pattern(p: &GraphPattern, g: &Graph) -> AnswerSet {
    let positive = eval_bgp(&p.positive, g);
    if p.negatives.is_empty() {
        return positive;
    }
    let AnswerSet { domain, solutions } = positive;
    let solutions = solutions
        .into_iter()
        .filter(|mu| {
            p.negatives
                .iter()
                .all(|neg| eval_bgp(&apply_mapping(mu, neg), g).is_empty())
        })
        .collect();
    AnswerSet { domain, solutions }
}

/// Evaluates the pattern and restricts every solution to the distinguished
/// variables.
pub fn eval_query(q: &Query, g: &Graph) -> Result<AnswerSet> {
    q.ensure_safe()?;
    Ok(project(q, eval_pattern(&q.pattern, g)))
}

pub(crate) fn project(q: &Query, answers: AnswerSet) -> AnswerSet {
    AnswerSet::from_solutions(
        q.distinguished.clone(),
        answers.iter().map(|mu| restrict(mu, &q.distinguished)),
    )
}

/// Instantiates `template` with every solution of `where_` over `g`.
///
/// Instantiations that are not valid RDF triples (a literal bound in
/// subject position) are dropped.
pub fn eval_construct(template: &Bgp, where_: &GraphPattern, g: &Graph) -> Result<Graph> {
    let available = where_.positive.vars();
    let missing: Vec<String> = template
        .vars()
        .into_iter()
        .filter(|v| !available.contains(v))
        .collect();
    if !missing.is_empty() {
        return Err(Error::IllFormedConstruct(missing));
    }
    Ok(construct_unchecked(template, where_, g))
}

pub(crate) fn construct_unchecked(template: &Bgp, where_: &GraphPattern, g: &Graph) -> Graph {
    eval_pattern(where_, g)
        .iter()
        .flat_map(|mu| {
            template
                .iter()
                .filter_map(|tp| apply_to_pattern(mu, tp).to_triple())
                .collect::<Vec<_>>()
        })
        .collect()
}
