//! Bounded brute-force semantics over a finite universe.
//!
//! Valid interpretations are enumerated as every superset of the stored
//! graph drawn from a finite candidate pool, so certain answers computed
//! here over-approximate the real ones and possible answers
//! under-approximate them. Results are always bounds relative to the
//! universe used.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::completeness::{satisfies_pair, satisfies_pair_set, CompletenessStatement, StatementSet};
use crate::error::{Error, Result};
use crate::eval::{apply_to_pattern, eval_pattern, project, AnswerSet};
use crate::query::{Query, TriplePattern};
use crate::rdf::{Graph, SolutionMapping, Term, Triple, FRESH_NAMESPACE};

pub const DEFAULT_CANDIDATE_CAP: usize = 20;
pub const DEFAULT_FRESH_CONSTANTS: usize = 1;

/// The `i`-th synthetic constant.
pub fn fresh_iri(i: usize) -> Term {
    Term::iri(format!("{FRESH_NAMESPACE}{i}"))
}

/// A base graph plus the pool of triples interpretations may add to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    base: Graph,
    candidates: Vec<Triple>,
    fresh_constants: usize,
}

impl Universe {
    /// A universe with an explicit candidate pool. Candidates already in
    /// `base` are dropped.
    pub fn new(base: Graph, candidates: impl IntoIterator<Item = Triple>) -> Self {
        let pool: BTreeSet<Triple> = candidates
            .into_iter()
            .filter(|t| !base.contains(t))
            .collect();
        Universe {
            base,
            candidates: pool.into_iter().collect(),
            fresh_constants: 0,
        }
    }

    /// Builds the candidate pool for `q` over `g` under `cs`.
    ///
    /// Constants are those of the graph, the statements and the query, plus
    /// `fresh_constants` IRIs `urn:fresh:i`. The pool holds every
    /// well-positioned triple over those constants that matches at least one
    /// triple pattern of the query or of a statement; other triples cannot
    /// change any query answer or any satisfaction verdict.
    pub fn build(g: &Graph, cs: &StatementSet, q: &Query, fresh_constants: usize) -> Self {
        let mut constants = g.terms();
        constants.extend(cs.constants());
        constants.extend(q.constants());
        constants.extend((0..fresh_constants).map(fresh_iri));

        let mut patterns: Vec<&TriplePattern> = q.pattern.positive.iter().collect();
        for neg in &q.pattern.negatives {
            patterns.extend(neg.iter());
        }
        for c in cs {
            patterns.extend(c.pattern().iter());
            patterns.extend(c.condition().iter());
        }

        let mut pool = BTreeSet::new();
        for tp in patterns {
            instantiate_over(tp, &constants, &mut pool);
        }
        let mut u = Universe::new(g.clone(), pool);
        u.fresh_constants = fresh_constants;
        u
    }

    /// Permutes the candidate order. Enumeration results do not depend on
    /// the order; this only changes the order work is done in.
    pub fn shuffled(mut self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.candidates.shuffle(&mut rng);
        self
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn candidates(&self) -> &[Triple] {
        &self.candidates
    }

    pub fn fresh_constants(&self) -> usize {
        self.fresh_constants
    }

    fn check(&self, g: &Graph, cap: usize) -> Result<()> {
        if &self.base != g {
            return Err(Error::Config(
                "universe base graph differs from the queried graph".into(),
            ));
        }
        if self.candidates.len() > cap {
            return Err(Error::UniverseTooLarge {
                candidates: self.candidates.len(),
                cap,
            });
        }
        Ok(())
    }
}

fn instantiate_over(tp: &TriplePattern, constants: &BTreeSet<Term>, out: &mut BTreeSet<Triple>) {
    let choices = |t: &Term| -> Vec<Term> {
        match t {
            Term::Variable(_) => constants.iter().cloned().collect(),
            other => vec![other.clone()],
        }
    };
    for s in choices(tp.subject()).iter().filter(|t| t.is_iri()) {
        for p in choices(tp.predicate()).iter().filter(|t| t.is_iri()) {
            for o in choices(tp.object()) {
                let Ok(triple) = Triple::new(s.clone(), p.clone(), o) else {
                    continue;
                };
                // repeated variables must agree
                if matches_pattern(tp, &triple) {
                    out.insert(triple);
                }
            }
        }
    }
}

fn matches_pattern(tp: &TriplePattern, t: &Triple) -> bool {
    let mut mu = SolutionMapping::new();
    for (pt, tt) in tp.terms().into_iter().zip(t.terms()) {
        match pt {
            Term::Variable(v) => match mu.get(v) {
                Some(bound) if bound != tt => return false,
                Some(_) => {}
                None => {
                    let _ = mu.bind(v.clone(), tt.clone());
                }
            },
            c if c != tt => return false,
            _ => {}
        }
    }
    true
}

/// Calls `visit` on every valid interpretation of `g` in the universe and
/// returns how many there were. `g` itself is visited first.
pub fn for_each_valid_interpretation(
    g: &Graph,
    cs: &StatementSet,
    u: &Universe,
    cap: usize,
    mut visit: impl FnMut(&Graph),
) -> Result<usize> {
    u.check(g, cap)?;
    let n = u.candidates.len();
    let mut count = 0;
    for mask in 0u64..(1u64 << n) {
        let mut interp = g.clone();
        interp.extend(
            u.candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, t)| t.clone()),
        );
        if satisfies_pair_set(g, &interp, cs)? {
            count += 1;
            visit(&interp);
        }
    }
    Ok(count)
}

pub fn valid_interpretations(
    g: &Graph,
    cs: &StatementSet,
    u: &Universe,
    cap: usize,
) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for_each_valid_interpretation(g, cs, u, cap, |interp| out.push(interp.clone()))?;
    Ok(out)
}

/// Certain and possible answers relative to a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedAnswers {
    pub certain: AnswerSet,
    pub possible: AnswerSet,
    pub interpretation_count: usize,
}

/// Intersects (certain) and unites (possible) the query answers over every
/// valid interpretation in the universe.
pub fn bounded_answers(
    q: &Query,
    g: &Graph,
    cs: &StatementSet,
    u: &Universe,
    cap: usize,
) -> Result<BoundedAnswers> {
    q.ensure_safe()?;
    let mut certain: Option<AnswerSet> = None;
    let mut possible = AnswerSet::new(q.distinguished.clone());
    let count = for_each_valid_interpretation(g, cs, u, cap, |interp| {
        let answers = project(q, eval_pattern(&q.pattern, interp));
        possible = possible.union(&answers);
        certain = Some(match certain.take() {
            Some(c) => c.intersection(&answers),
            None => answers,
        });
    })?;
    Ok(BoundedAnswers {
        certain: certain.unwrap_or_else(|| AnswerSet::new(q.distinguished.clone())),
        possible,
        interpretation_count: count,
    })
}

/// Limits for [`find_entailment_counterexample`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterexampleBudget {
    /// Synthetic constants added to the constants of the statements.
    pub fresh_constants: usize,
    /// Upper bound on the variable assignments tried.
    pub max_assignments: usize,
}

impl Default for CounterexampleBudget {
    fn default() -> Self {
        CounterexampleBudget {
            fresh_constants: DEFAULT_FRESH_CONSTANTS,
            max_assignments: 200_000,
        }
    }
}

impl CounterexampleBudget {
    pub fn with_fresh_constants(fresh_constants: usize) -> Self {
        CounterexampleBudget {
            fresh_constants,
            ..Self::default()
        }
    }
}

/// Searches for a pair `(G, G')` that satisfies `cs` but not `c`.
///
/// Any counterexample shrinks to one whose upper graph is an instance of
/// the body of `c`, so the search instantiates that body with every
/// assignment of its variables to constants (fresh constants first, then
/// the constants of `cs` and `c` in term order) and tries every lower graph
/// `G ⊆ G'`, smallest subsets first. Verdicts are checked directly against
/// the satisfaction relation.
pub fn find_entailment_counterexample(
    cs: &StatementSet,
    c: &CompletenessStatement,
    budget: CounterexampleBudget,
) -> Option<(Graph, Graph)> {
    let mut domain: Vec<Term> = (0..budget.fresh_constants).map(fresh_iri).collect();
    let mut constants = cs.constants();
    constants.extend(c.constants());
    domain.extend(constants);

    let body = c.body();
    let vars: Vec<String> = body.vars().into_iter().collect();
    if domain.is_empty() && !vars.is_empty() {
        return None;
    }

    let mut digits = vec![0usize; vars.len()];
    for _ in 0..budget.max_assignments {
        let mu = vars
            .iter()
            .zip(&digits)
            .fold(SolutionMapping::new(), |mu, (v, &d)| mu.with(v.clone(), domain[d].clone()));
        if let Some(upper) = instantiate(&body, &mu) {
            if let Some(lower) = violating_lower_graph(cs, c, &upper) {
                return Some((lower, upper));
            }
        }
        if !advance(&mut digits, domain.len()) {
            break;
        }
    }
    None
}

fn instantiate(body: &crate::query::Bgp, mu: &SolutionMapping) -> Option<Graph> {
    body.iter()
        .map(|tp| apply_to_pattern(mu, tp).to_triple())
        .collect()
}

fn violating_lower_graph(
    cs: &StatementSet,
    c: &CompletenessStatement,
    upper: &Graph,
) -> Option<Graph> {
    let triples: Vec<&Triple> = upper.iter().collect();
    let n = triples.len();
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.into_iter().find_map(|mask| {
        let lower: Graph = triples
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| (*t).clone())
            .collect();
        let ok_cs = satisfies_pair_set(&lower, upper, cs).ok()?;
        let ok_c = satisfies_pair(&lower, upper, c).ok()?;
        (ok_cs && !ok_c).then_some(lower)
    })
}

/// Odometer increment; false once every digit wrapped.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_query;
    use crate::query::{Bgp, GraphPattern};

    fn iri(s: &str) -> Term {
        Term::iri(format!("urn:{s}"))
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), iri(o)).unwrap()
    }

    fn tp(s: Term, p: &str, o: Term) -> TriplePattern {
        TriplePattern::new(s, iri(p), o).unwrap()
    }

    fn bgp(ps: impl IntoIterator<Item = TriplePattern>) -> Bgp {
        ps.into_iter().collect()
    }

    fn graph(ts: impl IntoIterator<Item = Triple>) -> Graph {
        ts.into_iter().collect()
    }

    fn oscar() -> CompletenessStatement {
        CompletenessStatement::unconditional(bgp([tp(Term::var("x"), "won", iri("oscar"))])).unwrap()
    }

    fn x() -> BTreeSet<String> {
        BTreeSet::from(["x".to_string()])
    }

    #[test]
    fn no_candidates_only_base() {
        let g = graph([t("a", "won", "oscar")]);
        let u = Universe::new(g.clone(), []);
        assert_eq!(valid_interpretations(&g, &StatementSet::new(), &u, 20).unwrap(), vec![g]);
    }

    #[test]
    fn unconstrained_gives_every_superset() {
        let g = Graph::new();
        let u = Universe::new(g.clone(), [t("a", "p", "b"), t("b", "p", "c"), t("c", "p", "a")]);
        assert_eq!(valid_interpretations(&g, &StatementSet::new(), &u, 20).unwrap().len(), 8);
    }

    #[test]
    fn completeness_excludes_new_instances() {
        let g = graph([t("a", "won", "oscar")]);
        let u = Universe::new(g.clone(), [t("c", "won", "oscar"), t("c", "hasTattoo", "ink")]);
        let cs: StatementSet = [oscar()].into_iter().collect();
        let interps = valid_interpretations(&g, &cs, &u, 20).unwrap();
        assert_eq!(interps.len(), 2);
        assert!(interps.iter().all(|i| !i.contains(&t("c", "won", "oscar"))));
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::new();
        let u = Universe::new(g.clone(), [t("a", "p", "b"), t("b", "p", "c")]);
        assert_eq!(
            valid_interpretations(&g, &StatementSet::new(), &u, 1),
            Err(Error::UniverseTooLarge { candidates: 2, cap: 1 })
        );
    }

    #[test]
    fn base_mismatch_rejected() {
        let u = Universe::new(graph([t("a", "p", "b")]), []);
        assert!(matches!(
            valid_interpretations(&Graph::new(), &StatementSet::new(), &u, 20),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn bounded_answers_single_interpretation() {
        let g = graph([t("a", "won", "oscar")]);
        let q = Query::new(x(), GraphPattern::positive(bgp([tp(Term::var("x"), "won", iri("oscar"))])));
        let u = Universe::new(g.clone(), []);
        let b = bounded_answers(&q, &g, &StatementSet::new(), &u, 20).unwrap();
        let direct = eval_query(&q, &g).unwrap();
        assert_eq!(b.certain, direct);
        assert_eq!(b.possible, direct);
        assert_eq!(b.interpretation_count, 1);
    }

    #[test]
    fn owa_negation_has_no_certain_answers() {
        let g = graph([t("a", "won", "oscar")]);
        let q = Query::new(
            x(),
            GraphPattern::new(
                bgp([tp(Term::var("x"), "won", iri("oscar"))]),
                vec![bgp([tp(Term::var("x"), "hasTattoo", Term::var("t"))])],
            ),
        );
        let u = Universe::new(g.clone(), [t("a", "hasTattoo", "ink")]);
        let b = bounded_answers(&q, &g, &StatementSet::new(), &u, 20).unwrap();
        assert!(b.certain.is_empty());
        assert_eq!(
            b.possible.solutions(),
            &BTreeSet::from([SolutionMapping::new().with("x", iri("a"))])
        );
        assert_eq!(b.interpretation_count, 2);
    }

    #[test]
    fn built_pool_is_relevant_and_positioned() {
        let g = graph([t("a", "won", "oscar")]);
        let q = Query::new(x(), GraphPattern::positive(bgp([tp(Term::var("x"), "won", iri("oscar"))])));
        let u = Universe::build(&g, &StatementSet::new(), &q, 1);
        // subjects: a, won, oscar, urn:fresh:0; the base triple is excluded
        assert_eq!(u.candidates().len(), 3);
        assert!(u.candidates().iter().all(|c| c.predicate() == &iri("won")));
        assert!(u.candidates().contains(&Triple::new(fresh_iri(0), iri("won"), iri("oscar")).unwrap()));
    }

    #[test]
    fn shuffling_does_not_change_answers() {
        let g = graph([t("a", "won", "oscar")]);
        let q = Query::new(
            x(),
            GraphPattern::new(
                bgp([tp(Term::var("x"), "won", Term::var("y"))]),
                vec![bgp([tp(Term::var("x"), "hasTattoo", Term::var("t"))])],
            ),
        );
        let cs: StatementSet = [oscar()].into_iter().collect();
        let u = Universe::new(
            g.clone(),
            [
                t("a", "hasTattoo", "ink"),
                t("b", "won", "oscar"),
                t("b", "won", "gg"),
                t("a", "won", "gg"),
                t("b", "hasTattoo", "ink"),
            ],
        );
        let base = bounded_answers(&q, &g, &cs, &u, 24).unwrap();
        assert!(base.certain.is_subset(&base.possible));
        assert!(base.possible.len() > base.certain.len());
        for seed in 0..4 {
            let s = bounded_answers(&q, &g, &cs, &u.clone().shuffled(seed), 24).unwrap();
            assert_eq!(s, base);
        }
    }

    #[test]
    fn counterexample_examples() {
        let c = oscar();
        let cs: StatementSet = [c.clone()].into_iter().collect();
        assert_eq!(find_entailment_counterexample(&cs, &c, CounterexampleBudget::default()), None);

        let found = find_entailment_counterexample(&StatementSet::new(), &c, CounterexampleBudget::default());
        let expected_upper = graph([Triple::new(fresh_iri(0), iri("won"), iri("oscar")).unwrap()]);
        assert_eq!(found, Some((Graph::new(), expected_upper)));

        let general: StatementSet = [CompletenessStatement::unconditional(bgp([tp(
            Term::var("x"),
            "won",
            Term::var("y"),
        )]))
        .unwrap()]
        .into_iter()
        .collect();
        assert_eq!(
            find_entailment_counterexample(&general, &c, CounterexampleBudget::with_fresh_constants(2)),
            None
        );
    }

    #[test]
    fn odometer() {
        let mut d = vec![0, 0];
        let mut seen = 1;
        while advance(&mut d, 3) {
            seen += 1;
        }
        assert_eq!(seen, 9);
        assert_eq!(d, vec![0, 0]);
    }
}
