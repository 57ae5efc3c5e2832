//! Random instance generators and a naive evaluator shared by the
//! integration tests. The naive evaluator enumerates every function from
//! the query variables into the terms of the graph and shares no code with
//! the library's join.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use complrover::oracle::Universe;
use complrover::{
    AnswerSet, Bgp, CompletenessStatement, Graph, GraphPattern, Query, SolutionMapping,
    StatementSet, Term, Triple, TriplePattern,
};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn iri(s: &str) -> Term {
    Term::iri(format!("urn:ex:{s}"))
}

/// Vocabulary for one random instance.
#[derive(Clone, Debug)]
pub struct Vocab {
    pub subjects: Vec<Term>,
    pub predicates: Vec<Term>,
    pub objects: Vec<Term>,
    pub vars: Vec<&'static str>,
}

impl Vocab {
    /// Six constants: four entity IRIs doubling as objects, two predicates,
    /// and sometimes a literal in place of one entity.
    pub fn small(r: &mut ChaCha8Rng) -> Self {
        let entities: Vec<Term> = ["a", "b", "c"].iter().map(|s| iri(s)).collect();
        let predicates = vec![iri("p"), iri("q")];
        let mut objects = entities.clone();
        if r.gen_bool(0.3) {
            objects.push(Term::literal("lit"));
        } else {
            objects.push(iri("d"));
        }
        let mut subjects = entities;
        if let Term::Iri(_) = objects[3] {
            subjects.push(objects[3].clone());
        }
        Vocab {
            subjects,
            predicates,
            objects,
            vars: vec!["x", "y", "z"],
        }
    }

    pub fn constants(&self) -> BTreeSet<Term> {
        self.subjects
            .iter()
            .chain(&self.predicates)
            .chain(&self.objects)
            .cloned()
            .collect()
    }
}

pub fn random_graph(r: &mut ChaCha8Rng, v: &Vocab, max: usize) -> Graph {
    let n = r.gen_range(0..=max);
    (0..n)
        .map(|_| {
            Triple::new(
                v.subjects.choose(r).unwrap().clone(),
                v.predicates.choose(r).unwrap().clone(),
                v.objects.choose(r).unwrap().clone(),
            )
            .unwrap()
        })
        .collect()
}

fn random_position(r: &mut ChaCha8Rng, vars: &[&str], consts: &[Term], var_p: f64) -> Term {
    if r.gen_bool(var_p) {
        Term::var(*vars.choose(r).unwrap())
    } else {
        consts.choose(r).unwrap().clone()
    }
}

pub fn random_pattern(r: &mut ChaCha8Rng, v: &Vocab, vars: &[&str]) -> TriplePattern {
    TriplePattern::new(
        random_position(r, vars, &v.subjects, 0.7),
        random_position(r, vars, &v.predicates, 0.1),
        random_position(r, vars, &v.objects, 0.5),
    )
    .unwrap()
}

pub fn random_bgp(r: &mut ChaCha8Rng, v: &Vocab, vars: &[&str], min: usize, max: usize) -> Bgp {
    let n = r.gen_range(min..=max);
    (0..n).map(|_| random_pattern(r, v, vars)).collect()
}

/// A safe query with at most `max_negatives` NOT EXISTS blocks.
pub fn random_query(r: &mut ChaCha8Rng, v: &Vocab, max_pos: usize, max_negatives: usize, max_neg_len: usize) -> Query {
    let positive = random_bgp(r, v, &v.vars[..2], 1, max_pos);
    let n_neg = r.gen_range(0..=max_negatives);
    let negatives = (0..n_neg)
        .map(|_| random_bgp(r, v, &v.vars, 1, max_neg_len))
        .collect();
    let pos_vars = positive.vars();
    let distinguished = pos_vars
        .iter()
        .filter(|_| r.gen_bool(0.6))
        .cloned()
        .collect();
    Query::new(distinguished, GraphPattern::new(positive, negatives))
}

pub fn random_query_with_negation(r: &mut ChaCha8Rng, v: &Vocab) -> Query {
    loop {
        let q = random_query(r, v, 2, 2, 2);
        if !q.is_positive() {
            return q;
        }
    }
}

pub fn random_statement(r: &mut ChaCha8Rng, v: &Vocab, max_pattern: usize, max_condition: usize) -> CompletenessStatement {
    let pattern = random_bgp(r, v, &v.vars, 1, max_pattern);
    let condition = random_bgp(r, v, &v.vars, 0, max_condition);
    CompletenessStatement::new(pattern, condition).unwrap()
}

/// Replaces some constants of a BGP by variables. Completeness of the
/// result implies completeness of the original.
pub fn generalize(r: &mut ChaCha8Rng, p: &Bgp) -> Bgp {
    let mut fresh = 0;
    p.iter()
        .map(|tp| {
            let mut gen = |t: &Term, allow: bool| {
                if allow && t.is_ground() && r.gen_bool(0.3) {
                    fresh += 1;
                    Term::var(format!("g{fresh}"))
                } else {
                    t.clone()
                }
            };
            let s = gen(tp.subject(), true);
            let p = gen(tp.predicate(), false);
            let o = gen(tp.object(), true);
            TriplePattern::new(s, p, o).unwrap()
        })
        .collect()
}

/// Statements likely to make the crucial statements of `q` entailed, mixed
/// with noise.
pub fn helpful_statements(r: &mut ChaCha8Rng, v: &Vocab, q: &Query) -> StatementSet {
    let mut cs = StatementSet::new();
    if r.gen_bool(0.6) {
        let pos = &q.pattern.positive;
        if r.gen_bool(0.5) {
            cs.insert(CompletenessStatement::unconditional(generalize(r, pos)).unwrap());
        } else {
            for tp in pos {
                let single: Bgp = [tp.clone()].into_iter().collect();
                cs.insert(CompletenessStatement::unconditional(generalize(r, &single)).unwrap());
            }
        }
    }
    for neg in &q.pattern.negatives {
        if r.gen_bool(0.6) {
            let condition = if r.gen_bool(0.5) {
                q.pattern.positive.clone()
            } else {
                Bgp::new()
            };
            cs.insert(CompletenessStatement::new(generalize(r, neg), condition).unwrap());
        }
    }
    for _ in 0..r.gen_range(0..=1) {
        cs.insert(random_statement(r, v, 2, 1));
    }
    cs
}

/// Universe for `q` over `g` with at most `max_pool` candidates drawn from
/// the relevant pool.
pub fn bounded_universe(
    r: &mut ChaCha8Rng,
    g: &Graph,
    cs: &StatementSet,
    q: &Query,
    fresh: usize,
    max_pool: usize,
) -> Universe {
    let full = Universe::build(g, cs, q, fresh);
    let size = r.gen_range(0..=max_pool).min(full.candidates().len());
    let picked: Vec<Triple> = full.candidates().iter().cloned().choose_multiple(r, size);
    Universe::new(g.clone(), picked)
}

fn for_each_function(
    vars: &[String],
    domain: &[Term],
    f: &mut impl FnMut(&BTreeMap<String, Term>) -> bool,
) -> bool {
    fn go(
        i: usize,
        vars: &[String],
        domain: &[Term],
        cur: &mut BTreeMap<String, Term>,
        f: &mut impl FnMut(&BTreeMap<String, Term>) -> bool,
    ) -> bool {
        if i == vars.len() {
            return f(cur);
        }
        for d in domain {
            cur.insert(vars[i].clone(), d.clone());
            if !go(i + 1, vars, domain, cur, f) {
                return false;
            }
        }
        cur.remove(&vars[i]);
        true
    }
    go(0, vars, domain, &mut BTreeMap::new(), f)
}

fn substitute(t: &Term, m: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Variable(v) => m.get(v).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    }
}

fn image_in_graph(p: &Bgp, m: &BTreeMap<String, Term>, g: &Graph) -> bool {
    p.iter().all(|tp| {
        Triple::new(
            substitute(tp.subject(), m),
            substitute(tp.predicate(), m),
            substitute(tp.object(), m),
        )
        .map(|t| g.contains(&t))
        .unwrap_or(false)
    })
}

/// `{ mu|W : mu(P+) ⊆ G and for all i no extension nu of mu has nu(Pi) ⊆ G }`
/// by exhaustive enumeration.
pub fn naive_eval_query(q: &Query, g: &Graph) -> AnswerSet {
    let domain: Vec<Term> = g.terms().into_iter().collect();
    let pos_vars: Vec<String> = q.pattern.positive.vars().into_iter().collect();
    let mut out = AnswerSet::new(q.distinguished.clone());
    for_each_function(&pos_vars, &domain, &mut |mu| {
        if !image_in_graph(&q.pattern.positive, mu, g) {
            return true;
        }
        let blocked = q.pattern.negatives.iter().any(|neg| {
            let extra: Vec<String> = neg
                .vars()
                .into_iter()
                .filter(|v| !mu.contains_key(v))
                .collect();
            let mut found = false;
            for_each_function(&extra, &domain, &mut |ext| {
                let mut full = mu.clone();
                full.extend(ext.iter().map(|(k, v)| (k.clone(), v.clone())));
                if image_in_graph(neg, &full, g) {
                    found = true;
                    return false;
                }
                true
            });
            found
        });
        if !blocked {
            let restricted = mu
                .iter()
                .filter(|(k, _)| q.distinguished.contains(*k))
                .fold(SolutionMapping::new(), |m, (k, v)| m.with(k.clone(), v.clone()));
            out.insert(restricted);
        }
        true
    });
    out
}

pub fn fixture(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}
