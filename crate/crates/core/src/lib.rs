//! Certain and possible answers for SPARQL queries with `NOT EXISTS` over
//! RDF graphs annotated with completeness statements.
//!
//! Under the open-world reading a graph is only a lower bound of reality;
//! completeness statements close parts of it. Given a query and a set of
//! statements, [`classifier::classify`] decides (soundly, via statement
//! entailment) whether the plain query result contains only certain
//! answers, all possible answers, both, or neither. The [`oracle`] module
//! computes the same notions by brute force over a bounded universe and
//! serves as ground truth in tests.

pub mod classifier;
pub mod completeness;
pub mod error;
pub mod eval;
pub mod oracle;
pub mod query;
pub mod rdf;
pub mod report;
pub mod syntax;

pub use classifier::{classify, crucial_of, Classification, CrucialStatements, Label};
pub use completeness::{
    check_entailment, entails, entails_all, freeze, satisfies_pair, satisfies_pair_set, transfer,
    CompletenessStatement, StatementSet,
};
pub use error::{Error, Result};
pub use eval::{eval_bgp, eval_construct, eval_pattern, eval_query, AnswerSet};
pub use query::{Bgp, GraphPattern, Query, TriplePattern};
pub use rdf::{Graph, SolutionMapping, Term, Triple};
