//! Answer-semantics guarantees derived from crucial completeness statements.
//!
//! Both guarantees are sufficient conditions only. A `false` flag (and the
//! `NO_GUARANTEE` label) records that no proof was found, not that the
//! query result actually misses certain or possible answers.

use std::fmt;

use serde::Serialize;

use crate::completeness::{check_entailment, CompletenessStatement, StatementSet};
use crate::error::Result;
use crate::query::Query;

/// `C⁺ = Compl(P⁺ | true)` and one `Compl(Pi | P⁺)` per negated BGP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrucialStatements {
    pub positive: CompletenessStatement,
    pub negatives: StatementSet,
}

pub fn crucial_of(q: &Query) -> Result<CrucialStatements> {
    q.ensure_safe()?;
    let positive = CompletenessStatement::unconditional(q.pattern.positive.clone())?;
    let negatives = q
        .pattern
        .negatives
        .iter()
        .map(|neg| CompletenessStatement::new(neg.clone(), q.pattern.positive.clone()))
        .collect::<Result<StatementSet>>()?;
    Ok(CrucialStatements {
        positive,
        negatives,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    /// Every answer is certain and there are no other possible answers.
    CertainAndComplete,
    /// Every answer is certain; more answers may be possible.
    CertainLowerBound,
    /// No possible answer is missing; answers need not be certain.
    PossibleUpperBound,
    NoGuarantee,
}

impl Label {
    pub fn from_guarantees(certain: bool, possible_bound: bool) -> Self {
        match (certain, possible_bound) {
            (true, true) => Label::CertainAndComplete,
            (true, false) => Label::CertainLowerBound,
            (false, true) => Label::PossibleUpperBound,
            (false, false) => Label::NoGuarantee,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::CertainAndComplete => "CERTAIN_AND_COMPLETE",
            Label::CertainLowerBound => "CERTAIN_LOWER_BOUND",
            Label::PossibleUpperBound => "POSSIBLE_UPPER_BOUND",
            Label::NoGuarantee => "NO_GUARANTEE",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrucialRole {
    Positive,
    /// Index into the query's negated BGPs, in written order.
    Negative(usize),
}

/// One entailment question asked while classifying, with its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntailmentFact {
    pub role: CrucialRole,
    pub statement: String,
    pub entailed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub certain_guarantee: bool,
    pub possible_bound_guarantee: bool,
    pub label: Label,
    pub rationale: Vec<EntailmentFact>,
}

/// Classifies the result of `q` with respect to the statements `cs`.
///
/// * certain: the query is positive, or `cs` entails every negative crucial
///   statement;
/// * possible bound: `cs` entails the positive crucial statement. For
///   queries with negation this needs no negative statement, since the
///   negated parts can only remove answers as the graph grows.
pub fn classify(q: &Query, cs: &StatementSet) -> Result<Classification> {
    let crucial = crucial_of(q)?;
    let mut rationale = Vec::with_capacity(1 + q.pattern.negatives.len());

    let positive_entailed = check_entailment(cs, &crucial.positive).holds;
    rationale.push(EntailmentFact {
        role: CrucialRole::Positive,
        statement: crucial.positive.to_string(),
        entailed: positive_entailed,
    });

    // walk the negatives in written order so the rationale indices line up
    let mut negatives_entailed = true;
    for (i, neg) in q.pattern.negatives.iter().enumerate() {
        let c = CompletenessStatement::new(neg.clone(), q.pattern.positive.clone())?;
        let entailed = check_entailment(cs, &c).holds;
        negatives_entailed &= entailed;
        rationale.push(EntailmentFact {
            role: CrucialRole::Negative(i),
            statement: c.to_string(),
            entailed,
        });
    }

    let certain_guarantee = q.is_positive() || negatives_entailed;
    let possible_bound_guarantee = positive_entailed;
    Ok(Classification {
        certain_guarantee,
        possible_bound_guarantee,
        label: Label::from_guarantees(certain_guarantee, possible_bound_guarantee),
        rationale,
    })
}
