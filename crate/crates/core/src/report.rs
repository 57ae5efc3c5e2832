//! Command orchestration and report documents.
//!
//! Reports are built from ordered collections only, so identical inputs
//! always serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::classifier::{classify, Classification, EntailmentFact, Label};
use crate::completeness::{check_entailment, StatementSet};
use crate::error::{Error, Result};
use crate::eval::{eval_query, AnswerSet};
use crate::oracle::{bounded_answers, Universe, DEFAULT_CANDIDATE_CAP, DEFAULT_FRESH_CONSTANTS};
use crate::query::{check_consistency, Query};
use crate::rdf::{Graph, Term};
use crate::syntax::{parse_ntriples, parse_query, parse_statement, parse_statements};

/// Largest candidate pool the oracle may be asked to enumerate.
pub const MAX_CANDIDATE_CAP: usize = 24;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Eval,
    Classify,
    Entails,
    Oracle,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Eval => "eval",
            Subcommand::Classify => "classify",
            Subcommand::Entails => "entails",
            Subcommand::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkspaceConfig {
    pub graph_path: PathBuf,
    pub statements_path: Option<PathBuf>,
    /// Query file; for `entails`, the file holding the target statement.
    pub query_path: PathBuf,
    /// Optional explicit candidate pool for `oracle`, in N-Triples.
    pub candidates_path: Option<PathBuf>,
    pub fresh_constants: usize,
    pub candidate_cap: usize,
    pub output_format: OutputFormat,
    /// Shuffles the oracle's enumeration order; never changes results.
    pub seed: Option<u64>,
}

impl WorkspaceConfig {
    pub fn new(graph_path: impl Into<PathBuf>, query_path: impl Into<PathBuf>) -> Self {
        WorkspaceConfig {
            graph_path: graph_path.into(),
            statements_path: None,
            query_path: query_path.into(),
            candidates_path: None,
            fresh_constants: DEFAULT_FRESH_CONSTANTS,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            output_format: OutputFormat::Json,
            seed: None,
        }
    }

    pub fn with_statements(mut self, path: impl Into<PathBuf>) -> Self {
        self.statements_path = Some(path.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.candidate_cap == 0 || self.candidate_cap > MAX_CANDIDATE_CAP {
            return Err(Error::Config(format!(
                "candidate cap must be between 1 and {MAX_CANDIDATE_CAP}, got {}",
                self.candidate_cap
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermDoc {
    pub kind: &'static str,
    pub value: String,
}

impl From<&Term> for TermDoc {
    fn from(t: &Term) -> Self {
        TermDoc {
            kind: t.kind_name(),
            value: t.lexical().to_owned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnswerSetDoc {
    pub variables: Vec<String>,
    pub count: usize,
    pub bindings: Vec<BTreeMap<String, TermDoc>>,
}

impl From<&AnswerSet> for AnswerSetDoc {
    fn from(a: &AnswerSet) -> Self {
        AnswerSetDoc {
            variables: a.domain().iter().cloned().collect(),
            count: a.len(),
            bindings: a
                .iter()
                .map(|mu| mu.iter().map(|(k, v)| (k.clone(), v.into())).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationDoc {
    pub label: Label,
    pub certain_guarantee: bool,
    pub possible_bound_guarantee: bool,
    pub rationale: Vec<EntailmentFact>,
    pub note: &'static str,
}

fn label_note(label: Label) -> &'static str {
    match label {
        Label::CertainAndComplete => {
            "every answer is certain and no other answer is possible"
        }
        Label::CertainLowerBound => {
            "every answer is certain; further answers may be possible"
        }
        Label::PossibleUpperBound => {
            "no possible answer is missing; answers are not guaranteed to be certain"
        }
        Label::NoGuarantee => {
            "no sufficient condition holds; this does not prove that answers are missing or uncertain"
        }
    }
}

impl From<&Classification> for ClassificationDoc {
    fn from(c: &Classification) -> Self {
        ClassificationDoc {
            label: c.label,
            certain_guarantee: c.certain_guarantee,
            possible_bound_guarantee: c.possible_bound_guarantee,
            rationale: c.rationale.clone(),
            note: label_note(c.label),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntailmentDoc {
    pub target: String,
    pub entailed: bool,
    pub frozen_map: BTreeMap<String, String>,
    pub frozen_graph: Vec<String>,
    pub transferred: Vec<String>,
    pub required: Vec<String>,
    pub missing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniverseDoc {
    pub base_triples: usize,
    pub candidate_triples: usize,
    pub fresh_constants: usize,
    pub candidate_cap: usize,
    pub explicit_candidates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDoc {
    pub universe: UniverseDoc,
    pub interpretation_count: usize,
    pub certain: AnswerSetDoc,
    pub possible: AnswerSetDoc,
    /// Guarantees contradicted by the bounded answers. Non-empty means an
    /// internal invariant was violated.
    pub discrepancies: Vec<String>,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<AnswerSetDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entailment: Option<EntailmentDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_summary: Option<OracleDoc>,
    pub diagnostics: Vec<String>,
}

impl ReportDocument {
    fn new(command: Subcommand) -> Self {
        ReportDocument {
            command: command.name(),
            solutions: None,
            classification: None,
            entailment: None,
            oracle_summary: None,
            diagnostics: Vec::new(),
        }
    }

    /// 2 if the oracle contradicted a guarantee, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        match &self.oracle_summary {
            Some(o) if !o.discrepancies.is_empty() => 2,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(s) = &self.solutions {
            write_answers(&mut out, "solutions", s);
        }
        if let Some(c) = &self.classification {
            let _ = writeln!(out, "classification: {}", c.label.as_str());
            let _ = writeln!(out, "  certain guarantee: {}", c.certain_guarantee);
            let _ = writeln!(out, "  possible-bound guarantee: {}", c.possible_bound_guarantee);
            for fact in &c.rationale {
                let verdict = if fact.entailed { "entailed" } else { "not entailed" };
                let _ = writeln!(out, "  {}: {}", fact.statement, verdict);
            }
            let _ = writeln!(out, "  note: {}", c.note);
        }
        if let Some(e) = &self.entailment {
            let _ = writeln!(out, "target: {}", e.target);
            let _ = writeln!(out, "entailed: {}", e.entailed);
            for (name, lines) in [
                ("frozen graph", &e.frozen_graph),
                ("transferred", &e.transferred),
                ("required", &e.required),
                ("missing", &e.missing),
            ] {
                let _ = writeln!(out, "{name}:");
                for l in lines {
                    let _ = writeln!(out, "  {l}");
                }
            }
        }
        if let Some(o) = &self.oracle_summary {
            let u = &o.universe;
            let _ = writeln!(
                out,
                "oracle: {} valid interpretations over {} base + {} candidate triples ({} fresh constants)",
                o.interpretation_count, u.base_triples, u.candidate_triples, u.fresh_constants
            );
            write_answers(&mut out, "bounded certain", &o.certain);
            write_answers(&mut out, "bounded possible", &o.possible);
            if o.discrepancies.is_empty() {
                let _ = writeln!(out, "discrepancies: none");
            }
            for d in &o.discrepancies {
                let _ = writeln!(out, "DISCREPANCY: {d}");
            }
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "warning: {d}");
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Text => self.to_text(),
        }
    }
}

fn write_answers(out: &mut String, title: &str, a: &AnswerSetDoc) {
    let vars: Vec<String> = a.variables.iter().map(|v| format!("?{v}")).collect();
    let _ = writeln!(out, "{title} ({}) over [{}]:", a.count, vars.join(" "));
    for b in &a.bindings {
        let row: Vec<String> = b
            .iter()
            .map(|(k, v)| match v.kind {
                "literal" => format!("?{k}=\"{}\"", v.value),
                _ => format!("?{k}=<{}>", v.value),
            })
            .collect();
        let _ = writeln!(out, "  {}", if row.is_empty() { "{}".into() } else { row.join(" ") });
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_owned(),
        reason: e.to_string(),
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|e| e.in_file(path))
}

fn load_statements(config: &WorkspaceConfig) -> Result<StatementSet> {
    match &config.statements_path {
        Some(p) => load(p, parse_statements),
        None => Ok(StatementSet::new()),
    }
}

fn lines(g: &Graph) -> Vec<String> {
    g.iter().map(|t| t.to_string()).collect()
}

fn consistency_diagnostics(q: &Query) -> Vec<String> {
    if check_consistency(q) {
        Vec::new()
    } else {
        vec!["query is possibly inconsistent: a NOT EXISTS block matches the frozen positive part"
            .to_string()]
    }
}

/// Runs one subcommand against the files named in `config`.
pub fn run(config: &WorkspaceConfig, command: Subcommand) -> Result<ReportDocument> {
    config.validate()?;
    let graph = load(&config.graph_path, parse_ntriples)?;
    let statements = load_statements(config)?;
    let mut report = ReportDocument::new(command);

    if command == Subcommand::Entails {
        let target = load(&config.query_path, parse_statement)?;
        let check = check_entailment(&statements, &target);
        report.entailment = Some(EntailmentDoc {
            target: target.to_string(),
            entailed: check.holds,
            frozen_map: check
                .frozen
                .frozen_map
                .iter()
                .map(|(k, v)| (k.clone(), v.lexical().to_owned()))
                .collect(),
            frozen_graph: lines(&check.frozen.graph),
            transferred: lines(&check.transferred),
            required: lines(&check.required),
            missing: lines(&check.missing()),
        });
        return Ok(report);
    }

    let query = load(&config.query_path, parse_query)?;
    let answers = eval_query(&query, &graph)?;
    report.solutions = Some((&answers).into());
    if command == Subcommand::Eval {
        return Ok(report);
    }

    report.diagnostics = consistency_diagnostics(&query);
    let classification = classify(&query, &statements)?;
    report.classification = Some((&classification).into());
    if command == Subcommand::Classify {
        return Ok(report);
    }

    let explicit = config.candidates_path.is_some();
    let mut universe = match &config.candidates_path {
        Some(p) => Universe::new(graph.clone(), load(p, parse_ntriples)?),
        None => Universe::build(&graph, &statements, &query, config.fresh_constants),
    };
    if let Some(seed) = config.seed {
        universe = universe.shuffled(seed);
    }
    let bounded = bounded_answers(&query, &graph, &statements, &universe, config.candidate_cap)?;
    let discrepancies = cross_check(&classification, &answers, &bounded.certain, &bounded.possible);
    report.oracle_summary = Some(OracleDoc {
        universe: UniverseDoc {
            base_triples: graph.len(),
            candidate_triples: universe.candidates().len(),
            fresh_constants: if explicit { 0 } else { config.fresh_constants },
            candidate_cap: config.candidate_cap,
            explicit_candidates: explicit,
        },
        interpretation_count: bounded.interpretation_count,
        certain: (&bounded.certain).into(),
        possible: (&bounded.possible).into(),
        discrepancies,
        note: "bounded answers are relative to the universe above: certain over-approximates and possible under-approximates the unbounded sets",
    });
    Ok(report)
}

/// Checks the classifier's guarantees and the basic sandwich
/// `certain ⊆ result ⊆ possible` against bounded answers.
pub fn cross_check(
    classification: &Classification,
    result: &AnswerSet,
    certain: &AnswerSet,
    possible: &AnswerSet,
) -> Vec<String> {
    let mut out = Vec::new();
    if !certain.is_subset(result) {
        out.push("bounded certain answers are not contained in the query result".into());
    }
    if !result.is_subset(possible) {
        out.push("query result is not contained in the bounded possible answers".into());
    }
    if classification.certain_guarantee && !result.is_subset(certain) {
        out.push("certain guarantee violated: some result is not a bounded certain answer".into());
    }
    if classification.possible_bound_guarantee && !possible.is_subset(result) {
        out.push("possible-bound guarantee violated: a bounded possible answer is missing from the result".into());
    }
    out
}
