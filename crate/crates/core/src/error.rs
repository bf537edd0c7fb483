use std::fmt;

use thiserror::Error;

use crate::formula::{Agent, Formula, Group};
use crate::kernel::{Basis, RuleTag};
use crate::sexpr::ParseError;

/// Location of a node in a proof tree: the child indices taken from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v.push(k);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for k in &self.0 {
            write!(f, "/{k}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("not a tautology: {0}")]
    NotATautology(Formula),
    #[error("tautology check too large: {vars} abstract variables (limit {limit})")]
    TautologyTooLarge { vars: usize, limit: usize },
    #[error("unknown agent {0}")]
    UnknownAgent(Agent),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("duplicate axiom `{0}`")]
    DuplicateAxiom(String),
    #[error("duplicate agent {0}")]
    DuplicateAgent(String),
    #[error("{rule} is not available in basis {basis}")]
    BasisViolation { rule: RuleTag, basis: Basis },
    #[error("theorem belongs to theory `{found}`, expected `{expected}`")]
    TheoryMismatch { expected: String, found: String },
    #[error("{rule}: expected {expected}, found {found}")]
    ShapeMismatch {
        rule: String,
        expected: String,
        found: String,
    },
    #[error("{rule}: missing parameter {param}")]
    MissingParameter { rule: RuleTag, param: &'static str },
    #[error("{rule}: unexpected parameter {param}")]
    UnexpectedParameter { rule: RuleTag, param: &'static str },
    #[error("agent {agent} is not a member of group {group}")]
    AgentNotInGroup { agent: Agent, group: Group },
    #[error("at {path}: KG uses agent {agent} outside group {group}")]
    AgentOutsideGroup {
        agent: Agent,
        group: Group,
        path: NodePath,
    },
    #[error("at {path}: LFB uses group {inner} not contained in {group}")]
    GroupOutsideGroup {
        inner: Group,
        group: Group,
        path: NodePath,
    },
    #[error("`{0}` is not a proper axiom of the theory")]
    UnknownHypothesis(String),
    #[error("at {path}: {source}")]
    AtNode { path: NodePath, source: Box<Error> },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Stable short name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::NotATautology(_) => "NotATautology",
            Error::TautologyTooLarge { .. } => "TautologyTooLarge",
            Error::UnknownAgent(_) => "UnknownAgent",
            Error::UnknownAxiom(_) => "UnknownAxiom",
            Error::DuplicateAxiom(_) => "DuplicateAxiom",
            Error::DuplicateAgent(_) => "DuplicateAgent",
            Error::BasisViolation { .. } => "BasisViolation",
            Error::TheoryMismatch { .. } => "TheoryMismatch",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::MissingParameter { .. } => "MissingParameter",
            Error::UnexpectedParameter { .. } => "UnexpectedParameter",
            Error::AgentNotInGroup { .. } => "AgentNotInGroup",
            Error::AgentOutsideGroup { .. } => "AgentOutsideGroup",
            Error::GroupOutsideGroup { .. } => "GroupOutsideGroup",
            Error::UnknownHypothesis(_) => "UnknownHypothesis",
            Error::AtNode { source, .. } => source.code(),
            Error::OutOfRange(_) => "OutOfRange",
            Error::ResourceLimit(_) => "ResourceLimit",
            Error::UnknownAtom(_) => "UnknownAtom",
            Error::Malformed(_) => "Malformed",
        }
    }

    /// The proof-node path this error refers to, if any.
    pub fn path(&self) -> Option<&NodePath> {
        match self {
            Error::AtNode { path, .. }
            | Error::AgentOutsideGroup { path, .. }
            | Error::GroupOutsideGroup { path, .. } => Some(path),
            _ => None,
        }
    }

    /// The error with any node-path annotation removed.
    pub fn innermost(&self) -> &Error {
        match self {
            Error::AtNode { source, .. } => source.innermost(),
            e => e,
        }
    }

    pub(crate) fn shape(
        rule: impl fmt::Display,
        expected: impl fmt::Display,
        found: impl fmt::Display,
    ) -> Error {
        Error::ShapeMismatch {
            rule: rule.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
