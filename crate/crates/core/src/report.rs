use std::fmt;

use serde::{Deserialize, Serialize};

/// What went wrong, independent of the human-readable message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    // graph structure
    NoVertices,
    AnchorOutOfRange,
    InvolutionOutOfRange,
    InvolutionNotSelfInverse,
    LegNotFixedPoint,
    FixedPointWithoutLabel,
    DuplicateLegLabel,
    GenusTooLarge,
    Disconnected,
    // morphism structure
    MapLength,
    MapOutOfRange,
    VertexMapNotSurjective,
    HalfEdgeMapNotSurjective,
    InvolutionNotCommuting,
    AnchorNotCommuting,
    LocalDegreeInvalid,
    EdgeOntoLeg,
    EdgeDegree,
    LegPreimages,
    RiemannHurwitz,
    LocalBalance,
    LocalRiemannHurwitz,
    // prym structure
    WrongDegree,
    NotSemistable,
    SourceDisconnected,
    AdjacentSemistable,
    ExceptionalParity,
    RamificationPattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub message: String,
}

/// Collected validation failures. Empty means the object passed every check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, kind: IssueKind, message: impl Into<String>) {
        self.issues.push(Issue {
            kind,
            message: message.into(),
        });
    }

    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.issues.extend(other.issues);
    }

    pub(crate) fn prefixed(self, prefix: &str) -> Self {
        Self {
            issues: self
                .issues
                .into_iter()
                .map(|i| Issue {
                    kind: i.kind,
                    message: format!("{prefix}: {}", i.message),
                })
                .collect(),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", issue.message)?;
        }
        Ok(())
    }
}
