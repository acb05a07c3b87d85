use std::fmt;

use serde::Serialize;

use super::Level;

/// A single broken invariant found while building a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoCrossings,
    DuplicateCrossingId { crossing: u32 },
    SlotCount { crossing: u32, found: usize },
    /// The two `under` slots (and hence the two `over` slots) are not
    /// cyclically opposite.
    LevelPattern { crossing: u32 },
    /// A strand through a crossing does not have exactly one `in` and one
    /// `out` slot.
    Orientation { crossing: u32, level: Level },
    EdgeUsage { edge: u32, count: usize },
    EdgeDirection { edge: u32 },
    /// Face tracing produced the wrong number of faces for a sphere.
    Planarity { vertices: usize, edges: usize, faces: usize },
    Disconnected { pieces: usize },
    UnknownOuterFace { designator: String },
    AmbiguousOuterFace { designator: String },
    /// Stored derived data disagrees with a fresh derivation.
    Inconsistent { detail: String },
}

impl Violation {
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            Violation::Planarity { .. }
                | Violation::Disconnected { .. }
                | Violation::UnknownOuterFace { .. }
                | Violation::AmbiguousOuterFace { .. }
                | Violation::Inconsistent { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoCrossings => write!(f, "diagram has no crossings"),
            Violation::DuplicateCrossingId { crossing } => {
                write!(f, "crossing id {crossing} is used more than once")
            }
            Violation::SlotCount { crossing, found } => {
                write!(f, "crossing {crossing} has {found} slots, expected 4")
            }
            Violation::LevelPattern { crossing } => {
                write!(f, "crossing {crossing}: under slots are not cyclically opposite")
            }
            Violation::Orientation { crossing, level } => write!(
                f,
                "crossing {crossing}: {level} strand needs exactly one `in` and one `out` slot"
            ),
            Violation::EdgeUsage { edge, count } => {
                write!(f, "edge {edge} appears in {count} slots, expected 2")
            }
            Violation::EdgeDirection { edge } => {
                write!(f, "edge {edge} must have one `out` end and one `in` end")
            }
            Violation::Planarity { vertices, edges, faces } => write!(
                f,
                "Euler check failed: V - E + F = {vertices} - {edges} + {faces} != 2 (code is not planar)"
            ),
            Violation::Disconnected { pieces } => {
                write!(f, "diagram is split into {pieces} pieces")
            }
            Violation::UnknownOuterFace { designator } => {
                write!(f, "outer face `{designator}` does not exist")
            }
            Violation::AmbiguousOuterFace { designator } => {
                write!(f, "outer face `{designator}` matches more than one face")
            }
            Violation::Inconsistent { detail } => write!(f, "inconsistent derived data: {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn has_structural(&self) -> bool {
        self.violations.iter().any(Violation::is_structural)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "- {v}")?;
        }
        Ok(())
    }
}
