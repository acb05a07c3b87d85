//! On-disk JSON form of a diagram.
//!
//! ```json
//! {
//!   "name": "trefoil",
//!   "crossings": [
//!     {"id": 1, "slots": [{"edge": 1, "dir": "in", "level": "over"}, ...]}
//!   ],
//!   "outer_face": 1
//! }
//! ```
//!
//! `outer_face` is either a face id (ids are assigned deterministically, see
//! [`super::Diagram`]), the cyclic list of edge ids bounding the face, or an
//! `{"edge": e, "side": "left" | "right"}` pair naming the face on one side
//! of an oriented edge.

use serde::{Deserialize, Serialize};

use super::{Direction, Level, Side};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotSpec {
    pub edge: u32,
    pub dir: Direction,
    pub level: Level,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingSpec {
    pub id: u32,
    /// Four slots in counterclockwise order.
    pub slots: Vec<SlotSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OuterFaceSpec {
    Id(usize),
    Boundary(Vec<u32>),
    EdgeSide { edge: u32, side: Side },
}

impl std::fmt::Display for OuterFaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OuterFaceSpec::Id(id) => write!(f, "face {id}"),
            OuterFaceSpec::Boundary(edges) => write!(f, "face bounded by {edges:?}"),
            OuterFaceSpec::EdgeSide { edge, side } => write!(f, "face {side} of edge {edge}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub name: String,
    pub crossings: Vec<CrossingSpec>,
    pub outer_face: OuterFaceSpec,
}

impl DiagramSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram spec serializes")
    }
}
