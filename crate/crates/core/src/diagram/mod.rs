//! Oriented 4-valent planar diagrams.
//!
//! A diagram is given crossing by crossing. Each crossing lists its four
//! half-edge slots in counterclockwise order; every slot names the edge
//! attached there, whether the edge enters or leaves the crossing, and
//! whether it passes over or under. Everything else is derived once at
//! construction: edges, arcs (maximal over-passing strands), faces of the
//! underlying plane curve, link components and crossing signs.
//!
//! Ids are deterministic. Arcs are numbered in order of their smallest edge
//! id; faces in order of their smallest `(edge id, side)` boundary entry,
//! with `left < right`.
//!
//! Slot arithmetic used throughout (positions mod 4): a strand leaving
//! through slot `q` has the sectors `q` and `q + 1` on its right, where
//! sector `q` is the corner between slots `q` and `q + 1`.

mod braid;
mod spec;
mod trace;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use braid::braid_closure;
pub use spec::{CrossingSpec, DiagramSpec, OuterFaceSpec, SlotSpec};
pub use validate::{ValidationReport, Violation};

macro_rules! id_type {
    ($name:ident, $inner:ty) => {
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub $inner);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }
    };
}

id_type!(CrossingId, u32);
id_type!(EdgeId, u32);
id_type!(ArcId, usize);
id_type!(FaceId, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Over,
    Under,
}

impl Level {
    pub fn flip(self) -> Self {
        match self {
            Level::Over => Level::Under,
            Level::Under => Level::Over,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Over => "over",
            Level::Under => "under",
        })
    }
}

/// Side of an oriented edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value() as i8
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(format!("crossing sign must be +1 or -1, got {v}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+1",
            Sign::Negative => "-1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub edge: EdgeId,
    pub dir: Direction,
    pub level: Level,
}

/// A slot addressed by crossing index (not id) and ccw position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SlotRef {
    pub crossing: usize,
    pub slot: usize,
}

/// Sign of a crossing from its slot list: `+1` iff the outgoing over slot is
/// the immediate ccw successor of the outgoing under slot.
pub fn crossing_sign(slots: &[Slot; 4]) -> Sign {
    let under_out = find_slot(slots, Level::Under, Direction::Out);
    let over_out = find_slot(slots, Level::Over, Direction::Out);
    if over_out == (under_out + 1) % 4 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

fn find_slot(slots: &[Slot; 4], level: Level, dir: Direction) -> usize {
    slots
        .iter()
        .position(|s| s.level == level && s.dir == dir)
        .expect("validated crossing has every (level, dir) slot")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: CrossingId,
    pub slots: [Slot; 4],
    pub sign: Sign,
}

impl Crossing {
    pub fn position(&self, level: Level, dir: Direction) -> usize {
        find_slot(&self.slots, level, dir)
    }

    pub fn over_out(&self) -> usize {
        self.position(Level::Over, Direction::Out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: SlotRef,
    pub head: SlotRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub id: ArcId,
    /// Edges in the order the arc is traversed.
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: FaceId,
    /// Cyclic boundary walk; starts at the smallest entry.
    pub boundary: Vec<(EdgeId, Side)>,
}

impl Face {
    pub fn edge_cycle(&self) -> Vec<u32> {
        self.boundary.iter().map(|(e, _)| e.0).collect()
    }
}

/// Arcs meeting at a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingArcs {
    pub under_in: ArcId,
    pub under_out: ArcId,
    pub over: ArcId,
}

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("malformed diagram file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid diagram:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown face id {0}")]
    UnknownFace(FaceId),
}

/// Derived structure, as emitted by `validate --emit-derived`.
#[derive(Clone, Debug, Serialize)]
pub struct DerivedData<'a> {
    pub crossings: usize,
    pub edges: usize,
    pub arcs: &'a [Arc],
    pub faces: &'a [Face],
    pub signs: Vec<(CrossingId, Sign)>,
    pub components: &'a [Vec<EdgeId>],
    pub outer_face: FaceId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    name: String,
    crossings: Vec<Crossing>,
    edges: Vec<Edge>,
    edge_index: BTreeMap<EdgeId, usize>,
    arcs: Vec<Arc>,
    arc_of_edge: Vec<ArcId>,
    faces: Vec<Face>,
    edge_faces: Vec<[FaceId; 2]>,
    sector_faces: Vec<[FaceId; 4]>,
    outer_face: FaceId,
    components: Vec<Vec<EdgeId>>,
}

pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let spec = DiagramSpec::from_json(text)?;
    Diagram::from_spec(&spec)
}

/// Checks every structural invariant of a diagram file. The report is empty
/// iff [`Diagram::from_spec`] succeeds.
pub fn validate(spec: &DiagramSpec) -> ValidationReport {
    match build(spec) {
        Ok(_) => ValidationReport::default(),
        Err(report) => report,
    }
}

impl Diagram {
    pub fn from_spec(spec: &DiagramSpec) -> Result<Self, DiagramError> {
        build(spec).map_err(DiagramError::Invalid)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_index(&self, id: CrossingId) -> Option<usize> {
        self.crossings.iter().position(|c| c.id == id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edge_index.get(&id).map(|&i| &self.edges[i])
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_of(&self, edge: EdgeId) -> ArcId {
        self.arc_of_edge[self.edge_index[&edge]]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn outer_face(&self) -> FaceId {
        self.outer_face
    }

    pub fn components(&self) -> &[Vec<EdgeId>] {
        &self.components
    }

    /// `[left, right]` faces of an oriented edge.
    pub fn edge_faces(&self, edge: EdgeId) -> [FaceId; 2] {
        self.edge_faces[self.edge_index[&edge]]
    }

    /// Face containing the corner between slots `q` and `q + 1` of a crossing.
    pub fn sector_face(&self, crossing: usize, q: usize) -> FaceId {
        self.sector_faces[crossing][q % 4]
    }

    pub fn crossing_arcs(&self, crossing: usize) -> CrossingArcs {
        let c = &self.crossings[crossing];
        let arc_at = |level, dir| self.arc_of(c.slots[c.position(level, dir)].edge);
        CrossingArcs {
            under_in: arc_at(Level::Under, Direction::In),
            under_out: arc_at(Level::Under, Direction::Out),
            over: arc_at(Level::Over, Direction::Out),
        }
    }

    /// Same sphere code with a different outer face.
    pub fn set_outer_face(&self, face: FaceId) -> Result<Diagram, DiagramError> {
        if face.0 >= self.faces.len() {
            return Err(DiagramError::UnknownFace(face));
        }
        let mut d = self.clone();
        d.outer_face = face;
        Ok(d)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn to_spec(&self) -> DiagramSpec {
        DiagramSpec {
            name: self.name.clone(),
            crossings: self
                .crossings
                .iter()
                .map(|c| CrossingSpec {
                    id: c.id.0,
                    slots: c
                        .slots
                        .iter()
                        .map(|s| SlotSpec { edge: s.edge.0, dir: s.dir, level: s.level })
                        .collect(),
                })
                .collect(),
            outer_face: OuterFaceSpec::Id(self.outer_face.0),
        }
    }

    pub fn derived(&self) -> DerivedData<'_> {
        DerivedData {
            crossings: self.crossings.len(),
            edges: self.edges.len(),
            arcs: &self.arcs,
            faces: &self.faces,
            signs: self.crossings.iter().map(|c| (c.id, c.sign)).collect(),
            components: &self.components,
            outer_face: self.outer_face,
        }
    }

    /// SHA-256 of the serialized code (crossings and outer face).
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.to_spec()).expect("diagram spec serializes");
        hex::encode(Sha256::digest(bytes))
    }

    /// Re-derives everything from the code and checks the stored structure
    /// against it, along with the partition properties of arcs and faces.
    pub fn validate(&self) -> ValidationReport {
        let mut report = validate(&self.to_spec());
        if !report.is_valid() {
            return report;
        }
        let mut inconsistent = |detail: String| report.push(Violation::Inconsistent { detail });

        let mut sides = BTreeSet::new();
        for face in &self.faces {
            for &entry in &face.boundary {
                if !sides.insert(entry) {
                    inconsistent(format!("{:?} lies on two faces", entry));
                }
            }
        }
        if sides.len() != 2 * self.edges.len() {
            inconsistent("faces do not cover every edge side".into());
        }
        let mut in_arcs = BTreeSet::new();
        for arc in &self.arcs {
            for &e in &arc.edges {
                if !in_arcs.insert(e) || self.arc_of(e) != arc.id {
                    inconsistent(format!("edge {e} is not in exactly one arc"));
                }
            }
        }
        if in_arcs.len() != self.edges.len() {
            inconsistent("arcs do not cover every edge".into());
        }
        for c in &self.crossings {
            if c.sign != crossing_sign(&c.slots) {
                inconsistent(format!("crossing {} has a stale sign", c.id));
            }
        }
        if self.outer_face.0 >= self.faces.len() {
            report.push(Violation::UnknownOuterFace { designator: self.outer_face.to_string() });
        }
        report
    }
}

fn build(spec: &DiagramSpec) -> Result<Diagram, ValidationReport> {
    let mut report = ValidationReport::default();
    if spec.crossings.is_empty() {
        report.push(Violation::NoCrossings);
        return Err(report);
    }

    let mut ids = BTreeSet::new();
    for c in &spec.crossings {
        if !ids.insert(c.id) {
            report.push(Violation::DuplicateCrossingId { crossing: c.id });
        }
        check_crossing(c, &mut report);
    }

    // (crossing index, slot, direction) for every use of each edge id
    let mut uses: BTreeMap<u32, Vec<(usize, usize, Direction)>> = BTreeMap::new();
    for (ci, c) in spec.crossings.iter().enumerate() {
        for (k, s) in c.slots.iter().enumerate() {
            uses.entry(s.edge).or_default().push((ci, k, s.dir));
        }
    }
    for (&edge, u) in &uses {
        if u.len() != 2 {
            report.push(Violation::EdgeUsage { edge, count: u.len() });
        } else if u[0].2 == u[1].2 {
            report.push(Violation::EdgeDirection { edge });
        }
    }
    if !report.is_valid() {
        return Err(report);
    }

    let crossings: Vec<Crossing> = spec
        .crossings
        .iter()
        .map(|c| {
            let slots: [Slot; 4] = std::array::from_fn(|k| Slot {
                edge: EdgeId(c.slots[k].edge),
                dir: c.slots[k].dir,
                level: c.slots[k].level,
            });
            Crossing { id: CrossingId(c.id), sign: crossing_sign(&slots), slots }
        })
        .collect();

    let edges: Vec<Edge> = uses
        .iter()
        .map(|(&edge, u)| {
            let at = |dir| {
                let &(crossing, slot, _) = u.iter().find(|x| x.2 == dir).unwrap();
                SlotRef { crossing, slot }
            };
            Edge { id: EdgeId(edge), tail: at(Direction::Out), head: at(Direction::In) }
        })
        .collect();
    let edge_index: BTreeMap<EdgeId, usize> =
        edges.iter().enumerate().map(|(i, e)| (e.id, i)).collect();

    let pieces = trace::count_pieces(crossings.len(), &edges);
    if pieces > 1 {
        report.push(Violation::Disconnected { pieces });
        return Err(report);
    }

    let traced = trace::trace_faces(&crossings, &edges, &edge_index);
    let (v, e, f) = (crossings.len(), edges.len(), traced.faces.len());
    if v as i64 - e as i64 + f as i64 != 2 {
        report.push(Violation::Planarity { vertices: v, edges: e, faces: f });
        return Err(report);
    }

    let outer_face = match resolve_outer_face(&spec.outer_face, &traced, &edge_index) {
        Ok(face) => face,
        Err(v) => {
            report.push(v);
            return Err(report);
        }
    };

    let (arcs, arc_of_edge) = trace::merge_arcs(&crossings, &edges, &edge_index);
    let components = trace::components(&crossings, &edges, &edge_index);

    Ok(Diagram {
        name: spec.name.clone(),
        crossings,
        edges,
        edge_index,
        arcs,
        arc_of_edge,
        faces: traced.faces,
        edge_faces: traced.edge_faces,
        sector_faces: traced.sector_faces,
        outer_face,
        components,
    })
}

fn check_crossing(c: &CrossingSpec, report: &mut ValidationReport) {
    if c.slots.len() != 4 {
        report.push(Violation::SlotCount { crossing: c.id, found: c.slots.len() });
        return;
    }
    let under: Vec<usize> = (0..4).filter(|&k| c.slots[k].level == Level::Under).collect();
    if under.len() != 2 || under[1] - under[0] != 2 {
        report.push(Violation::LevelPattern { crossing: c.id });
        return;
    }
    for level in [Level::Under, Level::Over] {
        let dirs: Vec<Direction> =
            c.slots.iter().filter(|s| s.level == level).map(|s| s.dir).collect();
        if dirs[0] == dirs[1] {
            report.push(Violation::Orientation { crossing: c.id, level });
        }
    }
}

fn resolve_outer_face(
    designator: &OuterFaceSpec,
    traced: &trace::Traced,
    edge_index: &BTreeMap<EdgeId, usize>,
) -> Result<FaceId, Violation> {
    let unknown = || Violation::UnknownOuterFace { designator: designator.to_string() };
    match designator {
        OuterFaceSpec::Id(id) if *id < traced.faces.len() => Ok(FaceId(*id)),
        OuterFaceSpec::Id(_) => Err(unknown()),
        OuterFaceSpec::EdgeSide { edge, side } => {
            let &i = edge_index.get(&EdgeId(*edge)).ok_or_else(unknown)?;
            Ok(traced.edge_faces[i][*side as usize])
        }
        OuterFaceSpec::Boundary(cycle) => {
            let matches: Vec<FaceId> = traced
                .faces
                .iter()
                .filter(|f| same_cycle(&f.edge_cycle(), cycle))
                .map(|f| f.id)
                .collect();
            match matches.as_slice() {
                [face] => Ok(*face),
                [] => Err(unknown()),
                _ => Err(Violation::AmbiguousOuterFace { designator: designator.to_string() }),
            }
        }
    }
}

/// Equality of cyclic sequences up to rotation and reversal.
fn same_cycle(a: &[u32], b: &[u32]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    let reversed: Vec<u32> = b.iter().rev().copied().collect();
    (0..n).any(|r| {
        (0..n).all(|i| a[(i + r) % n] == b[i]) || (0..n).all(|i| a[(i + r) % n] == reversed[i])
    })
}
