//! Bundled example diagrams and the reference values expected from them.
//!
//! `d1`/`d2` are a trefoil, `d3`/`d4` a figure-eight knot and `d5`/`d6`
//! the (2,4)-torus link. Each pair shares one sphere code and differs only
//! in the outer face.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::coloring::Color;
use crate::diagram::{parse_diagram, Diagram, DiagramError};

pub const FIXTURE_NAMES: [&str; 6] = ["d1", "d2", "d3", "d4", "d5", "d6"];

const BUNDLED: [(&str, &str); 6] = [
    ("d1", include_str!("../../../fixtures/d1.json")),
    ("d2", include_str!("../../../fixtures/d2.json")),
    ("d3", include_str!("../../../fixtures/d3.json")),
    ("d4", include_str!("../../../fixtures/d4.json")),
    ("d5", include_str!("../../../fixtures/d5.json")),
    ("d6", include_str!("../../../fixtures/d6.json")),
];

pub const TREFOIL_F: &str = "(x-y)*(y-z)*z";
pub const FIGURE_EIGHT_F: &str = "(x+y)^3*(y+z)*(y-z)^3*z^5";
pub const TORUS_LINK_F: &str = "(x+y)^2*(y-z)^3*z^5";

/// `δf(x, y, z, w)` for `f = (x-y)(y-z)z`, `n = 3`, on every tuple with
/// `x != y != z != w`.
pub const COBOUNDARY_TABLE_N3: [([Color; 4], i128); 24] = [
    ([0, 1, 0, 1], 2),
    ([0, 1, 0, 2], 7),
    ([0, 1, 2, 0], 4),
    ([0, 1, 2, 1], -1),
    ([0, 2, 0, 1], 11),
    ([0, 2, 0, 2], 7),
    ([0, 2, 1, 0], -4),
    ([0, 2, 1, 2], -8),
    ([1, 0, 1, 0], 7),
    ([1, 0, 1, 2], 5),
    ([1, 0, 2, 0], -2),
    ([1, 0, 2, 1], -4),
    ([1, 2, 0, 1], 4),
    ([1, 2, 0, 2], -4),
    ([1, 2, 1, 0], 1),
    ([1, 2, 1, 2], -7),
    ([2, 0, 1, 0], 2),
    ([2, 0, 1, 2], 4),
    ([2, 0, 2, 0], -7),
    ([2, 0, 2, 1], -5),
    ([2, 1, 0, 1], -5),
    ([2, 1, 0, 2], -4),
    ([2, 1, 2, 0], -1),
    ([2, 1, 2, 1], -2),
];

/// `±Im(δf)` for the trefoil cochain.
pub const SIGNED_IMAGE_N3: [i128; 15] = [-11, -8, -7, -5, -4, -2, -1, 0, 1, 2, 4, 5, 7, 8, 11];

/// Weight of `d4` with outer color 2 for each pair of free arc colors
/// `(a, b)`, `a != b`.
pub const FIGURE_EIGHT_WEIGHTS: [(Color, Color, i128); 20] = [
    (0, 1, 142336),
    (0, 2, 2244931),
    (0, 3, -1269944),
    (0, 4, -173800),
    (1, 0, 3765221),
    (1, 2, 207552),
    (1, 3, 587264),
    (1, 4, -1299078),
    (2, 0, 326080),
    (2, 1, 971928),
    (2, 3, 2937304),
    (2, 4, -1135296),
    (3, 0, -551414),
    (3, 1, 889088),
    (3, 2, 10555072),
    (3, 4, -344431),
    (4, 0, -7107048),
    (4, 1, -490872),
    (4, 2, -2814033),
    (4, 3, -1919488),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedPhi {
    Listed(&'static [i128]),
    /// The value set of [`FIGURE_EIGHT_WEIGHTS`].
    FigureEightTable,
}

/// One source/target pair with everything known about it.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceCase {
    pub label: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub n: u32,
    pub f: &'static str,
    pub s: Color,
    /// Arc colors of the source coloring, arcs in id order.
    pub coloring: &'static [Color],
    /// `(region, under, over, sign)` per crossing, in any order.
    pub triples: &'static [(Color, Color, Color, i32)],
    pub weight: i128,
    pub phi: ExpectedPhi,
    pub image_size: usize,
    pub bound: usize,
}

impl ReferenceCase {
    pub fn expected_phi(&self) -> Vec<i128> {
        let mut v: Vec<i128> = match self.phi {
            ExpectedPhi::Listed(values) => values.to_vec(),
            ExpectedPhi::FigureEightTable => FIGURE_EIGHT_WEIGHTS.iter().map(|t| t.2).collect(),
        };
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub const CASES: [ReferenceCase; 3] = [
    ReferenceCase {
        label: "trefoil",
        source: "d1",
        target: "d2",
        n: 3,
        f: TREFOIL_F,
        s: 0,
        coloring: &[0, 1, 2],
        triples: &[(2, 2, 1, 1), (2, 0, 2, 1), (2, 1, 0, 1)],
        weight: -8,
        phi: ExpectedPhi::Listed(&[-2, 2]),
        image_size: 13,
        bound: 2,
    },
    ReferenceCase {
        label: "figure-eight",
        source: "d3",
        target: "d4",
        n: 5,
        f: FIGURE_EIGHT_F,
        s: 2,
        coloring: &[2, 0, 1, 3],
        triples: &[(3, 2, 0, -1), (0, 1, 3, -1), (4, 1, 2, 1), (4, 2, 1, 1)],
        weight: -3576,
        phi: ExpectedPhi::FigureEightTable,
        image_size: 393,
        bound: 3,
    },
    ReferenceCase {
        label: "torus-link",
        source: "d5",
        target: "d6",
        n: 4,
        f: TORUS_LINK_F,
        s: 0,
        coloring: &[0, 2, 3, 1],
        triples: &[(2, 1, 0, 1), (2, 0, 3, 1), (2, 3, 2, 1), (2, 2, 1, 1)],
        weight: -25428,
        phi: ExpectedPhi::Listed(&[-3744, -1004, 0, 292]),
        image_size: 105,
        bound: 3,
    },
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("fixture {name}: {source}")]
    Diagram { name: String, source: DiagramError },
    #[error("no fixture named {0}")]
    Missing(String),
}

#[derive(Clone, Debug)]
pub struct FixtureLibrary {
    diagrams: BTreeMap<String, Diagram>,
}

impl FixtureLibrary {
    pub fn bundled() -> Self {
        let diagrams = BUNDLED
            .iter()
            .map(|(name, text)| {
                let d = parse_diagram(text).expect("bundled fixtures are valid");
                (name.to_string(), d)
            })
            .collect();
        FixtureLibrary { diagrams }
    }

    /// Reads `d1.json` .. `d6.json` from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, FixtureError> {
        let mut diagrams = BTreeMap::new();
        for name in FIXTURE_NAMES {
            let path = dir.join(format!("{name}.json"));
            let text = fs::read_to_string(&path)
                .map_err(|source| FixtureError::Io { path: path.clone(), source })?;
            let d = parse_diagram(&text)
                .map_err(|source| FixtureError::Diagram { name: name.to_string(), source })?;
            diagrams.insert(name.to_string(), d);
        }
        Ok(FixtureLibrary { diagrams })
    }

    pub fn get(&self, name: &str) -> Result<&Diagram, FixtureError> {
        self.diagrams.get(name).ok_or_else(|| FixtureError::Missing(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.diagrams.keys().map(String::as_str)
    }

    pub fn diagrams(&self) -> impl Iterator<Item = (&str, &Diagram)> {
        self.diagrams.iter().map(|(k, v)| (k.as_str(), v))
    }
}
