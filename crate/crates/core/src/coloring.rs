//! Fox n-colorings of arcs and their unique extension to regions.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{ArcId, Diagram, FaceId};

pub type Color = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(n: u32) -> Result<Self, ColoringError> {
        if n == 0 {
            Err(ColoringError::BadModulus(n))
        } else {
            Ok(Modulus(n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn reduce(self, v: i64) -> Color {
        v.rem_euclid(self.0 as i64) as Color
    }

    pub fn contains(self, c: Color) -> bool {
        c < self.0
    }

    pub fn colors(self) -> std::ops::Range<Color> {
        0..self.0
    }
}

impl TryFrom<u32> for Modulus {
    type Error = ColoringError;

    fn try_from(n: u32) -> Result<Self, Self::Error> {
        Modulus::new(n)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("modulus must be at least 1, got {0}")]
    BadModulus(u32),
    #[error("color {color} is not in Z({n})")]
    ColorOutOfRange { color: Color, n: u32 },
    #[error("expected {expected} arc colors, got {found}")]
    ArcCount { expected: usize, found: usize },
    #[error("crossing {crossing} violates a + c = 2b (mod {n})")]
    CrossingRelation { crossing: u32, n: u32 },
    #[error("region colors conflict at face {face}")]
    Inconsistent { face: FaceId },
}

/// `x * y = 2y - x (mod n)`.
pub fn quandle_star(x: Color, y: Color, n: Modulus) -> Color {
    n.reduce(2 * y as i64 - x as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    modulus: Modulus,
    arc_colors: Vec<Color>,
}

impl Coloring {
    /// Checks the crossing relation at every crossing of `d`.
    pub fn new(d: &Diagram, n: Modulus, arc_colors: Vec<Color>) -> Result<Self, ColoringError> {
        if arc_colors.len() != d.arcs().len() {
            return Err(ColoringError::ArcCount {
                expected: d.arcs().len(),
                found: arc_colors.len(),
            });
        }
        if let Some(&color) = arc_colors.iter().find(|&&c| !n.contains(c)) {
            return Err(ColoringError::ColorOutOfRange { color, n: n.get() });
        }
        for (i, c) in d.crossings().iter().enumerate() {
            let arcs = d.crossing_arcs(i);
            let (a, b, cc) = (
                arc_colors[arcs.under_in.0],
                arc_colors[arcs.over.0],
                arc_colors[arcs.under_out.0],
            );
            if (a as i64 + cc as i64 - 2 * b as i64).rem_euclid(n.get() as i64) != 0 {
                return Err(ColoringError::CrossingRelation { crossing: c.id.0, n: n.get() });
            }
        }
        Ok(Coloring { modulus: n, arc_colors })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn color(&self, arc: ArcId) -> Color {
        self.arc_colors[arc.0]
    }

    pub fn arc_colors(&self) -> &[Color] {
        &self.arc_colors
    }

    /// Constant on all arcs, across every component.
    pub fn is_trivial(&self) -> bool {
        self.arc_colors.windows(2).all(|w| w[0] == w[1])
    }
}

/// All Fox colorings in lexicographic order of the arc-color vector,
/// trivial ones included.
///
/// Arcs are assigned in id order. A crossing is checked as soon as its last
/// arc is set, and an under-arc whose two partners are already colored is
/// forced to `2b - a`.
pub fn enumerate_colorings(d: &Diagram, n: Modulus) -> Vec<Coloring> {
    let arcs = d.arcs().len();
    let relations: Vec<(usize, usize, usize)> = (0..d.crossings().len())
        .map(|i| {
            let a = d.crossing_arcs(i);
            (a.under_in.0, a.over.0, a.under_out.0)
        })
        .collect();

    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); arcs];
    let mut forced: Vec<Option<(usize, usize)>> = vec![None; arcs];
    for (ci, &(a, b, c)) in relations.iter().enumerate() {
        checks[a.max(b).max(c)].push(ci);
        for (me, other) in [(a, c), (c, a)] {
            if me != other && me != b && other < me && b < me && forced[me].is_none() {
                forced[me] = Some((other, b));
            }
        }
    }

    let modulus = n.get() as i64;
    let holds = |colors: &[Color], ci: usize| {
        let (a, b, c) = relations[ci];
        (colors[a] as i64 + colors[c] as i64 - 2 * colors[b] as i64).rem_euclid(modulus) == 0
    };

    let mut out = Vec::new();
    let mut colors = vec![0 as Color; arcs];
    // next candidate value per depth; `n` means exhausted
    let mut next = vec![0 as Color; arcs + 1];
    let mut depth = 0usize;
    loop {
        if depth == arcs {
            out.push(Coloring { modulus: n, arc_colors: colors.clone() });
            depth -= 1;
            continue;
        }
        let candidate = match forced[depth] {
            Some((other, over)) => {
                let v = quandle_star(colors[other], colors[over], n);
                if next[depth] <= v {
                    Some(v)
                } else {
                    None
                }
            }
            None if next[depth] < n.get() => Some(next[depth]),
            None => None,
        };
        match candidate {
            Some(v) => {
                colors[depth] = v;
                next[depth] = v + 1;
                if checks[depth].iter().all(|&ci| holds(&colors, ci)) {
                    depth += 1;
                    next[depth] = 0;
                }
            }
            None => {
                if depth == 0 {
                    break;
                }
                depth -= 1;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedColoring {
    base: Coloring,
    region_colors: Vec<Color>,
    outer_color: Color,
}

impl ExtendedColoring {
    pub fn base(&self) -> &Coloring {
        &self.base
    }

    pub fn modulus(&self) -> Modulus {
        self.base.modulus
    }

    pub fn region(&self, face: FaceId) -> Color {
        self.region_colors[face.0]
    }

    pub fn region_colors(&self) -> &[Color] {
        &self.region_colors
    }

    pub fn outer_color(&self) -> Color {
        self.outer_color
    }

    pub fn into_base(self) -> Coloring {
        self.base
    }
}

/// The unique region coloring with outer face colored `s`, found by
/// breadth-first propagation `t = s' * a` across edges.
pub fn extend_coloring(
    d: &Diagram,
    c: &Coloring,
    s: Color,
) -> Result<ExtendedColoring, ColoringError> {
    let n = c.modulus;
    if !n.contains(s) {
        return Err(ColoringError::ColorOutOfRange { color: s, n: n.get() });
    }
    let mut neighbours: Vec<Vec<(FaceId, Color)>> = vec![Vec::new(); d.faces().len()];
    for e in d.edges() {
        let [left, right] = d.edge_faces(e.id);
        let a = c.color(d.arc_of(e.id));
        neighbours[left.0].push((right, a));
        neighbours[right.0].push((left, a));
    }

    let mut region: Vec<Option<Color>> = vec![None; d.faces().len()];
    region[d.outer_face().0] = Some(s);
    let mut queue = VecDeque::from([d.outer_face()]);
    while let Some(face) = queue.pop_front() {
        let here = region[face.0].unwrap();
        for &(other, a) in &neighbours[face.0] {
            let t = quandle_star(here, a, n);
            match region[other.0] {
                None => {
                    region[other.0] = Some(t);
                    queue.push_back(other);
                }
                Some(existing) if existing != t => {
                    return Err(ColoringError::Inconsistent { face: other });
                }
                Some(_) => {}
            }
        }
    }

    let region_colors = region
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or(ColoringError::Inconsistent { face: FaceId(i) }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtendedColoring { base: c.clone(), region_colors, outer_color: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

    fn d1() -> Diagram {
        parse_diagram(include_str!("../../../fixtures/d1.json")).unwrap()
    }

    fn m(n: u32) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn star_values() {
        assert_eq!(quandle_star(0, 1, m(3)), 2);
        assert_eq!(quandle_star(1, 0, m(5)), 4);
        for n in 1..8 {
            for x in 0..n {
                assert_eq!(quandle_star(x, x, m(n)), x);
            }
        }
    }

    #[test]
    fn zero_modulus_rejected() {
        assert_eq!(Modulus::new(0), Err(ColoringError::BadModulus(0)));
    }

    #[test]
    fn trefoil_three_colorings() {
        let d = d1();
        let all = enumerate_colorings(&d, m(3));
        assert_eq!(all.len(), 9);
        assert_eq!(all.iter().filter(|c| c.is_trivial()).count(), 3);
        let vectors: Vec<&[Color]> = all.iter().map(|c| c.arc_colors()).collect();
        let mut sorted = vectors.clone();
        sorted.sort();
        assert_eq!(vectors, sorted);
    }

    #[test]
    fn modulus_one_has_one_coloring() {
        assert_eq!(enumerate_colorings(&d1(), m(1)).len(), 1);
    }

    #[test]
    fn triviality() {
        let d = d1();
        assert!(Coloring::new(&d, m(3), vec![2, 2, 2]).unwrap().is_trivial());
        assert!(!Coloring::new(&d, m(3), vec![0, 1, 2]).unwrap().is_trivial());
    }

    #[test]
    fn invalid_colorings_rejected() {
        let d = d1();
        assert!(matches!(
            Coloring::new(&d, m(3), vec![0, 0, 1]),
            Err(ColoringError::CrossingRelation { .. })
        ));
        assert!(matches!(
            Coloring::new(&d, m(3), vec![0, 0]),
            Err(ColoringError::ArcCount { .. })
        ));
        assert!(matches!(
            Coloring::new(&d, m(3), vec![0, 0, 3]),
            Err(ColoringError::ColorOutOfRange { .. })
        ));
    }

    #[test]
    fn trivial_extension_is_checkerboard() {
        let d = d1();
        let c = Coloring::new(&d, m(5), vec![3, 3, 3]).unwrap();
        let ec = extend_coloring(&d, &c, 1).unwrap();
        for &r in ec.region_colors() {
            assert!(r == 1 || r == (2 * 3 + 5 - 1) % 5);
        }
        assert_eq!(ec.region(d.outer_face()), 1);
        assert_eq!(ec.base(), &c);
    }

    #[test]
    fn extension_satisfies_edge_relation() {
        let d = d1();
        for c in enumerate_colorings(&d, m(3)) {
            for s in 0..3 {
                let ec = extend_coloring(&d, &c, s).unwrap();
                for e in d.edges() {
                    let [l, r] = d.edge_faces(e.id);
                    let a = c.color(d.arc_of(e.id));
                    assert_eq!((ec.region(l) + ec.region(r)) % 3, (2 * a) % 3);
                }
            }
        }
    }
}
