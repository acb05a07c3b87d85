//! Crossing triples, the weight `W_f`, value sets `Φ_f(D, s)` and lower
//! bounds on the number of type-III moves between two diagrams.
//!
//! At a crossing whose outgoing over slot sits at position `p`, the over
//! strand has sectors `p` and `p + 1` on its right. The under-arc on that
//! side is the one attached at slot `p + 1`. The sector right of both
//! strands is `p` at a positive crossing and `p + 1` at a negative one.

mod certificate;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::cochain::{CochainError, CochainFn};
use crate::coloring::{
    enumerate_colorings, extend_coloring, quandle_star, Color, ColoringError, ExtendedColoring,
    Modulus,
};
use crate::diagram::{CrossingId, Diagram, Sign};

pub use certificate::{
    certify_lower_bound, certify_lower_bound_with, obstruction_depth, verify_certificate,
    BoundCertificate, CertificateError, DiagramRef, LevelVerdict, CERTIFICATE_SCHEMA,
};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("coloring is mod {coloring} but f is defined mod {f}")]
    ModulusMismatch { coloring: Modulus, f: Modulus },
    #[error("no crossing with id {0}")]
    UnknownCrossing(CrossingId),
    #[error("colors must differ, got a = b = {0}")]
    EqualColors(Color),
    #[error("max_m must be at least 1")]
    ZeroDepth,
    #[error("obstruction levels were built for a different f")]
    ForeignLevels,
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// Colors read off one crossing of an extended coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingTriple {
    pub crossing: CrossingId,
    /// Region right of both strands.
    pub region: Color,
    /// Under-arc right of the over strand.
    pub under: Color,
    pub over: Color,
    pub sign: Sign,
}

impl CrossingTriple {
    pub fn as_tuple(&self) -> (Color, Color, Color, i32) {
        (self.region, self.under, self.over, self.sign.value())
    }
}

fn triple_at(d: &Diagram, ec: &ExtendedColoring, index: usize) -> CrossingTriple {
    let c = &d.crossings()[index];
    let p = c.over_out();
    let color_at = |slot: usize| ec.base().color(d.arc_of(c.slots[slot % 4].edge));
    let sector = match c.sign {
        Sign::Positive => p,
        Sign::Negative => p + 1,
    };
    CrossingTriple {
        crossing: c.id,
        region: ec.region(d.sector_face(index, sector)),
        under: color_at(p + 1),
        over: color_at(p),
        sign: c.sign,
    }
}

pub fn crossing_triple(
    d: &Diagram,
    ec: &ExtendedColoring,
    crossing: CrossingId,
) -> Result<CrossingTriple, InvariantError> {
    let index = d.crossing_index(crossing).ok_or(InvariantError::UnknownCrossing(crossing))?;
    Ok(triple_at(d, ec, index))
}

/// All triples in crossing order.
pub fn crossing_triples(d: &Diagram, ec: &ExtendedColoring) -> Vec<CrossingTriple> {
    (0..d.crossings().len()).map(|i| triple_at(d, ec, i)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightTerm {
    pub triple: CrossingTriple,
    /// `sign * f(region, under, over)`.
    pub contribution: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightValue {
    pub value: i128,
    pub terms: Vec<WeightTerm>,
}

fn check_modulus(ec: &ExtendedColoring, f: &CochainFn) -> Result<(), InvariantError> {
    if ec.modulus() != f.modulus() {
        return Err(InvariantError::ModulusMismatch { coloring: ec.modulus(), f: f.modulus() });
    }
    Ok(())
}

/// `Σ sign * f(region, under, over)` over all crossings.
pub fn weight(
    d: &Diagram,
    ec: &ExtendedColoring,
    f: &CochainFn,
) -> Result<WeightValue, InvariantError> {
    check_modulus(ec, f)?;
    let terms: Vec<WeightTerm> = crossing_triples(d, ec)
        .into_iter()
        .map(|t| WeightTerm {
            contribution: t.sign.value() as i128 * f.eval(t.region, t.under, t.over),
            triple: t,
        })
        .collect();
    let value = terms.iter().map(|t| t.contribution).sum();
    Ok(WeightValue { value, terms })
}

/// Weight of every coloring of `d` with outer color `s`, in canonical
/// coloring order (trivial colorings included).
pub fn all_weights(
    d: &Diagram,
    s: Color,
    f: &CochainFn,
) -> Result<Vec<(ExtendedColoring, i128)>, InvariantError> {
    enumerate_colorings(d, f.modulus())
        .iter()
        .map(|c| {
            let ec = extend_coloring(d, c, s)?;
            let w = weight(d, &ec, f)?.value;
            Ok((ec, w))
        })
        .collect()
}

/// Weights over the non-trivial colorings with a fixed outer color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiSet {
    pub outer_color: Color,
    pub values: Vec<i128>,
    /// Coloring ids (canonical order, trivial ones counted) per value.
    pub witnesses: BTreeMap<i128, Vec<usize>>,
}

impl PhiSet {
    pub fn contains(&self, v: i128) -> bool {
        self.values.binary_search(&v).is_ok()
    }
}

pub fn phi_set(d: &Diagram, s: Color, f: &CochainFn) -> Result<PhiSet, InvariantError> {
    let mut witnesses: BTreeMap<i128, Vec<usize>> = BTreeMap::new();
    for (id, (ec, w)) in all_weights(d, s, f)?.into_iter().enumerate() {
        if !ec.base().is_trivial() {
            witnesses.entry(w).or_default().push(id);
        }
    }
    Ok(PhiSet { outer_color: s, values: witnesses.keys().copied().collect(), witnesses })
}

/// `f(2*b, a, b) + f(2*b, b, a) - f((2*b)*a, b, b*a) - f(2, a, a*b)`, the
/// weight of the figure-eight diagram with outer color 2 as a function of
/// its two free arc colors.
pub fn w4_formula(a: Color, b: Color, f: &CochainFn) -> Result<i128, InvariantError> {
    let n = f.modulus();
    for c in [a, b, 2] {
        if !n.contains(c) {
            return Err(ColoringError::ColorOutOfRange { color: c, n: n.get() }.into());
        }
    }
    if a == b {
        return Err(InvariantError::EqualColors(a));
    }
    let star = |x, y| quandle_star(x, y, n);
    let t = star(2, b);
    Ok(f.eval(t, a, b) + f.eval(t, b, a) - f.eval(star(t, a), b, star(b, a)) - f.eval(2, a, star(a, b)))
}
