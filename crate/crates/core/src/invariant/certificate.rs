use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{all_weights, phi_set, weight, InvariantError};
use crate::cochain::{CochainFn, DeltaReach};
use crate::coloring::{enumerate_colorings, extend_coloring, Color, Coloring, ColoringError, Modulus};
use crate::diagram::Diagram;

pub const CERTIFICATE_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRef {
    pub name: String,
    pub hash: String,
}

impl DiagramRef {
    pub fn of(d: &Diagram) -> Self {
        DiagramRef { name: d.name().to_string(), hash: d.content_hash() }
    }
}

/// Outcome of intersecting the differences with one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelVerdict {
    pub level: usize,
    pub cardinality: usize,
    /// Differences that lie in the level; empty means no obstruction yet.
    pub hits: Vec<i128>,
}

/// Witness that at least `certified_m` type-III moves separate two
/// diagrams: for every `i < certified_m` the level `Δ_i` misses all of
/// `weight - phi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub schema: u32,
    pub diagram: DiagramRef,
    pub target: DiagramRef,
    /// Canonical expansion of f.
    pub f: String,
    pub n: Modulus,
    pub outer_color: Color,
    pub max_m: usize,
    pub coloring_id: Option<usize>,
    pub coloring: Vec<Color>,
    pub weight: Option<i128>,
    pub phi: Vec<i128>,
    pub differences: Vec<i128>,
    pub levels: Vec<LevelVerdict>,
    pub certified_m: usize,
    /// First level that met the differences, if any did.
    pub first_hit: Option<usize>,
    /// Set when the source diagram has no non-trivial coloring.
    pub degenerate: bool,
}

/// Largest `m <= max_m` such that levels `0..m` avoid `differences`
/// (sorted), with one verdict per level inspected.
pub fn obstruction_depth(
    differences: &[i128],
    reach: &mut DeltaReach,
    max_m: usize,
) -> Result<(usize, Vec<LevelVerdict>), InvariantError> {
    let mut verdicts = Vec::new();
    for i in 0..max_m {
        let level = reach.ensure(i)?;
        let hits: Vec<i128> =
            differences.iter().copied().filter(|v| level.binary_search(v).is_ok()).collect();
        let found = !hits.is_empty();
        verdicts.push(LevelVerdict { level: i, cardinality: level.len(), hits });
        if found {
            return Ok((i, verdicts));
        }
    }
    Ok((max_m, verdicts))
}

fn differences(w: i128, phi: &[i128]) -> Vec<i128> {
    let mut out: Vec<i128> = phi.iter().map(|p| w - p).collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn certify_lower_bound(
    d: &Diagram,
    d2: &Diagram,
    s: Color,
    f: &CochainFn,
    max_m: usize,
) -> Result<BoundCertificate, InvariantError> {
    certify_lower_bound_with(d, d2, s, f, max_m, &mut DeltaReach::new(f))
}

/// As [`certify_lower_bound`], reusing (and extending) precomputed levels.
///
/// Every non-trivial coloring of `d` is tried; the best bound wins, ties
/// going to the smallest coloring id.
pub fn certify_lower_bound_with(
    d: &Diagram,
    d2: &Diagram,
    s: Color,
    f: &CochainFn,
    max_m: usize,
    reach: &mut DeltaReach,
) -> Result<BoundCertificate, InvariantError> {
    if max_m == 0 {
        return Err(InvariantError::ZeroDepth);
    }
    if !reach.is_for(f) {
        return Err(InvariantError::ForeignLevels);
    }
    let phi = phi_set(d2, s, f)?;
    let mut cert = BoundCertificate {
        schema: CERTIFICATE_SCHEMA,
        diagram: DiagramRef::of(d),
        target: DiagramRef::of(d2),
        f: f.canonical().to_string(),
        n: f.modulus(),
        outer_color: s,
        max_m,
        coloring_id: None,
        coloring: Vec::new(),
        weight: None,
        phi: phi.values.clone(),
        differences: Vec::new(),
        levels: Vec::new(),
        certified_m: 0,
        first_hit: None,
        degenerate: true,
    };

    for (id, (ec, w)) in all_weights(d, s, f)?.into_iter().enumerate() {
        if ec.base().is_trivial() {
            continue;
        }
        let diffs = differences(w, &phi.values);
        let (m, levels) = obstruction_depth(&diffs, reach, max_m)?;
        if cert.degenerate || m > cert.certified_m {
            cert.degenerate = false;
            cert.coloring_id = Some(id);
            cert.coloring = ec.base().arc_colors().to_vec();
            cert.weight = Some(w);
            cert.differences = diffs;
            cert.first_hit = (m < max_m).then_some(m);
            cert.levels = levels;
            cert.certified_m = m;
        }
        if m == max_m {
            break;
        }
    }
    Ok(cert)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("unsupported certificate schema {0}")]
    Schema(u32),
    #[error("{which} diagram does not match the certificate")]
    DiagramMismatch { which: &'static str },
    #[error("certificate is for n = {n}, f = {f}")]
    FunctionMismatch { n: Modulus, f: String },
    #[error("recorded coloring is invalid: {0}")]
    Coloring(#[from] ColoringError),
    #[error("recorded coloring id {0} does not name the recorded coloring")]
    ColoringId(usize),
    #[error("recorded coloring is trivial")]
    TrivialColoring,
    #[error("degenerate flag is wrong")]
    Degenerate,
    #[error("weight is {actual:?}, certificate says {claimed:?}")]
    Weight { claimed: Option<i128>, actual: Option<i128> },
    #[error("target value set differs from the certificate")]
    Phi,
    #[error("differences do not equal weight minus target values")]
    Differences,
    #[error("level verdicts are malformed")]
    Levels,
    #[error("hits at level {level} are {actual:?}, certificate says {claimed:?}")]
    LevelHits { level: usize, claimed: Vec<i128>, actual: Vec<i128> },
    #[error("verdicts support m = {actual}, certificate says {claimed}")]
    Depth { claimed: usize, actual: usize },
}

/// Decides `v ∈ Δ_i` by recursion on `i` over `±Im(δf)`, without building
/// any level.
struct LevelMembership {
    signed: HashSet<i128>,
    steps: Vec<i128>,
    memo: HashMap<(usize, i128), bool>,
}

impl LevelMembership {
    fn new(f: &CochainFn) -> Self {
        let n = f.modulus();
        let mut signed = HashSet::new();
        for x in n.colors() {
            for y in n.colors() {
                for z in n.colors() {
                    for w in n.colors() {
                        let v = f.delta(x, y, z, w);
                        signed.insert(v);
                        signed.insert(-v);
                    }
                }
            }
        }
        let steps = signed.iter().copied().collect();
        LevelMembership { signed, steps, memo: HashMap::new() }
    }

    fn contains(&mut self, level: usize, v: i128) -> bool {
        match level {
            0 => v == 0,
            1 => self.signed.contains(&v),
            _ => {
                if let Some(&known) = self.memo.get(&(level, v)) {
                    return known;
                }
                let found = (0..self.steps.len()).any(|j| {
                    let k = self.steps[j];
                    self.contains(level - 1, v - k)
                });
                self.memo.insert((level, v), found);
                found
            }
        }
    }
}

/// Recomputes everything a certificate claims from the diagrams and f.
pub fn verify_certificate(
    cert: &BoundCertificate,
    d: &Diagram,
    d2: &Diagram,
    f: &CochainFn,
) -> Result<(), CertificateError> {
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(CertificateError::Schema(cert.schema));
    }
    if cert.diagram != DiagramRef::of(d) {
        return Err(CertificateError::DiagramMismatch { which: "source" });
    }
    if cert.target != DiagramRef::of(d2) {
        return Err(CertificateError::DiagramMismatch { which: "target" });
    }
    let n = f.modulus();
    if cert.n != n || cert.f != f.canonical() {
        return Err(CertificateError::FunctionMismatch { n: cert.n, f: cert.f.clone() });
    }

    let s = cert.outer_color;
    let phi = phi_set(d2, s, f).map_err(|_| CertificateError::Phi)?;
    if phi.values != cert.phi {
        return Err(CertificateError::Phi);
    }

    let all = enumerate_colorings(d, n);
    if cert.degenerate {
        let has_nontrivial = all.iter().any(|c| !c.is_trivial());
        let empty = cert.coloring_id.is_none()
            && cert.weight.is_none()
            && cert.levels.is_empty()
            && cert.certified_m == 0;
        return if has_nontrivial || !empty { Err(CertificateError::Degenerate) } else { Ok(()) };
    }

    let coloring = Coloring::new(d, n, cert.coloring.clone())?;
    if coloring.is_trivial() {
        return Err(CertificateError::TrivialColoring);
    }
    match cert.coloring_id {
        Some(id) if all.get(id) == Some(&coloring) => {}
        Some(id) => return Err(CertificateError::ColoringId(id)),
        None => return Err(CertificateError::Degenerate),
    }
    let ec = extend_coloring(d, &coloring, s)?;
    let w = weight(d, &ec, f).map_err(|_| CertificateError::Weight {
        claimed: cert.weight,
        actual: None,
    })?;
    if cert.weight != Some(w.value) {
        return Err(CertificateError::Weight { claimed: cert.weight, actual: Some(w.value) });
    }
    let mut diffs: Vec<i128> = phi.values.iter().map(|p| w.value - p).collect();
    diffs.sort_unstable();
    diffs.dedup();
    if diffs != cert.differences {
        return Err(CertificateError::Differences);
    }

    if cert.levels.len() > cert.max_m
        || cert.levels.iter().enumerate().any(|(i, l)| l.level != i)
    {
        return Err(CertificateError::Levels);
    }
    let mut membership = LevelMembership::new(f);
    let mut depth = cert.levels.len();
    for verdict in &cert.levels {
        let actual: Vec<i128> =
            diffs.iter().copied().filter(|&v| membership.contains(verdict.level, v)).collect();
        if actual != verdict.hits {
            return Err(CertificateError::LevelHits {
                level: verdict.level,
                claimed: verdict.hits.clone(),
                actual,
            });
        }
        if !actual.is_empty() {
            if verdict.level + 1 != cert.levels.len() {
                return Err(CertificateError::Levels);
            }
            depth = verdict.level;
        }
    }
    if depth == cert.levels.len() && depth != cert.max_m {
        return Err(CertificateError::Levels);
    }
    if depth != cert.certified_m || cert.first_hit != (depth < cert.max_m).then_some(depth) {
        return Err(CertificateError::Depth { claimed: cert.certified_m, actual: depth });
    }
    Ok(())
}
