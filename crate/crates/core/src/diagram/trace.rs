//! Face tracing, arc merging and component walks over validated slot data.

use std::collections::BTreeMap;

use super::{Arc, ArcId, Crossing, Direction, Edge, EdgeId, Face, FaceId, Level, Side};

pub(super) struct Traced {
    pub faces: Vec<Face>,
    /// `[left, right]` per edge index.
    pub edge_faces: Vec<[FaceId; 2]>,
    pub sector_faces: Vec<[FaceId; 4]>,
}

/// A dart is a slot seen as the start of a walk along its edge. Leaving
/// through slot `k`, arriving at slot `k'` of the far crossing, the walk
/// continues through slot `k' + 1`; the face of the dart at `k` therefore
/// contains the corner between slots `k - 1` and `k`. A dart through an
/// `out` slot runs along the orientation and bounds the edge's left face.
pub(super) fn trace_faces(
    crossings: &[Crossing],
    edges: &[Edge],
    edge_index: &BTreeMap<EdgeId, usize>,
) -> Traced {
    const UNSEEN: usize = usize::MAX;
    let mut orbit_of = vec![[UNSEEN; 4]; crossings.len()];
    let mut orbits: Vec<Vec<(usize, usize)>> = Vec::new();

    for c in 0..crossings.len() {
        for k in 0..4 {
            if orbit_of[c][k] != UNSEEN {
                continue;
            }
            let idx = orbits.len();
            let mut orbit = Vec::new();
            let (mut cc, mut kk) = (c, k);
            while orbit_of[cc][kk] == UNSEEN {
                orbit_of[cc][kk] = idx;
                orbit.push((cc, kk));
                let slot = crossings[cc].slots[kk];
                let edge = &edges[edge_index[&slot.edge]];
                let far = match slot.dir {
                    Direction::Out => edge.head,
                    Direction::In => edge.tail,
                };
                cc = far.crossing;
                kk = (far.slot + 1) % 4;
            }
            orbits.push(orbit);
        }
    }

    let entry = |(c, k): (usize, usize)| {
        let slot = crossings[c].slots[k];
        let side = match slot.dir {
            Direction::Out => Side::Left,
            Direction::In => Side::Right,
        };
        (slot.edge, side)
    };

    let mut keyed: Vec<(usize, Vec<(EdgeId, Side)>)> = orbits
        .iter()
        .enumerate()
        .map(|(i, orbit)| {
            let mut boundary: Vec<(EdgeId, Side)> = orbit.iter().map(|&d| entry(d)).collect();
            let start = (0..boundary.len()).min_by_key(|&j| boundary[j]).unwrap();
            boundary.rotate_left(start);
            (i, boundary)
        })
        .collect();
    keyed.sort_by(|a, b| a.1[0].cmp(&b.1[0]));

    let mut face_of_orbit = vec![FaceId(0); orbits.len()];
    let mut faces = Vec::with_capacity(orbits.len());
    for (id, (orbit, boundary)) in keyed.into_iter().enumerate() {
        face_of_orbit[orbit] = FaceId(id);
        faces.push(Face { id: FaceId(id), boundary });
    }

    let mut edge_faces = vec![[FaceId(0); 2]; edges.len()];
    let mut sector_faces = vec![[FaceId(0); 4]; crossings.len()];
    for (c, darts) in orbit_of.iter().enumerate() {
        for (k, &orbit) in darts.iter().enumerate() {
            let face = face_of_orbit[orbit];
            sector_faces[c][(k + 3) % 4] = face;
            let (edge, side) = entry((c, k));
            edge_faces[edge_index[&edge]][side as usize] = face;
        }
    }

    Traced { faces, edge_faces, sector_faces }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Connected pieces of the underlying 4-valent graph.
pub(super) fn count_pieces(n_crossings: usize, edges: &[Edge]) -> usize {
    let mut parent: Vec<usize> = (0..n_crossings).collect();
    for e in edges {
        union(&mut parent, e.tail.crossing, e.head.crossing);
    }
    (0..n_crossings).filter(|&c| find(&mut parent, c) == c).count()
}

/// Index of the edge that continues the strand entering through `edge`'s head.
fn next_along(crossings: &[Crossing], edge: &Edge, edge_index: &BTreeMap<EdgeId, usize>) -> usize {
    let head = edge.head;
    let out = crossings[head.crossing].slots[(head.slot + 2) % 4];
    edge_index[&out.edge]
}

pub(super) fn merge_arcs(
    crossings: &[Crossing],
    edges: &[Edge],
    edge_index: &BTreeMap<EdgeId, usize>,
) -> (Vec<Arc>, Vec<ArcId>) {
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    for c in crossings {
        let over: Vec<usize> = c
            .slots
            .iter()
            .filter(|s| s.level == Level::Over)
            .map(|s| edge_index[&s.edge])
            .collect();
        union(&mut parent, over[0], over[1]);
    }

    // roots are the smallest member, and edges are sorted by id, so grouping
    // by root in index order numbers arcs by their smallest edge id
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in 0..edges.len() {
        groups.entry(find(&mut parent, e)).or_default().push(e);
    }

    let mut arcs = Vec::with_capacity(groups.len());
    let mut arc_of_edge = vec![ArcId(0); edges.len()];
    for (id, members) in groups.into_values().enumerate() {
        let starts_under = |&&e: &&usize| {
            let t = edges[e].tail;
            crossings[t.crossing].slots[t.slot].level == Level::Under
        };
        let start = members.iter().find(starts_under).copied().unwrap_or(members[0]);
        let mut walk = Vec::with_capacity(members.len());
        let mut cur = start;
        loop {
            walk.push(edges[cur].id);
            arc_of_edge[cur] = ArcId(id);
            let head = edges[cur].head;
            if crossings[head.crossing].slots[head.slot].level == Level::Under {
                break;
            }
            cur = next_along(crossings, &edges[cur], edge_index);
            if cur == start {
                break;
            }
        }
        arcs.push(Arc { id: ArcId(id), edges: walk });
    }
    (arcs, arc_of_edge)
}

pub(super) fn components(
    crossings: &[Crossing],
    edges: &[Edge],
    edge_index: &BTreeMap<EdgeId, usize>,
) -> Vec<Vec<EdgeId>> {
    let mut seen = vec![false; edges.len()];
    let mut out = Vec::new();
    for start in 0..edges.len() {
        if seen[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            walk.push(edges[cur].id);
            cur = next_along(crossings, &edges[cur], edge_index);
        }
        out.push(walk);
    }
    out
}
