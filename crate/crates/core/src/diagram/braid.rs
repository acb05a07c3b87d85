use super::{
    CrossingSpec, Diagram, DiagramError, DiagramSpec, Direction, Level, OuterFaceSpec, SlotSpec,
};

/// Closure of a braid word on `strands` strands.
///
/// Letter `i` (1-based) crosses the strands at positions `i - 1` and `i`;
/// positive letters give positive crossings. Strands run upward and the
/// closing strands pass around the right-hand side, so the outer face is
/// the one to the left of the first strand. A position that never crosses
/// anything contributes no edges; a word whose letters fall into two
/// blocks with no generator between them gives a split diagram, which is
/// rejected.
pub fn braid_closure(
    name: impl Into<String>,
    strands: usize,
    word: &[i32],
) -> Result<Diagram, DiagramError> {
    assert!(
        word.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) < strands),
        "braid letters must be in ±1..{strands}"
    );
    let mut next_edge = strands as u32 + 1;
    let mut current: Vec<u32> = (1..=strands as u32).collect();
    let mut crossings = Vec::with_capacity(word.len());

    for (i, &letter) in word.iter().enumerate() {
        let right = letter.unsigned_abs() as usize;
        let left = right - 1;
        let (in_left, in_right) = (current[left], current[right]);
        let (out_ne, out_nw) = (next_edge, next_edge + 1);
        next_edge += 2;
        // the strand rising from the right is over for a positive letter
        let (lvl_left, lvl_right) =
            if letter > 0 { (Level::Under, Level::Over) } else { (Level::Over, Level::Under) };
        let slot = |edge, dir, level| SlotSpec { edge, dir, level };
        crossings.push(CrossingSpec {
            id: i as u32 + 1,
            // ccw from the north-east corner
            slots: vec![
                slot(out_ne, Direction::Out, lvl_left),
                slot(out_nw, Direction::Out, lvl_right),
                slot(in_left, Direction::In, lvl_left),
                slot(in_right, Direction::In, lvl_right),
            ],
        });
        current[left] = out_nw;
        current[right] = out_ne;
    }

    // the top of each position closes onto its bottom edge
    for c in &mut crossings {
        for s in &mut c.slots {
            if let Some(p) = current.iter().position(|&e| e == s.edge) {
                s.edge = p as u32 + 1;
            }
        }
    }

    // bottom edges carry the smallest ids; the leftmost one borders the outside
    let first_edge = crossings.iter().flat_map(|c| c.slots.iter().map(|s| s.edge)).min().unwrap_or(1);
    Diagram::from_spec(&DiagramSpec {
        name: name.into(),
        crossings,
        outer_face: OuterFaceSpec::EdgeSide { edge: first_edge, side: super::Side::Left },
    })
}
