use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum SumsetError {
    #[error("sumset exceeds the cardinality cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("integer overflow in sumset")]
    Overflow,
}

/// Shifts merged per round before the running result is compacted.
const CHUNK: usize = 64;

/// `{a + b : a in lhs, b in rhs}` for sorted, deduplicated inputs.
///
/// Shifted copies of `lhs` are merged into the running result a chunk of
/// shifts at a time, so the cap is enforced while memory stays bounded by
/// roughly `cap + CHUNK * |lhs|`.
pub fn sumset(lhs: &[i128], rhs: &[i128], cap: usize) -> Result<Vec<i128>, SumsetError> {
    let mut acc: Vec<i128> = Vec::new();
    let mut batch: Vec<i128> = Vec::with_capacity(lhs.len() * CHUNK.min(rhs.len()));
    for shifts in rhs.chunks(CHUNK) {
        batch.clear();
        for &b in shifts {
            for &a in lhs {
                batch.push(a.checked_add(b).ok_or(SumsetError::Overflow)?);
            }
        }
        batch.sort_unstable();
        batch.dedup();
        acc = merge_dedup(&acc, &batch);
        if acc.len() > cap {
            return Err(SumsetError::CapExceeded { cap });
        }
    }
    Ok(acc)
}

fn merge_dedup(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let v = if a[i] < b[j] {
            i += 1;
            a[i - 1]
        } else if b[j] < a[i] {
            j += 1;
            b[j - 1]
        } else {
            i += 1;
            j += 1;
            a[i - 1]
        };
        out.push(v);
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
