//! Functions `f: Z(n)^3 -> Z` with `f(x, y, y) = 0`, their coboundary and
//! the obstruction sets built from its image.

pub mod cache;
mod poly;
mod sumset;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coloring::{quandle_star, Color, Modulus};

pub use poly::{parse_poly, Overflow, ParseError, ParseErrorKind, PolyExpr, Polynomial, Var};
pub use sumset::{sumset, SumsetError};

/// Largest level cardinality [`DeltaReach`] will build by default.
pub const DEFAULT_LEVEL_CAP: usize = 10_000_000;

// table entries stay below this so the six-term coboundary cannot overflow
const TABLE_BOUND: i128 = i128::MAX / 8;

#[derive(Debug, Error)]
pub enum CochainError {
    #[error("invalid polynomial: {0}")]
    Parse(#[from] ParseError),
    #[error("f({x}, {y}, {z}) = {value}, but f(x, y, y) must vanish")]
    NotSharp { x: Color, y: Color, z: Color, value: i128 },
    #[error("f({x}, {y}, {z}) is too large to tabulate")]
    Overflow { x: Color, y: Color, z: Color },
    #[error("level {level} would exceed the cardinality cap of {cap}")]
    CapExceeded { level: usize, cap: usize },
    #[error("integer overflow while building level {level}")]
    SumOverflow { level: usize },
}

/// A tabulated `f` on the canonical representatives `0..n`, values not
/// reduced mod `n`.
#[derive(Clone, Debug)]
pub struct CochainFn {
    expr: PolyExpr,
    canonical: String,
    modulus: Modulus,
    table: Vec<i128>,
}

impl CochainFn {
    pub fn new(expr: PolyExpr, n: Modulus) -> Result<Self, CochainError> {
        let size = n.get() as usize;
        let mut table = Vec::with_capacity(size * size * size);
        for x in n.colors() {
            for y in n.colors() {
                for z in n.colors() {
                    let value = expr
                        .eval(x as i128, y as i128, z as i128)
                        .ok()
                        .filter(|v| v.abs() <= TABLE_BOUND)
                        .ok_or(CochainError::Overflow { x, y, z })?;
                    table.push(value);
                }
            }
        }
        let canonical = expr
            .expand()
            .map(|p| p.to_string())
            .unwrap_or_else(|_| expr.to_string());
        let f = CochainFn { expr, canonical, modulus: n, table };
        if let Some([x, y, z]) = f.sharp_violation() {
            return Err(CochainError::NotSharp { x, y, z, value: f.eval(x, y, z) });
        }
        Ok(f)
    }

    pub fn parse(text: &str, n: Modulus) -> Result<Self, CochainError> {
        CochainFn::new(parse_poly(text)?, n)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn expr(&self) -> &PolyExpr {
        &self.expr
    }

    /// Fully expanded form with sorted monomials; equal for expressions
    /// with equal expansions.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    /// Identifies `(n, canonical f)`.
    pub fn cache_key(&self) -> String {
        let digest = Sha256::digest(format!("{}:{}", self.modulus, self.canonical));
        hex::encode(&digest[..8])
    }

    fn index(&self, x: Color, y: Color, z: Color) -> usize {
        let n = self.modulus.get() as usize;
        (x as usize * n + y as usize) * n + z as usize
    }

    pub fn eval(&self, x: Color, y: Color, z: Color) -> i128 {
        self.table[self.index(x, y, z)]
    }

    fn sharp_violation(&self) -> Option<[Color; 3]> {
        let n = self.modulus;
        n.colors()
            .flat_map(|x| n.colors().map(move |y| [x, y, y]))
            .find(|&[x, y, z]| self.eval(x, y, z) != 0)
    }

    /// `f(x,z,w) - f(x,y,w) + f(x,y,z) - f(x*y,z,w) + f(x*z,y*z,w) - f(x*w,y*w,z*w)`
    pub fn delta(&self, x: Color, y: Color, z: Color, w: Color) -> i128 {
        let n = self.modulus;
        let s = |a, b| quandle_star(a, b, n);
        self.eval(x, z, w) - self.eval(x, y, w) + self.eval(x, y, z) - self.eval(s(x, y), z, w)
            + self.eval(s(x, z), s(y, z), w)
            - self.eval(s(x, w), s(y, w), s(z, w))
    }

    /// `Im(δf)` over all `n^4` tuples, sorted.
    pub fn image_delta(&self) -> Vec<i128> {
        let n = self.modulus;
        let mut image: Vec<i128> = Vec::new();
        for x in n.colors() {
            for y in n.colors() {
                for z in n.colors() {
                    for w in n.colors() {
                        image.push(self.delta(x, y, z, w));
                    }
                }
            }
        }
        image.sort_unstable();
        image.dedup();
        image
    }
}

/// Counterexample `(x, y, y)` with `f(x, y, y) != 0`, if any.
pub fn sharp_violation(expr: &PolyExpr, n: Modulus) -> Result<Option<[Color; 3]>, Overflow> {
    for x in n.colors() {
        for y in n.colors() {
            if expr.eval(x as i128, y as i128, y as i128)? != 0 {
                return Ok(Some([x, y, y]));
            }
        }
    }
    Ok(None)
}

pub fn check_sharp(expr: &PolyExpr, n: Modulus) -> bool {
    matches!(sharp_violation(expr, n), Ok(None))
}

/// `Δ_0 = {0}` and `Δ_m = Δ_{m-1} + (±Im δf)`, built on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReach {
    n: Modulus,
    f: String,
    im_delta: Vec<i128>,
    signed: Vec<i128>,
    levels: Vec<Vec<i128>>,
    cap: usize,
}

fn symmetric_closure(image: &[i128]) -> Vec<i128> {
    let mut signed: Vec<i128> = image.iter().flat_map(|&v| [v, -v]).collect();
    signed.sort_unstable();
    signed.dedup();
    signed
}

impl DeltaReach {
    pub fn new(f: &CochainFn) -> Self {
        Self::from_parts(f.modulus, f.canonical.clone(), f.image_delta(), vec![vec![0]])
    }

    pub(crate) fn from_parts(
        n: Modulus,
        f: String,
        im_delta: Vec<i128>,
        levels: Vec<Vec<i128>>,
    ) -> Self {
        let signed = symmetric_closure(&im_delta);
        DeltaReach { n, f, im_delta, signed, levels, cap: DEFAULT_LEVEL_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_for(&self, f: &CochainFn) -> bool {
        self.n == f.modulus && self.f == f.canonical
    }

    pub fn modulus(&self) -> Modulus {
        self.n
    }

    pub fn canonical_f(&self) -> &str {
        &self.f
    }

    /// `Im(δf)`, unsigned.
    pub fn image(&self) -> &[i128] {
        &self.im_delta
    }

    /// `±Im(δf)`, which is also `Δ_1`.
    pub fn signed_image(&self) -> &[i128] {
        &self.signed
    }

    pub fn levels(&self) -> &[Vec<i128>] {
        &self.levels
    }

    pub fn level(&self, m: usize) -> Option<&[i128]> {
        self.levels.get(m).map(Vec::as_slice)
    }

    pub fn extend_to(&mut self, m: usize) -> Result<(), CochainError> {
        while self.levels.len() <= m {
            let level = self.levels.len();
            let prev = self.levels.last().expect("level 0 always present");
            let next = sumset(prev, &self.signed, self.cap).map_err(|e| match e {
                SumsetError::CapExceeded { cap } => CochainError::CapExceeded { level, cap },
                SumsetError::Overflow => CochainError::SumOverflow { level },
            })?;
            self.levels.push(next);
        }
        Ok(())
    }

    pub fn ensure(&mut self, m: usize) -> Result<&[i128], CochainError> {
        self.extend_to(m)?;
        Ok(&self.levels[m])
    }
}

/// `Δ_0, ..., Δ_max_m` for `f`.
pub fn delta_reach(f: &CochainFn, max_m: usize) -> Result<DeltaReach, CochainError> {
    let mut reach = DeltaReach::new(f);
    reach.extend_to(max_m)?;
    Ok(reach)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> CochainFn {
        CochainFn::parse("(x-y)*(y-z)*z", Modulus::new(3).unwrap()).unwrap()
    }

    #[test]
    fn reference_values() {
        let f = f3();
        assert_eq!(f.eval(2, 0, 2), -8);
        assert_eq!(f.delta(0, 1, 0, 1), 2);
        assert_eq!(f.delta(0, 2, 0, 1), 11);
        assert_eq!(f.delta(2, 1, 2, 1), -2);
        assert_eq!(f.image_delta(), vec![-8, -7, -5, -4, -2, -1, 0, 1, 2, 4, 5, 7, 11]);
    }

    #[test]
    fn sharp_condition() {
        let n3 = Modulus::new(3).unwrap();
        let x = parse_poly("x").unwrap();
        assert_eq!(sharp_violation(&x, n3), Ok(Some([1, 0, 0])));
        assert!(!check_sharp(&x, n3));
        assert!(check_sharp(&parse_poly("0").unwrap(), n3));
        match CochainFn::new(x, n3) {
            Err(CochainError::NotSharp { x: 1, y: 0, z: 0, value: 1 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equal_expansions_share_a_key() {
        let n = Modulus::new(3).unwrap();
        let a = f3();
        let b = CochainFn::parse("z*(y - z)*(x - y)", n).unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.cache_key(), b.cache_key());
        let c = CochainFn::parse("(x-y)*(y-z)*z", Modulus::new(5).unwrap()).unwrap();
        assert_ne!(a.cache_key(), c.cache_key());
    }

    #[test]
    fn table_overflow_is_an_error() {
        let r = CochainFn::parse("(y-z)*x^120", Modulus::new(4).unwrap());
        assert!(matches!(r, Err(CochainError::Overflow { .. })));
    }

    #[test]
    fn levels() {
        let reach = delta_reach(&f3(), 2).unwrap();
        assert_eq!(reach.level(0), Some(&[0][..]));
        assert_eq!(
            reach.level(1).unwrap(),
            &[-11, -8, -7, -5, -4, -2, -1, 0, 1, 2, 4, 5, 7, 8, 11]
        );
        assert!(reach.level(2).unwrap().binary_search(&22).is_ok());
        assert_eq!(delta_reach(&f3(), 0).unwrap().levels().len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let mut reach = DeltaReach::new(&f3()).with_cap(20);
        assert!(reach.extend_to(1).is_ok());
        assert!(matches!(reach.extend_to(2), Err(CochainError::CapExceeded { level: 2, cap: 20 })));
    }
}
