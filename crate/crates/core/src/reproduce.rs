//! Recomputes every reference value from the fixtures and compares.

use std::fmt::Debug;

use serde::Serialize;

use crate::cochain::cache::DeltaCache;
use crate::cochain::{CochainFn, DeltaReach};
use crate::coloring::{extend_coloring, Coloring, Modulus};
use crate::invariant::{
    certify_lower_bound_with, crossing_triples, phi_set, verify_certificate, w4_formula, weight,
    BoundCertificate,
};
use crate::reference::{
    FixtureLibrary, ReferenceCase, CASES, COBOUNDARY_TABLE_N3, FIGURE_EIGHT_WEIGHTS,
    SIGNED_IMAGE_N3, TREFOIL_F,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
    /// First mismatching value, when there is one.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Reproduction {
    pub checks: Vec<Check>,
    pub certificates: Vec<BoundCertificate>,
    pub cache_hits: usize,
    pub warnings: Vec<String>,
}

impl Reproduction {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn compare<T: PartialEq + Debug>(&mut self, name: String, expected: T, actual: T) {
        let passed = expected == actual;
        self.checks.push(Check {
            name,
            passed,
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
            detail: None,
        });
    }

    fn compare_sets(&mut self, name: String, expected: &[i128], actual: &[i128]) {
        self.compare(name, expected, actual);
        if let Some(check) = self.checks.last_mut() {
            check.detail = first_set_difference(expected, actual);
        }
    }

    fn failed(&mut self, name: String, expected: String, error: impl ToString) {
        let actual = error.to_string();
        self.checks.push(Check { name, passed: false, expected, detail: Some(actual.clone()), actual });
    }
}

/// First element (in ascending order) present in only one of two sorted sets.
pub fn first_set_difference(expected: &[i128], actual: &[i128]) -> Option<String> {
    let (mut i, mut j) = (0, 0);
    loop {
        match (expected.get(i), actual.get(j)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => return Some(format!("missing {a}")),
            (Some(_), Some(b)) => return Some(format!("unexpected {b}")),
            (Some(a), None) => return Some(format!("missing {a}")),
            (None, Some(b)) => return Some(format!("unexpected {b}")),
            (None, None) => return None,
        }
    }
}

fn cochain(case: &ReferenceCase) -> CochainFn {
    CochainFn::parse(case.f, Modulus::new(case.n).expect("n >= 1")).expect("reference f is valid")
}

/// Runs every check. With a cache, obstruction levels are loaded from and
/// written back to it.
pub fn reproduce(lib: &FixtureLibrary, cache: Option<&DeltaCache>) -> Reproduction {
    let mut out = Reproduction::default();
    coboundary_checks(&mut out);
    for case in &CASES {
        let f = cochain(case);
        out.compare(format!("image size n={}", case.n), case.image_size, f.image_delta().len());
    }
    figure_eight_table(&mut out);
    for case in &CASES {
        case_checks(&mut out, lib, case, cache);
    }
    out
}

fn coboundary_checks(out: &mut Reproduction) {
    let f = CochainFn::parse(TREFOIL_F, Modulus::new(3).unwrap()).unwrap();
    let mismatch = COBOUNDARY_TABLE_N3.iter().find_map(|&([x, y, z, w], v)| {
        let got = f.delta(x, y, z, w);
        (got != v).then(|| format!("δf({x},{y},{z},{w}): expected {v}, got {got}"))
    });
    out.checks.push(Check {
        name: "coboundary table n=3".into(),
        passed: mismatch.is_none(),
        expected: format!("{} tabulated values", COBOUNDARY_TABLE_N3.len()),
        actual: if mismatch.is_none() { "all equal".into() } else { "mismatch".into() },
        detail: mismatch,
    });

    let n = f.modulus();
    let nonzero_degenerate = n
        .colors()
        .flat_map(|x| n.colors().map(move |y| (x, y)))
        .flat_map(|(x, y)| n.colors().flat_map(move |z| n.colors().map(move |w| [x, y, z, w])))
        .filter(|&[x, y, z, w]| x == y || y == z || z == w)
        .find(|&[x, y, z, w]| f.delta(x, y, z, w) != 0);
    out.compare("coboundary vanishes on degenerate tuples".into(), None, nonzero_degenerate);

    let reach = DeltaReach::new(&f);
    out.compare_sets("signed image n=3".into(), &SIGNED_IMAGE_N3, reach.signed_image());
}

fn figure_eight_table(out: &mut Reproduction) {
    let f = cochain(&CASES[1]);
    let mut mismatch = None;
    for &(a, b, v) in &FIGURE_EIGHT_WEIGHTS {
        match w4_formula(a, b, &f) {
            Ok(got) if got == v => {}
            Ok(got) => {
                mismatch = Some(format!("(a,b)=({a},{b}): expected {v}, got {got}"));
                break;
            }
            Err(e) => {
                mismatch = Some(format!("(a,b)=({a},{b}): {e}"));
                break;
            }
        }
    }
    out.checks.push(Check {
        name: "figure-eight weight formula".into(),
        passed: mismatch.is_none(),
        expected: format!("{} tabulated values", FIGURE_EIGHT_WEIGHTS.len()),
        actual: if mismatch.is_none() { "all equal".into() } else { "mismatch".into() },
        detail: mismatch,
    });
}

fn case_checks(
    out: &mut Reproduction,
    lib: &FixtureLibrary,
    case: &ReferenceCase,
    cache: Option<&DeltaCache>,
) {
    let f = cochain(case);
    let (d, d2) = match (lib.get(case.source), lib.get(case.target)) {
        (Ok(d), Ok(d2)) => (d, d2),
        (Err(e), _) | (_, Err(e)) => {
            out.failed(format!("{} fixtures", case.label), "present".into(), e);
            return;
        }
    };

    let weight_name = format!("weight {} s={}", case.source, case.s);
    let triples_name = format!("triples {} s={}", case.source, case.s);
    let extended = Coloring::new(d, f.modulus(), case.coloring.to_vec())
        .and_then(|c| extend_coloring(d, &c, case.s));
    match extended {
        Ok(ec) => {
            let mut expected = case.triples.to_vec();
            expected.sort_unstable();
            let mut actual: Vec<_> = crossing_triples(d, &ec).iter().map(|t| t.as_tuple()).collect();
            actual.sort_unstable();
            out.compare(triples_name, expected, actual);
            match weight(d, &ec, &f) {
                Ok(w) => out.compare(weight_name, case.weight, w.value),
                Err(e) => out.failed(weight_name, case.weight.to_string(), e),
            }
        }
        Err(e) => {
            out.failed(triples_name, format!("{:?}", case.triples), &e);
            out.failed(weight_name, case.weight.to_string(), e);
        }
    }

    let phi_name = format!("phi {} s={}", case.target, case.s);
    match phi_set(d2, case.s, &f) {
        Ok(phi) => out.compare_sets(phi_name, &case.expected_phi(), &phi.values),
        Err(e) => out.failed(phi_name, format!("{:?}", case.expected_phi()), e),
    }

    let bound_name = format!("bound {} -> {}", case.source, case.target);
    let mut reach = match cache.map(|c| c.load(&f)) {
        Some(Ok(Some(r))) => {
            out.cache_hits += 1;
            r
        }
        Some(Err(e)) => {
            out.warnings.push(format!("cache read failed: {e}"));
            DeltaReach::new(&f)
        }
        _ => DeltaReach::new(&f),
    };
    let levels_before = reach.levels().len();
    match certify_lower_bound_with(d, d2, case.s, &f, case.bound, &mut reach) {
        Ok(cert) => {
            out.compare(bound_name, case.bound, cert.certified_m);
            let verified = verify_certificate(&cert, d, d2, &f).map_err(|e| e.to_string());
            out.compare(format!("certificate {} -> {} re-verifies", case.source, case.target), Ok(()), verified);
            out.certificates.push(cert);
        }
        Err(e) => out.failed(bound_name, case.bound.to_string(), e),
    }
    if let Some(cache) = cache {
        if reach.levels().len() > levels_before {
            if let Err(e) = cache.store(&f, &reach) {
                out.warnings.push(format!("cache write failed: {e}"));
            }
        }
    }
}
