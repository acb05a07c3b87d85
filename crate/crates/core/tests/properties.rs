use std::collections::BTreeSet;

use proptest::prelude::*;

use tribound_core::cochain::{
    delta_reach, parse_poly, CochainFn, PolyExpr, Var,
};
use tribound_core::coloring::{
    enumerate_colorings, extend_coloring, quandle_star, Color, Coloring, Modulus,
};
use tribound_core::diagram::{
    braid_closure, crossing_sign, parse_diagram, Diagram, DiagramSpec, FaceId, Slot,
};
use tribound_core::invariant::{
    all_weights, certify_lower_bound, obstruction_depth, phi_set, verify_certificate, weight,
};
use tribound_core::reference::{FixtureLibrary, CASES};

fn modulus(n: u32) -> Modulus {
    Modulus::new(n).unwrap()
}

/// Braid words that use every generator, so the closure is connected.
fn braid_word() -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2usize..=4).prop_flat_map(|strands| {
        let k = strands as i32 - 1;
        let extra = prop::collection::vec(1..=k, 0..5);
        let signs = prop::collection::vec(any::<bool>(), (k as usize) + 5);
        (Just(strands), extra, signs, any::<prop::sample::Index>()).prop_map(
            move |(strands, extra, signs, rot)| {
                let mut word: Vec<i32> = (1..=k).chain(extra).collect();
                for (g, neg) in word.iter_mut().zip(signs) {
                    if neg {
                        *g = -*g;
                    }
                }
                let r = rot.index(word.len());
                word.rotate_left(r);
                (strands, word)
            },
        )
    })
}

fn closure(strands: usize, word: &[i32]) -> Diagram {
    braid_closure("braid", strands, word).expect("word uses every generator")
}

/// `(y - z) * g` for a random small polynomial `g`, so condition (#) holds.
fn sharp_poly() -> impl Strategy<Value = String> {
    let monomial = (-3i32..=3, 0u32..=2, 0u32..=2, 0u32..=2)
        .prop_map(|(c, i, j, k)| format!("({c})*x^{i}*y^{j}*z^{k}"));
    prop::collection::vec(monomial, 1..4).prop_map(|ms| format!("(y-z)*({})", ms.join(" + ")))
}

fn poly_expr() -> impl Strategy<Value = PolyExpr> {
    let leaf = prop_oneof![
        (-20i128..20).prop_map(PolyExpr::Int),
        prop_oneof![Just(Var::X), Just(Var::Y), Just(Var::Z)].prop_map(PolyExpr::Var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| PolyExpr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, k)| PolyExpr::Pow(Box::new(a), k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quandle_identities(n in 1u32..=12, x in 0u32..12, y in 0u32..12, z in 0u32..12) {
        let m = modulus(n);
        let (x, y, z) = (x % n, y % n, z % n);
        let s = |a, b| quandle_star(a, b, m);
        prop_assert_eq!(s(x, x), x);
        prop_assert_eq!(s(s(x, y), y), x);
        prop_assert_eq!(s(s(z, y), s(x, y)), s(s(z, x), y));
    }

    #[test]
    fn six_term_identity(case in 0usize..3, t in any::<[u32; 4]>()) {
        let case = &CASES[case];
        let f = CochainFn::parse(case.f, modulus(case.n)).unwrap();
        let [s, a, b, c] = t.map(|v| v % case.n);
        let st = |x, y| quandle_star(x, y, f.modulus());
        let lhs = f.eval(s, a, b) + f.eval(st(s, b), st(a, b), c) + f.eval(s, b, c)
            - f.eval(st(s, a), b, c) - f.eval(s, a, c) - f.eval(st(s, c), st(a, c), st(b, c));
        prop_assert_eq!(lhs, f.delta(s, a, b, c));
    }

    #[test]
    fn random_cochains_behave(text in sharp_poly(), n in 2u32..=5) {
        let f = CochainFn::parse(&text, modulus(n)).unwrap();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    prop_assert_eq!(f.delta(x, y, y, z), 0);
                    prop_assert_eq!(f.delta(x, y, z, z), 0);
                    prop_assert_eq!(
                        f.eval(x, y, z),
                        f.expr().eval(x as i128, y as i128, z as i128).unwrap()
                    );
                }
            }
        }
        let reach = delta_reach(&f, 2).unwrap();
        prop_assert!(reach.image().binary_search(&0).is_ok());
        for (i, level) in reach.levels().iter().enumerate() {
            let set: BTreeSet<i128> = level.iter().copied().collect();
            prop_assert!(set.iter().all(|v| set.contains(&-v)));
            if i > 0 {
                prop_assert!(reach.levels()[i - 1].iter().all(|v| set.contains(v)));
            }
        }
    }

    #[test]
    fn display_round_trip(e in poly_expr()) {
        let again = parse_poly(&e.to_string()).unwrap();
        for x in -2i128..=2 {
            for y in -2i128..=2 {
                for z in -2i128..=2 {
                    prop_assert_eq!(e.eval(x, y, z), again.eval(x, y, z));
                }
            }
        }
        if let (Ok(a), Ok(b)) = (e.expand(), again.expand()) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn diagram_round_trip((strands, word) in braid_word(), face in any::<prop::sample::Index>()) {
        let d = closure(strands, &word);
        let d = d.set_outer_face(FaceId(face.index(d.faces().len()))).unwrap();
        let text = d.to_spec().to_json();
        let again = parse_diagram(&text).unwrap();
        prop_assert_eq!(&again, &d);
        prop_assert!(d.validate().is_valid());
        prop_assert_eq!(DiagramSpec::from_json(&text).unwrap(), d.to_spec());
    }

    #[test]
    fn diagram_counts((strands, word) in braid_word()) {
        let d = closure(strands, &word);
        let v = d.crossings().len() as i64;
        prop_assert_eq!(d.edges().len() as i64, 2 * v);
        prop_assert_eq!(v - d.edges().len() as i64 + d.faces().len() as i64, 2);
        let sides: usize = d.faces().iter().map(|f| f.boundary.len()).sum();
        prop_assert_eq!(sides, 2 * d.edges().len());
        let arc_edges: usize = d.arcs().iter().map(|a| a.edges.len()).sum();
        prop_assert_eq!(arc_edges, d.edges().len());
    }

    #[test]
    fn sign_ignores_rotation((strands, word) in braid_word(), r in 0usize..4) {
        let d = closure(strands, &word);
        for c in d.crossings() {
            let mut slots: [Slot; 4] = c.slots;
            slots.rotate_left(r);
            prop_assert_eq!(crossing_sign(&slots), c.sign);
        }
    }

    #[test]
    fn trivial_colorings_weigh_nothing((strands, word) in braid_word(), case in 0usize..3, s in 0u32..5) {
        let case = &CASES[case];
        let f = CochainFn::parse(case.f, modulus(case.n)).unwrap();
        let d = closure(strands, &word);
        let s = s % case.n;
        for color in 0..case.n {
            let c = Coloring::new(&d, f.modulus(), vec![color; d.arcs().len()]).unwrap();
            let ec = extend_coloring(&d, &c, s).unwrap();
            prop_assert_eq!(weight(&d, &ec, &f).unwrap().value, 0);
        }
    }

    #[test]
    fn colorings_and_extensions((strands, word) in braid_word(), n in 1u32..=6, s in 0u32..6) {
        let d = closure(strands, &word);
        let m = modulus(n);
        let s = s % n;
        let all = enumerate_colorings(&d, m);
        prop_assert_eq!(all.len() % n as usize, 0);
        let vectors: BTreeSet<Vec<Color>> = all.iter().map(|c| c.arc_colors().to_vec()).collect();
        for c in &all {
            let shifted: Vec<Color> = c.arc_colors().iter().map(|&v| (v + 1) % n).collect();
            prop_assert!(vectors.contains(&shifted));
            let ec = extend_coloring(&d, c, s).unwrap();
            prop_assert_eq!(ec.base(), c);
            prop_assert_eq!(ec.region(d.outer_face()), s);
            for e in d.edges() {
                let [l, r] = d.edge_faces(e.id);
                let a = c.color(d.arc_of(e.id));
                prop_assert_eq!((ec.region(l) + ec.region(r)) % n, (2 * a) % n);
            }
        }
    }

    #[test]
    fn certificates_reverify_and_grow(
        (strands, word) in braid_word(),
        face in any::<prop::sample::Index>(),
        s in 0u32..3,
    ) {
        let f = CochainFn::parse(CASES[0].f, modulus(3)).unwrap();
        let d = closure(strands, &word);
        let d2 = d.set_outer_face(FaceId(face.index(d.faces().len()))).unwrap().with_name("moved");
        let mut previous = 0;
        for max_m in 1..=3 {
            let cert = certify_lower_bound(&d, &d2, s, &f, max_m).unwrap();
            prop_assert!(verify_certificate(&cert, &d, &d2, &f).is_ok());
            prop_assert!(cert.certified_m >= previous);
            previous = cert.certified_m;

            let phi = phi_set(&d2, s, &f).unwrap().values;
            let mut reach = tribound_core::cochain::DeltaReach::new(&f);
            for (ec, w) in all_weights(&d, s, &f).unwrap() {
                if ec.base().is_trivial() {
                    continue;
                }
                let mut diffs: Vec<i128> = phi.iter().map(|p| w - p).collect();
                diffs.sort_unstable();
                diffs.dedup();
                let (m, _) = obstruction_depth(&diffs, &mut reach, max_m).unwrap();
                prop_assert!(m <= cert.certified_m);
            }
        }
    }
}

/// Condition (#) kills the `y = z` and `z = w` faces for every f; the
/// `x = y` face also needs `f(x, x, z) = 0`, which only the n = 3 cochain has.
#[test]
fn degenerate_tuples() {
    for case in &CASES {
        let f = CochainFn::parse(case.f, modulus(case.n)).unwrap();
        let mut first_face = 0;
        for x in 0..case.n {
            for y in 0..case.n {
                for z in 0..case.n {
                    assert_eq!(f.delta(x, y, y, z), 0);
                    assert_eq!(f.delta(x, y, z, z), 0);
                    first_face += usize::from(f.delta(x, x, y, z) != 0);
                }
            }
        }
        let expected = match case.n {
            3 => 0,
            4 => 24,
            _ => 76,
        };
        assert_eq!(first_face, expected, "{}", case.label);
    }
}

#[test]
fn table_matches_fresh_evaluation() {
    for case in &CASES {
        let f = CochainFn::parse(case.f, modulus(case.n)).unwrap();
        for x in 0..case.n {
            for y in 0..case.n {
                for z in 0..case.n {
                    let fresh = f.expr().eval(x as i128, y as i128, z as i128).unwrap();
                    assert_eq!(f.eval(x, y, z), fresh);
                }
            }
        }
    }
}

#[test]
fn torus_link_parity_is_constant_per_component() {
    let lib = FixtureLibrary::bundled();
    for name in ["d5", "d6"] {
        let d = lib.get(name).unwrap();
        assert_eq!(d.components().len(), 2);
        for c in enumerate_colorings(d, modulus(4)) {
            for component in d.components() {
                let parities: BTreeSet<Color> =
                    component.iter().map(|&e| c.color(d.arc_of(e)) % 2).collect();
                assert_eq!(parities.len(), 1, "{name}: {:?}", c.arc_colors());
            }
        }
    }
}

#[test]
fn edge_relation_on_all_fixtures() {
    let lib = FixtureLibrary::bundled();
    for case in &CASES {
        for name in [case.source, case.target] {
            let d = lib.get(name).unwrap();
            for c in enumerate_colorings(d, modulus(case.n)) {
                for s in 0..case.n {
                    let ec = extend_coloring(d, &c, s).unwrap();
                    for e in d.edges() {
                        let [l, r] = d.edge_faces(e.id);
                        let a = c.color(d.arc_of(e.id));
                        assert_eq!((ec.region(l) + ec.region(r)) % case.n, (2 * a) % case.n);
                    }
                }
            }
        }
    }
}
