use std::collections::BTreeSet;

use ahaut_core::curves::{CurveAutomorphism, CurveModel, CurvePoint, ECPoint, MobiusMap, P1Point};
use ahaut_core::datum::{bad_locus, difference, pullback, validate_datum, AHDatum, Difference, RawCoefficient, RawDatum};
use ahaut_core::galois::{
    cohomology, compose, sum_zero_permutation_certificate, InvolutionLattice, Permutation,
    PermutationVerdict,
};
use ahaut_core::curves::{sum_zero_action, witness_matches, EllipticCurve};
use ahaut_core::lifting::{lift_group, lift_test, translation_lift_locus, LiftResult, LocusPoints};
use ahaut_core::polyhedra::RationalVector;
use ahaut_core::scalar::{q_frac, GaussianRational};
use proptest::prelude::*;

const POINTS: [&str; 8] = ["0", "1", "-1", "2", "1/2", "i", "-i", "inf"];

fn p1(s: &str) -> P1Point {
    s.parse().unwrap()
}

fn tails(n: usize) -> Vec<Vec<Vec<i64>>> {
    match n {
        1 => vec![vec![], vec![vec![1]], vec![vec![-1]]],
        2 => vec![vec![], vec![vec![1, 0], vec![0, 1]], vec![vec![1, 2], vec![1, -1]]],
        _ => vec![vec![], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]],
    }
}

prop_compose! {
    fn vertex(n: usize)(coords in prop::collection::vec((-6i64..=6, prop::sample::select(vec![1i64, 1, 1, 2])), n)) -> RationalVector {
        RationalVector(coords.into_iter().map(|(a, b)| q_frac(a, b)).collect())
    }
}

fn raw_datum(curve: CurveModel, allowed: Vec<&'static str>) -> impl Strategy<Value = RawDatum> {
    (1usize..=3).prop_flat_map(move |n| {
        let curve = curve.clone();
        let allowed = allowed.clone();
        (
            prop::sample::select(tails(n)),
            prop::collection::vec(
                (prop::sample::select(allowed), prop::collection::vec(vertex(n), 1..=2)),
                0..=4,
            ),
        )
            .prop_map(move |(tail, coeffs)| {
                let mut seen = BTreeSet::new();
                let coefficients = coeffs
                    .into_iter()
                    .filter(|(p, _)| seen.insert(*p))
                    .map(|(p, vertices)| RawCoefficient { point: CurvePoint::Line(p1(p)), vertices, rays: None })
                    .collect();
                RawDatum { torus_rank: n, tail_rays: tail, curve: curve.clone(), coefficients }
            })
    })
}

fn mobius() -> impl Strategy<Value = MobiusMap> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
        .prop_filter("invertible", |(a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(a, b, c, d)| MobiusMap::from_ints(a, b, c, d).unwrap())
}

fn on_p1() -> impl Strategy<Value = AHDatum> {
    raw_datum(CurveModel::P1, POINTS.to_vec()).prop_map(|r| validate_datum(&r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullback_is_a_right_action(d in on_p1(), psi in mobius(), phi in mobius()) {
        let (psi, phi) = (CurveAutomorphism::Mobius(psi), CurveAutomorphism::Mobius(phi));
        let composite = psi.compose(d.curve(), &phi).unwrap();
        let lhs = pullback(&composite, &d).unwrap();
        let rhs = pullback(&phi, &pullback(&psi, &d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn liftable_witnesses_round_trip(d in on_p1(), psi in mobius()) {
        let psi = CurveAutomorphism::Mobius(psi);
        if let LiftResult::Liftable { witness, divisor } = lift_test(&d, &psi).unwrap() {
            let Difference::Divisor(expected) = difference(&pullback(&psi, &d).unwrap(), &d).unwrap() else {
                panic!("liftable implies integral translates");
            };
            prop_assert_eq!(&divisor, &expected);
            for (w, div) in witness.components.iter().zip(&expected.divisors) {
                prop_assert!(witness_matches(d.curve(), w, div).unwrap());
            }
        }
    }

    #[test]
    fn bad_locus_moves_with_pullback(d in on_p1(), psi in mobius()) {
        let psi = CurveAutomorphism::Mobius(psi);
        let inv = psi.inverse(d.curve());
        let expected: BTreeSet<CurvePoint> =
            bad_locus(&d).points().iter().map(|p| inv.apply(d.curve(), p).unwrap()).collect();
        let got: BTreeSet<CurvePoint> = bad_locus(&pullback(&psi, &d).unwrap()).points().into_iter().collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn translates_of_omega_always_lift_on_p1(
        n in 1usize..=3,
        pts in prop::collection::btree_set(prop::sample::select(POINTS.to_vec()), 0..=5),
        shifts in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 5),
        psi in mobius(),
    ) {
        let coefficients = pts.iter().zip(&shifts).map(|(p, v)| RawCoefficient {
            point: CurvePoint::Line(p1(p)),
            vertices: vec![RationalVector::from_ints(&v[..n])],
            rays: None,
        }).collect();
        let d = validate_datum(&RawDatum { torus_rank: n, tail_rays: tails(n)[1].clone(), curve: CurveModel::P1, coefficients }).unwrap();
        prop_assert!(lift_test(&d, &CurveAutomorphism::Mobius(psi)).unwrap().is_liftable());
    }

    #[test]
    fn listed_lifts_form_a_group(
        raw in raw_datum(CurveModel::p1_minus([p1("0"), p1("1"), p1("inf")]).unwrap(), vec!["-1", "2", "1/2", "i", "-i"]),
    ) {
        let d = validate_datum(&raw).unwrap();
        let k = lift_group(&d).unwrap();
        let elements = k.listed_elements();
        if !elements.is_empty() {
            let set: BTreeSet<_> = elements.iter().cloned().collect();
            for a in &elements {
                prop_assert!(set.contains(&a.inverse(d.curve())));
                for b in &elements {
                    prop_assert!(set.contains(&a.compose(d.curve(), b).unwrap()));
                }
            }
        }
        for a in &elements {
            prop_assert!(lift_test(&d, a).unwrap().is_liftable());
        }
    }

    #[test]
    fn sum_zero_type_is_relabeling_invariant(perm in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(), inv_seed in 0usize..4) {
        // Involutions on 5 points: products of up to two disjoint transpositions.
        let mut sigma: Permutation = (0..5).collect();
        let pairs = [(0usize, 1usize), (2, 3)];
        for &(a, b) in pairs.iter().take(inv_seed.min(2)) {
            sigma.swap(a, b);
        }
        let mut perm_inv = vec![0; 5];
        for (i, &j) in perm.iter().enumerate() {
            perm_inv[j] = i;
        }
        let conjugated = compose(&perm, &compose(&sigma, &perm_inv));
        let r1 = cohomology(&InvolutionLattice::new(sum_zero_action(&sigma)).unwrap()).unwrap();
        let r2 = cohomology(&InvolutionLattice::new(sum_zero_action(&conjugated)).unwrap()).unwrap();
        prop_assert_eq!((r1.a, r1.b, r1.c), (r2.a, r2.b, r2.c));
    }

    #[test]
    fn adding_generators_keeps_sign_witnesses(
        gens in prop::collection::vec(Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(), 1..=2),
        extra in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let before = sum_zero_permutation_certificate(5, &gens).unwrap();
        let mut more = gens.clone();
        more.push(extra);
        let after = sum_zero_permutation_certificate(5, &more).unwrap();
        let is_sign = |v: &PermutationVerdict| matches!(v, PermutationVerdict::NotPermutation { .. });
        let is_perm = |v: &PermutationVerdict| matches!(v, PermutationVerdict::Permutation { .. });
        if is_sign(&before) {
            prop_assert!(is_sign(&after));
        }
        if is_perm(&after) {
            prop_assert!(is_perm(&before));
        }
    }
}

#[test]
fn elliptic_locus_matches_individual_tests() {
    for (a, b) in [(-1, 0), (0, 1), (0, -2)] {
        let e = EllipticCurve::from_ints(a, b).unwrap();
        let torsion = e.torsion_points().unwrap();
        for base in &torsion {
            if base.is_infinity() {
                continue;
            }
            for v in [1, 2, 3, 6] {
                let d = validate_datum(&RawDatum {
                    torus_rank: 1,
                    tail_rays: vec![vec![1]],
                    curve: CurveModel::Elliptic(e.clone()),
                    coefficients: vec![RawCoefficient {
                        point: CurvePoint::Elliptic(base.clone()),
                        vertices: vec![RationalVector::from_ints(&[v])],
                        rays: None,
                    }],
                })
                .unwrap();
                let locus = translation_lift_locus(&d).unwrap();
                let LocusPoints::Finite(pts) = locus.points else { panic!("g = {v} is nonzero") };
                let individually: Vec<ECPoint> = torsion
                    .iter()
                    .filter(|t| {
                        let psi = CurveAutomorphism::Elliptic(ahaut_core::EcAutomorphism::translation((*t).clone()));
                        lift_test(&d, &psi).unwrap().is_liftable()
                    })
                    .cloned()
                    .collect();
                assert_eq!(pts, individually, "curve ({a},{b}), point {base}, weight {v}");
            }
        }
    }
}

#[test]
fn gaussian_conjugation_is_an_involutive_ring_map() {
    let xs: Vec<GaussianRational> = ["0", "1", "-i", "1/2+3i", "-2/3-1/5i"].iter().map(|s| s.parse().unwrap()).collect();
    for x in &xs {
        assert_eq!(x.conj().conj(), *x);
        for y in &xs {
            assert_eq!((x + y).conj(), &x.conj() + &y.conj());
            assert_eq!((x * y).conj(), &x.conj() * &y.conj());
        }
    }
}
