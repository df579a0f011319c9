use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

use smoothlab_core::evolution::{mild_identity_residual, orbit};
use smoothlab_core::numerics::ulp;
use smoothlab_core::region::{exceptional_set, in_region};
use smoothlab_core::spectral::{apply_symbol, reflect_operator, spectral_projection, RegionPredicate};
use smoothlab_core::{
    BorelSymbol, ComplexPoint, DiagonalOperator, FamilyKind, RegionParams, SpectralVector, SpectrumFamily,
};

fn point() -> impl Strategy<Value = ComplexPoint> {
    (-3.0..3.0f64, -6.0..6.0f64).prop_map(|(x, y)| ComplexPoint::new(x, y).unwrap())
}

fn spectrum() -> impl Strategy<Value = Vec<ComplexPoint>> {
    prop::collection::vec(point(), 1..=16)
}

fn coefficients(len: usize) -> impl Strategy<Value = Vec<Option<Complex64>>> {
    prop::collection::vec(
        prop::option::weighted(
            0.7,
            (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)),
        ),
        len,
    )
}

fn operator_and_vector() -> impl Strategy<Value = (DiagonalOperator, SpectralVector)> {
    spectrum().prop_flat_map(|pts| {
        let len = pts.len();
        (Just(pts), coefficients(len)).prop_map(|(pts, cs)| {
            let f =
                SpectralVector::finite(cs.into_iter().enumerate().filter_map(|(i, c)| c.map(|z| (i + 1, z)))).unwrap();
            (DiagonalOperator::new(SpectrumFamily::finite(pts)), f)
        })
    })
}

fn dyadic(lo: i32, hi: i32) -> impl Strategy<Value = f64> {
    (lo * 256..=hi * 256).prop_map(|m| f64::from(m) / 256.0)
}

fn predicate() -> impl Strategy<Value = RegionPredicate> {
    let leaf = prop_oneof![
        Just(RegionPredicate::All),
        Just(RegionPredicate::Empty),
        (0.0..6.0f64).prop_map(|radius| RegionPredicate::ModulusAtMost { radius }),
        (-3.0..3.0f64).prop_map(|value| RegionPredicate::ReAtLeast { value }),
        (-6.0..6.0f64).prop_map(|value| RegionPredicate::ImAtMost { value }),
        (point(), 0.0..4.0f64).prop_map(|(center, radius)| RegionPredicate::Disk { center, radius }),
        (0.1..2.0f64, 0.1..2.0f64).prop_map(|(a, b)| RegionPredicate::InRegion {
            region: RegionParams::new(a, b).unwrap()
        }),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|p| RegionPredicate::Not { of: Box::new(p) }),
            prop::collection::vec(inner.clone(), 1..3).prop_map(|any| RegionPredicate::Or { any }),
        ]
    })
}

fn close(a: Complex64, b: Complex64, ulps: f64) -> bool {
    let scale = ulp(a.norm().max(b.norm()));
    (a.re - b.re).abs() <= ulps * scale && (a.im - b.im).abs() <= ulps * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exp_matches_matrix_exponential((a, f) in operator_and_vector(), t in prop::sample::select(vec![-1.0, 0.0, 1.0])) {
        let dim = a.dim().unwrap();
        let d = DMatrix::from_diagonal(&DVector::from_fn(dim, |i, _| {
            let l = a.eigenvalue(i + 1).unwrap();
            Complex64::new(t * l.re(), t * l.im())
        }));
        let x = DVector::from_fn(dim, |i, _| f.coefficient(i + 1).unwrap_or_default());
        let oracle = d.exp() * x;
        let out = apply_symbol(&BorelSymbol::exp(t), &a, &f, dim).unwrap();
        for i in 0..dim {
            let got = out.vector.coefficient(i + 1).unwrap_or_default();
            let want = oracle[i];
            prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(f64::MIN_POSITIVE), "{got} vs {want}");
        }
    }

    #[test]
    fn group_law((a, f) in operator_and_vector(), t in dyadic(-2, 2), s in dyadic(-2, 2)) {
        let n = a.dim().unwrap();
        let direct = orbit(&a, &f, t + s, n).unwrap().value;
        let first = orbit(&a, &f, t, n).unwrap().value;
        let twice = orbit(&a, &first, s, n).unwrap().value;
        for (k, z) in direct.entries() {
            let w = twice.coefficient(*k).unwrap();
            prop_assert!(close(*z, w, 4.0), "k={k}: {z} vs {w}");
        }
        prop_assert_eq!(orbit(&a, &f, 0.0, n).unwrap().value, f);
    }

    #[test]
    fn projections_multiply_and_are_idempotent((a, f) in operator_and_vector(), d in predicate(), s in predicate()) {
        let n = a.dim().unwrap();
        let ed = |v: &SpectralVector, p: &RegionPredicate| spectral_projection(&a, p, v, n).unwrap().vector;
        let lhs = ed(&ed(&f, &s), &d);
        let rhs = ed(&f, &d.clone().and(s.clone()));
        prop_assert_eq!(&lhs, &rhs);
        let once = ed(&f, &d);
        prop_assert_eq!(ed(&once, &d), once);
    }

    #[test]
    fn reflection_mirrors_orbits((a, f) in operator_and_vector(), t in -2.0..2.0f64) {
        let n = a.dim().unwrap();
        let x = orbit(&reflect_operator(&a), &f, t, n).unwrap().value;
        let y = orbit(&a, &f, -t, n).unwrap().value;
        prop_assert_eq!(x, y);
    }

    #[test]
    fn region_is_monotone_in_b(p in point(), b1 in 0.05..3.0f64, b2 in 0.05..3.0f64, d1 in 0.0..2.0f64, d2 in 0.0..2.0f64) {
        let small = RegionParams::new(b1 + d1, b2 + d2).unwrap();
        let large = RegionParams::new(b1, b2).unwrap();
        if in_region(p, small) {
            prop_assert!(in_region(p, large));
        }
        prop_assert_eq!(in_region(p, large), in_region(p.neg(), large.swapped()));
    }
}

#[test]
fn exceptional_sets_grow_with_b() {
    let families = [
        FamilyKind::RealLine { alpha: 1.0, beta: 0.0 },
        FamilyKind::ImaginaryExponential { r: 2.0 },
        FamilyKind::LogStrip { c: 1.0, p: 1.0 },
        FamilyKind::ExpImaginaryVsPolyReal { q: 2.0, s: 1.0, r: 1.0 },
    ];
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    for kind in families {
        let spec = SpectrumFamily::new(kind).unwrap();
        for &bm in &grid {
            for &bp in &grid {
                let base = exceptional_set(&spec, RegionParams::new(bm, bp).unwrap(), 500);
                for &bm2 in grid.iter().filter(|&&x| x >= bm) {
                    for &bp2 in grid.iter().filter(|&&x| x >= bp) {
                        let larger = exceptional_set(&spec, RegionParams::new(bm2, bp2).unwrap(), 500);
                        assert!(
                            base.iter().all(|k| larger.contains(k)),
                            "{spec:?} ({bm},{bp}) vs ({bm2},{bp2})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn mild_identity_is_fourth_order() {
    let a = DiagonalOperator::new(SpectrumFamily::finite(vec![
        ComplexPoint::new(-0.5, 2.0).unwrap(),
        ComplexPoint::new(0.3, -1.0).unwrap(),
        ComplexPoint::new(1.0, 0.0).unwrap(),
    ]));
    let f = SpectralVector::finite([
        (1, Complex64::new(1.0, 0.0)),
        (2, Complex64::new(0.5, -0.5)),
        (3, Complex64::new(0.0, 1.0)),
    ])
    .unwrap();
    let mut prev = mild_identity_residual(&a, &f, 0.0, 1.0, 2, 10).unwrap();
    let mut steps = 4;
    let mut checked = 0;
    while prev > 1e-10 {
        let r = mild_identity_residual(&a, &f, 0.0, 1.0, steps, 10).unwrap();
        if r > 1e-10 {
            let ratio = prev / r;
            assert!((12.0..=20.0).contains(&ratio), "steps {steps}: ratio {ratio}");
            checked += 1;
        }
        prev = r;
        steps *= 2;
    }
    assert!(checked >= 3);
}
