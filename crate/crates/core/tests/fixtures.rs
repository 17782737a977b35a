//! Finite-difference fixtures through the public pipeline: chart metric,
//! curvature, decomposition and verdicts.

use twistor_core::charts::{generic_point, symplectic_fixture_curvature, ChartMetric, Fixture, SymplecticPointFixture};
use twistor_core::curvature::{decompose_pseudo, is_ricci_type, reflect_orientation, sd_asd_split};
use twistor_core::twistor::{integrability_verdict, type11_verdict, SamplingConfig, Sign};
use twistor_core::{DMatrix, Tolerances};

fn config() -> SamplingConfig {
    SamplingConfig { fiber_samples: 16, ..SamplingConfig::default() }
}

#[test]
fn sphere_of_radius_two_has_quarter_curvature() {
    let chart = ChartMetric::new(Fixture::Sphere { radius: 2.0 }, 4).unwrap();
    let r = chart.curvature_at(&generic_point(4, 3), true, &Tolerances::default()).unwrap();
    let dec = decompose_pseudo(&r).unwrap();
    assert!((dec.scal - 3.0).abs() < 1e-5, "scal {}", dec.scal);
    assert!(dec.c_part.norm() < 1e-6);
    let v = integrability_verdict(&r, Sign::Plus, &config()).unwrap();
    assert!(v.answer() && v.sampled);
}

#[test]
fn hyperbolic_and_split_spheres_are_conformally_flat() {
    let tol = Tolerances::default();
    for chart in [
        ChartMetric::new(Fixture::Hyperbolic { radius: 1.0 }, 6).unwrap(),
        ChartMetric::new(Fixture::PseudoSphere22 { radius: 1.0 }, 4).unwrap(),
    ] {
        let x = generic_point(chart.dim(), 5);
        let r = chart.curvature_at(&x, false, &tol).unwrap();
        let dec = decompose_pseudo(&r).unwrap();
        assert!(dec.c_part.norm() < 1e-6 && dec.e_part.norm() < 1e-6, "{:?}", chart.fixture());
        let v = type11_verdict(&r, &config()).unwrap();
        assert!(v.answer() && v.sampled, "{:?}", chart.fixture());
    }
}

#[test]
fn fubini_study_weyl_tensor_is_self_dual() {
    let chart = ChartMetric::new(Fixture::FubiniStudyCp2 { scale: 1.0 }, 4).unwrap();
    let r = chart.curvature_at(&generic_point(4, 9), true, &Tolerances::default()).unwrap();
    let c = decompose_pseudo(&r).unwrap().c_part;
    let (plus, minus) = sd_asd_split(&c, 1e-9).unwrap();
    assert!(minus.norm() <= 1e-5 * c.norm());
    assert!(plus.norm() > 0.5 * c.norm());

    let flipped = reflect_orientation(&r).unwrap();
    assert!(!integrability_verdict(&flipped, Sign::Plus, &config()).unwrap().answer());
}

#[test]
fn symplectic_fixture_is_ricci_type_exactly_without_weyl_seeds() {
    let r = DMatrix::from_fn(6, 6, |a, b| 1.0 / (1.0 + a as f64 + b as f64) + if a == b { 0.5 } else { 0.0 });
    let pure = SymplecticPointFixture::new(3, r).unwrap();
    let r = symplectic_fixture_curvature(&pure).unwrap();
    assert!(is_ricci_type(&r, 1e-9).unwrap().0);
    assert!(type11_verdict(&r, &config()).unwrap().answer());

    let mixed = pure.with_random_seeds(2, 1.0, 4);
    let r = symplectic_fixture_curvature(&mixed).unwrap();
    assert!(!is_ricci_type(&r, 1e-9).unwrap().0);
    assert!(!type11_verdict(&r, &config()).unwrap().sampled);
}
