use std::f64::consts::TAU;

use bloch_core::constructive::{self, DEFAULT_D};
use bloch_core::covering::{self, CaseLabel};
use bloch_core::seminorm::{self, OptimizerConfig};
use bloch_core::{BlaschkeProduct, Complex64, MoebiusAutomorphism};
use proptest::prelude::*;

fn point_in_disk(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn product(max_degree: usize) -> impl Strategy<Value = BlaschkeProduct> {
    (prop::collection::vec(point_in_disk(0.98), 1..=max_degree), 0.0..TAU)
        .prop_map(|(zeros, t)| BlaschkeProduct::new(zeros, Complex64::from_polar(1.0, t)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unimodular_on_circle(b in product(8), t in 0.0..TAU) {
        let w = b.evaluate(Complex64::from_polar(1.0, t)).unwrap();
        prop_assert!((w.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maps_disk_into_disk(b in product(8), z in point_in_disk(0.999)) {
        prop_assert!(b.evaluate(z).unwrap().norm() < 1.0 + 1e-12);
    }

    #[test]
    fn schwarz_pick(b in product(8), z in point_in_disk(0.999_999)) {
        prop_assert!(seminorm::pointwise_bloch(&b, z).unwrap() <= 1.0 + 1e-10);
    }

    #[test]
    fn precompose_is_composition(b in product(6), a in point_in_disk(0.9), theta in 0.0..TAU, z in point_in_disk(0.95)) {
        let phi = MoebiusAutomorphism::new(a, theta).unwrap();
        let composed = b.precompose(&phi);
        let direct = b.evaluate(phi.apply(z)).unwrap();
        prop_assert!((composed.evaluate(z).unwrap() - direct).norm() < 1e-10);
    }

    #[test]
    fn critical_points_are_critical(b in product(7)) {
        prop_assume!(b.degree() >= 2);
        let crit = covering::critical_points(&b).unwrap();
        prop_assert_eq!(crit.len(), b.degree() - 1);
        for c in crit {
            prop_assert!(c.norm() < 1.0);
            let slope = b.derivative(c).unwrap().norm();
            let scale: f64 = b.zeros().iter().map(|zj| 1.0 / (c - zj).norm()).sum();
            prop_assert!(slope <= 1e-8 * scale, "|B'({c})| = {slope:e}");
        }
    }

    #[test]
    fn rotation_keeps_case(b in product(6), t in 0.0..TAU) {
        prop_assume!(b.degree() >= 2);
        let label = covering::classify(&b, bloch_core::reference::A).unwrap();
        let rotated = covering::classify(&b.rotated(t), bloch_core::reference::A).unwrap();
        prop_assume!(label != CaseLabel::Degenerate && rotated != CaseLabel::Degenerate);
        prop_assert_eq!(label, rotated);
    }

    #[test]
    fn constructive_bound_holds(b in product(10)) {
        let result = constructive::certify(&b, 512, DEFAULT_D).unwrap();
        prop_assert!(result.certified());
        prop_assert!(result.actual_value + 1e-12 >= result.guaranteed_bound);
        prop_assert!(result.z0.norm() < 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn seminorm_is_rotation_invariant(b in product(5), t in 0.0..TAU) {
        let cfg = OptimizerConfig::default();
        let original = seminorm::seminorm(&b, &cfg).value;
        let rotated = seminorm::seminorm(&b.rotated(t), &cfg).value;
        prop_assert!((original - rotated).abs() < 1e-8);
        prop_assert!(original <= 1.0 + 1e-10);
        prop_assert!(original >= 0.69);
    }
}
