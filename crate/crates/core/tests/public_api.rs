use intvol::bodies::{load_body, save_body, VPolytope};
use intvol::constructions::{thm1_sequence, Setting};
use intvol::metrics::{delta_j, hausdorff, intrinsic_volume, Mode, SamplingPlan};
use proptest::prelude::*;

fn plan(n: usize, seed: u64) -> SamplingPlan {
    SamplingPlan::new(n, 1, seed, Mode::Auto)
}

#[test]
fn body_files_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.txt");
    let k = VPolytope::new(3, &[vec![0.1, -2.5e-7, 3.0], vec![1.0 / 3.0, 2.0, -1e300], vec![0.0, 0.0, 0.0]]).unwrap();
    save_body(&k, &path).unwrap();
    let back: VPolytope<f64> = load_body(&path).unwrap();
    assert_eq!(back, k);
}

#[test]
fn mean_width_of_the_cube() {
    // Edge formula: V_1 = Σ_edges length · (exterior angle)/(2π) = 12 · (π/2)/(2π) = 3.
    let est = intrinsic_volume(&VPolytope::<f64>::unit_cube(3), 1, &plan(3000, 5)).unwrap();
    assert!((est.value - 3.0).abs() < 4.0 * est.std_error, "{est:?}");
}

#[test]
fn single_precision_scalar() {
    let cube = VPolytope::<f32>::unit_cube(3);
    let est = intrinsic_volume(&cube, 2, &plan(2000, 1)).unwrap();
    assert!((est.value - 3.0).abs() < 4.0 * est.std_error + 1e-3, "{est:?}");
}

#[test]
fn full_dimension_is_the_symmetric_difference_area() {
    let a = VPolytope::<f64>::unit_cube(2);
    let b = VPolytope::cuboid(&[0.5, 0.0], &[1.5, 1.0]).unwrap();
    let est = delta_j(Some(&a), Some(&b), 2, &plan(1, 0)).unwrap();
    assert!((est.value - 1.0).abs() < 1e-12);
    assert!(est.exact);
}

#[test]
fn empty_operand_gives_the_intrinsic_volume() {
    let k = VPolytope::<f64>::cuboid(&[0.0, 0.0, 0.0], &[2.0, 1.0, 0.5]).unwrap();
    let p = plan(500, 9);
    let a = delta_j(Some(&k), None, 2, &p).unwrap();
    let b = intrinsic_volume(&k, 2, &p).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    // V_2 of a box is ab + bc + ca.
    assert!((a.value - 3.5).abs() < 4.0 * a.std_error);
}

#[test]
fn prism_sequence_drifts_away() {
    let setting = Setting::<f64>::unit_cube(3, 2).unwrap();
    let seq = thm1_sequence(&setting, 2.0, 5).unwrap();
    let mut last = 0.0;
    for st in &seq {
        let d = hausdorff(&st.body, &setting.k0).unwrap();
        assert!(d > last);
        last = d;
    }
}

fn body() -> impl Strategy<Value = VPolytope<f64>> {
    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, 3), 1..7).prop_map(|v| VPolytope::new(3, &v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shared_samples_give_a_pseudometric(a in body(), b in body(), c in body(), seed in 0u64..1000) {
        let p = plan(40, seed);
        let ab = delta_j(Some(&a), Some(&b), 2, &p).unwrap().value;
        let ba = delta_j(Some(&b), Some(&a), 2, &p).unwrap().value;
        let bc = delta_j(Some(&b), Some(&c), 2, &p).unwrap().value;
        let ac = delta_j(Some(&a), Some(&c), 2, &p).unwrap().value;
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
        prop_assert!(ac <= ab + bc + 1e-9 * (1.0 + ab + bc));
        prop_assert!(ab >= 0.0);
    }
}
