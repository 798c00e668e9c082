use cvclone::experiments::compare;
use cvclone::lcdt::omega_thresholds;
use cvclone_demo::{
    fidelity_curves_native, strategy_native, threshold_curve_native, CURVE_STRIDE, THRESHOLD_STRIDE,
};

#[test]
fn curves_have_fixed_stride_and_match_the_library() {
    let flat = fidelity_curves_native(3, 0.1, 2.0, 2.0, 40).unwrap();
    assert_eq!(flat.len(), 40 * CURVE_STRIDE);
    for row in flat.chunks(CURVE_STRIDE) {
        let r = compare(3, row[0], 0.1, 2.0).unwrap();
        assert_eq!(row[1], r.f_tele);
        assert_eq!(row[2], r.f_lcdt);
    }
    assert_eq!(flat[flat.len() - CURVE_STRIDE], 2.0);
}

#[test]
fn threshold_curve_is_in_omega_units() {
    let flat = threshold_curve_native(2, 0.0, 1.5, 10).unwrap();
    assert_eq!(flat.len(), 10 * THRESHOLD_STRIDE);
    for row in flat.chunks(THRESHOLD_STRIDE) {
        let w = omega_thresholds(2, row[0], 0.0).unwrap();
        assert!((row[1] * row[1] - w.omega_sq).abs() <= 1e-12 * w.omega_sq.max(1.0));
    }
}

#[test]
fn strategy_getters() {
    let s = strategy_native(2, 1.0, 0.0, 3.0).unwrap();
    assert_eq!(s.regime(), "C");
    assert!(s.n_opt().is_infinite());
    assert_eq!(s.winner(), "tele");
    assert!(s.f_tele() > s.f_lcdt());
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(fidelity_curves_native(2, 0.0, 1.0, 0.0, 10).is_err());
    assert!(fidelity_curves_native(1, 0.0, 1.0, 1.0, 10).is_err());
    assert!(threshold_curve_native(2, -0.1, 1.0, 10).is_err());
    assert!(strategy_native(2, 1.0, 0.0, -1.0).is_err());
}
