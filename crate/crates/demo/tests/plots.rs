use std::f64::consts::PI;

use varheat_demo::{characteristic_plot, eigenfunction_plot, heat_plot, Plot};

#[test]
fn characteristic_marks_table_roots() {
    let p = characteristic_plot("parabolic24", 0.0, 2, 4.5).unwrap();
    assert_eq!(p.count(), 3);
    assert_eq!(p.x().len(), p.values(2).len());
    let lambdas: Vec<f64> = p.marks().iter().map(|k| -k * k).collect();
    assert_eq!(lambdas.len(), 4);
    assert!((lambdas[0] + 1.000636).abs() < 1e-5);
    assert!(p.note().contains("-1.00064"));
}

#[test]
fn unit_conductivity_curve_is_a_sine() {
    let p = characteristic_plot("constant", 1.0, 1, 7.0).unwrap();
    for (k, d) in p.x().iter().zip(p.values(1)) {
        assert!((d - k.sin()).abs() < 1e-12);
    }
    assert_eq!(p.marks().len(), 2);
    assert!((p.marks()[1] - 2.0 * PI).abs() < 1e-9);
}

#[test]
fn eigenfunctions_track_finite_differences() {
    let p = eigenfunction_plot("parabolic24", 0.0, 2, 2).unwrap();
    assert_eq!(p.count(), 4);
    assert_eq!(p.label(1), "X1 fd");
    let dev = p.values(0).iter().zip(p.values(1)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dev < 5e-3);
}

#[test]
fn heat_profile_matches_benchmark() {
    let p = heat_plot("parabolic24", 0.0, 2, 1.0).unwrap();
    assert_eq!(p.count(), 3);
    let worst = p.values(1).iter().zip(p.values(2)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-4);
}

#[test]
fn bad_input_is_an_error() {
    assert!(characteristic_plot("marble", 0.0, 1, 5.0).is_err());
    assert!(characteristic_plot("constant", -1.0, 1, 5.0).is_err());
    assert!(heat_plot("parabolic24", 0.0, 9, 1.0).is_err());
    assert!(eigenfunction_plot("parabolic24", 0.0, 1, 0).is_err());
    assert_eq!(Plot::default().label(3), "");
}
