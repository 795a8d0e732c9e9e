//! Property checks on the algebraic skeleton: things that must hold for any
//! admissible inputs, not just the demo numbers.

use fastlight::dispersion::{
    group_velocity_at, kappa_derivative, kappa_double_doublet, kappa_doublet, kappa_single_pump,
    transmission,
};
use fastlight::modes::{from_modes, to_modes};
use fastlight::scheme::SchemeParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random unit ratio vector, built by normalizing a bounded-away-from-zero
/// complex pair.
fn unit_ratios() -> impl Strategy<Value = (Complex64, Complex64)> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("too close to the zero vector", |(a, b, x, y)| {
            a * a + b * b + x * x + y * y > 0.01
        })
        .prop_map(|(a, b, x, y)| {
            let r11 = c(a, b);
            let r21 = c(x, y);
            let norm = (r11.norm_sqr() + r21.norm_sqr()).sqrt();
            (r11 / norm, r21 / norm)
        })
}

proptest! {
    #[test]
    fn gain_lines_only_amplify(
        delta in -50.0..50.0f64,
        m1 in 0.0..10.0f64,
        m2 in 0.0..10.0f64,
        dc in 0.0..5.0f64,
    ) {
        prop_assert!(kappa_single_pump(delta, m1).im <= 0.0);
        let k = kappa_doublet(delta, m1, m2, dc);
        prop_assert!(k.im <= 0.0);
        if m1 + m2 > 0.0 {
            prop_assert!(k.im < 0.0);
        }
    }

    #[test]
    fn double_doublet_is_bitwise_the_same_doublet(
        delta in -20.0..20.0f64,
        m1 in 0.0..5.0f64,
        m2 in 0.0..5.0f64,
        dc in 0.0..4.0f64,
        ratios in unit_ratios(),
    ) {
        let p = SchemeParams::double_doublet(m1, m2, dc, ratios.0, ratios.1, 10.0).unwrap();
        let a = kappa_double_doublet(delta, &p);
        let b = kappa_doublet(delta, m1, m2, dc);
        prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
        prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn group_velocity_inverts_the_index(
        delta in -5.0..5.0f64,
        m in 0.0..6.0f64,
        dc in 0.0..3.0f64,
    ) {
        let p = SchemeParams::doublet(m, m, dc, 10.0).unwrap();
        let v = group_velocity_at(delta, &p);
        let index = 1.0 + kappa_derivative(delta, &p).re;
        if v.is_finite() {
            prop_assert!((v * index - 1.0).abs() <= 1e-12);
        } else {
            prop_assert!(index.abs() < 1e-12);
        }
    }

    #[test]
    fn transmission_is_the_boundary_factor_magnitude(
        kre in -3.0..3.0f64,
        kim in -3.0..0.0f64,
        length in 0.01..20.0f64,
    ) {
        let k = c(kre, kim);
        let direct = (Complex64::new(0.0, 1.0) * k * length).exp().norm();
        let closed = transmission(k, length);
        prop_assert!((direct - closed).abs() <= 1e-13 * closed);
    }

    #[test]
    fn mode_transform_is_unitary_everywhere(
        ratios in unit_ratios(),
        e1re in -10.0..10.0f64,
        e1im in -10.0..10.0f64,
        e2re in -10.0..10.0f64,
        e2im in -10.0..10.0f64,
    ) {
        let (r11, r21) = ratios;
        let (e1, e2) = (c(e1re, e1im), c(e2re, e2im));
        let (psi, phi) = to_modes(e1, e2, r11, r21);
        let power_in = e1.norm_sqr() + e2.norm_sqr();
        let power_out = psi.norm_sqr() + phi.norm_sqr();
        prop_assert!((power_out - power_in).abs() <= 1e-13 * power_in.max(1.0));
        let (b1, b2) = from_modes(psi, phi, r11, r21);
        let scale = power_in.sqrt().max(1.0);
        prop_assert!((b1 - e1).norm() <= 1e-13 * scale);
        prop_assert!((b2 - e2).norm() <= 1e-13 * scale);
    }

    #[test]
    fn validation_rescales_and_then_rests(
        ratios in unit_ratios(),
        jitter in -9e-10..9e-10f64,
    ) {
        let (r11, r21) = ratios;
        let scale = 1.0 + jitter;
        let once = SchemeParams::double_doublet(
            1.0,
            1.0,
            1.0,
            r11 * scale,
            r21 * scale,
            10.0,
        )
        .unwrap();
        let (v11, v21) = once.ratios();
        let norm = (v11.norm_sqr() + v21.norm_sqr()).sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
        let twice = once.validate().unwrap();
        prop_assert_eq!(once, twice);
    }
}
