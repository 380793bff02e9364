use std::f64::consts::{PI, TAU};

use ndarray::Array2;
use proptest::prelude::*;
use skewmst::harmonics::{dft2, extract_harmonics, field_spectrum, inverse_dft2};
use skewmst::mst::stress_tensor;
use skewmst::skew::{
    discrete_skew_factor, harmonic_orders, optimal_skew_angle, skew_factor, slice_schedule,
    step_shifts,
};
use skewmst::synth::synthesize;
use skewmst::{FieldComponent, FieldHarmonic, MachineGeometry, SkewConfiguration, MU_0};

fn geom() -> MachineGeometry {
    MachineGeometry {
        pole_count: 8,
        slot_count: 48,
        airgap_radius: 0.05,
        rotor_radius: 0.0495,
        axial_length: 0.1,
        rotor_diameter: 0.099,
        slot_bottom_radius: 0.07,
    }
}

/// Smallest common multiple by counting up; deliberately naive.
fn lcm_by_search(a: i64, b: i64) -> i64 {
    let mut m = a.max(b);
    while m % a != 0 || m % b != 0 {
        m += a.max(b);
    }
    m
}

#[test]
fn optimal_angle_for_8_poles_48_slots() {
    let theta = optimal_skew_angle(8, 48).unwrap();
    assert_eq!(theta, TAU / 48.0);
    assert!((theta.to_degrees() - 7.5).abs() < 1e-13);
}

#[test]
fn slot_harmonic_orders() {
    let set = harmonic_orders(8, 48, 2).unwrap();
    assert_eq!(set.to_string(), "{1, -5, 7, -11, 13}");
    assert_eq!(harmonic_orders(8, 48, 0).unwrap().to_string(), "{1}");
    assert_eq!(harmonic_orders(6, 9, 1).unwrap().to_string(), "{1, -1/2, 5/2}");
}

#[test]
fn skew_factor_examples() {
    let theta = TAU / 48.0;
    assert_eq!(skew_factor(theta, 0.0), 1.0);
    assert!(skew_factor(theta, 48.0).abs() < 1e-15);
    assert!((skew_factor(theta, 7.0) - 0.965_381_915_273_061_6).abs() < 1e-15);
    assert!(discrete_skew_factor(theta, 3, 48.0).unwrap().abs() < 1e-15);
    assert!((discrete_skew_factor(theta, 64, 7.0).unwrap() - skew_factor(theta, 7.0)).abs() < 1e-3);
    assert!(discrete_skew_factor(theta, 0, 7.0).is_err());
}

#[test]
fn skew_factor_zeros() {
    for k in 1..=6 {
        for &theta in &[0.05, TAU / 48.0, 0.3] {
            let nu = 2.0 * k as f64 * PI / theta;
            assert!(skew_factor(theta, nu).abs() < 1e-14, "k={k} θ={theta}");
        }
    }
}

#[test]
fn discrete_factor_converges_quadratically() {
    for q in [8u32, 16, 32, 64] {
        for i in 1..=12 {
            let theta = 0.02 * i as f64;
            for j in 0..=20 {
                // Keep θν/2 within [0, π].
                let nu = j as f64 / 20.0 * TAU / theta;
                let d = discrete_skew_factor(theta, q, nu).unwrap();
                let c = skew_factor(theta, nu).abs();
                assert!((d - c).abs() <= 4.0 / (q * q) as f64, "q={q} θ={theta} ν={nu}");
            }
        }
    }
}

#[test]
fn cogging_order_cancels_for_every_segment_count() {
    for (np, ns) in [(8i64, 48i64), (10, 12), (4, 36)] {
        let nc = lcm_by_search(np, ns);
        let theta = optimal_skew_angle(np, ns).unwrap();
        for q in 2..=8 {
            let k = discrete_skew_factor(theta, q, nc as f64).unwrap();
            assert!(k < 1e-14, "({np},{ns}) q={q}: {k}");
        }
    }
}

proptest! {
    #[test]
    fn optimal_angle_matches_lcm_oracle(np in 1i64..200, ns in 1i64..200) {
        let theta = optimal_skew_angle(np, ns).unwrap();
        prop_assert_eq!(theta, TAU / lcm_by_search(np, ns) as f64);
    }

    #[test]
    fn stress_tensor_is_symmetric_with_known_trace(
        br in -3.0f64..3.0, bt in -3.0f64..3.0, bz in -3.0f64..3.0
    ) {
        let t = stress_tensor(br, bt, bz);
        let scale = (br * br + bt * bt + bz * bz) / MU_0;
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((t.get(i, j) - t.get(j, i)).abs() <= 1e-15 * scale);
            }
        }
        let expect = -(br * br + bt * bt + bz * bz) / (2.0 * MU_0);
        prop_assert!((t.trace() - expect).abs() <= 1e-15 * scale.max(1e-300) * 4.0);
    }

    #[test]
    fn skew_factor_bounded_and_even(theta in -1.0f64..1.0, nu in -200.0f64..200.0) {
        let k = skew_factor(theta, nu);
        prop_assert!(k.abs() <= 1.0);
        prop_assert_eq!(k, skew_factor(-theta, nu));
        prop_assert_eq!(k, skew_factor(theta, -nu));
        let d = discrete_skew_factor(theta, 5, nu).unwrap();
        prop_assert!((0.0..=1.0 + 1e-15).contains(&d));
    }

    #[test]
    fn step_shifts_are_centered(theta in 0.0f64..0.5, q in 1u32..40) {
        let s = step_shifts(theta, q);
        prop_assert_eq!(s.len(), q as usize);
        let mean: f64 = s.iter().sum::<f64>() / q as f64;
        prop_assert!(mean.abs() < 1e-15);
        let span = s[s.len() - 1] - s[0];
        prop_assert!((span - theta * (q - 1) as f64 / q as f64).abs() < 1e-15);
    }

    #[test]
    fn schedules_have_zero_mean(theta in 0.0f64..0.5, q in 1u32..12, style in 0u8..3) {
        let cfg = match style {
            0 => SkewConfiguration::step(q, theta),
            1 => SkewConfiguration::vee(q.max(2), theta),
            _ => SkewConfiguration::continuous(theta, q.max(8)),
        };
        let sched = slice_schedule(&cfg, &geom()).unwrap();
        let spans = sched.spans();
        let total: f64 = spans.iter().sum();
        prop_assert!((total - 0.1).abs() < 1e-15);
        let mean: f64 = sched.shifts().iter().zip(&spans).map(|(s, l)| s * l).sum::<f64>() / total;
        prop_assert!(mean.abs() < 1e-15);
    }

    #[test]
    fn dft2_round_trip_and_parseval(
        values in proptest::collection::vec(-5.0f64..5.0, 48),
        shape in prop_oneof![Just((6usize, 8usize)), Just((8, 6)), Just((4, 12)), Just((3, 16))]
    ) {
        let data = Array2::from_shape_vec(shape, values).unwrap();
        let c = dft2(data.view());
        let back = inverse_dft2(&c);
        for (a, b) in data.iter().zip(back.iter()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        let energy = data.iter().map(|v| v * v).sum::<f64>() / data.len() as f64;
        let spectral: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((energy - spectral).abs() <= 1e-10 * energy.max(1e-300));
    }

    #[test]
    fn synthesis_is_recovered_by_the_spectrum(
        amps in proptest::collection::vec(0.01f64..2.0, 4),
        phases in proptest::collection::vec(-3.0f64..3.0, 4),
    ) {
        let orders = [(4i64, 1i64), (-20, 3), (12, 0), (28, 7)];
        let mut table: Vec<FieldHarmonic> = orders
            .iter()
            .zip(amps.iter().zip(&phases))
            .map(|(&(m, n), (&a, &p))| FieldHarmonic::new(FieldComponent::Radial, m, n, a, p).canonical())
            .collect();
        table.sort_by_key(|h| (h.temporal_order, h.spatial_order));
        let field = synthesize(&table, (16, 64), 1, &geom()).unwrap();
        let found = extract_harmonics(&field_spectrum(&field, 0, FieldComponent::Radial), FieldComponent::Radial, 1e-9);
        prop_assert_eq!(found.len(), table.len());
        for (f, h) in found.iter().zip(&table) {
            prop_assert_eq!((f.spatial_order, f.temporal_order), (h.spatial_order, h.temporal_order));
            prop_assert!((f.amplitude - h.amplitude).abs() < 1e-10);
            let dphase = (f.phase - h.phase + PI).rem_euclid(TAU) - PI;
            prop_assert!(dphase.abs() < 1e-9);
        }
    }
}
