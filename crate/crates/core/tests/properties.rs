//! Cross-module invariants checked on randomized inputs: the SU(2) algebra,
//! the dynamic-phase/error-generator identity, the robustness criterion on a
//! random-sequence corpus, and the solid-angle oracle against the eigenphase
//! decomposition.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

use cpulse_core::*;

fn axis_from(z: f64, phi: f64) -> BlochVector {
    let s = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(s * phi.cos(), s * phi.sin(), z).expect("unit by construction")
}

fn arb_axis() -> impl Strategy<Value = BlochVector> {
    (-1.0..1.0f64, 0.0..TAU).prop_map(|(z, phi)| axis_from(z, phi))
}

fn arb_sequence(max_len: usize) -> impl Strategy<Value = PulseSequence> {
    prop::collection::vec((arb_axis(), 1e-3..TAU - 1e-3), 1..=max_len)
        .prop_map(|segs| {
            PulseSequence::new(
                segs.into_iter()
                    .map(|(axis, angle)| Segment::new(axis, angle))
                    .collect(),
                "random",
            )
        })
}

fn random_axis(rng: &mut impl Rng) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..TAU);
    axis_from(z, phi)
}

fn random_sequence(rng: &mut impl Rng, max_len: usize) -> PulseSequence {
    let len = rng.gen_range(1..=max_len);
    let segments = (0..len)
        .map(|_| Segment::new(random_axis(rng), rng.gen_range(1e-6..TAU)))
        .collect();
    PulseSequence::new(segments, "random")
}

proptest! {
    #[test]
    fn rotation_same_axis_is_additive(
        axis in arb_axis(),
        a in -TAU..TAU,
        b in -TAU..TAU,
    ) {
        let lhs = Unitary2::rotation(&axis, a).mul(&Unitary2::rotation(&axis, b));
        let rhs = Unitary2::rotation(&axis, a + b);
        prop_assert!(lhs.mat().sub(rhs.mat()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn axis_angle_recovers_rotation(
        axis in arb_axis(),
        angle in 1e-6..(TAU - 1e-6),
    ) {
        let aa = Unitary2::rotation(&axis, angle).axis_angle().unwrap();
        prop_assert!((aa.angle - angle).abs() < 1e-10);
        prop_assert!((aa.axis.dot(&axis) - 1.0).abs() < 1e-10);
        prop_assert!(aa.global_phase.abs() < 1e-10);
    }

    #[test]
    fn compose_matches_bloch_action(
        seq in arb_sequence(5),
        n in arb_axis(),
    ) {
        let composed = seq.compose();
        prop_assume!(composed.axis_angle().is_ok());
        let aa = composed.axis_angle().unwrap();
        let mut stepped = n;
        for seg in &seq.segments {
            stepped = stepped.rotate_about(&seg.axis, seg.angle);
        }
        let once = n.rotate_about(&aa.axis, aa.angle);
        let d = stepped.components();
        let o = once.components();
        for i in 0..3 {
            prop_assert!((d[i] - o[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn distance_and_fidelity_agree(
        ax_a in arb_axis(), ang_a in 0.0..TAU, ph_a in -PI..PI,
        ax_b in arb_axis(), ang_b in 0.0..TAU,
    ) {
        let u = Unitary2::rotation(&ax_a, ang_a).scale_phase(ph_a);
        let v = Unitary2::rotation(&ax_b, ang_b);
        let d = u.distance_up_to_phase(&v);
        let f = u.trace_fidelity(&v);
        // d^2 = 4 (1 - f) exactly, so d = 0 iff f = 1.
        prop_assert!((d * d / 4.0 - (1.0 - f)).abs() < 1e-12);
        let same = u.scale_phase(1.234);
        prop_assert!(u.distance_up_to_phase(&same) < 1e-12);
        prop_assert!(u.trace_fidelity(&same) > 1.0 - 1e-12);
    }

    #[test]
    fn spectral_reconstruction_is_exact(
        axis in arb_axis(),
        angle in 1e-3..(TAU - 1e-3),
        phase in -PI..PI,
    ) {
        let u = Unitary2::rotation(&axis, angle).scale_phase(phase);
        let cs = cyclic_states(&u).unwrap();
        prop_assert!(cs.state_plus.inner(&cs.state_minus).norm() < 1e-12);
        let rebuilt = cs.reconstruct();
        prop_assert!(u.mat().sub(rebuilt.mat()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn dynamic_sum_equals_generator_diagonal(
        seq in arb_sequence(6),
        n0 in arb_axis(),
    ) {
        let dps = dynamic_phase_sum(&seq, &n0);
        let g = error_generator(&seq);
        prop_assert!((dps.sum + g.expectation(&n0)).abs() < 1e-10);
        // Linearity of the per-segment phase in n flips the sign wholesale.
        let anti = dynamic_phase_sum(&seq, &n0.antipode());
        prop_assert!((dps.sum + anti.sum).abs() < 1e-12);
    }

    #[test]
    fn generator_is_hermitian_with_zero_trace(seq in arb_sequence(6)) {
        let g = error_generator(&seq);
        prop_assert!(g.matrix().hermiticity_defect() < 1e-12);
        // Every conjugated Pauli term is traceless under this error model.
        prop_assert!(g.trace_part().abs() < 1e-12);
    }
}

/// Central-difference derivative of the erroneous composite at eps = 0
/// against -i U(0) H', on a seeded corpus.
#[test]
fn generator_matches_finite_difference_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let delta = 1e-6;
    for _ in 0..200 {
        let seq = random_sequence(&mut rng, 6);
        let g = error_generator(&seq);
        let du = apply_error(&seq, delta)
            .mat()
            .sub(apply_error(&seq, -delta).mat())
            .scale(num_complex::Complex64::new(1.0 / (2.0 * delta), 0.0));
        let oracle = seq
            .compose()
            .dagger()
            .mat()
            .mul(&du)
            .scale(num_complex::Complex64::new(0.0, 1.0));
        assert!(
            g.matrix().sub(&oracle).frobenius_norm() < 1e-8,
            "finite-difference mismatch for {seq:?}"
        );
    }
}

/// Necessary direction of the robustness criterion over a corpus of 1000
/// random sequences plus the synthesized families: a vanishing traceless
/// generator implies a vanishing dynamic-phase sum.
#[test]
fn fully_compensating_implies_zero_dynamic_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut corpus: Vec<PulseSequence> = (0..1000).map(|_| random_sequence(&mut rng, 6)).collect();
    for k in 1..=6 {
        let theta = k as f64 * PI / 6.0;
        corpus.push(synth::trotter_suzuki(theta).unwrap());
        corpus.push(synth::w1_sandwich(theta, SynthesisBranch::Principal).unwrap());
        if theta <= PI {
            corpus.push(synth::scrofulous(theta, SynthesisBranch::Principal).unwrap().0);
        }
    }
    let mut compensating = 0;
    for seq in &corpus {
        let g = error_generator(seq);
        if g.traceless_norm() < 1e-10 {
            compensating += 1;
            let n0 = match cyclic_states(&seq.compose()) {
                Ok(cs) => cs.n0,
                Err(_) => BlochVector::X,
            };
            let dps = dynamic_phase_sum(seq, &n0);
            assert!(
                dps.sum.abs() < 1e-9,
                "{}: traceless {:.2e} but dyn sum {:.2e}",
                seq.label,
                g.traceless_norm(),
                dps.sum
            );
        }
    }
    // The synthesized members keep the implication from being vacuous.
    assert!(compensating >= 16, "only {compensating} compensating members");
}

/// First-order operator error coefficient: the finite-difference slope of
/// distance_up_to_phase at small eps is sqrt(2) times the operator 2-norm of
/// the traceless generator (the sqrt(2) converts to the Frobenius norm of a
/// traceless 2x2 Hermitian matrix).
#[test]
fn operator_error_slope_matches_traceless_norm() {
    let mut cases: Vec<PulseSequence> = vec![
        synth::naive(BlochVector::X, 1.0),
        synth::naive(BlochVector::Y, 2.4),
        synth::ohta(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    cases.extend((0..20).map(|_| random_sequence(&mut rng, 4)));
    for seq in &cases {
        let target = seq.compose();
        let tl = error_generator(seq).traceless_norm();
        if tl < 1e-6 {
            continue;
        }
        let eps = 1e-4;
        let slope = apply_error(seq, eps).distance_up_to_phase(&target) / eps;
        let expected = 2.0f64.sqrt() * tl;
        assert!(
            (slope - expected).abs() / expected < 1e-3,
            "{}: slope {slope} vs sqrt2 * traceless {expected}",
            seq.label
        );
    }
}

/// Scaling-order fits agree with the generator test: vanishing traceless
/// norm shows up as quartic infidelity, an O(1) traceless norm as quadratic.
#[test]
fn fitted_order_consistent_with_generator() {
    let quartic = [
        synth::scrofulous(PI, SynthesisBranch::Principal).unwrap().0,
        synth::w1_sandwich(1.9, SynthesisBranch::Principal).unwrap(),
        synth::trotter_suzuki(0.8).unwrap(),
    ];
    for seq in &quartic {
        let report = first_order_report(seq, None).unwrap();
        assert!(report.generator.traceless_norm() < 1e-10);
        assert!(report.fitted_order.unwrap() >= 3.9, "{}", seq.label);
    }
    let quadratic = [
        synth::naive(BlochVector::X, 2.0),
        synth::naive(BlochVector::Z, 0.9),
        synth::ohta(),
    ];
    for seq in &quadratic {
        let report = first_order_report(seq, None).unwrap();
        assert!(report.generator.traceless_norm() > 0.1);
        let slope = report.fitted_order.unwrap();
        assert!((slope - 2.0).abs() < 0.1, "{}: {slope}", seq.label);
    }
}

/// Durations never reach any computed quantity.
#[test]
fn durations_cancel_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..50 {
        let seq = random_sequence(&mut rng, 5);
        let mut rescaled = seq.clone();
        for seg in &mut rescaled.segments {
            seg.duration = rng.gen_range(0.1..10.0);
        }
        let n0 = random_axis(&mut rng);
        assert_eq!(apply_error(&seq, 0.03), apply_error(&rescaled, 0.03));
        assert_eq!(
            dynamic_phase_sum(&seq, &n0).sum,
            dynamic_phase_sum(&rescaled, &n0).sum
        );
        assert_eq!(
            error_generator(&seq).matrix(),
            error_generator(&rescaled).matrix()
        );
    }
}

/// Trajectories launched from a cyclic state close, and the solid-angle
/// reading of the geometric phase agrees with the eigenphase decomposition.
#[test]
fn solid_angle_oracle_agrees_with_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut checked = 0;
    while checked < 40 {
        let seq = random_sequence(&mut rng, 3);
        let Ok(pd) = phase_decomposition(&seq) else {
            continue;
        };
        let traj = bloch_trajectory(&seq, &pd.n0, 1e-3).unwrap();
        assert!(traj.closure_gap() < 1e-10, "open path for {seq:?}");
        let gamma = solid_angle_geometric_phase(&traj).unwrap();
        assert!(
            angle_distance_mod_2pi(gamma, pd.gamma_geometric) < 1e-4,
            "solid angle {gamma} vs decomposition {} for {seq:?}",
            pd.gamma_geometric
        );
        checked += 1;
    }
}

/// Total phase identity of the decomposition, checked mod 2pi.
#[test]
fn phase_decomposition_identity_mod_2pi() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..200 {
        let seq = random_sequence(&mut rng, 6);
        let Ok(pd) = phase_decomposition(&seq) else {
            continue;
        };
        assert!(
            angle_distance_mod_2pi(pd.gamma_total, pd.gamma_dynamic + pd.gamma_geometric) < 1e-10
        );
        let per_sum: f64 = pd.per_segment.iter().sum();
        assert!(angle_distance_mod_2pi(pd.gamma_dynamic, per_sum) < 1e-10);
    }
}
