//! Cyclic states, dynamic/geometric phase decomposition, and the first-order
//! amplitude-error generator of a pulse sequence.
//!
//! A state is cyclic under a gate U when it returns to its initial ray,
//! U|n> = exp(i gamma)|n>. The total phase gamma splits into a dynamic part
//!
//!   gamma_d = -integral <n(t)| H(t) |n(t)> dt
//!
//! and the geometric remainder gamma_g = gamma - gamma_d. For a constant
//! segment (axis m, angle theta) starting from Bloch vector n the dynamic
//! contribution is -(theta/2) (m . n), independent of the segment duration.
//!
//! Scaling every segment angle by (1 + eps) expands the composite as
//! U(eps) = U(0) (I - i eps H') + O(eps^2) with the Hermitian generator
//!
//!   H' = sum_j V_{j-1}^dag (theta_j m_j . sigma / 2) V_{j-1},
//!   V_j = R_j ... R_1,
//!
//! whose diagonal in the cyclic basis is minus the dynamic-phase sum. The
//! traceless part of H' measures first-order sensitivity to the error.

use num_complex::Complex64;

use crate::error::{PulseError, Result};
use crate::sequence::{PulseSequence, Segment};
use crate::su2::{wrap_angle, BlochVector, Ket2, Mat2, Unitary2};

/// Eigen-decomposition of a non-degenerate gate: the basis Bloch vector of
/// the "+" cyclic state, the two eigenphases (in (-pi, pi]), and the two
/// orthonormal eigenstates.
#[derive(Debug, Clone)]
pub struct CyclicStates {
    pub n0: BlochVector,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub state_plus: Ket2,
    pub state_minus: Ket2,
}

impl CyclicStates {
    /// Amplitudes (a+, a-) of `state` in the cyclic basis,
    /// a+- = <n+-(0)|state>.
    pub fn project(&self, state: &Ket2) -> (Complex64, Complex64) {
        (self.state_plus.inner(state), self.state_minus.inner(state))
    }

    /// Rebuilds the gate from its eigen-data:
    /// exp(i gamma+)|n0><n0| + exp(i gamma-)|-n0><-n0|.
    /// Equals the original gate exactly (including global phase).
    pub fn reconstruct(&self) -> Unitary2 {
        let n_sigma = Mat2::dot_sigma(self.n0.components());
        let half = Complex64::new(0.5, 0.0);
        let p_plus = Mat2::identity().add(&n_sigma).scale(half);
        let p_minus = Mat2::identity().sub(&n_sigma).scale(half);
        let m = p_plus
            .scale(Complex64::from_polar(1.0, self.gamma_plus))
            .add(&p_minus.scale(Complex64::from_polar(1.0, self.gamma_minus)));
        Unitary2::try_from_mat(m).expect("spectral reconstruction is unitary")
    }
}

/// Eigen-decomposes a gate into its cyclic states. The "+" state is the one
/// whose Bloch vector is the canonical rotation axis, so a plain pulse
/// R(m, theta) gets gamma+ = -theta/2.
///
/// Degenerate gates (proportional to the identity) have every state cyclic;
/// the caller must choose a basis vector, see [`dynamic_phase_sum`].
pub fn cyclic_states(u: &Unitary2) -> Result<CyclicStates> {
    let aa = u.axis_angle().map_err(|e| match e {
        PulseError::DegenerateRotation => PulseError::DegenerateComposite,
        other => other,
    })?;
    let gamma_plus = wrap_angle(-aa.angle / 2.0 + aa.global_phase);
    let gamma_minus = wrap_angle(aa.angle / 2.0 + aa.global_phase);
    Ok(CyclicStates {
        n0: aa.axis,
        gamma_plus,
        gamma_minus,
        state_plus: aa.axis.plus_state(),
        state_minus: aa.axis.minus_state(),
    })
}

/// Dynamic phase -(theta/2)(m . n) accumulated by one segment acting on a
/// state with Bloch vector `n`. Duration-independent.
pub fn segment_dynamic_phase(segment: &Segment, n: &BlochVector) -> f64 {
    -0.5 * segment.angle * segment.axis.dot(n)
}

/// Per-segment dynamic phases along a sequence and their total.
#[derive(Debug, Clone)]
pub struct DynamicPhaseSum {
    pub per_segment: Vec<f64>,
    pub sum: f64,
}

/// Propagates `n0` through the sequence, collecting each segment's dynamic
/// phase evaluated at the state entering it.
pub fn dynamic_phase_sum(seq: &PulseSequence, n0: &BlochVector) -> DynamicPhaseSum {
    let mut n = *n0;
    let mut per_segment = Vec::with_capacity(seq.len());
    let mut sum = 0.0;
    for seg in &seq.segments {
        let gamma = segment_dynamic_phase(seg, &n);
        per_segment.push(gamma);
        sum += gamma;
        n = n.rotate_about(&seg.axis, seg.angle);
    }
    DynamicPhaseSum { per_segment, sum }
}

/// As [`dynamic_phase_sum`] with n0 taken from the composite's cyclic basis.
/// Errors on degenerate composites, which need an explicit n0.
pub fn dynamic_phase_sum_auto(seq: &PulseSequence) -> Result<(BlochVector, DynamicPhaseSum)> {
    let cs = cyclic_states(&seq.compose())?;
    let dps = dynamic_phase_sum(seq, &cs.n0);
    Ok((cs.n0, dps))
}

/// Total, dynamic, and geometric phases of the "+" cyclic state, each
/// reported in (-pi, pi]. `gamma_total = gamma_dynamic + gamma_geometric`
/// holds mod 2pi.
#[derive(Debug, Clone)]
pub struct PhaseDecomposition {
    pub n0: BlochVector,
    pub gamma_total: f64,
    pub gamma_dynamic: f64,
    pub gamma_geometric: f64,
    pub per_segment: Vec<f64>,
}

/// Splits the total phase of the composite's "+" cyclic state into dynamic
/// and geometric parts. Degenerate composites need [`phase_decomposition_with_n0`].
pub fn phase_decomposition(seq: &PulseSequence) -> Result<PhaseDecomposition> {
    let cs = cyclic_states(&seq.compose())?;
    Ok(decompose(seq, cs.n0, cs.gamma_plus))
}

/// Phase decomposition with a caller-chosen cyclic vector, required when the
/// composite is proportional to the identity (every state is then cyclic and
/// the total phase is the composite's global phase).
pub fn phase_decomposition_with_n0(
    seq: &PulseSequence,
    n0: &BlochVector,
) -> Result<PhaseDecomposition> {
    let u = seq.compose();
    match cyclic_states(&u) {
        Ok(cs) => {
            // Non-degenerate: the supplied vector must be a cyclic direction.
            let along = cs.n0.dot(n0);
            if (along.abs() - 1.0).abs() > 1e-6 {
                return Err(PulseError::Domain {
                    param: "n0",
                    value: along,
                    domain: "a cyclic direction of the composite (+-axis)",
                });
            }
            let gamma_total = if along > 0.0 {
                cs.gamma_plus
            } else {
                cs.gamma_minus
            };
            let n0 = if along > 0.0 { cs.n0 } else { cs.n0.antipode() };
            Ok(decompose(seq, n0, gamma_total))
        }
        Err(PulseError::DegenerateComposite) => {
            // U = exp(i alpha) I: the eigenphase is alpha for every state.
            let gamma_total = (u.mat().trace() / Complex64::new(2.0, 0.0)).arg();
            Ok(decompose(seq, *n0, gamma_total))
        }
        Err(other) => Err(other),
    }
}

fn decompose(seq: &PulseSequence, n0: BlochVector, gamma_total: f64) -> PhaseDecomposition {
    let dps = dynamic_phase_sum(seq, &n0);
    let gamma_dynamic = wrap_angle(dps.sum);
    let gamma_geometric = wrap_angle(gamma_total - dps.sum);
    PhaseDecomposition {
        n0,
        gamma_total: wrap_angle(gamma_total),
        gamma_dynamic,
        gamma_geometric,
        per_segment: dps.per_segment,
    }
}

/// Hermitian matrix H' with U(eps) = U(0)(I - i eps H') + O(eps^2) under the
/// amplitude error theta -> theta (1 + eps) on every segment.
#[derive(Debug, Clone, Copy)]
pub struct HermitianGenerator {
    m: Mat2,
}

impl HermitianGenerator {
    pub fn try_new(m: Mat2) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > 1e-12 {
            return Err(PulseError::NotStructured {
                expected: "Hermitian",
                defect,
            });
        }
        Ok(HermitianGenerator { m })
    }

    pub(crate) fn new_unchecked(m: Mat2) -> Self {
        debug_assert!(m.hermiticity_defect() < 1e-12);
        HermitianGenerator { m }
    }

    pub fn zero() -> Self {
        HermitianGenerator { m: Mat2::zero() }
    }

    /// The generator theta (m . sigma) / 2 of a single pulse.
    pub fn of_pulse(segment: &Segment) -> Self {
        let [x, y, z] = segment.axis.components();
        let half = segment.angle / 2.0;
        HermitianGenerator {
            m: Mat2::dot_sigma([half * x, half * y, half * z]),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    /// Tr(H')/2, the coefficient of the identity component.
    pub fn trace_part(&self) -> f64 {
        self.m.trace().re / 2.0
    }

    /// Operator 2-norm of H' - trace_part * I.
    pub fn traceless_norm(&self) -> f64 {
        let tp = Complex64::new(self.trace_part(), 0.0);
        self.m.sub(&Mat2::identity().scale(tp)).operator_norm()
    }

    /// <n|H'|n> for the state with Bloch vector n.
    pub fn expectation(&self, n: &BlochVector) -> f64 {
        let ket = n.plus_state();
        ket.inner(&self.m.apply(&ket)).re
    }

    /// |<-n|H'|n>|, the off-diagonal magnitude in the n basis.
    pub fn offdiagonal(&self, n: &BlochVector) -> f64 {
        n.minus_state().inner(&self.m.apply(&n.plus_state())).norm()
    }

    /// exp(-i H' t), computed from the Pauli decomposition.
    pub fn exp_neg_i_times(&self, t: f64) -> Unitary2 {
        let a0 = self.trace_part();
        let ax = (self.m.entry(0, 1) + self.m.entry(1, 0)).re / 2.0;
        let ay = (self.m.entry(1, 0) - self.m.entry(0, 1)).im / 2.0;
        let az = (self.m.entry(0, 0).re - self.m.entry(1, 1).re) / 2.0;
        let r = (ax * ax + ay * ay + az * az).sqrt();
        let phase = Complex64::from_polar(1.0, -a0 * t);
        let m = if r < 1e-300 {
            Mat2::identity().scale(phase)
        } else {
            let (s, co) = (r * t).sin_cos();
            let unit = [ax / r, ay / r, az / r];
            Mat2::identity()
                .scale(Complex64::new(co, 0.0))
                .add(&Mat2::dot_sigma(unit).scale(Complex64::new(0.0, -s)))
                .scale(phase)
        };
        Unitary2::try_from_mat(m).expect("exponential of a Hermitian matrix is unitary")
    }
}

/// First-order error generator of a sequence under the uniform amplitude
/// error. The empty sequence has a zero generator.
pub fn error_generator(seq: &PulseSequence) -> HermitianGenerator {
    let mut prefix = Unitary2::identity();
    let mut sum = Mat2::zero();
    for seg in &seq.segments {
        let g = HermitianGenerator::of_pulse(seg);
        let term = prefix.dagger().mat().mul(g.matrix()).mul(prefix.mat());
        sum = sum.add(&term);
        prefix = seg.unitary().mul(&prefix);
    }
    HermitianGenerator::new_unchecked(sum)
}

/// Sampled Bloch-sphere path of a state propagated through a sequence.
#[derive(Debug, Clone)]
pub struct BlochTrajectory {
    /// Sampled Bloch vectors; the first entry is the initial state.
    pub samples: Vec<BlochVector>,
    /// Index into `samples` of the state at the end of each segment.
    pub segment_ends: Vec<usize>,
    /// Rotation-angle increment bound used for sampling, in radians.
    pub max_step: f64,
}

impl BlochTrajectory {
    /// Gap between the first and last samples.
    pub fn closure_gap(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => {
                let da = a.components();
                let db = b.components();
                ((da[0] - db[0]).powi(2) + (da[1] - db[1]).powi(2) + (da[2] - db[2]).powi(2))
                    .sqrt()
            }
            _ => 0.0,
        }
    }
}

/// Samples the Bloch path of `n0` through the sequence with rotation
/// increments of at most `max_step` radians (valid range (0, 0.1]).
pub fn bloch_trajectory(
    seq: &PulseSequence,
    n0: &BlochVector,
    max_step: f64,
) -> Result<BlochTrajectory> {
    if !(max_step > 0.0 && max_step <= 0.1) {
        return Err(PulseError::Domain {
            param: "max_step",
            value: max_step,
            domain: "(0, 0.1]",
        });
    }
    let mut samples = vec![*n0];
    let mut segment_ends = Vec::with_capacity(seq.len());
    let mut current = *n0;
    for seg in &seq.segments {
        let steps = ((seg.angle.abs() / max_step).ceil() as usize).max(1);
        let delta = seg.angle / steps as f64;
        // Each sample rotates from the segment start to avoid accumulating
        // rounding across substeps.
        for k in 1..=steps {
            samples.push(current.rotate_about(&seg.axis, delta * k as f64));
        }
        current = *samples.last().expect("at least the initial sample");
        segment_ends.push(samples.len() - 1);
    }
    Ok(BlochTrajectory {
        samples,
        segment_ends,
        max_step,
    })
}

/// Geometric phase -Omega/2 (wrapped to (-pi, pi]) from the signed solid
/// angle Omega enclosed by a closed trajectory.
///
/// Omega accumulates the signed spherical-triangle excess of the fan
/// (p, v_i, v_{i+1}) against a fixed reference point p on the path, which
/// tracks windings without a per-step 2pi ambiguity. The orientation is the
/// right-handed one inherited from [`BlochVector::rotate_about`].
pub fn solid_angle_geometric_phase(traj: &BlochTrajectory) -> Result<f64> {
    let gap = traj.closure_gap();
    if gap > 1e-6 {
        return Err(PulseError::OpenTrajectory { gap });
    }
    let samples = &traj.samples;
    if samples.len() < 3 {
        return Ok(0.0);
    }
    let reference = pick_reference(samples);
    let p = reference.components();
    let mut omega = 0.0;
    for pair in samples.windows(2) {
        let b = pair[0].components();
        let cv = pair[1].components();
        let triple = p[0] * (b[1] * cv[2] - b[2] * cv[1])
            + p[1] * (b[2] * cv[0] - b[0] * cv[2])
            + p[2] * (b[0] * cv[1] - b[1] * cv[0]);
        let denom = 1.0
            + (p[0] * b[0] + p[1] * b[1] + p[2] * b[2])
            + (b[0] * cv[0] + b[1] * cv[1] + b[2] * cv[2])
            + (cv[0] * p[0] + cv[1] * p[1] + cv[2] * p[2]);
        omega += 2.0 * triple.atan2(denom);
    }
    Ok(wrap_angle(-omega / 2.0))
}

/// Reference point for the triangle fan. The first sample works unless the
/// path approaches its antipode, where the fan triangles degenerate.
fn pick_reference(samples: &[BlochVector]) -> BlochVector {
    let candidates = [
        samples[0],
        BlochVector::X,
        BlochVector::Y,
        BlochVector::Z,
        BlochVector::X.antipode(),
        BlochVector::Y.antipode(),
        BlochVector::Z.antipode(),
    ];
    for cand in candidates {
        let anti = cand.antipode();
        let closest = samples
            .iter()
            .map(|s| s.dot(&anti))
            .fold(f64::NEG_INFINITY, f64::max);
        if closest < 1.0 - 1e-4 {
            return cand;
        }
    }
    samples[0]
}
