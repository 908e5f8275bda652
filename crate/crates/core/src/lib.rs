//! Composite single-qubit pulse sequences: synthesis, geometric-phase
//! analysis, and robustness against control-field-strength errors.
//!
//! The crate is organized around a small set of value types:
//!
//! - [`su2::Unitary2`], [`su2::BlochVector`]: exact SU(2)/U(2) algebra and
//!   Bloch-sphere actions.
//! - [`sequence::Segment`], [`sequence::PulseSequence`]: piecewise-constant
//!   pulses in temporal order.
//! - [`phase`]: cyclic states, dynamic/geometric phase decomposition, the
//!   first-order error generator, and a solid-angle oracle for the
//!   geometric phase.
//! - [`synth`]: the composite families (plain pulse, three-pulse composite,
//!   identity-correction sandwich, split-correction composite, and the
//!   fixed symmetric x-y-x sequence).
//! - [`robust`]: the amplitude-error model, infidelity sweeps, scaling-order
//!   fits, and the zero-dynamic-phase robustness criterion.
//!
//! Everything is an immutable value and every operation is a pure function,
//! so the whole API is safe to share across threads. Angles are radians
//! throughout.

pub mod error;
pub mod phase;
pub mod robust;
pub mod roots;
pub mod sequence;
pub mod su2;
pub mod synth;

pub use num_complex::Complex64;

pub use error::{PulseError, Result};
pub use phase::{
    bloch_trajectory, cyclic_states, dynamic_phase_sum, dynamic_phase_sum_auto, error_generator,
    phase_decomposition, phase_decomposition_with_n0, segment_dynamic_phase,
    solid_angle_geometric_phase, BlochTrajectory, CyclicStates, DynamicPhaseSum,
    HermitianGenerator, PhaseDecomposition,
};
pub use robust::{
    apply_error, first_order_report, fit_order, infidelity, log_grid, sweep, trotter_defect,
    verify_theorem, Classification, ErrorModel, RobustnessReport, SweepRow, TheoremVerdict,
};
pub use sequence::{PulseSequence, Segment, Target};
pub use su2::{
    angle_distance_mod_2pi, wrap_angle, AxisAngle, BlochVector, Ket2, Mat2, Unitary2,
};
pub use synth::{
    naive, ohta, scrofulous, shift_xy_phases, trotter_split_segments, trotter_suzuki, w1,
    w1_sandwich, ScrofulousParams, SynthesisBranch,
};
