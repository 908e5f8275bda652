//! Constructors for the composite-pulse families.
//!
//! All families target a rotation about the x-axis; [`shift_xy_phases`]
//! rotates every pulse phase by a constant to reach any other axis in the
//! xy-plane. Throughout, an xy-plane pulse is written angle_(phi) with axis
//! (cos phi, sin phi, 0).
//!
//! Families:
//! - `naive`: the bare single pulse.
//! - `scrofulous`: three pulses theta1_(phi1) pi_(phi2) theta1_(phi1) solving
//!   the closure and zero-dynamic-phase conditions (see below).
//! - `w1` / `w1_sandwich`: an identity-valued pi-2pi-pi sequence whose
//!   dynamic phase theta/2 cancels that of a target pulse split around it.
//! - `trotter_suzuki`: the target pulse followed by two -2pi pulses whose
//!   generators sum to minus the target's, canceling first-order error.
//! - `ohta`: the fixed symmetric composite pi/2_x pi_y pi/2_x, equal to a pi
//!   pulse about y with no dynamic phase at any moment, yet a nonzero
//!   traceless error generator.

use std::f64::consts::PI;

use crate::error::{PulseError, Result};
use crate::roots;
use crate::sequence::{PulseSequence, Segment};
use crate::su2::{BlochVector, Unitary2};

/// Sign-branch choice for the arccos/arcsin freedoms in the synthesized
/// families. `Principal` takes the positive arccos branch (and the solution
/// continuous with the theta = pi closed form for the three-pulse family);
/// `Mirrored` reflects every pulse phase through the x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisBranch {
    Principal,
    Mirrored,
}

/// Solved parameters of the three-pulse composite, with the residuals of the
/// three defining conditions evaluated at the solution.
///
/// The conditions, for target angle theta and pulses
/// theta1_(phi1) pi_(phi2) theta1_(phi1):
///
///   (1) cos(theta1) = tan(phi1 - phi2) / tan(phi1)
///   (2) sin(theta/2) = sin(phi1 - phi2) / sin(phi1)
///   (3) 2 theta1 cos(phi1 - phi2) + pi = 0   (zero dynamic-phase sum)
#[derive(Debug, Clone, Copy)]
pub struct ScrofulousParams {
    pub theta: f64,
    pub theta1: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub residuals: [f64; 3],
}

impl ScrofulousParams {
    fn evaluate_residuals(theta: f64, theta1: f64, phi1: f64, phi2: f64) -> [f64; 3] {
        let delta = phi1 - phi2;
        [
            theta1.cos() - delta.tan() / phi1.tan(),
            (theta / 2.0).sin() - delta.sin() / phi1.sin(),
            2.0 * theta1 * delta.cos() + PI,
        ]
    }
}

/// Bare single pulse with itself as declared target.
pub fn naive(axis: BlochVector, theta: f64) -> PulseSequence {
    PulseSequence::new(vec![Segment::new(axis, theta)], format!("naive({theta:.6})"))
        .with_target(axis, theta)
}

/// The symmetric composite pi/2_x pi_y pi/2_x (target: pi about y).
pub fn ohta() -> PulseSequence {
    PulseSequence::new(
        vec![
            Segment::new(BlochVector::X, PI / 2.0),
            Segment::new(BlochVector::Y, PI),
            Segment::new(BlochVector::X, PI / 2.0),
        ],
        "ohta",
    )
    .with_target(BlochVector::Y, PI)
}

/// Identity-valued correction sequence pi_(phi1) 2pi_(phi2) pi_(phi1) with
/// phi1 = +-arccos(-theta/(4 pi)) and phi2 = 3 phi1. Composes to the identity
/// exactly; accumulates dynamic phase theta/2 when started from +x.
pub fn w1(theta: f64, branch: SynthesisBranch) -> Result<PulseSequence> {
    if !(0.0..=4.0 * PI).contains(&theta) {
        return Err(PulseError::Domain {
            param: "theta",
            value: theta,
            domain: "[0, 4pi]",
        });
    }
    let phi1 = match branch {
        SynthesisBranch::Principal => (-theta / (4.0 * PI)).acos(),
        SynthesisBranch::Mirrored => -(-theta / (4.0 * PI)).acos(),
    };
    let phi2 = 3.0 * phi1;
    Ok(PulseSequence::new(
        vec![
            Segment::xy(PI, phi1),
            Segment::xy(2.0 * PI, phi2),
            Segment::xy(PI, phi1),
        ],
        format!("w1({theta:.6})"),
    ))
}

/// Target pulse split around the correction sequence:
/// theta/2_x, then [`w1`], then theta/2_x. Composes to R(x, theta) exactly
/// and has zero dynamic-phase sum at +x.
pub fn w1_sandwich(theta: f64, branch: SynthesisBranch) -> Result<PulseSequence> {
    if !(theta > 0.0 && theta < 4.0 * PI) {
        return Err(PulseError::Domain {
            param: "theta",
            value: theta,
            domain: "(0, 4pi)",
        });
    }
    let inner = w1(theta, branch)?;
    let mut segments = vec![Segment::new(BlochVector::X, theta / 2.0)];
    segments.extend(inner.segments);
    segments.push(Segment::new(BlochVector::X, theta / 2.0));
    Ok(PulseSequence::new(segments, format!("w1-sandwich({theta:.6})"))
        .with_target(BlochVector::X, theta))
}

/// Split-correction composite: theta_x followed by -2pi pulses about
/// m-+ = (cos phi, -+sin phi, 0) with phi = arccos(theta/(4 pi)).
///
/// The -2pi pulses are identities at zero error, and their generators
/// A+- = -2pi (m+- . sigma)/2 satisfy theta sigma_x/2 + A+ + A- = 0, so the
/// first-order amplitude error cancels exactly.
pub fn trotter_suzuki(theta: f64) -> Result<PulseSequence> {
    if !(theta > 0.0 && theta <= 4.0 * PI) {
        return Err(PulseError::Domain {
            param: "theta",
            value: theta,
            domain: "(0, 4pi]",
        });
    }
    let phi = (theta / (4.0 * PI)).acos();
    Ok(PulseSequence::new(
        vec![
            Segment::new(BlochVector::X, theta),
            Segment::xy(-2.0 * PI, -phi),
            Segment::xy(-2.0 * PI, phi),
        ],
        format!("trotter-suzuki({theta:.6})"),
    )
    .with_target(BlochVector::X, theta))
}

/// The two -2pi pulse segments of [`trotter_suzuki`] as standalone segments
/// (for commutator/defect diagnostics on their generators).
pub fn trotter_split_segments(theta: f64) -> Result<(Segment, Segment)> {
    let seq = trotter_suzuki(theta)?;
    Ok((seq.segments[2], seq.segments[1]))
}

/// Three-pulse composite theta1_(phi1) pi_(phi2) theta1_(phi1) equal to
/// R(x, theta) with zero dynamic-phase sum, solved by 1-D bracketed root
/// finding (see module docs for the equations).
///
/// The solve eliminates delta = phi1 - phi2 through condition (3),
/// eliminates phi1 through condition (2), and finds theta1 as a root of the
/// condition (1) residual. theta = pi is the analytic point
/// (theta1, phi1, phi2) = (pi, pi/3, -pi/3), where the root is a tangency,
/// so it is returned in closed form. Every solution is validated against the
/// residuals and the composed unitary before being returned.
pub fn scrofulous(
    theta: f64,
    branch: SynthesisBranch,
) -> Result<(PulseSequence, ScrofulousParams)> {
    if !(theta > 0.0 && theta <= PI) {
        return Err(PulseError::Domain {
            param: "theta",
            value: theta,
            domain: "(0, pi]",
        });
    }

    let params = if (theta - PI).abs() < 1e-12 {
        let p = ScrofulousParams {
            theta: PI,
            theta1: PI,
            phi1: PI / 3.0,
            phi2: -PI / 3.0,
            residuals: ScrofulousParams::evaluate_residuals(PI, PI, PI / 3.0, -PI / 3.0),
        };
        validate(p, theta)?
    } else {
        solve_scrofulous(theta)?
    };

    let (phi1, phi2) = match branch {
        SynthesisBranch::Principal => (params.phi1, params.phi2),
        SynthesisBranch::Mirrored => (-params.phi1, -params.phi2),
    };
    let params = ScrofulousParams {
        phi1,
        phi2,
        ..params
    };
    let seq = PulseSequence::new(
        vec![
            Segment::xy(params.theta1, phi1),
            Segment::xy(PI, phi2),
            Segment::xy(params.theta1, phi1),
        ],
        format!("scrofulous({theta:.6})"),
    )
    .with_target(BlochVector::X, theta);
    Ok((seq, params))
}

/// Reconstructs (phi1, phi2) from theta1 on the principal branch:
/// delta from condition (3), phi1 from condition (2).
fn angles_from_theta1(theta: f64, theta1: f64) -> Option<(f64, f64)> {
    let cos_delta = -PI / (2.0 * theta1);
    if !(-1.0..=1.0).contains(&cos_delta) {
        return None;
    }
    let delta = cos_delta.acos();
    let sin_phi1 = delta.sin() / (theta / 2.0).sin();
    if !(0.0..=1.0).contains(&sin_phi1) {
        return None;
    }
    let phi1 = sin_phi1.asin();
    Some((phi1, phi1 - delta))
}

fn condition_one_residual(theta: f64, theta1: f64) -> Option<f64> {
    let (phi1, phi2) = angles_from_theta1(theta, theta1)?;
    let delta = phi1 - phi2;
    Some(theta1.cos() - delta.tan() / phi1.tan())
}

fn solve_scrofulous(theta: f64) -> Result<ScrofulousParams> {
    let f = |theta1: f64| condition_one_residual(theta, theta1);
    let lo = PI / 2.0 * (1.0 + 1e-9);
    // Condition (2) is solvable only while sin(delta) <= sin(theta/2), i.e.
    // theta1 <= pi / (2 cos(theta/2)); capping the scan there keeps the grid
    // fine enough to resolve the narrow feasible window at small theta.
    let hi = (PI / (2.0 * (theta / 2.0).cos())).min(2.0 * PI);
    let steps = 20_000;
    let brackets = roots::scan_brackets(&f, lo, hi, steps);

    let mut candidates: Vec<f64> = brackets
        .iter()
        .map(|b| roots::bisect(&f, *b, 200))
        .collect();
    if candidates.is_empty() {
        // Tangency fallback: near theta = pi the residual touches zero
        // without crossing. Chase the |f| minimum instead.
        let step = (hi - lo) / steps as f64;
        let mut min_x = lo;
        let mut min_v = f64::INFINITY;
        for i in 0..=steps {
            let x = lo + step * i as f64;
            if let Some(v) = f(x) {
                if v.abs() < min_v {
                    min_v = v.abs();
                    min_x = x;
                }
            }
        }
        candidates.push(roots::refine_abs_minimum(
            &f,
            (min_x - step).max(lo),
            min_x + step,
            300,
        ));
    }

    // The printed conditions admit spurious roots (tan is pi-periodic), so
    // the composed unitary is the final arbiter. Candidates arrive in
    // ascending theta1; the first gate-exact one continues the closed-form
    // branch at theta = pi.
    let mut best_residuals = [f64::NAN; 3];
    let mut best_defect = f64::INFINITY;
    for theta1 in candidates {
        let Some((phi1, phi2)) = angles_from_theta1(theta, theta1) else {
            continue;
        };
        let params = ScrofulousParams {
            theta,
            theta1,
            phi1,
            phi2,
            residuals: ScrofulousParams::evaluate_residuals(theta, theta1, phi1, phi2),
        };
        match validate(params, theta) {
            Ok(p) => return Ok(p),
            Err(_) => {
                let worst = params.residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
                if worst < best_defect {
                    best_defect = worst;
                    best_residuals = params.residuals;
                }
            }
        }
    }
    Err(PulseError::SynthesisFailure {
        residuals: best_residuals,
    })
}

/// Final arbiter: the equation residuals must vanish and the composed
/// sequence must reproduce the target rotation up to a global phase.
fn validate(params: ScrofulousParams, theta: f64) -> Result<ScrofulousParams> {
    let worst = params.residuals.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
    let seq = PulseSequence::new(
        vec![
            Segment::xy(params.theta1, params.phi1),
            Segment::xy(PI, params.phi2),
            Segment::xy(params.theta1, params.phi1),
        ],
        "candidate",
    );
    let gate_err = seq
        .compose()
        .distance_up_to_phase(&Unitary2::rotation(&BlochVector::X, theta));
    if worst > 1e-10 || gate_err > 1e-10 {
        return Err(PulseError::SynthesisFailure {
            residuals: params.residuals,
        });
    }
    Ok(params)
}

/// Rotates every pulse phase by `delta`, steering an x-targeted family to
/// the xy-plane axis at azimuth `delta`. Only valid for sequences whose
/// axes all lie in the xy-plane.
pub fn shift_xy_phases(seq: &PulseSequence, delta: f64) -> Result<PulseSequence> {
    let mut segments = Vec::with_capacity(seq.len());
    for seg in &seq.segments {
        let [x, y, z] = seg.axis.components();
        if z.abs() > 1e-10 {
            return Err(PulseError::Domain {
                param: "axis.z",
                value: z,
                domain: "0 (xy-plane sequences only)",
            });
        }
        let phi = y.atan2(x) + delta;
        segments.push(Segment {
            axis: BlochVector::xy(phi),
            angle: seg.angle,
            duration: seg.duration,
        });
    }
    let mut out = PulseSequence::new(segments, seq.label.clone());
    if let Some(t) = seq.target {
        let [x, y, _] = t.axis.components();
        out = out.with_target(BlochVector::xy(y.atan2(x) + delta), t.angle);
    }
    Ok(out)
}
