//! Pulse segments and temporally ordered sequences.

use crate::error::{PulseError, Result};
use crate::su2::{BlochVector, Unitary2};

/// One piecewise-constant pulse: a rotation by `angle` about the unit
/// vector `axis`. The generating Hamiltonian is angle (axis . sigma) / (2 T)
/// over the segment duration T, so only the product angle (axis . sigma) / 2
/// ever enters a computed quantity; `duration` is carried for bookkeeping and
/// cancels out of every result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub axis: BlochVector,
    pub angle: f64,
    pub duration: f64,
}

impl Segment {
    /// Segment with the default unit duration.
    pub fn new(axis: BlochVector, angle: f64) -> Self {
        Segment {
            axis,
            angle,
            duration: 1.0,
        }
    }

    pub fn with_duration(axis: BlochVector, angle: f64, duration: f64) -> Result<Self> {
        if duration <= 0.0 || duration.is_nan() {
            return Err(PulseError::NonPositiveDuration { duration });
        }
        Ok(Segment {
            axis,
            angle,
            duration,
        })
    }

    /// xy-plane pulse at azimuth `phi` (the "angle(phase)" notation).
    pub fn xy(angle: f64, phi: f64) -> Self {
        Segment::new(BlochVector::xy(phi), angle)
    }

    pub fn unitary(&self) -> Unitary2 {
        Unitary2::rotation(&self.axis, self.angle)
    }
}

/// Declared target rotation of a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub axis: BlochVector,
    pub angle: f64,
}

impl Target {
    pub fn unitary(&self) -> Unitary2 {
        Unitary2::rotation(&self.axis, self.angle)
    }
}

/// Ordered list of segments; index 0 is applied first in time. Note that the
/// composed operator product therefore reads right to left: segment 0 is the
/// rightmost factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    pub segments: Vec<Segment>,
    pub target: Option<Target>,
    pub label: String,
}

impl PulseSequence {
    pub fn new(segments: Vec<Segment>, label: impl Into<String>) -> Self {
        PulseSequence {
            segments,
            target: None,
            label: label.into(),
        }
    }

    pub fn with_target(mut self, axis: BlochVector, angle: f64) -> Self {
        self.target = Some(Target { axis, angle });
        self
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Product of the segment rotations in temporal order (segment 0 applied
    /// first, so it accumulates on the right). The empty sequence composes to
    /// the identity; analysis routines treat that as a degenerate case.
    pub fn compose(&self) -> Unitary2 {
        let mut u = Unitary2::identity();
        for seg in &self.segments {
            u = seg.unitary().mul(&u);
        }
        u
    }

    /// True when every axis lies on one line, i.e. the sequence acts like a
    /// single pulse about a fixed axis.
    pub fn is_single_axis(&self) -> bool {
        match self.segments.first() {
            None => true,
            Some(first) => self.segments.iter().all(|s| {
                let cx = first.axis.cross(&s.axis);
                (cx[0] * cx[0] + cx[1] * cx[1] + cx[2] * cx[2]).sqrt() < 1e-9
            }),
        }
    }
}
