//! JSON interchange form of a pulse sequence.
//!
//! Schema:
//!
//! ```json
//! {
//!   "label": "...",
//!   "target": {"axis": [x, y, z], "angle_deg": num} | null,
//!   "segments": [{"axis": [x, y, z], "angle_deg": num}, ...]
//! }
//! ```
//!
//! Angles are degrees at this boundary; axes are unit 3-vectors.

use cpulse_core::{BlochVector, PulseSequence, Segment};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceDocument {
    pub label: String,
    pub target: Option<TargetDocument>,
    pub segments: Vec<SegmentDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetDocument {
    pub axis: [f64; 3],
    pub angle_deg: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentDocument {
    pub axis: [f64; 3],
    pub angle_deg: f64,
}

impl SequenceDocument {
    pub fn from_sequence(seq: &PulseSequence) -> Self {
        SequenceDocument {
            label: seq.label.clone(),
            target: seq.target.map(|t| TargetDocument {
                axis: t.axis.components(),
                angle_deg: t.angle.to_degrees(),
            }),
            segments: seq
                .segments
                .iter()
                .map(|s| SegmentDocument {
                    axis: s.axis.components(),
                    angle_deg: s.angle.to_degrees(),
                })
                .collect(),
        }
    }

    pub fn into_sequence(self) -> Result<PulseSequence, cpulse_core::PulseError> {
        let mut segments = Vec::with_capacity(self.segments.len());
        for s in &self.segments {
            let axis = BlochVector::new(s.axis[0], s.axis[1], s.axis[2])?;
            segments.push(Segment::new(axis, s.angle_deg.to_radians()));
        }
        let mut seq = PulseSequence::new(segments, self.label);
        if let Some(t) = self.target {
            let axis = BlochVector::new(t.axis[0], t.axis[1], t.axis[2])?;
            seq = seq.with_target(axis, t.angle_deg.to_radians());
        }
        Ok(seq)
    }
}

pub fn to_json(seq: &PulseSequence) -> String {
    serde_json::to_string_pretty(&SequenceDocument::from_sequence(seq))
        .expect("document serialization cannot fail")
}
