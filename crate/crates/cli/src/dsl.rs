//! Pulse-sequence notation, read and written in degrees.
//!
//! Grammar (whitespace-separated pulses, temporal order left to right):
//!
//! ```text
//! sequence := pulse+
//! pulse    := ANGLE '(' PHASE ')'
//!           | 'rot(' ax ',' ay ',' az ';' ANGLE ')'
//! ```
//!
//! `ANGLE(PHASE)` is an xy-plane pulse rotating by ANGLE about the axis
//! (cos PHASE, sin PHASE, 0); the `rot` form takes an explicit unit axis.
//! All numbers are degrees (the axis components are dimensionless).

use cpulse_core::{BlochVector, PulseSequence, Segment};

/// Parse failure with a 1-based column position.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn column(&self) -> usize {
        self.src[..self.pos].chars().count() + 1
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            column: self.column(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(ch) = self.peek() {
            self.pos += ch.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(ch) if ch.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, expected: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(ch) if ch == expected => {
                self.bump();
                Ok(())
            }
            Some(ch) => Err(self.error(format!("expected '{expected}', found '{ch}'"))),
            None => Err(self.error(format!("expected '{expected}', found end of input"))),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('+') | Some('-')) {
            self.bump();
        }
        let mut saw_digit = false;
        while matches!(self.peek(), Some(ch) if ch.is_ascii_digit() || ch == '.') {
            saw_digit |= self.peek().unwrap().is_ascii_digit();
            self.bump();
        }
        if saw_digit && matches!(self.peek(), Some('e') | Some('E')) {
            let mark = self.pos;
            self.bump();
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.bump();
            }
            if matches!(self.peek(), Some(ch) if ch.is_ascii_digit()) {
                while matches!(self.peek(), Some(ch) if ch.is_ascii_digit()) {
                    self.bump();
                }
            } else {
                self.pos = mark;
            }
        }
        if !saw_digit {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        self.src[start..self.pos].parse().map_err(|_| ParseError {
            column: self.src[..start].chars().count() + 1,
            message: format!("invalid number '{}'", &self.src[start..self.pos]),
        })
    }
}

/// Parses the notation above into a sequence with angles in radians.
pub fn parse_dsl(text: &str) -> Result<PulseSequence, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(cur.error("empty input"));
    }
    let mut segments = Vec::new();
    while {
        cur.skip_ws();
        cur.peek().is_some()
    } {
        segments.push(parse_pulse(&mut cur)?);
    }
    Ok(PulseSequence::new(segments, "parsed"))
}

fn parse_pulse(cur: &mut Cursor) -> Result<Segment, ParseError> {
    match cur.peek() {
        Some(ch) if ch.is_alphabetic() => {
            let start = cur.pos;
            while matches!(cur.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                cur.bump();
            }
            let word = &cur.src[start..cur.pos];
            if word != "rot" {
                return Err(ParseError {
                    column: cur.src[..start].chars().count() + 1,
                    message: format!("unknown token '{word}'"),
                });
            }
            cur.eat('(')?;
            let axis_col = {
                let mut probe = Cursor {
                    src: cur.src,
                    pos: cur.pos,
                };
                probe.skip_ws();
                probe.column()
            };
            let ax = cur.number()?;
            cur.eat(',')?;
            let ay = cur.number()?;
            cur.eat(',')?;
            let az = cur.number()?;
            cur.eat(';')?;
            let angle = cur.number()?;
            cur.eat(')')?;
            let norm = (ax * ax + ay * ay + az * az).sqrt();
            if (norm - 1.0).abs() > 1e-6 {
                return Err(ParseError {
                    column: axis_col,
                    message: format!("rot axis must be a unit vector, got norm {norm}"),
                });
            }
            let axis = BlochVector::normalized(ax, ay, az).map_err(|e| ParseError {
                column: axis_col,
                message: e.to_string(),
            })?;
            Ok(Segment::new(axis, angle.to_radians()))
        }
        Some(_) => {
            let angle = cur.number()?;
            cur.eat('(')?;
            let phase = cur.number()?;
            cur.eat(')')?;
            Ok(Segment::xy(angle.to_radians(), phase.to_radians()))
        }
        None => Err(cur.error("expected a pulse")),
    }
}

/// Formats a degree value rounded to 12 decimals with trailing zeros
/// trimmed, so synthesized angles print as their exact intended values.
fn format_num(v: f64) -> String {
    let rounded = (v * 1e12).round() / 1e12;
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    let mut s = format!("{rounded:.12}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}

/// Serializes a sequence back into the notation, using the `ANGLE(PHASE)`
/// form for xy-plane axes and `rot(...)` otherwise. Phases are reported in
/// (-180, 180].
pub fn serialize_dsl(seq: &PulseSequence) -> String {
    seq.segments
        .iter()
        .map(|seg| {
            let [x, y, z] = seg.axis.components();
            let angle_deg = seg.angle.to_degrees();
            if z.abs() < 1e-10 {
                let phase_deg = y.atan2(x).to_degrees();
                format!("{}({})", format_num(angle_deg), format_num(phase_deg))
            } else {
                format!(
                    "rot({},{},{}; {})",
                    format_num(x),
                    format_num(y),
                    format_num(z),
                    format_num(angle_deg)
                )
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpulse_core::synth::{self, SynthesisBranch};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn parses_simple_pulse() {
        let seq = parse_dsl("90(0)").unwrap();
        assert_eq!(seq.len(), 1);
        assert!((seq.segments[0].angle - FRAC_PI_2).abs() < 1e-15);
        assert!((seq.segments[0].axis.x() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parses_three_pulse_composite() {
        // 300 degrees is the same phase as -60.
        let seq = parse_dsl("180(60) 180(300) 180(60)").unwrap();
        let (reference, _) = synth::scrofulous(PI, SynthesisBranch::Principal).unwrap();
        assert_eq!(seq.len(), 3);
        for (a, b) in seq.segments.iter().zip(&reference.segments) {
            assert!((a.angle - b.angle).abs() < 1e-12);
            assert!((a.axis.dot(&b.axis) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parses_rot_form_and_rejects_non_unit_axis() {
        let seq = parse_dsl("rot(0,0,1; 90)").unwrap();
        assert!((seq.segments[0].axis.z() - 1.0).abs() < 1e-15);
        assert!((seq.segments[0].angle - FRAC_PI_2).abs() < 1e-15);

        let err = parse_dsl("rot(0,0,2; 90)").unwrap_err();
        assert!(err.message.contains("unit vector"), "{err}");
        assert_eq!(err.column, 5);
    }

    #[test]
    fn truncated_input_reports_column() {
        let err = parse_dsl("90(0) 180(").unwrap_err();
        assert_eq!(err.column, 11, "{err}");
        assert!(err.message.contains("number"));
    }

    #[test]
    fn empty_and_unknown_inputs() {
        let err = parse_dsl("   ").unwrap_err();
        assert!(err.message.contains("empty input"));
        let err = parse_dsl("90(0) spin(3)").unwrap_err();
        assert_eq!(err.column, 7);
        assert!(err.message.contains("unknown token 'spin'"));
    }

    #[test]
    fn negative_angles_and_exponents() {
        let seq = parse_dsl("-720(-75.5) 1.5e2(0)").unwrap();
        assert!((seq.segments[0].angle + 4.0 * PI).abs() < 1e-12);
        assert!((seq.segments[1].angle - 150f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn serializes_synthesized_three_pulse() {
        let (seq, _) = synth::scrofulous(PI, SynthesisBranch::Principal).unwrap();
        assert_eq!(serialize_dsl(&seq), "180(60) 180(-60) 180(60)");
    }

    #[test]
    fn serializes_z_axis_as_rot_form() {
        let seq = PulseSequence::new(
            vec![Segment::new(cpulse_core::BlochVector::Z, FRAC_PI_2)],
            "z",
        );
        assert_eq!(serialize_dsl(&seq), "rot(0,0,1; 90)");
    }

    #[test]
    fn roundtrip_fixtures() {
        let fixtures = vec![
            synth::ohta(),
            synth::naive(cpulse_core::BlochVector::X, 1.234),
            synth::w1(2.2, SynthesisBranch::Principal).unwrap(),
            synth::w1_sandwich(PI, SynthesisBranch::Mirrored).unwrap(),
            synth::trotter_suzuki(FRAC_PI_2).unwrap(),
            synth::scrofulous(1.0, SynthesisBranch::Principal).unwrap().0,
        ];
        for seq in fixtures {
            let text = serialize_dsl(&seq);
            let parsed = parse_dsl(&text).unwrap();
            assert_eq!(parsed.len(), seq.len(), "{text}");
            for (a, b) in parsed.segments.iter().zip(&seq.segments) {
                assert!((a.angle - b.angle).abs() < 1e-12, "{text}");
                let da = a.axis.components();
                let db = b.axis.components();
                for i in 0..3 {
                    assert!((da[i] - db[i]).abs() < 1e-12, "{text}");
                }
            }
        }
    }
}
