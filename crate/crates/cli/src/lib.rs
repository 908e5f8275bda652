//! `cpulse` command-line interface: synthesize composite pulse sequences,
//! decompose their phases, sweep amplitude errors, and check the
//! zero-dynamic-phase robustness criterion.
//!
//! Exit codes: 0 success, 2 domain errors (bad parameters, degenerate
//! composites, I/O), 3 parse errors (sequence notation or JSON). Data goes
//! to stdout, diagnostics to stderr. Angles are degrees on the command line
//! and in file formats; reports show degrees and radians side by side.

pub mod doc;
pub mod dsl;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use cpulse_core::{
    cyclic_states, first_order_report, log_grid, phase_decomposition_with_n0, sweep, synth,
    verify_theorem, BlochVector, PulseError, PulseSequence, SweepRow, Unitary2,
};

const EXIT_OK: i32 = 0;
const EXIT_DOMAIN: i32 = 2;
const EXIT_PARSE: i32 = 3;

#[derive(Debug)]
enum CliError {
    /// Input text could not be understood (exit 3).
    Parse(String),
    /// Parameters or sequence state outside an operation's domain (exit 2).
    Domain(String),
    /// Downstream reader went away; exit quietly with success.
    BrokenPipe,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::BrokenPipe => EXIT_OK,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            CliError::Parse(m) | CliError::Domain(m) => Some(m),
            CliError::BrokenPipe => None,
        }
    }
}

impl From<PulseError> for CliError {
    fn from(e: PulseError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<dsl::ParseError> for CliError {
    fn from(e: dsl::ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Domain(format!("i/o error: {e}"))
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cpulse",
    version,
    about = "Composite-pulse synthesis, phase decomposition, and robustness analysis",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a pulse family toward a rotation about x.
    Synth {
        family: Family,
        /// Target rotation angle in degrees.
        #[arg(long)]
        theta: f64,
        /// Sign branch of the arccos/arcsin solutions.
        #[arg(long, value_enum, default_value_t = Branch::Principal)]
        branch: Branch,
        /// Output form.
        #[arg(long, value_enum, default_value_t = OutFormat::Dsl)]
        out: OutFormat,
    },
    /// Phase decomposition and first-order error report of a sequence.
    Analyze {
        /// Sequence file (notation or JSON), or '-' for stdin.
        input: String,
        /// Basis Bloch vector "x,y,z" for degenerate composites.
        #[arg(long)]
        n0: Option<String>,
    },
    /// Infidelity and operator-error sweep over an amplitude-error grid.
    Sweep {
        /// Sequence file (notation or JSON), or '-' for stdin.
        input: String,
        /// Target gate: 'auto' (declared target or zero-error composite) or
        /// a sequence in pulse notation.
        #[arg(long, default_value = "auto")]
        target: String,
        #[arg(long, default_value_t = 1e-2)]
        eps_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        eps_max: f64,
        /// Number of log-spaced grid points.
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the robustness criterion (zero dynamic-phase sum) on a sequence.
    Verify {
        /// Sequence file (notation or JSON), or '-' for stdin.
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Scrofulous,
    W1,
    W1Sandwich,
    TrotterSuzuki,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    Principal,
    Mirrored,
}

impl From<Branch> for synth::SynthesisBranch {
    fn from(b: Branch) -> Self {
        match b {
            Branch::Principal => synth::SynthesisBranch::Principal,
            Branch::Mirrored => synth::SynthesisBranch::Mirrored,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Dsl,
    Json,
}

/// Runs the CLI against explicit streams; `args` excludes the binary name.
pub fn run(
    args: &[&str],
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let mut argv = vec!["cpulse"];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_DOMAIN
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if let Some(message) = e.message() {
                let _ = writeln!(stderr, "error: {message}");
            }
            e.code()
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Synth {
            family,
            theta,
            branch,
            out,
        } => cmd_synth(family, theta, branch.into(), out, stdout),
        Command::Analyze { input, n0 } => {
            let seq = load_sequence(&read_input(&input, stdin)?)?;
            let n0 = n0.map(|s| parse_n0(&s)).transpose()?;
            cmd_analyze(&seq, n0, stdout)
        }
        Command::Sweep {
            input,
            target,
            eps_min,
            eps_max,
            points,
            csv,
        } => {
            let seq = load_sequence(&read_input(&input, stdin)?)?;
            cmd_sweep(&seq, &target, eps_min, eps_max, points, csv, stdout)
        }
        Command::Verify { input } => {
            let seq = load_sequence(&read_input(&input, stdin)?)?;
            cmd_verify(&seq, stdout)
        }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        stdin.read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// JSON documents start with '{'; anything else is pulse notation.
fn load_sequence(text: &str) -> Result<PulseSequence, CliError> {
    if text.trim_start().starts_with('{') {
        let document: doc::SequenceDocument = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("invalid sequence JSON: {e}")))?;
        document
            .into_sequence()
            .map_err(|e| CliError::Parse(format!("invalid sequence JSON: {e}")))
    } else {
        Ok(dsl::parse_dsl(text)?)
    }
}

fn parse_n0(text: &str) -> Result<BlochVector, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Domain(format!(
            "--n0 expects three comma-separated components, got '{text}'"
        )));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| CliError::Domain(format!("--n0 component '{part}' is not a number")))?;
    }
    Ok(BlochVector::normalized(v[0], v[1], v[2])?)
}

fn cmd_synth(
    family: Family,
    theta_deg: f64,
    branch: synth::SynthesisBranch,
    out: OutFormat,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let theta = theta_deg.to_radians();
    let seq = match family {
        Family::Scrofulous => synth::scrofulous(theta, branch)?.0,
        Family::W1 => synth::w1(theta, branch)?,
        Family::W1Sandwich => synth::w1_sandwich(theta, branch)?,
        Family::TrotterSuzuki => synth::trotter_suzuki(theta)?,
        Family::Naive => synth::naive(BlochVector::X, theta),
    };
    match out {
        OutFormat::Dsl => writeln!(stdout, "{}", dsl::serialize_dsl(&seq))?,
        OutFormat::Json => writeln!(stdout, "{}", doc::to_json(&seq))?,
    }
    Ok(())
}

/// Rounds at the displayed precision so values that print as zero print as
/// "0.000000" rather than "-0.000000".
fn display_round(v: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    let r = (v * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn fmt_angle(rad: f64) -> String {
    format!(
        "{:.6} deg ({:.9} rad)",
        display_round(rad.to_degrees(), 6),
        display_round(rad, 9)
    )
}

fn fmt_vec(v: &BlochVector) -> String {
    let [x, y, z] = v.components();
    format!(
        "({:.6}, {:.6}, {:.6})",
        display_round(x, 6),
        display_round(y, 6),
        display_round(z, 6)
    )
}

fn cmd_analyze(
    seq: &PulseSequence,
    n0: Option<BlochVector>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let composite = seq.compose();
    writeln!(stdout, "sequence: {} [{} segments]", seq.label, seq.len())?;
    writeln!(stdout, "notation: {}", dsl::serialize_dsl(seq))?;

    let decomposition = match (composite.axis_angle(), n0) {
        (Ok(aa), maybe_n0) => {
            writeln!(
                stdout,
                "composite: axis {}, angle {}, global phase {}",
                fmt_vec(&aa.axis),
                fmt_angle(aa.angle),
                fmt_angle(aa.global_phase)
            )?;
            match maybe_n0 {
                Some(n) => phase_decomposition_with_n0(seq, &n)?,
                None => phase_decomposition_with_n0(seq, &cyclic_states(&composite)?.n0)?,
            }
        }
        (Err(PulseError::DegenerateRotation), Some(n)) => {
            writeln!(
                stdout,
                "composite: proportional to identity (every state cyclic)"
            )?;
            phase_decomposition_with_n0(seq, &n)?
        }
        (Err(PulseError::DegenerateRotation), None) => {
            return Err(CliError::Domain(
                "composite is proportional to the identity; every state is cyclic, \
                 pass --n0 x,y,z to choose a basis Bloch vector"
                    .into(),
            ));
        }
        (Err(e), _) => return Err(e.into()),
    };

    writeln!(stdout, "cyclic n0: {}", fmt_vec(&decomposition.n0))?;
    let per: Vec<String> = decomposition
        .per_segment
        .iter()
        .map(|g| format!("{:.6}", display_round(g.to_degrees(), 6)))
        .collect();
    writeln!(stdout, "per-segment dynamic phases (deg): [{}]", per.join(", "))?;
    let raw_sum: f64 = decomposition.per_segment.iter().sum();
    writeln!(stdout, "dynamic-phase sum: {}", fmt_angle(raw_sum))?;
    writeln!(stdout, "gamma_total:     {}", fmt_angle(decomposition.gamma_total))?;
    writeln!(stdout, "gamma_dynamic:   {}", fmt_angle(decomposition.gamma_dynamic))?;
    writeln!(
        stdout,
        "gamma_geometric: {}",
        fmt_angle(decomposition.gamma_geometric)
    )?;

    let report = first_order_report(seq, Some(decomposition.n0))?;
    let m = report.generator.matrix();
    writeln!(stdout, "error generator H':")?;
    for row in 0..2 {
        let a = m.entry(row, 0);
        let b = m.entry(row, 1);
        writeln!(
            stdout,
            "  [{:+.9}{:+.9}i, {:+.9}{:+.9}i]",
            display_round(a.re, 9),
            display_round(a.im, 9),
            display_round(b.re, 9),
            display_round(b.im, 9)
        )?;
    }
    writeln!(stdout, "  trace part: {:.9e}", report.generator.trace_part())?;
    writeln!(
        stdout,
        "  traceless norm: {:.9e}",
        report.generator.traceless_norm()
    )?;
    writeln!(stdout, "  diagonal part: {:.9e}", report.diag_part)?;
    writeln!(stdout, "  off-diagonal part: {:.9e}", report.offdiag_part)?;
    match report.fitted_order {
        Some(order) => writeln!(stdout, "fitted infidelity order: {order:.3}")?,
        None => writeln!(
            stdout,
            "fitted infidelity order: n/a (infidelity at floor across the sweep)"
        )?,
    }
    writeln!(
        stdout,
        "fully compensating: {}",
        if report.is_fully_compensating { "yes" } else { "no" }
    )?;
    writeln!(stdout, "classification: {}", report.classification)?;
    Ok(())
}

/// CSV with 17 significant digits in scientific notation, LF line endings.
fn csv_text(rows: &[SweepRow]) -> String {
    let mut out = String::from("epsilon,infidelity,operator_error\n");
    for r in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            r.epsilon, r.infidelity, r.operator_error
        ));
    }
    out
}

fn cmd_sweep(
    seq: &PulseSequence,
    target_spec: &str,
    eps_min: f64,
    eps_max: f64,
    points: usize,
    csv_path: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let target: Unitary2 = if target_spec == "auto" {
        seq.target
            .map(|t| t.unitary())
            .unwrap_or_else(|| seq.compose())
    } else {
        dsl::parse_dsl(target_spec)?.compose()
    };
    let grid = log_grid(eps_min, eps_max, points)?;
    let rows = sweep(seq, &target, &grid)?;
    let text = csv_text(&rows);
    match csv_path {
        Some(path) => std::fs::write(path, text)?,
        None => write!(stdout, "{text}")?,
    }
    Ok(())
}

fn cmd_verify(seq: &PulseSequence, stdout: &mut dyn Write) -> Result<(), CliError> {
    let verdict = verify_theorem(seq, None).map_err(|e| match e {
        PulseError::DegenerateComposite => CliError::Domain(
            "composite is proportional to the identity; analyze it with --n0 instead".into(),
        ),
        other => other.into(),
    })?;
    let report = &verdict.report;
    writeln!(stdout, "theorem check: {}", seq.label)?;
    writeln!(stdout, "  cyclic n0: {}", fmt_vec(&report.n0))?;
    writeln!(stdout, "  dynamic-phase sum: {:.9e} rad", report.dyn_sum)?;
    writeln!(
        stdout,
        "  traceless generator norm: {:.9e}",
        report.generator.traceless_norm()
    )?;
    writeln!(
        stdout,
        "  fully compensating: {}",
        if report.is_fully_compensating { "yes" } else { "no" }
    )?;
    writeln!(
        stdout,
        "  necessary direction (fully compensating => zero dynamic-phase sum): {}",
        if verdict.necessary_direction_ok {
            "consistent"
        } else {
            "INCONSISTENT"
        }
    )?;
    if verdict.converse_violated {
        writeln!(
            stdout,
            "  converse: violated at operator level (zero dynamic-phase sum, {:.3e} traceless norm)",
            report.generator.traceless_norm()
        )?;
    } else {
        writeln!(stdout, "  converse: not violated")?;
    }
    writeln!(stdout, "  classification: {}", report.classification)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], stdin_text: &str) -> (i32, String, String) {
        let mut stdin = stdin_text.as_bytes();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args, &mut stdin, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn synth_scrofulous_180_notation() {
        let (code, out, err) = run_str(&["synth", "scrofulous", "--theta", "180"], "");
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.trim(), "180(60) 180(-60) 180(60)");
    }

    #[test]
    fn analyze_simple_pulse_dynamic_sum() {
        let (code, out, _) = run_str(&["analyze", "-"], "90(0)");
        assert_eq!(code, 0);
        assert!(out.contains("dynamic-phase sum: -45.000000 deg"), "{out}");
        assert!(out.contains("classification: naive"), "{out}");
    }

    #[test]
    fn analyze_degenerate_needs_n0() {
        let (code, _, err) = run_str(
            &["analyze", "-"],
            "180(104.4775) 360(313.4325) 180(104.4775)",
        );
        assert_eq!(code, 2);
        assert!(err.contains("--n0"), "{err}");
    }

    #[test]
    fn parse_error_exit_code() {
        let (code, _, err) = run_str(&["analyze", "-"], "90(0) 180(");
        assert_eq!(code, 3);
        assert!(err.contains("column 11"), "{err}");
    }

    #[test]
    fn sweep_emits_csv_header() {
        let (code, out, _) = run_str(
            &["sweep", "-", "--target", "auto", "--points", "5"],
            "90(0)",
        );
        assert_eq!(code, 0);
        assert!(out.starts_with("epsilon,infidelity,operator_error\n"));
        assert_eq!(out.lines().count(), 6);
        assert!(out.contains('e'), "scientific notation expected: {out}");
    }

    #[test]
    fn verify_flags_converse_case() {
        let (code, out, _) = run_str(&["verify", "-"], "90(0) 180(90) 90(0)");
        assert_eq!(code, 0);
        assert!(out.contains("converse: violated at operator level"), "{out}");
        assert!(out.contains("necessary direction"), "{out}");
    }

    #[test]
    fn unknown_family_is_domain_error() {
        let (code, _, err) = run_str(&["synth", "bb1", "--theta", "90"], "");
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"], "");
        assert_eq!(code, 0);
        assert!(out.contains("cpulse"));
    }
}
