//! Batch command-line front end.
//!
//! Exit codes: 0 ok, 1 a gating check failed, 2 usage/parse/IO error,
//! 3 size overflow or allocation failure, 4 dense engine above the dense
//! capacity, 5 eigensolver non-convergence.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::hamiltonian::{build_general, HamiltonianSpec};
use crate::kron::{check_property, kron, Expectation, KronProperty, ResidualReport, DEFAULT_TOL};
use crate::linalg::{commutator, eigh};
use crate::matfree::{
    commutator_probe, configure_threads_from_env, lanczos_extremal, spec_to_kronsum, Factor,
    KronSum, KronTerm, LanczosConfig, StateVector, Which,
};
use crate::matrix::ComplexMatrix;
use crate::spin::{lift_pair, pauli, total_component, total_spin_squared, PauliAxis, DENSE_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_ENGINE: i32 = 4;
pub const EXIT_CONVERGENCE: i32 = 5;

/// Largest site count `conserved --engine auto` checks with dense commutators.
pub const AUTO_DENSE_MAX_SITES: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "kronspin",
    version,
    about = "Kronecker algebra and spin-1/2 Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write A ⊗ B in matrix text format.
    Kron {
        a: PathBuf,
        b: PathBuf,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the eight Kronecker product rules on a pair of matrices.
    VerifyProperties {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        /// Seed for the scalars used by the scalar-factor rule.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of the Hamiltonian described by a JSON spec.
    Spectrum {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Dense)]
        engine: Engine,
        /// Number of extremal eigenvalues (lanczos only).
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = End::Lowest)]
        which: End,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
        /// Lanczos relative residual target.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 300)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Residuals of [H, S_z], [H, S²] and [S_z, S²].
    Conserved {
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = ConservedEngine::Auto)]
        engine: ConservedEngine,
        /// Random states per matrix-free commutator probe.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        probes: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Adds DELTA · σz⊗σz on every edge, breaking S² conservation.
        #[arg(long, value_name = "DELTA", hide = true)]
        debug_anisotropy: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time matrix-free application across site counts.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![10, 12, 14, 16])]
        n_list: Vec<usize>,
        /// Fixed term count; defaults to the full chain Hamiltonian at each n.
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        repeats: u32,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConservedEngine {
    Auto,
    Dense,
    Matfree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum End {
    Lowest,
    Highest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// JSON report emitted by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<String>,
    pub results: Vec<ResultRow>,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultRow {
    Residual {
        check: String,
        residual: f64,
        tolerance: f64,
        passed: bool,
        expect: Expectation,
        /// Whether this row decides the exit status.
        gating: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Skipped {
        check: String,
        tolerance: f64,
        reason: String,
    },
    Spectrum {
        check: String,
        tolerance: f64,
        engine: String,
        dimension: usize,
        eigenvalues: Vec<f64>,
    },
    Timing {
        check: String,
        tolerance: f64,
        n_sites: usize,
        terms: usize,
        amplitudes_touched: u64,
        seconds_min: f64,
        seconds_median: f64,
    },
    Fit {
        check: String,
        tolerance: f64,
        scaling_exponent: f64,
    },
}

impl ResultRow {
    fn residual(report: &ResidualReport, gating: bool, note: Option<String>) -> Self {
        ResultRow::Residual {
            check: report.property_name.clone(),
            residual: report.residual,
            tolerance: report.tolerance,
            passed: report.passed,
            expect: report.expect,
            gating,
            note,
        }
    }

    fn fails_gate(&self) -> bool {
        matches!(
            self,
            ResultRow::Residual {
                gating: true,
                passed: false,
                ..
            }
        )
    }
}

/// A failure mapped to its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(EXIT_USAGE, format!("{}: {e}", path.display()))
    }

    fn from_error(context: &str, e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Shape { .. }
            | Error::Range { .. }
            | Error::InvalidSpec(_)
            | Error::UnknownProperty(_)
            | Error::NonFinite { .. } => EXIT_USAGE,
            Error::Sizing { .. } | Error::Allocation { .. } => EXIT_CAPACITY,
            Error::Capacity { .. } => EXIT_ENGINE,
            Error::Convergence { .. } => EXIT_CONVERGENCE,
            Error::Singular { .. } | Error::NotHermitian { .. } | Error::HermitianProbe { .. } => {
                EXIT_CHECK_FAILED
            }
        };
        Self::new(code, format!("{context}: {e}"))
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    configure_threads_from_env();
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Kron { a, b, out: path } => cmd_kron(&a, &b, path.as_deref(), out, err),
        Command::VerifyProperties {
            a,
            b,
            tol,
            json,
            seed,
            out: path,
        } => cmd_verify_properties(&a, &b, tol, json, seed, path.as_deref(), out),
        Command::Spectrum {
            spec,
            engine,
            k,
            which,
            out: path,
            format,
            json,
            tol,
            max_iter,
            seed,
        } => {
            let format = if json { Format::Json } else { format };
            let lanczos = LanczosConfig {
                which: match which {
                    End::Lowest => Which::Lowest,
                    End::Highest => Which::Highest,
                },
                k,
                tol,
                max_iter,
                seed,
                want_vectors: false,
            };
            cmd_spectrum(&spec, engine, &lanczos, format, path.as_deref(), out, err)
        }
        Command::Conserved {
            spec,
            tol,
            json,
            engine,
            probes,
            seed,
            debug_anisotropy,
            out: path,
        } => cmd_conserved(
            &spec,
            tol,
            json,
            engine,
            probes as usize,
            seed,
            debug_anisotropy,
            path.as_deref(),
            out,
        ),
        Command::Bench {
            n_list,
            terms,
            repeats,
            json,
            seed,
            out: path,
        } => cmd_bench(
            &n_list,
            terms,
            repeats as usize,
            json,
            seed,
            path.as_deref(),
            out,
        ),
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ComplexMatrix::from_text(&text)
        .map_err(|e| CliError::from_error(&path.display().to_string(), e))
}

fn read_spec(path: &Path) -> Result<(HamiltonianSpec, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let hash = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::new(EXIT_USAGE, format!("{}: not UTF-8", path.display())))?;
    let spec = HamiltonianSpec::from_json(&text)
        .map_err(|e| CliError::from_error(&path.display().to_string(), e))?;
    Ok((spec, hash))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(EXIT_USAGE, e.to_string())),
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn render_table(report: &RunReport) -> String {
    let mut s = String::new();
    for row in &report.results {
        let line = match row {
            ResultRow::Residual {
                check,
                residual,
                tolerance,
                passed,
                expect,
                gating,
                note,
            } => {
                let status = match (passed, gating) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "info",
                };
                let relation = match expect {
                    Expectation::Equal => "<=",
                    Expectation::Differ => ">",
                };
                let mut line = format!(
                    "{check:<44} {residual:>11.3e} {relation:>2} {tolerance:.1e}  {status}"
                );
                if let Some(note) = note {
                    line.push_str("  ");
                    line.push_str(note);
                }
                line
            }
            ResultRow::Skipped {
                check,
                tolerance,
                reason,
            } => format!("{check:<44} {:>11} {:>2} {tolerance:.1e}  skipped: {reason}", "-", ""),
            ResultRow::Spectrum {
                check,
                dimension,
                eigenvalues,
                ..
            } => format!("{check}: {} of {dimension} eigenvalues", eigenvalues.len()),
            ResultRow::Timing {
                n_sites,
                terms,
                amplitudes_touched,
                seconds_min,
                seconds_median,
                ..
            } => format!(
                "n = {n_sites:>2}  terms {terms:>4}  touched {amplitudes_touched:>13}  min {seconds_min:>10.6}s  median {seconds_median:>10.6}s"
            ),
            ResultRow::Fit {
                scaling_exponent, ..
            } => format!("observed time ∝ 2^({scaling_exponent:.3} n)"),
        };
        s.push_str(&line);
        s.push('\n');
    }
    s.push_str(&format!("elapsed {:.3}s\n", report.elapsed_seconds));
    s
}

pub fn cmd_kron(
    a_path: &Path,
    b_path: &Path,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let a = read_matrix(a_path)?;
    let b = read_matrix(b_path)?;
    let product = kron(&a, &b).map_err(|e| CliError::from_error("kron", e))?;
    let summary = format!(
        "({} x {}) ⊗ ({} x {}) -> ({} x {})",
        a.rows(),
        a.cols(),
        b.rows(),
        b.cols(),
        product.rows(),
        product.cols()
    );
    emit(out_path, &product.to_text(), out)?;
    // Keep stdout clean when it carries the matrix.
    let sink: &mut dyn Write = if out_path.is_some() { out } else { err };
    let _ = writeln!(sink, "{summary}");
    Ok(EXIT_OK)
}

/// Operands used for each rule: A and B from the files, identities of matching
/// size for rule 2, and `(A, B, B)`, `(A, B, A)`, `(A, B, B, A)` for rules 3, 4, 7.
pub fn cmd_verify_properties(
    a_path: &Path,
    b_path: &Path,
    tol: f64,
    json: bool,
    seed: u64,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let start = Instant::now();
    let a = read_matrix(a_path)?;
    let b = read_matrix(b_path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scalars = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];

    let mut rows = Vec::new();
    for property in KronProperty::ALL {
        let operands = match property {
            KronProperty::IdentityFactors => vec![
                ComplexMatrix::identity(a.rows()),
                ComplexMatrix::identity(b.rows()),
            ],
            KronProperty::LeftDistributive => vec![a.clone(), b.clone(), b.clone()],
            KronProperty::RightDistributive => vec![a.clone(), b.clone(), a.clone()],
            KronProperty::MixedProduct => vec![a.clone(), b.clone(), b.clone(), a.clone()],
            _ => vec![a.clone(), b.clone()],
        };
        let label = format!("{}. {}", property.index(), property.name());
        match check_property(property, &operands, &scalars, tol) {
            Ok(check) => {
                if property == KronProperty::NonCommutative {
                    let note = match check.witness {
                        Some((r, c)) => format!("first difference at ({r}, {c})"),
                        None if a.is_identity(0.0) && b.is_identity(0.0) => {
                            "commute (identity case)".to_string()
                        }
                        None => "commute".to_string(),
                    };
                    rows.push(ResultRow::residual(&check.report, false, Some(note)));
                } else {
                    rows.push(ResultRow::residual(&check.report, true, None));
                }
                for d in &check.diagnostics {
                    rows.push(ResultRow::residual(d, false, None));
                }
            }
            Err(Error::Singular { pivot, .. }) => rows.push(ResultRow::Skipped {
                check: label,
                tolerance: tol,
                reason: format!("singular operand (pivot {pivot:.1e})"),
            }),
            Err(e @ Error::Shape { .. }) => rows.push(ResultRow::Skipped {
                check: label,
                tolerance: tol,
                reason: e.to_string(),
            }),
            Err(e) => return Err(CliError::from_error(&label, e)),
        }
    }

    let report = RunReport {
        command: "verify-properties".into(),
        inputs: vec![path_str(a_path), path_str(b_path)],
        spec_sha256: None,
        engine: None,
        results: rows,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    let failed = report.results.iter().any(ResultRow::fails_gate);
    let text = if json {
        to_json(&report)
    } else {
        render_table(&report)
    };
    emit(out_path, &text, out)?;
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

fn format_float(x: f64) -> String {
    crate::matrix::format_entry(Complex64::new(x, 0.0))
}

pub fn cmd_spectrum(
    spec_path: &Path,
    engine: Engine,
    lanczos: &LanczosConfig,
    format: Format,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let start = Instant::now();
    let (spec, hash) = read_spec(spec_path)?;
    let n = spec.n_sites();
    let spectrum = match engine {
        Engine::Dense => {
            if n > DENSE_CAP {
                return Err(CliError::new(
                    EXIT_ENGINE,
                    format!(
                        "{n} sites exceed the dense capacity of {DENSE_CAP}; use --engine lanczos"
                    ),
                ));
            }
            let h = build_general(&spec).map_err(|e| CliError::from_error("build", e))?;
            eigh(&h, false).map_err(|e| CliError::from_error("eigh", e))?
        }
        Engine::Lanczos => {
            let op = spec_to_kronsum(&spec);
            match lanczos_extremal(&op, lanczos) {
                Ok(s) => s,
                Err(Error::Convergence {
                    iterations,
                    estimates,
                }) => {
                    let _ = writeln!(
                        err,
                        "best estimates after {iterations} iterations: {}",
                        estimates
                            .iter()
                            .map(|&x| format_float(x))
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    return Err(CliError::new(
                        EXIT_CONVERGENCE,
                        format!("lanczos did not converge after {iterations} iterations"),
                    ));
                }
                Err(e) => return Err(CliError::from_error("lanczos", e)),
            }
        }
    };
    let engine_name = match engine {
        Engine::Dense => "dense",
        Engine::Lanczos => "lanczos",
    };
    let text = match format {
        Format::Csv => {
            let mut s = format!("# spec_sha256={hash}\n# engine={engine_name}\nindex,eigenvalue\n");
            for (i, x) in spectrum.eigenvalues.iter().enumerate() {
                s.push_str(&format!("{i},{}\n", format_float(*x)));
            }
            s
        }
        Format::Json => {
            let tolerance = match engine {
                Engine::Dense => crate::linalg::JACOBI_OFF_TOL,
                Engine::Lanczos => lanczos.tol,
            };
            to_json(&RunReport {
                command: "spectrum".into(),
                inputs: vec![path_str(spec_path)],
                spec_sha256: Some(hash),
                engine: Some(engine_name.into()),
                results: vec![ResultRow::Spectrum {
                    check: "eigenvalues".into(),
                    tolerance,
                    engine: engine_name.into(),
                    dimension: spectrum.dimension,
                    eigenvalues: spectrum.eigenvalues.clone(),
                }],
                elapsed_seconds: start.elapsed().as_secs_f64(),
            })
        }
    };
    emit(out_path, &text, out)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_conserved(
    spec_path: &Path,
    tol: f64,
    json: bool,
    engine: ConservedEngine,
    probes: usize,
    seed: u64,
    anisotropy: Option<f64>,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let start = Instant::now();
    let (spec, hash) = read_spec(spec_path)?;
    let n = spec.n_sites();
    let dense = match engine {
        ConservedEngine::Auto => n <= AUTO_DENSE_MAX_SITES,
        ConservedEngine::Dense => true,
        ConservedEngine::Matfree => false,
    };
    if dense && n > DENSE_CAP {
        return Err(CliError::new(
            EXIT_ENGINE,
            format!("{n} sites exceed the dense capacity of {DENSE_CAP}; use --engine matfree"),
        ));
    }
    let ctx = |e| CliError::from_error("conserved", e);
    let delta = anisotropy.unwrap_or(0.0);

    let residuals: [(&str, f64); 3] = if dense {
        let mut h = build_general(&spec).map_err(ctx)?;
        if delta != 0.0 {
            let z = pauli(PauliAxis::Z);
            for edge in spec.couplings() {
                let zz = lift_pair(&z, edge.i(), &z, edge.j()).map_err(ctx)?;
                h.add_scaled(Complex64::new(delta, 0.0), &zz).map_err(ctx)?;
            }
        }
        let sz = total_component(PauliAxis::Z, n).map_err(ctx)?;
        let s2 = total_spin_squared(n).map_err(ctx)?;
        let norm = |a: &ComplexMatrix, b: &ComplexMatrix| {
            commutator(a, b).map(|c| c.frobenius_norm()).map_err(ctx)
        };
        [
            ("[H, S_z]", norm(&h, &sz)?),
            ("[H, S^2]", norm(&h, &s2)?),
            ("[S_z, S^2]", norm(&sz, &s2)?),
        ]
    } else {
        let mut h = spec_to_kronsum(&spec);
        if delta != 0.0 {
            let z = Factor::pauli(PauliAxis::Z);
            for edge in spec.couplings() {
                h.push(
                    KronTerm::on_sites(
                        Complex64::new(delta, 0.0),
                        n,
                        &[(edge.i().index(), z), (edge.j().index(), z)],
                    )
                    .map_err(ctx)?,
                )
                .map_err(ctx)?;
            }
        }
        let sz = KronSum::total_component(PauliAxis::Z, n).map_err(ctx)?;
        let s2 = KronSum::total_spin_squared(n).map_err(ctx)?;
        let mut worst = [0.0f64; 3];
        for p in 0..probes {
            let x = StateVector::random(n, seed.wrapping_add(p as u64)).map_err(ctx)?;
            worst[0] = worst[0].max(commutator_probe(&h, &sz, &x).map_err(ctx)?);
            worst[1] = worst[1].max(commutator_probe(&h, &s2, &x).map_err(ctx)?);
            worst[2] = worst[2].max(commutator_probe(&sz, &s2, &x).map_err(ctx)?);
        }
        [
            ("[H, S_z] x", worst[0]),
            ("[H, S^2] x", worst[1]),
            ("[S_z, S^2] x", worst[2]),
        ]
    };

    let rows: Vec<ResultRow> = residuals
        .iter()
        .map(|&(name, r)| ResultRow::residual(&ResidualReport::equal(name, r, tol), true, None))
        .collect();
    let report = RunReport {
        command: "conserved".into(),
        inputs: vec![path_str(spec_path)],
        spec_sha256: Some(hash),
        engine: Some(if dense { "dense" } else { "matfree" }.into()),
        results: rows,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    let failed = report.results.iter().any(ResultRow::fails_gate);
    let text = if json {
        to_json(&report)
    } else {
        render_table(&report)
    };
    emit(out_path, &text, out)?;
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

/// Operator timed by `bench`: the full isotropic chain, or exactly `terms`
/// nearest-neighbour exchange terms cycling over bonds and axes.
pub fn bench_operator(n: usize, terms: Option<usize>) -> crate::error::Result<KronSum> {
    match terms {
        None => Ok(spec_to_kronsum(&HamiltonianSpec::chain(n, 0.5, 1.0)?)),
        Some(t) => {
            let mut op = KronSum::new(n)?;
            for k in 0..t {
                let axis = PauliAxis::ALL[k % 3];
                let bond = (k / 3) % (n - 1) + 1;
                let f = Factor::pauli(axis);
                op.push(KronTerm::on_sites(
                    Complex64::new(1.0, 0.0),
                    n,
                    &[(bond, f), (bond + 1, f)],
                )?)?;
            }
            Ok(op)
        }
    }
}

/// Least-squares slope of `log2(t)` against `n`.
pub fn scaling_exponent(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(1e-12).log2()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

pub fn cmd_bench(
    n_list: &[usize],
    terms: Option<usize>,
    repeats: usize,
    json: bool,
    seed: u64,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if repeats == 0 {
        return Err(CliError::new(EXIT_USAGE, "--repeats must be at least 1"));
    }
    if n_list.is_empty() || n_list.iter().any(|&n| n < 2) {
        return Err(CliError::new(
            EXIT_USAGE,
            "--n-list values must be at least 2",
        ));
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for &n in n_list {
        let alloc_fail = |e: Error| match e {
            Error::Allocation { .. } | Error::InvalidSpec(_) => CliError::new(
                EXIT_CAPACITY,
                format!("cannot allocate a state for n = {n}: {e}"),
            ),
            other => CliError::from_error("bench", other),
        };
        let op = bench_operator(n, terms).map_err(alloc_fail)?;
        let x = StateVector::random(n, seed).map_err(alloc_fail)?;
        let mut times = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            let t0 = Instant::now();
            let y = op.matvec(&x).map_err(alloc_fail)?;
            times.push(t0.elapsed().as_secs_f64());
            drop(y);
        }
        times.sort_by(f64::total_cmp);
        let touched: u64 = op
            .terms()
            .iter()
            .map(|t| {
                let active = t.factors.iter().filter(|f| **f != Factor::Identity).count();
                (active.max(1) as u64) << n
            })
            .sum();
        points.push((n, times[0]));
        rows.push(ResultRow::Timing {
            check: format!("matvec n={n}"),
            tolerance: 0.0,
            n_sites: n,
            terms: op.terms().len(),
            amplitudes_touched: touched,
            seconds_min: times[0],
            seconds_median: times[times.len() / 2],
        });
    }
    if let Some(slope) = scaling_exponent(&points) {
        rows.push(ResultRow::Fit {
            check: "scaling exponent".into(),
            tolerance: 0.0,
            scaling_exponent: slope,
        });
    }
    let report = RunReport {
        command: "bench".into(),
        inputs: vec![],
        spec_sha256: None,
        engine: Some("matfree".into()),
        results: rows,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    let text = if json {
        to_json(&report)
    } else {
        render_table(&report)
    };
    emit(out_path, &text, out)?;
    Ok(EXIT_OK)
}
