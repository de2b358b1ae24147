//! Subcommand implementations for the `buresgeo` binary.
//!
//! Every command renders its report to a `String`; `main` decides where it
//! goes and maps failures to exit codes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use buresgeo_core::closedform::{qubit_fidelity, qubit_orbit, qubit_state, werner_root_fidelity};
use buresgeo_core::random::random_density;
use buresgeo_core::sun::{algebra_report, anticommutator_residual, AlgebraReport};
use buresgeo_core::{
    bloch_from_density, bures, characteristic_invariants, generator_basis, geodesic_point,
    geometric_mean_operator, root_fidelity, solve_tangent_g, werner, BlochVector, Complex64,
    ComplexMatrix, DensityMatrix, WernerKind,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "buresgeo",
    version,
    about = "Bures geodesics, fidelities and su(N) tangent generators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Tolerance for the numerical gates of the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized trials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root fidelity, Bures angle and Bures distance of two states.
    Fidelity { state1: PathBuf, state2: PathBuf },
    /// Sample the geodesic between two states.
    Geodesic {
        state1: PathBuf,
        state2: PathBuf,
        /// Points on `[0, s*]`, endpoints included.
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Root fidelity and arclength between the GHZ and W Werner states over a p-grid.
    WernerSweep {
        /// Grid points on `[0, 1]`.
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Closed-form qubit geodesic against the generic pipeline.
    QubitOrbit {
        /// Bloch vector of the start state, `x1,x2,x3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        /// Bloch vector of the end state.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
        /// Points on `[0, s*]`, endpoints included.
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Solve G rho + rho G = rho_dot for G in Bloch coordinates.
    SolveG {
        /// Hilbert-space dimension.
        #[arg(long)]
        n: usize,
        /// Bloch coordinates of the state, N^2-1 comma-separated values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        /// Bloch velocity, N^2-1 comma-separated values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xdot: Vec<f64>,
    },
    /// Characteristic-polynomial invariants of a state.
    Invariants { state: PathBuf },
    /// Check the su(N) algebra identities and random tangent solves.
    SunCheck {
        /// Dimensions to check.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3, 4])]
        dims: Vec<usize>,
        /// Random tangent solves per dimension.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// Failure of a command, carrying the exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl From<buresgeo_core::Error> for CliError {
    fn from(e: buresgeo_core::Error) -> Self {
        let code = if e.is_validation() {
            EXIT_VALIDATION
        } else {
            EXIT_NUMERICAL
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Report plus an optional gate failure. The report is written either way.
pub struct Outcome {
    pub report: String,
    pub gate: Option<String>,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome { report, gate: None }
    }
}

/// Matrix file: `{"dim": N, "re": [[..]], "im": [[..]]}`; `im` may be omitted.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.nrows();
        MatrixFile {
            dim: n,
            re: (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let n = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !shape_ok(&self.re) || !(self.im.is_empty() || shape_ok(&self.im)) {
            return Err(CliError::validation(format!(
                "matrix file: re/im must be {n}x{n} arrays"
            )));
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| {
            let im = if self.im.is_empty() {
                0.0
            } else {
                self.im[i][j]
            };
            Complex64::new(self.re[i][j], im)
        }))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
    }

    pub fn read_state(path: &Path) -> Result<DensityMatrix, CliError> {
        let m = Self::read(path)?.to_matrix()?;
        DensityMatrix::new(m).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
    }
}

/// Rounds to 15 significant digits for JSON output.
pub fn round15(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    if !v.is_finite() {
        return v;
    }
    format!("{v:.14e}").parse().unwrap_or(v)
}

/// 17 significant digits for CSV output.
pub fn csv_number(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn jnum(v: f64) -> Value {
    json!(round15(v))
}

fn jvec(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| jnum(x)).collect())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// A table rendered as CSV or as a JSON array of row objects.
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|&v| csv_number(v)).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, &v)| (k.clone(), jnum(v)))
                            .collect::<serde_json::Map<_, _>>();
                        Value::Object(obj)
                    })
                    .collect();
                pretty(&Value::Array(rows))
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Fidelity { state1, state2 } => cmd_fidelity(state1, state2, c.format),
        Command::Geodesic {
            state1,
            state2,
            samples,
        } => cmd_geodesic(state1, state2, *samples, c.format, c.tol.unwrap_or(1e-9)),
        Command::WernerSweep { steps } => {
            cmd_werner_sweep(*steps, c.format, c.tol.unwrap_or(1e-10))
        }
        Command::QubitOrbit { x, y, samples } => {
            cmd_qubit_orbit(x, y, *samples, c.format, c.tol.unwrap_or(1e-9))
        }
        Command::SolveG { n, x, xdot } => cmd_solve_g(*n, x, xdot, c.tol.unwrap_or(1e-8)),
        Command::Invariants { state } => cmd_invariants(state, c.tol.unwrap_or(1e-10)),
        Command::SunCheck { dims, samples } => {
            cmd_sun_check(dims, *samples, c.seed, c.tol.unwrap_or(1e-9))
        }
    }
}

/// A single object in JSON; one header and one row in CSV.
pub fn cmd_fidelity(state1: &Path, state2: &Path, format: Format) -> Result<Outcome, CliError> {
    let a = MatrixFile::read_state(state1)?;
    let b = MatrixFile::read_state(state2)?;
    let s = bures(&a, &b)?;
    let report = match format {
        Format::Json => pretty(&json!({
            "root_fidelity": jnum(s.root_fidelity),
            "bures_angle": jnum(s.bures_angle),
            "bures_distance": jnum(s.bures_distance),
        })),
        Format::Csv => Table {
            columns: ["root_fidelity", "bures_angle", "bures_distance"]
                .map(String::from)
                .to_vec(),
            rows: vec![vec![s.root_fidelity, s.bures_angle, s.bures_distance]],
        }
        .render(format),
    };
    Ok(Outcome::ok(report))
}

/// Columns: `s, root_fidelity_to_start, trace, purity, eigenvalue_0..`, and
/// `bloch_x, bloch_y, bloch_z` for qubits.
pub fn cmd_geodesic(
    state1: &Path,
    state2: &Path,
    samples: usize,
    format: Format,
    tol: f64,
) -> Result<Outcome, CliError> {
    if samples < 2 {
        return Err(CliError::validation("--samples must be at least 2"));
    }
    let a = MatrixFile::read_state(state1)?;
    let b = MatrixFile::read_state(state2)?;
    let path = geometric_mean_operator(&a, &b)?;
    let n = a.dim();
    let basis = if n == 2 {
        Some(generator_basis(2)?)
    } else {
        None
    };
    let params = path.sample_parameters(samples);
    let rows: Vec<Result<Vec<f64>, CliError>> = params
        .par_iter()
        .map(|&s| {
            let rho = geodesic_point(&path, s)?;
            let mut row = vec![s, root_fidelity(&a, &rho)?, rho.trace(), rho.purity()];
            row.extend(rho.eigen()?.eigenvalues);
            if let Some(basis) = &basis {
                row.extend_from_slice(bloch_from_density(&rho, basis)?.coords());
            }
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut columns: Vec<String> = ["s", "root_fidelity_to_start", "trace", "purity"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    columns.extend((0..n).map(|i| format!("eigenvalue_{i}")));
    if n == 2 {
        columns.extend(
            ["bloch_x", "bloch_y", "bloch_z"]
                .iter()
                .map(|s| s.to_string()),
        );
    }

    let mut gate = None;
    for row in &rows {
        let (s, fid, trace) = (row[0], row[1], row[2]);
        if (trace - 1.0).abs() > 1e-10 {
            gate = Some(format!("trace {trace} at s = {s} deviates from 1"));
            break;
        }
        if !path.is_orthogonal() && (fid - s.cos()).abs() > tol {
            gate = Some(format!("root fidelity {fid} at s = {s} differs from cos s"));
            break;
        }
    }
    let table = Table { columns, rows };
    Ok(Outcome {
        report: table.render(format),
        gate,
    })
}

/// Columns: `p, root_fidelity, s_star_over_half_pi, root_fidelity_closed_form`.
pub fn werner_sweep_rows(steps: usize) -> Result<Vec<[f64; 4]>, CliError> {
    if steps < 2 {
        return Err(CliError::validation("--steps must be at least 2"));
    }
    let rows: Vec<Result<[f64; 4], CliError>> = (0..steps)
        .into_par_iter()
        .map(|k| {
            let p = k as f64 / (steps - 1) as f64;
            let g = werner(WernerKind::Ghz, p)?;
            let w = werner(WernerKind::W, p)?;
            let f = root_fidelity(&g, &w)?;
            let closed = werner_root_fidelity(p, p)?;
            Ok([p, f, f.acos() / std::f64::consts::FRAC_PI_2, closed])
        })
        .collect();
    rows.into_iter().collect()
}

pub fn cmd_werner_sweep(steps: usize, format: Format, tol: f64) -> Result<Outcome, CliError> {
    let rows = werner_sweep_rows(steps)?;
    let gate = rows
        .iter()
        .find(|r| r[0] < 1.0 && (r[1] - r[3]).abs() > tol)
        .map(|r| {
            format!(
                "spectral {} and closed-form {} disagree at p = {}",
                r[1], r[3], r[0]
            )
        });
    let table = Table {
        columns: [
            "p",
            "root_fidelity",
            "s_star_over_half_pi",
            "root_fidelity_closed_form",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows: rows.iter().map(|r| r.to_vec()).collect(),
    };
    Ok(Outcome {
        report: table.render(format),
        gate,
    })
}

fn vec3(v: &[f64], name: &str) -> Result<[f64; 3], CliError> {
    <[f64; 3]>::try_from(v)
        .map_err(|_| CliError::validation(format!("--{name} needs 3 components")))
}

/// Columns: `s, r_x, r_y, r_z, pipeline_x, pipeline_y, pipeline_z, deviation`.
pub fn cmd_qubit_orbit(
    x: &[f64],
    y: &[f64],
    samples: usize,
    format: Format,
    tol: f64,
) -> Result<Outcome, CliError> {
    if samples < 2 {
        return Err(CliError::validation("--samples must be at least 2"));
    }
    let x = vec3(x, "x")?;
    let y = vec3(y, "y")?;
    let basis = generator_basis(2)?;
    let s_star = qubit_fidelity(&x, &y)?.acos();
    let path = geometric_mean_operator(&qubit_state(&x)?, &qubit_state(&y)?)?;
    let mut rows = Vec::with_capacity(samples);
    for k in 0..samples {
        let s = if k == samples - 1 {
            s_star
        } else {
            s_star * k as f64 / (samples - 1) as f64
        };
        let r = qubit_orbit(&x, &y, s)?;
        let generic = bloch_from_density(&geodesic_point(&path, s.min(path.s_star()))?, &basis)?;
        let g = generic.coords();
        let dev = (0..3).map(|i| (r[i] - g[i]).abs()).fold(0.0, f64::max);
        rows.push(vec![s, r[0], r[1], r[2], g[0], g[1], g[2], dev]);
    }
    let gate = rows.iter().find(|r| r[7] > tol).map(|r| {
        format!(
            "closed form deviates from the generic geodesic by {} at s = {}",
            r[7], r[0]
        )
    });
    let table = Table {
        columns: [
            "s",
            "r_x",
            "r_y",
            "r_z",
            "pipeline_x",
            "pipeline_y",
            "pipeline_z",
            "deviation",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        rows,
    };
    Ok(Outcome {
        report: table.render(format),
        gate,
    })
}

pub fn cmd_solve_g(n: usize, x: &[f64], xdot: &[f64], tol: f64) -> Result<Outcome, CliError> {
    let basis = generator_basis(n)?;
    let x = BlochVector::new(n, x.to_vec())?;
    let sol = solve_tangent_g(&x, xdot, &basis)?;
    let report = pretty(&json!({
        "g0": jnum(sol.generator.g0),
        "g": jvec(&sol.generator.g),
        "residual": jnum(sol.residual),
        "condition": jnum(sol.condition),
    }));
    let gate = (sol.residual > tol)
        .then(|| format!("reconstruction residual {:e} exceeds {tol:e}", sol.residual));
    Ok(Outcome { report, gate })
}

fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![1.0];
    for &v in values {
        e.push(0.0);
        for k in (1..e.len()).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e.remove(0);
    e
}

pub fn cmd_invariants(state: &Path, tol: f64) -> Result<Outcome, CliError> {
    let rho = MatrixFile::read_state(state)?;
    let inv = characteristic_invariants(&rho);
    let eig = rho.eigen()?.eigenvalues;
    let brute = elementary_symmetric(&eig);
    let dev = inv
        .iter()
        .zip(&brute)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let report = pretty(&json!({
        "invariants": jvec(&inv),
        "eigenvalues": jvec(&eig),
        "from_eigenvalues": jvec(&brute),
        "max_deviation": jnum(dev),
    }));
    let gate =
        (dev > tol).then(|| format!("invariants deviate from eigenvalue polynomials by {dev:e}"));
    Ok(Outcome { report, gate })
}

fn report_json(r: &AlgebraReport) -> Value {
    json!({
        "dim": r.dim,
        "trace_orthogonality": jnum(r.trace_orthogonality),
        "f_antisymmetry": jnum(r.f_antisymmetry),
        "d_symmetry": jnum(r.d_symmetry),
        "completeness": jnum(r.completeness),
        "closure": jnum(r.closure),
        "traceless_hermitian": jnum(r.traceless_hermitian),
    })
}

/// Algebra identities (gated at `1e-12`) and `samples` random tangent solves
/// per dimension (gated at `tol`).
pub fn cmd_sun_check(
    dims: &[usize],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut gate = None;
    for &n in dims {
        let basis = generator_basis(n)?;
        let report = algebra_report(&basis);
        if report.worst() > 1e-12 && gate.is_none() {
            gate = Some(format!(
                "su({n}) identities violated by {:e}",
                report.worst()
            ));
        }
        let mut worst_residual = 0.0f64;
        for _ in 0..samples {
            let rho = random_density(n, &mut rng);
            let x = bloch_from_density(&rho, &basis)?;
            let xdot: Vec<f64> = buresgeo_core::random::random_hermitian(n, &mut rng)
                .as_matrix()
                .iter()
                .take(basis.len())
                .map(|z| z.re)
                .collect();
            let sol = solve_tangent_g(&x, &xdot, &basis)?;
            let r = anticommutator_residual(&sol.generator, &rho, &xdot, &basis);
            worst_residual = worst_residual.max(r);
        }
        if worst_residual > tol && gate.is_none() {
            gate = Some(format!(
                "tangent solve residual {worst_residual:e} in dimension {n}"
            ));
        }
        let mut v = report_json(&report);
        v["tangent_samples"] = json!(samples);
        v["tangent_max_residual"] = jnum(worst_residual);
        out.push(v);
    }
    Ok(Outcome {
        report: pretty(&Value::Array(out)),
        gate,
    })
}
