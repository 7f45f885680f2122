//! Command-line surface. Reports go to `out` as JSON, diagnostics to `err`.
//!
//! Exit codes: 0 on success or a true verdict, 1 on a false verdict, 2 on
//! bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::eigstructure::{complete_eigenstructure, verify_theorem, Side};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::minbasis::{
    default_cap, forney_check, left_kernel_minimal_basis_with_cap, right_kernel_minimal_basis_with_cap,
};
use crate::parse::{parse_scalar, Problem};
use crate::random::{rng, theorem_instance, InstanceKind};
use crate::ratmap::{RationalMap, Target};
use crate::report::{to_json, EigReport, MinBasisReport, PreimageReport, SmithReport, TransformReport, VerifyReport};
use crate::smith::smith_form;

#[derive(Parser, Debug)]
#[command(name = "eigmap", version, about = "Eigenstructure of polynomial matrices under rational maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith form with unimodular transformers.
    Smith { file: PathBuf },
    /// Complete eigenstructure of the matrix.
    Eig { file: PathBuf },
    /// The transformed matrix `d(y)^g P(n(y)/d(y))`.
    Transform { file: PathBuf },
    /// Preimages of a point under the map.
    Preimage {
        file: PathBuf,
        /// A field element or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Minimal basis of the left or right kernel.
    Minbasis {
        file: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Largest vector degree to search.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Check the transformed eigenstructure against the prediction.
    Verify { file: PathBuf },
    /// Verify randomly generated instances.
    Selftest {
        #[arg(long, default_value_t = 40)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, num_args = 2, value_names = ["R", "C"], default_values_t = [3, 4])]
        max_dim: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        /// Largest degree of the map.
        #[arg(long, default_value_t = 3)]
        max_map_deg: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestFailure {
    pub case: usize,
    pub field: String,
    pub kind: String,
    pub grade: usize,
    pub matrix: Vec<Vec<String>>,
    pub n: String,
    pub d: String,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<SelftestFailure>,
}

/// Parses `args` (without the program name) and runs the command.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("eigmap")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load(path: &PathBuf) -> Result<Problem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidProblem(format!("cannot read {}: {e}", path.display())))?;
    Problem::from_toml(&text)
}

fn require_map(p: &Problem) -> Result<&RationalMap> {
    p.map.as_ref().ok_or_else(|| Error::InvalidProblem("this command needs a [map] section".into()))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::Internal(format!("cannot write report: {e}")))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Smith { file } => {
            let p = load(&file)?;
            emit(out, &to_json(&SmithReport::new(&smith_form(&p.matrix), &p.x_var)))?;
        }
        Command::Eig { file } => {
            let p = load(&file)?;
            emit(out, &to_json(&EigReport::new(&complete_eigenstructure(&p.matrix)?, &p.x_var)))?;
        }
        Command::Transform { file } => {
            let p = load(&file)?;
            let map = require_map(&p)?;
            let q = map.phi_matrix(&p.matrix)?;
            let bound = map.degree_bound(&p.matrix)?;
            emit(out, &to_json(&TransformReport::new(&q, &bound, &p.y_var)))?;
        }
        Command::Preimage { file, at } => {
            let p = load(&file)?;
            let map = require_map(&p)?;
            let target = match at.trim() {
                "inf" => Target::Infinity,
                v => Target::Finite(parse_scalar(v, p.field)?),
            };
            emit(out, &to_json(&PreimageReport::new(&map.preimage_set(&target)?, &p.y_var)))?;
        }
        Command::Minbasis { file, side, cap } => {
            let p = load(&file)?;
            let cap = cap.unwrap_or_else(|| default_cap(&p.matrix));
            let (side, basis, forney) = match side {
                SideArg::Right => {
                    let b = right_kernel_minimal_basis_with_cap(&p.matrix, cap)?;
                    let f = forney_check(&p.matrix, &b.vectors)?;
                    (Side::Right, b, f)
                }
                SideArg::Left => {
                    let b = left_kernel_minimal_basis_with_cap(&p.matrix, cap)?;
                    let f = forney_check(&p.matrix.transpose(), &b.vectors)?;
                    (Side::Left, b, f)
                }
            };
            emit(out, &to_json(&MinBasisReport::new(side, &basis, &forney, &p.x_var)))?;
        }
        Command::Verify { file } => {
            let p = load(&file)?;
            let report = verify_theorem(&p.matrix, require_map(&p)?)?;
            emit(out, &to_json(&VerifyReport::new(&report, &p.x_var, &p.y_var)))?;
            return Ok(if report.verdict { 0 } else { 1 });
        }
        Command::Selftest { cases, seed, max_dim, max_deg, max_map_deg } => {
            let report = selftest(cases, seed, (max_dim[0].max(1), max_dim[1].max(1)), max_deg.max(1), max_map_deg.max(1));
            emit(out, &to_json(&report))?;
            return Ok(if report.failures.is_empty() { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Alternates the rationals and `F_7`, cycling through the instance kinds.
pub fn selftest(cases: usize, seed: u64, max_dim: (usize, usize), max_deg: usize, max_g: usize) -> SelftestReport {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let field = if case % 2 == 0 { Field::Rationals } else { Field::Prime(7) };
        let kind = InstanceKind::ALL[(case / 2) % InstanceKind::ALL.len()];
        let t = theorem_instance(&mut r, field, max_dim.0, max_dim.1, max_deg, max_g, kind);
        let error = match verify_theorem(&t.p, &t.map) {
            Ok(rep) if rep.verdict => continue,
            Ok(_) => None,
            Err(e) => Some(e.to_string()),
        };
        failures.push(SelftestFailure {
            case,
            field: field.to_string(),
            kind: format!("{kind:?}"),
            grade: t.p.grade(),
            matrix: t.p.to_rows().iter().map(|row| row.iter().map(|e| e.display("x").to_string()).collect()).collect(),
            n: t.map.n().display("y").to_string(),
            d: t.map.d().display("y").to_string(),
            error,
        });
    }
    SelftestReport { seed, cases, passed: cases - failures.len(), failures }
}
