use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use e7sym::algebra::{format_unit_table, unit_table, Algebra};
use e7sym::conformal::{bracket, e7_basis, freudenthal_action};
use e7sym::cubie::{assemble_cube, naive_action, sided_action};
use e7sym::harness::{export_structure_constants, summarize, verify_all, write_report, RunConfig, Status, Suite};
use e7sym::io::{cube_to_json, freudvec_to_string, parse_cube, parse_freudvec, parse_herm, parse_theta};
use e7sym::linalg::close_under_bracket;

#[derive(Parser)]
#[command(name = "e7sym", version, about = "Exact e7 computations over R, C, H and O")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the unit multiplication table of a Cayley-Dickson level.
    MulTable {
        #[arg(long)]
        level: u8,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Evaluate det or trace of a Hermitian matrix read from JSON.
    Invariant {
        #[arg(value_enum)]
        which: Invariant,
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the bracket-closure dimension of the e7 basis.
    Dims {
        #[arg(long)]
        algebra: Algebra,
    },
    /// Apply Θ to P and print the image.
    Act {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        p: PathBuf,
    },
    /// Commutator of two Θ, in e7 basis coordinates.
    Bracket {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Cube assembly and cube actions.
    Cube {
        #[command(subcommand)]
        command: CubeCommand,
    },
    /// Run verification suites and emit a JSON-lines report.
    Verify {
        #[arg(long = "algebra")]
        algebras: Vec<Algebra>,
        #[arg(long = "suite", value_parser = parse_suite)]
        suites: Vec<Suite>,
        #[arg(long, env = "E7SYM_SEED", default_value_t = e7sym::harness::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = e7sym::harness::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Export structure constants of the e7 basis as CSV.
    ExportSc {
        #[arg(long)]
        algebra: Algebra,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CubeCommand {
    Assemble {
        #[arg(long)]
        p: PathBuf,
    },
    Act {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        cube: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    Det,
    Trace,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Naive,
    Sided,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::MulTable { level, format } => {
            let alg = Algebra::from_level(level)?;
            match format {
                TableFormat::Text => write!(out, "{}", format_unit_table(alg))?,
                TableFormat::Json => {
                    let k = alg.dim();
                    let rows: Vec<Vec<_>> = unit_table(alg).chunks(k).map(|r| r.to_vec()).collect();
                    writeln!(out, "{}", serde_json::to_string(&rows)?)?;
                }
            }
        }
        Command::Invariant { which, input } => {
            let x = parse_herm(&read(&input)?)?;
            let v = match which {
                Invariant::Det => x.det(),
                Invariant::Trace => x.trace(),
            };
            writeln!(out, "{}", v.to_fraction_string())?;
        }
        Command::Dims { algebra } => {
            let mb = e7_basis(algebra)?.matrixized()?;
            writeln!(out, "{}", close_under_bracket(&mb.mats)?.dim())?;
        }
        Command::Act { theta, p } => {
            let theta = parse_theta(&read(&theta)?)?;
            let p = parse_freudvec(&read(&p)?)?;
            writeln!(out, "{}", freudvec_to_string(&freudenthal_action(&theta, &p)?))?;
        }
        Command::Bracket { a, b } => {
            let (a, b) = (parse_theta(&read(&a)?)?, parse_theta(&read(&b)?)?);
            let alg = a.algebra();
            let comm = bracket(&a, &b)?;
            let basis = e7_basis(alg)?;
            match basis.matrixized()?.coordinates(&comm.mat)? {
                None => writeln!(out, "outside span")?,
                Some(coords) => {
                    let nz: Vec<_> = coords
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| json!({"index": i, "label": basis.labels[i], "coeff": c}))
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&nz)?)?;
                }
            }
        }
        Command::Cube { command } => match command {
            CubeCommand::Assemble { p } => {
                let cube = assemble_cube(&parse_freudvec(&read(&p)?)?);
                writeln!(out, "{}", serde_json::to_string(&cube_to_json(&cube))?)?;
            }
            CubeCommand::Act { mode, theta, cube } => {
                let theta = parse_theta(&read(&theta)?)?;
                let cube = parse_cube(&read(&cube)?)?;
                let image = match mode {
                    Mode::Naive => naive_action(&theta, &cube)?,
                    Mode::Sided => sided_action(&theta, &cube)?,
                };
                writeln!(out, "{}", serde_json::to_string(&cube_to_json(&image))?)?;
            }
        },
        Command::Verify {
            algebras,
            suites,
            seed,
            samples,
            report,
        } => {
            let mut config = RunConfig {
                seed,
                samples,
                ..RunConfig::default()
            };
            if !algebras.is_empty() {
                config.algebras = algebras;
            }
            if !suites.is_empty() {
                config.suites = suites;
            }
            let results = verify_all(&config);
            match report {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_report(&results, io::BufWriter::new(file))?;
                    for r in &results {
                        writeln!(out, "{:<8} {:<12} {}  {}", status_word(r.status), r.check_id, r.algebra.symbol(), r.detail)?;
                    }
                    let s = summarize(&results);
                    writeln!(out, "{} checks: {} pass, {} fail, {} witness", s.total, s.pass, s.fail, s.witness)?;
                }
                None => write_report(&results, &mut out)?,
            }
            if results.iter().any(|r| r.status == Status::Fail) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::ExportSc { algebra, out: path } => {
            let sc = export_structure_constants(algebra)?;
            if sc.entries.is_empty() {
                bail!("no structure constants produced");
            }
            let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            sc.write_csv(io::BufWriter::new(file))?;
            writeln!(out, "wrote {} nonzero constants for a {}-dimensional basis", sc.entries.len(), sc.dim)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Witness => "WITNESS",
    }
}
