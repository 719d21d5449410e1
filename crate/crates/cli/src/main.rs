#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod failure;

use failure::Failure;

#[derive(Parser)]
#[command(name = "hodge", version, about = "Vertex and edge Laplacians of weighted graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,

    /// Zero and grouping tolerance, scaled by max(1, max |A_ij|)
    #[arg(long, global = true, default_value_t = graph_hodge::DEFAULT_TOLERANCE)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormSel {
    #[value(name = "0")]
    Vertex,
    #[value(name = "1")]
    Edge,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyCmd {
    /// Dirichlet spectral gap of the window
    Gap,
    /// a²/4 gap certificate for a witness A
    Cert,
    /// χ_n cutoff gradient constant
    Chi,
    /// Shell series Σ 1/√(a_n⁺ + a_{n+1}⁻)
    Bgj,
    /// Summability of Σ 1/c(e)
    Kerdelta,
    /// Closed edge form φ = a/c on the window
    Harmonic,
    /// Weyl residuals over N, 2N, 4N
    Weyl,
    /// Harmonic forms on the odd cycles of G2
    G2basis,
    /// The window as a graph file
    Truncate,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of Δ₀ and/or Δ₁ grouped by multiplicity
    Spectra {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = FormSel::Both)]
        form: FormSel,
    },
    /// Check that Δ₀ and Δ₁ share their nonzero spectrum and that the
    /// kernels match the component count and circuit rank
    Verify { graph: PathBuf },
    /// Components, circuit rank and a fundamental cycle basis
    Rank { graph: PathBuf },
    /// Harmonic 1-forms φ = ±1/c on each fundamental cycle
    Harmonic { graph: PathBuf },
    /// Analyses of an infinite family on Z (builtin name or family file)
    Family {
        family: String,
        #[arg(long, value_enum)]
        cmd: FamilyCmd,
        /// Window radius
        #[arg(short = 'N', long = "radius", default_value_t = 50)]
        n: usize,
        #[arg(long)]
        alpha: Option<f64>,
        /// Value of φ on the edge (0, 1); defaults to 1/c(0,1)
        #[arg(long)]
        phi0: Option<f64>,
        /// Witness rule A(n, n+1) in n for `cert`
        #[arg(long)]
        witness: Option<String>,
        /// Spectral parameter for `weyl` on vertex functions of a
        /// unit-weight family; without it, `weyl` tests λ = 0 on edge forms
        #[arg(long)]
        lambda: Option<f64>,
    },
}

pub struct Report {
    pub json: serde_json::Value,
    pub table: String,
    pub csv: Option<String>,
    pub status: u8,
}

fn run(cli: Cli) -> Result<Report, Failure> {
    if !(cli.tol > 0.0) {
        return Err(Failure::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    match cli.cmd {
        Command::Spectra { graph, form } => commands::spectra(&graph, form, cli.tol),
        Command::Verify { graph } => commands::verify(&graph, cli.tol),
        Command::Rank { graph } => commands::rank(&graph),
        Command::Harmonic { graph } => commands::harmonic(&graph),
        Command::Family {
            family,
            cmd,
            n,
            alpha,
            phi0,
            witness,
            lambda,
        } => commands::family(&commands::FamilyArgs {
            family,
            cmd,
            n,
            alpha,
            phi0,
            witness,
            lambda,
            tol: cli.tol,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let out = cli.out.clone();
    let report = match run(cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {f}");
            return ExitCode::from(f.code());
        }
    };
    let text = match format {
        Format::Table => report.table,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => match report.csv {
            Some(csv) => csv,
            None => {
                eprintln!("error: csv output is only available for eigenvalue lists (spectra)");
                return ExitCode::from(2);
            }
        },
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.status)
}
