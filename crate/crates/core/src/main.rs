use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twistr::liealg::Family;
use twistr::report::{self, ExportWhat, Format, Mode, RunConfig};
use twistr::Error;

#[derive(Parser)]
#[command(
    name = "twistr",
    version,
    about = "Exact R-matrices for twisted quantum affine algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every verification stage and write a report bundle.
    Verify(Common),
    /// Write one object to a file.
    Export {
        #[arg(value_enum)]
        what: WhatArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long, value_enum, default_value = "numeric")]
    mode: ModeArg,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long, env = "TWISTR_OUT", default_value = "twistr-out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A2even,
    A2odd,
    D2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Numeric,
    #[value(alias = "symbolic-u")]
    Symbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Graph,
    Eigenvalues,
    Rmatrix,
    Rep,
}

impl Common {
    fn config(&self) -> twistr::Result<RunConfig> {
        let family = match self.family {
            FamilyArg::A2even => Family::A2Even,
            FamilyArg::A2odd => Family::A2Odd,
            FamilyArg::D2 => Family::D2,
        };
        let pair = report::pair_from_params(family, self.l, (self.k, self.r), (self.a, self.b))?;
        if self.samples == 0 {
            return Err(Error::Validation("--samples must be at least 1".into()));
        }
        Ok(RunConfig {
            pair,
            mode: match self.mode {
                ModeArg::Numeric => Mode::Numeric,
                ModeArg::Symbolic => Mode::Symbolic,
            },
            seed: self.seed,
            samples: self.samples,
        })
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Json => Format::Json,
            FormatArg::Dot => Format::Dot,
            FormatArg::Text => Format::Text,
        }
    }
}

fn usage(e: Error) -> ExitCode {
    eprintln!("twistr: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(c) => {
            let cfg = match c.config() {
                Ok(cfg) => cfg,
                Err(e) => return usage(e),
            };
            if !matches!(c.format, FormatArg::Json) {
                return usage(Error::Validation("verify writes JSON reports only".into()));
            }
            let bundle = report::run_verify(&cfg);
            if let Err(e) = bundle.write(&c.out) {
                eprintln!("twistr: {e}");
                return ExitCode::FAILURE;
            }
            for s in &bundle.summary.stages {
                let status = serde_json::to_value(s.status).expect("status serializes");
                let status = status.as_str().unwrap_or_default();
                match &s.note {
                    Some(n) if s.status == report::Status::Skipped => {
                        println!("{:<14} {n}", s.stage)
                    }
                    Some(n) => println!("{:<14} {status}: {n}", s.stage),
                    None => println!("{:<14} {status}", s.stage),
                }
            }
            println!("report: {}", c.out.join("report.json").display());
            if bundle.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Export { what, common } => {
            let cfg = match common.config() {
                Ok(cfg) => cfg,
                Err(e) => return usage(e),
            };
            let what = match what {
                WhatArg::Graph => ExportWhat::Graph,
                WhatArg::Eigenvalues => ExportWhat::Eigenvalues,
                WhatArg::Rmatrix => ExportWhat::Rmatrix,
                WhatArg::Rep => ExportWhat::Rep,
            };
            let (name, body) = match report::export(&cfg, what, common.format()) {
                Ok(x) => x,
                Err(e @ Error::Validation(_)) => return usage(e),
                Err(e) => {
                    eprintln!("twistr: {e}");
                    return ExitCode::FAILURE;
                }
            };
            let path = common.out.join(name);
            let written =
                std::fs::create_dir_all(&common.out).and_then(|_| std::fs::write(&path, body));
            if let Err(e) = written {
                eprintln!("twistr: {e}");
                return ExitCode::FAILURE;
            }
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
    }
}
