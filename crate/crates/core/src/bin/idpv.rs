use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use idpv::cli::{run_path, Command, Format};
use idpv::manifest::Overrides;

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Check,
    Solve,
    Pv,
    Galois,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Structured,
}

/// Iterative differential modules: verification, trivialization and Galois groups.
#[derive(Parser)]
#[command(name = "idpv", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    manifest: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Fmt,
    /// Series truncation order N.
    #[arg(long)]
    order: Option<usize>,
    /// T-order K for the law checks.
    #[arg(long)]
    tdeg: Option<usize>,
    /// Monomial degree bound d.
    #[arg(long)]
    deg: Option<u32>,
    /// Coefficient degree bound e.
    #[arg(long = "coeff-deg")]
    coeff_deg: Option<usize>,
    /// Degree bound for the group equations.
    #[arg(long)]
    zdeg: Option<u32>,
    /// Expansion point c.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = match args.command {
        Cmd::Check => Command::Check,
        Cmd::Solve => Command::Solve,
        Cmd::Pv => Command::Pv,
        Cmd::Galois => Command::Galois,
    };
    let format = match args.format {
        Fmt::Text => Format::Text,
        Fmt::Structured => Format::Structured,
    };
    let overrides = Overrides {
        order: args.order,
        tdeg: args.tdeg,
        deg: args.deg,
        coeff_deg: args.coeff_deg,
        zdeg: args.zdeg,
        point: args.point,
    };
    let outcome = run_path(command, &args.manifest, &overrides);
    print!("{}", outcome.render(format));
    ExitCode::from(outcome.exit_code as u8)
}
