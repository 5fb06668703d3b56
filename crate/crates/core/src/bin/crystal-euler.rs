use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use crystal_euler::assemble::Specialization;
use crystal_euler::cli::{execute_command, parse_group_spec, Command, Format, Options};

/// Equivariant Euler classes of proper classifying spaces for K ⋉ Z^n.
#[derive(Parser, Debug)]
#[command(name = "crystal-euler", version)]
struct Args {
    /// Command to run.
    #[arg(value_enum)]
    command: Command,
    /// Group specification (JSON). Not needed for `selftest`.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Maximum point group order.
    #[arg(long)]
    order_cap: Option<usize>,
    /// Maximum number of first cohomology classes enumerated per subgroup.
    #[arg(long)]
    h1_cap: Option<u64>,
    /// Process point classes on a thread pool.
    #[arg(long)]
    parallel: bool,
    /// Single specialization for `specialize` (orbifold, quotient, string).
    #[arg(long)]
    map: Option<Specialization>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let options = Options {
        format: args.format,
        order_cap: args.order_cap,
        h1_cap: args.h1_cap,
        parallel: args.parallel,
        map: args.map,
    };
    let spec = match &args.input {
        None => None,
        Some(path) => match std::fs::read_to_string(path) {
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
            Ok(text) => match parse_group_spec(&text) {
                Ok(s) => Some(s),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            },
        },
    };
    match execute_command(args.command, spec.as_ref(), &options) {
        Ok(report) => {
            print!("{}", report.output);
            if report.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
