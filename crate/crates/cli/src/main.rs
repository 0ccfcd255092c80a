use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use latcut_cli::{parse_instance, run_command, Command, Options};
use latcut_core::field::parse_scalar;
use latcut_core::Scalar;

/// Lattice-free bodies and the cuts they define.
#[derive(Parser, Debug)]
#[command(name = "latcut", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Instance file.
    #[arg(long, short)]
    instance: PathBuf,
    /// Search box `lo..hi`; once for a cube, or once per coordinate.
    #[arg(long = "box", value_name = "LO..HI", value_parser = parse_bounds)]
    boxes: Vec<(Scalar, Scalar)>,
    /// Write the SVG of `plot` here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn parse_bounds(s: &str) -> Result<(Scalar, Scalar), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo = parse_scalar(lo.trim()).map_err(|e| e.message)?;
    let hi = parse_scalar(hi.trim()).map_err(|e| e.message)?;
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.instance) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.instance.display());
            return ExitCode::from(2);
        }
    };
    let report = parse_instance(&text)
        .map_err(Into::into)
        .and_then(|inst| run_command(cli.command, &inst, &Options { boxes: cli.boxes }));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(svg) = &report.svg {
        match &cli.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, svg) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => print!("{svg}"),
        }
    }
    if report.svg.is_none() || cli.out.is_some() {
        print!("{}", report.render());
    }
    ExitCode::from(report.exit_code as u8)
}
