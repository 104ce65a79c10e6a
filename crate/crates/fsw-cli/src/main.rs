//! `fswcalc`: evaluate families invariants from a JSON job specification.
//!
//! Exit codes: 0 when every cross-check verdict is equal, 1 on any
//! mismatch, 2 on input or evaluation errors.

use clap::{Parser, ValueEnum};
use fsw_cli::run::{exit_code, run};
use fsw_cli::schema::{parse_spec, OutputFormat, Route};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fswcalc",
    version,
    about = "Exact calculator for families Seiberg-Witten invariants of Kahler families"
)]
struct Args {
    /// Job specification file; reads stdin when omitted.
    #[arg(long, value_name = "PATH")]
    spec: Option<PathBuf>,
    /// Evaluation route (repeatable); overrides the file's routes.
    #[arg(long = "route", value_name = "NAME")]
    routes: Vec<RouteArg>,
    /// Inclusive range A..B of n values; overrides the file's n_range.
    #[arg(long, value_name = "A..B", value_parser = parse_range)]
    n: Option<NRange>,
    /// Report format; overrides the file's output setting.
    #[arg(long, value_name = "FORMAT")]
    format: Option<FormatArg>,
    /// Evaluate every route and report cross-check verdicts.
    #[arg(long)]
    check: bool,
    /// Include the per-m Gamma decomposition in the report.
    #[arg(long)]
    trace: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RouteArg {
    Closed,
    Triple,
    Pushforward,
    #[value(name = "family_form")]
    FamilyForm,
}

impl From<RouteArg> for Route {
    fn from(arg: RouteArg) -> Route {
        match arg {
            RouteArg::Closed => Route::Closed,
            RouteArg::Triple => Route::Triple,
            RouteArg::Pushforward => Route::Pushforward,
            RouteArg::FamilyForm => Route::FamilyForm,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug)]
struct NRange(u32, u32);

fn parse_range(text: &str) -> Result<NRange, String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| "expected an inclusive range A..B".to_string())?;
    let lo = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    Ok(NRange(lo, hi))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn execute(args: Args) -> Result<u8, String> {
    let source = match &args.spec {
        Some(path) => std::fs::read(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
        None => {
            let mut buffer = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buffer)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            buffer
        }
    };
    let mut job = parse_spec(&source).map_err(|e| e.to_string())?;
    if let Some(NRange(lo, hi)) = args.n {
        job.n_range = [lo, hi];
    }
    if args.check {
        job.routes = Route::ALL.to_vec();
    } else if !args.routes.is_empty() {
        job.routes = args.routes.iter().map(|&r| r.into()).collect();
    }
    if let Some(format) = args.format {
        job.output = match format {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    job.validate().map_err(|e| e.to_string())?;
    let report = run(&job, args.trace).map_err(|e| e.to_string())?;
    let rendered = match job.output {
        OutputFormat::Text => report.render_text(),
        OutputFormat::Json => report.render_json(),
    };
    print!("{rendered}");
    Ok(exit_code(&report))
}
