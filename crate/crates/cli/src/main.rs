use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::Value;

use zeromap_cli::{error_response, run_json, Failure, Options};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

/// Apply zero-mapping transforms, compute moments, verify and isolate roots.
/// Reads one JSON request and writes one JSON response.
#[derive(Debug, Parser)]
#[command(name = "zeromap", version)]
struct Args {
    /// Request file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,

    /// Working precision of float evaluations (overrides the request).
    #[arg(long)]
    precision_bits: Option<u32>,

    /// Seed of the random batches run by `verify`.
    #[arg(long, env = "ZEROMAP_SEED")]
    seed: Option<u64>,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn emit(v: &Value, format: Format) {
    let text = match format {
        Format::Json => serde_json::to_string(v),
        Format::Pretty => serde_json::to_string_pretty(v),
    }
    .expect("JSON values serialize");
    println!("{text}");
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => {
            let f = Failure { code: "bad_request", message: format!("cannot read {}: {e}", args.input.display()) };
            emit(&error_response(&f), args.format);
            return ExitCode::from(1);
        }
    };
    let opts = Options { precision_bits: args.precision_bits, seed: args.seed };
    // Panics become a structured internal error; the hook keeps stdout clean.
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    let outcome = std::panic::catch_unwind(|| run_json(&text, &opts));
    match outcome {
        Ok(o) => {
            emit(&o.response, args.format);
            ExitCode::from(o.exit_code as u8)
        }
        Err(_) => {
            let f = Failure { code: "internal", message: "unexpected internal error".into() };
            emit(&error_response(&f), args.format);
            ExitCode::from(2)
        }
    }
}
