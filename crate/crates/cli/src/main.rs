use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Map, Value};

use codepth::analysis::{Analysis, DataKey, DataTable};
use codepth::invariants::{ReductionConfig, DEFAULT_ATTEMPTS, DEFAULT_SEED};
use codepth::parse::{parse_batch, parse_input, InputSpec};
use codepth::Error;

/// Classify graded quotients Q/I of codepth at most three by the
/// multiplicative structure of their Tor algebra.
#[derive(Parser)]
#[command(name = "codepth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class of the ring, e.g. `G(2)`.
    Class(Common),
    /// Print the full data table.
    Data(Common),
    /// Print the values of the given keys as a list.
    List(Keyed),
    /// Print `key=value` pairs on one line.
    Print(Keyed),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Ring description, e.g. "QQ[x,y] / (x^2, x*y)".
    spec: Option<String>,

    /// Read the ring description from a file.
    #[arg(long, conflicts_with_all = ["spec", "batch"])]
    file: Option<PathBuf>,

    /// Classify every line of a file, in parallel; output keeps input order.
    #[arg(long, conflicts_with = "spec")]
    batch: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Generic reduction makes up to attempts² random tries.
    #[arg(long, default_value_t = DEFAULT_ATTEMPTS)]
    attempts: u32,

    /// Seed for the random linear forms of the generic reduction.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct Keyed {
    #[command(flatten)]
    common: Common,

    /// Comma-separated keys; all keys when omitted.
    #[arg(long, value_delimiter = ',')]
    keys: Vec<String>,
}

enum Report {
    Class,
    Data,
    List(Vec<DataKey>),
    Print(Vec<DataKey>),
}

fn json_value(table: &DataTable, key: DataKey) -> Value {
    let full = serde_json::to_value(table).expect("data table serializes");
    full.get(key.name()).cloned().unwrap_or(Value::Null)
}

fn render(report: &Report, format: Format, analysis: &Analysis) -> String {
    let table = analysis.table();
    match (report, format) {
        (Report::Class, Format::Text) => analysis.class.to_string(),
        (Report::Class, Format::Json) => Value::String(analysis.class.to_string()).to_string(),
        (Report::Data, Format::Text) => DataKey::ALL
            .iter()
            .map(|&k| format!("{k} => {}", table.value_text(k)))
            .collect::<Vec<_>>()
            .join("\n"),
        (Report::Data, Format::Json) => serde_json::to_string(&table).expect("data table serializes"),
        (Report::List(keys), Format::Text) => {
            let items: Vec<String> = keys.iter().map(|&k| table.value_text(k)).collect();
            format!("{{{}}}", items.join(", "))
        }
        (Report::List(keys), Format::Json) => {
            Value::Array(keys.iter().map(|&k| json_value(&table, k)).collect()).to_string()
        }
        (Report::Print(keys), Format::Text) => keys.iter().map(|&k| format!("{k}={} ", table.value_text(k))).collect(),
        (Report::Print(keys), Format::Json) => {
            let mut obj = Map::new();
            for &k in keys {
                obj.insert(k.name().to_string(), json_value(&table, k));
            }
            Value::Object(obj).to_string()
        }
    }
}

fn parse_keys(raw: &[String]) -> Result<Vec<DataKey>, Error> {
    if raw.is_empty() {
        return Ok(DataKey::ALL.to_vec());
    }
    raw.iter().map(|k| k.trim().parse()).collect()
}

fn read(path: &PathBuf) -> Result<String, (String, u8)> {
    fs::read_to_string(path).map_err(|e| (format!("cannot read {}: {e}", path.display()), 2))
}

fn fail(e: &Error) -> (String, u8) {
    (e.to_string(), e.exit_code() as u8)
}

fn run_one(spec: &InputSpec, report: &Report, common: &Common, cfg: &ReductionConfig) -> Result<String, (String, u8)> {
    let analysis = spec.analyze(cfg).map_err(|e| fail(&e))?;
    Ok(render(report, common.format, &analysis))
}

fn run(report: Report, common: Common) -> Result<String, (String, u8)> {
    let cfg = ReductionConfig::new(common.attempts, common.seed).map_err(|e| fail(&e))?;
    if let Some(path) = &common.batch {
        let text = read(path)?;
        let jobs = parse_batch(&text);
        let results: Vec<Result<String, (String, u8)>> = jobs
            .par_iter()
            .map(|(line, parsed)| {
                let spec = parsed.as_ref().map_err(fail)?;
                run_one(spec, &report, &common, &cfg).map_err(|(m, c)| (format!("line {line}: {m}"), c))
            })
            .collect();
        let mut out = Vec::new();
        let mut first_failure = None;
        let separator = if matches!(report, Report::Data) && common.format == Format::Text {
            "\n\n"
        } else {
            "\n"
        };
        for r in results {
            match r {
                Ok(s) => out.push(s),
                Err((m, c)) => {
                    eprintln!("error: {m}");
                    out.push(match common.format {
                        Format::Text => format!("error: {m}"),
                        Format::Json => serde_json::json!({ "error": m }).to_string(),
                    });
                    first_failure.get_or_insert(c);
                }
            }
        }
        let joined = out.join(separator);
        return match first_failure {
            None => Ok(joined),
            Some(code) => {
                print_line(&joined);
                Err((String::new(), code))
            }
        };
    }
    let text = match (&common.spec, &common.file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => read(path)?,
        (None, None) => io::read_to_string(io::stdin()).map_err(|e| (format!("cannot read stdin: {e}"), 2))?,
    };
    let spec = parse_input(&text).map_err(|e| fail(&e))?;
    run_one(&spec, &report, &common, &cfg)
}

fn print_line(s: &str) {
    let mut out = io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = writeln!(out, "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Class(c) => run(Report::Class, c),
        Command::Data(c) => run(Report::Data, c),
        Command::List(k) => parse_keys(&k.keys)
            .map_err(|e| fail(&e))
            .and_then(|keys| run(Report::List(keys), k.common)),
        Command::Print(k) => parse_keys(&k.keys)
            .map_err(|e| fail(&e))
            .and_then(|keys| run(Report::Print(keys), k.common)),
    };
    match result {
        Ok(s) => {
            print_line(&s);
            ExitCode::SUCCESS
        }
        Err((message, code)) => {
            if !message.is_empty() {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}
