mod output;
mod verify;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use ruled_core::enumerate::DEFAULT_LIMIT;
use ruled_core::point::parse_tuple;
use ruled_core::table::{CountRow, CountingTable};
use ruled_core::{canonicalize_integral, height, parse_line, Error, FieldContext, Limits, Line, Method, Object};

use output::{exit_code, manifest, persist, Format, Table, EXIT_MISMATCH, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "ruled", version, about = "Count rational points of bounded height on lines and ruled varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Base field: q or qi.
    #[arg(long, default_value = "q")]
    field: FieldContext,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the full table to this file and a manifest to `<out>.manifest.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ceiling on candidate vectors examined by a single query.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: u64,
    /// Add wall-clock columns (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Lattice,
    Brute,
    Param,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form and height of a point literal such as `[1+i:2]`.
    Height {
        literal: String,
        #[arg(long, default_value = "q")]
        field: FieldContext,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Count points of height at most B on objects (`pn:n`, `scroll:a,b`,
    /// `cone:quadric`, `pencil:n`, `span=[..];[..]`).
    Count {
        objects: Vec<String>,
        /// Comma-separated list of bounds.
        #[arg(long, value_delimiter = ',', required = true)]
        bound: Vec<u64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Lattice)]
        method: MethodArg,
        /// File of serialized lines, one per row; `-` reads stdin.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification campaign against the frozen calibration.
    Verify(verify::VerifyArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(e) = init_workers() {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    let command_line = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let res = match cli.command {
        Command::Height { literal, field, format } => cmd_height(&literal, field, format),
        Command::Count { objects, bound, method, corpus, common } => {
            cmd_count(&objects, &bound, method, corpus.as_ref(), &common, &command_line)
        }
        Command::Verify(args) => verify::run(&args, &command_line),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// `RULED_WORKERS` caps the worker pool.
fn init_workers() -> Result<(), Error> {
    let Ok(v) = std::env::var("RULED_WORKERS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidArgument(format!("RULED_WORKERS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn cmd_height(literal: &str, ctx: FieldContext, format: Format) -> Result<u8, Error> {
    let p = canonicalize_integral(&parse_tuple(literal)?, &ctx)?;
    let mut t = Table::new(&["input", "canonical", "height"]);
    t.push(vec![literal.to_string(), p.to_string(), height(&p, &ctx).to_string()]);
    let meta = BTreeMap::from([("field".to_string(), ctx.to_string())]);
    print!("{}", t.render(&meta, format)?);
    Ok(0)
}

pub(crate) fn read_corpus(path: &Path, ctx: FieldContext) -> Result<Vec<Line>, Error> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_line(l, ctx).map_err(|e| Error::Parse(format!("corpus row {}: {e}", i + 1))))
        .collect()
}

pub(crate) fn corpus_name(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "stdin".into()
    } else {
        format!("file:{}", path.display())
    }
}

pub(crate) fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

struct Measured {
    method: Method,
    count: u64,
    ms: u64,
}

fn cmd_count(
    tokens: &[String],
    bounds: &[u64],
    method: MethodArg,
    corpus: Option<&PathBuf>,
    common: &Common,
    command_line: &str,
) -> Result<u8, Error> {
    let ctx = common.field;
    let limits = Limits::new(common.limit);
    let mut objects = tokens.iter().map(|t| Object::parse(t, ctx)).collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = corpus {
        objects.extend(read_corpus(p, ctx)?.into_iter().map(|l| Object::Line(Box::new(l))));
    }
    if objects.is_empty() {
        return Err(Error::InvalidArgument("no objects to count".into()));
    }
    if bounds.contains(&0) {
        return Err(Error::InvalidArgument("bounds must be >= 1".into()));
    }
    let methods_for = |o: &Object| -> Result<Vec<Method>, Error> {
        let ms = match method {
            MethodArg::Both => {
                let (a, b) = o.comparison();
                vec![a, b]
            }
            MethodArg::Lattice => vec![Method::Lattice],
            MethodArg::Brute => vec![Method::Brute],
            MethodArg::Param => vec![Method::Param],
        };
        match ms.iter().find(|m| !o.methods().contains(m)) {
            Some(m) => Err(Error::InvalidArgument(format!("method {m} does not apply to {}", o.token()))),
            None => Ok(ms),
        }
    };
    let mut tasks = Vec::new();
    let mut bounds = bounds.to_vec();
    bounds.sort_unstable();
    bounds.dedup();
    for o in &objects {
        let ms = methods_for(o)?;
        for &b in &bounds {
            tasks.push((o.token(), o, ms.clone(), b));
        }
    }
    tasks.sort_by(|x, y| (&x.0, x.3).cmp(&(&y.0, y.3)));
    tasks.dedup_by(|x, y| x.0 == y.0 && x.3 == y.3);
    let results: Vec<Result<Vec<Measured>, Error>> = tasks
        .par_iter()
        .map(|(_, o, ms, b)| {
            ms.iter()
                .map(|&m| {
                    let start = Instant::now();
                    let count = o.count(*b, m, &ctx, &limits)?;
                    Ok(Measured { method: m, count, ms: start.elapsed().as_millis() as u64 })
                })
                .collect()
        })
        .collect();

    let mut meta = BTreeMap::new();
    meta.insert("field".to_string(), ctx.to_string());
    meta.insert("bounds".to_string(), join(&bounds));
    meta.insert("method".to_string(), format!("{method:?}").to_lowercase());
    meta.insert("limit".to_string(), common.limit.to_string());
    let mut names: Vec<String> = objects.iter().map(Object::token).collect();
    names.sort();
    names.dedup();
    meta.insert("objects".to_string(), join(&names));
    if let Some(p) = corpus {
        meta.insert("corpus".to_string(), corpus_name(p));
    }

    let mut first_err = None;
    let mut mismatches = 0usize;
    let text = if method == MethodArg::Both {
        let mut header = vec!["object", "field", "bound", "lattice", "brute", "status"];
        if common.timing {
            header.extend(["lattice_ms", "brute_ms"]);
        }
        let mut t = Table::new(&header);
        for ((token, _, _, b), r) in tasks.iter().zip(&results) {
            match r {
                Ok(m) => {
                    let ok = m[0].count == m[1].count;
                    mismatches += usize::from(!ok);
                    let mut row = vec![
                        token.clone(),
                        ctx.to_string(),
                        b.to_string(),
                        m[0].count.to_string(),
                        m[1].count.to_string(),
                        if ok { "MATCH" } else { "MISMATCH" }.to_string(),
                    ];
                    if common.timing {
                        row.extend([m[0].ms.to_string(), m[1].ms.to_string()]);
                    }
                    t.push(row);
                }
                Err(e) => {
                    first_err.get_or_insert_with(|| e.clone());
                }
            }
        }
        t.render(&meta, common.format)?
    } else {
        let mut t = CountingTable::new();
        t.meta = meta.clone();
        for ((token, _, _, b), r) in tasks.iter().zip(&results) {
            match r {
                Ok(m) => t.push(CountRow {
                    object: token.clone(),
                    field: ctx.to_string(),
                    method: m[0].method.to_string(),
                    bound: *b,
                    count: m[0].count,
                    elapsed_ms: common.timing.then_some(m[0].ms),
                }),
                Err(e) => {
                    first_err.get_or_insert_with(|| e.clone());
                }
            }
        }
        t.sort();
        match common.format {
            Format::Csv => t.to_csv()?,
            Format::Json => t.to_json()? + "\n",
        }
    };
    print!("{text}");
    let status = match (&first_err, mismatches) {
        (Some(_), _) => "ERROR",
        (None, 0) => "PASS",
        _ => "MISMATCH",
    };
    if let Some(out) = &common.out {
        let summary = vec![
            ("rows".to_string(), results.iter().filter(|r| r.is_ok()).count().to_string()),
            ("mismatches".to_string(), mismatches.to_string()),
        ];
        persist(out, &text, &manifest(command_line, &meta, &summary, status))?;
    }
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(if mismatches > 0 { EXIT_MISMATCH } else { 0 })
}
