//! `ruled verify <campaign>`: runs a campaign, prints a key/value summary
//! and writes the per-item table to `--out`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};

use ruled_core::campaign::{det_lemma_campaign, verify_theorem_main};
use ruled_core::corpus::{lines_by_dimension, random_lines, stratified_lines, CorpusSpec};
use ruled_core::ruled::{check_epsilon_hypothesis, count_pn_via_pencil, ratio_f64, verify_theorem_bundle, Scroll};
use ruled_core::{count_pn, Calibration, Error, FieldContext, Limits};

use crate::output::{manifest, persist, Format, Table, EXIT_FAIL};
use crate::{corpus_name, join, read_corpus, Common};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verifier {
    TheoremMain,
    DetLemma,
    Bundle,
    Pencil,
    Epsilon,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    verifier: Verifier,
    /// Parameter overrides as `key=value`: n, B, seed, E, count, a, b.
    params: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ambient dimension of a random corpus, or `n` for the pencil.
    #[arg(long)]
    n: Option<usize>,
    /// Entry bound E of a random corpus.
    #[arg(long)]
    entry_bound: Option<i64>,
    #[arg(long)]
    count: Option<usize>,
    /// Comma-separated list of bounds.
    #[arg(long, value_delimiter = ',')]
    bound: Option<Vec<u64>>,
    /// Scroll parameters for bundle and epsilon.
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    /// File of serialized lines, one per row; `-` reads stdin.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Calibration file to use instead of the frozen one.
    #[arg(long)]
    calibration: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

/// Resolved campaign parameters; every field is echoed into the metadata.
struct Config {
    seed: Option<u64>,
    n: Option<usize>,
    entry_bound: Option<i64>,
    count: Option<usize>,
    bounds: Option<Vec<u64>>,
    a: Option<u32>,
    b: Option<u32>,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Error> {
    v.trim().parse().map_err(|_| Error::Parse(format!("bad value `{v}` for `{key}`")))
}

impl Config {
    fn resolve(args: &VerifyArgs) -> Result<Config, Error> {
        let mut c = Config {
            seed: args.seed,
            n: args.n,
            entry_bound: args.entry_bound,
            count: args.count,
            bounds: args.bound.clone(),
            a: args.a,
            b: args.b,
        };
        for p in &args.params {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{p}`")))?;
            match k.trim() {
                "seed" => c.seed = Some(parse_value(k, v)?),
                "n" => c.n = Some(parse_value(k, v)?),
                "E" | "entry_bound" => c.entry_bound = Some(parse_value(k, v)?),
                "count" => c.count = Some(parse_value(k, v)?),
                "a" => c.a = Some(parse_value(k, v)?),
                "b" => c.b = Some(parse_value(k, v)?),
                "B" | "bound" | "bounds" => {
                    c.bounds = Some(v.split(',').map(|x| parse_value(k, x)).collect::<Result<_, _>>()?)
                }
                other => return Err(Error::Parse(format!("unknown parameter `{other}`"))),
            }
        }
        if c.bounds.as_ref().is_some_and(|b| b.is_empty() || b.contains(&0)) {
            return Err(Error::InvalidArgument("bounds must be >= 1".into()));
        }
        Ok(c)
    }
}

struct Report {
    meta: BTreeMap<String, String>,
    summary: Vec<(String, String)>,
    table: Table,
    pass: bool,
}

impl Report {
    fn new(verifier: Verifier, ctx: FieldContext) -> Report {
        let mut meta = BTreeMap::new();
        meta.insert("verifier".into(), name(verifier).into());
        meta.insert("field".into(), ctx.to_string());
        Report { meta, summary: Vec::new(), table: Table::default(), pass: false }
    }

    fn config(&mut self, k: &str, v: impl ToString) {
        self.meta.insert(k.into(), v.to_string());
    }

    fn stat(&mut self, k: impl Into<String>, v: impl ToString) {
        self.summary.push((k.into(), v.to_string()));
    }
}

fn name(v: Verifier) -> &'static str {
    match v {
        Verifier::TheoremMain => "theorem-main",
        Verifier::DetLemma => "det-lemma",
        Verifier::Bundle => "bundle",
        Verifier::Pencil => "pencil",
        Verifier::Epsilon => "epsilon",
    }
}

/// A fitted exponent with six fixed decimals.
fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

pub fn run(args: &VerifyArgs, command_line: &str) -> Result<u8, Error> {
    let cfg = Config::resolve(args)?;
    let cal = match &args.calibration {
        Some(p) => Calibration::from_path(p)?,
        None => Calibration::frozen(),
    };
    let ctx = args.common.field;
    let limits = Limits::new(args.common.limit);
    let mut rep = Report::new(args.verifier, ctx);
    rep.config("limit", args.common.limit);
    rep.config(
        "calibration",
        args.calibration.as_ref().map_or("frozen".to_string(), |p| format!("file:{}", p.display())),
    );
    let start = Instant::now();
    match args.verifier {
        Verifier::TheoremMain => theorem_main(&mut rep, args, &cfg, &cal, ctx, &limits)?,
        Verifier::DetLemma => det_lemma(&mut rep, args, &cfg, &cal, ctx)?,
        Verifier::Bundle => bundle(&mut rep, &cfg, &cal, ctx, &limits)?,
        Verifier::Pencil => pencil(&mut rep, &cfg, ctx, &limits)?,
        Verifier::Epsilon => epsilon(&mut rep, &cfg, &cal, ctx, &limits)?,
    }
    if args.common.timing {
        rep.stat("elapsed_ms", start.elapsed().as_millis());
    }
    let status = if rep.pass { "PASS" } else { "FAIL" };
    rep.stat("status", status);

    let mut lines = Table::new(&["key", "value"]);
    for (k, v) in rep.meta.iter().chain(rep.summary.iter().map(|(k, v)| (k, v))) {
        lines.push(vec![k.clone(), v.clone()]);
    }
    let summary_text = match args.common.format {
        Format::Csv => lines.render(&rep.meta, Format::Csv)?,
        Format::Json => {
            let mut s = Table::new(&["key", "value"]);
            s.rows = rep.summary.iter().map(|(k, v)| vec![k.clone(), v.clone()]).collect();
            s.render(&rep.meta, Format::Json)?
        }
    };
    if let Some(out) = &args.common.out {
        let text = rep.table.render(&rep.meta, args.common.format)?;
        persist(out, &text, &manifest(command_line, &rep.meta, &rep.summary, status))?;
    }
    print!("{summary_text}");
    Ok(if rep.pass { 0 } else { EXIT_FAIL })
}

fn theorem_main(
    rep: &mut Report,
    args: &VerifyArgs,
    cfg: &Config,
    cal: &Calibration,
    ctx: FieldContext,
    limits: &Limits,
) -> Result<(), Error> {
    let tm = &cal.theorem_main;
    let seed = cfg.seed.unwrap_or(tm.seed);
    let n = cfg.n.unwrap_or(tm.dimension);
    let count = cfg.count.unwrap_or(tm.count);
    let lines = if let Some(p) = &args.corpus {
        rep.config("corpus", corpus_name(p));
        read_corpus(p, ctx)?
    } else if let Some(e) = cfg.entry_bound {
        rep.config("corpus", format!("random(seed={seed},n={n},E={e},count={count})"));
        random_lines(&CorpusSpec { seed, n, entry_bound: e, count, ctx })?
    } else {
        rep.config(
            "corpus",
            format!(
                "stratified(seed={seed},n={n},E={},count={count},max_height={})",
                join(&tm.entry_bounds),
                tm.max_line_height
            ),
        );
        stratified_lines(seed, n, &tm.entry_bounds, count, tm.max_line_height, &ctx)?
    };
    let bounds = cfg.bounds.clone().unwrap_or_else(|| tm.bounds.clone());
    let c_max = cal.c_max()?;
    rep.config("bounds", join(&bounds));
    rep.config("c_max", &c_max);
    rep.config("height_split", tm.height_split);

    let res = verify_theorem_main(&lines, &bounds, tm.height_split, &c_max, limits)?;
    let sup = res.sup();
    rep.stat("lines", lines.len());
    rep.stat("max_line_height", res.rows.iter().map(|r| r.line_height).max().unwrap_or(0));
    rep.stat("sup", &sup.normalized);
    rep.stat("sup_approx", fixed(ratio_f64(&sup.normalized)));
    rep.stat("sup_witness", &lines[sup.line]);
    rep.stat("sup_witness_height", sup.line_height);
    rep.stat("sup_witness_bound", sup.bound);
    rep.stat("sup_witness_count", sup.count);
    let opt =
        |r: Option<&ruled_core::campaign::TheoremMainRow>| r.map_or("none".to_string(), |r| r.normalized.to_string());
    rep.stat("sup_high", opt(res.sup_high()));
    rep.stat("sup_low", opt(res.sup_low()));
    rep.stat("bounded", res.bounded());
    rep.stat("no_degradation", res.no_degradation());
    rep.pass = res.holds();

    rep.table = Table::new(&["line", "span", "line_height", "bound", "count", "normalized"]);
    for r in &res.rows {
        rep.table.push(vec![
            r.line.to_string(),
            lines[r.line].to_string(),
            r.line_height.to_string(),
            r.bound.to_string(),
            r.count.to_string(),
            r.normalized.to_string(),
        ]);
    }
    Ok(())
}

fn det_lemma(
    rep: &mut Report,
    args: &VerifyArgs,
    cfg: &Config,
    cal: &Calibration,
    ctx: FieldContext,
) -> Result<(), Error> {
    let d = &cal.det_lemma;
    let lines = if let Some(p) = &args.corpus {
        rep.config("corpus", corpus_name(p));
        read_corpus(p, ctx)?
    } else {
        let seed = cfg.seed.unwrap_or(d.seed);
        let dims = cfg.n.map_or_else(|| d.dimensions.clone(), |n| vec![n]);
        let e = cfg.entry_bound.unwrap_or(d.entry_bound);
        let count = cfg.count.unwrap_or(d.count);
        rep.config("corpus", format!("random(seed={seed},n={},E={e},count={count})", join(&dims)));
        lines_by_dimension(seed, &dims, e, count, &ctx)?
    };
    let reports = det_lemma_campaign(&lines)?;
    let failures = reports.iter().filter(|r| !r.holds()).count();
    rep.stat("lines", lines.len());
    rep.stat("failures", failures);
    let mut dims: Vec<usize> = reports.iter().map(|r| r.n).collect();
    dims.sort_unstable();
    dims.dedup();
    for n in dims {
        let of_n: Vec<_> = reports.iter().filter(|r| r.n == n).collect();
        let sq: Vec<_> = of_n.iter().map(|r| r.ratio_squared()).collect();
        rep.stat(format!("n{n}_band_squared"), format!("[1,{}]", of_n[0].band_upper_squared));
        rep.stat(format!("n{n}_min_ratio_squared"), sq.iter().min().expect("nonempty"));
        rep.stat(format!("n{n}_max_ratio_squared"), sq.iter().max().expect("nonempty"));
    }
    rep.pass = failures == 0;

    rep.table =
        Table::new(&["line", "span", "n", "height", "det_squared", "det", "ratio_squared", "band_squared", "pass"]);
    for (i, (r, l)) in reports.iter().zip(&lines).enumerate() {
        rep.table.push(vec![
            i.to_string(),
            l.to_string(),
            r.n.to_string(),
            r.height.to_string(),
            r.det.det_squared.to_string(),
            r.det.to_string(),
            r.ratio_squared().to_string(),
            format!("[1,{}]", r.band_upper_squared),
            r.holds().to_string(),
        ]);
    }
    Ok(())
}

fn bundle(rep: &mut Report, cfg: &Config, cal: &Calibration, ctx: FieldContext, limits: &Limits) -> Result<(), Error> {
    let bc = &cal.bundle;
    let scroll = Scroll::new(cfg.a.unwrap_or(bc.a), cfg.b.unwrap_or(bc.b), ctx)?;
    let bounds = cfg.bounds.clone().unwrap_or_else(|| bc.bounds.clone());
    let band = cal.bundle_band()?;
    let max_spread = cal.bundle_spread()?;
    rep.config("object", scroll.token());
    rep.config("bounds", join(&bounds));
    rep.config("band", format!("[1/{band},{band}]"));
    rep.config("max_spread", &max_spread);

    let res = verify_theorem_bundle(&scroll, &bounds, &band, limits)?;
    let spread = res.spread();
    rep.stat("min_ratio", res.min_ratio());
    rep.stat("max_ratio", res.max_ratio());
    rep.stat("spread", &spread);
    rep.stat("spread_approx", fixed(ratio_f64(&spread)));
    rep.stat("within_band", res.within_band());
    rep.pass = spread < max_spread && res.within_band();

    rep.table = Table::new(&["object", "bound", "count", "ratio"]);
    for (b, n, r) in &res.rows {
        rep.table.push(vec![scroll.token(), b.to_string(), n.to_string(), r.to_string()]);
    }
    Ok(())
}

const PENCIL_CASES: [(usize, u64); 5] = [(2, 1), (2, 5), (2, 25), (3, 2), (3, 5)];

fn pencil(rep: &mut Report, cfg: &Config, ctx: FieldContext, limits: &Limits) -> Result<(), Error> {
    let cases: Vec<(usize, u64)> = match (cfg.n, &cfg.bounds) {
        (None, None) => PENCIL_CASES.to_vec(),
        (n, bounds) => {
            let n = n.unwrap_or(2);
            bounds.clone().unwrap_or_else(|| vec![1, 5, 25]).into_iter().map(|b| (n, b)).collect()
        }
    };
    rep.config("cases", join(&cases.iter().map(|(n, b)| format!("n={n}:B={b}")).collect::<Vec<_>>()));
    rep.table = Table::new(&["n", "bound", "pencil", "direct", "status"]);
    let mut mismatches = 0;
    for (n, b) in cases {
        let via = count_pn_via_pencil(n, b, &ctx, limits)?;
        let direct = count_pn(n, b, &ctx)?;
        mismatches += usize::from(via != direct);
        let status = if via == direct { "MATCH" } else { "MISMATCH" };
        rep.table.push(vec![n.to_string(), b.to_string(), via.to_string(), direct.to_string(), status.into()]);
        rep.stat(format!("n{n}_B{b}"), format!("{via}/{direct}"));
    }
    rep.stat("mismatches", mismatches);
    rep.pass = mismatches == 0;
    Ok(())
}

const EPSILON_SCROLLS: [(u32, u32); 4] = [(1, 2), (0, 3), (2, 2), (1, 1)];

fn epsilon(rep: &mut Report, cfg: &Config, cal: &Calibration, ctx: FieldContext, limits: &Limits) -> Result<(), Error> {
    let e = &cal.epsilon;
    let scrolls: Vec<(u32, u32)> = match (cfg.a, cfg.b) {
        (None, None) => EPSILON_SCROLLS.to_vec(),
        (a, b) => vec![(a.unwrap_or(1), b.unwrap_or(2))],
    };
    let bounds = cfg.bounds.clone().unwrap_or_else(|| e.bounds.clone());
    rep.config("bounds", join(&bounds));
    rep.config("tolerance", e.tolerance);
    rep.config("objects", join(&scrolls.iter().map(|(a, b)| format!("scroll:{a},{b}")).collect::<Vec<_>>()));
    rep.table = Table::new(&["object", "base_bound", "base_count"]);
    let mut pass = true;
    for (a, b) in scrolls {
        let s = Scroll::new(a, b, ctx)?;
        let res = check_epsilon_hypothesis(&s, &bounds, limits)?;
        let t = s.token();
        rep.stat(format!("{t}.slope"), fixed(res.slope));
        rep.stat(format!("{t}.predicted"), fixed(res.predicted));
        rep.stat(format!("{t}.epsilon_below_one"), res.holds());
        pass &= res.matches_prediction(e.tolerance);
        for (ba, n) in &res.rows {
            rep.table.push(vec![t.clone(), ba.to_string(), n.to_string()]);
        }
    }
    rep.pass = pass;
    Ok(())
}
