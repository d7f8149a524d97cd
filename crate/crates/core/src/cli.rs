//! Command-line front end. `run` is the whole program minus process exit.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bounds::{bound_report, dense_crossover, disjoint_pair_cover, link_graph, max_matching, non_triple_pairs, prop51_check};
use crate::cache::{CacheRecord, FileCache, MemoryCache};
use crate::config::Config;
use crate::containers::{codegree_function, hypergraph_stats, hypothesis_check_at, min_feasible_n};
use crate::counting::{closed_form, count_naive, count_partition, ClosedFormFamily, Method};
use crate::error::{Error, Result};
use crate::literal::parse_set;
use crate::ratio::Ratio;
use crate::search::{conjecture_report, extremal_search, Mode, Verdict, SCHEMA_VERSION};
use crate::set::IntegerSet;
use crate::structure::{enumerate_sumfree, restricted_sumfree_extremal, staden_verify, trichotomy_report};
use crate::templates::{dominant_pair_palettes, is_good, is_subtemplate, pair_palette_counts, palette_profile, parse_template, rs_count, Template};
use crate::triples::restricted_triple_count;
use crate::BigCount;

#[derive(Parser, Debug)]
#[command(name = "rainbow-schur", version, about = "Rainbow sum-free colorings of subsets of [n]")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory holding counts.jsonl (else $RAINBOW_SCHUR_CACHE_DIR, else ./.rainbow-schur-cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// key=value file overriding the exhaustive thresholds.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// g(A, r) for one set.
    Count(CountArgs),
    /// Closed-form values for the named families.
    ClosedForm {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    /// Every upper bound that applies to (A, r).
    Bounds(BoundsArgs),
    /// g(n, r) and all maximizers.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        min_size: usize,
        #[arg(long, default_value = "pruned")]
        mode: String,
    },
    /// Compare the predicted extremal sets with exact search.
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        /// Also report every n up to this value.
        #[arg(long)]
        until: Option<usize>,
    },
    #[command(subcommand)]
    Structure(StructureCmd),
    #[command(subcommand)]
    Templates(TemplatesCmd),
    #[command(subcommand)]
    Hypergraph(HypergraphCmd),
    /// Both counting engines on seeded random subsets.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    #[command(subcommand)]
    Cache(CacheCmd),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    set: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value = "partition")]
    method: String,
    /// Include the partition profile.
    #[arg(long)]
    profile: bool,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: u32,
    /// Density for the many-triples bound, p/q or decimal; defaults to s(A)/n^2.
    #[arg(long)]
    mu: Option<String>,
    /// Add the link graph and a disjoint pair cover for this element.
    #[arg(long)]
    t: Option<usize>,
    /// g([n], r) against the dense bound for n = 2..=N instead.
    #[arg(long)]
    crossover: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum StructureCmd {
    /// Sum-free subsets of [n].
    Sumfree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
    },
    /// Trichotomy check over every sum-free subset of [n].
    Trichotomy {
        #[arg(long)]
        n: usize,
    },
    /// Minimum Schur-triple counts by size.
    Staden {
        #[arg(long)]
        n: usize,
    },
    /// Largest restricted sum-free subsets of [n].
    Extremal {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TemplatesCmd {
    /// RS(P).
    Rs {
        #[arg(long)]
        template: String,
    },
    Good {
        #[arg(long)]
        template: String,
        #[arg(long)]
        set: String,
    },
    Profile {
        #[arg(long)]
        template: String,
        #[arg(long)]
        set: Option<String>,
    },
    Subtemplate {
        #[arg(long)]
        template: String,
        #[arg(long)]
        other: String,
    },
    /// Elements per two-color palette; with --delta, the pairs held by (1 - 2 delta) n elements.
    Pairs {
        #[arg(long)]
        template: String,
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        delta: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum HypergraphCmd {
    Stats {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
    Codegree {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        tau: String,
    },
    /// Container hypotheses at the proof's tau and epsilon.
    Check {
        #[arg(long)]
        n: String,
        #[arg(long)]
        r: u64,
    },
    /// Smallest n meeting both hypotheses.
    MinN {
        #[arg(long)]
        r: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheCmd {
    Stats,
    Clear,
}

/// A command's output: the JSON document, and rows for CSV and tables.
struct Emit {
    value: Value,
    rows: Option<Vec<Value>>,
}

fn emit<T: Serialize>(v: &T) -> Result<Emit> {
    Ok(Emit { value: serde_json::to_value(v)?, rows: None })
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn tabulate(e: &Emit) -> (Vec<String>, Vec<Vec<String>>) {
    let rows: Vec<Value> = match (&e.rows, &e.value) {
        (Some(rows), _) => rows.clone(),
        (None, Value::Array(items)) if items.iter().all(Value::is_object) => items.clone(),
        (None, Value::Object(map)) => map.iter().map(|(k, v)| json!({"key": k, "value": v})).collect(),
        (None, other) => vec![json!({ "value": other })],
    };
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        if let Value::Object(m) = row {
            for k in m.keys() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
    }
    let body = rows
        .iter()
        .map(|row| header.iter().map(|k| row.get(k).map(cell).unwrap_or_default()).collect())
        .collect();
    (header, body)
}

fn render(e: &Emit, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&e.value)?)?,
        Format::Csv => {
            let (header, body) = tabulate(e);
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |err: csv::Error| Error::Io(std::io::Error::other(err.to_string()));
            w.write_record(&header).map_err(csv_err)?;
            for row in &body {
                w.write_record(row).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|err| Error::Io(std::io::Error::other(err.to_string())))?;
            out.write_all(&bytes)?;
        }
        Format::Table => {
            let (header, body) = tabulate(e);
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for row in &body {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(&header))?;
            for row in &body {
                writeln!(out, "{}", line(row))?;
            }
        }
    }
    Ok(())
}

fn parse_ratio(s: &str) -> Result<Ratio> {
    s.parse()
}

fn read_template(arg: &str) -> Result<Template> {
    match arg.strip_prefix('@') {
        Some(path) => parse_template(&std::fs::read_to_string(path)?),
        None => parse_template(arg),
    }
}

fn parse_method(s: &str) -> Result<Method> {
    match s {
        "naive" => Ok(Method::Naive),
        "partition" => Ok(Method::Partition),
        _ => Err(Error::domain(format!("unknown method {s:?}; expected naive or partition"))),
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    config: Config,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn cache(&self) -> FileCache {
        FileCache::locate(self.cli.cache_dir.as_deref())
    }

    fn warn(&mut self, warnings: &[String]) {
        for w in warnings {
            let _ = writeln!(self.err, "warning: {w}");
        }
    }
}

fn cmd_count(ctx: &mut Ctx, a: &CountArgs) -> Result<Emit> {
    let set = parse_set(&a.set, a.n)?;
    let method = parse_method(&a.method)?;
    if method == Method::Naive && set.len() > ctx.config.naive_max_size {
        return Err(Error::Refused {
            what: format!("naive count of {} elements", set.len()),
            limit: ctx.config.naive_max_size as u64,
            key: "naive_max_size",
        });
    }
    let literal = set.to_literal();
    let cache = ctx.cache();
    let (hit, warnings) = cache.lookup(&literal, set.n(), a.r)?;
    ctx.warn(&warnings);
    let mut doc = Map::new();
    doc.insert("set".into(), json!(literal));
    doc.insert("n".into(), json!(set.n()));
    doc.insert("r".into(), json!(a.r));
    doc.insert("size".into(), json!(set.len()));
    doc.insert("triples".into(), json!(restricted_triple_count(&set)));
    let (g, profile, was_hit) = match (hit, a.profile) {
        (Some(rec), false) => (rec.g, None, true),
        _ => {
            let (g, profile) = match method {
                Method::Naive => (count_naive(&set, a.r), None),
                Method::Partition => {
                    let (g, p) = count_partition(&set, a.r);
                    (g, Some(p))
                }
            };
            cache.append(&CacheRecord { set: literal.clone(), n: set.n(), r: a.r, g: g.clone(), method })?;
            (g, if a.profile { profile } else { None }, false)
        }
    };
    doc.insert("g".into(), json!(g));
    doc.insert("method".into(), json!(method));
    if let Some(p) = profile {
        doc.insert("profile".into(), serde_json::to_value(&p.counts)?);
    }
    doc.insert(
        "reproducibility".into(),
        json!({
            "schema_version": SCHEMA_VERSION,
            "cache": if was_hit { "hit" } else { "miss" },
        }),
    );
    Ok(Emit { value: Value::Object(doc), rows: None })
}

fn cmd_bounds(ctx: &mut Ctx, a: &BoundsArgs) -> Result<Emit> {
    if let Some(max_n) = a.crossover {
        if max_n > ctx.config.exact_count_max_size {
            return Err(Error::Refused {
                what: format!("crossover table up to n = {max_n}"),
                limit: ctx.config.exact_count_max_size as u64,
                key: "exact_count_max_size",
            });
        }
        let rows = dense_crossover(a.r, max_n);
        let e = emit(&rows)?;
        return Ok(e);
    }
    let Some(lit) = &a.set else {
        return Err(Error::domain("bounds needs --set or --crossover"));
    };
    let set = parse_set(lit, a.n)?;
    let mu = a.mu.as_deref().map(parse_ratio).transpose()?;
    let report = bound_report(&set, a.r, mu, ctx.config.exact_count_max_size);
    let rows: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let value = serde_json::to_value(&e.value).unwrap_or(Value::Null);
            json!({
                "name": e.name,
                "value": value.get("v").cloned().unwrap_or(Value::Null),
                "kind": value.get("kind").cloned().unwrap_or(Value::Null),
                "applicable": e.applicable,
                "informational": e.informational,
                "dominates_exact": e.dominates_exact,
            })
        })
        .collect();
    let mut doc = serde_json::to_value(&report)?;
    doc["large_matching"] = serde_json::to_value(prop51_check(&set, a.r))?;
    doc["non_triple_pairs"] = serde_json::to_value(non_triple_pairs(&set))?;
    if let Some(t) = a.t {
        let graph = link_graph(t, &set)?;
        let k = max_matching(&graph);
        let cover = disjoint_pair_cover(t, &set, &IntegerSet::empty(set.n()))?;
        doc["link"] = json!({ "graph": graph, "k": k, "disjoint_pairs": cover });
    }
    Ok(Emit { value: doc, rows: Some(rows) })
}

fn cmd_search(ctx: &mut Ctx, n: usize, r: u32, min_size: usize, mode: &str) -> Result<Emit> {
    let mode: Mode = mode.parse()?;
    let memory = MemoryCache::new();
    let (records, warnings) = ctx.cache().load()?;
    ctx.warn(&warnings);
    for rec in records.iter().filter(|rec| rec.n == n && rec.r == r) {
        if let Some(mask) = parse_set(&rec.set, Some(n)).ok().and_then(|s| s.mask()) {
            memory.insert(n, r, mask, rec.g.clone());
        }
    }
    let outcome = extremal_search(n, r, min_size, mode, &ctx.config.search(ctx.cli.jobs), Some(&memory))?;
    let mut doc = serde_json::to_value(&outcome.result)?;
    doc["reproducibility"] = serde_json::to_value(&outcome.reproducibility)?;
    let rows = outcome
        .result
        .argmax_sets
        .iter()
        .map(|a| json!({"n": n, "r": r, "g_max": outcome.result.g_max, "argmax": a.to_literal()}))
        .collect();
    Ok(Emit { value: doc, rows: Some(rows) })
}

fn cmd_conjecture(ctx: &mut Ctx, n: usize, r: u32, until: Option<usize>) -> Result<Emit> {
    let cfg = ctx.config.search(ctx.cli.jobs);
    let last = until.unwrap_or(n).max(n);
    let mut reports = Vec::new();
    for m in n..=last {
        reports.push(conjecture_report(m, r, &cfg, None)?);
    }
    let rows: Vec<Value> = reports
        .iter()
        .map(|rep| {
            json!({
                "n": rep.n,
                "r": rep.r,
                "case": rep.case,
                "predicted_set": rep.predicted_set,
                "predicted_value": rep.predicted_value,
                "g_max": rep.search.g_max,
                "argmax": rep.search.argmax_sets.iter().map(IntegerSet::to_literal).collect::<Vec<_>>().join(" "),
                "verdict": rep.verdict,
            })
        })
        .collect();
    if until.is_none() {
        let rep = reports.pop().expect("one report");
        let mut e = emit(&rep)?;
        e.rows = Some(rows);
        return Ok(e);
    }
    // onset: first n after which every report matches
    let mut onset = None;
    for rep in &reports {
        match (rep.verdict, onset) {
            (Verdict::Match, None) => onset = Some(rep.n),
            (Verdict::Match, Some(_)) => {}
            _ => onset = None,
        }
    }
    Ok(Emit { value: json!({ "r": r, "reports": reports, "empirical_onset": onset }), rows: Some(rows) })
}

fn cmd_structure(ctx: &mut Ctx, c: &StructureCmd) -> Result<Emit> {
    let limit = |n: usize, max: usize, key: &'static str, what: &str| {
        if n > max {
            Err(Error::Refused { what: format!("{what} with n = {n}"), limit: max as u64, key })
        } else {
            Ok(())
        }
    };
    match *c {
        StructureCmd::Sumfree { n, list } => {
            limit(n, ctx.config.sumfree_max_n, "sumfree_max_n", "sum-free enumeration")?;
            let mut count = 0u64;
            let mut max_size = 0;
            let mut sets = Vec::new();
            for s in enumerate_sumfree(n)? {
                count += 1;
                max_size = max_size.max(s.len());
                if list {
                    sets.push(json!({ "set": s.to_literal(), "size": s.len() }));
                }
            }
            let mut doc = json!({ "n": n, "count": count, "max_size": max_size });
            if list {
                doc["sets"] = Value::Array(sets.clone());
            }
            Ok(Emit { value: doc, rows: list.then_some(sets) })
        }
        StructureCmd::Trichotomy { n } => {
            limit(n, ctx.config.sumfree_max_n, "sumfree_max_n", "sum-free enumeration")?;
            emit(&trichotomy_report(n)?)
        }
        StructureCmd::Staden { n } => {
            let rows = staden_verify(n, ctx.config.staden_max_n)?;
            let table = rows
                .iter()
                .map(|row| {
                    json!({
                        "n": row.n,
                        "m": row.m,
                        "min": row.min,
                        "argmin": row.argmin.join(";"),
                        "matches_theorem": row.matches_theorem,
                    })
                })
                .collect();
            Ok(Emit { value: json!({ "n": n, "rows": rows }), rows: Some(table) })
        }
        StructureCmd::Extremal { n } => {
            limit(n, ctx.config.sumfree_max_n, "sumfree_max_n", "restricted sum-free enumeration")?;
            let e = restricted_sumfree_extremal(n)?;
            let rows = e.sets.iter().map(|s| json!({ "n": n, "size": e.max_size, "set": s })).collect();
            let mut out = emit(&e)?;
            out.rows = Some(rows);
            Ok(out)
        }
    }
}

fn domain_of(t: &Template, set: Option<&str>) -> Result<IntegerSet> {
    match set {
        Some(lit) => parse_set(lit, Some(t.n())),
        None => Ok(IntegerSet::full(t.n())),
    }
}

fn cmd_templates(c: &TemplatesCmd) -> Result<Emit> {
    match c {
        TemplatesCmd::Rs { template } => {
            let t = read_template(template)?;
            emit(&json!({ "n": t.n(), "r": t.r(), "rs": rs_count(&t) }))
        }
        TemplatesCmd::Good { template, set } => {
            let t = read_template(template)?;
            let a = parse_set(set, Some(t.n()))?;
            emit(&is_good(&t, &a)?)
        }
        TemplatesCmd::Profile { template, set } => {
            let t = read_template(template)?;
            emit(&palette_profile(&t, &domain_of(&t, set.as_deref())?))
        }
        TemplatesCmd::Subtemplate { template, other } => {
            let (p1, p2) = (read_template(template)?, read_template(other)?);
            emit(&json!({ "subtemplate": is_subtemplate(&p1, &p2)? }))
        }
        TemplatesCmd::Pairs { template, set, delta } => {
            let t = read_template(template)?;
            let domain = domain_of(&t, set.as_deref())?;
            let rows: Vec<Value> = pair_palette_counts(&t, &domain)
                .into_iter()
                .map(|((i, j), c)| json!({ "i": i, "j": j, "count": c }))
                .collect();
            let mut doc = json!({ "pairs": rows.clone() });
            if let Some(d) = delta {
                let d = parse_ratio(d)?;
                doc["delta"] = json!(d);
                doc["dominant"] = json!(dominant_pair_palettes(&t, &domain, &d));
            }
            Ok(Emit { value: doc, rows: Some(rows) })
        }
    }
}

fn cmd_hypergraph(ctx: &mut Ctx, c: &HypergraphCmd) -> Result<Emit> {
    match c {
        HypergraphCmd::Stats { n, r } => emit(&hypergraph_stats(*n, *r, ctx.config.explicit_edges_max_n)?),
        HypergraphCmd::Codegree { n, r, tau } => {
            let stats = hypergraph_stats(*n, *r, 0)?;
            let tau = parse_ratio(tau)?;
            let value = codegree_function(&stats, &tau)?;
            emit(&json!({ "n": n, "r": r, "tau": tau, "codegree": value }))
        }
        HypergraphCmd::Check { n, r } => {
            let n: BigCount = n
                .parse()
                .map_err(|_| Error::Parse { position: 0, message: format!("not a nonnegative integer: {n:?}") })?;
            emit(&hypothesis_check_at(&n, *r)?)
        }
        HypergraphCmd::MinN { r } => emit(&min_feasible_n(*r)?),
    }
}

fn cmd_verify(ctx: &mut Ctx, n: usize, r: u32, samples: usize) -> Result<Emit> {
    if n > ctx.config.naive_max_size {
        return Err(Error::Refused {
            what: format!("naive counts on subsets of [{n}]"),
            limit: ctx.config.naive_max_size as u64,
            key: "naive_max_size",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cli.seed);
    let mut mismatches = Vec::new();
    for _ in 0..samples {
        let members: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        let a = IntegerSet::from_members(n, members)?;
        let (naive, fast) = (count_naive(&a, r), count_partition(&a, r).0);
        if naive != fast {
            mismatches.push(json!({ "set": a.to_literal(), "naive": naive, "partition": fast }));
        }
    }
    emit(&json!({ "n": n, "r": r, "seed": ctx.cli.seed, "samples": samples, "mismatches": mismatches }))
}

fn cmd_cache(ctx: &mut Ctx, c: &CacheCmd) -> Result<Emit> {
    let cache = ctx.cache();
    match c {
        CacheCmd::Stats => {
            let (stats, warnings) = cache.stats()?;
            ctx.warn(&warnings);
            emit(&stats)
        }
        CacheCmd::Clear => {
            cache.clear()?;
            let (stats, _) = cache.stats()?;
            emit(&stats)
        }
    }
}

fn dispatch(ctx: &mut Ctx) -> Result<Emit> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Count(a) => cmd_count(ctx, a),
        Command::ClosedForm { family, n, r } => {
            let fam: ClosedFormFamily = family.parse()?;
            emit(&json!({ "family": family, "n": n, "r": r, "value": closed_form(fam, *n, *r)? }))
        }
        Command::Bounds(a) => cmd_bounds(ctx, a),
        Command::Search { n, r, min_size, mode } => cmd_search(ctx, *n, *r, *min_size, mode),
        Command::Conjecture { n, r, until } => cmd_conjecture(ctx, *n, *r, *until),
        Command::Structure(c) => cmd_structure(ctx, c),
        Command::Templates(c) => cmd_templates(c),
        Command::Hypergraph(c) => cmd_hypergraph(ctx, c),
        Command::Verify { n, r, samples } => cmd_verify(ctx, *n, *r, *samples),
        Command::Cache(c) => cmd_cache(ctx, c),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let config = match cli.config.as_deref().map(Config::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let mut ctx = Ctx { cli: &cli, config, err };
    match dispatch(&mut ctx).and_then(|e| render(&e, cli.format, out)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}
