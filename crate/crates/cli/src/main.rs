use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orderinv_core::catalog::{build_catalog, ingest_file, parse_label, CatalogEntry, CatalogSpec};
use orderinv_core::group::{InversionSemidirect, DEFAULT_ORDER_CAP};
use orderinv_core::matcher::MatchStatus;
use orderinv_core::numtheory::divisors;
use orderinv_core::stats;
use orderinv_core::structure::{is_cyclic, is_nilpotent, is_solvable};
use orderinv_core::sweep::{run_sweep, SweepOptions};
use orderinv_core::verify::{check_semidirect_group, integer_grid, ClaimId, Subject};
use orderinv_core::{ExactScalar, OrderProfile};

#[derive(Parser)]
#[command(name = "orderinv", version, about = "Element-order invariants of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// R, T, P_G and subgroup counts for one group at one (r, s).
    Compute(ComputeArgs),
    /// Run the checks over a catalog and emit a report.
    Verify(VerifyArgs),
    /// Look for an order-divisibility bijection onto the cyclic group.
    Match(MatchArgs),
    /// Build C_m ⋊ C_alpha and compare its cyclic-subgroup count and T with the closed forms.
    Example(ExampleArgs),
    /// Validate a Cayley-table or permutation file.
    Ingest(IngestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    order_cap: usize,
    /// Check associativity of constructed groups too.
    #[arg(long)]
    paranoid: bool,
}

#[derive(Args)]
struct ComputeArgs {
    /// Group label (C12, D8, Q8, S4, A5, E2^3, C3:C10, Q8xC3) or a group file.
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "0", allow_negative_numbers = true)]
    r: ExactScalar,
    #[arg(long, default_value = "1", allow_negative_numbers = true)]
    s: ExactScalar,
    /// Divisor of |G| to restrict to; defaults to |G|.
    #[arg(long)]
    n: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// `default` or a JSON catalog spec file.
    #[arg(long, default_value = "default")]
    catalog: String,
    /// Verify these groups instead of a catalog.
    #[arg(long)]
    group: Vec<String>,
    /// Comma-separated claim ids; all claims when omitted.
    #[arg(long, value_delimiter = ',')]
    claims: Vec<ClaimId>,
    /// `lo..hi` for the integer square, or a list like `0:1,1/2:-1`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    group: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ExampleArgs {
    #[arg(long, default_value_t = 3)]
    m: u64,
    #[arg(long, default_value_t = 5)]
    beta: u64,
    #[arg(long, default_value_t = 1)]
    u: u32,
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct IngestArgs {
    file: PathBuf,
    #[command(flatten)]
    output: Output,
}

/// Usage or input problem: exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn parse_grid(text: Option<&str>) -> Result<Vec<(ExactScalar, ExactScalar)>, InputError> {
    let Some(text) = text else { return Ok(integer_grid(-3, 3)) };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: i64 = lo.trim().parse()?;
        let hi: i64 = hi.trim().parse()?;
        if lo > hi {
            return Err(InputError(format!("empty grid {text}")));
        }
        return Ok(integer_grid(lo, hi));
    }
    let mut out = Vec::new();
    for pair in text.split(',') {
        let (r, s) = pair
            .split_once(':')
            .ok_or_else(|| InputError(format!("grid point {pair:?} is not r:s")))?;
        out.push((r.trim().parse()?, s.trim().parse()?));
    }
    Ok(out)
}

fn load_group(spec: &str, output: &Output) -> Result<CatalogEntry, InputError> {
    let path = Path::new(spec);
    let entry = if spec.ends_with(".json") || path.is_file() {
        CatalogEntry { group: ingest_file(path, output.order_cap)?, family: "ingested".into(), semidirect: None }
    } else {
        parse_label(spec, output.order_cap)?
    };
    if output.paranoid {
        entry.group.check_associative()?;
    }
    Ok(entry)
}

fn emit(output: &Output, value: &Value, table: impl FnOnce() -> String) -> Result<(), InputError> {
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Table => table(),
    };
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn key_value_table(value: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = value {
        let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
        for (k, v) in map {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
    }
    out
}

fn compute(args: ComputeArgs) -> Result<u8, InputError> {
    let entry = load_group(&args.group, &args.output)?;
    let g = &entry.group;
    let profile = OrderProfile::of_group(g);
    let order = profile.group_order();
    let n = args.n.unwrap_or(order);
    if n == 0 || order % n != 0 {
        return Err(InputError(format!("n = {n} does not divide |G| = {order}")));
    }
    let cyclic = OrderProfile::cyclic(order)?;
    let (r, s) = (&args.r, &args.s);
    let mut solutions = serde_json::Map::new();
    for m in divisors(n)? {
        solutions.insert(m.to_string(), json!(profile.solutions(m)));
    }
    let value = json!({
        "group": g.label(),
        "order": order,
        "n": n,
        "r": r,
        "s": s,
        "profile": profile.counts(),
        "cyclic": is_cyclic(g),
        "nilpotent": is_nilpotent(g),
        "solvable": is_solvable(g),
        "cyclic_subgroups": stats::cyclic_subgroup_count(&profile, n)?,
        "solutions": solutions,
        "r_value": stats::r_functional(&profile, n, r, s)?,
        "r_value_cyclic": stats::r_functional(&cyclic, n, r, s)?,
        "t_value": stats::t_functional(&profile, n, r, s)?,
        "product_of_orders": stats::product_of_orders(&profile)?.to_string(),
        "product_of_orders_cyclic": stats::product_of_orders(&cyclic)?.to_string(),
    });
    emit(&args.output, &value, || key_value_table(&value))?;
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8, InputError> {
    let grid = parse_grid(args.grid.as_deref())?;
    let mut spec = if !args.group.is_empty() {
        CatalogSpec { order_cap: args.output.order_cap, ..CatalogSpec::from_labels(Vec::<String>::new()) }
    } else if args.catalog == "default" {
        CatalogSpec { order_cap: args.output.order_cap, ..CatalogSpec::default() }
    } else {
        serde_json::from_str(&fs::read_to_string(&args.catalog)?)?
    };
    spec.paranoid |= args.output.paranoid;
    let mut catalog = build_catalog(&spec)?;
    for g in &args.group {
        let entry = load_group(g, &args.output)?;
        if catalog.get(entry.group.label()).is_none() {
            catalog.entries.push(entry);
        }
    }
    let claims = if args.claims.is_empty() { ClaimId::ALL.to_vec() } else { args.claims };
    let opts = SweepOptions { claims, grid, workers: args.workers, ..Default::default() };
    let report = run_sweep(&catalog, &opts);
    let text = match args.output.format {
        Format::Json => report.to_json(),
        Format::Table => report.to_table(),
    };
    match &args.output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.exit_code() as u8)
}

fn matching(args: MatchArgs) -> Result<u8, InputError> {
    let entry = load_group(&args.group, &args.output)?;
    let subject = Subject::new(&entry.group);
    let (verdict, m) = subject.check_divisibility_matching();
    let value = json!({
        "group": entry.group.label(),
        "order": subject.order(),
        "solvable": subject.is_solvable(),
        "certificate_verified": verdict.witnesses.get("certificate_verified").map(|v| v == "true"),
        "matching": m,
    });
    emit(&args.output, &value, || {
        let mut out = format!("{} (order {}): {:?}\n", entry.group.label(), subject.order(), m.status);
        for (d, row) in &m.assignment {
            for (e, c) in row {
                out.push_str(&format!("  {c} element(s) of order {d} -> order {e}\n"));
            }
        }
        if let Some(h) = &m.violator {
            out.push_str(&format!(
                "  orders {:?} hold {} elements but only {} slots are divisible by them\n",
                h.orders, h.demand, h.capacity
            ));
        }
        out
    })?;
    Ok(if m.status == MatchStatus::Violated && subject.is_solvable() { 1 } else { 0 })
}

fn example(args: ExampleArgs) -> Result<u8, InputError> {
    let params = InversionSemidirect { m: args.m, beta: args.beta, u: args.u };
    let entry = parse_label(&params.label(), args.output.order_cap)?;
    let grid: Vec<_> = parse_grid(args.grid.as_deref())?
        .into_iter()
        .filter(|(r, s)| r.as_integer().is_some() && s.as_integer().is_some())
        .collect();
    let verdict = check_semidirect_group(&entry.group, params, &grid)?;
    let value = json!({ "group": entry.group.label(), "params": params, "verdict": verdict });
    emit(&args.output, &value, || {
        let w = &verdict.witnesses;
        format!(
            "{} order {}\ncyclic subgroups {} (formula {})\nT closed form agrees at {} grid points: {}\n",
            verdict.group,
            verdict.n,
            w["cyclic_subgroups"],
            w["formula"],
            w["grid_points"],
            verdict.equality_condition_holds
        )
    })?;
    Ok(if verdict.consistent { 0 } else { 1 })
}

fn ingest(args: IngestArgs) -> Result<u8, InputError> {
    let g = ingest_file(&args.file, args.output.order_cap)?;
    let profile = OrderProfile::of_group(&g);
    let value = json!({
        "group": g.label(),
        "order": g.order(),
        "profile": profile.counts(),
        "cyclic": is_cyclic(&g),
        "nilpotent": is_nilpotent(&g),
        "solvable": is_solvable(&g),
    });
    emit(&args.output, &value, || key_value_table(&value))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Verify(a) => verify(a),
        Command::Match(a) => matching(a),
        Command::Example(a) => example(a),
        Command::Ingest(a) => ingest(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
