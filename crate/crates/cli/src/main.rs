use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hurwitz_core::chamber::{
    fit_chamber_polynomial, parse_point, sample_chamber, DEFAULT_DEGREE_CAP,
};
use hurwitz_core::content::RegularFunction;
use hurwitz_core::engine::{find_wall, EngineConfig, Method};
use hurwitz_core::toda::{shift_substitution_check, toda_first_equation_check, TauOptions};
use hurwitz_core::walks::{
    count_walks, count_walks_direct, verify_central_character, verify_jm_levels, WalkLimits,
    MAX_DIRECT_STEPS,
};
use hurwitz_core::{Error, HurwitzEngine, HurwitzQuery, Partition, Truncation};

/// Hard caps on the user-adjustable limits.
const HARD_MAX_TABLE_D: u32 = 14;
const HARD_MAX_SERIES_D: u32 = 10;

#[derive(Parser)]
#[command(
    name = "hurwitz",
    version,
    about = "Exact mixed double Hurwitz numbers"
)]
struct Cli {
    /// Directory for cached character tables.
    #[arg(
        long,
        global = true,
        env = "HURWITZ_CACHE_DIR",
        default_value = ".hurwitz-cache"
    )]
    cache_dir: PathBuf,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for lattice-point sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest d for full character tables (larger d use sparse columns).
    #[arg(long, global = true, default_value_t = 10)]
    max_table_d: u32,

    /// Largest z-degree of generating series.
    #[arg(long, global = true, default_value_t = 8)]
    max_series_d: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// W and H for one (k, l, alpha, beta).
    Compute {
        #[command(flatten)]
        q: QueryArgs,
        #[arg(long, default_value = "char")]
        method: String,
    },
    /// W and H over all alpha, beta of size d, as CSV.
    Table {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
    /// Identity checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Exact polynomial fit of H over one chamber.
    Fit {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        /// Base point as alpha/beta, e.g. 3,1/2,2.
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 60)]
        points: usize,
        #[arg(long, default_value_t = 24)]
        bound: u32,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: u32,
    },
    /// Brute-force walk count.
    Oracle {
        #[command(flatten)]
        q: QueryArgs,
    },
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    l: u32,
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
}

#[derive(Subcommand)]
enum Verify {
    /// First 2-Toda bilinear equation and the shift identity.
    Toda {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 5)]
        dz: u32,
        #[arg(long, default_value_t = 2)]
        dt: u32,
        #[arg(long, default_value_t = 2)]
        du: u32,
    },
    /// e_r(J_1..J_d) equals the level-r class sums, for every r.
    Jm {
        #[arg(long)]
        d: u32,
    },
    /// f(J_1..J_d) acts on each irreducible by f(contents).
    Central {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        f: String,
    },
    /// W rebuilt from connected numbers, for all alpha, beta of size d.
    Expformula {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
}

enum Failure {
    /// Bad input or a limit violation: exit 2.
    Usage(String),
    /// A computed check came out false: exit 1.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) | Error::DegreeCapExceeded { .. } => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn parse_partition(flag: &str, s: &str) -> Result<Partition, Failure> {
    s.parse()
        .map_err(|e: Error| Failure::Usage(format!("--{flag}: {e}")))
}

impl QueryArgs {
    /// Pads alpha and beta to size d with unicellular rows.
    fn query(&self) -> Result<HurwitzQuery, Failure> {
        let alpha = parse_partition("alpha", &self.alpha)?;
        let beta = parse_partition("beta", &self.beta)?;
        for (flag, p) in [("alpha", &alpha), ("beta", &beta)] {
            if p.size() > self.d {
                return Err(Failure::Usage(format!(
                    "--{flag} {p} has size {} > --d {}",
                    p.size(),
                    self.d
                )));
            }
        }
        let pad = |p: &Partition| p.pad_with_ones(self.d).map_err(Failure::from);
        Ok(HurwitzQuery::new(
            self.k,
            self.l,
            pad(&alpha)?,
            pad(&beta)?,
        )?)
    }
}

struct Context {
    format: Option<Format>,
    seed: u64,
    engine: HurwitzEngine,
}

impl Context {
    fn emit_json(&self, value: &Value) -> Outcome {
        let mut out = io::stdout().lock();
        match self.format.unwrap_or(Format::Json) {
            Format::Json => writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(value).expect("json")
            )?,
            Format::Plain => write_plain(&mut out, value, "")?,
            Format::Csv => {
                let obj = value
                    .as_object()
                    .ok_or_else(|| Failure::Usage("csv needs a flat record".into()))?;
                let mut w = csv::Writer::from_writer(out);
                let cell = |v: &Value| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                w.write_record(obj.keys()).map_err(csv_err)?;
                w.write_record(obj.values().map(cell)).map_err(csv_err)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Usage(format!("csv output: {e}"))
}

fn write_plain(out: &mut impl Write, value: &Value, prefix: &str) -> io::Result<()> {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                write_plain(out, v, &key)?;
            }
            Ok(())
        }
        Value::String(s) => writeln!(out, "{prefix}: {s}"),
        other => writeln!(out, "{prefix}: {other}"),
    }
}

fn verdict(ok: bool, what: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{what} failed")))
    }
}

fn compute(ctx: &Context, q: &QueryArgs, method: &str) -> Outcome {
    let method: Method = method.parse().map_err(|_| {
        Failure::Usage(format!(
            "--method must be char, series or oracle, got {method:?}"
        ))
    })?;
    let value = ctx.engine.evaluate(&q.query()?, method)?;
    ctx.emit_json(&serde_json::to_value(&value).expect("json"))
}

fn table(ctx: &Context, d: u32, k: u32, l: u32) -> Outcome {
    let parts = Partition::all(d);
    let mut rows = Vec::new();
    for alpha in &parts {
        for beta in &parts {
            let q = HurwitzQuery::new(k, l, alpha.clone(), beta.clone())?;
            let v = ctx.engine.evaluate(&q, Method::Char)?;
            rows.push(v);
        }
    }
    let out = io::stdout().lock();
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["alpha", "beta", "W", "H", "on_wall"])
                .map_err(csv_err)?;
            for v in &rows {
                w.write_record([
                    v.alpha.to_string(),
                    v.beta.to_string(),
                    v.w.to_string(),
                    v.h.to_string(),
                    v.on_wall.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).expect("json")
            )?;
        }
        Format::Plain => {
            let mut out = out;
            for v in &rows {
                writeln!(
                    out,
                    "{} {} W={} H={}{}",
                    v.alpha,
                    v.beta,
                    v.w,
                    v.h,
                    if v.on_wall { " wall" } else { "" }
                )?;
            }
        }
    }
    Ok(())
}

fn verify(ctx: &Context, v: &Verify) -> Outcome {
    match v {
        Verify::Toda { n, dz, dt, du } => {
            let trunc = Truncation::new(*dz, *dt, *du);
            let report = toda_first_equation_check(*n, trunc, ctx.engine.config().max_series_d)?;
            let options = TauOptions {
                max_dz: ctx.engine.config().max_series_d,
                ..TauOptions::default()
            };
            let shift = shift_substitution_check(*n, trunc, options)?;
            let ok = report.verdict && report.gamma_is_content_weight && shift;
            let mut value = serde_json::to_value(&report).expect("json");
            if ctx.format != Some(Format::Json) {
                value.as_object_mut().unwrap().remove("entries");
            }
            value["shift_identity"] = json!(shift);
            value["verdict"] = json!(ok);
            ctx.emit_json(&value)?;
            verdict(ok, "toda check")
        }
        Verify::Jm { d } => {
            let mut levels = Vec::new();
            for r in 0..*d {
                levels.push(json!({"r": r, "ok": verify_jm_levels(*d, r)?}));
            }
            let ok = levels.iter().all(|v| v["ok"] == json!(true));
            ctx.emit_json(&json!({"d": d, "levels": levels, "verdict": ok}))?;
            verdict(ok, "jucys-murphy level check")
        }
        Verify::Central { d, f } => {
            let func: RegularFunction = f
                .parse()
                .map_err(|e: Error| Failure::Usage(format!("--f: {e}")))?;
            let ok = verify_central_character(*d, &func)?;
            ctx.emit_json(&json!({"d": d, "f": func.to_string(), "verdict": ok}))?;
            verdict(ok, "central character check")
        }
        Verify::Expformula { d, k, l } => {
            let parts = Partition::all(*d);
            let mut mismatches = Vec::new();
            let mut checked = 0;
            for alpha in &parts {
                for beta in &parts {
                    let q = HurwitzQuery::new(*k, *l, alpha.clone(), beta.clone())?;
                    let w = ctx.engine.w_char(&q)?;
                    let rebuilt = ctx.engine.reconstruct_w_from_h(&q)?;
                    checked += 1;
                    if w != rebuilt {
                        mismatches.push(json!({
                            "alpha": alpha, "beta": beta,
                            "W": w.to_string(), "rebuilt": rebuilt.to_string()
                        }));
                    }
                }
            }
            let ok = mismatches.is_empty();
            ctx.emit_json(&json!({
                "d": d, "k": k, "l": l, "checked": checked,
                "mismatches": mismatches, "verdict": ok
            }))?;
            verdict(ok, "exponential-formula round trip")
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn fit(
    ctx: &Context,
    m: usize,
    n: usize,
    k: u32,
    l: u32,
    base: &str,
    points: usize,
    bound: u32,
    cap: u32,
) -> Outcome {
    let base = parse_point(base).map_err(|e| Failure::Usage(format!("--base: {e}")))?;
    if (base.m(), base.n()) != (m, n) {
        return Err(Failure::Usage(format!(
            "--base has {} + {} parts but --m {m} --n {n}",
            base.m(),
            base.n()
        )));
    }
    if let Some(w) = base.first_wall() {
        return Err(Failure::Usage(format!(
            "--base lies on the wall I = {:?}, J = {:?}",
            w.i, w.j
        )));
    }
    let sample = sample_chamber(&base, points, bound, ctx.seed)?;
    let fit = fit_chamber_polynomial(&ctx.engine, k, l, &sample, cap)?;
    ctx.emit_json(&serde_json::to_value(&fit).expect("json"))
}

fn oracle(ctx: &Context, q: &QueryArgs) -> Outcome {
    let q = q.query()?;
    let w = count_walks(&q, WalkLimits::default())?;
    let mut value = json!({
        "d": q.d(), "k": q.k, "l": q.l,
        "alpha": q.alpha(), "beta": q.beta(),
        "W": w.to_string(), "method": "oracle",
    });
    if q.k + q.l <= MAX_DIRECT_STEPS {
        let direct = count_walks_direct(&q, WalkLimits::default())?;
        value["W_direct"] = json!(direct.to_string());
        verdict(direct == w, "direct and dynamic-programming walk counts")?;
    }
    if let Some((i, j)) = find_wall(q.alpha(), q.beta())? {
        value["wall"] = json!({"I": i, "J": j});
    }
    ctx.emit_json(&value)
}

fn run(cli: Cli) -> Outcome {
    for (flag, value, cap) in [
        ("--max-table-d", cli.max_table_d, HARD_MAX_TABLE_D),
        ("--max-series-d", cli.max_series_d, HARD_MAX_SERIES_D),
    ] {
        if value > cap {
            return Err(Failure::Usage(format!(
                "{flag} {value} exceeds the cap {cap}"
            )));
        }
    }
    let engine = HurwitzEngine::new(EngineConfig {
        max_table_d: cli.max_table_d,
        max_series_d: cli.max_series_d,
        cache_dir: Some(cli.cache_dir.clone()),
        ..EngineConfig::default()
    });
    let ctx = Context {
        format: cli.format,
        seed: cli.seed,
        engine,
    };
    match &cli.command {
        Command::Compute { q, method } => compute(&ctx, q, method),
        Command::Table { d, k, l } => table(&ctx, *d, *k, *l),
        Command::Verify(v) => verify(&ctx, v),
        Command::Fit {
            m,
            n,
            k,
            l,
            base,
            points,
            bound,
            cap,
        } => fit(&ctx, *m, *n, *k, *l, base, *points, *bound, *cap),
        Command::Oracle { q } => oracle(&ctx, q),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
