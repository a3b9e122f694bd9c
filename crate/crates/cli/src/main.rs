use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

use rnfree::bounds::SieveStrategy;
use rnfree::curves::{
    conjecture_scan, count_exceptional_curves, curve_result, field_for, reproduce_theorem1, ScanConfig,
    CONJECTURED_EXCEPTIONS,
};
use rnfree::identities::{all_suites, Faults};
use rnfree::sweep::{enumerate_odd_prime_powers, run_sweep, HalfWeight, SweepConfig, DEFAULT_SEGMENT_LENGTH};

/// Default directory for sweep checkpoints and outputs.
const DIR_ENV: &str = "RNFREE_CHECKPOINT_DIR";

#[derive(Parser)]
#[command(name = "rnfree", version, about = "(r,n)-freeness in finite fields")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity self-checks.
    Verify(VerifyArgs),
    /// Test every odd prime power in (lo, hi] against the existence bounds.
    Sweep(SweepArgs),
    /// Primitive points on y^2 = x^3 - ax.
    Curve(CurveArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest q for the field suites.
    #[arg(long, default_value_t = 121)]
    qmax: u64,
    /// Largest r for the divisor-sum suite.
    #[arg(long, default_value_t = 2000)]
    rmax: u64,
    /// Largest n for the divisor-sum suite.
    #[arg(long, default_value_t = 50)]
    nmax: u64,
    /// Flip |mu(m)| at this m (negative control).
    #[arg(long, value_name = "M")]
    inject_fault: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Optimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum HalfWeightArg {
    Exact,
    Doubled,
}

#[derive(Args)]
struct SweepArgs {
    /// Constant D*n*N of the bound: 4 for x^3 - ax, 6 for a general cubic.
    #[arg(long, default_value_t = 6)]
    coeff: u64,
    /// Exclusive lower end.
    #[arg(long, default_value_t = 3)]
    lo: u64,
    /// Inclusive upper end.
    #[arg(long)]
    hi: u64,
    /// JSON-lines file for the records of q failing the first bound.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Checkpoint file, one line per finished segment.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint.
    #[arg(long)]
    resume: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Segment length.
    #[arg(long, default_value_t = DEFAULT_SEGMENT_LENGTH)]
    segment: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    strategy: StrategyArg,
    /// Use W(q-1) in place of W((q-1)/2).
    #[arg(long, value_enum, default_value_t = HalfWeightArg::Exact)]
    half_weight: HalfWeightArg,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["theorem1", "table1", "scan", "q"])))]
struct CurveArgs {
    /// Find every q <= qmax where y^2 = x^3 - ax, a = +1 or -1, has no primitive point.
    #[arg(long, allow_hyphen_values = true, value_name = "SIGN")]
    theorem1: Option<i64>,
    /// Upper end for --theorem1.
    #[arg(long, default_value_t = 16763671)]
    qmax: u64,
    /// Count exceptional a for each conjectured exceptional q.
    #[arg(long)]
    table1: bool,
    /// List the exceptional a for a range or list of q.
    #[arg(long)]
    scan: bool,
    /// Comma-separated q for --scan.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["lo", "hi"])]
    qs: Vec<u64>,
    /// Exclusive lower end for --scan.
    #[arg(long, default_value_t = 3)]
    lo: u64,
    /// Inclusive upper end for --scan.
    #[arg(long)]
    hi: Option<u64>,
    /// JSON-lines output for --scan.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Continue an interrupted --scan.
    #[arg(long, requires = "out")]
    resume: bool,
    /// Stop --scan after this many new q.
    #[arg(long)]
    limit: Option<usize>,
    /// Field size for a single point search.
    #[arg(long, requires = "a")]
    q: Option<u64>,
    /// Curve parameter, reduced into F_q.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
        Command::Curve(a) => curve(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let faults = Faults {
        flip_mobius_at: args.inject_fault,
    };
    let start = Instant::now();
    let mut ok = true;
    for rep in all_suites(args.rmax, args.nmax, args.qmax, faults) {
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        println!("{status} {} ({} checks)", rep.name, rep.checked);
        for f in &rep.failures {
            println!("    {f}");
        }
        ok &= rep.passed();
    }
    info!("verify finished in {:.1?}", start.elapsed());
    Ok(ok)
}

fn default_path(explicit: Option<PathBuf>, name: &str) -> Option<PathBuf> {
    explicit.or_else(|| std::env::var_os(DIR_ENV).map(|d| Path::new(&d).join(name)))
}

fn sweep(args: SweepArgs) -> Result<bool> {
    let stem = format!("sweep-c{}-{}-{}", args.coeff, args.lo, args.hi);
    let mut cfg = SweepConfig::new(args.lo, args.hi, args.coeff);
    cfg.segment_length = args.segment;
    cfg.parallelism = args.jobs;
    cfg.resume = args.resume;
    cfg.out = default_path(args.out, &format!("{stem}.jsonl"));
    cfg.checkpoint = default_path(args.checkpoint, &format!("{stem}.ckpt"));
    cfg.criterion.strategy = match args.strategy {
        StrategyArg::Greedy => SieveStrategy::Greedy,
        StrategyArg::Optimal => SieveStrategy::Optimal,
    };
    cfg.criterion.half_weight = match args.half_weight {
        HalfWeightArg::Exact => HalfWeight::Exact,
        HalfWeightArg::Doubled => HalfWeight::Doubled,
    };
    let outcome = run_sweep(&cfg)?;
    let s = outcome.summary;
    println!("range          ({}, {}]", args.lo, args.hi);
    println!("coefficient    {}", args.coeff);
    println!("prime powers   {}", s.total_pp);
    println!("fail first     {} (max {})", s.fail_cor42, s.max_fail_cor42);
    println!("fail sieve     {} (max {})", s.fail_sieve, s.max_fail_sieve);
    if outcome.resumed_segments > 0 {
        println!("resumed        {} segments", outcome.resumed_segments);
    }
    println!("{}", serde_json::to_string(&s)?);
    Ok(true)
}

fn curve(args: CurveArgs) -> Result<bool> {
    if let Some(sign) = args.theorem1 {
        let outcome = reproduce_theorem1(sign, args.qmax, args.jobs)?;
        let exc = outcome.exceptions();
        let list: Vec<String> = exc.iter().map(u64::to_string).collect();
        println!("a = {sign:+}: {} candidates up to {}", outcome.survivors.len(), args.qmax);
        println!("exceptions {{{}}}", list.join(","));
        println!("{}", json!({ "a": sign, "qmax": args.qmax, "exceptions": exc }));
        return Ok(true);
    }
    if args.table1 {
        let counts = CONJECTURED_EXCEPTIONS
            .iter()
            .map(|&q| Ok((q, count_exceptional_curves(&field_for(q)?))))
            .collect::<rnfree::Result<Vec<_>>>()?;
        let row = |f: &dyn Fn(&(u64, u64)) -> u64| counts.iter().map(|c| format!("{:>4}", f(c))).collect::<String>();
        println!("q     {}", row(&|c| c.0));
        println!("count {}", row(&|c| c.1));
        for (q, count) in &counts {
            println!("{}", json!({ "q": q, "count": count }));
        }
        return Ok(true);
    }
    if args.scan {
        let qs: Vec<u64> = if args.qs.is_empty() {
            let Some(hi) = args.hi else {
                bail!("--scan needs --qs or --hi");
            };
            enumerate_odd_prime_powers(args.lo, hi).map(|pp| pp.q()).collect()
        } else {
            args.qs
        };
        let out = default_path(args.out, "scan.jsonl");
        let records = conjecture_scan(&ScanConfig {
            qs: &qs,
            out: out.as_deref(),
            resume: args.resume,
            parallelism: args.jobs,
            limit: args.limit,
        })?;
        for r in &records {
            println!("{}", serde_json::to_string(r)?);
        }
        return Ok(true);
    }
    let (Some(q), Some(a)) = (args.q, args.a) else {
        bail!("give --theorem1, --table1, --scan or --q with --a");
    };
    let r = curve_result(q, a).with_context(|| format!("curve over F_{q}"))?;
    match (r.x, r.y) {
        (Some(x), Some(y)) => println!("primitive point ({x},{y}) on y^2 = x^3 - {}x over F_{q}", r.a),
        _ => println!("no primitive point on y^2 = x^3 - {}x over F_{q}", r.a),
    }
    println!("{}", serde_json::to_string(&r)?);
    Ok(true)
}
