//! Command-line surface for the truncprice toolkit.
//!
//! Subcommands: `price` (truncation rules over a discrete distribution),
//! `stp` (St. Petersburg experiments), and `option` (fat-tail option
//! pricing). Reports render as a table, compact JSON, or CSV; JSON and CSV
//! use full-precision machine formatting, and every report carries the
//! resolved parameter set needed to reproduce it.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use truncprice::dist::{ContinuousDensity, PayoutDistribution};
use truncprice::options::{
    divergence_table, truncated_price, BoundMode, DivergenceEntry, OptionSide, OptionSpec,
};
use truncprice::pricing::{
    buyer_accepts, seller_min_price_committed, seller_quote_closeable, truncated_expectation,
    BuyerProfile, Price,
};
use truncprice::stp::{
    feller_fair_fee, simulate_session, two_banker_demo, verify_decomposition, SimulationConfig,
};
use truncprice::Error;

#[derive(Parser)]
#[command(
    name = "truncprice",
    version,
    about = "Truncated-expectation pricing toolkit"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Price a discrete payout distribution for buyer and seller
    Price(PriceArgs),
    /// St. Petersburg game experiments
    Stp {
        #[command(subcommand)]
        command: StpCommand,
    },
    /// Option pricing under fat-tailed densities
    Option {
        #[command(subcommand)]
        command: OptionCommand,
    },
}

#[derive(Args)]
struct PriceArgs {
    /// Distribution source: `st-petersburg`, `lottery:K`, or `file:PATH`
    #[arg(long)]
    dist: String,
    /// Hopeless probability; accepts a decimal or a power like `2^-28`
    #[arg(long)]
    epsilon: String,
    /// Cost-effectiveness factor
    #[arg(long)]
    k: f64,
    /// Quote to test against the buyer's bound
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Subcommand)]
enum StpCommand {
    /// Run one seeded session of plays
    Simulate {
        /// Number of plays
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Toss cap per play (payout pinned at 2^cap beyond it)
        #[arg(long, default_value_t = 62)]
        max_tosses: u32,
    },
    /// The empirically fair per-play fee log2(n) for exactly n plays
    Feller {
        #[arg(long)]
        n: u64,
    },
    /// Fees for splitting plays across two bankers vs one combined banker
    TwoBanker {
        #[arg(long, default_value_t = 1024)]
        n1: u64,
        #[arg(long, default_value_t = 1024)]
        n2: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustively check the game-vs-lottery-set payout decomposition
    Decompose {
        #[arg(long)]
        depth: u32,
    },
}

#[derive(Subcommand)]
enum OptionCommand {
    /// Price a truncated call or put
    Price(OptionPriceArgs),
    /// Partial untruncated call integrals for growing upper limits
    Diverge {
        #[arg(long, value_enum)]
        density: DensityKind,
        /// Location (Cauchy) or mean (Gaussian)
        #[arg(long, default_value_t = 0.0)]
        location: f64,
        /// Scale (Cauchy) or standard deviation (Gaussian)
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        strike: f64,
        /// Comma-separated strictly increasing upper limits
        #[arg(long, value_delimiter = ',')]
        uppers: Vec<f64>,
    },
}

#[derive(Args)]
struct OptionPriceArgs {
    #[arg(long, value_enum)]
    density: DensityKind,
    /// Location (Cauchy) or mean (Gaussian)
    #[arg(long, default_value_t = 0.0)]
    location: f64,
    /// Scale (Cauchy) or standard deviation (Gaussian)
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long)]
    strike: f64,
    #[arg(long)]
    spot: f64,
    #[arg(long, default_value_t = 0.0)]
    rate: f64,
    #[arg(long, default_value_t = 0.0)]
    maturity: f64,
    #[arg(long, value_enum, default_value_t = Side::Call)]
    side: Side,
    /// Truncation bound: epsilon quantile or explicit spot multiples
    #[arg(long, value_enum)]
    mode: ModeKind,
    /// Hopeless probability for `--mode epsilon`; decimal or `2^-28` form
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, default_value_t = 100.0)]
    upper_mult: f64,
    #[arg(long, default_value_t = 0.01)]
    lower_mult: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DensityKind {
    Cauchy,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeKind {
    Epsilon,
    Multiple,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Price(args) => cmd_price(cli.format, args),
        Command::Stp { command } => cmd_stp(cli.format, command),
        Command::Option { command } => cmd_option(cli.format, command),
    }
}

/// Accepts a decimal or the dyadic form `2^-28`, which parses exactly.
fn parse_epsilon(text: &str) -> anyhow::Result<f64> {
    if let Some(exp) = text.strip_prefix("2^") {
        let exp: i32 = exp
            .parse()
            .with_context(|| format!("bad exponent in epsilon {text:?}"))?;
        Ok(2f64.powi(exp))
    } else {
        text.parse()
            .with_context(|| format!("bad epsilon {text:?}"))
    }
}

fn load_dist(source: &str) -> anyhow::Result<PayoutDistribution> {
    if let Some(path) = source.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading distribution file {path}"))?;
        let dist: PayoutDistribution = serde_json::from_str(&text)
            .with_context(|| format!("parsing distribution file {path}"))?;
        Ok(dist)
    } else if source == "st-petersburg" || source == "st_petersburg" {
        Ok(PayoutDistribution::st_petersburg())
    } else if let Some(k) = source.strip_prefix("lottery:") {
        let k: u32 = k
            .parse()
            .with_context(|| format!("bad lottery exponent in {source:?}"))?;
        Ok(PayoutDistribution::lottery(k)?)
    } else {
        bail!("unknown distribution {source:?} (use st-petersburg, lottery:K, or file:PATH)")
    }
}

fn make_density(kind: DensityKind, location: f64, scale: f64) -> anyhow::Result<ContinuousDensity> {
    Ok(match kind {
        DensityKind::Cauchy => ContinuousDensity::cauchy(location, scale)?,
        DensityKind::Gaussian => ContinuousDensity::gaussian(location, scale)?,
    })
}

#[derive(Serialize)]
struct PriceReport {
    command: &'static str,
    dist: String,
    distribution: PayoutDistribution,
    epsilon: f64,
    k: f64,
    mu: Option<f64>,
    n_epsilon: Option<u64>,
    e_epsilon: Option<f64>,
    retained_mass: Option<f64>,
    buyer_max_price: Price,
    seller_committed: Price,
    seller_closeable: Option<Price>,
    seller_closeable_note: Option<String>,
    verdict: Option<&'static str>,
}

fn cmd_price(format: OutputFormat, args: PriceArgs) -> anyhow::Result<()> {
    let dist = load_dist(&args.dist)?;
    let epsilon = parse_epsilon(&args.epsilon)?;
    let profile = BuyerProfile::new(epsilon, args.k)?;

    let truncation = match truncated_expectation(&dist, epsilon) {
        Ok(t) => Some(t),
        Err(Error::NoFiniteTruncation { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let buyer_max = match &truncation {
        Some(t) => Price::Finite(profile.k * t.e_epsilon),
        None => Price::Unbounded,
    };
    let seller_committed = seller_min_price_committed(&dist);
    let (seller_closeable, seller_closeable_note) = if args.k >= 1.0
        && (epsilon == 0.0 || args.k > 1.0)
    {
        (Some(seller_quote_closeable(&dist, epsilon, args.k)?), None)
    } else {
        (
                None,
                Some(format!(
                    "closeable quote needs k >= 1 (strictly > 1 when epsilon > 0); k = {} does not qualify",
                    args.k
                )),
            )
    };
    let verdict = args.mu.map(|mu| {
        if buyer_accepts(&dist, &profile, mu) {
            "accept"
        } else {
            "reject"
        }
    });

    let report = PriceReport {
        command: "price",
        dist: args.dist.clone(),
        distribution: dist,
        epsilon,
        k: args.k,
        mu: args.mu,
        n_epsilon: truncation.as_ref().map(|t| t.n_epsilon),
        e_epsilon: truncation.as_ref().map(|t| t.e_epsilon),
        retained_mass: truncation.as_ref().map(|t| t.retained_mass),
        buyer_max_price: buyer_max,
        seller_committed,
        seller_closeable,
        seller_closeable_note,
        verdict,
    };

    match format {
        OutputFormat::Json => println!("{}", serde_json::to_string(&report)?),
        OutputFormat::Csv => {
            println!(
                "dist,epsilon,k,mu,n_epsilon,e_epsilon,retained_mass,buyer_max_price,seller_committed,seller_closeable,verdict"
            );
            println!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.dist,
                report.epsilon,
                report.k,
                opt_string(&report.mu),
                opt_string(&report.n_epsilon),
                opt_string(&report.e_epsilon),
                opt_string(&report.retained_mass),
                report.buyer_max_price,
                report.seller_committed,
                report
                    .seller_closeable
                    .map(|p| p.to_string())
                    .unwrap_or_default(),
                report.verdict.unwrap_or_default()
            );
        }
        OutputFormat::Table => {
            println!("distribution      {}", report.dist);
            println!("epsilon           {}", report.epsilon);
            println!("k                 {}", report.k);
            match &truncation {
                Some(t) => {
                    println!("n_epsilon         {}", t.n_epsilon);
                    println!("e_epsilon         {}", t.e_epsilon);
                    println!("retained_mass     {}", t.retained_mass);
                }
                None => {
                    println!("n_epsilon         none (no finite truncation at epsilon = 0)");
                }
            }
            println!("buyer_max_price   {}", report.buyer_max_price);
            println!("seller_committed  {}", report.seller_committed);
            match (&report.seller_closeable, &report.seller_closeable_note) {
                (Some(q), _) => println!("seller_closeable  {q}"),
                (None, Some(note)) => println!("seller_closeable  n/a ({note})"),
                (None, None) => {}
            }
            if let (Some(mu), Some(v)) = (report.mu, report.verdict) {
                println!(
                    "verdict           {v} (mu = {mu} vs buyer max {})",
                    report.buyer_max_price
                );
            }
        }
    }
    Ok(())
}

fn opt_string<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct FellerReport {
    command: &'static str,
    n: u64,
    fee_per_play: f64,
}

#[derive(Serialize)]
struct SimulateReport {
    command: &'static str,
    report: truncprice::SessionReport,
}

#[derive(Serialize)]
struct TwoBankerWrapper {
    command: &'static str,
    report: truncprice::TwoBankerReport,
}

#[derive(Serialize)]
struct DecomposeReport {
    command: &'static str,
    report: truncprice::DecompositionReport,
}

fn cmd_stp(format: OutputFormat, command: StpCommand) -> anyhow::Result<()> {
    match command {
        StpCommand::Feller { n } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let report = FellerReport {
                command: "stp feller",
                n,
                fee_per_play: feller_fair_fee(n),
            };
            match format {
                OutputFormat::Json => println!("{}", serde_json::to_string(&report)?),
                OutputFormat::Csv => {
                    println!("n,fee_per_play");
                    println!("{},{}", report.n, report.fee_per_play);
                }
                OutputFormat::Table => {
                    println!("plays         {}", report.n);
                    println!("fee_per_play  {}", report.fee_per_play);
                }
            }
        }
        StpCommand::Simulate {
            n,
            seed,
            max_tosses,
        } => {
            let config = SimulationConfig::with_max_tosses(seed, n, max_tosses)?;
            let report = SimulateReport {
                command: "stp simulate",
                report: simulate_session(&config),
            };
            match format {
                OutputFormat::Json => println!("{}", serde_json::to_string(&report)?),
                OutputFormat::Csv => {
                    let r = &report.report;
                    println!("seed,generator,num_plays,max_tosses,total_payout,mean_payout,max_single_payout,toss_cap_hits");
                    println!(
                        "{},{},{},{},{},{},{},{}",
                        r.seed,
                        r.generator,
                        r.num_plays,
                        r.max_tosses,
                        r.total_payout,
                        r.mean_payout,
                        r.max_single_payout,
                        r.toss_cap_hits
                    );
                }
                OutputFormat::Table => {
                    let r = &report.report;
                    println!("seed               {}", r.seed);
                    println!("generator          {}", r.generator);
                    println!("num_plays          {}", r.num_plays);
                    println!("max_tosses         {}", r.max_tosses);
                    println!("total_payout       {}", r.total_payout);
                    println!("mean_payout        {}", r.mean_payout);
                    println!("max_single_payout  {}", r.max_single_payout);
                    println!("toss_cap_hits      {}", r.toss_cap_hits);
                }
            }
        }
        StpCommand::TwoBanker { n1, n2, seed } => {
            let a = SimulationConfig::new(seed, n1)?;
            let b = SimulationConfig::new(seed.wrapping_add(1), n2)?;
            let report = TwoBankerWrapper {
                command: "stp two-banker",
                report: two_banker_demo(&a, &b),
            };
            match format {
                OutputFormat::Json => println!("{}", serde_json::to_string(&report)?),
                OutputFormat::Csv => {
                    let r = &report.report;
                    println!("n1,n2,fee_per_play_a,fee_per_play_b,total_fee_separate,combined_plays,fee_per_play_combined,total_fee_combined,total_winnings");
                    println!(
                        "{},{},{},{},{},{},{},{},{}",
                        r.banker_a.num_plays,
                        r.banker_b.num_plays,
                        r.fee_per_play_a,
                        r.fee_per_play_b,
                        r.total_fee_separate,
                        r.combined_plays,
                        r.fee_per_play_combined,
                        r.total_fee_combined,
                        r.total_winnings
                    );
                }
                OutputFormat::Table => {
                    let r = &report.report;
                    println!("banker A plays          {}", r.banker_a.num_plays);
                    println!("banker B plays          {}", r.banker_b.num_plays);
                    println!("fee per play (A)        {}", r.fee_per_play_a);
                    println!("fee per play (B)        {}", r.fee_per_play_b);
                    println!("total fee, separate     {}", r.total_fee_separate);
                    println!("combined plays          {}", r.combined_plays);
                    println!("fee per play, combined  {}", r.fee_per_play_combined);
                    println!("total fee, combined     {}", r.total_fee_combined);
                    println!("empirical winnings      {}", r.total_winnings);
                    println!(
                        "seeds                   {} / {} ({})",
                        r.banker_a.seed, r.banker_b.seed, r.banker_a.generator
                    );
                }
            }
        }
        StpCommand::Decompose { depth } => {
            let report = DecomposeReport {
                command: "stp decompose",
                report: verify_decomposition(depth)?,
            };
            match format {
                OutputFormat::Json => println!("{}", serde_json::to_string(&report)?),
                OutputFormat::Csv => {
                    let r = &report.report;
                    let expectations: Vec<String> = r
                        .lottery_expectations
                        .iter()
                        .map(|e| e.to_string())
                        .collect();
                    println!("depth,sequences_checked,mismatches,lottery_expectations");
                    println!(
                        "{},{},{},{}",
                        r.depth,
                        r.sequences_checked,
                        r.mismatches,
                        expectations.join(";")
                    );
                }
                OutputFormat::Table => {
                    let r = &report.report;
                    println!("depth              {}", r.depth);
                    println!("sequences_checked  {}", r.sequences_checked);
                    println!("mismatches         {}", r.mismatches);
                    let all_one = r.lottery_expectations.iter().all(|&e| e == 1.0);
                    println!(
                        "lottery fairness   {} lotteries, all expectations exactly 1: {}",
                        r.lottery_expectations.len(),
                        all_one
                    );
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct OptionPriceReport {
    command: &'static str,
    density: ContinuousDensity,
    spec: OptionSpec,
    price: f64,
    mode: BoundMode,
    bounds: (f64, f64),
    quadrature_error: f64,
    degenerate: bool,
}

#[derive(Serialize)]
struct DivergeReport {
    command: &'static str,
    density: ContinuousDensity,
    strike: f64,
    entries: Vec<DivergenceEntry>,
}

fn cmd_option(format: OutputFormat, command: OptionCommand) -> anyhow::Result<()> {
    match command {
        OptionCommand::Price(args) => {
            let density = make_density(args.density, args.location, args.scale)?;
            let side = match args.side {
                Side::Call => OptionSide::Call,
                Side::Put => OptionSide::Put,
            };
            let spec = OptionSpec::new(args.spot, args.strike, args.rate, args.maturity, side)?;
            let mode = match args.mode {
                ModeKind::Epsilon => {
                    let text = args
                        .epsilon
                        .as_deref()
                        .context("--mode epsilon requires --epsilon")?;
                    BoundMode::epsilon_quantile(parse_epsilon(text)?)?
                }
                ModeKind::Multiple => {
                    BoundMode::explicit_multiple(args.upper_mult, args.lower_mult)?
                }
            };
            let priced = truncated_price(&density, &spec, &mode)?;
            if priced.degenerate {
                eprintln!(
                    "warning: truncation bounds [{}, {}] do not bracket the strike; price is 0",
                    priced.bounds.0, priced.bounds.1
                );
            }
            let report = OptionPriceReport {
                command: "option price",
                density,
                spec,
                price: priced.price,
                mode: priced.mode,
                bounds: priced.bounds,
                quadrature_error: priced.quadrature_error,
                degenerate: priced.degenerate,
            };
            match format {
                OutputFormat::Json => println!("{}", serde_json::to_string(&report)?),
                OutputFormat::Csv => {
                    println!("price,bound_lo,bound_hi,quadrature_error,degenerate");
                    println!(
                        "{},{},{},{},{}",
                        report.price,
                        report.bounds.0,
                        report.bounds.1,
                        report.quadrature_error,
                        report.degenerate
                    );
                }
                OutputFormat::Table => {
                    println!("density           {}", density_label(&report.density));
                    println!("side              {:?}", spec.side);
                    println!("spot              {}", spec.spot);
                    println!("strike            {}", spec.strike);
                    println!("rate              {}", spec.rate);
                    println!("maturity          {}", spec.maturity);
                    println!("mode              {}", mode_label(&report.mode));
                    println!(
                        "bounds            [{}, {}]",
                        report.bounds.0, report.bounds.1
                    );
                    println!("price             {}", report.price);
                    println!("quadrature_error  {}", report.quadrature_error);
                    if report.degenerate {
                        println!("degenerate        true (bounds do not bracket the strike)");
                    }
                }
            }
        }
        OptionCommand::Diverge {
            density,
            location,
            scale,
            strike,
            uppers,
        } => {
            let density = make_density(density, location, scale)?;
            let entries = divergence_table(&density, strike, &uppers)?;
            let report = DivergeReport {
                command: "option diverge",
                density,
                strike,
                entries,
            };
            match format {
                OutputFormat::Json => println!("{}", serde_json::to_string(&report)?),
                OutputFormat::Csv => {
                    println!("upper,partial_price");
                    for e in &report.entries {
                        println!("{},{}", e.upper, e.partial_price);
                    }
                }
                OutputFormat::Table => {
                    println!("density  {}", density_label(&report.density));
                    println!("strike   {}", report.strike);
                    println!("{:>16}  {:>20}", "upper", "partial_price");
                    for e in &report.entries {
                        println!("{:>16}  {:>20}", e.upper, e.partial_price);
                    }
                }
            }
        }
    }
    Ok(())
}

fn density_label(d: &ContinuousDensity) -> String {
    match d {
        ContinuousDensity::Cauchy { location, scale } => {
            format!("cauchy(location={location}, scale={scale})")
        }
        ContinuousDensity::Gaussian { mean, stddev } => {
            format!("gaussian(mean={mean}, stddev={stddev})")
        }
    }
}

fn mode_label(m: &BoundMode) -> String {
    match m {
        BoundMode::EpsilonQuantile { epsilon } => format!("epsilon quantile (epsilon={epsilon})"),
        BoundMode::ExplicitMultiple {
            upper_mult,
            lower_mult,
        } => format!("explicit multiples (upper={upper_mult} S, lower={lower_mult} S)"),
    }
}
