mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use skewtab::asymptotics::{family_records, family_registry, find_family, DEFAULT_CELL_BUDGET};
use skewtab::estimates::{
    b_upper, bound_rows, calibrate_a_exact, count_omega, omega_constraints, partial_sums_by_length, truncated_sum,
    BoundParams, DiagnosticSpec, DEFAULT_MSP_FLOOR,
};
use skewtab::exact_count::{a_ratio, f_skew, level_set_distribution, CountMethod, ENUMERATION_CELL_LIMIT};
use skewtab::kimoh::{kimoh_count, kimoh_shape, log_kimoh_count, KimOhParams};
use skewtab::rational::{parse_rational, to_decimal, to_fraction};
use skewtab::{selftest, Error, Partition, Result, SkewShape};

use output::{fmt_f64, Format, Output, Table};

#[derive(Parser)]
#[command(name = "skewtab", version, about = "Exact and log-space counts of skew standard Young tableaux")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true, env = "SKEWTAB_JOBS")]
    jobs: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "plain", env = "SKEWTAB_OUT")]
    out: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Dp,
    Det,
    Charsum,
    Enum,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Number of standard tableaux of a skew shape.
    Count {
        #[arg(long)]
        lambda: Partition,
        #[arg(long, default_value = "")]
        mu: Partition,
        #[arg(long, value_enum, default_value = "dp")]
        method: MethodArg,
    },
    /// The exact ratio |μ|!·f^{λ/μ} / (f^λ f^μ).
    Ratio {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
    },
    /// Exact law of the level set of size k of a uniform tableau of shape λ.
    Levelset {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        k: usize,
    },
    /// Character sum restricted to classes of absolute length at most r.
    Truncate {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        r: usize,
    },
    /// Character sum split into absolute-length bands.
    Bands {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        r: usize,
        /// Row/column cap for λ; defaults to ⌈L·√n⌉.
        #[arg(long)]
        alpha: Option<usize>,
        /// Row/column cap for μ; defaults to ⌈√k⌉.
        #[arg(long)]
        beta: Option<usize>,
        /// Balancedness constant L.
        #[arg(long = "balance", default_value_t = 1.0, env = "SKEWTAB_L")]
        balance: f64,
    },
    /// Per-class terms of the upper bound B_{λ/μ}.
    Bounds {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        mu: Partition,
        /// Constant of the rows/columns/length bound.
        #[arg(long, env = "SKEWTAB_A")]
        a: f64,
        /// Enable the Roichman bound with constants `b,q`.
        #[arg(long, env = "SKEWTAB_ROICHMAN")]
        roichman: Option<String>,
        /// Enable the fixed-point bound.
        #[arg(long)]
        msp: bool,
        /// Smallest degree at which the fixed-point bound is used.
        #[arg(long, default_value_t = DEFAULT_MSP_FLOOR, env = "SKEWTAB_MSP_FLOOR")]
        msp_floor: usize,
    },
    /// Permutations with ⌊ηk⌋ fixed points and absolute length at least ⌈(1−η)²k⌉.
    Omega {
        #[arg(long)]
        k: usize,
        /// η in (0, 1/4), as a decimal or `p/q`.
        #[arg(long, default_value = "1/8", env = "SKEWTAB_ETA")]
        eta: String,
    },
    /// Smallest constant (in steps of 1/1000) for which the rows/columns/length bound holds.
    CalibrateA {
        #[arg(long)]
        max_n: usize,
    },
    /// Product-formula count for the five-parameter shape family.
    Kimoh {
        /// Parameters `a,b,c,d,e`.
        #[arg(long)]
        params: KimOhParams,
        /// Print the natural log instead of the exact count.
        #[arg(long)]
        log: bool,
        /// Also print the shape as outer and inner partitions.
        #[arg(long)]
        shape: bool,
    },
    /// log A along a tabulated shape family.
    Family {
        /// List the registered families.
        #[arg(long)]
        list: bool,
        #[arg(long, required_unless_present = "list")]
        id: Option<String>,
        /// Growth parameters, e.g. `1e4,1e5`.
        #[arg(long, value_delimiter = ',', value_parser = parse_count, required_unless_present = "list")]
        n: Vec<u64>,
        /// Maximum number of cells of λ.
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET, env = "SKEWTAB_CELL_BUDGET")]
        cell_budget: u128,
    },
    /// Exhaustive invariant checks over all diagrams up to a size.
    Selftest {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.trim().parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a natural number"))?;
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 9_007_199_254_740_992.0 {
        Ok(v as u64)
    } else {
        Err(format!("`{s}` is not a natural number"))
    }
}

fn ratio_cells(q: &BigRational) -> [String; 2] {
    [to_fraction(q), to_decimal(q)]
}

fn count(lambda: Partition, mu: Partition, method: MethodArg) -> Result<Output> {
    let shape = SkewShape::new(lambda, mu)?;
    let methods: Vec<CountMethod> = match method {
        MethodArg::Dp => vec![CountMethod::ChainDp],
        MethodArg::Det => vec![CountMethod::Determinant],
        MethodArg::Charsum => vec![CountMethod::CharSum],
        MethodArg::Enum => vec![CountMethod::Enumerate],
        MethodArg::All => CountMethod::ALL
            .into_iter()
            .filter(|m| *m != CountMethod::Enumerate || shape.cells() <= ENUMERATION_CELL_LIMIT)
            .collect(),
    };
    let mut table = Table::new(&["method", "count"]);
    let mut values = Vec::new();
    for m in methods {
        let v = f_skew(shape.outer(), shape.inner(), m)?;
        table.push(vec![m.name().into(), v.to_string()]);
        values.push(v);
    }
    if values.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::SelfTest(format!("counting methods disagree on {shape}")));
    }
    if method == MethodArg::All {
        Ok(Output::table(table))
    } else {
        Ok(Output::with_plain(table, values[0].to_string()))
    }
}

fn ratio(lambda: Partition, mu: Partition) -> Result<Output> {
    let q = a_ratio(&lambda, &mu)?;
    let [frac, dec] = ratio_cells(&q);
    let mut table = Table::new(&["lambda", "mu", "ratio", "decimal"]);
    table.push(vec![format!("{lambda:#}"), format!("{mu:#}"), frac.clone(), dec.clone()]);
    Ok(Output::with_plain(table, format!("{frac}\n{dec}")))
}

fn levelset(lambda: Partition, k: usize) -> Result<Output> {
    let mut table = Table::new(&["mu", "numerator", "denominator", "decimal"]);
    for (mu, q) in level_set_distribution(&lambda, k)? {
        table.push(vec![format!("{mu:#}"), q.numer().to_string(), q.denom().to_string(), to_decimal(&q)]);
    }
    Ok(Output::table(table))
}

fn truncate(lambda: Partition, mu: Partition, r: usize) -> Result<Output> {
    let q = truncated_sum(&lambda, &mu, r)?;
    let [frac, dec] = ratio_cells(&q);
    let mut table = Table::new(&["lambda", "mu", "r", "sum", "decimal"]);
    table.push(vec![format!("{lambda:#}"), format!("{mu:#}"), r.to_string(), frac.clone(), dec.clone()]);
    Ok(Output::with_plain(table, format!("{frac}\n{dec}")))
}

fn ceil_sqrt(x: f64) -> usize {
    x.sqrt().ceil() as usize
}

fn bands(
    lambda: Partition,
    mu: Partition,
    r: usize,
    alpha: Option<usize>,
    beta: Option<usize>,
    balance: f64,
) -> Result<Output> {
    if !(balance > 0.0) {
        return Err(Error::Precondition(format!("balance constant must be positive, got {balance}")));
    }
    let (n, k) = (lambda.size(), mu.size());
    let spec = DiagnosticSpec {
        alpha_of_n: alpha.unwrap_or_else(|| ceil_sqrt(balance * balance * n as f64).min(n)),
        beta_of_k: beta.unwrap_or_else(|| ceil_sqrt(k as f64)),
        r,
    };
    for warning in spec.range_warnings(n, k) {
        eprintln!("warning: {warning}");
    }
    let report = partial_sums_by_length(&lambda, &mu, spec)?;
    let mut table = Table::new(&["scheme", "min_length", "max_length", "sum", "decimal"]);
    for band in &report.bands {
        let [frac, dec] = ratio_cells(&band.sum);
        table.push(vec![
            band.scheme.name().into(),
            band.min_length.to_string(),
            band.max_length.to_string(),
            frac,
            dec,
        ]);
    }
    let [frac, dec] = ratio_cells(&report.total);
    table.push(vec!["total".into(), "0".into(), k.to_string(), frac, dec]);
    Ok(Output::table(table))
}

fn parse_roichman(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Precondition(format!("expected roichman constants `b,q`, got `{s}`"));
    let (b, q) = s.split_once(',').ok_or_else(bad)?;
    Ok((b.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn bounds(
    lambda: Partition,
    mu: Partition,
    a: f64,
    roichman: Option<String>,
    msp: bool,
    msp_floor: usize,
) -> Result<Output> {
    let mut params = BoundParams::fs_only(a);
    if let Some(spec) = roichman {
        let (b, q) = parse_roichman(&spec)?;
        params = params.with_roichman(b, q);
    }
    params.enable_msp = msp;
    params.msp_floor = msp_floor;
    let rows = bound_rows(&lambda, &mu, &params)?;
    let mut table = Table::new(&["class", "class_size", "u_lambda", "u_mu", "term"]);
    for row in rows {
        table.push(vec![
            format!("{:#}", row.class.cycles()),
            row.class_size.to_string(),
            fmt_f64(row.u_lambda),
            fmt_f64(row.u_mu),
            fmt_f64(row.term),
        ]);
    }
    let log_b = b_upper(&lambda, &mu, &params)?;
    let mut plain = Output::table(table.clone()).render(Format::Plain);
    plain.push_str(&format!("log_b\t{}", fmt_f64(log_b)));
    Ok(Output::with_plain(table, plain))
}

fn omega(k: usize, eta: &str) -> Result<Output> {
    let eta = parse_rational(eta)?;
    let (fixed, min_length) = omega_constraints(k, &eta)?;
    let value = count_omega(k, &eta)?;
    let mut table = Table::new(&["k", "eta", "fixed_points", "min_length", "count"]);
    table.push(vec![k.to_string(), to_fraction(&eta), fixed.to_string(), min_length.to_string(), value.to_string()]);
    Ok(Output::with_plain(table, value.to_string()))
}

fn calibrate(max_n: usize) -> Result<Output> {
    let a = calibrate_a_exact(max_n)?;
    let text = format!("{:.3}", to_decimal(&a).parse::<f64>().unwrap_or(f64::NAN));
    let mut table = Table::new(&["max_n", "a"]);
    table.push(vec![max_n.to_string(), text.clone()]);
    Ok(Output::with_plain(table, text))
}

fn kimoh(params: KimOhParams, log: bool, shape: bool) -> Result<Output> {
    let mut header = vec!["params"];
    let mut row = vec![params.to_string()];
    let mut plain = Vec::new();
    if log {
        let value = log_kimoh_count(&params);
        header.extend(["log_count", "err_budget"]);
        row.extend([fmt_f64(value.value), fmt_f64(value.abs_error_budget)]);
        plain.push(fmt_f64(value.value));
    } else {
        let value = kimoh_count(&params)?.to_string();
        header.push("count");
        row.push(value.clone());
        plain.push(value);
    }
    if shape {
        let s = kimoh_shape(&params);
        let (outer, inner) = (format!("{:#}", s.outer()), format!("{:#}", s.inner()));
        header.extend(["lambda", "mu"]);
        row.extend([outer.clone(), inner.clone()]);
        plain.extend([outer, inner]);
    }
    let mut table = Table::new(&header);
    table.push(row);
    Ok(Output::with_plain(table, plain.join("\n")))
}

fn family(list: bool, id: Option<String>, ns: Vec<u64>, cell_budget: u128) -> Result<Output> {
    if list {
        let mut table = Table::new(&["id", "a", "b", "c", "d", "e", "leading"]);
        for fam in family_registry() {
            let mut row = vec![fam.id.to_string()];
            row.extend(fam.params.iter().map(|m| m.to_string()));
            row.push(fam.leading.to_string());
            table.push(row);
        }
        return Ok(Output::table(table));
    }
    let fam = find_family(id.as_deref().unwrap_or_default())?;
    let records = family_records(&fam, &ns, cell_budget)?;
    let mut table = Table::new(&[
        "n",
        "a",
        "b",
        "c",
        "d",
        "e",
        "mu_size",
        "lambda_size",
        "log_a",
        "err_budget",
        "predicted",
    ]);
    for r in records {
        let mut row = vec![r.n.to_string()];
        row.extend(r.params.as_array().iter().map(|v| v.to_string()));
        row.extend([
            r.mu_size.to_string(),
            r.lambda_size.to_string(),
            fmt_f64(r.log_a.value),
            fmt_f64(r.log_a.abs_error_budget),
            fmt_f64(r.predicted),
        ]);
        table.push(row);
    }
    Ok(Output::table(table))
}

/// Returns the output and whether every check passed.
fn run_selftest(max_n: usize) -> Result<(Output, bool)> {
    let report = selftest::run(max_n)?;
    let mut table = Table::new(&["check", "cases", "status", "failure"]);
    let mut plain = String::new();
    for c in &report.checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let failure = c.failure.clone().unwrap_or_default();
        plain.push_str(&format!("{status} {} ({} cases)", c.name, c.cases));
        if !failure.is_empty() {
            plain.push_str(&format!(": {failure}"));
        }
        plain.push('\n');
        table.push(vec![c.name.to_string(), c.cases.to_string(), status.into(), failure]);
    }
    Ok((Output::with_plain(table, plain), report.passed()))
}

fn dispatch(command: Command) -> Result<(Output, bool)> {
    let ok = |o: Output| Ok((o, true));
    match command {
        Command::Count { lambda, mu, method } => ok(count(lambda, mu, method)?),
        Command::Ratio { lambda, mu } => ok(ratio(lambda, mu)?),
        Command::Levelset { lambda, k } => ok(levelset(lambda, k)?),
        Command::Truncate { lambda, mu, r } => ok(truncate(lambda, mu, r)?),
        Command::Bands { lambda, mu, r, alpha, beta, balance } => ok(bands(lambda, mu, r, alpha, beta, balance)?),
        Command::Bounds { lambda, mu, a, roichman, msp, msp_floor } => {
            ok(bounds(lambda, mu, a, roichman, msp, msp_floor)?)
        }
        Command::Omega { k, eta } => ok(omega(k, &eta)?),
        Command::CalibrateA { max_n } => ok(calibrate(max_n)?),
        Command::Kimoh { params, log, shape } => ok(kimoh(params, log, shape)?),
        Command::Family { list, id, n, cell_budget } => ok(family(list, id, n, cell_budget)?),
        Command::Selftest { max_n } => run_selftest(max_n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: could not configure {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command) {
        Ok((output, passed)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.render(cli.out).as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 1 } else { 2 })
        }
    }
}
