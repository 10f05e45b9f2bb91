//! `hyperkod`: inspect classes, certify Kodaira verdicts, run grids and oracles.
//!
//! Exit codes: 0 certified (or success), 1 error, 2 inconclusive / row errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hyperkod::certificate::{self, Fraction};
use hyperkod::formulas::{
    canonical_class_hg, canonical_class_hgn, canonical_class_hgn_symmetric, canonical_class_rational_quotient,
    delta_irr_decomposition, delta_irr_decomposition_symmetric, lambda_pullback, lambda_pullback_symmetric,
    lambda_relation, ramification_divisor, ramification_divisor_symmetric,
};
use hyperkod::picard::symmetrize;
use hyperkod::pullback::{
    enumerate_w_oracle, logan_class_with, restrict_to_hyperelliptic_symmetric, symmetrized_w_closed_form,
    ORACLE_MAX_POINTS,
};
use hyperkod::reidtai::{classify_smooth_hyperelliptic_action, seniority, AutomorphismAction};
use hyperkod::render::{class_latex, class_text, sym_class_latex, sym_class_text};
use hyperkod::report::{render_grid, GridRow, ReportFormat};
use hyperkod::verifier::{classify_kodaira_with, grid_verify, AffineN, FeasibleSet, GridSpec, VerifyOptions};
use hyperkod::{
    DivisorClass, Error, LambdaVariant, LoganTerms, Rational, SpaceVariant, SymmetricDivisorClass, Verdict,
};

const EXIT_ERROR: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "hyperkod", version, about = "Exact Kodaira-dimension certificates for pointed hyperelliptic moduli")]
struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a divisor class.
    Class(ClassArgs),
    /// Classify one (g, n) and optionally write its certificate.
    Verify(VerifyArgs),
    /// Classify a range of (g, n) cells into a report.
    Grid(GridArgs),
    /// Compare the closed form for W with brute-force enumeration.
    Oracle(OracleArgs),
    /// Reid–Tai ages of a cyclic action.
    Age(AgeArgs),
    /// Re-validate a certificate file from scratch.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    HbarG,
    HbarGn,
    MbarGn,
    M0quot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassName {
    #[value(name = "K-coarse")]
    KCoarse,
    #[value(name = "K-stack")]
    KStack,
    #[value(name = "lambda-relation")]
    LambdaRelation,
    #[value(name = "delta-irr")]
    DeltaIrr,
    #[value(name = "R")]
    R,
    #[value(name = "K-rational-quotient")]
    KRationalQuotient,
    #[value(name = "Wg")]
    Wg,
    #[value(name = "W")]
    W,
}

#[derive(Args)]
struct Common {
    /// faithful or printed λ pullback.
    #[arg(long)]
    variant: Option<LambdaVariant>,
    /// rational-tails or printed.
    #[arg(long)]
    logan_terms: Option<LoganTerms>,
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long, value_enum)]
    space: SpaceArg,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum)]
    name: ClassName,
    /// text, latex or json.
    #[arg(long)]
    format: Option<ReportFormat>,
    /// Print orbit sums under S_n instead of labelled generators.
    #[arg(long)]
    symmetric: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    common: Common,
    /// Write the JSON certificate here.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Inclusive genus range, e.g. `2..4`.
    #[arg(long)]
    g_range: Option<String>,
    /// Lowest n per genus, e.g. `g+2` or `4g+5`.
    #[arg(long)]
    n_lo: Option<String>,
    /// Highest n per genus, e.g. `4g+20`.
    #[arg(long)]
    n_hi: Option<String>,
    #[command(flatten)]
    common: Common,
    /// json, csv, latex or text.
    #[arg(long)]
    format: Option<ReportFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    max_points: Option<u32>,
    #[arg(long)]
    logan_terms: Option<LoganTerms>,
}

#[derive(Args)]
struct AgeArgs {
    /// Order m of the cyclic group.
    #[arg(long, conflicts_with = "hyperelliptic")]
    order: Option<u64>,
    /// Comma-separated eigenvalue exponents, e.g. `2,3,4`.
    #[arg(long, requires = "order", allow_hyphen_values = true)]
    exponents: Option<String>,
    /// Use the tangent action of x ↦ ζ_m x on a smooth genus-g curve.
    #[arg(long, requires_all = ["g", "m"])]
    hyperelliptic: bool,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Args)]
struct CheckArgs {
    certificate: PathBuf,
}

/// Values a configuration file may supply. Every field is optional and each
/// has a fixed default, so an empty file plus the required flags is runnable.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    g: Option<u32>,
    n: Option<u32>,
    g_range: Option<String>,
    n_lo: Option<String>,
    n_hi: Option<String>,
    lambda_variant: Option<LambdaVariant>,
    logan_terms: Option<LoganTerms>,
    format: Option<ReportFormat>,
    out: Option<PathBuf>,
    parallel: Option<usize>,
    max_points: Option<u32>,
}

impl RunConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    fn options(&self, common: &Common) -> VerifyOptions {
        VerifyOptions {
            lambda_variant: common.variant.or(self.lambda_variant).unwrap_or_default(),
            logan_terms: common.logan_terms.or(self.logan_terms).unwrap_or_default(),
        }
    }
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T> {
    flag.or(file).ok_or_else(|| anyhow!("--{name} is required"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Class(a) => cmd_class(&cfg, a),
        Command::Verify(a) => cmd_verify(&cfg, a),
        Command::Grid(a) => cmd_grid(&cfg, a),
        Command::Oracle(a) => cmd_oracle(&cfg, a),
        Command::Age(a) => cmd_age(a),
        Command::Check(a) => cmd_check(a),
    }
}

enum Rendered {
    Labelled(DivisorClass),
    Symmetric(SymmetricDivisorClass),
}

#[derive(Serialize)]
struct ClassTerm {
    label: String,
    coefficient: Fraction,
}

#[derive(Serialize)]
struct ClassJson {
    space: String,
    symmetric: bool,
    terms: Vec<ClassTerm>,
}

fn build_class(space: SpaceArg, name: ClassName, g: u32, n: Option<u32>, symmetric: bool, opts: &VerifyOptions) -> Result<Rendered> {
    use ClassName::*;
    let need_n = || n.ok_or_else(|| anyhow!("--n is required on this space"));
    let unavailable = || anyhow!("class {name:?} is not available on {space:?}");
    let sym = |x: hyperkod::Result<SymmetricDivisorClass>| Ok(Rendered::Symmetric(x?));
    let lab = |x: hyperkod::Result<DivisorClass>| -> Result<Rendered> {
        let x = x?;
        Ok(if symmetric { Rendered::Symmetric(symmetrize(&x)?) } else { Rendered::Labelled(x) })
    };
    let k_variant = if name == KStack { SpaceVariant::Stack } else { SpaceVariant::Coarse };
    match (space, name) {
        (SpaceArg::HbarG, KCoarse | KStack) => lab(canonical_class_hg(g, k_variant)),
        (SpaceArg::HbarG, LambdaRelation) => lab(lambda_relation(g)),
        (SpaceArg::HbarG, DeltaIrr) => lab(delta_irr_decomposition(g, None)),
        (SpaceArg::HbarG, R) => lab(ramification_divisor(g, None)),
        (SpaceArg::HbarGn, KCoarse | KStack) if symmetric => sym(canonical_class_hgn_symmetric(g, need_n()?, k_variant)),
        (SpaceArg::HbarGn, KCoarse | KStack) => lab(canonical_class_hgn(g, need_n()?, k_variant)),
        (SpaceArg::HbarGn, LambdaRelation) if symmetric => sym(lambda_pullback_symmetric(g, need_n()?, opts.lambda_variant)),
        (SpaceArg::HbarGn, LambdaRelation) => lab(lambda_pullback(g, need_n()?, opts.lambda_variant)),
        (SpaceArg::HbarGn, DeltaIrr) if symmetric => sym(delta_irr_decomposition_symmetric(g, need_n()?)),
        (SpaceArg::HbarGn, DeltaIrr) => lab(delta_irr_decomposition(g, Some(need_n()?))),
        (SpaceArg::HbarGn, R) if symmetric => sym(ramification_divisor_symmetric(g, need_n()?)),
        (SpaceArg::HbarGn, R) => lab(ramification_divisor(g, Some(need_n()?))),
        (SpaceArg::HbarGn, W) => {
            let w = symmetrized_w_closed_form(g, need_n()?, opts.logan_terms)?;
            sym(restrict_to_hyperelliptic_symmetric(&w.class, opts.lambda_variant))
        }
        (SpaceArg::MbarGn, Wg) => {
            if n.is_some_and(|n| n != g) {
                bail!("Wg lives on Mbar_{{g,g}}; pass --n {g} or omit --n");
            }
            lab(logan_class_with(g, opts.logan_terms).map(|l| l.base))
        }
        (SpaceArg::MbarGn, W) => sym(symmetrized_w_closed_form(g, need_n()?, opts.logan_terms).map(|w| w.class)),
        (SpaceArg::M0quot, KRationalQuotient) => lab(canonical_class_rational_quotient(g)),
        _ => Err(unavailable()),
    }
}

fn cmd_class(cfg: &RunConfig, a: ClassArgs) -> Result<ExitCode> {
    let g = required(a.g, cfg.g, "g")?;
    let n = a.n.or(cfg.n);
    let opts = cfg.options(&a.common);
    let class = build_class(a.space, a.name, g, n, a.symmetric, &opts)?;
    let out = match (a.format.or(cfg.format).unwrap_or(ReportFormat::Text), &class) {
        (ReportFormat::Text, Rendered::Labelled(x)) => class_text(x),
        (ReportFormat::Text, Rendered::Symmetric(x)) => sym_class_text(x),
        (ReportFormat::Latex, Rendered::Labelled(x)) => class_latex(x),
        (ReportFormat::Latex, Rendered::Symmetric(x)) => sym_class_latex(x),
        (ReportFormat::Json, _) => {
            let (space, symmetric, terms) = match &class {
                Rendered::Labelled(x) => (
                    x.space(),
                    false,
                    x.iter().map(|(l, c)| ClassTerm { label: l.to_string(), coefficient: Fraction(c.clone()) }).collect(),
                ),
                Rendered::Symmetric(x) => (
                    x.space(),
                    true,
                    x.iter().map(|(l, c)| ClassTerm { label: l.to_string(), coefficient: Fraction(c.clone()) }).collect(),
                ),
            };
            serde_json::to_string_pretty(&ClassJson { space: space.to_string(), symmetric, terms })?
        }
        (ReportFormat::Csv, _) => bail!("class output supports text, latex and json"),
    };
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn exit_for(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
        Verdict::GeneralType | Verdict::NonnegativeKodaira => ExitCode::SUCCESS,
    }
}

fn cmd_verify(cfg: &RunConfig, a: VerifyArgs) -> Result<ExitCode> {
    let g = required(a.g, cfg.g, "g")?;
    let n = required(a.n, cfg.n, "n")?;
    let opts = cfg.options(&a.common);
    let cert = classify_kodaira_with::<Rational>(g, n, &opts)?;
    println!("g = {g}, n = {n} ({} λ, {} W terms)", opts.lambda_variant, opts.logan_terms);
    println!("verdict: {}", cert.verdict);
    match &cert.interval {
        FeasibleSet::Empty => println!("feasible ε: none in [0, 1)"),
        FeasibleSet::Interval { lo, hi, hi_closed } => {
            println!("feasible ε: [{lo}, {hi}{}", if *hi_closed { "]" } else { ")" })
        }
    }
    if let Some(eps) = &cert.epsilon {
        println!("chosen ε: {eps}");
    }
    let binding: Vec<String> = cert.binding_constraints.iter().map(ToString::to_string).collect();
    println!("binding: {}", if binding.is_empty() { "-".into() } else { binding.join(" ") });
    if !cert.w_monotone {
        eprintln!("warning: W tail coefficients are not monotone for this term set");
    }
    if let Some(path) = &a.emit {
        fs::write(path, certificate::to_json(&cert)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(exit_for(cert.verdict))
}

fn parse_g_range(s: &str) -> Result<(u32, u32)> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| anyhow!("expected a genus range like `2..4`, got `{s}`"))?;
    let lo: u32 = lo.trim().parse().with_context(|| format!("bad range start in `{s}`"))?;
    let hi: u32 = hi.trim().parse().with_context(|| format!("bad range end in `{s}`"))?;
    if lo > hi {
        bail!("empty genus range `{s}`");
    }
    Ok((lo, hi))
}

fn cmd_grid(cfg: &RunConfig, a: GridArgs) -> Result<ExitCode> {
    let (g_lo, g_hi) = parse_g_range(&required(a.g_range, cfg.g_range.clone(), "g-range")?)?;
    let affine = |flag: Option<String>, file: &Option<String>, default: &str| -> Result<AffineN> {
        Ok(flag.or_else(|| file.clone()).as_deref().unwrap_or(default).parse::<AffineN>()?)
    };
    let spec = GridSpec {
        g_lo,
        g_hi,
        n_lo: affine(a.n_lo, &cfg.n_lo, "g+2")?,
        n_hi: affine(a.n_hi, &cfg.n_hi, "4g+20")?,
    };
    let opts = cfg.options(&a.common);
    let threads = a.parallel.or(cfg.parallel).unwrap_or(0);
    let cells = grid_verify::<Rational>(&spec.cells(), &opts, threads)?;
    let rows: Vec<GridRow> = cells.iter().map(GridRow::from_cell).collect();
    let format = a.format.or(cfg.format).unwrap_or(ReportFormat::Csv);
    let report = render_grid(&rows, format)?;
    match a.out.or_else(|| cfg.out.clone()) {
        Some(path) => fs::write(&path, report).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{report}"),
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed", rows.len());
        return Ok(ExitCode::from(EXIT_INCONCLUSIVE));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(cfg: &RunConfig, a: OracleArgs) -> Result<ExitCode> {
    let g = required(a.g, cfg.g, "g")?;
    let n = required(a.n, cfg.n, "n")?;
    let max_points = a.max_points.or(cfg.max_points).unwrap_or(ORACLE_MAX_POINTS);
    let terms = a.logan_terms.or(cfg.logan_terms).unwrap_or_default();
    let closed = symmetrized_w_closed_form::<Rational>(g, n, terms)?;
    let oracle = enumerate_w_oracle::<Rational>(g, n, terms, max_points)?;
    let mut labels: Vec<_> = closed.class.iter().chain(oracle.class.iter()).map(|(l, _)| l.clone()).collect();
    labels.sort();
    labels.dedup();
    let mut differ = 0;
    for label in &labels {
        let (c, o) = (closed.class.coefficient(label), oracle.class.coefficient(label));
        if c != o {
            println!("{label}: closed form {c}, enumeration {o}");
            differ += 1;
        }
    }
    if differ > 0 {
        println!("{differ} of {} coefficients differ", labels.len());
        return Ok(ExitCode::from(EXIT_ERROR));
    }
    println!("closed form = enumeration on Mbar_{{{g},{n}}} ({} coefficients, {terms} terms)", labels.len());
    Ok(ExitCode::SUCCESS)
}

fn parse_exponents(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| anyhow!("malformed exponent `{t}` in `{s}`")))
        .collect()
}

fn cmd_age(a: AgeArgs) -> Result<ExitCode> {
    let report = if a.hyperelliptic {
        let (g, m) = (a.g.expect("clap enforces --g"), a.m.expect("clap enforces --m"));
        classify_smooth_hyperelliptic_action::<Rational>(g, m)?
    } else {
        let order = a.order.ok_or_else(|| anyhow!("pass --order and --exponents, or --hyperelliptic --g --m"))?;
        let exponents = parse_exponents(a.exponents.as_deref().unwrap_or(""))?;
        seniority(&AutomorphismAction::new(order, exponents)?)
    };
    println!("verdict: {}", report.verdict);
    println!("minimal age: {}", report.minimal_age);
    println!("{:>4}  age", "k");
    for (k, age) in &report.ages {
        println!("{k:>4}  {age}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(a: CheckArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&a.certificate).with_context(|| format!("reading {}", a.certificate.display()))?;
    let dto = certificate::from_json(&text)?;
    certificate::recheck(&dto).map_err(|e: Error| anyhow!("certificate rejected: {e}"))?;
    println!("ok: g = {}, n = {}, {}", dto.g, dto.n, dto.verdict);
    Ok(ExitCode::SUCCESS)
}
