use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use cams_core::adjoint::{
    finite_difference_gradient, gradient_via_policy, relative_error, ButcherTableau, OdeProblem,
    PROBLEM_NAMES,
};
use cams_core::{
    crossover, execute, modified_cost, revolve_cost, unit_cost, CamsTables, CheckpointType, CountingEngine,
    Policy, Schedule, SchemeInfo, Variant,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cams", version, about = "Checkpoint schedules for adjoints of multistage integrators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recomputation counts as CSV: m,s,l,algorithm,recomputations
    CostTable(CostTableArgs),
    /// Print the schedule of one policy
    Schedule(ScheduleArgs),
    /// Replay a JSON schedule and print its metrics
    Simulate(SimulateArgs),
    /// Smallest step count where solution-only checkpoints stop losing
    Crossover(CrossoverArgs),
    /// Gradient of a small ODE under a policy, checked against finite differences
    AdjointDemo(AdjointArgs),
}

/// `N` or `A:B`, both inclusive.
#[derive(Clone, Debug)]
struct Span(RangeInclusive<usize>);

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("'{x}': {e}"));
        let (a, b) = match s.split_once(':') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(s)?, num(s)?),
        };
        if a == 0 || a > b {
            return Err(format!("'{s}' must be N or A:B with 1 <= A <= B"));
        }
        Ok(Span(a..=b))
    }
}

#[derive(Args)]
struct SchemeArgs {
    /// Stages per step
    #[arg(short = 'l', long, default_value_t = 1)]
    stages: usize,
    /// The last stage equals the step result
    #[arg(long)]
    stiffly_accurate: bool,
}

impl SchemeArgs {
    fn scheme(&self) -> Result<SchemeInfo> {
        Ok(SchemeInfo::new(self.stages, self.stiffly_accurate)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Revolve,
    Mrevolve,
    CamsSa,
    CamsGen,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Revolve => "revolve",
            Algorithm::Mrevolve => "mrevolve",
            Algorithm::CamsSa => "cams-sa",
            Algorithm::CamsGen => "cams-gen",
        }
    }
}

#[derive(Args)]
struct CostTableArgs {
    /// Steps, `N` or `A:B`
    #[arg(short = 'm', long)]
    steps: Span,
    /// Checkpoint memory in units of one solution, `N` or `A:B`
    #[arg(short = 'u', long)]
    units: Span,
    /// Stages per step
    #[arg(short = 'l', long, default_value_t = 1)]
    stages: usize,
    /// Algorithms to include
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algorithm::Revolve, Algorithm::Mrevolve, Algorithm::CamsSa, Algorithm::CamsGen])]
    algorithms: Vec<Algorithm>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(short = 'm', long)]
    steps: usize,
    #[arg(short = 'u', long)]
    units: usize,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// revolve, mrevolve, cams-sa, cams-gen or full-storage
    #[arg(long, default_value = "cams-gen")]
    variant: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct SimulateArgs {
    /// Schedule JSON file, `-` for standard input
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Args)]
struct CrossoverArgs {
    /// Total checkpoint memory in units
    #[arg(short = 'u', long)]
    units: usize,
    /// Extra stages beyond the first; a combined checkpoint then holds e + 2 units
    #[arg(short = 'e', long, conflicts_with_all = ["stages", "stiffly_accurate"])]
    extra_stages: Option<usize>,
    /// Stages per step, as an alternative to --extra-stages
    #[arg(short = 'l', long)]
    stages: Option<usize>,
    #[arg(long, requires = "stages")]
    stiffly_accurate: bool,
    /// Largest step count searched
    #[arg(long, default_value_t = 1_000_000)]
    limit: usize,
}

#[derive(Args)]
struct AdjointArgs {
    /// linear-scalar, linear-2d or gray-scott
    #[arg(long, default_value = "gray-scott")]
    problem: String,
    #[arg(long, default_value = "cams-gen")]
    policy: String,
    #[arg(short = 'u', long, default_value_t = 8)]
    units: usize,
    #[arg(short = 'm', long, default_value_t = 30)]
    steps: usize,
    /// rk4, midpoint or heun-sa
    #[arg(long, default_value = "rk4")]
    tableau: String,
    /// Largest accepted relative error against finite differences
    #[arg(long, default_value_t = 1e-5)]
    tolerance: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = io::stdout();
    let mut out = out.lock();
    let result = match cli.command {
        Command::CostTable(a) => cost_table(&a, &mut out),
        Command::Schedule(a) => schedule(&a, &mut out),
        Command::Simulate(a) => simulate(&a, &mut out),
        Command::Crossover(a) => cross(&a, &mut out),
        Command::AdjointDemo(a) => adjoint_demo(&a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn cost_table(a: &CostTableArgs, out: &mut impl Write) -> Result<()> {
    let l = a.stages;
    let g = SchemeInfo::new(l, false)?;
    let sa = SchemeInfo::new(l, true)?;
    let (max_m, max_s) = (*a.steps.0.end(), *a.units.0.end());
    let wants = |alg: Algorithm| a.algorithms.iter().any(|x| x.name() == alg.name());
    let tables = |scheme, variant| CamsTables::build(max_m, max_s, scheme, variant);
    let gen = wants(Algorithm::CamsGen).then(|| tables(g, Variant::Gen)).transpose()?;
    let csa = wants(Algorithm::CamsSa).then(|| tables(sa, Variant::Sa)).transpose()?;
    let combined = unit_cost(CheckpointType::SolutionWithStages, &g);

    writeln!(out, "m,s,l,algorithm,recomputations")?;
    for m in a.steps.0.clone() {
        for s in a.units.0.clone() {
            for &alg in &a.algorithms {
                let cost = match alg {
                    Algorithm::Revolve => Some(revolve_cost(m, s)?),
                    Algorithm::Mrevolve if s >= combined => Some(modified_cost(m, s / combined)?),
                    Algorithm::Mrevolve => None,
                    Algorithm::CamsSa => csa.as_ref().and_then(|t| t.total(m, s)),
                    Algorithm::CamsGen => gen.as_ref().and_then(|t| t.total(m, s)),
                };
                let cost = cost.map_or_else(|| "inf".to_string(), |c| c.to_string());
                writeln!(out, "{m},{s},{l},{},{cost}", alg.name())?;
            }
        }
    }
    Ok(())
}

fn schedule(a: &ScheduleArgs, out: &mut impl Write) -> Result<()> {
    let scheme = a.scheme.scheme()?;
    let policy: Policy = a.variant.parse()?;
    if a.steps == 0 {
        bail!("--steps must be at least 1");
    }
    let s = policy.schedule(a.steps, a.units, &scheme)?;
    match a.format {
        Format::Json => writeln!(out, "{}", s.to_json())?,
        Format::Text => write!(out, "{}", s.to_text())?,
    }
    Ok(())
}

fn simulate(a: &SimulateArgs, out: &mut impl Write) -> Result<()> {
    let text = if a.input == "-" {
        let mut t = String::new();
        io::stdin().read_to_string(&mut t)?;
        t
    } else {
        fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input))?
    };
    let s = Schedule::from_json(&text).context("parsing schedule")?;
    let metrics = execute(&s, CountingEngine::default())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&metrics)?)?;
    Ok(())
}

fn cross(a: &CrossoverArgs, out: &mut impl Write) -> Result<()> {
    let scheme = match (a.extra_stages, a.stages) {
        (Some(e), _) => SchemeInfo::general(e + 1),
        (None, Some(l)) => SchemeInfo::new(l, a.stiffly_accurate)?,
        (None, None) => bail!("give --extra-stages or --stages"),
    };
    let c = unit_cost(CheckpointType::SolutionWithStages, &scheme);
    match crossover(a.units, c, a.limit)? {
        Some(m) => writeln!(out, "{m}")?,
        None => bail!("no crossover up to {} steps", a.limit),
    }
    Ok(())
}

fn adjoint_demo(a: &AdjointArgs, out: &mut impl Write) -> Result<()> {
    let tableau =
        ButcherTableau::by_name(&a.tableau).ok_or_else(|| anyhow!("unknown tableau '{}'", a.tableau))?;
    let problem = OdeProblem::by_name(&a.problem, a.steps, tableau)
        .ok_or_else(|| anyhow!("unknown problem '{}' (known: {})", a.problem, PROBLEM_NAMES.join(", ")))?;
    let policy: Policy = a.policy.parse()?;
    let report = gradient_via_policy(&problem, policy, a.units)?;
    let fd = finite_difference_gradient(&problem, 1e-6)?;
    let err = relative_error(&report.gradient, &fd);
    let norm = report.gradient.iter().map(|x| x * x).sum::<f64>().sqrt();
    let measured = report.metrics.recomputations as u64;
    writeln!(
        out,
        "problem         {} ({} unknowns, {} steps, {})",
        problem.name,
        problem.dim(),
        a.steps,
        a.tableau
    )?;
    writeln!(out, "policy          {policy} with {} units", a.units)?;
    writeln!(out, "objective       {:.12e}", report.objective)?;
    writeln!(out, "gradient norm   {norm:.12e}")?;
    writeln!(out, "fd rel. error   {err:.3e}")?;
    writeln!(out, "recomputations  {measured} measured, {} predicted", report.predicted_recomputations)?;
    writeln!(out, "peak units      {}", report.metrics.peak_units)?;
    if err > a.tolerance {
        bail!("finite-difference error {err:.3e} above {:.0e}", a.tolerance);
    }
    if measured != report.predicted_recomputations {
        bail!("measured recomputations differ from the prediction");
    }
    Ok(())
}
