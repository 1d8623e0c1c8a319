//! Command-line front end: equilibrium reports, variance parameters, the
//! stationary and stop-after-payout tables, simulation and two-armed analyses.
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use futurity::equilibrium::{post_payout_distribution, stationary_closed_form};
use futurity::limit::clt_parameters;
use futurity::machine::{futurity1936, futurity_reels, MachineSpec, ReelMachine};
use futurity::montecarlo::{
    clt_experiment, ks_distance_normal, mean_and_variance, simulate_one_armed_batch,
    simulate_two_armed_batch, SimConfig, SimResult,
};
use futurity::specfile::{dump_reel_spec, dump_spec, parse_spec_file};
use futurity::strategy::{
    casino_win_rate_supremum, conjecture_sweep, figure1_curves, mixture_gap, mixture_mean,
    pattern_award_probability, pattern_gap, pattern_mean, pointer_stationary,
    pointer_strategy_mean, stop_after_payout_table, Condition, Pattern, Strategy, SweepConfig,
    TwoArmedSpec,
};
use report::{Cell, Format, Report, Table};

#[derive(Parser)]
#[command(name = "futurity", version, about = "Analyze Futurity style slot machines", long_about = None)]
struct Cli {
    /// `builtin:futurity1936` or a path to a machine-spec file
    #[arg(long, global = true, default_value = "builtin:futurity1936")]
    machine: String,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Decimal places for numeric output
    #[arg(long, global = true, default_value_t = 6)]
    dp: usize,

    /// Worker threads for replications and sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium report
    Analyze,
    /// Central limit theorem parameters
    Variance,
    /// Stationary law of the (cam, pointer) chain
    Table3,
    /// Expected net gain of the stop-after-payout strategy
    Table4,
    /// Simulate the machine
    Simulate(SimulateArgs),
    /// Two-armed machine with a shared pointer
    Parrondo {
        #[command(subcommand)]
        strategy: ParrondoCommand,
    },
    /// Sweep block patterns for a negative gap
    Conjecture(ConjectureArgs),
    /// Expected casino profit curves for a roster of strategies
    Fig1(Fig1Args),
    /// Print the machine as a spec file
    SpecDump,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Coups per replication
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long, default_value_t = 1)]
    reps: u64,
    /// Report the standardized totals instead of rates
    #[arg(long)]
    clt: bool,
}

#[derive(Args)]
struct ArmArgs {
    #[arg(long = "pA")]
    p_a: f64,
    #[arg(long = "pB")]
    p_b: f64,
    #[arg(long = "J")]
    award_length: usize,
    /// Choose each arm's mean so that playing it alone is fair
    #[arg(long, conflicts_with_all = ["mu_a", "mu_b"])]
    fair: bool,
    #[arg(long = "muA", required_unless_present = "fair")]
    mu_a: Option<f64>,
    #[arg(long = "muB", required_unless_present = "fair")]
    mu_b: Option<f64>,
}

impl ArmArgs {
    fn spec(&self) -> futurity::Result<TwoArmedSpec> {
        match (self.mu_a, self.mu_b) {
            (Some(mu_a), Some(mu_b)) => TwoArmedSpec::with_means(self.p_a, mu_a, self.p_b, mu_b, self.award_length),
            _ => TwoArmedSpec::fair(self.p_a, self.p_b, self.award_length),
        }
    }
}

#[derive(Args)]
struct OverlayArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Coups per replication
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    /// Replications to simulate alongside the exact values (0 for none)
    #[arg(long, default_value_t = 0)]
    reps: u64,
}

#[derive(Subcommand)]
enum ParrondoCommand {
    /// Pull A with probability gamma on each coup
    Mixture {
        #[command(flatten)]
        arms: ArmArgs,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[command(flatten)]
        overlay: OverlayArgs,
    },
    /// Repeat a fixed word in A and B
    Pattern {
        #[command(flatten)]
        arms: ArmArgs,
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        overlay: OverlayArgs,
    },
    /// Pull A while the pointer is below K, else B
    Pointer {
        #[command(flatten)]
        arms: ArmArgs,
        #[arg(long = "K")]
        k: usize,
        #[command(flatten)]
        overlay: OverlayArgs,
    },
}

#[derive(Args)]
struct ConjectureArgs {
    /// Restrict to these award lengths
    #[arg(long = "J", value_delimiter = ',')]
    award_lengths: Vec<usize>,
    /// Emit every evaluated point, not only violations
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct Fig1Args {
    #[arg(long = "pA", default_value_t = 0.3)]
    p_a: f64,
    #[arg(long = "pB", default_value_t = 1.0 / 15.0)]
    p_b: f64,
    #[arg(long = "J", default_value_t = 10)]
    award_length: usize,
    #[arg(long = "muA", requires = "mu_b")]
    mu_a: Option<f64>,
    #[arg(long = "muB", requires = "mu_a")]
    mu_b: Option<f64>,
    /// Coups to plot
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Comma-separated roster, e.g. `A,mixture:0.5,pattern:ABB,pointer:4`
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "A,B,mixture:0.5,pattern:AB,pattern:ABB,pattern:AABB,pointer:4"
    )]
    strategies: Vec<String>,
}

#[derive(Debug)]
enum Failure {
    Domain(futurity::Error),
    Io(String),
}

impl From<futurity::Error> for Failure {
    fn from(e: futurity::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = Result<T, Failure>;

struct Machine {
    spec: MachineSpec,
    reels: Option<ReelMachine>,
}

fn load_machine(source: &str) -> Outcome<Machine> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return match name {
            "futurity1936" => Ok(Machine { spec: futurity1936(), reels: Some(futurity_reels()) }),
            _ => Err(Failure::Io(format!("unknown builtin machine {name:?}"))),
        };
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::Io(format!("{source}: {e}")))?;
    let file = parse_spec_file(&text)?;
    Ok(Machine { spec: file.spec, reels: file.reels })
}

fn analyze(spec: &MachineSpec) -> Report {
    let law = stationary_closed_form(spec);
    let stop = stop_after_payout_table(spec, &law);
    let mut t = Table::summary("equilibrium");
    t.item("cams", spec.cams());
    t.item("award length", spec.award_length());
    t.item("loss product", law.loss_product);
    t.item("award probability", law.p_award);
    t.item("mean payout", law.mu_star);
    t.item("house edge", 1.0 - law.mu_star);
    t.item("hit frequency", law.p_star);
    t.item("stop-after-payout value", stop.equilibrium_value);
    let mut r = Report::default();
    r.add(t);
    let mut rho = Table::new("post-payout cam law", ["cam", "probability"]);
    for (i, p) in post_payout_distribution(spec, &law).iter().enumerate() {
        rho.push(vec![i.into(), (*p).into()]);
    }
    r.add(rho);
    r
}

fn variance(spec: &MachineSpec) -> Outcome<Report> {
    let c = clt_parameters(spec)?;
    let mut t = Table::summary("clt parameters");
    t.item("segment mean", c.mu_bar);
    t.item("segment variance", c.var_segment);
    t.item("adjacent covariance", c.cov_adjacent);
    t.item("covariance tail", c.cov_tail);
    t.item("segment variance parameter", c.sigma_bar_sq);
    t.item("variance parameter per coup", c.sigma_star_sq);
    t.item("mean payout", c.mu_star());
    let mut runs = Table::new("run probabilities", ["cam", "probability"]);
    for (i, p) in c.run_probabilities.iter().enumerate() {
        runs.push(vec![i.into(), (*p).into()]);
    }
    let mut r = Report::default();
    r.add(t);
    r.add(runs);
    Ok(r)
}

fn matrix_columns(j_len: usize, last: Option<&str>) -> Vec<String> {
    let mut cols = vec!["cam".to_string()];
    cols.extend((0..j_len).map(|j| j.to_string()));
    cols.extend(last.map(str::to_string));
    cols
}

fn table3(spec: &MachineSpec) -> Report {
    let law = stationary_closed_form(spec);
    let (cams, j_len) = (spec.cams(), spec.award_length());
    let mut t = Table::new("stationary law", matrix_columns(j_len, Some("sum")));
    for i in 0..cams {
        let mut row: Vec<Cell> = vec![i.into()];
        row.extend((0..j_len).map(|j| law.pi[(i, j)].into()));
        let sum = law.pi.row(i).sum();
        row.push(if (sum - 1.0 / cams as f64).abs() < 1e-12 {
            format!("1/{cams}").into()
        } else {
            sum.into()
        });
        t.push(row);
    }
    let mut row: Vec<Cell> = vec!["sum".into()];
    row.extend((0..j_len).map(|j| law.pi.column(j).sum().into()));
    row.push(Cell::Empty);
    t.push(row);
    let mut r = Report::default();
    r.add(t);
    r
}

fn table4(spec: &MachineSpec) -> Report {
    let law = stationary_closed_form(spec);
    let stop = stop_after_payout_table(spec, &law);
    let mut t = Table::new("stop-after-payout", matrix_columns(spec.award_length(), None));
    for i in 0..spec.cams() {
        let mut row: Vec<Cell> = vec![i.into()];
        row.extend((0..spec.award_length()).map(|j| stop.values[(i, j)].into()));
        t.push(row);
    }
    let mut eq = Table::summary("equilibrium");
    eq.item("expected net gain", stop.equilibrium_value);
    let mut r = Report::default();
    r.add(t);
    r.add(eq);
    r
}

fn se_of(xs: &[f64]) -> Cell {
    if xs.len() < 2 {
        return Cell::Empty;
    }
    (mean_and_variance(xs).1 / xs.len() as f64).sqrt().into()
}

fn simulate(spec: &MachineSpec, args: &SimulateArgs) -> Outcome<Report> {
    let mut cfg = SimConfig::new(args.sim.seed, args.sim.n);
    cfg.replications = args.reps;
    let mut r = Report::default();
    if args.clt {
        let z = clt_experiment(spec, &cfg)?;
        let (m, v) = mean_and_variance(&z);
        let mut t = Table::summary("standardized totals");
        t.item("replications", z.len());
        t.item("mean", m);
        t.item("variance", v);
        t.item("ks distance", ks_distance_normal(&z));
        r.add(t);
        let mut values = Table::new("values", ["replication", "statistic"]);
        for (i, x) in z.iter().enumerate() {
            values.push(vec![i.into(), (*x).into()]);
        }
        r.add(values);
        return Ok(r);
    }
    let runs = simulate_one_armed_batch(spec, &cfg)?;
    let law = stationary_closed_form(spec);
    let column = |f: fn(&SimResult) -> f64| runs.iter().map(f).collect::<Vec<f64>>();
    let means = column(SimResult::mean_payout);
    let hits = column(SimResult::hit_rate);
    let awards = column(SimResult::award_rate);
    let mut t = Table::new("rates", ["quantity", "simulated", "standard error", "exact"]);
    for (name, xs, exact) in [
        ("mean payout", &means, law.mu_star),
        ("hit frequency", &hits, law.p_star),
        ("award frequency", &awards, law.p_award),
    ] {
        t.push(vec![name.into(), mean_and_variance(xs).0.into(), se_of(xs), exact.into()]);
    }
    r.add(t);
    let mut each = Table::new("replications", ["replication", "total payout", "hits", "awards", "mean payout"]);
    for (i, run) in runs.iter().enumerate() {
        each.push(vec![i.into(), run.total_payout.into(), run.hits.into(), run.awards.into(), run.mean_payout().into()]);
    }
    r.add(each);
    Ok(r)
}

fn overlay(t: &mut Table, spec: &TwoArmedSpec, strategy: &Strategy, args: &OverlayArgs) -> Outcome<()> {
    if args.reps == 0 {
        return Ok(());
    }
    let mut cfg = SimConfig::new(args.seed, args.n);
    cfg.replications = args.reps;
    let runs = simulate_two_armed_batch(spec, strategy, &cfg)?;
    let means: Vec<f64> = runs.iter().map(SimResult::mean_payout).collect();
    t.item("simulated mean payout", mean_and_variance(&means).0);
    t.push(vec!["standard error".into(), se_of(&means)]);
    Ok(())
}

fn parrondo(cmd: &ParrondoCommand) -> Outcome<Report> {
    let mut t = Table::summary("two-armed");
    let mut r = Report::default();
    match cmd {
        ParrondoCommand::Mixture { arms, gamma, overlay: o } => {
            let spec = arms.spec()?;
            let mean = mixture_mean(&spec, *gamma)?;
            t.item("mean payout", mean);
            t.item("gap", mixture_gap(&spec, *gamma)?);
            t.item("casino win rate", 1.0 - mean);
            if arms.fair {
                t.item("casino win rate supremum", casino_win_rate_supremum(arms.award_length));
            }
            overlay(&mut t, &spec, &Strategy::Mixture(*gamma), o)?;
            r.add(t);
        }
        ParrondoCommand::Pattern { arms, pattern, overlay: o } => {
            let spec = arms.spec()?;
            let pattern: Pattern = pattern.parse()?;
            let mean = pattern_mean(&spec, &pattern);
            t.item("pattern", pattern.to_string());
            t.item("award probability", pattern_award_probability(&spec, &pattern));
            t.item("mean payout", mean);
            t.item("gap", pattern_gap(&spec, &pattern));
            t.item("casino win rate", 1.0 - mean);
            overlay(&mut t, &spec, &Strategy::Pattern(pattern), o)?;
            r.add(t);
        }
        ParrondoCommand::Pointer { arms, k, overlay: o } => {
            let spec = arms.spec()?;
            let mean = pointer_strategy_mean(&spec, *k)?;
            t.item("mean payout", mean);
            t.item("player edge", mean - 1.0);
            t.item("casino win rate", 1.0 - mean);
            overlay(&mut t, &spec, &Strategy::PointerThreshold(*k), o)?;
            r.add(t);
            let mut law = Table::new("pointer law", ["pointer", "probability"]);
            for (j, p) in pointer_stationary(arms.p_a, arms.p_b, arms.award_length, *k)?.iter().enumerate() {
                law.push(vec![j.into(), (*p).into()]);
            }
            r.add(law);
        }
    }
    Ok(r)
}

fn conjecture(args: &ConjectureArgs) -> Report {
    let mut cfg = SweepConfig::default();
    if !args.award_lengths.is_empty() {
        cfg.award_lengths = args.award_lengths.clone();
    }
    let sweep = conjecture_sweep(&cfg);
    let mut t = Table::summary("sweep");
    t.item("points", sweep.rows.len());
    t.item("violations", sweep.violations.len());
    t.push(vec!["min |gap|".into(), sweep.min_abs_gap.map_or(Cell::Empty, Cell::Num)]);
    let mut cols = vec!["J", "r", "s", "pA", "pB"];
    cols.extend(Condition::ALL.iter().map(|c| c.label()));
    cols.push("gap");
    let mut rows = Table::new(if args.all { "points" } else { "violations" }, cols);
    for row in if args.all { &sweep.rows } else { &sweep.violations } {
        let mut cells: Vec<Cell> = vec![row.award_length.into(), row.r.into(), row.s.into(), row.p_a.into(), row.p_b.into()];
        cells.extend(row.flags.iter().map(|f| Cell::from(*f)));
        cells.push(row.gap.into());
        rows.push(cells);
    }
    let mut r = Report::default();
    r.add(t);
    r.add(rows);
    r
}

fn fig1(args: &Fig1Args) -> Outcome<Report> {
    let spec = match (args.mu_a, args.mu_b) {
        (Some(mu_a), Some(mu_b)) => TwoArmedSpec::with_means(args.p_a, mu_a, args.p_b, mu_b, args.award_length)?,
        _ => TwoArmedSpec::fair(args.p_a, args.p_b, args.award_length)?,
    };
    let roster = args.strategies.iter().map(|s| s.parse()).collect::<futurity::Result<Vec<Strategy>>>()?;
    let curves = figure1_curves(&spec, &roster, args.n)?;
    let mut cols = vec!["coup".to_string()];
    cols.extend(curves.iter().map(|c| c.label.clone()));
    let mut t = Table::new("casino profit", cols);
    for n in 0..args.n {
        let mut row: Vec<Cell> = vec![(n + 1).into()];
        row.extend(curves.iter().map(|c| c.casino_profit[n].into()));
        t.push(row);
    }
    let mut r = Report::default();
    r.add(t);
    Ok(r)
}

fn run(cli: &Cli) -> Outcome<String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
    }
    let render = |r: Report| report::render(&r, cli.format, cli.dp);
    let machine = || load_machine(&cli.machine);
    Ok(match &cli.command {
        Command::Analyze => render(analyze(&machine()?.spec)),
        Command::Variance => render(variance(&machine()?.spec)?),
        Command::Table3 => render(table3(&machine()?.spec)),
        Command::Table4 => render(table4(&machine()?.spec)),
        Command::Simulate(args) => render(simulate(&machine()?.spec, args)?),
        Command::Parrondo { strategy } => render(parrondo(strategy)?),
        Command::Conjecture(args) => render(conjecture(args)),
        Command::Fig1(args) => render(fig1(args)?),
        Command::SpecDump => {
            let m = machine()?;
            match &m.reels {
                Some(rm) => dump_reel_spec(rm, m.spec.award_length()),
                None => dump_spec(&m.spec),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let written = run(&cli).and_then(|out| match &cli.out {
        Some(path) => std::fs::write(path, out).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("Io: {msg}");
            ExitCode::from(1)
        }
    }
}
