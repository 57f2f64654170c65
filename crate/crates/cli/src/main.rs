use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use turnsim_core::config::{parse_doors, parse_luggage, RunConfig, SweepConfig};
use turnsim_core::error::{ConfigError, ScheduleError, SimError};
use turnsim_core::experiment::{run_batch, sweep, write_rows_csv, SweepRow, DEFAULT_RUNS};
use turnsim_core::turnaround::{
    build_network, cpm_schedule, export_gantt, preset, to_f64, write_gantt_csv, write_gantt_json, Scenario,
};
use turnsim_core::validation::{run_suite, SUITES};
use turnsim_core::{layouts, run, Direction, RngSeed, SimConfig};

#[derive(Parser)]
#[command(name = "turnsim", version, about = "Aircraft boarding, deboarding and turnaround simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its result and event log.
    Simulate(RunArgs),
    /// Run a Monte Carlo batch of simulations.
    Batch {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
    },
    /// Run a batch for every point of a parameter grid.
    Sweep {
        /// Sweep file (TOML).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Schedule a turnaround and export its Gantt chart.
    Turnaround {
        /// Preset name or scenario file.
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare simulations with reference values; exits 1 on any mismatch.
    Validate {
        /// One of table3, table4, table6, table7, or all.
        suite: String,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the results as JSON into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List built-in layouts, or print one.
    Layouts {
        name: Option<String>,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Run configuration file; flags given alongside override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in layout name or layout file.
    #[arg(long)]
    layout: Option<String>,
    /// Load factor in (0, 1].
    #[arg(long)]
    lf: Option<f64>,
    /// Interference factor in [0, 1]: probability of not overtaking a storing passenger.
    #[arg(long = "if")]
    interference: Option<f64>,
    /// Active doors, e.g. `1L,3L`.
    #[arg(long)]
    doors: Option<String>,
    /// Luggage distribution preset: A or B.
    #[arg(long, conflicts_with = "tlug")]
    preset: Option<String>,
    /// Constant luggage time in seconds.
    #[arg(long)]
    tlug: Option<f64>,
    /// random, outside-in, back-to-front[:N], rotating-zone[:N].
    #[arg(long)]
    strategy: Option<String>,
    /// Boarding order file, one seat label per line.
    #[arg(long)]
    order: Option<PathBuf>,
    /// Base seed; batch run i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    /// board or deboard.
    #[arg(long)]
    direction: Option<String>,
    /// Split passengers evenly over the active doors.
    #[arg(long)]
    balance_doors: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

enum Failure {
    Validation,
    Config(String),
    Engine(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<ScheduleError> for Failure {
    fn from(e: ScheduleError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(c) => c.into(),
            other => Failure::Engine(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate(args) => simulate(&args),
        Command::Batch { run, runs } => batch(&run, runs),
        Command::Sweep { config, runs, seed, out } => sweep_cmd(&config, runs, seed, &out),
        Command::Turnaround { scenario, out } => turnaround(&scenario, &out),
        Command::Validate { suite, runs, seed, out } => validate(&suite, runs, seed, out.as_deref()),
        Command::Layouts { name } => list_layouts(name.as_deref()),
    }
}

fn sim_config(args: &RunArgs) -> Result<SimConfig, Failure> {
    let (mut rc, base) = match &args.config {
        Some(path) => (RunConfig::load(path)?, path.parent().map(Path::to_path_buf)),
        None => {
            let layout = args
                .layout
                .clone()
                .ok_or_else(|| Failure::Config("either --config or --layout is required".into()))?;
            (RunConfig::new(layout), None)
        }
    };
    if let Some(l) = &args.layout {
        rc.layout = l.clone();
    }
    if let Some(v) = args.lf {
        rc.load_factor = v;
    }
    if let Some(v) = args.interference {
        rc.interference_factor = v;
    }
    if let Some(d) = &args.doors {
        rc.doors = Some(d.split(',').map(|s| s.trim().to_owned()).collect());
        parse_doors(d)?;
    }
    if let Some(s) = &args.strategy {
        rc.strategy = s.clone();
    }
    if let Some(o) = &args.order {
        rc.order_file = Some(o.clone());
    }
    if let Some(s) = args.seed {
        rc.seed = s;
    }
    if let Some(d) = &args.direction {
        rc.direction = d.parse::<Direction>()?;
    }
    rc.balance_doors |= args.balance_doors;
    let mut cfg = rc.to_sim_config(base.as_deref())?;
    if let Some(p) = &args.preset {
        cfg.luggage = parse_luggage(p)?;
    }
    if let Some(t) = args.tlug {
        cfg.luggage = parse_luggage(&t.to_string())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(create(dir, name)?, value).map_err(|e| Failure::Config(e.to_string()))
}

#[derive(Serialize)]
struct EventRow {
    tick: u64,
    time_s: f64,
    passenger: usize,
    state: String,
    x: Option<usize>,
    y: Option<usize>,
}

fn simulate(args: &RunArgs) -> Result<(), Failure> {
    let mut cfg = sim_config(args)?;
    cfg.record_events = true;
    let result = run(&cfg)?;
    write_json(&args.out, "result.json", &result)?;
    let mut w = csv::Writer::from_writer(create(&args.out, "events.csv")?);
    for e in &result.events {
        w.serialize(EventRow {
            tick: e.tick,
            time_s: e.tick as f64 * cfg.tick,
            passenger: e.passenger,
            state: format!("{:?}", e.state),
            x: e.x,
            y: e.y,
        })
        .map_err(|e| Failure::Config(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Config(e.to_string()))?;
    println!(
        "{} of {} passengers: {:.1} s ({} seat interferences)",
        result.direction, result.n_pax, result.elapsed, result.interference_count
    );
    Ok(())
}

fn batch(args: &RunArgs, runs: usize) -> Result<(), Failure> {
    let cfg = sim_config(args)?;
    let RngSeed(seed) = cfg.seed;
    let stats = run_batch(&cfg, runs, seed)?;
    write_json(&args.out, "batch.json", &stats)?;
    let mut w = csv::Writer::from_writer(create(&args.out, "runs.csv")?);
    for r in &stats.per_run {
        w.serialize(r).map_err(|e| Failure::Config(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Config(e.to_string()))?;
    let rate = stats.rate().map_or_else(|_| "-".into(), |r| format!("{r:.1}"));
    println!(
        "{} runs: mean {:.1} s, min {:.1}, max {:.1}, std {:.1}; rate {rate} pax/min/door",
        stats.n_runs, stats.mean, stats.min, stats.max, stats.std
    );
    if !stats.failures.is_empty() {
        eprintln!("{} runs hit the tick ceiling", stats.failures.len());
    }
    Ok(())
}

fn sweep_cmd(path: &Path, runs: Option<usize>, seed: Option<u64>, out: &Path) -> Result<(), Failure> {
    let sc = SweepConfig::load(path)?;
    let base = sc.base.to_sim_config(path.parent())?;
    let mut spec = sc.to_spec()?;
    if let Some(r) = runs {
        spec.n_runs = r;
    }
    if let Some(s) = seed {
        spec.base_seed = s;
    }
    let results = sweep(&base, &spec)?;
    let rows: Vec<SweepRow> = results.iter().map(|(r, _)| r.clone()).collect();
    write_rows_csv(&rows, create(out, "sweep.csv")?).map_err(|e| Failure::Config(e.to_string()))?;
    write_json(out, "sweep.json", &rows)?;
    for r in &rows {
        println!(
            "IF {:<4} LF {:<4} t_lug {:<6} doors {} -> mean {:.1} s, rate {:.1}",
            r.interference_factor, r.load_factor, r.t_lug, r.n_doors, r.mean_s, r.rate
        );
    }
    Ok(())
}

fn load_scenario(name: &str) -> Result<Scenario, Failure> {
    if let Some(s) = preset(name) {
        return Ok(s);
    }
    let text = fs::read_to_string(name).map_err(|e| {
        Failure::Config(format!("`{name}` is neither a preset nor a readable scenario file: {e}"))
    })?;
    Ok(Scenario::from_toml(&text)?)
}

fn turnaround(name: &str, out: &Path) -> Result<(), Failure> {
    let scenario = load_scenario(name)?;
    let schedule = cpm_schedule(&build_network(&scenario)?)?;
    let rows = export_gantt(&schedule);
    write_json(out, "schedule.json", &schedule)?;
    write_gantt_csv(&rows, create(out, "gantt.csv")?).map_err(|e| Failure::Config(e.to_string()))?;
    write_gantt_json(&rows, create(out, "gantt.json")?).map_err(|e| Failure::Config(e.to_string()))?;
    println!("{}: TAT {:.2} min", scenario.name, to_f64(schedule.tat));
    println!("critical path: {}", schedule.critical_path.join(" -> "));
    Ok(())
}

fn validate(suite: &str, runs: usize, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let suites: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut all_pass = true;
    for s in suites {
        let results = run_suite(s, runs, seed)?;
        println!("{s}");
        for r in &results {
            all_pass &= r.pass;
            println!(
                "  {:<5} {:<24} expected {:>8.2} got {:>8.2} {}  {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.label,
                r.expected,
                r.actual,
                r.unit,
                r.note
            );
        }
        if let Some(dir) = out {
            write_json(dir, &format!("{s}.json"), &results)?;
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn list_layouts(name: Option<&str>) -> Result<(), Failure> {
    match name {
        None => {
            for n in layouts::names() {
                let g = layouts::builtin(n).expect("built-in layout parses");
                println!("{n:<12} {:>4} seats  {} door(s)", g.seats().len(), g.doors().len());
            }
        }
        Some(n) => {
            let g = layouts::load(n)?;
            println!(
                "{} seats, {} doors, {}x{} cells, cell {:.2} x {:.2} m{}",
                g.seats().len(),
                g.doors().len(),
                g.n_h(),
                g.n_v(),
                g.u_h(),
                g.u_v(),
                if g.is_narrow_aisle() { ", narrow aisles" } else { ", two-lane aisles" }
            );
            print!("{}", g.to_layout_string());
        }
    }
    Ok(())
}
