use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use levelcost::config::{list_presets, load_scenario, LoadedScenario, ScenarioFile};
use levelcost::report::{
    case_study_grid, plot_table, records_table, sweep_table, technology_and_bound, write_outputs,
    Format, MetricRecord,
};
use levelcost::run::{case_study_cells, levelize_records, scenario_records};
use levelcost::scenarios::{rate_sweep, SweepRow};
use levelcost::Error;

/// Levelized cost of PV energy, storage and delivery.
#[derive(Parser)]
#[command(name = "levelcost", version)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levelize a cost/energy file, or report every metric of a case scenario.
    Levelize(RunArgs),
    /// Sweep a case scenario over discount rates.
    Scenario(RunArgs),
    /// Multi-year case study: per-year LCOD and system LCOE grids.
    Casestudy(RunArgs),
    /// Component presets and shipped scenarios.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file path or shipped scenario name.
    #[arg(long)]
    scenario: String,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Output formats (comma separated).
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    format: Vec<FormatArg>,
    /// Sum discounted streams over t = 0..n instead of t = 1..n.
    #[arg(long)]
    paper_bounds: bool,
    /// Discount rates in percent, comma separated; replaces the scenario's.
    #[arg(long, allow_hyphen_values = true)]
    rates: Option<String>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
    Jsonl,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Markdown => Format::Markdown,
            FormatArg::Jsonl => Format::Jsonl,
        }
    }
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input_error() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: 2, message }
}

fn parse_rates(arg: &str) -> Result<Vec<f64>, Failure> {
    arg.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(|pct| pct / 100.0)
                .ok_or_else(|| input_failure(format!("invalid rate {s:?} in --rates")))
        })
        .collect()
}

impl RunArgs {
    fn formats(&self) -> Vec<Format> {
        let mut f: Vec<Format> = self.format.iter().map(|&f| f.into()).collect();
        f.sort();
        f.dedup();
        f
    }

    fn rates_or(&self, default: Vec<f64>) -> Result<Vec<f64>, Failure> {
        match &self.rates {
            Some(arg) => parse_rates(arg),
            None => Ok(default),
        }
    }

    fn emit<T: serde::Serialize>(
        &self,
        stem: &str,
        table: &levelcost::report::Table,
        items: &[T],
    ) -> Result<(), Failure> {
        for path in write_outputs(&self.out, stem, &self.formats(), table, items)? {
            info!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn load(args: &RunArgs) -> Result<LoadedScenario, Failure> {
    let s = load_scenario(&args.scenario)?;
    info!("scenario {}", s.origin);
    Ok(s)
}

fn cmd_levelize(args: &RunArgs) -> Result<String, Failure> {
    let loaded = load(args)?;
    let (name, records) = match &loaded.file {
        ScenarioFile::Levelize(f) => {
            let mut inputs = f.load(&loaded.base_dir, args.paper_bounds)?;
            let rates = args.rates_or(vec![inputs.fin.discount_rate])?;
            let mut records = Vec::new();
            for r in rates {
                inputs.fin = inputs.fin.with_rate(r);
                records.extend(levelize_records(&inputs)?);
            }
            (f.name.clone(), records)
        }
        ScenarioFile::Cases(f) => {
            let scenario = f.to_scenario(args.paper_bounds)?;
            let default = match f.finance.discount_rate {
                Some(r) => vec![r],
                None => f.sweep.rates.clone(),
            };
            let mut records = Vec::new();
            for r in args.rates_or(default)? {
                records.extend(scenario_records(&scenario, r)?);
            }
            (f.name.clone(), records)
        }
        ScenarioFile::Casestudy(_) => {
            return Err(input_failure(format!(
                "{} is a case study; run it with `levelcost casestudy`",
                loaded.origin
            )))
        }
    };
    if records.is_empty() {
        warn!("no rates to evaluate; writing an empty report");
    }
    for r in records.iter().filter(|r| r.flag.is_some()) {
        warn!("{} = {} flagged {}", r.name, r.value, r.flag.as_deref().unwrap_or(""));
    }
    let table = records_table(&records);
    args.emit::<MetricRecord>(&format!("{name}-levelize"), &table, &records)?;
    Ok(table.to_markdown())
}

fn cmd_scenario(args: &RunArgs) -> Result<String, Failure> {
    let loaded = load(args)?;
    let ScenarioFile::Cases(f) = &loaded.file else {
        return Err(input_failure(format!(
            "{} is not a Case 1-3 scenario (kind = \"cases\")",
            loaded.origin
        )));
    };
    let scenario = f.to_scenario(args.paper_bounds)?;
    let rates = args.rates_or(f.sweep.rates.clone())?;
    if rates.is_empty() {
        warn!("rate list is empty; writing an empty table");
    }
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut failed = 0;
    for (rate, row) in rates.iter().zip(rate_sweep(&scenario, &rates)) {
        match row {
            Ok(r) => rows.push(r),
            Err(e) => {
                failed += 1;
                warn!("r = {}%: {e}", rate * 100.0);
            }
        }
    }
    let table = sweep_table(&rows);
    args.emit(&f.name, &table, &rows)?;
    if failed > 0 {
        print_stdout(&table.to_markdown());
        return Err(Failure {
            code: 1,
            message: format!("{failed} of {} rates failed", rates.len()),
        });
    }
    Ok(table.to_markdown())
}

fn cmd_casestudy(args: &RunArgs) -> Result<String, Failure> {
    let loaded = load(args)?;
    let ScenarioFile::Casestudy(f) = &loaded.file else {
        return Err(input_failure(format!(
            "{} is not a case study (kind = \"casestudy\")",
            loaded.origin
        )));
    };
    let mut inputs = f.load(&loaded.base_dir, args.paper_bounds)?;
    inputs.rates = args.rates_or(inputs.rates)?;
    if inputs.rates.is_empty() {
        warn!("rate list is empty; writing empty grids");
    }
    let cells = case_study_cells(&inputs)?;
    let mut stdout = String::new();
    for (preset, _, _) in &inputs.technologies {
        let (tech, bound) = technology_and_bound(preset);
        let grid = case_study_grid(&cells, &tech, &bound);
        let mine: Vec<_> = cells
            .iter()
            .filter(|c| c.technology == tech && c.bound == bound)
            .collect();
        args.emit(&format!("{}-{preset}", f.name), &grid, &mine)?;
        stdout.push_str(&format!("## {preset}\n\n{}\n", grid.to_markdown()));
    }
    let plot = plot_table(&cells);
    let path = args.out.join(format!("{}-plot.csv", f.name));
    let text = plot.to_csv()?;
    std::fs::create_dir_all(&args.out)
        .and_then(|_| std::fs::write(&path, text))
        .map_err(|e| Failure::from(Error::Io {
            path: path.clone(),
            source: e,
        }))?;
    info!("wrote {}", path.display());
    Ok(stdout)
}

fn cmd_presets() -> Result<String, Failure> {
    let mut out = String::new();
    for (kind, names) in list_presets() {
        for n in names {
            out.push_str(&format!("{kind}\t{n}\n"));
        }
    }
    Ok(out)
}

/// Write to stdout, ignoring a closed pipe.
fn print_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .parse_env("LEVELCOST_LOG")
        .init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    let result = match &cli.command {
        Command::Levelize(a) => cmd_levelize(a),
        Command::Scenario(a) => cmd_scenario(a),
        Command::Casestudy(a) => cmd_casestudy(a),
        Command::Presets {
            action: PresetAction::List,
        } => cmd_presets(),
    };
    match result {
        Ok(text) => {
            print_stdout(&text);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
