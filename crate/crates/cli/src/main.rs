use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ecalab::csv::parse_series_csv;
use ecalab::error::CliError;
use ecalab::experiment::{
    append_timestamp, run_analysis, run_reproduce, with_artifacts, AnalysisScope, AnalyzeOutputs,
    DropRequest, ExperimentSpec, InitialSource, ReproduceSpec,
};
use ecalab::formats::{load_cfg, load_cts, parse_cfg};
use ecalab::svg::{render_line_chart, PlotSeries};
use ecalab_core::analysis::{ether_coverage, find_ether_tile, AnalysisError};
use ecalab_core::cts::{self, CtsState, TraceWord};
use ecalab_core::{evolve, lz78, Region, RuleTable};

#[derive(Parser)]
#[command(
    name = "ecalab",
    version,
    about = "Simulate elementary cellular automata and analyze the LZ78 complexity of their configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a configuration, printing recorded rows as '0'/'1' lines
    Evolve(EvolveArgs),
    /// LZ78 phrase count (and optionally the phrases) of a binary string
    Lz(LzArgs),
    /// Cyclic tag system tools
    #[command(subcommand)]
    Cts(CtsCommand),
    /// Complexity series pipeline producing CSV and optional SVG
    Analyze(AnalyzeArgs),
    /// Periodic-background (ether) tools
    #[command(subcommand)]
    Ether(EtherCommand),
    /// Render a series CSV to an SVG line chart
    Plot(PlotArgs),
    /// Full analysis pipeline on a prepared initial configuration
    ReproducePaper(ReproduceArgs),
}

fn parse_density(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err("density must lie in [0, 1]".into())
    }
}

fn parse_min_drop(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("min-drop must lie strictly between 0 and 1".into())
    }
}

fn parse_region(s: &str) -> Result<Region, String> {
    let (start, length) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?} is not START:LEN"))?;
    let start = start
        .trim()
        .parse()
        .map_err(|_| format!("{start:?} is not a cell index"))?;
    let length = length
        .trim()
        .parse()
        .map_err(|_| format!("{length:?} is not a length"))?;
    Ok(Region::new(start, length))
}

/// Flags selecting the starting configuration; exactly one source.
#[derive(Args)]
struct InitialArgs {
    /// Cells in a seeded random initial configuration
    #[arg(long, conflicts_with = "config")]
    width: Option<usize>,
    /// Probability that a random cell starts as 1
    #[arg(long, default_value_t = 0.5, value_parser = parse_density)]
    density: f64,
    /// Seed of the random initial configuration
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Load the initial configuration from a .cfg file instead
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl InitialArgs {
    fn source(&self) -> Result<InitialSource, CliError> {
        match (self.width, &self.config) {
            (Some(width), None) => Ok(InitialSource::Random {
                width,
                density: self.density,
                seed: self.seed,
            }),
            (None, Some(path)) => Ok(InitialSource::File(path.clone())),
            _ => Err(CliError::Usage(
                "exactly one of --width or --config is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    initial: InitialArgs,
    /// ECA rule number
    #[arg(long, default_value_t = 110)]
    rule: u8,
    /// Steps to evolve
    #[arg(long)]
    steps: u64,
    /// Record every k-th step
    #[arg(long, default_value_t = 1, value_name = "K")]
    stride: u64,
    /// Print only the final configuration, as plain digits (loadable as .cfg)
    #[arg(long)]
    final_only: bool,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Omit the generation timestamp comment
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct LzArgs {
    /// Read the string from a .cfg-format file
    #[arg(long, value_name = "PATH", conflicts_with = "text")]
    input: Option<PathBuf>,
    /// Parse the given '0'/'1' string directly
    #[arg(long)]
    text: Option<String>,
    /// Print the phrase division, one phrase per line, before the count
    #[arg(long)]
    phrases: bool,
}

#[derive(Subcommand)]
enum CtsCommand {
    /// Run a system from a description file, printing one word (or length) per line
    Run(CtsRunArgs),
}

#[derive(Args)]
struct CtsRunArgs {
    /// Description file: initial word line, then one appendant per line
    #[arg(long, value_name = "PATH")]
    system: PathBuf,
    /// Step guard; runs may diverge
    #[arg(long, default_value_t = cts::DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Total symbols stored verbatim; longer traces keep lengths only
    #[arg(long, default_value_t = cts::DEFAULT_WORD_STORE_CAP)]
    store_cap: usize,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    initial: InitialArgs,
    /// ECA rule number
    #[arg(long, default_value_t = 110)]
    rule: u8,
    /// Steps to evolve
    #[arg(long)]
    steps: u64,
    /// Record every k-th step
    #[arg(long, default_value_t = 1, value_name = "K")]
    stride: u64,
    /// Measure n equal contiguous sections instead of the whole row
    #[arg(long, conflicts_with = "region")]
    sections: Option<usize>,
    /// Measure a window START:LEN (repeatable)
    #[arg(long, value_parser = parse_region, value_name = "START:LEN")]
    region: Vec<Region>,
    /// Trailing moving-average period applied to the series
    #[arg(long, value_name = "P")]
    period: Option<usize>,
    /// Keep only steps >= this (applied after smoothing)
    #[arg(long, value_name = "T0")]
    from: Option<u64>,
    /// Keep only steps <= this (applied after smoothing)
    #[arg(long, value_name = "T1")]
    to: Option<u64>,
    /// CSV output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also render the series to an SVG chart
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Detect significant declines of the raw series and write them as CSV
    #[arg(long, value_name = "PATH")]
    drops_out: Option<PathBuf>,
    /// Smoothing window for drop detection
    #[arg(long, default_value_t = 100)]
    drop_window: usize,
    /// Decline threshold as a fraction of the series range
    #[arg(long, default_value_t = 0.1, value_parser = parse_min_drop)]
    min_drop: f64,
    /// Omit the generation timestamp comment
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum EtherCommand {
    /// Exhaustively search for a periodic background tile
    Find(EtherFindArgs),
    /// Fraction of a configuration covered by the periodic background
    Coverage(EtherCoverageArgs),
}

#[derive(Args)]
struct EtherFindArgs {
    /// ECA rule number
    #[arg(long, default_value_t = 110)]
    rule: u8,
    /// Cells per tile row
    #[arg(long, value_name = "P")]
    spatial_period: usize,
    /// Steps after which the background repeats (up to a shift)
    #[arg(long, value_name = "T")]
    temporal_period: usize,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EtherCoverageArgs {
    /// ECA rule number
    #[arg(long, default_value_t = 110)]
    rule: u8,
    /// Cells per tile row
    #[arg(long, value_name = "P")]
    spatial_period: usize,
    /// Steps after which the background repeats (up to a shift)
    #[arg(long, value_name = "T")]
    temporal_period: usize,
    /// Configuration to measure
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Series CSV produced by analyze or reproduce-paper
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// SVG output path
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Chart title (defaults to the input file stem)
    #[arg(long)]
    title: Option<String>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Prepared initial configuration (.cfg)
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory receiving all artifacts
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
    /// ECA rule number
    #[arg(long, default_value_t = 110)]
    rule: u8,
    /// Steps to evolve
    #[arg(long, default_value_t = 50_000)]
    steps: u64,
    /// Moving-average period for the smoothed artifacts
    #[arg(long, default_value_t = 100, value_name = "P")]
    period: usize,
    /// Number of equal sections
    #[arg(long, default_value_t = 20)]
    sections: usize,
    /// Focus window START:LEN (repeatable; three 1100-cell windows by default)
    #[arg(long, value_parser = parse_region, value_name = "START:LEN")]
    part: Vec<Region>,
    /// First step of the focus-window series
    #[arg(long, default_value_t = 10_000)]
    part_from: u64,
    /// Last step of the focus-window series
    #[arg(long, default_value_t = 50_000)]
    part_to: u64,
    /// Omit the generation timestamp comment
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => with_artifacts(|writer| writer.write(path, content)),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve(args) => cmd_evolve(args),
        Command::Lz(args) => cmd_lz(args),
        Command::Cts(CtsCommand::Run(args)) => cmd_cts_run(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Ether(EtherCommand::Find(args)) => cmd_ether_find(args),
        Command::Ether(EtherCommand::Coverage(args)) => cmd_ether_coverage(args),
        Command::Plot(args) => cmd_plot(args),
        Command::ReproducePaper(args) => cmd_reproduce(args),
    }
}

fn cmd_evolve(args: EvolveArgs) -> Result<(), CliError> {
    let source = args.initial.source()?;
    let initial = source.resolve()?;
    if args.stride == 0 {
        return Err(CliError::Usage("--stride must be at least 1".into()));
    }
    let rule = RuleTable::new(args.rule);
    let recording = evolve(&initial, &rule, args.steps, args.stride)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut text = String::new();
    if args.final_only {
        text.push_str(&recording.rows().last().unwrap().to_binary_string());
        text.push('\n');
    } else {
        let mut meta = vec![
            format!("tool: ecalab {}", env!("CARGO_PKG_VERSION")),
            "command: evolve".to_string(),
            format!("rule: {}", args.rule),
            format!("width: {}", initial.width()),
            format!("initial: {}", describe_source(&source)),
            format!("steps: {}", args.steps),
            format!("stride: {}", args.stride),
            format!("rows: {}", recording.len()),
        ];
        append_timestamp(&mut meta, args.no_timestamp);
        for line in &meta {
            text.push_str("# ");
            text.push_str(line);
            text.push('\n');
        }
        for row in recording.rows() {
            text.push_str(&row.to_binary_string());
            text.push('\n');
        }
    }
    emit(args.out.as_ref(), &text)
}

fn describe_source(source: &InitialSource) -> String {
    match source {
        InitialSource::Random {
            width,
            density,
            seed,
        } => format!("random width={width} density={density} seed={seed}"),
        InitialSource::File(path) => format!("file={}", path.display()),
    }
}

fn cmd_lz(args: LzArgs) -> Result<(), CliError> {
    let config = match (&args.input, &args.text) {
        (Some(path), None) => load_cfg(path)?,
        (None, Some(text)) => parse_cfg(text)?,
        _ => {
            return Err(CliError::Usage(
                "exactly one of --input or --text is required".into(),
            ))
        }
    };
    let digits = config.to_binary_string();
    if args.phrases {
        let parsed = lz78::lz78_parse(&digits).expect("digits are binary");
        for phrase in parsed.phrases() {
            println!("{phrase}");
        }
        println!("{}", parsed.count());
    } else {
        println!("{}", lz78::phrase_count_bits(config.bits()));
    }
    Ok(())
}

fn cmd_cts_run(args: CtsRunArgs) -> Result<(), CliError> {
    let (initial, system) = load_cts(&args.system)?;
    let trace = cts::run_with_cap(
        CtsState::new(initial),
        &system,
        args.max_steps,
        args.store_cap,
    );
    let mut text = String::new();
    for word in &trace.words {
        match word {
            TraceWord::Word(w) => text.push_str(&cts::word_to_string(w)),
            TraceWord::LengthOnly(n) => text.push_str(&format!("length:{n}")),
        }
        text.push('\n');
    }
    emit(args.out.as_ref(), &text)?;
    match trace.halt_step {
        Some(step) => eprintln!("halted at step {step}"),
        None => eprintln!("stopped after {} steps without halting", args.max_steps),
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let scope = match (args.sections, args.region.is_empty()) {
        (Some(n), _) => AnalysisScope::Sections(n),
        (None, false) => AnalysisScope::Regions(args.region.clone()),
        (None, true) => AnalysisScope::Whole,
    };
    let spec = ExperimentSpec {
        rule: args.rule,
        initial: args.initial.source()?,
        steps: args.steps,
        stride: args.stride,
        scope,
        smoothing: args.period,
        from: args.from,
        to: args.to,
        no_timestamp: args.no_timestamp,
    };
    let outputs = AnalyzeOutputs {
        csv: args.out.clone(),
        svg: args.svg.clone(),
        drops: args.drops_out.map(|out| DropRequest {
            out,
            window: args.drop_window,
            min_drop: args.min_drop,
        }),
    };
    if let Some(csv_text) = run_analysis(&spec, &outputs)? {
        print!("{csv_text}");
    }
    Ok(())
}

fn capability_or_usage(error: AnalysisError) -> CliError {
    match error {
        AnalysisError::SpatialPeriodBeyondBound { .. } => CliError::Capability(error.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn cmd_ether_find(args: EtherFindArgs) -> Result<(), CliError> {
    validate_periods(args.spatial_period, args.temporal_period)?;
    let rule = RuleTable::new(args.rule);
    let found = find_ether_tile(&rule, args.spatial_period, args.temporal_period)
        .map_err(capability_or_usage)?;
    let text = match found {
        Some(tile) => {
            let mut text = format!(
                "rule: {}\nspatial_period: {}\ntemporal_period: {}\nshift_per_period: {}\n",
                args.rule,
                tile.spatial_period(),
                tile.temporal_period(),
                tile.shift_per_period()
            );
            for (t, row) in tile.rows().iter().enumerate() {
                let cells: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
                text.push_str(&format!("row {t}: {cells}\n"));
            }
            text
        }
        None => format!(
            "no non-uniform tile of spatial period {} and temporal period {} under rule {}\n",
            args.spatial_period, args.temporal_period, args.rule
        ),
    };
    emit(args.out.as_ref(), &text)
}

fn cmd_ether_coverage(args: EtherCoverageArgs) -> Result<(), CliError> {
    validate_periods(args.spatial_period, args.temporal_period)?;
    let rule = RuleTable::new(args.rule);
    let row = load_cfg(&args.config)?;
    let tile = find_ether_tile(&rule, args.spatial_period, args.temporal_period)
        .map_err(capability_or_usage)?
        .ok_or_else(|| {
            CliError::Data(format!(
                "no background tile of periods {}x{} exists under rule {}",
                args.spatial_period, args.temporal_period, args.rule
            ))
        })?;
    println!("{}", ecalab::csv::format_value(ether_coverage(&row, &tile)));
    Ok(())
}

fn validate_periods(spatial: usize, temporal: usize) -> Result<(), CliError> {
    if spatial == 0 || temporal == 0 {
        return Err(CliError::Usage("periods must be at least 1".into()));
    }
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.input.display())))?;
    let doc = parse_series_csv(&text).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", args.input.display())),
        other => other,
    })?;
    let series: Vec<PlotSeries> = doc
        .columns
        .iter()
        .zip(&doc.values)
        .map(|(name, values)| PlotSeries {
            name: name.clone(),
            points: doc.steps.iter().copied().zip(values.iter().copied()).collect(),
        })
        .collect();
    let title = args.title.clone().unwrap_or_else(|| {
        args.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "series".into())
    });
    let chart = render_line_chart(&title, "step", "LZ complexity", &series, &doc.comments)?;
    emit(Some(&args.out), &chart)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    let parts = if args.part.is_empty() {
        vec![
            Region::new(46_000, 1100),
            Region::new(47_100, 1100),
            Region::new(48_200, 1100),
        ]
    } else {
        args.part.clone()
    };
    let spec = ReproduceSpec {
        config: args.config,
        out_dir: args.out_dir,
        rule: args.rule,
        steps: args.steps,
        period: args.period,
        sections: args.sections,
        parts,
        part_from: args.part_from,
        part_to: args.part_to,
        no_timestamp: args.no_timestamp,
    };
    let artifacts = run_reproduce(&spec)?;
    for path in artifacts {
        println!("{}", path.display());
    }
    Ok(())
}
