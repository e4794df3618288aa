use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ocean_fronts::io::{CsvGeometry, GridFormat};
use ocean_fronts::pipeline::{run_compare, run_detect, run_stats, run_synth, run_track};
use ocean_fronts::synth::SynthSpec;
use ocean_fronts::{Config, Error, Exec, Method};

/// Ocean front detection, tracking and statistics on gridded SST fields.
#[derive(Parser, Debug)]
#[command(name = "ocean-fronts", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Detect fronts in one grid.
    Detect {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        input_format: FormatArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect fronts in a date-ordered grid sequence and track them.
    Track {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        input_format: FormatArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
        /// Maximum worker threads for per-day detection.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: Option<u16>,
    },
    /// Daily, seasonal, spectral and trend summaries of a GeoJSON directory.
    Stats {
        #[arg(long)]
        fronts: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic grid and its truth curves.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score both methods against truth curves.
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        input_format: FormatArgs,
        #[arg(long)]
        truth: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatKind {
    Fgrid,
    Csv,
}

#[derive(Args, Debug)]
struct FormatArgs {
    #[arg(long, value_enum, default_value = "fgrid")]
    format: FormatKind,
    /// CSV only: latitude of row 0.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lat0: f64,
    /// CSV only: longitude of column 0.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lon0: f64,
    #[arg(long, default_value_t = 0.05)]
    dlat: f64,
    #[arg(long, default_value_t = 0.05)]
    dlon: f64,
    /// CSV only: value marking invalid cells.
    #[arg(long, allow_negative_numbers = true)]
    fill: Option<f32>,
}

impl FormatArgs {
    fn format(&self) -> GridFormat {
        match self.format {
            FormatKind::Fgrid => GridFormat::Fgrid,
            FormatKind::Csv => GridFormat::Csv(CsvGeometry {
                lat0: self.lat0,
                lon0: self.lon0,
                d_lat: self.dlat,
                d_lon: self.dlon,
                fill: self.fill,
            }),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Bfdt,
    Gradient,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    p_hi: Option<f64>,
    #[arg(long)]
    p_lo: Option<f64>,
    #[arg(long)]
    lde_bd_tol: Option<f64>,
    #[arg(long)]
    dse_t: Option<f64>,
    #[arg(long)]
    merge_radius: Option<usize>,
    #[arg(long)]
    min_len_px: Option<usize>,
    #[arg(long)]
    length_ratio: Option<f64>,
    #[arg(long)]
    km_per_px: Option<f64>,
    /// Run every kernel on the calling thread.
    #[arg(long)]
    sequential: bool,
}

impl ConfigArgs {
    fn resolve(&self) -> ocean_fronts::Result<Config> {
        let mut c = Config::default();
        if let Some(p) = &self.config {
            c.apply_file(p)?;
        }
        if let Some(m) = self.method {
            c.method = match m {
                MethodArg::Bfdt => Method::Bfdt,
                MethodArg::Gradient => Method::Gradient,
            };
        }
        macro_rules! over {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { c.$f = v; })* };
        }
        over!(p_hi, p_lo, lde_bd_tol, dse_t, merge_radius, min_len_px, length_ratio, km_per_px);
        if self.sequential {
            c.exec = Exec::Sequential;
        }
        c.validate().map_err(|e| match (&self.config, e) {
            (Some(p), Error::Config(m)) => Error::Config(format!("{m} (after applying {})", p.display())),
            (_, e) => e,
        })?;
        Ok(c)
    }
}

fn run(cmd: Command) -> ocean_fronts::Result<String> {
    Ok(match cmd {
        Command::Detect { input, input_format, config, out } => {
            let det = run_detect(&input, input_format.format(), &config.resolve()?, &out)?;
            format!("{} fronts -> {}", det.fronts.len(), out.join("fronts.geojson").display())
        }
        Command::Track { inputs, input_format, config, out, jobs } => {
            let run = run_track(&inputs, input_format.format(), &config.resolve()?, &out, jobs.map(usize::from))?;
            format!("{} days, {} tracks -> {}", run.days.len(), run.tracks.lifetimes.len(), out.display())
        }
        Command::Stats { fronts, out } => {
            let s = run_stats(&fronts, &out)?;
            format!("{} days -> {}", s.len(), out.display())
        }
        Command::Synth { spec, out } => {
            let spec = SynthSpec::from_file(&spec)?;
            let (g, truth) = run_synth(&spec, &out)?;
            format!("{}x{} grid, {} curves -> {}", g.n_rows(), g.n_cols(), truth.len(), Path::new(&out).display())
        }
        Command::Compare { input, input_format, truth, config, out } => {
            let scores = run_compare(&input, input_format.format(), &truth, &config.resolve()?, &out)?;
            scores
                .iter()
                .map(|s| format!("{}: {} fronts, recall {:.3}", s.method.as_str(), s.fronts, s.score.recall))
                .collect::<Vec<_>>()
                .join("\n")
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
