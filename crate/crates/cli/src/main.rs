use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use montevol::bounds::{analyze_spec, Analysis, StateChoice};
use montevol::check::run_checks;
use montevol::enumerate::enumerate_family;
use montevol::montesinos::MontesinosSpec;
use montevol::report::ReportJson;
use montevol::stategraph::{innermost_circles, Smoothing, SmoothingConvention, StateAssignment};
use montevol::svg::render_h_graph;

#[derive(Parser)]
#[command(name = "montevol", version, about = "Volume bounds for Montesinos links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Auto,
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    SwapSmoothing,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one link given as comma-separated slopes, e.g. 1/2,-2/3,1/2,-1/3
    Analyze {
        #[arg(allow_hyphen_values = true)]
        slopes: String,
        /// Emit the JSON report (the default output)
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "auto")]
        state: StateArg,
        /// Write an SVG drawing of the A-state graph
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the diagram as PD code
        #[arg(long)]
        pd: Option<PathBuf>,
    },
    /// Emit one JSON report per spec of a family, as JSON lines
    Batch {
        #[arg(long)]
        tangles: usize,
        #[arg(long)]
        max_den: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant checks over a family
    Check {
        #[arg(long)]
        tangles: usize,
        #[arg(long)]
        max_den: i64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { slopes, json: _, state, svg, pd } => analyze(&slopes, state, svg, pd),
        Command::Batch { tangles, max_den, out } => batch(tangles, max_den, out),
        Command::Check { tangles, max_den, inject_fault } => {
            let convention = match inject_fault {
                Some(Fault::SwapSmoothing) => SmoothingConvention::Swapped,
                None => SmoothingConvention::Standard,
            };
            check(tangles, max_den, convention)
        }
    }
}

fn analyze(input: &str, state: StateArg, svg: Option<PathBuf>, pd: Option<PathBuf>) -> Result<ExitCode> {
    let choice = match state {
        StateArg::Auto => StateChoice::Auto,
        StateArg::A => StateChoice::A,
        StateArg::B => StateChoice::B,
    };
    let spec: MontesinosSpec = input.parse()?;
    let analysis = analyze_spec(input, &spec, choice, SmoothingConvention::Standard)?;
    if let Some(path) = pd {
        write_pd(&analysis, &path)?;
    }
    if let Some(path) = svg {
        write_svg(&analysis, &path)?;
    }
    emit(&format!("{}\n", ReportJson::from(&analysis).to_json_pretty()))?;
    Ok(if analysis.thm1.applicable { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn write_pd(analysis: &Analysis, path: &PathBuf) -> Result<()> {
    let d = analysis.diagram.as_ref().context("no diagram for this spec")?;
    let slopes: Vec<String> = d.spec.slopes().iter().map(|q| q.to_string()).collect();
    let header = [
        format!("montevol {}", env!("CARGO_PKG_VERSION")),
        format!("slopes {}", slopes.join(",")),
        format!("crossings {}", d.crossings),
    ];
    std::fs::write(path, d.pd.to_pd_text(&header)).with_context(|| format!("writing {}", path.display()))
}

fn write_svg(analysis: &Analysis, path: &PathBuf) -> Result<()> {
    let d = analysis.diagram.as_ref().context("no diagram for this spec")?;
    let st = StateAssignment::all(Smoothing::A, d.crossings);
    let inner = innermost_circles(&d.pd, &d.a.h, &st, SmoothingConvention::Standard);
    std::fs::write(path, render_h_graph(&d.pd, &d.a.h, &inner))
        .with_context(|| format!("writing {}", path.display()))
}

fn batch(tangles: usize, max_den: i64, out: Option<PathBuf>) -> Result<ExitCode> {
    let family = enumerate_family(tangles, max_den);
    let lines: Vec<Result<String>> = family
        .par_iter()
        .map(|spec| {
            let text = spec.to_string();
            let a = analyze_spec(&text, spec, StateChoice::Auto, SmoothingConvention::Standard)?;
            Ok(ReportJson::from(&a).to_json())
        })
        .collect();
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(&p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let written = lines.into_iter().try_for_each(|line| -> Result<()> {
        writeln!(sink, "{}", line?)?;
        Ok(())
    });
    quiet_on_broken_pipe(written.and_then(|_| Ok(sink.flush()?)))?;
    Ok(ExitCode::SUCCESS)
}

fn check(tangles: usize, max_den: i64, convention: SmoothingConvention) -> Result<ExitCode> {
    let report = run_checks(tangles, max_den, convention);
    let mut text = report.table();
    let Some(spec) = &report.first_counterexample else {
        emit(&text)?;
        return Ok(ExitCode::SUCCESS);
    };
    text.push_str(&format!("counterexample: {spec}\n"));
    for r in report.rows.iter().filter(|r| r.failed > 0) {
        if let Some(c) = &r.counterexample {
            text.push_str(&format!("  {}: {c}\n", r.name));
        }
    }
    emit(&text)?;
    Ok(ExitCode::from(3))
}

/// Writes to stdout; a closed pipe ends output silently.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    quiet_on_broken_pipe(out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(Into::into))
}

fn quiet_on_broken_pipe(r: Result<()>) -> Result<()> {
    match r {
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => Ok(()),
        r => r,
    }
}
