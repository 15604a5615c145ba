//! Command line front end: search, verify, combine, predict, cellular
//! construction, rendering, and table export.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mfold::cellular::{self, ShapeFamily, TargetShape};
use mfold::io::{self, SolutionRecord};
use mfold::optsearch::{self, OptimizerSettings, SearchBudget};
use mfold::render::{Palette, RenderOptions, Scope};
use mfold::tables::{self, SolutionTable, TableEntry};
use mfold::tiling::{self, Provenance};

/// Exit code for a search that ran out of budget without a valid tiling.
const EXIT_EXHAUSTED: u8 = 2;

#[derive(Parser)]
#[command(name = "mfold", version, about = "Periodic tilings bounding the m-fold chromatic number of the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the density thresholds tau1, tau2, tau3.
    Thresholds,
    /// Exhaustive search for the smallest k at a given m.
    Search(SearchArgs),
    /// Re-verify recorded solutions.
    Verify(VerifyArgs),
    /// Close a table under tiling combination.
    Combine(CombineArgs),
    /// Print predicted deviations for a range of m.
    Predict(PredictArgs),
    /// Build a cell-fragment tiling for large m.
    Cellular(CellularArgs),
    /// Render a recorded solution to SVG.
    Render(RenderArgs),
    /// Export records as CSV or JSONL.
    Export(ExportArgs),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k_max: Option<u32>,
    /// Worker threads; defaults to MFOLD_THREADS or all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Also try wavy sides when a straight optimum falls just short.
    #[arg(long)]
    wavy: bool,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_limit: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// 1-based record index; verifies everything when absent.
    #[arg(long)]
    row: Option<usize>,
}

#[derive(Args)]
struct CombineArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    m_max: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Inclusive range, e.g. 1..40.
    #[arg(long, value_parser = parse_range)]
    m_range: (u32, u32),
}

#[derive(Args)]
struct CellularArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    k1: Option<u32>,
    #[arg(long)]
    k2: Option<u32>,
    #[arg(long)]
    cw: Option<f64>,
    #[arg(long)]
    ch: Option<f64>,
    #[arg(long, value_enum, default_value = "croft")]
    shape: ShapeArg,
    /// Corner angle for the croft target; scanned when absent.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Disc,
    Croft,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// 1-based record index.
    #[arg(long, default_value_t = 1)]
    row: usize,
    #[arg(long, value_enum, default_value = "both")]
    scope: ScopeArg,
    #[arg(long)]
    cluster_outline: bool,
    #[arg(long)]
    grid_step: Option<f64>,
    #[arg(long, value_enum, default_value = "hue-wheel")]
    palette: PaletteArg,
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 800)]
    height: u32,
    /// Pixels per unit distance.
    #[arg(long, default_value_t = 200.0)]
    scale: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    BaseLayer,
    BaseColor,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum PaletteArg {
    HueWheel,
    Grayscale,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a = a.trim().parse().map_err(|e| format!("range start: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("range end: {e}"))?;
    if a == 0 || b < a {
        return Err("expected 1 <= A <= B".into());
    }
    Ok((a, b))
}

fn read_records(path: &PathBuf) -> Result<Vec<SolutionRecord>> {
    let file = File::open(path).with_context(|| format!("open {}", path.display()))?;
    Ok(io::read_solutions(BufReader::new(file))?)
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(content.as_bytes())?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn threads_from(args: Option<usize>) -> usize {
    args.or_else(|| {
        std::env::var("MFOLD_THREADS").ok().and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn run() -> Result<u8> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Usage problems exit 1; help/version requests exit 0.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return Ok(code);
        }
    };
    match cli.command {
        Command::Thresholds => {
            let t = tables::thresholds();
            println!("tau1 = {:.9}", t.tau1);
            println!("tau2 = {:.9}", t.tau2);
            println!("tau3 = {:.9}  (theta* = {:.9})", t.tau3, t.theta_star);
            Ok(0)
        }
        Command::Search(args) => {
            let budget = SearchBudget {
                k_min: None,
                k_max: args.k_max,
                wall_clock: args.time_limit.map(Duration::from_secs),
                threads: threads_from(args.threads),
            };
            match optsearch::search_m(args.m, &budget, &OptimizerSettings::default(), args.wavy) {
                Ok(sol) => {
                    let record = SolutionRecord::Hex(sol.clone());
                    let mut text = io::record_to_json(&record);
                    text.push('\n');
                    write_output(args.out.as_ref(), &text)?;
                    eprintln!(
                        "m={} k={} d={:.4}{}",
                        args.m,
                        sol.config.k,
                        sol.effective_d(),
                        if sol.wavy { " (wavy)" } else { "" }
                    );
                    Ok(0)
                }
                Err(mfold::Error::BudgetExhausted { k_stop, best, .. }) => {
                    eprintln!("budget exhausted before k={k_stop}: {best}");
                    Ok(EXIT_EXHAUSTED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify(args) => {
            let records = read_records(&args.input)?;
            let selected: Vec<(usize, &SolutionRecord)> = match args.row {
                Some(row) => {
                    if row == 0 || row > records.len() {
                        bail!("row {row} out of range 1..={}", records.len());
                    }
                    vec![(row, &records[row - 1])]
                }
                None => records.iter().enumerate().map(|(i, r)| (i + 1, r)).collect(),
            };
            for (row, record) in selected {
                match record {
                    SolutionRecord::Hex(sol) => {
                        let report = tiling::verify_solution(sol)?;
                        println!(
                            "row {row}: m={} k={} recomputed_d={:.6}{} diameter_ok={} det_ok={} verdict={}{}",
                            sol.config.m,
                            sol.config.k,
                            report.recomputed_d,
                            report
                                .recomputed_wavy_d
                                .map(|d| format!(" wavy_d={d:.6}"))
                                .unwrap_or_default(),
                            report.diameter_ok,
                            report.det_identity_ok,
                            if report.valid { "valid" } else { "invalid" },
                            if report.d_mismatch { " (d mismatch vs record)" } else { "" },
                        );
                    }
                    SolutionRecord::Bound { m, k, provenance } => {
                        println!("row {row}: m={m} k={k} provenance={provenance} (no tiling to check)");
                    }
                    SolutionRecord::Cell { m, k, tiling, .. } => {
                        let report = cellular::verify_cell_tiling(tiling);
                        println!(
                            "row {row}: m={m} k={k} diameter={:.6} min_gap={:.6} verdict={}",
                            report.diameter,
                            report.min_gap,
                            if report.valid { "valid" } else { "invalid" }
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Combine(args) => {
            let records = read_records(&args.input)?;
            let mut table = SolutionTable::new();
            for record in &records {
                let entry = match record {
                    SolutionRecord::Hex(sol) => TableEntry {
                        k: sol.config.k,
                        provenance: sol.provenance,
                        solution: Some(sol.clone()),
                    },
                    SolutionRecord::Bound { k, provenance, .. } => {
                        TableEntry { k: *k, provenance: *provenance, solution: None }
                    }
                    SolutionRecord::Cell { k, .. } => {
                        TableEntry { k: *k, provenance: Provenance::Explicit, solution: None }
                    }
                };
                // Skip invalid reference rows (the straight m=6 k=29 listing).
                if let SolutionRecord::Hex(sol) = record {
                    if sol.effective_d() < 1.0 - 1e-9 {
                        continue;
                    }
                }
                table.insert(record.m(), entry);
            }
            let closed = table.combine_closure(args.m_max);
            let out: Vec<SolutionRecord> = closed
                .iter()
                .map(|(m, entry)| match (&entry.solution, entry.provenance) {
                    (Some(sol), Provenance::Explicit) => SolutionRecord::Hex(sol.clone()),
                    (_, provenance) => SolutionRecord::Bound { m, k: entry.k, provenance },
                })
                .collect();
            let mut text = String::new();
            for record in &out {
                text.push_str(&io::record_to_json(record));
                text.push('\n');
            }
            write_output(Some(&args.out), &text)?;
            eprintln!("closed table over m <= {}: {} entries", args.m_max, out.len());
            Ok(0)
        }
        Command::Predict(args) => {
            println!("m,f,predicted_delta,predicted_Delta");
            for m in args.m_range.0..=args.m_range.1 {
                let f = tables::delta_fraction(m);
                let delta = tables::predict_delta(m);
                println!("{m},{f:.4},{delta:.4},{}", delta.floor() as i64);
            }
            Ok(0)
        }
        Command::Cellular(args) => {
            let family = match args.shape {
                ShapeArg::Disc => ShapeFamily::Disc,
                ShapeArg::Croft => ShapeFamily::Croft,
            };
            let result = match (args.k1, args.k2, args.cw, args.ch) {
                (Some(k1), Some(k2), Some(cw), Some(ch)) => {
                    let thetas: Vec<f64> = match args.theta {
                        Some(theta) => vec![theta],
                        None => (0..=40).map(|i| 0.02 + 0.43 * i as f64 / 40.0).collect(),
                    };
                    let mut best: Option<cellular::CellularSearch> = None;
                    for theta in thetas {
                        let shape = match family {
                            ShapeFamily::Disc => TargetShape::disc(1.0),
                            ShapeFamily::Croft => TargetShape::croft(theta, 1.0),
                        };
                        let tiling = cellular::select_cells(k1, k2, cw, ch, args.m, &shape)?;
                        let report = cellular::verify_cell_tiling(&tiling);
                        let candidate =
                            cellular::CellularSearch { tiling, report, budget_exhausted: false };
                        if candidate.report.valid {
                            best = Some(candidate);
                            break;
                        }
                        if best.is_none() {
                            best = Some(candidate);
                        }
                    }
                    best.expect("at least one candidate")
                }
                (None, None, None, None) => cellular::best_cellular(args.m, family)?,
                _ => bail!("either give all of --k1 --k2 --cw --ch or none"),
            };
            let record = SolutionRecord::Cell {
                m: result.tiling.m(),
                k: result.tiling.k(),
                tiling: result.tiling.clone(),
                min_gap: result.report.min_gap,
            };
            let mut text = io::record_to_json(&record);
            text.push('\n');
            write_output(args.out.as_ref(), &text)?;
            eprintln!(
                "m={} k={} k/m={:.5} diameter={:.6} min_gap={:.6} verdict={}",
                result.tiling.m(),
                result.tiling.k(),
                result.tiling.k() as f64 / result.tiling.m() as f64,
                result.report.diameter,
                result.report.min_gap,
                if result.report.valid { "valid" } else { "invalid" }
            );
            Ok(if result.report.valid { 0 } else { EXIT_EXHAUSTED })
        }
        Command::Render(args) => {
            let records = read_records(&args.input)?;
            if args.row == 0 || args.row > records.len() {
                bail!("row {} out of range 1..={}", args.row, records.len());
            }
            let opts = RenderOptions {
                scope: match args.scope {
                    ScopeArg::BaseLayer => Scope::BaseLayer,
                    ScopeArg::BaseColor => Scope::BaseColor,
                    ScopeArg::Both => Scope::Both,
                },
                cluster_outline: args.cluster_outline,
                grid_step: args.grid_step,
                palette: match args.palette {
                    PaletteArg::HueWheel => Palette::HueWheel,
                    PaletteArg::Grayscale => Palette::Grayscale,
                },
                width: args.width,
                height: args.height,
                scale: args.scale,
            };
            let svg = mfold::render::render_svg(&records[args.row - 1], &opts)?;
            write_output(Some(&args.out), &svg)?;
            Ok(0)
        }
        Command::Export(args) => {
            let records = read_records(&args.input)?;
            let text = match args.format {
                FormatArg::Csv => io::export_csv(&records),
                FormatArg::Jsonl => {
                    let mut t = String::new();
                    for record in &records {
                        t.push_str(&io::record_to_json(record));
                        t.push('\n');
                    }
                    t
                }
            };
            write_output(args.out.as_ref(), &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
