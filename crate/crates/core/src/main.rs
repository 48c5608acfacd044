//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage/IO/parse error, 2 no explicit
//! construction for the shape, 3 search budget exhausted, 4 search space
//! exhausted without a solution, 5 verification or audit failed.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use supermagic::construct::{construct, ConstructionPlan, Variant};
use supermagic::document::{decode, encode_edge_list, encode_with, Metadata};
use supermagic::render::{render, Annotate, Format, RenderSpec};
use supermagic::search::{search, RestartPolicy, SearchConfig, SearchStatus, ValueOrder};
use supermagic::torus::{decompose, GridDims};
use supermagic::verify::{audit_corners, forced_constant, verify, VerificationReport};
use supermagic::{Error, Labeling};

const EXIT_USAGE: u8 = 1;
const EXIT_UNSUPPORTED: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_EXHAUSTED: u8 = 4;
const EXIT_REJECTED: u8 = 5;

#[derive(Parser)]
#[command(name = "supermagic", version, about = "Supermagic labelings of the torus grid C_n x C_m")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Edges,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureFormat {
    Dot,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Annotation {
    Labels,
    Weights,
    Corners,
}

#[derive(Subcommand)]
enum Command {
    /// Build the explicit labeling for C_N x C_M
    Generate {
        n: usize,
        m: usize,
        /// Write the labeling here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Check whether a labeling file is supermagic (exit 0 iff it is)
    Verify {
        /// Labeling file (JSON or edge list); `-` reads stdin
        file: PathBuf,
        /// Print the full report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Compare every corner's partial weight with a construction plan (exit 0 iff clean)
    Audit {
        file: PathBuf,
        /// odd-odd, even-even, auto (from the grid shape), or file (from the document metadata)
        #[arg(long, default_value = "auto")]
        plan: String,
        #[arg(long)]
        json: bool,
    },
    /// Backtracking search for a labeling of C_N x C_M
    Search {
        n: usize,
        m: usize,
        /// Shuffle value order with this seed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000_000)]
        node_budget: u64,
        /// Wall-clock limit in seconds
        #[arg(long, default_value_t = 600.0)]
        time_budget: f64,
        /// Luby restarts with this many nodes per unit
        #[arg(long)]
        restart_unit: Option<u64>,
        /// Worker threads (1 is deterministic)
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the diagonal decomposition of C_N x C_M
    Decompose {
        n: usize,
        m: usize,
        /// Use the start columns of the explicit construction
        #[arg(long)]
        construction: bool,
    },
    /// Draw a labeling as Graphviz DOT or SVG
    Render {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: FigureFormat,
        #[arg(long, value_enum, default_value = "labels")]
        annotate: Annotation,
        /// Color edges by diagonal
        #[arg(long)]
        highlight_diagonals: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn format_report(r: &VerificationReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    if r.is_supermagic {
        writeln!(out, "C_{} x C_{}: supermagic, constant {}", r.n, r.m, r.constant.unwrap_or_default()).unwrap();
        return out;
    }
    writeln!(out, "C_{} x C_{}: not supermagic", r.n, r.m).unwrap();
    if !r.is_bijection {
        writeln!(
            out,
            "  not a bijection onto 1..{}: duplicates {:?}, missing {:?}, out of range {:?}",
            2 * r.n * r.m,
            r.duplicates,
            r.missing,
            r.out_of_range
        )
        .unwrap();
    }
    if let Some(c) = r.constant {
        writeln!(out, "  all vertices weigh {c}").unwrap();
    }
    if !r.irregular.is_empty() {
        writeln!(out, "  vertices not weighing {}:", r.expected_constant).unwrap();
        for vw in &r.irregular {
            writeln!(out, "    {} weight {}", vw.vertex, vw.weight).unwrap();
        }
    }
    out
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Generate { n, m, out, format } => {
            let c = match construct(n, m) {
                Ok(c) => c,
                Err(e @ Error::Unsupported { .. }) => {
                    eprintln!("{e}");
                    return Ok(EXIT_UNSUPPORTED);
                }
                Err(e) => return Err(e.into()),
            };
            let meta = Metadata {
                generator: Some("construct".into()),
                constant: Some(forced_constant(c.labeling.dims())),
                plan: Some(c.plan),
            };
            let text = match format {
                OutputFormat::Json => encode_with(&c.labeling, Some(&meta)),
                OutputFormat::Edges => encode_edge_list(&c.labeling),
            };
            write_output(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Verify { file, json } => {
            let doc = decode(&read_input(&file)?)?;
            let report = verify(&doc.labeling);
            let text = if json { serde_json::to_string_pretty(&report)? + "\n" } else { format_report(&report) };
            write_output(None, &text)?;
            Ok(if report.is_supermagic { 0 } else { EXIT_REJECTED })
        }
        Command::Audit { file, plan, json } => {
            let doc = decode(&read_input(&file)?)?;
            let lab = &doc.labeling;
            let plan = match plan.as_str() {
                "auto" => ConstructionPlan::auto(lab.dims())?,
                "file" => doc.metadata.and_then(|m| m.plan).context("document carries no plan in its metadata")?,
                name => ConstructionPlan::for_dims(name.parse::<Variant>()?, lab.dims())?,
            };
            let report = audit_corners(lab, &plan)?;
            let mut text = String::new();
            if json {
                text = serde_json::to_string_pretty(&report)? + "\n";
            } else if report.clean {
                text += &format!("{} plan: all {} corners match\n", plan.variant, report.corners);
            } else {
                text += &format!(
                    "{} plan: {} of {} corners differ\n",
                    plan.variant,
                    report.mismatches.len(),
                    report.corners
                );
                for mm in &report.mismatches {
                    text +=
                        &format!("  {} at {}: expected {}, found {}\n", mm.corner, mm.vertex, mm.expected, mm.actual);
                }
            }
            write_output(None, &text)?;
            Ok(if report.clean { 0 } else { EXIT_REJECTED })
        }
        Command::Search { n, m, seed, node_budget, time_budget, restart_unit, jobs, out } => {
            anyhow::ensure!(time_budget > 0.0 && node_budget > 0 && jobs > 0, "budgets and --jobs must be positive");
            let cfg = SearchConfig {
                node_budget,
                time_budget: Duration::from_secs_f64(time_budget),
                value_order: seed.map_or(ValueOrder::Ascending, ValueOrder::SeededRandom),
                restart_policy: match restart_unit {
                    Some(unit) => RestartPolicy::Luby { seed: seed.unwrap_or(0), unit },
                    None => RestartPolicy::None,
                },
                parallelism: jobs,
            };
            let outcome = search(n, m, &cfg)?;
            let s = &outcome.stats;
            eprintln!(
                "{:?} after {} nodes (max depth {}, {} restarts) in {:.3}s",
                outcome.status,
                s.nodes,
                s.max_depth,
                s.restarts,
                s.elapsed.as_secs_f64()
            );
            eprintln!(
                "pruned: exact {}, forced {}, pair {}, bound {}, symmetry {}",
                s.prunes.exact, s.prunes.forced, s.prunes.pair, s.prunes.bound, s.prunes.symmetry
            );
            eprintln!("symmetry breaking: {}", outcome.symmetry_breaking);
            match (outcome.status, outcome.labeling) {
                (SearchStatus::Found, Some(lab)) => {
                    let meta = Metadata {
                        generator: Some("search".into()),
                        plan: None,
                        constant: Some(forced_constant(lab.dims())),
                    };
                    write_output(out.as_deref(), &encode_with(&lab, Some(&meta)))?;
                    Ok(0)
                }
                (SearchStatus::Exhausted, _) => Ok(EXIT_EXHAUSTED),
                _ => Ok(EXIT_BUDGET),
            }
        }
        Command::Decompose { n, m, construction } => {
            let g = GridDims::new(n, m)?;
            let (grid, starts) = if construction {
                let plan = ConstructionPlan::auto(&g)?;
                (plan.base_dims(&g), Some(plan.start_cols.clone()))
            } else {
                (g, None)
            };
            let mut text = String::new();
            if grid != g {
                text += &format!("# construction runs on the transpose, C_{} x C_{}\n", grid.n, grid.m);
            }
            text += &format!("C_{} x C_{}: l={} d={} q={}\n", grid.n, grid.m, grid.l, grid.d, grid.q);
            for diag in decompose(&grid, starts.as_deref())? {
                let edges: Vec<String> = diag.edges.iter().map(|e| e.to_string()).collect();
                text += &format!("D{} start={}: {}\n", diag.index, diag.start_col, edges.join(" "));
            }
            write_output(None, &text)?;
            Ok(0)
        }
        Command::Render { file, format, annotate, highlight_diagonals, out } => {
            let lab: Labeling = decode(&read_input(&file)?)?.labeling;
            let spec = RenderSpec {
                format: match format {
                    FigureFormat::Dot => Format::Dot,
                    FigureFormat::Svg => Format::Svg,
                },
                annotate: match annotate {
                    Annotation::Labels => Annotate::Labels,
                    Annotation::Weights => Annotate::Weights,
                    Annotation::Corners => Annotate::Corners,
                },
                highlight_diagonals,
            };
            write_output(out.as_deref(), &render(&lab, &spec))?;
            Ok(0)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().filter_map(|cause| cause.downcast_ref::<io::Error>()).any(|io| io.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
