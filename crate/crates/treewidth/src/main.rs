use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use treewidth::drivers::{self, Backend, DriverResult, Mode, Ratio, TwOutcome};
use treewidth::io::{emit_gr, emit_td, generate, parse_gr, parse_td, GenKind};
use treewidth::search::SolveOptions;
use treewidth::Graph;

const EXIT_NO: u8 = 10;
const EXIT_BUDGET: u8 = 20;

#[derive(Parser)]
#[command(name = "tw", about = "Exact and (1+eps)-approximate treewidth solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide tw(G) <= k and emit a decomposition, or prove TW > k.
    Exact {
        #[arg(short)]
        k: usize,
        #[arg(long, default_value = "stw")]
        backend: Backend,
        #[arg(long)]
        budget: Option<u64>,
        input: PathBuf,
        #[arg(short)]
        out: Option<PathBuf>,
    },
    /// Emit a decomposition of width <= (1+eps)k, or prove TW > k.
    Approx {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        eps: Ratio,
        input: PathBuf,
        #[arg(short)]
        out: Option<PathBuf>,
    },
    /// Compute the treewidth by increasing k; writes <input>.td.
    Width { input: PathBuf },
    /// Check a decomposition file against a graph file.
    Validate { graph: PathBuf, td: PathBuf },
    /// Brute-force treewidth for small graphs (n <= 20).
    Oracle { input: PathBuf },
    /// Generate an instance: gnp <n> <p> [seed] | grid <r> <c> |
    /// ktree <n> <k> [seed] | cycle <n>.
    Gen {
        kind: String,
        params: Vec<String>,
        #[arg(short)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(path)?;
    let (g, warnings) = parse_gr(&text)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(g)
}

fn write_td(
    td: &treewidth::TreeDecomposition,
    n: usize,
    out: &Option<PathBuf>,
) -> std::io::Result<()> {
    let text = emit_td(td, n);
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let opts = SolveOptions::default();
    match cli.cmd {
        Cmd::Exact { k, backend, budget, input, out } => {
            let g = read_graph(&input)?;
            match drivers::exact(&g, k, backend, opts, budget) {
                DriverResult::Decomposition(td) => {
                    write_td(&td, g.n(), &out)?;
                    Ok(ExitCode::SUCCESS)
                }
                DriverResult::NoSolution => {
                    println!("TW > {k}");
                    Ok(ExitCode::from(EXIT_NO))
                }
                DriverResult::BudgetExceeded => {
                    eprintln!("budget exhausted");
                    Ok(ExitCode::from(EXIT_BUDGET))
                }
            }
        }
        Cmd::Approx { k, eps, input, out } => {
            let g = read_graph(&input)?;
            match drivers::approx(&g, k, eps, opts, None) {
                DriverResult::Decomposition(td) => {
                    println!("c width {} bound {}", td.width(), eps.widen(k));
                    write_td(&td, g.n(), &out)?;
                    Ok(ExitCode::SUCCESS)
                }
                DriverResult::NoSolution => {
                    println!("TW > {k}");
                    Ok(ExitCode::from(EXIT_NO))
                }
                DriverResult::BudgetExceeded => {
                    eprintln!("budget exhausted");
                    Ok(ExitCode::from(EXIT_BUDGET))
                }
            }
        }
        Cmd::Width { input } => {
            let g = read_graph(&input)?;
            match drivers::treewidth(&g, Mode::Exact, opts, None) {
                TwOutcome::Computed { width, td } => {
                    println!("{width}");
                    let out = input.with_extension("td");
                    write_td(&td, g.n(), &Some(out))?;
                    Ok(ExitCode::SUCCESS)
                }
                TwOutcome::BudgetExceeded => {
                    eprintln!("budget exhausted");
                    Ok(ExitCode::from(EXIT_BUDGET))
                }
            }
        }
        Cmd::Validate { graph, td } => {
            let g = read_graph(&graph)?;
            let text = std::fs::read_to_string(&td)?;
            match parse_td(&text, &g) {
                Ok(td) => {
                    println!("valid, width {}", td.width());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Oracle { input } => {
            let g = read_graph(&input)?;
            let (width, _) = treewidth::oracle::exact_tw(&g)?;
            println!("{width}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen { kind, params, out } => {
            let default_seed: u64 = std::env::var("TW_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
            let need = |i: usize| -> Result<&String, Box<dyn std::error::Error>> {
                params.get(i).ok_or_else(|| format!("missing parameter {i}").into())
            };
            let kind = match kind.as_str() {
                "gnp" => GenKind::Gnp {
                    n: need(0)?.parse()?,
                    p: need(1)?.parse()?,
                    seed: params.get(2).map(|s| s.parse()).transpose()?.unwrap_or(default_seed),
                },
                "grid" => GenKind::Grid { rows: need(0)?.parse()?, cols: need(1)?.parse()? },
                "ktree" => GenKind::Ktree {
                    n: need(0)?.parse()?,
                    k: need(1)?.parse()?,
                    seed: params.get(2).map(|s| s.parse()).transpose()?.unwrap_or(default_seed),
                },
                "cycle" => GenKind::Cycle { n: need(0)?.parse()? },
                other => return Err(format!("unknown generator '{other}'").into()),
            };
            let g = generate(&kind)?;
            let text = emit_gr(&g);
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
