use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kcoal_cli::{
    cmd_gen, cmd_indices, cmd_resist, cmd_retable, cmd_verify, CliError, CmdOutput, Format, GraphSample, Route,
    Source, SweepRange, TargetChoice,
};
use kcoal_core::family::Family;

/// Resistance distances, indices and formula checks for coalescence graphs.
#[derive(Debug, Parser)]
#[command(name = "kcoal", version)]
struct Cli {
    /// Output format: csv, json or text.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Verdict tolerance, relative to max(1, |oracle|).
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads for sweeps; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the canonical edge list of a family member or edge-list file.
    Gen {
        /// Family spec such as `kcoal:p1=4,p2=3,k=1`, or an edge-list path.
        source: String,
    },
    /// Print the resistance matrix.
    Resist {
        source: String,
        /// oracle, closed or both.
        #[arg(long, default_value = "oracle")]
        route: Route,
    },
    /// Print the six resistance-based indices by definition.
    Indices { source: String },
    /// Compare closed forms with the oracle over a parameter sweep.
    Verify {
        /// Family name, e.g. kcoal, windmill, pineapple.
        family: Family,
        /// resistance, an index name, or all.
        #[arg(default_value = "all")]
        target: TargetChoice,
        /// Override a parameter range, e.g. `p1=2..10` or `k=1`. Repeatable.
        #[arg(long = "range", value_name = "NAME=LO..HI")]
        ranges: Vec<String>,
        /// For kcoal, skip tuples with p2 > p1 (isomorphic to a swapped tuple).
        #[arg(long)]
        canonical: bool,
        /// Random graphs G per tuple for the join families.
        #[arg(long, default_value_t = 20)]
        graphs: usize,
        /// Largest order of a random G.
        #[arg(long, default_value_t = 8)]
        graph_max_order: usize,
        /// Seed for the random graphs.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Regenerate the resistance-energy table with a computed column.
    Retable,
}

fn run(cli: Cli) -> Result<CmdOutput, CliError> {
    match cli.command {
        Command::Gen { source } => cmd_gen(&Source::resolve(&source)?),
        Command::Resist { source, route } => cmd_resist(&Source::resolve(&source)?, route, cli.format),
        Command::Indices { source } => cmd_indices(&Source::resolve(&source)?, cli.format),
        Command::Verify { family, target, ranges, canonical, graphs, graph_max_order, seed } => {
            let mut sweep = SweepRange { canonical, ..SweepRange::defaults(family, cli.tol) };
            for r in &ranges {
                sweep.set(r)?;
            }
            let sample = GraphSample { count: graphs, max_order: graph_max_order, seed };
            cmd_verify(&sweep, target, &sample, cli.jobs, cli.format)
        }
        Command::Retable => cmd_retable(cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    let result = run(cli).and_then(|out| {
        match &out_path {
            Some(path) => std::fs::write(path, &out.body)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
            None => {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(out.body.as_bytes());
            }
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            for note in &out.notes {
                if out_path.is_some() {
                    println!("{note}");
                } else {
                    eprintln!("{note}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
