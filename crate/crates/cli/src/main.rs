use clap::{Parser, Subcommand};
use doubling_cli::commands;
use doubling_core::Error;

/// Census, bounds, container trees and paper-level verification for sets
/// with small sumset doubling in abelian groups.
#[derive(Parser)]
#[command(name = "doubling", version)]
struct Cli {
    /// Worker threads for the exhaustive suites (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count s-subsets of the ground set with |J+J| <= floor(Ks).
    Census {
        /// Group: `z:<n>` or `zmod:<m1>x<m2>...`
        #[arg(long)]
        group: String,
        #[arg(long)]
        s: usize,
        /// Doubling constant, rational: 2, 5/2, 2.5
        #[arg(long = "K", short = 'K')]
        k: String,
        /// Cross-check the pruned enumerator against the naive filter.
        #[arg(long)]
        oracle: bool,
        /// Evaluate the conjectured and proven bound formulas.
        #[arg(long)]
        bounds: bool,
        /// Append a JSONL record here (or $DOUBLING_STORE).
        #[arg(long)]
        out: Option<String>,
        /// Stdout shape: text, jsonl or csv.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Build the container tree over the census witnesses and verify it.
    Containers {
        #[arg(long)]
        group: String,
        #[arg(long)]
        s: usize,
        #[arg(long = "K", short = 'K')]
        k: String,
        #[arg(long)]
        epsilon: String,
        /// Override m (defaults to floor(Ks)).
        #[arg(long)]
        m: Option<u64>,
        /// Run the coverage / leaf-condition / depth verification.
        #[arg(long)]
        verify: bool,
        /// Write the tree as nested JSON records.
        #[arg(long)]
        dump_tree: Option<String>,
        /// Print one line per round of every container build.
        #[arg(long)]
        trace: bool,
    },
    /// Check the generalized Pollard inequality over a group.
    Supersat {
        #[arg(long)]
        group: String,
        /// Cap on |U|, |V| for finite abelian groups.
        #[arg(long, default_value_t = 4)]
        max_set: usize,
        /// Exhaust all admissible (U, V, t) triples.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Minimum-length AP cover with an outlier budget.
    Apcover {
        /// Comma-separated integers, e.g. 1,2,3,10
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 0)]
        outliers: usize,
    },
    /// Lower-bound family generators.
    Lowerbound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long = "K", short = 'K')]
        k: String,
        /// Expand the whole family and verify every member.
        #[arg(long)]
        verify_all: bool,
        /// Verify this many sampled members instead.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Fraction of census sets close to an arithmetic progression.
    Typicality {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: usize,
        #[arg(long = "K", short = 'K')]
        k: String,
        #[arg(long)]
        tmax: u64,
        #[arg(long)]
        pmax: u64,
    },
    /// Run every paper-derived invariant suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random (1,2)-bounded instances for the container suites.
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::Usage(_)) | Some(Error::Domain(_)) => 2,
        Some(Error::Resource(_)) => 3,
        Some(Error::Verification(_)) => 1,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .ok();
    }
    let result = match cli.command {
        Command::Census {
            group,
            s,
            k,
            oracle,
            bounds,
            out,
            format,
        } => format
            .parse()
            .map_err(anyhow::Error::from)
            .and_then(|f| commands::census(&group, s, &k, oracle, bounds, out.as_deref(), f)),
        Command::Containers {
            group,
            s,
            k,
            epsilon,
            m,
            verify,
            dump_tree,
            trace,
        } => commands::containers(
            &group,
            s,
            &k,
            &epsilon,
            m,
            verify,
            dump_tree.as_deref(),
            trace,
        ),
        Command::Supersat {
            group,
            max_set,
            exhaustive,
        } => commands::supersat(&group, max_set, exhaustive),
        Command::Apcover { set, outliers } => commands::apcover(&set, outliers),
        Command::Lowerbound {
            n,
            s,
            k,
            verify_all,
            sample,
            seed,
        } => commands::lowerbound(n, s, &k, verify_all, sample, seed),
        Command::Typicality {
            n,
            s,
            k,
            tmax,
            pmax,
        } => commands::typicality(n, s, &k, tmax, pmax),
        Command::Verify { seed, instances } => commands::verify(seed, instances),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}
