use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hurwitz_core::cli::{parse_profiles, run, CliError, Command, Request};
use hurwitz_core::newick::parse_newick;
use hurwitz_core::Limits;

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Classical, tropical and Mumford-curve Hurwitz numbers")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Clone)]
enum Cmd {
    /// Classical Hurwitz number from the factorization count
    Classical(#[command(flatten)] Opts),
    /// Tropical count over a binary tree (the comb if none is given)
    Tropical(#[command(flatten)] Opts),
    /// Mumford-curve count over any tree
    Mumford(#[command(flatten)] Opts),
    /// Write DOT and JSON files for each cover class
    Covers(#[command(flatten)] Opts),
    /// Run the invariant suite; exits 1 if any check fails
    Verify(#[command(flatten)] Opts),
}

#[derive(clap::Args, Clone)]
struct Opts {
    /// Ramification profiles, e.g. "2,1|3|2,1"
    #[arg(long)]
    profiles: String,
    /// Degree of the cover; checked against the profiles
    #[arg(long)]
    degree: Option<u32>,
    /// Branch tree in Newick form with leaves 0..n-1, e.g. "((0,1),(2,3));"
    #[arg(long)]
    tree: Option<String>,
    /// Expected genus; checked against the profiles
    #[arg(long)]
    genus: Option<u32>,
    #[arg(long)]
    export_dir: Option<PathBuf>,
    /// How many binary refinements to compare for non-binary trees
    #[arg(long, default_value_t = 3)]
    refinement_trials: usize,
    /// Ceiling on factorization search steps
    #[arg(long)]
    max_work: Option<u128>,
    #[arg(long)]
    max_degree: Option<u32>,
}

fn request(kind: Command, o: Opts) -> Result<Request, CliError> {
    let mut req = Request::new(kind, parse_profiles(&o.profiles)?);
    req.degree = o.degree;
    req.genus = o.genus;
    req.tree = o.tree.as_deref().map(parse_newick).transpose()?;
    req.export_dir = o.export_dir;
    req.refinement_trials = o.refinement_trials;
    let mut limits = Limits::default();
    if let Some(w) = o.max_work {
        limits.max_work = w;
    }
    if let Some(d) = o.max_degree {
        limits.max_degree = d;
    }
    req.limits = limits;
    Ok(req)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (kind, opts) = match args.command {
        Cmd::Classical(o) => (Command::Classical, o),
        Cmd::Tropical(o) => (Command::Tropical, o),
        Cmd::Mumford(o) => (Command::Mumford, o),
        Cmd::Covers(o) => (Command::Covers, o),
        Cmd::Verify(o) => (Command::Verify, o),
    };
    match request(kind, opts).and_then(|r| run(&r)) {
        Ok(out) => {
            println!("{}", out.report);
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
