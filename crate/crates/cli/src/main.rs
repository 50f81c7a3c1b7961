use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use branchspan_core::engine::{solve, CountingCertificate, SolveOptions, SolveStatus};
use branchspan_core::generators::GenSpec;
use branchspan_core::graph::{parse_graph, Graph};
use branchspan_core::oracle::OracleConfig;
use branchspan_core::verify::{check_theorem_with, run_campaign_to, CampaignConfig, CheckOptions, Theorem};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

/// Spanning trees with few branch vertices in claw-free graphs.
#[derive(Debug, Parser)]
#[command(name = "branchspan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find a spanning tree with at most two branch vertices.
    Solve {
        /// Edge-list file, or `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        /// Print one line per applied move.
        #[arg(long)]
        trace: bool,
        /// Fall back to the exact oracle when the exchange search stalls.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        caps: Caps,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a theorem's hypotheses and conclusion on one graph (JSON).
    Verify {
        #[arg(default_value = "-")]
        input: String,
        /// t14, t15 or conj:<k>.
        #[arg(long, default_value = "t14")]
        theorem: Theorem,
        #[command(flatten)]
        caps: Caps,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the graph a generator spec describes, as an edge list.
    Gen {
        /// e.g. `line:10:0.3:7`, `repair:8:0.1:1`, `C6`, `net`, `line:K4`.
        spec: GenSpec,
        /// Replace the seed of a random spec.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a campaign from a JSON config and write its report.
    Campaign {
        config: PathBuf,
        /// Replace the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        caps: Caps,
        #[arg(long, default_value = "campaign-report.json")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Caps {
    /// Largest order the exact oracle accepts.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    oracle_cap: Option<u64>,
    /// Exchange budget; defaults to n^3.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    move_cap: Option<u64>,
}

impl Caps {
    fn oracle(&self) -> OracleConfig {
        let mut cfg = OracleConfig::default();
        if let Some(cap) = self.oracle_cap {
            cfg.cap = cap as usize;
        }
        cfg
    }

    fn moves(&self) -> Option<usize> {
        self.move_cap.map(|c| c as usize)
    }
}

fn read_input(input: &str) -> Result<String> {
    if input == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading standard input")?;
        Ok(text)
    } else {
        fs::read_to_string(input).with_context(|| format!("reading {input}"))
    }
}

fn read_graph(input: &str) -> Result<Graph> {
    let text = read_input(input)?;
    parse_graph(&text).with_context(|| format!("parsing {input}"))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn certificate_text(cert: &CountingCertificate) -> String {
    let mut s = format!(
        "certificate {:?} I={:?} independent={} deg(I)={} capacity={} margin={} sigma={}\n",
        cert.shape.shape,
        cert.independent_set,
        cert.independent,
        cert.degree_sum,
        cert.capacity_total,
        cert.contradiction_margin,
        cert.sigma_bound
    );
    for r in &cert.regions {
        let flag = if r.violated() { " over" } else { "" };
        s.push_str(&format!("region {} {:?} count={} capacity={}{flag}\n", r.label, r.vertices, r.count, r.capacity));
    }
    s
}

fn cmd_solve(input: &str, trace: bool, oracle: bool, json: bool, caps: &Caps, out: Option<&Path>) -> Result<ExitCode> {
    let g = read_graph(input)?;
    let opts = SolveOptions {
        oracle_fallback: oracle,
        oracle: caps.oracle(),
        move_cap: caps.moves(),
        leaf_target: 6,
    };
    let outcome = solve(&g, &opts)?;
    let text = if json {
        let doc = json!({
            "status": outcome.status,
            "branch_vertices": outcome.branch_count(),
            "leaves": outcome.tree.leaf_count(),
            "tree": outcome.tree.edges(),
            "moves": outcome.trace,
            "certificate": outcome.certificate,
        });
        serde_json::to_string_pretty(&doc)? + "\n"
    } else {
        let mut s = String::new();
        if trace {
            s.push_str(&outcome.trace_text());
        }
        s.push_str(&format!("status {:?}\n", outcome.status));
        s.push_str(&format!("branch_vertices {}\n", outcome.branch_count()));
        s.push_str(&outcome.tree.to_parent_array());
        if matches!(outcome.status, SolveStatus::Stalled | SolveStatus::CapReached) {
            if let Some(cert) = &outcome.certificate {
                s.push_str(&certificate_text(cert));
            }
        }
        s
    };
    emit(out, &text)?;
    Ok(match outcome.status {
        SolveStatus::Solved | SolveStatus::OracleSolved => ExitCode::SUCCESS,
        SolveStatus::Stalled | SolveStatus::CapReached => ExitCode::from(2),
    })
}

fn cmd_verify(input: &str, theorem: Theorem, caps: &Caps, out: Option<&Path>) -> Result<ExitCode> {
    let g = read_graph(input)?;
    let opts = CheckOptions {
        oracle: caps.oracle(),
        move_cap: caps.moves(),
    };
    let check = check_theorem_with(&g, theorem, &opts);
    emit(out, &(serde_json::to_string_pretty(&check)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(spec: GenSpec, seed: Option<u64>, out: Option<&Path>) -> Result<ExitCode> {
    let spec = match (spec, seed) {
        (GenSpec::Random { strategy, n, p, .. }, Some(seed)) => GenSpec::Random { strategy, n, p, seed },
        (GenSpec::Named(_), Some(_)) => bail!("--seed only applies to random specs"),
        (spec, None) => spec,
    };
    emit(out, &spec.generate().to_edge_list())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_campaign(config: &Path, seed: Option<u64>, caps: &Caps, out: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let mut cfg: CampaignConfig =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
    if let Some(seed) = seed {
        cfg.master_seed = seed;
    }
    if let Some(cap) = caps.oracle_cap {
        cfg.oracle_cap = cap as usize;
    }
    if let Some(cap) = caps.move_cap {
        cfg.move_cap = Some(cap as usize);
    }
    let report = run_campaign_to(&cfg, out)?;
    println!(
        "{} instances, {} satisfy ({} vacuously), {} counterexamples, solver-only rate {:.3}",
        report.instance_count,
        report.hypothesis_satisfied,
        report.vacuous,
        report.counterexamples.len(),
        report.solver_only_success_rate
    );
    println!("{}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve {
            input,
            trace,
            oracle,
            json,
            caps,
            out,
        } => cmd_solve(&input, trace, oracle, json, &caps, out.as_deref()),
        Command::Verify {
            input,
            theorem,
            caps,
            out,
        } => cmd_verify(&input, theorem, &caps, out.as_deref()),
        Command::Gen { spec, seed, out } => cmd_gen(spec, seed, out.as_deref()),
        Command::Campaign {
            config,
            seed,
            caps,
            out,
        } => cmd_campaign(&config, seed, &caps, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
