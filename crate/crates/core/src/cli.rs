//! The `mecip` command line: `learn`, `sample`, `gen`, `benchmark` and
//! `eval`.
//!
//! Exit status is 0 on success, 2 for unusable input or arguments, and 1
//! when a computation fails for another reason.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bench::{aggregate, csv_sink, parse_spec, render_table, run_benchmark, BenchOptions, CSV_HEADER};
use crate::data::{load_csv, write_csv};
use crate::error::{arg, Error, Result};
use crate::graph::parse_edge_list;
use crate::network::{forward_sample, gen_random_net, read_bif, to_bif_string, SyntheticSpec};
use crate::pipeline::{learn_hc_tabu, learn_mecip, structural_metrics, Algorithm, LearnConfig};

#[derive(Debug, Parser)]
#[command(name = "mecip", version, about = "Learn Markov equivalence classes of discrete Bayesian networks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Random seed (sampling, generation, tie-breaking; base seed for benchmarks)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Significance level of every chi-square test
    #[arg(long, global = true, default_value_t = 0.05)]
    alpha: f64,
    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Learning algorithm
    #[arg(long, global = true, default_value = "mecip", value_parser = ["mecip", "hc"])]
    algo: String,
    /// Replicates per benchmark cell
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    replicates: u64,
    /// Worker threads (all cores when omitted)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Learn a CPDAG from a CSV dataset
    Learn {
        data: PathBuf,
        /// The first line holds data, not column names
        #[arg(long)]
        no_header: bool,
        /// Cap on triangulation passes
        #[arg(long, default_value_t = 50)]
        max_rounds: usize,
        /// Largest parent set considered (unrestricted when omitted)
        #[arg(long)]
        max_parents: Option<usize>,
    },
    /// Draw a CSV dataset from a BIF network
    Sample {
        network: PathBuf,
        /// Number of rows
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Generate a random BIF network
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        max_indeg: usize,
        #[arg(long)]
        max_states: usize,
        /// 1 = strong dependence ... 5 = weak
        #[arg(long)]
        strength: u32,
    },
    /// Run replicated benchmark cells from a spec file
    Benchmark {
        #[arg(long)]
        spec: PathBuf,
        /// Also write the aggregate table here
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Compare a learned edge list with a reference network
    Eval {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        learned: PathBuf,
    },
}

/// Runs the command line with the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Runs the command line, writing to the given streams.
pub fn run_with<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = if e.use_stderr() { e.render().to_string() } else { e.to_string() };
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    let pool = match cli.global.threads {
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k as usize).build().map_err(|e| Error::Argument(e.to_string())),
        None => rayon::ThreadPoolBuilder::new().build().map_err(|e| Error::Argument(e.to_string())),
    };
    let result = pool.and_then(|p| p.install(|| dispatch(&cli, stdout)));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) | Error::Invariant(_) => 1,
        _ => 2,
    }
}

fn output(out: &Option<PathBuf>, stdout: &mut (dyn Write + Send), text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn learn_config(g: &Global) -> Result<LearnConfig> {
    let cfg = LearnConfig { alpha: g.alpha, seed: g.seed, ..LearnConfig::default() };
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(cli: &Cli, stdout: &mut (dyn Write + Send)) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Learn { data, no_header, max_rounds, max_parents } => {
            let cfg = LearnConfig { max_rounds: *max_rounds, max_parents: *max_parents, ..learn_config(g)? };
            cfg.validate()?;
            let ds = load_csv(data, !no_header)?;
            let algo: Algorithm = g.algo.parse()?;
            let res = match algo {
                Algorithm::Mecip => learn_mecip(&ds, &cfg)?,
                Algorithm::Hc => learn_hc_tabu(&ds, &cfg)?,
            };
            let mut text = format!(
                "# mecip learn data={} rows={} vars={} algo={algo} alpha={} seed={} max_rounds={}\n",
                data.display(),
                ds.n_rows(),
                ds.n_vars(),
                cfg.alpha,
                cfg.seed,
                cfg.max_rounds
            );
            text.push_str(&res.report(ds.names()));
            output(&g.out, stdout, &text)
        }
        Command::Sample { network, n } => {
            let net = read_bif(network)?;
            let ds = forward_sample(&net, *n as usize, g.seed)?;
            let mut buf = format!("# mecip sample network={} n={n} seed={}\n", network.display(), g.seed).into_bytes();
            write_csv(&ds, &mut buf, true)?;
            output(&g.out, stdout, &String::from_utf8(buf).expect("utf-8 labels"))
        }
        Command::Gen { nodes, max_indeg, max_states, strength } => {
            let spec = SyntheticSpec::new(*nodes, *max_indeg, *max_states, *strength, g.seed);
            let net = gen_random_net(&spec)?;
            let header = format!(
                "mecip gen nodes={nodes} max_indeg={max_indeg} max_states={max_states} strength={strength} dirichlet_alpha={} seed={}",
                spec.dirichlet_alpha(),
                g.seed
            );
            output(&g.out, stdout, &to_bif_string(&net, Some(&header))?)
        }
        Command::Benchmark { spec, table } => {
            let text = std::fs::read_to_string(spec)?;
            let cells = parse_spec(&text, spec.parent())?;
            if cells.is_empty() {
                return arg("benchmark spec lists no cells");
            }
            let opts = BenchOptions { replicates: g.replicates as usize, base_seed: g.seed, learn: learn_config(g)? };
            let header = format!(
                "# mecip benchmark spec={} replicates={} base_seed={} alpha={} seconds=learn-call wall clock\n{CSV_HEADER}\n",
                spec.display(),
                opts.replicates,
                opts.base_seed,
                opts.learn.alpha
            );
            let records = match &g.out {
                Some(p) => {
                    let mut f = BufWriter::new(File::create(p)?);
                    f.write_all(header.as_bytes())?;
                    f.flush()?;
                    let recs = run_benchmark(&cells, &opts, csv_sink(&mut f))?;
                    f.flush()?;
                    recs
                }
                None => {
                    stdout.write_all(header.as_bytes())?;
                    run_benchmark(&cells, &opts, csv_sink(&mut *stdout))?
                }
            };
            let rendered = render_table(&aggregate(&records));
            if let Some(t) = table {
                std::fs::write(t, &rendered)?;
            }
            if g.out.is_some() {
                stdout.write_all(rendered.as_bytes())?;
            } else {
                for line in rendered.lines() {
                    writeln!(stdout, "# {line}")?;
                }
            }
            Ok(())
        }
        Command::Eval { truth, learned } => {
            let net = read_bif(truth)?;
            let text = std::fs::read_to_string(learned)?;
            let g_learned = parse_edge_list(&text, net.names())?;
            let m = structural_metrics(&net, &g_learned)?;
            let report = format!(
                "missing_pct: {:.6}\nextra_pct: {:.6}\ntrue_edges: {}\nlearned_edges: {}\nmissing: {}\nextra: {}\n",
                m.missing_pct, m.extra_pct, m.n_true_edges, m.n_learned_edges, m.n_missing, m.n_extra
            );
            output(&g.out, stdout, &report)
        }
    }
}
