//! Replicated benchmarks: spec files, per-replicate records and mean (std)
//! aggregates.
//!
//! A spec lists one cell per line:
//!
//! ```text
//! # network        sample size   algorithms
//! networks/asia.bif    1000      mecip,hc
//! 20,2,2,1             5000      mecip
//! ```
//!
//! The first field is a BIF path or a synthetic tuple
//! `nodes,max_in_degree,max_states,strength`. Replicate `i` of a run with
//! base seed `s` uses seed `s + i`. For BIF networks that seed drives the
//! sampler; for synthetic tuples it generates the network and
//! [`sample_seed`] of it drives the sampler. All algorithms of a cell see the
//! same dataset in a given replicate.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{arg, Error, Result};
use crate::network::{forward_sample, gen_random_net, read_bif, DiscreteBayesNet, SyntheticSpec};
use crate::pipeline::{learn_hc_tabu, learn_mecip, structural_metrics, Algorithm, LearnConfig};

pub const CSV_HEADER: &str = "network,n,algorithm,seed,missing_pct,extra_pct,seconds";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkSource {
    Bif(PathBuf),
    Synthetic { nodes: usize, max_in_degree: usize, max_states: usize, strength: u32 },
}

impl NetworkSource {
    /// Label used in records: the BIF file stem or the tuple.
    pub fn label(&self) -> String {
        match self {
            NetworkSource::Bif(p) => p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
            NetworkSource::Synthetic { nodes, max_in_degree, max_states, strength } => {
                format!("({nodes} {max_in_degree} {max_states} {strength})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchCell {
    pub source: NetworkSource,
    pub n: usize,
    pub algorithms: Vec<Algorithm>,
}

/// Parses a spec. Relative BIF paths are tried as given first, then
/// relative to `base_dir`; a file found in neither place is an error.
pub fn parse_spec(text: &str, base_dir: Option<&Path>) -> Result<Vec<BenchCell>> {
    let mut cells = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let perr = |msg: String| Error::Parse { line, msg };
        if fields.len() != 3 {
            return Err(perr(format!("expected `<network> <sample-size> <algorithms>`, found {} fields", fields.len())));
        }
        let source = parse_source(fields[0], base_dir).map_err(|e| perr(e.to_string()))?;
        let n: usize = fields[1].parse().map_err(|_| perr(format!("invalid sample size `{}`", fields[1])))?;
        if n == 0 {
            return Err(perr("sample size must be at least 1".into()));
        }
        let algorithms = fields[2].split(',').map(|a| a.parse::<Algorithm>()).collect::<Result<Vec<_>>>().map_err(|e| match e {
            Error::Argument(msg) => perr(msg),
            other => other,
        })?;
        cells.push(BenchCell { source, n, algorithms });
    }
    Ok(cells)
}

fn parse_source(field: &str, base_dir: Option<&Path>) -> Result<NetworkSource> {
    let parts: Vec<&str> = field.split(',').collect();
    if parts.len() == 4 && parts.iter().all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit())) {
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Argument(format!("tuple value `{s}` too large")));
        let spec = SyntheticSpec::new(num(parts[0])?, num(parts[1])?, num(parts[2])?, num(parts[3])? as u32, 0);
        spec.validate()?;
        return Ok(NetworkSource::Synthetic {
            nodes: spec.n_nodes,
            max_in_degree: spec.max_in_degree,
            max_states: spec.max_states,
            strength: spec.strength,
        });
    }
    let p = PathBuf::from(field);
    if p.exists() {
        return Ok(NetworkSource::Bif(p));
    }
    match base_dir.map(|b| b.join(&p)) {
        Some(q) if p.is_relative() && q.exists() => Ok(NetworkSource::Bif(q)),
        _ => arg(format!("network file `{field}` not found")),
    }
}

/// Sampling seed for synthetic cells, derived from the replicate seed that
/// generated the network.
pub fn sample_seed(seed: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17) ^ 0xD1B5_4A32_D192_ED03
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub network: String,
    pub n: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub missing_pct: f64,
    pub extra_pct: f64,
    /// Wall-clock time of the learn call only.
    pub seconds: f64,
}

impl BenchmarkRecord {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6}",
            self.network, self.n, self.algorithm, self.seed, self.missing_pct, self.extra_pct, self.seconds
        )
    }

    pub fn from_csv(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 7 {
            return arg(format!("record needs 7 fields, found {}", f.len()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Argument(format!("invalid number `{s}`")));
        Ok(Self {
            network: f[0].to_string(),
            n: f[1].parse().map_err(|_| Error::Argument(format!("invalid sample size `{}`", f[1])))?,
            algorithm: f[2].parse()?,
            seed: f[3].parse().map_err(|_| Error::Argument(format!("invalid seed `{}`", f[3])))?,
            missing_pct: num(f[4])?,
            extra_pct: num(f[5])?,
            seconds: num(f[6])?,
        })
    }
}

/// Reads records back from benchmark CSV text, skipping `#` lines, the
/// header and blank lines.
pub fn parse_records(text: &str) -> Result<Vec<BenchmarkRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#') && l.trim() != CSV_HEADER)
        .map(|(i, l)| BenchmarkRecord::from_csv(l).map_err(|e| Error::Format { row: i + 1, msg: e.to_string() }))
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    pub replicates: usize,
    pub base_seed: u64,
    pub learn: LearnConfig,
}

/// Dataset and ground truth for one replicate of a cell.
pub fn replicate_data(
    source: &NetworkSource,
    n: usize,
    seed: u64,
    loaded: Option<&DiscreteBayesNet>,
) -> Result<(DiscreteBayesNet, crate::data::CategoricalDataset)> {
    match source {
        NetworkSource::Bif(path) => {
            let net = match loaded {
                Some(net) => net.clone(),
                None => read_bif(path)?,
            };
            let ds = forward_sample(&net, n, seed)?;
            Ok((net, ds))
        }
        &NetworkSource::Synthetic { nodes, max_in_degree, max_states, strength } => {
            let net = gen_random_net(&SyntheticSpec::new(nodes, max_in_degree, max_states, strength, seed))?;
            let ds = forward_sample(&net, n, sample_seed(seed))?;
            Ok((net, ds))
        }
    }
}

/// Runs every replicate of every cell, handing each record to `sink` as soon
/// as it is produced. Replicates run in parallel on the current rayon pool,
/// so records arrive in completion order.
pub fn run_benchmark<F>(cells: &[BenchCell], opts: &BenchOptions, sink: F) -> Result<Vec<BenchmarkRecord>>
where
    F: FnMut(&BenchmarkRecord) -> Result<()> + Send,
{
    if opts.replicates == 0 {
        return arg("replicates must be at least 1");
    }
    opts.learn.validate()?;
    let mut nets = Vec::with_capacity(cells.len());
    for c in cells {
        nets.push(match &c.source {
            NetworkSource::Bif(p) => Some(read_bif(p)?),
            NetworkSource::Synthetic { .. } => None,
        });
    }
    let jobs: Vec<(usize, u64)> = (0..cells.len()).flat_map(|c| (0..opts.replicates as u64).map(move |r| (c, r))).collect();
    let sink = Mutex::new(sink);
    let results: Vec<Vec<BenchmarkRecord>> = jobs
        .par_iter()
        .map(|&(c, r)| {
            let cell = &cells[c];
            let seed = opts.base_seed.wrapping_add(r);
            let (net, ds) = replicate_data(&cell.source, cell.n, seed, nets[c].as_ref())?;
            let mut out = Vec::new();
            for &alg in &cell.algorithms {
                let cfg = LearnConfig { seed, ..opts.learn };
                let t = Instant::now();
                let res = match alg {
                    Algorithm::Mecip => learn_mecip(&ds, &cfg)?,
                    Algorithm::Hc => learn_hc_tabu(&ds, &cfg)?,
                };
                let seconds = t.elapsed().as_secs_f64();
                let m = structural_metrics(&net, &res.cpdag)?;
                let rec = BenchmarkRecord {
                    network: cell.source.label(),
                    n: cell.n,
                    algorithm: alg,
                    seed,
                    missing_pct: m.missing_pct,
                    extra_pct: m.extra_pct,
                    seconds,
                };
                (sink.lock().unwrap())(&rec)?;
                out.push(rec);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().collect())
}

/// Writes each record as a CSV line and flushes.
pub fn csv_sink<W: Write + Send>(mut out: W) -> impl FnMut(&BenchmarkRecord) -> Result<()> + Send {
    move |rec| {
        writeln!(out, "{}", rec.to_csv())?;
        out.flush()?;
        Ok(())
    }
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for a single
/// value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// `m (s)` with three decimals.
pub fn format_mean_std(m: f64, s: f64) -> String {
    format!("{m:.3} ({s:.3})")
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub network: String,
    pub n: usize,
    pub algorithm: Algorithm,
    pub replicates: usize,
    pub missing: (f64, f64),
    pub extra: (f64, f64),
    pub seconds: (f64, f64),
}

/// One row per (network, n, algorithm), sorted by those keys.
pub fn aggregate(records: &[BenchmarkRecord]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, usize, &'static str), Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.network.clone(), r.n, r.algorithm.name())).or_default().push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let col = |f: fn(&BenchmarkRecord) -> f64| mean_std(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
            AggregateRow {
                network: rs[0].network.clone(),
                n: rs[0].n,
                algorithm: rs[0].algorithm,
                replicates: rs.len(),
                missing: col(|r| r.missing_pct),
                extra: col(|r| r.extra_pct),
                seconds: col(|r| r.seconds),
            }
        })
        .collect()
}

/// Plain-text table of aggregates in the `mean (std)` style.
pub fn render_table(rows: &[AggregateRow]) -> String {
    let mut s = String::new();
    let _ =
        writeln!(s, "{:<16} {:>7} {:<9} {:>4} {:>17} {:>17} {:>19}", "network", "n", "algorithm", "reps", "missing", "extra", "seconds");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<16} {:>7} {:<9} {:>4} {:>17} {:>17} {:>19}",
            r.network,
            r.n,
            r.algorithm.name(),
            r.replicates,
            format_mean_std(r.missing.0, r.missing.1),
            format_mean_std(r.extra.0, r.extra.1),
            format_mean_std(r.seconds.0, r.seconds.1)
        );
    }
    s
}
