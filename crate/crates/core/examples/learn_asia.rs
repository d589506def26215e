//! Samples the Asia network and learns its equivalence class with MEC-IP.
//!
//! `cargo run --release --example learn_asia -- [rows] [seed]`

use mecip::network::{forward_sample, read_bif};
use mecip::pipeline::{learn_mecip, structural_metrics, LearnConfig};

fn main() -> mecip::Result<()> {
    let mut args = std::env::args().skip(1);
    let rows = args.next().map_or(10_000, |s| s.parse().expect("row count"));
    let seed = args.next().map_or(1, |s| s.parse().expect("seed"));

    let net = read_bif(concat!(env!("CARGO_MANIFEST_DIR"), "/networks/asia.bif"))?;
    let data = forward_sample(&net, rows, seed)?;
    let result = learn_mecip(&data, &LearnConfig { seed, ..LearnConfig::default() })?;

    print!("{}", result.report(data.names()));
    let m = structural_metrics(&net, &result.cpdag)?;
    println!("# missing {:.3}  extra {:.3}", m.missing_pct, m.extra_pct);
    Ok(())
}
