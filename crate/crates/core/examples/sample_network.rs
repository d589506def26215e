//! Forward-samples a BIF network and writes the rows as CSV to stdout.
//!
//! `cargo run --example sample_network -- networks/sachs.bif 20 7`

use mecip::data::write_csv;
use mecip::network::{forward_sample, read_bif};

fn main() -> mecip::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/networks/sachs.bif").to_string());
    let rows = args.next().map_or(10, |s| s.parse().expect("row count"));
    let seed = args.next().map_or(0, |s| s.parse().expect("seed"));

    let net = read_bif(&path)?;
    eprintln!("{} variables, {} arcs, max in-degree {}", net.n_nodes(), net.n_edges(), net.max_in_degree());
    let data = forward_sample(&net, rows, seed)?;
    write_csv(&data, std::io::stdout().lock(), true)
}
