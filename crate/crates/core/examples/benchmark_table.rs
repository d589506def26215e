//! A small replicated benchmark, streamed as CSV and then summarised.

use mecip::bench::{aggregate, csv_sink, parse_spec, render_table, run_benchmark, BenchOptions, CSV_HEADER};
use mecip::pipeline::LearnConfig;

const SPEC: &str = "
networks/asia.bif   1000   mecip,hc
networks/asia.bif   10000  mecip,hc
10,2,3,1            2000   mecip,hc
";

fn main() -> mecip::Result<()> {
    let cells = parse_spec(SPEC, Some(env!("CARGO_MANIFEST_DIR").as_ref()))?;
    let opts = BenchOptions { replicates: 5, base_seed: 100, learn: LearnConfig::default() };
    println!("{CSV_HEADER}");
    let records = run_benchmark(&cells, &opts, csv_sink(std::io::stdout()))?;
    println!();
    print!("{}", render_table(&aggregate(&records)));
    Ok(())
}
