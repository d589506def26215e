//! MEC-IP against the tabu hill-climbing baseline on Sachs.

use mecip::network::{forward_sample, read_bif};
use mecip::pipeline::{learn_hc_tabu, learn_mecip, structural_metrics, LearnConfig};

fn main() -> mecip::Result<()> {
    let net = read_bif(concat!(env!("CARGO_MANIFEST_DIR"), "/networks/sachs.bif"))?;
    println!("     n  algorithm          BIC  missing  extra  seconds");
    for n in [500, 2000, 10_000] {
        let data = forward_sample(&net, n, n as u64)?;
        let cfg = LearnConfig { seed: 1, ..LearnConfig::default() };
        for result in [learn_mecip(&data, &cfg)?, learn_hc_tabu(&data, &cfg)?] {
            let m = structural_metrics(&net, &result.cpdag)?;
            println!(
                "{n:>6}  {:<9} {:>13.2}  {:>7.3}  {:>5.3}  {:>7.3}",
                result.algorithm.name(),
                result.bic,
                m.missing_pct,
                m.extra_pct,
                result.total_seconds()
            );
        }
    }
    Ok(())
}
