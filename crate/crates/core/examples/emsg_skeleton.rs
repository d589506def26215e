//! Builds the initial undirected skeleton for Child: pairwise tests, the
//! extended maximal spanning graph, then the significance filter.

use mecip::emsg::{build_emsg, pairwise_tests, significance_filter};
use mecip::network::{forward_sample, read_bif};
use mecip::pipeline::structural_metrics;

fn main() -> mecip::Result<()> {
    let net = read_bif(concat!(env!("CARGO_MANIFEST_DIR"), "/networks/child.bif"))?;
    let data = forward_sample(&net, 5000, 11)?;

    let weights = pairwise_tests(&data)?;
    let emsg = build_emsg(data.n_vars(), &weights)?;
    let skeleton = significance_filter(&emsg, &weights, 0.05)?;

    for (name, g) in [("spanning graph", &emsg), ("filtered", &skeleton)] {
        let m = structural_metrics(&net, g)?;
        println!("{name:<15} {:>3} edges  missing {:.3}  extra {:.3}", g.edge_count(), m.missing_pct, m.extra_pct);
    }
    Ok(())
}
