//! d-separation queries and minimum separators on the Asia structure.

use mecip::graph::{d_separated, min_d_separator};
use mecip::network::read_bif;

fn main() -> mecip::Result<()> {
    let net = read_bif(concat!(env!("CARGO_MANIFEST_DIR"), "/networks/asia.bif"))?;
    let dag = net.dag();
    let idx = |n: &str| net.var_index(n).expect("asia variable");
    let show = |vs: &[usize]| vs.iter().map(|&v| net.names()[v].as_str()).collect::<Vec<_>>().join(",");

    for (x, y, z) in
        [("asia", "smoke", vec![]), ("tub", "lung", vec![]), ("tub", "lung", vec!["either"]), ("asia", "dysp", vec!["either", "bronc"])]
    {
        let zs: Vec<usize> = z.iter().map(|n| idx(n)).collect();
        println!("{x} _||_ {y} | {{{}}}: {}", show(&zs), d_separated(&dag, idx(x), idx(y), &zs)?);
    }
    for (x, y) in [("asia", "xray"), ("smoke", "dysp"), ("tub", "bronc")] {
        match min_d_separator(&dag, idx(x), idx(y))? {
            Some(s) => println!("minimum separator of {x}, {y}: {{{}}}", show(&s)),
            None => println!("{x} and {y} are adjacent"),
        }
    }
    Ok(())
}
