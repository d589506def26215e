//! Equivalence classes of a few small DAGs and a consistent extension of
//! each class.

use mecip::graph::{consistent_extension, cpdag_of, immoralities, PartiallyDirectedGraph};

fn main() -> mecip::Result<()> {
    let names: Vec<String> = ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect();
    let cases: [(&str, &[(usize, usize)]); 3] =
        [("chain", &[(0, 1), (1, 2), (2, 3)]), ("collider", &[(0, 2), (1, 2), (2, 3)]), ("diamond", &[(0, 1), (0, 2), (1, 3), (2, 3)])];
    for (label, edges) in cases {
        let dag = PartiallyDirectedGraph::from_directed(4, edges)?;
        let cpdag = cpdag_of(&dag)?;
        println!("== {label}: {} immoralities", immoralities(&dag).len());
        print!("{}", cpdag.to_edge_list(&names));
        println!("-- extension");
        print!("{}", consistent_extension(&cpdag)?.to_edge_list(&names));
    }
    Ok(())
}
